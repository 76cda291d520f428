//! CSV and JSON exports. Floats are written with 17 significant digits, so
//! every value survives a write/read round trip.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dunkl::{
    DunklParams, GridSpec, LineProfile, RadialGrid, RadialProfile, SpectralProfile,
};
use crate::error::{Error, Result};
use crate::maximal::TimeField;
use crate::multiplier::KernelEvalResult;
use crate::probe::{ProbeReport, Verdict};
use crate::wave::WaveState;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(format_err)
}

/// Metadata for a radial profile CSV: enough to rebuild its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEnvelope {
    pub gamma_k: f64,
    pub n: u32,
    pub r_max: f64,
    pub count: usize,
    pub panel: f64,
    pub columns: Vec<String>,
}

impl ProfileEnvelope {
    pub fn new(params: DunklParams, spec: GridSpec) -> Self {
        Self {
            gamma_k: params.gamma_k(),
            n: params.n(),
            r_max: spec.r_max,
            count: spec.count,
            panel: spec.panel,
            columns: ["r", "re", "im"].map(String::from).to_vec(),
        }
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        let params = DunklParams::new(self.gamma_k, self.n)?;
        RadialGrid::new(
            params,
            GridSpec {
                r_max: self.r_max,
                count: self.count,
                panel: self.panel,
            },
        )
    }
}

fn write_samples<W: Write>(
    w: W,
    abscissa: &str,
    nodes: &[f64],
    values: &[Complex64],
) -> Result<()> {
    let mut out = writer(w);
    out.write_record([abscissa, "re", "im"])
        .map_err(format_err)?;
    for (x, v) in nodes.iter().zip(values) {
        out.write_record([fmt_f64(*x), fmt_f64(v.re), fmt_f64(v.im)])
            .map_err(format_err)?;
    }
    finish(out)
}

/// Columns `(r, re, im)`.
pub fn write_profile_csv<W: Write>(w: W, f: &RadialProfile) -> Result<()> {
    write_samples(w, "r", f.grid().points(), f.values())
}

/// Columns `(x, re, im)` over the signed line nodes.
pub fn write_line_profile_csv<W: Write>(w: W, f: &LineProfile) -> Result<()> {
    write_samples(w, "x", f.grid().points(), f.values())
}

/// Reads `(r, re, im)` rows back onto `grid`; the abscissae must match it.
pub fn read_profile_csv<R: Read>(r: R, grid: &RadialGrid) -> Result<RadialProfile> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut values = Vec::with_capacity(grid.len());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(format_err)?;
        let num = |j: usize| -> Result<f64> {
            rec.get(j)
                .ok_or_else(|| Error::Format(format!("row {i}: missing column {j}")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("row {i}, column {j}: {e}")))
        };
        let r = num(0)?;
        match grid.points().get(i) {
            Some(&node) if (node - r).abs() <= 1e-12 * (1.0 + node) => {}
            _ => {
                return Err(Error::Format(format!(
                    "row {i}: abscissa {r} does not match the grid"
                )))
            }
        }
        values.push(Complex64::new(num(1)?, num(2)?));
    }
    RadialProfile::new(grid.clone(), values)
}

/// Columns `(x, re, im, method, N)`.
pub fn write_kernel_csv<W: Write>(w: W, k: &KernelEvalResult) -> Result<()> {
    let method = serde_json::to_value(k.method).map_err(format_err)?;
    let method = method.as_str().unwrap_or_default().to_string();
    let mut out = writer(w);
    out.write_record(["x", "re", "im", "method", "N"])
        .map_err(format_err)?;
    for (x, v) in k.x_points.iter().zip(&k.values) {
        out.write_record([
            fmt_f64(*x),
            fmt_f64(v.re),
            fmt_f64(v.im),
            method.clone(),
            k.n_terms.to_string(),
        ])
        .map_err(format_err)?;
    }
    finish(out)
}

/// Columns `(t, x, re_u, im_u)`, one block of rows per state.
pub fn write_wave_csv<W: Write, P: SpectralProfile>(w: W, states: &[WaveState<P>]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "x", "re_u", "im_u"])
        .map_err(format_err)?;
    for s in states {
        for (x, v) in s.u.nodes().iter().zip(s.u.samples()) {
            out.write_record([fmt_f64(s.t), fmt_f64(*x), fmt_f64(v.re), fmt_f64(v.im)])
                .map_err(format_err)?;
        }
    }
    finish(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub t: f64,
    pub energy: f64,
}

/// Columns `(x, t, abs)` of a time field.
pub fn write_field_csv<W: Write, P: SpectralProfile>(w: W, field: &TimeField<P>) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["x", "t", "abs"]).map_err(format_err)?;
    for (ti, (t, slice)) in field.t_points.iter().zip(&field.slices).enumerate() {
        for (xi, x) in slice.nodes().iter().enumerate() {
            out.write_record([
                fmt_f64(*x),
                fmt_f64(*t),
                fmt_f64(field.value(xi, ti).norm()),
            ])
            .map_err(format_err)?;
        }
    }
    finish(out)
}

/// Columns `(x, sup)`.
pub fn write_sup_csv<W: Write, P: SpectralProfile>(w: W, sup: &P) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["x", "sup"]).map_err(format_err)?;
    for (x, v) in sup.nodes().iter().zip(sup.samples()) {
        out.write_record([fmt_f64(*x), fmt_f64(v.norm())])
            .map_err(format_err)?;
    }
    finish(out)
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// One row per grid point: position, lines, fitted slopes and verdicts.
pub fn write_probe_csv<W: Write>(w: W, report: &ProbeReport) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "inv_p",
        "alpha",
        "line",
        "exponent",
        "theta",
        "slope",
        "stderr",
        "local_slope",
        "stabilized",
        "verdict",
        "alternative",
    ])
    .map_err(format_err)?;
    for q in &report.points {
        out.write_record([
            fmt_f64(q.inv_p),
            fmt_f64(q.alpha),
            opt(q.line),
            opt(q.exponent),
            opt(q.theta),
            fmt_f64(q.fit.slope),
            fmt_f64(q.fit.stderr),
            fmt_f64(q.sums.local_slope),
            q.sums.stabilized().to_string(),
            verdict_name(q.verdict),
            q.alternative.map(verdict_name).unwrap_or_default(),
        ])
        .map_err(format_err)?;
    }
    finish(out)
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(w, value).map_err(format_err)
}
