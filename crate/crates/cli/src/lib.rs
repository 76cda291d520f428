//! Front end for the `dunkl-spectral` binary: config schema, run manifests
//! and the subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod manifest;
