//! Oscillating symbols and their dyadic pieces, the multiplier operator, and
//! the kernel computed by dyadic quadrature and by the Bessel expansion.

mod kernel;
mod lemmas;
mod symbol;

pub use kernel::{
    block_bound, blowup_fit, kernel_asymptotic, kernel_asymptotic_signed, kernel_block,
    kernel_profile, kernel_quadrature, kernel_quadrature_signed, profile_integral, regime_window,
    BlowupFit, KernelEvalResult, KernelMethod, KernelValue, COLLAR, NU_MAX_DEFAULT, N_DEFAULT,
};
pub use lemmas::{lemma22_functions, Lemma22};
pub use symbol::{apply_t, eval_symbol, sinc, symbol_sup, Sign, SymbolKind, SymbolSpec};
