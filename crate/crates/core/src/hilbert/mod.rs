//! The Kramers-Kronig pair `re = H[im]`, `im = -H[re]` with
//! `H g(w) = (1/pi) P int g(nu) / (nu - w) dnu`, computed by a
//! principal-value engine and an FFT engine, plus consistency reports.

mod check;
mod grid;
mod pv;
mod spectral;
mod tail;

pub use check::{
    convolution_form_residual, kk_check, kk_check_with, negative_control_spectrum, reconstruct,
    spectrum_from_signal, Engine, KkReport, KkVerdict, Reconstruction, Thresholds,
};
pub use grid::{FrequencyGrid, Spectrum, TailModel};
pub use pv::{pv_hilbert, pv_hilbert_fn};
pub use spectral::{spectral_hilbert, spectral_hilbert_at, tukey_window, Direction, SpectralOptions};
pub use tail::TailFit;
