//! Continuous wavelet analysis on the 2-torus.
//!
//! Signals live on `(-π, π]²`. Dilations act through the conformal
//! (Möbius) group of each circle factor, translations are rotations, and
//! a second family of wavelets is generated by `SL(2, Z)` acting on angles.
//!
//! Module overview:
//!
//! * [`torus`]: grids, sampled signals, Fourier coefficients.
//! * [`conformal`]: angle dilation, its multiplier, atoms, modular resampling.
//! * [`wavelets`]: difference-of-Gaussians mothers and their torus lifts.
//! * [`dilation`]: Fourier coefficients of dilated wavelets.
//! * [`admissibility`]: admissibility integrals and frame-bound spectra.
//! * [`modular`]: exact integer arithmetic in `SL(2, Z)` and index orbits.
//! * [`modular_frames`]: band-limited frame bounds for modular families.
//! * [`cwt`]: analysis and dual synthesis on discretised parameter grids.
//! * [`io`]: CSV / JSON formats.

pub mod admissibility;
pub mod conformal;
pub mod cwt;
pub mod dilation;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod modular;
pub mod modular_frames;
pub mod quadrature;
pub mod torus;
pub mod wavelets;

pub use error::{Error, Result};
pub use num_complex::Complex64;
