//! Rank-two (GL(3)) weight-one harmonic-analysis toolkit: completed
//! Whittaker vectors from two-variable Mellin-Barnes integrals, the
//! archimedean Rankin-Selberg zeta integral in closed and numeric form,
//! spectral measures, Kontorovich-Lebedev inversion, SL(3,Z) Kloosterman
//! sums, Kuznetsov-type kernel functions, and the Weyl-law main-term
//! integrals — every identity cross-checked by at least two independent
//! computational routes.
//!
//! The library is organized so each module owns one layer of the tower:
//!
//! - [`complexgamma`]: complex log-gamma and the Barnes lemmas;
//! - [`mellin`]: contour quadrature and separable integrand grids;
//! - [`whittaker`]: the completed Whittaker vector, its gamma kernels and
//!   first-term asymptotics;
//! - [`stade`]: the inner-product formula and the three spectral measures;
//! - [`kloosterman`]: exact exponential sums and bound audits;
//! - [`kernels`]: power-series and Mellin-Barnes kernel functions with the
//!   cross-check propositions and spectral transforms;
//! - [`kltransform`]: the inversion pair and its residue shortcut;
//! - [`weyl`]: main-term integrals, error functionals, smoothed indicators;
//! - [`acceptance`]: the end-to-end verification suite behind `verify-all`.

pub mod acceptance;
pub mod complexgamma;
pub mod error;
pub mod kernels;
pub mod kloosterman;
pub mod kltransform;
pub mod mellin;
pub mod report;
pub mod spectrum;
pub mod stade;
pub mod weyl;
pub mod whittaker;

pub use error::{Error, Result};
