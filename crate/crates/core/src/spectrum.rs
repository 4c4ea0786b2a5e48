//! Shared tempered-spectrum quadrature.
//!
//! Integrals over the tempered line Re(mu) = 0 are parameterized by the two
//! imaginary parts (x1, x2). The measure d(mu) = d(mu1) d(mu2) as a product
//! of complex differentials equals (i dx1)(i dx2) = -dx1 dx2, and the
//! inversion identity additionally pins a global factor 1/2 (it makes the
//! transform pair invert exactly and makes the non-symmetric variant come
//! out as the half-sum of the two Weyl copies). All spectral integrals in
//! the crate go through this one constant so the convention lives in a
//! single place.

use crate::whittaker::SpectralParameter;
use num_complex::Complex64;
use rayon::prelude::*;

/// d(mu) per unit dx1 dx2 on the tempered line.
pub const SPECTRAL_MEASURE_PER_DX: f64 = -0.5;

/// Equally spaced 2D quadrature over the box |x1| <= b1, |x2| <= b2 with the
/// spectral measure folded in. `stagger` offsets the x2 grid by half a step
/// so integrands with removable singularities on the diagonal x1 = x2 are
/// never sampled there. Evaluation order is fixed (row-major) and the
/// parallel reduction preserves it, so results are bitwise reproducible
/// across thread counts.
pub fn spectral_box_integral<F>(b1: f64, b2: f64, n1: usize, n2: usize, stagger: bool, f: F) -> Complex64
where
    F: Fn(&SpectralParameter) -> Complex64 + Sync,
{
    let h1 = 2.0 * b1 / (n1 - 1) as f64;
    let h2 = 2.0 * b2 / (n2 - 1) as f64;
    let off = if stagger { 0.5 * h2 } else { 0.0 };
    let rows: Vec<Complex64> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let x1 = -b1 + i as f64 * h1;
            let wi = if i == 0 || i == n1 - 1 { 0.5 } else { 1.0 };
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n2 {
                let x2 = -b2 + j as f64 * h2 + off;
                let wj = if j == 0 || j == n2 - 1 { 0.5 } else { 1.0 };
                acc += f(&SpectralParameter::tempered(x1, x2)) * (wi * wj);
            }
            acc
        })
        .collect();
    let sum: Complex64 = rows.iter().sum();
    sum * h1 * h2 * SPECTRAL_MEASURE_PER_DX
}

/// Absolute-measure variant |d(mu)| = dx1 dx2 (no sign, no half), used by
/// the error functionals which are integrals of absolute values.
pub fn absolute_box_integral<F>(s: [f64; 3], b1: f64, b2: f64, n1: usize, n2: usize, f: F) -> f64
where
    F: Fn(&SpectralParameter) -> f64 + Sync,
{
    let h1 = 2.0 * b1 / (n1 - 1) as f64;
    let h2 = 2.0 * b2 / (n2 - 1) as f64;
    let rows: Vec<f64> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let x1 = -b1 + i as f64 * h1;
            let wi = if i == 0 || i == n1 - 1 { 0.5 } else { 1.0 };
            let mut acc = 0.0;
            for j in 0..n2 {
                let x2 = -b2 + j as f64 * h2;
                let wj = if j == 0 || j == n2 - 1 { 0.5 } else { 1.0 };
                let mu = SpectralParameter::from_coords([
                    Complex64::new(s[0], x1),
                    Complex64::new(s[1], x2),
                    Complex64::new(s[2], -x1 - x2),
                ])
                .expect("shift must sum to zero");
                acc += f(&mu) * wi * wj;
            }
            acc
        })
        .collect();
    rows.iter().sum::<f64>() * h1 * h2
}
