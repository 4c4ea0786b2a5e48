//! Vertical-line (Mellin-Barnes) quadrature: truncated trapezoid rules on one
//! or two contours with the ds/(2 pi i) normalization, plus separable grids
//! that cache integrand samples so many torus points reuse one gamma-product
//! evaluation.
//!
//! The integrands in this crate are analytic in a strip around the contour
//! and decay exponentially (gamma products), so the equally-spaced trapezoid
//! rule converges geometrically in 1/h; the height is chosen so the
//! truncated tail sits below the requested tolerance, and the tail is always
//! estimated from the outermost samples and reported.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Placement of the integration lines.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    /// Real part of each integration variable's vertical line.
    pub re_parts: Vec<f64>,
    /// Truncation of |Im s|.
    pub height: f64,
    /// Node count per variable (trapezoid, endpoints included).
    pub nodes: usize,
    /// Relative tolerance target; the tail estimate is tested against it.
    pub rel_tol: f64,
}

impl ContourSpec {
    pub fn line(re: f64, height: f64, nodes: usize, rel_tol: f64) -> Self {
        let c = ContourSpec {
            re_parts: vec![re],
            height,
            nodes,
            rel_tol,
        };
        c.validate();
        c
    }

    pub fn plane(re1: f64, re2: f64, height: f64, nodes: usize, rel_tol: f64) -> Self {
        let c = ContourSpec {
            re_parts: vec![re1, re2],
            height,
            nodes,
            rel_tol,
        };
        c.validate();
        c
    }

    fn validate(&self) {
        assert!(self.height > 0.0, "contour height must be positive");
        assert!(self.nodes >= 16, "need at least 16 nodes");
        assert!(self.rel_tol > 0.0, "rel_tol must be positive");
    }

    /// Default truncation height for gamma-product integrands: generous
    /// Stirling-decay margin per decade of tolerance plus spectral width.
    pub fn default_height(rel_tol: f64, max_im_mu: f64) -> f64 {
        (10.0 * (1.0 / rel_tol).log10() + 2.0 * max_im_mu).max(30.0)
    }

    /// Minimum admissible pole distance for this contour.
    pub fn pole_clearance(&self) -> f64 {
        1e-8
    }

    pub fn with_re(&self, re: f64) -> Self {
        let mut c = self.clone();
        for r in &mut c.re_parts {
            *r = re;
        }
        c
    }

    /// Trapezoid abscissae and step on line `k`.
    pub fn axis(&self, k: usize) -> (Vec<Complex64>, f64) {
        let n = self.nodes;
        let h = 2.0 * self.height / (n - 1) as f64;
        let re = self.re_parts[k];
        let s = (0..n)
            .map(|i| Complex64::new(re, -self.height + i as f64 * h))
            .collect();
        (s, h)
    }
}

fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// Estimate the omitted tail of a truncated line integral from the decay of
/// the outermost samples. `mags[i]` are |f| at the nodes, `h` the step.
fn tail_estimate(mags: &[f64], h: f64) -> f64 {
    let n = mags.len();
    let block = (n / 20).max(4);
    let mut est = 0.0;
    for side in 0..2 {
        let (outer, inner): (&[f64], &[f64]) = if side == 0 {
            (&mags[..block], &mags[block..2 * block])
        } else {
            (&mags[n - block..], &mags[n - 2 * block..n - block])
        };
        let m_out = outer.iter().cloned().fold(0.0, f64::max);
        let m_in = inner.iter().cloned().fold(0.0, f64::max);
        if m_out == 0.0 {
            continue;
        }
        // per-node decay ratio across one block
        let r = (m_out / m_in.max(f64::MIN_POSITIVE)).powf(1.0 / block as f64);
        if r >= 0.999 {
            return f64::INFINITY;
        }
        est += h * m_out * r / (1.0 - r);
    }
    est
}

/// Integral of f over the truncated vertical line Re s = re_parts[0],
/// normalized by ds/(2 pi i).
pub fn integrate_line<F>(f: &F, ctl: &ContourSpec) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let (s, h) = ctl.axis(0);
    let n = s.len();
    let vals: Vec<Complex64> = s.par_iter().map(|&z| f(z)).collect();
    for (&v, &z) in vals.iter().zip(&s) {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(z));
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &v) in vals.iter().enumerate() {
        acc += v * trapezoid_weight(i, n);
    }
    let value = acc * h / (2.0 * PI);
    let mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    let tail = tail_estimate(&mags, h) / (2.0 * PI);
    let scale = value.norm().max(h * mags.iter().sum::<f64>() / (2.0 * PI));
    if !(tail <= ctl.rel_tol * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::TailTooLarge {
            estimate: tail,
            budget: ctl.rel_tol * scale,
        });
    }
    Ok(value)
}

/// Cached samples of a two-variable integrand on the tensor contour grid.
/// The stored values carry the trapezoid weights and the ds/(2 pi i)^2
/// normalization, so an evaluation against power factors is a plain
/// weighted sum.
#[derive(Debug, Clone)]
pub struct IntegrandGrid {
    pub s1: Vec<Complex64>,
    pub s2: Vec<Complex64>,
    /// Row-major values[j*n2 + k] = f(s1[j], s2[k]) * w_j * w_k * (h/2pi)^2.
    pub values: Vec<Complex64>,
    pub rel_tol: f64,
    /// Worst-frame magnitude ratio, recorded for tail reporting.
    pub edge_ratio: f64,
}

/// Sample f on the tensor grid of `ctl` (which must have two lines).
pub fn build_grid<F>(f: &F, ctl: &ContourSpec) -> Result<IntegrandGrid>
where
    F: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    assert_eq!(ctl.re_parts.len(), 2, "build_grid needs a two-line contour");
    let (s1, h1) = ctl.axis(0);
    let (s2, h2) = ctl.axis(1);
    let n1 = s1.len();
    let n2 = s2.len();
    let norm = h1 * h2 / (4.0 * PI * PI);
    let values: Vec<Complex64> = (0..n1)
        .into_par_iter()
        .flat_map_iter(|j| {
            let w1 = trapezoid_weight(j, n1) * norm;
            let z1 = s1[j];
            let s2v = s2.clone();
            (0..n2).map(move |k| f(z1, s2v[k]) * (w1 * trapezoid_weight(k, n2)))
        })
        .collect();
    for (idx, v) in values.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(Complex64::new(
                (idx / n2) as f64,
                (idx % n2) as f64,
            )));
        }
    }
    // edge-frame to interior magnitude ratio as a crude truncation diagnostic
    let mag = |j: usize, k: usize| values[j * n2 + k].norm();
    let mut edge: f64 = 0.0;
    for j in 0..n1 {
        edge = edge.max(mag(j, 0)).max(mag(j, n2 - 1));
    }
    for k in 0..n2 {
        edge = edge.max(mag(0, k)).max(mag(n1 - 1, k));
    }
    let interior = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(IntegrandGrid {
        s1,
        s2,
        values,
        rel_tol: ctl.rel_tol,
        edge_ratio: if interior > 0.0 { edge / interior } else { 0.0 },
    })
}

/// Weighted sum of the cached grid against y1^{1-s1} y2^{1-s2}; requires
/// y1, y2 > 0. Cost is one complex multiply-add per node, no gamma calls.
pub fn eval_powers(grid: &IntegrandGrid, y1: f64, y2: f64) -> Complex64 {
    debug_assert!(y1 > 0.0 && y2 > 0.0);
    let l1 = y1.ln();
    let l2 = y2.ln();
    let p1: Vec<Complex64> = grid.s1.iter().map(|&s| ((1.0 - s) * l1).exp()).collect();
    let p2: Vec<Complex64> = grid.s2.iter().map(|&s| ((1.0 - s) * l2).exp()).collect();
    eval_powers_pre(grid, &p1, &p2)
}

/// Same as [`eval_powers`] with the power vectors already formed.
pub fn eval_powers_pre(grid: &IntegrandGrid, p1: &[Complex64], p2: &[Complex64]) -> Complex64 {
    let n2 = grid.s2.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &a) in p1.iter().enumerate() {
        let row = &grid.values[j * n2..(j + 1) * n2];
        let mut inner = Complex64::new(0.0, 0.0);
        for (v, &b) in row.iter().zip(p2) {
            inner += v * b;
        }
        acc += a * inner;
    }
    acc
}

/// Plain tensor-product integral of f over two truncated vertical lines with
/// ds/(2 pi i)^2 normalization.
pub fn integrate_plane<F>(f: &F, ctl: &ContourSpec) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    let grid = build_grid(f, ctl)?;
    let value: Complex64 = grid.values.iter().sum();
    if grid.edge_ratio > ctl.rel_tol {
        return Err(Error::TailTooLarge {
            estimate: grid.edge_ratio,
            budget: ctl.rel_tol,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexgamma::log_gamma_unchecked;
    use num_complex::Complex64 as C;

    #[test]
    fn mellin_inversion_of_exponential() {
        // int Gamma(s) y^{-s} ds/(2 pi i) on Re s = 1 equals e^{-y}
        let ctl = ContourSpec::line(1.0, 40.0, 801, 1e-12);
        for y in [1.0f64, 2.5] {
            let f = move |s: C| (log_gamma_unchecked(s) - s * y.ln()).exp();
            let v = integrate_line(&f, &ctl).unwrap();
            assert!(
                (v - (-y).exp()).norm() < 1e-12,
                "y={y}: {v} vs {}",
                (-y).exp()
            );
        }
    }

    #[test]
    fn reflection_product_integrates() {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s) decays like e^{-pi |t|} on
        // Re s = 1/2, so the truncated integral converges; its value is 1/2.
        let ctl = ContourSpec::line(0.5, 30.0, 601, 1e-10);
        let f = |s: C| (log_gamma_unchecked(s) + log_gamma_unchecked(1.0 - s)).exp();
        let v = integrate_line(&f, &ctl).unwrap();
        assert!((v - 0.5).norm() < 1e-10, "{v}");
    }

    #[test]
    fn non_decaying_integrand_rejected() {
        let ctl = ContourSpec::line(0.5, 30.0, 601, 1e-8);
        let f = |_s: C| C::new(1.0, 0.0);
        assert!(matches!(
            integrate_line(&f, &ctl),
            Err(Error::TailTooLarge { .. })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let ctl = ContourSpec::line(0.5, 30.0, 601, 1e-8);
        let f = |s: C| if s.im.abs() < 1.0 { C::new(f64::NAN, 0.0) } else { C::new(0.0, 0.0) };
        assert!(matches!(integrate_line(&f, &ctl), Err(Error::NonFinite(_))));
    }

    #[test]
    fn linearity() {
        let ctl = ContourSpec::line(0.5, 35.0, 701, 1e-10);
        let f = |s: C| (log_gamma_unchecked(s) + log_gamma_unchecked(1.0 - s)).exp();
        let g = |s: C| (log_gamma_unchecked(0.7 + s) + log_gamma_unchecked(0.9 - s)).exp();
        let (a, b) = (C::new(1.3, -0.2), C::new(0.4, 2.0));
        let lhs = integrate_line(&|s| a * f(s) + b * g(s), &ctl).unwrap();
        let rhs = a * integrate_line(&f, &ctl).unwrap() + b * integrate_line(&g, &ctl).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn contour_shift_independence_on_barnes_integrand() {
        // no poles of Gamma(1/2+s)^2 Gamma(1/2-s)^2 between Re s = -0.2 and 0.2
        let f = |s: C| {
            (2.0 * log_gamma_unchecked(C::new(0.5, 0.0) + s)
                + 2.0 * log_gamma_unchecked(C::new(0.5, 0.0) - s))
            .exp()
        };
        let a = integrate_line(&f, &ContourSpec::line(-0.2, 35.0, 701, 1e-10)).unwrap();
        let b = integrate_line(&f, &ContourSpec::line(0.2, 35.0, 701, 1e-10)).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm());
    }

    #[test]
    fn plane_separable_equals_product_of_lines() {
        let ctl2 = ContourSpec::plane(1.0, 0.5, 35.0, 701, 1e-10);
        let ctl_a = ContourSpec::line(1.0, 35.0, 701, 1e-10);
        let ctl_b = ContourSpec::line(0.5, 35.0, 701, 1e-10);
        let g = |s: C| (log_gamma_unchecked(s) - s * 2.0f64.ln()).exp();
        let h = |s: C| (log_gamma_unchecked(s) + log_gamma_unchecked(1.0 - s)).exp();
        let joint = integrate_plane(&|s1: C, s2: C| g(s1) * h(s2), &ctl2).unwrap();
        let prod =
            integrate_line(&g, &ctl_a).unwrap() * integrate_line(&h, &ctl_b).unwrap();
        assert!((joint - prod).norm() < 1e-12 * prod.norm().max(1e-30), "{joint} {prod}");
    }

    #[test]
    fn zero_function_integrates_to_zero() {
        let ctl = ContourSpec::plane(0.5, 0.5, 30.0, 301, 1e-6);
        let v = integrate_plane(&|_, _| C::new(0.0, 0.0), &ctl).unwrap();
        assert_eq!(v, C::new(0.0, 0.0));
    }

    #[test]
    fn eval_powers_at_unit_point_is_plain_sum() {
        let ctl = ContourSpec::plane(0.75, 0.75, 25.0, 201, 1e-6);
        let f = |s1: C, s2: C| {
            (log_gamma_unchecked(s1) + log_gamma_unchecked(s2) + log_gamma_unchecked(1.0 - s1)
                + log_gamma_unchecked(1.0 - s2))
            .exp()
        };
        let grid = build_grid(&f, &ctl).unwrap();
        let direct: C = grid.values.iter().sum();
        let via = eval_powers(&grid, 1.0, 1.0);
        assert!((direct - via).norm() < 1e-14 * direct.norm());
    }

    #[test]
    fn grid_convergence_under_node_doubling() {
        let f = |s1: C, s2: C| {
            (log_gamma_unchecked(s1) + log_gamma_unchecked(s2) + log_gamma_unchecked(1.2 - s1)
                + log_gamma_unchecked(1.4 - s2))
            .exp()
        };
        let coarse = build_grid(&f, &ContourSpec::plane(0.6, 0.6, 30.0, 301, 1e-8)).unwrap();
        let fine = build_grid(&f, &ContourSpec::plane(0.6, 0.6, 30.0, 601, 1e-8)).unwrap();
        let y = (0.8, 1.3);
        let a = eval_powers(&coarse, y.0, y.1);
        let b = eval_powers(&fine, y.0, y.1);
        assert!((a - b).norm() < 1e-7 * b.norm(), "{a} {b}");
    }
}
