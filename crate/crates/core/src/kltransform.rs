//! The inversion transform pair on the positive torus and the residue
//! shortcut that verifies it.
//!
//! The pair expands functions over completed Whittaker vectors against the
//! inversion measure sinmu1. The full round trip is a four-fold nested
//! integral; the shortcut replaces the torus integral by the closed
//! inner-product formula, reducing the verification to a two-variable
//! spectral integral whose epsilon -> 0 limit recovers the test function.
//! That integral concentrates on epsilon-width lines as epsilon shrinks, so
//! it is evaluated by a contour-shift decomposition: one smooth shifted 2D
//! integral, two 1D line-residue integrals, and two point residues (the
//! remaining double residues vanish identically because the inversion
//! measure is zero on the diagonal). Each piece uses only the closed
//! inner-product formula; a direct graded 2D quadrature cross-checks the
//! decomposition at moderate epsilon in the tests.

use crate::complexgamma::log_gamma_unchecked;
use crate::error::{Error, Result};
use crate::mellin::ContourSpec;
use crate::spectrum::SPECTRAL_MEASURE_PER_DX;
use crate::stade::{psi1_closed, sinmu1, StadeParams};
use crate::whittaker::{weyl_act, SpectralParameter, TorusPoint, W1Grid, WeylElement, WhittakerVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// A spectral test function with a decay certificate.
#[derive(Clone)]
pub struct TestFunction {
    eval: Arc<dyn Fn(&SpectralParameter) -> Complex64 + Send + Sync>,
    /// Box half-widths in (Im mu1, Im mu2) beyond which |F| < tail_tol.
    decay_box: (f64, f64),
    /// Declared symmetry under the swap of the first two coordinates.
    symmetric: bool,
}

impl TestFunction {
    pub fn from_closure<F>(f: F, half_width: f64, symmetric: bool) -> Self
    where
        F: Fn(&SpectralParameter) -> Complex64 + Send + Sync + 'static,
    {
        TestFunction {
            eval: Arc::new(f),
            decay_box: (half_width, half_width),
            symmetric,
        }
    }

    /// exp(scale * (mu1^2 + mu2^2 + mu3^2)): entire, Schwartz on every
    /// vertical tube, invariant under all coordinate permutations.
    pub fn gaussian(scale: f64) -> Self {
        let half_width = (38.0 / scale).sqrt();
        TestFunction {
            eval: Arc::new(move |mu: &SpectralParameter| {
                let s = mu.mu(0) * mu.mu(0) + mu.mu(1) * mu.mu(1) + mu.mu(2) * mu.mu(2);
                (scale * s).exp()
            }),
            decay_box: (half_width, half_width),
            symmetric: true,
        }
    }

    /// Same Gaussian centered at a tempered point and symmetrized.
    pub fn gaussian_at(scale: f64, x1: f64, x2: f64) -> Self {
        let center = SpectralParameter::tempered(x1, x2);
        let half_width = (38.0 / scale).sqrt() + x1.abs().max(x2.abs());
        TestFunction {
            eval: Arc::new(move |mu: &SpectralParameter| {
                let mut tot = Complex64::new(0.0, 0.0);
                for w in [WeylElement::I, WeylElement::W2] {
                    let m = weyl_act(w, mu);
                    let mut s = Complex64::new(0.0, 0.0);
                    for i in 0..3 {
                        let d = m.mu(i) - center.mu(i);
                        s += d * d;
                    }
                    tot += (scale * s).exp();
                }
                tot
            }),
            decay_box: (half_width, half_width),
            symmetric: true,
        }
    }

    pub fn eval(&self, mu: &SpectralParameter) -> Complex64 {
        (self.eval)(mu)
    }

    pub fn decay_box(&self) -> (f64, f64) {
        self.decay_box
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Sample-based check of the declared swap symmetry.
    pub fn verify_symmetry(&self, seed: u64) -> bool {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let x1 = rng.random_range(-2.0..2.0);
            let x2 = rng.random_range(-2.0..2.0);
            let mu = SpectralParameter::tempered(x1, x2);
            let a = self.eval(&mu);
            let b = self.eval(&weyl_act(WeylElement::W2, &mu));
            if (a - b).norm() > 1e-12 * a.norm().max(1e-12) {
                return false;
            }
        }
        true
    }
}

/// Mu-independent denominator samples on the shared sum lattice of the
/// contour grid; building them once makes the per-mu kernel assembly pure
/// exponentials.
pub struct DenLattice {
    den2: Vec<Complex64>,
    den3: Vec<Complex64>,
}

impl DenLattice {
    pub fn build(ctl: &ContourSpec) -> DenLattice {
        let sigma = ctl.re_parts[0];
        let n = ctl.nodes;
        let h = 2.0 * ctl.height / (n - 1) as f64;
        let t0 = -2.0 * ctl.height;
        let mut den2 = Vec::with_capacity(2 * n - 1);
        let mut den3 = Vec::with_capacity(2 * n - 1);
        for m in 0..2 * n - 1 {
            let ss = Complex64::new(2.0 * sigma, t0 + m as f64 * h);
            den2.push(log_gamma_unchecked(ss / 2.0));
            den3.push(log_gamma_unchecked((ss + 1.0) / 2.0));
        }
        DenLattice { den2, den3 }
    }
}

/// Spectral synthesis: the tempered integral of F(mu) W*(y, mu) sinmu1(mu)
/// against the inversion measure, componentwise.
pub fn f_flat(
    f: &TestFunction,
    y: &TorusPoint,
    ctl: &ContourSpec,
    spectral_nodes: usize,
) -> Result<WhittakerVector> {
    if !y.is_positive() {
        return Err(Error::Precondition(
            "synthesis is evaluated on the positive torus".into(),
        ));
    }
    let (b1, b2) = f.decay_box();
    let n = spectral_nodes;
    let h1 = 2.0 * b1 / (n - 1) as f64;
    let h2 = 2.0 * b2 / (n - 1) as f64;
    let den = DenLattice::build(ctl);
    let rows: Vec<WhittakerVector> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x1 = -b1 + i as f64 * h1;
            let wi = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            let mut acc = WhittakerVector::zero();
            for j in 0..n {
                let x2 = -b2 + j as f64 * h2;
                let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                let mu = SpectralParameter::tempered(x1, x2);
                let w = whittaker_on_grid(y, &mu, ctl, &den);
                let weight = f.eval(&mu) * sinmu1(&mu) * (wi * wj);
                acc = acc.add(&w.scale(weight));
            }
            acc
        })
        .collect();
    let mut total = WhittakerVector::zero();
    for r in rows {
        total = total.add(&r);
    }
    Ok(total.scale(Complex64::new(h1 * h2 * SPECTRAL_MEASURE_PER_DX, 0.0)))
}

/// Single Whittaker evaluation against a fixed torus point with the shared
/// denominator lattice: 12 n gamma calls plus an n^2 exponential assembly.
fn whittaker_on_grid(
    y: &TorusPoint,
    mu: &SpectralParameter,
    ctl: &ContourSpec,
    den: &DenLattice,
) -> WhittakerVector {
    let sigma = ctl.re_parts[0];
    let n = ctl.nodes;
    let h = 2.0 * ctl.height / (n - 1) as f64;
    let l1 = (PI * y.y1).ln();
    let l2 = (PI * y.y2).ln();
    let mut a110 = Vec::with_capacity(n);
    let mut a001 = Vec::with_capacity(n);
    let mut b001 = Vec::with_capacity(n);
    let mut b110 = Vec::with_capacity(n);
    let mut p1 = Vec::with_capacity(n);
    let mut p2 = Vec::with_capacity(n);
    for k in 0..n {
        let s = Complex64::new(sigma, -ctl.height + k as f64 * h);
        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        a110.push(
            log_gamma_unchecked((1.0 + s - mu.mu(0)) / 2.0)
                + log_gamma_unchecked((1.0 + s - mu.mu(1)) / 2.0)
                + log_gamma_unchecked((s - mu.mu(2)) / 2.0),
        );
        a001.push(
            log_gamma_unchecked((s - mu.mu(0)) / 2.0)
                + log_gamma_unchecked((s - mu.mu(1)) / 2.0)
                + log_gamma_unchecked((1.0 + s - mu.mu(2)) / 2.0),
        );
        b001.push(
            log_gamma_unchecked((s + mu.mu(0)) / 2.0)
                + log_gamma_unchecked((s + mu.mu(1)) / 2.0)
                + log_gamma_unchecked((1.0 + s + mu.mu(2)) / 2.0),
        );
        b110.push(
            log_gamma_unchecked((1.0 + s + mu.mu(0)) / 2.0)
                + log_gamma_unchecked((1.0 + s + mu.mu(1)) / 2.0)
                + log_gamma_unchecked((s + mu.mu(2)) / 2.0),
        );
        p1.push(((1.0 - s) * l1).exp() * w);
        p2.push(((1.0 - s) * l2).exp() * w);
    }
    let mut comp = [Complex64::new(0.0, 0.0); 3];
    for j in 0..n {
        let mut m = Complex64::new(0.0, 0.0);
        let mut z = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let g0 = (a110[j] + b001[k] - den.den3[j + k]).exp();
            let gp = (a001[j] + b001[k] - den.den2[j + k]).exp();
            let gf = (a001[j] + b110[k] - den.den3[j + k]).exp();
            m += (gp - gf) * p2[k];
            z += std::f64::consts::SQRT_2 * g0 * p2[k];
            p += (gp + gf) * p2[k];
        }
        comp[0] += p1[j] * m;
        comp[1] += p1[j] * z;
        comp[2] += p1[j] * p;
    }
    let norm = h * h / (4.0 * PI * PI) / (4.0 * PI * PI);
    WhittakerVector {
        comp: [comp[0] * norm, comp[1] * norm, comp[2] * norm],
    }
}

/// Simpson grid on the positive torus in logarithmic coordinates.
#[derive(Debug, Clone, Copy)]
pub struct TorusGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub nodes: usize,
}

impl Default for TorusGrid {
    fn default() -> Self {
        TorusGrid {
            u_min: -6.0,
            u_max: 3.5,
            nodes: 97,
        }
    }
}

/// Spectral analysis: integrate a torus function against the conjugated
/// Whittaker vector under the invariant measure dy/(y1 y2)^3.
pub fn f_sharp<F>(f: F, mu: &SpectralParameter, ctl: &ContourSpec, grid: &TorusGrid) -> Result<Complex64>
where
    F: Fn(&TorusPoint) -> WhittakerVector + Sync,
{
    let w1 = W1Grid::build(mu, ctl)?;
    let n = grid.nodes | 1;
    let h = (grid.u_max - grid.u_min) / (n - 1) as f64;
    let us: Vec<f64> = (0..n).map(|i| grid.u_min + i as f64 * h).collect();
    let simpson = |i: usize| -> f64 {
        (if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }) * h
            / 3.0
    };
    let ys: Vec<f64> = us.iter().map(|&u| u.exp()).collect();
    let wgrid = w1.eval_grid(&ys, &ys);
    let rows: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let y = TorusPoint::new(ys[i], ys[j]).expect("positive");
                let fv = f(&y);
                let wv = &wgrid[i][j];
                let mut dot = Complex64::new(0.0, 0.0);
                for c in 0..3 {
                    dot += fv.comp[c] * wv.comp[c].conj();
                }
                // invariant measure in log coordinates
                acc += dot * (-2.0 * (us[i] + us[j])).exp() * simpson(j);
            }
            acc * simpson(i)
        })
        .collect();
    Ok(rows.iter().sum())
}

// ---------------------------------------------------------------------------
// The residue shortcut
// ---------------------------------------------------------------------------

fn gauss_f_psi_sinmu(
    f: &TestFunction,
    mup: &SpectralParameter,
    mu_neg: &SpectralParameter,
    eps: f64,
) -> Complex64 {
    let p = StadeParams {
        mu: *mup,
        mu_prime: *mu_neg,
        t: Complex64::new(eps, 0.0),
    };
    match psi1_closed(&p) {
        Ok(v) => f.eval(mup) * v * sinmu1(mup),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// The smoothed spectral pairing F(mu, eps): the tempered integral of
/// F(mu') Psi1(mu', -mu, eps) sinmu1(mu') d mu', evaluated exactly by the
/// contour-shift decomposition (valid for eps < eta).
pub fn kl_smoothed_pairing(f: &TestFunction, mu: &SpectralParameter, eps: f64) -> Result<Complex64> {
    if mu.max_re() > 1e-12 {
        return Err(Error::Precondition("mu must be tempered".into()));
    }
    if (mu.mu(0) - mu.mu(1)).norm() < 1e-8 {
        return Err(Error::Precondition(
            "the pairing excludes the diagonal mu1 = mu2".into(),
        ));
    }
    if !(eps > 0.0 && eps < 0.125) {
        return Err(Error::Precondition(format!(
            "eps must lie in (0, 1/8), got {eps}"
        )));
    }
    let eta = (2.0 * eps).max(0.05).min(0.12);
    let (b1, _) = f.decay_box();
    let box_w = b1 + 0.5;
    let h = 0.02;
    let n = (2.0 * box_w / h).ceil() as usize + 1;
    let mu_neg = mu.neg();
    // A: both contours shifted left by eta (no poles crossed beyond the
    // four first-layer ones, which are extracted below)
    let a_rows: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x1 = -box_w + i as f64 * h;
            let m1 = Complex64::new(-eta, x1);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let x2 = -box_w + j as f64 * h;
                let m2 = Complex64::new(-eta, x2);
                let mup = SpectralParameter::from_coords([m1, m2, -m1 - m2]).expect("sum zero");
                acc += gauss_f_psi_sinmu(f, &mup, &mu_neg, eps);
            }
            acc
        })
        .collect();
    let a: Complex64 = a_rows.iter().sum::<Complex64>() * Complex64::new(-h * h, 0.0);

    // residue data: crossing mu'_k = mu_i - eps extracts 2 from the pole
    // gamma; the remaining product is evaluated without that factor
    let residue_gamma_product = |mup: &SpectralParameter, skip: (usize, usize)| -> Complex64 {
        let mut lg = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) == skip {
                    continue;
                }
                let c = if (i == 2) != (j == 2) { 1.0 } else { 0.0 };
                lg += log_gamma_unchecked((c + eps + mu_neg.mu(i) + mup.mu(j)) / 2.0);
            }
        }
        (lg - log_gamma_unchecked(Complex64::new(1.5 * eps, 0.0))).exp()
            / (2.0 * PI.powf(3.0 * eps))
    };

    // B, C: one variable pinned at a crossed pole, the other on its shifted
    // line; d mu' = i dx on the remaining line, times 2 pi i and the pole
    // residue 2
    let line_residue = |pinned_first: bool, i_pole: usize| -> Complex64 {
        let pole = mu.mu(i_pole) - eps;
        let rows: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|k| {
                let x = -box_w + k as f64 * h;
                let free = Complex64::new(-eta, x);
                let (m1, m2) = if pinned_first { (pole, free) } else { (free, pole) };
                let mup = SpectralParameter::from_coords([m1, m2, -m1 - m2]).expect("sum zero");
                let skip = if pinned_first { (i_pole, 0) } else { (i_pole, 1) };
                f.eval(&mup) * sinmu1(&mup) * residue_gamma_product(&mup, skip)
            })
            .collect();
        let sum: Complex64 = rows.iter().sum();
        // 2 pi i * residue(=2) * int ... (i dx)
        Complex64::new(0.0, 2.0 * PI) * 2.0 * sum * Complex64::new(0.0, h)
    };
    let b = line_residue(true, 0) + line_residue(true, 1);
    let c = line_residue(false, 0) + line_residue(false, 1);

    // D: the two surviving double residues (the diagonal ones vanish with
    // the inversion measure)
    let point_residue = |i1: usize, i2: usize| -> Complex64 {
        let p1 = mu.mu(i1) - eps;
        let p2 = mu.mu(i2) - eps;
        let mup = SpectralParameter::from_coords([p1, p2, -p1 - p2]).expect("sum zero");
        let mut lg = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) == (i1, 0) || (i, j) == (i2, 1) {
                    continue;
                }
                let cc = if (i == 2) != (j == 2) { 1.0 } else { 0.0 };
                lg += log_gamma_unchecked((cc + eps + mu_neg.mu(i) + mup.mu(j)) / 2.0);
            }
        }
        let rest = (lg - log_gamma_unchecked(Complex64::new(1.5 * eps, 0.0))).exp()
            / (2.0 * PI.powf(3.0 * eps));
        Complex64::new(0.0, 2.0 * PI).powu(2) * 4.0 * f.eval(&mup) * sinmu1(&mup) * rest
    };
    let d = point_residue(0, 1) + point_residue(1, 0);

    // the decomposition reconstructs the integral with the complex-
    // differential convention; the global normalization halves it
    Ok((a + b + c + d) * 0.5)
}

/// |F(mu, eps) - F(mu)|: the residue-shortcut verification of the inversion
/// theorem. The limit eps -> 0 of the smoothed pairing is F(mu).
pub fn kl_residue_check(f: &TestFunction, mu: &SpectralParameter, eps: f64) -> Result<f64> {
    let paired = kl_smoothed_pairing(f, mu, eps)?;
    Ok((paired - f.eval(mu)).norm())
}

/// Direct graded-quadrature route for the smoothed pairing, reliable for
/// eps down to ~3e-2; used as the independent cross-check of the
/// contour-shift decomposition.
pub fn kl_smoothed_pairing_direct(
    f: &TestFunction,
    mu: &SpectralParameter,
    eps: f64,
) -> Result<Complex64> {
    let (b1, _) = f.decay_box();
    let box_w = b1 + 0.5;
    let targets = [mu.mu(0).im, mu.mu(1).im];
    let x1_axis = graded_axis(-box_w, box_w, 0.03, &targets, eps);
    let mu_neg = mu.neg();
    let ssum = mu.mu(0).im + mu.mu(1).im;
    let rows: Vec<Complex64> = x1_axis
        .par_iter()
        .enumerate()
        .map(|(i, &x1)| {
            let w1 = trap_weight(&x1_axis, i);
            let mut t2 = targets.to_vec();
            t2.push(ssum - x1);
            let x2_axis = graded_axis(-box_w, box_w, 0.03, &t2, eps);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &x2) in x2_axis.iter().enumerate() {
                let mup = SpectralParameter::tempered(x1, x2);
                acc += gauss_f_psi_sinmu(f, &mup, &mu_neg, eps) * trap_weight(&x2_axis, j);
            }
            acc * w1
        })
        .collect();
    let sum: Complex64 = rows.iter().sum();
    Ok(sum * SPECTRAL_MEASURE_PER_DX)
}

fn trap_weight(axis: &[f64], i: usize) -> f64 {
    let n = axis.len();
    if i == 0 {
        (axis[1] - axis[0]) / 2.0
    } else if i == n - 1 {
        (axis[n - 1] - axis[n - 2]) / 2.0
    } else {
        (axis[i + 1] - axis[i - 1]) / 2.0
    }
}

/// Coarse uniform axis refined geometrically toward each target down to the
/// scale eps/6, with a uniform core of that step around the target.
fn graded_axis(lo: f64, hi: f64, h0: f64, targets: &[f64], eps: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = Vec::new();
    let n0 = ((hi - lo) / h0).ceil() as usize + 1;
    for i in 0..n0 {
        pts.push(lo + i as f64 * (hi - lo) / (n0 - 1) as f64);
    }
    for &t in targets {
        if t <= lo || t >= hi {
            continue;
        }
        let mut d = h0;
        while d > eps / 6.0 {
            for s in [-1.0, 1.0] {
                let v = t + s * d;
                if v > lo && v < hi {
                    pts.push(v);
                }
            }
            d /= 1.2;
        }
        for k in 0..=20 {
            for s in [-1.0, 1.0] {
                let v = t + s * k as f64 * eps / 6.0;
                if v > lo && v < hi {
                    pts.push(v);
                }
            }
        }
        pts.push(t);
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    pts
}

/// The coarse direct round trip (f_sharp after f_flat) and its
/// non-symmetric variant; expensive, used by the slow acceptance smoke
/// test.
pub fn round_trip(
    f: &TestFunction,
    mu: &SpectralParameter,
    ctl: &ContourSpec,
    spectral_nodes: usize,
    grid: &TorusGrid,
) -> Result<Complex64> {
    let n = grid.nodes | 1;
    let h = (grid.u_max - grid.u_min) / (n - 1) as f64;
    let us: Vec<f64> = (0..n).map(|i| grid.u_min + i as f64 * h).collect();
    let ys: Vec<f64> = us.iter().map(|&u| u.exp()).collect();
    // synthesis on the full torus grid
    let flat: Vec<Vec<WhittakerVector>> = ys
        .iter()
        .map(|&y1| {
            ys.iter()
                .map(|&y2| {
                    let y = TorusPoint::new(y1, y2).expect("positive");
                    f_flat(f, &y, ctl, spectral_nodes).unwrap_or_else(|_| WhittakerVector::zero())
                })
                .collect()
        })
        .collect();
    let lookup = move |y: &TorusPoint| -> WhittakerVector {
        // nearest grid point (f_sharp calls exactly on the grid)
        let i = ((y.y1.ln() - grid.u_min) / h).round() as usize;
        let j = ((y.y2.ln() - grid.u_min) / h).round() as usize;
        flat[i.min(n - 1)][j.min(n - 1)]
    };
    f_sharp(lookup, mu, ctl, grid)
}
