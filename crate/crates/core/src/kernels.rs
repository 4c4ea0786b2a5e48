//! Kuznetsov kernel functions: power-series solutions of the two Casimir
//! equations, their signed linear combinations, the normalized kernels, the
//! Mellin-Barnes counterparts, the four cross-check identities relating
//! them, and the spectral integral transform H_w.
//!
//! Dual routes everywhere: each kernel has a convergent power series (small
//! argument) and a contour-integral representation; the test suite holds
//! them against each other at 1e-6 or better.

use crate::complexgamma::log_gamma_unchecked;
use crate::error::{Error, Result};
use crate::kltransform::TestFunction;
use crate::mellin::ContourSpec;
use crate::spectrum::spectral_box_integral;
use crate::stade::specmu1;
use crate::whittaker::{weyl_act, SpectralParameter, TorusPoint, WeylElement};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Evaluation limits for the power-series routes.
#[derive(Debug, Clone, Copy)]
pub struct KernelEvalPolicy {
    /// Cap on series terms per variable.
    pub series_terms: usize,
    /// Maximum |4 pi^2 y_i| before the series route is refused in favor of
    /// the integral representations.
    pub series_radius: f64,
    /// Distance to vanishing trig denominators below which normalized
    /// kernels refuse to evaluate.
    pub singular_tolerance: f64,
}

impl Default for KernelEvalPolicy {
    fn default() -> Self {
        KernelEvalPolicy {
            series_terms: 96,
            series_radius: 1.5,
            singular_tolerance: 1e-8,
        }
    }
}

/// Eigenvalues of the two invariant differential operators on the power
/// function attached to mu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirEigenvalues {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

pub fn casimir_eigenvalues(mu: &SpectralParameter) -> CasimirEigenvalues {
    let sq = mu.mu(0) * mu.mu(0) + mu.mu(1) * mu.mu(1) + mu.mu(2) * mu.mu(2);
    CasimirEigenvalues {
        lambda1: 1.0 - sq / 2.0,
        lambda2: mu.mu(0) * mu.mu(1) * mu.mu(2),
    }
}

/// Product of sines over the positive root differences.
pub fn sinmu_product(mu: &SpectralParameter) -> Complex64 {
    let d12 = mu.mu(0) - mu.mu(1);
    let d13 = mu.mu(0) - mu.mu(2);
    let d23 = mu.mu(1) - mu.mu(2);
    (PI / 2.0 * d12).sin() * (PI / 2.0 * d13).sin() * (PI / 2.0 * d23).sin()
}

/// Product of cosines over the positive root differences.
pub fn cosmu_product(mu: &SpectralParameter) -> Complex64 {
    let d12 = mu.mu(0) - mu.mu(1);
    let d13 = mu.mu(0) - mu.mu(2);
    let d23 = mu.mu(1) - mu.mu(2);
    (PI / 2.0 * d12).cos() * (PI / 2.0 * d13).cos() * (PI / 2.0 * d23).cos()
}

/// A shifted gamma numerator Gamma(n + z + 1) must stay away from its poles
/// for all n >= 0, i.e. z must not sit near a negative integer.
fn check_shift_regular(z: Complex64, tol: f64) -> Result<()> {
    let k = z.re.round();
    if k <= -1.0 && Complex64::new(z.re - k, z.im).norm() < tol {
        return Err(Error::DegenerateSpectrum(
            Complex64::new(z.re - k, z.im).norm(),
        ));
    }
    Ok(())
}

/// Long-element power series: |4 pi^2 y1|^{1-mu3} |4 pi^2 y2|^{1+mu1} times
/// the double series with the signed arguments inside the sum.
pub fn j_wl_series(
    y: &TorusPoint,
    mu: &SpectralParameter,
    policy: &KernelEvalPolicy,
) -> Result<Complex64> {
    let x1 = 4.0 * PI * PI * y.y1;
    let x2 = 4.0 * PI * PI * y.y2;
    let radius = x1.abs().max(x2.abs());
    if radius > policy.series_radius {
        return Err(Error::SeriesDiverged(radius, policy.series_radius));
    }
    let a = mu.mu(0) - mu.mu(2);
    check_shift_regular(a, policy.singular_tolerance)?;
    let b = [
        mu.mu(0) - mu.mu(2),
        mu.mu(1) - mu.mu(2),
        Complex64::new(0.0, 0.0),
    ];
    let c = [
        Complex64::new(0.0, 0.0),
        mu.mu(0) - mu.mu(1),
        mu.mu(0) - mu.mu(2),
    ];
    let mut lg0 = log_gamma_unchecked(a + 1.0);
    for z in b.iter().chain(c.iter()) {
        lg0 -= log_gamma_unchecked(z + 1.0);
    }
    let t00 = lg0.exp();
    let mut total = Complex64::new(0.0, 0.0);
    let mut row_head = t00;
    let mut tail_ok = false;
    for n1 in 0..policy.series_terms {
        let mut term = row_head;
        let mut row_sum = Complex64::new(0.0, 0.0);
        let mut inner_ok = false;
        for n2 in 0..policy.series_terms {
            row_sum += term;
            let nf = (n1 + n2) as f64;
            let ratio = (nf + a + 1.0) * x2
                / ((n2 as f64 + c[0] + 1.0)
                    * (n2 as f64 + c[1] + 1.0)
                    * (n2 as f64 + c[2] + 1.0));
            term *= ratio;
            if term.norm() < 1e-18 * (total.norm() + row_sum.norm() + t00.norm()) {
                inner_ok = true;
                break;
            }
        }
        if !inner_ok {
            return Err(Error::SeriesDiverged(radius, policy.series_radius));
        }
        total += row_sum;
        let n1f = n1 as f64;
        let row_ratio =
            (n1f + a + 1.0) * x1 / ((n1f + b[0] + 1.0) * (n1f + b[1] + 1.0) * (n1f + b[2] + 1.0));
        row_head *= row_ratio;
        if row_head.norm() < 1e-18 * (total.norm() + t00.norm()) {
            tail_ok = true;
            break;
        }
    }
    if !tail_ok {
        return Err(Error::SeriesDiverged(radius, policy.series_radius));
    }
    let pref = ((1.0 - mu.mu(2)) * x1.abs().ln() + (1.0 + mu.mu(0)) * x2.abs().ln()).exp();
    Ok(pref * total)
}

/// Intermediate-element power series on the subspace y2 = 1; entire in y1
/// but capped for cost and cancellation.
pub fn j_w4_series(y1: f64, mu: &SpectralParameter, policy: &KernelEvalPolicy) -> Result<Complex64> {
    let x = 8.0 * PI.powi(3) * y1;
    if x.abs() > 100.0 * policy.series_radius {
        return Err(Error::SeriesDiverged(x.abs(), 100.0 * policy.series_radius));
    }
    let a = mu.mu(0) - mu.mu(2);
    let b = mu.mu(1) - mu.mu(2);
    check_shift_regular(a, policy.singular_tolerance)?;
    check_shift_regular(b, policy.singular_tolerance)?;
    let mut term = (-log_gamma_unchecked(a + 1.0) - log_gamma_unchecked(b + 1.0)).exp();
    let z = Complex64::new(0.0, -x);
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..(policy.series_terms * 4) {
        total += term;
        let nf = (n + 1) as f64;
        term *= z / (nf * (nf + a) * (nf + b));
        if term.norm() < 1e-18 * total.norm().max(1e-300) {
            let pref = ((1.0 - mu.mu(2)) * x.abs().ln()).exp();
            return Ok(pref * total);
        }
    }
    Err(Error::SeriesDiverged(x.abs(), policy.series_radius))
}

/// Signed linear combinations over the 3-cycle translates, with
/// eps = sgn(y). Long element:
/// eps2 J(y,mu) + eps1 J(y,mu^w4) + eps1 eps2 J(y,mu^w5).
/// Intermediate element (on y2 = 1):
/// -sin((pi/2)(mu1-mu2)) J(y1,mu) - i eps1 cos((pi/2)(mu1-mu3)) J(y1,mu^w4)
/// + i eps1 cos((pi/2)(mu2-mu3)) J(y1,mu^w5).
pub fn j1_combination(
    w: WeylElement,
    y: &TorusPoint,
    mu: &SpectralParameter,
    policy: &KernelEvalPolicy,
) -> Result<Complex64> {
    let (e1, e2) = y.signs();
    let mu4 = weyl_act(WeylElement::W4, mu);
    let mu5 = weyl_act(WeylElement::W5, mu);
    match w {
        WeylElement::Wl => {
            let j0 = j_wl_series(y, mu, policy)?;
            let j4 = j_wl_series(y, &mu4, policy)?;
            let j5 = j_wl_series(y, &mu5, policy)?;
            Ok(e2 * j0 + e1 * j4 + e1 * e2 * j5)
        }
        WeylElement::W4 => {
            let i = Complex64::new(0.0, 1.0);
            let j0 = j_w4_series(y.y1, mu, policy)?;
            let j4 = j_w4_series(y.y1, &mu4, policy)?;
            let j5 = j_w4_series(y.y1, &mu5, policy)?;
            let d12 = mu.mu(0) - mu.mu(1);
            let d13 = mu.mu(0) - mu.mu(2);
            let d23 = mu.mu(1) - mu.mu(2);
            Ok(-(PI / 2.0 * d12).sin() * j0 - i * e1 * (PI / 2.0 * d13).cos() * j4
                + i * e1 * (PI / 2.0 * d23).cos() * j5)
        }
        w => Err(Error::UnsupportedWeylElement(w.name())),
    }
}

fn trig_denominator(mu: &SpectralParameter) -> Complex64 {
    let d12 = mu.mu(0) - mu.mu(1);
    let d13 = mu.mu(0) - mu.mu(2);
    let d23 = mu.mu(1) - mu.mu(2);
    (PI / 2.0 * d13).cos() * (PI / 2.0 * d23).cos() * (PI / 2.0 * d12).sin()
}

/// Normalized kernels. The trivial element is the constant 1; the first
/// intermediate element lives on the subspace y2 = 1, the second on y1 = 1
/// (delegating to the first with flipped argument and negated spectrum);
/// the long element is the swap-antisymmetrized combination over the trig
/// denominator. Removable singularities at vanishing denominators are
/// excluded, not limit-evaluated.
pub fn k1_kernel(
    w: WeylElement,
    y: &TorusPoint,
    mu: &SpectralParameter,
    policy: &KernelEvalPolicy,
) -> Result<Complex64> {
    match w {
        WeylElement::I => Ok(Complex64::new(1.0, 0.0)),
        WeylElement::W4 => {
            if y.y2 != 1.0 {
                return Err(Error::SubspaceViolated(y.y2));
            }
            let den = trig_denominator(mu);
            if den.norm() < policy.singular_tolerance {
                return Err(Error::SingularSpectrum(den.norm()));
            }
            Ok(j1_combination(WeylElement::W4, y, mu, policy)? / (8.0 * PI * den))
        }
        WeylElement::W5 => {
            if y.y1 != 1.0 {
                return Err(Error::SubspaceViolated(y.y1));
            }
            let flipped = TorusPoint::new(-y.y2, 1.0)?;
            k1_kernel(WeylElement::W4, &flipped, &mu.neg(), policy)
        }
        WeylElement::Wl => {
            let den = trig_denominator(mu);
            if den.norm() < policy.singular_tolerance {
                return Err(Error::SingularSpectrum(den.norm()));
            }
            let a = j1_combination(WeylElement::Wl, y, mu, policy)?;
            let b = j1_combination(WeylElement::Wl, y, &weyl_act(WeylElement::W2, mu), policy)?;
            Ok(-(a - b) / (16.0 * PI * den))
        }
        w => Err(Error::UnsupportedWeylElement(w.name())),
    }
}

// ---------------------------------------------------------------------------
// Mellin-Barnes routes
// ---------------------------------------------------------------------------

/// cos^4 taper over the outer `frac` of the truncated contour; suppresses
/// truncation ringing of slowly decaying oscillatory tails.
fn taper(t: f64, height: f64, frac: f64) -> f64 {
    let t0 = (1.0 - frac) * height;
    let a = t.abs();
    if a <= t0 {
        1.0
    } else if a >= height {
        0.0
    } else {
        ((PI / 2.0) * (a - t0) / (height - t0)).cos().powi(4)
    }
}

/// Default contour for the one-variable intermediate-element integral: the
/// integrand has a polynomially decaying oscillatory side, so the line sits
/// close to the poles (better tail exponent) with a fine step (aliasing).
pub fn w4_mb_default_contour() -> ContourSpec {
    ContourSpec::line(0.1, 4000.0, 400_001, 1e-6)
}

/// Intermediate-element kernel on its subspace by a single contour
/// integral: |8 pi^3 y1|^{1-s} times three gammas times a four-term phase
/// combination, tapered trapezoid on Re s = ctl.re_parts[0]. The tail is
/// estimated honestly as the difference between two truncation windows.
pub fn k1_w4_mellin_barnes(
    y1: f64,
    mu: &SpectralParameter,
    ctl: &ContourSpec,
) -> Result<Complex64> {
    if y1 == 0.0 {
        return Err(Error::Precondition("y1 must be nonzero".into()));
    }
    let sigma = ctl.re_parts[0];
    if sigma <= mu.max_re() {
        return Err(Error::ContourPinch(sigma - mu.max_re()));
    }
    let eps = y1.signum();
    let lx = (8.0 * PI.powi(3) * y1.abs()).ln();
    let n = ctl.nodes;
    let h = 2.0 * ctl.height / (n - 1) as f64;
    let i = Complex64::new(0.0, 1.0);
    let phase_terms = [
        (1.5 * i * PI * eps, Complex64::new(0.0, 0.0), 1.0),
        (-0.5 * i * PI * eps, -i * PI * eps * mu.mu(0), -1.0),
        (-0.5 * i * PI * eps, -i * PI * eps * mu.mu(1), -1.0),
        (-0.5 * i * PI * eps, -i * PI * eps * mu.mu(2), 1.0),
    ];
    let height = ctl.height;
    let sums: Vec<(Complex64, Complex64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let t = -height + k as f64 * h;
            let s = Complex64::new(sigma, t);
            let lg = log_gamma_unchecked(s - mu.mu(0))
                + log_gamma_unchecked(s - mu.mu(1))
                + log_gamma_unchecked(s - mu.mu(2))
                + (1.0 - s) * lx;
            let mut v = Complex64::new(0.0, 0.0);
            for (slope, offset, sign) in phase_terms {
                v += sign * (lg + slope * s + offset).exp();
            }
            let wk: f64 = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            let full = v * (wk * taper(t, height, 0.25));
            let short = v * (wk * taper(t, height * 0.85, 0.25));
            (full, short)
        })
        .collect();
    let full: Complex64 = sums.iter().map(|p| p.0).sum();
    let short: Complex64 = sums.iter().map(|p| p.1).sum();
    let scale = h / (2.0 * PI) / (8.0 * PI.powi(3));
    let value = full * scale;
    let tail = (full - short).norm() * scale;
    if tail > ctl.rel_tol * value.norm().max(1e-300) {
        return Err(Error::TailTooLarge {
            estimate: tail,
            budget: ctl.rel_tol * value.norm(),
        });
    }
    Ok(value)
}

/// Sign-region selector for the long-element Mellin-Barnes integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPair {
    PlusPlus,
    MinusMinus,
    MinusPlus,
    PlusMinus,
}

impl SignPair {
    pub fn name(&self) -> &'static str {
        match self {
            SignPair::PlusPlus => "++",
            SignPair::MinusMinus => "--",
            SignPair::MinusPlus => "-+",
            SignPair::PlusMinus => "+-",
        }
    }
}

/// Default contour for the mixed-sign lattice integrals.
pub fn k_wl_mixed_default_contour() -> ContourSpec {
    ContourSpec::plane(0.25, 0.25, 150.0, 6001, 1e-6)
}

/// The four long-element contour integrals. `y` carries the positive parts;
/// the sign pair selects the display. The (+,+) case is the cosine-weighted
/// double integral on Re s = (2, 2); the mixed cases are lattice integrals
/// with one coupled gamma factor and tapered truncation.
pub fn k_wl_mellin_barnes(
    signs: SignPair,
    y: &TorusPoint,
    mu: &SpectralParameter,
    ctl: &ContourSpec,
) -> Result<Complex64> {
    if !y.is_positive() {
        return Err(Error::Precondition(
            "y carries positive parts; the sign pair is explicit".into(),
        ));
    }
    match signs {
        SignPair::PlusPlus => k_wl_mb_plusplus(y, mu, ctl),
        SignPair::MinusMinus => {
            let spec = LatticeSpec {
                a_num: vec![mu.mu(2), mu.mu(0)],
                a_den: vec![1.0 + mu.mu(1)],
                b_num: vec![-mu.mu(0), -mu.mu(2)],
                b_den: vec![1.0 - mu.mu(1)],
                coupled_one_minus: false,
                prefactor: -((PI * (mu.mu(0) - mu.mu(2))).sin()) / PI,
            };
            lattice_mb(&spec, y, ctl)
        }
        SignPair::MinusPlus => {
            let spec = LatticeSpec {
                a_num: vec![mu.mu(2)],
                a_den: vec![1.0 + mu.mu(0), 1.0 + mu.mu(1)],
                b_num: vec![-mu.mu(0), -mu.mu(1)],
                b_den: vec![1.0 - mu.mu(2)],
                coupled_one_minus: true,
                prefactor: -((PI * (mu.mu(0) - mu.mu(1))).sin()) / PI,
            };
            lattice_mb(&spec, y, ctl)
        }
        SignPair::PlusMinus => {
            let spec = LatticeSpec {
                a_num: vec![mu.mu(1), mu.mu(2)],
                a_den: vec![1.0 + mu.mu(0)],
                b_num: vec![-mu.mu(0)],
                b_den: vec![1.0 - mu.mu(1), 1.0 - mu.mu(2)],
                coupled_one_minus: true,
                prefactor: -((PI * (mu.mu(1) - mu.mu(2))).sin()) / PI,
            };
            lattice_mb(&spec, y, ctl)
        }
    }
}

/// (+,+) case: (1/4) cosmu(mu) times the double contour integral of the
/// six-gamma quotient with doubled arguments on Re s = (2, 2). All gamma
/// evaluations are per-axis; the coupled denominator lives on the sum
/// lattice (the two axes must share their step for this to be exact).
fn k_wl_mb_plusplus(
    y: &TorusPoint,
    mu: &SpectralParameter,
    ctl: &ContourSpec,
) -> Result<Complex64> {
    let (s1r, s2r) = if ctl.re_parts.len() == 2 {
        (ctl.re_parts[0], ctl.re_parts[1])
    } else {
        (2.0, 2.0)
    };
    let l1 = (4.0 * PI * PI * y.y1).ln();
    let l2 = (4.0 * PI * PI * y.y2).ln();
    let n = ctl.nodes;
    let h = 2.0 * ctl.height / (n - 1) as f64;
    let t0 = -ctl.height;
    let a: Vec<Complex64> = (0..n)
        .map(|k| {
            let s = Complex64::new(s1r, t0 + k as f64 * h);
            let wk: f64 = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            log_gamma_unchecked(s - mu.mu(0))
                + log_gamma_unchecked(s - mu.mu(1))
                + log_gamma_unchecked(s - mu.mu(2))
                + (1.0 - s) * l1
                + Complex64::new(wk.ln(), 0.0)
        })
        .collect();
    let b: Vec<Complex64> = (0..n)
        .map(|k| {
            let s = Complex64::new(s2r, t0 + k as f64 * h);
            let wk: f64 = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            log_gamma_unchecked(s + mu.mu(0))
                + log_gamma_unchecked(s + mu.mu(1))
                + log_gamma_unchecked(s + mu.mu(2))
                + (1.0 - s) * l2
                + Complex64::new(wk.ln(), 0.0)
        })
        .collect();
    let den: Vec<Complex64> = (0..2 * n - 1)
        .map(|m| log_gamma_unchecked(Complex64::new(s1r + s2r, 2.0 * t0 + m as f64 * h)))
        .collect();
    let rows: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += (a[j] + b[k] - den[j + k]).exp();
            }
            acc
        })
        .collect();
    let total: Complex64 = rows.iter().sum();
    Ok(0.25 * cosmu_product(mu) * total * (h / (2.0 * PI)).powi(2))
}

/// Lattice integrand description:
/// prod Gamma(s1 - a_num) / prod Gamma(a_den - s1) on the first axis,
/// prod Gamma(s2 - b_num) / prod Gamma(b_den - s2) on the second (pass
/// z = -mu to realize Gamma(s2 + mu)), and the coupled factor
/// Gamma(1 - s1 - s2) (numerator) or 1/Gamma(s1 + s2) (denominator).
struct LatticeSpec {
    a_num: Vec<Complex64>,
    a_den: Vec<Complex64>,
    b_num: Vec<Complex64>,
    b_den: Vec<Complex64>,
    coupled_one_minus: bool,
    prefactor: Complex64,
}

fn lattice_mb(spec: &LatticeSpec, y: &TorusPoint, ctl: &ContourSpec) -> Result<Complex64> {
    let (s1r, s2r) = if ctl.re_parts.len() == 2 {
        (ctl.re_parts[0], ctl.re_parts[1])
    } else {
        (0.25, 0.25)
    };
    if spec.coupled_one_minus && s1r + s2r >= 1.0 {
        return Err(Error::ContourPinch(1.0 - s1r - s2r));
    }
    let l1 = (4.0 * PI * PI * y.y1).ln();
    let l2 = (4.0 * PI * PI * y.y2).ln();
    let n = ctl.nodes;
    let h = 2.0 * ctl.height / (n - 1) as f64;
    let height = ctl.height;
    let t0 = -height;
    let axis = |re: f64, num: &[Complex64], den: &[Complex64], l: f64| -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                let t = t0 + k as f64 * h;
                let s = Complex64::new(re, t);
                let mut lg = (1.0 - s) * l;
                for &z in num {
                    lg += log_gamma_unchecked(s - z);
                }
                for &z in den {
                    lg -= log_gamma_unchecked(z - s);
                }
                let wk: f64 = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                lg + Complex64::new((wk * taper(t, height, 0.3)).max(1e-300).ln(), 0.0)
            })
            .collect()
    };
    let a = axis(s1r, &spec.a_num, &spec.a_den, l1);
    let b = axis(s2r, &spec.b_num, &spec.b_den, l2);
    let coupled: Vec<Complex64> = (0..2 * n - 1)
        .map(|m| {
            let t = 2.0 * t0 + m as f64 * h;
            if spec.coupled_one_minus {
                log_gamma_unchecked(Complex64::new(1.0 - s1r - s2r, -t))
            } else {
                -log_gamma_unchecked(Complex64::new(s1r + s2r, t))
            }
        })
        .collect();
    let rows: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += (a[j] + b[k] + coupled[j + k]).exp();
            }
            acc
        })
        .collect();
    let total: Complex64 = rows.iter().sum();
    Ok(spec.prefactor * total * (h / (2.0 * PI)).powi(2))
}

/// Series route for the four sign-region kernels: plain differences of the
/// long-element series over single Weyl translates, or the sine-weighted
/// Weyl sum for the (+,+) kernel.
pub fn k_wl_series_route(
    signs: SignPair,
    y: &TorusPoint,
    mu: &SpectralParameter,
    policy: &KernelEvalPolicy,
) -> Result<Complex64> {
    let signed = |s1: f64, s2: f64| TorusPoint::new(s1 * y.y1.abs(), s2 * y.y2.abs());
    match signs {
        SignPair::PlusPlus => {
            let yy = signed(1.0, 1.0)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for w in WeylElement::ALL {
                let muw = weyl_act(w, mu);
                acc += j_wl_series(&yy, &muw, policy)? / sinmu_product(&muw);
            }
            Ok(-PI.powi(3) / 32.0 * acc)
        }
        SignPair::MinusMinus => {
            let yy = signed(-1.0, -1.0)?;
            Ok(j_wl_series(&yy, mu, policy)?
                - j_wl_series(&yy, &weyl_act(WeylElement::Wl, mu), policy)?)
        }
        SignPair::MinusPlus => {
            let yy = signed(-1.0, 1.0)?;
            Ok(j_wl_series(&yy, mu, policy)?
                - j_wl_series(&yy, &weyl_act(WeylElement::W2, mu), policy)?)
        }
        SignPair::PlusMinus => {
            let yy = signed(1.0, -1.0)?;
            Ok(j_wl_series(&yy, mu, policy)?
                - j_wl_series(&yy, &weyl_act(WeylElement::W3, mu), policy)?)
        }
    }
}

/// The four combination identities: the swap-antisymmetrized long-element
/// combination against signed sums of sign-region kernels over Weyl
/// translates (cases 1-3) or the sine-weighted (+,+) contour integral
/// (case 4, a genuine series-vs-integral dual route). Returns the relative
/// residual.
pub fn verify_combination_proposition(
    case: u8,
    y: &TorusPoint,
    mu: &SpectralParameter,
    policy: &KernelEvalPolicy,
    ctl: &ContourSpec,
) -> Result<f64> {
    let region_ok = match case {
        1 => y.y1 < 0.0 && y.y2 > 0.0,
        2 => y.y2 < 0.0 && y.y1 > 0.0,
        3 => y.y1 < 0.0 && y.y2 < 0.0,
        4 => y.y1 > 0.0 && y.y2 > 0.0,
        _ => return Err(Error::Usage("proposition case must be 1..=4".into())),
    };
    if !region_ok {
        return Err(Error::Precondition(format!(
            "case {case} requires the matching sign region, got ({}, {})",
            y.y1, y.y2
        )));
    }
    let lhs = j1_combination(WeylElement::Wl, y, mu, policy)?
        - j1_combination(WeylElement::Wl, y, &weyl_act(WeylElement::W2, mu), policy)?;
    let abs = TorusPoint::new(y.y1.abs(), y.y2.abs())?;
    let series_diff = |signs: SignPair, w: WeylElement| -> Result<Complex64> {
        k_wl_series_route(signs, &abs, &weyl_act(w, mu), policy)
    };
    let rhs = match case {
        1 => {
            series_diff(SignPair::MinusPlus, WeylElement::I)?
                + series_diff(SignPair::MinusPlus, WeylElement::W3)?
                + series_diff(SignPair::MinusPlus, WeylElement::Wl)?
        }
        2 => {
            -series_diff(SignPair::PlusMinus, WeylElement::I)?
                + series_diff(SignPair::PlusMinus, WeylElement::W2)?
                - series_diff(SignPair::PlusMinus, WeylElement::Wl)?
        }
        3 => {
            -series_diff(SignPair::MinusMinus, WeylElement::I)?
                + series_diff(SignPair::MinusMinus, WeylElement::W2)?
                - series_diff(SignPair::MinusMinus, WeylElement::W3)?
        }
        4 => {
            let kwl = k_wl_mellin_barnes(SignPair::PlusPlus, &abs, mu, ctl)?;
            -32.0 / PI.powi(3) * sinmu_product(mu) * kwl
        }
        _ => unreachable!(),
    };
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()))
}

/// Spectral transform: (1/|y1 y2|) times the tempered integral of
/// F(mu) K1_w(y, mu) specmu1(mu) d mu. For the trivial element at y = (1,1)
/// this is the main-term functional.
pub fn h_w_transform(
    f: &TestFunction,
    w: WeylElement,
    y: &TorusPoint,
    nodes: usize,
    policy: &KernelEvalPolicy,
) -> Result<Complex64> {
    let (b1, b2) = f.decay_box();
    // stagger the x2 grid so the removable diagonal x1 = x2 of the
    // normalized kernels is never sampled
    let val = spectral_box_integral(b1, b2, nodes, nodes, true, |mu| {
        let k = match k1_kernel(w, y, mu, policy) {
            Ok(v) => v,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        let d = match specmu1(mu) {
            Ok(v) => v,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        f.eval(mu) * k * d
    });
    Ok(val / (y.y1 * y.y2).abs())
}
