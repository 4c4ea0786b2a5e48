//! The archimedean inner-product formula and the three spectral measures.
//!
//! The closed form evaluates the weighted inner product of two completed
//! Whittaker vectors over the positive torus as a ten-gamma quotient; the
//! numeric route performs the torus integral directly against cached
//! contour grids. Their agreement is the central identity of the crate.
//! The measures cosmu1, sinmu1, specmu1 each come with two independent
//! routes (trig closed form vs gamma quotient or residue limit).

use crate::complexgamma::{log_gamma_unchecked, pole_distance, GammaEvalPolicy};
use crate::error::{Error, Result};
use crate::mellin::ContourSpec;
use crate::whittaker::{SpectralParameter, W1Grid};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Arguments of the inner-product formula.
#[derive(Debug, Clone, Copy)]
pub struct StadeParams {
    pub mu: SpectralParameter,
    pub mu_prime: SpectralParameter,
    pub t: Complex64,
}

/// Exponent table: entry (i, j) is 1 exactly when one of i, j equals 3.
fn c1(i: usize, j: usize) -> f64 {
    if (i == 2) != (j == 2) {
        1.0
    } else {
        0.0
    }
}

/// Closed form: a product of nine gammas over (2 pi^{3t} Gamma(3t/2)),
/// assembled in log space.
pub fn psi1_closed(p: &StadeParams) -> Result<Complex64> {
    let tol = GammaEvalPolicy::default().pole_tolerance;
    let mut lg = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            let arg = (c1(i, j) + p.t + p.mu_prime.mu(i) + p.mu.mu(j)) / 2.0;
            if pole_distance(arg) < tol {
                return Err(Error::PoleProximity(arg, tol));
            }
            lg += log_gamma_unchecked(arg);
        }
    }
    lg -= log_gamma_unchecked(1.5 * p.t);
    lg -= 3.0 * p.t * PI.ln();
    Ok(lg.exp() / 2.0)
}

/// Logarithmic torus grid for the numeric route: y = e^u with Simpson
/// weights on [u_min, u_max].
#[derive(Debug, Clone, Copy)]
pub struct YGridSpec {
    pub u_min: f64,
    pub u_max: f64,
    /// Node count, odd.
    pub nodes: usize,
}

impl Default for YGridSpec {
    fn default() -> Self {
        YGridSpec {
            u_min: -13.0,
            u_max: 4.0,
            nodes: 241,
        }
    }
}

impl YGridSpec {
    pub fn axis(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.nodes | 1; // force odd for Simpson
        let h = (self.u_max - self.u_min) / (n - 1) as f64;
        let u: Vec<f64> = (0..n).map(|i| self.u_min + i as f64 * h).collect();
        let mut w = vec![0.0; n];
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            } * h
                / 3.0;
        }
        (u, w)
    }
}

/// Numeric route: the double torus integral of the componentwise product of
/// the two Whittaker vectors against (y1^2 y2)^t under the invariant measure
/// dy1 dy2 / (y1 y2)^3, evaluated on a logarithmic Simpson grid with one
/// cached contour grid per spectral parameter.
pub fn psi1_numeric(p: &StadeParams, ctl: &ContourSpec, ygrid: &YGridSpec) -> Result<Complex64> {
    if p.mu.max_re() > 1e-10 || p.mu_prime.max_re() > 1e-10 {
        return Err(Error::Precondition(
            "numeric route requires tempered spectral parameters".into(),
        ));
    }
    if p.t.re < 0.6 || p.t.re > 3.0 {
        return Err(Error::Precondition(format!(
            "numeric route requires Re t in [0.6, 3], got {}",
            p.t.re
        )));
    }
    let ga = W1Grid::build(&p.mu, ctl)?;
    let gb = W1Grid::build(&p.mu_prime, ctl)?;
    let (u, w) = ygrid.axis();
    let ys: Vec<f64> = u.iter().map(|&x| x.exp()).collect();
    let wa = ga.eval_grid(&ys, &ys);
    let wb = gb.eval_grid(&ys, &ys);
    let t = p.t;
    let rows: Vec<Complex64> = (0..u.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..u.len() {
                let dot = wa[i][j].dot(&wb[i][j]);
                // (y1^2 y2)^t dy/(y1 y2)^3 = exp(t(2u1+u2) - 2(u1+u2)) du
                let weight = (t * (2.0 * u[i] + u[j]) - 2.0 * (u[i] + u[j])).exp();
                acc += dot * weight * w[j];
            }
            acc * w[i]
        })
        .collect();
    Ok(rows.iter().sum())
}

/// Default contour for the numeric route.
pub fn stade_default_contour(mu: &SpectralParameter, mu_prime: &SpectralParameter) -> ContourSpec {
    let height = 32.0 + 2.0 * mu.max_im().max(mu_prime.max_im());
    let nodes = ((2.0 * height / 0.2).ceil() as usize).max(321) | 1;
    ContourSpec::plane(0.75, 0.75, height, nodes, 1e-7)
}

// ---------------------------------------------------------------------------
// Spectral measures
// ---------------------------------------------------------------------------

/// sin(pi x / 2) / x, stable at x = 0 (removable).
fn half_sinc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-8 {
        // sin(pi x/2)/x = pi/2 (1 - (pi x/2)^2/6 + ...)
        let z = PI / 2.0 * x;
        PI / 2.0 * (1.0 - z * z / 6.0)
    } else {
        (PI / 2.0 * x).sin() / x
    }
}

/// Normalization measure: the trig closed form of
/// 4 sin((pi/2)(mu1-mu3)) sin((pi/2)(mu2-mu3)) cos((pi/2)(mu1-mu2))
/// / (pi (mu1-mu3)(mu2-mu3)), whose reciprocal is the inner product at
/// weight one and equal spectral parameters.
pub fn cosmu1(mu: &SpectralParameter) -> Result<Complex64> {
    let d13 = mu.mu(0) - mu.mu(2);
    let d23 = mu.mu(1) - mu.mu(2);
    let d12 = mu.mu(0) - mu.mu(1);
    let cos12 = (PI / 2.0 * d12).cos();
    if cos12.norm() < 1e-10 {
        return Err(Error::SingularMeasure(cos12.norm()));
    }
    // non-removable zeros of the sin factors (poles of the inner product)
    for d in [d13, d23] {
        let s = (PI / 2.0 * d).sin();
        if d.norm() > 1e-6 && s.norm() < 1e-10 {
            return Err(Error::SingularMeasure(s.norm()));
        }
    }
    Ok(4.0 / PI * half_sinc(d13) * half_sinc(d23) * cos12)
}

/// Inversion measure: entire in mu.
pub fn sinmu1(mu: &SpectralParameter) -> Complex64 {
    let d12 = mu.mu(0) - mu.mu(1);
    let d13 = mu.mu(0) - mu.mu(2);
    let d23 = mu.mu(1) - mu.mu(2);
    d12 * (PI / 2.0 * d13).cos() * (PI / 2.0 * d23).cos() * (PI / 2.0 * d12).sin()
        / (16.0 * PI.powi(5))
}

/// Residue-limit route for the inversion measure: quadratic extrapolation of
/// t^2 Psi1(mu, -mu, t) through t = 1e-2, 3e-3, 1e-3, then invert and apply
/// the (2 pi i)^2 / 3 normalization.
pub fn sinmu1_residue_route(mu: &SpectralParameter) -> Result<Complex64> {
    let ts = [1e-2, 3e-3, 1e-3];
    let mut r = [Complex64::new(0.0, 0.0); 3];
    for (k, &t) in ts.iter().enumerate() {
        let p = StadeParams {
            mu: *mu,
            mu_prime: mu.neg(),
            t: Complex64::new(t, 0.0),
        };
        r[k] = t * t * psi1_closed(&p)?;
    }
    // Lagrange extrapolation to t = 0
    let mut r0 = Complex64::new(0.0, 0.0);
    for k in 0..3 {
        let mut l = Complex64::new(1.0, 0.0);
        for j in 0..3 {
            if j != k {
                l *= -ts[j] / (ts[k] - ts[j]);
            }
        }
        r0 += r[k] * l;
    }
    // (2 pi i)^2 / 3 * lim = 1 / sinmu1
    let lim = Complex64::new(-4.0 * PI * PI / 3.0, 0.0) * r0;
    Ok(1.0 / lim)
}

/// x cot(pi x / 2) written stably through its removable point x = 0;
/// errors at the non-removable cotangent poles x in 2Z \ {0}.
fn x_cot_half(x: Complex64) -> Result<Complex64> {
    let s = (PI / 2.0 * x).sin();
    if x.norm() < 1e-8 {
        // x cot(pi x/2) -> 2/pi as x -> 0
        let z = PI / 2.0 * x;
        return Ok(2.0 / PI * (1.0 - z * z / 3.0));
    }
    if s.norm() < 1e-10 {
        return Err(Error::SingularMeasure(s.norm()));
    }
    Ok(x * (PI / 2.0 * x).cos() / s)
}

/// Plancherel density: the product closed form
/// (1/64 pi^4)(mu1-mu2)(mu1-mu3)(mu2-mu3) cot cot tan.
pub fn specmu1(mu: &SpectralParameter) -> Result<Complex64> {
    let d12 = mu.mu(0) - mu.mu(1);
    let d13 = mu.mu(0) - mu.mu(2);
    let d23 = mu.mu(1) - mu.mu(2);
    let c12 = (PI / 2.0 * d12).cos();
    if c12.norm() < 1e-10 {
        return Err(Error::SingularMeasure(c12.norm()));
    }
    let t12 = d12 * (PI / 2.0 * d12).sin() / c12;
    Ok(t12 * x_cot_half(d13)? * x_cot_half(d23)? / (64.0 * PI.powi(4)))
}

/// Quotient route: sinmu1 / cosmu1.
pub fn specmu1_quotient(mu: &SpectralParameter) -> Result<Complex64> {
    Ok(sinmu1(mu) / cosmu1(mu)?)
}

/// Density of the tempered spectral measure with respect to dx1 dx2
/// (non-negative; includes the orientation of the complex measure but not
/// the global 1/2 normalization, which lives in the quadrature helper).
pub fn spectral_density(x1: f64, x2: f64) -> Result<f64> {
    let mu = SpectralParameter::tempered(x1, x2);
    let v = specmu1(&mu)?;
    Ok(-v.re)
}
