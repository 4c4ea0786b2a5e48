//! The completed weight-one Whittaker vector and its gamma kernels.
//!
//! The central object is the three-component row vector W*(y, mu) defined by
//! a two-variable Mellin-Barnes integral over gamma-quotient kernels; this
//! module also carries the Weyl-group machinery on spectral parameters, the
//! archimedean factors Lambda_alpha, and the six-term first-order
//! asymptotics of W* as y -> 0.
//!
//! Weyl-action convention (pinned by the test suite): the coordinate action
//! is (mu^w)_i = mu_{perm_w(i)} with
//! w2 = (2 1 3), w3 = (1 3 2), w4 = (3 1 2), w5 = (2 3 1), wl = (3 2 1),
//! composed by `a.then(b)` so that mu^{a then b} = (mu^a)^b. Under this
//! convention w4 = w3 w2, w2 w4 = wl and w2 w5 = w3, and the functional-
//! equation table extends by left w2-invariance over the cosets
//! {I, w2}, {w4, wl}, {w5, w3}.

use crate::complexgamma::{log_gamma_unchecked, pole_distance, GammaEvalPolicy};
use crate::error::{Error, Result};
use crate::mellin::ContourSpec;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// A point of the complexified torus dual: three complex coordinates
/// summing to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    mu: [Complex64; 3],
}

impl SpectralParameter {
    /// Build from all three coordinates, enforcing the sum-zero invariant.
    pub fn from_coords(mu: [Complex64; 3]) -> Result<Self> {
        let s = mu[0] + mu[1] + mu[2];
        if s.norm() > 1e-12 {
            return Err(Error::ConstraintViolated(s.norm()));
        }
        Ok(SpectralParameter { mu })
    }

    /// First two coordinates free, third derived.
    pub fn new(mu1: Complex64, mu2: Complex64) -> Self {
        SpectralParameter {
            mu: [mu1, mu2, -mu1 - mu2],
        }
    }

    /// Tempered point i*(x1, x2, -x1-x2).
    pub fn tempered(x1: f64, x2: f64) -> Self {
        SpectralParameter::new(Complex64::new(0.0, x1), Complex64::new(0.0, x2))
    }

    pub fn mu(&self, i: usize) -> Complex64 {
        self.mu[i]
    }

    pub fn coords(&self) -> [Complex64; 3] {
        self.mu
    }

    pub fn neg(&self) -> Self {
        SpectralParameter {
            mu: [-self.mu[0], -self.mu[1], -self.mu[2]],
        }
    }

    pub fn conj(&self) -> Self {
        SpectralParameter {
            mu: [self.mu[0].conj(), self.mu[1].conj(), self.mu[2].conj()],
        }
    }

    pub fn max_im(&self) -> f64 {
        self.mu.iter().map(|m| m.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_re(&self) -> f64 {
        self.mu.iter().map(|m| m.re.abs()).fold(0.0, f64::max)
    }

    /// Smallest pairwise coordinate distance.
    pub fn min_gap(&self) -> f64 {
        let m = &self.mu;
        [(m[0] - m[1]).norm(), (m[0] - m[2]).norm(), (m[1] - m[2]).norm()]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// The six Weyl elements acting on spectral parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeylElement {
    I,
    W2,
    W3,
    W4,
    W5,
    Wl,
}

impl WeylElement {
    pub const ALL: [WeylElement; 6] = [
        WeylElement::I,
        WeylElement::W2,
        WeylElement::W3,
        WeylElement::W4,
        WeylElement::W5,
        WeylElement::Wl,
    ];

    /// Coordinate permutation: (mu^w)_i = mu_{perm(i)}.
    pub fn perm(&self) -> [usize; 3] {
        match self {
            WeylElement::I => [0, 1, 2],
            WeylElement::W2 => [1, 0, 2],
            WeylElement::W3 => [0, 2, 1],
            WeylElement::W4 => [2, 0, 1],
            WeylElement::W5 => [1, 2, 0],
            WeylElement::Wl => [2, 1, 0],
        }
    }

    fn from_perm(p: [usize; 3]) -> WeylElement {
        for w in WeylElement::ALL {
            if w.perm() == p {
                return w;
            }
        }
        unreachable!("not a permutation of (0,1,2)")
    }

    /// Group composition in the action sense: mu^{a.then(b)} = (mu^a)^b.
    pub fn then(self, other: WeylElement) -> WeylElement {
        let a = self.perm();
        let b = other.perm();
        WeylElement::from_perm([a[b[0]], a[b[1]], a[b[2]]])
    }

    pub fn inverse(self) -> WeylElement {
        let p = self.perm();
        let mut q = [0usize; 3];
        for (i, &pi) in p.iter().enumerate() {
            q[pi] = i;
        }
        WeylElement::from_perm(q)
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeylElement::I => "I",
            WeylElement::W2 => "w2",
            WeylElement::W3 => "w3",
            WeylElement::W4 => "w4",
            WeylElement::W5 => "w5",
            WeylElement::Wl => "wl",
        }
    }

    /// Permute an integer 3-vector the same way spectral coordinates move.
    pub fn act_ivec(&self, v: [i32; 3]) -> [i32; 3] {
        let p = self.perm();
        [v[p[0]], v[p[1]], v[p[2]]]
    }
}

/// mu^w.
pub fn weyl_act(w: WeylElement, mu: &SpectralParameter) -> SpectralParameter {
    let p = w.perm();
    SpectralParameter {
        mu: [mu.mu[p[0]], mu.mu[p[1]], mu.mu[p[2]]],
    }
}

/// Integer shift pair (beta, eta) selecting a gamma-quotient kernel.
#[derive(Debug, Clone, Copy)]
pub struct GammaShift {
    pub beta: [i32; 3],
    pub eta: [i32; 3],
}

/// Signed torus point (y1, y2), both nonzero.
#[derive(Debug, Clone, Copy)]
pub struct TorusPoint {
    pub y1: f64,
    pub y2: f64,
}

impl TorusPoint {
    pub fn new(y1: f64, y2: f64) -> Result<Self> {
        if y1 == 0.0 || y2 == 0.0 || !y1.is_finite() || !y2.is_finite() {
            return Err(Error::Precondition(format!(
                "torus point needs nonzero finite coordinates, got ({y1}, {y2})"
            )));
        }
        Ok(TorusPoint { y1, y2 })
    }

    pub fn abs(&self) -> (f64, f64) {
        (self.y1.abs(), self.y2.abs())
    }

    pub fn signs(&self) -> (f64, f64) {
        (self.y1.signum(), self.y2.signum())
    }

    pub fn is_positive(&self) -> bool {
        self.y1 > 0.0 && self.y2 > 0.0
    }
}

/// Three complex components indexed by the central-row index m' in
/// {-1, 0, +1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerVector {
    pub comp: [Complex64; 3],
}

impl WhittakerVector {
    pub fn zero() -> Self {
        WhittakerVector {
            comp: [Complex64::new(0.0, 0.0); 3],
        }
    }

    /// Component for m' in {-1, 0, 1}.
    pub fn get(&self, mprime: i32) -> Complex64 {
        self.comp[(mprime + 1) as usize]
    }

    pub fn norm(&self) -> f64 {
        self.comp.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, o: &WhittakerVector) -> WhittakerVector {
        WhittakerVector {
            comp: [
                self.comp[0] - o.comp[0],
                self.comp[1] - o.comp[1],
                self.comp[2] - o.comp[2],
            ],
        }
    }

    /// Plain transpose pairing (no conjugation).
    pub fn dot(&self, o: &WhittakerVector) -> Complex64 {
        self.comp[0] * o.comp[0] + self.comp[1] * o.comp[1] + self.comp[2] * o.comp[2]
    }

    pub fn scale(&self, a: Complex64) -> WhittakerVector {
        WhittakerVector {
            comp: [self.comp[0] * a, self.comp[1] * a, self.comp[2] * a],
        }
    }

    pub fn add(&self, o: &WhittakerVector) -> WhittakerVector {
        WhittakerVector {
            comp: [
                self.comp[0] + o.comp[0],
                self.comp[1] + o.comp[1],
                self.comp[2] + o.comp[2],
            ],
        }
    }
}

/// Functional-equation constants for the coset representatives I, w4, w5,
/// extended to all of W by left w2-invariance.
pub struct FEConstants;

impl FEConstants {
    /// Coset representative carrying the constants of `w`.
    pub fn coset_rep(w: WeylElement) -> WeylElement {
        match w {
            WeylElement::I | WeylElement::W2 => WeylElement::I,
            WeylElement::W4 | WeylElement::Wl => WeylElement::W4,
            WeylElement::W5 | WeylElement::W3 => WeylElement::W5,
        }
    }

    pub fn c_w(rep: WeylElement) -> f64 {
        match rep {
            WeylElement::I => std::f64::consts::SQRT_2,
            WeylElement::W4 => 2.0,
            WeylElement::W5 => -2.0,
            _ => Self::c_w(Self::coset_rep(rep)),
        }
    }

    pub fn alpha(rep: WeylElement) -> [i32; 3] {
        match rep {
            WeylElement::I => [0, 1, 1],
            WeylElement::W4 => [1, 1, 0],
            WeylElement::W5 => [1, 0, 1],
            _ => Self::alpha(Self::coset_rep(rep)),
        }
    }

    /// Basis direction of the coset, indexed m' = (-1, 0, +1):
    /// I -> central unit vector, w4 -> (-1/2, 0, 1/2), w5 -> (1/2, 0, 1/2).
    pub fn u(rep: WeylElement) -> [f64; 3] {
        match rep {
            WeylElement::I => [0.0, 1.0, 0.0],
            WeylElement::W4 => [-0.5, 0.0, 0.5],
            WeylElement::W5 => [0.5, 0.0, 0.5],
            _ => Self::u(Self::coset_rep(rep)),
        }
    }
}

// ---------------------------------------------------------------------------
// Gamma-quotient kernels
// ---------------------------------------------------------------------------

/// Gamma arguments of the quotient kernel: three s1-factors, three
/// s2-factors, one denominator.
fn g_tilde_args(
    shift: &GammaShift,
    s1: Complex64,
    s2: Complex64,
    mu: &SpectralParameter,
) -> ([Complex64; 3], [Complex64; 3], Complex64) {
    let mut a = [Complex64::default(); 3];
    let mut b = [Complex64::default(); 3];
    let mut tot = 0i32;
    for i in 0..3 {
        a[i] = (shift.beta[i] as f64 + s1 - mu.mu(i)) / 2.0;
        b[i] = (shift.eta[i] as f64 + s2 + mu.mu(i)) / 2.0;
        tot += shift.beta[i] + shift.eta[i];
    }
    let den = (s1 + s2 + (tot - 2) as f64) / 2.0;
    (a, b, den)
}

/// The quotient of six gammas by one gamma.
pub fn g_tilde(
    shift: &GammaShift,
    s1: Complex64,
    s2: Complex64,
    mu: &SpectralParameter,
) -> Result<Complex64> {
    let policy = GammaEvalPolicy::default();
    let (a, b, den) = g_tilde_args(shift, s1, s2, mu);
    let mut lg = Complex64::new(0.0, 0.0);
    for z in a.iter().chain(b.iter()) {
        if pole_distance(*z) < policy.pole_tolerance {
            return Err(Error::PoleProximity(*z, policy.pole_tolerance));
        }
        lg += log_gamma_unchecked(*z);
    }
    // denominator 1/Gamma is entire; no pole guard needed
    Ok((lg - log_gamma_unchecked(den)).exp())
}

const SHIFT_CENTRAL: GammaShift = GammaShift {
    beta: [1, 1, 0],
    eta: [0, 0, 1],
};
const SHIFT_EDGE_PLAIN: GammaShift = GammaShift {
    beta: [0, 0, 1],
    eta: [0, 0, 1],
};
const SHIFT_EDGE_FLIP: GammaShift = GammaShift {
    beta: [0, 0, 1],
    eta: [1, 1, 0],
};

/// The three-component kernel row vector:
/// component 0 is sqrt(2) times the central kernel, components +-1 are the
/// sum and difference of the two edge kernels.
pub fn g1_vector(s1: Complex64, s2: Complex64, mu: &SpectralParameter) -> Result<WhittakerVector> {
    let g0 = g_tilde(&SHIFT_CENTRAL, s1, s2, mu)?;
    let gp = g_tilde(&SHIFT_EDGE_PLAIN, s1, s2, mu)?;
    let gf = g_tilde(&SHIFT_EDGE_FLIP, s1, s2, mu)?;
    Ok(WhittakerVector {
        comp: [gp - gf, std::f64::consts::SQRT_2 * g0, gp + gf],
    })
}

// ---------------------------------------------------------------------------
// The completed Whittaker vector
// ---------------------------------------------------------------------------

/// Cached contour grid of the three kernel components, reusable across torus
/// points. Values carry the quadrature weights and the global 1/(4 pi^2)
/// so an evaluation is a pure weighted power sum.
pub struct W1Grid {
    s: Vec<Complex64>,
    step: f64,
    /// comp[c][j*n + k] for c = m'+1.
    comp: [Vec<Complex64>; 3],
}

impl W1Grid {
    /// Sample the kernels on the tensor grid of `ctl` (both lines share the
    /// contour placement; `ctl.re_parts[0]` is used for both variables).
    pub fn build(mu: &SpectralParameter, ctl: &ContourSpec) -> Result<W1Grid> {
        let sigma = ctl.re_parts[0];
        if sigma <= mu.max_re() {
            return Err(Error::ContourPinch(sigma - mu.max_re()));
        }
        let n = ctl.nodes;
        let h = 2.0 * ctl.height / (n - 1) as f64;
        let s: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(sigma, -ctl.height + i as f64 * h))
            .collect();

        // per-axis log-gamma sums for the three shift patterns
        let axis_sum = |pattern: [i32; 3], second: bool| -> Vec<Complex64> {
            s.iter()
                .map(|&z| {
                    let mut lg = Complex64::new(0.0, 0.0);
                    for i in 0..3 {
                        let arg = if second {
                            (pattern[i] as f64 + z + mu.mu(i)) / 2.0
                        } else {
                            (pattern[i] as f64 + z - mu.mu(i)) / 2.0
                        };
                        lg += log_gamma_unchecked(arg);
                    }
                    lg
                })
                .collect()
        };
        let a110 = axis_sum([1, 1, 0], false);
        let a001 = axis_sum([0, 0, 1], false);
        let b001 = axis_sum([0, 0, 1], true);
        let b110 = axis_sum([1, 1, 0], true);

        let norm = h * h / (4.0 * PI * PI) / (4.0 * PI * PI);
        let rows: Vec<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> = (0..n)
            .into_par_iter()
            .map(|j| {
                let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                let mut r0 = Vec::with_capacity(n);
                let mut rm = Vec::with_capacity(n);
                let mut rp = Vec::with_capacity(n);
                for k in 0..n {
                    let wk = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                    let w = wj * wk * norm;
                    // denominator (s1+s2+sum-2)/2: the shift totals are 3
                    // for the central and flipped kernels, 2 for the plain
                    // edge kernel
                    let den3 = log_gamma_unchecked((s[j] + s[k] + 1.0) / 2.0);
                    let den2 = log_gamma_unchecked((s[j] + s[k]) / 2.0);
                    let g0 = (a110[j] + b001[k] - den3).exp();
                    let gp = (a001[j] + b001[k] - den2).exp();
                    let gf = (a001[j] + b110[k] - den3).exp();
                    rm.push((gp - gf) * w);
                    r0.push(std::f64::consts::SQRT_2 * g0 * w);
                    rp.push((gp + gf) * w);
                }
                (rm, r0, rp)
            })
            .collect();
        let mut comp = [
            Vec::with_capacity(n * n),
            Vec::with_capacity(n * n),
            Vec::with_capacity(n * n),
        ];
        for (rm, r0, rp) in rows {
            comp[0].extend(rm);
            comp[1].extend(r0);
            comp[2].extend(rp);
        }
        Ok(W1Grid { s, step: h, comp })
    }

    pub fn nodes(&self) -> usize {
        self.s.len()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// W*(y, mu) for positive y from the cached grid.
    pub fn eval(&self, y1: f64, y2: f64) -> WhittakerVector {
        debug_assert!(y1 > 0.0 && y2 > 0.0);
        let l1 = (PI * y1).ln();
        let l2 = (PI * y2).ln();
        let p1: Vec<Complex64> = self.s.iter().map(|&s| ((1.0 - s) * l1).exp()).collect();
        let p2: Vec<Complex64> = self.s.iter().map(|&s| ((1.0 - s) * l2).exp()).collect();
        self.eval_pre(&p1, &p2)
    }

    fn eval_pre(&self, p1: &[Complex64], p2: &[Complex64]) -> WhittakerVector {
        let n = self.s.len();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (c, comp) in self.comp.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &a) in p1.iter().enumerate() {
                let row = &comp[j * n..(j + 1) * n];
                let mut inner = Complex64::new(0.0, 0.0);
                for (v, &b) in row.iter().zip(p2) {
                    inner += v * b;
                }
                acc += a * inner;
            }
            out[c] = acc;
        }
        WhittakerVector { comp: out }
    }

    /// Batch evaluation over a rectangular grid of positive torus points;
    /// rows indexed by y1, columns by y2. Uses two matrix products per
    /// component so the gamma samples are touched once.
    pub fn eval_grid(&self, y1s: &[f64], y2s: &[f64]) -> Vec<Vec<WhittakerVector>> {
        let n = self.s.len();
        let pow = |y: f64| -> Vec<Complex64> {
            let l = (PI * y).ln();
            self.s.iter().map(|&s| ((1.0 - s) * l).exp()).collect()
        };
        let p1: Vec<Vec<Complex64>> = y1s.iter().map(|&y| pow(y)).collect();
        let p2: Vec<Vec<Complex64>> = y2s.iter().map(|&y| pow(y)).collect();
        // B[c][j][b] = sum_k comp[c][j,k] p2[b][k]
        let b_mats: Vec<Vec<Complex64>> = (0..3)
            .map(|c| {
                (0..n)
                    .into_par_iter()
                    .flat_map_iter(|j| {
                        let row = &self.comp[c][j * n..(j + 1) * n];
                        p2.iter()
                            .map(|p| {
                                let mut acc = Complex64::new(0.0, 0.0);
                                for (v, &q) in row.iter().zip(p.iter()) {
                                    acc += v * q;
                                }
                                acc
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        let nb = y2s.len();
        p1.par_iter()
            .map(|pa| {
                (0..nb)
                    .map(|b| {
                        let mut comp = [Complex64::new(0.0, 0.0); 3];
                        for (c, bm) in b_mats.iter().enumerate() {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for (j, &a) in pa.iter().enumerate() {
                                acc += a * bm[j * nb + b];
                            }
                            comp[c] = acc;
                        }
                        WhittakerVector { comp }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Default contour for the Whittaker integral: lines at 3/4, height from the
/// decay formula.
pub fn w1_default_contour(mu: &SpectralParameter, rel_tol: f64) -> ContourSpec {
    let height = ContourSpec::default_height(rel_tol, mu.max_im()).min(60.0);
    let nodes = ((2.0 * height / 0.125).ceil() as usize) | 1;
    ContourSpec::plane(0.75, 0.75, height, nodes.max(401), rel_tol)
}

/// The completed Whittaker vector at a positive torus point.
pub fn whittaker_w1star(
    y: &TorusPoint,
    mu: &SpectralParameter,
    ctl: &ContourSpec,
) -> Result<WhittakerVector> {
    if !y.is_positive() {
        return Err(Error::Precondition(format!(
            "evaluation requires positive torus coordinates, got ({}, {})",
            y.y1, y.y2
        )));
    }
    if mu.max_re() >= 0.5 {
        return Err(Error::Precondition(format!(
            "spectral real parts must lie in (-1/2, 1/2), got {}",
            mu.max_re()
        )));
    }
    let grid = W1Grid::build(mu, ctl)?;
    Ok(grid.eval(y.y1, y.y2))
}

// ---------------------------------------------------------------------------
// Archimedean factors and leading asymptotics
// ---------------------------------------------------------------------------

/// pi^{-3/2 + mu3 - mu1} Gamma((1+a1+mu1-mu2)/2) Gamma((1+a2+mu1-mu3)/2)
/// Gamma((1+a3+mu2-mu3)/2).
pub fn lambda_alpha(alpha: [i32; 3], mu: &SpectralParameter) -> Result<Complex64> {
    let tol = GammaEvalPolicy::default().pole_tolerance;
    let args = [
        (1.0 + alpha[0] as f64 + mu.mu(0) - mu.mu(1)) / 2.0,
        (1.0 + alpha[1] as f64 + mu.mu(0) - mu.mu(2)) / 2.0,
        (1.0 + alpha[2] as f64 + mu.mu(1) - mu.mu(2)) / 2.0,
    ];
    let mut lg = (-1.5 + mu.mu(2) - mu.mu(0)) * PI.ln();
    for z in args {
        if pole_distance(z) < tol {
            return Err(Error::PoleProximity(z, tol));
        }
        lg += log_gamma_unchecked(z);
    }
    Ok(lg.exp())
}

/// Power function y1^{1 - mu3} y2^{1 + mu1} for positive y.
pub fn power_function(y1: f64, y2: f64, mu: &SpectralParameter) -> Complex64 {
    ((1.0 - mu.mu(2)) * y1.ln() + (1.0 + mu.mu(0)) * y2.ln()).exp()
}

/// Six-term first-order expansion of W*(y, mu) as y -> 0: each Weyl
/// translate contributes its power function times an archimedean factor
/// along the coset's basis direction.
pub fn whittaker_leading(y: &TorusPoint, mu: &SpectralParameter) -> Result<WhittakerVector> {
    if !y.is_positive() {
        return Err(Error::Precondition(
            "leading expansion requires positive torus coordinates".into(),
        ));
    }
    let tol = GammaEvalPolicy::default().pole_tolerance;
    if mu.min_gap() < tol {
        return Err(Error::DegenerateSpectrum(mu.min_gap()));
    }
    let mut total = WhittakerVector::zero();
    for w in WeylElement::ALL {
        let rep = FEConstants::coset_rep(w);
        let alpha_tilde = {
            let a = WeylElement::Wl.act_ivec(FEConstants::alpha(rep));
            [a[0] - 1, a[1] - 1, a[2] - 1]
        };
        let mu_w = weyl_act(w, mu);
        let mu_wwl = weyl_act(w.then(WeylElement::Wl), mu);
        let lam = lambda_alpha(alpha_tilde, &mu_wwl)?;
        let p = power_function(y.y1, y.y2, &mu_w);
        let u = FEConstants::u(rep);
        let coef = FEConstants::c_w(rep).abs() * PI.powf(1.5);
        for c in 0..3 {
            total.comp[c] += coef * p * lam * u[c];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn weyl_group_axioms_exhaustive() {
        // closure and associativity over all 36 products, plus the named
        // relations
        for a in WeylElement::ALL {
            for b in WeylElement::ALL {
                let ab = a.then(b);
                assert!(WeylElement::ALL.contains(&ab));
                for d in WeylElement::ALL {
                    assert_eq!(ab.then(d), a.then(b.then(d)));
                }
            }
            assert_eq!(a.then(a.inverse()), WeylElement::I);
        }
        assert_eq!(WeylElement::W2.then(WeylElement::W2), WeylElement::I);
        assert_eq!(WeylElement::W3.then(WeylElement::W3), WeylElement::I);
        let w4 = WeylElement::W4;
        assert_eq!(w4.then(w4).then(w4), WeylElement::I);
        assert_eq!(WeylElement::W4.inverse(), WeylElement::W5);
        // the coset pairing used by the functional-equation table
        assert_eq!(WeylElement::W2.then(WeylElement::W4), WeylElement::Wl);
        assert_eq!(WeylElement::W2.then(WeylElement::W5), WeylElement::W3);
        // w4 = w3 w2 in the same composition order
        assert_eq!(WeylElement::W3.then(WeylElement::W2), WeylElement::W4);
    }

    #[test]
    fn weyl_action_examples() {
        let mu = SpectralParameter::new(c(0.3, 0.5), c(-0.1, 0.2));
        assert_eq!(weyl_act(WeylElement::I, &mu), mu);
        let rev = weyl_act(WeylElement::Wl, &mu);
        assert_eq!(rev.mu(0), mu.mu(2));
        assert_eq!(rev.mu(2), mu.mu(0));
        // 3-cycle composes to identity, sum stays zero
        let m4 = weyl_act(WeylElement::W4, &mu);
        let m44 = weyl_act(WeylElement::W4, &m4);
        let m444 = weyl_act(WeylElement::W4, &m44);
        assert_eq!(m444, mu);
        let s = m4.mu(0) + m4.mu(1) + m4.mu(2);
        assert!(s.norm() < 1e-15);
    }

    #[test]
    fn g_tilde_base_value() {
        // the base kernel at the unit point evaluates to 2 pi
        let mu = SpectralParameter::new(c(0.0, 0.0), c(0.0, 0.0));
        let v = g_tilde(&SHIFT_CENTRAL, c(1.0, 0.0), c(1.0, 0.0), &mu).unwrap();
        assert!((v - 2.0 * PI).norm() < 1e-13, "{v}");
        // frozen 25-digit oracle at a nonzero spectral point
        let mu = SpectralParameter::new(c(0.0, 0.5), c(0.0, 0.3));
        let v = g_tilde(&SHIFT_CENTRAL, c(0.9, 0.0), c(1.1, 0.0), &mu).unwrap();
        let want = c(1.70211143724977333, -2.35386539963456966);
        assert!((v - want).norm() / want.norm() < 1e-13, "{v}");
    }

    #[test]
    fn g_tilde_mu12_swap_invariance() {
        // swapping mu1 <-> mu2 permutes equal-shift factors when the first
        // two shift entries agree
        let mu = SpectralParameter::new(c(0.1, 0.7), c(-0.2, 0.4));
        let mw = weyl_act(WeylElement::W2, &mu);
        for shift in [SHIFT_CENTRAL, SHIFT_EDGE_PLAIN, SHIFT_EDGE_FLIP] {
            let a = g_tilde(&shift, c(0.8, 0.3), c(0.9, -0.1), &mu).unwrap();
            let b = g_tilde(&shift, c(0.8, 0.3), c(0.9, -0.1), &mw).unwrap();
            assert!((a - b).norm() < 1e-13 * a.norm());
        }
    }

    #[test]
    fn g_tilde_pole_rejection() {
        let mu = SpectralParameter::new(c(0.0, 0.0), c(0.0, 0.0));
        // s1 = mu3 - beta3 puts the third s1-factor at its pole
        let bad = g_tilde(&SHIFT_EDGE_PLAIN, c(-1.0, 0.0), c(1.0, 0.0), &mu);
        assert!(matches!(bad, Err(Error::PoleProximity(..))));
    }

    #[test]
    fn g1_component_relations() {
        let mu = SpectralParameter::new(c(0.0, 0.6), c(0.0, -0.2));
        let s1 = c(0.9, 0.4);
        let s2 = c(1.1, -0.3);
        let v = g1_vector(s1, s2, &mu).unwrap();
        let gf = g_tilde(&SHIFT_EDGE_FLIP, s1, s2, &mu).unwrap();
        // difference of the edge components isolates the flipped kernel
        let diff = v.get(1) - v.get(-1);
        assert!((diff - 2.0 * gf).norm() < 1e-13 * gf.norm());
        let g0 = g_tilde(&SHIFT_CENTRAL, s1, s2, &mu).unwrap();
        assert!((v.get(0) - std::f64::consts::SQRT_2 * g0).norm() < 1e-14 * g0.norm());
    }

    #[test]
    fn w1star_frozen_reference() {
        // value computed twice (independent quadrature stacks) before the
        // build; pinned here to guard the kernel assembly and normalization
        let mu = SpectralParameter::tempered(0.7, 0.3);
        let y = TorusPoint::new(0.9, 1.1).unwrap();
        let ctl = ContourSpec::plane(0.75, 0.75, 55.0, 901, 1e-10);
        let w = whittaker_w1star(&y, &mu, &ctl).unwrap();
        let want = [
            c(2.16533891e-08, -5.40625715e-09),
            c(7.34074796e-08, -7.86437647e-09),
            c(1.32709204e-07, 6.47286884e-09),
        ];
        for (got, want) in w.comp.iter().zip(want) {
            assert!((got - want).norm() < 1e-14 + 1e-7 * want.norm(), "{got} vs {want}");
        }
    }

    #[test]
    fn w1star_w2_invariance_and_conjugation() {
        let mu = SpectralParameter::tempered(0.8, 0.25);
        let y = TorusPoint::new(0.7, 1.3).unwrap();
        let ctl = w1_default_contour(&mu, 1e-9);
        let a = whittaker_w1star(&y, &mu, &ctl).unwrap();
        let b = whittaker_w1star(&y, &weyl_act(WeylElement::W2, &mu), &ctl).unwrap();
        for i in 0..3 {
            assert!((a.comp[i] - b.comp[i]).norm() < 1e-9 * a.norm());
        }
        // Schwarz reflection: conj W(y, mu) = W(y, conj mu)
        let cc = whittaker_w1star(&y, &mu.conj(), &ctl).unwrap();
        for i in 0..3 {
            assert!((a.comp[i].conj() - cc.comp[i]).norm() < 1e-10 * a.norm());
        }
    }

    #[test]
    fn w1star_decay_in_y() {
        let mu = SpectralParameter::tempered(0.3, -0.3);
        let ctl = w1_default_contour(&mu, 1e-8);
        let grid = W1Grid::build(&mu, &ctl).unwrap();
        let near = grid.eval(1.0, 1.0);
        let far = grid.eval(5.0, 5.0);
        assert!(near.norm() > 1e3 * far.norm(), "{} {}", near.norm(), far.norm());
    }

    #[test]
    fn w1star_contour_shift_independence() {
        let mu = SpectralParameter::tempered(0.5, 0.1);
        let y = TorusPoint::new(1.2, 0.6).unwrap();
        let a = whittaker_w1star(&y, &mu, &ContourSpec::plane(0.75, 0.75, 45.0, 721, 1e-9)).unwrap();
        let b = whittaker_w1star(&y, &mu, &ContourSpec::plane(1.0, 1.0, 45.0, 721, 1e-9)).unwrap();
        for i in 0..3 {
            assert!((a.comp[i] - b.comp[i]).norm() < 1e-9 * a.norm().max(1e-30));
        }
    }

    #[test]
    fn separable_grid_matches_direct_plane_quadrature() {
        use crate::mellin::{build_grid, eval_powers};
        let mu = SpectralParameter::tempered(0.45, 0.15);
        let ctl = ContourSpec::plane(0.75, 0.75, 40.0, 641, 1e-9);
        let grid = W1Grid::build(&mu, &ctl).unwrap();
        // independent route: generic 2D grid on the central component
        let f = |s1: C, s2: C| {
            g1_vector(s1, s2, &mu).map(|v| v.get(0)).unwrap_or(C::new(0.0, 0.0))
        };
        let generic = build_grid(&f, &ctl).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let y1 = rng.random_range(0.3..2.0);
            let y2 = rng.random_range(0.3..2.0);
            let a = grid.eval(y1, y2).get(0);
            let b = eval_powers(&generic, PI * y1, PI * y2) / (4.0 * PI * PI);
            // the two assemblies sum identical data along different
            // floating-point paths; exponentially small values are
            // cancellation-limited, hence the roundoff floor
            assert!((a - b).norm() < 1e-5 * a.norm() + 1e-17, "{a} {b}");
        }
    }

    #[test]
    fn lambda_alpha_values() {
        let zero = SpectralParameter::new(c(0.0, 0.0), c(0.0, 0.0));
        let v = lambda_alpha([0, 0, 0], &zero).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let v = lambda_alpha([0, 1, 1], &zero).unwrap();
        assert!((v - 1.0 / PI).norm() < 1e-14);
        // frozen 25-digit value at a tempered point
        let mu = SpectralParameter::new(c(0.0, 0.5), c(0.0, 0.3));
        let v = lambda_alpha([0, 0, 0], &mu).unwrap();
        let want = c(-0.284299700419493132, 0.0540486081222496948);
        assert!((v - want).norm() / want.norm() < 1e-13);
        // pole case: mu1 - mu2 = -1 with alpha1 = 0
        let mu = SpectralParameter::new(c(-0.5, 0.0), c(0.5, 0.0));
        assert!(matches!(
            lambda_alpha([0, 0, 0], &mu),
            Err(Error::PoleProximity(..))
        ));
    }

    #[test]
    fn leading_terms_lie_along_coset_directions() {
        // the central-coset terms only touch m' = 0, the others only +-1
        for rep in [WeylElement::I, WeylElement::W4, WeylElement::W5] {
            let u = FEConstants::u(rep);
            if rep == WeylElement::I {
                assert_eq!(u, [0.0, 1.0, 0.0]);
            } else {
                assert_eq!(u[1], 0.0);
            }
        }
    }

    #[test]
    fn leading_asymptotics_ratio_test() {
        let mu = SpectralParameter::tempered(0.7, 0.3);
        let mut errs = Vec::new();
        for h in [0.2, 0.1, 0.05] {
            let y = TorusPoint::new(h, h).unwrap();
            let ctl = w1_default_contour(&mu, 1e-9);
            let w = whittaker_w1star(&y, &mu, &ctl).unwrap();
            let l = whittaker_leading(&y, &mu).unwrap();
            errs.push(w.sub(&l).norm() / l.norm());
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn leading_degenerate_spectrum_rejected() {
        let mu = SpectralParameter::new(c(0.0, 0.5), c(0.0, 0.5));
        let y = TorusPoint::new(0.1, 0.1).unwrap();
        assert!(matches!(
            whittaker_leading(&y, &mu),
            Err(Error::DegenerateSpectrum(_))
        ));
    }
}
