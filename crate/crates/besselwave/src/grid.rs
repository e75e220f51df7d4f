//! Discretization of the weighted half-line (ℝ⁺, dω_a), dω_a = x^a dx, and
//! of the time axis, plus every norm the estimate verifiers consume.
//!
//! Quadrature: composite Gauss rules on `panels` equal subintervals of
//! [0, x_max]. The first panel uses a Gauss–Jacobi rule with weight x^a so
//! the integrable singularity of the measure density at x = 0 (any a > −1,
//! integer or not) is absorbed exactly; every other panel uses
//! Gauss–Legendre with the x^a factor folded into the weights, where the
//! integrand is analytic and the rule converges geometrically. The weights
//! therefore satisfy Σ w_j = x_max^{a+1}/(a+1) to machine precision.
//!
//! Nodes and weights come from the Golub–Welsch construction: eigenvalues
//! and first eigenvector components of the symmetric tridiagonal recurrence
//! matrix of the (monic) Jacobi polynomials, computed by cyclic Jacobi
//! rotations (n ≤ 64, so robustness beats asymptotic cost).

use crate::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Weighted radial grid on [0, x_max]: quadrature nodes and weights with
/// Σ w_j f(x_j) ≈ ∫₀^{x_max} f(x) x^a dx.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub a: f64,
    pub x_max: f64,
    pub panels: usize,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Complex samples on a [`RadialGrid`].
#[derive(Debug, Clone)]
pub struct RadialFunction {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<Complex64>,
}

/// Time nodes with composite-trapezoid weights; may straddle t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Time-major complex samples u(x_j, t_k) on a RadialGrid × TimeGrid.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    pub grid: Arc<RadialGrid>,
    pub times: TimeGrid,
    /// row k holds u(·, t_k); len = M·N
    pub values: Vec<Complex64>,
}

// ---------------------------------------------------------------------------
// Gauss rules
// ---------------------------------------------------------------------------

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, first components of the orthonormal eigenvectors).
fn jacobi_symmetric_eigen(mut m: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = m.len();
    // v = identity; we only need the full matrix to read off first rows
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p][q] * m[p][q];
            }
        }
        if off.sqrt() < 1e-15 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigs: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    let firsts: Vec<f64> = (0..n).map(|i| v[0][i]).collect();
    (eigs, firsts)
}

/// n-point Gauss–Jacobi rule on [−1, 1] with weight (1+u)^beta (alpha = 0);
/// beta = 0 reduces to Gauss–Legendre. Σ w_i = 2^{beta+1}/(beta+1).
pub(crate) fn gauss_jacobi(n: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    // monic three-term recurrence coefficients for Jacobi(0, beta)
    let diag = |k: usize| -> f64 {
        let k = k as f64;
        if k == 0.0 {
            beta / (beta + 2.0)
        } else {
            beta * beta / ((2.0 * k + beta) * (2.0 * k + beta + 2.0))
        }
    };
    let offsq = |k: usize| -> f64 {
        let k = k as f64;
        if k == 1.0 {
            4.0 * (1.0 + beta) / ((2.0 + beta) * (2.0 + beta) * (3.0 + beta))
        } else {
            4.0 * k * k * (k + beta) * (k + beta)
                / ((2.0 * k + beta).powi(2) * (2.0 * k + beta + 1.0) * (2.0 * k + beta - 1.0))
        }
    };
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = diag(i);
        if i + 1 < n {
            let b = offsq(i + 1).sqrt();
            m[i][i + 1] = b;
            m[i + 1][i] = b;
        }
    }
    let (eigs, firsts) = jacobi_symmetric_eigen(m);
    let mu0 = 2f64.powf(beta + 1.0) / (beta + 1.0);
    let mut pairs: Vec<(f64, f64)> = eigs
        .into_iter()
        .zip(firsts)
        .map(|(x, z)| (x, mu0 * z * z))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Composite Gauss grid for ∫₀^{x_max} · x^a dx.
pub fn build_grid(a: f64, x_max: f64, panels: usize, order: usize) -> Result<Arc<RadialGrid>> {
    if !(a > -1.0) {
        return Err(Error::domain(format!("build_grid: a = {a} must be > -1")));
    }
    if !(x_max > 0.0) {
        return Err(Error::domain(format!("build_grid: x_max = {x_max} must be > 0")));
    }
    if panels < 1 || order < 2 || order > 64 {
        return Err(Error::domain(format!(
            "build_grid: panels = {panels} (≥1), order = {order} (2..=64)"
        )));
    }
    let h = x_max / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);

    // first panel [0, h]: Jacobi rule absorbs x^a exactly
    let (uj, wj) = gauss_jacobi(order, a);
    for (u, w) in uj.iter().zip(&wj) {
        nodes.push(h * 0.5 * (1.0 + u));
        weights.push((h * 0.5).powf(a + 1.0) * w);
    }
    // remaining panels: Legendre with the x^a factor in the weight
    let (ul, wl) = gauss_jacobi(order, 0.0);
    for p in 1..panels {
        let (lo, hi) = (p as f64 * h, (p + 1) as f64 * h);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (u, w) in ul.iter().zip(&wl) {
            let x = mid + half * u;
            nodes.push(x);
            weights.push(half * w * x.powf(a));
        }
    }
    Ok(Arc::new(RadialGrid {
        a,
        x_max,
        panels,
        order,
        nodes,
        weights,
    }))
}

impl RadialGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫₀^{x_max} f dω_a by the grid rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Structural compatibility (same discretization parameters).
    pub fn compatible(&self, other: &RadialGrid) -> bool {
        self.a == other.a
            && self.x_max == other.x_max
            && self.panels == other.panels
            && self.order == other.order
    }
}

// ---------------------------------------------------------------------------
// Radial functions and norms
// ---------------------------------------------------------------------------

impl RadialFunction {
    pub fn from_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes.iter().map(|&x| f(x)).collect();
        RadialFunction {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn zeros(grid: &Arc<RadialGrid>) -> Self {
        RadialFunction {
            grid: Arc::clone(grid),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &RadialFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(u, v)| u + v)
                .collect(),
        })
    }

    pub fn sub(&self, other: &RadialFunction) -> Result<Self> {
        Ok(self.add(&other.scale(Complex64::new(-1.0, 0.0)))?)
    }

    pub fn conj(&self) -> Self {
        RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    fn check_same_grid(&self, other: &RadialFunction) -> Result<()> {
        if !self.grid.compatible(&other.grid) {
            return Err(Error::GridMismatch(
                "radial functions live on different grids".into(),
            ));
        }
        Ok(())
    }
}

/// ||f||_{L^r_a} = (Σ w_j |f_j|^r)^{1/r}; r = ∞ gives max_j |f_j|.
pub fn norm_lr(f: &RadialFunction, r: f64) -> f64 {
    weighted_lr(&f.grid.weights, &f.values, r)
}

/// Σ w_j conj(f_j) g_j ≈ ⟨f, g⟩_{L²_a}.
pub fn inner(f: &RadialFunction, g: &RadialFunction) -> Complex64 {
    f.grid
        .weights
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(&w, (u, v))| w * u.conj() * v)
        .sum()
}

pub(crate) fn weighted_lr(weights: &[f64], values: &[Complex64], r: f64) -> f64 {
    assert!(r >= 1.0, "norm exponent r = {r} must be ≥ 1");
    if r.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let s: f64 = weights
        .iter()
        .zip(values)
        .map(|(&w, v)| w * v.norm().powf(r))
        .sum();
    s.powf(1.0 / r)
}

// ---------------------------------------------------------------------------
// Time grids and mixed norms
// ---------------------------------------------------------------------------

impl TimeGrid {
    /// Uniform nodes on [t0, t1] with trapezoid weights.
    pub fn uniform(t0: f64, t1: f64, m: usize) -> Result<TimeGrid> {
        if m < 2 || !(t1 > t0) {
            return Err(Error::domain(format!(
                "TimeGrid::uniform: need m ≥ 2 and t1 > t0 (got m={m}, [{t0}, {t1}])"
            )));
        }
        let dt = (t1 - t0) / (m - 1) as f64;
        let nodes: Vec<f64> = (0..m).map(|k| t0 + k as f64 * dt).collect();
        Ok(TimeGrid::trapezoid(nodes))
    }

    /// Symmetric hybrid on [−T, T]: uniform spacing `dt_lin` through a linear
    /// patch |t| ≤ min(1, T), then geometric spacing growth by `ratio` out to
    /// T. Matches the structure of the Strichartz integrand: bounded at t=0
    /// (unitarity), algebraic tails from dispersive decay.
    pub fn symmetric_hybrid(t_max: f64, dt_lin: f64, ratio: f64) -> Result<TimeGrid> {
        if !(t_max > 0.0) || !(dt_lin > 0.0) || !(ratio > 1.0) {
            return Err(Error::domain(
                "TimeGrid::symmetric_hybrid: need t_max > 0, dt_lin > 0, ratio > 1",
            ));
        }
        let t_lin = t_max.min(1.0);
        let mut pos = vec![0.0];
        let mut t = 0.0;
        while t < t_lin - 1e-12 * t_max {
            t = (t + dt_lin).min(t_lin);
            pos.push(t);
        }
        let mut dt = dt_lin;
        while t < t_max - 1e-12 * t_max {
            dt *= ratio;
            t = (t + dt).min(t_max);
            pos.push(t);
        }
        let mut nodes: Vec<f64> = pos.iter().skip(1).map(|&t| -t).rev().collect();
        nodes.extend(pos);
        Ok(TimeGrid::trapezoid(nodes))
    }

    /// Composite trapezoid weights for arbitrary strictly increasing nodes.
    pub fn trapezoid(nodes: Vec<f64>) -> TimeGrid {
        let m = nodes.len();
        assert!(m >= 2, "time grid needs at least two nodes");
        let mut weights = vec![0.0; m];
        for k in 0..m - 1 {
            let half = 0.5 * (nodes[k + 1] - nodes[k]);
            weights[k] += half;
            weights[k + 1] += half;
        }
        TimeGrid { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl SpaceTimeField {
    pub fn from_fn(
        grid: &Arc<RadialGrid>,
        times: &TimeGrid,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.len() * times.len());
        for &t in &times.nodes {
            for &x in &grid.nodes {
                values.push(f(x, t));
            }
        }
        SpaceTimeField {
            grid: Arc::clone(grid),
            times: times.clone(),
            values,
        }
    }

    /// Row view: u(·, t_k).
    pub fn slice(&self, k: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn slice_fn(&self, k: usize) -> RadialFunction {
        RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.slice(k).to_vec(),
        }
    }
}

/// Mixed norm ||u||_{L^q_t L^r_a} = (Σ_k τ_k ||u(·,t_k)||_{L^r_a}^q)^{1/q};
/// q = ∞ takes the max over time nodes.
pub fn mixed_norm(u: &SpaceTimeField, q: f64, r: f64) -> f64 {
    let per_time: Vec<f64> = (0..u.times.len())
        .map(|k| weighted_lr(&u.grid.weights, u.slice(k), r))
        .collect();
    time_lq(&u.times, &per_time, q)
}

pub(crate) fn time_lq(times: &TimeGrid, values: &[f64], q: f64) -> f64 {
    assert!(q >= 1.0, "norm exponent q = {q} must be ≥ 1");
    if q.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    let s: f64 = times
        .weights
        .iter()
        .zip(values)
        .map(|(&w, &v)| w * v.powf(q))
        .sum();
    s.powf(1.0 / q)
}

/// Intersection and sum-space norms over exponent pair (q1, q2).
#[derive(Debug, Clone, Copy)]
pub struct SumIntersection {
    /// ||u||_{L^{q1} ∩ L^{q2}} = ||u||_{q1} + ||u||_{q2} (exact)
    pub intersection: f64,
    /// Upper bound for ||u||_{L^{q1} + L^{q2}} from the fixed split at |t|=1,
    /// minimized over which exponent takes which piece.
    pub sum_upper: f64,
}

/// Norms of the sum space L^{q1}+L^{q2} and intersection L^{q1}∩L^{q2} in
/// time (spatial exponent r fixed). The sum norm — an infimum over all
/// splittings u = u1 + u2 — is NOT computed exactly; the time split at
/// |t| = 1 mirrors the two-regime kernel bound the estimates use, and the
/// reported value is an upper bound.
pub fn sum_intersection_norms(
    u: &SpaceTimeField,
    q1: f64,
    q2: f64,
    r: f64,
) -> Result<SumIntersection> {
    if q1 == q2 {
        return Err(Error::domain(
            "sum_intersection_norms: q1 = q2 is a degenerate split",
        ));
    }
    let per_time: Vec<f64> = (0..u.times.len())
        .map(|k| weighted_lr(&u.grid.weights, u.slice(k), r))
        .collect();
    let masked = |inside: bool| -> Vec<f64> {
        per_time
            .iter()
            .zip(&u.times.nodes)
            .map(|(&v, &t)| if (t.abs() <= 1.0) == inside { v } else { 0.0 })
            .collect()
    };
    let (near, far) = (masked(true), masked(false));
    let split_a = time_lq(&u.times, &near, q1) + time_lq(&u.times, &far, q2);
    let split_b = time_lq(&u.times, &near, q2) + time_lq(&u.times, &far, q1);
    Ok(SumIntersection {
        intersection: time_lq(&u.times, &per_time, q1) + time_lq(&u.times, &per_time, q2),
        sum_upper: split_a.min(split_b),
    })
}

// ---------------------------------------------------------------------------
// Test-function family
// ---------------------------------------------------------------------------

/// Smooth rapidly decaying data with ∂_x φ = O(x) at the origin, so the
/// weighted Neumann flux x^a ∂_x φ vanishes for every a > −1.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// A e^{−x²/(2σ²)}
    Gaussian { amplitude: f64, sigma: f64 },
    /// A (c_0 + c_1 x² + c_2 x⁴ + …) e^{−x²/(2σ²)}
    GaussianPoly {
        amplitude: f64,
        sigma: f64,
        even_coeffs: Vec<f64>,
    },
    /// A ℋ_ν[bump supported on ξ ∈ [0, band)](x) — band-limited in the
    /// transform variable; realized by quadrature over an internal ξ-grid.
    HankelBandlimited { amplitude: f64, band: f64 },
}

impl TestFunction {
    pub fn eval(&self, a: f64, x: f64) -> f64 {
        match self {
            TestFunction::Gaussian { amplitude, sigma } => {
                amplitude * (-x * x / (2.0 * sigma * sigma)).exp()
            }
            TestFunction::GaussianPoly {
                amplitude,
                sigma,
                even_coeffs,
            } => {
                let x2 = x * x;
                let mut p = 0.0;
                for &c in even_coeffs.iter().rev() {
                    p = p * x2 + c;
                }
                amplitude * p * (-x2 / (2.0 * sigma * sigma)).exp()
            }
            TestFunction::HankelBandlimited { amplitude, band } => {
                amplitude * bandlimited_moment(a, *band, x, 0)
            }
        }
    }

    /// B_a φ = φ'' + (a/x) φ' evaluated analytically (for the band-limited
    /// member via B_a G_ν(xξ) = −ξ² G_ν(xξ)).
    pub fn apply_bessel_op(&self, a: f64, x: f64) -> f64 {
        match self {
            TestFunction::Gaussian { amplitude, sigma } => {
                let s2 = sigma * sigma;
                let g = amplitude * (-x * x / (2.0 * s2)).exp();
                (x * x / (s2 * s2) - (1.0 + a) / s2) * g
            }
            TestFunction::GaussianPoly {
                amplitude,
                sigma,
                even_coeffs,
            } => {
                let s2 = sigma * sigma;
                let x2 = x * x;
                let horner = |cs: &[f64]| -> f64 {
                    let mut p = 0.0;
                    for &c in cs.iter().rev() {
                        p = p * x2 + c;
                    }
                    p
                };
                // P(x) = Σ c_j x^{2j}; need P, P', P'', with P'/x and P''
                // expressed as even polynomials:
                // P'/x  = Σ_{j≥1} 2j c_j x^{2j−2}
                // P''   = Σ_{j≥1} 2j(2j−1) c_j x^{2j−2}
                let cs = even_coeffs;
                let mut dpox = Vec::new(); // P'/x coefficients in x²
                let mut ddp = Vec::new(); // P'' coefficients in x²
                for (j, &c) in cs.iter().enumerate().skip(1) {
                    let tj = 2.0 * j as f64;
                    dpox.push(tj * c);
                    ddp.push(tj * (tj - 1.0) * c);
                }
                let p = horner(cs);
                let dpox = horner(&dpox);
                let ddp = horner(&ddp);
                // φ = A P G, G = e^{−x²/2σ²}:
                // B_a φ = A [P'' + a P'/x − ((1+a) P + 2 x P')/σ² + x² P/σ⁴] G
                let g = (-x2 / (2.0 * s2)).exp();
                amplitude
                    * (ddp + a * dpox - ((1.0 + a) * p + 2.0 * x2 * dpox) / s2
                        + x2 * p / (s2 * s2))
                    * g
            }
            TestFunction::HankelBandlimited { amplitude, band } => {
                -amplitude * bandlimited_moment(a, *band, x, 2)
            }
        }
    }

    pub fn sample(&self, grid: &Arc<RadialGrid>) -> RadialFunction {
        RadialFunction::from_fn(grid, |x| Complex64::new(self.eval(grid.a, x), 0.0))
    }
}

/// ∫₀^B bump(ξ/B) ξ^m G_ν(xξ) dω_a(ξ) with bump(s) = e^{1 − 1/(1−s²)}.
fn bandlimited_moment(a: f64, band: f64, x: f64, m: i32) -> f64 {
    let nu = 0.5 * (a - 1.0);
    let g = build_grid(a, band, 8, 20).expect("internal ξ-grid");
    g.integrate(|xi| {
        let s = xi / band;
        let bump = (1.0 - 1.0 / (1.0 - s * s)).exp();
        bump * xi.powi(m) * crate::specfun::bessel_g(nu, x * xi).expect("bessel_g")
    })
}

// ---------------------------------------------------------------------------
// Small shared numerics
// ---------------------------------------------------------------------------

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion):
/// weights w_j such that f^(m)(x0) ≈ ∑ w_j f(xs[j]).
fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0f64; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// m-th derivative (m = 1 or 2) of grid samples via sliding 5-point stencils
/// on the non-uniform nodes; one-sided windows at the first/last two nodes.
pub fn differentiate(grid: &RadialGrid, values: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    if m == 0 || m > 2 {
        return Err(Error::domain(format!("differentiate: order {m} not in {{1, 2}}")));
    }
    let n = grid.len();
    if values.len() != n {
        return Err(Error::GridMismatch(format!(
            "differentiate: {} values on a grid of {n} nodes",
            values.len()
        )));
    }
    let width = 5.min(n);
    if width <= m {
        return Err(Error::domain("differentiate: too few nodes for the stencil"));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let start = i.saturating_sub(2).min(n - width);
        let w = fornberg_weights(grid.nodes[i], &grid.nodes[start..start + width], m);
        out[i] = w
            .iter()
            .zip(&values[start..start + width])
            .map(|(&wj, &vj)| vj * wj)
            .sum();
    }
    Ok(out)
}

/// Least-squares slope of ln y against ln x for raw positive (x, y) pairs;
/// the standard decay-rate fit y ≈ C x^slope.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logged: Vec<(f64, f64)> = points.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    linear_slope(&logged)
}

/// Least-squares slope of y against x.
pub fn linear_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Neville polynomial extrapolation of (h_i, y_i) samples to h = 0.
/// Used for Richardson limits of damped oscillatory integrals ε → 0⁺.
pub fn extrapolate_to_zero(points: &[(f64, Complex64)]) -> Complex64 {
    let n = points.len();
    let mut tab: Vec<Complex64> = points.iter().map(|p| p.1).collect();
    let hs: Vec<f64> = points.iter().map(|p| p.0).collect();
    for level in 1..n {
        for i in 0..n - level {
            let (h0, h1) = (hs[i], hs[i + level]);
            tab[i] = (tab[i + 1] * h0 - tab[i] * h1) / (h0 - h1);
        }
    }
    tab[0]
}
