//! The modified Hankel transform ℋ_ν as a dense quadrature matrix.
//!
//! For ν = (a−1)/2 and the measure dω_a = x^a dx = x^{2ν+1} dx,
//!
//! ```text
//! ℋ_ν(φ)(ξ) = ∫₀^∞ φ(y) G_ν(ξy) y^{2ν+1} dy,      G_ν(z) = z^{−ν} J_ν(z),
//! ```
//!
//! which is an L²_a isometry, equals its own inverse, and diagonalizes the
//! Bessel operator: ℋ_ν(B_a φ) = −ξ² ℋ_ν(φ). On a [`RadialGrid`] the
//! transform is the dense matrix `G_ν(ξ_i x_j) w_j`, so every one of those
//! structural facts becomes a finite-dimensional defect that this module
//! measures. The module also verifies the two Weber–Schafheitlin integrals
//! that produce the propagator kernel, and offers the space-time
//! Fourier–Hankel transform used by the restriction checks.

use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::{
    differentiate, extrapolate_to_zero, gauss_jacobi, norm_lr, RadialFunction, RadialGrid,
    SpaceTimeField,
};
use crate::specfun::{bessel_g, bessel_j};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

/// Dense modified Hankel transform between two grids carrying the weight
/// a = 2ν+1. Immutable once built; applications are pure.
#[derive(Debug, Clone)]
pub struct HankelOperator {
    nu: f64,
    in_grid: Arc<RadialGrid>,
    out_grid: Arc<RadialGrid>,
    /// Row-major `out.len() × in.len()`; entry (i, j) is G_ν(ξ_i x_j) w_j.
    /// Real, because G_ν is real on the half-line.
    matrix: Vec<f64>,
}

fn check_weight(nu: f64, grid: &RadialGrid, which: &str) -> Result<()> {
    let want = 2.0 * nu + 1.0;
    if (grid.a - want).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "{which} grid carries weight a = {} but ν = {nu} requires a = 2ν+1 = {want}",
            grid.a
        )));
    }
    Ok(())
}

/// Build ℋ_ν on `grid` (samples in x) mapped to `out_grid` (samples in ξ).
/// Both grids must carry the matching measure weight a = 2ν+1.
pub fn build_hankel(
    nu: f64,
    grid: &Arc<RadialGrid>,
    out_grid: &Arc<RadialGrid>,
) -> Result<HankelOperator> {
    if nu <= -1.0 {
        return Err(Error::domain(format!("build_hankel: ν = {nu} ≤ −1")));
    }
    check_weight(nu, grid, "input")?;
    check_weight(nu, out_grid, "output")?;
    let n_in = grid.len();
    let n_out = out_grid.len();
    let mut matrix = vec![0.0f64; n_out * n_in];
    let threads = crate::thread_count().min(n_out.max(1));
    let rows_per = n_out.div_ceil(threads);
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::new();
        for (block, chunk) in matrix.chunks_mut(rows_per * n_in).enumerate() {
            let first_row = block * rows_per;
            let xi = &out_grid.nodes;
            let xs = &grid.nodes;
            let ws = &grid.weights;
            handles.push(scope.spawn(move || -> Result<()> {
                for (r, row) in chunk.chunks_mut(n_in).enumerate() {
                    let x_out = xi[first_row + r];
                    for j in 0..n_in {
                        row[j] = bessel_g(nu, x_out * xs[j])? * ws[j];
                    }
                }
                Ok(())
            }));
        }
        for h in handles {
            h.join().expect("matrix build worker panicked")?;
        }
        Ok(())
    })?;
    Ok(HankelOperator {
        nu,
        in_grid: Arc::clone(grid),
        out_grid: Arc::clone(out_grid),
        matrix,
    })
}

impl HankelOperator {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn in_grid(&self) -> &Arc<RadialGrid> {
        &self.in_grid
    }

    pub fn out_grid(&self) -> &Arc<RadialGrid> {
        &self.out_grid
    }

    /// Matrix entry (i, j) = G_ν(ξ_i x_j) w_j.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.in_grid.len() + j]
    }

    fn check_input(&self, f: &RadialFunction) -> Result<()> {
        if !f.grid.compatible(&self.in_grid) {
            return Err(Error::GridMismatch(
                "transform: function lives on a different grid".into(),
            ));
        }
        Ok(())
    }
}

/// Apply the transform: samples of ℋ_ν(f) on the output grid.
pub fn transform(op: &HankelOperator, f: &RadialFunction) -> Result<RadialFunction> {
    op.check_input(f)?;
    let n_in = op.in_grid.len();
    let values = op
        .matrix
        .chunks(n_in)
        .map(|row| {
            row.iter()
                .zip(&f.values)
                .map(|(&m, &v)| v * m)
                .sum::<Complex64>()
        })
        .collect();
    Ok(RadialFunction {
        grid: Arc::clone(&op.out_grid),
        values,
    })
}

// ---------------------------------------------------------------------------
// Structural defects
// ---------------------------------------------------------------------------

/// Relative Plancherel defect  | ‖ℋf‖ − ‖f‖ | / ‖f‖ in L²_a.
pub fn plancherel_defect(op: &HankelOperator, f: &RadialFunction) -> Result<f64> {
    let nf = norm_lr(f, 2.0);
    if nf == 0.0 {
        return Err(Error::domain("plancherel_defect: zero function"));
    }
    let nt = norm_lr(&transform(op, f)?, 2.0);
    Ok((nt - nf).abs() / nf)
}

/// Self-reciprocity defect  ‖ℋ(ℋf) − f‖ / ‖f‖ in L²_a. Requires the
/// operator to map a grid to itself.
pub fn inversion_defect(op: &HankelOperator, f: &RadialFunction) -> Result<f64> {
    let nf = norm_lr(f, 2.0);
    if nf == 0.0 {
        return Ok(0.0);
    }
    let twice = transform(op, &transform(op, f)?)?;
    Ok(norm_lr(&twice.sub(f)?, 2.0) / nf)
}

/// Eigenrelation defect ‖ℋ(B_a f) + ξ²ℋ(f)‖ / scale with the Bessel-operator
/// image supplied directly (e.g. from a family's analytic formula).
pub fn eigen_defect_from_bf(
    op: &HankelOperator,
    f: &RadialFunction,
    bf: &RadialFunction,
) -> Result<f64> {
    let lhs = transform(op, bf)?;
    let mut rhs = transform(op, f)?;
    for (v, &xi) in rhs.values.iter_mut().zip(&op.out_grid.nodes) {
        *v *= -xi * xi;
    }
    let scale = norm_lr(&lhs, 2.0).max(norm_lr(&rhs, 2.0));
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(norm_lr(&lhs.sub(&rhs)?, 2.0) / scale)
}

/// Eigenrelation defect ‖ℋ(f″ + (a/x)f′) + ξ²ℋ(f)‖ / scale with
/// caller-supplied analytic derivative samples.
pub fn eigen_defect(
    op: &HankelOperator,
    f: &RadialFunction,
    f_xx: &RadialFunction,
    f_x: &RadialFunction,
) -> Result<f64> {
    op.check_input(f)?;
    op.check_input(f_xx)?;
    op.check_input(f_x)?;
    let a = op.in_grid.a;
    let values = f_xx
        .values
        .iter()
        .zip(&f_x.values)
        .zip(&op.in_grid.nodes)
        .map(|((&fxx, &fx), &x)| fxx + fx * (a / x))
        .collect();
    let bf = RadialFunction {
        grid: Arc::clone(&op.in_grid),
        values,
    };
    eigen_defect_from_bf(op, f, &bf)
}

/// Eigenrelation defect with derivatives taken by 5-point finite-difference
/// stencils on the grid itself (one-sided at the ends); the FD error
/// dominates the result.
pub fn eigen_defect_fd(op: &HankelOperator, f: &RadialFunction) -> Result<f64> {
    op.check_input(f)?;
    let d1 = differentiate(&op.in_grid, &f.values, 1)?;
    let d2 = differentiate(&op.in_grid, &f.values, 2)?;
    let f_x = RadialFunction {
        grid: Arc::clone(&op.in_grid),
        values: d1,
    };
    let f_xx = RadialFunction {
        grid: Arc::clone(&op.in_grid),
        values: d2,
    };
    eigen_defect(op, f, &f_xx, &f_x)
}

// ---------------------------------------------------------------------------
// Weber–Schafheitlin integrals
// ---------------------------------------------------------------------------

/// Which oscillatory kernel multiplies the two Bessel factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeberKind {
    /// ∫ z sin(tz²) J_ν(yz) J_ν(xz) dz = (2t)^{−1} cos((x²+y²)/4t − νπ/2) J_ν(xy/2t),  ν > −2
    Sine,
    /// ∫ z cos(tz²) J_ν(yz) J_ν(xz) dz = (2t)^{−1} sin((x²+y²)/4t − νπ/2) J_ν(xy/2t),  ν > −1
    Cosine,
}

/// Gauss–Legendre nodes/weights for ∫₀^{z_max}. The first panel is graded:
/// the substitution z = z₁ s^m with m = 4/(α+1) maps the integrand's z^α
/// endpoint behavior (α > −1, e.g. α = 3+2ν for the sine kernel) onto a
/// smooth s³ profile, so negative orders lose no accuracy at the origin.
/// Beyond it panel widths are bounded by the local phase speed
/// ≈ 2tz + x + y, so each panel sees at most ~π of phase and order-12 Gauss
/// resolves it to near machine precision.
fn oscillatory_nodes(t: f64, x: f64, y: f64, z_max: f64, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let order = 12;
    let (u, wu) = gauss_jacobi(order, 0.0);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();

    // m ≤ 23 keeps the smallest graded node above ~z₁·1e−60, where the
    // J_ν products (~z^{2ν}) still fit in f64 for every admissible ν > −2;
    // grading stays exact down to α + 1 = 4/23 and degrades gracefully
    // below.
    let z1 = (std::f64::consts::PI / (2.0 * t + x + y + 1.0)).min(z_max);
    let m = (4.0 / (alpha + 1.0)).clamp(1.0, 23.0);
    let g_order = 24;
    let (ug, wg) = gauss_jacobi(g_order, 0.0);
    for k in 0..g_order {
        let s = 0.5 * (1.0 + ug[k]);
        nodes.push(z1 * s.powf(m));
        weights.push(0.5 * wg[k] * z1 * m * s.powf(m - 1.0));
    }

    let mut z0 = z1;
    while z0 < z_max {
        let speed = 2.0 * t * (z0 + 1.0) + x + y + 1.0;
        let dz = (std::f64::consts::PI / speed).min(z_max - z0);
        let half = 0.5 * dz;
        for k in 0..order {
            nodes.push(z0 + half * (1.0 + u[k]));
            weights.push(half * wu[k]);
        }
        z0 += dz;
    }
    (nodes, weights)
}

/// Shared engine: damped quadrature of the oscillatory side, Richardson
/// extrapolation ε → 0, against the closed form. Returns (lhs, rhs).
pub fn weber_schafheitlin_pair(
    kind: WeberKind,
    nu: f64,
    x: f64,
    y: f64,
    t: f64,
    z_max: f64,
    damping: f64,
) -> Result<(f64, f64)> {
    let nu_floor = match kind {
        WeberKind::Sine => -2.0,
        WeberKind::Cosine => -1.0,
    };
    if nu <= nu_floor {
        return Err(Error::domain(format!(
            "weber_schafheitlin: ν = {nu} ≤ {nu_floor} for this kernel"
        )));
    }
    if t <= 0.0 || z_max <= 0.0 || x < 0.0 || y < 0.0 {
        return Err(Error::domain(
            "weber_schafheitlin: need t > 0, z_max > 0, x ≥ 0, y ≥ 0",
        ));
    }
    if damping < 0.0 {
        return Err(Error::domain("weber_schafheitlin: damping ε < 0"));
    }

    // Base integrand z·{sin,cos}(tz²)·J_ν(yz)·J_ν(xz)·w is ε-independent;
    // each damping level only rescales it by e^{−εz²}.
    let kernel_power = match kind {
        WeberKind::Sine => 3.0, // sin(tz²) contributes z²
        WeberKind::Cosine => 1.0,
    };
    let j_power = if x > 0.0 && y > 0.0 {
        2.0 * nu
    } else if x.max(y) > 0.0 {
        nu
    } else {
        0.0
    };
    let (nodes, weights) = oscillatory_nodes(t, x, y, z_max, kernel_power + j_power.min(0.0));
    let mut base = Vec::with_capacity(nodes.len());
    for (&z, &w) in nodes.iter().zip(&weights) {
        let osc = match kind {
            WeberKind::Sine => (t * z * z).sin(),
            WeberKind::Cosine => (t * z * z).cos(),
        };
        base.push(z * osc * bessel_j(nu, y * z)? * bessel_j(nu, x * z)? * w);
    }
    let damped_sum = |eps: f64| -> f64 {
        let mut acc = 0.0f64;
        let mut c = 0.0f64;
        for (&b, &z) in base.iter().zip(&nodes) {
            let term = b * (-eps * z * z).exp();
            let t1 = acc + term;
            c += if acc.abs() >= term.abs() {
                (acc - t1) + term
            } else {
                (term - t1) + acc
            };
            acc = t1;
        }
        acc + c
    };

    let lhs = if damping == 0.0 {
        damped_sum(0.0)
    } else {
        let levels = 6;
        let pts: Vec<(f64, Complex64)> = (0..levels)
            .map(|k| {
                let eps = damping * 0.5f64.powi(k);
                (eps, Complex64::new(damped_sum(eps), 0.0))
            })
            .collect();
        let full = extrapolate_to_zero(&pts).re;
        let short = extrapolate_to_zero(&pts[..levels as usize - 1]).re;
        if (full - short).abs() > 5e-5 * full.abs().max(1.0) {
            return Err(Error::Convergence(format!(
                "weber_schafheitlin: ε-extrapolation moved by {:.3e} on the last level",
                (full - short).abs()
            )));
        }
        full
    };

    let phase = (x * x + y * y) / (4.0 * t);
    let half_pi_nu = 0.5 * std::f64::consts::PI * nu;
    let rhs = match kind {
        WeberKind::Sine => (phase - half_pi_nu).cos(),
        WeberKind::Cosine => (phase - half_pi_nu).sin(),
    } / (2.0 * t)
        * bessel_j(nu, x * y / (2.0 * t))?;
    Ok((lhs, rhs))
}

/// Sine-kernel Weber–Schafheitlin identity (the one behind the propagator
/// kernel); valid for ν > −2.
pub fn verify_weber_schafheitlin(
    nu: f64,
    x: f64,
    y: f64,
    t: f64,
    z_max: f64,
    damping: f64,
) -> Result<(f64, f64)> {
    weber_schafheitlin_pair(WeberKind::Sine, nu, x, y, t, z_max, damping)
}

/// Cosine-kernel companion identity; valid for ν > −1.
pub fn verify_weber_schafheitlin_cos(
    nu: f64,
    x: f64,
    y: f64,
    t: f64,
    z_max: f64,
    damping: f64,
) -> Result<(f64, f64)> {
    weber_schafheitlin_pair(WeberKind::Cosine, nu, x, y, t, z_max, damping)
}

// ---------------------------------------------------------------------------
// Fourier–Hankel transform
// ---------------------------------------------------------------------------

/// Space-time Fourier–Hankel transform
/// û(ξ, τ) = ∫ e^{−2πiτt} ℋ_ν(u(·,t))(ξ) dt evaluated at the given
/// (ξ, τ) targets by the field's own time quadrature.
pub fn fourier_hankel(
    field: &SpaceTimeField,
    nu: f64,
    targets: &[(f64, f64)],
) -> Result<Vec<Complex64>> {
    check_weight(nu, &field.grid, "field")?;
    let n = field.grid.len();
    let m = field.times.len();
    // Space transform at each target ξ for every time slice.
    let mut rows = vec![0.0f64; targets.len() * n];
    for (row, &(xi, _)) in rows.chunks_mut(n).zip(targets) {
        for j in 0..n {
            row[j] = bessel_g(nu, xi * field.grid.nodes[j])? * field.grid.weights[j];
        }
    }
    let mut out = Vec::with_capacity(targets.len());
    for (row, &(_, tau)) in rows.chunks(n).zip(targets) {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..m {
            let slice = field.slice(k);
            let space: Complex64 = row.iter().zip(slice).map(|(&g, &v)| v * g).sum();
            let angle = -2.0 * std::f64::consts::PI * tau * field.times.nodes[k];
            acc += space * Complex64::from_polar(field.times.weights[k], angle);
        }
        out.push(acc);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
