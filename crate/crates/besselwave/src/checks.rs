//! The acceptance battery: eleven self-contained verification suites, each
//! returning a [`CriterionOutcome`] whose check lines carry the measured
//! value next to the bound it must clear. The CLI `suite` subcommand and the
//! `acceptance` integration test render exactly these outcomes, so a claim
//! that the library is healthy always traces back to the same numbers.
//!
//! Everything here runs at the battery's own desk scale — N = 1920 radial
//! nodes on [0, 12] — independent of the smaller grids the module tests use.
//! All data, seeds, and sweeps are fixed: two runs produce identical values.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::altmodels::{
    closed_form_kernel, inverse_square_dispersive_check, inverse_square_kernel,
    kimura_flux_residual, InverseSquareSpec, KimuraMap,
};
use crate::estimates::{
    dispersive_decay_fit, dispersive_lr_fit, restriction_consistency, strichartz_ratio,
    weighted_dispersive_check, AdmissiblePair,
};
use crate::grid::{
    build_grid, log_log_slope, norm_lr, RadialFunction, RadialGrid, SpaceTimeField, TestFunction,
    TimeGrid,
};
use crate::hankel::{
    build_hankel, eigen_defect_fd, eigen_defect_from_bf, inversion_defect, plancherel_defect,
    transform, verify_weber_schafheitlin, verify_weber_schafheitlin_cos,
};
use crate::nls::{default_pairs, picard_solve, step_solve, NLSProblem};
use crate::propagator::{
    apply_propagator, apply_propagator_with_report, classical_limit_defect, kernel_eval,
    mass_integral, unitarity_defect, Method, PropagatorSpec,
};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Outcome plumbing
// ---------------------------------------------------------------------------

/// Direction of a check: measured value at most / at least the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    AtMost,
    AtLeast,
}

/// One measured quantity with the bound it has to clear.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub sense: Sense,
    pub passed: bool,
}

impl CheckLine {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckLine {
            name: name.into(),
            value,
            bound,
            sense: Sense::AtMost,
            passed: value.is_finite() && value <= bound,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckLine {
            name: name.into(),
            value,
            bound,
            sense: Sense::AtLeast,
            passed: value.is_finite() && value >= bound,
        }
    }

    /// Boolean check rendered as 0 (ok) / 1 (failed) against a 0 bound.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        CheckLine {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            bound: 0.0,
            sense: Sense::AtMost,
            passed: ok,
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.sense {
            Sense::AtMost => "<=",
            Sense::AtLeast => ">=",
        };
        let verdict = if self.passed { "ok" } else { "FAIL" };
        write!(
            f,
            "{}: {:.6e} {} {:.3e} [{}]",
            self.name, self.value, rel, self.bound, verdict
        )
    }
}

/// The result of one acceptance criterion: its index (1-based), a short
/// name, and every check line it measured.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub lines: Vec<CheckLine>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|l| l.passed)
    }

    /// One-line verdict: `criterion 4 (propagator structure): PASS (9 checks)`.
    pub fn verdict(&self) -> String {
        if self.passed() {
            format!(
                "criterion {} ({}): PASS ({} checks)",
                self.index,
                self.name,
                self.lines.len()
            )
        } else {
            let worst = self
                .lines
                .iter()
                .filter(|l| !l.passed)
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            format!("criterion {} ({}): FAIL — {}", self.index, self.name, worst)
        }
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.verdict())?;
        for line in &self.lines {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Short names, index order; `run_one(i)` accepts `1..=11`.
pub const CRITERION_NAMES: [&str; 11] = [
    "special functions",
    "hankel calculus",
    "weber-schafheitlin",
    "propagator structure",
    "mass identity",
    "classical limit",
    "dispersive decay",
    "strichartz diagnostics",
    "restriction routes",
    "nonlinear solvers",
    "comparison models",
];

/// The battery's radial grid: 48 panels of order 40 on [0, 12] — N = 1920.
pub fn acceptance_grid(a: f64) -> Result<Arc<RadialGrid>> {
    build_grid(a, 12.0, 48, 40)
}

/// Run one criterion by 1-based index.
pub fn run_one(index: usize) -> Result<CriterionOutcome> {
    match index {
        1 => criterion_1_special_functions(),
        2 => criterion_2_hankel_calculus(),
        3 => criterion_3_weber_schafheitlin(),
        4 => criterion_4_propagator_structure(),
        5 => criterion_5_mass_identity(),
        6 => criterion_6_classical_limit(),
        7 => criterion_7_dispersive_decay(),
        8 => criterion_8_strichartz(),
        9 => criterion_9_restriction(),
        10 => criterion_10_nonlinear(),
        11 => criterion_11_comparison_models(),
        _ => Err(Error::domain(format!(
            "run_one: criterion index {index} outside 1..=11"
        ))),
    }
}

/// Run the full battery in index order.
pub fn run_all() -> Result<Vec<CriterionOutcome>> {
    (1..=CRITERION_NAMES.len()).map(run_one).collect()
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| lo * step.powi(k as i32)).collect()
}

// ---------------------------------------------------------------------------
// 1. Special functions
// ---------------------------------------------------------------------------

/// Half-integer closed forms, the J_ν/J_{−ν} Wronskian, and the decay rate
/// of the large-z asymptotic remainder.
pub fn criterion_1_special_functions() -> Result<CriterionOutcome> {
    use crate::specfun::{bessel_j, bessel_j_prime};
    let mut lines = Vec::new();

    // J_{∓1/2}(z) = √(2/(πz))·{cos, sin}(z) on z ∈ [0.01, 50]
    let mut worst = 0.0f64;
    let mut z = 0.01;
    while z <= 50.0 {
        let amp = (2.0 / (PI * z)).sqrt();
        worst = worst.max((bessel_j(-0.5, z)? - amp * z.cos()).abs());
        worst = worst.max((bessel_j(0.5, z)? - amp * z.sin()).abs());
        z *= 1.07;
    }
    lines.push(CheckLine::at_most(
        "half-integer closed forms, z in [0.01, 50] (abs)",
        worst,
        1e-10,
    ));

    // J_ν J'_{−ν} − J'_ν J_{−ν} = −2 sin(νπ)/(πz)
    let mut worst = 0.0f64;
    for &nu in &[0.3f64, 0.7, 1.6] {
        let mut z = 0.1;
        while z <= 20.0 {
            let lhs = bessel_j(nu, z)? * bessel_j_prime(-nu, z)?
                - bessel_j_prime(nu, z)? * bessel_j(-nu, z)?;
            let rhs = -2.0 * (nu * PI).sin() / (PI * z);
            worst = worst.max((lhs / rhs - 1.0).abs());
            z *= 1.25;
        }
    }
    lines.push(CheckLine::at_most(
        "wronskian residual, nu in {0.3, 0.7, 1.6} (rel)",
        worst,
        1e-8,
    ));

    // |J_ν(z) − √(2/(πz)) cos(z − νπ/2 − π/4)| ~ z^{−3/2}: envelope slope
    let nu = 0.3;
    let mut pts = Vec::new();
    let mut z = 50.0;
    while z <= 500.0 {
        let mut env = 0.0f64;
        for k in 0..40 {
            let zz = z + k as f64 * (PI / 40.0);
            let lead = (2.0 / (PI * zz)).sqrt() * (zz - nu * PI / 2.0 - PI / 4.0).cos();
            env = env.max((bessel_j(nu, zz)? - lead).abs());
        }
        pts.push((z, env));
        z *= 1.6;
    }
    let slope = log_log_slope(&pts);
    lines.push(CheckLine::at_most(
        "large-z remainder slope vs -3/2 (rel)",
        (slope + 1.5).abs() / 1.5,
        0.05,
    ));

    Ok(CriterionOutcome {
        index: 1,
        name: CRITERION_NAMES[0],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 2. Hankel calculus
// ---------------------------------------------------------------------------

fn test_family() -> Vec<TestFunction> {
    vec![
        TestFunction::Gaussian {
            amplitude: 1.0,
            sigma: 1.0,
        },
        TestFunction::Gaussian {
            amplitude: 0.7,
            sigma: 0.6,
        },
        TestFunction::GaussianPoly {
            amplitude: 1.0,
            sigma: 1.0,
            even_coeffs: vec![1.0, 0.5],
        },
        TestFunction::GaussianPoly {
            amplitude: 0.5,
            sigma: 0.8,
            even_coeffs: vec![1.0, -0.3, 0.05],
        },
        // band 10 < ξ_max: representable on the transform grid, and far
        // enough out that the member's spatial tail at x_max stays below
        // the double-transform tolerance
        TestFunction::HankelBandlimited {
            amplitude: 1.0,
            band: 10.0,
        },
    ]
}

/// Gaussian fixed point, Plancherel, double-transform, and the eigenrelation
/// ℋ(B_a f) = −ξ²ℋ(f), each over ν ∈ {−1/2, 0, 1/2, 3/2} and the whole
/// test-function family.
pub fn criterion_2_hankel_calculus() -> Result<CriterionOutcome> {
    let mut fixed = 0.0f64;
    let mut plancherel = 0.0f64;
    let mut double = 0.0f64;
    let mut eigen_an = 0.0f64;
    let mut eigen_fd = 0.0f64;

    for &nu in &[-0.5f64, 0.0, 0.5, 1.5] {
        let a = 2.0 * nu + 1.0;
        let grid = acceptance_grid(a)?;
        let op = build_hankel(nu, &grid, &grid)?;

        // e^{−x²/2} is a fixed point of ℋ_ν
        let f = RadialFunction::from_fn(&grid, |x| Complex64::new((-0.5 * x * x).exp(), 0.0));
        let tf = transform(&op, &f)?;
        for (v, &xi) in tf.values.iter().zip(&grid.nodes) {
            fixed = fixed.max((v.re - (-0.5 * xi * xi).exp()).abs());
            fixed = fixed.max(v.im.abs());
        }

        for tfn in test_family() {
            let f = tfn.sample(&grid);
            plancherel = plancherel.max(plancherel_defect(&op, &f)?);
            double = double.max(inversion_defect(&op, &f)?);
            // the eigenrelation contract presumes an analytic derivative
            // oracle; the band-limited member's B_a image is realized by
            // quadrature, so it is checked through the transform identities
            // above instead
            if matches!(tfn, TestFunction::HankelBandlimited { .. }) {
                continue;
            }
            let bf = RadialFunction::from_fn(&grid, |x| {
                Complex64::new(tfn.apply_bessel_op(a, x), 0.0)
            });
            eigen_an = eigen_an.max(eigen_defect_from_bf(&op, &f, &bf)?);
            eigen_fd = eigen_fd.max(eigen_defect_fd(&op, &f)?);
        }
    }

    let lines = vec![
        CheckLine::at_most("gaussian fixed point (max abs)", fixed, 1e-6),
        CheckLine::at_most("plancherel defect (rel)", plancherel, 1e-6),
        CheckLine::at_most("double-transform identity (rel)", double, 1e-5),
        CheckLine::at_most(
            "eigenrelation, closed-form members, analytic B_a f (rel)",
            eigen_an,
            1e-6,
        ),
        CheckLine::at_most(
            "eigenrelation, closed-form members, finite differences (rel)",
            eigen_fd,
            1e-4,
        ),
    ];
    Ok(CriterionOutcome {
        index: 2,
        name: CRITERION_NAMES[1],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 3. Weber–Schafheitlin integrals
// ---------------------------------------------------------------------------

/// Damped oscillatory quadrature against the closed forms at 20 seeded
/// random (ν, x, y, t) tuples — ten sine-kernel, ten cosine-kernel.
pub fn criterion_3_weber_schafheitlin() -> Result<CriterionOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe55);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let cosine = k >= 10;
        let nu = if cosine {
            rng.random_range(-0.85..2.5)
        } else {
            rng.random_range(-1.85..2.5)
        };
        let x = rng.random_range(0.3..2.5);
        let y = rng.random_range(0.3..2.5);
        let t = rng.random_range(0.6..1.6);
        let (lhs, rhs) = if cosine {
            verify_weber_schafheitlin_cos(nu, x, y, t, 150.0, 1e-2)?
        } else {
            verify_weber_schafheitlin(nu, x, y, t, 150.0, 1e-2)?
        };
        worst = worst.max((lhs - rhs).abs());
    }
    let lines = vec![CheckLine::at_most(
        "quadrature vs closed form, 20 seeded tuples (abs)",
        worst,
        1e-4,
    )];
    Ok(CriterionOutcome {
        index: 3,
        name: CRITERION_NAMES[2],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 4. Propagator structure
// ---------------------------------------------------------------------------

/// Unitarity, the multiplier group law, kernel-vs-spectral agreement, and
/// the pointwise symmetry/parabolic-scaling structure of S_a.
pub fn criterion_4_propagator_structure() -> Result<CriterionOutcome> {
    let a = 0.5;
    let grid = acceptance_grid(a)?;
    let spec = PropagatorSpec::spectral(a, &grid)?;
    let phi = TestFunction::GaussianPoly {
        amplitude: 1.0,
        sigma: 1.0,
        even_coeffs: vec![1.0, 0.5],
    }
    .sample(&grid);
    let mut lines = Vec::new();

    // unitarity over both time signs
    let mut worst = 0.0f64;
    for &t in &[0.1f64, -0.1, 1.0, -1.0, 5.0, -5.0] {
        worst = worst.max(unitarity_defect(&spec, t, &phi)?);
    }
    lines.push(CheckLine::at_most(
        "unitarity defect, t in {±0.1, ±1, ±5} (rel)",
        worst,
        1e-6,
    ));

    // group law in the multiplier calculus: e^{−it₁ξ²}e^{−it₂ξ²} = e^{−i(t₁+t₂)ξ²}
    let (t1, t2) = (0.7, -1.9);
    let hat = transform(spec.hankel(), &phi)?;
    let mut pair = hat.clone();
    let mut joint = hat.clone();
    for ((p, j), &xi) in pair
        .values
        .iter_mut()
        .zip(joint.values.iter_mut())
        .zip(&grid.nodes)
    {
        *p *= Complex64::from_polar(1.0, -t1 * xi * xi);
        *p *= Complex64::from_polar(1.0, -t2 * xi * xi);
        *j *= Complex64::from_polar(1.0, -(t1 + t2) * xi * xi);
    }
    let u_pair = transform(spec.hankel(), &pair)?;
    let u_joint = transform(spec.hankel(), &joint)?;
    let defect = norm_lr(&u_pair.sub(&u_joint)?, 2.0) / norm_lr(&u_joint, 2.0);
    lines.push(CheckLine::at_most("group-law defect (rel)", defect, 1e-10));

    // kernel route against the spectral route inside the kernel window
    let kernel_spec = PropagatorSpec::kernel(a, &grid)?;
    let mut worst = 0.0f64;
    let mut in_window = true;
    for &t in &[0.5f64, 1.0, 2.0] {
        let us = apply_propagator(&spec, t, &phi)?;
        let (uk, report) = apply_propagator_with_report(&kernel_spec, t, &phi)?;
        in_window &= report.method_used == Method::Kernel && !report.fell_back;
        for (x, y) in us.values.iter().zip(&uk.values) {
            worst = worst.max((x - y).norm());
        }
    }
    lines.push(CheckLine::flag("kernel route used (no fallback)", in_window));
    lines.push(CheckLine::at_most(
        "kernel vs spectral, t in {0.5, 1, 2} (max abs)",
        worst,
        1e-4,
    ));

    // pointwise symmetry and parabolic scaling of the kernel
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a);
    let mut sym_worst = 0.0f64;
    let mut scale_worst = 0.0f64;
    for _ in 0..25 {
        let aa = rng.random_range(-0.9..3.0);
        let x = rng.random_range(0.0..8.0);
        let y = rng.random_range(0.01..8.0);
        let t = rng.random_range(0.05..4.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let s = kernel_eval(aa, x, y, t)?;
        let sym = kernel_eval(aa, y, x, t)?;
        sym_worst = sym_worst.max((s - sym).norm() / s.norm().max(1.0));
        let lam = 3.0;
        let scaled = kernel_eval(aa, lam * x, lam * y, lam * lam * t)?;
        scale_worst =
            scale_worst.max((scaled - s * lam.powf(-(aa + 1.0))).norm() / s.norm().max(1e-6));
    }
    lines.push(CheckLine::at_most(
        "kernel symmetry, 25 seeded tuples (rel)",
        sym_worst,
        1e-10,
    ));
    lines.push(CheckLine::at_most(
        "kernel parabolic scaling, lambda = 3 (rel)",
        scale_worst,
        1e-10,
    ));

    Ok(CriterionOutcome {
        index: 4,
        name: CRITERION_NAMES[3],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 5. Mass identity
// ---------------------------------------------------------------------------

/// Regularized total mass of the kernel: ∫ S_a(x, y, t) dω_a(y) = 1.
pub fn criterion_5_mass_identity() -> Result<CriterionOutcome> {
    let mut lines = Vec::new();
    let one = Complex64::new(1.0, 0.0);

    let mut worst = 0.0f64;
    for &a in &[-0.5f64, 0.0, 0.5, 1.0, 1.5] {
        for &(x, t) in &[(1.0f64, 1.0f64), (0.0, 0.5), (0.5, 1.3), (2.0, 0.8)] {
            let (m, _) = mass_integral(a, x, t)?;
            worst = worst.max((m - one).norm());
        }
    }
    lines.push(CheckLine::at_most(
        "mass defect, a in {-0.5, 0, 0.5, 1, 1.5} (abs)",
        worst,
        1e-3,
    ));

    let mut worst = 0.0f64;
    for &(x, t) in &[(0.5f64, 1.0f64), (1.0, 1.0)] {
        let (m, _) = mass_integral(1.9, x, t)?;
        worst = worst.max((m - one).norm());
    }
    lines.push(CheckLine::at_most(
        "mass defect near the a < 2 boundary, a = 1.9 (abs)",
        worst,
        5e-3,
    ));

    Ok(CriterionOutcome {
        index: 5,
        name: CRITERION_NAMES[4],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 6. Classical limit
// ---------------------------------------------------------------------------

/// a = 0 flow against the free-line formula on even Gaussian data.
pub fn criterion_6_classical_limit() -> Result<CriterionOutcome> {
    let grid = acceptance_grid(0.0)?;
    let spec = PropagatorSpec::spectral(0.0, &grid)?;
    let mut worst = 0.0f64;
    for &t in &[0.4f64, 0.7, 1.5] {
        worst = worst.max(classical_limit_defect(&spec, t)?);
    }
    let lines = vec![CheckLine::at_most(
        "free-line agreement on even gaussians, t in {0.4, 0.7, 1.5} (rel)",
        worst,
        1e-6,
    )];
    Ok(CriterionOutcome {
        index: 6,
        name: CRITERION_NAMES[5],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 7. Dispersive decay
// ---------------------------------------------------------------------------

/// Fitted sup-norm and L^r decay exponents for a ≥ 0, boundedness of the
/// two-term weighted ratios for −1 < a < 0, and the visible crossover
/// between the t^{−1/2} and t^{−(a+1)/2} regimes.
pub fn criterion_7_dispersive_decay() -> Result<CriterionOutcome> {
    let mut lines = Vec::new();

    // sup-norm law t^{−(a+1)/2} over t ∈ [0.1, 100]: the σ = 0.3 datum puts
    // the onset of decay (t ≈ σ²) well before the first sample
    let t_set = geometric(0.1, 100.0, 9);
    let sigma = 0.3;
    let mut worst = 0.0f64;
    for &a in &[0.0f64, 1.0, 2.0] {
        let grid = acceptance_grid(a)?;
        let spec = PropagatorSpec::spectral(a, &grid)?;
        let phi = TestFunction::Gaussian {
            amplitude: 1.0,
            sigma,
        }
        .sample(&grid);
        let fit = dispersive_decay_fit(&spec, &phi, &t_set)?;
        let target = -0.5 * (a + 1.0);
        worst = worst.max((fit.slope - target).abs() / target.abs());
    }
    lines.push(CheckLine::at_most(
        "sup-decay exponent, a in {0, 1, 2}, t in [0.1, 100] (rel)",
        worst,
        0.03,
    ));

    // interpolated L^r law at a = 0.5
    let a = 0.5;
    let grid = acceptance_grid(a)?;
    let spec = PropagatorSpec::spectral(a, &grid)?;
    let phi = TestFunction::Gaussian {
        amplitude: 1.0,
        sigma,
    }
    .sample(&grid);
    let mut worst = 0.0f64;
    for &r in &[4.0f64, 6.0] {
        let fit = dispersive_lr_fit(&spec, &phi, r, &t_set)?;
        let target = -(a + 1.0) * (0.5 - 1.0 / r);
        worst = worst.max((fit.slope - target).abs() / target.abs());
    }
    lines.push(CheckLine::at_most(
        "L^r decay exponent, r in {4, 6} at a = 0.5 (rel)",
        worst,
        0.03,
    ));

    // −1 < a < 0: the two-term weighted ratios stay bounded …
    let t_sweep = geometric(0.01, 100.0, 9);
    let mut bound_worst = 0.0f64;
    let mut early_worst = 0.0f64;
    let mut late_worst = 0.0f64;
    let mut min_separation = f64::INFINITY;
    for &a in &[-0.25f64, -0.5, -0.75] {
        let grid = acceptance_grid(a)?;
        let spec = PropagatorSpec::spectral(a, &grid)?;
        let phi = TestFunction::Gaussian {
            amplitude: 1.0,
            sigma: 1.0,
        }
        .sample(&grid);
        let rows = weighted_dispersive_check(&spec, &phi, 4.0, &t_sweep)?;
        let sup = rows
            .iter()
            .map(|r| r.ratio_inf.max(r.ratio_lr))
            .fold(0.0f64, f64::max);
        bound_worst = bound_worst.max(sup);

        // … and the two regimes of the weighted sup are visible on a bump
        // at x₀ = 6: the oscillatory regime decays like t^{−1/2} and hands
        // over to the origin regime t^{−(a+1)/2} once (2t)^{−a/2} beats the
        // datum-free constant 6^{−a/2}√(2/π)/G_ν(0) — between t ≈ 15 and
        // t ≈ 70 across this a-sweep. The sup over x > 0 needs the origin
        // limit alongside the grid samples: u(0, t) comes from the kernel
        // row at x = 0, which the dilated positions 2t·x_i cannot reach.
        let bump = RadialFunction::from_fn(&grid, |x| {
            Complex64::new((-(x - 6.0) * (x - 6.0) / (2.0 * 0.09)).exp(), 0.0)
        });
        let weighted_sup = |ts: &[f64]| -> Result<Vec<(f64, f64)>> {
            ts.iter()
                .map(|&t| {
                    let (u, pos) = crate::estimates::evolved_samples(&spec, t, &bump)?;
                    let mut sup = 0.0f64;
                    for (&v, &x) in u.values.iter().zip(&grid.nodes) {
                        let k1 = (pos * x).powf(0.5 * a).min(1.0);
                        sup = sup.max(k1 * v.norm());
                    }
                    let mut u0 = Complex64::new(0.0, 0.0);
                    for ((&w, &y), &p) in grid
                        .weights
                        .iter()
                        .zip(&grid.nodes)
                        .zip(&bump.values)
                    {
                        u0 += w * kernel_eval(a, 0.0, y, t)? * p;
                    }
                    Ok((t, sup.max(u0.norm())))
                })
                .collect()
        };
        let early = log_log_slope(&weighted_sup(&geometric(0.1, 0.5, 5))?);
        let late = log_log_slope(&weighted_sup(&geometric(700.0, 70000.0, 5))?);
        early_worst = early_worst.max((early + 0.5).abs());
        late_worst = late_worst.max((late + 0.5 * (a + 1.0)).abs());
        min_separation = min_separation.min(late - early);
    }
    lines.push(CheckLine::at_most(
        "weighted two-term ratios, a in {-0.25, -0.5, -0.75} (sup)",
        bound_worst,
        10.0,
    ));
    lines.push(CheckLine::at_most(
        "early-regime slope vs -1/2 (abs)",
        early_worst,
        0.06,
    ));
    lines.push(CheckLine::at_most(
        "late-regime slope vs -(a+1)/2 (abs)",
        late_worst,
        0.05,
    ));
    lines.push(CheckLine::at_least(
        "regime separation min over a (slope gap)",
        min_separation,
        0.08,
    ));

    Ok(CriterionOutcome {
        index: 7,
        name: CRITERION_NAMES[6],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 8. Strichartz diagnostics
// ---------------------------------------------------------------------------

/// Mixed-norm-to-data ratios for the diagonal admissible pair: invariance
/// along the parabolic scaling family and stability under window doubling.
pub fn criterion_8_strichartz() -> Result<CriterionOutcome> {
    let mut lines = Vec::new();
    for &a in &[0.0f64, 1.0] {
        let grid = acceptance_grid(a)?;
        let spec = PropagatorSpec::spectral(a, &grid)?;
        let pair = AdmissiblePair::diagonal(a)?;

        // φ_λ(x) = λ^{(a+1)/2} φ(λx) keeps ‖φ_λ‖_{L²_a} fixed; the exact
        // flow ties ratio(φ_λ, T) = ratio(φ, λ²T), so the λ-sweep at a fixed
        // window doubles as a window-tail probe. T = 160 keeps the slowest
        // member (λ = 1/4, effective window 10) inside the 2% band.
        let mut ratios = Vec::new();
        for &lam in &[0.25f64, 1.0, 4.0] {
            let phi = RadialFunction::from_fn(&grid, |x| {
                Complex64::new(
                    lam.powf(0.5 * (a + 1.0)) * (-0.5 * (lam * x) * (lam * x)).exp(),
                    0.0,
                )
            });
            ratios.push(strichartz_ratio(&spec, &pair, &phi, 160.0)?.ratio);
        }
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        lines.push(CheckLine::at_most(
            format!("scaling family spread at a = {a}, lambda in {{1/4, 1, 4}} (rel)"),
            hi / lo - 1.0,
            0.02,
        ));

        let phi = TestFunction::Gaussian {
            amplitude: 1.0,
            sigma: 1.0,
        }
        .sample(&grid);
        let r20 = strichartz_ratio(&spec, &pair, &phi, 20.0)?.ratio;
        let r40 = strichartz_ratio(&spec, &pair, &phi, 40.0)?.ratio;
        lines.push(CheckLine::at_most(
            format!("window doubling T = 20 → 40 at a = {a} (rel)"),
            (r40 - r20).abs() / r20,
            0.02,
        ));
    }
    Ok(CriterionOutcome {
        index: 8,
        name: CRITERION_NAMES[7],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 9. Restriction routes
// ---------------------------------------------------------------------------

/// The two computations of the parabola restriction functional agree, and
/// the lhs/rhs ratio is stable along the parabolic scaling family.
pub fn criterion_9_restriction() -> Result<CriterionOutcome> {
    let envelope = |s: f64| {
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    };
    let mut lines = Vec::new();

    let mut worst = 0.0f64;
    for &a in &[0.0f64, 1.0] {
        let grid = acceptance_grid(a)?;
        let spec = PropagatorSpec::spectral(a, &grid)?;
        let times = TimeGrid::uniform(0.0, 0.5, 33)?;
        let f = SpaceTimeField::from_fn(&grid, &times, |x, t| {
            Complex64::new((-0.5 * x * x).exp() * envelope((t - 0.25) / 0.25), 0.0)
        });
        let (_, _, defect) = restriction_consistency(&spec, &f)?;
        worst = worst.max(defect);
    }
    lines.push(CheckLine::at_most(
        "route defect, a in {0, 1} (rel)",
        worst,
        1e-5,
    ));

    let a = 1.0;
    let grid = acceptance_grid(a)?;
    let spec = PropagatorSpec::spectral(a, &grid)?;
    let mut ratios = Vec::new();
    let mut scale_defect = 0.0f64;
    for &lam in &[0.5f64, 1.0, 2.0] {
        let times = TimeGrid::uniform(0.0, 0.5 / (lam * lam), 33)?;
        let f = SpaceTimeField::from_fn(&grid, &times, |x, t| {
            Complex64::new(
                (-0.5 * (lam * x) * (lam * x)).exp() * envelope((lam * lam * t - 0.25) / 0.25),
                0.0,
            )
        });
        let (lhs, rhs, defect) = restriction_consistency(&spec, &f)?;
        scale_defect = scale_defect.max(defect);
        ratios.push(lhs / rhs);
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    lines.push(CheckLine::at_most(
        "route defect along the scaling family (rel)",
        scale_defect,
        1e-5,
    ));
    lines.push(CheckLine::at_most(
        "scaling-family ratio spread, lambda in {1/2, 1, 2} (rel)",
        hi / lo - 1.0,
        0.02,
    ));

    Ok(CriterionOutcome {
        index: 9,
        name: CRITERION_NAMES[8],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 10. Nonlinear solvers
// ---------------------------------------------------------------------------

/// The critical small-data Picard run, its split-step cross-check, stepper
/// mass conservation, exact critical datum-norm scale invariance, and the
/// subcritical hand-off globalization over [0, 5].
pub fn criterion_10_nonlinear() -> Result<CriterionOutcome> {
    let a = 1.0;
    let grid = acceptance_grid(a)?;
    let spec = PropagatorSpec::spectral(a, &grid)?;
    let mut lines = Vec::new();

    // critical p = 3 contraction at amplitude 0.05 on [0, 1]
    let pairs = default_pairs(a, 3.0)?;
    let phi = TestFunction::Gaussian {
        amplitude: 0.05,
        sigma: 1.0,
    }
    .sample(&grid);
    let prob = NLSProblem::new(a, Complex64::i(), 3.0, phi.clone(), 1.0)?;
    let rep_p = picard_solve(&spec, &prob, &pairs, 1e-10, 25)?;
    lines.push(CheckLine::flag("picard converged", rep_p.converged));
    let worst_factor = rep_p
        .contraction_factors
        .iter()
        .skip(1)
        .fold(0.0f64, |m, &f| m.max(f));
    lines.push(CheckLine::at_most(
        "picard contraction factor (max)",
        worst_factor,
        0.5,
    ));

    // independent split-step oracle on the same nodes (Δ = 1/64 ⊂ 4/1024)
    let rep_s = step_solve(&spec, &prob, 1.0 / 1024.0)?;
    let mut worst = 0.0f64;
    for (k, &t) in rep_p.solution.times.nodes.iter().enumerate() {
        let j = rep_s
            .solution
            .times
            .nodes
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12)
            .ok_or_else(|| Error::domain("criterion 10: stepper skipped a picard node"))?;
        let d: f64 = grid
            .weights
            .iter()
            .zip(rep_p.solution.slice(k).iter().zip(rep_s.solution.slice(j)))
            .map(|(&w, (x, y))| w * (x - y).norm_sqr())
            .sum();
        worst = worst.max(d.sqrt());
    }
    lines.push(CheckLine::at_most(
        "picard vs split-step in L^inf_t L^2_a (rel)",
        worst / norm_lr(&phi, 2.0),
        1e-4,
    ));

    // stepper mass conservation
    let mass0 = norm_lr(&phi, 2.0).powi(2);
    let drift = rep_s
        .mass_trace
        .iter()
        .fold(0.0f64, |m, &v| m.max((v - mass0).abs()));
    lines.push(CheckLine::at_most(
        "split-step mass drift (rel)",
        drift / mass0,
        1e-6,
    ));

    // critical scaling λ^{2/(p−1)} φ(λ·) preserves the datum norm exactly
    let n0 = norm_lr(&phi, 2.0);
    let mut worst = 0.0f64;
    for &lam in &[0.5f64, 2.0] {
        let scaled = TestFunction::Gaussian {
            amplitude: 0.05 * lam,
            sigma: 1.0 / lam,
        }
        .sample(&grid);
        worst = worst.max((norm_lr(&scaled, 2.0) - n0).abs() / n0);
    }
    lines.push(CheckLine::at_most(
        "critical datum-norm invariance, lambda in {1/2, 2} (rel)",
        worst,
        1e-10,
    ));

    // subcritical p = 2 globalization over [0, 5]: ten hand-off segments,
    // mass equality measured across every junction. The wide datum spreads
    // to σ_eff ≈ 4.5 by t = 5 and stays clear of the x_max = 12 wall; a
    // σ = 1 packet would reflect off it from t ≈ 3 on.
    let phi2 = TestFunction::Gaussian {
        amplitude: 0.3,
        sigma: 3.0,
    }
    .sample(&grid);
    let pairs2 = default_pairs(a, 2.0)?;
    let mass0 = norm_lr(&phi2, 2.0).powi(2);
    let segments = 10;
    let mut datum = phi2;
    let mut junction_gap = 0.0f64;
    let mut prev_end_mass = mass0;
    let mut reached = 0.0f64;
    for s in 0..segments {
        let local = NLSProblem::new(a, Complex64::i(), 2.0, datum, 0.5)?;
        let rep = picard_solve(&spec, &local, &pairs2, 1e-10, 25)?;
        if !rep.converged {
            return Err(Error::Convergence(format!(
                "criterion 10: globalization segment {s} failed to contract"
            )));
        }
        junction_gap = junction_gap.max((rep.mass_trace[0] - prev_end_mass).abs());
        let m = rep.solution.times.len();
        prev_end_mass = rep.mass_trace[m - 1];
        datum = rep.solution.slice_fn(m - 1);
        reached += rep.solution.times.nodes[m - 1];
    }
    lines.push(CheckLine::flag(
        "globalization reached T = 5",
        (reached - 5.0).abs() <= 1e-12,
    ));
    lines.push(CheckLine::at_most(
        "hand-off mass equality across 10 junctions (rel)",
        junction_gap / mass0,
        1e-6,
    ));

    Ok(CriterionOutcome {
        index: 10,
        name: CRITERION_NAMES[9],
        lines,
    })
}

// ---------------------------------------------------------------------------
// 11. Comparison models
// ---------------------------------------------------------------------------

/// The inverse-square kernel bridge against its closed form, the Kimura flux
/// identity, the Hardy unitary measure transfer, and boundedness of the
/// ℓ = 1/4 weighted dispersive table.
pub fn criterion_11_comparison_models() -> Result<CriterionOutcome> {
    let mut lines = Vec::new();

    // (xy)^{a/2} S_a against the J_{−ℓ−1/2} closed form on both time signs
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b);
    let mut worst = 0.0f64;
    for &a in &[-0.9f64, -0.5, 0.5, 0.9] {
        let ispec = InverseSquareSpec::new(a)?;
        for _ in 0..25 {
            let x = rng.random_range(0.05..6.0);
            let y = rng.random_range(0.05..6.0);
            let t = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let bridge = inverse_square_kernel(&ispec, x, y, t)?;
            let closed = closed_form_kernel(&ispec, x, y, t)?;
            worst = worst.max((bridge - closed).norm() / closed.norm().max(1.0));
        }
    }
    lines.push(CheckLine::at_most(
        "kernel bridge vs closed form, a in {±0.9, ±0.5} (rel)",
        worst,
        1e-10,
    ));

    // Kimura flux identity x^a ∂_x u = 2^{2b−1} y^b ∂_y v on gaussians
    let xs: Vec<f64> = (1..=18).map(|k| 0.25 * k as f64).collect();
    let mut worst = 0.0f64;
    for &a in &[0.5f64, 1.0, 2.0] {
        let map = KimuraMap::new(a)?;
        let u = |x: f64| (-0.5 * x * x).exp();
        let u_x = |x: f64| -x * (-0.5 * x * x).exp();
        worst = worst.max(kimura_flux_residual(&map, &u, &u_x, &xs));
    }
    lines.push(CheckLine::at_most(
        "kimura flux identity, a in {0.5, 1, 2} (rel)",
        worst,
        1e-6,
    ));

    // ‖x^{−a/2} v‖_{L²_a} = ‖v‖_{L²(dx)} on seeded data
    let a = 0.7;
    let grid = acceptance_grid(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xa17);
    let v: Vec<Complex64> = grid
        .nodes
        .iter()
        .map(|&x| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                * (-x / 3.0).exp()
        })
        .collect();
    let u = RadialFunction {
        grid: Arc::clone(&grid),
        values: grid
            .nodes
            .iter()
            .zip(&v)
            .map(|(&x, &z)| x.powf(-a / 2.0) * z)
            .collect(),
    };
    let lhs = norm_lr(&u, 2.0);
    let rhs: f64 = grid
        .weights
        .iter()
        .zip(grid.nodes.iter().zip(&v))
        .map(|(&w, (&x, z))| w / x.powf(a) * z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    lines.push(CheckLine::at_most(
        "hardy unitary measure transfer (rel)",
        (lhs - rhs).abs() / rhs,
        1e-10,
    ));

    // ℓ = 1/4 weighted dispersive table stays bounded
    let ispec = InverseSquareSpec::from_ell(0.25)?;
    let grid = acceptance_grid(ispec.a)?;
    let spec = PropagatorSpec::spectral(ispec.a, &grid)?;
    let psi = RadialFunction::from_fn(&grid, |x| {
        Complex64::new((-(x - 2.0) * (x - 2.0) / 2.0).exp(), 0.0)
    });
    let rows = inverse_square_dispersive_check(&spec, &psi, &geometric(0.01, 100.0, 9))?;
    let sup = rows.iter().map(|r| r.1).fold(0.0f64, f64::max);
    lines.push(CheckLine::at_most(
        "inverse-square weighted ratios at l = 1/4 (sup)",
        sup,
        10.0,
    ));

    Ok(CriterionOutcome {
        index: 11,
        name: CRITERION_NAMES[10],
        lines,
    })
}

// ---------------------------------------------------------------------------
// Tests (plumbing only; the criteria themselves run in the acceptance
// integration target, where each gets its stated time budget)
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_line_senses_and_flags() {
        assert!(CheckLine::at_most("x", 1e-7, 1e-6).passed);
        assert!(!CheckLine::at_most("x", 2e-6, 1e-6).passed);
        assert!(CheckLine::at_least("x", 0.3, 0.08).passed);
        assert!(!CheckLine::at_least("x", 0.05, 0.08).passed);
        assert!(!CheckLine::at_most("x", f64::NAN, 1.0).passed);
        assert!(!CheckLine::at_most("x", f64::INFINITY, 1.0).passed);
        assert!(CheckLine::flag("x", true).passed);
        assert!(!CheckLine::flag("x", false).passed);
        let line = CheckLine::at_most("plancherel", 3e-7, 1e-6);
        let shown = line.to_string();
        assert!(shown.contains("plancherel") && shown.contains("ok"));
    }

    #[test]
    fn outcome_verdicts_and_indices() {
        let good = CriterionOutcome {
            index: 5,
            name: CRITERION_NAMES[4],
            lines: vec![CheckLine::at_most("m", 1e-4, 1e-3)],
        };
        assert!(good.passed());
        assert!(good.verdict().contains("PASS"));
        let bad = CriterionOutcome {
            index: 5,
            name: CRITERION_NAMES[4],
            lines: vec![CheckLine::at_most("m", 2e-3, 1e-3)],
        };
        assert!(!bad.passed());
        assert!(bad.verdict().contains("FAIL"));
        let empty = CriterionOutcome {
            index: 1,
            name: CRITERION_NAMES[0],
            lines: vec![],
        };
        assert!(!empty.passed());

        assert!(run_one(0).is_err());
        assert!(run_one(12).is_err());
        assert_eq!(CRITERION_NAMES.len(), 11);
    }

    #[test]
    fn mass_identity_criterion_passes() {
        let out = criterion_5_mass_identity().unwrap();
        assert!(out.passed(), "{out}");
        assert_eq!(out.index, 5);
        assert_eq!(out.lines.len(), 2);
    }
}
