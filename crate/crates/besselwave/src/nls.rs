//! The nonlinear Cauchy problem ∂_t u − iB_a u = μ|u|^{p−1}u on the
//! half-line: criticality classification, a Picard solver contracting on the
//! whole time window (the fixed-point route), an independent Strang
//! split-step integrator serving as its oracle, and the mass, scaling and
//! small-data diagnostics.

use std::sync::Arc;

use num_complex::Complex64;

use crate::estimates::{diagonal_exponent, AdmissiblePair};
use crate::grid::{mixed_norm, norm_lr, RadialFunction, SpaceTimeField, TimeGrid};
use crate::hankel::transform;
use crate::propagator::PropagatorSpec;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Criticality
// ---------------------------------------------------------------------------

/// Position of (a, p) relative to the L²_a-critical power p = 1 + 4/(a+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

/// Classify the power: critical iff p = 1 + 4/(a+1), i.e. (p−1)(a+1) = 4.
/// The product form keeps the comparison exact for rational inputs whose
/// product is representable (a = 1, p = 3; a = 0, p = 5; …).
pub fn classify(a: f64, p: f64) -> Result<Criticality> {
    if !(a > -1.0) {
        return Err(Error::domain(format!("classify: need a > −1, got {a}")));
    }
    if !(p > 1.0) {
        return Err(Error::domain(format!("classify: need p > 1, got {p}")));
    }
    let m = (p - 1.0) * (a + 1.0);
    if (m - 4.0).abs() <= 4.0 * 1e-13 {
        Ok(Criticality::Critical)
    } else if m < 4.0 {
        Ok(Criticality::Subcritical)
    } else {
        Ok(Criticality::Supercritical)
    }
}

/// The critical power 1 + 4/(a+1) itself.
pub fn critical_power(a: f64) -> f64 {
    1.0 + 4.0 / (a + 1.0)
}

// ---------------------------------------------------------------------------
// Problem & report types
// ---------------------------------------------------------------------------

/// One concrete Cauchy problem on the window [0, T].
#[derive(Debug, Clone)]
pub struct NLSProblem {
    pub a: f64,
    pub mu: Complex64,
    pub p: f64,
    pub phi: RadialFunction,
    pub horizon: f64,
    /// number of uniform time nodes covering [0, T]
    pub time_nodes: usize,
    /// lets picard_solve attempt powers beyond the critical one
    pub allow_supercritical: bool,
}

impl NLSProblem {
    pub fn new(a: f64, mu: Complex64, p: f64, phi: RadialFunction, horizon: f64) -> Result<Self> {
        if !(a > -1.0) {
            return Err(Error::domain(format!("NLSProblem: need a > −1, got {a}")));
        }
        if !(p > 1.0) {
            return Err(Error::domain(format!("NLSProblem: need p > 1, got {p}")));
        }
        if !(horizon > 0.0) {
            return Err(Error::domain("NLSProblem: horizon must be positive"));
        }
        if (phi.grid.a - a).abs() > 1e-12 {
            return Err(Error::GridMismatch(
                "NLSProblem: datum sampled for a different a".into(),
            ));
        }
        // default resolution: the Duhamel trapezoid must resolve e^{isξ²}
        // at the datum's moderate frequencies; 32 nodes per unit time keeps
        // ξ ≲ 4 content at ≤ 0.5 rad per step
        let time_nodes = 65.max((32.0 * horizon).ceil() as usize + 1);
        Ok(NLSProblem {
            a,
            mu,
            p,
            phi,
            horizon,
            time_nodes,
            allow_supercritical: false,
        })
    }

    pub fn with_time_nodes(mut self, m: usize) -> Result<Self> {
        if m < 9 {
            return Err(Error::domain("NLSProblem: need at least 9 time nodes"));
        }
        self.time_nodes = m;
        Ok(self)
    }

    pub fn allow_supercritical(mut self) -> Self {
        self.allow_supercritical = true;
        self
    }
}

/// Outcome of a solve: the field, the iteration record and the norms the
/// contraction argument watches.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: SpaceTimeField,
    pub iterations: usize,
    /// ‖v_{k+1}−v_k‖_X / ‖v_k−v_{k−1}‖_X per iteration (the first entry is
    /// relative to ‖v₀‖_X)
    pub contraction_factors: Vec<f64>,
    /// ‖u(·,t_k)‖²_{L²_a} per time node
    pub mass_trace: Vec<f64>,
    pub pair_norms: Vec<(AdmissiblePair, f64)>,
    /// the stop criterion was met within max_iter
    pub converged: bool,
    /// contraction factors exceeded 1 on three consecutive iterations
    pub diverged: bool,
}

/// The finite admissible-pair set the X-norm is monitored on: the diagonal
/// pair, the r = 4 pair (when admissible), and the proof's tilde pair
/// (q̃, r̃) = (pq′, pr′) built on the r = 4 pair — admissible exactly in the
/// critical case, where all three coincide for the canonical examples.
pub fn default_pairs(a: f64, p: f64) -> Result<Vec<AdmissiblePair>> {
    let mut rs = vec![diagonal_exponent(a)];
    if AdmissiblePair::new(a, 4.0).is_ok() {
        rs.push(4.0);
        let r4 = 4.0f64;
        let r_tilde = p * r4 / (r4 - 1.0);
        if let Ok(tilde) = AdmissiblePair::new(a, r_tilde) {
            // keep it only when it really is the proof's pair, i.e. when its
            // q also equals p·q′ (the tildes identity ⇔ criticality)
            let q4 = AdmissiblePair::new(a, 4.0)?.q;
            let q_tilde = p * q4 / (q4 - 1.0);
            if (tilde.q - q_tilde).abs() <= 1e-9 * q_tilde {
                rs.push(r_tilde);
            }
        }
    }
    let mut pairs: Vec<AdmissiblePair> = Vec::new();
    for r in rs {
        if pairs.iter().all(|p0| (p0.r - r).abs() > 1e-9) {
            pairs.push(AdmissiblePair::new(a, r)?);
        }
    }
    Ok(pairs)
}

/// Finite-pair proxy for ‖·‖_{X_T} = sup_{(q,r)} ‖·‖_{L^q_tL^r_a}; the
/// endpoint L^∞_t L²_a member is always included.
pub fn x_norm(u: &SpaceTimeField, pairs: &[AdmissiblePair]) -> f64 {
    let mut m = mixed_norm(u, f64::INFINITY, 2.0);
    for p in pairs {
        m = m.max(mixed_norm(u, p.q, p.r));
    }
    m
}

// ---------------------------------------------------------------------------
// Interpolation on the radial grid (used by the scaling diagnostics)
// ---------------------------------------------------------------------------

/// Local 4-point Lagrange interpolation of grid samples; zero beyond x_max
/// (the grid window), polynomial extension below the first node.
pub(crate) fn interp_radial(f: &RadialFunction, x: f64) -> Complex64 {
    let nodes = &f.grid.nodes;
    let n = nodes.len();
    if x >= f.grid.x_max {
        return Complex64::new(0.0, 0.0);
    }
    let pos = nodes.partition_point(|&t| t < x);
    let lo = pos.saturating_sub(2).min(n - 4);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in lo..lo + 4 {
        let mut w = 1.0;
        for j in lo..lo + 4 {
            if j != i {
                w *= (x - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        acc += w * f.values[i];
    }
    acc
}

// ---------------------------------------------------------------------------
// The Picard operator Φ and its iteration
// ---------------------------------------------------------------------------

fn check_setup(spec: &PropagatorSpec, prob: &NLSProblem) -> Result<()> {
    if (spec.a() - prob.a).abs() > 1e-12 {
        return Err(Error::domain(
            "nls: propagator and problem disagree on a",
        ));
    }
    if !prob.phi.grid.compatible(spec.grid()) {
        return Err(Error::GridMismatch("nls: datum on a different grid".into()));
    }
    if prob.a < 0.0 {
        return Err(Error::Unsupported(
            "nls: the solver path needs a ≥ 0 (classification alone covers a > −1)".into(),
        ));
    }
    Ok(())
}

fn nonlinear_slice(mu: Complex64, p: f64, v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|&z| mu * z.norm().powf(p - 1.0) * z).collect()
}

/// One application of the operator
/// Φ(v)(t) = S_a(t)φ + ∫₀ᵗ S_a(t−τ) μ|v|^{p−1}v(τ) dτ,
/// evaluated spectrally: the multiplier prefix
/// W(t_k) = Σ_{τ_j ≤ t_k} trapezoid[ e^{iτ_jξ²} ℋ(μ|v|^{p−1}v)(τ_j) ]
/// is accumulated once, and Φ(v)(t_k) = ℋ(e^{−it_kξ²}(ℋφ + W(t_k))).
pub fn picard_map(
    spec: &PropagatorSpec,
    prob: &NLSProblem,
    v: &SpaceTimeField,
) -> Result<SpaceTimeField> {
    check_setup(spec, prob)?;
    let grid = spec.grid();
    let n = grid.len();
    let times = &v.times;
    let m = times.len();
    let hat_phi = transform(spec.hankel(), &prob.phi)?;

    // twisted nonlinearity multipliers m_k(ξ) = e^{it_kξ²} ℋN_k(ξ)
    let mults: Vec<Result<Vec<Complex64>>> = crate::par_map(m, |k| {
        let nvals = nonlinear_slice(prob.mu, prob.p, v.slice(k));
        let hat = transform(
            spec.hankel(),
            &RadialFunction {
                grid: Arc::clone(grid),
                values: nvals,
            },
        )?;
        let s = times.nodes[k];
        Ok(hat
            .values
            .iter()
            .zip(&grid.nodes)
            .map(|(&h, &xi)| h * Complex64::from_polar(1.0, s * xi * xi))
            .collect())
    });
    let mults = mults.into_iter().collect::<Result<Vec<_>>>()?;

    // trapezoid prefixes W(t_k) of the twisted multipliers
    let mut prefixes: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    prefixes.push(acc.clone());
    for k in 1..m {
        let half = 0.5 * (times.nodes[k] - times.nodes[k - 1]);
        for (a_i, (m0, m1)) in acc.iter_mut().zip(mults[k - 1].iter().zip(&mults[k])) {
            *a_i += half * (m0 + m1);
        }
        prefixes.push(acc.clone());
    }

    let slices: Vec<Result<Vec<Complex64>>> = crate::par_map(m, |k| {
        let t = times.nodes[k];
        // Φ(v)(0) = φ exactly (empty Duhamel window): keep the datum as the
        // stored slice instead of the ℋ∘ℋ round trip of it.
        if k == 0 && t == 0.0 {
            return Ok(prob.phi.values.clone());
        }
        let twisted = RadialFunction {
            grid: Arc::clone(grid),
            values: hat_phi
                .values
                .iter()
                .zip(prefixes[k].iter().zip(&grid.nodes))
                .map(|(&hp, (&w, &xi))| (hp + w) * Complex64::from_polar(1.0, -t * xi * xi))
                .collect(),
        };
        Ok(transform(spec.hankel(), &twisted)?.values)
    });
    let mut out_values = Vec::with_capacity(m * n);
    for s in slices {
        out_values.extend(s?);
    }
    Ok(SpaceTimeField {
        grid: Arc::clone(grid),
        times: times.clone(),
        values: out_values,
    })
}

fn linear_flow(
    spec: &PropagatorSpec,
    phi: &RadialFunction,
    times: &TimeGrid,
) -> Result<SpaceTimeField> {
    let grid = spec.grid();
    let hat_phi = transform(spec.hankel(), phi)?;
    let slices: Vec<Result<Vec<Complex64>>> = crate::par_map(times.len(), |k| {
        let t = times.nodes[k];
        // S_a(0) is the identity: skip the transform round trip so the
        // stored t = 0 slice is the datum itself, not ℋ(ℋφ).
        if t == 0.0 {
            return Ok(phi.values.clone());
        }
        let twisted = RadialFunction {
            grid: Arc::clone(grid),
            values: hat_phi
                .values
                .iter()
                .zip(&grid.nodes)
                .map(|(&h, &xi)| h * Complex64::from_polar(1.0, -t * xi * xi))
                .collect(),
        };
        Ok(transform(spec.hankel(), &twisted)?.values)
    });
    let mut values = Vec::with_capacity(times.len() * grid.len());
    for s in slices {
        values.extend(s?);
    }
    Ok(SpaceTimeField {
        grid: Arc::clone(grid),
        times: times.clone(),
        values,
    })
}

fn field_diff_norm(u: &SpaceTimeField, w: &SpaceTimeField, pairs: &[AdmissiblePair]) -> f64 {
    let diff = SpaceTimeField {
        grid: Arc::clone(&u.grid),
        times: u.times.clone(),
        values: u
            .values
            .iter()
            .zip(&w.values)
            .map(|(&x, &y)| x - y)
            .collect(),
    };
    x_norm(&diff, pairs)
}

fn finish_report(
    u: SpaceTimeField,
    iterations: usize,
    contraction_factors: Vec<f64>,
    pairs: &[AdmissiblePair],
    converged: bool,
    diverged: bool,
) -> SolveReport {
    let mass = mass_trace(&u);
    let pair_norms = pairs
        .iter()
        .map(|&p| (p, mixed_norm(&u, p.q, p.r)))
        .collect();
    SolveReport {
        solution: u,
        iterations,
        contraction_factors,
        mass_trace: mass,
        pair_norms,
        converged,
        diverged,
    }
}

/// Whole-window Picard iteration v_{k+1} = Φ(v_k) from v₀ = S_a(·)φ,
/// mirroring the contraction on X_T: stops when
/// ‖v_{k+1}−v_k‖_X ≤ tol·‖v_k‖_X, flags divergence after three consecutive
/// expanding iterations. Supercritical powers are refused unless the
/// problem opts in.
pub fn picard_solve(
    spec: &PropagatorSpec,
    prob: &NLSProblem,
    pairs: &[AdmissiblePair],
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    check_setup(spec, prob)?;
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::domain("picard_solve: need tol > 0 and max_iter ≥ 1"));
    }
    if classify(prob.a, prob.p)? == Criticality::Supercritical && !prob.allow_supercritical {
        return Err(Error::Unsupported(
            "picard_solve: supercritical power (no contraction theory); \
             set allow_supercritical to explore"
                .into(),
        ));
    }
    let times = TimeGrid::uniform(0.0, prob.horizon, prob.time_nodes)?;

    if norm_lr(&prob.phi, 2.0) == 0.0 {
        let zero = SpaceTimeField::from_fn(spec.grid(), &times, |_, _| Complex64::new(0.0, 0.0));
        return Ok(finish_report(zero, 1, Vec::new(), pairs, true, false));
    }

    let mut v = linear_flow(spec, &prob.phi, &times)?;
    let v0_norm = x_norm(&v, pairs);
    let mut factors = Vec::new();
    let mut prev_diff: Option<f64> = None;
    let mut growth_streak = 0usize;

    for k in 1..=max_iter {
        let v_next = picard_map(spec, prob, &v)?;
        let d = field_diff_norm(&v_next, &v, pairs);
        let factor = match prev_diff {
            Some(dp) if dp > 0.0 => d / dp,
            _ => d / v0_norm,
        };
        factors.push(factor);
        growth_streak = if factor > 1.0 { growth_streak + 1 } else { 0 };
        let target = tol * x_norm(&v_next, pairs).max(f64::MIN_POSITIVE);
        v = v_next;
        if d <= target {
            return Ok(finish_report(v, k, factors, pairs, true, false));
        }
        if growth_streak >= 3 {
            return Ok(finish_report(v, k, factors, pairs, false, true));
        }
        prev_diff = Some(d);
    }
    Ok(finish_report(v, max_iter, factors, pairs, false, false))
}

/// Subcritical globalization: repeated local solves with datum hand-off
/// u(·, T_k) and, when Re μ = 0, a mass-equality check at each hand-off —
/// the proof's iteration made literal.
pub fn picard_global(
    spec: &PropagatorSpec,
    prob: &NLSProblem,
    pairs: &[AdmissiblePair],
    tol: f64,
    max_iter: usize,
    segments: usize,
) -> Result<SolveReport> {
    if segments == 0 {
        return Err(Error::domain("picard_global: need at least one segment"));
    }
    let seg_t = prob.horizon / segments as f64;
    let seg_nodes = 9.max(prob.time_nodes.div_ceil(segments) + 1);
    let mass0 = norm_lr(&prob.phi, 2.0).powi(2);

    let grid = spec.grid();
    let mut datum = prob.phi.clone();
    let mut all_nodes: Vec<f64> = Vec::new();
    let mut all_values: Vec<Complex64> = Vec::new();
    let mut iterations = 0usize;
    let mut factors = Vec::new();

    for s in 0..segments {
        let local = NLSProblem::new(prob.a, prob.mu, prob.p, datum.clone(), seg_t)?
            .with_time_nodes(seg_nodes)?;
        let local = if prob.allow_supercritical {
            local.allow_supercritical()
        } else {
            local
        };
        let rep = picard_solve(spec, &local, pairs, tol, max_iter)?;
        if !rep.converged {
            return Err(Error::Convergence(format!(
                "picard_global: segment {s} failed to contract"
            )));
        }
        iterations += rep.iterations;
        factors.extend(rep.contraction_factors);
        let offset = s as f64 * seg_t;
        let m = rep.solution.times.len();
        let skip = usize::from(s > 0); // shared hand-off node
        for k in skip..m {
            all_nodes.push(offset + rep.solution.times.nodes[k]);
            all_values.extend_from_slice(rep.solution.slice(k));
        }
        datum = rep.solution.slice_fn(m - 1);
        if prob.mu.re == 0.0 {
            let mass_end = rep.mass_trace[m - 1];
            if (mass_end - mass0).abs() > 1e-4 * mass0 {
                return Err(Error::Convergence(format!(
                    "picard_global: mass equality broken at hand-off {s}: \
                     {mass_end:.6e} vs {mass0:.6e}"
                )));
            }
        }
    }
    let u = SpaceTimeField {
        grid: Arc::clone(grid),
        times: TimeGrid::trapezoid(all_nodes),
        values: all_values,
    };
    Ok(finish_report(u, iterations, factors, pairs, true, false))
}

// ---------------------------------------------------------------------------
// Strang split-step oracle
// ---------------------------------------------------------------------------

/// Independent integrator: half-step nonlinear flow, full linear multiplier
/// step e^{−i dt ξ²} in Hankel space, half-step nonlinear flow. The
/// nonlinear substep is the exact phase rotation
/// u ← u·exp(μ|u|^{p−1}dt) when Re μ = 0 (|u| is then pointwise conserved),
/// otherwise a classical 4th-order Runge–Kutta substep. When Re μ = 0 a
/// per-step relative mass jump above 1e−8 rejects the step size.
pub fn step_solve(spec: &PropagatorSpec, prob: &NLSProblem, dt: f64) -> Result<SolveReport> {
    check_setup(spec, prob)?;
    if !(dt > 0.0) || dt > prob.horizon {
        return Err(Error::domain("step_solve: need 0 < dt ≤ T"));
    }
    let grid = spec.grid();
    let steps = (prob.horizon / dt).round().max(1.0) as usize;
    let h = prob.horizon / steps as f64;
    let stride = steps.div_ceil(256);

    let mu = prob.mu;
    let p = prob.p;
    let rotate = mu.re == 0.0;
    let half_nonlinear = |u: &mut Vec<Complex64>, h2: f64| {
        if mu == Complex64::new(0.0, 0.0) {
            return;
        }
        if rotate {
            for z in u.iter_mut() {
                *z *= Complex64::from_polar(1.0, mu.im * z.norm().powf(p - 1.0) * h2);
            }
        } else {
            let f = |z: Complex64| mu * z.norm().powf(p - 1.0) * z;
            for z in u.iter_mut() {
                let k1 = f(*z);
                let k2 = f(*z + 0.5 * h2 * k1);
                let k3 = f(*z + 0.5 * h2 * k2);
                let k4 = f(*z + h2 * k3);
                *z += (h2 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
    };
    let weighted_mass = |u: &[Complex64]| -> f64 {
        grid.weights
            .iter()
            .zip(u)
            .map(|(&w, v)| w * v.norm_sqr())
            .sum()
    };

    let mut u = prob.phi.values.clone();
    let mass0 = weighted_mass(&u).max(f64::MIN_POSITIVE);
    let mut rec_nodes = vec![0.0];
    let mut rec_values = u.clone();
    let mut prev_mass = mass0;

    for n in 1..=steps {
        half_nonlinear(&mut u, 0.5 * h);
        let hat = transform(
            spec.hankel(),
            &RadialFunction {
                grid: Arc::clone(grid),
                values: u,
            },
        )?;
        let twisted = RadialFunction {
            grid: Arc::clone(grid),
            values: hat
                .values
                .iter()
                .zip(&grid.nodes)
                .map(|(&v, &xi)| v * Complex64::from_polar(1.0, -h * xi * xi))
                .collect(),
        };
        u = transform(spec.hankel(), &twisted)?.values;
        half_nonlinear(&mut u, 0.5 * h);
        if rotate {
            let mass = weighted_mass(&u);
            if (mass - prev_mass).abs() > 1e-8 * mass0 {
                return Err(Error::Convergence(format!(
                    "step_solve: step {n} rejected, relative mass jump {:.3e} > 1e-8",
                    (mass - prev_mass).abs() / mass0
                )));
            }
            prev_mass = mass;
        }
        if n % stride == 0 || n == steps {
            rec_nodes.push(n as f64 * h);
            rec_values.extend_from_slice(&u);
        }
    }
    let field = SpaceTimeField {
        grid: Arc::clone(grid),
        times: TimeGrid::trapezoid(rec_nodes),
        values: rec_values,
    };
    let pairs = default_pairs(prob.a, prob.p)?;
    Ok(finish_report(field, steps, Vec::new(), &pairs, true, false))
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// ‖u(·, t_k)‖²_{L²_a} along the field's time nodes.
pub fn mass_trace(u: &SpaceTimeField) -> Vec<f64> {
    (0..u.times.len())
        .map(|k| {
            u.grid
                .weights
                .iter()
                .zip(u.slice(k))
                .map(|(&w, v)| w * v.norm_sqr())
                .sum()
        })
        .collect()
}

/// Relative X-norm gap between solve(φ_λ) and the rescaled solve(φ), where
/// φ_λ(x) = λ^{−2/(p−1)}φ(x/λ) and u_λ(x,t) = λ^{−2/(p−1)}u(x/λ, t/λ²).
/// The reference problem is solved on the horizon T/λ² with the same node
/// count, so its nodes land exactly on t_k/λ² and only the spatial
/// interpolation enters.
pub fn scaling_commutation(
    spec: &PropagatorSpec,
    prob: &NLSProblem,
    pairs: &[AdmissiblePair],
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain("scaling_commutation: need λ > 0"));
    }
    check_setup(spec, prob)?;
    let grid = spec.grid();
    let amp = lambda.powf(-2.0 / (prob.p - 1.0));

    let phi_lambda = RadialFunction {
        grid: Arc::clone(grid),
        values: grid
            .nodes
            .iter()
            .map(|&x| amp * interp_radial(&prob.phi, x / lambda))
            .collect(),
    };
    let scaled_prob = NLSProblem::new(prob.a, prob.mu, prob.p, phi_lambda, prob.horizon)?
        .with_time_nodes(prob.time_nodes)?;
    let ref_prob = NLSProblem::new(
        prob.a,
        prob.mu,
        prob.p,
        prob.phi.clone(),
        prob.horizon / (lambda * lambda),
    )?
    .with_time_nodes(prob.time_nodes)?;

    let scaled = picard_solve(spec, &scaled_prob, pairs, tol, max_iter)?;
    let reference = picard_solve(spec, &ref_prob, pairs, tol, max_iter)?;
    if !(scaled.converged && reference.converged) {
        return Err(Error::Convergence(
            "scaling_commutation: a solve failed to contract".into(),
        ));
    }

    let m = scaled.solution.times.len();
    let mut rescaled_values = Vec::with_capacity(m * grid.len());
    for k in 0..m {
        let slice = reference.solution.slice_fn(k);
        rescaled_values
            .extend(grid.nodes.iter().map(|&x| amp * interp_radial(&slice, x / lambda)));
    }
    let rescaled = SpaceTimeField {
        grid: Arc::clone(grid),
        times: scaled.solution.times.clone(),
        values: rescaled_values,
    };
    let denom = x_norm(&scaled.solution, pairs);
    Ok(field_diff_norm(&scaled.solution, &rescaled, pairs) / denom)
}

/// Empirical small-data budget for a critical configuration: the largest
/// amplitude (L²_a size along the probe direction) for which the Picard
/// iteration on [0, 10] contracts with every factor ≤ 1/2, located by
/// doubling then bisection. The paper's ε₀ involves an unquantified
/// constant; this number is a measurement, not that constant.
pub fn small_data_budget(
    spec: &PropagatorSpec,
    mu: Complex64,
    p: f64,
    pairs: &[AdmissiblePair],
    direction: &RadialFunction,
) -> Result<f64> {
    if mu == Complex64::new(0.0, 0.0) {
        return Ok(f64::INFINITY);
    }
    if classify(spec.a(), p)? != Criticality::Critical {
        return Err(Error::domain(
            "small_data_budget: the budget is a critical-regime notion",
        ));
    }
    let base = norm_lr(direction, 2.0);
    if base == 0.0 {
        return Err(Error::domain("small_data_budget: zero probe direction"));
    }
    let contracts = |amp: f64| -> Result<bool> {
        let datum = direction.scale(Complex64::new(amp / base, 0.0));
        let prob = NLSProblem::new(spec.a(), mu, p, datum, 10.0)?;
        let rep = picard_solve(spec, &prob, pairs, 1e-8, 15)?;
        Ok(rep.converged && rep.contraction_factors.iter().all(|&f| f <= 0.5))
    };

    let mut lo = 0.05;
    while !contracts(lo)? {
        lo /= 2.0;
        if lo < 1e-6 {
            return Ok(0.0);
        }
    }
    let mut hi = lo * 2.0;
    while contracts(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Ok(lo);
        }
    }
    for _ in 0..6 {
        let mid = 0.5 * (lo + hi);
        if contracts(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, RadialGrid, TestFunction};
    use crate::propagator::apply_propagator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn test_grid(a: f64) -> Arc<RadialGrid> {
        build_grid(a, 12.0, 24, 20).expect("grid")
    }

    fn gaussian_datum(grid: &Arc<RadialGrid>, l2: f64) -> RadialFunction {
        let g = TestFunction::Gaussian {
            amplitude: 1.0,
            sigma: 1.0,
        }
        .sample(grid);
        let n = norm_lr(&g, 2.0);
        g.scale(Complex64::new(l2 / n, 0.0))
    }

    #[test]
    fn classify_examples_and_rejections() {
        assert_eq!(classify(1.0, 3.0).unwrap(), Criticality::Critical);
        assert_eq!(classify(0.0, 5.0).unwrap(), Criticality::Critical);
        assert_eq!(classify(1.0, 2.0).unwrap(), Criticality::Subcritical);
        assert_eq!(classify(1.0, 4.0).unwrap(), Criticality::Supercritical);
        let a = 0.5;
        assert_eq!(
            classify(a, critical_power(a)).unwrap(),
            Criticality::Critical
        );
        assert!(classify(-1.0, 3.0).is_err());
        assert!(classify(1.0, 1.0).is_err());
    }

    #[test]
    fn default_pair_set_collapses_at_criticality() {
        // a = 1, p = 3: diagonal = (4,4), r = 4 pair = (4,4), tilde = (4,4)
        let pairs = default_pairs(1.0, 3.0).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].q - 4.0).abs() <= 1e-12 && (pairs[0].r - 4.0).abs() <= 1e-12);
        // a = 0, p = 5: diagonal (6,6); r = 4 has q = 8; tilde of (8,4) is
        // (pq', pr') = (40/7, 20/3), admissible at criticality
        let pairs = default_pairs(0.0, 5.0).unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().any(|p| (p.r - 20.0 / 3.0).abs() <= 1e-9));
        // subcritical: the tilde pair is not admissible and is dropped
        let pairs = default_pairs(1.0, 2.0).unwrap();
        assert_eq!(pairs.len(), 1, "diagonal and r=4 coincide at a = 1");
    }

    #[test]
    fn picard_zero_datum_and_linear_limit() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 3.0).unwrap();

        let zero = RadialFunction::zeros(&grid);
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, zero, 1.0).unwrap();
        let rep = picard_solve(&spec, &prob, &pairs, 1e-10, 10).unwrap();
        assert!(rep.converged && rep.iterations == 1);
        assert!(mixed_norm(&rep.solution, f64::INFINITY, 2.0) == 0.0);

        // μ = 0: the fixed point is the linear flow, reached immediately
        let phi = gaussian_datum(&grid, 1.0);
        let prob = NLSProblem::new(a, Complex64::new(0.0, 0.0), 3.0, phi.clone(), 1.0).unwrap();
        let rep = picard_solve(&spec, &prob, &pairs, 1e-12, 10).unwrap();
        assert!(rep.converged && rep.iterations == 1);
        assert!(rep.contraction_factors == vec![0.0]);
        let last = rep.solution.slice_fn(rep.solution.times.len() - 1);
        let lin = apply_propagator(&spec, 1.0, &phi).unwrap();
        let err = norm_lr(&last.sub(&lin).unwrap(), 2.0) / norm_lr(&lin, 2.0);
        assert!(err <= 1e-12, "μ=0 solution is not the linear flow: {err:.3e}");

        // supercritical refusal and the override
        let prob = NLSProblem::new(a, Complex64::i(), 4.0, phi.clone(), 0.25).unwrap();
        assert!(matches!(
            picard_solve(&spec, &prob, &pairs, 1e-8, 10),
            Err(Error::Unsupported(_))
        ));
        let prob = prob.allow_supercritical();
        assert!(picard_solve(&spec, &prob, &pairs, 1e-8, 10).is_ok());
    }

    #[test]
    fn picard_contracts_on_small_critical_data() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 3.0).unwrap();
        let phi = gaussian_datum(&grid, 0.05);
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, phi, 1.0).unwrap();
        let tol = 1e-10;
        let rep = picard_solve(&spec, &prob, &pairs, tol, 25).unwrap();
        assert!(rep.converged && !rep.diverged);
        assert!(
            rep.contraction_factors.iter().all(|&f| f < 0.5),
            "contraction factors {:?}",
            rep.contraction_factors
        );
        // discretized fixed-point identity ‖v − Φ(v)‖_X ≤ 2 tol ‖v‖_X
        let phi_v = picard_map(&spec, &prob, &rep.solution).unwrap();
        let resid = field_diff_norm(&rep.solution, &phi_v, &pairs);
        assert!(
            resid <= 2.0 * tol * x_norm(&rep.solution, &pairs),
            "fixed-point residual {resid:.3e}"
        );
        // mass conservation (μ = i): picard-level tolerance
        let (lo, hi) = rep
            .mass_trace
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &m| (l.min(m), h.max(m)));
        assert!(hi / lo - 1.0 <= 1e-4, "picard mass drift {}", hi / lo - 1.0);
        for (_, n) in &rep.pair_norms {
            assert!(n.is_finite() && *n > 0.0);
        }
    }

    #[test]
    fn picard_and_stepper_agree() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 3.0).unwrap();
        let phi = gaussian_datum(&grid, 0.05);
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, phi, 1.0).unwrap();
        let rep_p = picard_solve(&spec, &prob, &pairs, 1e-10, 25).unwrap();
        // dt = 1/1024 records every 4th step: the picard nodes (Δ = 1/64)
        // form a subset of the recorded ones
        let rep_s = step_solve(&spec, &prob, 1.0 / 1024.0).unwrap();
        let mut worst = 0.0f64;
        for (k, &t) in rep_p.solution.times.nodes.iter().enumerate() {
            let j = rep_s
                .solution
                .times
                .nodes
                .iter()
                .position(|&s| (s - t).abs() <= 1e-12)
                .expect("matching node");
            let d: f64 = grid
                .weights
                .iter()
                .zip(rep_p.solution.slice(k).iter().zip(rep_s.solution.slice(j)))
                .map(|(&w, (x, y))| w * (x - y).norm_sqr())
                .sum();
            worst = worst.max(d.sqrt());
        }
        let rel = worst / norm_lr(&prob.phi, 2.0);
        assert!(rel <= 1e-4, "solver disagreement {rel:.3e}");
    }

    #[test]
    fn stepper_properties() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let phi = gaussian_datum(&grid, 1.0);

        // μ = 0: pure multiplier stepping reproduces the one-shot flow
        let prob = NLSProblem::new(a, Complex64::new(0.0, 0.0), 3.0, phi.clone(), 1.0).unwrap();
        let rep = step_solve(&spec, &prob, 1.0 / 256.0).unwrap();
        let last = rep.solution.slice_fn(rep.solution.times.len() - 1);
        let lin = apply_propagator(&spec, 1.0, &phi).unwrap();
        let err = norm_lr(&last.sub(&lin).unwrap(), 2.0) / norm_lr(&lin, 2.0);
        assert!(err <= 1e-6, "linear stepping defect {err:.3e}");

        // μ = i: mass conserved through the exact rotation substeps
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, phi.clone(), 1.0).unwrap();
        let rep = step_solve(&spec, &prob, 1e-3).unwrap();
        let (lo, hi) = rep
            .mass_trace
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &m| (l.min(m), h.max(m)));
        assert!(hi / lo - 1.0 <= 1e-6, "stepper mass drift {}", hi / lo - 1.0);

        // Richardson order ≈ 2 on a visibly nonlinear configuration. The
        // defocusing sign is essential at this amplitude: with μ = +i the
        // a = 1 geometry is mass-critical focusing, ‖φ‖² = 4 is beyond the
        // critical mass, and the state concentrates until the mass-jump
        // guard (correctly) rejects the run. The window T = 1/2 keeps the
        // outward-spreading defocused packet away from x_max.
        let phi2 = gaussian_datum(&grid, 2.0);
        let prob = NLSProblem::new(a, -Complex64::i(), 3.0, phi2, 0.5).unwrap();
        let final_slice = |dt: f64| {
            let rep = step_solve(&spec, &prob, dt).unwrap();
            rep.solution.slice_fn(rep.solution.times.len() - 1)
        };
        let (u4, u2, u1) = (
            final_slice(2e-3),
            final_slice(1e-3),
            final_slice(5e-4),
        );
        let e_coarse = norm_lr(&u4.sub(&u2).unwrap(), 2.0);
        let e_fine = norm_lr(&u2.sub(&u1).unwrap(), 2.0);
        let order = (e_coarse / e_fine).log2();
        assert!(
            (order - 2.0).abs() <= 0.3,
            "Strang order {order:.3} (diffs {e_coarse:.3e}, {e_fine:.3e})"
        );

        // μ real: the mass drift is genuine and reported, not asserted
        // away. Small amplitude and window — the μ = 1 gain is a pointwise
        // Riccati |z|' ≥ |z|³ and blows up in finite time at O(1) size.
        let phi3 = gaussian_datum(&grid, 0.3);
        let prob = NLSProblem::new(a, Complex64::new(1.0, 0.0), 3.0, phi3, 0.25).unwrap();
        let rep = step_solve(&spec, &prob, 1e-3).unwrap();
        let first = rep.mass_trace[0];
        let last = rep.mass_trace[rep.mass_trace.len() - 1];
        assert!(
            last > first * (1.0 + 1e-4),
            "μ = 1 gain term should grow the mass: {first} → {last}"
        );
    }

    #[test]
    fn scaling_commutation_and_datum_norms() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 3.0).unwrap();
        let phi = gaussian_datum(&grid, 0.05);

        // critical datum-norm invariance ‖φ_λ‖ = ‖φ‖ (quadrature-exact)
        for &lam in &[0.5f64, 2.0] {
            let amp = lam.powf(-2.0 / (3.0 - 1.0));
            let phi_l = RadialFunction::from_fn(&grid, |x| {
                amp * Complex64::new((-(x / lam) * (x / lam) / 2.0).exp(), 0.0)
            });
            let base = RadialFunction::from_fn(&grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
            let ratio = norm_lr(&phi_l, 2.0) / norm_lr(&base, 2.0);
            assert!(
                (ratio - 1.0).abs() <= 1e-10,
                "critical norm invariance broken at λ = {lam}: {ratio}"
            );
        }
        // subcritical exponent arithmetic: a = 1, p = 2, λ = 2 ⇒ ratio 1/2
        {
            let lam: f64 = 2.0;
            let amp = lam.powf(-2.0 / (2.0 - 1.0));
            let phi_l = RadialFunction::from_fn(&grid, |x| {
                amp * Complex64::new((-(x / lam) * (x / lam) / 2.0).exp(), 0.0)
            });
            let base = RadialFunction::from_fn(&grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
            let ratio = norm_lr(&phi_l, 2.0) / norm_lr(&base, 2.0);
            assert!(
                (ratio - 0.5).abs() <= 1e-10,
                "subcritical datum scaling: {ratio}"
            );
        }

        // solved-field commutation at T = 0.3 (both runs stay inside the
        // window at both scales)
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, phi, 0.3).unwrap();
        let same = scaling_commutation(&spec, &prob, &pairs, 1.0, 1e-10, 25).unwrap();
        assert!(same <= 1e-10, "λ = 1 should be exact: {same:.3e}");
        for &lam in &[0.5, 2.0] {
            let gap = scaling_commutation(&spec, &prob, &pairs, lam, 1e-10, 25).unwrap();
            assert!(gap <= 0.01, "scaling gap {gap:.3e} at λ = {lam}");
        }
    }

    #[test]
    fn global_solve_hands_off_mass() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 2.0).unwrap();
        let phi = gaussian_datum(&grid, 0.3);
        let prob = NLSProblem::new(a, Complex64::i(), 2.0, phi, 2.0)
            .unwrap()
            .with_time_nodes(65)
            .unwrap();
        let direct = picard_solve(&spec, &prob, &pairs, 1e-10, 25).unwrap();
        assert!(direct.converged);
        let stitched = picard_global(&spec, &prob, &pairs, 1e-10, 25, 4).unwrap();
        assert!(stitched.converged);
        // agree in L^∞_t L²_a on the common nodes
        let mut worst = 0.0f64;
        for (k, &t) in direct.solution.times.nodes.iter().enumerate() {
            if let Some(j) = stitched
                .solution
                .times
                .nodes
                .iter()
                .position(|&s| (s - t).abs() <= 1e-12)
            {
                let d: f64 = grid
                    .weights
                    .iter()
                    .zip(
                        direct
                            .solution
                            .slice(k)
                            .iter()
                            .zip(stitched.solution.slice(j)),
                    )
                    .map(|(&w, (x, y))| w * (x - y).norm_sqr())
                    .sum();
                worst = worst.max(d.sqrt());
            }
        }
        assert!(worst <= 1e-4, "stitched/direct gap {worst:.3e}");
        // hand-off mass equality is enforced internally; the stitched trace
        // must stay flat end to end
        let (lo, hi) = stitched
            .mass_trace
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &m| (l.min(m), h.max(m)));
        assert!(hi / lo - 1.0 <= 1e-4);
    }

    #[test]
    fn solution_map_is_lipschitz_on_a_small_ball() {
        let a = 1.0;
        let grid = test_grid(a);
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 3.0).unwrap();
        let phi = gaussian_datum(&grid, 0.05);
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, phi.clone(), 1.0).unwrap();
        let base = picard_solve(&spec, &prob, &pairs, 1e-10, 25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e15);
        let mut ks = Vec::new();
        for i in 0..5 {
            let eps = 0.1 * norm_lr(&phi, 2.0) / (1 << i) as f64;
            let dir = RadialFunction {
                grid: Arc::clone(&grid),
                values: grid
                    .nodes
                    .iter()
                    .map(|&x| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                            * (-x * x / 2.0).exp()
                    })
                    .collect(),
            };
            let delta = dir.scale(Complex64::new(eps / norm_lr(&dir, 2.0), 0.0));
            let prob_p =
                NLSProblem::new(a, Complex64::i(), 3.0, phi.add(&delta).unwrap(), 1.0).unwrap();
            let pert = picard_solve(&spec, &prob_p, &pairs, 1e-10, 25).unwrap();
            let gap = field_diff_norm(&pert.solution, &base.solution, &[]);
            ks.push(gap / eps);
        }
        assert!(
            ks.iter().all(|k| k.is_finite() && *k < 10.0),
            "Lipschitz probe out of range: {ks:?}"
        );
    }

    #[test]
    fn small_data_budget_bisects() {
        // coarser grid: the budget is an order-of-magnitude measurement
        let a = 1.0;
        let grid = build_grid(a, 12.0, 16, 16).unwrap();
        let spec = PropagatorSpec::spectral(a, &grid).unwrap();
        let pairs = default_pairs(a, 3.0).unwrap();
        let dir = TestFunction::Gaussian {
            amplitude: 1.0,
            sigma: 1.0,
        }
        .sample(&grid);

        assert_eq!(
            small_data_budget(&spec, Complex64::new(0.0, 0.0), 3.0, &pairs, &dir).unwrap(),
            f64::INFINITY
        );
        assert!(small_data_budget(&spec, Complex64::i(), 2.0, &pairs, &dir).is_err());

        let budget = small_data_budget(&spec, Complex64::i(), 3.0, &pairs, &dir).unwrap();
        assert!(
            budget.is_finite() && budget > 0.0,
            "empty budget: {budget}"
        );
        // well past the budget the iteration must stop contracting at 1/2
        let datum = dir.scale(Complex64::new(10.0 * budget / norm_lr(&dir, 2.0), 0.0));
        let prob = NLSProblem::new(a, Complex64::i(), 3.0, datum, 10.0).unwrap();
        let rep = picard_solve(&spec, &prob, &pairs, 1e-8, 15).unwrap();
        assert!(
            !(rep.converged && rep.contraction_factors.iter().all(|&f| f <= 0.5)),
            "10× the budget still contracts at ≤ 1/2"
        );
    }
}
