//! Numerical laboratory for the Schrödinger flow of the Bessel operator
//!
//! ```text
//! B_a u = u'' + (a/x) u',   x > 0,  a > -1,
//! ```
//!
//! self-adjoint on L²(ℝ⁺, x^a dx) under the weighted Neumann condition
//! `x^a ∂_x u → 0` as `x → 0⁺`. The crate provides:
//!
//! * [`specfun`] — Gamma and Bessel J/Y/G evaluation,
//! * [`grid`] — weighted half-line and time discretizations with all
//!   L^r_a and mixed L^q_t L^r_a norms,
//! * [`hankel`] — the modified Hankel transform ℋ_ν (ν = (a−1)/2), the
//!   spectral calculus of B_a, and Weber–Schafheitlin integrals,
//! * [`propagator`] — the flow e^{itB_a} via its closed-form oscillatory
//!   kernel and via the multiplier e^{−itξ²}, plus Duhamel machinery,
//! * [`estimates`] — desk-scale verifiers for dispersive decay, Strichartz
//!   inequalities and the dual restriction estimate,
//! * [`nls`] — Picard and split-step solvers for the model nonlinear
//!   problem ∂_t u − iB_a u = μ|u|^{p−1}u,
//! * [`altmodels`] — the Kimura-operator change of variables and the
//!   inverse-square (Hardy) potential on the half-line,
//! * [`checks`] — the acceptance battery used by the CLI and the test
//!   suite.

pub mod altmodels;
pub mod checks;
pub mod estimates;
pub mod grid;
pub mod hankel;
pub mod io;
pub mod nls;
pub mod propagator;
pub mod specfun;

pub use num_complex::Complex64;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Worker-thread count for the embarrassingly parallel dense builds:
/// `BESSELWAVE_THREADS` when set, otherwise the available parallelism
/// (capped — the dense kernels saturate memory bandwidth quickly).
pub(crate) fn thread_count() -> usize {
    std::env::var("BESSELWAVE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
                .min(8)
        })
}

/// Deterministic parallel map over 0..n: output order is by index, each slot
/// written exactly once, so results are bitwise independent of the thread
/// count. Used for the t- and λ-sweeps whose iterations are dense
/// matrix–vector products.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = thread_count().min(n.max(1));
    if threads <= 1 || n < 4 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(threads);
    std::thread::scope(|s| {
        for (c, slot) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            s.spawn(move || {
                for (off, v) in slot.iter_mut().enumerate() {
                    *v = Some(f(c * chunk + off));
                }
            });
        }
    });
    out.into_iter()
        .map(|v| v.expect("par_map: all slots filled"))
        .collect()
}
