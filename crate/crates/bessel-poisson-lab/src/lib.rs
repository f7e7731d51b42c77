//! Numerical laboratory for harmonic analysis of the Bessel operator on the
//! half-line `(0, ∞)`.
//!
//! The crate builds, layer by layer, the machinery needed to experiment with
//! the Poisson semigroup attached to the Bessel operator
//! `B_λ = d²/dx² − λ(λ−1)/x²` and with λ-harmonic functions of the Weinstein
//! operator `L_λ = ∂²_t + ∂²_x − λ(λ−1)/x²`:
//!
//! * [`specfun`] — gamma, Bessel `J_ν`, and Legendre `P_β` evaluations that
//!   every other module relies on;
//! * [`quadrature`] — adaptive Gauss–Kronrod integration on finite, semi-infinite
//!   and doubly infinite intervals, with singularity hints and explicit tail
//!   policies;
//! * [`kernels`] — the Bessel–Poisson kernel `P_t^λ(x,y)`, its `∂_t` and
//!   `D_{λ,x} = x^λ (d/dx) x^{−λ}` derivatives, and sup-ratio reports against
//!   the classical kernel bounds;
//! * [`grid`] / [`hankel`] — sampled functions with quadrature weights and the
//!   Hankel transform `h_λ`, including the subordination formulas that express
//!   the semigroup and its derivatives spectrally;
//! * [`field`] — Poisson extensions `u(x,t) = P_t^λ f(x)` with derivative
//!   layers, semigroup composition checks, Littlewood–Paley `g`-functions and
//!   decay probes;
//! * [`carleson`] — Carleson-box measures of `|t ∇_λ u|² dx dt / t`, the
//!   odd-BMO norm estimator, weighted-L¹ admissibility checks and the
//!   square-function functional on intervals;
//! * [`geometry`] — hyperbolic balls in the upper half-plane adapted to `L_λ`,
//!   the mean-value identity over their boundary circles, and finite-difference
//!   residuals of λ-harmonicity;
//! * [`catalog`] / [`config`] / [`lab`] / [`report`] — the experiment surface:
//!   a catalog of boundary test functions with expected classifications, a
//!   TOML experiment configuration, deterministic CSV/JSON reporting and the
//!   drivers behind the `bpl` command-line binary.
//!
//! Every capability has a runnable example under `examples/`; start with
//! `cargo run --release --example kernel_moments`.

pub mod carleson;
pub mod catalog;
pub mod config;
mod error;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod hankel;
pub mod kernels;
pub mod lab;
pub mod quadrature;
pub mod report;
pub mod specfun;

pub use error::{LabError, Result};

/// Environment variable capping the size of the global worker pool.
pub const THREADS_ENV: &str = "BPL_THREADS";

/// Initialize the global worker pool, honoring `BPL_THREADS` when set.
///
/// Call once near process start; later calls are no-ops (the first
/// configuration wins, which is also what happens when tests share a process).
/// Invalid values are ignored rather than fatal: an experiment should not die
/// because of a stray environment variable.
pub fn init_parallelism() {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|raw| raw.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
