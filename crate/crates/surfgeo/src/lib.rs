//! surfgeo — outer differential geometry of immersed 2-surfaces in ℝⁿ.
//!
//! The library evaluates immersions X: B → ℝⁿ (B a closed parameter disc) as
//! order-3 derivative jets and derives from them:
//!
//! - first and second fundamental forms, area element, mean/Gauss curvature
//!   and principal curvatures per normal section;
//! - an orthonormal tangent-plus-normal moving frame (Gram–Schmidt in jet
//!   arithmetic, so frame vectors carry their own derivatives);
//! - for surfaces in ℝ⁴: torsion coefficients of the normal connection, the
//!   normal curvature tensor, its Ricci-identity cross-check, frame
//!   rotations, and synthesis of torsion-free frames where obstructions
//!   vanish;
//! - quantitative curvature-estimate experiments (pointwise bounds, scaling
//!   invariants, growth exponents, mean-curvature-system residuals,
//!   Dirichlet energy, normal-direction angles).
//!
//! Everything is deterministic: identical inputs produce byte-identical
//! reports regardless of thread count (set `GEO_THREADS` to cap parallelism).

// Indexed loops in the tensor kernels mirror the index notation of the
// quantities they compute (σ_{Σ,i}^Ω, L_{Σ,ij}, …); iterator rewrites would
// hide that correspondence.
#![allow(clippy::needless_range_loop)]
// `!(x > 0.0)` deliberately routes NaN into the rejecting branch; the
// "clearer" `x <= 0.0` would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bundle;
pub mod error;
pub mod estimates;
pub mod expr;
pub mod fdiff;
pub mod geometry;
pub mod grid;
pub mod jet;
pub mod surface;
pub mod tol;
pub mod validate;

pub use error::{Error, ErrorClass, Result};

/// Initialize the global rayon thread pool from the `GEO_THREADS` environment
/// variable (unset or unparsable means rayon's default). Call once at process
/// start; later calls are ignored. Thread count never affects results, only
/// wall-clock time: all reductions are performed sequentially over
/// positionally collected buffers.
pub fn init_thread_pool_from_env() {
    if let Ok(raw) = std::env::var("GEO_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
