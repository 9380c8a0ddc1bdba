//! Exact per-Fourier-mode solvers for a three-material Poisson problem with a
//! thin annular layer, the first-order asymptotic model, the approximate
//! transmission-condition model at the mid-diffusion split, and a harness that
//! measures the convergence rates of both approximations.
//!
//! Everything lives on concentric circles: the interface `Γ` is the circle of
//! radius `R`, the outer boundary is the circle of radius `R_ext`, and the
//! layer occupies `R - p1·δ < r < R + p2·δ`. Every solution is a finite sum of
//! separable terms `u_n(r)·{cos, sin}(nθ)` whose radial factors are known in
//! closed form, so all interface conditions hold to machine precision.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod exec;
pub mod forcing;
pub mod geometry;
pub mod linalg;
pub mod materials;
pub mod radial;
pub mod reduced;
pub mod verification;

pub use error::{Error, Result};
pub use forcing::{ForcingSpec, ForcingTerm};
pub use geometry::{CircleGeometry, FourierMode, LayerSplit, Parity, Side};
pub use materials::MaterialParams;
pub use radial::RadialPiece;
