//! Exact symbolic toolkit for translational surfaces.
//!
//! Given an irreducible trivariate polynomial `f`, [`surface::classify_surface`]
//! decides whether `f = 0` admits a parametrization `P1(t1) + P2(t2)` and, when
//! it does, builds one and verifies it exactly. Supporting layers:
//!
//! - [`poly`]: sparse multivariate polynomials and rational functions over `Q`
//!   with gcd, resultants and substitution;
//! - [`expr`]: parsing and canonical rendering (text and JSON);
//! - [`curve`]: rational space-curve parametrization by projection and lifting;
//! - [`genlab`]: instance generation by implicitization and round-trip checks.

pub mod curve;
pub mod expr;
pub mod genlab;
pub mod poly;
pub mod surface;

pub use curve::CurveParam;
pub use poly::{MPoly, RatFn, VarSet, Q};
pub use surface::{Classification, SurfaceParam};
