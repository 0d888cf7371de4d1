//! Compatibility of measurements on polytopal state spaces.
//!
//! A state space is a polytope `K` given by its vertices. Two-outcome
//! measurements are effects, affine functions `K → [0, 1]`. This crate
//! decides whether two such measurements admit a joint measurement, computes
//! their degree of compatibility (the largest weight `λ` at which the
//! measurements, each mixed with a fair coin, become compatible) through a
//! linear program, and extracts dual certificates of incompatibility.
//!
//! ```
//! use gptcompat::{compat, shapes, DEFAULT_TOL};
//!
//! let square = shapes::hypercube(2, DEFAULT_TOL).unwrap();
//! let f1 = gptcompat::AffineFunction::from_ambient(&square, &[1.0, 0.0], 0.0).unwrap();
//! let f2 = gptcompat::AffineFunction::from_ambient(&square, &[0.0, 1.0], 0.0).unwrap();
//! let m1 = gptcompat::TwoOutcomeMeasurement::from_function(f1, &square).unwrap();
//! let m2 = gptcompat::TwoOutcomeMeasurement::from_function(f2, &square).unwrap();
//! let d = compat::degree(&m1, &m2, &square).unwrap();
//! assert!((d.lambda - 0.5).abs() < 1e-9);
//! ```

pub mod compat;
pub mod effects;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod shapes;

pub use compat::{
    construct_incompatible_pair, degree, degree_free_coin, half_coin_joint, is_compatible,
    joint_from_p, simplex_product_joint, verify_certificate, CompatibilityResult, DegreeResult,
    IncompatibilityCertificate, IncompatiblePair, JointMeasurement, Partner, ProductJoint,
};
pub use effects::{
    AffineFunction, Effect, FiniteMeasurement, PositiveFunctional, SignedFunctional,
    TwoOutcomeMeasurement,
};
pub use error::{Error, Result};
pub use geometry::{Facet, Point, Polytope, DEFAULT_TOL};
pub use lp::{LinearProgram, LpSolution, LpStatus};

/// Default duality-gap tolerance.
pub const DEFAULT_GAP_TOL: f64 = 1e-7;
