//! Exact computational tools for one- and two-dimensional Diophantine
//! approximation: continued fractions, best simultaneous approximations under
//! the Euclidean norm, lattice frames for rational planes, and a constructor
//! for vectors whose Dirichlet products fall into prescribed intervals.

pub mod approx2d;
pub mod builder;
pub mod cf1d;
pub mod exact;
pub mod io;
pub mod lattice3;
pub mod sample;

mod error;

pub use error::{Error, Result};
pub use exact::{CertifiedOrdering, Rational, RealExpr, Surd};
pub use approx2d::{BestApproxRecord, Chain, Cylinder, CylinderReport, TargetVector};
pub use builder::{ConstructionResult, ConstructionState, ParamPoint, TargetInterval};
pub use lattice3::{Frame, IVec3, RationalPlane};
