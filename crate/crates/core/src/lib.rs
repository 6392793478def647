//! Numerical laboratory for algebraic Kähler curvature tensors.
//!
//! Everything here works pointwise on curvature data in a fixed unitary
//! frame: no metrics, connections, or covariant derivatives. The crate
//! certifies curvature-positivity cones by multi-start frame minimization,
//! integrates the pointwise curvature reaction ODE of Kähler–Ricci flow,
//! verifies the first and second frame-variation identities against finite
//! differences, and detects and classifies product (block) structure.
//!
//! All operations are pure functions of immutable values and safe to call
//! concurrently; every randomized routine takes an explicit seed.

pub mod cones;
pub mod decomposition;
pub mod error;
pub mod flow;
pub mod io;
pub mod models;
pub mod real;
pub mod rng;
pub mod tensor;
pub mod variations;
pub mod weitzenbock;

pub use error::{Error, Result};
pub use tensor::{
    CMatrix, CVector, HermitianMatrix, KahlerCurvatureTensor, OrthonormalTwoFrame, C64,
};
