pub mod clinear;
pub mod error;
pub mod hlinear;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod quadratic;
pub mod quaternion;
pub mod scatter;

pub use error::{Error, Result};
pub use quaternion::{Quaternion, RightLinearScalarOp, SymplecticPair};
