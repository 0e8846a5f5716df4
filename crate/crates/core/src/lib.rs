pub mod cerf;
pub mod cli;
pub mod error;
pub mod exact;
pub mod field;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod survival;

pub use error::{Error, Result};
pub use field::{ComplexField, GridSpec};

/// Complex amplitude used throughout.
pub type Complex = num_complex::Complex64;
