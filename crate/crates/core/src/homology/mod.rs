pub mod complex;
pub mod matrix;
pub mod snf;

pub use complex::{BoundedComplex, CohomologyDegree};
pub use matrix::DvrMatrix;
pub use snf::{cokernel_length, smith_decomposition, smith_normal_form, ElementaryDivisors, Length, SmithForm};
