pub mod algebra;
pub mod expr;
pub mod extension;
pub mod field;
pub mod series;
pub mod valued;

pub use algebra::{AlgElem, AlgebraHandle, FiniteFlatAlgebra};
pub use extension::{ExtensionData, ExtensionRing};
pub use field::{CoefficientField, FieldElem};
pub use series::{BaseDvr, Series, Valuation};
pub use valued::{CommRing, ValuationRing};
