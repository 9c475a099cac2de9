//! Special functions, exact rational helpers, quadrature and the Pfaffian.

pub mod gamma;
pub mod linalg;
pub mod pfaffian;
pub mod poly;
pub mod quadrature;
pub mod residue;

pub use gamma::{complex_gamma, complex_rgamma, pochhammer, pochhammer_exact};
pub use pfaffian::pfaffian;
pub use poly::ExactPolynomial;
pub use quadrature::{contour_quadrature, ContourKind, ContourSpec};
pub use residue::{residue_expansion, LogPolyExpansion, LogTerm, RationalFunction};
