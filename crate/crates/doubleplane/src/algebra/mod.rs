//! Exact field and polynomial arithmetic.
//!
//! Base fields are Q, F_p, and flattened extensions F_{p^k} over F_p with a
//! canonical modulus. On top of the fields sit univariate polynomials,
//! bivariate polynomials (univariate coefficients), homogeneous trivariate
//! forms, resultants by subresultant remainder sequences, square-free
//! decomposition, full finite-field factorization, and square roots of both
//! elements and polynomials.

pub mod bipoly;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod triform;
pub mod unipoly;

pub use bipoly::BiPoly;
pub use factor::{adjoin_root, extension_field, uni_factor, Embedding};
pub use field::{FieldElement, FieldSpec};
pub use parse::{parse_field_spec, parse_form, parse_forms_file};
pub use triform::TriForm;
pub use unipoly::UniPoly;
