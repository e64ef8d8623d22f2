//! Exterior and Clifford algebra on `ℂⁿ ⊕ (ℂⁿ)*`.
//!
//! Forms live on the dual basis `e_1…e_n`, polyvectors on `∂_1…∂_n`. Both
//! are [`Graded`] values differing only in a marker type.

mod blade;
mod graded;
mod section;

pub use blade::{blades_of_grade, contraction_sign, wedge_sign, Blade, MAX_DIM};
pub use graded::{
    evaluate, interior, mukai_pair, sigma, top_pairing, Form, FormKind, Graded, Kind, Polyvector,
    VectorKind,
};
pub(crate) use graded::check_dims;
pub use section::{clifford_act, inner_product, GeneralizedSection};
