//! Combinatorial and metric description of hyperbolic surfaces via pants
//! decompositions and Fenchel–Nielsen coordinates.

mod cover;
mod decomposition;
mod error;
mod fuchsian;
mod hexagon;
mod pants;
mod paths;
mod systole;

pub use cover::{lift_to_cover, CoveringDescriptor};
pub use decomposition::{
    CurveId, CuspSlot, InteriorCurve, PantsDecomposition, PantsId, SlotIndex,
};
pub use decomposition::{fn_point_from_json, fn_point_to_json, FnPoint};
pub use error::GeometryError;
pub use fuchsian::{build_generators, FuchsianGenerators, Letter, Word};
pub use hexagon::{solve_hexagon, Hexagon};
pub use pants::{collar_half_width, PantsGeometry, SlotFrame, SlotShape};
pub use paths::{appendix_beta_path, pinch_path, PathKind, TeichPath};
pub use systole::{systole, systole_with, thick_thin, SystoleConfig, SystoleResult, SystoleWitness, ThickThin};
