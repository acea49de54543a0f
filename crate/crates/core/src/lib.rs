//! Hierarchical Hermite quasi-interpolation with truncated hierarchical B-splines.

pub mod bspline;
pub mod error;
pub mod grid;
pub mod harness;
pub mod hqi;
pub mod mesh;
pub mod provider;
pub mod refine;
pub mod scalar;
pub mod tensor;
pub mod thb;
pub mod uniform_qi;

pub use error::{QiError, QiResult};
pub use grid::{Degrees, Grid2, IndexBox, Rect, UniformGrid};
pub use mesh::{Cell, HierarchicalMesh};
pub use scalar::Scalar;
pub use hqi::{hierarchical_qi, HierSpline};
pub use refine::{adaptive_refine, RefinementConfig, StopReason};
pub use tensor::{tensor_qi, HermiteData, HermiteSample, TensorSpline};
pub use thb::ThbBasis;

pub type TensorSplineF64 = TensorSpline<f64>;
pub type TensorSplineF32 = TensorSpline<f32>;
pub type HierSplineF64 = HierSpline<f64>;
pub type HierSplineF32 = HierSpline<f32>;
pub type MeshF64 = HierarchicalMesh<f64>;
pub type MeshF32 = HierarchicalMesh<f32>;
pub type ThbBasisF64 = ThbBasis<f64>;
