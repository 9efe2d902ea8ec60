//! Symbolic and numeric verification of paracontact metric geometry.

pub mod chart;
pub mod check;
pub mod error;
pub mod exact;
pub mod frame;
pub mod geometry;
pub mod levi_civita;
pub mod manifest;
pub mod metric;
pub mod oracle;
pub mod paracontact;
pub mod pipeline;
pub mod soliton_lab;
pub mod tensor;

pub use chart::Chart;
pub use check::{CheckEntry, Probe, Report, Status};
pub use error::{GeometryError, Result};
pub use frame::Frame;
pub use geometry::Geometry;
pub use levi_civita::{Connection, Curvature, RicciMode};
pub use metric::{Metric, Signature};
pub use paracontact::ParacontactStructure;
pub use symexpr::{Expr, Rational};
pub use tensor::TensorField;
