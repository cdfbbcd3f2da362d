//! Hierarchical color maps in HCL space.
//!
//! [`treecolors::assign_colors`] colors every node of a [`hierarchy::Hierarchy`]
//! by recursive hue subdivision, [`metrics`] scores the result against the
//! usual color-map design rules, and [`render`] draws it as SVG.

pub mod color_space;
pub mod error;
pub mod fixtures;
pub mod hierarchy;
pub mod metrics;
pub mod render;
pub mod treecolors;

#[cfg(test)]
mod testing;

pub use color_space::{HclColor, LabColor, SrgbColor};
pub use error::{ColorError, ConfigError, HierarchyError, MetricsError, PaletteError, RenderError};
pub use hierarchy::{Hierarchy, NodeId, TreeNode};
pub use treecolors::{assign_colors, PaletteAssignment, PaletteConfig, Preset};
