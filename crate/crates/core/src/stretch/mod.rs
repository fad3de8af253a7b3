//! Integer rasterization of segments, the lattice fundamental domain used
//! as macro-tile shape, and stretching of tile sets into macro-tiles.

mod raster;
mod shape;
mod tileset;

pub use raster::{rasterize, Rasterization};
pub use shape::{build_shape, build_shape_unscaled, BorderSide, CellEdge, MacroShape};
pub use tileset::{stretch_tileset, verify_isomorphism, IsomorphismReport, StretchedTileSet};
