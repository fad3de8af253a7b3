//! Wang tiles, bounded tiling search, directed paths and the hierarchical
//! cross pattern with its plane-filling paths.

mod hierarchy;
mod path;
mod search;
mod tile;
mod wangify;

pub use hierarchy::{
    attach_space_filling_path, generate_hierarchy, gilbert, side_for_step, Anchor, HierarchicalPattern, Label,
    PathCover,
};
pub use path::{follow_path, PathEnd, PathTrace};
pub use search::{count_torus_tilings, tiles_square, tiles_torus, SearchOutcome};
pub use tile::{check_tiling, Color, Compass, Domain, Tile, TileSet, Tiling, Violation};
pub use wangify::{wangify, wangify_many};
