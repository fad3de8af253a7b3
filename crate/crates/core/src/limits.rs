use std::env;

/// Enumeration budgets shared by all exhaustive operations.
///
/// `CA_LAB_MAX_CELLS` overrides [`Limits::max_cells`] when read through
/// [`Limits::from_env`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest base alphabet accepted by constructors.
    pub max_alphabet: u32,
    /// Largest 2D radius accepted by exhaustive 2D operations.
    pub max_radius_2d: u32,
    /// Largest materialized rule table (entries).
    pub max_table: u64,
    /// Largest pair graph for closing decisions (vertices).
    pub max_pair_graph: u64,
    /// Generic budget on enumerated items (cells, configurations, search nodes).
    pub max_cells: u64,
    /// Largest initial block (cells) enumerated by exact rectangle counting.
    pub max_entropy_cells: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_alphabet: 16,
            max_radius_2d: 2,
            max_table: 1 << 22,
            max_pair_graph: 1 << 20,
            max_cells: 1 << 26,
            max_entropy_cells: 25,
        }
    }
}

impl Limits {
    pub const ENV_MAX_CELLS: &'static str = "CA_LAB_MAX_CELLS";

    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = env::var(Self::ENV_MAX_CELLS)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            limits.max_cells = n;
        }
        limits
    }
}
