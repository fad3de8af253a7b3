//! The CA `F_τ` over `K × τ × {0, 1}` built from a tile set `τ` and a
//! stretched directed hierarchy `K`, its non-closing witnesses and a
//! bounded search for equal-image pairs.

mod ca;
mod probe;
mod witness;

pub use ca::{build_reduction, build_reduction_with, hierarchy_base, KPattern, Layers, ReductionCA};
pub use probe::{bounded_closing_probe, ProbeBounds, ProbeReport, ProbeWitness, KEPT_WITNESSES};
pub use witness::{
    build_witness, check_equal_image, check_witness_windows, periodic_tiling, SplitLine, WitnessKind, WitnessPair,
};
