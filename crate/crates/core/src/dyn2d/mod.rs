//! 2D analyses assembled from slicing and the 1D procedures.

mod closing;
mod entropy;
mod permutivity;
mod sensitivity;

pub use closing::{
    nu_closing_evidence, nu_mu_closing_refuter, ClosingEvidenceReport, EvidenceOutcome, NuMuBounds, NuMuWitness,
    SliceClosing, SlicedWitness,
};
pub use entropy::{
    count_rectangles, count_rectangles_1d, entropy_growth_report, CountMode, EntropyRow, EntropyTable,
};
pub use permutivity::{is_gamma_permutive, quasi_expansivity_certificate, QuasiExpansivityCertificate, CORNERS};
pub use sensitivity::{quasi_sensitivity_check, BlockingBounds, SensitivityOutcome, SensitivityReport};
