//! Decision procedures and searches for 1D CA.

mod blocking;
mod closing;
mod expansive;
mod oracle;
mod permutivity;

pub use blocking::{check_blocking, find_blocking_word, BlockingReport, BlockingStatus};
pub use closing::{check_closing, ClosingAnswer, ClosingVerdict, ClosingWitness, Side};
pub use expansive::{expansivity_certificate, ExpansivityCertificate1D};
pub use oracle::closing_oracle;
pub use permutivity::{is_leftmost_permutive, is_rightmost_permutive};
