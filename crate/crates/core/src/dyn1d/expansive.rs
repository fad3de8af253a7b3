use super::{is_leftmost_permutive, is_rightmost_permutive};
use crate::ca::RuleTable1D;

/// Permutivity summary; `epsilon_exponent` is `Some(r)` exactly when the
/// rule is bipermutive, certifying positive expansivity with constant
/// `2^{-r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExpansivityCertificate1D {
    pub leftmost: bool,
    pub rightmost: bool,
    pub epsilon_exponent: Option<u32>,
}

impl ExpansivityCertificate1D {
    pub fn issued(&self) -> bool {
        self.epsilon_exponent.is_some()
    }
}

pub fn expansivity_certificate(rule: &RuleTable1D) -> ExpansivityCertificate1D {
    let leftmost = is_leftmost_permutive(rule);
    let rightmost = is_rightmost_permutive(rule);
    ExpansivityCertificate1D {
        leftmost,
        rightmost,
        epsilon_exponent: (leftmost && rightmost && rule.radius() > 0).then_some(rule.radius()),
    }
}
