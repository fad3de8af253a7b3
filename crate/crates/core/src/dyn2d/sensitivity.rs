use crate::dyn1d::{find_blocking_word, BlockingReport, BlockingStatus};
use crate::ca::RuleTable2D;
use crate::slicing::build_sliced_rule;
use crate::{Cell, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockingBounds {
    /// Longest candidate word; `None` means `s + 1`.
    pub max_len: Option<usize>,
    pub horizon: u32,
}

impl Default for BlockingBounds {
    fn default() -> Self {
        BlockingBounds {
            max_len: None,
            horizon: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SensitivityOutcome {
    /// A confirmed blocking word for the sliced CA.
    NotSensitiveEvidence(BlockingReport),
    /// Every candidate word was refuted.
    SensitiveEvidence,
    /// Some candidate was neither confirmed nor refuted.
    Unknown(Option<BlockingReport>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityReport {
    pub nu: Cell,
    pub v: Cell,
    pub s: usize,
    pub outcome: SensitivityOutcome,
}

/// Looks for an `r*`-blocking word of the `ν`-sliced CA with period `v`.
pub fn quasi_sensitivity_check(
    rule: &RuleTable2D,
    nu: Cell,
    v: Cell,
    bounds: BlockingBounds,
    limits: &Limits,
) -> Result<SensitivityReport> {
    let sliced = build_sliced_rule(rule, nu, v, limits)?;
    let s = (sliced.rstar as usize).max(1);
    let max_len = bounds.max_len.unwrap_or(s + 1).max(s);
    let outcome = match find_blocking_word(&sliced.rule, s, max_len, bounds.horizon, limits) {
        Some(rep) if rep.status == BlockingStatus::Blocking => SensitivityOutcome::NotSensitiveEvidence(rep),
        Some(rep) => SensitivityOutcome::Unknown(Some(rep)),
        None => SensitivityOutcome::SensitiveEvidence,
    };
    Ok(SensitivityReport { nu, v, s, outcome })
}
