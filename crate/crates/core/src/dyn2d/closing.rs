use crate::ca::{
    evolve_pair, eval_at, Alphabet, AsymptoticPair2D, EventuallyPeriodic, HalfPlane, LocalRule2D, Rect, RuleTable2D,
    TorusConfig2D,
};
use crate::dyn1d::{check_closing, ClosingAnswer, ClosingVerdict, Side};
use crate::lattice::{det, dot, lcm};
use crate::slicing::{build_family, build_sliced_rule, compute_rstar, LineFamily, SlicedCA};
use crate::{Cell, Limits, Result, Symbol};

/// A pair of `v`-periodic configurations given by their line symbols.
///
/// Cell `x = y_i + t·d` of configuration `a` is digit `t mod k` of
/// `a.at(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedWitness {
    pub family: LineFamily,
    pub k: u32,
    pub alphabet: Alphabet,
    pub a: EventuallyPeriodic,
    pub b: EventuallyPeriodic,
}

impl SlicedWitness {
    fn from_slice(sliced: &SlicedCA, a: EventuallyPeriodic, b: EventuallyPeriodic) -> Self {
        SlicedWitness {
            family: sliced.family,
            k: sliced.k,
            alphabet: sliced.base_alphabet(),
            a,
            b,
        }
    }

    fn cell(&self, seq: &EventuallyPeriodic, x: Cell) -> Symbol {
        let c = self.family.decompose(x);
        let a = self.alphabet.size();
        let pos = c.offset.rem_euclid(self.k as i64) as u32;
        (seq.at(c.line_index) / a.pow(self.k - 1 - pos)) % a
    }

    pub fn cell_a(&self, x: Cell) -> Symbol {
        self.cell(&self.a, x)
    }

    pub fn cell_b(&self, x: Cell) -> Symbol {
        self.cell(&self.b, x)
    }

    /// Whether the two configurations agree on some half-plane
    /// `{x : normal · x ≥ q}`.
    pub fn agree_on_halfplane(&self, normal: Cell) -> bool {
        let n = self.family.normal;
        if det(normal, n) != 0 || normal == (0, 0) {
            return false;
        }
        if dot(normal, n) > 0 {
            self.a.agree_right_from(&self.b).is_some()
        } else {
            self.a.agree_left_up_to(&self.b).is_some()
        }
    }

    /// Re-checks the witness against the 2D rule directly: the
    /// configurations differ, agree on a half-plane for each normal in
    /// `agree_normals`, and have equal images everywhere.
    pub fn verify(&self, rule: &RuleTable2D, agree_normals: &[Cell]) -> bool {
        if rule.alphabet() != self.alphabet || self.a.same_sequence(&self.b) {
            return false;
        }
        if !agree_normals.iter().all(|&n| self.agree_on_halfplane(n)) {
            return false;
        }
        // Images are eventually periodic in the line index, with the tails'
        // periods, beyond r* lines from the middles.
        let rstar = compute_rstar(&self.family, rule.radius()) as i64;
        let lo = self.a.start.min(self.b.start) - rstar - lcm(self.a.left.len() as i64, self.b.left.len() as i64);
        let hi = self.a.end().max(self.b.end()) + rstar + lcm(self.a.right.len() as i64, self.b.right.len() as i64);
        let mut buf = Vec::new();
        let fa = |x: Cell| self.cell_a(x);
        let fb = |x: Cell| self.cell_b(x);
        (lo..hi).all(|i| {
            (0..self.k as i64).all(|t| {
                let x = self.family.compose(crate::slicing::SliceCoord {
                    line_index: i,
                    offset: t,
                });
                eval_at(rule, x, &fa, &mut buf) == eval_at(rule, x, &fb, &mut buf)
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceClosing {
    pub v: Cell,
    pub k: u32,
    pub left: ClosingVerdict,
    pub right: ClosingVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvidenceOutcome {
    /// Some slice is closing on neither side; the witness is a pair of
    /// distinct `ν̄`-asymptotic configurations with equal images.
    Refuted { v: Cell, witness: SlicedWitness },
    /// Every slice is closing on at least one side. This is necessary for
    /// `ν`-closingness, not sufficient.
    Supporting,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosingEvidenceReport {
    pub nu: Cell,
    pub per_v: Vec<SliceClosing>,
    pub outcome: EvidenceOutcome,
}

pub fn nu_closing_evidence(
    rule: &RuleTable2D,
    nu: Cell,
    v_list: &[Cell],
    limits: &Limits,
) -> Result<ClosingEvidenceReport> {
    let mut per_v = Vec::with_capacity(v_list.len());
    let mut refuted = None;
    for &v in v_list {
        let sliced = build_sliced_rule(rule, nu, v, limits)?;
        let left = check_closing(&sliced.rule, Side::Left, limits);
        let right = check_closing(&sliced.rule, Side::Right, limits);
        if refuted.is_none() && left.answer == ClosingAnswer::NotClosing && right.answer == ClosingAnswer::NotClosing {
            // ν̄-asymptotic pairs agree on low line indices when the normal
            // points along ν: that is a right-closing witness.
            let verdict = if dot(sliced.family.normal, nu) > 0 { &right } else { &left };
            let w = verdict.witness.clone().expect("NotClosing carries a witness");
            refuted = Some((v, SlicedWitness::from_slice(&sliced, w.a, w.b)));
        }
        per_v.push(SliceClosing {
            v,
            k: sliced.k,
            left,
            right,
        });
    }
    let outcome = if let Some((v, witness)) = refuted {
        EvidenceOutcome::Refuted { v, witness }
    } else if per_v
        .iter()
        .all(|s| s.left.answer == ClosingAnswer::Closing || s.right.answer == ClosingAnswer::Closing)
    {
        EvidenceOutcome::Supporting
    } else {
        EvidenceOutcome::Inconclusive
    };
    Ok(ClosingEvidenceReport { nu, per_v, outcome })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuMuBounds {
    /// Side of the square patch searched for finite differences.
    pub box_side: usize,
    /// Largest slice period for line-supported differences.
    pub max_k: u32,
    /// Largest number of consecutive differing lines.
    pub max_lines: usize,
}

impl Default for NuMuBounds {
    fn default() -> Self {
        NuMuBounds {
            box_side: 2,
            max_k: 2,
            max_lines: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NuMuWitness {
    /// Finitely many differences on a constant background.
    Finite(AsymptoticPair2D),
    /// Differences on finitely many lines parallel to `d` (only possible
    /// when `μ ∥ ν`).
    Sliced(SlicedWitness),
}

impl NuMuWitness {
    pub fn verify(&self, rule: &RuleTable2D, nu: Cell, mu: Cell, limits: &Limits) -> bool {
        let normals = [(-nu.0, -nu.1), (-mu.0, -mu.1)];
        match self {
            NuMuWitness::Sliced(w) => w.verify(rule, &normals),
            NuMuWitness::Finite(p) => {
                let halves_ok = normals.iter().all(|n| p.halfplanes().iter().any(|h| h.normal == *n));
                let Some(window) = Rect::bounding(p.difference_cells()) else {
                    return false;
                };
                let window = window.grow(rule.reach());
                halves_ok
                    && evolve_pair(rule, p, 1, window, limits)
                        .map(|t| t.equal_at(1))
                        .unwrap_or(false)
            }
        }
    }
}

/// Bounded search for distinct `ν̄`-`μ̄`-asymptotic configurations with
/// equal images: first finite differences on constant backgrounds, then,
/// if `μ ∥ ν`, differences on a few lines of a `v`-periodic configuration.
pub fn nu_mu_closing_refuter(
    rule: &RuleTable2D,
    nu: Cell,
    mu: Cell,
    bounds: NuMuBounds,
    limits: &Limits,
) -> Result<Option<NuMuWitness>> {
    if let Some(p) = finite_search(rule, nu, mu, bounds, limits)? {
        return Ok(Some(NuMuWitness::Finite(p)));
    }
    if det(nu, mu) == 0 {
        if let Some(w) = line_search(rule, nu, mu, bounds, limits)? {
            return Ok(Some(NuMuWitness::Sliced(w)));
        }
    }
    Ok(None)
}

fn finite_search(
    rule: &RuleTable2D,
    nu: Cell,
    mu: Cell,
    bounds: NuMuBounds,
    limits: &Limits,
) -> Result<Option<AsymptoticPair2D>> {
    let alphabet = rule.alphabet();
    let a = alphabet.size() as u64;
    for side in 1..=bounds.box_side {
        let patch = Rect::new(0, 0, side, side);
        let domain: Vec<Cell> = patch.cells().collect();
        let count = a.checked_pow(domain.len() as u32).filter(|&c| c * c <= limits.max_cells);
        let Some(count) = count else { break };
        let pattern = |code: u64| -> Vec<Symbol> {
            let mut p = vec![0; domain.len()];
            crate::ca::decode(code as usize, alphabet.size(), &mut p);
            p
        };
        for bg in 0..alphabet.size() {
            let background = TorusConfig2D::constant(alphabet, 1, 1, bg)?;
            let window = patch.grow(rule.reach());
            for ca in 0..count {
                let pa = pattern(ca);
                for cb in ca + 1..count {
                    let pb = pattern(cb);
                    let diffs: Vec<Cell> = domain
                        .iter()
                        .zip(pa.iter().zip(&pb))
                        .filter(|(_, (x, y))| x != y)
                        .map(|(&c, _)| c)
                        .collect();
                    let halfplanes = vec![
                        HalfPlane::avoiding((-nu.0, -nu.1), diffs.iter().copied()),
                        HalfPlane::avoiding((-mu.0, -mu.1), diffs.iter().copied()),
                    ];
                    let pair =
                        AsymptoticPair2D::new(background.clone(), domain.clone(), pa.clone(), pb, halfplanes)?;
                    if evolve_pair(rule, &pair, 1, window, limits)?.equal_at(1) {
                        return Ok(Some(pair));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn line_search(
    rule: &RuleTable2D,
    nu: Cell,
    mu: Cell,
    bounds: NuMuBounds,
    limits: &Limits,
) -> Result<Option<SlicedWitness>> {
    let family = build_family(nu)?;
    let normals = [(-nu.0, -nu.1), (-mu.0, -mu.1)];
    for k in 1..=bounds.max_k as i64 {
        let sliced = build_sliced_rule(rule, nu, (k * family.d.0, k * family.d.1), limits)?;
        let b = sliced.sliced_alphabet().size() as u64;
        for len in 1..=bounds.max_lines {
            let Some(count) = b.checked_pow(len as u32).filter(|&c| c * c <= limits.max_cells) else {
                break;
            };
            let word = |code: u64| {
                let mut w = vec![0; len];
                crate::ca::decode(code as usize, b as u32, &mut w);
                w
            };
            for bg in 0..b as Symbol {
                for ca in 0..count {
                    let ea = EventuallyPeriodic::new(vec![bg], word(ca), vec![bg], 0)?;
                    let ia = ea.image(&sliced.rule);
                    for cb in ca + 1..count {
                        let eb = EventuallyPeriodic::new(vec![bg], word(cb), vec![bg], 0)?;
                        if ia.same_sequence(&eb.image(&sliced.rule)) {
                            let w = SlicedWitness::from_slice(&sliced, ea.clone(), eb);
                            if w.verify(rule, &normals) {
                                return Ok(Some(w));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::builtin;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn xor_corners_antidiagonal_refuted() {
        let rule = builtin::xor_corners(Alphabet::BINARY);
        let rep = nu_closing_evidence(&rule, (1, -1), &[(1, 1), (2, 2)], &lim()).unwrap();
        match rep.outcome {
            EvidenceOutcome::Refuted { witness, .. } => assert!(witness.verify(&rule, &[(-1, 1)])),
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn xor_corners_diagonal_supported() {
        let rule = builtin::xor_corners(Alphabet::BINARY);
        let rep = nu_closing_evidence(&rule, (1, 1), &[(1, -1), (2, -2)], &lim()).unwrap();
        assert_eq!(rep.outcome, EvidenceOutcome::Supporting);
        for s in &rep.per_v {
            assert_eq!(s.left.answer, ClosingAnswer::Closing);
            assert_eq!(s.right.answer, ClosingAnswer::Closing);
        }
    }

    #[test]
    fn identity_supported_everywhere() {
        let rule = builtin::identity(Alphabet::BINARY, 1);
        for (nu, v) in [((1, 0), (0, 1)), ((1, 1), (1, -1)), ((2, 1), (1, -2))] {
            let rep = nu_closing_evidence(&rule, nu, &[v], &lim()).unwrap();
            assert_eq!(rep.outcome, EvidenceOutcome::Supporting);
        }
    }

    #[test]
    fn nu_mu_examples() {
        let id = builtin::identity(Alphabet::BINARY, 1);
        assert!(nu_mu_closing_refuter(&id, (1, -1), (-1, 1), NuMuBounds::default(), &lim())
            .unwrap()
            .is_none());

        let xc = builtin::xor_corners(Alphabet::BINARY);
        let w = nu_mu_closing_refuter(&xc, (1, -1), (-1, 1), NuMuBounds::default(), &lim())
            .unwrap()
            .expect("strip witness");
        assert!(matches!(w, NuMuWitness::Sliced(_)));
        assert!(w.verify(&xc, (1, -1), (-1, 1), &lim()));

        let zero = builtin::constant(Alphabet::BINARY, 1, 0).unwrap();
        let w = nu_mu_closing_refuter(&zero, (1, 0), (0, 1), NuMuBounds::default(), &lim())
            .unwrap()
            .expect("constant map merges everything");
        assert!(matches!(w, NuMuWitness::Finite(_)));
        assert!(w.verify(&zero, (1, 0), (0, 1), &lim()));
    }

    #[test]
    fn tampered_witness_fails() {
        let rule = builtin::xor_corners(Alphabet::BINARY);
        let rep = nu_closing_evidence(&rule, (1, -1), &[(1, 1)], &lim()).unwrap();
        let EvidenceOutcome::Refuted { mut witness, .. } = rep.outcome else {
            panic!("expected refutation")
        };
        witness.b = witness.a.clone();
        assert!(!witness.verify(&rule, &[(-1, 1)]));
        // Against a different rule the images no longer match.
        let id = builtin::identity(Alphabet::BINARY, 1);
        let rep = nu_closing_evidence(&rule, (1, -1), &[(1, 1)], &lim()).unwrap();
        let EvidenceOutcome::Refuted { witness, .. } = rep.outcome else {
            panic!("expected refutation")
        };
        assert!(!witness.verify(&id, &[(-1, 1)]));
    }
}
