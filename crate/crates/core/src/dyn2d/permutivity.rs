use crate::ca::{LocalRule2D, RuleTable2D};
use crate::dyn1d::expansivity_certificate;
use crate::slicing::{build_family, build_sliced_rule};
use crate::{CaError, Cell, Limits, Result};

/// The four diagonal directions, counter-clockwise from `(1, 1)`.
pub const CORNERS: [Cell; 4] = [(1, 1), (-1, 1), (-1, -1), (1, -1)];

/// Whether the neighborhood cell `r·γ` acts injectively for every fixed
/// value of the other cells.
pub fn is_gamma_permutive(rule: &RuleTable2D, gamma: Cell, limits: &Limits) -> Result<bool> {
    if !CORNERS.contains(&gamma) {
        return Err(CaError::InvalidArgument(format!("{gamma:?} is not a diagonal direction")));
    }
    let a = rule.alphabet().size() as usize;
    let n = rule.offsets().len();
    let contexts = (a as u128).pow(n as u32 - 1);
    if contexts > limits.max_table as u128 {
        return Err(CaError::cap("permutivity contexts", contexts, limits.max_table as u128));
    }
    let r = rule.radius() as i64;
    let Some(pos) = rule.offset_index((r * gamma.0, r * gamma.1)).filter(|_| r > 0) else {
        return Ok(a == 1);
    };
    let stride = a.pow((n - 1 - pos) as u32);
    let mut seen = vec![false; a];
    Ok((0..rule.table().len())
        .filter(|idx| (idx / stride) % a == 0)
        .all(|idx| {
            seen.iter_mut().for_each(|s| *s = false);
            (0..a).all(|alpha| !std::mem::replace(&mut seen[rule.eval_index(idx + alpha * stride) as usize], true))
        }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiExpansivityCertificate {
    pub gamma: Cell,
    /// Which slicing directions the certificate covers.
    pub nus_covered: String,
    /// The `(ν, v)` whose sliced rule was checked to be bipermutive.
    pub sliced_check: (Cell, Cell),
}

/// Certificate from `γ`- and `−γ`-permutivity, confirmed by bipermutivity
/// of the rule sliced along `ν = γ` with `v = 2d`.
pub fn quasi_expansivity_certificate(
    rule: &RuleTable2D,
    limits: &Limits,
) -> Result<Option<QuasiExpansivityCertificate>> {
    for gamma in CORNERS {
        if !is_gamma_permutive(rule, gamma, limits)? || !is_gamma_permutive(rule, (-gamma.0, -gamma.1), limits)? {
            continue;
        }
        let family = build_family(gamma)?;
        let v = (2 * family.d.0, 2 * family.d.1);
        let sliced = build_sliced_rule(rule, gamma, v, limits)?;
        if expansivity_certificate(&sliced.rule).issued() {
            return Ok(Some(QuasiExpansivityCertificate {
                gamma,
                nus_covered: format!(
                    "every nu in the closed quadrant of {gamma:?} or of {:?}",
                    (-gamma.0, -gamma.1)
                ),
                sliced_check: (gamma, v),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{builtin, Alphabet};
    use crate::dyn1d::{is_leftmost_permutive, is_rightmost_permutive};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn xor_corners() {
        let rule = builtin::xor_corners(Alphabet::BINARY);
        assert!(is_gamma_permutive(&rule, (1, 1), &lim()).unwrap());
        assert!(is_gamma_permutive(&rule, (-1, -1), &lim()).unwrap());
        assert!(!is_gamma_permutive(&rule, (1, -1), &lim()).unwrap());
        assert!(!is_gamma_permutive(&rule, (-1, 1), &lim()).unwrap());
        let cert = quasi_expansivity_certificate(&rule, &lim()).unwrap().unwrap();
        assert_eq!(cert.gamma, (1, 1));
        assert_eq!(cert.sliced_check, ((1, 1), (2, -2)));
    }

    #[test]
    fn identity_and_one_sided() {
        let id = builtin::identity(Alphabet::BINARY, 1);
        for g in CORNERS {
            assert!(!is_gamma_permutive(&id, g, &lim()).unwrap());
        }
        assert!(quasi_expansivity_certificate(&id, &lim()).unwrap().is_none());
        let a = Alphabet::BINARY;
        let one_corner = RuleTable2D::moore(a, 1, |n| n.at(0, 0) ^ n.at(1, 1)).unwrap();
        assert!(is_gamma_permutive(&one_corner, (1, 1), &lim()).unwrap());
        assert!(quasi_expansivity_certificate(&one_corner, &lim()).unwrap().is_none());
        assert!(is_gamma_permutive(&id, (1, 0), &lim()).is_err());
    }

    #[test]
    fn permutivity_transfers_to_slices() {
        // γ-permutive rules slice to one-sided permutive rules for ν in
        // γ's quadrant or the opposite one.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = Alphabet::BINARY;
        for _ in 0..20 {
            let noise: Vec<u32> = (0..512).map(|_| rng.gen_range(0..2)).collect();
            // XOR of the (1,1) corner with an arbitrary function of the rest.
            let rule = RuleTable2D::moore(a, 1, |n| {
                let rest: usize = n.states().iter().enumerate().filter(|(i, _)| *i != 8).fold(0, |acc, (_, &s)| acc * 2 + s as usize);
                n.at(1, 1) ^ noise[rest]
            })
            .unwrap();
            assert!(is_gamma_permutive(&rule, (1, 1), &lim()).unwrap());
            for nu in [(1, 1), (2, 1), (1, 2)] {
                let d = build_family(nu).unwrap().d;
                let s = build_sliced_rule(&rule, nu, (2 * d.0, 2 * d.1), &lim()).unwrap();
                assert!(is_rightmost_permutive(&s.rule) || is_leftmost_permutive(&s.rule), "nu {nu:?}");
            }
        }
    }
}
