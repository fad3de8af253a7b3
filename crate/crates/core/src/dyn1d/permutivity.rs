use crate::ca::RuleTable1D;

/// `α ↦ f(uα)` is a bijection of `A` for every context `u ∈ A^{2r}`.
pub fn is_rightmost_permutive(rule: &RuleTable1D) -> bool {
    let a = rule.alphabet().size() as usize;
    let contexts = rule.table().len() / a;
    let mut seen = vec![false; a];
    (0..contexts).all(|u| {
        seen.iter_mut().for_each(|s| *s = false);
        (0..a).all(|alpha| !std::mem::replace(&mut seen[rule.eval_index(u * a + alpha) as usize], true))
    })
}

/// `α ↦ f(αu)` is a bijection of `A` for every context `u ∈ A^{2r}`.
pub fn is_leftmost_permutive(rule: &RuleTable1D) -> bool {
    let a = rule.alphabet().size() as usize;
    let contexts = rule.table().len() / a;
    let mut seen = vec![false; a];
    (0..contexts).all(|u| {
        seen.iter_mut().for_each(|s| *s = false);
        (0..a).all(|alpha| !std::mem::replace(&mut seen[rule.eval_index(alpha * contexts + u) as usize], true))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::Alphabet;

    #[test]
    fn examples() {
        let xor = RuleTable1D::xor(Alphabet::BINARY);
        assert!(is_rightmost_permutive(&xor) && is_leftmost_permutive(&xor));
        let id = RuleTable1D::identity(Alphabet::BINARY, 1);
        assert!(!is_rightmost_permutive(&id) && !is_leftmost_permutive(&id));
        let zero = RuleTable1D::constant(Alphabet::BINARY, 1, 0).unwrap();
        assert!(!is_rightmost_permutive(&zero) && !is_leftmost_permutive(&zero));
        // x₋₁ ⊕ x₀ is elementary rule 60.
        let left = RuleTable1D::elementary(60);
        assert_eq!(left.eval(&[1, 0, 0]), 1);
        assert_eq!(left.eval(&[1, 1, 0]), 0);
        assert!(is_leftmost_permutive(&left) && !is_rightmost_permutive(&left));
    }

    #[test]
    fn mirror_swaps_sides() {
        for n in 0..=255u8 {
            let r = RuleTable1D::elementary(n);
            assert_eq!(is_rightmost_permutive(&r), is_leftmost_permutive(&r.mirrored()));
        }
    }

    #[test]
    fn counts_among_elementary_rules() {
        // Brute force: rightmost permutive means f(l,c,1) = ¬f(l,c,0) for all l,c.
        let brute = |n: u8| (0..4).all(|lc| ((n >> (2 * lc)) & 1) != ((n >> (2 * lc + 1)) & 1));
        for n in 0..=255u8 {
            assert_eq!(is_rightmost_permutive(&RuleTable1D::elementary(n)), brute(n), "rule {n}");
        }
    }
}
