use std::collections::VecDeque;

use crate::ca::{EventuallyPeriodic, RuleTable1D};
use crate::{Limits, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosingAnswer {
    Closing,
    NotClosing,
    Unknown,
}

/// Two distinct asymptotic configurations with equal images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosingWitness {
    pub a: EventuallyPeriodic,
    pub b: EventuallyPeriodic,
}

impl ClosingWitness {
    /// Re-checks the witness from scratch: the configurations are distinct,
    /// agree on a left half-line (`Right`) or right half-line (`Left`), and
    /// have equal images.
    pub fn verify(&self, rule: &RuleTable1D, side: Side) -> bool {
        if self.a.check(rule.alphabet()).is_err() || self.b.check(rule.alphabet()).is_err() {
            return false;
        }
        if self.a.same_sequence(&self.b) {
            return false;
        }
        let asymptotic = match side {
            Side::Right => self.a.agree_left_up_to(&self.b).is_some(),
            Side::Left => self.a.agree_right_from(&self.b).is_some(),
        };
        asymptotic && self.a.image(rule).same_sequence(&self.b.image(rule))
    }

    fn reversed(&self) -> Self {
        ClosingWitness {
            a: self.a.reversed(),
            b: self.b.reversed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosingVerdict {
    pub side: Side,
    pub answer: ClosingAnswer,
    pub witness: Option<ClosingWitness>,
}

/// Decides right (left) closingness with the pair graph.
///
/// Vertices are pairs `(u, w)` of length-`2r` windows; an edge appends
/// `α` to `u` and `β` to `w` when `f(uα) = f(wβ)`. The rule is not closing
/// on that side iff some diagonal vertex reaches a non-diagonal vertex that
/// reaches a cycle. Left closingness is right closingness of the mirror
/// rule.
pub fn check_closing(rule: &RuleTable1D, side: Side, limits: &Limits) -> ClosingVerdict {
    let unknown = ClosingVerdict {
        side,
        answer: ClosingAnswer::Unknown,
        witness: None,
    };
    let widened;
    let rule = if rule.radius() == 0 {
        match rule.widened(1) {
            Ok(w) => {
                widened = w;
                &widened
            }
            Err(_) => return unknown,
        }
    } else {
        rule
    };
    let oriented = match side {
        Side::Right => rule.clone(),
        Side::Left => rule.mirrored(),
    };
    let Some(graph) = PairGraph::new(&oriented, limits) else {
        return unknown;
    };
    match graph.right_witness() {
        None => ClosingVerdict {
            side,
            answer: ClosingAnswer::Closing,
            witness: None,
        },
        Some(w) => ClosingVerdict {
            side,
            answer: ClosingAnswer::NotClosing,
            witness: Some(match side {
                Side::Right => w,
                Side::Left => w.reversed(),
            }),
        },
    }
}

struct PairGraph<'a> {
    rule: &'a RuleTable1D,
    a: usize,
    windows: usize,
    window_len: usize,
    /// `pre[u·a + s]`: the symbols `α` with `f(uα) = s`.
    pre: Vec<Vec<Symbol>>,
}

/// The part of the pair graph reachable from the diagonal, in BFS order.
struct Reached {
    vertex: Vec<u64>,
    parent: Vec<Option<(u32, Symbol, Symbol)>>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<(Symbol, Symbol)>,
}

impl Reached {
    fn edges(&self, v: usize) -> impl Iterator<Item = (usize, (Symbol, Symbol))> + '_ {
        (self.offsets[v]..self.offsets[v + 1]).map(|e| (self.targets[e] as usize, self.labels[e]))
    }
}

impl<'a> PairGraph<'a> {
    fn new(rule: &'a RuleTable1D, limits: &Limits) -> Option<Self> {
        let a = rule.alphabet().size() as usize;
        let window_len = 2 * rule.radius() as usize;
        let windows = a.checked_pow(window_len as u32)?;
        let vertices = windows.checked_mul(windows)?;
        if vertices as u64 > limits.max_pair_graph {
            return None;
        }
        let mut pre = vec![Vec::new(); windows * a];
        for u in 0..windows {
            for alpha in 0..a {
                let s = rule.eval_index(u * a + alpha) as usize;
                pre[u * a + s].push(alpha as Symbol);
            }
        }
        Some(PairGraph {
            rule,
            a,
            windows,
            window_len,
            pre,
        })
    }

    fn split(&self, v: u64) -> (usize, usize) {
        ((v / self.windows as u64) as usize, (v % self.windows as u64) as usize)
    }

    fn successors(&self, v: u64, out: &mut Vec<(u64, Symbol, Symbol)>) {
        out.clear();
        let (u, w) = self.split(v);
        for s in 0..self.a {
            for &alpha in &self.pre[u * self.a + s] {
                for &beta in &self.pre[w * self.a + s] {
                    let u2 = (u * self.a + alpha as usize) % self.windows;
                    let w2 = (w * self.a + beta as usize) % self.windows;
                    out.push(((u2 * self.windows + w2) as u64, alpha, beta));
                }
            }
        }
        out.sort_unstable_by_key(|&(_, al, be)| (al, be));
    }

    fn reach_from_diagonal(&self) -> Reached {
        let n = self.windows * self.windows;
        let mut local = vec![u32::MAX; n];
        let mut r = Reached {
            vertex: Vec::new(),
            parent: Vec::new(),
            offsets: vec![0],
            targets: Vec::new(),
            labels: Vec::new(),
        };
        for u in 0..self.windows {
            let v = u * self.windows + u;
            local[v] = r.vertex.len() as u32;
            r.vertex.push(v as u64);
            r.parent.push(None);
        }
        let mut succ = Vec::new();
        let mut head = 0;
        while head < r.vertex.len() {
            self.successors(r.vertex[head], &mut succ);
            for &(t, alpha, beta) in &succ {
                let t = t as usize;
                if local[t] == u32::MAX {
                    local[t] = r.vertex.len() as u32;
                    r.vertex.push(t as u64);
                    r.parent.push(Some((head as u32, alpha, beta)));
                }
                r.targets.push(local[t]);
                r.labels.push((alpha, beta));
            }
            r.offsets.push(r.targets.len());
            head += 1;
        }
        r
    }

    fn right_witness(&self) -> Option<ClosingWitness> {
        let g = self.reach_from_diagonal();
        let (scc, nontrivial, reaches_cycle) = cycle_reachability(&g);
        let diagonal = |v: usize| {
            let (u, w) = self.split(g.vertex[v]);
            u == w
        };
        let target = (0..g.vertex.len()).find(|&v| !diagonal(v) && reaches_cycle[scc[v]])?;

        // Diagonal root → target.
        let mut prefix = Vec::new();
        let mut v = target;
        while let Some((p, al, be)) = g.parent[v] {
            prefix.push((al, be));
            v = p as usize;
        }
        prefix.reverse();
        let root = v;
        // Target → a vertex on a cycle, staying where cycles are reachable.
        let to_cycle = bfs_path(&g, target, |x| nontrivial[scc[x]], |x| reaches_cycle[scc[x]]);
        let cyc_start = to_cycle.0;
        // Around the cycle, inside the component.
        let c = scc[cyc_start];
        let cycle = bfs_cycle(&g, cyc_start, |x| scc[x] == c);

        let (u0, _) = self.split(g.vertex[root]);
        let mut head = vec![0; self.window_len];
        crate::ca::decode(u0, self.a as u32, &mut head);
        let build = |pick: fn(&(Symbol, Symbol)) -> Symbol| {
            let mut middle = head.clone();
            middle.extend(prefix.iter().chain(&to_cycle.1).map(pick));
            let right = cycle.iter().map(pick).collect();
            EventuallyPeriodic::new(vec![0], middle, right, 0).expect("non-empty tails")
        };
        let w = ClosingWitness {
            a: build(|p| p.0),
            b: build(|p| p.1),
        };
        debug_assert!(w.verify(self.rule, Side::Right));
        Some(w)
    }
}

/// Iterative Tarjan. Returns the component of every vertex, whether each
/// component carries a cycle, and whether it can reach one.
fn cycle_reachability(g: &Reached) -> (Vec<usize>, Vec<bool>, Vec<bool>) {
    let n = g.vertex.len();
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut scc = vec![usize::MAX; n];
    let mut nontrivial = Vec::new();
    let mut reaches = Vec::new();
    let mut next = 0u32;
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, g.offsets[root]));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut e)) = calls.last_mut() {
            if *e < g.offsets[v + 1] {
                let t = g.targets[*e] as usize;
                *e += 1;
                if index[t] == UNSEEN {
                    index[t] = next;
                    low[t] = next;
                    next += 1;
                    stack.push(t);
                    on_stack[t] = true;
                    calls.push((t, g.offsets[t]));
                } else if on_stack[t] {
                    low[v] = low[v].min(index[t]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = nontrivial.len();
                let mut members = Vec::new();
                loop {
                    let x = stack.pop().expect("tarjan stack");
                    on_stack[x] = false;
                    scc[x] = id;
                    members.push(x);
                    if x == v {
                        break;
                    }
                }
                let cyclic = members.len() > 1 || g.edges(v).any(|(t, _)| t == v);
                let reach = cyclic
                    || members
                        .iter()
                        .any(|&x| g.edges(x).any(|(t, _)| scc[t] != id && reaches[scc[t]]));
                nontrivial.push(cyclic);
                reaches.push(reach);
            }
        }
    }
    (scc, nontrivial, reaches)
}

/// Shortest path from `from` to a vertex satisfying `goal`, through
/// vertices satisfying `allowed`. Returns the goal vertex and edge labels.
fn bfs_path(
    g: &Reached,
    from: usize,
    goal: impl Fn(usize) -> bool,
    allowed: impl Fn(usize) -> bool,
) -> (usize, Vec<(Symbol, Symbol)>) {
    let mut parent = vec![None; g.vertex.len()];
    let mut seen = vec![false; g.vertex.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut labels = Vec::new();
            let mut x = v;
            while let Some((p, l)) = parent[x] {
                labels.push(l);
                x = p;
            }
            labels.reverse();
            return (v, labels);
        }
        for (t, l) in g.edges(v) {
            if !seen[t] && allowed(t) {
                seen[t] = true;
                parent[t] = Some((v, l));
                queue.push_back(t);
            }
        }
    }
    unreachable!("goal reachable by construction")
}

/// Labels of a shortest cycle through `start` inside `inside`.
fn bfs_cycle(g: &Reached, start: usize, inside: impl Fn(usize) -> bool) -> Vec<(Symbol, Symbol)> {
    if let Some((_, l)) = g.edges(start).find(|&(t, _)| t == start) {
        return vec![l];
    }
    let mut parent: Vec<Option<(usize, (Symbol, Symbol))>> = vec![None; g.vertex.len()];
    let mut seen = vec![false; g.vertex.len()];
    let mut queue = VecDeque::new();
    for (t, l) in g.edges(start) {
        if inside(t) && !seen[t] {
            seen[t] = true;
            parent[t] = Some((start, l));
            queue.push_back(t);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (t, l) in g.edges(v) {
            if t == start {
                let mut labels = vec![l];
                let mut x = v;
                while let Some((p, pl)) = parent[x] {
                    labels.push(pl);
                    if p == start {
                        break;
                    }
                    x = p;
                }
                labels.reverse();
                return labels;
            }
            if inside(t) && !seen[t] {
                seen[t] = true;
                parent[t] = Some((v, l));
                queue.push_back(t);
            }
        }
    }
    unreachable!("start lies on a cycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::Alphabet;
    use crate::dyn1d::{is_leftmost_permutive, is_rightmost_permutive};

    fn verdict(rule: &RuleTable1D, side: Side) -> ClosingVerdict {
        check_closing(rule, side, &Limits::default())
    }

    #[test]
    fn xor_and_identity_close_both_ways() {
        for rule in [RuleTable1D::xor(Alphabet::BINARY), RuleTable1D::identity(Alphabet::BINARY, 1)] {
            for side in [Side::Left, Side::Right] {
                assert_eq!(verdict(&rule, side).answer, ClosingAnswer::Closing);
            }
        }
    }

    #[test]
    fn and_is_not_right_closing() {
        let and = RuleTable1D::elementary(128);
        let v = verdict(&and, Side::Right);
        assert_eq!(v.answer, ClosingAnswer::NotClosing);
        assert!(v.witness.unwrap().verify(&and, Side::Right));
        let v = verdict(&and, Side::Left);
        assert_eq!(v.answer, ClosingAnswer::NotClosing);
        assert!(v.witness.unwrap().verify(&and, Side::Left));
    }

    #[test]
    fn witnesses_verify_and_permutive_rules_close() {
        for n in 0..=255u8 {
            let rule = RuleTable1D::elementary(n);
            for side in [Side::Left, Side::Right] {
                let v = verdict(&rule, side);
                match v.answer {
                    ClosingAnswer::NotClosing => {
                        assert!(v.witness.as_ref().unwrap().verify(&rule, side), "rule {n} {side:?}")
                    }
                    ClosingAnswer::Closing => assert!(v.witness.is_none()),
                    ClosingAnswer::Unknown => panic!("radius 1 fits the cap"),
                }
            }
            if is_rightmost_permutive(&rule) {
                assert_eq!(verdict(&rule, Side::Right).answer, ClosingAnswer::Closing);
            }
            if is_leftmost_permutive(&rule) {
                assert_eq!(verdict(&rule, Side::Left).answer, ClosingAnswer::Closing);
            }
        }
    }

    #[test]
    fn shifts_are_closing() {
        // Shifts are injective.
        for n in [170u8, 240] {
            let rule = RuleTable1D::elementary(n);
            assert_eq!(verdict(&rule, Side::Left).answer, ClosingAnswer::Closing);
            assert_eq!(verdict(&rule, Side::Right).answer, ClosingAnswer::Closing);
        }
    }

    #[test]
    fn radius_zero_rules() {
        let swap = RuleTable1D::new(Alphabet::raw(3).unwrap(), 0, vec![1, 0, 2]).unwrap();
        assert_eq!(verdict(&swap, Side::Right).answer, ClosingAnswer::Closing);
        let merge = RuleTable1D::new(Alphabet::raw(3).unwrap(), 0, vec![1, 1, 2]).unwrap();
        let v = verdict(&merge, Side::Left);
        assert_eq!(v.answer, ClosingAnswer::NotClosing);
        assert!(v.witness.unwrap().verify(&merge.widened(1).unwrap(), Side::Left));
    }

    #[test]
    fn cap_gives_unknown() {
        let limits = Limits {
            max_pair_graph: 8,
            ..Limits::default()
        };
        let v = check_closing(&RuleTable1D::elementary(30), Side::Right, &limits);
        assert_eq!(v.answer, ClosingAnswer::Unknown);
    }

    #[test]
    fn bogus_witness_rejected() {
        let and = RuleTable1D::elementary(128);
        let same = EventuallyPeriodic::new(vec![0], vec![1], vec![0], 0).unwrap();
        let w = ClosingWitness {
            a: same.clone(),
            b: same,
        };
        assert!(!w.verify(&and, Side::Right));
        // Equal images but differing on both ends: not left-asymptotic.
        let zero = RuleTable1D::constant(Alphabet::BINARY, 1, 0).unwrap();
        let w = ClosingWitness {
            a: EventuallyPeriodic::new(vec![0], vec![], vec![0], 0).unwrap(),
            b: EventuallyPeriodic::new(vec![1], vec![], vec![1], 0).unwrap(),
        };
        assert!(!w.verify(&zero, Side::Right));
    }
}
