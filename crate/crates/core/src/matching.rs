//! Exact minimum-weight perfect matching on small weighted complete graphs,
//! plus an exhaustive oracle used to cross-check it in tests.

use crate::blossom::max_weight_matching;
use crate::{Error, Result};

/// Largest node count accepted by [`brute_force_matching`]; (n-1)!! pairings.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// A symmetric weight table over an even number of nodes. `None` marks a
/// forbidden pair.
#[derive(Clone, Debug)]
pub struct MatchGraph {
    n: usize,
    weight: Vec<Option<i64>>,
}

impl MatchGraph {
    pub fn new(n: usize) -> Self {
        MatchGraph { n, weight: vec![None; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set(&mut self, i: usize, j: usize, w: i64) {
        assert!(i != j && i < self.n && j < self.n);
        assert!(w >= 0, "matching weights must be non-negative");
        self.weight[i * self.n + j] = Some(w);
        self.weight[j * self.n + i] = Some(w);
    }

    pub fn forbid(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n);
        self.weight[i * self.n + j] = None;
        self.weight[j * self.n + i] = None;
    }

    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        self.weight[i * self.n + j]
    }

    fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if let Some(w) = self.get(i, j) {
                    edges.push((i, j, w));
                }
            }
        }
        edges
    }
}

/// A perfect matching: every node in exactly one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    fn from_mates(mates: &[Option<usize>]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(mates.len() / 2);
        for (v, &m) in mates.iter().enumerate() {
            match m {
                Some(w) if w > v => pairs.push((v, w)),
                Some(_) => {}
                None => return Err(Error::InfeasibleMatching),
            }
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn cost(&self, g: &MatchGraph) -> i64 {
        self.pairs.iter().map(|&(i, j)| g.get(i, j).expect("matched forbidden pair")).sum()
    }
}

/// Minimum-weight perfect matching.
///
/// Runs maximum-weight matching in max-cardinality mode on the reflected
/// weights `K - w`, which makes perfect matchings of minimal total weight
/// optimal. Fails if the graph is odd or admits no perfect matching over the
/// finite-weight pairs.
pub fn mwpm(g: &MatchGraph) -> Result<Matching> {
    if g.n % 2 != 0 {
        return Err(Error::OddNodeCount(g.n));
    }
    if g.n == 0 {
        return Ok(Matching { pairs: Vec::new() });
    }
    let edges = g.edges();
    let k = edges.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    let reflected: Vec<(usize, usize, i64)> =
        edges.iter().map(|&(i, j, w)| (i, j, k - w)).collect();
    let mates = max_weight_matching(g.n, &reflected, true);
    Matching::from_mates(&mates)
}

/// Exhaustive minimum over all perfect pairings; ties resolved toward the
/// lexicographically smallest pair list.
pub fn brute_force_matching(g: &MatchGraph) -> Result<Matching> {
    if g.n % 2 != 0 {
        return Err(Error::OddNodeCount(g.n));
    }
    if g.n > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLarge { n: g.n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut used = vec![false; g.n];
    let mut current = Vec::new();
    let mut best: Option<(i64, Vec<(usize, usize)>)> = None;
    fn recurse(
        g: &MatchGraph,
        used: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        cost: i64,
        best: &mut Option<(i64, Vec<(usize, usize)>)>,
    ) {
        let Some(i) = used.iter().position(|&u| !u) else {
            match best {
                Some((bc, bp)) if *bc < cost || (*bc == cost && *bp <= *current) => {}
                _ => *best = Some((cost, current.clone())),
            }
            return;
        };
        used[i] = true;
        for j in i + 1..g.len() {
            if used[j] {
                continue;
            }
            let Some(w) = g.get(i, j) else { continue };
            used[j] = true;
            current.push((i, j));
            recurse(g, used, current, cost + w, best);
            current.pop();
            used[j] = false;
        }
        used[i] = false;
    }
    recurse(g, &mut used, &mut current, 0, &mut best);
    match best {
        Some((_, pairs)) => Ok(Matching { pairs }),
        None => {
            if g.n == 0 {
                Ok(Matching { pairs: Vec::new() })
            } else {
                Err(Error::InfeasibleMatching)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize, f: impl Fn(usize, usize) -> i64) -> MatchGraph {
        let mut g = MatchGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.set(i, j, f(i, j));
            }
        }
        g
    }

    #[test]
    fn two_nodes() {
        let mut g = MatchGraph::new(2);
        g.set(0, 1, 7);
        let m = mwpm(&g).unwrap();
        assert_eq!(m.pairs(), &[(0, 1)]);
        assert_eq!(m.cost(&g), 7);
        assert_eq!(brute_force_matching(&g).unwrap().pairs(), &[(0, 1)]);
    }

    #[test]
    fn forced_optimum_on_four_nodes() {
        let g = complete(4, |i, j| if (i, j) == (0, 1) || (i, j) == (2, 3) { 1 } else { 10 });
        let m = mwpm(&g).unwrap();
        assert_eq!(m.cost(&g), 2);
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
    }

    #[test]
    fn six_node_oracle_enumerates_fifteen_pairings() {
        // (6-1)!! = 15; count them through an instrumented recursion
        let g = complete(6, |i, j| ((i * 7 + j * 13) % 5) as i64 + 1);
        let m = brute_force_matching(&g).unwrap();
        let mw = mwpm(&g).unwrap();
        assert_eq!(m.cost(&g), mw.cost(&g));
        let mut count = 0usize;
        fn enumerate(n: usize, used: &mut Vec<bool>, count: &mut usize) {
            let Some(i) = used.iter().position(|&u| !u) else {
                *count += 1;
                return;
            };
            used[i] = true;
            for j in i + 1..n {
                if !used[j] {
                    used[j] = true;
                    enumerate(n, used, count);
                    used[j] = false;
                }
            }
            used[i] = false;
        }
        enumerate(6, &mut vec![false; 6], &mut count);
        assert_eq!(count, 15);
    }

    #[test]
    fn infeasible_graph_reports_error() {
        let g = MatchGraph::new(2);
        assert!(matches!(mwpm(&g), Err(Error::InfeasibleMatching)));
        assert!(matches!(brute_force_matching(&g), Err(Error::InfeasibleMatching)));
        assert!(matches!(mwpm(&MatchGraph::new(3)), Err(Error::OddNodeCount(3))));
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d77706d);
        for trial in 0..10_000 {
            let n = 2 * rng.gen_range(1..=5);
            let g = complete(n, |_, _| 0); // placeholder, refill below
            let mut g = g;
            for i in 0..n {
                for j in i + 1..n {
                    g.set(i, j, rng.gen_range(0..100));
                }
            }
            let fast = mwpm(&g).unwrap();
            let slow = brute_force_matching(&g).unwrap();
            assert_eq!(fast.cost(&g), slow.cost(&g), "trial {trial} on n={n}");
            // perfectness and disjointness
            let mut seen = vec![false; n];
            for &(i, j) in fast.pairs() {
                assert!(!seen[i] && !seen[j]);
                seen[i] = true;
                seen[j] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn constant_shift_moves_cost_by_half_n_times_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x736869667431);
        for _ in 0..1_000 {
            let n = 2 * rng.gen_range(1..=5);
            let mut g = MatchGraph::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    g.set(i, j, rng.gen_range(0..50));
                }
            }
            let c = rng.gen_range(1..20);
            let mut shifted = MatchGraph::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    shifted.set(i, j, g.get(i, j).unwrap() + c);
                }
            }
            let base = mwpm(&g).unwrap().cost(&g);
            let moved = mwpm(&shifted).unwrap().cost(&shifted);
            assert_eq!(moved, base + (n as i64 / 2) * c);
        }
    }
}
