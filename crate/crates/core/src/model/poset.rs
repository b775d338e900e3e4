use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ext::ExtNat;

/// A finite partially ordered set, stored as its full order matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the order generated by `pairs` (each `(lower, upper)`), rejecting cycles.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidModel("duplicate point names".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidModel(format!("order pair ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidModel(format!(
                        "order is not antisymmetric: {} and {} are mutually below",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(Poset { names, leq })
    }

    pub fn antichain(k: usize) -> Poset {
        Poset::new((0..k).map(|i| format!("p{i}")).collect(), &[]).expect("antichain")
    }

    pub fn chain(k: usize) -> Poset {
        let pairs: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Poset::new((0..k).map(|i| format!("p{i}")).collect(), &pairs).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn is_antichain(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| i == j || !self.leq[i][j]))
    }

    /// Strict order pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .cartesian_product(0..self.len())
            .filter(|&(a, b)| a != b && self.leq[a][b])
            .collect()
    }

    pub fn is_order_preserving(&self, f: &[ExtNat]) -> bool {
        f.len() == self.len() && self.strict_pairs().iter().all(|&(a, b)| f[a] <= f[b])
    }

    pub fn is_up_set(&self, s: &[bool]) -> bool {
        s.len() == self.len() && self.strict_pairs().iter().all(|&(a, b)| !s[a] || s[b])
    }

    /// Smallest up-set containing `s`.
    pub fn up_closure(&self, s: &[bool]) -> Vec<bool> {
        (0..self.len()).map(|b| (0..self.len()).any(|a| s[a] && self.leq[a][b])).collect()
    }

    /// Largest up-set contained in `s`.
    pub fn up_interior(&self, s: &[bool]) -> Vec<bool> {
        (0..self.len()).map(|a| (0..self.len()).all(|b| !self.leq[a][b] || s[b])).collect()
    }

    /// All up-sets, ordered by bitmask with point 0 as the lowest bit.
    pub fn up_sets(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        assert!(n < 24, "too many points to enumerate up-sets");
        (0u32..1 << n)
            .map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|s| self.is_up_set(s))
            .collect()
    }

    /// Canonical form under relabeling: the lexicographically least order matrix.
    fn canonical_key(&self) -> Vec<bool> {
        let n = self.len();
        (0..n)
            .permutations(n)
            .map(|p| (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.leq[p[i]][p[j]]).collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    /// One representative from each isomorphism class of posets on `n` points.
    pub fn all_up_to_iso(n: usize) -> Vec<Poset> {
        let candidates: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        // Every poset has a linear extension, so relations i < j on the index
        // order suffice to reach each isomorphism class.
        for mask in 0u64..1 << candidates.len() {
            let pairs: Vec<_> = candidates
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &pair)| pair)
                .collect();
            let p = Poset::new((0..n).map(|i| format!("p{i}")).collect(), &pairs).expect("acyclic");
            if seen.insert(p.canonical_key()) {
                out.push(p);
            }
        }
        out
    }
}
