use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite positively ordered monoid given by explicit tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableModel {
    names: Vec<String>,
    add: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    zero: usize,
}

impl TableModel {
    /// Validates the monoid and order axioms exhaustively.
    pub fn new(names: Vec<String>, add: Vec<Vec<usize>>, leq: Vec<Vec<bool>>) -> Result<TableModel> {
        let n = names.len();
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if n == 0 {
            return bad("a table model needs at least one element".into());
        }
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return bad("duplicate element names".into());
        }
        if add.len() != n || add.iter().any(|r| r.len() != n) {
            return bad(format!("addition table must be {n}x{n}"));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return bad(format!("order matrix must be {n}x{n}"));
        }
        if add.iter().flatten().any(|&v| v >= n) {
            return bad("addition table entry out of range".into());
        }
        let name = |i: usize| names[i].as_str();

        for a in 0..n {
            if !leq[a][a] {
                return bad(format!("order is not reflexive at {}", name(a)));
            }
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return bad(format!("addition is not commutative at ({}, {})", name(a), name(b)));
                }
                if a != b && leq[a][b] && leq[b][a] {
                    return bad(format!("order is not antisymmetric at ({}, {})", name(a), name(b)));
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return bad(format!(
                            "addition is not associative at ({}, {}, {})",
                            name(a),
                            name(b),
                            name(c)
                        ));
                    }
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return bad(format!(
                            "order is not transitive at ({}, {}, {})",
                            name(a),
                            name(b),
                            name(c)
                        ));
                    }
                    if leq[a][b] && !leq[add[a][c]][add[b][c]] {
                        return bad(format!(
                            "addition is not monotone: {} <= {} but {0}+{} > {1}+{2}",
                            name(a),
                            name(b),
                            name(c)
                        ));
                    }
                }
            }
        }
        let Some(zero) = (0..n).find(|&z| (0..n).all(|a| add[z][a] == a)) else {
            return bad("no neutral element".into());
        };
        if let Some(a) = (0..n).find(|&a| !leq[zero][a]) {
            return bad(format!("zero is not below {}", name(a)));
        }
        Ok(TableModel { names, add, leq, zero })
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

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn leq_matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_element_semilattice() {
        let m = TableModel::new(names(&["0", "a"]), vec![vec![0, 1], vec![1, 1]], vec![vec![true, true], vec![false, true]])
            .unwrap();
        assert_eq!(m.zero(), 0);
        assert_eq!(m.add(1, 1), 1);
    }

    #[test]
    fn rejects_non_monotone_addition() {
        // 0 < a, but a + a = 0 drops below 0 + a = a.
        let err = TableModel::new(
            names(&["0", "a"]),
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![true, true], vec![false, true]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("monotone"), "{err}");
    }

    #[test]
    fn rejects_zero_not_least() {
        let err = TableModel::new(
            names(&["0", "a"]),
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![true, false], vec![true, true]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("zero"), "{err}");
    }
}
