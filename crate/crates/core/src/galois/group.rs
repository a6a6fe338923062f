use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

/// A finite group given by its multiplication table:
/// `table[a][b]` is the index of `a * b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let m = table.len();
        if m == 0 || m > MAX_ORDER {
            return Err(Error::validation(
                "table",
                format!("group order must be between 1 and {MAX_ORDER}"),
            ));
        }
        if labels.len() != m {
            return Err(Error::validation("labels", format!("expected {m} labels")));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != m || row.iter().any(|&x| x >= m) {
                return Err(Error::validation(
                    format!("table[{a}]"),
                    "row has the wrong length or an out-of-range entry",
                ));
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::validation("table", "no identity element"))?;
        let mut inverses = Vec::with_capacity(m);
        for a in 0..m {
            let inv = (0..m)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::validation(format!("table[{a}]"), "element has no inverse"))?;
            inverses.push(inv);
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::validation(
                            format!("table[{a}][{b}]"),
                            format!("not associative with element {c}"),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverses,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(labels, table)
    }

    /// `Z/2 x Z/2` with elements `1, s1, s2, s1s2`.
    pub fn klein_four() -> Self {
        let labels = ["1", "s1", "s2", "s1s2"].map(String::from).to_vec();
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        FiniteGroup::new(labels, table).expect("Klein four table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        !subset.is_empty()
            && subset.iter().all(|&a| a < self.order())
            && subset.contains(&self.identity)
            && subset
                .iter()
                .all(|&a| subset.iter().all(|&b| subset.contains(&self.mul(a, self.inverse(b)))))
    }

    /// True when `subset` is normalized by every element of `ambient`.
    pub fn is_normalized_by(&self, subset: &[usize], ambient: &[usize]) -> bool {
        ambient.iter().all(|&g| {
            subset
                .iter()
                .all(|&h| subset.contains(&self.mul(self.mul(g, h), self.inverse(g))))
        })
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut out = vec![self.identity];
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !out.contains(&y) {
                    out.push(y);
                    frontier.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_four_is_abelian_of_exponent_two() {
        let g = FiniteGroup::klein_four();
        assert_eq!(g.order(), 4);
        for a in g.elements() {
            assert_eq!(g.inverse(a), a);
            for b in g.elements() {
                assert_eq!(g.mul(a, b), g.mul(b, a));
            }
        }
        assert_eq!(g.generated(&[1]), vec![0, 1]);
        assert_eq!(g.generated(&[1, 2]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_bad_tables() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::new(labels.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::new(labels, vec![vec![0, 1], vec![1, 2]]).is_err());
        // a quasigroup that is not associative
        let labels: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let t = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 0]];
        assert!(FiniteGroup::new(labels, t).is_err());
    }

    #[test]
    fn subgroups_and_normality() {
        let g = FiniteGroup::cyclic(6).unwrap();
        assert!(g.is_subgroup(&[0, 2, 4]));
        assert!(!g.is_subgroup(&[0, 1]));
        assert!(g.is_normalized_by(&[0, 3], &[0, 1, 2, 3, 4, 5]));
    }
}
