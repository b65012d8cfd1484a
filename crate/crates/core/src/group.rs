//! Finite groups given concretely by their multiplication tables.

use std::fmt;

use thiserror::Error;

/// Largest group order accepted by any constructor.
pub const MAX_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("group order {0} exceeds the configured cap of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("multiplication table has {rows} rows but {names} element names")]
    Shape { rows: usize, names: usize },
    #[error("row {row} of the multiplication table has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("element name {0:?} appears more than once")]
    DuplicateName(String),
    #[error("element name at index {0} is empty")]
    EmptyName(usize),
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("element 0 is not an identity: {0}")]
    Identity(String),
    #[error("row or column {0} is not a permutation (table is not a Latin square)")]
    NotLatin(String),
    #[error("element {0:?} has no two-sided inverse")]
    MissingInverse(String),
    #[error("associativity fails for ({a}, {b}, {c})")]
    NotAssociative { a: String, b: String, c: String },
}

/// A finite group with elements indexed `0..order`; index 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    names: Vec<String>,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order())
            .field("names", &self.names)
            .finish()
    }
}

impl Group {
    /// The cyclic group Z_order with elements `e, g, g^2, ...`.
    pub fn cyclic(order: usize) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::OrderTooSmall { min: 1, got: 0 });
        }
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(order));
        }
        let names = (0..order).map(|k| power_name("g", k)).collect();
        let table = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a + b) % order))
            .collect();
        let inverses = (0..order).map(|a| (order - a) % order).collect();
        Ok(Self {
            names,
            table,
            inverses,
        })
    }

    /// The dihedral group D_n of order 2n.
    ///
    /// Elements are ordered `e, r, ..., r^{n-1}, s, rs, ..., r^{n-1}s`, so index
    /// `k` is `r^k` and index `n + k` is `r^k s`. This ordering fixes the layout
    /// of every binary expansion.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 2 {
            return Err(GroupError::OrderTooSmall { min: 2, got: n });
        }
        let order = 2 * n;
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(order));
        }
        let decode = |x: usize| (x % n, x / n);
        let encode = |rot: usize, refl: usize| refl * n + rot;
        let mut names = Vec::with_capacity(order);
        for refl in 0..2 {
            for rot in 0..n {
                let mut name = if rot == 0 && refl == 1 {
                    String::new()
                } else {
                    power_name("r", rot)
                };
                if refl == 1 {
                    name.push('s');
                }
                names.push(name);
            }
        }
        // (r^a s^b)(r^c s^d) = r^{a + (-1)^b c} s^{b + d}
        let mut table = vec![0; order * order];
        for x in 0..order {
            let (a, b) = decode(x);
            for y in 0..order {
                let (c, d) = decode(y);
                let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table[x * order + y] = encode(rot, (b + d) % 2);
            }
        }
        let inverses = (0..order)
            .map(|x| {
                let (a, b) = decode(x);
                if b == 0 {
                    encode((n - a) % n, 0)
                } else {
                    x
                }
            })
            .collect();
        Ok(Self {
            names,
            table,
            inverses,
        })
    }

    /// Validates an explicit multiplication table, where `mul_table[a][b]` is
    /// the index of `g_a g_b`. The identity must sit at index 0; an identity
    /// named `"1"` is renamed to `"e"`.
    pub fn from_table(
        element_names: Vec<String>,
        mul_table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let order = element_names.len();
        if order == 0 {
            return Err(GroupError::OrderTooSmall { min: 1, got: 0 });
        }
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(order));
        }
        if mul_table.len() != order {
            return Err(GroupError::Shape {
                rows: mul_table.len(),
                names: order,
            });
        }
        let mut names = element_names;
        if names[0] == "1" {
            names[0] = "e".to_string();
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(GroupError::EmptyName(i));
            }
            if names[..i].contains(name) {
                return Err(GroupError::DuplicateName(name.clone()));
            }
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in mul_table.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::RaggedRow {
                    row,
                    len: entries.len(),
                    expected: order,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange { row, col, value });
                }
            }
            table.extend_from_slice(entries);
        }
        let at = |a: usize, b: usize| table[a * order + b];

        for x in 0..order {
            if at(0, x) != x {
                return Err(GroupError::Identity(format!(
                    "e*{} = {}",
                    names[x],
                    names[at(0, x)]
                )));
            }
            if at(x, 0) != x {
                return Err(GroupError::Identity(format!(
                    "{}*e = {}",
                    names[x],
                    names[at(x, 0)]
                )));
            }
        }

        let mut seen = vec![false; order];
        for (a, name) in names.iter().enumerate() {
            seen.fill(false);
            for b in 0..order {
                let v = at(a, b);
                if seen[v] {
                    return Err(GroupError::NotLatin(format!("row {name}")));
                }
                seen[v] = true;
            }
            seen.fill(false);
            for b in 0..order {
                let v = at(b, a);
                if seen[v] {
                    return Err(GroupError::NotLatin(format!("column {name}")));
                }
                seen[v] = true;
            }
        }

        let mut inverses = Vec::with_capacity(order);
        for (a, name) in names.iter().enumerate() {
            // Latin rows guarantee a unique right inverse.
            let inv = (0..order).find(|&b| at(a, b) == 0).unwrap();
            if at(inv, a) != 0 {
                return Err(GroupError::MissingInverse(name.clone()));
            }
            inverses.push(inv);
        }

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }

        Ok(Self {
            names,
            table,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        if name == "1" {
            return Some(0);
        }
        self.names.iter().position(|n| n == name)
    }

    /// `g^k` for a possibly negative exponent.
    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse(g) } else { g };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// Row `a` of the multiplication table.
    pub fn row(&self, a: usize) -> &[usize] {
        let n = self.order();
        &self.table[a * n..(a + 1) * n]
    }

    /// Element names and the table as nested rows, the inverse of [`Group::from_table`].
    pub fn to_table(&self) -> (Vec<String>, Vec<Vec<usize>>) {
        let rows = (0..self.order()).map(|a| self.row(a).to_vec()).collect();
        (self.names.clone(), rows)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Whether `a` and `b` commute.
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

fn power_name(generator: &str, k: usize) -> String {
    match k {
        0 => "e".to_string(),
        1 => generator.to_string(),
        _ => format!("{generator}^{k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_group_laws(g: &Group) {
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, 0), a);
            assert_eq!(g.mul(a, g.inverse(a)), 0);
            assert_eq!(g.inverse(g.inverse(a)), a);
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn cyclic_groups() {
        let trivial = Group::cyclic(1).unwrap();
        assert_eq!(trivial.to_table().1, vec![vec![0]]);

        let z2 = Group::cyclic(2).unwrap();
        assert_eq!(z2.names(), ["e", "g"]);
        assert_eq!(z2.mul(1, 1), 0);

        let z6 = Group::cyclic(6).unwrap();
        assert_eq!(z6.mul(3, 4), (3 + 4) % 6);
        assert_eq!(z6.name(z6.mul(3, 4)), "g");
        for g in [&trivial, &z2, &z6] {
            assert_group_laws(g);
        }
        assert_eq!(
            Group::cyclic(0),
            Err(GroupError::OrderTooSmall { min: 1, got: 0 })
        );
    }

    #[test]
    fn dihedral_relations() {
        let d3 = Group::dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        assert_eq!(d3.names(), ["e", "r", "r^2", "s", "rs", "r^2s"]);
        let r = d3.index_of("r").unwrap();
        let s = d3.index_of("s").unwrap();
        let r2 = d3.index_of("r^2").unwrap();
        // s r = r^{-1} s = r^2 s
        assert_eq!(d3.mul(s, r), d3.index_of("r^2s").unwrap());
        assert_eq!(d3.mul(r, r2), 0);
        assert_eq!(d3.mul(s, s), 0);
        // "rs" is r·s
        assert_eq!(d3.mul(r, s), d3.index_of("rs").unwrap());
        assert_eq!(d3.mul(d3.mul(s, r), s), d3.inverse(r));
        assert_group_laws(&d3);

        let d2 = Group::dihedral(2).unwrap();
        assert!(d2.is_abelian());
        for a in 0..4 {
            assert_eq!(d2.mul(a, a), 0);
        }
        assert_group_laws(&d2);

        for n in 2..9 {
            assert_group_laws(&Group::dihedral(n).unwrap());
        }
        assert!(Group::dihedral(1).is_err());
    }

    #[test]
    fn table_round_trip() {
        for g in [
            Group::cyclic(5).unwrap(),
            Group::dihedral(3).unwrap(),
            Group::dihedral(4).unwrap(),
        ] {
            let (names, table) = g.to_table();
            assert_eq!(Group::from_table(names, table).unwrap(), g);
        }
    }

    #[test]
    fn identity_violation() {
        let (names, mut table) = Group::cyclic(3).unwrap().to_table();
        table[0][1] = 0;
        assert!(matches!(
            Group::from_table(names, table),
            Err(GroupError::Identity(_))
        ));
    }

    #[test]
    fn latin_violation() {
        let names = vec!["e".into(), "a".into(), "b".into()];
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 1]];
        assert!(matches!(
            Group::from_table(names, table),
            Err(GroupError::NotLatin(_))
        ));
    }

    #[test]
    fn one_is_accepted_as_identity_name() {
        let g =
            Group::from_table(vec!["1".into(), "x".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.name(0), "e");
        assert_eq!(g.index_of("1"), Some(0));
    }

    /// Backtracking search for a normalized Latin square of order 5 (identity
    /// row/column, two-sided inverses) that is not associative.
    fn non_associative_loop() -> Vec<Vec<usize>> {
        const N: usize = 5;
        fn ok(t: &[[usize; N]; N]) -> bool {
            for (a, row) in t.iter().enumerate() {
                let inv = row.iter().position(|&x| x == 0).unwrap();
                if t[inv][a] != 0 {
                    return false;
                }
            }
            (0..N).any(|a| (0..N).any(|b| (0..N).any(|c| t[t[a][b]][c] != t[a][t[b][c]])))
        }
        fn fill(t: &mut [[usize; N]; N], pos: usize) -> bool {
            if pos == N * N {
                return ok(t);
            }
            let (r, c) = (pos / N, pos % N);
            if r == 0 || c == 0 {
                t[r][c] = r.max(c);
                return fill(t, pos + 1);
            }
            for v in 0..N {
                if (0..c).any(|k| t[r][k] == v) || (0..r).any(|k| t[k][c] == v) {
                    continue;
                }
                t[r][c] = v;
                if fill(t, pos + 1) {
                    return true;
                }
            }
            false
        }
        let mut t = [[0; N]; N];
        assert!(fill(&mut t, 0));
        t.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn associativity_violation() {
        let table = non_associative_loop();
        let names = (0..5).map(|i| format!("x{i}")).collect::<Vec<_>>();
        let mut names = names;
        names[0] = "e".into();
        assert!(matches!(
            Group::from_table(names, table),
            Err(GroupError::NotAssociative { .. })
        ));
    }

    #[test]
    fn missing_inverse() {
        // Latin square with identity where 1·2 = 0 but 2·1 != 0.
        let names: Vec<String> = ["e", "a", "b", "c", "d"].map(String::from).to_vec();
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 2, 0, 4, 3],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 0, 3, 1, 2],
        ];
        assert!(matches!(
            Group::from_table(names, table),
            Err(GroupError::MissingInverse(_))
        ));
    }
}
