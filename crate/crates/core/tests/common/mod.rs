//! Shared fixtures and independent oracles for integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use twistcode_core::{
    connection_from_group, AlgElem, BinMatrix, FiberAction, Group, RMatrix, Twist, TwistData,
};

pub fn d3() -> Arc<Group> {
    Arc::new(Group::dihedral(3).unwrap())
}

pub fn mat(g: &Arc<Group>, rows: &[&[&str]]) -> RMatrix {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    RMatrix::parse(g, &rows).unwrap()
}

/// The worked D_3 example: base, fiber and the three twist choices.
pub struct Example {
    pub group: Arc<Group>,
    pub base: RMatrix,
    pub fiber: RMatrix,
}

impl Example {
    pub fn new() -> Self {
        let group = d3();
        let base = mat(&group, &[&["0", "r+r^2"], &["1+r+r^2", "0"]]);
        let fiber = mat(&group, &[&["1", "r"], &["s", "1"]]);
        Self { group, base, fiber }
    }

    fn pair(&self, phi1: RMatrix, phi0: RMatrix) -> Twist {
        Twist::Matrix { phi1, phi0 }
    }

    fn twist1(&self) -> Twist {
        let g = &self.group;
        self.pair(
            mat(g, &[&["1", "0"], &["s+rs", "r"]]),
            mat(g, &[&["1", "r+r^2"], &["0", "r"]]),
        )
    }

    fn twist2(&self) -> Twist {
        let m = mat(&self.group, &[&["0", "r"], &["s", "0"]]);
        self.pair(m.clone(), m)
    }

    fn fiber_twist(&self) -> Twist {
        self.pair(self.fiber.clone(), self.fiber.clone())
    }

    pub fn untwisted(&self) -> TwistData {
        TwistData::identity(&self.group, 2, 2, 2)
    }

    pub fn case1(&self) -> TwistData {
        TwistData::per_column(&self.group, 2, 2, vec![self.twist1(), self.twist2()]).unwrap()
    }

    pub fn case2(&self) -> TwistData {
        TwistData::per_column(&self.group, 2, 2, vec![self.twist1(), self.fiber_twist()]).unwrap()
    }

    pub fn case3(&self) -> TwistData {
        TwistData::per_column(
            &self.group,
            2,
            2,
            vec![self.fiber_twist(), self.fiber_twist()],
        )
        .unwrap()
    }
}

pub fn random_elem<R: Rng>(rng: &mut R, g: &Arc<Group>, max_support: usize) -> AlgElem {
    let k = rng.gen_range(0..=max_support);
    let support: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.order())).collect();
    AlgElem::from_support(g, &support)
}

pub fn random_matrix<R: Rng>(
    rng: &mut R,
    g: &Arc<Group>,
    rows: usize,
    cols: usize,
    max_support: usize,
) -> RMatrix {
    let entries = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| random_elem(rng, g, max_support))
                .collect()
        })
        .collect();
    RMatrix::from_rows(g, entries).unwrap()
}

pub fn small_groups() -> Vec<Arc<Group>> {
    vec![
        d3(),
        Arc::new(Group::cyclic(2).unwrap()),
        Arc::new(Group::cyclic(6).unwrap()),
    ]
}

/// Elements commuting with every entry of `m`.
pub fn centralizer(m: &RMatrix) -> Vec<usize> {
    let g = m.group();
    (0..g.order())
        .filter(|&x| {
            let e = AlgElem::element(g, x);
            m.entries()
                .iter()
                .all(|a| e.mul(a).unwrap() == a.mul(&e).unwrap())
        })
        .collect()
}

/// A random group-valued connection; left actions draw elements from the
/// centralizer of the fiber so the twists stay flat.
pub fn random_connection<R: Rng>(
    rng: &mut R,
    base: &RMatrix,
    fiber: &RMatrix,
    action: FiberAction,
) -> TwistData {
    let g = base.group();
    let pool: Vec<usize> = match action {
        FiberAction::Left => centralizer(fiber),
        FiberAction::Right => (0..g.order()).collect(),
    };
    let assignment: Vec<Vec<Option<usize>>> = (0..base.rows())
        .map(|_| {
            (0..base.cols())
                .map(|_| Some(*pool.choose(rng).unwrap()))
                .collect()
        })
        .collect();
    connection_from_group(base, fiber, &assignment, action).unwrap()
}

/// Per-generator unit scalars `g·I`.
pub fn random_unit_twists<R: Rng>(
    rng: &mut R,
    base: &RMatrix,
    fiber: &RMatrix,
    action: FiberAction,
) -> TwistData {
    let g = base.group();
    let pool: Vec<usize> = match action {
        FiberAction::Left => centralizer(fiber),
        FiberAction::Right => (0..g.order()).collect(),
    };
    let assignment: Vec<Option<usize>> = (0..base.cols())
        .map(|_| Some(*pool.choose(rng).unwrap()))
        .collect();
    let full = vec![assignment; base.rows()];
    connection_from_group(base, fiber, &full, action).unwrap()
}

/// Unpacked GF(2) reference: rank by textbook elimination.
pub fn naive_rank(rows: &[Vec<u8>]) -> usize {
    let mut a: Vec<Vec<u8>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] == 1) else {
            continue;
        };
        a.swap(p, rank);
        for r in 0..a.len() {
            if r != rank && a[r][c] == 1 {
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(0u8, |acc, k| acc ^ (row[k] & b[k][c])))
                .collect()
        })
        .collect()
}

pub fn unpack(m: &BinMatrix) -> Vec<Vec<u8>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
        .collect()
}

/// Brute-force distance of one side over all `2^n` vectors: the least weight
/// of `x` with `checks·x = 0` outside the row span of `stabilizers`.
/// Returns `None` when no such vector exists.
pub fn brute_force_distance(
    checks: &[Vec<u8>],
    stabilizers: &[Vec<u8>],
    n: usize,
) -> Option<usize> {
    assert!(n <= 22, "oracle limited to small codes");
    let to_mask = |row: &Vec<u8>| {
        row.iter()
            .enumerate()
            .fold(0u32, |m, (i, &b)| m | ((b as u32) << i))
    };
    let check_masks: Vec<u32> = checks.iter().map(to_mask).collect();
    let mut in_span = vec![false; 1 << n];
    in_span[0] = true;
    let mut span = vec![0u32];
    for row in stabilizers.iter().map(to_mask) {
        if in_span[row as usize] {
            continue;
        }
        let current = span.clone();
        for s in current {
            let t = s ^ row;
            if !in_span[t as usize] {
                in_span[t as usize] = true;
                span.push(t);
            }
        }
    }
    (1u32..(1u32 << n))
        .filter(|&x| check_masks.iter().all(|&c| (c & x).count_ones() % 2 == 0))
        .filter(|&x| !in_span[x as usize])
        .map(|x| x.count_ones() as usize)
        .min()
}
