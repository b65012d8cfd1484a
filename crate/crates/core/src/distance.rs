//! Bounded-weight minimum distance search.
//!
//! `d_X` is the least weight of `x` with `H_X x = 0` outside the row space of
//! `H_Z`; `d_Z` swaps the roles. Weights are tried in increasing order and,
//! within a weight, supports are visited in lexicographic position order, so
//! the first hit is both minimal and deterministic. The search is split over
//! the first support position and merged in order, giving the sequential
//! answer regardless of thread count.

use rayon::prelude::*;

use crate::css::CssCode;
use crate::gf2::{BinMatrix, BinVec, SpanSolver};

/// Largest length for which exhaustive enumeration of the kernel is offered.
pub const FULL_ENUMERATION_MAX_N: usize = 28;

pub const DEFAULT_WEIGHT_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceOptions {
    pub weight_cap: usize,
    /// Maximum number of candidate supports to examine per side.
    pub budget: Option<u64>,
    /// Enumerate the whole kernel when `n <= FULL_ENUMERATION_MAX_N`.
    pub full_enumeration: bool,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            weight_cap: DEFAULT_WEIGHT_CAP,
            budget: None,
            full_enumeration: false,
        }
    }
}

impl DistanceOptions {
    pub fn with_cap(weight_cap: usize) -> Self {
        Self {
            weight_cap,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideDistance {
    /// The true minimum, with a minimal logical representative.
    Exact { d: usize, witness: BinVec },
    /// No logical operator of weight at most `cap`.
    AboveCap { cap: usize },
    /// The code encodes no qubits, so no logical operator exists.
    NoLogicals,
    /// The budget ran out before weight `searched_up_to + 1` could be covered.
    Unresolved { searched_up_to: usize },
}

impl SideDistance {
    pub fn value(&self) -> Option<usize> {
        match self {
            SideDistance::Exact { d, .. } => Some(*d),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SideDistance::Exact { .. } | SideDistance::NoLogicals)
    }

    pub fn witness(&self) -> Option<&BinVec> {
        match self {
            SideDistance::Exact { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    BoundedSearch,
    FullEnumeration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub x: SideDistance,
    pub z: SideDistance,
    pub weight_cap: usize,
    pub method: DistanceMethod,
}

impl DistanceResult {
    /// `min(d_X, d_Z)` when both sides are exact.
    pub fn d(&self) -> Option<usize> {
        match (&self.x, &self.z) {
            (SideDistance::Exact { d: a, .. }, SideDistance::Exact { d: b, .. }) => Some(*a.min(b)),
            _ => None,
        }
    }
}

pub fn min_distance(code: &CssCode, options: &DistanceOptions) -> DistanceResult {
    assert!(options.weight_cap >= 1, "weight cap must be at least 1");
    let full = options.full_enumeration && code.n() <= FULL_ENUMERATION_MAX_N;
    let side = |checks: &BinMatrix, stabilizers: &BinMatrix| {
        if code.k() == 0 {
            SideDistance::NoLogicals
        } else if full {
            enumerate_side(checks, stabilizers)
        } else {
            search_side(checks, stabilizers, options)
        }
    };
    DistanceResult {
        x: side(code.hx(), code.hz()),
        z: side(code.hz(), code.hx()),
        weight_cap: options.weight_cap,
        method: if full {
            DistanceMethod::FullEnumeration
        } else {
            DistanceMethod::BoundedSearch
        },
    }
}

/// Whether `v` is a nontrivial logical operator for the side with the given
/// checks and stabilizer generators.
pub fn is_logical(checks: &BinMatrix, stabilizers: &BinMatrix, v: &BinVec) -> bool {
    checks.mul_vec(v).map(|s| s.is_zero()).unwrap_or(false)
        && !SpanSolver::of_rows(stabilizers).contains(v).unwrap_or(true)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn search_side(
    checks: &BinMatrix,
    stabilizers: &BinMatrix,
    options: &DistanceOptions,
) -> SideDistance {
    let n = checks.cols();
    let syndrome_words = checks.rows().div_ceil(64).max(1);
    let columns: Vec<Vec<u64>> = (0..n)
        .map(|c| {
            let col = checks.column(c);
            let mut w = col.words().to_vec();
            w.resize(syndrome_words, 0);
            w
        })
        .collect();
    let solver = SpanSolver::of_rows(stabilizers);
    let ctx = SearchContext {
        n,
        columns: &columns,
        solver: &solver,
        syndrome_words,
    };

    let mut examined: u128 = 0;
    for w in 1..=options.weight_cap.min(n) {
        examined += binomial(n, w);
        if options.budget.is_some_and(|b| examined > b as u128) {
            return SideDistance::Unresolved {
                searched_up_to: w - 1,
            };
        }
        let hit = (0..=n - w)
            .into_par_iter()
            .find_map_first(|first| ctx.first_logical(first, w));
        if let Some(support) = hit {
            return SideDistance::Exact {
                d: w,
                witness: BinVec::from_support(n, &support),
            };
        }
    }
    SideDistance::AboveCap {
        cap: options.weight_cap,
    }
}

struct SearchContext<'a> {
    n: usize,
    columns: &'a [Vec<u64>],
    solver: &'a SpanSolver,
    syndrome_words: usize,
}

impl SearchContext<'_> {
    /// Lexicographically first weight-`w` logical whose smallest position is `first`.
    fn first_logical(&self, first: usize, w: usize) -> Option<Vec<usize>> {
        let mut positions = vec![0usize; w];
        // syndromes[d] is the syndrome of positions[..=d]
        let mut syndromes = vec![vec![0u64; self.syndrome_words]; w];
        positions[0] = first;
        syndromes[0].copy_from_slice(&self.columns[first]);
        let mut depth = 0;
        let mut vector = vec![0u64; self.n.div_ceil(64)];
        loop {
            if depth + 1 == w {
                if syndromes[depth].iter().all(|&x| x == 0)
                    && self.is_nontrivial(&positions, &mut vector)
                {
                    return Some(positions);
                }
            } else {
                // descend
                let next = positions[depth] + 1;
                if next + (w - depth - 1) <= self.n {
                    depth += 1;
                    positions[depth] = next;
                    self.refresh(&mut syndromes, &positions, depth);
                    continue;
                }
            }
            // advance at the current depth, backtracking as needed
            loop {
                if depth == 0 {
                    return None;
                }
                positions[depth] += 1;
                if positions[depth] + (w - depth - 1) < self.n {
                    self.refresh(&mut syndromes, &positions, depth);
                    break;
                }
                depth -= 1;
            }
        }
    }

    #[inline]
    fn refresh(&self, syndromes: &mut [Vec<u64>], positions: &[usize], depth: usize) {
        let (prev, rest) = syndromes.split_at_mut(depth);
        let cur = &mut rest[0];
        let col = &self.columns[positions[depth]];
        for ((c, p), x) in cur.iter_mut().zip(&prev[depth - 1]).zip(col) {
            *c = p ^ x;
        }
    }

    fn is_nontrivial(&self, positions: &[usize], vector: &mut [u64]) -> bool {
        vector.fill(0);
        for &p in positions {
            vector[p / 64] ^= 1u64 << (p % 64);
        }
        self.solver.reduce_words(vector);
        vector.iter().any(|&x| x != 0)
    }
}

/// Exhaustive sweep of `ker(checks)` for `n <= 28`, via a Gray code over a
/// kernel basis. A kernel vector is trivial iff it is orthogonal to every
/// vector of `ker(stabilizers)`, tracked as a parity signature.
fn enumerate_side(checks: &BinMatrix, stabilizers: &BinMatrix) -> SideDistance {
    let n = checks.cols();
    assert!(n <= FULL_ENUMERATION_MAX_N);
    let to_mask = |v: &BinVec| v.words().first().copied().unwrap_or(0);
    let kernel: Vec<u64> = checks.kernel_basis().iter().map(to_mask).collect();
    let dual: Vec<u64> = stabilizers.kernel_basis().iter().map(to_mask).collect();
    let signature = |x: u64| {
        dual.iter().enumerate().fold(0u64, |s, (i, y)| {
            s | (((x & y).count_ones() as u64) & 1) << i
        })
    };
    let signatures: Vec<u64> = kernel.iter().map(|&k| signature(k)).collect();

    let mut best: Option<u64> = None;
    let (mut x, mut sig) = (0u64, 0u64);
    for step in 1u64..(1u64 << kernel.len()) {
        let bit = step.trailing_zeros() as usize;
        x ^= kernel[bit];
        sig ^= signatures[bit];
        if sig != 0 && best.is_none_or(|b| lex_less(x, b)) {
            best = Some(x);
        }
    }
    match best {
        Some(mask) => SideDistance::Exact {
            d: mask.count_ones() as usize,
            witness: BinVec::from_words(n, vec![mask]),
        },
        None => SideDistance::NoLogicals,
    }
}

/// Order by weight, then lexicographically by sorted support.
fn lex_less(a: u64, b: u64) -> bool {
    match a.count_ones().cmp(&b.count_ones()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => {
            let diff = a ^ b;
            diff != 0 && a & (diff & diff.wrapping_neg()) != 0
        }
    }
}
