//! Exhaustive or sampled search over per-column flat twists, ranked by the
//! number of encoded qubits.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use twistcode_core::{
    assemble_css, build_twisted_complex, min_distance, AlgElem, DistanceOptions, DistanceResult,
    FiberAction, Group, RMatrix, Twist, TwistData,
};

use crate::error::CliError;
use crate::report::distance_json;
use crate::spec::CodeSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pool {
    /// `g·I` for every group element `g`.
    GroupScalars,
    /// A user-supplied list of twists.
    Explicit(Vec<Twist>),
    /// Every flat pair whose entries have support size at most `max_support`.
    LowWeight { max_support: usize },
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub pool: Pool,
    /// Tuples beyond this count are sampled instead of enumerated.
    pub max_candidates: usize,
    /// Flat pool entries kept per slot; the rest are dropped.
    pub max_pool: usize,
    pub seed: Option<u64>,
    /// Distances are computed for this many leading candidates.
    pub top: usize,
    pub action: FiberAction,
    pub distance: DistanceOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            pool: Pool::GroupScalars,
            max_candidates: 4096,
            max_pool: 4096,
            seed: None,
            top: 3,
            action: FiberAction::Left,
            distance: DistanceOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub twists: Vec<Twist>,
    pub encoding: String,
    pub k: usize,
    pub rank_hx: usize,
    pub rank_hz: usize,
    pub distance: Option<DistanceResult>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub pool_size: usize,
    pub flat_pool_size: usize,
    /// `flat_pool_size^m`, saturating.
    pub tuples_total: u128,
    pub truncated: bool,
    pub seed: u64,
    pub candidates: Vec<Candidate>,
}

impl SearchOutcome {
    /// JSON summary listing at most `limit` candidates.
    pub fn to_value(&self, limit: usize) -> Value {
        let listed: Vec<Value> = self
            .candidates
            .iter()
            .take(limit)
            .enumerate()
            .map(|(rank, c)| {
                json!({
                    "rank": rank + 1,
                    "twists": c.encoding,
                    "k": c.k,
                    "rank_hx": c.rank_hx,
                    "rank_hz": c.rank_hz,
                    "distance": c.distance.as_ref().map(distance_json),
                })
            })
            .collect();
        json!({
            "pool_size": self.pool_size,
            "flat_pool_size": self.flat_pool_size,
            "tuples_total": self.tuples_total.to_string(),
            "evaluated": self.candidates.len(),
            "truncated": self.truncated,
            "seed": self.seed,
            "candidates": listed,
        })
    }
}

fn matrix_text(m: &RMatrix) -> String {
    let rows: Vec<String> = m
        .to_strings()
        .iter()
        .map(|r| format!("[{}]", r.join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn encode_twist(t: &Twist) -> String {
    match t {
        Twist::Matrix { phi1, phi0 } => {
            format!("phi1={} phi0={}", matrix_text(phi1), matrix_text(phi0))
        }
        Twist::RightScalar(a) => format!("right={a}"),
    }
}

fn low_weight_elements(group: &Arc<Group>, max_support: usize) -> Vec<AlgElem> {
    fn rec(
        group: &Arc<Group>,
        start: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<AlgElem>,
    ) {
        out.push(AlgElem::from_support(group, cur));
        if left == 0 {
            return;
        }
        for g in start..group.order() {
            cur.push(g);
            rec(group, g + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(group, 0, max_support, &mut Vec::new(), &mut out);
    out
}

/// All `d x d` matrices over `elements`, or `None` when there are more than `limit`.
fn all_matrices(
    group: &Arc<Group>,
    elements: &[AlgElem],
    d: usize,
    limit: usize,
) -> Option<Vec<RMatrix>> {
    let total = (elements.len() as u128).checked_pow((d * d) as u32)?;
    if total > limit as u128 {
        return None;
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; d * d];
    loop {
        let rows = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| elements[digits[r * d + c]].clone())
                    .collect()
            })
            .collect();
        out.push(RMatrix::from_rows(group, rows).expect("square rows"));
        let mut i = d * d;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < elements.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn matrix_key(m: &RMatrix) -> Vec<Vec<usize>> {
    m.entries().iter().map(|e| e.support().collect()).collect()
}

/// Flat `(phi1, phi0)` pairs, matched on `∂F·phi1 = phi0·∂F`.
fn low_weight_pool(
    spec: &CodeSpec,
    max_support: usize,
    limit: usize,
) -> Result<Vec<Twist>, CliError> {
    let (_, _, _, p, q) = spec.dims();
    let elements = low_weight_elements(&spec.group, max_support);
    let too_many = || {
        CliError::Validation(format!(
            "low-weight pool with max_support {max_support} has more than {limit} matrices per side"
        ))
    };
    let phi1s = all_matrices(&spec.group, &elements, p, limit).ok_or_else(too_many)?;
    let phi0s = all_matrices(&spec.group, &elements, q, limit).ok_or_else(too_many)?;
    let mut by_key: HashMap<Vec<Vec<usize>>, Vec<usize>> = HashMap::new();
    for (i, phi0) in phi0s.iter().enumerate() {
        by_key
            .entry(matrix_key(&phi0.mul(&spec.fiber)?))
            .or_default()
            .push(i);
    }
    let mut pool = Vec::new();
    for phi1 in &phi1s {
        if let Some(matches) = by_key.get(&matrix_key(&spec.fiber.mul(phi1)?)) {
            for &i in matches {
                pool.push(Twist::Matrix {
                    phi1: phi1.clone(),
                    phi0: phi0s[i].clone(),
                });
            }
        }
    }
    Ok(pool)
}

fn raw_pool(spec: &CodeSpec, options: &SearchOptions) -> Result<(usize, Vec<Twist>), CliError> {
    let (_, _, _, p, q) = spec.dims();
    let group = &spec.group;
    let pool = match &options.pool {
        Pool::GroupScalars => (0..group.order())
            .map(|g| {
                let a = AlgElem::element(group, g);
                match options.action {
                    FiberAction::Left => Twist::Matrix {
                        phi1: RMatrix::scalar(group, p, &a),
                        phi0: RMatrix::scalar(group, q, &a),
                    },
                    FiberAction::Right => Twist::RightScalar(a),
                }
            })
            .collect(),
        Pool::Explicit(list) => list.clone(),
        Pool::LowWeight { max_support } => {
            let flat = low_weight_pool(spec, *max_support, options.max_pool.max(1 << 16))?;
            return Ok((flat.len(), flat));
        }
    };
    let size = pool.len();
    let mut flat = Vec::with_capacity(size);
    for t in pool {
        if t.is_flat(&spec.fiber)? {
            flat.push(t);
        }
    }
    Ok((size, flat))
}

fn index_tuples(
    pool: usize,
    slots: usize,
    options: &SearchOptions,
    seed: u64,
) -> (u128, bool, Vec<Vec<usize>>) {
    let total = (pool as u128)
        .checked_pow(slots as u32)
        .unwrap_or(u128::MAX);
    if total <= options.max_candidates as u128 {
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; slots];
        loop {
            out.push(digits.clone());
            let mut i = slots;
            loop {
                if i == 0 {
                    return (total, false, out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < pool {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = BTreeSet::new();
    let mut attempts = 0usize;
    while picked.len() < options.max_candidates
        && attempts < options.max_candidates.saturating_mul(20)
    {
        picked.insert(
            (0..slots)
                .map(|_| rng.gen_range(0..pool))
                .collect::<Vec<_>>(),
        );
        attempts += 1;
    }
    (total, true, picked.into_iter().collect())
}

/// Ranks per-column twist tuples drawn from the pool by `k` (descending), then
/// by their text encoding. The spec's own `[twists]` section is ignored.
pub fn search_twists(spec: &CodeSpec, options: &SearchOptions) -> Result<SearchOutcome, CliError> {
    let (_, m, _, p, q) = spec.dims();
    let seed = options.seed.unwrap_or_else(|| spec.derived_seed());
    let (pool_size, mut flat) = raw_pool(spec, options)?;
    let mut truncated = false;
    if flat.len() > options.max_pool {
        flat.truncate(options.max_pool);
        truncated = true;
    }
    if flat.is_empty() {
        return Err(CliError::Validation(if pool_size == 0 {
            "twist pool is empty".to_string()
        } else {
            format!("none of the {pool_size} pool twists is flat for this fiber")
        }));
    }
    let flat_pool_size = flat.len();
    let (tuples_total, sampled, tuples) = index_tuples(flat.len(), m, options, seed);
    truncated |= sampled;
    let encodings: Vec<String> = flat.iter().map(encode_twist).collect();

    let mut candidates = tuples
        .par_iter()
        .map(|idx| -> Result<Candidate, CliError> {
            let twists: Vec<Twist> = idx.iter().map(|&i| flat[i].clone()).collect();
            let data = TwistData::per_column(&spec.group, p, q, twists.clone())?;
            let code = assemble_css(&build_twisted_complex(
                &spec.base,
                &spec.fiber,
                &data,
                false,
            )?)?;
            let params = code.parameters();
            Ok(Candidate {
                twists,
                encoding: idx
                    .iter()
                    .map(|&i| encodings[i].as_str())
                    .collect::<Vec<_>>()
                    .join(" | "),
                k: params.k,
                rank_hx: params.rank_hx,
                rank_hz: params.rank_hz,
                distance: None,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    candidates.sort_by(|a, b| (Reverse(a.k), &a.encoding).cmp(&(Reverse(b.k), &b.encoding)));

    for c in candidates.iter_mut().take(options.top) {
        let data = TwistData::per_column(&spec.group, p, q, c.twists.clone())?;
        let code = assemble_css(&build_twisted_complex(
            &spec.base,
            &spec.fiber,
            &data,
            false,
        )?)?;
        c.distance = Some(min_distance(&code, &options.distance));
    }

    Ok(SearchOutcome {
        pool_size,
        flat_pool_size,
        tuples_total,
        truncated,
        seed,
        candidates,
    })
}
