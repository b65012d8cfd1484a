//! Matrices over F2[G], fiber twists, and the twisted total complex.
//!
//! Index conventions: `C_2 = B_1 ⊗ F_1` is indexed by `(j, u)` as `j*p + u`;
//! `C_1` lists the `B_1 ⊗ F_0` block first, `(j, v)` as `j*q + v`, followed by
//! `B_0 ⊗ F_1` with `(i, u)` at `m*q + i*p + u`; `C_0 = B_0 ⊗ F_0` uses
//! `(i, v)` as `i*q + v`. Here the base differential is `n x m` and the fiber
//! differential is `q x p`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_group, AlgElem};
use crate::error::{Error, Result};
use crate::expand::{expand_bientry_matrix, expand_block_diag_right};
use crate::gf2::BinMatrix;
use crate::group::Group;

/// A rectangular matrix with entries in F2[G].
#[derive(Clone, PartialEq, Eq)]
pub struct RMatrix {
    group: Arc<Group>,
    rows: usize,
    cols: usize,
    entries: Vec<AlgElem>,
}

impl RMatrix {
    pub fn zeros(group: &Arc<Group>, rows: usize, cols: usize) -> Self {
        Self {
            group: group.clone(),
            rows,
            cols,
            entries: vec![AlgElem::zero(group); rows * cols],
        }
    }

    pub fn identity(group: &Arc<Group>, n: usize) -> Self {
        Self::scalar(group, n, &AlgElem::one(group))
    }

    /// `a·I_n`.
    pub fn scalar(group: &Arc<Group>, n: usize, a: &AlgElem) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m.entries[i * n + i] = a.clone();
        }
        m
    }

    /// Builds a matrix from row-major entries; all entries must share `group`.
    pub fn from_rows(group: &Arc<Group>, rows: Vec<Vec<AlgElem>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::InvalidInput(format!(
                    "ragged matrix: row {r} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for e in row {
                if !same_group(e.group(), group) {
                    return Err(Error::GroupMismatch);
                }
                entries.push(e);
            }
        }
        Ok(Self {
            group: group.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Parses a matrix literal given as rows of element strings.
    pub fn parse<S: AsRef<str>>(group: &Arc<Group>, rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| AlgElem::parse(group, s.as_ref()).map_err(Error::from))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(group, parsed)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &AlgElem {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: AlgElem) -> Result<()> {
        if !same_group(value.group(), &self.group) {
            return Err(Error::GroupMismatch);
        }
        self.entries[r * self.cols + c] = value;
        Ok(())
    }

    pub fn entries(&self) -> &[AlgElem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgElem::is_zero)
    }

    /// Matrix product over F2[G], preserving factor order.
    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "rmat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = RMatrix::zeros(&self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.cols {
                    let b = other.get(j, k);
                    if !b.is_zero() {
                        out.entries[i * other.cols + k].add_assign_unchecked(&a.mul_unchecked(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RMatrix) -> Result<RMatrix> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "rmat_add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            a.add_assign_unchecked(b);
        }
        Ok(out)
    }

    pub fn transpose(&self, mode: TransposeMode) -> RMatrix {
        let mut out = RMatrix::zeros(&self.group, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                out.entries[c * self.rows + r] = match mode {
                    TransposeMode::Plain => e.clone(),
                    TransposeMode::Antipode => e.antipode(),
                };
            }
        }
        out
    }

    /// Binary expansion with every entry replaced by its left-regular matrix.
    pub fn expand_left(&self) -> BinMatrix {
        self.expand_with(AlgElem::left_regular)
    }

    /// Binary expansion with every entry replaced by its right-regular matrix.
    pub fn expand_right(&self) -> BinMatrix {
        self.expand_with(AlgElem::right_regular)
    }

    fn expand_with(&self, rep: impl Fn(&AlgElem) -> BinMatrix) -> BinMatrix {
        let l = self.group.order();
        let mut out = BinMatrix::zeros(self.rows * l, self.cols * l);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                if !e.is_zero() {
                    out.xor_block(r * l, c * l, &rep(e));
                }
            }
        }
        out
    }

    /// Maximum number of nonzero entries in any row or column.
    pub fn max_line_weight(&self) -> usize {
        let row = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !self.get(r, c).is_zero())
                    .count()
            })
            .max()
            .unwrap_or(0);
        let col = (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .filter(|&r| !self.get(r, c).is_zero())
                    .count()
            })
            .max()
            .unwrap_or(0);
        row.max(col)
    }

    /// Rows of canonical element strings, the inverse of [`RMatrix::parse`].
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RMatrix{:?}", self.to_strings())
    }
}

/// How entries are transposed when a matrix over F2[G] is transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum TransposeMode {
    /// Entries are kept verbatim.
    #[default]
    Plain,
    /// Entries are mapped through the antipode `g -> g^{-1}`.
    Antipode,
}

/// A fiber twist attached to a base generator (or base incidence).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Twist {
    /// Fiber endomorphisms `phi1` (`p x p`) and `phi0` (`q x q`), expanded
    /// through the left regular representation.
    Matrix { phi1: RMatrix, phi0: RMatrix },
    /// Right multiplication `x -> x·a` on every fiber coordinate. It commutes
    /// with the left action of any fiber differential.
    RightScalar(AlgElem),
}

impl Twist {
    pub fn identity(group: &Arc<Group>, p: usize, q: usize) -> Self {
        Twist::Matrix {
            phi1: RMatrix::identity(group, p),
            phi0: RMatrix::identity(group, q),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Twist::Matrix { phi1, phi0 } => {
                let group = phi1.group();
                *phi1 == RMatrix::identity(group, phi1.rows())
                    && *phi0 == RMatrix::identity(group, phi0.rows())
            }
            Twist::RightScalar(a) => a.is_one(),
        }
    }

    /// Whether both fiber maps are invertible after binary expansion.
    pub fn is_invertible(&self) -> bool {
        match self {
            Twist::Matrix { phi1, phi0 } => {
                is_invertible_twist(phi1).unwrap_or(false)
                    && is_invertible_twist(phi0).unwrap_or(false)
            }
            Twist::RightScalar(a) => {
                let l = a.group().order();
                a.right_regular().rank() == l
            }
        }
    }

    /// Binary expansion of the `F_1` map (`p·ℓ` square).
    pub fn expand_phi1(&self, p: usize) -> BinMatrix {
        match self {
            Twist::Matrix { phi1, .. } => phi1.expand_left(),
            Twist::RightScalar(a) => expand_block_diag_right(a, p),
        }
    }

    /// Binary expansion of the `F_0` map (`q·ℓ` square).
    pub fn expand_phi0(&self, q: usize) -> BinMatrix {
        match self {
            Twist::Matrix { phi0, .. } => phi0.expand_left(),
            Twist::RightScalar(a) => expand_block_diag_right(a, q),
        }
    }

    fn check_shape(&self, group: &Arc<Group>, p: usize, q: usize) -> Result<()> {
        match self {
            Twist::Matrix { phi1, phi0 } => {
                if !same_group(phi1.group(), group) || !same_group(phi0.group(), group) {
                    return Err(Error::GroupMismatch);
                }
                if phi1.shape() != (p, p) {
                    return Err(Error::DimensionMismatch {
                        op: "twist phi1",
                        left: phi1.shape(),
                        right: (p, p),
                    });
                }
                if phi0.shape() != (q, q) {
                    return Err(Error::DimensionMismatch {
                        op: "twist phi0",
                        left: phi0.shape(),
                        right: (q, q),
                    });
                }
                Ok(())
            }
            Twist::RightScalar(a) => {
                if same_group(a.group(), group) {
                    Ok(())
                } else {
                    Err(Error::GroupMismatch)
                }
            }
        }
    }

    /// `phi0 ∂F = ∂F phi1`.
    pub fn is_flat(&self, fiber: &RMatrix) -> Result<bool> {
        match self {
            Twist::Matrix { phi1, phi0 } => Ok(phi0.mul(fiber)? == fiber.mul(phi1)?),
            Twist::RightScalar(_) => {
                let expanded = fiber.expand_left();
                let lhs = self.expand_phi0(fiber.rows()).mul(&expanded)?;
                let rhs = expanded.mul(&self.expand_phi1(fiber.cols()))?;
                Ok(lhs == rhs)
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum TwistLayout {
    /// One twist per base generator `j`.
    PerColumn(Vec<Twist>),
    /// One twist per base incidence `(i, j)`, stored at `j*n + i`.
    PerEntry { n: usize, twists: Vec<Twist> },
}

/// Twists for every base generator, or for every base incidence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistData {
    group: Arc<Group>,
    m: usize,
    p: usize,
    q: usize,
    layout: TwistLayout,
}

impl TwistData {
    /// Identity twists on every generator; the untwisted lifted product.
    pub fn identity(group: &Arc<Group>, m: usize, p: usize, q: usize) -> Self {
        Self {
            group: group.clone(),
            m,
            p,
            q,
            layout: TwistLayout::PerColumn(vec![Twist::identity(group, p, q); m]),
        }
    }

    /// One twist per base generator.
    pub fn per_column(group: &Arc<Group>, p: usize, q: usize, twists: Vec<Twist>) -> Result<Self> {
        for t in &twists {
            t.check_shape(group, p, q)?;
        }
        Ok(Self {
            group: group.clone(),
            m: twists.len(),
            p,
            q,
            layout: TwistLayout::PerColumn(twists),
        })
    }

    /// One twist per base incidence; `table[j][i]` is the twist on edge `j` at vertex `i`.
    pub fn per_entry(
        group: &Arc<Group>,
        n: usize,
        p: usize,
        q: usize,
        table: Vec<Vec<Twist>>,
    ) -> Result<Self> {
        let m = table.len();
        let mut twists = Vec::with_capacity(m * n);
        for (j, column) in table.into_iter().enumerate() {
            if column.len() != n {
                return Err(Error::InvalidInput(format!(
                    "per-entry twists for generator {j} cover {} vertices, expected {n}",
                    column.len()
                )));
            }
            for t in column {
                t.check_shape(group, p, q)?;
                twists.push(t);
            }
        }
        Ok(Self {
            group: group.clone(),
            m,
            p,
            q,
            layout: TwistLayout::PerEntry { n, twists },
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn fiber_dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn is_per_column(&self) -> bool {
        matches!(self.layout, TwistLayout::PerColumn(_))
    }

    /// Per-generator twists, when the data is laid out per column.
    pub fn columns(&self) -> Option<&[Twist]> {
        match &self.layout {
            TwistLayout::PerColumn(t) => Some(t),
            TwistLayout::PerEntry { .. } => None,
        }
    }

    /// The twist applied on base incidence `(i, j)`.
    pub fn twist(&self, i: usize, j: usize) -> &Twist {
        match &self.layout {
            TwistLayout::PerColumn(t) => &t[j],
            TwistLayout::PerEntry { n, twists } => &twists[j * n + i],
        }
    }

    pub fn is_identity(&self) -> bool {
        let all = match &self.layout {
            TwistLayout::PerColumn(t) => t,
            TwistLayout::PerEntry { twists, .. } => twists,
        };
        all.iter().all(Twist::is_identity)
    }

    /// Every stored twist with its generator and, for per-entry data, its vertex.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (usize, Option<usize>, &Twist)> + '_> {
        match &self.layout {
            TwistLayout::PerColumn(t) => Box::new(t.iter().enumerate().map(|(j, t)| (j, None, t))),
            TwistLayout::PerEntry { n, twists } => {
                let n = *n;
                Box::new(
                    twists
                        .iter()
                        .enumerate()
                        .map(move |(k, t)| (k / n, Some(k % n), t)),
                )
            }
        }
    }
}

/// Result of one flatness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessCheck {
    pub generator: usize,
    /// Set for per-incidence twists.
    pub vertex: Option<usize>,
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub checks: Vec<FlatnessCheck>,
    pub flat: bool,
}

impl fmt::Display for FlatnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failing: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.flat)
            .map(|c| match c.vertex {
                Some(i) => format!("generator {} at vertex {}", c.generator, i),
                None => format!("generator {}", c.generator),
            })
            .collect();
        if failing.is_empty() {
            write!(f, "all {} twists flat", self.checks.len())
        } else {
            write!(f, "not flat on {}", failing.join(", "))
        }
    }
}

/// Checks `phi0_j ∂F = ∂F phi1_j` for every twist.
pub fn check_flatness(fiber: &RMatrix, twists: &TwistData) -> Result<FlatnessReport> {
    if !same_group(fiber.group(), twists.group()) {
        return Err(Error::GroupMismatch);
    }
    if (fiber.cols(), fiber.rows()) != twists.fiber_dims() {
        return Err(Error::DimensionMismatch {
            op: "check_flatness",
            left: fiber.shape(),
            right: (twists.q, twists.p),
        });
    }
    let checks = twists
        .iter()
        .map(|(generator, vertex, t)| {
            Ok(FlatnessCheck {
                generator,
                vertex,
                flat: t.is_flat(fiber)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let flat = checks.iter().all(|c| c.flat);
    Ok(FlatnessReport { checks, flat })
}

/// An entry of a total boundary map before expansion; it expands to
/// `right_regular(base) · left_regular(fiber)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiEntry {
    pub base: AlgElem,
    pub fiber: AlgElem,
}

impl BiEntry {
    pub fn is_zero(&self) -> bool {
        self.base.is_zero() || self.fiber.is_zero()
    }
}

/// Sparse matrix of [`BiEntry`] values sorted by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<((usize, usize), BiEntry)>,
}

impl BiMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    fn push(&mut self, row: usize, col: usize, base: AlgElem, fiber: AlgElem) {
        let entry = BiEntry { base, fiber };
        if !entry.is_zero() {
            self.entries.push(((row, col), entry));
        }
    }

    fn finish(mut self) -> Self {
        self.entries.sort_by_key(|(pos, _)| *pos);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> &[((usize, usize), BiEntry)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&BiEntry> {
        self.entries
            .binary_search_by_key(&(row, col), |(pos, _)| *pos)
            .ok()
            .map(|k| &self.entries[k].1)
    }
}

/// The 3-term twisted complex `C_2 -> C_1 -> C_0` over F2[G].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalComplex {
    pub group: Arc<Group>,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// `(mq + np) x mp`
    pub d2: BiMatrix,
    /// `nq x (mq + np)`
    pub d1: BiMatrix,
    pub flatness: FlatnessReport,
}

impl TotalComplex {
    pub fn rank_c2(&self) -> usize {
        self.m * self.p
    }

    pub fn rank_c1(&self) -> usize {
        self.m * self.q + self.n * self.p
    }

    pub fn rank_c0(&self) -> usize {
        self.n * self.q
    }

    pub fn c2_index(&self, j: usize, u: usize) -> usize {
        j * self.p + u
    }

    pub fn c1_left_index(&self, j: usize, v: usize) -> usize {
        j * self.q + v
    }

    pub fn c1_right_index(&self, i: usize, u: usize) -> usize {
        self.m * self.q + i * self.p + u
    }

    pub fn c0_index(&self, i: usize, v: usize) -> usize {
        i * self.q + v
    }

    /// Binary `∂_1` (`nqℓ x (mq+np)ℓ`).
    pub fn expand_d1(&self) -> BinMatrix {
        expand_bientry_matrix(&self.d1, &self.group)
    }

    /// Binary `∂_2` (`(mq+np)ℓ x mpℓ`).
    pub fn expand_d2(&self) -> BinMatrix {
        expand_bientry_matrix(&self.d2, &self.group)
    }
}

fn check_complexes(base: &RMatrix, fiber: &RMatrix, twists: &TwistData) -> Result<()> {
    if !same_group(base.group(), fiber.group()) || !same_group(base.group(), twists.group()) {
        return Err(Error::GroupMismatch);
    }
    if twists.generators() != base.cols() {
        return Err(Error::DimensionMismatch {
            op: "twists vs base generators",
            left: (twists.generators(), 0),
            right: base.shape(),
        });
    }
    if let TwistLayout::PerEntry { n, .. } = twists.layout {
        if n != base.rows() {
            return Err(Error::DimensionMismatch {
                op: "per-entry twists vs base vertices",
                left: (n, twists.generators()),
                right: base.shape(),
            });
        }
    }
    Ok(())
}

/// Builds the twisted total complex.
///
/// Refuses non-flat twists unless `allow_nonflat` is set; the flatness verdict
/// is always recorded on the result.
pub fn build_twisted_complex(
    base: &RMatrix,
    fiber: &RMatrix,
    twists: &TwistData,
    allow_nonflat: bool,
) -> Result<TotalComplex> {
    check_complexes(base, fiber, twists)?;
    let flatness = check_flatness(fiber, twists)?;
    if !flatness.flat && !allow_nonflat {
        return Err(Error::NotFlat(flatness));
    }

    let group = base.group().clone();
    let (n, m) = base.shape();
    let (q, p) = fiber.shape();
    let one = AlgElem::one(&group);
    let zero = AlgElem::zero(&group);
    let c1 = m * q + n * p;

    let mut d2 = BiMatrix::new(c1, m * p);
    // B_1 ⊗ F_0 rows: id ⊗ ∂F
    for j in 0..m {
        for v in 0..q {
            for u in 0..p {
                d2.push(j * q + v, j * p + u, one.clone(), fiber.get(v, u).clone());
            }
        }
    }
    // B_0 ⊗ F_1 rows: (∂B)_ij phi1
    for i in 0..n {
        for u_out in 0..p {
            for j in 0..m {
                let b = base.get(i, j);
                if b.is_zero() {
                    continue;
                }
                let twist = twists.twist(i, j);
                for u in 0..p {
                    let (bp, fp) = twisted_entry(b, twist, u_out, u, true, &one, &zero);
                    d2.push(m * q + i * p + u_out, j * p + u, bp, fp);
                }
            }
        }
    }

    let mut d1 = BiMatrix::new(n * q, c1);
    for i in 0..n {
        for v_out in 0..q {
            // (∂B)_ij phi0
            for j in 0..m {
                let b = base.get(i, j);
                if b.is_zero() {
                    continue;
                }
                let twist = twists.twist(i, j);
                for v in 0..q {
                    let (bp, fp) = twisted_entry(b, twist, v_out, v, false, &one, &zero);
                    d1.push(i * q + v_out, j * q + v, bp, fp);
                }
            }
            // id ⊗ ∂F
            for u in 0..p {
                d1.push(
                    i * q + v_out,
                    m * q + i * p + u,
                    one.clone(),
                    fiber.get(v_out, u).clone(),
                );
            }
        }
    }

    Ok(TotalComplex {
        group,
        m,
        n,
        p,
        q,
        d2: d2.finish(),
        d1: d1.finish(),
        flatness,
    })
}

fn twisted_entry(
    b: &AlgElem,
    twist: &Twist,
    row: usize,
    col: usize,
    on_f1: bool,
    one: &AlgElem,
    zero: &AlgElem,
) -> (AlgElem, AlgElem) {
    match twist {
        Twist::Matrix { phi1, phi0 } => {
            let phi = if on_f1 { phi1 } else { phi0 };
            (b.clone(), phi.get(row, col).clone())
        }
        // right_regular(b)·right_regular(a) = right_regular(a·b)
        Twist::RightScalar(a) => {
            let fiber = if row == col {
                one.clone()
            } else {
                zero.clone()
            };
            (a.mul_unchecked(b), fiber)
        }
    }
}

/// Verifies that the binary expansions of a literal lifted product satisfy
/// the CSS condition, given `H_X` from the total complex.
pub fn build_lifted_product(a: &RMatrix, b: &RMatrix, mode: TransposeMode) -> Result<TotalComplex> {
    if !same_group(a.group(), b.group()) {
        return Err(Error::GroupMismatch);
    }
    let twists = TwistData::identity(a.group(), a.cols(), b.cols(), b.rows());
    let total = build_twisted_complex(a, b, &twists, false)?;
    let hx = total.expand_d1();
    let hz = lifted_product_hz_literal(a, b, mode)?;
    let product = hx.mul(&hz.transpose())?;
    if !product.is_zero() {
        return Err(Error::CssViolation {
            nonzero: product.count_ones(),
            context: Some(format!(
                "literal lifted-product H_Z with {mode:?} transpose; \
                 entries of A or B are not antipode-invariant"
            )),
        });
    }
    Ok(total)
}

/// Binary `H_Z = [I ⊗ B^T  A^T ⊗ I]` formed over F2[G] before expansion:
/// entries from `A` expand through the right regular representation, entries
/// from `B` through the left one.
pub fn lifted_product_hz_literal(
    a: &RMatrix,
    b: &RMatrix,
    mode: TransposeMode,
) -> Result<BinMatrix> {
    if !same_group(a.group(), b.group()) {
        return Err(Error::GroupMismatch);
    }
    let l = a.group().order();
    let (ma, na) = a.shape();
    let (mb, nb) = b.shape();
    let at = a.transpose(mode);
    let bt = b.transpose(mode);
    let mut hz = BinMatrix::zeros(na * nb * l, (na * mb + ma * nb) * l);
    for j in 0..na {
        for u in 0..nb {
            let row = (j * nb + u) * l;
            // I_{nA} ⊗ B^T
            for v in 0..mb {
                let e = bt.get(u, v);
                if !e.is_zero() {
                    hz.xor_block(row, (j * mb + v) * l, &e.left_regular());
                }
            }
            // A^T ⊗ I_{nB}
            for i in 0..ma {
                let e = at.get(j, i);
                if !e.is_zero() {
                    hz.xor_block(row, (na * mb + i * nb + u) * l, &e.right_regular());
                }
            }
        }
    }
    Ok(hz)
}

/// Fiber action of the structure group in [`connection_from_group`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum FiberAction {
    /// `g·I`, expanded through the left regular representation. Flat only
    /// when `g` commutes with the fiber differential's entries.
    #[default]
    Left,
    /// Right multiplication by `g`; always a chain automorphism.
    Right,
}

/// Twists from a group-valued connection: `assignment[i][j]` is the element
/// transported along edge `j` at vertex `i`, required wherever `(∂B)_ij != 0`.
///
/// Returns per-column data when the assignment is constant down every column,
/// per-entry data otherwise.
pub fn connection_from_group(
    base: &RMatrix,
    fiber: &RMatrix,
    assignment: &[Vec<Option<usize>>],
    action: FiberAction,
) -> Result<TwistData> {
    let group = base.group().clone();
    if !same_group(&group, fiber.group()) {
        return Err(Error::GroupMismatch);
    }
    let (n, m) = base.shape();
    let (q, p) = fiber.shape();
    if assignment.len() != n || assignment.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput(format!(
            "connection assignment must be {n}x{m} like the base differential"
        )));
    }
    let mut table = vec![vec![0usize; n]; m];
    let mut constant: Vec<Option<usize>> = vec![None; m];
    let mut per_column = true;
    for i in 0..n {
        for j in 0..m {
            if base.get(i, j).is_zero() {
                continue;
            }
            let g = assignment[i][j].ok_or(Error::MissingConnection { row: i, col: j })?;
            if g >= group.order() {
                return Err(Error::InvalidInput(format!(
                    "connection element index {g} out of range at ({i}, {j})"
                )));
            }
            table[j][i] = g;
            match constant[j] {
                None => constant[j] = Some(g),
                Some(h) if h != g => per_column = false,
                _ => {}
            }
        }
    }
    let make = |g: usize| {
        let a = AlgElem::element(&group, g);
        match action {
            FiberAction::Left => Twist::Matrix {
                phi1: RMatrix::scalar(&group, p, &a),
                phi0: RMatrix::scalar(&group, q, &a),
            },
            FiberAction::Right => Twist::RightScalar(a),
        }
    };
    if per_column {
        let twists = constant.iter().map(|g| make(g.unwrap_or(0))).collect();
        TwistData::per_column(&group, p, q, twists)
    } else {
        let table = (0..m)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        make(if base.get(i, j).is_zero() {
                            0
                        } else {
                            table[j][i]
                        })
                    })
                    .collect()
            })
            .collect();
        TwistData::per_entry(&group, n, p, q, table)
    }
}

/// Whether a square matrix over F2[G] is invertible, decided on its
/// left-regular binary expansion.
pub fn is_invertible_twist(phi: &RMatrix) -> Result<bool> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            op: "is_invertible_twist",
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    let expanded = phi.expand_left();
    Ok(expanded.rank() == expanded.rows())
}
