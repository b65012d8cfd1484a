//! Dense GF(2) linear algebra on bit-packed rows.
//!
//! Rows are stored as runs of 64-bit words with a fixed stride. Bits past
//! `cols` in the last word of every row are always zero.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A bit-packed GF(2) vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinVec {
    len: usize,
    words: Vec<u64>,
}

impl BinVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones at `positions`.
    pub fn from_support(len: usize, positions: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in positions {
            v.toggle(p);
        }
        v
    }

    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BinVec) {
        debug_assert_eq!(self.len, other.len);
        xor_words(&mut self.words, &other.words);
    }

    /// Positions of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        iter_ones(&self.words).collect()
    }

    pub fn dot(&self, other: &BinVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl fmt::Debug for BinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BinVec({s})")
    }
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD + t)
        })
    })
}

/// A dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values. Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_fn(rows.len(), cols, |r, c| {
            let row = rows[r].as_ref();
            assert_eq!(row.len(), cols, "ragged row {r}");
            row[c] & 1 == 1
        })
    }

    /// Stacks vectors of equal length as rows.
    pub fn from_vecs(cols: usize, vecs: &[BinVec]) -> Self {
        let mut m = Self::zeros(vecs.len(), cols);
        for (r, v) in vecs.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.row_words_mut(r).copy_from_slice(&v.words);
        }
        m
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BinVec {
        BinVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BinVec {
        BinVec::from_bits((0..self.rows).map(|r| self.get(r, c)))
    }

    /// `row[dst] ^= row[src]`
    #[inline]
    fn xor_rows(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        if src < dst {
            let (a, b) = self.data.split_at_mut(dst * s);
            xor_words(&mut b[..s], &a[src * s..(src + 1) * s]);
        } else {
            let (a, b) = self.data.split_at_mut(src * s);
            xor_words(&mut a[dst * s..(dst + 1) * s], &b[..s]);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = (a.min(b), a.max(b));
        let (x, y) = self.data.split_at_mut(hi * s);
        x[lo * s..(lo + 1) * s].swap_with_slice(&mut y[..s]);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn max_row_weight(&self) -> usize {
        (0..self.rows)
            .map(|r| self.row_weight(r))
            .max()
            .unwrap_or(0)
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in iter_ones(self.row_words(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// GF(2) product `self * other` by row-XOR accumulation.
    pub fn mul(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "gf2_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let (lhs, dst) = (self.row_words(r), r * out.stride);
            for k in iter_ones(lhs) {
                xor_words(&mut out.data[dst..dst + out.stride], other.row_words(k));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BinVec) -> Result<BinVec> {
        if self.cols != v.len {
            return Err(Error::DimensionMismatch {
                op: "gf2_mul_vec",
                left: self.shape(),
                right: (v.len, 1),
            });
        }
        Ok(BinVec::from_bits((0..self.rows).map(|r| {
            self.row_words(r)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 1
        })))
    }

    pub fn add(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "gf2_add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        xor_words(&mut out.data, &other.data);
        Ok(out)
    }

    /// XORs `block` into `self` with its top-left corner at `(row, col)`.
    pub fn xor_block(&mut self, row: usize, col: usize, block: &BinMatrix) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in iter_ones(block.row_words(r)) {
                self.toggle(row + r, col + c);
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> BinMatrix {
        BinMatrix::from_fn(rows, cols, |r, c| self.get(row + r, col + c))
    }

    pub fn hstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = BinMatrix::zeros(self.rows, self.cols + other.cols);
        out.xor_block(0, 0, self);
        out.xor_block(0, self.cols, other);
        Ok(out)
    }

    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BinMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diag(blocks: &[BinMatrix]) -> BinMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = BinMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.xor_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot column of each nonzero row.
    fn reduce(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (wi, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * self.stride + wi] & bit != 0)
            else {
                continue;
            };
            self.swap_rows(p, rank);
            let start = if full { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r != rank && self.data[r * self.stride + wi] & bit != 0 {
                    self.xor_rows(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Reduced row echelon form of a copy of `self`, with pivot columns.
    pub fn rref(&self) -> (BinMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce(true);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(false).len()
    }

    /// A basis of the right null space `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Vec<BinVec> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BinVec::zeros(self.cols);
                v.set(f, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if rref.get(r, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Inverse over GF(2), or `None` when singular.
    pub fn inverse(&self) -> Result<Option<BinMatrix>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                op: "inverse",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let augmented = self.hstack(&BinMatrix::identity(n))?;
        let (rref, pivots) = augmented.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(rref.block(0, n, n, n)))
    }

    /// Whether every row and every column carries exactly one 1.
    pub fn is_monomial(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                op: "is_monomial",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut col_seen = vec![false; self.cols];
        for r in 0..self.rows {
            let mut ones = iter_ones(self.row_words(r));
            let (Some(c), None) = (ones.next(), ones.next()) else {
                return Ok(false);
            };
            if col_seen[c] {
                return Ok(false);
            }
            col_seen[c] = true;
        }
        Ok(true)
    }

    /// Dense text form: a `rows cols` header, then one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols + 1) + 16);
        out.push_str(&format!("{} {}\n", self.rows, self.cols));
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<BinMatrix> {
        let bad = |msg: String| Error::InvalidInput(format!("matrix text: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| bad(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(bad(format!("header must be `rows cols`, got {header:?}")));
        };
        let mut m = BinMatrix::zeros(rows, cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| bad(format!("expected {rows} rows, got {r}")))?;
            if line.len() != cols {
                return Err(bad(format!(
                    "row {r} has {} columns, expected {cols}",
                    line.len()
                )));
            }
            for (c, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => m.set(r, c, true),
                    _ => {
                        return Err(bad(format!(
                            "invalid character {:?} in row {r}",
                            ch as char
                        )))
                    }
                }
            }
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(bad("trailing rows after the declared count".into()));
        }
        Ok(m)
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Membership oracle for the span of a fixed set of vectors.
///
/// The generators are echelonized once; each query then costs one reduction
/// pass over at most `rank` pivot rows. Queries take `&self` and may run
/// concurrently.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    len: usize,
    basis: BinMatrix,
    pivots: Vec<usize>,
}

impl SpanSolver {
    /// Span of the rows of `m`.
    pub fn of_rows(m: &BinMatrix) -> Self {
        let (mut rref, pivots) = m.rref();
        rref.rows = pivots.len();
        rref.data.truncate(pivots.len() * rref.stride);
        Self {
            len: m.cols,
            basis: rref,
            pivots,
        }
    }

    /// Span of the columns of `m` (its image).
    pub fn of_columns(m: &BinMatrix) -> Self {
        Self::of_rows(&m.transpose())
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn dim(&self) -> usize {
        self.len
    }

    /// Reduces `v` against the basis in place; the result is zero iff `v` was in the span.
    pub fn reduce_words(&self, v: &mut [u64]) {
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p / WORD] >> (p % WORD) & 1 == 1 {
                xor_words(v, self.basis.row_words(r));
            }
        }
    }

    pub fn contains(&self, v: &BinVec) -> Result<bool> {
        if v.len != self.len {
            return Err(Error::DimensionMismatch {
                op: "solve_in_image",
                left: (self.len, self.rank()),
                right: (v.len, 1),
            });
        }
        let mut w = v.words.clone();
        self.reduce_words(&mut w);
        Ok(w.iter().all(|&x| x == 0))
    }
}

/// Whether `m * x = v` has a solution over GF(2).
pub fn solve_in_image(m: &BinMatrix, v: &BinVec) -> Result<bool> {
    SpanSolver::of_columns(m).contains(v)
}
