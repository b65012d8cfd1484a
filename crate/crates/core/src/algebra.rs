//! The group algebra F2[G] and its regular representations.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::gf2::BinMatrix;
use crate::group::Group;

/// An element of F2[G]: the set of group elements with coefficient 1,
/// stored as a bit field of width `|G|`.
#[derive(Clone)]
pub struct AlgElem {
    group: Arc<Group>,
    bits: Vec<u64>,
}

impl PartialEq for AlgElem {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && same_group(&self.group, &other.group)
    }
}

impl Eq for AlgElem {}

impl std::hash::Hash for AlgElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

pub(crate) fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgElem {
    pub fn zero(group: &Arc<Group>) -> Self {
        Self {
            group: group.clone(),
            bits: vec![0; group.order().div_ceil(64)],
        }
    }

    pub fn one(group: &Arc<Group>) -> Self {
        Self::element(group, group.identity())
    }

    /// The basis element for the group element with index `g`.
    pub fn element(group: &Arc<Group>, g: usize) -> Self {
        assert!(g < group.order(), "element index {g} out of range");
        let mut e = Self::zero(group);
        e.toggle(g);
        e
    }

    /// Sum of the group elements listed in `support`; repeated indices cancel.
    pub fn from_support(group: &Arc<Group>, support: &[usize]) -> Self {
        let mut e = Self::zero(group);
        for &g in support {
            assert!(g < group.order(), "element index {g} out of range");
            e.toggle(g);
        }
        e
    }

    /// Parses an element using the grammar described in [`parse_element`].
    pub fn parse(group: &Arc<Group>, text: &str) -> Result<Self, ParseError> {
        parse_element(group, text)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    #[inline]
    fn toggle(&mut self, g: usize) {
        self.bits[g / 64] ^= 1u64 << (g % 64);
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        g < self.group.order() && self.bits[g / 64] >> (g % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.bits[0] == 1 && self.bits[1..].iter().all(|&w| w == 0)
    }

    /// Number of group elements with coefficient 1.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Support indices, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// If this element is a single group element, its index.
    pub fn as_group_element(&self) -> Option<usize> {
        let mut s = self.support();
        match (s.next(), s.next()) {
            (Some(g), None) => Some(g),
            _ => None,
        }
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    #[inline]
    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    /// Convolution product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.group);
        for x in self.support() {
            let row = self.group.row(x);
            for y in other.support() {
                out.toggle(row[y]);
            }
        }
        out
    }

    /// The antipode: every group element is replaced by its inverse.
    pub fn antipode(&self) -> Self {
        let mut out = Self::zero(&self.group);
        for g in self.support() {
            out.toggle(self.group.inverse(g));
        }
        out
    }

    /// Matrix of `x -> self * x` acting on coordinate columns in element order.
    pub fn left_regular(&self) -> BinMatrix {
        let g = &self.group;
        let n = g.order();
        let mut m = BinMatrix::zeros(n, n);
        for h in self.support() {
            for b in 0..n {
                m.toggle(g.mul(h, b), b);
            }
        }
        m
    }

    /// Matrix of `x -> x * self` acting on coordinate columns in element order.
    pub fn right_regular(&self) -> BinMatrix {
        let g = &self.group;
        let n = g.order();
        let mut m = BinMatrix::zeros(n, n);
        for h in self.support() {
            for b in 0..n {
                m.toggle(g.mul(b, h), b);
            }
        }
        m
    }
}

impl fmt::Display for AlgElem {
    /// Canonical form: support names in element order joined by `+`, `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for g in self.support() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            f.write_str(if g == 0 { "1" } else { self.group.name(g) })?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElem({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} at byte {position}: {message} (token {token:?})")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub token: String,
    pub message: String,
}

/// Parses a group-algebra element.
///
/// An element is a `+`-separated sum of terms. A term is `0`, or a product of
/// factors optionally joined by `*`, where a factor is `e`, `1`, or an element
/// name of the group followed by an optional power `^k` (`k` may be negative).
/// Whitespace is ignored. Factor names are matched longest-first against the
/// group's alphanumeric element names, so `rs` in D_n is the element `r·s`.
pub fn parse_element(group: &Arc<Group>, text: &str) -> Result<AlgElem, ParseError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |position: usize, token: &str, message: &str| ParseError {
        input: text.to_string(),
        position,
        token: token.to_string(),
        message: message.to_string(),
    };
    if compact.is_empty() {
        return Err(err(0, "", "empty element"));
    }

    let mut vocabulary: Vec<(&str, usize)> = group
        .names()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    vocabulary.push(("1", 0));
    vocabulary.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));

    let mut result = AlgElem::zero(group);
    let mut offset = 0;
    for term in compact.split('+') {
        let term_start = offset;
        offset += term.len() + 1;
        if term.is_empty() {
            return Err(err(term_start, "+", "empty term"));
        }
        if term == "0" {
            continue;
        }
        let bytes = term.as_bytes();
        let mut pos = 0;
        let mut acc = group.identity();
        let mut expect_factor = true;
        while pos < bytes.len() {
            if bytes[pos] == b'*' {
                if expect_factor {
                    return Err(err(term_start + pos, "*", "dangling '*'"));
                }
                expect_factor = true;
                pos += 1;
                continue;
            }
            let rest = &term[pos..];
            let Some(&(name, g)) = vocabulary.iter().find(|(n, _)| rest.starts_with(n)) else {
                let token: String = rest
                    .chars()
                    .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                    .collect();
                let token = if token.is_empty() {
                    rest[..1].to_string()
                } else {
                    token
                };
                return Err(err(term_start + pos, &token, "unknown element"));
            };
            pos += name.len();
            let mut exponent: i64 = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let start = pos;
                if pos < bytes.len() && bytes[pos] == b'-' {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &term[start..pos];
                exponent = digits
                    .parse()
                    .map_err(|_| err(term_start + start, digits, "invalid exponent"))?;
            }
            acc = group.mul(acc, group.pow(g, exponent));
            expect_factor = false;
        }
        if expect_factor {
            return Err(err(term_start + pos, "*", "dangling '*'"));
        }
        result.toggle(acc);
    }
    Ok(result)
}
