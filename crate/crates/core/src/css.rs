//! CSS codes read off a total complex.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::BinMatrix;
use crate::group::Group;
use crate::rchain::TotalComplex;

/// A binary CSS code `H_X`, `H_Z` with `H_X H_Z^T = 0`.
#[derive(Clone, Debug)]
pub struct CssCode {
    group: Option<Arc<Group>>,
    hx: BinMatrix,
    hz: BinMatrix,
    rank_hx: usize,
    rank_hz: usize,
}

/// `[[n, k]]` together with the check-matrix ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub rank_hx: usize,
    pub rank_hz: usize,
}

impl CssCode {
    /// Wraps explicit check matrices after verifying the CSS condition.
    pub fn from_checks(hx: BinMatrix, hz: BinMatrix) -> Result<Self> {
        Self::new(None, hx, hz)
    }

    fn new(group: Option<Arc<Group>>, hx: BinMatrix, hz: BinMatrix) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::DimensionMismatch {
                op: "css check matrices",
                left: hx.shape(),
                right: hz.shape(),
            });
        }
        let product = hx.mul(&hz.transpose())?;
        if !product.is_zero() {
            return Err(Error::CssViolation {
                nonzero: product.count_ones(),
                context: None,
            });
        }
        let rank_hx = hx.rank();
        let rank_hz = hz.rank();
        Ok(Self {
            group,
            hx,
            hz,
            rank_hx,
            rank_hz,
        })
    }

    pub fn group(&self) -> Option<&Arc<Group>> {
        self.group.as_ref()
    }

    pub fn hx(&self) -> &BinMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BinMatrix {
        &self.hz
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn k(&self) -> usize {
        self.n() - self.rank_hx - self.rank_hz
    }

    pub fn parameters(&self) -> CodeParameters {
        CodeParameters {
            n: self.n(),
            k: self.k(),
            rank_hx: self.rank_hx,
            rank_hz: self.rank_hz,
        }
    }

    /// Maximum row weights of `H_X` and `H_Z`.
    pub fn check_weights(&self) -> (usize, usize) {
        (self.hx.max_row_weight(), self.hz.max_row_weight())
    }
}

/// `H_X` is the expanded `∂_1`, `H_Z` the transpose of the expanded `∂_2`.
pub fn assemble_css(total: &TotalComplex) -> Result<CssCode> {
    let hx = total.expand_d1();
    let hz = total.expand_d2().transpose();
    CssCode::new(Some(total.group.clone()), hx, hz).map_err(|e| match e {
        Error::CssViolation { nonzero, .. } => Error::CssViolation {
            nonzero,
            context: Some(format!("flatness verdict: {}", total.flatness)),
        },
        e => e,
    })
}
