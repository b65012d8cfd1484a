//! Chain isomorphism between twisted and untwisted complexes.
//!
//! For invertible flat twists the maps
//! `T_2 = diag(phi1_j^{-1})`, `T_1 = diag(phi0_j^{-1}) ⊕ I`, `T_0 = I`
//! intertwine the twisted and untwisted boundaries. They are checked here on
//! the binary expansions, together with the rank equalities they imply and a
//! weight-preservation certificate (every expanded `phi0_j` monomial).

use crate::error::Result;
use crate::gf2::BinMatrix;
use crate::rchain::{build_twisted_complex, RMatrix, TwistData};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryRanks {
    pub d1: usize,
    pub d2: usize,
}

/// Whether twisted and untwisted minimum distances are known to agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceEquality {
    /// Invertible twists whose expanded `phi0_j` are all permutations.
    Certified,
    /// Invertible twists, but some `phi0_j` does not preserve weight.
    Uncertified,
    /// The isomorphism hypothesis does not hold.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    /// Per-generator twists are flat and invertible.
    pub applicable: bool,
    pub per_column: bool,
    pub flat: bool,
    /// One verdict per generator (per stored twist for per-entry data).
    pub invertible: Vec<bool>,
    /// `∂_2^tw T_2 = T_1 ∂_2^untw`, when the maps could be built.
    pub square_d2: Option<bool>,
    /// `∂_1^tw T_1 = T_0 ∂_1^untw`, when the maps could be built.
    pub square_d1: Option<bool>,
    pub twisted: BoundaryRanks,
    pub untwisted: BoundaryRanks,
    /// Whether each expanded `phi0_j` is a permutation matrix.
    pub monomial: Vec<bool>,
    pub distance_equality: DistanceEquality,
}

impl IsoReport {
    pub fn ranks_equal(&self) -> bool {
        self.twisted == self.untwisted
    }

    pub fn squares_commute(&self) -> bool {
        self.square_d1 == Some(true) && self.square_d2 == Some(true)
    }
}

pub fn verify_chain_iso(base: &RMatrix, fiber: &RMatrix, twists: &TwistData) -> Result<IsoReport> {
    let group = base.group();
    let (m, (p, q)) = (twists.generators(), twists.fiber_dims());
    let l = group.order();

    let twisted = build_twisted_complex(base, fiber, twists, true)?;
    let untwisted =
        build_twisted_complex(base, fiber, &TwistData::identity(group, m, p, q), false)?;
    let (tw_d1, tw_d2) = (twisted.expand_d1(), twisted.expand_d2());
    let (un_d1, un_d2) = (untwisted.expand_d1(), untwisted.expand_d2());
    let ranks = |d1: &BinMatrix, d2: &BinMatrix| BoundaryRanks {
        d1: d1.rank(),
        d2: d2.rank(),
    };

    let all: Vec<_> = twists.iter().map(|(_, _, t)| t).collect();
    let invertible: Vec<bool> = all.iter().map(|t| t.is_invertible()).collect();
    let monomial: Vec<bool> = all
        .iter()
        .map(|t| t.expand_phi0(q).is_monomial().unwrap_or(false))
        .collect();
    let flat = twisted.flatness.flat;
    let per_column = twists.is_per_column();
    let applicable = per_column && flat && invertible.iter().all(|&b| b);

    let (mut square_d2, mut square_d1) = (None, None);
    if applicable {
        let columns = twists.columns().expect("per-column twists");
        let mut inv1 = Vec::with_capacity(m);
        let mut inv0 = Vec::with_capacity(m + 1);
        for t in columns {
            inv1.push(t.expand_phi1(p).inverse()?.expect("invertible phi1"));
            inv0.push(t.expand_phi0(q).inverse()?.expect("invertible phi0"));
        }
        inv0.push(BinMatrix::identity(base.rows() * p * l));
        let t2 = BinMatrix::block_diag(&inv1);
        let t1 = BinMatrix::block_diag(&inv0);
        square_d2 = Some(tw_d2.mul(&t2)? == t1.mul(&un_d2)?);
        square_d1 = Some(tw_d1.mul(&t1)? == un_d1);
    }

    let distance_equality = if !applicable {
        DistanceEquality::NotApplicable
    } else if monomial.iter().all(|&b| b) {
        DistanceEquality::Certified
    } else {
        DistanceEquality::Uncertified
    };

    Ok(IsoReport {
        applicable,
        per_column,
        flat,
        invertible,
        square_d2,
        square_d1,
        twisted: ranks(&tw_d1, &tw_d2),
        untwisted: ranks(&un_d1, &un_d2),
        monomial,
        distance_equality,
    })
}
