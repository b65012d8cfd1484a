//! Twisted fiber-bundle CSS codes over group algebras F2[G].
//!
//! A code is built from a base differential `∂B` (`n x m`) and a fiber
//! differential `∂F` (`q x p`) over F2[G], plus a fiber twist per base
//! generator. Twists must be flat (`phi0 ∂F = ∂F phi1`). The total complex is
//! expanded to binary matrices with base coefficients acting through the right
//! regular representation and fiber/twist coefficients through the left one.
//!
//! ```
//! use std::sync::Arc;
//! use twistcode_core::{Group, RMatrix, TwistData, build_twisted_complex, assemble_css};
//!
//! let g = Arc::new(Group::dihedral(3).unwrap());
//! let base = RMatrix::parse(&g, &[vec!["0", "r+r^2"], vec!["1+r+r^2", "0"]]).unwrap();
//! let fiber = RMatrix::parse(&g, &[vec!["1", "r"], vec!["s", "1"]]).unwrap();
//! let twists = TwistData::identity(&g, 2, 2, 2);
//! let total = build_twisted_complex(&base, &fiber, &twists, false).unwrap();
//! let code = assemble_css(&total).unwrap();
//! assert_eq!((code.n(), code.k()), (48, 6));
//! ```

pub mod algebra;
pub mod css;
pub mod distance;
pub mod error;
pub mod expand;
pub mod gf2;
pub mod group;
pub mod iso;
pub mod rchain;

pub use algebra::{parse_element, AlgElem, ParseError};
pub use css::{assemble_css, CodeParameters, CssCode};
pub use distance::{
    min_distance, DistanceMethod, DistanceOptions, DistanceResult, SideDistance,
    DEFAULT_WEIGHT_CAP, FULL_ENUMERATION_MAX_N,
};
pub use error::{Error, Result};
pub use expand::expand_bientry_matrix;
pub use gf2::{solve_in_image, BinMatrix, BinVec, SpanSolver};
pub use group::{Group, GroupError, MAX_ORDER};
pub use iso::{verify_chain_iso, BoundaryRanks, DistanceEquality, IsoReport};
pub use rchain::{
    build_lifted_product, build_twisted_complex, check_flatness, connection_from_group,
    is_invertible_twist, lifted_product_hz_literal, BiEntry, BiMatrix, FiberAction, FlatnessCheck,
    FlatnessReport, RMatrix, TotalComplex, TransposeMode, Twist, TwistData,
};
