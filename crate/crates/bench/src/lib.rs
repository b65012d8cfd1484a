//! Inputs shared by the benchmarks.

use std::sync::Arc;

use twistcode_core::{Group, RMatrix, Twist, TwistData};

/// The dihedral example complex over D3 with two per-column twists.
pub struct Example {
    pub group: Arc<Group>,
    pub base: RMatrix,
    pub fiber: RMatrix,
}

fn mat(g: &Arc<Group>, rows: &[&[&str]]) -> RMatrix {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    RMatrix::parse(g, &rows).expect("valid literal")
}

impl Example {
    pub fn new() -> Self {
        let group = Arc::new(Group::dihedral(3).expect("D3"));
        let base = mat(&group, &[&["0", "r+r^2"], &["1+r+r^2", "0"]]);
        let fiber = mat(&group, &[&["1", "r"], &["s", "1"]]);
        Self { group, base, fiber }
    }

    pub fn untwisted(&self) -> TwistData {
        TwistData::identity(&self.group, 2, 2, 2)
    }

    /// Both generators twisted by the fiber differential.
    pub fn fiber_twists(&self) -> TwistData {
        let t = Twist::Matrix {
            phi1: self.fiber.clone(),
            phi0: self.fiber.clone(),
        };
        TwistData::per_column(&self.group, 2, 2, vec![t.clone(), t]).expect("2x2 twists")
    }
}

impl Default for Example {
    fn default() -> Self {
        Self::new()
    }
}
