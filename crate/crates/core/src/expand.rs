//! Binary expansion of matrices over F2[G].

use std::sync::Arc;

use crate::algebra::AlgElem;
use crate::gf2::BinMatrix;
use crate::group::Group;
use crate::rchain::{BiEntry, BiMatrix};

/// Expands every entry `(b, f)` to the `ℓ x ℓ` block
/// `right_regular(b) · left_regular(f)`; zero entries become zero blocks.
pub fn expand_bientry_matrix(m: &BiMatrix, group: &Arc<Group>) -> BinMatrix {
    let l = group.order();
    let mut out = BinMatrix::zeros(m.rows() * l, m.cols() * l);
    for ((r, c), entry) in m.entries() {
        add_block(&mut out, r * l, c * l, entry, group);
    }
    out
}

/// The `ℓ x ℓ` block of a single entry.
pub fn expand_bientry(entry: &BiEntry, group: &Arc<Group>) -> BinMatrix {
    let l = group.order();
    let mut out = BinMatrix::zeros(l, l);
    add_block(&mut out, 0, 0, entry, group);
    out
}

fn add_block(out: &mut BinMatrix, row: usize, col: usize, entry: &BiEntry, group: &Group) {
    // column g_c maps to sum over h in f, k in b of h·g_c·k
    let fiber: Vec<usize> = entry.fiber.support().collect();
    let base: Vec<usize> = entry.base.support().collect();
    for c in 0..group.order() {
        for &h in &fiber {
            let hg = group.mul(h, c);
            for &k in &base {
                out.toggle(row + group.mul(hg, k), col + c);
            }
        }
    }
}

/// `blockdiag(right_regular(a), ..., right_regular(a))` with `copies` blocks.
pub fn expand_block_diag_right(a: &AlgElem, copies: usize) -> BinMatrix {
    let block = a.right_regular();
    BinMatrix::block_diag(&vec![block; copies])
}
