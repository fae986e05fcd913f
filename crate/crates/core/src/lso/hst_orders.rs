use crate::hst::Hst;
use crate::ultrametric::UltrametricCover;

use super::{walecki_orderings, LsoCollection, LsoKind, Ordering};

/// `ceil(δ/2)` orderings of an HST with maximum degree `δ` and stretch
/// `1/α`, where `α` is the HST's separation. In ordering `j` the children of
/// every node appear in the order of the `j`-th Walecki ordering on `δ`
/// slots, with unused slots skipped.
pub fn hst_classic_lso(h: &Hst) -> LsoCollection {
    let degree = h.max_degree().max(1);
    let slots = walecki_orderings(degree);
    let orderings: Vec<Ordering> = slots
        .iter()
        .map(|slot_order| {
            let mut out = Vec::with_capacity(h.n());
            let mut stack = vec![h.root()];
            while let Some(v) = stack.pop() {
                if let Some(x) = h.leaf_point(v) {
                    out.push(x);
                    continue;
                }
                let kids = h.children(v);
                stack.extend(
                    slot_order
                        .iter()
                        .rev()
                        .filter(|&&s| s < kids.len())
                        .map(|&s| kids[s]),
                );
            }
            out
        })
        .collect();
    let sep = h.separation();
    LsoCollection {
        kind: LsoKind::Classic,
        rho: if sep.is_finite() { 1.0 / sep } else { 0.0 },
        tau: orderings.len(),
        orderings,
    }
}

/// Union of the per-HST classic orderings, with stretch `rho / k`.
pub fn cover_to_classic_lso(cover: &UltrametricCover) -> LsoCollection {
    let orderings: Vec<Ordering> = cover
        .ultrametrics
        .iter()
        .flat_map(|h| hst_classic_lso(h).orderings)
        .collect();
    LsoCollection {
        kind: LsoKind::Classic,
        rho: cover.rho / cover.separation,
        tau: orderings.len(),
        orderings,
    }
}

/// Leaves in depth-first order with children in stored order.
pub fn hst_preorder(h: &Hst) -> Ordering {
    let mut out = Vec::with_capacity(h.n());
    let mut stack = vec![h.root()];
    while let Some(v) = stack.pop() {
        if let Some(x) = h.leaf_point(v) {
            out.push(x);
        }
        stack.extend(h.children(v).iter().rev());
    }
    out
}

/// One preorder per ultrametric; stretch equals the cover's.
pub fn cover_to_triangle_lso(cover: &UltrametricCover) -> LsoCollection {
    let orderings: Vec<Ordering> = cover.ultrametrics.iter().map(hst_preorder).collect();
    LsoCollection {
        kind: LsoKind::Triangle,
        rho: cover.rho,
        tau: orderings.len(),
        orderings,
    }
}

/// A classic `rho`-LSO read as a triangle LSO with stretch `2 rho + 1`.
pub fn classic_as_triangle(lso: &LsoCollection) -> LsoCollection {
    assert_eq!(lso.kind, LsoKind::Classic);
    LsoCollection {
        kind: LsoKind::Triangle,
        rho: 2.0 * lso.rho + 1.0,
        ..lso.clone()
    }
}

/// A triangle LSO is a classic LSO with the same stretch.
pub fn triangle_as_classic(lso: &LsoCollection) -> LsoCollection {
    assert_eq!(lso.kind, LsoKind::Triangle);
    LsoCollection {
        kind: LsoKind::Classic,
        ..lso.clone()
    }
}
