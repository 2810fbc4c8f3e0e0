//! Exhaustive reference implementations used by the verification suites.
//!
//! Everything here trades efficiency for independence: searches are
//! breadth-first over all applicable rewrites instead of the deterministic
//! leftmost strategy the engine uses, so agreement between the two routes
//! is evidence, not tautology.

use crate::base_groups::{FiniteTable, GroupSpec};
use crate::config::Budgets;
use crate::error::Result;
use crate::graph_of_groups::{
    edge_image_membership, reduce_path, GraphOfGroups, Letter, Splitting, VertexId, Word,
};
use std::collections::VecDeque;

/// Minimal cyclic edge-length reachable from `w` by pinches applied in any
/// order and at any rotation. This is the brute-force translation length.
pub fn brute_cyclic_length(w: &Word, sp: &Splitting, budgets: &Budgets) -> Result<usize> {
    let g = &sp.gog;
    let start = (g.base, normalize(&w.0, g, g.base, budgets)?);
    let mut best = edge_count(&start.1);
    let mut seen: Vec<(VertexId, Vec<Letter>)> = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some((at, items)) = queue.pop_front() {
        let n = items.len();
        let mut push = |state: (VertexId, Vec<Letter>),
                        seen: &mut Vec<(VertexId, Vec<Letter>)>,
                        queue: &mut VecDeque<(VertexId, Vec<Letter>)>|
         -> Result<()> {
            let state = (state.0, normalize(&state.1, g, state.0, budgets)?);
            if !seen.contains(&state) {
                best = best.min(edge_count(&state.1));
                seen.push(state.clone());
                queue.push_back(state);
            }
            Ok(())
        };
        // rotations by one letter
        if n >= 2 {
            let mut rest = items[1..].to_vec();
            rest.push(items[0].clone());
            let new_at = match &items[0] {
                Letter::Edge { edge, rev } => g.edge(*edge).side(*rev).1,
                _ => at,
            };
            push((new_at, rest), &mut seen, &mut queue)?;
        }
        // every applicable pinch
        for i in 0..n {
            let Letter::Edge { edge, rev } = &items[i] else { continue };
            let (mut j, mut middle) = (i + 1, None::<Word>);
            if let Some(Letter::Syl { word, .. }) = items.get(j) {
                middle = Some(word.clone());
                j += 1;
            }
            let matches = matches!(
                items.get(j),
                Some(Letter::Edge { edge: e2, rev: r2 }) if e2 == edge && *r2 == !rev
            );
            if !matches {
                continue;
            }
            let s = middle.unwrap_or_default();
            if let Some(c) = edge_image_membership(g, *edge, !rev, &s, budgets, 0)? {
                let e = g.edge(*edge);
                let near = e.side(*rev).0;
                let map = if *rev { &e.map_to } else { &e.map_from };
                let replacement = crate::base_groups::apply_hom(&map.images, &c)?;
                let mut next = items[..i].to_vec();
                if !replacement.is_empty() {
                    next.push(Letter::Syl { vertex: near, word: replacement });
                }
                next.extend_from_slice(&items[j + 1..]);
                push((at, next), &mut seen, &mut queue)?;
            }
        }
        if seen.len() > 4096 {
            break;
        }
    }
    Ok(best)
}

fn edge_count(items: &[Letter]) -> usize {
    items.iter().filter(|l| matches!(l, Letter::Edge { .. })).count()
}

/// Syllable-merge and identity-drop without any pinching: keeps the search
/// states canonical-ish but performs no reduction of its own.
fn normalize(
    items: &[Letter],
    g: &GraphOfGroups,
    at: VertexId,
    budgets: &Budgets,
) -> Result<Vec<Letter>> {
    let mut out: Vec<Letter> = Vec::new();
    let mut cur = at;
    for l in items {
        match l {
            Letter::Gen { .. } => out.push(l.clone()),
            Letter::Syl { vertex, word } => {
                let merged = match out.last() {
                    Some(Letter::Syl { vertex: pv, word: pw }) if pv == vertex => {
                        let m = pw.concat(word);
                        out.pop();
                        m
                    }
                    _ => word.clone(),
                };
                let norm = match &g.vertex(*vertex).group {
                    GroupSpec::GoGPi1(sub) => reduce_path(&merged, sub, sub.base, budgets, 1)?,
                    plain => crate::base_groups::canonical_form(&merged, plain)?,
                };
                if !norm.is_empty() {
                    out.push(Letter::Syl { vertex: *vertex, word: norm });
                }
            }
            Letter::Edge { edge, rev } => {
                out.push(l.clone());
                cur = g.edge(*edge).side(*rev).1;
            }
        }
    }
    let _ = cur;
    Ok(out)
}

/// Brute coset enumeration in Z^2: walk lattice points in a box and group
/// them by membership of differences in the subgroup.
pub fn brute_z2_cosets(gens: &[(i64, i64)], reach: i64) -> Vec<Vec<(i64, i64)>> {
    let in_subgroup = |v: (i64, i64)| -> bool {
        // exhaustive small solve: x*g1 + y*g2 = v over a bounded range
        if gens.is_empty() {
            return v == (0, 0);
        }
        let bound = 4 * reach.max(1) + 8;
        if gens.len() == 1 {
            let g = gens[0];
            for x in -bound..=bound {
                if (x * g.0, x * g.1) == v {
                    return true;
                }
            }
            return false;
        }
        let (g1, g2) = (gens[0], gens[1]);
        for x in -bound..=bound {
            for y in -bound..=bound {
                if (x * g1.0 + y * g2.0, x * g1.1 + y * g2.1) == v {
                    return true;
                }
            }
        }
        false
    };
    let mut classes: Vec<Vec<(i64, i64)>> = Vec::new();
    for a in -reach..=reach {
        for b in -reach..=reach {
            let p = (a, b);
            let mut placed = false;
            for c in classes.iter_mut() {
                let r = c[0];
                if in_subgroup((p.0 - r.0, p.1 - r.1)) {
                    c.push(p);
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![p]);
            }
        }
    }
    classes
}

/// Order of a finite-group element by literal power iteration over the
/// table.
pub fn brute_finite_order(t: &FiniteTable, e: usize) -> u64 {
    let mut acc = e;
    let mut n = 1u64;
    while acc != t.identity() {
        acc = t.mul[acc][e];
        n += 1;
    }
    n
}
