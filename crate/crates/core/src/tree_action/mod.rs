//! Element- and subgroup-level geometry on Bass-Serre trees of one-edge
//! splittings: elliptic/hyperbolic classification with explicit fixed
//! vertices and axes, the pair-type of two splittings, invariant-line
//! quotient cores for slender subgroups and quotient graph-of-groups cores
//! for general finitely generated subgroup actions.

mod line;
mod orbits;
pub(crate) mod tree;

pub use line::{invariant_line_core, CoreGraph, CoreShape};
pub use orbits::{build_quotient_core, quotient_core_graph, resolve_by_action, QuotientCore};
pub use tree::{Tree, TreeEdge, TreeVertex};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{cyclically_reduce, reduce_word, Splitting, Word};
use serde::Serialize;

/// Action type of a single element on the tree of a splitting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ElementType {
    Elliptic {
        /// A vertex fixed by the element, as a reduced coset word.
        fixed: TreeVertex,
    },
    Hyperbolic {
        /// Translation length (the cyclically reduced edge-length).
        length: usize,
        /// A point on the axis.
        base_point: TreeVertex,
        /// The period word: a cyclically reduced conjugate translating the
        /// axis, anchored at `base_point`.
        period: Word,
    },
}

impl ElementType {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, ElementType::Elliptic { .. })
    }

    pub fn length(&self) -> usize {
        match self {
            ElementType::Elliptic { .. } => 0,
            ElementType::Hyperbolic { length, .. } => *length,
        }
    }
}

/// Action type of a finitely generated subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SubgroupType {
    Elliptic { fixed: TreeVertex },
    Hyperbolic { witness: Word },
}

impl SubgroupType {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, SubgroupType::Elliptic { .. })
    }
}

/// Type of an ordered pair of splittings. The first letter records how the
/// first splitting's edge group acts on the second tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairType {
    EE,
    EH,
    HE,
    HH,
}

impl PairType {
    pub fn mirror(self) -> PairType {
        match self {
            PairType::EH => PairType::HE,
            PairType::HE => PairType::EH,
            x => x,
        }
    }

    pub fn from_letters(first_elliptic: bool, second_elliptic: bool) -> PairType {
        match (first_elliptic, second_elliptic) {
            (true, true) => PairType::EE,
            (true, false) => PairType::EH,
            (false, true) => PairType::HE,
            (false, false) => PairType::HH,
        }
    }
}

impl std::fmt::Display for PairType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PairType::EE => "EE",
            PairType::EH => "EH",
            PairType::HE => "HE",
            PairType::HH => "HH",
        };
        write!(f, "{s}")
    }
}

/// Classify one element, given as a closed word in the splitting's own
/// fundamental-group alphabet.
pub fn element_type(w: &Word, sp: &Splitting, budgets: &Budgets) -> Result<ElementType> {
    let (core, conj) = cyclically_reduce(w, &sp.gog, budgets)?;
    let end = sp.gog.path_end(sp.gog.base, &conj)?;
    let anchor = TreeVertex { path: conj, vertex: end };
    if core.edge_len() == 0 {
        Ok(ElementType::Elliptic { fixed: anchor })
    } else {
        Ok(ElementType::Hyperbolic { length: core.edge_len(), base_point: anchor, period: core })
    }
}

/// Classify a subgroup from its generators (words in the splitting's
/// alphabet). Ellipticity of every generator and every pairwise product
/// certifies ellipticity of the subgroup; the common fixed vertex is then
/// found by bounded ball search.
pub fn subgroup_type(gens: &[Word], sp: &Splitting, budgets: &Budgets) -> Result<SubgroupType> {
    let tree = Tree::new(sp, budgets);
    let mut nontrivial: Vec<Word> = Vec::new();
    for g in gens {
        let r = reduce_word(g, &sp.gog, budgets, 0)?;
        if !r.is_empty() {
            nontrivial.push(r);
        }
    }
    if nontrivial.is_empty() {
        return Ok(SubgroupType::Elliptic { fixed: tree.base() });
    }
    let mut candidates: Vec<TreeVertex> = Vec::new();
    for g in &nontrivial {
        match element_type(g, sp, budgets)? {
            ElementType::Hyperbolic { .. } => {
                return Ok(SubgroupType::Hyperbolic { witness: g.clone() })
            }
            ElementType::Elliptic { fixed } => candidates.push(fixed),
        }
    }
    for i in 0..nontrivial.len() {
        for j in 0..nontrivial.len() {
            if i == j {
                continue;
            }
            let p = nontrivial[i].concat(&nontrivial[j]);
            if let ElementType::Hyperbolic { .. } = element_type(&p, sp, budgets)? {
                return Ok(SubgroupType::Hyperbolic { witness: p });
            }
        }
    }
    // ellipticity certified; search for a common fixed vertex
    let all_fix = |tv: &TreeVertex| -> Result<bool> {
        for g in &nontrivial {
            if !tree.fixes(g, tv)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for c in &candidates {
        if all_fix(c)? {
            return Ok(SubgroupType::Elliptic { fixed: c.clone() });
        }
    }
    // BFS ball around the base vertex
    let mut seen: Vec<TreeVertex> = vec![tree.base()];
    let mut frontier: Vec<TreeVertex> = vec![tree.base()];
    if all_fix(&tree.base())? {
        return Ok(SubgroupType::Elliptic { fixed: tree.base() });
    }
    for _ in 0..budgets.radius {
        let mut next = Vec::new();
        for f in &frontier {
            let (nbrs, _complete) = tree.neighbors(f, budgets.transversal)?;
            'nbr: for (n, _) in nbrs {
                for s in seen.iter().chain(next.iter()) {
                    if tree.vertex_eq(s, &n)? {
                        continue 'nbr;
                    }
                }
                if all_fix(&n)? {
                    return Ok(SubgroupType::Elliptic { fixed: n });
                }
                next.push(n);
                if seen.len() + next.len() > budgets.ball_cap {
                    return Err(Error::FixedVertexSearchExhausted { radius: budgets.radius });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        seen.extend(next.iter().cloned());
        frontier = next;
    }
    Err(Error::FixedVertexSearchExhausted { radius: budgets.radius })
}

/// Pair classification. `e1_in_s2` is the first splitting's edge group
/// written in the second splitting's alphabet, and symmetrically.
pub fn pair_type(
    s1: &Splitting,
    s2: &Splitting,
    e1_in_s2: &[Word],
    e2_in_s1: &[Word],
    budgets: &Budgets,
) -> Result<PairType> {
    let first = subgroup_type(e1_in_s2, s2, budgets)?;
    let second = subgroup_type(e2_in_s1, s1, budgets)?;
    Ok(PairType::from_letters(first.is_elliptic(), second.is_elliptic()))
}

/// Is every listed subgroup generator elliptic on the splitting's tree,
/// with a common fixed vertex? Convenience wrapper used by refinement
/// checks: vertex groups of a refinement must be elliptic on the coarser
/// tree.
pub fn is_elliptic_subgroup(gens: &[Word], sp: &Splitting, budgets: &Budgets) -> Result<bool> {
    Ok(subgroup_type(gens, sp, budgets)?.is_elliptic())
}
