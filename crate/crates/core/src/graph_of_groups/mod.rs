//! Graphs of groups and edge-path words in their fundamental groups.
//!
//! A [`GraphOfGroups`] is a connected graph decorated with a [`GroupSpec`]
//! per vertex and per edge, together with two injective edge maps per edge.
//! Elements of the fundamental group are closed edge-path [`Word`]s anchored
//! at the base vertex; crossing edge `e` forwards is the letter `e+` and the
//! defining relation is `e+ . fwd(c) . e- = bwd(c)` for every edge-group
//! element `c` (tree letters die in the presentation).
//!
//! All orderings (maximal tree, transversals, tie-breaks) derive from
//! declaration order, so equal inputs produce identical outputs.

mod edits;
mod fingerprint;
pub(crate) mod presentation;
pub(crate) mod reduce;
mod subgroup;

pub use edits::*;
pub use fingerprint::{default_targets, fingerprint, fingerprint_of_presentation, Fingerprint};
pub use presentation::{fundamental_group_presentation, presentation_of_group, Presentation};
pub use reduce::{
    common_vertex_form, cyclically_reduce, designated_membership, edge_image_membership,
    is_identity_in, nested_membership, reduce_path, reduce_word, words_equal,
};
pub(crate) use subgroup::Realization;
pub use subgroup::{
    resolve_subgroup, resolve_with_hint, subgroup_gens_elliptic_words, ResolvedGroup,
};

use crate::base_groups::GroupSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// One letter of an edge-path word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// `gen^pow` in a plain backend (Finite, FreeAbelian, Free).
    Gen { gen: usize, pow: i64 },
    /// A vertex syllable: an element of the group at `vertex`.
    Syl { vertex: VertexId, word: Word },
    /// A directed edge letter; `rev` crosses against the edge orientation.
    Edge { edge: EdgeId, rev: bool },
}

/// A word: either a plain generator word (in a plain backend) or an
/// edge-path word alternating vertex syllables and edge letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(gen: usize, pow: i64) -> Self {
        if pow == 0 {
            Word::identity()
        } else {
            Word(vec![Letter::Gen { gen, pow }])
        }
    }

    pub fn syl(vertex: VertexId, word: Word) -> Self {
        Word(vec![Letter::Syl { vertex, word }])
    }

    pub fn edge(edge: EdgeId, rev: bool) -> Self {
        Word(vec![Letter::Edge { edge, rev }])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        let mut out = Vec::with_capacity(self.0.len());
        for l in self.0.iter().rev() {
            out.push(match l {
                Letter::Gen { gen, pow } => Letter::Gen { gen: *gen, pow: -pow },
                Letter::Syl { vertex, word } => {
                    Letter::Syl { vertex: *vertex, word: word.inverse() }
                }
                Letter::Edge { edge, rev } => Letter::Edge { edge: *edge, rev: !rev },
            });
        }
        Word(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend(other.0.iter().cloned());
        Word(out)
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut out = Vec::new();
        for p in parts {
            out.extend(p.0.iter().cloned());
        }
        Word(out)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Number of edge letters (the edge-length of a path word).
    pub fn edge_len(&self) -> usize {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Edge { .. } => 1,
                _ => 0,
            })
            .sum()
    }

    /// Total syllable count, counting nested letters once each.
    pub fn size(&self) -> usize {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Syl { word, .. } => 1 + word.size(),
                _ => 1,
            })
            .sum()
    }

    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.concat(self).concat(&u.inverse())
    }
}

/// One side of an edge: the monomorphism images of the edge-group
/// generators in the endpoint vertex group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMap {
    pub images: Vec<Word>,
    /// Injectivity status: `None` = not decidable with the available
    /// backends (surfaced as `unverified` in validation reports).
    pub mono: Option<bool>,
    /// For GoGPi1 endpoints: the images are `conj . s . conj^-1` with `s` a
    /// plain syllable at `sub_vertex` of the nested graph. Discovered during
    /// validation; drives designated-edge-subgroup membership.
    pub attach: Option<AttachHint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachHint {
    pub sub_vertex: VertexId,
    pub conj: Word,
    /// Image words rewritten as plain words in the nested vertex group.
    pub plain_images: Vec<Word>,
}

impl EdgeMap {
    pub fn new(images: Vec<Word>) -> Self {
        EdgeMap { images, mono: None, attach: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    pub group: GroupSpec,
    /// Display names for the group generators within this graph's scope.
    pub gen_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    /// Display name of the edge letter (`t<id>` by default).
    pub letter: String,
    pub from: VertexId,
    pub to: VertexId,
    pub group: GroupSpec,
    /// Images in the group at `from` (the `bwd` side of the relation).
    pub map_from: EdgeMap,
    /// Images in the group at `to` (the `fwd` side).
    pub map_to: EdgeMap,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    pub fn side(&self, rev: bool) -> (VertexId, VertexId) {
        if rev {
            (self.to, self.from)
        } else {
            (self.from, self.to)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphOfGroups {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub base: VertexId,
    /// Spanning tree chosen by shortlex BFS from the base vertex.
    pub tree: BTreeSet<EdgeId>,
}

impl GraphOfGroups {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        base: VertexId,
    ) -> Result<Self> {
        let mut g = GraphOfGroups {
            name: name.into(),
            vertices,
            edges,
            base,
            tree: BTreeSet::new(),
        };
        g.tree = g.compute_tree()?;
        Ok(g)
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    /// Shortlex BFS spanning tree from the base vertex; loops never qualify.
    fn compute_tree(&self) -> Result<BTreeSet<EdgeId>> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::invalid("graph of groups needs at least one vertex"));
        }
        let mut seen = vec![false; n];
        let mut tree = BTreeSet::new();
        let mut queue = std::collections::VecDeque::new();
        seen[self.base.0] = true;
        queue.push_back(self.base);
        while let Some(v) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if e.is_loop() {
                    continue;
                }
                let other = if e.from == v {
                    e.to
                } else if e.to == v {
                    e.from
                } else {
                    continue;
                };
                if !seen[other.0] {
                    seen[other.0] = true;
                    tree.insert(EdgeId(i));
                    queue.push_back(other);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(tree)
        } else {
            Err(Error::Disconnected)
        }
    }

    /// The unique reduced tree path from `from` to `to` as an edge-letter word.
    pub fn tree_path(&self, from: VertexId, to: VertexId) -> Word {
        if from == to {
            return Word::identity();
        }
        // BFS inside the tree
        let mut prev: Vec<Option<(VertexId, EdgeId, bool)>> = vec![None; self.vertices.len()];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(from);
        let mut seen = vec![false; self.vertices.len()];
        seen[from.0] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &eid in &self.tree {
                let e = self.edge(eid);
                let next = if e.from == v {
                    Some((e.to, false))
                } else if e.to == v {
                    Some((e.from, true))
                } else {
                    None
                };
                if let Some((w, rev)) = next {
                    if !seen[w.0] {
                        seen[w.0] = true;
                        prev[w.0] = Some((v, eid, rev));
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut letters = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, e, rev) = prev[cur.0].expect("tree path exists in a spanning tree");
            letters.push(Letter::Edge { edge: e, rev });
            cur = p;
        }
        letters.reverse();
        Word(letters)
    }

    /// Follow a path word starting at `start`; returns the end vertex.
    pub fn path_end(&self, start: VertexId, w: &Word) -> Result<VertexId> {
        let mut at = start;
        for l in &w.0 {
            match l {
                Letter::Gen { .. } => {
                    return Err(Error::invalid("bare generator letter in an edge-path word"))
                }
                Letter::Syl { vertex, .. } => {
                    if *vertex != at {
                        return Err(Error::invalid(format!(
                            "syllable at vertex {} but path is at {}",
                            vertex.0, at.0
                        )));
                    }
                }
                Letter::Edge { edge, rev } => {
                    let e = self.edge(*edge);
                    let (src, dst) = e.side(*rev);
                    if src != at {
                        return Err(Error::invalid(format!(
                            "edge {} crossed from vertex {} but path is at {}",
                            edge.0, src.0, at.0
                        )));
                    }
                    at = dst;
                }
            }
        }
        Ok(at)
    }

    /// True when some vertex group transitively references `other`.
    pub fn references(&self, other: &GraphOfGroups) -> bool {
        fn spec_refs(s: &GroupSpec, other: &GraphOfGroups) -> bool {
            match s {
                GroupSpec::GoGPi1(g) => {
                    std::ptr::eq(Arc::as_ptr(g), other as *const _) || g.references(other)
                }
                _ => false,
            }
        }
        self.vertices.iter().map(|v| &v.group).chain(self.edges.iter().map(|e| &e.group))
            .any(|s| spec_refs(s, other))
    }
}

/// Validation report: computed tree, per-edge monomorphism status, problems.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub tree: Vec<usize>,
    pub unverified_monos: Vec<(usize, &'static str)>,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.connected && self.problems.is_empty()
    }
}
