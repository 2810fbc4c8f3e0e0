//! Navigation on the Bass-Serre tree of a one-edge splitting. Vertices are
//! cosets of the vertex groups, carried as reduced path words from the
//! base; equality and fixedness questions all run through Britton
//! reduction, and neighbour enumeration runs on lazily enumerated coset
//! transversals with explicit truncation.

use crate::base_groups::{self, GroupSpec, SubgroupSpec};
use crate::config::Budgets;
use crate::error::Result;
use crate::graph_of_groups::reduce::nested_membership;
use crate::graph_of_groups::{
    edge_image_membership, reduce_path, words_equal, EdgeId, GraphOfGroups, Letter, Splitting,
    VertexId, Word,
};
use serde::Serialize;

/// A vertex of the Bass-Serre tree: the coset `path . G_vertex`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeVertex {
    pub path: Word,
    pub vertex: VertexId,
}

/// An edge of the tree, identified by the path word of its `from`-side
/// coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub path: Word,
}

pub struct Tree<'a> {
    pub sp: &'a Splitting,
    pub budgets: &'a Budgets,
}

impl<'a> Tree<'a> {
    pub fn new(sp: &'a Splitting, budgets: &'a Budgets) -> Self {
        Tree { sp, budgets }
    }

    fn g(&self) -> &GraphOfGroups {
        &self.sp.gog
    }

    pub fn base(&self) -> TreeVertex {
        TreeVertex { path: Word::identity(), vertex: self.g().base }
    }

    pub fn reduce_at(&self, w: &Word, at: VertexId) -> Result<Word> {
        reduce_path(w, self.g(), at, self.budgets, 0)
    }

    /// Apply a group element (closed word at the base) to a tree vertex.
    pub fn act(&self, w: &Word, tv: &TreeVertex) -> Result<TreeVertex> {
        let path = self.reduce_at(&w.concat(&tv.path), self.g().base)?;
        Ok(TreeVertex { path, vertex: tv.vertex })
    }

    pub fn vertex_eq(&self, a: &TreeVertex, b: &TreeVertex) -> Result<bool> {
        if a.vertex != b.vertex {
            return Ok(false);
        }
        let q = a.path.inverse().concat(&b.path);
        Ok(self.reduce_at(&q, a.vertex)?.edge_len() == 0)
    }

    pub fn fixes(&self, w: &Word, tv: &TreeVertex) -> Result<bool> {
        let moved = self.act(w, tv)?;
        self.vertex_eq(&moved, tv)
    }

    pub fn act_edge(&self, w: &Word, te: &TreeEdge) -> Result<TreeEdge> {
        let path = self.reduce_at(&w.concat(&te.path), self.g().base)?;
        Ok(TreeEdge { path })
    }

    pub fn edge_eq(&self, a: &TreeEdge, b: &TreeEdge) -> Result<bool> {
        let e = EdgeId(0);
        let from = self.g().edge(e).from;
        let q = a.path.inverse().concat(&b.path);
        let red = self.reduce_at(&q, from)?;
        match red.0.as_slice() {
            [] => Ok(true),
            [Letter::Syl { word, .. }] => {
                Ok(edge_image_membership(self.g(), e, false, word, self.budgets, 0)?.is_some())
            }
            _ => Ok(false),
        }
    }

    pub fn fixes_edge(&self, w: &Word, te: &TreeEdge) -> Result<bool> {
        let moved = self.act_edge(w, te)?;
        self.edge_eq(&moved, te)
    }

    pub fn edge_endpoints(&self, te: &TreeEdge) -> Result<(TreeVertex, TreeVertex)> {
        let e = self.g().edge(EdgeId(0));
        let from = TreeVertex { path: te.path.clone(), vertex: e.from };
        let to_path = self.reduce_at(&te.path.concat(&Word::edge(EdgeId(0), false)), e.from)?;
        let to = TreeVertex { path: to_path, vertex: e.to };
        Ok((from, to))
    }

    /// Left-coset representatives of the edge image in the vertex group at
    /// `v` on the given side, as syllable elements (possibly truncated).
    pub fn side_transversal(&self, to_side: bool, bound: usize) -> Result<(Vec<Word>, bool)> {
        let e = self.g().edge(EdgeId(0));
        let (v, map) = if to_side { (e.to, &e.map_to) } else { (e.from, &e.map_from) };
        let spec = &self.g().vertex(v).group;
        match spec {
            GroupSpec::GoGPi1(sub) => {
                // lazy enumeration of nested pi1 elements, separated into
                // left cosets of the edge image through the nested oracle
                let mut reps: Vec<Word> = vec![Word::identity()];
                let candidates = nested_ball(sub, self.budgets, bound * 4)?;
                for c in candidates {
                    if reps.len() >= bound {
                        return Ok((reps, false));
                    }
                    let mut fresh = true;
                    for r in &reps {
                        // left cosets: cH = rH iff r^-1 c in H
                        let q = r.inverse().concat(&c);
                        if nested_membership(&q, &map.images, spec, self.budgets, 0)?.is_some() {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        reps.push(c);
                    }
                }
                // enumeration is ball-limited; never claim completeness here
                Ok((reps, false))
            }
            plain => {
                let sub = SubgroupSpec::new(plain.clone(), map.images.clone());
                let t = base_groups::coset_transversal(&sub, bound, false)?;
                let reps = t.reps.iter().map(|r| r.inverse()).collect();
                Ok((reps, t.complete))
            }
        }
    }

    /// Neighbours of a tree vertex, with the connecting tree edge.
    pub fn neighbors(&self, tv: &TreeVertex, bound: usize) -> Result<(Vec<(TreeVertex, TreeEdge)>, bool)> {
        let e = self.g().edge(EdgeId(0));
        let mut out = Vec::new();
        let mut complete = true;
        for (to_side, src, dst, rev) in
            [(false, e.from, e.to, false), (true, e.to, e.from, true)]
        {
            if tv.vertex != src {
                continue;
            }
            let (reps, full) = self.side_transversal(to_side, bound)?;
            if !full {
                complete = false;
            }
            for r in reps {
                let step = if r.is_empty() {
                    Word::edge(EdgeId(0), rev)
                } else {
                    Word::syl(src, r.clone()).concat(&Word::edge(EdgeId(0), rev))
                };
                let npath = self.reduce_at(&tv.path.concat(&step), self.g().base)?;
                let nv = TreeVertex { path: npath, vertex: dst };
                let edge_path = if rev {
                    // from-side of the crossed edge is the destination side
                    nv.path.clone()
                } else {
                    let p = if r.is_empty() {
                        tv.path.clone()
                    } else {
                        tv.path.concat(&Word::syl(src, r))
                    };
                    self.reduce_at(&p, self.g().base)?
                };
                out.push((nv, TreeEdge { path: edge_path }));
            }
        }
        Ok((out, complete))
    }
}

/// Incremental walker along the axis of a hyperbolic element: vertex and
/// edge instances by integer position, with bounded position lookup.
pub(crate) struct AxisWalker<'a> {
    pub tree: Tree<'a>,
    pub base: TreeVertex,
    pub period: Word,
    pub length: usize,
    cache: std::cell::RefCell<std::collections::BTreeMap<i64, TreeVertex>>,
}

impl<'a> AxisWalker<'a> {
    pub fn new(tree: Tree<'a>, base: TreeVertex, period: Word, length: usize) -> Self {
        AxisWalker { tree, base, period, length, cache: Default::default() }
    }

    pub fn vertex(&self, i: i64) -> Result<TreeVertex> {
        if let Some(v) = self.cache.borrow().get(&i) {
            return Ok(v.clone());
        }
        let l = self.length as i64;
        let q = i.div_euclid(l);
        let r = i.rem_euclid(l) as usize;
        let mut path = self.base.path.concat(&self.period.pow(q));
        let mut vertex = self.base.vertex;
        let mut crossings = 0usize;
        for letter in &self.period.0 {
            if crossings == r {
                break;
            }
            path = path.concat(&Word(vec![letter.clone()]));
            if let Letter::Edge { edge, rev } = letter {
                crossings += 1;
                let e = self.tree.sp.gog.edge(*edge);
                vertex = e.side(*rev).1;
            }
        }
        let path = self.tree.reduce_at(&path, self.tree.sp.gog.base)?;
        let tv = TreeVertex { path, vertex };
        self.cache.borrow_mut().insert(i, tv.clone());
        Ok(tv)
    }

    /// The tree edge between positions `i` and `i+1`.
    pub fn edge(&self, i: i64) -> Result<TreeEdge> {
        let l = self.length as i64;
        let q = i.div_euclid(l);
        let r = i.rem_euclid(l) as usize;
        let mut path = self.base.path.concat(&self.period.pow(q));
        let mut crossings = 0usize;
        for letter in &self.period.0 {
            match letter {
                Letter::Edge { rev, .. } => {
                    if crossings == r {
                        let from_path = if *rev {
                            path.concat(&Word(vec![letter.clone()]))
                        } else {
                            path.clone()
                        };
                        let from_path = self.tree.reduce_at(&from_path, self.tree.sp.gog.base)?;
                        return Ok(TreeEdge { path: from_path });
                    }
                    crossings += 1;
                    path = path.concat(&Word(vec![letter.clone()]));
                }
                _ => path = path.concat(&Word(vec![letter.clone()])),
            }
        }
        Err(crate::error::Error::invalid("axis period has fewer crossings than its length"))
    }

    pub fn position_of(&self, tv: &TreeVertex, span: usize) -> Result<Option<i64>> {
        for d in 0..=span as i64 {
            for i in if d == 0 { vec![0] } else { vec![d, -d] } {
                if self.tree.vertex_eq(&self.vertex(i)?, tv)? {
                    return Ok(Some(i));
                }
            }
        }
        Ok(None)
    }
}

/// Reduced elements of a nested fundamental group, short products first
/// (identity excluded).
pub(crate) fn nested_ball(g: &GraphOfGroups, budgets: &Budgets, cap: usize) -> Result<Vec<Word>> {
    let gens = crate::graph_of_groups::pi1_generators(g);
    let mut letters: Vec<Word> = Vec::new();
    for w in &gens {
        letters.push(w.clone());
        letters.push(w.inverse());
    }
    let mut seen: Vec<Word> = vec![Word::identity()];
    let mut frontier: Vec<Word> = vec![Word::identity()];
    for _ in 0..budgets.ball_len {
        let mut next: Vec<Word> = Vec::new();
        for f in &frontier {
            for l in &letters {
                if seen.len() + next.len() >= cap {
                    break;
                }
                let w = reduce_path(&f.concat(l), g, g.base, budgets, 0)?;
                let mut known = false;
                for s in seen.iter().chain(next.iter()) {
                    if words_equal(&w, s, g, budgets)? {
                        known = true;
                        break;
                    }
                }
                if !known {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        seen.extend(next.iter().cloned());
        frontier = next;
        if seen.len() >= cap {
            break;
        }
    }
    seen.remove(0);
    Ok(seen)
}
