//! Finite presentations of fundamental groups.
//!
//! Generators: the vertex-group generators (recursively flattened for
//! nested GoGPi1 vertex groups) plus one stable letter per non-tree edge.
//! Relations: vertex relators, the conjugation relation
//! `t . fwd(c) . t^-1 = bwd(c)` per edge-group generator (with `t = 1` on
//! tree edges), finite groups contributing their full table relations.

use super::{GraphOfGroups, Letter, Word};
use crate::base_groups::GroupSpec;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub gens: Vec<String>,
    pub relators: Vec<Vec<(usize, i64)>>,
}

impl Presentation {
    pub fn free_rank(rank: usize, names: &[String]) -> Presentation {
        Presentation { gens: names[..rank].to_vec(), relators: Vec::new() }
    }

    fn free_reduce(r: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for &(g, p) in r {
            if p == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lg, lp)) if *lg == g => {
                    *lp += p;
                    if *lp == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, p)),
            }
        }
        out
    }

    /// Tietze simplification: free-reduce relators, drop trivial ones, and
    /// eliminate generators defined by a single occurrence in a relator.
    pub fn simplify(&self) -> Presentation {
        let mut gens = self.gens.clone();
        let mut rels: Vec<Vec<(usize, i64)>> =
            self.relators.iter().map(|r| Self::free_reduce(r)).collect();
        let size_cap = 20_000usize;
        for _pass in 0..200 {
            rels.retain(|r| !r.is_empty());
            rels.sort();
            rels.dedup();
            // find a relator in which some generator occurs exactly once
            // with exponent +-1, preferring short defining relators
            let mut pick: Option<(usize, usize)> = None; // (relator, position)
            let mut order: Vec<usize> = (0..rels.len()).collect();
            order.sort_by_key(|&i| rels[i].len());
            'search: for &ri in &order {
                for (pos, &(g, p)) in rels[ri].iter().enumerate() {
                    if p.abs() != 1 {
                        continue;
                    }
                    let occurrences: i64 = rels[ri]
                        .iter()
                        .map(|&(h, q)| if h == g { q.abs() } else { 0 })
                        .sum();
                    if occurrences == 1 {
                        pick = Some((ri, pos));
                        break 'search;
                    }
                }
            }
            let Some((ri, pos)) = pick else { break };
            let rel = rels[ri].clone();
            let (g, p) = rel[pos];
            // r = u . g^p . v  =>  g^p = (v u)^-1  =>  g = ((v u)^-1)^p
            let mut vu: Vec<(usize, i64)> = rel[pos + 1..].to_vec();
            vu.extend_from_slice(&rel[..pos]);
            let mut replacement: Vec<(usize, i64)> =
                vu.iter().rev().map(|&(h, q)| (h, -q)).collect();
            if p < 0 {
                replacement = replacement.iter().rev().map(|&(h, q)| (h, -q)).collect();
            }
            // substitute and drop (bail out if blow-up)
            let mut next: Vec<Vec<(usize, i64)>> = Vec::new();
            let mut total = 0usize;
            for (i, r) in rels.iter().enumerate() {
                if i == ri {
                    continue;
                }
                let mut out: Vec<(usize, i64)> = Vec::new();
                for &(h, q) in r {
                    if h == g {
                        for _ in 0..q.unsigned_abs() {
                            if q > 0 {
                                out.extend(replacement.iter().copied());
                            } else {
                                out.extend(replacement.iter().rev().map(|&(x, y)| (x, -y)));
                            }
                        }
                    } else {
                        out.push((h, q));
                    }
                }
                let out = Self::free_reduce(&out);
                total += out.len();
                next.push(out);
            }
            if total > size_cap {
                break;
            }
            // reindex: remove generator g
            gens.remove(g);
            let fix = |h: usize| if h > g { h - 1 } else { h };
            rels = next
                .into_iter()
                .map(|r| r.into_iter().map(|(h, q)| (fix(h), q)).collect())
                .collect();
        }
        rels.retain(|r| !r.is_empty());
        rels.sort();
        rels.dedup();
        Presentation { gens, relators: rels }
    }

    /// Exponent-sum relation matrix (relators x generators).
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.gens.len()];
                for &(g, p) in r {
                    row[g] += p;
                }
                row
            })
            .collect()
    }
}

/// Flattened generator layout of a presentation built from a graph.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub vertex_slots: Vec<Slot>,
    /// Generator index of each edge's stable letter; `None` on tree edges.
    pub edge_letters: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) enum Slot {
    Plain(usize),
    Nested(Box<Layout>),
}

pub(crate) fn flatten_word(
    g: &GraphOfGroups,
    layout: &Layout,
    w: &Word,
    out: &mut Vec<(usize, i64)>,
) -> Result<()> {
    for l in &w.0 {
        match l {
            Letter::Gen { .. } => {
                return Err(Error::invalid("top-level generator letter in a graph word"))
            }
            Letter::Syl { vertex, word } => {
                flatten_vertex_word(g, layout, *vertex, word, out)?;
            }
            Letter::Edge { edge, rev } => {
                if let Some(idx) = layout.edge_letters[edge.0] {
                    out.push((idx, if *rev { -1 } else { 1 }));
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn flatten_vertex_word(
    g: &GraphOfGroups,
    layout: &Layout,
    v: super::VertexId,
    w: &Word,
    out: &mut Vec<(usize, i64)>,
) -> Result<()> {
    match (&g.vertex(v).group, &layout.vertex_slots[v.0]) {
        (GroupSpec::GoGPi1(sub), Slot::Nested(inner)) => flatten_word(sub, inner, w, out),
        (spec, Slot::Plain(offset)) => {
            for l in &w.0 {
                match l {
                    Letter::Gen { gen, pow } => match spec {
                        GroupSpec::Finite(t) => {
                            // element 0 is the identity and is not a generator
                            let (e, p) = if *pow >= 0 {
                                (*gen, *pow)
                            } else {
                                (t.inverse(*gen), -*pow)
                            };
                            if e != t.identity() {
                                for _ in 0..p {
                                    out.push((offset + e - 1, 1));
                                }
                            }
                        }
                        _ => out.push((offset + gen, *pow)),
                    },
                    _ => return Err(Error::invalid("path letter in a plain vertex word")),
                }
            }
            Ok(())
        }
        _ => Err(Error::invalid("layout/group shape mismatch")),
    }
}

fn group_presentation_into(
    spec: &GroupSpec,
    names: &[String],
    gens: &mut Vec<String>,
    relators: &mut Vec<Vec<(usize, i64)>>,
) -> Result<Slot> {
    match spec {
        GroupSpec::Free(f) => {
            let offset = gens.len();
            for (i, n) in f.names.iter().enumerate() {
                gens.push(names.get(i).cloned().unwrap_or_else(|| n.clone()));
            }
            Ok(Slot::Plain(offset))
        }
        GroupSpec::FreeAbelian(a) => {
            let offset = gens.len();
            for (i, n) in a.names.iter().enumerate() {
                gens.push(names.get(i).cloned().unwrap_or_else(|| n.clone()));
            }
            for i in 0..a.names.len() {
                for j in 0..i {
                    relators.push(vec![
                        (offset + i, 1),
                        (offset + j, 1),
                        (offset + i, -1),
                        (offset + j, -1),
                    ]);
                }
                if a.orders[i] != 0 {
                    relators.push(vec![(offset + i, a.orders[i] as i64)]);
                }
            }
            Ok(Slot::Plain(offset))
        }
        GroupSpec::Finite(t) => {
            let offset = gens.len();
            let n = t.elems.len();
            for e in 1..n {
                gens.push(
                    names.get(e).cloned().unwrap_or_else(|| t.elems[e].clone()),
                );
            }
            // full table: x_i x_j x_k^-1 with x_0 omitted
            for i in 1..n {
                for j in 1..n {
                    let k = t.mul[i][j];
                    let mut rel = vec![(offset + i - 1, 1), (offset + j - 1, 1)];
                    if k != 0 {
                        rel.push((offset + k - 1, -1));
                    }
                    relators.push(rel);
                }
            }
            Ok(Slot::Plain(offset))
        }
        GroupSpec::GoGPi1(sub) => {
            let inner = build(sub, gens, relators)?;
            Ok(Slot::Nested(Box::new(inner)))
        }
    }
}

fn build(
    g: &GraphOfGroups,
    gens: &mut Vec<String>,
    relators: &mut Vec<Vec<(usize, i64)>>,
) -> Result<Layout> {
    let mut vertex_slots = Vec::with_capacity(g.vertices.len());
    for v in &g.vertices {
        vertex_slots.push(group_presentation_into(&v.group, &v.gen_names, gens, relators)?);
    }
    let mut edge_letters = Vec::with_capacity(g.edges.len());
    for (i, e) in g.edges.iter().enumerate() {
        if g.tree.contains(&super::EdgeId(i)) {
            edge_letters.push(None);
        } else {
            edge_letters.push(Some(gens.len()));
            gens.push(e.letter.clone());
        }
    }
    let layout = Layout { vertex_slots, edge_letters };
    // edge relations: t . fwd(c) . t^-1 . bwd(c)^-1
    for (i, e) in g.edges.iter().enumerate() {
        let t = layout.edge_letters[i];
        for k in 0..e.group.gen_count() {
            let mut rel: Vec<(usize, i64)> = Vec::new();
            if let Some(t) = t {
                rel.push((t, 1));
            }
            flatten_vertex_word(g, &layout, e.to, &e.map_to.images[k], &mut rel)?;
            if let Some(t) = t {
                rel.push((t, -1));
            }
            let mut bwd = Vec::new();
            flatten_vertex_word(g, &layout, e.from, &e.map_from.images[k], &mut bwd)?;
            rel.extend(bwd.iter().rev().map(|&(x, p)| (x, -p)));
            relators.push(rel);
        }
    }
    Ok(layout)
}

/// Presentation of the fundamental group, deterministic in the input order.
pub fn fundamental_group_presentation(g: &GraphOfGroups) -> Result<Presentation> {
    let mut gens = Vec::new();
    let mut relators = Vec::new();
    build(g, &mut gens, &mut relators)?;
    Ok(Presentation {
        gens,
        relators: relators.iter().map(|r| Presentation::free_reduce(r)).collect(),
    })
}

pub(crate) fn layout_of(g: &GraphOfGroups) -> Result<Layout> {
    let mut gens = Vec::new();
    let mut relators = Vec::new();
    build(g, &mut gens, &mut relators)
}

/// Presentation of a bare group spec.
pub fn presentation_of_group(spec: &GroupSpec) -> Result<Presentation> {
    match spec {
        GroupSpec::GoGPi1(g) => fundamental_group_presentation(g),
        _ => {
            let mut gens = Vec::new();
            let mut relators = Vec::new();
            group_presentation_into(spec, &[], &mut gens, &mut relators)?;
            Ok(Presentation { gens, relators })
        }
    }
}
