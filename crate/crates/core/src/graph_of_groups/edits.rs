//! Edit operations on graphs of groups: validation, single-edge collapse,
//! one-edge splittings, substitution of a decomposition for a vertex, and
//! reduction at valence-2 vertices. Every edit preserves the fundamental
//! group; the engine checks this with fingerprints after each step.

use super::reduce::{common_vertex_form, nested_membership, reduce_path};
use super::{
    AttachHint, Edge, EdgeId, EdgeMap, GraphOfGroups, Letter, ValidationReport, Vertex, VertexId,
    Word,
};
use crate::base_groups::{self, GroupSpec, Homomorphism};
use crate::config::Budgets;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplittingStyle {
    Amalgam,
    Hnn,
}

/// A one-edge graph-of-groups decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    pub gog: Arc<GraphOfGroups>,
    pub style: SplittingStyle,
    pub provenance: String,
}

impl Splitting {
    pub fn new(gog: Arc<GraphOfGroups>, provenance: impl Into<String>) -> Result<Splitting> {
        if gog.edges.len() != 1 {
            return Err(Error::invalid(format!(
                "a splitting has exactly one edge, `{}` has {}",
                gog.name,
                gog.edges.len()
            )));
        }
        let e = &gog.edges[0];
        let style = if e.is_loop() {
            if gog.vertices.len() != 1 {
                return Err(Error::invalid("HNN splitting must have a single vertex"));
            }
            SplittingStyle::Hnn
        } else {
            if gog.vertices.len() != 2 {
                return Err(Error::invalid("amalgam splitting must have two vertices"));
            }
            SplittingStyle::Amalgam
        };
        Ok(Splitting { gog, style, provenance: provenance.into() })
    }

    pub fn edge(&self) -> &Edge {
        &self.gog.edges[0]
    }

    /// Edge-group generators as closed words at the base (through the
    /// `from`-side monomorphism).
    pub fn edge_group_words(&self) -> Vec<Word> {
        let e = self.edge();
        let path = self.gog.tree_path(self.gog.base, e.from);
        e.map_from
            .images
            .iter()
            .map(|img| {
                let syl = Word::syl(e.from, img.clone());
                path.concat(&syl).concat(&path.inverse())
            })
            .collect()
    }

    /// Generators of the whole fundamental group: vertex-group generators
    /// (conjugated to the base) and stable letters of non-tree edges.
    pub fn pi1_generators(&self) -> Vec<Word> {
        pi1_generators(&self.gog)
    }
}

/// Closed-word generators of the fundamental group of any graph.
pub fn pi1_generators(g: &GraphOfGroups) -> Vec<Word> {
    let mut out = Vec::new();
    for v in g.vertex_ids() {
        let path = g.tree_path(g.base, v);
        let spec = &g.vertex(v).group;
        match spec {
            GroupSpec::GoGPi1(sub) => {
                for w in pi1_generators(sub) {
                    let syl = Word::syl(v, w);
                    out.push(path.concat(&syl).concat(&path.inverse()));
                }
            }
            plain => {
                for i in 0..plain.gen_count() {
                    if let GroupSpec::Finite(t) = plain {
                        if i == t.identity() {
                            continue;
                        }
                    }
                    let syl = Word::syl(v, Word::gen(i, 1));
                    out.push(path.concat(&syl).concat(&path.inverse()));
                }
            }
        }
    }
    for e in g.edge_ids() {
        if g.tree.contains(&e) {
            continue;
        }
        let edge = g.edge(e);
        let p0 = g.tree_path(g.base, edge.from);
        let p1 = g.tree_path(edge.to, g.base);
        out.push(p0.concat(&Word::edge(e, false)).concat(&p1));
    }
    out
}

/// Check all type invariants, compute the tree, and list undecidable
/// monomorphisms.
pub fn validate(g: &GraphOfGroups, budgets: &Budgets) -> ValidationReport {
    let mut problems = Vec::new();
    let mut unverified = Vec::new();
    let connected = g.compute_tree_ok();
    if !connected {
        problems.push("underlying graph is disconnected".to_string());
    }
    for v in &g.vertices {
        let r = match &v.group {
            GroupSpec::Finite(t) => t.validate(),
            GroupSpec::FreeAbelian(a) => a.validate(),
            _ => Ok(()),
        };
        if let Err(e) = r {
            problems.push(format!("vertex `{}`: {}", v.name, e));
        }
        if let GroupSpec::GoGPi1(sub) = &v.group {
            if sub.references(g) || std::ptr::eq(Arc::as_ptr(sub), g as *const _) {
                problems.push(format!("vertex `{}`: cyclic GoGPi1 reference", v.name));
            }
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        for (side, map, vtx) in
            [("from", &e.map_from, e.from), ("to", &e.map_to, e.to)]
        {
            if map.images.len() != e.group.gen_count() {
                problems.push(format!(
                    "edge `{}` {} map: {} images for {} generators",
                    e.name,
                    side,
                    map.images.len(),
                    e.group.gen_count()
                ));
                continue;
            }
            let hom = Homomorphism {
                source: e.group.clone(),
                target: g.vertex(vtx).group.clone(),
                images: map.images.clone(),
            };
            match base_groups::injectivity_check(&hom, budgets) {
                Ok(true) => {}
                Ok(false) => problems.push(
                    Error::NonInjectiveEdgeMap {
                        edge: i,
                        detail: format!("{} side has a kernel", side),
                    }
                    .to_string(),
                ),
                Err(Error::UnsupportedBackend { .. }) | Err(Error::OracleTruncation { .. }) => {
                    unverified.push((i, if side == "from" { "from" } else { "to" }))
                }
                Err(err) => problems.push(format!("edge `{}` {} map: {}", e.name, side, err)),
            }
        }
    }
    ValidationReport {
        connected,
        tree: g.tree.iter().map(|e| e.0).collect(),
        unverified_monos: unverified,
        problems,
    }
}

impl GraphOfGroups {
    fn compute_tree_ok(&self) -> bool {
        // tree was computed at construction; recheck connectivity cheaply
        let mut seen = vec![false; self.vertices.len()];
        seen[self.base.0] = true;
        let mut stack = vec![self.base];
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && !seen[b.0] {
                        seen[b.0] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Discover the attach form of an edge side into a GoGPi1 endpoint.
    pub fn discover_attach(
        &self,
        e: EdgeId,
        to_side: bool,
        budgets: &Budgets,
    ) -> Result<Option<AttachHint>> {
        let edge = self.edge(e);
        let (v, map) = if to_side { (edge.to, &edge.map_to) } else { (edge.from, &edge.map_from) };
        match &self.vertex(v).group {
            GroupSpec::GoGPi1(sub) => {
                let form = common_vertex_form(sub, &map.images, budgets, 0)?;
                Ok(form.map(|f| AttachHint {
                    sub_vertex: f.vertex,
                    conj: f.conj,
                    plain_images: f.plain_words,
                }))
            }
            _ => Ok(None),
        }
    }
}

/// Result of a collapse: the new graph plus enough data to transport words
/// and edge ids from the old graph.
#[derive(Debug, Clone)]
pub struct Collapse {
    pub graph: Arc<GraphOfGroups>,
    /// Old vertex id -> (new vertex id, position inside the nested graph
    /// when the vertex was absorbed).
    vertex_map: Vec<(VertexId, Option<VertexId>)>,
    edge_map: Vec<Option<EdgeId>>,
    old_from: VertexId,
    old_to: VertexId,
    old_base: VertexId,
    old_ends: Vec<(VertexId, VertexId)>,
    collapsed: EdgeId,
}

impl Collapse {
    pub fn new_edge_id(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_map[e.0]
    }

    pub fn new_vertex_id(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0].0
    }

    /// Rewrite a path word of the old graph in the new graph's alphabet.
    /// Syllables and crossings in the collapsed zone become syllables of
    /// the nested group, anchored at the nested base by tree paths, so the
    /// rewrite is letter-by-letter and adjacent syllables merge on the fly
    /// during reduction.
    pub fn transport(&self, w: &Word) -> Word {
        // inside the nested graph: path from its base to the copy of `x`
        let q = |sub_v: VertexId| -> Word {
            if sub_v.0 == 0 {
                Word::identity()
            } else {
                Word::edge(EdgeId(0), false)
            }
        };
        let mut out: Vec<Letter> = Vec::with_capacity(w.0.len());
        for l in &w.0 {
            match l {
                Letter::Gen { .. } => out.push(l.clone()),
                Letter::Syl { vertex, word } => {
                    let (nv, inner) = self.vertex_map[vertex.0];
                    match inner {
                        None => out.push(Letter::Syl { vertex: nv, word: word.clone() }),
                        Some(sub_v) => {
                            let p = q(sub_v);
                            let nested =
                                p.concat(&Word::syl(sub_v, word.clone())).concat(&p.inverse());
                            out.push(Letter::Syl { vertex: nv, word: nested });
                        }
                    }
                }
                Letter::Edge { edge, rev } => match self.edge_map[edge.0] {
                    Some(ne) => out.push(Letter::Edge { edge: ne, rev: *rev }),
                    None => {
                        let (src, dst) =
                            if *rev { (self.old_to, self.old_from) } else { (self.old_from, self.old_to) };
                        let (nv, sub_src) = self.vertex_map[src.0];
                        let sub_src = sub_src.expect("collapsed endpoint is nested");
                        let sub_dst = self.vertex_map[dst.0].1.expect("collapsed endpoint");
                        // nested edge 0 runs from the copy of the lower old
                        // endpoint; orient the crossing accordingly
                        let nested_rev = if sub_src == sub_dst { *rev } else { sub_src.0 != 0 };
                        let cross = Word::edge(EdgeId(0), nested_rev);
                        let content =
                            q(sub_src).concat(&cross).concat(&q(sub_dst).inverse());
                        out.push(Letter::Syl { vertex: nv, word: content });
                    }
                },
            }
        }
        Word(out)
    }
}

impl Collapse {
    /// Inverse rewrite: a path word of the collapsed graph back into the
    /// old graph's alphabet. Nested syllables unfold in place; backtrack
    /// connectors keep the path valid without changing the element.
    pub fn untransport(&self, w: &Word) -> Word {
        let merged_new = self.vertex_map[self.old_from.0].0;
        // inverse maps
        let mut old_vertex: Vec<Option<VertexId>> = vec![None; self.graph.vertices.len()];
        for (old, (new, sub)) in self.vertex_map.iter().enumerate() {
            if sub.is_none() {
                old_vertex[new.0] = Some(VertexId(old));
            }
        }
        let mut old_edge: Vec<EdgeId> = vec![EdgeId(usize::MAX); self.graph.edges.len()];
        for (old, new) in self.edge_map.iter().enumerate() {
            if let Some(new) = new {
                old_edge[new.0] = EdgeId(old);
            }
        }
        let (first, second) = if self.old_from.0 <= self.old_to.0 {
            (self.old_from, self.old_to)
        } else {
            (self.old_to, self.old_from)
        };
        let collapsed_old = self.collapsed;
        let unfold_inner = |content: &Word, out: &mut Vec<Letter>| {
            for l in &content.0 {
                match l {
                    Letter::Gen { .. } => out.push(l.clone()),
                    Letter::Syl { vertex, word } => {
                        let old = if vertex.0 == 0 { first } else { second };
                        out.push(Letter::Syl { vertex: old, word: word.clone() });
                    }
                    Letter::Edge { rev, .. } => {
                        // nested edge 0 runs from the copy of `first`
                        let old_rev = if self.old_from == first { *rev } else { !*rev };
                        out.push(Letter::Edge { edge: collapsed_old, rev: old_rev });
                    }
                }
            }
        };
        // connector from `first` toward the current old position
        let connector_to = |p: VertexId| -> Option<Letter> {
            if p == first || self.old_from == self.old_to {
                None
            } else {
                let rev = self.old_from != first;
                Some(Letter::Edge { edge: collapsed_old, rev })
            }
        };
        let mut out: Vec<Letter> = Vec::new();
        // track the old position; the new base may sit inside the zone
        let mut pos: VertexId = old_vertex[self.graph.base.0].unwrap_or(self.old_base);
        for l in &w.0 {
            match l {
                Letter::Gen { .. } => out.push(l.clone()),
                Letter::Syl { vertex, word } => {
                    if *vertex == merged_new && old_vertex[vertex.0].is_none() {
                        // into-the-zone connector, unfold, back out
                        if let Some(c) = connector_to(pos) {
                            let mut back = c.clone();
                            if let Letter::Edge { rev, .. } = &mut back {
                                *rev = !*rev;
                            }
                            out.push(back);
                            unfold_inner(word, &mut out);
                            out.push(c);
                        } else {
                            unfold_inner(word, &mut out);
                        }
                    } else {
                        let old = old_vertex[vertex.0].expect("unmerged vertex");
                        out.push(Letter::Syl { vertex: old, word: word.clone() });
                        pos = old;
                    }
                }
                Letter::Edge { edge, rev } => {
                    let oe = old_edge[edge.0];
                    out.push(Letter::Edge { edge: oe, rev: *rev });
                    let (f, t) = self.old_ends[oe.0];
                    pos = if *rev { f } else { t };
                }
            }
        }
        Word(out)
    }
}

fn nested_vertex_word(sub_v: VertexId, word: &Word) -> Word {
    // nested graphs produced by collapse have base = vertex 0 and, in the
    // amalgam case, the single edge 0 joining vertex 0 to vertex 1
    if sub_v.0 == 0 {
        Word::syl(sub_v, word.clone())
    } else {
        let cross = Word::edge(EdgeId(0), false);
        cross.concat(&Word::syl(sub_v, word.clone())).concat(&cross.inverse())
    }
}

/// Collapse one edge. A non-loop edge merges its endpoints into a vertex
/// carrying the amalgam as a nested GoGPi1 group; a loop turns its vertex
/// group into the corresponding HNN extension.
pub fn collapse_edge(g: &GraphOfGroups, e: EdgeId) -> Result<Collapse> {
    let edge = g.edge(e).clone();
    let (u, w) = (edge.from, edge.to);
    // the nested graph: vertex 0 is the lower-id endpoint
    let (first, second) = if u.0 <= w.0 { (u, w) } else { (w, u) };
    let nested = if edge.is_loop() {
        GraphOfGroups::new(
            format!("{}/collapse({})", g.name, edge.name),
            vec![g.vertex(u).clone()],
            vec![Edge {
                name: edge.name.clone(),
                letter: edge.letter.clone(),
                from: VertexId(0),
                to: VertexId(0),
                group: edge.group.clone(),
                map_from: edge.map_from.clone(),
                map_to: edge.map_to.clone(),
            }],
            VertexId(0),
        )?
    } else {
        let map0 = if first == u { edge.map_from.clone() } else { edge.map_to.clone() };
        let map1 = if first == u { edge.map_to.clone() } else { edge.map_from.clone() };
        GraphOfGroups::new(
            format!("{}/collapse({})", g.name, edge.name),
            vec![g.vertex(first).clone(), g.vertex(second).clone()],
            vec![Edge {
                name: edge.name.clone(),
                letter: edge.letter.clone(),
                from: VertexId(0),
                to: VertexId(1),
                group: edge.group.clone(),
                map_from: map0,
                map_to: map1,
            }],
            VertexId(0),
        )?
    };
    let nested = Arc::new(nested);

    // rebuild the outer graph
    let mut vertex_map: Vec<(VertexId, Option<VertexId>)> =
        vec![(VertexId(usize::MAX), None); g.vertices.len()];
    let mut vertices = Vec::new();
    for v in g.vertex_ids() {
        if v == first {
            vertex_map[v.0] = (VertexId(vertices.len()), Some(VertexId(0)));
            vertices.push(Vertex {
                name: format!("{}+{}", g.vertex(first).name, if edge.is_loop() {
                    edge.name.clone()
                } else {
                    g.vertex(second).name.clone()
                }),
                group: GroupSpec::GoGPi1(nested.clone()),
                gen_names: Vec::new(),
            });
        } else if v == second && !edge.is_loop() {
            vertex_map[v.0] = (vertex_map[first.0].0, Some(VertexId(1)));
        } else {
            vertex_map[v.0] = (VertexId(vertices.len()), None);
            vertices.push(g.vertex(v).clone());
        }
    }
    let wrap_map = |old_vertex: VertexId, map: &EdgeMap| -> EdgeMap {
        match vertex_map[old_vertex.0].1 {
            None => map.clone(),
            Some(sub_v) => EdgeMap::new(
                map.images.iter().map(|img| nested_vertex_word(sub_v, img)).collect(),
            ),
        }
    };
    let mut edges = Vec::new();
    let mut edge_map: Vec<Option<EdgeId>> = vec![None; g.edges.len()];
    for eid in g.edge_ids() {
        if eid == e {
            continue;
        }
        let old = g.edge(eid);
        edge_map[eid.0] = Some(EdgeId(edges.len()));
        edges.push(Edge {
            name: old.name.clone(),
            letter: old.letter.clone(),
            from: vertex_map[old.from.0].0,
            to: vertex_map[old.to.0].0,
            group: old.group.clone(),
            map_from: wrap_map(old.from, &old.map_from),
            map_to: wrap_map(old.to, &old.map_to),
        });
    }
    let base = vertex_map[g.base.0].0;
    let graph = Arc::new(GraphOfGroups::new(g.name.clone(), vertices, edges, base)?);
    Ok(Collapse {
        graph,
        vertex_map,
        edge_map,
        old_from: edge.from,
        old_to: edge.to,
        old_base: g.base,
        old_ends: g.edges.iter().map(|e| (e.from, e.to)).collect(),
        collapsed: e,
    })
}

// Collapse carries the original `from` endpoint for word transport.
#[derive(Debug, Clone)]
pub struct CollapseInner;

/// Collapse every edge except `keep`; returns the resulting splitting and a
/// transport function for words of the original graph.
pub fn one_edge_splitting(g: &GraphOfGroups, keep: EdgeId) -> Result<(Splitting, WordTransport)> {
    if keep.0 >= g.edges.len() {
        return Err(Error::invalid(format!("edge {} does not exist", keep.0)));
    }
    let mut cur = Arc::new(g.clone());
    let mut keep_cur = keep;
    let mut transports: Vec<Collapse> = Vec::new();
    while cur.edges.len() > 1 {
        let victim = cur
            .edge_ids()
            .find(|&e| e != keep_cur)
            .expect("more than one edge implies a victim");
        let c = collapse_edge(&cur, victim)?;
        keep_cur = c.new_edge_id(keep_cur).expect("kept edge survives");
        cur = c.graph.clone();
        transports.push(c);
    }
    let sp = Splitting::new(cur, format!("{}[{}]", g.name, g.edge(keep).name))?;
    Ok((sp, WordTransport { steps: transports }))
}

/// Composed word rewriting through a chain of collapses.
#[derive(Debug, Clone, Default)]
pub struct WordTransport {
    steps: Vec<Collapse>,
}

impl WordTransport {
    pub fn apply(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        for s in &self.steps {
            cur = s.transport(&cur);
        }
        cur
    }

    pub fn unapply(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        for s in self.steps.iter().rev() {
            cur = s.untransport(&cur);
        }
        cur
    }
}

/// Substitute the decomposition `d` for vertex `v`. The attach map gives,
/// per incident edge side, the vertex of `d` and the conjugating word
/// witnessing that the edge image lies there; missing entries are
/// discovered when possible.
pub fn substitute(
    g: &GraphOfGroups,
    v: VertexId,
    d: &Arc<GraphOfGroups>,
    attach: &BTreeMap<(usize, bool), (VertexId, Word)>,
    budgets: &Budgets,
) -> Result<GraphOfGroups> {
    match &g.vertex(v).group {
        GroupSpec::GoGPi1(_) | GroupSpec::Free(_) | GroupSpec::FreeAbelian(_)
        | GroupSpec::Finite(_) => {}
    }
    let offset_new = |dv: VertexId, insert_at: usize| VertexId(insert_at + dv.0);
    // vertex layout: vertices before v, then d's vertices, then the rest
    let mut vertices = Vec::new();
    let mut vmap: Vec<VertexId> = vec![VertexId(usize::MAX); g.vertices.len()];
    let insert_at = v.0;
    for old in 0..v.0 {
        vmap[old] = VertexId(vertices.len());
        vertices.push(g.vertices[old].clone());
    }
    for dv in &d.vertices {
        vertices.push(dv.clone());
    }
    for old in v.0 + 1..g.vertices.len() {
        vmap[old] = VertexId(vertices.len());
        vertices.push(g.vertices[old].clone());
    }

    let mut edges = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let retarget = |side_to: bool, map: &EdgeMap, endpoint: VertexId| -> Result<(VertexId, EdgeMap)> {
            if endpoint != v {
                return Ok((vmap[endpoint.0], map.clone()));
            }
            let (dv, conj) = match attach.get(&(i, side_to)) {
                Some((dv, conj)) => (*dv, conj.clone()),
                None => {
                    let sub = match &g.vertex(v).group {
                        GroupSpec::GoGPi1(sub) => sub.clone(),
                        _ => {
                            return Err(Error::AttachmentUnwitnessed {
                                edge: i,
                                detail: "substitution at a plain vertex needs explicit attach data"
                                    .into(),
                            })
                        }
                    };
                    let _ = sub;
                    match common_vertex_form(d, &map.images, budgets, 0)? {
                        Some(f) => (f.vertex, f.conj),
                        None => {
                            return Err(Error::AttachmentUnwitnessed {
                                edge: i,
                                detail: "no common vertex position found in the substituted graph"
                                    .into(),
                            })
                        }
                    }
                }
            };
            // verify and rewrite each image as a plain word at dv
            let conj_inv = conj.inverse();
            let mut images = Vec::new();
            for img in &map.images {
                let moved = conj_inv.concat(img).concat(&conj);
                let red = reduce_path(&moved, d, dv, budgets, 0)?;
                match red.0.as_slice() {
                    [] => images.push(Word::identity()),
                    [Letter::Syl { vertex, word }] if *vertex == dv => images.push(word.clone()),
                    _ => {
                        return Err(Error::AttachmentUnwitnessed {
                            edge: i,
                            detail: format!(
                                "image does not lie at vertex {} of `{}` under the witness",
                                dv.0, d.name
                            ),
                        })
                    }
                }
            }
            Ok((offset_new(dv, insert_at), EdgeMap::new(images)))
        };
        let (nf, mf) = retarget(false, &e.map_from, e.from)?;
        let (nt, mt) = retarget(true, &e.map_to, e.to)?;
        edges.push(Edge {
            name: e.name.clone(),
            letter: e.letter.clone(),
            from: nf,
            to: nt,
            group: e.group.clone(),
            map_from: mf,
            map_to: mt,
        });
    }
    // d's own edges, shifted
    for e in &d.edges {
        edges.push(Edge {
            name: format!("{}.{}", d.name, e.name),
            letter: e.letter.clone(),
            from: offset_new(e.from, insert_at),
            to: offset_new(e.to, insert_at),
            group: e.group.clone(),
            map_from: e.map_from.clone(),
            map_to: e.map_to.clone(),
        });
    }
    let base = if g.base == v { offset_new(d.base, insert_at) } else { vmap[g.base.0] };
    GraphOfGroups::new(g.name.clone(), vertices, edges, base)
}

/// Iteratively collapse non-loop edges whose edge-group image equals the
/// group of a valence-2 endpoint (lowest edge id first). Returns the
/// reduced graph and the list of collapsed edges by their input ids.
pub fn make_reduced(
    g: &GraphOfGroups,
    budgets: &Budgets,
) -> Result<(Arc<GraphOfGroups>, Vec<EdgeId>)> {
    let mut cur = Arc::new(g.clone());
    let mut collapsed: Vec<EdgeId> = Vec::new();
    // original ids of current edges
    let mut ids: Vec<EdgeId> = g.edge_ids().collect();
    'outer: loop {
        let valence = |gr: &GraphOfGroups, x: VertexId| -> usize {
            gr.edges
                .iter()
                .map(|e| (e.from == x) as usize + (e.to == x) as usize)
                .sum()
        };
        for e in cur.edge_ids() {
            let edge = cur.edge(e);
            if edge.is_loop() {
                continue;
            }
            for (to_side, x) in [(false, edge.from), (true, edge.to)] {
                if valence(&cur, x) != 2 {
                    continue;
                }
                if !map_is_surjective(&cur, e, to_side, budgets)? {
                    continue;
                }
                let next = reduction_collapse(&cur, e, to_side, budgets)?;
                collapsed.push(ids[e.0]);
                ids.remove(e.0);
                cur = Arc::new(next);
                continue 'outer;
            }
        }
        break;
    }
    Ok((cur, collapsed))
}

/// Does the edge map on the given side hit every generator of the endpoint
/// vertex group?
fn map_is_surjective(
    g: &GraphOfGroups,
    e: EdgeId,
    to_side: bool,
    budgets: &Budgets,
) -> Result<bool> {
    let edge = g.edge(e);
    let (v, map) = if to_side { (edge.to, &edge.map_to) } else { (edge.from, &edge.map_from) };
    let spec = &g.vertex(v).group;
    let gens: Vec<Word> = match spec {
        GroupSpec::GoGPi1(sub) => pi1_generators(sub),
        plain => (0..plain.gen_count())
            .filter(|&i| !matches!(plain, GroupSpec::Finite(t) if i == t.identity()))
            .map(|i| Word::gen(i, 1))
            .collect(),
    };
    for w in gens {
        match nested_membership(&w, &map.images, spec, budgets, 0) {
            Ok(Some(_)) => {}
            Ok(None) => return Ok(false),
            Err(Error::UnsupportedBackend { .. }) => return Ok(false),
            Err(err) => return Err(err),
        }
    }
    Ok(true)
}

/// Collapse edge `e` by absorbing the redundant endpoint (where the image
/// is the full vertex group) into the other endpoint, composing incident
/// maps through the edge isomorphism.
fn reduction_collapse(
    g: &GraphOfGroups,
    e: EdgeId,
    full_side_to: bool,
    budgets: &Budgets,
) -> Result<GraphOfGroups> {
    let edge = g.edge(e).clone();
    let (x, x_map) =
        if full_side_to { (edge.to, &edge.map_to) } else { (edge.from, &edge.map_from) };
    let (y, y_map) =
        if full_side_to { (edge.from, &edge.map_from) } else { (edge.to, &edge.map_to) };
    let x_spec = g.vertex(x).group.clone();
    // rewrite an element of G_x as an element of G_y through psi_y . psi_x^-1
    let through = |m: &Word| -> Result<Word> {
        let wit = nested_membership(m, &x_map.images, &x_spec, budgets, 0)?;
        let Some(wit) = wit else {
            return Err(Error::invalid(
                "reduction collapse: image unexpectedly misses an element",
            ));
        };
        let cword = Word(wit.factors.iter().map(|&(i, p)| Letter::Gen { gen: i, pow: p }).collect());
        base_groups::apply_hom(&y_map.images, &cword)
    };
    let mut vertices = Vec::new();
    let mut vmap: Vec<VertexId> = vec![VertexId(usize::MAX); g.vertices.len()];
    for old in g.vertex_ids() {
        if old == x {
            continue;
        }
        vmap[old.0] = VertexId(vertices.len());
        vertices.push(g.vertex(old).clone());
    }
    let mut edges = Vec::new();
    for (i, old) in g.edges.iter().enumerate() {
        if EdgeId(i) == e {
            continue;
        }
        let fix = |endpoint: VertexId, map: &EdgeMap| -> Result<(VertexId, EdgeMap)> {
            if endpoint == x {
                let images =
                    map.images.iter().map(&through).collect::<Result<Vec<_>>>()?;
                Ok((vmap[y.0], EdgeMap::new(images)))
            } else {
                Ok((vmap[endpoint.0], map.clone()))
            }
        };
        let (nf, mf) = fix(old.from, &old.map_from)?;
        let (nt, mt) = fix(old.to, &old.map_to)?;
        edges.push(Edge {
            name: old.name.clone(),
            letter: old.letter.clone(),
            from: nf,
            to: nt,
            group: old.group.clone(),
            map_from: mf,
            map_to: mt,
        });
    }
    let base = if g.base == x { vmap[y.0] } else { vmap[g.base.0] };
    GraphOfGroups::new(g.name.clone(), vertices, edges, base)
}
