//! Van Kampen cutting of a core complex along tracks, and square pruning.
//!
//! Cutting along a separating track yields a graph of groups: one vertex
//! per complementary component (its group the framed image of the
//! component's fundamental group) and one edge carrying the track group.
//! Pruning removes all squares by elementary collapses through free
//! vertical faces with matching stabilizers, then collapses the remaining
//! vertical edges, leaving a decomposition over the horizontal edges whose
//! vertex groups are elliptic on the priority tree.

use super::tracks::Track;
use super::{ambient_equal, SquareComplexOfGroups};
use crate::base_groups::GroupSpec;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{
    resolve_subgroup, Edge, EdgeMap, GraphOfGroups, ResolvedGroup, Vertex, VertexId, Word,
};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A piece of the complex cut along tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Piece {
    Vert(usize),
    /// Whole edge, or the half toward the given end.
    Edge(usize, Option<usize>),
    /// Whole face, or the half containing the given side (for an
    /// opposite-side chord).
    Face(usize, Option<usize>),
}

struct PieceGraph {
    nodes: Vec<Piece>,
    /// adjacency with frame transition: crossing from `a` to `b` multiplies
    /// the frame by `frame_mul`
    arcs: Vec<(usize, usize, Word)>,
}

fn build_piece_graph(z: &SquareComplexOfGroups, track: &Track) -> Result<PieceGraph> {
    let cut: std::collections::BTreeSet<usize> = track.cut_edges.iter().copied().collect();
    let mut chord: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for a in &track.arcs {
        if a.exit_side != SquareComplexOfGroups::opposite_side(a.enter_side) {
            return Err(Error::invalid("cut_along expects opposite-side chords"));
        }
        chord.insert(a.face, (a.enter_side.min(a.exit_side), a.enter_side.max(a.exit_side)));
    }
    let mut nodes: Vec<Piece> = Vec::new();
    for v in 0..z.verts.len() {
        nodes.push(Piece::Vert(v));
    }
    for e in 0..z.edges.len() {
        if cut.contains(&e) {
            nodes.push(Piece::Edge(e, Some(0)));
            nodes.push(Piece::Edge(e, Some(1)));
        } else {
            nodes.push(Piece::Edge(e, None));
        }
    }
    for f in 0..z.faces.len() {
        if let Some(&(s0, s1)) = chord.get(&f) {
            // halves named by the uncut sides they contain
            let (h0, h1) = match (s0, s1) {
                (1, 3) => (0usize, 2usize),
                (0, 2) => (1, 3),
                _ => return Err(Error::invalid("chord must join opposite sides")),
            };
            nodes.push(Piece::Face(f, Some(h0)));
            nodes.push(Piece::Face(f, Some(h1)));
        } else {
            nodes.push(Piece::Face(f, None));
        }
    }
    let idx = |p: Piece| nodes.iter().position(|&q| q == p).expect("piece indexed");

    let mut arcs: Vec<(usize, usize, Word)> = Vec::new();
    // edge pieces touch their endpoint vertices
    for e in 0..z.edges.len() {
        for end in 0..2usize {
            let piece = if cut.contains(&e) { Piece::Edge(e, Some(end)) } else { Piece::Edge(e, None) };
            // frame: vertex -> edge multiplies by h^-1
            arcs.push((
                idx(Piece::Vert(z.edges[e].ends[end])),
                idx(piece),
                z.edges[e].h[end].inverse(),
            ));
        }
    }
    // face pieces touch side edges and corner vertices
    for (f, face) in z.faces.iter().enumerate() {
        let halves: Vec<Option<usize>> = match chord.get(&f) {
            Some(&(s0, s1)) => match (s0, s1) {
                (1, 3) => vec![Some(0), Some(2)],
                _ => vec![Some(1), Some(3)],
            },
            None => vec![None],
        };
        for half in halves {
            let fpiece = idx(Piece::Face(f, half));
            let contains_side = |s: usize| -> bool {
                match half {
                    None => true,
                    Some(hs) => {
                        // the half named by side hs contains side hs fully
                        // and the flanking halves of the two cut sides
                        s == hs
                    }
                }
            };
            let contains_corner = |c: usize| -> bool {
                match half {
                    None => true,
                    // corners flanking the contained side: side hs runs
                    // corner hs -> hs+1
                    Some(hs) => c == hs || c == (hs + 1) % 4,
                }
            };
            for s in 0..4usize {
                let (e, _rev) = face.sides[s];
                if contains_side(s) {
                    let epiece =
                        if cut.contains(&e) { None } else { Some(idx(Piece::Edge(e, None))) };
                    if let Some(ep) = epiece {
                        // face -> edge multiplies by h[s] (edge instance =
                        // faceframe . h[s] . lift(edge))
                        arcs.push((fpiece, ep, face.h[s].clone()));
                    }
                } else if half.is_some() {
                    // the half still touches the near halves of its two cut
                    // sides
                    let hs = half.unwrap();
                    let (c_lo, c_hi) = (hs, (hs + 1) % 4);
                    for (cut_side, corner) in
                        [((hs + 3) % 4, c_lo), ((hs + 1) % 4, c_hi)]
                    {
                        if s != cut_side {
                            continue;
                        }
                        let (ce, crev) = face.sides[cut_side];
                        if !cut.contains(&ce) {
                            // chord on a side the track does not cut
                            return Err(Error::NonSeparating);
                        }
                        // which half of the cut edge: the end at `corner`
                        let start_end = if crev { 1 } else { 0 };
                        let end_at_corner = if corner == SquareComplexOfGroups::side_corners(cut_side).0
                        {
                            start_end
                        } else {
                            1 - start_end
                        };
                        arcs.push((
                            fpiece,
                            idx(Piece::Edge(ce, Some(end_at_corner))),
                            face.h[cut_side].clone(),
                        ));
                    }
                }
            }
            for c in 0..4usize {
                if contains_corner(c) {
                    let (v, ref a) = face.corners[c];
                    arcs.push((fpiece, idx(Piece::Vert(v)), a.clone()));
                }
            }
        }
    }
    Ok(PieceGraph { nodes, arcs })
}

/// Connected components with framed generator lists.
fn component_images(
    z: &SquareComplexOfGroups,
    pg: &PieceGraph,
    budgets: &Budgets,
) -> Result<(Vec<usize>, Vec<Vec<Word>>, Vec<Word>)> {
    let n = pg.nodes.len();
    let mut comp = vec![usize::MAX; n];
    let mut frames: Vec<Word> = vec![Word::identity(); n];
    let mut images: Vec<Vec<Word>> = Vec::new();
    let mut adj: Vec<Vec<(usize, Word, bool)>> = vec![Vec::new(); n];
    for (a, b, w) in &pg.arcs {
        adj[*a].push((*b, w.clone(), false));
        adj[*b].push((*a, w.inverse(), true));
    }
    let mut comp_base_frames: Vec<Word> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let cid = images.len();
        let mut gens: Vec<Word> = Vec::new();
        let mut queue = std::collections::VecDeque::from([start]);
        comp[start] = cid;
        frames[start] = Word::identity();
        let mut members = vec![start];
        while let Some(x) = queue.pop_front() {
            for (y, w, _) in adj[x].clone() {
                if comp[y] == usize::MAX {
                    comp[y] = cid;
                    frames[y] = frames[x].concat(&w);
                    members.push(y);
                    queue.push_back(y);
                } else {
                    // non-tree adjacency: monodromy generator
                    let via = frames[x].concat(&w);
                    let m = via.concat(&frames[y].inverse());
                    let m = super::reduce_ambient(&m, &z.ambient, budgets)?;
                    if !m.is_empty() {
                        gens.push(m);
                    }
                }
            }
        }
        for &x in &members {
            let group = match pg.nodes[x] {
                Piece::Vert(v) => &z.verts[v].group,
                Piece::Edge(e, _) => &z.edges[e].group,
                Piece::Face(f, _) => &z.faces[f].group,
            };
            for g in &group.gens_ambient {
                let framed = frames[x].concat(g).concat(&frames[x].inverse());
                gens.push(super::reduce_ambient(&framed, &z.ambient, budgets)?);
            }
        }
        // dedupe exact repeats to keep resolution small
        let mut unique: Vec<Word> = Vec::new();
        'g: for g in gens {
            if g.is_empty() {
                continue;
            }
            for u in &unique {
                if u == &g {
                    continue 'g;
                }
            }
            unique.push(g);
        }
        images.push(unique);
        comp_base_frames.push(Word::identity());
    }
    let _ = comp_base_frames;
    Ok((comp, images, frames))
}

#[derive(Debug)]
pub struct CutVertex {
    pub name: String,
    pub gens: Vec<Word>,
    pub resolved: ResolvedGroup,
}

#[derive(Debug)]
pub struct CutEdge {
    pub name: String,
    pub gens: Vec<Word>,
    pub resolved: ResolvedGroup,
    pub ends: (usize, usize),
    /// Attachment frames: conjugating the track group by these lands it in
    /// the respective endpoint component images.
    pub attach: [Word; 2],
    /// Ambient element realized by crossing the cut.
    pub crossing: Word,
}

/// A one-edge decomposition obtained by cutting, with enough data to
/// assemble a graph of groups or to feed the next refinement round.
#[derive(Debug)]
pub struct CutDecomposition {
    pub name: String,
    pub verts: Vec<CutVertex>,
    pub edges: Vec<CutEdge>,
}

impl CutDecomposition {
    /// Assemble an honest graph of groups: resolved vertex groups, edge
    /// monomorphisms through the attachment frames.
    pub fn to_gog(&self, ambient: &GroupSpec, budgets: &Budgets) -> Result<Arc<GraphOfGroups>> {
        let vertices: Vec<Vertex> = self
            .verts
            .iter()
            .map(|v| Vertex {
                name: v.name.clone(),
                group: v.resolved.spec.clone(),
                gen_names: (0..v.resolved.spec.gen_count())
                    .map(|i| v.resolved.spec.gen_name(i).to_string())
                    .collect(),
            })
            .collect();
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let spec = e.resolved.spec.clone();
            if !spec.is_plain() {
                return Err(Error::UnsupportedBackend {
                    op: "cut_along",
                    detail: "track group did not resolve to a plain backend".into(),
                });
            }
            let mut map_from = Vec::new();
            let mut map_to = Vec::new();
            for k in 0..spec.gen_count() {
                if let GroupSpec::Finite(t) = &spec {
                    if k == t.identity() {
                        map_from.push(Word::identity());
                        map_to.push(Word::identity());
                        continue;
                    }
                }
                let amb = e.resolved.evaluate(&Word::gen(k, 1), budgets)?;
                for (side, out) in [(0usize, &mut map_from), (1, &mut map_to)] {
                    let conj = &e.attach[side];
                    let moved = conj.concat(&amb).concat(&conj.inverse());
                    let target =
                        &self.verts[if side == 0 { e.ends.0 } else { e.ends.1 }].resolved;
                    let img = target.express(&moved, budgets)?.ok_or_else(|| {
                        Error::BudgetExhausted {
                            context: format!(
                                "cut edge `{}` group not expressible in its endpoint component",
                                e.name
                            ),
                        }
                    })?;
                    out.push(img);
                }
            }
            edges.push(Edge {
                name: e.name.clone(),
                letter: format!("t{}", i),
                from: VertexId(e.ends.0),
                to: VertexId(e.ends.1),
                group: spec,
                map_from: EdgeMap::new(map_from),
                map_to: EdgeMap::new(map_to),
            });
        }
        Ok(Arc::new(GraphOfGroups::new(self.name.clone(), vertices, edges, VertexId(0))?))
    }

    /// Repackage as a priority input for the next refinement round.
    pub fn to_priority_input(&self) -> super::build::PriorityInput {
        super::build::PriorityInput {
            name: self.name.clone(),
            vertex_names: self.verts.iter().map(|v| v.name.clone()).collect(),
            vertex_gens: self.verts.iter().map(|v| v.gens.clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| super::build::PriorityEdge {
                    name: e.name.clone(),
                    ends: e.ends,
                    gens: e
                        .gens
                        .iter()
                        .map(|g| e.attach[0].concat(g).concat(&e.attach[0].inverse()))
                        .collect(),
                    crossing: e.crossing.clone(),
                })
                .collect(),
        }
    }
}

/// Cut the complex along one separating track.
pub fn cut_along(
    z: &SquareComplexOfGroups,
    track: &Track,
    budgets: &Budgets,
) -> Result<CutDecomposition> {
    let pg = build_piece_graph(z, track)?;
    let (comp, images, frames) = component_images(z, &pg, budgets)?;
    let ncomp = images.len();
    if ncomp > 2 {
        return Err(Error::NonSeparating);
    }
    let track_gens = track.group_generators(z, budgets)?;
    let track_resolved = resolve_subgroup(&track_gens, &z.ambient, budgets, 0)?;
    // the two sides of the cut at the first cut edge
    let e0 = track.cut_edges[0];
    let side_piece = |end: usize| -> usize {
        pg.nodes
            .iter()
            .position(|&p| p == Piece::Edge(e0, Some(end)))
            .expect("cut edge halves exist")
    };
    let (p0, p1) = (side_piece(0), side_piece(1));
    let (c0, c1) = (comp[p0], comp[p1]);
    let verts: Vec<CutVertex> = images
        .iter()
        .enumerate()
        .map(|(i, gens)| {
            Ok(CutVertex {
                name: format!("side{}", i),
                gens: gens.clone(),
                resolved: resolve_subgroup(gens, &z.ambient, budgets, 0)?,
            })
        })
        .collect::<Result<_>>()?;
    // attachment frames: the track group placed in each side's frame; the
    // track anchors at the lift of e0, the component frame of the half-edge
    // piece carries it into the component's base frame
    let attach0 = frames[p0].clone();
    let attach1 = frames[p1].clone();
    // crossing element: same-component cut (HNN) realizes a stable letter
    let crossing = if c0 == c1 {
        super::reduce_ambient(
            &frames[p0].concat(&frames[p1].inverse()),
            &z.ambient,
            budgets,
        )?
    } else {
        Word::identity()
    };
    Ok(CutDecomposition {
        name: format!("{} / {}", z.name, track.name),
        verts,
        edges: vec![CutEdge {
            name: track.name.clone(),
            gens: track_gens,
            resolved: track_resolved,
            ends: (c0, c1),
            attach: [attach0, attach1],
            crossing,
        }],
    })
}

/// Remove all squares by elementary collapses through free vertical sides
/// with matching stabilizers, then collapse the remaining vertical edges.
/// The result is a decomposition over the horizontal edges.
pub fn prune_squares(
    z: &SquareComplexOfGroups,
    budgets: &Budgets,
) -> Result<CutDecomposition> {
    let mut face_alive: Vec<bool> = vec![true; z.faces.len()];
    let mut edge_alive: Vec<bool> = vec![true; z.edges.len()];
    loop {
        // vertical side incidences among live cells
        let mut incidences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); z.edges.len()];
        for (fi, f) in z.faces.iter().enumerate() {
            if !face_alive[fi] {
                continue;
            }
            for s in 0..4usize {
                incidences[f.sides[s].0].push((fi, s));
            }
        }
        let mut collapsed = false;
        'faces: for (fi, f) in z.faces.iter().enumerate() {
            if !face_alive[fi] {
                continue;
            }
            for s in [0usize, 2] {
                let (e, _) = f.sides[s];
                if !edge_alive[e] || incidences[e].len() != 1 {
                    continue;
                }
                // stabilizer equality: the face group must fill the edge
                // group through the incidence
                let mut onto = true;
                for g in &z.edges[e].group.gens_ambient {
                    let moved = f.h[s].concat(g).concat(&f.h[s].inverse());
                    if f.group.express(&moved, budgets)?.is_none() {
                        onto = false;
                        break;
                    }
                }
                if !onto {
                    continue;
                }
                face_alive[fi] = false;
                edge_alive[e] = false;
                collapsed = true;
                break 'faces;
            }
        }
        if !collapsed {
            break;
        }
    }
    if face_alive.iter().any(|&a| a) {
        return Err(Error::NotAForest {
            detail: format!(
                "{} squares remain with no free matching vertical side",
                face_alive.iter().filter(|&&a| a).count()
            ),
        });
    }
    // group vertices along the remaining vertical edges
    let pg = {
        let mut nodes: Vec<Piece> = Vec::new();
        for v in 0..z.verts.len() {
            nodes.push(Piece::Vert(v));
        }
        let mut arcs = Vec::new();
        for (e, edge) in z.edges.iter().enumerate() {
            if !edge_alive[e] || edge.kind != super::EdgeKind::Vertical {
                continue;
            }
            nodes.push(Piece::Edge(e, None));
            let ei = nodes.len() - 1;
            for end in 0..2usize {
                arcs.push((
                    nodes.iter().position(|&p| p == Piece::Vert(edge.ends[end])).unwrap(),
                    ei,
                    edge.h[end].inverse(),
                ));
            }
        }
        PieceGraph { nodes, arcs }
    };
    let (comp, images, frames) = component_images(z, &pg, budgets)?;
    let verts: Vec<CutVertex> = images
        .iter()
        .enumerate()
        .map(|(i, gens)| {
            Ok(CutVertex {
                name: format!("p{}", i),
                gens: gens.clone(),
                resolved: resolve_subgroup(gens, &z.ambient, budgets, 0)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for (e, edge) in z.edges.iter().enumerate() {
        if edge.kind != super::EdgeKind::Horizontal {
            continue;
        }
        let piece_of = |v: usize| pg.nodes.iter().position(|&p| p == Piece::Vert(v)).unwrap();
        let (pa, pb) = (piece_of(edge.ends[0]), piece_of(edge.ends[1]));
        let gens = edge.group.gens_ambient.clone();
        let resolved = resolve_subgroup(&gens, &z.ambient, budgets, 0)?;
        // attachment: edge instance sits at h[end]^-1 from each endpoint
        // vertex; compose with the component frame of the endpoint
        let attach0 = frames[pa].concat(&edge.h[0].inverse());
        let attach1 = frames[pb].concat(&edge.h[1].inverse());
        let crossing = super::reduce_ambient(
            &frames[pa]
                .concat(&edge.h[0].inverse())
                .concat(&edge.h[1])
                .concat(&frames[pb].inverse()),
            &z.ambient,
            budgets,
        )?;
        edges.push(CutEdge {
            name: edge.name.clone(),
            gens,
            resolved,
            ends: (comp[pa], comp[pb]),
            attach: [attach0, attach1],
            crossing,
        });
        let _ = ambient_equal;
    }
    Ok(CutDecomposition { name: format!("{} pruned", z.name), verts, edges })
}
