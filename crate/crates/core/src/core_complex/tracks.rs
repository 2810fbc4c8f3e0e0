//! Tracks: connected 1-subcomplexes of the barycentric subdivision that cut
//! the complex. Three families are produced combinatorially: band cores
//! (vertical mid circles/segments, built during assembly), horizontal
//! traversal circles/segments (entering a square through one vertical side
//! and leaving through the opposite one), and vertex links (corner walks,
//! the boundary pieces of the enclosing construction).
//!
//! Each track carries enough data to compute the image of its fundamental
//! group in the ambient group: traversed cell groups conjugated by frames,
//! plus a monodromy element for closed tracks.

use super::{ambient_equal, SquareComplexOfGroups};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::Word;
use serde::Serialize;

/// An arc of a track across a face, entering and leaving at side midpoints
/// (a core/traversal crossing) or turning a corner between adjacent sides
/// (a link crossing).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackArc {
    pub face: usize,
    pub enter_side: usize,
    pub exit_side: usize,
}

/// A track: the edges it cuts at their midpoints and the face arcs joining
/// consecutive cuts. For a closed track the arc list wraps around.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Track {
    pub name: String,
    pub cut_edges: Vec<usize>,
    pub arcs: Vec<TrackArc>,
    pub closed: bool,
}

impl Track {
    pub fn is_point(&self) -> bool {
        self.arcs.is_empty() && self.cut_edges.len() == 1
    }

    /// Generators of the image of the track's fundamental group in the
    /// ambient group: traversed cell groups in a consistent frame, plus the
    /// closing monodromy for circles.
    pub fn group_generators(
        &self,
        z: &SquareComplexOfGroups,
        budgets: &Budgets,
    ) -> Result<Vec<Word>> {
        let mut gens: Vec<Word> = Vec::new();
        let mut frame = Word::identity();
        let push_cell_group =
            |gens: &mut Vec<Word>, group: &crate::graph_of_groups::ResolvedGroup, frame: &Word| {
                for g in &group.gens_ambient {
                    gens.push(frame.concat(g).concat(&frame.inverse()));
                }
            };
        if self.arcs.is_empty() {
            // point track: the single cut edge's group
            let e = self.cut_edges[0];
            push_cell_group(&mut gens, &z.edges[e].group, &Word::identity());
            return Ok(gens);
        }
        // walk arcs; arcs[i] joins cut_edges[i] to cut_edges[(i+1) % n]
        for (i, arc) in self.arcs.iter().enumerate() {
            let e_in = self.cut_edges[i % self.cut_edges.len()];
            push_cell_group(&mut gens, &z.edges[e_in].group, &frame);
            let f = &z.faces[arc.face];
            debug_assert_eq!(f.sides[arc.enter_side].0, e_in);
            push_cell_group(
                &mut gens,
                &f.group,
                &frame.concat(&f.h[arc.enter_side].inverse()),
            );
            // frame update through the face: enter side -> exit side
            frame = frame
                .concat(&f.h[arc.enter_side].inverse())
                .concat(&f.h[arc.exit_side]);
        }
        if self.closed {
            // monodromy: frame returns to the starting edge cell
            gens.push(frame);
        } else {
            let last = *self.cut_edges.last().expect("segment track has edges");
            push_cell_group(&mut gens, &z.edges[last].group, &frame);
        }
        Ok(gens)
    }

    /// Does the track's image group equal the subgroup generated by the
    /// given ambient words? Mutual membership through the resolver.
    pub fn group_equals(
        &self,
        z: &SquareComplexOfGroups,
        other: &[Word],
        budgets: &Budgets,
    ) -> Result<bool> {
        let mine = self.group_generators(z, budgets)?;
        let a = crate::graph_of_groups::resolve_subgroup(&mine, &z.ambient, budgets, 0);
        let b = crate::graph_of_groups::resolve_subgroup(other, &z.ambient, budgets, 0);
        let (Ok(a), Ok(b)) = (a, b) else { return Ok(false) };
        for g in &b.gens_ambient {
            if a.express(g, budgets)?.is_none() {
                return Ok(false);
            }
        }
        for g in &a.gens_ambient {
            if b.express(g, budgets)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Horizontal traversal tracks: maximal runs through squares entering and
/// leaving at opposite vertical sides. Closed runs are circles; runs ending
/// at a boundary vertical side (one square only) are segments.
pub fn horizontal_tracks(z: &SquareComplexOfGroups) -> Result<Vec<Track>> {
    // vertical side incidences per edge: (face, side index)
    let mut at_edge: Vec<Vec<(usize, usize)>> = vec![Vec::new(); z.edges.len()];
    for (fi, f) in z.faces.iter().enumerate() {
        for side in [0usize, 2] {
            at_edge[f.sides[side].0].push((fi, side));
        }
    }
    for incs in &at_edge {
        if incs.len() > 2 {
            return Err(Error::invalid(
                "a vertical edge bounds more than two square sides; the link condition fails",
            ));
        }
    }
    let mut used = vec![false; z.faces.len()];
    let mut tracks = Vec::new();
    // segments first (start at boundary sides), then leftover circles
    let starts: Vec<(usize, usize)> = at_edge
        .iter()
        .filter(|incs| incs.len() == 1)
        .map(|incs| incs[0])
        .chain(z.faces.iter().enumerate().map(|(fi, _)| (fi, 0usize)))
        .collect();
    for (f0, s0) in starts {
        if used[f0] {
            continue;
        }
        let mut cut_edges = vec![z.faces[f0].sides[s0].0];
        let mut arcs = Vec::new();
        let (mut fi, mut enter) = (f0, s0);
        let closed;
        loop {
            used[fi] = true;
            let exit = SquareComplexOfGroups::opposite_side(enter);
            arcs.push(TrackArc { face: fi, enter_side: enter, exit_side: exit });
            let out_edge = z.faces[fi].sides[exit].0;
            // continue through the other incidence at that edge
            let incs = &at_edge[out_edge];
            let next = incs.iter().find(|&&(g, s)| (g, s) != (fi, exit)).copied();
            match next {
                Some((g, s)) if !used[g] => {
                    cut_edges.push(out_edge);
                    fi = g;
                    enter = s;
                }
                Some((g, s)) if (g, s) == (f0, s0) => {
                    closed = true;
                    break;
                }
                Some(_) => {
                    // re-entering a used face other than the start: the
                    // run closed up earlier through a doubled incidence
                    closed = true;
                    break;
                }
                None => {
                    cut_edges.push(out_edge);
                    closed = false;
                    break;
                }
            }
        }
        tracks.push(Track {
            name: format!("horiz{}", tracks.len()),
            cut_edges,
            arcs,
            closed,
        });
    }
    Ok(tracks)
}

/// A component of the link of a vertex: a circle, a segment, or an isolated
/// point (a stray edge-end).
#[derive(Debug, Clone, Serialize)]
pub struct LinkComponent {
    pub vertex: usize,
    pub kind: LinkKind,
    /// Edge-end nodes traversed: (edge id, end index).
    pub nodes: Vec<(usize, usize)>,
    /// Corner arcs traversed: (face, corner index).
    pub corners: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    Circle,
    Segment,
    Point,
}

impl LinkComponent {
    /// The track cutting just inside this link component: it cuts the
    /// component's edges near the vertex, crossing faces corner-wise.
    pub fn track(&self) -> Track {
        Track {
            name: format!("link(v{})", self.vertex),
            cut_edges: self.nodes.iter().map(|&(e, _)| e).collect(),
            arcs: self
                .corners
                .iter()
                .map(|&(f, corner)| TrackArc {
                    face: f,
                    enter_side: (corner + 3) % 4,
                    exit_side: corner,
                })
                .collect(),
            closed: matches!(self.kind, LinkKind::Circle),
        }
    }

    /// Image generators of the link piece: cell groups along the walk plus
    /// the turning monodromy for circles.
    pub fn group_generators(
        &self,
        z: &SquareComplexOfGroups,
        budgets: &Budgets,
    ) -> Result<Vec<Word>> {
        if matches!(self.kind, LinkKind::Point) {
            let (e, _) = self.nodes[0];
            return Ok(z.edges[e].group.gens_ambient.clone());
        }
        let mut gens = Vec::new();
        let mut frame = Word::identity();
        let start = self.nodes[0];
        // anchor the walk at the vertex instance reached through the first
        // edge-end
        let anchor = z.edges[start.0].h[start.1].clone();
        for (i, &(f, corner)) in self.corners.iter().enumerate() {
            let (e, end) = self.nodes[i % self.nodes.len()];
            for g in &z.edges[e].group.gens_ambient {
                gens.push(frame.concat(g).concat(&frame.inverse()));
            }
            let face = &z.faces[f];
            // entering side: the side ending at this corner; exiting side:
            // the side starting here
            let side_in = (corner + 3) % 4;
            let side_out = corner;
            let _ = (e, end);
            let face_frame = frame.concat(&face.h[side_in].inverse());
            for g in &face.group.gens_ambient {
                gens.push(face_frame.concat(g).concat(&face_frame.inverse()));
            }
            frame = frame.concat(&face.h[side_in].inverse()).concat(&face.h[side_out]);
        }
        match self.kind {
            LinkKind::Circle => {
                // the walk-closing element; anchor^-1 . frame . anchor lies
                // in the vertex group (checked by check_links)
                let _ = &anchor;
                gens.push(frame.clone());
            }
            LinkKind::Segment => {
                let &(e, _) = self.nodes.last().expect("segment link has nodes");
                for g in &z.edges[e].group.gens_ambient {
                    gens.push(frame.concat(g).concat(&frame.inverse()));
                }
            }
            LinkKind::Point => unreachable!(),
        }
        let _ = budgets;
        Ok(gens)
    }
}

/// Components of the link of every vertex: nodes are edge-ends at the
/// vertex, arcs are face corners there. The complex is locally a surface
/// with identifications exactly when every component is a circle, a
/// segment, or an isolated point with each node on at most two corners.
pub fn vertex_links(z: &SquareComplexOfGroups) -> Result<Vec<LinkComponent>> {
    let mut out = Vec::new();
    for v in 0..z.verts.len() {
        // nodes: (edge, end) with ends[end] == v
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        for (ei, e) in z.edges.iter().enumerate() {
            for end in 0..2 {
                if e.ends[end] == v {
                    nodes.push((ei, end));
                }
            }
        }
        // arcs: face corners at v; corner k joins side k-1's end-node to
        // side k's start-node
        let mut arcs: Vec<((usize, usize), (usize, usize), (usize, usize))> = Vec::new();
        for (fi, f) in z.faces.iter().enumerate() {
            for corner in 0..4usize {
                if f.corners[corner].0 != v {
                    continue;
                }
                let side_in = (corner + 3) % 4;
                let side_out = corner;
                let (e_in, rev_in) = f.sides[side_in];
                let (e_out, rev_out) = f.sides[side_out];
                let node_in = (e_in, if rev_in { 0 } else { 1 });
                let node_out = (e_out, if rev_out { 1 } else { 0 });
                arcs.push((node_in, node_out, (fi, corner)));
            }
        }
        // adjacency with multiplicity: each node may carry at most two arc
        // endpoints
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        let node_index = |n: (usize, usize)| nodes.iter().position(|&m| m == n);
        for (ai, &(nin, nout, _)) in arcs.iter().enumerate() {
            for n in [nin, nout] {
                let Some(i) = node_index(n) else {
                    return Err(Error::invalid("face corner names an absent edge-end"));
                };
                incident[i].push(ai);
            }
        }
        if incident.iter().any(|l| l.len() > 2) {
            return Err(Error::invalid(format!(
                "link of vertex {} is not a union of circles, segments and points",
                v
            )));
        }
        let mut node_used = vec![false; nodes.len()];
        let mut arc_used = vec![false; arcs.len()];
        // walk segments from degree-<2 nodes first, then circles
        let order: Vec<usize> = (0..nodes.len())
            .filter(|&i| incident[i].len() <= 1)
            .chain(0..nodes.len())
            .collect();
        for start in order {
            if node_used[start] {
                continue;
            }
            node_used[start] = true;
            if incident[start].is_empty() {
                out.push(LinkComponent {
                    vertex: v,
                    kind: LinkKind::Point,
                    nodes: vec![nodes[start]],
                    corners: Vec::new(),
                });
                continue;
            }
            let mut walk_nodes = vec![nodes[start]];
            let mut walk_corners = Vec::new();
            let mut cur = start;
            let kind;
            loop {
                let next_arc = incident[cur].iter().copied().find(|&a| !arc_used[a]);
                match next_arc {
                    None => {
                        kind = LinkKind::Segment;
                        break;
                    }
                    Some(a) => {
                        arc_used[a] = true;
                        let (nin, nout, fc) = arcs[a];
                        walk_corners.push(fc);
                        let other = if node_index(nin) == Some(cur) { nout } else { nin };
                        let oi = node_index(other).expect("validated above");
                        if oi == start && incident[start].iter().all(|&x| arc_used[x]) {
                            kind = LinkKind::Circle;
                            break;
                        }
                        if node_used[oi] && oi != start {
                            // a node revisited mid-walk would exceed degree 2
                            kind = LinkKind::Segment;
                            break;
                        }
                        node_used[oi] = true;
                        walk_nodes.push(nodes[oi]);
                        cur = oi;
                    }
                }
            }
            out.push(LinkComponent { vertex: v, kind, nodes: walk_nodes, corners: walk_corners });
        }
    }
    Ok(out)
}

/// Check the link condition on the whole complex and return the components.
pub fn check_links(z: &SquareComplexOfGroups, budgets: &Budgets) -> Result<Vec<LinkComponent>> {
    let comps = vertex_links(z)?;
    // the walk direction bookkeeping must close up: verify each circle's
    // monodromy lies in the vertex group
    for c in &comps {
        if matches!(c.kind, LinkKind::Circle) {
            let gens = c.group_generators(z, budgets)?;
            let m = gens.last().expect("circle monodromy");
            let anchor = &z.edges[c.nodes[0].0].h[c.nodes[0].1];
            let in_vertex = anchor.inverse().concat(m).concat(anchor);
            let stab = &z.verts[c.vertex].group;
            if stab.express(&in_vertex, budgets)?.is_none()
                && !ambient_equal(&in_vertex, &Word::identity(), &z.ambient, budgets)?
            {
                return Err(Error::invalid(format!(
                    "link circle at vertex {} has monodromy outside the vertex group",
                    c.vertex
                )));
            }
        }
    }
    Ok(comps)
}
