//! Assembly of the finite core Z of the diagonal action on the product of
//! the priority decomposition's tree with a second splitting's tree.
//!
//! Z is the union of the quotient cores of the priority vertex groups
//! acting on the second tree, glued along the invariant-line cores of the
//! priority edge groups crossed with an interval: vertical cells come from
//! the vertex cores, horizontal edges and squares from the bands. Cutting Z
//! along the priority band's core reproduces the priority splitting
//! exactly; this is tested, not assumed.

use super::tracks::{Track, TrackArc};
use super::{Band, BandKind, CxEdge, CxFace, CxVertex, EdgeKind, SquareComplexOfGroups};
use crate::base_groups::GroupSpec;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{reduce_word, resolve_subgroup, ResolvedGroup, Splitting, Word};
use crate::tree_action::tree::AxisWalker;
use crate::tree_action::{
    build_quotient_core, element_type, invariant_line_core, subgroup_type, CoreShape, ElementType,
    QuotientCore, SubgroupType, Tree, TreeEdge, TreeVertex,
};

/// Two-way word translation between the ambient alphabet and a splitting's
/// own fundamental-group alphabet.
pub struct AlphabetBridge<'a> {
    pub to_sp: &'a dyn Fn(&Word) -> Result<Word>,
    pub from_sp: &'a dyn Fn(&Word) -> Result<Word>,
}

impl<'a> AlphabetBridge<'a> {
    pub fn identity() -> AlphabetBridge<'static> {
        AlphabetBridge { to_sp: &|w: &Word| Ok(w.clone()), from_sp: &|w: &Word| Ok(w.clone()) }
    }
}

/// One edge of the priority decomposition, in ambient words.
#[derive(Debug, Clone)]
pub struct PriorityEdge {
    pub name: String,
    pub ends: (usize, usize),
    pub gens: Vec<Word>,
    /// Ambient element realized by crossing the edge (the stable letter for
    /// an HNN edge, the identity for a tree edge).
    pub crossing: Word,
}

/// The priority decomposition in ambient words.
#[derive(Debug, Clone)]
pub struct PriorityInput {
    pub name: String,
    pub vertex_names: Vec<String>,
    pub vertex_gens: Vec<Vec<Word>>,
    pub edges: Vec<PriorityEdge>,
}

impl PriorityInput {
    /// Read a one-edge splitting as a priority input, with its own alphabet
    /// as the ambient.
    pub fn from_splitting(sp: &Splitting) -> PriorityInput {
        let g = &sp.gog;
        let vertex_gens: Vec<Vec<Word>> = g
            .vertex_ids()
            .map(|v| {
                let path = g.tree_path(g.base, v);
                let spec = &g.vertex(v).group;
                let gens: Vec<Word> = match spec {
                    GroupSpec::GoGPi1(sub) => crate::graph_of_groups::pi1_generators(sub)
                        .into_iter()
                        .map(|w| {
                            let syl = Word::syl(v, w);
                            path.concat(&syl).concat(&path.inverse())
                        })
                        .collect(),
                    plain => (0..plain.gen_count())
                        .filter(|&i| {
                            !matches!(plain, GroupSpec::Finite(t) if i == t.identity())
                        })
                        .map(|i| {
                            let syl = Word::syl(v, Word::gen(i, 1));
                            path.concat(&syl).concat(&path.inverse())
                        })
                        .collect(),
                };
                gens
            })
            .collect();
        let e = sp.edge();
        let crossing = if e.is_loop() {
            Word::edge(crate::graph_of_groups::EdgeId(0), false)
        } else {
            Word::identity()
        };
        PriorityInput {
            name: g.name.clone(),
            vertex_names: g.vertices.iter().map(|v| v.name.clone()).collect(),
            vertex_gens,
            edges: vec![PriorityEdge {
                name: e.name.clone(),
                ends: (e.from.0, e.to.0),
                gens: sp.edge_group_words(),
                crossing,
            }],
        }
    }
}

struct CellIndex {
    /// (priority vertex, orbit) -> complex vertex id
    vert_of: Vec<Vec<usize>>,
    /// (priority vertex, orbit edge) -> complex edge id
    vedge_of: Vec<Vec<usize>>,
}

/// Build the core complex of the priority decomposition against the tree of
/// `second`. All stabilizers and witnesses land in the ambient alphabet via
/// the bridge.
pub fn build_core_over(
    priority: &PriorityInput,
    second: &Splitting,
    ambient: &GroupSpec,
    bridge: &AlphabetBridge,
    budgets: &Budgets,
) -> Result<SquareComplexOfGroups> {
    let to_sp = |ws: &[Word]| -> Result<Vec<Word>> { ws.iter().map(|w| (bridge.to_sp)(w)).collect() };
    let from_sp = bridge.from_sp;
    let tree = Tree::new(second, budgets);

    // quotient cores of the vertex groups
    let mut cores: Vec<QuotientCore> = Vec::new();
    for gens in &priority.vertex_gens {
        cores.push(build_quotient_core(&to_sp(gens)?, second, budgets, 0)?);
    }

    let mut verts: Vec<CxVertex> = Vec::new();
    let mut edges: Vec<CxEdge> = Vec::new();
    let mut faces: Vec<CxFace> = Vec::new();
    let mut index = CellIndex { vert_of: Vec::new(), vedge_of: Vec::new() };

    let resolve_ambient = |sp_words: &[Word]| -> Result<ResolvedGroup> {
        let amb_words: Vec<Word> =
            sp_words.iter().map(from_sp).collect::<Result<_>>()?;
        resolve_subgroup(&amb_words, ambient, budgets, 0)
    };

    for (pv, core) in cores.iter().enumerate() {
        let mut vmap = Vec::new();
        for (oi, ov) in core.verts.iter().enumerate() {
            vmap.push(verts.len());
            verts.push(CxVertex {
                name: format!("{}.o{}", priority.vertex_names[pv], oi),
                group: resolve_ambient(&ov.stab_gens)?,
            });
        }
        index.vert_of.push(vmap);
        let mut emap = Vec::new();
        for (oi, oe) in core.qedges.iter().enumerate() {
            emap.push(edges.len());
            edges.push(CxEdge {
                name: format!("{}.q{}", priority.vertex_names[pv], oi),
                kind: EdgeKind::Vertical,
                ends: [
                    index.vert_of[pv][oe.from_orbit],
                    index.vert_of[pv][oe.to_orbit],
                ],
                h: [from_sp(&oe.phi.inverse())?, from_sp(&oe.omega.inverse())?],
                group: resolve_ambient(&oe.stab_gens)?,
            });
        }
        index.vedge_of.push(emap);
    }

    // locate helpers: a tree vertex/edge in a priority vertex's core, with
    // an ambient witness
    let locate_vertex = |pv: usize, tv: &TreeVertex| -> Result<(usize, Word)> {
        let (orbit, eta) = cores[pv].locate_vertex(tv)?.ok_or_else(|| Error::BudgetExhausted {
            context: format!(
                "band cell not located in the core of `{}`",
                priority.vertex_names[pv]
            ),
        })?;
        Ok((index.vert_of[pv][orbit], from_sp(&eta)?))
    };
    let locate_edge = |pv: usize, te: &TreeEdge| -> Result<(usize, Word, Word)> {
        let (orbit, eta) = cores[pv].locate_edge(te)?.ok_or_else(|| Error::BudgetExhausted {
            context: format!(
                "band edge not located in the core of `{}`",
                priority.vertex_names[pv]
            ),
        })?;
        Ok((index.vedge_of[pv][orbit], from_sp(&eta)?, eta))
    };

    let mut bands: Vec<Band> = Vec::new();
    let mut band_cores: Vec<Track> = Vec::new();

    for (pe, edge) in priority.edges.iter().enumerate() {
        let e_sp = to_sp(&edge.gens)?;
        let gamma = &edge.crossing;
        let gamma_sp = (bridge.to_sp)(gamma)?;
        let (src, dst) = edge.ends;
        match subgroup_type(&e_sp, second, budgets)? {
            SubgroupType::Elliptic { fixed } => {
                // a single horizontal edge; no squares
                let (end0, eta0) = locate_vertex(src, &fixed)?;
                let moved = tree.act(&gamma_sp.inverse(), &fixed)?;
                let (end1, eta1) = locate_vertex(dst, &moved)?;
                let h0 = eta0.inverse();
                let h1 = gamma.concat(&eta1.inverse());
                let eid = edges.len();
                edges.push(CxEdge {
                    name: format!("b{}.h0", pe),
                    kind: EdgeKind::Horizontal,
                    ends: [end0, end1],
                    h: [h0, h1],
                    group: resolve_subgroup(&edge.gens, ambient, budgets, 0)?,
                });
                bands.push(Band {
                    priority_edge: pe,
                    name: edge.name.clone(),
                    squares: Vec::new(),
                    horizontals: vec![eid],
                    kind: BandKind::Segment0,
                });
                band_cores.push(Track {
                    name: format!("core(b{})", pe),
                    cut_edges: vec![eid],
                    arcs: Vec::new(),
                    closed: false,
                });
            }
            SubgroupType::Hyperbolic { .. } => {
                let ilc = invariant_line_core(&e_sp, second, budgets)?;
                let (k, base, step, dihedral) = match &ilc.shape {
                    CoreShape::Circle { k, base, monodromy } => {
                        (*k, base.clone(), monodromy.clone(), false)
                    }
                    CoreShape::Segment { k, base, translation, .. } => {
                        (*k, base.clone(), translation.clone(), true)
                    }
                    CoreShape::Vertex { .. } => {
                        return Err(Error::invalid("hyperbolic band with a vertex core"))
                    }
                };
                // walk the axis from the band's own base point
                let et = element_type(&step, second, budgets)?;
                let ElementType::Hyperbolic { length, base_point, period } = et else {
                    return Err(Error::invalid("band step element is not hyperbolic"));
                };
                let translation_len = length;
                let walker =
                    AxisWalker::new(Tree::new(second, budgets), base_point, period, length);
                let offset = walker
                    .position_of(&base, budgets.span.max(2 * translation_len))?
                    .ok_or_else(|| Error::invalid("band base point not on its own axis"))?;

                let n_h = if dihedral { k + 1 } else { k };
                let mut horiz: Vec<usize> = Vec::new();
                let monodromy_amb = from_sp(&step)?;
                for p in 0..n_h {
                    let tv = walker.vertex(offset + p as i64)?;
                    let (end0, eta0) = locate_vertex(src, &tv)?;
                    let moved = tree.act(&gamma_sp.inverse(), &tv)?;
                    let (end1, eta1) = locate_vertex(dst, &moved)?;
                    // stabilizer of the axis vertex inside the edge group
                    let mut stab = ilc.fiber.clone();
                    if dihedral {
                        if let CoreShape::Segment { endpoint_stabilizers, .. } = &ilc.shape {
                            if p == 0 {
                                stab = endpoint_stabilizers[0].clone();
                            } else if p == k {
                                stab = endpoint_stabilizers[1].clone();
                            }
                        }
                    }
                    let eid = edges.len();
                    horiz.push(eid);
                    edges.push(CxEdge {
                        name: format!("b{}.h{}", pe, p),
                        kind: EdgeKind::Horizontal,
                        ends: [end0, end1],
                        h: [eta0.inverse(), gamma.concat(&eta1.inverse())],
                        group: resolve_ambient(&stab)?,
                    });
                }
                let mut squares: Vec<usize> = Vec::new();
                let mut arcs: Vec<TrackArc> = Vec::new();
                for p in 0..k {
                    let te = walker.edge(offset + p as i64)?;
                    let (v0, nu0, _) = locate_edge(src, &te)?;
                    let moved = tree.act_edge(&gamma_sp.inverse(), &te)?;
                    let (v1, nu1, _) = locate_edge(dst, &moved)?;
                    // orientation of the tree edge relative to the axis walk
                    let (efrom, _eto) = tree.edge_endpoints(&te)?;
                    let axis_lo = walker.vertex(offset + p as i64)?;
                    let from_is_lo = tree.vertex_eq(&efrom, &axis_lo)?;
                    // cycle: corner0 = (p, src), corner1 = (p+1, src),
                    //        corner2 = (p+1, dst), corner3 = (p, dst)
                    let rev0 = !from_is_lo; // side 0 runs lo -> hi
                    let rev2 = from_is_lo; // side 2 runs hi -> lo
                    let top = if !dihedral && p + 1 == k { 0 } else { p + 1 };
                    let wrap = !dihedral && p + 1 == k;
                    let h_top = if wrap { monodromy_amb.clone() } else { Word::identity() };
                    let h0 = nu0.inverse();
                    let h2 = gamma.concat(&nu1.inverse());
                    let corner_lo_src = edge_corner(&edges, horiz[p], 0);
                    let corner_hi_src = edge_corner(&edges, horiz[top], 0);
                    let corner_hi_dst = edge_corner(&edges, horiz[top], 1);
                    let corner_lo_dst = edge_corner(&edges, horiz[p], 1);
                    // corner witness via the side that starts there
                    let a0 = h0.concat(&edges[v0].h[if rev0 { 1 } else { 0 }]);
                    let a1 = h_top.concat(&edges[horiz[top]].h[0]);
                    let a2 = h2.concat(&edges[v1].h[if rev2 { 1 } else { 0 }]);
                    let a3 = edges[horiz[p]].h[1].clone();
                    let fid = faces.len();
                    faces.push(CxFace {
                        name: format!("b{}.sq{}", pe, p),
                        band: bands.len(),
                        sides: vec![
                            (v0, rev0),
                            (horiz[top], false),
                            (v1, rev2),
                            (horiz[p], true),
                        ],
                        h: vec![h0, h_top, h2, Word::identity()],
                        corners: vec![
                            (corner_lo_src, a0),
                            (corner_hi_src, a1),
                            (corner_hi_dst, a2),
                            (corner_lo_dst, a3),
                        ],
                        group: resolve_ambient(&ilc.fiber)?,
                    });
                    squares.push(fid);
                    arcs.push(TrackArc { face: fid, enter_side: 3, exit_side: 1 });
                }
                band_cores.push(Track {
                    name: format!("core(b{})", pe),
                    cut_edges: horiz.clone(),
                    arcs,
                    closed: !dihedral,
                });
                bands.push(Band {
                    priority_edge: pe,
                    name: edge.name.clone(),
                    squares,
                    horizontals: horiz,
                    kind: if dihedral {
                        BandKind::Rectangle { k }
                    } else {
                        BandKind::Annulus { k }
                    },
                });
            }
        }
    }

    let z = SquareComplexOfGroups {
        name: format!("core({} x {})", priority.name, second.gog.name),
        ambient: ambient.clone(),
        verts,
        edges,
        faces,
        bands,
        band_cores,
        priority_band: 0,
    };
    Ok(z)
}

fn edge_corner(edges: &[CxEdge], e: usize, end: usize) -> usize {
    edges[e].ends[end]
}

/// Core complex of a hyperbolic-hyperbolic pair of splittings with the
/// stated priority. `e1_in_s2`/`e2_in_s1` express each edge group in the
/// other splitting's alphabet for the pair check.
#[allow(clippy::too_many_arguments)]
pub fn build_core_complex(
    s1: &Splitting,
    s2: &Splitting,
    ambient: &GroupSpec,
    s1_bridge: &AlphabetBridge,
    s2_bridge: &AlphabetBridge,
    e1_in_s2: &[Word],
    e2_in_s1: &[Word],
    budgets: &Budgets,
) -> Result<SquareComplexOfGroups> {
    let first = subgroup_type(e1_in_s2, s2, budgets)?;
    let second_t = subgroup_type(e2_in_s1, s1, budgets)?;
    if first.is_elliptic() || second_t.is_elliptic() {
        return Err(Error::NotHyperbolicPair {
            detail: format!(
                "pair ({}, {}) is {}{}",
                s1.provenance,
                s2.provenance,
                if first.is_elliptic() { "E" } else { "H" },
                if second_t.is_elliptic() { "E" } else { "H" },
            ),
        });
    }
    let mut input = PriorityInput::from_splitting(s1);
    // rewrite the priority data into ambient words
    for gens in input.vertex_gens.iter_mut() {
        for w in gens.iter_mut() {
            *w = (s1_bridge.from_sp)(w)?;
        }
    }
    for e in input.edges.iter_mut() {
        for w in e.gens.iter_mut() {
            *w = (s1_bridge.from_sp)(w)?;
        }
        e.crossing = (s1_bridge.from_sp)(&e.crossing)?;
    }
    let mut z = build_core_over(&input, s2, ambient, s2_bridge, budgets)?;
    z.name = format!("core({} x {})", s1.provenance, s2.provenance);
    Ok(z)
}

pub(crate) fn reduce_in_ambient(
    w: &Word,
    ambient: &GroupSpec,
    budgets: &Budgets,
) -> Result<Word> {
    match ambient {
        GroupSpec::GoGPi1(g) => reduce_word(w, g, budgets, 0),
        plain => crate::base_groups::canonical_form(w, plain),
    }
}
