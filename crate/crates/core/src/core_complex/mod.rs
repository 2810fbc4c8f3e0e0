//! Square complexes of groups and the finite core of the diagonal action
//! on a product of two Bass-Serre trees.
//!
//! Cells carry resolved stabilizer groups plus explicit lift witnesses: the
//! witness of an incidence `(face of sigma)` is the ambient element `h`
//! with `lift(sigma)|_face = h . lift(face-cell)`, so the incidence
//! monomorphism is `x -> h^-1 x h` and the twist of a composable pair is
//! `h_a^-1 h_b^-1 h_ab`, exactly the cocycle data of a complex of groups.
//! Everything downstream (presentations, Van Kampen cuts, enclosing
//! extraction) is computed from these witnesses and policed by fingerprint
//! checks.

mod build;
mod cut;
mod enclose;
mod present;
mod subdivide;
mod tracks;

pub use build::{build_core_complex, build_core_over, AlphabetBridge, PriorityEdge, PriorityInput};
pub use cut::{cut_along, prune_squares, CutDecomposition, CutEdge, CutVertex};
pub use enclose::{enclosing_of_pair, essential_curves, EnclosingData, Orbifold, OrbifoldPiece};
pub use present::complex_fundamental_presentation;
pub use subdivide::subdivide;
pub use tracks::{horizontal_tracks, vertex_links, LinkComponent, Track, TrackArc};

use crate::base_groups::GroupSpec;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{words_equal, ResolvedGroup, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

#[derive(Debug)]
pub struct CxVertex {
    pub name: String,
    pub group: ResolvedGroup,
}

#[derive(Debug)]
pub struct CxEdge {
    pub name: String,
    pub kind: EdgeKind,
    pub ends: [usize; 2],
    /// Lift witnesses toward each endpoint.
    pub h: [Word; 2],
    pub group: ResolvedGroup,
}

/// A 2-cell with cyclic boundary. Squares (arity 4) have sides 0 and 2
/// vertical and sides 1 and 3 horizontal; barycentric subdivision produces
/// triangles. `rev` marks traversal against the edge's own orientation.
/// Corner `k` sits between sides `k-1` and `k`.
#[derive(Debug)]
pub struct CxFace {
    pub name: String,
    pub band: usize,
    pub sides: Vec<(usize, bool)>,
    pub h: Vec<Word>,
    /// Corner vertex cells with composite witnesses (via the side that
    /// starts there).
    pub corners: Vec<(usize, Word)>,
    pub group: ResolvedGroup,
}

impl CxFace {
    pub fn arity(&self) -> usize {
        self.sides.len()
    }
}

/// The squares and horizontal edges contributed by one edge group of the
/// priority decomposition.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Band {
    pub priority_edge: usize,
    pub name: String,
    pub squares: Vec<usize>,
    pub horizontals: Vec<usize>,
    pub kind: BandKind,
}

#[derive(Debug, Clone, serde::Serialize)]
pub enum BandKind {
    /// Elliptic edge group: a single horizontal edge, no squares.
    Segment0,
    /// Translation action: an annulus of `k` squares.
    Annulus { k: usize },
    /// Dihedral action: a rectangle of `k` squares.
    Rectangle { k: usize },
}

#[derive(Debug)]
pub struct SquareComplexOfGroups {
    pub name: String,
    pub ambient: GroupSpec,
    pub verts: Vec<CxVertex>,
    pub edges: Vec<CxEdge>,
    pub faces: Vec<CxFace>,
    pub bands: Vec<Band>,
    /// Core track of each band (the band's vertical mid circle/segment, or
    /// the horizontal-edge midpoint for square-less bands).
    pub band_cores: Vec<Track>,
    /// Index of the priority band (the band of the priority splitting's
    /// designated edge).
    pub priority_band: usize,
}

impl SquareComplexOfGroups {
    pub fn cells_summary(&self) -> (usize, usize, usize) {
        (self.verts.len(), self.edges.len(), self.faces.len())
    }

    /// Side indices of a square boundary: 0,2 vertical; 1,3 horizontal.
    pub fn opposite_side(side: usize) -> usize {
        (side + 2) % 4
    }

    /// The corner indices flanking a side of an arity-n face: side k runs
    /// from corner k to corner k+1.
    pub fn side_corners_n(side: usize, arity: usize) -> (usize, usize) {
        (side, (side + 1) % arity)
    }

    /// Verify the cocycle condition on every composable incidence pair:
    /// the composite witness route via side `k` and via side `k-1` must
    /// differ by an element of the corner vertex group, and the incidence
    /// monomorphism images of every cell generator must be expressible in
    /// the face cell's group.
    pub fn verify_cocycle(&self, budgets: &Budgets) -> Result<Vec<Word>> {
        let mut twists = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let n = f.arity();
            for k in 0..n {
                let prev = (k + n - 1) % n;
                // route via side k (stored) against route via side prev
                let (vcell, stored) = &f.corners[k];
                let (e_prev, rev_prev) = f.sides[prev];
                let end_prev = if rev_prev { 0 } else { 1 }; // side prev ends at corner k
                let alt = f.h[prev].concat(&self.edges[e_prev].h[end_prev]);
                if self.edges[e_prev].ends[end_prev] != *vcell {
                    return Err(Error::CocycleViolation { a: fi, b: k });
                }
                let twist = stored.inverse().concat(&alt);
                let expr = self.verts[*vcell]
                    .group
                    .express(&twist, budgets)
                    .map_err(|_| Error::CocycleViolation { a: fi, b: k })?;
                if expr.is_none() {
                    return Err(Error::CocycleViolation { a: fi, b: k });
                }
                twists.push(reduce_ambient(&twist, &self.ambient, budgets)?);
            }
            // psi-images of face generators must land in every side group
            for k in 0..n {
                let (e, _) = f.sides[k];
                for gi in 0..spec_gen_count(&f.group.spec) {
                    let amb = f.group.evaluate(&gen_word(&f.group.spec, gi), budgets)?;
                    let moved = f.h[k].inverse().concat(&amb).concat(&f.h[k]);
                    if self.edges[e].group.express(&moved, budgets)?.is_none() {
                        return Err(Error::CocycleViolation { a: fi, b: k });
                    }
                }
            }
        }
        // edge groups include into endpoint groups
        for (ei, e) in self.edges.iter().enumerate() {
            for s in 0..2usize {
                for gi in 0..spec_gen_count(&e.group.spec) {
                    let amb = e.group.evaluate(&gen_word(&e.group.spec, gi), budgets)?;
                    let moved = e.h[s].inverse().concat(&amb).concat(&e.h[s]);
                    if self.verts[e.ends[s]].group.express(&moved, budgets)?.is_none() {
                        return Err(Error::CocycleViolation { a: ei, b: s });
                    }
                }
            }
        }
        Ok(twists)
    }

    /// Are all twist elements trivial? (True on all desk examples; checked,
    /// never assumed.)
    pub fn twists_trivial(&self, budgets: &Budgets) -> Result<bool> {
        for t in self.verify_cocycle(budgets)? {
            if !is_identity_ambient(&t, &self.ambient, budgets)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// DOT rendering of the 1-skeleton with horizontal/vertical styling and
    /// band coloring of square diagonals.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("graph core_complex {\n");
        for (i, v) in self.verts.iter().enumerate() {
            out.push_str(&format!(
                "  v{} [label=\"{}\\n{}\"];\n",
                i,
                v.name,
                v.group.spec.describe()
            ));
        }
        let palette = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Horizontal => "dashed",
                EdgeKind::Vertical => "solid",
            };
            out.push_str(&format!(
                "  v{} -- v{} [label=\"{}\", style={}];\n",
                e.ends[0], e.ends[1], e.name, style
            ));
        }
        for f in &self.faces {
            let color = palette[f.band % palette.len()];
            let (c0, c2) = (f.corners[0].0, f.corners[2].0);
            out.push_str(&format!(
                "  v{} -- v{} [label=\"{}\", style=dotted, color={}];\n",
                c0, c2, f.name, color
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn spec_gen_count(spec: &GroupSpec) -> usize {
    match spec {
        GroupSpec::GoGPi1(g) => crate::graph_of_groups::pi1_generators(g).len(),
        plain => plain.gen_count(),
    }
}

pub(crate) fn gen_word(spec: &GroupSpec, i: usize) -> Word {
    match spec {
        GroupSpec::GoGPi1(g) => crate::graph_of_groups::pi1_generators(g)[i].clone(),
        _ => Word::gen(i, 1),
    }
}

pub(crate) fn reduce_ambient(w: &Word, ambient: &GroupSpec, budgets: &Budgets) -> Result<Word> {
    match ambient {
        GroupSpec::GoGPi1(g) => crate::graph_of_groups::reduce_word(w, g, budgets, 0),
        plain => crate::base_groups::canonical_form(w, plain),
    }
}

pub(crate) fn is_identity_ambient(
    w: &Word,
    ambient: &GroupSpec,
    budgets: &Budgets,
) -> Result<bool> {
    crate::base_groups::is_identity(w, ambient, budgets)
}

pub(crate) fn ambient_equal(
    a: &Word,
    b: &Word,
    ambient: &GroupSpec,
    budgets: &Budgets,
) -> Result<bool> {
    match ambient {
        GroupSpec::GoGPi1(g) => words_equal(a, b, g, budgets),
        plain => {
            let q = a.concat(&b.inverse());
            crate::base_groups::is_identity(&q, plain, budgets)
        }
    }
}
