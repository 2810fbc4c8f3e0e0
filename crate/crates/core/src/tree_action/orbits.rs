//! Quotient graph-of-groups cores of subgroup actions on Bass-Serre trees.
//!
//! Orbits of tree cells are discovered by lazy exploration of the axes of
//! hyperbolic witnesses, identified and stabilized through a bounded ball
//! of the acting subgroup. The assembled quotient is a graph of groups
//! whose fundamental group is the acting subgroup; translation between
//! ambient words and quotient-graph words runs both ways and every
//! resolution is verified by evaluating expressions back into the ambient
//! group.

use super::tree::{AxisWalker, Tree, TreeEdge, TreeVertex};
use super::{element_type, subgroup_type, ElementType, SubgroupType};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::base_groups::GroupSpec;
use crate::graph_of_groups::{
    self, nested_membership, reduce_word, resolve_subgroup, words_equal, Edge, EdgeId, EdgeMap,
    GraphOfGroups, Letter, ResolvedGroup, Splitting, Vertex, VertexId, Word, WordTransport,
};
use std::sync::Arc;

#[derive(Debug)]
pub struct OrbitVertex {
    pub rep: TreeVertex,
    pub stab_gens: Vec<Word>,
    pub resolved: ResolvedGroup,
}

#[derive(Debug)]
pub struct OrbitEdge {
    pub rep: TreeEdge,
    pub stab_gens: Vec<Word>,
    pub resolved: ResolvedGroup,
    pub from_orbit: usize,
    pub to_orbit: usize,
    /// `phi . from(rep) = verts[from_orbit].rep`
    pub phi: Word,
    /// `omega . to(rep) = verts[to_orbit].rep`
    pub omega: Word,
    /// Ambient element realizing the quotient edge crossing: `phi . omega^-1`.
    pub sigma: Word,
}

/// The quotient core of a subgroup action on the tree of a splitting.
#[derive(Debug)]
pub struct QuotientCore {
    pub sp: Splitting,
    pub budgets: Budgets,
    pub h_gens: Vec<Word>,
    pub ball: Vec<Word>,
    pub verts: Vec<OrbitVertex>,
    pub qedges: Vec<OrbitEdge>,
    pub graph: Arc<GraphOfGroups>,
    region_verts: Vec<TreeVertex>,
    vassign: Vec<(usize, Word)>,
    region_edges: Vec<TreeEdge>,
    eassign: Vec<(usize, Word)>,
}

fn ball_of(gens: &[Word], sp: &Splitting, budgets: &Budgets) -> Result<Vec<Word>> {
    let g = &sp.gog;
    let mut letters: Vec<Word> = Vec::new();
    for w in gens {
        letters.push(w.clone());
        letters.push(w.inverse());
    }
    let mut seen: Vec<Word> = vec![Word::identity()];
    let mut frontier: Vec<Word> = vec![Word::identity()];
    for _ in 0..budgets.ball_len {
        let mut next: Vec<Word> = Vec::new();
        for f in &frontier {
            for l in &letters {
                if seen.len() + next.len() >= budgets.ball_cap {
                    break;
                }
                let w = reduce_word(&f.concat(l), g, budgets, 0)?;
                if w.is_empty() {
                    continue;
                }
                // structural dedup only: reduced duplicates that differ in
                // spelling stay, which costs time but never correctness
                if !seen.contains(&w) && !next.contains(&w) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        seen.extend(next.iter().cloned());
        frontier = next;
        if seen.len() >= budgets.ball_cap {
            break;
        }
    }
    Ok(seen)
}

struct Region<'a> {
    tree: Tree<'a>,
    verts: Vec<TreeVertex>,
    edges: Vec<TreeEdge>,
}

impl<'a> Region<'a> {
    fn add_vertex(&mut self, tv: TreeVertex) -> Result<()> {
        for v in &self.verts {
            if self.tree.vertex_eq(v, &tv)? {
                return Ok(());
            }
        }
        self.verts.push(tv);
        Ok(())
    }

    fn add_edge(&mut self, te: TreeEdge) -> Result<()> {
        for e in &self.edges {
            if self.tree.edge_eq(e, &te)? {
                return Ok(());
            }
        }
        self.edges.push(te);
        Ok(())
    }
}

/// Collect one period (plus margin) of each hyperbolic witness's axis and
/// the geodesics between the axes.
fn explore_region<'a>(
    gens: &[Word],
    sp: &'a Splitting,
    budgets: &'a Budgets,
) -> Result<Region<'a>> {
    let tree = Tree::new(sp, budgets);
    let mut region = Region { tree: Tree::new(sp, budgets), verts: Vec::new(), edges: Vec::new() };
    let mut axes: Vec<AxisWalker> = Vec::new();
    let mut cands: Vec<Word> = gens.to_vec();
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j {
                cands.push(gens[i].concat(&gens[j]));
                cands.push(gens[i].concat(&gens[j].inverse()));
            }
        }
    }
    for c in &cands {
        if let ElementType::Hyperbolic { length, base_point, period } =
            element_type(c, sp, budgets)?
        {
            axes.push(AxisWalker::new(Tree::new(sp, budgets), base_point, period, length));
        }
    }
    if axes.is_empty() {
        return Err(Error::invalid("no hyperbolic witness for a hyperbolic subgroup"));
    }
    for a in &axes {
        let span = a.length as i64 + 1;
        for i in -1..=span {
            region.add_vertex(a.vertex(i)?)?;
        }
        for i in -1..span {
            region.add_edge(a.edge(i)?)?;
        }
    }
    // bridges between axis base points
    let base0 = axes[0].vertex(0)?;
    for a in axes.iter().skip(1) {
        let other = a.vertex(0)?;
        let geo = tree.reduce_at(&base0.path.inverse().concat(&other.path), base0.vertex)?;
        let mut at = base0.clone();
        let mut prefix = Word::identity();
        for letter in &geo.0 {
            prefix = prefix.concat(&Word(vec![letter.clone()]));
            if let Letter::Edge { edge, rev } = letter {
                let e = sp.gog.edge(*edge);
                let from_path = if *rev {
                    base0.path.concat(&prefix)
                } else {
                    let mut p = prefix.0.clone();
                    p.pop();
                    base0.path.concat(&Word(p))
                };
                let from_path = tree.reduce_at(&from_path, sp.gog.base)?;
                region.add_edge(TreeEdge { path: from_path })?;
                let npath = tree.reduce_at(&base0.path.concat(&prefix), sp.gog.base)?;
                at = TreeVertex { path: npath, vertex: e.side(*rev).1 };
                region.add_vertex(at.clone())?;
            }
        }
        let _ = at;
    }
    Ok(region)
}

/// Keep a generating set small: drop elements already expressible from the
/// kept ones, deciding by the membership oracle when it applies and by a
/// short product ball otherwise.
fn thin_generators(
    found: Vec<Word>,
    ambient: &GroupSpec,
    budgets: &Budgets,
) -> Result<Vec<Word>> {
    let GroupSpec::GoGPi1(g) = ambient else {
        return Ok(found);
    };
    let mut kept: Vec<Word> = Vec::new();
    let mut generated: Vec<Word> = vec![Word::identity()];
    'cand: for c in found {
        for k in &generated {
            if words_equal(&c, k, g, budgets)? {
                continue 'cand;
            }
        }
        if !kept.is_empty() {
            match nested_membership(&c, &kept, ambient, budgets, 0) {
                Ok(Some(_)) => continue 'cand,
                Ok(None) => {}
                Err(Error::UnsupportedBackend { .. }) | Err(Error::OracleTruncation { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        kept.push(c.clone());
        // refresh the short product ball of the kept set
        let mut letters: Vec<Word> = Vec::new();
        for k in &kept {
            letters.push(k.clone());
            letters.push(k.inverse());
        }
        generated = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..3 {
            let mut next: Vec<Word> = Vec::new();
            for f in &frontier {
                for l in &letters {
                    if generated.len() + next.len() >= 200 {
                        break;
                    }
                    let w = reduce_word(&f.concat(l), g, budgets, 0)?;
                    if !generated.contains(&w) && !next.contains(&w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            generated.extend(next.iter().cloned());
            frontier = next;
        }
    }
    Ok(kept)
}

pub fn build_quotient_core(
    gens: &[Word],
    sp: &Splitting,
    budgets: &Budgets,
    depth: usize,
) -> Result<QuotientCore> {
    if std::env::var("JSJKIT_DEBUG_ORBITS").is_ok() {
        eprintln!("[orbits] build on {} at depth {} with {} generators", sp.gog.name, depth, gens.len());
    }
    let g = &sp.gog;
    let ambient = GroupSpec::GoGPi1(g.clone());
    let tree = Tree::new(sp, budgets);
    let reduced: Vec<Word> = gens
        .iter()
        .map(|w| reduce_word(w, g, budgets, depth))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();

    if let SubgroupType::Elliptic { fixed } = subgroup_type(&reduced, sp, budgets)? {
        let resolved = resolve_subgroup(&reduced, &ambient, budgets, depth + 1)?;
        let graph = Arc::new(GraphOfGroups::new(
            format!("{}\\core", sp.gog.name),
            vec![Vertex {
                name: "o0".into(),
                group: resolved.spec.clone(),
                gen_names: Vec::new(),
            }],
            Vec::new(),
            VertexId(0),
        )?);
        return Ok(QuotientCore {
            sp: sp.clone(),
            budgets: budgets.clone(),
            h_gens: reduced.clone(),
            ball: vec![Word::identity()],
            region_verts: vec![fixed.clone()],
            vassign: vec![(0, Word::identity())],
            region_edges: Vec::new(),
            eassign: Vec::new(),
            verts: vec![OrbitVertex { rep: fixed, stab_gens: reduced, resolved }],
            qedges: Vec::new(),
            graph,
        });
    }

    let ball = ball_of(&reduced, sp, budgets)?;
    let region = explore_region(&reduced, sp, budgets)?;

    // vertex orbits, chaining identifications through assigned vertices so
    // witnesses compose beyond the raw ball length
    let mut vreps: Vec<TreeVertex> = Vec::new();
    let mut vassign: Vec<(usize, Word)> = Vec::new(); // per region vertex
    'vert: for (vi, tv) in region.verts.iter().enumerate() {
        for ui in 0..vi {
            for eta in &ball {
                let moved = tree.act(eta, tv)?;
                if tree.vertex_eq(&moved, &region.verts[ui])? {
                    let (orbit, wit_u) = vassign[ui].clone();
                    let wit = reduce_word(&wit_u.concat(eta), g, budgets, depth)?;
                    vassign.push((orbit, wit));
                    continue 'vert;
                }
            }
        }
        vassign.push((vreps.len(), Word::identity()));
        vreps.push(tv.clone());
    }
    // edge orbits, same chaining
    let mut ereps: Vec<TreeEdge> = Vec::new();
    let mut eassign: Vec<(usize, Word)> = Vec::new();
    'edge: for (ei, te) in region.edges.iter().enumerate() {
        for ui in 0..ei {
            for eta in &ball {
                let moved = tree.act_edge(eta, te)?;
                if tree.edge_eq(&moved, &region.edges[ui])? {
                    let (orbit, wit_u) = eassign[ui].clone();
                    let wit = reduce_word(&wit_u.concat(eta), g, budgets, depth)?;
                    eassign.push((orbit, wit));
                    continue 'edge;
                }
            }
        }
        eassign.push((ereps.len(), Word::identity()));
        ereps.push(te.clone());
    }

    // stabilizers at representatives
    let mut verts: Vec<OrbitVertex> = Vec::new();
    for rep in &vreps {
        let mut found = Vec::new();
        for eta in &ball {
            if eta.is_empty() {
                continue;
            }
            if tree.fixes(eta, rep)? {
                found.push(eta.clone());
            }
        }
        let stab_gens = thin_generators(found, &ambient, budgets)?;
        let resolved = resolve_subgroup(&stab_gens, &ambient, budgets, depth + 1)?;
        verts.push(OrbitVertex { rep: rep.clone(), stab_gens, resolved });
    }
    let locate_vertex = |tv: &TreeVertex| -> Result<Option<(usize, Word)>> {
        // region vertices carry composed witnesses already
        for (ri, rv) in region.verts.iter().enumerate() {
            for eta in &ball {
                if tree.vertex_eq(&tree.act(eta, tv)?, rv)? {
                    let (orbit, wit_u) = vassign[ri].clone();
                    let wit = reduce_word(&wit_u.concat(eta), g, budgets, depth)?;
                    return Ok(Some((orbit, wit)));
                }
            }
        }
        Ok(None)
    };
    let mut qedges: Vec<OrbitEdge> = Vec::new();
    for rep in &ereps {
        let mut found = Vec::new();
        for eta in &ball {
            if eta.is_empty() {
                continue;
            }
            if tree.fixes_edge(eta, rep)? {
                found.push(eta.clone());
            }
        }
        let stab_gens = thin_generators(found, &ambient, budgets)?;
        let resolved = resolve_subgroup(&stab_gens, &ambient, budgets, depth + 1)?;
        let (fv, tv) = tree.edge_endpoints(rep)?;
        let Some((fo, phi)) = locate_vertex(&fv)? else {
            return Err(Error::BudgetExhausted {
                context: format!(
                    "edge endpoint outside the explored orbit region ({} vertex orbits, {} edge orbits so far)",
                    verts.len(),
                    qedges.len()
                ),
            });
        };
        let Some((to, omega)) = locate_vertex(&tv)? else {
            return Err(Error::BudgetExhausted {
                context: "edge endpoint outside the explored orbit region".into(),
            });
        };
        let sigma = reduce_word(&phi.concat(&omega.inverse()), g, budgets, depth)?;
        qedges.push(OrbitEdge {
            rep: rep.clone(),
            stab_gens,
            resolved,
            from_orbit: fo,
            to_orbit: to,
            phi,
            omega,
            sigma,
        });
    }

    if std::env::var("JSJKIT_DEBUG_ORBITS").is_ok() {
        eprintln!(
            "[orbits] region: {} verts {} edges; orbits: {} verts {} edges; ball {}",
            region.verts.len(),
            region.edges.len(),
            verts.len(),
            qedges.len(),
            ball.len()
        );
    }
    // assemble the quotient graph of groups
    let gvertices: Vec<Vertex> = verts
        .iter()
        .enumerate()
        .map(|(i, v)| Vertex {
            name: format!("o{}", i),
            group: v.resolved.spec.clone(),
            gen_names: Vec::new(),
        })
        .collect();
    let mut gedges: Vec<Edge> = Vec::new();
    for (i, e) in qedges.iter().enumerate() {
        let spec = e.resolved.spec.clone();
        if !spec.is_plain() {
            return Err(Error::UnsupportedBackend {
                op: "quotient_core_graph",
                detail: "edge stabilizer did not resolve to a plain backend".into(),
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
            for (wit, vert, out) in [
                (&e.phi, e.from_orbit, &mut map_from),
                (&e.omega, e.to_orbit, &mut map_to),
            ] {
                let moved = wit.concat(&amb).concat(&wit.inverse());
                let moved = reduce_word(&moved, g, budgets, depth)?;
                let img = verts[vert].resolved.express(&moved, budgets)?.ok_or_else(|| {
                    Error::BudgetExhausted {
                        context: format!(
                            "edge stabilizer of quotient edge {} not expressible in its endpoint stabilizer",
                            i
                        ),
                    }
                })?;
                out.push(img);
            }
        }
        gedges.push(Edge {
            name: format!("q{}", i),
            letter: format!("t{}", i),
            from: VertexId(e.from_orbit),
            to: VertexId(e.to_orbit),
            group: spec,
            map_from: EdgeMap::new(map_from),
            map_to: EdgeMap::new(map_to),
        });
    }
    let graph = Arc::new(GraphOfGroups::new(
        format!("{}\\core", sp.gog.name),
        gvertices,
        gedges,
        VertexId(0),
    )?);
    Ok(QuotientCore {
        sp: sp.clone(),
        budgets: budgets.clone(),
        h_gens: reduced,
        ball,
        region_verts: region.verts,
        vassign,
        region_edges: region.edges,
        eassign,
        verts,
        qedges,
        graph,
    })
}

impl QuotientCore {
    fn tree(&self) -> Tree<'_> {
        Tree::new(&self.sp, &self.budgets)
    }

    /// Locate the orbit of a tree vertex: `(orbit, eta)` with
    /// `eta . tv = verts[orbit].rep`.
    pub fn locate_vertex(&self, tv: &TreeVertex) -> Result<Option<(usize, Word)>> {
        let tree = self.tree();
        let g = &self.sp.gog;
        for (ri, rv) in self.region_verts.iter().enumerate() {
            for eta in &self.ball {
                if tree.vertex_eq(&tree.act(eta, tv)?, rv)? {
                    let (orbit, wit_u) = self.vassign[ri].clone();
                    let wit = reduce_word(&wit_u.concat(eta), g, &self.budgets, 0)?;
                    return Ok(Some((orbit, wit)));
                }
            }
        }
        Ok(None)
    }

    /// Locate the orbit of a tree edge: `(orbit, eta)` with
    /// `eta . te = qedges[orbit].rep`.
    pub fn locate_edge(&self, te: &TreeEdge) -> Result<Option<(usize, Word)>> {
        let tree = self.tree();
        let g = &self.sp.gog;
        for (ri, re) in self.region_edges.iter().enumerate() {
            for eta in &self.ball {
                if tree.edge_eq(&tree.act_edge(eta, te)?, re)? {
                    let (orbit, wit_u) = self.eassign[ri].clone();
                    let wit = reduce_word(&wit_u.concat(eta), g, &self.budgets, 0)?;
                    return Ok(Some((orbit, wit)));
                }
            }
        }
        Ok(None)
    }

    /// Express an ambient element of the acting subgroup as a closed word
    /// in the quotient graph's alphabet, walking the tree geodesic from the
    /// base orbit representative.
    pub fn express(&self, w: &Word) -> Result<Option<Word>> {
        let g = &self.sp.gog;
        let budgets = &self.budgets;
        let tree = self.tree();
        if self.qedges.is_empty() {
            // elliptic core: one vertex
            let q = self.verts[0].resolved.express(w, budgets)?;
            return Ok(q.map(|q| if q.is_empty() {
                Word::identity()
            } else {
                Word::syl(VertexId(0), q)
            }));
        }
        let x0 = &self.verts[0].rep;
        let target = tree.act(w, x0)?;
        let mut letters: Vec<Letter> = Vec::new();
        let mut acc = Word::identity();
        let mut cur = 0usize;
        for _guard in 0..budgets.syllables {
            let cur_tv = tree.act(&acc, &self.verts[cur].rep)?;
            if tree.vertex_eq(&cur_tv, &target)? {
                if cur != 0 {
                    return Ok(None);
                }
                let s = reduce_word(&acc.inverse().concat(w), g, budgets, 0)?;
                let Some(q) = self.verts[0].resolved.express(&s, budgets)? else {
                    return Ok(None);
                };
                if !q.is_empty() {
                    letters.push(Letter::Syl { vertex: VertexId(0), word: q });
                }
                return Ok(Some(Word(letters)));
            }
            // first edge on the geodesic toward the target
            let geo =
                tree.reduce_at(&cur_tv.path.inverse().concat(&target.path), cur_tv.vertex)?;
            let mut prefix: Vec<Letter> = Vec::new();
            let mut crossing: Option<(EdgeId, bool)> = None;
            for l in &geo.0 {
                match l {
                    Letter::Edge { edge, rev } => {
                        crossing = Some((*edge, *rev));
                        break;
                    }
                    _ => prefix.push(l.clone()),
                }
            }
            let Some((eid, rev)) = crossing else {
                return Ok(None);
            };
            let inst_path = if rev {
                let mut p = prefix.clone();
                p.push(Letter::Edge { edge: eid, rev });
                tree.reduce_at(&cur_tv.path.concat(&Word(p)), g.base)?
            } else {
                tree.reduce_at(&cur_tv.path.concat(&Word(prefix.clone())), g.base)?
            };
            let inst = TreeEdge { path: inst_path };
            let Some((s, beta)) = self.locate_edge(&inst)? else {
                return Err(Error::BudgetExhausted {
                    context: "geodesic leaves the explored orbit region".into(),
                });
            };
            let qe = &self.qedges[s];
            // direction: does the crossing leave from the edge's from-side?
            let (inst_from, _inst_to) = tree.edge_endpoints(&inst)?;
            let forward = tree.vertex_eq(&cur_tv, &inst_from)?;
            let (u, next_orbit, sig) = if forward {
                let u = reduce_word(
                    &acc.inverse().concat(&beta.inverse()).concat(&qe.phi.inverse()),
                    g,
                    budgets,
                    0,
                )?;
                (u, qe.to_orbit, qe.sigma.clone())
            } else {
                let u = reduce_word(
                    &acc.inverse().concat(&beta.inverse()).concat(&qe.omega.inverse()),
                    g,
                    budgets,
                    0,
                )?;
                (u, qe.from_orbit, qe.sigma.inverse())
            };
            let Some(q) = self.verts[cur].resolved.express(&u, budgets)? else {
                return Err(Error::BudgetExhausted {
                    context: "frame correction not expressible in a vertex stabilizer".into(),
                });
            };
            if !q.is_empty() {
                letters.push(Letter::Syl { vertex: VertexId(cur), word: q });
            }
            letters.push(Letter::Edge { edge: EdgeId(s), rev: !forward });
            acc = reduce_word(&acc.concat(&u).concat(&sig), g, budgets, 0)?;
            cur = next_orbit;
        }
        Err(Error::truncation("quotient expression walk", budgets.syllables))
    }

    /// Evaluate a quotient-graph word back to an ambient word.
    pub fn evaluate(&self, q: &Word) -> Result<Word> {
        let g = &self.sp.gog;
        let mut out = Word::identity();
        for l in &q.0 {
            match l {
                Letter::Gen { .. } => {
                    return Err(Error::invalid("bare generator letter in a quotient word"))
                }
                Letter::Syl { vertex, word } => {
                    let amb = self.verts[vertex.0].resolved.evaluate(word, &self.budgets)?;
                    out = out.concat(&amb);
                }
                Letter::Edge { edge, rev } => {
                    let s = &self.qedges[edge.0].sigma;
                    out = out.concat(&if *rev { s.inverse() } else { s.clone() });
                }
            }
        }
        reduce_word(&out, g, &self.budgets, 0)
    }
}

/// Public operation: the quotient graph of groups of the minimal invariant
/// subtree of a subgroup action.
pub fn quotient_core_graph(
    gens: &[Word],
    sp: &Splitting,
    budgets: &Budgets,
) -> Result<Arc<GraphOfGroups>> {
    Ok(build_quotient_core(gens, sp, budgets, 0)?.graph)
}

#[derive(Debug)]
struct ActionReal {
    core: Arc<QuotientCore>,
    transport: WordTransport,
}

impl graph_of_groups::Realization for ActionReal {
    fn express(&self, w: &Word, _budgets: &Budgets) -> Result<Option<Word>> {
        let in_sp = self.transport.apply(w);
        let in_sp = reduce_word(&in_sp, &self.core.sp.gog, &self.core.budgets, 0)?;
        self.core.express(&in_sp)
    }

    fn evaluate(&self, spec_word: &Word, _budgets: &Budgets) -> Result<Word> {
        let in_sp = self.core.evaluate(spec_word)?;
        Ok(self.transport.unapply(&in_sp))
    }
}

/// Resolve a subgroup that conjugates into no single vertex position:
/// structure it through its quotient core on one of the ambient graph's
/// own one-edge splittings.
pub fn resolve_by_action(
    gens: &[Word],
    g: &Arc<GraphOfGroups>,
    budgets: &Budgets,
    depth: usize,
) -> Result<ResolvedGroup> {
    if depth > budgets.depth {
        return Err(Error::truncation("action resolution depth", budgets.depth));
    }
    for e in g.edge_ids() {
        let (sp, transport) = graph_of_groups::one_edge_splitting(g, e)?;
        let gens_sp: Vec<Word> = gens
            .iter()
            .map(|w| reduce_word(&transport.apply(w), &sp.gog, budgets, depth))
            .collect::<Result<_>>()?;
        match subgroup_type(&gens_sp, &sp, budgets)? {
            SubgroupType::Hyperbolic { .. } => {
                let core = Arc::new(build_quotient_core(&gens_sp, &sp, budgets, depth)?);
                let spec = GroupSpec::GoGPi1(core.graph.clone());
                let mut given = Vec::new();
                for w in &gens_sp {
                    let q = core.express(w)?.ok_or_else(|| {
                        Error::invalid("subgroup generator not expressible in its own core")
                    })?;
                    given.push(q);
                }
                let real = ActionReal { core, transport };
                return Ok(ResolvedGroup::from_parts(
                    spec,
                    gens.to_vec(),
                    given,
                    Arc::new(real),
                ));
            }
            SubgroupType::Elliptic { fixed } => {
                // try the fixed vertex as a conjugation hint in the ambient
                let hint = transport.unapply(&fixed.path);
                if let Some(r) =
                    graph_of_groups::resolve_with_hint(gens, g, &hint, budgets, depth)?
                {
                    return Ok(r);
                }
            }
        }
    }
    Err(Error::UnsupportedBackend {
        op: "resolve_subgroup",
        detail: format!("no structure found for a subgroup of {}", g.name),
    })
}
