//! Subgroup classification, pair types, invariant-line cores and quotient
//! cores on the worked examples.

mod common;

use common::*;
use jsjkit::graph_of_groups::{
    default_targets, fingerprint, fundamental_group_presentation, resolve_subgroup, EdgeId,
    VertexId, Word,
};
use jsjkit::base_groups::GroupSpec;
use jsjkit::tree_action::{
    invariant_line_core, pair_type, quotient_core_graph, subgroup_type, CoreShape, PairType,
    SubgroupType,
};

fn a_in(sp_vertex: usize, g: usize) -> Word {
    nested_syl(sp_vertex, Word::syl(VertexId(0), Word::gen(g, 1)))
}

fn x_in(sp_vertex: usize) -> Word {
    nested_syl(
        sp_vertex,
        Word::edge(EdgeId(0), false)
            .concat(&Word::syl(VertexId(1), Word::gen(1, 1)))
            .concat(&Word::edge(EdgeId(0), true)),
    )
}

#[test]
fn trivial_subgroup_is_elliptic_at_base() {
    let sp = z2_hnn_over_a();
    let t = subgroup_type(&[], &sp, &budgets()).unwrap();
    match t {
        SubgroupType::Elliptic { fixed } => assert!(fixed.path.is_empty()),
        _ => panic!("trivial subgroup must be elliptic"),
    }
}

#[test]
fn guirardel_edge_groups_classify() {
    let b = budgets();
    let t1 = guirardel_t1();
    let t2 = guirardel_t2();
    // <a2,a3> on T2: a2 is the stable letter of T2, so hyperbolic.
    // In T2's alphabet: vertex group is <a1,a3> * A; a2 = t0.
    let a2_in_t2 = common::cross(0);
    let a3_in_t2 = a_in(0, 1);
    let ty = subgroup_type(&[a2_in_t2.clone(), a3_in_t2.clone()], &t2, &b).unwrap();
    assert!(matches!(ty, SubgroupType::Hyperbolic { .. }));
    // <a3> on T1 is elliptic (a3 lies in the vertex group)
    let a3_in_t1 = a_in(0, 1);
    let ty = subgroup_type(&[a3_in_t1], &t1, &b).unwrap();
    assert!(ty.is_elliptic());
}

#[test]
fn guirardel_pair_is_hh() {
    let b = budgets();
    let t1 = guirardel_t1();
    let t2 = guirardel_t2();
    // edge group of T1 = <a2, a3>, written in T2's alphabet
    let e1_in_t2 = vec![common::cross(0), a_in(0, 1)];
    // edge group of T2 = <a1, a3>, written in T1's alphabet
    let e2_in_t1 = vec![common::cross(0), a_in(0, 1)];
    let pt = pair_type(&t1, &t2, &e1_in_t2, &e2_in_t1, &b).unwrap();
    assert_eq!(pt, PairType::HH);
}

#[test]
fn self_pair_is_ee() {
    let b = budgets();
    let sp = z2_hnn_over_a();
    let edge = vec![syl(0, &[(0, 1)])];
    let pt = pair_type(&sp, &sp, &edge, &edge, &b).unwrap();
    assert_eq!(pt, PairType::EE);
}

#[test]
fn rem32_pair_is_he() {
    let b = budgets();
    // non-minimal splitting over <a> vs the <b>-splitting
    let nm = rem32_nonminimal();
    let sb = rem32_splitting_over("b", "Sb");
    // edge group of nm is <a>; in Sb's alphabet a is the stable letter t0
    let e_nm_in_sb = vec![common::cross(0)];
    // edge group of Sb is <b>; in nm's alphabet b is generator 1 of vertex 0
    let e_sb_in_nm = vec![syl(0, &[(1, 1)])];
    let pt = pair_type(&nm, &sb, &e_nm_in_sb, &e_sb_in_nm, &b).unwrap();
    assert_eq!(pt, PairType::HE);
}

#[test]
fn line_core_of_a_on_other_torus_tree() {
    let b = budgets();
    // <a> acting on the <b>-HNN tree of Z^2: a is the stable letter there
    let sp = z2_hnn_over_a(); // rebaptized: tree of the splitting over <b>
    let core = invariant_line_core(&[common::cross(0)], &sp, &b).unwrap();
    assert!(!core.dihedral);
    match core.shape {
        CoreShape::Circle { k, .. } => assert_eq!(k, 1),
        _ => panic!("expected a circle"),
    }
    assert!(core.fiber.is_empty());
}

#[test]
fn line_core_guirardel_fiber_a3() {
    let b = budgets();
    let t1 = guirardel_t1();
    // <a1, a3> acting on T1: a1 is the stable letter, a3 central
    let gens = vec![common::cross(0), a_in(0, 1)];
    let core = invariant_line_core(&gens, &t1, &b).unwrap();
    assert!(!core.dihedral);
    match &core.shape {
        CoreShape::Circle { k, .. } => assert_eq!(*k, 1),
        _ => panic!("expected a circle"),
    }
    assert_eq!(core.fiber.len(), 1, "fiber should be generated by a3");
}

#[test]
fn dinfty_whole_group_gives_segment() {
    let b = budgets();
    let sp = dinfty();
    let x = syl(0, &[(1, 1)]);
    let y = w(&[common::cross(0), syl(1, &[(1, 1)]), common::uncross(0)]);
    let core = invariant_line_core(&[x, y], &sp, &b).unwrap();
    assert!(core.dihedral);
    match &core.shape {
        CoreShape::Segment { k, endpoint_stabilizers, interior_stabilizers, .. } => {
            assert_eq!(*k, 1);
            assert_eq!(endpoint_stabilizers[0].len(), 1);
            assert_eq!(endpoint_stabilizers[1].len(), 1);
            assert!(interior_stabilizers.is_empty());
        }
        _ => panic!("expected a segment"),
    }
    assert!(core.fiber.is_empty());
}

#[test]
fn circle_k_matches_brute_minimum() {
    let b = budgets();
    // <a b^2, b... > no: subgroup <a> on the <a b^2>-style tree exercises
    // k > 1: take Z^2 split over <ab^2> with stable letter b; then a has
    // translation length 2.
    use jsjkit::graph_of_groups::{Edge, EdgeMap, GraphOfGroups, Splitting, Vertex};
    use std::sync::Arc;
    let g = GraphOfGroups::new(
        "T_ab2",
        vec![vertex("v0", z("u"))], // u = a b^2
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(0),
            group: z("c"),
            map_from: EdgeMap::new(vec![Word::gen(0, 1)]),
            map_to: EdgeMap::new(vec![Word::gen(0, 1)]),
        }],
        VertexId(0),
    )
    .unwrap();
    let sp = Splitting::new(Arc::new(g), "Z2 over <ab2>").unwrap();
    let _ = Vertex { name: String::new(), group: z("x"), gen_names: vec![] };
    // a = u * t0^-2 (since u = a b^2 and t0 = b)
    let a = w(&[syl(0, &[(0, 1)]), common::uncross(0), common::uncross(0)]);
    let core = invariant_line_core(&[a], &sp, &b).unwrap();
    match core.shape {
        CoreShape::Circle { k, .. } => assert_eq!(k, 2),
        _ => panic!("expected a circle"),
    }
}

#[test]
fn quotient_core_of_full_z2_on_hnn_tree() {
    let b = budgets();
    let sp = z2_hnn_over_a();
    // the whole group <a, b> acting on its own tree: quotient is the
    // original loop with vertex group <a> and edge group <a>
    let gens = vec![syl(0, &[(0, 1)]), common::cross(0)];
    let q = quotient_core_graph(&gens, &sp, &b).unwrap();
    assert_eq!(q.vertices.len(), 1);
    assert_eq!(q.edges.len(), 1);
    let vg = &q.vertices[0].group;
    assert_eq!(vg.describe(), "FreeAbelian(rank=1, torsion=[])");
    assert_eq!(q.edges[0].group.describe(), "FreeAbelian(rank=1, torsion=[])");
}

#[test]
fn quotient_core_guirardel_vertex_group_on_t2() {
    let b = budgets();
    let t2 = guirardel_t2();
    // V1 = <a2, a3> * A acting on T2's tree: quotient is a circle with
    // vertex group <a3> * A and edge group <a3>
    let gens = vec![common::cross(0), a_in(0, 1), x_in(0)];
    let q = quotient_core_graph(&gens, &t2, &b).unwrap();
    assert_eq!(q.vertices.len(), 1, "one vertex orbit");
    assert_eq!(q.edges.len(), 1, "one edge orbit");
    // vertex group is <a3> * A: fingerprint rank 1 with a Z/2 free factor
    let fp = fingerprint(
        &single_vertex_graph(&q.vertices[0].group),
        &default_targets(),
        &b,
    )
    .unwrap();
    assert_eq!(fp.rank, 1);
    assert_eq!(fp.torsion, vec![2]);
    // edge group is <a3>
    assert_eq!(q.edges[0].group.describe(), "FreeAbelian(rank=1, torsion=[])");
    // the quotient's own fundamental group is V1 again
    let fp_q = fingerprint(&q, &default_targets(), &b).unwrap();
    let p = fundamental_group_presentation(&q).unwrap();
    assert!(p.gens.len() >= 2);
    assert_eq!(fp_q.rank, 2);
    assert_eq!(fp_q.torsion, vec![2]);
}

fn single_vertex_graph(spec: &GroupSpec) -> jsjkit::graph_of_groups::GraphOfGroups {
    jsjkit::graph_of_groups::GraphOfGroups::new(
        "single",
        vec![jsjkit::graph_of_groups::Vertex {
            name: "v".into(),
            group: spec.clone(),
            gen_names: (0..spec.gen_count()).map(|i| spec.gen_name(i).to_string()).collect(),
        }],
        vec![],
        VertexId(0),
    )
    .unwrap()
}

#[test]
fn resolve_a3_x_subgroup_of_ambient() {
    let b = budgets();
    let amb = guirardel_ambient();
    let spec = GroupSpec::GoGPi1(amb.clone());
    // <a3, x> inside Z^3 * A: resolves through its action to <a3> * A
    let a3 = Word::syl(VertexId(0), Word::gen(2, 1));
    let x = Word::edge(EdgeId(0), false)
        .concat(&Word::syl(VertexId(1), Word::gen(1, 1)))
        .concat(&Word::edge(EdgeId(0), true));
    let r = resolve_subgroup(&[a3, x], &spec, &b, 0).unwrap();
    match &r.spec {
        GroupSpec::GoGPi1(q) => {
            let fp = fingerprint(q, &default_targets(), &b).unwrap();
            assert_eq!(fp.rank, 1);
            assert_eq!(fp.torsion, vec![2]);
        }
        other => panic!("expected a graph-of-groups structure, got {}", other.describe()),
    }
}
