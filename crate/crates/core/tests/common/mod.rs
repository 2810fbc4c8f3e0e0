//! Shared fixtures: the worked examples that drive the verification suite.

#![allow(dead_code)]

use jsjkit::base_groups::{AbelianSpec, FiniteTable, GroupSpec};
use jsjkit::config::Budgets;
use jsjkit::graph_of_groups::{
    Edge, EdgeId, EdgeMap, GraphOfGroups, Letter, Splitting, Vertex, VertexId, Word,
};
use std::sync::Arc;

pub fn budgets() -> Budgets {
    Budgets::default()
}

pub fn z(name: &str) -> GroupSpec {
    GroupSpec::free_abelian(&[name])
}

pub fn z2(a: &str, b: &str) -> GroupSpec {
    GroupSpec::free_abelian(&[a, b])
}

pub fn z3gens(a: &str, b: &str, c: &str) -> GroupSpec {
    GroupSpec::free_abelian(&[a, b, c])
}

pub fn zmod(n: usize) -> GroupSpec {
    GroupSpec::Finite(Arc::new(FiniteTable::cyclic(n)))
}

pub fn torsion(name: &str, d: u64) -> GroupSpec {
    GroupSpec::FreeAbelian(Arc::new(AbelianSpec::with_torsion(&[], &[(name, d)])))
}

pub fn vertex(name: &str, group: GroupSpec) -> Vertex {
    let gen_names = (0..group.gen_count()).map(|i| group.gen_name(i).to_string()).collect();
    Vertex { name: name.into(), group, gen_names }
}

pub fn syl(v: usize, letters: &[(usize, i64)]) -> Word {
    Word::syl(
        VertexId(v),
        Word(letters.iter().map(|&(g, p)| Letter::Gen { gen: g, pow: p }).collect()),
    )
}

pub fn cross(e: usize) -> Word {
    Word::edge(EdgeId(e), false)
}

pub fn uncross(e: usize) -> Word {
    Word::edge(EdgeId(e), true)
}

pub fn w(parts: &[Word]) -> Word {
    Word::concat_all(parts)
}

/// HNN of Z = <a> over itself with both maps the identity: pi1 = Z^2.
pub fn z2_hnn_over_a() -> Splitting {
    let g = GraphOfGroups::new(
        "T_a",
        vec![vertex("v0", z("a"))],
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
    Splitting::new(Arc::new(g), "Z2 over <a>").unwrap()
}

/// Klein bottle group as an HNN: b a b^-1 = a^-1.
pub fn klein_hnn() -> Splitting {
    let g = GraphOfGroups::new(
        "K_hnn",
        vec![vertex("v0", z("a"))],
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(0),
            group: z("c"),
            map_from: EdgeMap::new(vec![Word::gen(0, -1)]),
            map_to: EdgeMap::new(vec![Word::gen(0, 1)]),
        }],
        VertexId(0),
    )
    .unwrap();
    Splitting::new(Arc::new(g), "Klein HNN over <a>").unwrap()
}

/// Klein bottle group as an amalgam <b> *_{b^2 = c^2} <c>.
pub fn klein_amalgam() -> Splitting {
    let g = GraphOfGroups::new(
        "K_am",
        vec![vertex("v0", z("b")), vertex("v1", z("c"))],
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(1),
            group: z("d"),
            map_from: EdgeMap::new(vec![Word::gen(0, 2)]),
            map_to: EdgeMap::new(vec![Word::gen(0, 2)]),
        }],
        VertexId(0),
    )
    .unwrap();
    Splitting::new(Arc::new(g), "Klein amalgam").unwrap()
}

/// Z/2 * Z/2, the infinite dihedral group.
pub fn dinfty() -> Splitting {
    let g = GraphOfGroups::new(
        "Dinf",
        vec![vertex("v0", zmod(2)), vertex("v1", zmod(2))],
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(1),
            group: GroupSpec::trivial(),
            map_from: EdgeMap::new(vec![]),
            map_to: EdgeMap::new(vec![]),
        }],
        VertexId(0),
    )
    .unwrap();
    Splitting::new(Arc::new(g), "Z/2 * Z/2").unwrap()
}

/// The ambient group Z^3 * A (A = Z/2): two vertices over a trivial edge.
pub fn guirardel_ambient() -> Arc<GraphOfGroups> {
    Arc::new(
        GraphOfGroups::new(
            "G3A",
            vec![
                vertex("vz", z3gens("a1", "a2", "a3")),
                vertex("va", zmod(2)),
            ],
            vec![Edge {
                name: "e0".into(),
                letter: "s0".into(),
                from: VertexId(0),
                to: VertexId(1),
                group: GroupSpec::trivial(),
                map_from: EdgeMap::new(vec![]),
                map_to: EdgeMap::new(vec![]),
            }],
            VertexId(0),
        )
        .unwrap(),
    )
}

/// Vertex group Z^2 * A of a Guirardel splitting: free abelian on the two
/// given names, free product with A = Z/2.
pub fn guirardel_vertex_group(x: &str, y: &str) -> Arc<GraphOfGroups> {
    Arc::new(
        GraphOfGroups::new(
            format!("V[{x},{y}]"),
            vec![vertex("u", z2(x, y)), vertex("w", zmod(2))],
            vec![Edge {
                name: "f0".into(),
                letter: "r0".into(),
                from: VertexId(0),
                to: VertexId(1),
                group: GroupSpec::trivial(),
                map_from: EdgeMap::new(vec![]),
                map_to: EdgeMap::new(vec![]),
            }],
            VertexId(0),
        )
        .unwrap(),
    )
}

/// Guirardel splitting T_k: HNN of (Z^2 * A) over Z^2 = <x, y> with stable
/// letter the remaining coordinate.
pub fn guirardel_splitting(x: &str, y: &str, name: &str) -> Splitting {
    let v = guirardel_vertex_group(x, y);
    let g = GraphOfGroups::new(
        name,
        vec![Vertex {
            name: "v0".into(),
            group: GroupSpec::GoGPi1(v),
            gen_names: Vec::new(),
        }],
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(0),
            group: z2("c1", "c2"),
            map_from: EdgeMap::new(vec![
                Word::syl(VertexId(0), Word::gen(0, 1)),
                Word::syl(VertexId(0), Word::gen(1, 1)),
            ]),
            map_to: EdgeMap::new(vec![
                Word::syl(VertexId(0), Word::gen(0, 1)),
                Word::syl(VertexId(0), Word::gen(1, 1)),
            ]),
        }],
        VertexId(0),
    )
    .unwrap();
    Splitting::new(Arc::new(g), name).unwrap()
}

/// T1 = HNN over <a2,a3> (stable letter a1).
pub fn guirardel_t1() -> Splitting {
    guirardel_splitting("a2", "a3", "T1")
}

/// T2 = HNN over <a1,a3> (stable letter a2).
pub fn guirardel_t2() -> Splitting {
    guirardel_splitting("a1", "a3", "T2")
}

/// T3 = HNN over <a1,a2> (stable letter a3).
pub fn guirardel_t3() -> Splitting {
    guirardel_splitting("a1", "a2", "T3")
}

/// Rem 3.2 ambient: Z^2 * H with H = Z/3.
pub fn rem32_ambient() -> Arc<GraphOfGroups> {
    Arc::new(
        GraphOfGroups::new(
            "Z2H",
            vec![vertex("vz", z2("a", "b")), vertex("vh", zmod(3))],
            vec![Edge {
                name: "e0".into(),
                letter: "s0".into(),
                from: VertexId(0),
                to: VertexId(1),
                group: GroupSpec::trivial(),
                map_from: EdgeMap::new(vec![]),
                map_to: EdgeMap::new(vec![]),
            }],
            VertexId(0),
        )
        .unwrap(),
    )
}

/// Minimal splitting of Z^2 * H over <a>: HNN of (<a> * H) with stable
/// letter b.
pub fn rem32_splitting_over(gen_name: &str, name: &str) -> Splitting {
    let v = Arc::new(
        GraphOfGroups::new(
            format!("V[{gen_name}]"),
            vec![vertex("u", z(gen_name)), vertex("w", zmod(3))],
            vec![Edge {
                name: "f0".into(),
                letter: "r0".into(),
                from: VertexId(0),
                to: VertexId(1),
                group: GroupSpec::trivial(),
                map_from: EdgeMap::new(vec![]),
                map_to: EdgeMap::new(vec![]),
            }],
            VertexId(0),
        )
        .unwrap(),
    );
    let g = GraphOfGroups::new(
        name,
        vec![Vertex { name: "v0".into(), group: GroupSpec::GoGPi1(v), gen_names: Vec::new() }],
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(0),
            group: z("c"),
            map_from: EdgeMap::new(vec![Word::syl(VertexId(0), Word::gen(0, 1))]),
            map_to: EdgeMap::new(vec![Word::syl(VertexId(0), Word::gen(0, 1))]),
        }],
        VertexId(0),
    )
    .unwrap();
    Splitting::new(Arc::new(g), name).unwrap()
}

/// The non-minimal splitting Z^2 *_{<a>} (H * <a'>).
pub fn rem32_nonminimal() -> Splitting {
    let right = Arc::new(
        GraphOfGroups::new(
            "HZa",
            vec![vertex("u", z("ap")), vertex("w", zmod(3))],
            vec![Edge {
                name: "f0".into(),
                letter: "r0".into(),
                from: VertexId(0),
                to: VertexId(1),
                group: GroupSpec::trivial(),
                map_from: EdgeMap::new(vec![]),
                map_to: EdgeMap::new(vec![]),
            }],
            VertexId(0),
        )
        .unwrap(),
    );
    let g = GraphOfGroups::new(
        "NM",
        vec![
            vertex("v0", z2("a", "b")),
            Vertex { name: "v1".into(), group: GroupSpec::GoGPi1(right), gen_names: Vec::new() },
        ],
        vec![Edge {
            name: "e0".into(),
            letter: "t0".into(),
            from: VertexId(0),
            to: VertexId(1),
            group: z("c"),
            map_from: EdgeMap::new(vec![Word::gen(0, 1)]),
            map_to: EdgeMap::new(vec![Word::syl(VertexId(0), Word::gen(0, 1))]),
        }],
        VertexId(0),
    )
    .unwrap();
    Splitting::new(Arc::new(g), "Z2 *_<a> (H * <a>)").unwrap()
}

/// Nested syllable helper: an element of a GoGPi1 vertex group given by a
/// word in the nested graph.
pub fn nested_syl(outer_vertex: usize, inner: Word) -> Word {
    Word::syl(VertexId(outer_vertex), inner)
}
