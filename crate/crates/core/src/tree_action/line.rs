//! Invariant-line quotient cores of slender subgroup actions: the circle
//! (a translation action) or segment (a dihedral action) obtained as the
//! quotient of the invariant axis, with cell stabilizers.

use super::tree::{Tree, TreeVertex};
use super::{element_type, subgroup_type, ElementType, SubgroupType};
use crate::base_groups::snf;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{reduce_word, words_equal, Splitting, Word};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CoreGraph {
    pub dihedral: bool,
    pub shape: CoreShape,
    /// Pointwise stabilizer of the axis: the fiber group of the band this
    /// core will carry in a core complex.
    pub fiber: Vec<Word>,
}

#[derive(Debug, Clone, Serialize)]
pub enum CoreShape {
    /// Elliptic action: the core is one vertex.
    Vertex { fixed: TreeVertex },
    /// Translation action: a circle with `k` edges; every cell stabilizer
    /// is the fiber. `monodromy` realizes the minimal translation.
    Circle { k: usize, base: TreeVertex, monodromy: Word },
    /// Dihedral action: a segment with `k` edges and reflection endpoint
    /// stabilizers (each includes the fiber). `translation` realizes the
    /// minimal orientation-preserving translation (by `2k`).
    Segment {
        k: usize,
        base: TreeVertex,
        endpoint_stabilizers: [Vec<Word>; 2],
        interior_stabilizers: Vec<Word>,
        translation: Word,
    },
}

use super::tree::AxisWalker;

enum LineAction {
    Translation(i64),
    /// Reflection with `2 * center` stored (always an integer).
    Reflection(i64),
}

/// Compute the quotient core of a slender subgroup acting on the tree.
/// `gens` are words in the splitting's alphabet.
pub fn invariant_line_core(
    gens: &[Word],
    sp: &Splitting,
    budgets: &Budgets,
) -> Result<CoreGraph> {
    match subgroup_type(gens, sp, budgets)? {
        SubgroupType::Elliptic { fixed } => {
            let fiber: Vec<Word> = gens
                .iter()
                .map(|g| reduce_word(g, &sp.gog, budgets, 0))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|w| !w.is_empty())
                .collect();
            Ok(CoreGraph {
                dihedral: false,
                shape: CoreShape::Vertex { fixed },
                fiber,
            })
        }
        SubgroupType::Hyperbolic { .. } => line_core_hyperbolic(gens, sp, budgets),
    }
}

fn candidate_elements(gens: &[Word], horizon: usize) -> Vec<Word> {
    let mut out: Vec<Word> = gens.to_vec();
    if horizon >= 2 {
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                if i == j {
                    continue;
                }
                out.push(gens[i].concat(&gens[j]));
                out.push(gens[i].concat(&gens[j].inverse()));
            }
        }
    }
    out
}

fn line_core_hyperbolic(gens: &[Word], sp: &Splitting, budgets: &Budgets) -> Result<CoreGraph> {
    let g = &sp.gog;
    let tree = Tree::new(sp, budgets);
    let reduced: Vec<Word> = gens
        .iter()
        .map(|w| reduce_word(w, g, budgets, 0))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();

    // minimal-translation hyperbolic element within the configured horizon
    let mut best: Option<(usize, TreeVertex, Word)> = None;
    for cand in candidate_elements(&reduced, budgets.horizon) {
        if let ElementType::Hyperbolic { length, base_point, period } =
            element_type(&cand, sp, budgets)?
        {
            if best.as_ref().map_or(true, |(l, _, _)| length < *l) {
                best = Some((length, base_point, period));
            }
        }
    }
    let (min_len, base_point, period) =
        best.ok_or_else(|| Error::invalid("hyperbolic subgroup with no hyperbolic witness"))?;
    let axis = AxisWalker::new(Tree::new(sp, budgets), base_point, period, min_len);
    let span = budgets.span.max(4 * min_len);

    // classify each generator as an isometry of the line
    let mut actions: Vec<(usize, LineAction)> = Vec::new();
    for (idx, gamma) in reduced.iter().enumerate() {
        let a0 = tree.act(gamma, &axis.vertex(0)?)?;
        let a1 = tree.act(gamma, &axis.vertex(1)?)?;
        let p0 = axis.position_of(&a0, span)?;
        let p1 = axis.position_of(&a1, span)?;
        let (Some(p0), Some(p1)) = (p0, p1) else {
            return Err(Error::AxisNotInvariant { witness: format!("generator #{idx}") });
        };
        match p1 - p0 {
            1 => actions.push((idx, LineAction::Translation(p0))),
            -1 => actions.push((idx, LineAction::Reflection(p0))),
            _ => return Err(Error::AxisNotInvariant { witness: format!("generator #{idx}") }),
        }
    }
    let reflections: Vec<(usize, i64)> = actions
        .iter()
        .filter_map(|(i, a)| match a {
            LineAction::Reflection(m) => Some((*i, *m)),
            _ => None,
        })
        .collect();
    let translations: Vec<(usize, i64)> = actions
        .iter()
        .filter_map(|(i, a)| match a {
            LineAction::Translation(t) => Some((*i, *t)),
            _ => None,
        })
        .collect();

    // translation subgroup d*Z of the orientation-preserving part
    let mut d: i64 = 0;
    for &(_, t) in &translations {
        d = gcd(d, t);
    }
    for w in reflections.windows(2) {
        d = gcd(d, w[1].1 - w[0].1);
    }
    if !reflections.is_empty() {
        for &(_, m) in &reflections {
            if m.rem_euclid(2) != reflections[0].1.rem_euclid(2) {
                // reflection centers at mixed parity: some composite fixes
                // an edge midpoint
                return Err(Error::InversionDetected);
            }
        }
        if reflections.iter().any(|&(_, m)| m % 2 != 0) && d == 0 {
            return Err(Error::InversionDetected);
        }
    }
    let d = d.abs();

    // fiber: pointwise stabilizer of the axis
    let fiber = fiber_generators(&reduced, &translations, &reflections, sp, budgets, &axis)?;

    if reflections.is_empty() {
        if d == 0 {
            return Err(Error::invalid("hyperbolic subgroup with zero translation image"));
        }
        let monodromy = translation_word(&reduced, &translations, d, sp, budgets)?;
        // the minimal translation must be realized on the axis
        match element_type(&monodromy, sp, budgets)? {
            ElementType::Hyperbolic { length, .. } if length == d as usize => {}
            _ => {
                return Err(Error::invalid(
                    "minimal translation word does not translate by the gcd",
                ))
            }
        }
        Ok(CoreGraph {
            dihedral: false,
            shape: CoreShape::Circle {
                k: d as usize,
                base: axis.vertex(0)?,
                monodromy,
            },
            fiber,
        })
    } else {
        if d == 0 || d % 2 != 0 {
            return Err(Error::InversionDetected);
        }
        let k = (d / 2) as usize;
        // endpoint classes: reflection centers c = m/2 modulo d/2
        let m0 = reflections[0].1;
        if m0 % 2 != 0 {
            return Err(Error::InversionDetected);
        }
        let c0 = m0 / 2;
        let mut end0: Vec<Word> = fiber.clone();
        let mut end1: Vec<Word> = fiber.clone();
        for &(i, m) in &reflections {
            if m % 2 != 0 {
                return Err(Error::InversionDetected);
            }
            let c = m / 2;
            if (c - c0).rem_euclid(d) == 0 {
                end0.push(reduced[i].clone());
            } else if (c - c0 - k as i64).rem_euclid(d) == 0 {
                end1.push(reduced[i].clone());
            }
        }
        if end1.len() == fiber.len() {
            // other endpoint class has no generator representative; build
            // one from the first reflection and a minimal translation
            let t = translation_word(&reduced, &translations, d, sp, budgets)?;
            end1.push(reduced[reflections[0].0].concat(&t));
        }
        let translation = translation_word_dihedral(&reduced, &translations, &reflections, d, sp, budgets)?;
        Ok(CoreGraph {
            dihedral: true,
            shape: CoreShape::Segment {
                k,
                base: axis.vertex(c0)?,
                endpoint_stabilizers: [end0, end1],
                interior_stabilizers: fiber.clone(),
                translation,
            },
            fiber,
        })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A word realizing translation by `d`, via a Bezout combination of the
/// translating generators.
fn translation_word(
    reduced: &[Word],
    translations: &[(usize, i64)],
    d: i64,
    sp: &Splitting,
    budgets: &Budgets,
) -> Result<Word> {
    // prefer a single generator that already translates by +-d
    for &(i, t) in translations {
        if t == d {
            return Ok(reduced[i].clone());
        }
        if t == -d {
            return Ok(reduced[i].inverse());
        }
    }
    // Bezout: extend over the listed translations
    let mut acc: Option<(Word, i64)> = None;
    for &(i, t) in translations {
        acc = Some(match acc {
            None => (reduced[i].clone(), t),
            Some((w, cur)) => {
                let (g, x, y) = ext_gcd(cur, t);
                let combined = w.pow(x).concat(&reduced[i].pow(y));
                (combined, g)
            }
        });
    }
    match acc {
        Some((w, g)) if g.abs() == d => {
            let w = if g < 0 { w.inverse() } else { w };
            Ok(reduce_word(&w, &sp.gog, budgets, 0)?)
        }
        _ => Err(Error::invalid("failed to realize the minimal translation")),
    }
}

/// A translation by `d` in a dihedral action: a preserving generator
/// combination when available, else a product of two reflections.
fn translation_word_dihedral(
    reduced: &[Word],
    translations: &[(usize, i64)],
    reflections: &[(usize, i64)],
    d: i64,
    sp: &Splitting,
    budgets: &Budgets,
) -> Result<Word> {
    if translations.iter().any(|&(_, t)| t != 0) {
        if let Ok(w) = translation_word(reduced, translations, d, sp, budgets) {
            if let ElementType::Hyperbolic { length, .. } = element_type(&w, sp, budgets)? {
                if length == d as usize {
                    return Ok(w);
                }
            }
        }
    }
    for a in 0..reflections.len() {
        for b in 0..reflections.len() {
            if a == b {
                continue;
            }
            let (ia, ma) = reflections[a];
            let (ib, mb) = reflections[b];
            if (ma - mb).abs() == d {
                let w = reduced[ia].concat(&reduced[ib]);
                return reduce_word(&w, &sp.gog, budgets, 0);
            }
        }
    }
    Err(Error::invalid("no realization of the minimal dihedral translation"))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Generators of the pointwise axis stabilizer. Exact for commuting
/// generator sets (kernel lattice through a Smith form); otherwise the
/// zero-translation generators, pairwise Bezout combinations and
/// commutators, each verified to fix two marked axis points.
fn fiber_generators(
    reduced: &[Word],
    translations: &[(usize, i64)],
    reflections: &[(usize, i64)],
    sp: &Splitting,
    budgets: &Budgets,
    axis: &AxisWalker,
) -> Result<Vec<Word>> {
    let g = &sp.gog;
    let tree = Tree::new(sp, budgets);
    let mut commuting = true;
    'outer: for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            let c = reduced[i]
                .concat(&reduced[j])
                .concat(&reduced[i].inverse())
                .concat(&reduced[j].inverse());
            if !words_equal(&c, &Word::identity(), g, budgets)? {
                commuting = false;
                break 'outer;
            }
        }
    }
    let mut candidates: Vec<Word> = Vec::new();
    if commuting && reflections.is_empty() {
        // kernel of the translation vector, exactly
        let k = reduced.len();
        let mut tau = vec![0i64; k];
        for &(i, t) in translations {
            tau[i] = t;
        }
        let col: Vec<Vec<i64>> = tau.iter().map(|&t| vec![t]).collect();
        let s = snf::smith_normal_form(&col);
        let rank = s.diagonal().iter().filter(|&&x| x != 0).count();
        for row in s.u.iter().skip(rank) {
            let mut w = Word::identity();
            for (i, &c) in row.iter().enumerate() {
                if c != 0 {
                    w = w.concat(&reduced[i].pow(c));
                }
            }
            let w = reduce_word(&w, g, budgets, 0)?;
            if !w.is_empty() {
                candidates.push(w);
            }
        }
    } else {
        for &(i, t) in translations {
            if t == 0 {
                candidates.push(reduced[i].clone());
            }
        }
        for a in 0..translations.len() {
            for b in a + 1..translations.len() {
                let (ia, ta) = translations[a];
                let (ib, tb) = translations[b];
                if ta == 0 || tb == 0 {
                    continue;
                }
                let gg = gcd(ta, tb);
                let w = reduced[ia].pow(tb / gg).concat(&reduced[ib].pow(-ta / gg));
                let w = reduce_word(&w, g, budgets, 0)?;
                if !w.is_empty() {
                    candidates.push(w);
                }
            }
        }
        for i in 0..reduced.len() {
            for j in i + 1..reduced.len() {
                let c = reduced[i]
                    .concat(&reduced[j])
                    .concat(&reduced[i].inverse())
                    .concat(&reduced[j].inverse());
                let c = reduce_word(&c, g, budgets, 0)?;
                if !c.is_empty() {
                    candidates.push(c);
                }
            }
        }
        // reflections compose to translations; squares of reflections and
        // products of same-center reflections land in the fiber
        for a in 0..reflections.len() {
            for b in 0..reflections.len() {
                if a == b {
                    continue;
                }
                let (ia, ma) = reflections[a];
                let (ib, mb) = reflections[b];
                if ma == mb {
                    let w = reduced[ia].concat(&reduced[ib]);
                    let w = reduce_word(&w, g, budgets, 0)?;
                    if !w.is_empty() {
                        candidates.push(w);
                    }
                }
            }
        }
        for &(i, _) in reflections {
            let w = reduced[i].concat(&reduced[i]);
            let w = reduce_word(&w, g, budgets, 0)?;
            if !w.is_empty() {
                candidates.push(w);
            }
        }
    }
    // keep only verified pointwise fixers, deduplicated; in the exact
    // (commuting) branch every kernel element must fix the marked points
    let exact = commuting && reflections.is_empty();
    let mut out: Vec<Word> = Vec::new();
    let (v0, v1) = (axis.vertex(0)?, axis.vertex(1)?);
    'cand: for c in candidates {
        if !(tree.fixes(&c, &v0)? && tree.fixes(&c, &v1)?) {
            if exact {
                return Err(Error::AxisNotInvariant {
                    witness: "kernel element moves a marked axis point".into(),
                });
            }
            continue;
        }
        for seen in &out {
            if words_equal(&c, seen, g, budgets)? {
                continue 'cand;
            }
        }
        out.push(c);
    }
    Ok(out)
}
