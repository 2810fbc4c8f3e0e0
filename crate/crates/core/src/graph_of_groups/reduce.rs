//! Britton/Serre reduction for edge-path words, the pinch membership
//! oracles, and cyclic reduction.
//!
//! A pinch is a subword `e+ . s . e-` whose middle syllable lies in the
//! image of the edge group on the far side of `e`; it rewrites through the
//! edge isomorphism to a single syllable on the near side. A word with no
//! pinches has minimal edge-length among all words for the same element, so
//! edge-length and the edge-id sequence of the output are canonical.
//!
//! Membership questions inside `GoGPi1` vertex groups recurse with a hard
//! depth budget; hitting a budget raises `OracleTruncation`, never a silent
//! "not a member".

use super::{EdgeId, GraphOfGroups, Letter, VertexId, Word};
use crate::base_groups::{self, GroupSpec, SubgroupSpec, Witness};
use crate::config::Budgets;
use crate::error::{Error, Result};

fn check_depth(depth: usize, budgets: &Budgets) -> Result<()> {
    if depth > budgets.depth {
        Err(Error::truncation("GoGPi1 oracle recursion depth", budgets.depth))
    } else {
        Ok(())
    }
}

/// Normalize a syllable content word in the group at `v`.
fn syllable_normal(
    g: &GraphOfGroups,
    v: VertexId,
    w: &Word,
    budgets: &Budgets,
    depth: usize,
) -> Result<Word> {
    match &g.vertex(v).group {
        GroupSpec::GoGPi1(sub) => reduce_word(w, sub, budgets, depth + 1),
        plain => base_groups::canonical_form(w, plain),
    }
}

/// Merge adjacent syllables, drop identity syllables, verify the path.
fn clean(
    letters: &[Letter],
    g: &GraphOfGroups,
    start: VertexId,
    budgets: &Budgets,
    depth: usize,
) -> Result<Vec<Letter>> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    let mut at = start;
    for l in letters {
        match l {
            Letter::Gen { .. } => {
                return Err(Error::invalid("bare generator letter in an edge-path word"))
            }
            Letter::Syl { vertex, word } => {
                if *vertex != at {
                    return Err(Error::invalid(format!(
                        "syllable at vertex {} while the path is at {}",
                        vertex.0, at.0
                    )));
                }
                let merged = match out.last() {
                    Some(Letter::Syl { vertex: pv, word: pw }) if *pv == at => {
                        let m = pw.concat(word);
                        out.pop();
                        m
                    }
                    _ => word.clone(),
                };
                let n = syllable_normal(g, at, &merged, budgets, depth)?;
                if !n.is_empty() {
                    out.push(Letter::Syl { vertex: at, word: n });
                }
            }
            Letter::Edge { edge, rev } => {
                let e = g.edge(*edge);
                let (src, dst) = e.side(*rev);
                if src != at {
                    return Err(Error::invalid(format!(
                        "edge {} crossed from {} while the path is at {}",
                        edge.0, src.0, at.0
                    )));
                }
                out.push(l.clone());
                at = dst;
            }
        }
    }
    // merging only shrinks, so this caps pre-reduction inputs (runaway
    // recursion protection) without tripping on honest concatenations
    if out.len() > budgets.syllables * 8 {
        return Err(Error::truncation("word length during reduction", budgets.syllables));
    }
    Ok(out)
}

/// Does `s` (an element of the vertex group on the `to_side` of edge `e`)
/// lie in the image of the edge group there? On success returns the
/// preimage as a word in the edge-group generators.
pub fn edge_image_membership(
    g: &GraphOfGroups,
    e: EdgeId,
    to_side: bool,
    s: &Word,
    budgets: &Budgets,
    depth: usize,
) -> Result<Option<Word>> {
    check_depth(depth, budgets)?;
    let edge = g.edge(e);
    let (vertex, map) = if to_side { (edge.to, &edge.map_to) } else { (edge.from, &edge.map_from) };
    let group = &g.vertex(vertex).group;
    let wit = nested_membership(s, &map.images, group, budgets, depth)?;
    Ok(wit.map(|w| witness_to_word(&w)))
}

fn witness_to_word(w: &Witness) -> Word {
    Word(w.factors.iter().map(|&(i, p)| Letter::Gen { gen: i, pow: p }).collect())
}

/// Membership of `w` in the subgroup generated by `gens` inside `group`.
/// Plain backends decide exactly; `GoGPi1` backends succeed when the
/// generators land in a common vertex position (the designated-edge-subgroup
/// case), and report `UnsupportedBackend` otherwise.
pub fn nested_membership(
    w: &Word,
    gens: &[Word],
    group: &GroupSpec,
    budgets: &Budgets,
    depth: usize,
) -> Result<Option<Witness>> {
    check_depth(depth, budgets)?;
    match group {
        GroupSpec::GoGPi1(sub) => {
            let form = common_vertex_form(sub, gens, budgets, depth + 1)?;
            let Some(form) = form else {
                return Err(Error::UnsupportedBackend {
                    op: "subgroup_membership",
                    detail: format!(
                        "subgroup generators of {} do not land in a common vertex position",
                        sub.name
                    ),
                });
            };
            let conj_inv = form.conj.inverse();
            let moved = conj_inv.concat(w).concat(&form.conj);
            let start = form.vertex;
            let red = reduce_path(&moved, sub, start, budgets, depth + 1)?;
            match red.0.as_slice() {
                [] => Ok(Some(Witness::default())),
                [Letter::Syl { vertex, word }] if *vertex == form.vertex => nested_membership(
                    word,
                    &form.plain_words,
                    &sub.vertex(form.vertex).group,
                    budgets,
                    depth + 1,
                ),
                _ => Ok(None),
            }
        }
        plain => {
            let sub = SubgroupSpec::new(plain.clone(), gens.to_vec());
            base_groups::subgroup_membership(w, &sub, budgets)
        }
    }
}

/// A family of elements of `pi1(g)` all lying in one vertex position:
/// `words[i] = conj . syl(vertex, plain_words[i]) . conj^-1`.
#[derive(Debug, Clone)]
pub struct CommonVertexForm {
    pub vertex: VertexId,
    pub conj: Word,
    pub plain_words: Vec<Word>,
}

/// Search for a common vertex position for the given closed words, trying
/// the supplied hint conjugators first and then prefixes of each reduced
/// word.
pub fn common_vertex_form_hinted(
    g: &GraphOfGroups,
    words: &[Word],
    hints: &[Word],
    budgets: &Budgets,
    depth: usize,
) -> Result<Option<CommonVertexForm>> {
    check_depth(depth, budgets)?;
    let reduced: Vec<Word> =
        words.iter().map(|w| reduce_word(w, g, budgets, depth)).collect::<Result<_>>()?;
    if reduced.iter().all(|w| w.is_empty()) {
        return Ok(Some(CommonVertexForm {
            vertex: g.base,
            conj: Word::identity(),
            plain_words: words.iter().map(|_| Word::identity()).collect(),
        }));
    }
    let mut candidates: Vec<Word> = hints.to_vec();
    for w in &reduced {
        for k in 0..=w.0.len() {
            candidates.push(Word(w.0[..k].to_vec()));
        }
    }
    'cand: for conj in candidates {
        let Ok(end) = g.path_end(g.base, &conj) else { continue };
        let conj_inv = conj.inverse();
        let mut plain = Vec::with_capacity(reduced.len());
        for w in &reduced {
            let moved = conj_inv.concat(w).concat(&conj);
            let red = match reduce_path(&moved, g, end, budgets, depth) {
                Ok(r) => r,
                Err(Error::OracleTruncation { .. }) => continue 'cand,
                Err(e) => return Err(e),
            };
            match red.0.as_slice() {
                [] => plain.push(Word::identity()),
                [Letter::Syl { vertex, word }] if *vertex == end => plain.push(word.clone()),
                _ => continue 'cand,
            }
        }
        return Ok(Some(CommonVertexForm { vertex: end, conj, plain_words: plain }));
    }
    Ok(None)
}

pub fn common_vertex_form(
    g: &GraphOfGroups,
    words: &[Word],
    budgets: &Budgets,
    depth: usize,
) -> Result<Option<CommonVertexForm>> {
    common_vertex_form_hinted(g, words, &[], budgets, depth)
}

/// Britton reduction of an arbitrary path word starting at `start`.
pub fn reduce_path(
    w: &Word,
    g: &GraphOfGroups,
    start: VertexId,
    budgets: &Budgets,
    depth: usize,
) -> Result<Word> {
    check_depth(depth, budgets)?;
    let mut items = clean(&w.0, g, start, budgets, depth)?;
    'outer: loop {
        let mut i = 0usize;
        while i < items.len() {
            let Letter::Edge { edge, rev } = items[i] else {
                i += 1;
                continue;
            };
            let (mut j, mut middle) = (i + 1, None::<Word>);
            if let Some(Letter::Syl { word, .. }) = items.get(j) {
                middle = Some(word.clone());
                j += 1;
            }
            let back = matches!(
                items.get(j),
                Some(Letter::Edge { edge: e2, rev: r2 }) if *e2 == edge && *r2 == !rev
            );
            if back {
                // middle syllable sits on the far side of the crossing
                let far_is_to = !rev;
                let s = middle.unwrap_or_default();
                if let Some(c) = edge_image_membership(g, edge, far_is_to, &s, budgets, depth)? {
                    let near = g.edge(edge).side(rev).0;
                    let near_map =
                        if rev { &g.edge(edge).map_to } else { &g.edge(edge).map_from };
                    let replacement = base_groups::apply_hom(&near_map.images, &c)?;
                    let mut next: Vec<Letter> = items[..i].to_vec();
                    if !replacement.is_empty() {
                        next.push(Letter::Syl { vertex: near, word: replacement });
                    }
                    next.extend_from_slice(&items[j + 1..]);
                    items = clean(&next, g, start, budgets, depth)?;
                    continue 'outer;
                }
            }
            i += 1;
        }
        break;
    }
    Ok(Word(items))
}

/// Britton reduction of a closed word at the base vertex.
pub fn reduce_word(w: &Word, g: &GraphOfGroups, budgets: &Budgets, depth: usize) -> Result<Word> {
    let end = g.path_end(g.base, w)?;
    if end != g.base {
        return Err(Error::invalid(format!(
            "group-element word must close at the base vertex (ends at {})",
            end.0
        )));
    }
    reduce_path(w, g, g.base, budgets, depth)
}

pub fn is_identity_in(
    w: &Word,
    g: &GraphOfGroups,
    budgets: &Budgets,
    depth: usize,
) -> Result<bool> {
    Ok(reduce_word(w, g, budgets, depth)?.is_empty())
}

pub fn words_equal(u: &Word, v: &Word, g: &GraphOfGroups, budgets: &Budgets) -> Result<bool> {
    is_identity_in(&u.concat(&v.inverse()), g, budgets, 0)
}

/// Cyclic reduction: returns `(w', u)` with `w = u . w' . u^-1`, where `w'`
/// is a closed path of minimal edge-length in the conjugacy class, anchored
/// at the end vertex of the (open path) conjugator `u`.
pub fn cyclically_reduce(
    w: &Word,
    g: &GraphOfGroups,
    budgets: &Budgets,
) -> Result<(Word, Word)> {
    let mut conj = Word::identity();
    let mut cur = reduce_word(w, g, budgets, 0)?;
    let mut at = g.base;
    loop {
        if cur.edge_len() == 0 {
            break;
        }
        // peel conjugating ends: first and last letters inverse to each other
        let peeled = {
            let n = cur.0.len();
            if n >= 2 {
                match (&cur.0[0], &cur.0[n - 1]) {
                    (
                        Letter::Edge { edge: e1, rev: r1 },
                        Letter::Edge { edge: e2, rev: r2 },
                    ) if e1 == e2 && *r1 != *r2 => {
                        let first = Letter::Edge { edge: *e1, rev: *r1 };
                        let middle = Word(cur.0[1..n - 1].to_vec());
                        Some((first, middle))
                    }
                    (
                        Letter::Syl { vertex: v1, word: w1 },
                        Letter::Syl { vertex: v2, word: w2 },
                    ) if v1 == v2 => {
                        // close the seam: rotate the leading syllable around
                        let merged = w2.concat(w1);
                        let mut mid: Vec<Letter> = cur.0[1..n - 1].to_vec();
                        mid.push(Letter::Syl { vertex: *v2, word: merged });
                        conj = conj.concat(&Word(vec![Letter::Syl {
                            vertex: *v1,
                            word: w1.clone(),
                        }]));
                        cur = reduce_path(&Word(mid), g, at, budgets, 0)?;
                        continue;
                    }
                    _ => None,
                }
            } else {
                None
            }
        };
        if let Some((first, middle)) = peeled {
            let (_, dst) = match first {
                Letter::Edge { edge, rev } => g.edge(edge).side(rev),
                _ => unreachable!(),
            };
            conj = conj.concat(&Word(vec![first]));
            at = dst;
            cur = reduce_path(&middle, g, at, budgets, 0)?;
            continue;
        }
        // try a one-step rotation (syllable-then-edge or bare edge) to
        // expose a seam pinch; keep it only when it strictly shortens
        let mut rotated = None;
        let take = match cur.0.as_slice() {
            [Letter::Syl { .. }, Letter::Edge { .. }, ..] => 2,
            [Letter::Edge { .. }, ..] => 1,
            _ => 0,
        };
        if take > 0 {
            let head = Word(cur.0[..take].to_vec());
            let rest = Word(cur.0[take..].to_vec());
            let new_at = g.path_end(at, &head)?;
            let candidate = reduce_path(&rest.concat(&head), g, new_at, budgets, 0)?;
            if candidate.edge_len() < cur.edge_len() {
                rotated = Some((candidate, head, new_at));
            }
        }
        match rotated {
            Some((candidate, head, new_at)) => {
                conj = conj.concat(&head);
                at = new_at;
                cur = candidate;
            }
            None => break,
        }
    }
    Ok((cur, conj))
}

/// Membership in a designated edge subgroup of a splitting's vertex group,
/// exposed for the tree machinery.
pub fn designated_membership(
    g: &GraphOfGroups,
    e: EdgeId,
    to_side: bool,
    s: &Word,
    budgets: &Budgets,
) -> Result<Option<Word>> {
    edge_image_membership(g, e, to_side, s, budgets, 0)
}
