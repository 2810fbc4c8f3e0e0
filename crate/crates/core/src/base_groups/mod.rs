//! Decidable group backends.
//!
//! Every higher layer consumes groups through this uniform surface: the word
//! problem, subgroup membership with witnesses, coset transversals, element
//! orders and injectivity checks. Four backends exist: finite groups given
//! by a multiplication table, finitely generated abelian groups, free
//! groups, and fundamental groups of graphs of groups (`GoGPi1`), which
//! delegate all element-level questions to the graph machinery.

pub mod abelian;
pub mod finite;
pub mod snf;
pub mod stallings;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{self, GraphOfGroups, Letter, Word};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub use abelian::AbelianSpec;
pub use finite::FiniteTable;
pub use snf::{smith_normal_form, IntMat, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Finite(Arc<FiniteTable>),
    FreeAbelian(Arc<AbelianSpec>),
    Free(Arc<FreeSpec>),
    GoGPi1(Arc<GraphOfGroups>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeSpec {
    pub names: Vec<String>,
}

impl GroupSpec {
    pub fn free_abelian(names: &[&str]) -> GroupSpec {
        GroupSpec::FreeAbelian(Arc::new(AbelianSpec::free(names)))
    }

    pub fn trivial() -> GroupSpec {
        GroupSpec::FreeAbelian(Arc::new(AbelianSpec::free(&[])))
    }

    pub fn free(names: &[&str]) -> GroupSpec {
        GroupSpec::Free(Arc::new(FreeSpec { names: names.iter().map(|s| s.to_string()).collect() }))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupSpec::Finite(_) => "Finite",
            GroupSpec::FreeAbelian(_) => "FreeAbelian",
            GroupSpec::Free(_) => "Free",
            GroupSpec::GoGPi1(_) => "GoGPi1",
        }
    }

    pub fn is_plain(&self) -> bool {
        !matches!(self, GroupSpec::GoGPi1(_))
    }

    /// Generator count of a plain backend (finite groups: all elements).
    pub fn gen_count(&self) -> usize {
        match self {
            GroupSpec::Finite(t) => t.elems.len(),
            GroupSpec::FreeAbelian(a) => a.names.len(),
            GroupSpec::Free(f) => f.names.len(),
            GroupSpec::GoGPi1(_) => 0,
        }
    }

    pub fn gen_name(&self, i: usize) -> &str {
        match self {
            GroupSpec::Finite(t) => &t.elems[i],
            GroupSpec::FreeAbelian(a) => &a.names[i],
            GroupSpec::Free(f) => &f.names[i],
            GroupSpec::GoGPi1(_) => "",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupSpec::Finite(t) => format!("Finite({}, |G|={})", t.name, t.elems.len()),
            GroupSpec::FreeAbelian(a) => format!(
                "FreeAbelian(rank={}, torsion={:?})",
                a.rank(),
                a.torsion()
            ),
            GroupSpec::Free(f) => format!("Free(rank={})", f.names.len()),
            GroupSpec::GoGPi1(g) => format!("GoGPi1({})", g.name),
        }
    }

    /// True when the backend is the trivial group (decidably).
    pub fn is_trivial_group(&self) -> bool {
        match self {
            GroupSpec::Finite(t) => t.elems.len() == 1,
            GroupSpec::FreeAbelian(a) => a.names.is_empty(),
            GroupSpec::Free(f) => f.names.is_empty(),
            GroupSpec::GoGPi1(_) => false,
        }
    }

}

/// A finitely generated subgroup of an ambient group, listed by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub ambient: GroupSpec,
    pub gens: Vec<Word>,
}

impl SubgroupSpec {
    pub fn new(ambient: GroupSpec, gens: Vec<Word>) -> Self {
        SubgroupSpec { ambient, gens }
    }
}

/// A homomorphism given by generator images. Sources must be plain backends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub images: Vec<Word>,
}

/// A word written in the generators of a subgroup: the product of
/// `subgroup.gens[i]^pow` over the listed factors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub factors: Vec<(usize, i64)>,
}

impl Witness {
    pub fn evaluate(&self, gens: &[Word]) -> Word {
        let mut out = Word::identity();
        for &(i, p) in &self.factors {
            out = out.concat(&gens[i].pow(p));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transversal {
    pub reps: Vec<Word>,
    pub complete: bool,
}

/// Word-problem oracle. For `GoGPi1` the word must be an edge-path word and
/// the question is delegated to Britton reduction.
pub fn is_identity(w: &Word, g: &GroupSpec, budgets: &Budgets) -> Result<bool> {
    match g {
        GroupSpec::GoGPi1(gog) => graph_of_groups::is_identity_in(w, gog, budgets, 0),
        _ => Ok(canonical_form(w, g)?.is_empty()),
    }
}

/// Canonical form in a plain backend: finite groups reduce to a single
/// element letter, abelian groups to a sorted exponent vector with torsion
/// coordinates in `[0, d)`, free groups to the freely reduced word.
pub fn canonical_form(w: &Word, g: &GroupSpec) -> Result<Word> {
    match g {
        GroupSpec::Finite(t) => {
            let e = finite::evaluate(t, w)?;
            Ok(if e == t.identity() { Word::identity() } else { Word::gen(e, 1) })
        }
        GroupSpec::FreeAbelian(a) => {
            let v = abelian::exponents(a, w)?;
            Ok(abelian::from_exponents(a, &abelian::reduce_vec(a, &v)))
        }
        GroupSpec::Free(f) => {
            let letters = free_letters(f, w)?;
            Ok(free_reduce(&letters))
        }
        GroupSpec::GoGPi1(_) => Err(Error::UnsupportedBackend {
            op: "canonical_form",
            detail: "GoGPi1 words are normalized by graph_of_groups::reduce_word".into(),
        }),
    }
}

pub(crate) fn free_letters(f: &FreeSpec, w: &Word) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::new();
    for l in &w.0 {
        match l {
            Letter::Gen { gen, pow } => {
                if *gen >= f.names.len() {
                    return Err(Error::UnknownGenerator {
                        name: format!("#{gen}"),
                        group: format!("Free(rank={})", f.names.len()),
                    });
                }
                if *pow != 0 {
                    out.push((*gen, *pow));
                }
            }
            _ => return Err(Error::invalid("path letter in a free-group word")),
        }
    }
    Ok(out)
}

pub(crate) fn free_reduce(letters: &[(usize, i64)]) -> Word {
    let mut stack: Vec<(usize, i64)> = Vec::new();
    for &(g, p) in letters {
        if p == 0 {
            continue;
        }
        match stack.last_mut() {
            Some((tg, tp)) if *tg == g => {
                *tp += p;
                if *tp == 0 {
                    stack.pop();
                }
            }
            _ => stack.push((g, p)),
        }
    }
    Word(stack.into_iter().map(|(g, p)| Letter::Gen { gen: g, pow: p }).collect())
}

/// Membership with witness. Finite ambients enumerate the closure, abelian
/// ambients solve against the Hermite form of the generator exponent matrix,
/// free ambients run a Stallings folding with path readback.
pub fn subgroup_membership(
    w: &Word,
    h: &SubgroupSpec,
    budgets: &Budgets,
) -> Result<Option<Witness>> {
    match &h.ambient {
        GroupSpec::Finite(t) => finite::membership(t, &h.gens, w),
        GroupSpec::FreeAbelian(a) => abelian::membership(a, &h.gens, w),
        GroupSpec::Free(f) => stallings::membership(f, &h.gens, w),
        GroupSpec::GoGPi1(_) => {
            let _ = budgets;
            Err(Error::UnsupportedBackend {
                op: "subgroup_membership",
                detail: "membership in GoGPi1 ambients is provided only for designated edge subgroups".into(),
            })
        }
    }
}

/// Right-coset transversal of `h` in its ambient group, identity first, in
/// shortlex order of canonical forms. `require_complete` turns truncation
/// into an error.
pub fn coset_transversal(
    h: &SubgroupSpec,
    bound: usize,
    require_complete: bool,
) -> Result<Transversal> {
    let t = match &h.ambient {
        GroupSpec::Finite(t) => finite::transversal(t, &h.gens, bound)?,
        GroupSpec::FreeAbelian(a) => abelian::transversal(a, &h.gens, bound)?,
        GroupSpec::Free(f) => stallings::transversal(f, &h.gens, bound)?,
        GroupSpec::GoGPi1(_) => {
            return Err(Error::UnsupportedBackend {
                op: "coset_transversal",
                detail: "GoGPi1 transversals are enumerated by the tree machinery".into(),
            })
        }
    };
    if require_complete && !t.complete {
        return Err(Error::InfiniteIndexUnbounded { bound });
    }
    Ok(t)
}

/// Least `n <= bound` with `w^n = 1`, or `None`.
pub fn element_order(w: &Word, g: &GroupSpec, bound: u64, budgets: &Budgets) -> Result<Option<u64>> {
    match g {
        GroupSpec::FreeAbelian(a) => {
            let v = abelian::exponents(a, w)?;
            Ok(abelian::order_of_vec(a, &v).filter(|&n| n <= bound))
        }
        GroupSpec::Finite(t) => {
            let e = finite::evaluate(t, w)?;
            let mut acc = e;
            for n in 1..=bound.min(t.elems.len() as u64) {
                if acc == t.identity() {
                    return Ok(Some(n));
                }
                acc = t.mul[acc][e];
            }
            Ok(None)
        }
        GroupSpec::Free(f) => {
            let r = canonical_form(w, &GroupSpec::Free(f.clone()))?;
            Ok(if r.is_empty() { Some(1) } else { None })
        }
        GroupSpec::GoGPi1(gog) => {
            let mut acc = Word::identity();
            for n in 1..=bound {
                acc = graph_of_groups::reduce_word(&acc.concat(w), gog, budgets, 0)?;
                if acc.is_empty() {
                    return Ok(Some(n));
                }
            }
            Ok(None)
        }
    }
}

/// Trivial-kernel check. Finite sources enumerate, abelian sources compare
/// rank and torsion through Smith forms, free sources compare folding ranks.
pub fn injectivity_check(f: &Homomorphism, budgets: &Budgets) -> Result<bool> {
    if f.images.len() != f.source.gen_count() {
        return Err(Error::invalid(format!(
            "homomorphism needs {} generator images, got {}",
            f.source.gen_count(),
            f.images.len()
        )));
    }
    match &f.source {
        GroupSpec::GoGPi1(_) => Err(Error::UnsupportedBackend {
            op: "injectivity_check",
            detail: "GoGPi1 sources are out of scope".into(),
        }),
        GroupSpec::Finite(t) => finite::injective(t, &f.images, &f.target, budgets),
        GroupSpec::FreeAbelian(a) => abelian::injective(a, &f.images, &f.target, budgets),
        GroupSpec::Free(fr) => stallings::injective(fr, &f.images, &f.target, budgets),
    }
}

/// Substitute generator images into a plain-backend word.
pub fn apply_hom(images: &[Word], w: &Word) -> Result<Word> {
    let mut out = Word::identity();
    for l in &w.0 {
        match l {
            Letter::Gen { gen, pow } => {
                let img = images.get(*gen).ok_or_else(|| Error::UnknownGenerator {
                    name: format!("#{gen}"),
                    group: "homomorphism source".into(),
                })?;
                out = out.concat(&img.pow(*pow));
            }
            _ => return Err(Error::invalid("apply_hom expects a plain generator word")),
        }
    }
    Ok(out)
}

/// Shortlex enumeration of plain-backend words by canonical spelling.
/// Yields canonical forms of pairwise distinct elements, identity first.
pub fn enumerate_elements(g: &GroupSpec, max_len: usize, cap: usize) -> Result<Vec<Word>> {
    match g {
        GroupSpec::Finite(t) => Ok((0..t.elems.len().min(cap))
            .map(|e| if e == t.identity() { Word::identity() } else { Word::gen(e, 1) })
            .collect()),
        GroupSpec::FreeAbelian(a) => Ok(abelian::enumerate(a, max_len, cap)),
        GroupSpec::Free(f) => Ok(stallings::enumerate(f.names.len(), max_len, cap)),
        GroupSpec::GoGPi1(_) => Err(Error::UnsupportedBackend {
            op: "enumerate_elements",
            detail: "use graph-of-groups ball enumeration".into(),
        }),
    }
}

