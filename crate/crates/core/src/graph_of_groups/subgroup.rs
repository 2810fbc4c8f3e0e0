//! Resolution of finitely generated subgroups into structured backends.
//!
//! A bag of generator words becomes a [`ResolvedGroup`]: a fresh
//! [`GroupSpec`] isomorphic to the subgroup, with two-way word translation
//! (ambient words into the spec alphabet and back). Elliptic subgroups are
//! resolved inside the vertex backend they conjugate into; subgroups acting
//! hyperbolically are resolved through their quotient core on one of the
//! ambient graph's own one-edge splittings.
//!
//! Every resolution is self-verified: the claimed expressions are evaluated
//! back in the ambient group and compared by the word problem.

use super::reduce::{common_vertex_form, reduce_path, reduce_word};
use super::{GraphOfGroups, Letter, VertexId, Word};
use crate::base_groups::{self, abelian, finite, stallings, GroupSpec};
use crate::config::Budgets;
use crate::error::{Error, Result};
use std::sync::Arc;

pub(crate) trait Realization: std::fmt::Debug + Send + Sync {
    /// Express an ambient word in the spec alphabet; `None` when the word
    /// lies outside the subgroup.
    fn express(&self, w: &Word, budgets: &Budgets) -> Result<Option<Word>>;
    /// Evaluate a spec-alphabet word back to an ambient word.
    fn evaluate(&self, spec_word: &Word, budgets: &Budgets) -> Result<Word>;
}

/// A subgroup together with a structured model of it.
#[derive(Clone)]
pub struct ResolvedGroup {
    pub spec: GroupSpec,
    /// The (reduced, nontrivial) input generators as ambient words.
    pub gens_ambient: Vec<Word>,
    /// Each input generator expressed over the spec alphabet.
    pub given_in_spec: Vec<Word>,
    realize: Arc<dyn Realization>,
}

impl std::fmt::Debug for ResolvedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResolvedGroup").field("spec", &self.spec.describe()).finish()
    }
}

impl ResolvedGroup {
    pub fn express(&self, w: &Word, budgets: &Budgets) -> Result<Option<Word>> {
        self.realize.express(w, budgets)
    }

    pub fn evaluate(&self, spec_word: &Word, budgets: &Budgets) -> Result<Word> {
        self.realize.evaluate(spec_word, budgets)
    }

    pub fn trivial(ambient: GroupSpec) -> ResolvedGroup {
        ResolvedGroup {
            spec: GroupSpec::trivial(),
            gens_ambient: Vec::new(),
            given_in_spec: Vec::new(),
            realize: Arc::new(TrivialReal { ambient }),
        }
    }

    pub(crate) fn from_parts(
        spec: GroupSpec,
        gens_ambient: Vec<Word>,
        given_in_spec: Vec<Word>,
        realize: Arc<dyn Realization>,
    ) -> ResolvedGroup {
        ResolvedGroup { spec, gens_ambient, given_in_spec, realize }
    }
}

#[derive(Debug)]
struct TrivialReal {
    ambient: GroupSpec,
}

impl Realization for TrivialReal {
    fn express(&self, w: &Word, budgets: &Budgets) -> Result<Option<Word>> {
        Ok(base_groups::is_identity(w, &self.ambient, budgets)?.then(Word::identity))
    }

    fn evaluate(&self, _spec_word: &Word, _budgets: &Budgets) -> Result<Word> {
        Ok(Word::identity())
    }
}

/// Wrapping of a plain-backend resolution: the subgroup lives at a vertex
/// position `conj . G_vertex . conj^-1` of a graph (or directly in a plain
/// ambient group when `graph` is `None`).
struct PlainReal {
    graph: Option<Arc<GraphOfGroups>>,
    conj: Word,
    vertex: VertexId,
    backend: GroupSpec,
    spec: GroupSpec,
    /// A plain word in `backend` per spec generator.
    spec_gen_plain: Vec<Word>,
    free_basis: Option<stallings::Basis>,
}

impl std::fmt::Debug for PlainReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlainReal").field("spec", &self.spec.describe()).finish()
    }
}

impl PlainReal {
    fn extract(&self, w: &Word, budgets: &Budgets) -> Result<Option<Word>> {
        match &self.graph {
            None => Ok(Some(w.clone())),
            Some(g) => {
                let moved = self.conj.inverse().concat(w).concat(&self.conj);
                let red = reduce_path(&moved, g, self.vertex, budgets, 0)?;
                match red.0.as_slice() {
                    [] => Ok(Some(Word::identity())),
                    [Letter::Syl { vertex, word }] if *vertex == self.vertex => {
                        Ok(Some(word.clone()))
                    }
                    _ => Ok(None),
                }
            }
        }
    }

    fn wrap(&self, content: Word) -> Word {
        match &self.graph {
            None => content,
            Some(_) => {
                let syl = Word::syl(self.vertex, content);
                self.conj.concat(&syl).concat(&self.conj.inverse())
            }
        }
    }
}

impl Realization for PlainReal {
    fn express(&self, w: &Word, budgets: &Budgets) -> Result<Option<Word>> {
        let Some(content) = self.extract(w, budgets)? else { return Ok(None) };
        if let (GroupSpec::Free(f), Some(basis)) = (&self.backend, &self.free_basis) {
            return basis.express(f, &content);
        }
        let sub = base_groups::SubgroupSpec::new(self.backend.clone(), self.spec_gen_plain.clone());
        let wit = base_groups::subgroup_membership(&content, &sub, budgets)?;
        Ok(wit.map(|wit| {
            Word(wit.factors.iter().map(|&(i, p)| Letter::Gen { gen: i, pow: p }).collect())
        }))
    }

    fn evaluate(&self, spec_word: &Word, _budgets: &Budgets) -> Result<Word> {
        let content = base_groups::apply_hom(&self.spec_gen_plain, spec_word)?;
        Ok(self.wrap(content))
    }
}

/// Recursive wrapping: the subgroup conjugates into a GoGPi1 vertex group
/// and is resolved there.
#[derive(Debug)]
struct NestedReal {
    graph: Arc<GraphOfGroups>,
    conj: Word,
    vertex: VertexId,
    inner: ResolvedGroup,
}

impl Realization for NestedReal {
    fn express(&self, w: &Word, budgets: &Budgets) -> Result<Option<Word>> {
        let moved = self.conj.inverse().concat(w).concat(&self.conj);
        let red = reduce_path(&moved, &self.graph, self.vertex, budgets, 0)?;
        let content = match red.0.as_slice() {
            [] => Word::identity(),
            [Letter::Syl { vertex, word }] if *vertex == self.vertex => word.clone(),
            _ => return Ok(None),
        };
        self.inner.express(&content, budgets)
    }

    fn evaluate(&self, spec_word: &Word, budgets: &Budgets) -> Result<Word> {
        let content = self.inner.evaluate(spec_word, budgets)?;
        let syl = Word::syl(self.vertex, content);
        Ok(self.conj.concat(&syl).concat(&self.conj.inverse()))
    }
}

fn plain_resolution(
    backend: &GroupSpec,
    plain_gens: &[Word],
    graph: Option<Arc<GraphOfGroups>>,
    conj: Word,
    vertex: VertexId,
) -> Result<(GroupSpec, Vec<Word>, Vec<Word>, Arc<dyn Realization>)> {
    match backend {
        GroupSpec::FreeAbelian(a) => {
            let s = abelian::subgroup_structure(a, plain_gens)?;
            let spec = GroupSpec::FreeAbelian(Arc::new(s.spec));
            let real = PlainReal {
                graph,
                conj,
                vertex,
                backend: backend.clone(),
                spec: spec.clone(),
                spec_gen_plain: s.spec_gens.clone(),
                free_basis: None,
            };
            Ok((spec, s.spec_gens, s.given, Arc::new(real)))
        }
        GroupSpec::Finite(t) => {
            let s = finite::subgroup_structure(t, plain_gens)?;
            let spec = GroupSpec::Finite(Arc::new(s.table));
            let real = PlainReal {
                graph,
                conj,
                vertex,
                backend: backend.clone(),
                spec: spec.clone(),
                spec_gen_plain: s.spec_gens.clone(),
                free_basis: None,
            };
            Ok((spec, s.spec_gens, s.given, Arc::new(real)))
        }
        GroupSpec::Free(f) => {
            let basis = stallings::subgroup_basis(f, plain_gens)?;
            let names: Vec<String> = (0..basis.rank()).map(|i| format!("b{}", i)).collect();
            let spec = GroupSpec::Free(Arc::new(crate::base_groups::FreeSpec { names }));
            let spec_gens = basis.basis_words.clone();
            let given = plain_gens
                .iter()
                .map(|g| {
                    basis.express(f, g)?.ok_or_else(|| {
                        Error::invalid("free subgroup generator missing from its own fold")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let real = PlainReal {
                graph,
                conj,
                vertex,
                backend: backend.clone(),
                spec: spec.clone(),
                spec_gen_plain: spec_gens.clone(),
                free_basis: Some(basis),
            };
            Ok((spec, spec_gens, given, Arc::new(real)))
        }
        GroupSpec::GoGPi1(_) => Err(Error::invalid("plain_resolution on a GoGPi1 backend")),
    }
}

/// Resolve the subgroup of `ambient` generated by `gens`.
pub fn resolve_subgroup(
    gens: &[Word],
    ambient: &GroupSpec,
    budgets: &Budgets,
    depth: usize,
) -> Result<ResolvedGroup> {
    if depth > budgets.depth {
        return Err(Error::truncation("subgroup resolution depth", budgets.depth));
    }
    // normalize and drop trivial generators
    let mut reduced: Vec<Word> = Vec::new();
    for g in gens {
        let r = match ambient {
            GroupSpec::GoGPi1(gr) => reduce_word(g, gr, budgets, depth)?,
            plain => base_groups::canonical_form(g, plain)?,
        };
        if !r.is_empty() {
            reduced.push(r);
        }
    }
    if reduced.is_empty() {
        return Ok(ResolvedGroup::trivial(ambient.clone()));
    }
    let resolved = match ambient {
        GroupSpec::GoGPi1(gr) => {
            match common_vertex_form(gr, &reduced, budgets, depth)? {
                Some(form) => resolve_from_form(&reduced, gr, form, budgets, depth)?,
                None => crate::tree_action::resolve_by_action(&reduced, gr, budgets, depth)?,
            }
        }
        plain => {
            let (spec, _sg, given, real) =
                plain_resolution(plain, &reduced, None, Word::identity(), VertexId(0))?;
            ResolvedGroup::from_parts(spec, reduced.clone(), given, real)
        }
    };
    verify_resolution(&resolved, ambient, budgets)?;
    Ok(resolved)
}

fn verify_resolution(
    resolved: &ResolvedGroup,
    ambient: &GroupSpec,
    budgets: &Budgets,
) -> Result<()> {
    for (g, e) in resolved.gens_ambient.iter().zip(&resolved.given_in_spec) {
        let back = resolved.evaluate(e, budgets)?;
        let same = base_groups::is_identity(&back.concat(&g.inverse()), ambient, budgets)?;
        if !same {
            return Err(Error::invalid(format!(
                "subgroup resolution self-check failed for a generator of {}",
                resolved.spec.describe()
            )));
        }
    }
    Ok(())
}

fn resolve_from_form(
    reduced: &[Word],
    gr: &Arc<GraphOfGroups>,
    form: super::reduce::CommonVertexForm,
    budgets: &Budgets,
    depth: usize,
) -> Result<ResolvedGroup> {
    let inner_spec = gr.vertex(form.vertex).group.clone();
    match &inner_spec {
        GroupSpec::GoGPi1(_) => {
            let inner = resolve_subgroup(&form.plain_words, &inner_spec, budgets, depth + 1)?;
            let given = inner.given_in_spec.clone();
            let spec = inner.spec.clone();
            let real =
                NestedReal { graph: gr.clone(), conj: form.conj, vertex: form.vertex, inner };
            Ok(ResolvedGroup::from_parts(spec, reduced.to_vec(), given, Arc::new(real)))
        }
        plain => {
            let (spec, _sg, given, real) = plain_resolution(
                plain,
                &form.plain_words,
                Some(gr.clone()),
                form.conj,
                form.vertex,
            )?;
            Ok(ResolvedGroup::from_parts(spec, reduced.to_vec(), given, real))
        }
    }
}

/// Try to resolve a subgroup at a hinted conjugator position. Returns
/// `None` when the generators do not all land there.
pub fn resolve_with_hint(
    gens: &[Word],
    gr: &Arc<GraphOfGroups>,
    hint: &Word,
    budgets: &Budgets,
    depth: usize,
) -> Result<Option<ResolvedGroup>> {
    let mut reduced: Vec<Word> = Vec::new();
    for g in gens {
        let r = reduce_word(g, gr, budgets, depth)?;
        if !r.is_empty() {
            reduced.push(r);
        }
    }
    if reduced.is_empty() {
        return Ok(Some(ResolvedGroup::trivial(GroupSpec::GoGPi1(gr.clone()))));
    }
    let form = super::reduce::common_vertex_form_hinted(
        gr,
        &reduced,
        std::slice::from_ref(hint),
        budgets,
        depth,
    )?;
    match form {
        Some(form) => {
            let resolved = resolve_from_form(&reduced, gr, form, budgets, depth)?;
            verify_resolution(&resolved, &GroupSpec::GoGPi1(gr.clone()), budgets)?;
            Ok(Some(resolved))
        }
        None => Ok(None),
    }
}

/// Generators of a subgroup as closed words anchored at the base, used by
/// ellipticity checks that only need raw generator words.
pub fn subgroup_gens_elliptic_words(r: &ResolvedGroup) -> &[Word] {
    &r.gens_ambient
}
