//! Finitely generated abelian groups: free rank plus a torsion divisor
//! chain. Elements are exponent vectors; torsion coordinates are reduced
//! into `[0, d)` for canonical forms. All decisions run through integer
//! linear algebra on exponent lattices.

use super::snf::{self, IntMat};
use super::{GroupSpec, Transversal, Witness};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{Letter, Word};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianSpec {
    pub names: Vec<String>,
    /// Order per generator: 0 for infinite. Free generators first, then a
    /// divisibility chain `2 <= d1 | d2 | ...`.
    pub orders: Vec<u64>,
}

impl AbelianSpec {
    pub fn free(names: &[&str]) -> AbelianSpec {
        AbelianSpec {
            names: names.iter().map(|s| s.to_string()).collect(),
            orders: vec![0; names.len()],
        }
    }

    pub fn with_torsion(free: &[&str], torsion: &[(&str, u64)]) -> AbelianSpec {
        let mut names: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        let mut orders = vec![0u64; free.len()];
        for (n, d) in torsion {
            names.push(n.to_string());
            orders.push(*d);
        }
        AbelianSpec { names, orders }
    }

    pub fn rank(&self) -> usize {
        self.orders.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion(&self) -> Vec<u64> {
        self.orders.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.names.len() != self.orders.len() {
            return Err(Error::invalid("abelian spec: names/orders length mismatch"));
        }
        let torsion = self.torsion();
        if self.orders.iter().take(self.rank()).any(|&d| d != 0) {
            return Err(Error::invalid("abelian spec: free generators must precede torsion"));
        }
        for w in torsion.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::invalid(format!(
                    "torsion divisors must form a divisibility chain, got {:?}",
                    torsion
                )));
            }
        }
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::invalid("torsion divisors must be >= 2"));
        }
        Ok(())
    }
}

pub fn exponents(a: &AbelianSpec, w: &Word) -> Result<Vec<i64>> {
    let mut v = vec![0i64; a.names.len()];
    for l in &w.0 {
        match l {
            Letter::Gen { gen, pow } => {
                if *gen >= a.names.len() {
                    return Err(Error::UnknownGenerator {
                        name: format!("#{gen}"),
                        group: format!("FreeAbelian({:?})", a.names),
                    });
                }
                v[*gen] += pow;
            }
            _ => return Err(Error::invalid("path letter in an abelian word")),
        }
    }
    Ok(v)
}

pub fn reduce_vec(a: &AbelianSpec, v: &[i64]) -> Vec<i64> {
    v.iter()
        .zip(&a.orders)
        .map(|(&x, &d)| if d == 0 { x } else { x.rem_euclid(d as i64) })
        .collect()
}

pub fn from_exponents(a: &AbelianSpec, v: &[i64]) -> Word {
    let letters = v
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x != 0)
        .map(|(i, &x)| Letter::Gen { gen: i, pow: x })
        .collect();
    let _ = a;
    Word(letters)
}

pub fn order_of_vec(a: &AbelianSpec, v: &[i64]) -> Option<u64> {
    let mut order = 1u64;
    for (&x, &d) in v.iter().zip(&a.orders) {
        if x == 0 {
            continue;
        }
        if d == 0 {
            return None;
        }
        let step = d / gcd_u(d, x.unsigned_abs() % d);
        order = lcm_u(order, step);
    }
    Some(order)
}

fn gcd_u(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u(b, a % b)
    }
}

fn lcm_u(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u(a, b) * b
    }
}

/// Rows: generator exponent vectors, then `d_i * e_i` per torsion coordinate.
fn relation_matrix(a: &AbelianSpec, gens: &[Word]) -> Result<IntMat> {
    let n = a.names.len();
    let mut m: IntMat = gens.iter().map(|g| exponents(a, g)).collect::<Result<_>>()?;
    for (i, &d) in a.orders.iter().enumerate() {
        if d != 0 {
            let mut row = vec![0i64; n];
            row[i] = d as i64;
            m.push(row);
        }
    }
    Ok(m)
}

pub fn membership(a: &AbelianSpec, gens: &[Word], w: &Word) -> Result<Option<Witness>> {
    let target = exponents(a, w)?;
    if target.iter().all(|&x| x == 0) {
        return Ok(Some(Witness::default()));
    }
    let m = relation_matrix(a, gens)?;
    if m.is_empty() {
        let red = reduce_vec(a, &target);
        return Ok(if red.iter().all(|&x| x == 0) { Some(Witness::default()) } else { None });
    }
    match snf::solve_left(&m, &target) {
        Some(y) => {
            let factors = y[..gens.len()]
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect();
            Ok(Some(Witness { factors }))
        }
        None => Ok(None),
    }
}

/// Subgroup index in the ambient group, `None` when infinite.
pub fn subgroup_index(a: &AbelianSpec, gens: &[Word]) -> Result<Option<u64>> {
    if a.names.is_empty() {
        return Ok(Some(1));
    }
    let m = relation_matrix(a, gens)?;
    if m.is_empty() {
        return Ok(None);
    }
    Ok(snf::lattice_index(&m))
}

/// Shortlex enumeration of canonical forms; torsion exponents stay in
/// `[0, d)` so their letters are always positive.
pub fn enumerate(a: &AbelianSpec, max_len: usize, cap: usize) -> Vec<Word> {
    let n = a.names.len();
    let mut out = Vec::new();
    'outer: for len in 0..=max_len {
        let mut stack: Vec<(usize, Vec<i64>, usize)> = vec![(0, vec![0i64; n], len)];
        // depth-first in spelling-lex order: per generator, exponents
        // descending positive, then negatives (only for free gens), then 0.
        while let Some((g, v, rest)) = stack.pop() {
            if g == n {
                if rest == 0 {
                    out.push(from_exponents(a, &v));
                    if out.len() >= cap {
                        break 'outer;
                    }
                }
                continue;
            }
            let mut choices: Vec<i64> = Vec::new();
            choices.push(0);
            let free = a.orders[g] == 0;
            let hi = if free { rest } else { rest.min(a.orders[g] as usize - 1) };
            if free {
                for e in 1..=hi {
                    choices.push(-(e as i64));
                }
            }
            for e in 1..=hi {
                choices.push(e as i64);
            }
            // pushed in reverse priority: the stack pops positives
            // descending, then negatives ascending in magnitude, then zero
            for e in choices {
                let mut v2 = v.clone();
                v2[g] = e;
                stack.push((g + 1, v2, rest - e.unsigned_abs() as usize));
            }
        }
    }
    out
}

pub fn transversal(a: &AbelianSpec, gens: &[Word], bound: usize) -> Result<Transversal> {
    let index = subgroup_index(a, gens)?;
    let goal = index.map(|i| (i as usize).min(bound));
    let mut reps: Vec<Word> = Vec::new();
    let mut rep_vecs: Vec<Vec<i64>> = Vec::new();
    let max_len = 4 * bound + 8;
    'outer: for len in 0..=max_len {
        for w in enumerate_fixed_len(a, len) {
            let v = exponents(a, &w)?;
            let fresh = rep_vecs.iter().all(|r| {
                let diff: Vec<i64> = v.iter().zip(r).map(|(x, y)| x - y).collect();
                membership(a, gens, &from_exponents(a, &diff)).map(|m| m.is_none()).unwrap_or(true)
            });
            if fresh {
                reps.push(w);
                rep_vecs.push(v);
                if reps.len() >= bound || Some(reps.len()) == goal {
                    break 'outer;
                }
            }
        }
        if Some(reps.len()) == goal {
            break;
        }
    }
    let complete = match index {
        Some(i) => reps.len() as u64 == i,
        None => false,
    };
    if !complete && reps.len() < bound {
        return Err(Error::truncation("abelian coset transversal enumeration", max_len));
    }
    Ok(Transversal { reps, complete })
}

fn enumerate_fixed_len(a: &AbelianSpec, len: usize) -> Vec<Word> {
    let all = enumerate(a, len, usize::MAX / 2);
    all.into_iter()
        .filter(|w| {
            w.0.iter()
                .map(|l| match l {
                    Letter::Gen { pow, .. } => pow.unsigned_abs() as usize,
                    _ => 0,
                })
                .sum::<usize>()
                == len
        })
        .collect()
}

/// Structure of the subgroup generated by `gens`: a fresh abelian spec, a
/// plain word in `a` per new generator, and each input generator expressed
/// over the new generators.
#[derive(Debug, Clone)]
pub struct AbelianSubgroup {
    pub spec: AbelianSpec,
    pub spec_gens: Vec<Word>,
    pub given: Vec<Word>,
}

pub fn subgroup_structure(a: &AbelianSpec, gens: &[Word]) -> Result<AbelianSubgroup> {
    let k = gens.len();
    let n = a.names.len();
    if k == 0 {
        return Ok(AbelianSubgroup {
            spec: AbelianSpec::free(&[]),
            spec_gens: Vec::new(),
            given: Vec::new(),
        });
    }
    let m: IntMat = gens.iter().map(|g| exponents(a, g)).collect::<Result<_>>()?;
    // kernel lattice K = { x in Z^k : x*M lies in the torsion lattice }
    let mut stacked = m.clone();
    for (i, &d) in a.orders.iter().enumerate() {
        if d != 0 {
            let mut row = vec![0i64; n];
            row[i] = d as i64;
            stacked.push(row);
        }
    }
    let kernel: IntMat = if n == 0 {
        snf::identity(k)
    } else {
        let s = snf::smith_normal_form(&stacked);
        let rank = s.diagonal().iter().filter(|&&d| d != 0).count();
        s.u[rank..].iter().map(|row| row[..k].to_vec()).collect()
    };
    let (orders, v): (Vec<u64>, IntMat) = if kernel.is_empty() {
        ((0..k).map(|_| 0).collect(), snf::identity(k))
    } else {
        let s = snf::smith_normal_form(&kernel);
        let diag = s.diagonal();
        let orders =
            (0..k).map(|j| if j < diag.len() { diag[j] as u64 } else { 0 }).collect();
        (orders, s.v)
    };
    let (h, vinv) = snf::hermite(&v);
    if h != snf::identity(k) {
        return Err(Error::invalid("unimodular inverse failed in abelian subgroup structure"));
    }
    // keep generators of order != 1: free first, then torsion ascending
    let mut keep: Vec<usize> = (0..k).filter(|&j| orders[j] != 1).collect();
    keep.sort_by_key(|&j| (orders[j] != 0, orders[j]));
    let names: Vec<String> = (0..keep.len()).map(|i| format!("s{}", i)).collect();
    let spec = AbelianSpec {
        names,
        orders: keep.iter().map(|&j| orders[j]).collect(),
    };
    spec.validate()?;
    // new generator j = product of the input gens with exponents Vinv[j]
    let spec_gens: Vec<Word> = keep
        .iter()
        .map(|&j| {
            let mut w = Word::identity();
            for (i, &c) in vinv[j].iter().enumerate() {
                if c != 0 {
                    w = w.concat(&gens[i].pow(c));
                }
            }
            w
        })
        .collect();
    // input generator i has new coordinates row i of V
    let slot: std::collections::HashMap<usize, usize> =
        keep.iter().enumerate().map(|(pos, &j)| (j, pos)).collect();
    let mut given: Vec<Word> = Vec::with_capacity(k);
    for i in 0..k {
        let mut vec = vec![0i64; keep.len()];
        for (j, &c) in v[i].iter().enumerate() {
            if let Some(&pos) = slot.get(&j) {
                vec[pos] = c;
            }
        }
        given.push(from_exponents(&spec, &reduce_vec(&spec, &vec)));
    }
    Ok(AbelianSubgroup { spec, spec_gens, given })
}

pub fn injective(
    a: &AbelianSpec,
    images: &[Word],
    target: &GroupSpec,
    budgets: &Budgets,
) -> Result<bool> {
    let k = a.names.len();
    match target {
        GroupSpec::FreeAbelian(t) => {
            let n = t.names.len();
            let mut m: IntMat = images.iter().map(|w| exponents(t, w)).collect::<Result<_>>()?;
            let img_rows = m.len();
            for (i, &d) in t.orders.iter().enumerate() {
                if d != 0 {
                    let mut row = vec![0i64; n];
                    row[i] = d as i64;
                    m.push(row);
                }
            }
            if m.is_empty() {
                // target trivial: injective iff source trivial
                return Ok(k == 0);
            }
            let s = snf::smith_normal_form(&m);
            let diag = s.diagonal();
            let rank = diag.iter().filter(|&&d| d != 0).count();
            for (i, row) in s.u.iter().enumerate() {
                let zero_row = i >= rank;
                if !zero_row {
                    continue;
                }
                // kernel vector of the stacked lattice; project to source part
                let src_part = &row[..img_rows.min(k)];
                let mut v = vec![0i64; k];
                v[..src_part.len()].copy_from_slice(src_part);
                if reduce_vec(a, &v).iter().any(|&x| x != 0) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GroupSpec::Finite(_) => {
            if a.rank() > 0 {
                return Ok(false);
            }
            // finite source: check only identity maps to identity
            let card: u64 = a.torsion().iter().product();
            if card > 4096 {
                return Err(Error::BudgetExhausted {
                    context: "injectivity enumeration of a large torsion source".into(),
                });
            }
            for w in enumerate(a, card as usize + 1, usize::MAX / 2) {
                if w.is_empty() {
                    continue;
                }
                let img = super::apply_hom(images, &w)?;
                if super::is_identity(&img, target, budgets)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GroupSpec::Free(_) => {
            if !a.torsion().is_empty() {
                // torsion cannot embed in a torsion-free group unless the
                // torsion part is trivial, which validate() excludes
                return Ok(false);
            }
            match a.rank() {
                0 => Ok(true),
                1 => Ok(!super::is_identity(&images[0], target, budgets)?),
                _ => Ok(false),
            }
        }
        GroupSpec::GoGPi1(gog) => {
            match crate::graph_of_groups::reduce::common_vertex_form(gog, images, budgets, 0)? {
                Some(form) => {
                    let inner = gog.vertex(form.vertex).group.clone();
                    injective_dispatch(a, &form.plain_words, &inner, budgets)
                }
                None => Err(Error::UnsupportedBackend {
                    op: "injectivity_check",
                    detail: "images do not land in a common vertex group of the GoGPi1 target".into(),
                }),
            }
        }
    }
}

fn injective_dispatch(
    a: &AbelianSpec,
    images: &[Word],
    target: &GroupSpec,
    budgets: &Budgets,
) -> Result<bool> {
    injective(a, images, target, budgets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> AbelianSpec {
        AbelianSpec::free(&["a", "b"])
    }

    #[test]
    fn canonical_reduces_torsion() {
        let a = AbelianSpec::with_torsion(&[], &[("t", 3)]);
        let v = exponents(&a, &Word::gen(0, 3)).unwrap();
        assert!(reduce_vec(&a, &v).iter().all(|&x| x == 0));
        let v = exponents(&a, &Word::gen(0, -1)).unwrap();
        assert_eq!(reduce_vec(&a, &v), vec![2]);
    }

    #[test]
    fn membership_with_witness() {
        // a^2 b^2 in <ab> <= Z^2, witness (ab)^2
        let a = z2();
        let gens = vec![Word(vec![
            Letter::Gen { gen: 0, pow: 1 },
            Letter::Gen { gen: 1, pow: 1 },
        ])];
        let w = Word(vec![Letter::Gen { gen: 0, pow: 2 }, Letter::Gen { gen: 1, pow: 2 }]);
        let wit = membership(&a, &gens, &w).unwrap().unwrap();
        assert_eq!(wit.factors, vec![(0, 2)]);
    }

    #[test]
    fn transversal_of_index_two() {
        let a = z2();
        let gens = vec![Word::gen(0, 2), Word::gen(1, 1)];
        let t = transversal(&a, &gens, 10).unwrap();
        assert!(t.complete);
        assert_eq!(t.reps.len(), 2);
        assert!(t.reps[0].is_empty());
        assert_eq!(t.reps[1], Word::gen(0, 1));
    }

    #[test]
    fn truncated_transversal_order() {
        let a = z2();
        let gens = vec![Word::gen(0, 1)];
        let t = transversal(&a, &gens, 3).unwrap();
        assert!(!t.complete);
        assert_eq!(t.reps, vec![Word::identity(), Word::gen(1, 1), Word::gen(1, -1)]);
    }

    #[test]
    fn enumerate_shortlex_order() {
        let a = z2();
        let words = enumerate(&a, 2, 100);
        assert!(words[0].is_empty());
        assert_eq!(words[1], Word::gen(0, 1));
        assert_eq!(words[2], Word::gen(0, -1));
        assert_eq!(words[3], Word::gen(1, 1));
        assert_eq!(words[4], Word::gen(1, -1));
        assert_eq!(words[5], Word::gen(0, 2));
    }
}
