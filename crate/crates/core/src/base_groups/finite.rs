//! Finite groups given by a full multiplication table. Element 0 is the
//! identity; every element doubles as a generator letter.

use super::{GroupSpec, Witness};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::{Letter, Word};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteTable {
    pub name: String,
    pub elems: Vec<String>,
    /// `mul[i][j]` = index of `elems[i] * elems[j]`.
    pub mul: Vec<Vec<usize>>,
}

impl FiniteTable {
    pub fn identity(&self) -> usize {
        0
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn inverse(&self, e: usize) -> usize {
        (0..self.elems.len())
            .find(|&j| self.mul[e][j] == self.identity())
            .expect("validated tables have inverses")
    }

    /// Group-axiom check: identity at index 0, inverses, associativity.
    /// Quadratic and cubic scans, so only run for |G| <= 512 at load time.
    pub fn validate(&self) -> Result<()> {
        let n = self.elems.len();
        if n == 0 {
            return Err(Error::invalid("finite group table has no elements"));
        }
        if self.mul.len() != n || self.mul.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("finite group table is not square"));
        }
        if self.mul.iter().flatten().any(|&x| x >= n) {
            return Err(Error::invalid("finite group table entry out of range"));
        }
        for i in 0..n {
            if self.mul[0][i] != i || self.mul[i][0] != i {
                return Err(Error::invalid(format!(
                    "element 0 of `{}` is not an identity",
                    self.name
                )));
            }
        }
        for i in 0..n {
            if !(0..n).any(|j| self.mul[i][j] == 0) {
                return Err(Error::invalid(format!(
                    "element `{}` of `{}` has no inverse",
                    self.elems[i], self.name
                )));
            }
        }
        if n <= 512 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                            return Err(Error::invalid(format!(
                                "multiplication table of `{}` is not associative",
                                self.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cyclic(n: usize) -> FiniteTable {
        let elems = (0..n)
            .map(|i| if i == 0 { "e".to_string() } else { format!("g{}", i) })
            .collect();
        let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteTable { name: format!("Z{}", n), elems, mul }
    }

    /// Symmetric group on `n` letters via permutation composition.
    pub fn symmetric(n: usize) -> FiniteTable {
        let perms = permutations(n);
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p*q)(x) = p(q(x))
                        let comp: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                        index[&comp]
                    })
                    .collect()
            })
            .collect();
        let elems = perms.iter().map(|p| perm_name(p)).collect();
        FiniteTable { name: format!("S{}", n), elems, mul }
    }

    /// Dihedral group of order `2n`: `r^n = s^2 = 1`, `s r s = r^-1`.
    pub fn dihedral(n: usize) -> FiniteTable {
        let order = 2 * n;
        let name = |i: usize| -> String {
            let (flip, rot) = (i >= n, i % n);
            match (flip, rot) {
                (false, 0) => "e".into(),
                (false, r) => format!("r{}", r),
                (true, 0) => "s".into(),
                (true, r) => format!("sr{}", r),
            }
        };
        // represent i < n as r^i, i >= n as s r^(i-n)
        let mul = (0..order)
            .map(|i| {
                (0..order)
                    .map(|j| {
                        let (fi, ri) = (i >= n, i % n);
                        let (fj, rj) = (j >= n, j % n);
                        // (s^fi r^ri)(s^fj r^rj) = s^(fi^fj) r^(rj + ri*(-1)^fj)
                        let f = fi ^ fj;
                        let r = if fj {
                            (n + rj - ri % n) % n
                        } else {
                            (ri + rj) % n
                        };
                        if f { n + r } else { r }
                    })
                    .collect()
            })
            .collect();
        FiniteTable { name: format!("D{}", n), elems: (0..order).map(name).collect(), mul }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for ins in 0..=p.len() {
                let mut q = p.clone();
                q.insert(ins, p.len());
                next.push(q);
            }
        }
        out = next;
    }
    // identity first, then sorted for determinism
    out.sort();
    out
}

fn perm_name(p: &[usize]) -> String {
    if p.iter().enumerate().all(|(i, &x)| i == x) {
        return "e".into();
    }
    let mut s = String::from("p");
    for &x in p {
        s.push_str(&x.to_string());
    }
    s
}

/// Built-in fingerprint targets.
pub fn builtin(name: &str) -> Option<FiniteTable> {
    match name {
        "Z2" => Some(FiniteTable::cyclic(2)),
        "Z3" => Some(FiniteTable::cyclic(3)),
        "Z4" => Some(FiniteTable::cyclic(4)),
        "Z5" => Some(FiniteTable::cyclic(5)),
        "Z6" => Some(FiniteTable::cyclic(6)),
        "S3" => Some(FiniteTable::symmetric(3)),
        "D4" => Some(FiniteTable::dihedral(4)),
        _ => None,
    }
}

pub fn evaluate(t: &FiniteTable, w: &Word) -> Result<usize> {
    let mut acc = t.identity();
    for l in &w.0 {
        match l {
            Letter::Gen { gen, pow } => {
                if *gen >= t.elems.len() {
                    return Err(Error::UnknownGenerator {
                        name: format!("#{gen}"),
                        group: t.name.clone(),
                    });
                }
                let e = if *pow >= 0 { *gen } else { t.inverse(*gen) };
                for _ in 0..pow.unsigned_abs() {
                    acc = t.mul[acc][e];
                }
            }
            _ => return Err(Error::invalid("path letter in a finite-group word")),
        }
    }
    Ok(acc)
}

/// BFS closure with predecessor words.
fn closure(t: &FiniteTable, gens: &[Word]) -> Result<HashMap<usize, Witness>> {
    let gen_elems: Vec<usize> = gens.iter().map(|g| evaluate(t, g)).collect::<Result<_>>()?;
    let mut seen: HashMap<usize, Witness> = HashMap::new();
    seen.insert(t.identity(), Witness::default());
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(t.identity());
    while let Some(e) = queue.pop_front() {
        for (i, &ge) in gen_elems.iter().enumerate() {
            for (pow, img) in [(1i64, t.mul[e][ge]), (-1, t.mul[e][t.inverse(ge)])] {
                if !seen.contains_key(&img) {
                    let mut wit = seen[&e].clone();
                    wit.factors.push((i, pow));
                    seen.insert(img, wit);
                    queue.push_back(img);
                }
            }
        }
    }
    Ok(seen)
}

pub fn membership(t: &FiniteTable, gens: &[Word], w: &Word) -> Result<Option<Witness>> {
    let e = evaluate(t, w)?;
    Ok(closure(t, gens)?.remove(&e))
}

/// Structure of the subgroup generated by `gens`: a fresh table over the
/// closure elements (ascending order, identity first), one plain word per
/// new element, and each input generator as a single element letter.
#[derive(Debug, Clone)]
pub struct FiniteSubgroup {
    pub table: FiniteTable,
    pub spec_gens: Vec<Word>,
    pub given: Vec<Word>,
}

pub fn subgroup_structure(t: &FiniteTable, gens: &[Word]) -> Result<FiniteSubgroup> {
    let closure = closure(t, gens)?;
    let mut elems: Vec<usize> = closure.keys().copied().collect();
    elems.sort();
    let index: HashMap<usize, usize> =
        elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let table = FiniteTable {
        name: format!("{}-sub{}", t.name, elems.len()),
        elems: elems.iter().map(|&e| t.elems[e].clone()).collect(),
        mul: elems
            .iter()
            .map(|&a| elems.iter().map(|&b| index[&t.mul[a][b]]).collect())
            .collect(),
    };
    let spec_gens = elems
        .iter()
        .map(|&e| if e == t.identity() { Word::identity() } else { Word::gen(e, 1) })
        .collect();
    let given = gens
        .iter()
        .map(|g| {
            let e = evaluate(t, g)?;
            let i = index[&e];
            Ok(if i == 0 { Word::identity() } else { Word::gen(i, 1) })
        })
        .collect::<Result<_>>()?;
    Ok(FiniteSubgroup { table, spec_gens, given })
}

pub fn transversal(t: &FiniteTable, gens: &[Word], bound: usize) -> Result<super::Transversal> {
    let sub = closure(t, gens)?;
    let mut reps: Vec<Word> = Vec::new();
    let mut covered = vec![false; t.elems.len()];
    let mut complete = true;
    for g in 0..t.elems.len() {
        if covered[g] {
            continue;
        }
        if reps.len() >= bound {
            complete = false;
            break;
        }
        reps.push(if g == t.identity() { Word::identity() } else { Word::gen(g, 1) });
        // right coset Hg = { h*g }
        for &h in sub.keys() {
            covered[t.mul[h][g]] = true;
        }
    }
    Ok(super::Transversal { reps, complete })
}

pub fn injective(
    t: &FiniteTable,
    images: &[Word],
    target: &GroupSpec,
    budgets: &Budgets,
) -> Result<bool> {
    // images are indexed by element; the kernel is trivial iff no
    // non-identity element maps to the identity.
    for (e, img) in images.iter().enumerate() {
        if e == t.identity() {
            continue;
        }
        if super::is_identity(img, target, budgets)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn spec(t: FiniteTable) -> GroupSpec {
    GroupSpec::Finite(Arc::new(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_groups() {
        for t in [
            FiniteTable::cyclic(1),
            FiniteTable::cyclic(4),
            FiniteTable::symmetric(3),
            FiniteTable::dihedral(4),
        ] {
            t.validate().unwrap();
        }
    }

    #[test]
    fn s3_is_nonabelian_of_order_6() {
        let s3 = FiniteTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        let noncommuting = (0..6).any(|a| (0..6).any(|b| s3.mul[a][b] != s3.mul[b][a]));
        assert!(noncommuting);
    }

    #[test]
    fn closure_witness_reaches_element() {
        let d4 = FiniteTable::dihedral(4);
        // subgroup generated by r (index 1): order 4
        let gens = vec![Word::gen(1, 1)];
        let w = Word::gen(3, 1); // r^3
        let wit = membership(&d4, &gens, &w).unwrap().unwrap();
        let eval = evaluate(&d4, &wit.evaluate(&gens)).unwrap();
        assert_eq!(eval, 3);
        assert!(membership(&d4, &gens, &Word::gen(4, 1)).unwrap().is_none());
    }
}
