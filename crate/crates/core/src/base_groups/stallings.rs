//! Stallings foldings for free groups: subgroup membership with witness
//! readback, folding rank, finite-index detection and coset transversals.

use super::{free_letters, free_reduce, FreeSpec, GroupSpec, Transversal, Witness};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::graph_of_groups::Word;
use std::collections::{HashMap, HashSet, VecDeque};

/// Letters are `2*gen + dir`, dir 1 meaning the inverse.
fn letter(gen: usize, neg: bool) -> usize {
    2 * gen + neg as usize
}

fn letter_inv(l: usize) -> usize {
    l ^ 1
}

/// Folded subgroup automaton over a free group of the given rank.
pub struct Folded {
    pub rank: usize,
    pub adj: Vec<Vec<Option<usize>>>,
    pub base: usize,
}

impl Folded {
    pub fn states(&self) -> usize {
        self.adj.len()
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|row| row.iter().all(|t| t.is_some()))
    }

    /// Trace a freely reduced letter sequence; `None` when the path leaves
    /// the automaton.
    pub fn trace(&self, from: usize, letters: &[usize]) -> Option<usize> {
        let mut at = from;
        for &l in letters {
            at = self.adj[at][l]?;
        }
        Some(at)
    }

    /// Spanning tree (BFS, letters in order) and the non-tree transitions,
    /// each a free-basis element of the subgroup.
    fn basis_data(&self) -> (Vec<Option<(usize, usize)>>, Vec<(usize, usize, usize)>) {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.states()];
        let mut seen = vec![false; self.states()];
        seen[self.base] = true;
        let mut queue = VecDeque::from([self.base]);
        while let Some(s) = queue.pop_front() {
            for l in 0..2 * self.rank {
                if let Some(t) = self.adj[s][l] {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((s, l));
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut non_tree = Vec::new();
        let mut tree_pairs: HashSet<(usize, usize)> = HashSet::new();
        for (t, p) in parent.iter().enumerate() {
            if let Some((s, l)) = p {
                tree_pairs.insert((*s, *l));
                tree_pairs.insert((self.adj[*s][*l].unwrap(), letter_inv(*l)));
                let _ = t;
            }
        }
        for s in 0..self.states() {
            for l in (0..2 * self.rank).step_by(2) {
                // record each geometric edge once, in its positive direction
                if let Some(t) = self.adj[s][l] {
                    if !tree_pairs.contains(&(s, l)) {
                        non_tree.push((s, l, t));
                    }
                }
            }
        }
        (parent, non_tree)
    }

    fn path_to_base(&self, parent: &[Option<(usize, usize)>], s: usize) -> Vec<usize> {
        // letters read from base to s
        let mut letters = Vec::new();
        let mut cur = s;
        while let Some((p, l)) = parent[cur] {
            letters.push(l);
            cur = p;
        }
        letters.reverse();
        letters
    }
}

fn word_letters(f: &FreeSpec, w: &Word) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for (g, p) in free_letters(f, w)? {
        let l = letter(g, p < 0);
        for _ in 0..p.unsigned_abs() {
            match out.last() {
                Some(&last) if last == letter_inv(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
    }
    Ok(out)
}

/// Build and fold the wedge of generator loops.
pub fn fold(f: &FreeSpec, gens: &[Word]) -> Result<Folded> {
    let rank = f.names.len();
    let mut n_states = 1usize;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for g in gens {
        let letters = word_letters(f, g)?;
        let mut at = 0usize;
        for (i, &l) in letters.iter().enumerate() {
            let dst = if i + 1 == letters.len() {
                0
            } else {
                n_states += 1;
                n_states - 1
            };
            edges.push((at, l, dst));
            at = dst;
        }
    }
    let mut uf: Vec<usize> = (0..n_states).collect();
    fn find(uf: &mut Vec<usize>, x: usize) -> usize {
        if uf[x] != x {
            let r = find(uf, uf[x]);
            uf[x] = r;
        }
        uf[x]
    }
    loop {
        let mut merged = false;
        let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
        for &(s, l, t) in &edges {
            for (src, lab, dst) in [(s, l, t), (t, letter_inv(l), s)] {
                let rs = find(&mut uf, src);
                let rt = find(&mut uf, dst);
                match slot.get(&(rs, lab)).copied() {
                    Some(prev) => {
                        let rp = find(&mut uf, prev);
                        if rp != rt {
                            uf[rp] = rt;
                            merged = true;
                        }
                    }
                    None => {
                        slot.insert((rs, lab), rt);
                    }
                }
            }
            if merged {
                break;
            }
        }
        if !merged {
            break;
        }
    }
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut count = 0usize;
    for s in 0..n_states {
        let r = find(&mut uf, s);
        remap.entry(r).or_insert_with(|| {
            count += 1;
            count - 1
        });
    }
    let mut out = Folded {
        rank,
        adj: vec![vec![None; 2 * rank.max(1)]; count],
        base: remap[&find(&mut uf, 0)],
    };
    for &(s, l, t) in &edges {
        let rs = remap[&find(&mut uf, s)];
        let rt = remap[&find(&mut uf, t)];
        out.adj[rs][l] = Some(rt);
        out.adj[rt][letter_inv(l)] = Some(rs);
    }
    Ok(out)
}

/// Folding rank: the first Betti number of the folded core graph.
pub fn subgroup_rank(f: &FreeSpec, gens: &[Word]) -> Result<usize> {
    let g = fold(f, gens)?;
    let (_, non_tree) = g.basis_data();
    Ok(non_tree.len())
}

/// Folded automaton with a basis readback for the subgroup it recognizes.
pub struct Basis {
    folded: Folded,
    edge_index: HashMap<(usize, usize), (usize, bool)>,
    pub basis_words: Vec<Word>,
}

impl Basis {
    /// Express an ambient word over the basis, or `None` when outside.
    pub fn express(&self, f: &FreeSpec, w: &Word) -> Result<Option<Word>> {
        let letters = word_letters(f, w)?;
        match self.folded.trace(self.folded.base, &letters) {
            Some(end) if end == self.folded.base => {}
            _ => return Ok(None),
        }
        let mut at = self.folded.base;
        let mut out: Vec<(usize, i64)> = Vec::new();
        for &l in &letters {
            if let Some(&(i, inv)) = self.edge_index.get(&(at, l)) {
                out.push((i, if inv { -1 } else { 1 }));
            }
            at = self.folded.adj[at][l].unwrap();
        }
        Ok(Some(free_reduce(&out)))
    }

    pub fn rank(&self) -> usize {
        self.basis_words.len()
    }
}

/// Fold the generators and return a free basis of the subgroup.
pub fn subgroup_basis(f: &FreeSpec, gens: &[Word]) -> Result<Basis> {
    let folded = fold(f, gens)?;
    let (parent, non_tree) = folded.basis_data();
    let edge_index: HashMap<(usize, usize), (usize, bool)> = non_tree
        .iter()
        .enumerate()
        .flat_map(|(i, &(s, l, t))| [(((s, l)), (i, false)), (((t, letter_inv(l))), (i, true))])
        .collect();
    let basis_words = non_tree
        .iter()
        .map(|&(s, l, t)| {
            let mut letters = folded.path_to_base(&parent, s);
            letters.push(l);
            let back = folded.path_to_base(&parent, t);
            letters.extend(back.iter().rev().map(|&x| letter_inv(x)));
            letters_to_word(&letters)
        })
        .collect();
    Ok(Basis { folded, edge_index, basis_words })
}

pub fn membership(f: &FreeSpec, gens: &[Word], w: &Word) -> Result<Option<Witness>> {
    let letters = word_letters(f, w)?;
    if letters.is_empty() {
        return Ok(Some(Witness::default()));
    }
    let g = fold(f, gens)?;
    match g.trace(g.base, &letters) {
        Some(end) if end == g.base => {}
        _ => return Ok(None),
    }
    // basis elements b_i and the expression of w over them
    let (parent, non_tree) = g.basis_data();
    let edge_index: HashMap<(usize, usize), (usize, bool)> = non_tree
        .iter()
        .enumerate()
        .flat_map(|(i, &(s, l, t))| {
            [(((s, l)), (i, false)), (((t, letter_inv(l))), (i, true))]
        })
        .collect();
    let read = |letters: &[usize]| -> Vec<(usize, bool)> {
        let mut at = g.base;
        let mut out = Vec::new();
        for &l in letters {
            if let Some(&(i, inv)) = edge_index.get(&(at, l)) {
                out.push((i, inv));
            }
            at = g.adj[at][l].unwrap();
        }
        out
    };
    let w_in_basis = read(&letters);
    // original generators expressed over the basis
    let gens_in_basis: Vec<Vec<(usize, bool)>> = gens
        .iter()
        .map(|gw| Ok(read(&word_letters(f, gw)?)))
        .collect::<Result<_>>()?;
    let _ = parent;
    match express_over(&gens_in_basis, &w_in_basis, non_tree.len()) {
        Some(factors) => Ok(Some(Witness { factors })),
        None => Err(Error::truncation("free-group witness readback", 1 << 16)),
    }
}

/// Express `target` (word over a free basis of rank `n`) as a product of the
/// given basis-words via Nielsen reduction with transformation tracking.
fn express_over(
    gens: &[Vec<(usize, bool)>],
    target: &[(usize, bool)],
    n: usize,
) -> Option<Vec<(usize, i64)>> {
    let _ = n;
    type W = Vec<(usize, bool)>;
    fn inv(w: &W) -> W {
        w.iter().rev().map(|&(i, s)| (i, !s)).collect()
    }
    fn mul(a: &W, b: &W) -> W {
        let mut out = a.clone();
        for &x in b {
            if out.last() == Some(&(x.0, !x.1)) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }
    // (word over basis, expression over original gens)
    let mut set: Vec<(W, Vec<(usize, i64)>)> = gens
        .iter()
        .enumerate()
        .map(|(j, w)| (w.clone(), vec![(j, 1)]))
        .collect();
    let expr_inv = |e: &Vec<(usize, i64)>| -> Vec<(usize, i64)> {
        e.iter().rev().map(|&(j, p)| (j, -p)).collect()
    };
    let expr_mul = |a: &Vec<(usize, i64)>, b: &Vec<(usize, i64)>| -> Vec<(usize, i64)> {
        let mut out = a.clone();
        out.extend(b.iter().cloned());
        out
    };
    // Nielsen reduction
    loop {
        set.retain(|(w, _)| !w.is_empty());
        let mut changed = false;
        'pairs: for i in 0..set.len() {
            for j in 0..set.len() {
                if i == j {
                    continue;
                }
                let (wi, wj) = (set[i].0.clone(), set[j].0.clone());
                let cands = [
                    (mul(&wi, &wj), false, false),
                    (mul(&wi, &inv(&wj)), false, true),
                    (mul(&wj, &wi), true, false),
                    (mul(&inv(&wj), &wi), true, true),
                ];
                for (cand, left, invert) in cands {
                    if cand.len() < wi.len() {
                        let ej = if invert { expr_inv(&set[j].1) } else { set[j].1.clone() };
                        let new_expr = if left {
                            expr_mul(&ej, &set[i].1)
                        } else {
                            expr_mul(&set[i].1, &ej)
                        };
                        set[i] = (cand, new_expr);
                        changed = true;
                        break 'pairs;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // greedy factorization with backtracking
    let mut memo: HashSet<W> = HashSet::new();
    fn dfs(
        set: &[(W, Vec<(usize, i64)>)],
        w: &W,
        memo: &mut HashSet<W>,
        out: &mut Vec<(usize, i64)>,
        fuel: &mut usize,
        inv: &dyn Fn(&W) -> W,
        mul: &dyn Fn(&W, &W) -> W,
    ) -> bool {
        if w.is_empty() {
            return true;
        }
        if *fuel == 0 || !memo.insert(w.clone()) {
            return false;
        }
        *fuel -= 1;
        for (k, (n, _)) in set.iter().enumerate() {
            for neg in [false, true] {
                let nw = if neg { inv(n) } else { n.clone() };
                let rest = mul(&inv(&nw), w);
                if rest.len() < w.len() {
                    out.push((k, if neg { -1 } else { 1 }));
                    if dfs(set, &rest, memo, out, fuel, inv, mul) {
                        return true;
                    }
                    out.pop();
                }
            }
        }
        false
    }
    let mut factors: Vec<(usize, i64)> = Vec::new();
    let mut fuel = 1usize << 14;
    let ok = dfs(
        &set,
        &target.to_vec(),
        &mut memo,
        &mut factors,
        &mut fuel,
        &inv,
        &mul,
    );
    if !ok {
        return None;
    }
    // translate set indices back to original generator expressions
    let mut out = Vec::new();
    for (k, p) in factors {
        let e = &set[k].1;
        if p >= 0 {
            out.extend(e.iter().cloned());
        } else {
            out.extend(e.iter().rev().map(|&(j, q)| (j, -q)));
        }
    }
    Some(out)
}

pub fn transversal(f: &FreeSpec, gens: &[Word], bound: usize) -> Result<Transversal> {
    let g = fold(f, gens)?;
    if g.is_complete() && f.names.len() > 0 {
        // finite index: one representative per state, by BFS access word
        let (parent, _) = g.basis_data();
        let mut reps = Vec::new();
        let mut complete = true;
        for s in 0..g.states() {
            if reps.len() >= bound {
                complete = false;
                break;
            }
            let letters = g.path_to_base(&parent, s);
            reps.push(letters_to_word(&letters));
        }
        return Ok(Transversal { reps, complete });
    }
    // infinite index (or trivial rank): lazy shortlex enumeration
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for w in enumerate_letters(f.names.len(), 2 * bound + 2, 64 * bound + 64) {
        if out.len() >= bound {
            return Ok(Transversal { reps: out, complete: false });
        }
        let fresh = reps.iter().all(|r| {
            // right cosets: Hw = Hr iff w * r^-1 in H
            let mut wr = w.clone();
            for &l in r.iter().rev() {
                let li = letter_inv(l);
                if wr.last() == Some(&letter_inv(li)) {
                    wr.pop();
                } else {
                    wr.push(li);
                }
            }
            !matches!(g.trace(g.base, &wr), Some(e) if e == g.base)
        });
        if fresh {
            out.push(letters_to_word(&w));
            reps.push(w);
        }
    }
    Ok(Transversal { reps: out, complete: f.names.is_empty() })
}

fn letters_to_word(letters: &[usize]) -> Word {
    let seq: Vec<(usize, i64)> =
        letters.iter().map(|&l| (l / 2, if l % 2 == 0 { 1 } else { -1 })).collect();
    free_reduce(&seq)
}

/// Freely reduced letter sequences in shortlex order.
fn enumerate_letters(rank: usize, max_len: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..2 * rank {
                if w.last().map_or(false, |&last| last == letter_inv(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if out.len() >= cap {
            out.truncate(cap);
            break;
        }
    }
    out
}

pub fn enumerate(rank: usize, max_len: usize, cap: usize) -> Vec<Word> {
    enumerate_letters(rank, max_len, cap).iter().map(|l| letters_to_word(l)).collect()
}

pub fn injective(
    f: &FreeSpec,
    images: &[Word],
    target: &GroupSpec,
    budgets: &Budgets,
) -> Result<bool> {
    let r = f.names.len();
    match target {
        GroupSpec::Free(t) => Ok(subgroup_rank(t, images)? == r),
        GroupSpec::FreeAbelian(_) => match r {
            0 => Ok(true),
            1 => Ok(super::element_order(&images[0], target, 64, budgets)?.is_none()),
            _ => Ok(false),
        },
        GroupSpec::Finite(_) => Ok(r == 0),
        GroupSpec::GoGPi1(gog) => {
            match crate::graph_of_groups::reduce::common_vertex_form(gog, images, budgets, 0)? {
                Some(form) => {
                    let inner = gog.vertex(form.vertex).group.clone();
                    injective(f, &form.plain_words, &inner, budgets)
                }
                None => Err(Error::UnsupportedBackend {
                    op: "injectivity_check",
                    detail: "images do not land in a common vertex group of the GoGPi1 target"
                        .into(),
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_of_groups::Letter;

    fn f2() -> FreeSpec {
        FreeSpec { names: vec!["x".into(), "y".into()] }
    }

    #[test]
    fn membership_in_even_powers() {
        let f = FreeSpec { names: vec!["x".into()] };
        let gens = vec![Word::gen(0, 2)];
        assert!(membership(&f, &gens, &Word::gen(0, 1)).unwrap().is_none());
        let wit = membership(&f, &gens, &Word::gen(0, 4)).unwrap().unwrap();
        assert_eq!(wit.factors.iter().map(|&(_, p)| p).sum::<i64>(), 2);
    }

    #[test]
    fn witness_is_sound() {
        let f = f2();
        // H = <xy, y> contains x
        let gens = vec![
            Word(vec![Letter::Gen { gen: 0, pow: 1 }, Letter::Gen { gen: 1, pow: 1 }]),
            Word::gen(1, 1),
        ];
        let w = Word::gen(0, 1);
        let wit = membership(&f, &gens, &w).unwrap().unwrap();
        let eval = wit.evaluate(&gens);
        let q = eval.concat(&w.inverse());
        let red = free_reduce(&free_letters(&f, &q).unwrap());
        assert!(red.is_empty(), "witness {:?} evaluates wrong", wit);
    }

    #[test]
    fn rank_detects_non_injective() {
        let f = FreeSpec { names: vec!["x".into()] };
        // <x^2, x^3> has rank 1
        assert_eq!(subgroup_rank(&f, &[Word::gen(0, 2), Word::gen(0, 3)]).unwrap(), 1);
        let f2 = f2();
        assert_eq!(
            subgroup_rank(&f2, &[Word::gen(0, 1), Word::gen(1, 1)]).unwrap(),
            2
        );
    }

    #[test]
    fn finite_index_transversal() {
        let f = FreeSpec { names: vec!["x".into()] };
        // <x^3> has index 3
        let t = transversal(&f, &[Word::gen(0, 3)], 10).unwrap();
        assert!(t.complete);
        assert_eq!(t.reps.len(), 3);
    }
}
