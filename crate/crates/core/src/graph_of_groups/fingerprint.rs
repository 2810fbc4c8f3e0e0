//! Computable isomorphism-invariant surrogate for fundamental groups:
//! the abelianization (as a Smith diagonal) together with exact counts of
//! homomorphisms into a configured list of finite target groups. Every edit
//! of a decomposition must preserve the fingerprint exactly; the engine
//! audits this after each step.

use super::presentation::Presentation;
use super::GraphOfGroups;
use crate::base_groups::snf;
use crate::base_groups::FiniteTable;
use crate::config::Budgets;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    /// Free rank of the abelianization.
    pub rank: usize,
    /// Nontrivial invariant factors, ascending.
    pub torsion: Vec<u64>,
    /// Exact homomorphism counts into the named finite targets.
    pub hom_counts: BTreeMap<String, u64>,
}

impl Fingerprint {
    pub fn summary(&self) -> String {
        format!(
            "rank {}, torsion {:?}, homs {:?}",
            self.rank,
            self.torsion,
            self.hom_counts.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>()
        )
    }
}

/// Count homomorphisms from the presented group into a finite group by
/// exhaustive assignment of generator images with relator verification.
fn hom_count(p: &Presentation, target: &FiniteTable, budget_gens: usize) -> Result<u64> {
    let n = p.gens.len();
    if n > budget_gens {
        return Err(Error::FingerprintBudget { gens: n, budget: budget_gens });
    }
    let order = target.elems.len();
    let mut assignment = vec![0usize; n];
    let mut count = 0u64;
    let inv: Vec<usize> = (0..order).map(|e| target.inverse(e)).collect();
    loop {
        let ok = p.relators.iter().all(|r| {
            let mut acc = target.identity();
            for &(g, pw) in r {
                let e = if pw >= 0 { assignment[g] } else { inv[assignment[g]] };
                for _ in 0..pw.unsigned_abs() {
                    acc = target.mul[acc][e];
                }
            }
            acc == target.identity()
        });
        if ok {
            count += 1;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return Ok(count);
            }
            assignment[i] += 1;
            if assignment[i] < order {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

pub fn fingerprint_of_presentation(
    p: &Presentation,
    targets: &[(String, Arc<FiniteTable>)],
    budgets: &Budgets,
) -> Result<Fingerprint> {
    let simple = p.simplify();
    let m = simple.relation_matrix();
    let (rank, torsion) = if simple.gens.is_empty() {
        (0, Vec::new())
    } else if m.is_empty() {
        (simple.gens.len(), Vec::new())
    } else {
        let s = snf::smith_normal_form(&m);
        let diag = s.diagonal();
        let nonzero: Vec<u64> = diag.iter().filter(|&&d| d != 0).map(|&d| d as u64).collect();
        let rank = simple.gens.len() - nonzero.len();
        let torsion = nonzero.into_iter().filter(|&d| d > 1).collect();
        (rank, torsion)
    };
    let mut hom_counts = BTreeMap::new();
    for (name, table) in targets {
        hom_counts.insert(name.clone(), hom_count(&simple, table, budgets.hom_gens)?);
    }
    Ok(Fingerprint { rank, torsion, hom_counts })
}

pub fn fingerprint(
    g: &GraphOfGroups,
    targets: &[(String, Arc<FiniteTable>)],
    budgets: &Budgets,
) -> Result<Fingerprint> {
    let p = super::presentation::fundamental_group_presentation(g)?;
    fingerprint_of_presentation(&p, targets, budgets)
}

/// The default target list.
pub fn default_targets() -> Vec<(String, Arc<FiniteTable>)> {
    ["Z2", "Z3", "S3", "D4"]
        .iter()
        .map(|n| {
            (
                n.to_string(),
                Arc::new(crate::base_groups::finite::builtin(n).expect("builtin target")),
            )
        })
        .collect()
}
