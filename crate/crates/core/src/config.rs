use serde::{Deserialize, Serialize};

/// Exploration budgets shared by the word-problem oracles and the tree
/// machinery. Exceeding a budget is always a hard error, never a silent
/// "no" — see [`crate::error::Error`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Nesting depth for oracle recursion into `GoGPi1` vertex groups.
    pub depth: usize,
    /// Word-length budget (syllable count) for reductions.
    pub syllables: usize,
    /// Bound on lazily enumerated coset transversals.
    pub transversal: usize,
    /// Fixed-vertex search radius on Bass-Serre trees.
    pub radius: usize,
    /// Word length of the acting-group ball used for orbit identification.
    pub ball_len: usize,
    /// Element cap for the acting-group ball.
    pub ball_cap: usize,
    /// Product length searched for a minimal-translation hyperbolic element.
    pub horizon: usize,
    /// Bound for element-order probes (boundary piece classification).
    pub order_bound: u64,
    /// Axis positions explored on either side of the base point.
    pub span: usize,
    /// Generator budget for fingerprint hom-counting after simplification.
    pub hom_gens: usize,
    /// Enumeration budget for essential curves.
    pub curve_budget: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            depth: 3,
            syllables: 64,
            transversal: 64,
            radius: 16,
            ball_len: 4,
            ball_cap: 4096,
            horizon: 2,
            order_bound: 64,
            span: 24,
            hom_gens: 7,
            curve_budget: 8,
        }
    }
}

/// Engine-level caps. `gamma_cap` stands in for the accessibility bound on
/// vertex counts and `unfold_cap` for the bound on elementary-unfolding
/// iterations; neither is computed from the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub gamma_cap: usize,
    pub unfold_cap: usize,
    pub budgets: Budgets,
    /// Names of finite target groups for fingerprint hom counts.
    /// Resolved against the built-in list and project-declared groups.
    pub fingerprint_targets: Vec<String>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            gamma_cap: 32,
            unfold_cap: 64,
            budgets: Budgets::default(),
            fingerprint_targets: vec!["Z2".into(), "Z3".into(), "S3".into(), "D4".into()],
        }
    }
}
