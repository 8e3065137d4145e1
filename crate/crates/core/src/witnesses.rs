//! Blocker vectors from the constructive proofs, together with the finite list of
//! inequalities each one is supposed to satisfy.
//!
//! A [`WitnessBundle`] stores the vector, how it was selected, and the inequalities
//! with the values observed at construction. [`WitnessBundle::verify`] recomputes
//! every inequality from the vector and an engine, so a bundle written to JSON can
//! be replayed later.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::ClassifierConfig;
use crate::error::{Error, Result};
use crate::products::ProductEngine;
use crate::shifts::{apply_forward, SpaceSpec, SparseVector};
use crate::weights::SubseqSpec;

/// Relative slack for inequalities on floating sums.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Small products `M_{i_l}^{n_{k_l}} < 2^{-l}` block ultra hypercyclicity.
    UltraBlocker,
    /// Summable infima `min_i M_i^n` block strong hypercyclicity.
    StrongBlocker,
}

/// One starting index `v` and the exponents `n` whose minimising index is `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub v: usize,
    pub ns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// `(i_l, n_{k_l})`, strictly increasing in both coordinates.
    Pairs(Vec<(usize, usize)>),
    Groups(Vec<Group>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    /// `‖x‖ < bound` in `space`.
    NormBelow { space: SpaceSpec, bound: f64 },
    /// `(S^n x)_c = bound`, exact for dyadic engines.
    CoordinateEquals { n: usize, c: usize, bound: f64 },
    /// `(S^n x)_c ≥ bound`, up to relative slack.
    CoordinateAtLeast { n: usize, c: usize, bound: f64 },
    /// `‖S^n x‖ ≥ bound`, up to relative slack.
    ForwardNormAtLeast { n: usize, bound: f64 },
    /// `Σ |x_i|^p` equals `Σ_n (M_{i_n}^n)^p` over the selection, up to relative slack.
    PowerSumEquals { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(flatten)]
    pub claim: Claim,
    /// Left-hand side at construction.
    pub observed: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub provenance: Provenance,
    pub vector: SparseVector,
    pub selection: Selection,
    pub inequalities: Vec<Inequality>,
    /// Largest starting index scanned.
    pub i_max: usize,
}

impl WitnessBundle {
    /// True when every inequality was recorded as holding.
    pub fn holds(&self) -> bool {
        self.inequalities.iter().all(|q| q.holds)
    }

    /// Recomputes every inequality from `vector` and `engine`.
    pub fn recheck(&self, engine: &ProductEngine) -> Result<Vec<Inequality>> {
        self.inequalities.iter().map(|q| evaluate(engine, &self.vector, &self.selection, q.claim)).collect()
    }

    /// True when the recomputation holds everywhere and agrees with the record.
    pub fn verify(&self, engine: &ProductEngine) -> Result<bool> {
        let fresh = self.recheck(engine)?;
        Ok(fresh.iter().zip(&self.inequalities).all(|(a, b)| a.holds && b.holds && a.observed == b.observed))
    }
}

fn at_least(observed: f64, bound: f64) -> bool {
    observed >= bound * (1.0 - RELATIVE_TOLERANCE)
}

fn evaluate(engine: &ProductEngine, x: &SparseVector, sel: &Selection, claim: Claim) -> Result<Inequality> {
    let (observed, holds) = match claim {
        Claim::NormBelow { space, bound } => {
            let v = x.norm_in(space);
            (v, v < bound)
        }
        Claim::CoordinateEquals { n, c, bound } => {
            let v = apply_forward(engine, x, n)?.get(c);
            (v, v == bound)
        }
        Claim::CoordinateAtLeast { n, c, bound } => {
            let v = apply_forward(engine, x, n)?.get(c);
            (v, at_least(v, bound))
        }
        Claim::ForwardNormAtLeast { n, bound } => {
            let v = apply_forward(engine, x, n)?.norm();
            (v, at_least(v, bound))
        }
        Claim::PowerSumEquals { p } => {
            let lhs: f64 = x.iter().map(|(_, t)| t.abs().powf(p)).sum();
            let Selection::Groups(groups) = sel else {
                return Err(Error::InvalidArgument("power-sum claim needs a grouped selection".into()));
            };
            let mut rhs = 0.0;
            for g in groups {
                for &n in &g.ns {
                    rhs += engine.product(g.v, n)?.value().powf(p);
                }
            }
            (lhs, (lhs - rhs).abs() <= RELATIVE_TOLERANCE * rhs.abs())
        }
    };
    Ok(Inequality { claim, observed, holds })
}

fn record(engine: &ProductEngine, x: &SparseVector, sel: &Selection, claims: Vec<Claim>) -> Result<Vec<Inequality>> {
    claims.into_iter().map(|c| evaluate(engine, x, sel, c)).collect()
}

/// Greedy pairs `(i_l, n_{k_l})`, `l = 1..=count`, with `M_{i_l}^{n_{k_l}} < 2^{-l}`,
/// both coordinates strictly increasing, `n_k ≤ cfg.horizon`, `i ≤ cfg.i_max`.
///
/// For each `l` the terms of `nk` after the previous one are tried in order, and for
/// each term the indices after the previous `i`. The vector is
/// `x_{i_l - 1} = M_{i_l}^{n_{k_l}}`, so `(S^{n_{k_l}} x)_{i_l - 1 + n_{k_l}} = 1`.
pub fn build_uh_blocker(
    engine: &ProductEngine,
    nk: &SubseqSpec,
    count: usize,
    cfg: &ClassifierConfig,
) -> Result<WitnessBundle> {
    cfg.validate(engine)?;
    let terms = nk.up_to(cfg.horizon);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(count);
    let mut next_k = 0;
    let mut next_i = 1;
    'outer: for l in 1..=count {
        let bound = -(l as f64);
        while next_k < terms.len() {
            let n = terms.values()[next_k];
            next_k += 1;
            for i in next_i..=cfg.i_max {
                if engine.product(i, n)?.log2() < bound {
                    pairs.push((i, n));
                    next_i = i + 1;
                    continue 'outer;
                }
            }
        }
        return Err(Error::NoPairsFound { found: pairs.len(), needed: count });
    }

    let space = SpaceSpec::Lp(1.0);
    let mut x = SparseVector::zero(space);
    for &(i, n) in &pairs {
        x.set(i - 1, engine.product(i, n)?.value());
    }
    let mut claims = vec![Claim::NormBelow { space, bound: 1.0 }];
    for &(i, n) in &pairs {
        claims.push(Claim::CoordinateEquals { n, c: i - 1 + n, bound: 1.0 });
    }
    let selection = Selection::Pairs(pairs);
    let inequalities = record(engine, &x, &selection, claims)?;
    Ok(WitnessBundle { provenance: Provenance::UltraBlocker, vector: x, selection, inequalities, i_max: cfg.i_max })
}

/// The blocker for the necessary condition: `i_n = argmin_{i ≤ i_max} M_i^n` for
/// `n ≤ count`, grouped by value `v`; `x_{v-1}` is the `ℓ^p` norm (or the maximum on
/// `c_0`) of `(M_v^n)_{n ∈ N_v}`. Then `(S^n x)_{i_n - 1 + n} ≥ 1` for every `n`.
///
/// Precondition on `ℓ^p`: `Σ_{n ≤ count} (min_i M_i^n)^p < 1`. On `c_0`: the largest
/// infimum over the last quarter of `n ≤ count` is below 1.
pub fn build_sh_blocker(engine: &ProductEngine, space: SpaceSpec, count: usize, i_max: usize) -> Result<WitnessBundle> {
    if count == 0 {
        return Err(Error::InvalidArgument("the blocker needs at least one exponent".into()));
    }
    let mins = engine.min_products(count, i_max)?;
    match space {
        SpaceSpec::Lp(p) => {
            let sum: f64 = mins.iter().map(|(m, _)| m.value().powf(p)).sum();
            if sum >= 1.0 {
                return Err(Error::PreconditionUnmet { what: "partial sum of (min_i M_i^n)^p", value: sum });
            }
        }
        SpaceSpec::C0 => {
            let tail = count.div_ceil(4);
            let peak = mins[count - tail..].iter().map(|(m, _)| m.value()).fold(0.0, f64::max);
            if peak >= 1.0 {
                return Err(Error::PreconditionUnmet { what: "tail maximum of min_i M_i^n", value: peak });
            }
        }
    }

    let mut by_v: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &(_, i)) in mins.iter().enumerate() {
        by_v.entry(i).or_default().push(k + 1);
    }
    let mut x = SparseVector::zero(space);
    for (&v, ns) in &by_v {
        let vals: Vec<f64> = ns.iter().map(|&n| mins[n - 1].0.value()).collect();
        let entry = match space {
            SpaceSpec::Lp(1.0) => vals.iter().sum(),
            SpaceSpec::Lp(p) => vals.iter().map(|t| t.powf(p)).sum::<f64>().powf(1.0 / p),
            SpaceSpec::C0 => vals.iter().copied().fold(0.0, f64::max),
        };
        x.set(v - 1, entry);
    }

    let mut claims = Vec::with_capacity(2 * count + 1);
    for (k, &(_, i)) in mins.iter().enumerate() {
        let n = k + 1;
        claims.push(Claim::CoordinateAtLeast { n, c: i - 1 + n, bound: 1.0 });
        claims.push(Claim::ForwardNormAtLeast { n, bound: 1.0 });
    }
    if let SpaceSpec::Lp(p) = space {
        claims.push(Claim::PowerSumEquals { p });
    }
    let selection = Selection::Groups(by_v.into_iter().map(|(v, ns)| Group { v, ns }).collect());
    let inequalities = record(engine, &x, &selection, claims)?;
    Ok(WitnessBundle { provenance: Provenance::StrongBlocker, vector: x, selection, inequalities, i_max })
}

/// `u = (y_0, ..., y_{n-1}, 0, ...)`, which lies in the kernel of `B_w^n`.
pub fn build_kernel_truncation(y: &SparseVector, n: usize) -> SparseVector {
    y.truncate_below(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: usize,
    pub n: usize,
    pub distance: f64,
}

/// `‖S^{n_k} x + u_k - y‖` for the first `k_max` terms of `nk`, `u_k` the truncation
/// of `y` below `n_k`. Norms are taken in `y`'s space.
pub fn demo_ultra_convergence(
    engine: &ProductEngine,
    nk: &SubseqSpec,
    x: &SparseVector,
    y: &SparseVector,
    k_max: usize,
) -> Result<Vec<ConvergenceRow>> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    if k_max > nk.len() {
        return Err(Error::InvalidArgument(format!("asked for {k_max} terms, subsequence has {}", nk.len())));
    }
    (1..=k_max)
        .map(|k| {
            let n = nk.values()[k - 1];
            let u = build_kernel_truncation(y, n);
            let v = apply_forward(engine, x, n)?.with_space(y.space()).axpy(1.0, &u).axpy(-1.0, y);
            Ok(ConvergenceRow { k, n, distance: v.norm() })
        })
        .collect()
}
