use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{horizon_note, ClassifierConfig, Report, Verdict, Witness};
use crate::error::{Error, Result};
use crate::log2::Log2Value;
use crate::products::ProductEngine;
use crate::shifts::SpaceSpec;
use crate::weights::{a_k, SubseqSpec};

const WEAK_MIXING_NOTE: &str =
    "for weighted backward shifts hypercyclicity and weak mixing are equivalent; the same verdict applies";

fn base_config(cfg: &ClassifierConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serialises")
}

/// Hypercyclic iff `sup_n M_1^n = ∞`; surrogate: `max_{n ≤ H} M_1^n ≥ T`.
pub fn check_hypercyclic(engine: &ProductEngine, cfg: &ClassifierConfig) -> Result<Report> {
    cfg.validate(engine)?;
    let scan = engine.scan_m1(cfg.horizon)?;
    let (max, argmax) = scan.running_max;
    let verdict = if max.log2() >= cfg.growth_log2 { Verdict::EvidenceFor } else { Verdict::EvidenceAgainst };
    let mut r = Report::new("hypercyclic", verdict, base_config(cfg), engine.is_exact());
    r.witnesses.push(Witness::window("max_m1", 1, argmax, max));
    r.notes.push(horizon_note(cfg.horizon));
    r.notes.push(WEAK_MIXING_NOTE.into());
    Ok(r)
}

/// Mixing iff `lim_n M_1^n = ∞`; surrogate: `M_1^n ≥ T` throughout the tail window.
pub fn check_mixing(engine: &ProductEngine, cfg: &ClassifierConfig) -> Result<Report> {
    cfg.validate(engine)?;
    let scan = engine.scan_m1(cfg.horizon)?;
    let lo = cfg.horizon.saturating_sub(cfg.tail()).max(1);
    let tail = lo..=cfg.horizon;
    let mut r = Report::new("mixing", Verdict::EvidenceFor, base_config(cfg), engine.is_exact());
    match tail.clone().find(|&n| scan.values[n - 1].log2() < cfg.growth_log2) {
        Some(n) => {
            r.verdict = Verdict::EvidenceAgainst;
            r.witnesses.push(Witness::window("tail_below_threshold", 1, n, scan.values[n - 1]));
            // the smallest value in the window is the sharper witness
            let (n_min, v_min) = tail
                .map(|n| (n, scan.values[n - 1]))
                .fold((n, scan.values[n - 1]), |best, cur| if cur.1 < best.1 { cur } else { best });
            r.witnesses.push(Witness::window("tail_min", 1, n_min, v_min));
        }
        None => {
            let (n_min, v_min) = tail
                .map(|n| (n, scan.values[n - 1]))
                .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
                .expect("tail window is non-empty");
            r.witnesses.push(Witness::window("tail_min", 1, n_min, v_min));
        }
    }
    if !scan.unit_indices.is_empty() {
        r.witnesses.push(Witness::Indices { role: "unit_m1".into(), values: scan.unit_indices });
    }
    r.notes.push(horizon_note(cfg.horizon));
    Ok(r)
}

/// The three weight conditions characterising ultra hypercyclicity for `(n_k)`:
/// `inf w_n > 0`, `M_1^{n_k} → ∞`, and `inf_{i,k} M_i^{n_k} > 0`.
///
/// Uses the terms of `nk` not exceeding `cfg.horizon`. The infimum `r` is taken over
/// `i ≤ i_max` and additionally over the probes `i = n_k + 1` that fit in the
/// engine; at those probes the report records every exact hit of
/// `M_{n+1}^n (M_1^n)^2 = 1`.
pub fn check_ultra_conditions(engine: &ProductEngine, nk: &SubseqSpec, cfg: &ClassifierConfig) -> Result<Report> {
    cfg.validate(engine)?;
    let nk = nk.up_to(cfg.horizon);
    let last = *nk
        .values()
        .last()
        .ok_or_else(|| Error::InvalidArgument("no subsequence term within the horizon".into()))?;

    let delta = engine.min_weight().log2();
    let growth = engine.product(1, last)?;
    let mut r_min: Option<(Log2Value, usize, usize)> = None;
    let mut reciprocal_hits = Vec::new();
    for &n in nk.values() {
        let (m, i) = engine.min_product_over_i(n, cfg.i_max)?;
        if r_min.is_none_or(|(best, _, _)| m < best) {
            r_min = Some((m, i, n));
        }
        if n.checked_mul(2).is_some_and(|end| end <= engine.horizon()) {
            let probe = engine.product(n + 1, n)?;
            if probe < r_min.expect("set above").0 {
                r_min = Some((probe, n + 1, n));
            }
            let m1 = engine.product(1, n)?;
            if let (Some(p), Some(g)) = (probe.exponent(), m1.exponent()) {
                if p + 2 * g == 0 && g > 0 {
                    reciprocal_hits.push((n, probe));
                }
            }
        }
    }
    let (r, ri, rn) = r_min.expect("nk is non-empty");

    let growth_ok = growth.log2() >= cfg.growth_log2;
    let floor_ok = r.log2() >= cfg.decay_log2;
    let verdict = if floor_ok && growth_ok { Verdict::EvidenceFor } else { Verdict::EvidenceAgainst };

    let mut config = base_config(cfg);
    config["nk"] = json!({ "kind": nk.kind(), "terms": nk.len(), "last": last });
    let mut rep = Report::new("ultra_hypercyclic", verdict, config, engine.is_exact());
    rep.witnesses.push(Witness::scalar("min_weight_log2", delta.log2()));
    rep.witnesses.push(Witness::window("growth", 1, last, growth));
    rep.witnesses.push(Witness::window("min_window", ri, rn, r));
    if let Some(&(n, probe)) = reciprocal_hits.last() {
        rep.witnesses.push(Witness::window("reciprocal_square", n + 1, n, probe));
        rep.witnesses.push(Witness::scalar("reciprocal_square_hits", reciprocal_hits.len() as f64));
    }
    rep.notes.push(format!(
        "conditions: min weight > 0: true; growth M_1^n_K >= T: {growth_ok}; inf M_i^n_k >= eps_d: {floor_ok}"
    ));
    rep.notes.push(horizon_note(cfg.horizon));
    Ok(rep)
}

/// Necessary condition for strong hypercyclicity: `Σ_n (inf_i M_i^n)^p = ∞` on `ℓ^p`,
/// `limsup_n inf_i M_i^n > 0` on `c_0`.
///
/// `ℓ^p`: the partial sums over `[H/4, H/2]` and `(H/2, H]` are compared; a ratio of
/// at least 1 counts as divergence, at most 1/2 as convergence, anything between is
/// inconclusive. `c_0`: the largest infimum over the tail window is compared to `ε_d`.
pub fn check_strong_necessary(engine: &ProductEngine, space: SpaceSpec, cfg: &ClassifierConfig) -> Result<Report> {
    cfg.validate(engine)?;
    let h = cfg.horizon;
    let mins = engine.min_products(h, cfg.i_max)?;
    let mut config = base_config(cfg);
    config["space"] = json!(space.to_string());
    let mut rep = Report::new("strong_necessary", Verdict::Inconclusive, config, engine.is_exact());
    match space {
        SpaceSpec::Lp(p) => {
            if h < 4 {
                return Err(Error::InvalidArgument("divergence heuristic needs H >= 4".into()));
            }
            let term = |n: usize| (mins[n - 1].0.log2() * p).exp2();
            let low: f64 = (h.div_ceil(4)..=h / 2).map(term).sum();
            let high: f64 = (h / 2 + 1..=h).map(term).sum();
            let total: f64 = (1..=h).map(term).sum();
            let ratio = high / low;
            rep.verdict = if ratio >= 1.0 {
                Verdict::EvidenceFor
            } else if ratio <= 0.5 {
                Verdict::EvidenceAgainst
            } else {
                Verdict::Inconclusive
            };
            rep.witnesses.push(Witness::scalar("partial_sum", total));
            rep.witnesses.push(Witness::scalar("segment_low", low));
            rep.witnesses.push(Witness::scalar("segment_high", high));
            rep.witnesses.push(Witness::scalar("segment_ratio", ratio));
        }
        SpaceSpec::C0 => {
            let lo = h.saturating_sub(cfg.tail()).max(1);
            let (n, (v, i)) = (lo..=h)
                .map(|n| (n, mins[n - 1]))
                .reduce(|best, cur| if cur.1 .0 > best.1 .0 { cur } else { best })
                .expect("tail window is non-empty");
            rep.verdict = if v.log2() >= cfg.decay_log2 { Verdict::EvidenceFor } else { Verdict::EvidenceAgainst };
            rep.witnesses.push(Witness::window("limsup_surrogate", i, n, v));
        }
    }
    rep.notes.push(horizon_note(h));
    Ok(rep)
}

/// Named forms of the profile function `f` with `f(x) → ∞` as `x → 0+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthProfile {
    /// `f(x) = (4 √x)⁻¹`.
    InvSqrtQuarter,
    /// `f(x) = x⁻¹`.
    Reciprocal,
    /// Step function through `(x, f(x))` samples: `f(ε)` is read at the largest
    /// sample `x ≤ ε`.
    Table(Vec<(f64, f64)>),
}

impl GrowthProfile {
    /// `log2 f(ε)` from `log2 ε`.
    pub fn log2_at(&self, eps: f64) -> Result<f64> {
        let l = eps.log2();
        match self {
            GrowthProfile::InvSqrtQuarter => Ok(-(2.0 + 0.5 * l)),
            GrowthProfile::Reciprocal => Ok(-l),
            GrowthProfile::Table(rows) => rows
                .iter()
                .filter(|(x, _)| *x <= eps)
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .filter(|(_, f)| *f > 0.0)
                .map(|(_, f)| f.log2())
                .ok_or_else(|| Error::InvalidArgument(format!("profile table has no entry at or below {eps}"))),
        }
    }
}

/// Order in which candidate `n` are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateOrder {
    /// `n = 1, 2, ..., H`.
    Scan,
    /// First the constructive `n = 4^m a_k`, then the plain scan.
    DiamondLattice,
}

/// Data `(a, f)` of the sufficient condition for strong hypercyclicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShProfile {
    pub a: f64,
    pub f: GrowthProfile,
    pub candidates: CandidateOrder,
}

impl ShProfile {
    /// `a = 1/4`, `f(x) = (4√x)⁻¹`, constructive lattice first.
    pub fn diamond() -> Self {
        ShProfile { a: 0.25, f: GrowthProfile::InvSqrtQuarter, candidates: CandidateOrder::DiamondLattice }
    }
}

/// The constructive choice: `k` with `2^{k-1} ≤ f(ε) < 2^k`, the least `m ≥ 1` with
/// `4^m ≥ N`, and `n = 4^m a_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeChoice {
    pub k: usize,
    pub m: u32,
    pub n: usize,
}

pub fn lattice_candidate(f_log2: f64, cap: usize) -> Result<LatticeChoice> {
    let k = (f_log2.floor() + 1.0).max(1.0) as usize;
    let mut m = 1u32;
    while 4usize.checked_pow(m).ok_or(Error::Overflow("4^m"))? < cap {
        m += 1;
    }
    let n = a_k(k)
        .and_then(|a| a.checked_mul(4usize.pow(m)))
        .ok_or(Error::Overflow("4^m a_k"))?;
    Ok(LatticeChoice { k, m, n })
}

/// For every `(ε, N)`: find `n ≤ H` with (a) `M_i^n > f(ε)` for `i ≤ N` and
/// (b) `M_i^n > ε` for `i ≤ i_max`.
pub fn check_strong_sufficient(
    engine: &ProductEngine,
    profile: &ShProfile,
    eps_list: &[f64],
    caps: &[usize],
    cfg: &ClassifierConfig,
) -> Result<Report> {
    cfg.validate(engine)?;
    if profile.a.is_nan() || profile.a <= 0.0 {
        return Err(Error::InvalidArgument("profile.a must be positive".into()));
    }
    let mut found_all = true;
    let mut witnesses = Vec::new();
    for &eps in eps_list {
        if !(eps > 0.0 && eps < profile.a) {
            return Err(Error::InvalidArgument(format!("eps {eps} outside (0, {})", profile.a)));
        }
        let f_log2 = profile.f.log2_at(eps)?;
        let eps_log2 = eps.log2();
        for &cap in caps {
            if cap == 0 {
                return Err(Error::InvalidArgument("N must be positive".into()));
            }
            let reach = cap.max(cfg.i_max);
            let n_limit = cfg.horizon.min((engine.horizon() + 1).saturating_sub(reach));
            let holds = |n: usize| -> bool {
                let (a, _) = engine.min_product_over_i(n, cap).expect("inside the engine");
                if a.log2() <= f_log2 {
                    return false;
                }
                let (b, _) = engine.min_product_over_i(n, cfg.i_max).expect("inside the engine");
                b.log2() > eps_log2
            };
            let mut hit = None;
            if profile.candidates == CandidateOrder::DiamondLattice {
                if let Ok(c) = lattice_candidate(f_log2, cap) {
                    if c.n <= n_limit && holds(c.n) {
                        hit = Some((c.n, "lattice"));
                    }
                }
            }
            if hit.is_none() {
                hit = (1..=n_limit).find(|&n| holds(n)).map(|n| (n, "scan"));
            }
            found_all &= hit.is_some();
            witnesses.push(Witness::Search {
                eps,
                cap,
                n: hit.map(|h| h.0),
                route: hit.map(|h| h.1.to_string()),
            });
        }
    }
    let verdict = if found_all { Verdict::EvidenceFor } else { Verdict::EvidenceAgainst };
    let mut config = base_config(cfg);
    config["profile"] = serde_json::to_value(profile).expect("profile serialises");
    let mut rep = Report::new("strong_sufficient", verdict, config, engine.is_exact());
    rep.witnesses = witnesses;
    rep.notes.push(horizon_note(cfg.horizon));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{ak_sequence, block_boundary, block_nk_sequence, gen_literal, Tail, WeightSequence};

    fn engine(mut s: WeightSequence, h: usize) -> ProductEngine {
        ProductEngine::new(&mut s, h).unwrap()
    }

    fn constant(v: f64, h: usize) -> ProductEngine {
        engine(gen_literal(&[v], Tail::PeriodicRepeat).unwrap(), h)
    }

    #[test]
    fn hypercyclic_verdicts() {
        let s17 = block_boundary(17).unwrap();
        let b = engine(WeightSequence::block(), s17 + 10);
        let cfg = ClassifierConfig::new(s17, 10).with_growth_log2(9.0);
        let r = check_hypercyclic(&b, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        assert_eq!(r.witness("max_m1").unwrap(), &Witness::window("max_m1", 1, block_boundary(17).unwrap(), Log2Value::Exact(9)));

        let r = check_hypercyclic(&constant(1.0, 200), &ClassifierConfig::new(100, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);

        let a12 = a_k(12).unwrap();
        let d = engine(WeightSequence::diamond(), a12 + 1);
        let r = check_hypercyclic(&d, &ClassifierConfig::new(a12, 1).with_growth_log2(10.0)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        let Witness::Window { n, log2, .. } = r.witness("max_m1").unwrap() else { panic!() };
        assert!(*log2 >= Log2Value::Exact(10));
        assert!(r.witness("max_m1").unwrap().recheck(&d).unwrap() && *n <= a12);
    }

    #[test]
    fn mixing_verdicts() {
        let b = engine(WeightSequence::block(), 1000);
        let r = check_mixing(&b, &ClassifierConfig::new(900, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);
        let d = engine(WeightSequence::diamond(), 1000);
        let r = check_mixing(&d, &ClassifierConfig::new(900, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);
        assert!(r.witness("tail_below_threshold").unwrap().recheck(&d).unwrap());
        let r = check_mixing(&constant(2.0, 1000), &ClassifierConfig::new(900, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
    }

    #[test]
    fn block_mixing_witness_is_unit_product() {
        let s8 = block_boundary(8).unwrap();
        let b = engine(WeightSequence::block(), s8 + 1);
        // window [s8 - 3, s8] ends on the last half of b_8
        let cfg = ClassifierConfig::new(s8, 1).with_tail_window(3);
        let r = check_mixing(&b, &cfg).unwrap();
        assert_eq!(r.witness("tail_min").unwrap(), &Witness::window("tail_min", 1, s8, Log2Value::Exact(0)));
    }

    #[test]
    fn ultra_block_holds_with_half_floor() {
        let nk = block_nk_sequence(5).unwrap();
        let last = *nk.values().last().unwrap();
        let b = engine(WeightSequence::block(), last + 2000);
        let cfg = ClassifierConfig::new(last, 2000).with_growth_log2(6.0);
        let r = check_ultra_conditions(&b, &nk, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        let Witness::Window { log2, .. } = r.witness("min_window").unwrap() else { panic!() };
        assert!(*log2 >= Log2Value::Exact(-1));
        assert!(r.witness("reciprocal_square").is_none());
    }

    #[test]
    fn ultra_diamond_fails_through_reciprocal_square() {
        let nk = ak_sequence(8).unwrap();
        let last = *nk.values().last().unwrap();
        let d = engine(WeightSequence::diamond(), 2 * last);
        let r = check_ultra_conditions(&d, &nk, &ClassifierConfig::new(last, 100)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);
        let Witness::Window { i, n, log2, .. } = r.witness("reciprocal_square").unwrap().clone() else { panic!() };
        assert_eq!((i, n), (last + 1, last));
        let m1 = d.product(1, n).unwrap();
        assert_eq!(log2.exponent().unwrap() + 2 * m1.exponent().unwrap(), 0);
        assert_eq!(log2, Log2Value::Exact(-16));
    }

    #[test]
    fn ultra_constant_two() {
        let c = constant(2.0, 400);
        let r = check_ultra_conditions(&c, &SubseqSpec::full(200), &ClassifierConfig::new(200, 100)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        let Witness::Window { log2, .. } = r.witness("min_window").unwrap() else { panic!() };
        assert_eq!(*log2, Log2Value::Exact(1));
    }

    #[test]
    fn ultra_rejects_empty_subsequence() {
        let c = constant(2.0, 40);
        let nk = SubseqSpec::explicit(vec![30]).unwrap();
        assert!(check_ultra_conditions(&c, &nk, &ClassifierConfig::new(20, 5)).is_err());
    }

    fn quarter_runs(max_run: usize) -> WeightSequence {
        let mut v = Vec::new();
        for run in 1..=max_run {
            v.push(1.0);
            v.extend(std::iter::repeat_n(0.25, run));
        }
        gen_literal(&v, Tail::PeriodicRepeat).unwrap()
    }

    #[test]
    fn strong_necessary_verdicts() {
        let d = engine(WeightSequence::diamond(), 4096 + 1024);
        let r = check_strong_necessary(&d, SpaceSpec::Lp(1.0), &ClassifierConfig::new(4096, 1024)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        let Some(Witness::Scalar { value, .. }) = r.witness("segment_ratio") else { panic!() };
        assert!(*value > 1.4 && *value < 1.6);

        let q = engine(quarter_runs(10), 2000);
        let r = check_strong_necessary(&q, SpaceSpec::Lp(1.0), &ClassifierConfig::new(400, 100)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);
        let r = check_strong_necessary(&q, SpaceSpec::C0, &ClassifierConfig::new(400, 100)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);

        let c = constant(2.0, 500);
        for space in [SpaceSpec::Lp(1.0), SpaceSpec::Lp(2.0), SpaceSpec::C0] {
            let r = check_strong_necessary(&c, space, &ClassifierConfig::new(400, 50)).unwrap();
            assert_eq!(r.verdict, Verdict::EvidenceFor, "{space}");
        }
    }

    #[test]
    fn lattice_choice_matches_construction() {
        // ε = 2^-8: f = 4, so k = 3; N = 16 gives m = 2 and n = 16 · 21
        let f = GrowthProfile::InvSqrtQuarter.log2_at(2f64.powi(-8)).unwrap();
        assert_eq!(f, 2.0);
        assert_eq!(lattice_candidate(f, 16).unwrap(), LatticeChoice { k: 3, m: 2, n: 336 });
        assert_eq!(lattice_candidate(0.0, 1).unwrap(), LatticeChoice { k: 1, m: 1, n: 4 });
    }

    #[test]
    fn strong_sufficient_diamond() {
        let d = engine(WeightSequence::diamond(), 4000);
        let cfg = ClassifierConfig::new(2000, 1000);
        let r = check_strong_sufficient(&d, &ShProfile::diamond(), &[2f64.powi(-8)], &[16], &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        assert_eq!(
            r.witnesses[0],
            Witness::Search { eps: 2f64.powi(-8), cap: 16, n: Some(336), route: Some("lattice".into()) }
        );
        for i in 1..=16 {
            assert_eq!(d.product(i, 336).unwrap(), Log2Value::Exact(3));
        }
        let (m, _) = d.min_product_over_i(336, 1000).unwrap();
        assert!(m >= Log2Value::Exact(-6));
    }

    #[test]
    fn strong_sufficient_block_exploratory() {
        let nk = block_nk_sequence(4).unwrap();
        let b = engine(WeightSequence::block(), 3000);
        let profile = ShProfile { a: 0.5, f: GrowthProfile::Reciprocal, candidates: CandidateOrder::Scan };
        let cfg = ClassifierConfig::new(1000, 2000);
        let r = check_strong_sufficient(&b, &profile, &[0.25], &[4], &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        let Witness::Search { n: Some(n), .. } = r.witnesses[0] else { panic!() };
        assert!(n <= nk.values()[3]);
    }

    #[test]
    fn strong_sufficient_constant_one_fails() {
        let c = constant(1.0, 400);
        let profile = ShProfile { a: 1.0, f: GrowthProfile::Reciprocal, candidates: CandidateOrder::Scan };
        let r = check_strong_sufficient(&c, &profile, &[0.5, 0.1], &[3], &ClassifierConfig::new(200, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceAgainst);
        assert!(r.witnesses.iter().all(|w| matches!(w, Witness::Search { n: None, .. })));
    }

    #[test]
    fn strong_sufficient_rejects_eps_outside_profile() {
        let d = engine(WeightSequence::diamond(), 400);
        let cfg = ClassifierConfig::new(200, 10);
        assert!(check_strong_sufficient(&d, &ShProfile::diamond(), &[0.3], &[4], &cfg).is_err());
    }

    #[test]
    fn config_validation() {
        let d = engine(WeightSequence::diamond(), 100);
        assert!(matches!(
            check_hypercyclic(&d, &ClassifierConfig::new(100, 2)),
            Err(Error::HorizonExceeded { needed: 101, horizon: 100 })
        ));
        assert!(check_hypercyclic(&d, &ClassifierConfig::new(0, 2)).is_err());
    }

    #[test]
    fn profile_table_lookup() {
        let t = GrowthProfile::Table(vec![(0.01, 100.0), (0.1, 10.0)]);
        assert_eq!(t.log2_at(0.05).unwrap(), 100f64.log2());
        assert!(t.log2_at(0.001).is_err());
    }
}
