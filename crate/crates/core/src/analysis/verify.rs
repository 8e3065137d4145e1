use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Report, Tally, Verdict, Witness};
use crate::error::{Error, Result};
use crate::log2::Log2Value;
use crate::products::ProductEngine;
use crate::weights::{a_k, block_nk_sequence};

/// Largest accepted log2 discrepancy in float mode.
pub const FLOAT_LOG2_TOLERANCE: f64 = 1e-9;

// at most this many failing instances are kept as witnesses per identity
const MAX_FAILURE_WITNESSES: usize = 16;

/// Accumulates tallies and failure witnesses for one report.
struct Checker {
    tol: f64,
    tallies: Vec<Tally>,
    failures: Vec<Witness>,
    kept: Vec<usize>,
}

impl Checker {
    fn new(exact: bool) -> Self {
        Checker {
            tol: if exact { 0.0 } else { FLOAT_LOG2_TOLERANCE },
            tallies: Vec::new(),
            failures: Vec::new(),
            kept: Vec::new(),
        }
    }

    fn slot(&mut self, name: &str) -> usize {
        match self.tallies.iter().position(|t| t.name == name) {
            Some(k) => k,
            None => {
                self.tallies.push(Tally { name: name.into(), checked: 0, failed: 0 });
                self.kept.push(0);
                self.tallies.len() - 1
            }
        }
    }

    fn eq(&mut self, name: &str, args: &[usize], lhs: Log2Value, rhs: Log2Value) -> bool {
        let ok = lhs.approx_eq(&rhs, self.tol);
        self.record(name, args, ok, lhs, rhs);
        ok
    }

    /// Records `lhs ≥ rhs` (with tolerance in float mode).
    fn ge(&mut self, name: &str, args: &[usize], lhs: Log2Value, rhs: Log2Value) -> bool {
        let ok = match (lhs.exponent(), rhs.exponent()) {
            (Some(a), Some(b)) => a >= b,
            _ => lhs.log2() >= rhs.log2() - self.tol,
        };
        self.record(name, args, ok, lhs, rhs);
        ok
    }

    fn record(&mut self, name: &str, args: &[usize], ok: bool, lhs: Log2Value, rhs: Log2Value) {
        let k = self.slot(name);
        self.tallies[k].checked += 1;
        if !ok {
            self.tallies[k].failed += 1;
            if self.kept[k] < MAX_FAILURE_WITNESSES {
                self.kept[k] += 1;
                self.failures.push(Witness::Identity { identity: name.into(), args: args.to_vec(), lhs, rhs });
            }
        }
    }

    fn finish(self, report: &mut Report) {
        report.checks = self.tallies;
        report.witnesses.extend(self.failures);
        report.verdict = if report.checks.iter().all(|t| t.failed == 0) {
            Verdict::EvidenceFor
        } else {
            Verdict::EvidenceAgainst
        };
    }
}

/// `n_samples` triples `(i, j, n)` with `i < j` and `max(i + n + j - i, j + n) - 1 ≤ horizon`.
pub fn sample_triples(horizon: usize, n_samples: usize, seed: u64) -> Result<Vec<(usize, usize, usize)>> {
    if horizon < 3 {
        return Err(Error::InvalidArgument("sampling triples needs horizon >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_samples)
        .map(|_| {
            // j + n - 1 ≤ horizon covers every window used by the identity
            let j = rng.random_range(2..horizon);
            let i = rng.random_range(1..j);
            let n = rng.random_range(1..=horizon + 1 - j);
            (i, j, n)
        })
        .collect())
}

fn check_triples(engine: &ProductEngine, samples: &[(usize, usize, usize)]) -> Result<()> {
    for &(i, j, n) in samples {
        if i == 0 || i >= j || n == 0 {
            return Err(Error::InvalidArgument(format!("bad sample (i = {i}, j = {j}, n = {n}): need 1 <= i < j, n >= 1")));
        }
        engine.require(j.checked_add(n - 1).ok_or(Error::Overflow("sample window"))?)?;
    }
    Ok(())
}

/// `M_i^n M_{i+n}^{j-i} = M_i^{n+j-i} = M_i^{j-i} M_j^n` for each sample.
pub fn verify_product_formula(engine: &ProductEngine, samples: &[(usize, usize, usize)]) -> Result<Report> {
    check_triples(engine, samples)?;
    let mut c = Checker::new(engine.is_exact());
    for &(i, j, n) in samples {
        let whole = engine.product(i, n + j - i)?;
        let left = engine.product(i, n)? + engine.product(i + n, j - i)?;
        let right = engine.product(i, j - i)? + engine.product(j, n)?;
        c.eq("split_after_n", &[i, j, n], left, whole);
        c.eq("split_after_j", &[i, j, n], right, whole);
    }
    let config = json!({ "samples": samples.len(), "tolerance_log2": c.tol });
    let mut r = Report::new("product_formula", Verdict::Inconclusive, config, engine.is_exact());
    c.finish(&mut r);
    Ok(r)
}

/// `M_j^n ≤ (μ/δ)^{j-i} M_i^n` and `M_i^n ≤ (μ/δ)^{j-i} M_j^n`, with `μ`, `δ` the
/// largest and smallest weight inside the engine.
pub fn verify_lemma_comparability(engine: &ProductEngine, samples: &[(usize, usize, usize)]) -> Result<Report> {
    check_triples(engine, samples)?;
    let ratio = engine.max_weight().log2() - engine.min_weight().log2();
    let mut c = Checker::new(engine.is_exact());
    for &(i, j, n) in samples {
        let slack = ratio.powi((j - i) as i64).ok_or(Error::Overflow("(mu/delta)^(j-i)"))?;
        let mi = engine.product(i, n)?;
        let mj = engine.product(j, n)?;
        c.ge("upper_j", &[i, j, n], slack + mi, mj);
        c.ge("upper_i", &[i, j, n], slack + mj, mi);
    }
    let config = json!({ "samples": samples.len(), "log2_mu_over_delta": ratio.log2() });
    let mut r = Report::new("lemma_comparability", Verdict::Inconclusive, config, engine.is_exact());
    c.finish(&mut r);
    Ok(r)
}

/// Ranges of the diamond identity suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondSuite {
    /// `i` range of the local, doubling and quadrupling identities.
    pub i_max: usize,
    /// `k` range of the same identities.
    pub k_max: usize,
    /// Largest `m` of the `4^m` lattice identity.
    pub m_max: u32,
    pub lattice_i_max: usize,
    pub lattice_k_max: usize,
    /// `M_1^{a_k} = 2^k` for `k ≤` this.
    pub growth_k_max: usize,
    /// `min_{i ≤ floor_i_max} M_i^{a_k} = 4^{-k}` for `k ≤` this.
    pub floor_k_max: usize,
    pub floor_i_max: usize,
    /// `M_{n+1}^n (M_1^n)^2 = 1` for `n ≤` this.
    pub reciprocal_n_max: usize,
}

impl Default for DiamondSuite {
    fn default() -> Self {
        DiamondSuite {
            i_max: 1024,
            k_max: 256,
            m_max: 5,
            lattice_i_max: 16,
            lattice_k_max: 16,
            growth_k_max: 10,
            floor_k_max: 6,
            floor_i_max: 10_000,
            reciprocal_n_max: 4096,
        }
    }
}

impl DiamondSuite {
    /// Smallest engine horizon covering every window of the suite.
    pub fn required_horizon(&self) -> Result<usize> {
        let ov = || Error::Overflow("diamond suite horizon");
        let quad = 4 * (self.i_max + self.k_max);
        let scale = 4usize.checked_pow(self.m_max).ok_or_else(ov)?;
        let lattice = scale.checked_mul(self.lattice_i_max + self.lattice_k_max).ok_or_else(ov)?;
        let growth = if self.growth_k_max == 0 { 0 } else { a_k(self.growth_k_max).ok_or_else(ov)? };
        let floor = if self.floor_k_max == 0 {
            0
        } else {
            a_k(self.floor_k_max).ok_or_else(ov)? + self.floor_i_max.max(1)
        };
        Ok(quad.max(lattice).max(growth).max(floor).max(2 * self.reciprocal_n_max).max(1))
    }
}

/// Exact check of the self-similarity identities of the diamond weights:
///
/// * `w_{2i-1} w_{2i} = 1 / w_i`
/// * `1 / M_i^k = M_{2i-1}^{2k} = M_{2i}^{2k}`
/// * `M_i^k = M_{4i-r}^{4k}` for `r = 0..=3`
/// * `M_j^{4^m k} = M_i^k` for `4^m (i-1) < j ≤ 4^m i`
/// * `M_1^{a_k} = 2^k`
/// * `min_{i ≤ floor_i_max} M_i^{a_k} = 4^{-k}`, first attained at `i = a_k + 1`
/// * `M_{n+1}^n = (M_1^n)^{-2}`
///
/// Meant for the diamond engine, but runs on any dyadic engine and then reports the
/// failures.
pub fn verify_diamond_identities(engine: &ProductEngine, suite: &DiamondSuite) -> Result<Report> {
    engine.require(suite.required_horizon()?)?;
    let mut c = Checker::new(engine.is_exact());
    let mut extra = Vec::new();
    let p = |i, n| engine.product(i, n).expect("within required horizon");

    for i in 1..=suite.i_max {
        c.eq("pair_reciprocal", &[i], p(2 * i - 1, 2), -p(i, 1));
    }
    for i in 1..=suite.i_max {
        for k in 1..=suite.k_max {
            let m = p(i, k);
            c.eq("doubling_odd", &[i, k], p(2 * i - 1, 2 * k), -m);
            c.eq("doubling_even", &[i, k], p(2 * i, 2 * k), -m);
            for r in 0..4 {
                c.eq("quadrupling", &[i, k, r], p(4 * i - r, 4 * k), m);
            }
        }
    }
    for m in 1..=suite.m_max {
        let scale = 4usize.pow(m);
        for i in 1..=suite.lattice_i_max {
            for k in 1..=suite.lattice_k_max {
                let target = p(i, k);
                for j in scale * (i - 1) + 1..=scale * i {
                    c.eq("lattice", &[m as usize, i, k, j], p(j, scale * k), target);
                }
            }
        }
    }
    for k in 1..=suite.growth_k_max {
        let a = a_k(k).expect("checked in required_horizon");
        c.eq("growth_ak", &[k], p(1, a), Log2Value::Exact(k as i64));
    }
    for k in 1..=suite.floor_k_max {
        let a = a_k(k).expect("checked in required_horizon");
        let (min, arg) = engine.min_product_over_i(a, suite.floor_i_max)?;
        let floor = Log2Value::Exact(-2 * k as i64);
        c.ge("floor_ak", &[k], min, floor);
        // equality at i = a_k + 1 comes from the reciprocal square identity
        if suite.floor_i_max > a {
            c.eq("floor_ak_attained", &[k], min, floor);
            c.eq("floor_ak_argmin", &[k], Log2Value::Exact(arg as i64), Log2Value::Exact(a as i64 + 1));
        }
        extra.push(Witness::window(&format!("floor_min_k{k}"), arg, a, min));
    }
    for n in 1..=suite.reciprocal_n_max {
        let m1 = p(1, n);
        c.eq("reciprocal_square", &[n], p(n + 1, n), -(m1 + m1));
    }

    let config = serde_json::to_value(suite).expect("suite serialises");
    let mut r = Report::new("diamond_identities", Verdict::Inconclusive, config, engine.is_exact());
    c.finish(&mut r);
    r.witnesses.extend(extra);
    if !engine.is_exact() {
        r.notes.push(format!("float engine: identities compared within {FLOAT_LOG2_TOLERANCE} in log2"));
    }
    Ok(r)
}

/// Exact checks on the block weights along `n_k = s_{2k+1}`:
/// `M_1^{n_k} = 2^{k+1}`, `min_{i ≤ i_max} M_i^{n_k} ≥ 1/2`, and at least `k_max`
/// indices `n ≤ n_{k_max}` with `M_1^n = 1`.
pub fn verify_block_facts(engine: &ProductEngine, k_max: usize, i_max: usize) -> Result<Report> {
    let nk = block_nk_sequence(k_max)?;
    let last = *nk.values().last().expect("k_max >= 1");
    engine.require(last.checked_add(i_max.max(1) - 1).ok_or(Error::Overflow("block horizon"))?)?;
    let mut c = Checker::new(engine.is_exact());
    let mut half_attained = false;
    let mut worst: Option<(Log2Value, usize, usize)> = None;
    for (k, &n) in (1..).zip(nk.values()) {
        c.eq("growth_nk", &[k, n], engine.product(1, n)?, Log2Value::Exact(k as i64 + 1));
        let (min, arg) = engine.min_product_over_i(n, i_max)?;
        c.ge("floor_half", &[k, n], min, Log2Value::Exact(-1));
        half_attained |= min == Log2Value::Exact(-1);
        if worst.is_none_or(|w| min < w.0) {
            worst = Some((min, arg, n));
        }
    }
    let scan = engine.scan_m1(last)?;
    let units = scan.unit_indices;
    c.ge(
        "unit_count",
        &[k_max],
        Log2Value::Exact(units.len() as i64),
        Log2Value::Exact(k_max as i64),
    );

    let config = json!({ "k_max": k_max, "i_max": i_max });
    let mut r = Report::new("block_facts", Verdict::Inconclusive, config, engine.is_exact());
    c.finish(&mut r);
    if let Some((min, i, n)) = worst {
        r.witnesses.push(Witness::window("floor_min", i, n, min));
    }
    r.witnesses.push(Witness::Indices { role: "unit_m1".into(), values: units });
    r.notes.push(format!("half_attained: {half_attained}"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{gen_literal, Tail, Weight, WeightSequence};

    fn engine(mut s: WeightSequence, h: usize) -> ProductEngine {
        ProductEngine::new(&mut s, h).unwrap()
    }

    fn small_suite() -> DiamondSuite {
        DiamondSuite {
            i_max: 64,
            k_max: 32,
            m_max: 3,
            lattice_i_max: 8,
            lattice_k_max: 8,
            growth_k_max: 7,
            floor_k_max: 4,
            floor_i_max: 1000,
            reciprocal_n_max: 500,
        }
    }

    #[test]
    fn diamond_suite_passes() {
        let suite = small_suite();
        let d = engine(WeightSequence::diamond(), suite.required_horizon().unwrap());
        let r = verify_diamond_identities(&d, &suite).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.verdict, Verdict::EvidenceFor);
        assert!(r.checks.iter().all(|t| t.checked > 0));
        assert_eq!(r.witness("floor_min_k2").unwrap(), &Witness::window("floor_min_k2", 6, 5, Log2Value::Exact(-4)));
    }

    #[test]
    fn diamond_suite_catches_corruption() {
        let suite = small_suite();
        let h = suite.required_horizon().unwrap();
        let mut d = WeightSequence::diamond();
        d.materialize(h).unwrap();
        let mut ws = d.materialized()[..h].to_vec();
        ws[41] = Weight::TWO;
        let bad = ProductEngine::from_weights("corrupt", &ws).unwrap();
        let r = verify_diamond_identities(&bad, &suite).unwrap();
        assert!(!r.passed());
        assert_eq!(r.first_failure(), Some("pair_reciprocal"));
        assert!(r.witnesses.iter().any(|w| matches!(w, Witness::Identity { .. })));
    }

    #[test]
    fn suite_requires_horizon() {
        let d = engine(WeightSequence::diamond(), 100);
        assert!(matches!(
            verify_diamond_identities(&d, &DiamondSuite::default()),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn block_facts_pass() {
        let nk = block_nk_sequence(6).unwrap();
        let h = nk.values()[5] + 10_000;
        let b = engine(WeightSequence::block(), h);
        let r = verify_block_facts(&b, 6, 10_000).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(r.notes.iter().any(|n| n == "half_attained: true"));
    }

    #[test]
    fn product_formula_exact_and_float() {
        let d = engine(WeightSequence::diamond(), 200);
        assert!(verify_product_formula(&d, &[(1, 3, 4)]).unwrap().passed());
        let samples = sample_triples(200, 1000, 7).unwrap();
        assert!(verify_product_formula(&d, &samples).unwrap().passed());

        let vals: Vec<f64> = (0..97).map(|k| 0.5 + 1.5 * ((k * 37 % 97) as f64) / 97.0).collect();
        let f = engine(gen_literal(&vals, Tail::PeriodicRepeat).unwrap(), 2000);
        assert!(!f.is_exact());
        let r = verify_product_formula(&f, &sample_triples(2000, 1000, 9).unwrap()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn product_formula_rejects_bad_samples() {
        let d = engine(WeightSequence::diamond(), 20);
        assert!(verify_product_formula(&d, &[(3, 3, 1)]).is_err());
        assert!(matches!(verify_product_formula(&d, &[(1, 15, 10)]), Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn lemma_holds() {
        let d = engine(WeightSequence::diamond(), 100);
        let r = verify_lemma_comparability(&d, &[(1, 2, 4)]).unwrap();
        assert!(r.passed());
        assert_eq!(r.config["log2_mu_over_delta"], json!(3.0));
        let b = engine(WeightSequence::block(), 3000);
        assert!(verify_lemma_comparability(&b, &sample_triples(3000, 500, 1).unwrap()).unwrap().passed());
        let c = engine(gen_literal(&[3.0], Tail::PeriodicRepeat).unwrap(), 50);
        assert!(verify_lemma_comparability(&c, &sample_triples(50, 100, 2).unwrap()).unwrap().passed());
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let a = sample_triples(100, 300, 5).unwrap();
        assert_eq!(a, sample_triples(100, 300, 5).unwrap());
        assert!(a.iter().all(|&(i, j, n)| 1 <= i && i < j && j + n - 1 <= 100));
    }
}
