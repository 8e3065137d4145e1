use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use ultrashift_core::{
    block_nk_sequence, build_sh_blocker, build_uh_blocker, check_hypercyclic, check_mixing, check_strong_necessary,
    check_strong_sufficient, check_ultra_conditions, orbit_norms, sample_triples, verify_block_facts,
    verify_diamond_identities, verify_lemma_comparability, verify_product_formula, Claim, DiamondSuite,
    ProductEngine, Report, SparseVector, Verdict, WitnessBundle, REPORT_SCHEMA,
};

use crate::config::{Family, Settings};
use crate::Args;

fn output(s: &Settings) -> Result<Box<dyn Write>> {
    Ok(match &s.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(s: &Settings, value: &T) -> Result<()> {
    let mut w = output(s)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_csv<T: Serialize>(s: &Settings, header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(output(s)?);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn engine(s: &Settings, horizon: usize) -> Result<ProductEngine> {
    let mut seq = s.sequence()?;
    Ok(ProductEngine::new(&mut seq, horizon)?)
}

fn sequence_json(s: &Settings, e: &ProductEngine) -> Value {
    json!({ "family": s.family.name(), "horizon": e.horizon(), "exact": e.is_exact() })
}

pub fn gen(s: &Settings) -> Result<u8> {
    let h = s.horizon_or_default();
    let mut seq = s.sequence()?;
    seq.materialize(h)?;
    let rows = seq.materialized()[..h]
        .iter()
        .enumerate()
        .map(|(k, w)| (k + 1, w.to_string(), w.log2().to_string()));
    if s.json {
        let rows: Vec<Value> = rows.map(|(n, w, l)| json!({ "n": n, "w_n": w, "log2_wn": l })).collect();
        write_json(s, &rows)?;
    } else {
        write_csv(s, &["n", "w_n", "log2_wn"], rows)?;
    }
    Ok(0)
}

const ALL_CHECKS: [&str; 5] = ["hypercyclic", "mixing", "ultra", "strong_necessary", "strong_sufficient"];

pub fn classify(s: &Settings) -> Result<u8> {
    let cfg = s.classifier()?;
    let e = engine(s, s.horizon_or_default())?;
    let mut checks: Vec<&str> = Vec::new();
    for c in &s.checks {
        if c == "all" {
            checks.extend(ALL_CHECKS);
        } else if let Some(k) = ALL_CHECKS.iter().find(|k| *k == c) {
            checks.push(k);
        } else {
            bail!("unknown check {c:?} (expected one of {ALL_CHECKS:?} or all)");
        }
    }
    let mut reports = Vec::new();
    for c in checks {
        let r = match c {
            "hypercyclic" => check_hypercyclic(&e, &cfg)?,
            "mixing" => check_mixing(&e, &cfg)?,
            "ultra" => check_ultra_conditions(&e, &s.subsequence(cfg.horizon)?, &cfg)?,
            "strong_necessary" => check_strong_necessary(&e, s.space, &cfg)?,
            _ => check_strong_sufficient(&e, &s.profile()?, &s.eps, &s.caps, &cfg)?,
        };
        reports.push(r);
    }
    let summary: serde_json::Map<String, Value> =
        reports.iter().map(|r| (r.property.clone(), json!(r.verdict))).collect();
    let doc = json!({
        "schema": REPORT_SCHEMA,
        "sequence": sequence_json(s, &e),
        "reports": reports,
        "summary": summary,
    });
    write_json(s, &doc)?;
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) { 1 } else { 0 })
}

fn diamond_suite(s: &Settings) -> DiamondSuite {
    let mut suite = DiamondSuite { m_max: s.mmax, floor_i_max: s.imax(), ..DiamondSuite::default() };
    if let Some(k) = s.kmax {
        suite.growth_k_max = k;
    }
    if s.imax.is_none() {
        suite.floor_i_max = DiamondSuite::default().floor_i_max;
    }
    suite
}

// block facts default to k ≤ 8: s_17 is about 1.3 million weights
fn block_kmax(s: &Settings) -> usize {
    s.kmax.unwrap_or(8)
}

/// Horizon needed by a replayed bundle.
fn bundle_horizon(b: &WitnessBundle) -> usize {
    let top = b.vector.max_index().unwrap_or(0);
    b.inequalities
        .iter()
        .map(|q| match q.claim {
            Claim::CoordinateEquals { n, .. } | Claim::CoordinateAtLeast { n, .. } | Claim::ForwardNormAtLeast { n, .. } => {
                top + n
            }
            _ => 1,
        })
        .max()
        .unwrap_or(1)
        .max(top + 1)
}

pub fn verify(s: &Settings, args: &Args) -> Result<u8> {
    if let Some(path) = &args.witness {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let bundle: WitnessBundle = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let e = engine(s, s.horizon.unwrap_or_else(|| bundle_horizon(&bundle)))?;
        let fresh = bundle.recheck(&e)?;
        let ok = bundle.verify(&e)?;
        write_json(
            s,
            &json!({ "schema": REPORT_SCHEMA, "sequence": sequence_json(s, &e), "witness_replay": { "verified": ok, "inequalities": fresh } }),
        )?;
        if !ok {
            eprintln!("witness replay failed: {}", path.display());
        }
        return Ok(if ok { 0 } else { 1 });
    }

    let suites: Vec<String> = if s.suite.is_empty() {
        match s.family {
            Family::Diamond => vec!["diamond".into()],
            Family::Block => vec!["block".into()],
            Family::Literal => vec!["formula".into(), "lemma".into()],
        }
    } else {
        s.suite.clone()
    };
    let mut needed = 1;
    for name in &suites {
        needed = needed.max(match name.as_str() {
            "diamond" => diamond_suite(s).required_horizon()?,
            "block" => {
                let last = *block_nk_sequence(block_kmax(s))?.values().last().expect("k_max >= 1");
                last + s.imax.unwrap_or(10_000) - 1
            }
            "formula" | "lemma" => s.horizon_or_default(),
            other => bail!("unknown suite {other:?} (expected diamond, block, formula or lemma)"),
        });
    }
    let h = s.horizon.unwrap_or(needed);
    let e = engine(s, h)?;
    let mut reports: Vec<Report> = Vec::new();
    for name in &suites {
        let r = match name.as_str() {
            "diamond" => verify_diamond_identities(&e, &diamond_suite(s))?,
            "block" => verify_block_facts(&e, block_kmax(s), s.imax.unwrap_or(10_000))?,
            "formula" => verify_product_formula(&e, &sample_triples(h, s.count.unwrap_or(1000), s.seed)?)?,
            _ => verify_lemma_comparability(&e, &sample_triples(h, s.count.unwrap_or(1000), s.seed)?)?,
        };
        reports.push(r);
    }
    write_json(s, &json!({ "schema": REPORT_SCHEMA, "sequence": sequence_json(s, &e), "reports": reports }))?;
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => {
            eprintln!("identity failed: {}: {}", r.property, r.first_failure().unwrap_or("verdict"));
            Ok(1)
        }
        None => Ok(0),
    }
}

fn read_vector(path: &Path) -> Result<SparseVector> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing vector {}", path.display()))
}

pub fn orbit(s: &Settings, args: &Args) -> Result<u8> {
    let path = args.vector.as_ref().context("orbit needs --vector <file>")?;
    let mut x = read_vector(path)?;
    if args.space.is_some() {
        x = x.with_space(s.space);
    }
    let h = s.horizon_or_default();
    let top = x.max_index().unwrap_or(0);
    if top >= h {
        bail!("vector support reaches index {top}, beyond horizon {h}");
    }
    let nk = s.subsequence(h - top)?.up_to(h - top);
    let e = engine(s, h)?;
    let points = orbit_norms(&e, &x, &nk)?;
    if s.json {
        write_json(s, &points)?;
    } else {
        write_csv(s, &["n", "norm"], points.iter().map(|p| (p.n, p.norm)))?;
    }
    Ok(0)
}

pub fn scan(s: &Settings) -> Result<u8> {
    let cfg = s.classifier()?;
    let e = engine(s, s.horizon_or_default())?;
    let rows = e.scan_table(cfg.horizon, Some(cfg.i_max))?;
    if s.json {
        write_json(s, &rows)?;
    } else {
        let rows = rows.iter().map(|r| {
            (r.n, r.log2_m1n.to_string(), r.min_log2.map(|v| v.to_string()), r.argmin)
        });
        write_csv(s, &["n", "log2_M1n", "min_log2_Min_window", "argmin"], rows)?;
    }
    Ok(0)
}

pub fn witness(s: &Settings, args: &Args) -> Result<u8> {
    let bundle = match args.kind.as_deref().unwrap_or("uh") {
        "uh" => {
            let cfg = s.classifier()?;
            let e = engine(s, s.horizon_or_default())?;
            build_uh_blocker(&e, &s.subsequence(cfg.horizon)?, s.count.unwrap_or(4), &cfg)?
        }
        "sh" => {
            let n = args.n.unwrap_or(10);
            let imax = s.imax();
            let h = s.horizon.unwrap_or(2 * n + imax);
            let e = engine(s, h)?;
            build_sh_blocker(&e, s.space, n, imax)?
        }
        other => bail!("unknown witness kind {other:?} (expected uh or sh)"),
    };
    write_json(s, &bundle)?;
    Ok(if bundle.holds() { 0 } else { 1 })
}
