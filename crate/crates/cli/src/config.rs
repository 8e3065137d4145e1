//! Run configuration: an optional TOML file merged with command-line flags.
//! Flags win over the file, the file wins over built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use ultrashift_core::{
    ak_sequence, block_nk_sequence, diamond_scaled_sequence, ClassifierConfig, GrowthProfile, ShProfile, SpaceSpec,
    SubseqSpec, Tail, Weight, WeightSequence,
};

use crate::Args;

pub const DEFAULT_HORIZON: usize = 100_000;
pub const DEFAULT_IMAX: usize = 10_000;
pub const DEFAULT_KMAX: usize = 10;
pub const DEFAULT_MMAX: u32 = 5;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub sequence: Option<SequenceConfig>,
    pub horizon: Option<usize>,
    pub imax: Option<usize>,
    pub kmax: Option<usize>,
    pub mmax: Option<u32>,
    pub space: Option<String>,
    pub nk: Option<String>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
    pub checks: Option<Vec<String>>,
    pub growth_log2: Option<f64>,
    pub decay_log2: Option<f64>,
    pub tail_window: Option<usize>,
    pub sh_profile: Option<String>,
    pub eps: Option<Vec<f64>>,
    pub caps: Option<Vec<usize>>,
    pub suite: Option<Vec<String>>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceConfig {
    pub family: Option<String>,
    pub values: Option<Vec<LiteralValue>>,
    pub tail: Option<String>,
    pub values_file: Option<PathBuf>,
}

/// Weights in the file may be numbers or strings such as `"1/4"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LiteralValue {
    Number(f64),
    Text(String),
}

impl LiteralValue {
    fn to_weight(&self) -> Result<Weight> {
        Ok(match self {
            LiteralValue::Number(v) => Weight::new(*v)?,
            LiteralValue::Text(s) => s.parse()?,
        })
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Literal,
    Block,
    Diamond,
}

impl Family {
    fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(Family::Literal),
            "block" => Ok(Family::Block),
            "diamond" => Ok(Family::Diamond),
            _ => bail!("unknown family {s:?} (expected literal, block or diamond)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Literal => "literal",
            Family::Block => "block",
            Family::Diamond => "diamond",
        }
    }
}

/// Everything a command needs, after merging.
#[derive(Debug)]
pub struct Settings {
    pub family: Family,
    pub literal: Vec<Weight>,
    pub tail: Tail,
    pub horizon: Option<usize>,
    pub imax: Option<usize>,
    pub kmax: Option<usize>,
    pub mmax: u32,
    pub space: SpaceSpec,
    pub nk: Option<String>,
    pub out: Option<PathBuf>,
    pub json: bool,
    pub checks: Vec<String>,
    pub growth_log2: f64,
    pub decay_log2: f64,
    pub tail_window: Option<usize>,
    pub sh_profile: String,
    pub eps: Vec<f64>,
    pub caps: Vec<usize>,
    pub suite: Vec<String>,
    pub count: Option<usize>,
    pub seed: u64,
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Reads the `w_n` column of a `gen` CSV, or the only column of a headerless list.
pub fn read_values_file(path: &Path) -> Result<Vec<Weight>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    let mut column = 0;
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("reading {}", path.display()))?;
        if row == 0 {
            if let Some(k) = rec.iter().position(|h| h == "w_n") {
                column = k;
                continue;
            }
        }
        let cell = rec.get(column).with_context(|| format!("{}: row {} is short", path.display(), row + 1))?;
        out.push(cell.parse::<Weight>().with_context(|| format!("{}: row {}", path.display(), row + 1))?);
    }
    Ok(out)
}

impl Settings {
    pub fn resolve(args: &Args, command: &str) -> Result<Self> {
        let file = match &args.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(c) = &file.command {
            if c != command {
                bail!("config is for command {c:?}, invoked as {command:?}");
            }
        }
        let seq = file.sequence.unwrap_or_default();

        let family_name = args.family.clone().or(seq.family).unwrap_or_else(|| "diamond".into());
        let family = Family::parse(&family_name)?;
        let tail = match args.tail.as_deref().or(seq.tail.as_deref()) {
            Some(t) => t.parse()?,
            None => Tail::Ones,
        };
        let literal = if let Some(v) = &args.values {
            split_list(v).map(|t| t.parse::<Weight>().map_err(Into::into)).collect::<Result<Vec<_>>>()?
        } else if let Some(p) = args.values_file.as_ref().or(seq.values_file.as_ref()) {
            read_values_file(p)?
        } else if let Some(vs) = &seq.values {
            vs.iter().map(LiteralValue::to_weight).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        if family == Family::Literal && literal.is_empty() {
            bail!("literal family needs --values, --values-file or sequence.values");
        }

        let space_text = args.space.clone().or(file.space).unwrap_or_else(|| "l2".into());
        let checks = match &args.checks {
            Some(c) => split_list(c).map(String::from).collect(),
            None => file.checks.unwrap_or_else(|| vec!["hypercyclic".into(), "mixing".into(), "ultra".into()]),
        };
        let suite = match &args.suite {
            Some(c) => split_list(c).map(String::from).collect(),
            None => file.suite.unwrap_or_default(),
        };
        let eps = match &args.eps {
            Some(e) => split_list(e).map(|t| t.parse::<f64>().context("bad --eps")).collect::<Result<_>>()?,
            None => file.eps.unwrap_or_else(|| vec![2f64.powi(-4), 2f64.powi(-6), 2f64.powi(-8)]),
        };
        let caps = match &args.caps {
            Some(c) => split_list(c).map(|t| t.parse::<usize>().context("bad --caps")).collect::<Result<_>>()?,
            None => file.caps.unwrap_or_else(|| vec![4, 16]),
        };

        Ok(Settings {
            family,
            literal,
            tail,
            horizon: args.horizon.or(file.horizon),
            imax: args.imax.or(file.imax),
            kmax: args.kmax.or(file.kmax),
            mmax: args.mmax.or(file.mmax).unwrap_or(DEFAULT_MMAX),
            space: space_text.parse()?,
            nk: args.nk.clone().or(file.nk),
            out: args.out.clone().or(file.out),
            json: args.json || file.json.unwrap_or(false),
            checks,
            growth_log2: args.growth_log2.or(file.growth_log2).unwrap_or(ClassifierConfig::DEFAULT_GROWTH_LOG2),
            decay_log2: args.decay_log2.or(file.decay_log2).unwrap_or(ClassifierConfig::DEFAULT_DECAY_LOG2),
            tail_window: args.tail_window.or(file.tail_window),
            sh_profile: args.sh_profile.clone().or(file.sh_profile).unwrap_or_else(|| "diamond".into()),
            eps,
            caps,
            suite,
            count: args.count.or(file.count),
            seed: args.seed.or(file.seed).unwrap_or(0),
        })
    }

    pub fn kmax(&self) -> usize {
        self.kmax.unwrap_or(DEFAULT_KMAX)
    }

    pub fn horizon_or_default(&self) -> usize {
        self.horizon.unwrap_or(DEFAULT_HORIZON)
    }

    /// `--imax`, or a tenth of the horizon capped at the default.
    pub fn imax(&self) -> usize {
        self.imax.unwrap_or_else(|| DEFAULT_IMAX.min(self.horizon_or_default() / 10).max(1))
    }

    pub fn sequence(&self) -> Result<WeightSequence> {
        Ok(match self.family {
            Family::Literal => WeightSequence::literal(self.literal.clone(), self.tail)?,
            Family::Block => WeightSequence::block(),
            Family::Diamond => WeightSequence::diamond(),
        })
    }

    /// Classifier horizon: every window `M_i^n` with `i ≤ imax`, `n ≤ H` stays inside
    /// the materialised weights.
    pub fn classifier(&self) -> Result<ClassifierConfig> {
        let h = self.horizon_or_default();
        let imax = self.imax();
        if imax == 0 || imax > h {
            bail!("--imax must be between 1 and the horizon ({h})");
        }
        let mut cfg = ClassifierConfig::new(h - imax + 1, imax)
            .with_growth_log2(self.growth_log2)
            .with_decay_log2(self.decay_log2);
        if let Some(w) = self.tail_window {
            cfg = cfg.with_tail_window(w);
        }
        Ok(cfg)
    }

    /// `--nk`, defaulting to the family's own subsequence (`full` for literals).
    pub fn subsequence(&self, limit: usize) -> Result<SubseqSpec> {
        let text = self.nk.clone().unwrap_or_else(|| match self.family {
            Family::Block => "block".into(),
            Family::Diamond => "diamond".into(),
            Family::Literal => "full".into(),
        });
        parse_subsequence(&text, self.kmax(), limit)
    }

    pub fn profile(&self) -> Result<ShProfile> {
        match self.sh_profile.as_str() {
            "diamond" => Ok(ShProfile::diamond()),
            "reciprocal" => Ok(ShProfile {
                a: 1.0,
                f: GrowthProfile::Reciprocal,
                candidates: ultrashift_core::CandidateOrder::Scan,
            }),
            other => bail!("unknown --sh-profile {other:?} (expected diamond or reciprocal)"),
        }
    }
}

/// `block`, `diamond`, `full`, `diamond-scaled:<m>`, or an explicit list `1,5,21`.
pub fn parse_subsequence(text: &str, kmax: usize, limit: usize) -> Result<SubseqSpec> {
    let t = text.trim();
    Ok(match t {
        "block" => block_nk_sequence(kmax)?,
        "diamond" => ak_sequence(kmax)?,
        "full" => SubseqSpec::full(limit),
        _ => {
            if let Some(m) = t.strip_prefix("diamond-scaled:") {
                diamond_scaled_sequence(m.parse().context("bad diamond-scaled exponent")?, kmax)?
            } else {
                let values = split_list(t)
                    .map(|v| v.parse::<usize>().with_context(|| format!("bad --nk entry {v:?}")))
                    .collect::<Result<Vec<_>>>()?;
                SubseqSpec::explicit(values)?
            }
        }
    })
}
