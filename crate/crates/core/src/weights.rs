//! Weight sequences `w_1, w_2, ...` for weighted backward shifts.
//!
//! Weights are indexed from 1, vector coordinates from 0. A [`WeightSequence`] is an
//! append-only cache in front of a generator; any statement about "all n" is only
//! ever checked up to a declared horizon.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log2::Log2Value;

/// Literal lists longer than this are rejected.
pub const MAX_LITERAL_LEN: usize = 1_000_000;

/// A single positive weight, stored by its base-2 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Log2Value);

impl Weight {
    pub const ONE: Weight = Weight(Log2Value::Exact(0));
    pub const TWO: Weight = Weight(Log2Value::Exact(1));
    pub const HALF: Weight = Weight(Log2Value::Exact(-1));
    pub const QUARTER: Weight = Weight(Log2Value::Exact(-2));

    pub fn pow2(e: i64) -> Self {
        Weight(Log2Value::Exact(e))
    }

    /// From a positive finite float; powers of two are stored exactly.
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveWeight { index: 0, value: value.to_string() });
        }
        let e = value.log2().round();
        if e.abs() < 1100.0 && Log2Value::Exact(e as i64).value() == value {
            Ok(Weight(Log2Value::Exact(e as i64)))
        } else {
            Ok(Weight(Log2Value::Float(value.log2())))
        }
    }

    /// From the ratio `num / den` of positive integers.
    pub fn from_ratio(num: u128, den: u128) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::NonPositiveWeight { index: 0, value: format!("{num}/{den}") });
        }
        let (tn, td) = (num.trailing_zeros(), den.trailing_zeros());
        if num >> tn == den >> td {
            Ok(Weight(Log2Value::Exact(tn as i64 - td as i64)))
        } else {
            Ok(Weight(Log2Value::Float((num as f64).log2() - (den as f64).log2())))
        }
    }

    pub fn from_log2(l: Log2Value) -> Self {
        Weight(l)
    }

    pub fn log2(&self) -> Log2Value {
        self.0
    }

    pub fn value(&self) -> f64 {
        self.0.value()
    }

    pub fn is_dyadic(&self) -> bool {
        self.0.is_exact()
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `p/q` with positive integers, or a decimal literal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::BadWeight(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let (p, q) = (p.trim(), q.trim());
            if p.starts_with('-') || q.starts_with('-') {
                return Err(Error::NonPositiveWeight { index: 0, value: s.to_string() });
            }
            let num: u128 = p.parse().map_err(|_| bad())?;
            let den: u128 = q.parse().map_err(|_| bad())?;
            return Weight::from_ratio(num, den);
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        Weight::new(v).map_err(|_| Error::NonPositiveWeight { index: 0, value: s.to_string() })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// How a literal list continues past its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Ones,
    #[serde(rename = "repeat")]
    PeriodicRepeat,
}

impl FromStr for Tail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(Tail::Ones),
            "repeat" | "periodic" => Ok(Tail::PeriodicRepeat),
            _ => Err(Error::InvalidArgument(format!("unknown tail rule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    /// Every weight is an integer power of two.
    DyadicExact,
    FloatLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Literal,
    Block,
    Diamond,
    Custom,
}

pub type GeneratorFn = dyn Fn(usize) -> Weight + Send + Sync;

#[derive(Clone)]
enum Family {
    Literal { values: Vec<Weight>, tail: Tail },
    Block(BlockCursor),
    Diamond,
    Custom { name: String, generate: Arc<GeneratorFn> },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Literal { values, tail } => f
                .debug_struct("Literal")
                .field("len", &values.len())
                .field("tail", tail)
                .finish(),
            Family::Block(_) => f.write_str("Block"),
            Family::Diamond => f.write_str("Diamond"),
            Family::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

/// A lazily generated positive weight sequence with an append-only cache.
///
/// Growing the cache needs `&mut self`; once materialised to a horizon the
/// sequence can be shared read-only through [`WeightSequence::get`].
#[derive(Debug, Clone)]
pub struct WeightSequence {
    family: Family,
    cache: Vec<Weight>,
    exactness: Exactness,
}

impl WeightSequence {
    pub fn literal(values: Vec<Weight>, tail: Tail) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyLiteral);
        }
        if values.len() > MAX_LITERAL_LEN {
            return Err(Error::LiteralTooLong { len: values.len(), limit: MAX_LITERAL_LEN });
        }
        let exactness = if values.iter().all(Weight::is_dyadic) {
            Exactness::DyadicExact
        } else {
            Exactness::FloatLog
        };
        Ok(WeightSequence { family: Family::Literal { values, tail }, cache: Vec::new(), exactness })
    }

    /// The block sequence `2 | 1 ½ | 2 2 | 1⁵ ½ 1⁵ ½ | 2 2 2 | ...`.
    pub fn block() -> Self {
        WeightSequence {
            family: Family::Block(BlockCursor::default()),
            cache: Vec::new(),
            exactness: Exactness::DyadicExact,
        }
    }

    /// The self-similar sequence `w_n = 2` (n odd), `w_n = (2 w_{n/2})⁻¹` (n even).
    pub fn diamond() -> Self {
        WeightSequence { family: Family::Diamond, cache: Vec::new(), exactness: Exactness::DyadicExact }
    }

    /// A user generator, called with 1-based indices in increasing order.
    ///
    /// When `exactness` is `DyadicExact` every produced weight must be dyadic;
    /// violations surface as [`Error::NotDyadic`] during materialisation.
    pub fn custom(
        name: impl Into<String>,
        exactness: Exactness,
        generate: impl Fn(usize) -> Weight + Send + Sync + 'static,
    ) -> Self {
        WeightSequence {
            family: Family::Custom { name: name.into(), generate: Arc::new(generate) },
            cache: Vec::new(),
            exactness,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self.family {
            Family::Literal { .. } => FamilyKind::Literal,
            Family::Block(_) => FamilyKind::Block,
            Family::Diamond => FamilyKind::Diamond,
            Family::Custom { .. } => FamilyKind::Custom,
        }
    }

    pub fn name(&self) -> &str {
        match &self.family {
            Family::Literal { .. } => "literal",
            Family::Block(_) => "block",
            Family::Diamond => "diamond",
            Family::Custom { name, .. } => name,
        }
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    /// Number of cached weights.
    pub fn materialized_len(&self) -> usize {
        self.cache.len()
    }

    /// Cached weights; element 0 is `w_1`.
    pub fn materialized(&self) -> &[Weight] {
        &self.cache
    }

    /// Grows the cache so that `w_1..=w_horizon` are available.
    pub fn materialize(&mut self, horizon: usize) -> Result<()> {
        if horizon <= self.cache.len() {
            return Ok(());
        }
        self.cache.reserve(horizon - self.cache.len());
        while self.cache.len() < horizon {
            let n = self.cache.len() + 1;
            let w = self.next_weight(n)?;
            if self.exactness == Exactness::DyadicExact && !w.is_dyadic() {
                return Err(Error::NotDyadic(n));
            }
            self.cache.push(w);
        }
        Ok(())
    }

    /// `w_n`, growing the cache if needed.
    pub fn weight(&mut self, n: usize) -> Result<Weight> {
        if n == 0 {
            return Err(Error::InvalidArgument("weights are indexed from 1".into()));
        }
        self.materialize(n)?;
        Ok(self.cache[n - 1])
    }

    /// `w_n` if already cached.
    pub fn get(&self, n: usize) -> Option<Weight> {
        n.checked_sub(1).and_then(|i| self.cache.get(i).copied())
    }

    /// `(min, max)` weight over `w_1..=w_horizon`.
    pub fn bounds(&mut self, horizon: usize) -> Result<(Weight, Weight)> {
        if horizon == 0 {
            return Err(Error::InvalidArgument("empty range".into()));
        }
        self.materialize(horizon)?;
        Ok(weight_bounds(&self.cache[..horizon]))
    }

    // `n` is always cache.len() + 1 here.
    fn next_weight(&mut self, n: usize) -> Result<Weight> {
        Ok(match &mut self.family {
            Family::Literal { values, tail } => {
                if n <= values.len() {
                    values[n - 1]
                } else {
                    match tail {
                        Tail::Ones => Weight::ONE,
                        Tail::PeriodicRepeat => values[(n - 1) % values.len()],
                    }
                }
            }
            Family::Block(cursor) => cursor.next().ok_or(Error::Overflow("block lengths"))?,
            Family::Diamond => {
                if n % 2 == 1 {
                    Weight::TWO
                } else {
                    let half = self.cache[n / 2 - 1].log2();
                    Weight::from_log2(-(half + Log2Value::Exact(1)))
                }
            }
            Family::Custom { generate, .. } => generate(n),
        })
    }
}

pub(crate) fn weight_bounds(ws: &[Weight]) -> (Weight, Weight) {
    let mut lo = ws[0];
    let mut hi = ws[0];
    for &w in &ws[1..] {
        if w < lo {
            lo = w;
        }
        if w > hi {
            hi = w;
        }
    }
    (lo, hi)
}

/// Literal sequence from positive floats.
pub fn gen_literal(values: &[f64], tail: Tail) -> Result<WeightSequence> {
    let ws = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            Weight::new(v).map_err(|_| Error::NonPositiveWeight { index: i + 1, value: v.to_string() })
        })
        .collect::<Result<Vec<_>>>()?;
    WeightSequence::literal(ws, tail)
}

/// Block sequence materialised to `max_index`.
pub fn gen_block(max_index: usize) -> Result<WeightSequence> {
    require_positive(max_index, "max_index")?;
    let mut seq = WeightSequence::block();
    seq.materialize(max_index)?;
    Ok(seq)
}

/// Diamond sequence materialised to `max_index`.
pub fn gen_diamond(max_index: usize) -> Result<WeightSequence> {
    require_positive(max_index, "max_index")?;
    let mut seq = WeightSequence::diamond();
    seq.materialize(max_index)?;
    Ok(seq)
}

fn require_positive(v: usize, what: &str) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidArgument(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// What a block holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockContent {
    /// A run of `count` twos (odd blocks).
    Twos { count: usize },
    /// `count` groups of `ones_before` ones followed by a half (even blocks).
    Halves { count: usize, ones_before: usize },
}

/// Layout of block `b_index`: its length `|b_n|` and the running total `s_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub index: usize,
    pub length: usize,
    pub cumulative: usize,
    pub content: BlockContent,
}

impl BlockPlan {
    /// Weight at 0-based offset `pos` inside this block.
    fn weight_at(&self, pos: usize) -> Weight {
        match self.content {
            BlockContent::Twos { .. } => Weight::TWO,
            BlockContent::Halves { ones_before, .. } => {
                if (pos + 1).is_multiple_of(ones_before + 1) {
                    Weight::HALF
                } else {
                    Weight::ONE
                }
            }
        }
    }
}

/// Infinite iterator over block layouts; ends only if a length overflows `usize`.
#[derive(Debug, Clone, Default)]
pub struct BlockPlans {
    next_index: usize,
    total: usize,
}

pub fn block_plans() -> BlockPlans {
    BlockPlans::default()
}

impl Iterator for BlockPlans {
    type Item = BlockPlan;

    fn next(&mut self) -> Option<BlockPlan> {
        let n = self.next_index.checked_add(1)?;
        let content = if n % 2 == 1 {
            BlockContent::Twos { count: n.div_ceil(2) }
        } else {
            BlockContent::Halves { count: n / 2, ones_before: self.total }
        };
        let length = match content {
            BlockContent::Twos { count } => count,
            BlockContent::Halves { count, ones_before } => count.checked_mul(ones_before.checked_add(1)?)?,
        };
        let cumulative = self.total.checked_add(length)?;
        self.next_index = n;
        self.total = cumulative;
        Some(BlockPlan { index: n, length, cumulative, content })
    }
}

/// `s_n`, the total length of blocks `b_1..=b_n` (`s_0 = 0`).
pub fn block_boundary(n: usize) -> Result<usize> {
    if n == 0 {
        return Ok(0);
    }
    block_plans()
        .nth(n - 1)
        .map(|p| p.cumulative)
        .ok_or(Error::Overflow("block boundary"))
}

#[derive(Debug, Clone, Default)]
struct BlockCursor {
    plans: BlockPlans,
    current: Option<(BlockPlan, usize)>,
}

impl Iterator for BlockCursor {
    type Item = Weight;

    fn next(&mut self) -> Option<Weight> {
        loop {
            if let Some((plan, pos)) = &mut self.current {
                if *pos < plan.length {
                    let w = plan.weight_at(*pos);
                    *pos += 1;
                    return Some(w);
                }
            }
            self.current = Some((self.plans.next()?, 0));
        }
    }
}

/// Which rule produced a subsequence `(n_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubseqKind {
    Full,
    /// `n_k = s_{2k+1}`.
    BlockNk,
    /// `a_1 = 1`, `a_k = 4 a_{k-1} + 1`.
    DiamondAk,
    /// `n_k = 4^m a_k`.
    DiamondScaled(u32),
    Explicit,
}

/// A strictly increasing sequence of positive integers `n_1 < n_2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubseqSpec {
    kind: SubseqKind,
    values: Vec<usize>,
}

impl SubseqSpec {
    pub fn explicit(values: Vec<usize>) -> Result<Self> {
        if values.first() == Some(&0) {
            return Err(Error::InvalidArgument("subsequence values must be positive".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("subsequence must be strictly increasing".into()));
        }
        Ok(SubseqSpec { kind: SubseqKind::Explicit, values })
    }

    /// `1, 2, ..., n_max`.
    pub fn full(n_max: usize) -> Self {
        SubseqSpec { kind: SubseqKind::Full, values: (1..=n_max).collect() }
    }

    pub fn kind(&self) -> SubseqKind {
        self.kind
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The terms not exceeding `limit`, same kind.
    pub fn up_to(&self, limit: usize) -> SubseqSpec {
        let end = self.values.partition_point(|&n| n <= limit);
        SubseqSpec { kind: self.kind, values: self.values[..end].to_vec() }
    }
}

/// `a_k` for `k ≥ 1`, or `None` on overflow.
pub fn a_k(k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    let mut a: usize = 1;
    for _ in 1..k {
        a = a.checked_mul(4)?.checked_add(1)?;
    }
    Some(a)
}

/// `a_1, ..., a_{k_max}`.
pub fn ak_sequence(k_max: usize) -> Result<SubseqSpec> {
    require_positive(k_max, "k_max")?;
    let values = (1..=k_max)
        .map(|k| a_k(k).ok_or(Error::Overflow("a_k")))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubseqSpec { kind: SubseqKind::DiamondAk, values })
}

/// `4^m a_1, ..., 4^m a_{k_max}`.
pub fn diamond_scaled_sequence(m: u32, k_max: usize) -> Result<SubseqSpec> {
    let scale = 4usize.checked_pow(m).ok_or(Error::Overflow("4^m"))?;
    let base = ak_sequence(k_max)?;
    let values = base
        .values
        .iter()
        .map(|&a| a.checked_mul(scale).ok_or(Error::Overflow("4^m a_k")))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubseqSpec { kind: SubseqKind::DiamondScaled(m), values })
}

/// `s_3, s_5, ..., s_{2 k_max + 1}`.
pub fn block_nk_sequence(k_max: usize) -> Result<SubseqSpec> {
    require_positive(k_max, "k_max")?;
    let mut plans = block_plans();
    let mut values = Vec::with_capacity(k_max);
    // skip b_1, b_2; then take every other cumulative length
    plans.next();
    plans.next();
    for _ in 0..k_max {
        let odd = plans.next().ok_or(Error::Overflow("s_n"))?;
        values.push(odd.cumulative);
        plans.next();
    }
    Ok(SubseqSpec { kind: SubseqKind::BlockNk, values })
}
