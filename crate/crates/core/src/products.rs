//! Window products `M_i^n = w_i w_{i+1} ... w_{i+n-1}` through a prefix table of
//! base-2 logarithms: `M_i^n = 2^(L[i+n-1] - L[i-1])`.
//!
//! Dyadic sequences use checked `i64` prefixes and every window is exact. Other
//! sequences use a compensated `f64` prefix (running sum plus error term).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::log2::Log2Value;
use crate::weights::{weight_bounds, Exactness, FamilyKind, Weight, WeightSequence};

#[derive(Debug, Clone)]
enum Prefix {
    Exact(Vec<i64>),
    Float { sum: Vec<f64>, comp: Vec<f64> },
}

/// Read-only product oracle over `w_1..=w_horizon`.
#[derive(Debug, Clone)]
pub struct ProductEngine {
    name: String,
    kind: FamilyKind,
    horizon: usize,
    prefix: Prefix,
    min_weight: Weight,
    max_weight: Weight,
}

impl ProductEngine {
    /// Materialises `seq` to `horizon` and builds the prefix table.
    pub fn new(seq: &mut WeightSequence, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidArgument("engine horizon must be at least 1".into()));
        }
        seq.materialize(horizon)?;
        let ws = &seq.materialized()[..horizon];
        Self::build(seq.name().to_string(), seq.kind(), seq.exactness(), ws)
    }

    /// Engine over an explicit weight slice (`ws[0] = w_1`).
    pub fn from_weights(name: impl Into<String>, ws: &[Weight]) -> Result<Self> {
        if ws.is_empty() {
            return Err(Error::InvalidArgument("engine horizon must be at least 1".into()));
        }
        let exactness = if ws.iter().all(Weight::is_dyadic) {
            Exactness::DyadicExact
        } else {
            Exactness::FloatLog
        };
        Self::build(name.into(), FamilyKind::Custom, exactness, ws)
    }

    fn build(name: String, kind: FamilyKind, exactness: Exactness, ws: &[Weight]) -> Result<Self> {
        let prefix = match exactness {
            Exactness::DyadicExact => {
                let mut p = Vec::with_capacity(ws.len() + 1);
                let mut acc: i64 = 0;
                p.push(0);
                for w in ws {
                    let e = w.log2().exponent().ok_or(Error::NotDyadic(p.len()))?;
                    acc = acc.checked_add(e).ok_or(Error::Overflow("log2 prefix"))?;
                    p.push(acc);
                }
                Prefix::Exact(p)
            }
            Exactness::FloatLog => {
                let mut sum = Vec::with_capacity(ws.len() + 1);
                let mut comp = Vec::with_capacity(ws.len() + 1);
                let (mut s, mut c) = (0.0f64, 0.0f64);
                sum.push(0.0);
                comp.push(0.0);
                for w in ws {
                    let x = w.log2().log2();
                    let t = s + x;
                    if s.abs() >= x.abs() {
                        c += (s - t) + x;
                    } else {
                        c += (x - t) + s;
                    }
                    s = t;
                    sum.push(s);
                    comp.push(c);
                }
                Prefix::Float { sum, comp }
            }
        };
        let (min_weight, max_weight) = weight_bounds(ws);
        Ok(ProductEngine { name, kind, horizon: ws.len(), prefix, min_weight, max_weight })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.prefix, Prefix::Exact(_))
    }

    /// Smallest weight in the horizon (`δ`).
    pub fn min_weight(&self) -> Weight {
        self.min_weight
    }

    /// Largest weight in the horizon (`μ`).
    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    /// Fails unless `w_1..=w_last` are all inside the horizon.
    pub fn require(&self, last: usize) -> Result<()> {
        if last > self.horizon {
            Err(Error::HorizonExceeded { needed: last, horizon: self.horizon })
        } else {
            Ok(())
        }
    }

    fn check_window(&self, i: usize, n: usize) -> Result<()> {
        if i == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!("window (i = {i}, n = {n}) needs i, n >= 1")));
        }
        let last = i.checked_add(n - 1).ok_or(Error::Overflow("window end"))?;
        self.require(last)
    }

    // Caller guarantees 1 <= i, 1 <= n, i + n - 1 <= horizon.
    #[inline]
    fn window(&self, i: usize, n: usize) -> Log2Value {
        let (a, b) = (i - 1, i + n - 1);
        match &self.prefix {
            Prefix::Exact(p) => Log2Value::Exact(p[b] - p[a]),
            Prefix::Float { sum, comp } => Log2Value::Float((sum[b] - sum[a]) + (comp[b] - comp[a])),
        }
    }

    /// `M_i^n`.
    pub fn product(&self, i: usize, n: usize) -> Result<Log2Value> {
        self.check_window(i, n)?;
        Ok(self.window(i, n))
    }

    /// `w_i`.
    pub fn weight(&self, i: usize) -> Result<Weight> {
        self.product(i, 1).map(Weight::from_log2)
    }

    /// `min_{1 ≤ i ≤ i_max} M_i^n` and the smallest `i` attaining it.
    pub fn min_product_over_i(&self, n: usize, i_max: usize) -> Result<(Log2Value, usize)> {
        if i_max == 0 {
            return Err(Error::InvalidArgument("i_max must be at least 1".into()));
        }
        self.check_window(i_max, n)?;
        Ok(self.min_window(n, 1, i_max))
    }

    /// Minimum over `i_lo ..= i_hi`, ties to the smallest index. Bounds pre-checked.
    fn min_window(&self, n: usize, i_lo: usize, i_hi: usize) -> (Log2Value, usize) {
        match &self.prefix {
            Prefix::Exact(p) => {
                let lo = &p[i_lo - 1..i_hi];
                let hi = &p[i_lo - 1 + n..i_hi + n];
                let mut best = i64::MAX;
                let mut arg = 0;
                for (k, (a, b)) in lo.iter().zip(hi).enumerate() {
                    let v = b - a;
                    if v < best {
                        best = v;
                        arg = k;
                    }
                }
                (Log2Value::Exact(best), i_lo + arg)
            }
            Prefix::Float { .. } => {
                let mut best = self.window(i_lo, n);
                let mut arg = i_lo;
                for i in i_lo + 1..=i_hi {
                    let v = self.window(i, n);
                    if v < best {
                        best = v;
                        arg = i;
                    }
                }
                (best, arg)
            }
        }
    }

    /// `min_{i ≤ i_max} M_i^n` for every `n` in `1..=n_max`, computed in parallel.
    pub fn min_products(&self, n_max: usize, i_max: usize) -> Result<Vec<(Log2Value, usize)>> {
        if n_max == 0 {
            return Ok(Vec::new());
        }
        self.min_product_over_i(n_max, i_max)?;
        Ok((1..=n_max).into_par_iter().map(|n| self.min_window(n, 1, i_max)).collect())
    }

    /// `M_1^n` for `n = 1..=n_max` with summary statistics.
    pub fn scan_m1(&self, n_max: usize) -> Result<M1Scan> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        self.require(n_max)?;
        let values: Vec<Log2Value> = (1..=n_max).map(|n| self.window(1, n)).collect();
        let mut max = (values[0], 1);
        for (k, v) in values.iter().enumerate() {
            if *v > max.0 {
                max = (*v, k + 1);
            }
        }
        let unit_indices = if self.is_exact() {
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.exponent() == Some(0))
                .map(|(k, _)| k + 1)
                .collect()
        } else {
            Vec::new()
        };
        Ok(M1Scan { values, running_max: max, unit_indices })
    }

    /// Rows `(n, log2 M_1^n, min_i log2 M_i^n, argmin)` for export; the minimum
    /// columns are present when `i_max` is given.
    pub fn scan_table(&self, n_max: usize, i_max: Option<usize>) -> Result<Vec<ScanRow>> {
        let m1 = self.scan_m1(n_max)?;
        let mins = match i_max {
            Some(i_max) => Some(self.min_products(n_max, i_max)?),
            None => None,
        };
        Ok(m1
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| ScanRow {
                n: k + 1,
                log2_m1n: v,
                min_log2: mins.as_ref().map(|m| m[k].0),
                argmin: mins.as_ref().map(|m| m[k].1),
            })
            .collect())
    }
}

/// Output of [`ProductEngine::scan_m1`].
#[derive(Debug, Clone)]
pub struct M1Scan {
    /// `values[n - 1] = M_1^n`.
    pub values: Vec<Log2Value>,
    /// Largest `M_1^n` seen and the first `n` reaching it.
    pub running_max: (Log2Value, usize),
    /// Every `n` with `M_1^n = 1` (dyadic engines only).
    pub unit_indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub log2_m1n: Log2Value,
    pub min_log2: Option<Log2Value>,
    pub argmin: Option<usize>,
}
