//! Finitely supported vectors in `c_0` / `ℓ^p` and the coordinate actions of the
//! weighted backward shift `B_w` and its right inverse `S`:
//!
//! * `(B_w^n x)_j = M_{j+1}^n x_{j+n}`
//! * `(S^n x)_{k+n} = x_k / M_{k+1}^n`, zero below index `n`.
//!
//! Coordinates are 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::products::ProductEngine;
use crate::weights::SubseqSpec;

/// `ℓ^p` (`p ≥ 1`) or `c_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SpaceSpec {
    Lp(f64),
    C0,
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(SpaceSpec::Lp(p))
        } else {
            Err(Error::InvalidArgument(format!("ℓ^p needs finite p >= 1, got {p}")))
        }
    }

    /// The exponent `p`, or `None` for `c_0`.
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            SpaceSpec::Lp(p) => Some(p),
            SpaceSpec::C0 => None,
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// `c0`, or `l<p>` such as `l1`, `l2`, `l1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "c0" {
            return Ok(SpaceSpec::C0);
        }
        let p = t
            .strip_prefix("lp")
            .or_else(|| t.strip_prefix('l'))
            .map(|r| r.trim_start_matches(['=', ':']))
            .and_then(|r| r.parse::<f64>().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown space {s:?}")))?;
        SpaceSpec::lp(p)
    }
}

impl TryFrom<String> for SpaceSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SpaceSpec> for String {
    fn from(s: SpaceSpec) -> String {
        s.to_string()
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::C0 => f.write_str("c0"),
            SpaceSpec::Lp(p) => write!(f, "l{p}"),
        }
    }
}

/// A finitely supported sequence `(x_0, x_1, ...)`; zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct SparseVector {
    space: SpaceSpec,
    entries: BTreeMap<usize, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorRepr {
    space: SpaceSpec,
    entries: Vec<(usize, f64)>,
}

impl TryFrom<VectorRepr> for SparseVector {
    type Error = Error;

    fn try_from(r: VectorRepr) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, _) in &r.entries {
            if !seen.insert(*i) {
                return Err(Error::InvalidArgument(format!("duplicate coordinate {i}")));
            }
        }
        SparseVector::from_entries(r.space, r.entries)
    }
}

impl From<SparseVector> for VectorRepr {
    fn from(v: SparseVector) -> Self {
        VectorRepr { space: v.space, entries: v.entries.into_iter().collect() }
    }
}

impl SparseVector {
    pub fn zero(space: SpaceSpec) -> Self {
        SparseVector { space, entries: BTreeMap::new() }
    }

    /// The basis vector `e_j`.
    pub fn basis(j: usize, space: SpaceSpec) -> Self {
        let mut v = SparseVector::zero(space);
        v.entries.insert(j, 1.0);
        v
    }

    pub fn from_entries(space: SpaceSpec, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut v = SparseVector::zero(space);
        for (i, x) in entries {
            if !x.is_finite() {
                return Err(Error::InvalidArgument(format!("coordinate {i} is not finite")));
            }
            v.set(i, x);
        }
        Ok(v)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn with_space(mut self, space: SpaceSpec) -> Self {
        self.space = space;
        self
    }

    pub fn set(&mut self, i: usize, x: f64) {
        if x == 0.0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries.get(&i).copied().unwrap_or(0.0)
    }

    /// Nonzero `(index, value)` pairs in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &x)| (i, x))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn norm(&self) -> f64 {
        norm_of(self.entries.values().copied(), self.space)
    }

    /// Norm computed as if the vector lived in `space`.
    pub fn norm_in(&self, space: SpaceSpec) -> f64 {
        norm_of(self.entries.values().copied(), space)
    }

    pub fn scale(&self, c: f64) -> SparseVector {
        let mut out = SparseVector::zero(self.space);
        for (i, x) in self.iter() {
            out.set(i, c * x);
        }
        out
    }

    /// `self + c * other` in `self`'s space.
    pub fn axpy(&self, c: f64, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.set(i, out.get(i) + c * x);
        }
        out
    }

    /// Coordinates with index `< n` only.
    pub fn truncate_below(&self, n: usize) -> SparseVector {
        SparseVector { space: self.space, entries: self.entries.range(..n).map(|(&i, &x)| (i, x)).collect() }
    }
}

/// `c_0`: largest magnitude. `ℓ^p`: `(Σ |x_i|^p)^{1/p}`, rescaled to avoid overflow.
pub fn norm_of(values: impl Iterator<Item = f64> + Clone, space: SpaceSpec) -> f64 {
    let peak = values.clone().fold(0.0f64, |m, x| m.max(x.abs()));
    match space {
        SpaceSpec::C0 => peak,
        _ if peak == 0.0 => 0.0,
        SpaceSpec::Lp(1.0) => values.map(f64::abs).sum(),
        SpaceSpec::Lp(p) => {
            let s: f64 = values.map(|x| (x.abs() / peak).powf(p)).sum();
            peak * s.powf(1.0 / p)
        }
    }
}

pub fn norm(x: &SparseVector) -> f64 {
    x.norm()
}

/// `B_w^n x`. Coordinates of `x` below index `n` are annihilated.
pub fn apply_backward(engine: &ProductEngine, x: &SparseVector, n: usize) -> Result<SparseVector> {
    if n == 0 {
        return Ok(x.clone());
    }
    if let Some(top) = x.max_index() {
        if top >= n {
            engine.require(top)?;
        }
    }
    let mut out = SparseVector::zero(x.space);
    for (k, v) in x.entries.range(n..) {
        let m = engine.product(k - n + 1, n)?;
        out.set(k - n, m.scale(*v));
    }
    Ok(out)
}

/// `S^n x`, the `n`-fold weighted forward shift.
pub fn apply_forward(engine: &ProductEngine, x: &SparseVector, n: usize) -> Result<SparseVector> {
    if n == 0 {
        return Ok(x.clone());
    }
    if let Some(top) = x.max_index() {
        engine.require(top.checked_add(n).ok_or(Error::Overflow("forward shift index"))?)?;
    }
    let mut out = SparseVector::zero(x.space);
    for (&k, &v) in &x.entries {
        let m = engine.product(k + 1, n)?;
        out.set(k + n, m.divide(v));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub n: usize,
    pub norm: f64,
}

/// `‖S^n x‖` for every `n` in `ns`.
pub fn orbit_norms(engine: &ProductEngine, x: &SparseVector, ns: &SubseqSpec) -> Result<Vec<OrbitPoint>> {
    ns.values()
        .iter()
        .map(|&n| apply_forward(engine, x, n).map(|y| OrbitPoint { n, norm: y.norm() }))
        .collect()
}
