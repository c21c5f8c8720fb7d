//! Brute-force ground truth for the closed forms.
//!
//! Enumerates `W(m, L, B)` explicitly, encodes each vector to an integer and
//! builds `U + U` and `U - U` as literal sets. Only usable at small scale;
//! every entry point takes a resource cap and refuses, rather than
//! truncates, when the cap would be exceeded.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::bigcomb::BigCount;
use crate::counts::{self, BaselineWeights, Params, SetCounts};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_VECTORS: u64 = 1_000_000;
pub const DEFAULT_MAX_PAIR_OPS: u64 = 100_000_000;

/// Resource caps for enumeration and pairwise set arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vectors: u64,
    pub max_pair_ops: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vectors: DEFAULT_MAX_VECTORS,
            max_pair_ops: DEFAULT_MAX_PAIR_OPS,
        }
    }
}

impl Limits {
    pub fn with_max_vectors(max_vectors: u64) -> Self {
        Limits {
            max_vectors,
            ..Limits::default()
        }
    }
}

/// One member of `W(m, L, B)`; coordinate `k` carries weight `(2B+1)^k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    pub coords: Vec<u64>,
}

impl Vector {
    pub fn new(coords: Vec<u64>) -> Self {
        Vector { coords }
    }

    pub fn sum(&self) -> u64 {
        self.coords.iter().sum()
    }
}

/// An explicitly built `U` together with the vectors it came from.
#[derive(Clone, Debug)]
pub struct EnumeratedSet {
    pub params: Params,
    pub vectors: Vec<Vector>,
    /// Sorted ascending, deduplicated.
    pub integers: Vec<BigCount>,
}

impl EnumeratedSet {
    pub fn len(&self) -> usize {
        self.integers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.integers.is_empty()
    }

    pub fn max(&self) -> Option<&BigCount> {
        self.integers.last()
    }

    fn from_encoded(
        params: Params,
        vectors: Vec<Vector>,
        encode: impl Fn(&Vector) -> BigCount,
    ) -> Result<Self> {
        let mut integers: Vec<BigCount> = vectors.iter().map(encode).collect();
        integers.sort_unstable();
        integers.dedup();
        if integers.len() != vectors.len() {
            return Err(Error::OracleMismatch(format!(
                "encoding not injective on W for {params}: {} vectors, {} integers",
                vectors.len(),
                integers.len()
            )));
        }
        Ok(EnumeratedSet {
            params,
            vectors,
            integers,
        })
    }
}

fn cap_check(what: &'static str, needed: &BigCount, limit: u64) -> Result<()> {
    if *needed > BigCount::from(limit) {
        return Err(Error::CapExceeded {
            what,
            needed: needed.to_string(),
            limit,
        });
    }
    Ok(())
}

/// Every vector of `W(m, L, B)` exactly once, in lexicographic order.
///
/// Fails with [`Error::CapExceeded`] when the closed-form `|W|` is above
/// `cap`.
pub fn enum_w(p: Params, cap: u64) -> Result<Vec<Vector>> {
    let p = p.canonicalize();
    cap_check("enumerating W", &counts::count_w(p), cap)?;
    let mut out = Vec::new();
    let mut coords = vec![0u64; p.m as usize];
    fill(&mut coords, 0, p.l, p.b, &mut out);
    Ok(out)
}

fn fill(coords: &mut [u64], idx: usize, remaining: u64, cap: u64, out: &mut Vec<Vector>) {
    if idx == coords.len() {
        out.push(Vector::new(coords.to_vec()));
        return;
    }
    for v in 0..=cap.min(remaining) {
        coords[idx] = v;
        fill(coords, idx + 1, remaining - v, cap, out);
    }
    coords[idx] = 0;
}

/// `sum_k x_k (2B+1)^k`.
pub fn encode_g(x: &Vector, b: u64) -> BigCount {
    let base = BigUint::from(2 * b + 1);
    let v = x
        .coords
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &c| acc * &base + c);
    BigCount::from(v)
}

/// `sum_k x_k L_k` with the baseline weights.
pub fn encode_f(x: &Vector, weights: &BaselineWeights) -> Result<BigCount> {
    if x.coords.len() != weights.weights.len() {
        return Err(Error::InvalidParams(format!(
            "vector has {} coordinates, weights have {}",
            x.coords.len(),
            weights.weights.len()
        )));
    }
    let v = x
        .coords
        .iter()
        .zip(&weights.weights)
        .fold(BigUint::zero(), |acc, (&c, w)| acc + w.as_biguint() * c);
    Ok(BigCount::from(v))
}

/// `U(m, L, B)` as an explicit set.
pub fn build_u(p: Params, cap: u64) -> Result<EnumeratedSet> {
    let p = p.canonicalize();
    let vectors = enum_w(p, cap)?;
    EnumeratedSet::from_encoded(p, vectors, |x| encode_g(x, p.b))
}

/// The baseline set `{f(x) : x in V(m, L)}`. `params` is recorded as
/// `(m, L, L)`, the bounded family that coincides with `V(m, L)`.
pub fn build_v(m: u64, l: u64, cap: u64) -> Result<EnumeratedSet> {
    let weights = counts::baseline_weights(m, l)?;
    let p = Params::new(m, l, l);
    let vectors = enum_w(p, cap)?;
    EnumeratedSet::from_encoded(p, vectors, |x| {
        encode_f(x, &weights).expect("vector length is m")
    })
}

fn pair_check(n: usize, max_pair_ops: u64) -> Result<()> {
    let pairs = BigCount::from(n as u64);
    cap_check("pairwise set arithmetic", &(&pairs * &pairs), max_pair_ops)
}

fn signed(values: &[BigCount]) -> Vec<BigInt> {
    values
        .iter()
        .map(|v| BigInt::from(v.as_biguint().clone()))
        .collect()
}

/// `|{a + b : a, b in U}|` by literal set arithmetic.
pub fn sumset_size(u: &EnumeratedSet, max_pair_ops: u64) -> Result<BigCount> {
    pair_check(u.len(), max_pair_ops)?;
    let xs = &u.integers;
    let mut seen = HashSet::with_capacity(xs.len() * 2);
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i..] {
            seen.insert(a.as_biguint() + b.as_biguint());
        }
    }
    Ok(BigCount::from(seen.len() as u64))
}

/// `|{a - b : a, b in U}|` by literal set arithmetic.
pub fn diffset_size(u: &EnumeratedSet, max_pair_ops: u64) -> Result<BigCount> {
    Ok(BigCount::from(diffset(u, max_pair_ops)?.len() as u64))
}

/// The difference set itself.
pub fn diffset(u: &EnumeratedSet, max_pair_ops: u64) -> Result<HashSet<BigInt>> {
    pair_check(u.len(), max_pair_ops)?;
    let xs = signed(&u.integers);
    let mut seen = HashSet::with_capacity(xs.len() * 2);
    for a in &xs {
        for b in &xs {
            seen.insert(a - b);
        }
    }
    Ok(seen)
}

fn vectors_injective(
    vectors: &[Vector],
    encode: impl Fn(&Vector) -> BigCount,
    max_pair_ops: u64,
) -> Result<bool> {
    pair_check(vectors.len(), max_pair_ops)?;
    let codes: Vec<BigInt> = vectors
        .iter()
        .map(|x| BigInt::from(encode(x).into_biguint()))
        .collect();
    let mut vec_sums = HashSet::new();
    let mut vec_diffs = HashSet::new();
    let mut int_sums = HashSet::new();
    let mut int_diffs = HashSet::new();
    for (x, gx) in vectors.iter().zip(&codes) {
        for (y, gy) in vectors.iter().zip(&codes) {
            let sum: Vec<u64> = x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect();
            let diff: Vec<i128> = x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(&a, &b)| a as i128 - b as i128)
                .collect();
            vec_sums.insert(sum);
            vec_diffs.insert(diff);
            int_sums.insert(gx + gy);
            int_diffs.insert(gx - gy);
        }
    }
    Ok(vec_sums.len() == int_sums.len() && vec_diffs.len() == int_diffs.len())
}

/// Whether `g` stays injective on `W + W` and on `W - W`.
pub fn check_injective(p: Params, limits: Limits) -> Result<bool> {
    let p = p.canonicalize();
    let vectors = enum_w(p, limits.max_vectors)?;
    vectors_injective(&vectors, |x| encode_g(x, p.b), limits.max_pair_ops)
}

/// Whether the baseline encoding `f` stays injective on `V + V` and `V - V`.
pub fn check_injective_baseline(m: u64, l: u64, limits: Limits) -> Result<bool> {
    let weights = counts::baseline_weights(m, l)?;
    let vectors = enum_w(Params::new(m, l, l), limits.max_vectors)?;
    vectors_injective(
        &vectors,
        |x| encode_f(x, &weights).expect("vector length is m"),
        limits.max_pair_ops,
    )
}

/// Side-by-side closed-form and enumerated values for one parameter triple.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub params: Params,
    pub closed_form: SetCounts,
    pub enumerated: SetCounts,
    pub injective: bool,
}

impl OracleReport {
    pub fn mismatches(&self) -> Vec<&'static str> {
        let (c, e) = (&self.closed_form, &self.enumerated);
        [
            ("u", c.u == e.u),
            ("s", c.s == e.s),
            ("d", c.d == e.d),
            ("q", c.q == e.q),
            ("injective", self.injective),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }

    pub fn passed(&self) -> bool {
        self.mismatches().is_empty()
    }
}

/// Enumerated `(|U|, |U+U|, |U-U|, 2 max(U) + 1)`.
pub fn enumerated_counts(set: &EnumeratedSet, max_pair_ops: u64) -> Result<SetCounts> {
    let max = set.max().cloned().unwrap_or_default();
    Ok(SetCounts {
        u: BigCount::from(set.len() as u64),
        s: sumset_size(set, max_pair_ops)?,
        d: diffset_size(set, max_pair_ops)?,
        q: BigCount::from(max.as_biguint() * 2u32 + 1u32),
    })
}

/// Compare every closed form against enumeration for `p`.
pub fn validate(p: Params, limits: Limits) -> Result<OracleReport> {
    let p = p.canonicalize();
    let set = build_u(p, limits.max_vectors)?;
    Ok(OracleReport {
        params: p,
        closed_form: counts::set_counts(p),
        enumerated: enumerated_counts(&set, limits.max_pair_ops)?,
        injective: check_injective(p, limits)?,
    })
}
