//! Certificate emission and argument parsing for the `sumdiff` binary.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};
use sumdiff_core::{
    sci_round, theta_from_counts, BigCount, Params, SciApprox, SetCounts, ThetaBound,
};

/// Counts with at most this many decimal digits are written out in full.
pub const DECIMAL_DIGIT_LIMIT: usize = 4000;
/// Significant digits of the `sci` field for larger counts.
pub const SCI_DIGITS: usize = 10;

pub const TOOL_VERSION: &str = concat!("sumdiff ", env!("CARGO_PKG_VERSION"));

pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const DEGENERATE: u8 = 2;
    pub const ORACLE: u8 = 3;
    pub const IO: u8 = 4;
}

/// One exact count: the full decimal string, or for very large values a
/// rounded form plus enough to verify a recomputation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CountField {
    Decimal(String),
    Digest {
        sci: SciApprox,
        digits10: usize,
        sha256_of_decimal: String,
    },
}

impl CountField {
    pub fn from_count(x: &BigCount) -> Self {
        let decimal = x.to_decimal();
        if decimal.len() <= DECIMAL_DIGIT_LIMIT {
            return CountField::Decimal(decimal);
        }
        let sci = sumdiff_core::bigcomb::sci_round_decimal(&decimal, SCI_DIGITS)
            .expect("positive decimal");
        CountField::Digest {
            sci,
            digits10: decimal.len(),
            sha256_of_decimal: hex::encode(Sha256::digest(decimal.as_bytes())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedCounts {
    pub u: CountField,
    pub s: CountField,
    pub d: CountField,
    pub q: CountField,
}

impl From<&SetCounts> for CertifiedCounts {
    fn from(c: &SetCounts) -> Self {
        CertifiedCounts {
            u: CountField::from_count(&c.u),
            s: CountField::from_count(&c.s),
            d: CountField::from_count(&c.d),
            q: CountField::from_count(&c.q),
        }
    }
}

/// Reproducible record of the exact counts and theta bound for one triple.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub params: Params,
    pub counts: CertifiedCounts,
    /// `None` when theta is undefined for these parameters.
    pub theta: Option<ThetaBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_error: Option<String>,
    pub tool_version: String,
    pub elapsed_seconds: f64,
}

impl Certificate {
    /// Build from counts that were computed for `params` (canonical).
    pub fn new(params: Params, counts: &SetCounts, elapsed_seconds: f64) -> Self {
        let (theta, theta_error) = match theta_from_counts(params, counts) {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Certificate {
            params,
            counts: counts.into(),
            theta,
            theta_error,
            tool_version: TOOL_VERSION.to_string(),
            elapsed_seconds,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.theta.is_none()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

/// Rounded form of a count, independent of the certificate threshold.
pub fn sci(x: &BigCount) -> SciApprox {
    sci_round(x, SCI_DIGITS).expect("counts are positive")
}

/// Inclusive range `lo:hi`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeArg {
    pub lo: u64,
    pub hi: u64,
}

#[derive(Debug, PartialEq, Eq)]
pub struct RangeArgError(String);

impl fmt::Display for RangeArgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RangeArgError {}

impl FromStr for RangeArg {
    type Err = RangeArgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| RangeArgError(format!("expected a non-negative integer, got {t:?}")))
        };
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(RangeArgError(format!("empty range {lo}:{hi}")));
        }
        Ok(RangeArg { lo, hi })
    }
}

/// Comma-separated list of values and `lo:hi` ranges, e.g. `32,64:66`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueList(pub Vec<u64>);

impl FromStr for ValueList {
    type Err = RangeArgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_value_list(s).map(ValueList)
    }
}

pub fn parse_value_list(s: &str) -> Result<Vec<u64>, RangeArgError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let r: RangeArg = part.parse()?;
        out.extend(r.lo..=r.hi);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
