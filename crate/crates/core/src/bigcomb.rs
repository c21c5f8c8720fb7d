//! Exact integer kernels (binomials, powers) and bounded-error logarithms of
//! very large integers.
//!
//! Every cardinality in this crate is a [`BigCount`]. Floating point only
//! appears once an exact count exists: [`log_of`] reads the top 64 bits and
//! the bit length, and [`sci_round`] rounds the exact decimal expansion.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer used for all exact cardinalities.
///
/// Serializes as a decimal string so that values of any size round-trip
/// through JSON unchanged.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Number of significant bits; 0 for zero.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_odd(&self) -> bool {
        self.0.bit(0)
    }

    /// Exact decimal expansion.
    pub fn to_decimal(&self) -> String {
        self.0.to_str_radix(10)
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidParams(format!(
                "not a non-negative decimal integer: {s:?}"
            )));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(BigCount)
            .ok_or_else(|| Error::InvalidParams(format!("unparseable integer {s:?}")))
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &BigCount {
    type Output = BigCount;

    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl Mul for &BigCount {
    type Output = BigCount;

    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

/// `C(n, k)`, exactly. Returns 0 when `k > n`.
///
/// Running product `C(n-k+i, i) = C(n-k+i-1, i-1) * (n-k+i) / i`; every
/// intermediate is itself a binomial, so each division is exact.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let base = n - k;
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= base + i;
        acc /= i;
    }
    BigCount(acc)
}

/// `base^exp` exactly, with `0^0 = 1`.
pub fn pow_int(base: u64, exp: u64) -> BigCount {
    BigCount(Pow::pow(BigUint::from(base), exp))
}

/// Worst-case relative error of [`log_of`] for inputs `>= 2`.
///
/// Truncating to 64 bits contributes 2^-63, the f64 conversion and the
/// `ln`/multiply/add roundings a few 2^-53 each; 2^-48 covers the sum.
pub const LOG_REL_ERR: f64 = 1.0 / (1u64 << 48) as f64;

/// Natural logarithm of a [`BigCount`] with a stated relative error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogMagnitude {
    pub ln_value: f64,
    pub rel_err_bound: f64,
}

impl LogMagnitude {
    /// Absolute error bound on `ln_value`.
    pub fn abs_err_bound(&self) -> f64 {
        self.ln_value.abs() * self.rel_err_bound
    }
}

/// Natural log of `x` from its top 64 bits plus its bit length.
pub fn log_of(x: &BigCount) -> Result<LogMagnitude> {
    let bits = x.bits();
    if bits == 0 {
        return Err(Error::Domain {
            op: "log_of",
            reason: "logarithm of zero",
        });
    }
    if x.0.is_one() {
        return Ok(LogMagnitude {
            ln_value: 0.0,
            rel_err_bound: 0.0,
        });
    }
    let ln_value = if bits <= 64 {
        (x.0.to_u64().expect("fits in 64 bits") as f64).ln()
    } else {
        let shift = bits - 64;
        let top = (&x.0 >> shift).to_u64().expect("top word fits in 64 bits");
        (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
    };
    Ok(LogMagnitude {
        ln_value,
        rel_err_bound: LOG_REL_ERR,
    })
}

/// A [`BigCount`] rounded to a fixed number of significant decimal digits.
///
/// `digits` holds exactly the significant digits (no decimal point); the
/// value is `d.ddd… × 10^exponent10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SciApprox {
    digits: String,
    pub exponent10: u64,
}

impl SciApprox {
    pub fn sig_digits(&self) -> usize {
        self.digits.len()
    }

    /// Mantissa in `[1, 10)` as a decimal string, e.g. `"6.314107319"`.
    pub fn mantissa_str(&self) -> String {
        let (lead, rest) = self.digits.split_at(1);
        if rest.is_empty() {
            lead.to_string()
        } else {
            format!("{lead}.{rest}")
        }
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa_str()
            .parse()
            .expect("mantissa is a decimal literal")
    }
}

impl fmt::Display for SciApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", self.mantissa_str(), self.exponent10)
    }
}

impl Serialize for SciApprox {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SciApprox", 2)?;
        st.serialize_field("mantissa", &self.mantissa_str())?;
        st.serialize_field("exponent10", &self.exponent10)?;
        st.end()
    }
}

/// Round `x` to `sig_digits` significant decimal digits, ties to even.
pub fn sci_round(x: &BigCount, sig_digits: usize) -> Result<SciApprox> {
    if x.is_zero() {
        return Err(Error::Domain {
            op: "sci_round",
            reason: "zero has no scientific form",
        });
    }
    sci_round_decimal(&x.to_decimal(), sig_digits)
}

/// Same as [`sci_round`] on an already-rendered decimal expansion.
pub fn sci_round_decimal(decimal: &str, sig_digits: usize) -> Result<SciApprox> {
    if sig_digits == 0 {
        return Err(Error::InvalidParams("sig_digits must be >= 1".into()));
    }
    let bytes = decimal.as_bytes();
    if bytes.is_empty() || bytes[0] == b'0' || !bytes.iter().all(u8::is_ascii_digit) {
        return Err(Error::Domain {
            op: "sci_round",
            reason: "expected a positive decimal integer without leading zeros",
        });
    }
    let mut exponent10 = (bytes.len() - 1) as u64;
    if bytes.len() <= sig_digits {
        let mut digits = decimal.to_string();
        digits.extend(std::iter::repeat_n('0', sig_digits - bytes.len()));
        return Ok(SciApprox { digits, exponent10 });
    }

    let mut head: Vec<u8> = bytes[..sig_digits].to_vec();
    let next = bytes[sig_digits];
    let sticky = bytes[sig_digits + 1..].iter().any(|&c| c != b'0');
    let last_odd = (head[sig_digits - 1] - b'0') % 2 == 1;
    let round_up = next > b'5' || (next == b'5' && (sticky || last_odd));

    if round_up {
        let mut i = sig_digits;
        loop {
            if i == 0 {
                // carried out of the leading digit: 99..9 -> 100..0
                head[0] = b'1';
                exponent10 += 1;
                break;
            }
            i -= 1;
            if head[i] == b'9' {
                head[i] = b'0';
            } else {
                head[i] += 1;
                break;
            }
        }
    }
    Ok(SciApprox {
        digits: String::from_utf8(head).expect("ascii digits"),
        exponent10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u64) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, i| acc * i)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(12, 4), BigCount::from(495));
        assert_eq!(binomial(5, 0), BigCount::one());
        assert_eq!(binomial(3, 7), BigCount::zero());
        assert_eq!(binomial(0, 0), BigCount::one());
    }

    #[test]
    fn binomial_matches_factorial_quotient() {
        for n in 0..40u64 {
            for k in 0..=n {
                let expect = factorial(n) / (factorial(k) * factorial(n - k));
                assert_eq!(binomial(n, k).into_biguint(), expect, "C({n},{k})");
            }
        }
    }

    #[test]
    fn pascal_identity_exhaustive() {
        for n in 1..=64u64 {
            for k in 1..=n {
                let lhs = binomial(n, k);
                let rhs = &binomial(n - 1, k - 1) + &binomial(n - 1, k);
                assert_eq!(lhs, rhs, "C({n},{k})");
            }
        }
    }

    #[test]
    fn binomial_symmetry() {
        for n in 0..=80u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), binomial(n, n - k));
            }
        }
    }

    #[test]
    fn pow_int_examples() {
        assert_eq!(pow_int(7, 3), BigCount::from(343));
        assert_eq!(pow_int(11, 5), BigCount::from(161051));
        assert_eq!(pow_int(0, 0), BigCount::one());
        assert_eq!(pow_int(12345, 0), BigCount::one());
        assert_eq!(pow_int(0, 3), BigCount::zero());
    }

    #[test]
    fn log_of_small_values() {
        assert_eq!(log_of(&BigCount::one()).unwrap().ln_value, 0.0);
        let l = log_of(&BigCount::from(2381)).unwrap();
        assert!((l.ln_value - 2381f64.ln()).abs() <= 2381f64.ln() * 2f64.powi(-40));
        assert!(l.rel_err_bound <= 2f64.powi(-40));
    }

    #[test]
    fn log_of_power_of_ten() {
        let x = pow_int(10, 100);
        let l = log_of(&x).unwrap();
        let expect = 100.0 * std::f64::consts::LN_10;
        assert!((l.ln_value - expect).abs() <= expect * 2f64.powi(-40));
    }

    #[test]
    fn log_of_zero_is_domain_error() {
        assert!(matches!(
            log_of(&BigCount::zero()),
            Err(Error::Domain { op: "log_of", .. })
        ));
    }

    #[test]
    fn sci_round_examples() {
        let r = sci_round(&BigCount::from(2381), 3).unwrap();
        assert_eq!((r.mantissa_str().as_str(), r.exponent10), ("2.38", 3));
        let r = sci_round(&BigCount::from(1000), 2).unwrap();
        assert_eq!((r.mantissa_str().as_str(), r.exponent10), ("1.0", 3));
        let r = sci_round(&BigCount::from(999951), 4).unwrap();
        assert_eq!((r.mantissa_str().as_str(), r.exponent10), ("1.000", 6));
        assert_eq!(r.to_string(), "1.000e6");
    }

    #[test]
    fn sci_round_ties_to_even() {
        let r = |v: u64, d| sci_round(&BigCount::from(v), d).unwrap().to_string();
        assert_eq!(r(125, 2), "1.2e2");
        assert_eq!(r(135, 2), "1.4e2");
        assert_eq!(r(1251, 2), "1.3e3");
        assert_eq!(r(7, 1), "7e0");
        assert_eq!(r(7, 3), "7.00e0");
        assert_eq!(r(95, 1), "1e2");
    }

    #[test]
    fn sci_round_rejects_zero_and_zero_digits() {
        assert!(sci_round(&BigCount::zero(), 3).is_err());
        assert!(sci_round(&BigCount::from(5), 0).is_err());
    }

    #[test]
    fn decimal_string_roundtrip() {
        let x = pow_int(3, 500);
        let back: BigCount = x.to_decimal().parse().unwrap();
        assert_eq!(back, x);
        assert!("".parse::<BigCount>().is_err());
        assert!("-1".parse::<BigCount>().is_err());
    }
}
