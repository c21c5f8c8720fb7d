//! Closed-form cardinalities for the bounded construction `W(m, L, B)`, the
//! theta lower bound they certify, and the unbounded `V(m, L)` baseline.
//!
//! `W(m, L, B)` is the set of vectors in `N^m` with every coordinate `<= B`
//! and coordinate sum `<= L`. It is mapped to integers by the base-`(2B+1)`
//! positional encoding, which keeps both `W+W` and `W-W` injective, so
//! `|U+U| = |W+W|` and `|U-U| = |W-W|`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};

use crate::bigcomb::{binomial, log_of, pow_int, BigCount};
use crate::error::{Error, Result};

/// The construction triple `(m, L, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Params {
    /// Number of coordinates.
    pub m: u64,
    /// Cap on the coordinate sum.
    #[serde(rename = "L")]
    pub l: u64,
    /// Cap on each coordinate.
    #[serde(rename = "B")]
    pub b: u64,
}

impl Params {
    pub const fn new(m: u64, l: u64, b: u64) -> Self {
        Params { m, l, b }
    }

    /// `(m, min(L, m*B), B)`. A sum cap above `m*B` never binds.
    pub fn canonicalize(self) -> Self {
        Params {
            l: self.l.min(self.m.saturating_mul(self.b)),
            ..self
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// `W` collapses to the zero vector.
    pub fn is_trivial(&self) -> bool {
        self.m == 0 || self.l == 0 || self.b == 0
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, L={}, B={})", self.m, self.l, self.b)
    }
}

/// Free-function form of [`Params::canonicalize`].
pub fn canonicalize(p: Params) -> Params {
    p.canonicalize()
}

/// Exact `|U|`, `|U+U|`, `|U-U|` and `2*max(U)+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCounts {
    pub u: BigCount,
    pub s: BigCount,
    pub d: BigCount,
    pub q: BigCount,
}

/// A theta value truncated to 6 fractional digits, stored in millionths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theta6(pub i64);

impl Theta6 {
    pub const SCALE: i64 = 1_000_000;

    /// Largest multiple of 10^-6 not above `value`.
    pub fn floor_of(value: f64) -> Self {
        Theta6((value * Self::SCALE as f64).floor() as i64)
    }

    pub fn micros(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / Self::SCALE as f64
    }
}

impl fmt::Display for Theta6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let int = self.0.div_euclid(Self::SCALE);
        let frac = self.0.rem_euclid(Self::SCALE);
        write!(f, "{int}.{frac:06}")
    }
}

impl Serialize for Theta6 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_f64())
    }
}

/// Certified lower bound `theta >= 1 + ln(d/s) / ln(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaBound {
    /// Floor of the bound at 6 decimals.
    pub lower: Theta6,
    /// `ln d - ln s`.
    pub ln_ratio: f64,
    pub ln_q: f64,
    /// Absolute error bound on [`ThetaBound::value`] from the log contract.
    #[serde(skip)]
    pub err_bound: f64,
}

impl ThetaBound {
    /// Unrounded `1 + ln_ratio / ln_q`.
    pub fn value(&self) -> f64 {
        1.0 + self.ln_ratio / self.ln_q
    }

    /// True when [`ThetaBound::value`] is close enough to a multiple of
    /// 10^-6 that the floor could land one step off.
    pub fn near_grid_point(&self) -> bool {
        let scaled = self.value() * Theta6::SCALE as f64;
        (scaled - scaled.round()).abs() <= self.err_bound * Theta6::SCALE as f64
    }
}

/// Positional weights `L_0 .. L_{m-1}` of the baseline encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaselineWeights {
    pub weights: Vec<BigCount>,
}

/// `|W(m, L, B)|` by inclusion-exclusion over coordinates forced above `B`:
/// `sum_k (-1)^k C(m,k) C(m + L - k(B+1), m)` for `k = 0..=L/(B+1)`.
///
/// The sum alternates and cancels heavily, so it is only ever evaluated in
/// exact integers. Both binomial factors are stepped incrementally from one
/// term to the next.
pub fn count_w(p: Params) -> BigCount {
    let Params { m, l, b } = p.canonicalize();
    if m == 0 || l == 0 || b == 0 {
        return BigCount::one();
    }
    let kmax = l / (b + 1);
    // term = C(m, k) * C(top, m) with top = m + L - k(B+1)
    let mut top = m + l;
    let mut term = binomial(top, m).into_biguint();
    let mut plus = BigUint::default();
    let mut minus = BigUint::default();

    for k in 0..=kmax {
        if k % 2 == 0 {
            plus += &term;
        } else {
            minus += &term;
        }
        if k == kmax {
            break;
        }
        // C(m, k+1) = C(m, k) (m-k) / (k+1) and
        // C(top-1, m) = C(top, m) (top-m) / top, the latter applied B+1 times.
        // Only the combined quotient is exact, but floor(floor(x/a)/b) =
        // floor(x/ab), so the divisor can be applied one word at a time.
        let mut num = WordProduct::new(m - k);
        let mut den = WordProduct::new(k + 1);
        for _ in 0..=b {
            num.push(top - m);
            den.push(top);
            top -= 1;
        }
        for w in num.words() {
            term *= w;
        }
        for w in den.words() {
            term /= w;
        }
    }
    debug_assert!(plus >= minus);
    BigCount::from(plus - minus)
}

/// Product of small factors, packed into as few machine words as possible.
struct WordProduct {
    words: Vec<u64>,
    current: u64,
}

impl WordProduct {
    fn new(first: u64) -> Self {
        WordProduct {
            words: Vec::new(),
            current: first,
        }
    }

    fn push(&mut self, factor: u64) {
        match self.current.checked_mul(factor) {
            Some(p) => self.current = p,
            None => {
                self.words.push(self.current);
                self.current = factor;
            }
        }
    }

    fn words(mut self) -> Vec<u64> {
        self.words.push(self.current);
        self.words
    }
}

/// `|U+U| = |W(m, 2L, 2B)|`: sums of two members have coordinates `<= 2B`
/// and coordinate sum `<= 2L`.
pub fn count_sum(p: Params) -> BigCount {
    let p = p.canonicalize();
    count_w(Params::new(p.m, 2 * p.l, 2 * p.b))
}

/// `|U-U| = |W-W|`, split by the number `k` of strictly positive coordinates:
/// `sum_k C(m,k) |W(k, L-k, B-1)| |W(m-k, L, B)|`.
///
/// The positive part is shifted down by one per coordinate, hence the
/// `(L-k, B-1)` caps; the non-positive part is negated.
pub fn count_diff(p: Params) -> BigCount {
    let Params { m, l, b } = p.canonicalize();
    if m == 0 || l == 0 || b == 0 {
        return BigCount::one();
    }
    let mut choose_m = BigUint::one();
    let mut total = BigUint::default();
    for k in 0..=m.min(l) {
        let positive = count_w(Params::new(k, l - k, b - 1));
        let rest = count_w(Params::new(m - k, l, b));
        total += &choose_m * positive.as_biguint() * rest.as_biguint();
        choose_m *= m - k;
        choose_m /= k + 1;
    }
    BigCount::from(total)
}

/// `q(U) = 2 max(U) + 1`.
///
/// The greedy maximiser puts `B` on the `t = L / B` heaviest coordinates and
/// `r = L % B` on the next one, giving
/// `(2B+1)^m - (2B+1)^(m-t) + 2r (2B+1)^(m-t-1) + 1`. Returns 1 when
/// `U = {0}`.
pub fn q_value(p: Params) -> BigCount {
    let Params { m, l, b } = p.canonicalize();
    if m == 0 || l == 0 || b == 0 {
        return BigCount::one();
    }
    let base = 2 * b + 1;
    let (t, r) = (l / b, l % b);
    let mut q = pow_int(base, m).into_biguint() + 1u32;
    q -= pow_int(base, m - t).into_biguint();
    if r > 0 {
        // r > 0 forces t < m under L <= mB
        q += pow_int(base, m - t - 1).into_biguint() * (2 * r);
    }
    BigCount::from(q)
}

pub fn set_counts(p: Params) -> SetCounts {
    let p = p.canonicalize();
    SetCounts {
        u: count_w(p),
        s: count_sum(p),
        d: count_diff(p),
        q: q_value(p),
    }
}

/// Theta bound for already computed counts.
pub fn theta_from_counts(params: Params, counts: &SetCounts) -> Result<ThetaBound> {
    if counts.u < BigCount::from(2) {
        return Err(Error::Degenerate {
            params,
            reason: "U = {0}, theta undefined".into(),
        });
    }
    if counts.q < BigCount::from(3) {
        return Err(Error::Degenerate {
            params,
            reason: "q(U) < 3, ln q is not positive".into(),
        });
    }
    let ld = log_of(&counts.d)?;
    let ls = log_of(&counts.s)?;
    let lq = log_of(&counts.q)?;
    let ln_ratio = ld.ln_value - ls.ln_value;
    let ln_q = lq.ln_value;
    let err_bound = (ld.abs_err_bound() + ls.abs_err_bound()) / ln_q
        + ln_ratio.abs() * lq.rel_err_bound / ln_q
        + 8.0 * f64::EPSILON;
    Ok(ThetaBound {
        lower: Theta6::floor_of(1.0 + ln_ratio / ln_q),
        ln_ratio,
        ln_q,
        err_bound,
    })
}

/// Theta lower bound for `W(m, L, B)`.
pub fn theta(p: Params) -> Result<ThetaBound> {
    let p = p.canonicalize();
    theta_from_counts(p, &set_counts(p))
}

fn check_baseline(m: u64, l: u64) -> Result<()> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidParams(format!(
            "baseline needs m >= 1 and L >= 1, got m={m}, L={l}"
        )));
    }
    Ok(())
}

/// `L_0 = 1`, `L_k = 2L * L_{k-1} + 1`.
pub fn baseline_weights(m: u64, l: u64) -> Result<BaselineWeights> {
    check_baseline(m, l)?;
    let mut weights = Vec::with_capacity(m as usize);
    let mut w = BigUint::one();
    for _ in 0..m {
        weights.push(BigCount::from(w.clone()));
        w = w * (2 * l) + 1u32;
    }
    Ok(BaselineWeights { weights })
}

/// Counts for the simplex `V(m, L)` under the baseline encoding.
pub fn baseline_counts(m: u64, l: u64) -> Result<SetCounts> {
    let weights = baseline_weights(m, l)?;
    let heaviest = weights.weights.last().expect("m >= 1").as_biguint();
    Ok(SetCounts {
        u: binomial(m + l, m),
        s: binomial(m + 2 * l, m),
        // a coordinate cap of L never binds on V
        d: count_diff(Params::new(m, l, l)),
        q: BigCount::from(heaviest * (2 * l) + 1u32),
    })
}

pub fn baseline_theta(m: u64, l: u64) -> Result<ThetaBound> {
    let counts = baseline_counts(m, l)?;
    theta_from_counts(Params::new(m, l, l), &counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigCount {
        BigCount::from(v)
    }

    /// Inclusion-exclusion evaluated term by term with fresh binomials.
    fn count_w_direct(p: Params) -> BigCount {
        let Params { m, l, b } = p.canonicalize();
        if m == 0 || l == 0 || b == 0 {
            return BigCount::one();
        }
        let mut plus = BigUint::default();
        let mut minus = BigUint::default();
        for k in 0..=l / (b + 1) {
            let t = binomial(m, k).into_biguint() * binomial(m + l - k * (b + 1), m).into_biguint();
            if k % 2 == 0 {
                plus += t
            } else {
                minus += t
            }
        }
        BigCount::from(plus - minus)
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(Params::new(2, 100, 1)), Params::new(2, 2, 1));
        assert_eq!(canonicalize(Params::new(4, 8, 3)), Params::new(4, 8, 3));
        assert_eq!(canonicalize(Params::new(0, 5, 5)), Params::new(0, 0, 5));
    }

    #[test]
    fn example_one_counts() {
        let c = set_counts(Params::new(4, 8, 3));
        assert_eq!(
            c,
            SetCounts {
                u: n(221),
                s: n(2075),
                d: n(2307),
                q: n(2381)
            }
        );
    }

    #[test]
    fn count_w_examples() {
        assert_eq!(count_w(Params::new(4, 8, 8)), n(495));
        assert_eq!(count_w(Params::new(2, 2, 1)), n(4));
    }

    #[test]
    fn incremental_matches_direct_inclusion_exclusion() {
        for m in 0..=20 {
            for l in 0..=30 {
                for b in 0..=8 {
                    let p = Params::new(m, l, b);
                    assert_eq!(count_w(p), count_w_direct(p), "{p}");
                }
            }
        }
    }

    #[test]
    fn small_sum_and_diff() {
        // W(2,2,1) = {0,1}^2, so W+W = {0,1,2}^2 and W-W = {-1,0,1}^2
        assert_eq!(count_sum(Params::new(2, 2, 1)), n(9));
        assert_eq!(count_diff(Params::new(2, 2, 1)), n(9));
        assert_eq!(count_sum(Params::new(5, 0, 3)), n(1));
        assert_eq!(count_diff(Params::new(5, 0, 3)), n(1));
    }

    #[test]
    fn q_value_examples() {
        assert_eq!(q_value(Params::new(4, 8, 3)), n(2381));
        assert_eq!(q_value(Params::new(3, 4, 3)), n(309));
        for m in 1..6 {
            for b in 1..5 {
                assert_eq!(q_value(Params::new(m, m * b, b)), pow_int(2 * b + 1, m));
            }
        }
        assert_eq!(q_value(Params::new(3, 0, 2)), n(1));
    }

    #[test]
    fn set_counts_small() {
        let c = set_counts(Params::new(1, 1, 1));
        assert_eq!(
            c,
            SetCounts {
                u: n(2),
                s: n(3),
                d: n(3),
                q: n(3)
            }
        );
        let c = set_counts(Params::new(7, 0, 2));
        assert_eq!(
            c,
            SetCounts {
                u: n(1),
                s: n(1),
                d: n(1),
                q: n(1)
            }
        );
    }

    #[test]
    fn theta_example_one() {
        let t = theta(Params::new(4, 8, 3)).unwrap();
        assert_eq!(t.lower.to_string(), "1.013631");
        assert!(!t.near_grid_point());
    }

    #[test]
    fn theta_refuses_degenerate() {
        assert!(matches!(
            theta(Params::new(1, 0, 1)),
            Err(Error::Degenerate { .. })
        ));
        assert!(matches!(
            theta(Params::new(0, 3, 3)),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn theta6_formatting() {
        assert_eq!(Theta6(1_013_631).to_string(), "1.013631");
        assert_eq!(Theta6(-1).to_string(), "-1.999999");
        assert_eq!(Theta6::floor_of(1.0000009).to_string(), "1.000000");
    }

    #[test]
    fn baseline_weight_examples() {
        let w = |m, l| {
            baseline_weights(m, l)
                .unwrap()
                .weights
                .iter()
                .map(|x| x.to_u64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(w(4, 8), vec![1, 17, 273, 4369]);
        assert_eq!(w(1, 9), vec![1]);
        assert_eq!(w(3, 1), vec![1, 3, 7]);
        assert!(baseline_weights(0, 3).is_err());
    }

    #[test]
    fn baseline_counts_examples() {
        let c = baseline_counts(4, 8).unwrap();
        assert_eq!(
            (c.u.clone(), c.s.clone(), c.q.clone()),
            (n(495), n(4845), n(69905))
        );
        // brute-force enumeration of V(4,8) under the baseline weights
        assert_eq!(c.d, n(15421));
        let c = baseline_counts(1, 1).unwrap();
        assert_eq!(
            c,
            SetCounts {
                u: n(2),
                s: n(3),
                d: n(3),
                q: n(3)
            }
        );
        assert!(baseline_counts(3, 0).is_err());
    }

    #[test]
    fn baseline_theta_examples() {
        assert_eq!(baseline_theta(1, 1).unwrap().lower.to_string(), "1.000000");
        let t = baseline_theta(4, 8).unwrap().value();
        assert!(t > 1.0 && t < 4.0 / 3.0, "{t}");
    }
}
