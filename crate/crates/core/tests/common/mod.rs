//! Test-only reference values independent of the crate's f64 log path.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use sumdiff_core::{BigCount, SetCounts};

/// Working precision of the reference logarithm, in bits.
pub const REF_PRECISION: usize = 256;

/// `ln x` evaluated on the full integer at [`REF_PRECISION`] bits.
pub fn ln_reference(x: &BigCount) -> f64 {
    let mut cc = Consts::new().expect("constants cache");
    let rm = RoundingMode::ToEven;
    let v = BigFloat::parse(&x.to_decimal(), Radix::Dec, REF_PRECISION, rm, &mut cc);
    let ln = v.ln(REF_PRECISION, rm, &mut cc);
    let s = ln.format(Radix::Dec, rm, &mut cc).expect("format");
    s.parse::<f64>()
        .unwrap_or_else(|_| panic!("unparseable reference log {s}"))
}

/// Unrounded `1 + ln(d/s) / ln q` from reference logs.
pub fn theta_reference(c: &SetCounts) -> f64 {
    1.0 + (ln_reference(&c.d) - ln_reference(&c.s)) / ln_reference(&c.q)
}
