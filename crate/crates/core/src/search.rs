//! Two-phase search over `(m, L, B)`.
//!
//! Phase one evaluates every grid point with exact counts and the bounded
//! log contract and ranks by the theta estimate. Phase two (optional)
//! recomputes the bound from scratch for each returned candidate.
//!
//! Candidates are independent and evaluated on a rayon pool; the ranking is
//! a total order, so the result does not depend on the degree of
//! parallelism.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::counts::{self, Params, ThetaBound};
use crate::error::{Error, Result};

/// Inclusive integer interval `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
}

impl Interval {
    pub const fn new(lo: u64, hi: u64) -> Self {
        Interval { lo, hi }
    }

    pub const fn single(v: u64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSpec {
    pub m_range: Interval,
    #[serde(rename = "L_values")]
    pub l_values: Vec<u64>,
    #[serde(rename = "B_range")]
    pub b_range: Interval,
    pub top_n: usize,
    pub confirm: bool,
}

impl SearchSpec {
    fn validate(&self) -> Result<()> {
        if self.m_range.is_empty() || self.b_range.is_empty() || self.l_values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if self.top_n == 0 {
            return Err(Error::InvalidParams("top_n must be >= 1".into()));
        }
        Ok(())
    }

    /// Distinct canonical grid points in ascending `(m, L, B)` order.
    pub fn grid(&self) -> Vec<Params> {
        let mut points = BTreeSet::new();
        for m in self.m_range.iter() {
            for &l in &self.l_values {
                for b in self.b_range.iter() {
                    points.insert(Params::new(m, l, b).canonicalize());
                }
            }
        }
        points.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub params: Params,
    pub theta_est: f64,
    /// Present when confirmation ran.
    pub theta_exact: Option<ThetaBound>,
    /// `theta_est` sits within the log-error band of a 10^-6 grid point,
    /// so its 6-decimal floor is not certain.
    pub near_grid_boundary: bool,
}

impl Candidate {
    /// Descending `theta_est`, then ascending `(m, L, B)`.
    fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .theta_est
            .total_cmp(&self.theta_est)
            .then_with(|| self.params.cmp(&other.params))
    }
}

/// A grid point that could not be ranked.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub params: Params,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub ranked: Vec<Candidate>,
    pub best: Option<Candidate>,
    pub skipped: Vec<Skipped>,
    /// Number of distinct canonical grid points visited.
    pub evaluated: usize,
}

fn evaluate(p: Params) -> std::result::Result<Candidate, Skipped> {
    let counts = counts::set_counts(p);
    match counts::theta_from_counts(p, &counts) {
        Ok(bound) => Ok(Candidate {
            params: p,
            theta_est: bound.value(),
            theta_exact: None,
            near_grid_boundary: bound.near_grid_point(),
        }),
        Err(e) => Err(Skipped {
            params: p,
            reason: match e {
                Error::Degenerate { reason, .. } => reason,
                other => other.to_string(),
            },
        }),
    }
}

fn confirm(mut c: Candidate) -> Result<Candidate> {
    c.theta_exact = Some(counts::theta(c.params)?);
    Ok(c)
}

fn run(spec: &SearchSpec) -> Result<SearchResult> {
    let grid = spec.grid();
    let evaluated = grid.len();
    let outcomes: Vec<_> = grid.into_par_iter().map(evaluate).collect();

    let mut ranked = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Ok(c) => ranked.push(c),
            Err(s) => skipped.push(s),
        }
    }
    ranked.sort_by(Candidate::rank_cmp);
    ranked.truncate(spec.top_n);

    if spec.confirm {
        ranked = ranked
            .into_par_iter()
            .map(confirm)
            .collect::<Result<Vec<_>>>()?;
    }

    Ok(SearchResult {
        best: ranked.first().cloned(),
        ranked,
        skipped,
        evaluated,
    })
}

/// Rank every point of the grid, on the current rayon pool.
pub fn sweep(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    run(spec)
}

/// [`sweep`] on a dedicated pool of at most `workers` threads. Bounds the
/// number of exact-count evaluations held in memory at once.
pub fn sweep_with_workers(spec: &SearchSpec, workers: usize) -> Result<SearchResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| run(spec))
}

/// Sweep `m` over `center.m ± radius_m` with `L` and `B` held fixed. Every
/// point in the window is returned, best first.
pub fn refine(center: Params, radius_m: u64) -> Result<SearchResult> {
    let lo = center.m.saturating_sub(radius_m);
    let hi = center.m.saturating_add(radius_m);
    sweep(&SearchSpec {
        m_range: Interval::new(lo, hi),
        l_values: vec![center.l],
        b_range: Interval::single(center.b),
        top_n: (hi - lo + 1) as usize,
        confirm: false,
    })
}

/// Starting point `(round(5L/4), L, 5)` for a search at sum cap `L`.
pub fn suggest_start(l: u64) -> Params {
    Params::new((5 * l + 2) / 4, l, 5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: Interval, l: Vec<u64>, b: Interval, top_n: usize, confirm: bool) -> SearchSpec {
        SearchSpec {
            m_range: m,
            l_values: l,
            b_range: b,
            top_n,
            confirm,
        }
    }

    #[test]
    fn example_one_single_candidate() {
        let r = sweep(&spec(
            Interval::single(4),
            vec![8],
            Interval::single(3),
            5,
            true,
        ))
        .unwrap();
        assert_eq!(r.ranked.len(), 1);
        let best = r.best.unwrap();
        assert_eq!(best.params, Params::new(4, 8, 3));
        assert_eq!(best.theta_exact.unwrap().lower.to_string(), "1.013631");
    }

    #[test]
    fn all_degenerate_grid_is_empty_not_error() {
        let r = sweep(&spec(
            Interval::new(1, 2),
            vec![0],
            Interval::new(1, 2),
            3,
            true,
        ))
        .unwrap();
        assert!(r.ranked.is_empty());
        assert!(r.best.is_none());
        assert_eq!(r.skipped.len(), 4);
    }

    #[test]
    fn invalid_specs() {
        let empty = spec(Interval::new(3, 2), vec![4], Interval::single(1), 1, false);
        assert_eq!(sweep(&empty), Err(Error::EmptyGrid));
        let no_l = spec(Interval::single(3), vec![], Interval::single(1), 1, false);
        assert_eq!(sweep(&no_l), Err(Error::EmptyGrid));
        let zero_top = spec(Interval::single(3), vec![4], Interval::single(1), 0, false);
        assert!(matches!(sweep(&zero_top), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn grid_deduplicates_canonical_points() {
        // (2, 10, 1) and (2, 20, 1) both canonicalize to (2, 2, 1)
        let s = spec(
            Interval::single(2),
            vec![10, 20],
            Interval::single(1),
            5,
            false,
        );
        assert_eq!(s.grid(), vec![Params::new(2, 2, 1)]);
    }

    #[test]
    fn ranking_breaks_ties_lexicographically() {
        let c = |m, t| Candidate {
            params: Params::new(m, 1, 1),
            theta_est: t,
            theta_exact: None,
            near_grid_boundary: false,
        };
        let mut v = [c(3, 1.1), c(1, 1.1), c(2, 1.2)];
        v.sort_by(Candidate::rank_cmp);
        let ms: Vec<_> = v.iter().map(|c| c.params.m).collect();
        assert_eq!(ms, vec![2, 1, 3]);
    }

    #[test]
    fn refine_window() {
        let r = refine(Params::new(80, 64, 5), 8).unwrap();
        assert_eq!(r.best.unwrap().params, Params::new(80, 64, 5));
        assert_eq!(r.ranked.len(), 17);

        let single = refine(Params::new(80, 64, 5), 0).unwrap();
        assert_eq!(single.ranked.len(), 1);
        let t = counts::theta(Params::new(80, 64, 5)).unwrap();
        assert_eq!(single.ranked[0].theta_est, t.value());
    }

    #[test]
    fn suggest_start_examples() {
        assert_eq!(suggest_start(64), Params::new(80, 64, 5));
        assert_eq!(suggest_start(65536), Params::new(81920, 65536, 5));
        assert_eq!(suggest_start(4), Params::new(5, 4, 5));
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let s = spec(
            Interval::new(1, 40),
            vec![16, 20],
            Interval::new(1, 5),
            10,
            true,
        );
        let one = sweep_with_workers(&s, 1).unwrap();
        let four = sweep_with_workers(&s, 4).unwrap();
        assert_eq!(one, four);
    }
}
