//! Monte Carlo estimates of containment probabilities along a `p` grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gnp, Family};
use crate::par::{self, Execution};
use crate::search::{find_embedding, SearchOutcome, DEFAULT_BUDGET};
use crate::seed;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // at phat = 0 or 1 the bound touches phat; keep it bracketed under rounding
    ((centre - half).clamp(0.0, phat), (centre + half).clamp(phat, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub phat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Trials whose search ran out of budget (counted as failures).
    pub exhausted: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCurve {
    pub family: String,
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    pub coupled: bool,
    pub budget: u64,
    pub version: String,
    pub rows: Vec<CurveRow>,
}

impl ThresholdCurve {
    /// `key=value` metadata, in a fixed order.
    pub fn metadata(&self) -> Vec<(&'static str, String)> {
        vec![
            ("family", self.family.clone()),
            ("n", self.n.to_string()),
            ("r", self.r.to_string()),
            ("seed", self.seed.to_string()),
            ("coupled", self.coupled.to_string()),
            ("budget", self.budget.to_string()),
            ("exhausted", self.rows.iter().map(|r| r.exhausted).sum::<u64>().to_string()),
            ("version", self.version.clone()),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveOptions {
    /// Share per-edge uniforms across the grid so hosts are nested in `p`.
    pub coupled: bool,
    pub budget: u64,
    pub exec: Execution,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { coupled: true, budget: DEFAULT_BUDGET, exec: Execution::default() }
    }
}

/// Estimates `P(family member ⊆ H^(r)(n, p))` for each `p` in the grid.
///
/// Trial `j` at grid index `i` uses host seed `derive(seed, [j])` when
/// coupled and `derive(seed, [i, j])` otherwise.
pub fn monte_carlo_curve(
    family: Family,
    n: usize,
    r: usize,
    p_grid: &[f64],
    trials: u64,
    seed: u64,
    opts: CurveOptions,
) -> Result<ThresholdCurve> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    if let Some(p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::param(format!("probability {p} outside [0, 1]")));
    }
    let pattern = family.build(n, r)?;
    let per_trial = par::map_range(opts.exec, trials as usize, |j| {
        p_grid
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let s = if opts.coupled {
                    seed::derive(seed, &[j as u64])
                } else {
                    seed::derive(seed, &[i as u64, j as u64])
                };
                let host = gnp(n, r, p, s)?;
                find_embedding(&host, &pattern, true, opts.budget)
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut succ = vec![0u64; p_grid.len()];
    let mut exhausted = vec![0u64; p_grid.len()];
    for outcomes in per_trial {
        for (i, o) in outcomes?.into_iter().enumerate() {
            match o {
                SearchOutcome::Found(_) => succ[i] += 1,
                SearchOutcome::BudgetExhausted => exhausted[i] += 1,
                SearchOutcome::NotFound => {}
            }
        }
    }
    let rows = p_grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let (ci_low, ci_high) = wilson(succ[i], trials, Z95);
            CurveRow {
                p,
                trials,
                successes: succ[i],
                phat: succ[i] as f64 / trials as f64,
                ci_low,
                ci_high,
                exhausted: exhausted[i],
            }
        })
        .collect();
    Ok(ThresholdCurve {
        family: family.name(),
        n,
        r,
        seed,
        coupled: opts.coupled,
        budget: opts.budget,
        version: crate::VERSION.to_string(),
        rows,
    })
}

/// `steps` evenly spaced points from `pmin` to `pmax` inclusive, rounded to
/// twelve decimals so that grids like `0.1..0.9` print as typed.
pub fn linear_grid(pmin: f64, pmax: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![pmin],
        _ => (0..steps)
            .map(|i| pmin + (pmax - pmin) * i as f64 / (steps - 1) as f64)
            .map(|p| ((p * 1e12).round() / 1e12).clamp(pmin, pmax))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets() {
        for (s, t) in [(0, 10), (10, 10), (3, 7), (150, 300)] {
            let (lo, hi) = wilson(s, t, Z95);
            let ph = s as f64 / t as f64;
            assert!(lo <= ph && ph <= hi && lo >= 0.0 && hi <= 1.0);
        }
        let (lo, hi) = wilson(50, 100, Z95);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn extreme_rows() {
        let c = monte_carlo_curve(Family::TightHamilton, 7, 3, &[0.0, 1.0], 20, 9, CurveOptions::default())
            .unwrap();
        assert_eq!(c.rows[0].phat, 0.0);
        assert_eq!(c.rows[1].phat, 1.0);
    }

    #[test]
    fn grid() {
        let g = linear_grid(0.1, 0.9, 5);
        assert!(g.iter().zip([0.1, 0.3, 0.5, 0.7, 0.9]).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(linear_grid(0.2, 0.9, 1), vec![0.2]);
    }
}
