//! The phase-space distance `d = d_e + d_s`.
//!
//! `d_e` is the Hamming distance between states. `d_s` weights the strategy
//! difference at term `j` (0-based) by `9 / (N * 10^(j+1))`, so only a
//! finite prefix of length `L` can be observed. The remaining tail is
//! bounded by `(N - 1) / N * 10^-L`, and [`d_strategy`] returns the exact
//! rational bracket `[partial sum, partial sum + tail bound]` with common
//! denominator `N * 10^L`.

use serde::Serialize;

use crate::ci::{BitState, PhasePoint, Strategy};
use crate::error::{Error, Result};

/// Largest supported truncation horizon.
pub const MAX_HORIZON: usize = 15;

/// Certified bracket `[lower, upper]` around `d_s`, as exact rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyBracket {
    pub lower_num: u128,
    pub upper_num: u128,
    pub denom: u128,
    pub horizon: usize,
}

impl StrategyBracket {
    pub fn lower(&self) -> f64 {
        self.lower_num as f64 / self.denom as f64
    }

    pub fn upper(&self) -> f64 {
        self.upper_num as f64 / self.denom as f64
    }

    pub fn width(&self) -> f64 {
        (self.upper_num - self.lower_num) as f64 / self.denom as f64
    }
}

/// `d = d_e + d_s` with `d_s` known up to its bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceValue {
    pub state_part: usize,
    pub strategy: StrategyBracket,
}

impl DistanceValue {
    pub fn horizon(&self) -> usize {
        self.strategy.horizon
    }

    pub fn lower(&self) -> f64 {
        self.state_part as f64 + self.strategy.lower()
    }

    pub fn upper(&self) -> f64 {
        self.state_part as f64 + self.strategy.upper()
    }

    /// `lower >= eps` for an integer `eps`, decided exactly.
    pub fn lower_at_least(&self, eps: usize) -> bool {
        if self.state_part >= eps {
            return true;
        }
        // d_s < 1, so the integer part is all of d_e.
        false
    }

    /// `lower > num / den`, decided exactly when it fits in 128 bits.
    pub fn lower_exceeds(&self, num: u128, den: u128) -> bool {
        let b = &self.strategy;
        let exact = (self.state_part as u128)
            .checked_mul(b.denom)
            .and_then(|v| v.checked_add(b.lower_num))
            .and_then(|lhs| Some((lhs.checked_mul(den)?, num.checked_mul(b.denom)?)));
        match exact {
            Some((lhs, rhs)) => lhs > rhs,
            None => self.lower() > num as f64 / den as f64,
        }
    }
}

/// Hamming distance between two states.
pub fn d_state(e1: &BitState, e2: &BitState) -> Result<usize> {
    if e1.len() != e2.len() {
        return Err(Error::Dimension { left: e1.len(), right: e2.len() });
    }
    Ok(e1.bits().iter().zip(e2.bits()).filter(|(a, b)| a != b).count())
}

/// Bracket around `d_s(s1, s2)` from the first `horizon` terms.
pub fn d_strategy(s1: &Strategy, s2: &Strategy, horizon: usize) -> Result<StrategyBracket> {
    if s1.n_cells() != s2.n_cells() {
        return Err(Error::Dimension { left: s1.n_cells(), right: s2.n_cells() });
    }
    if horizon > MAX_HORIZON {
        return Err(Error::Parameter(format!("horizon {horizon} exceeds {MAX_HORIZON}")));
    }
    let available = s1.horizon().min(s2.horizon());
    if horizon > available {
        return Err(Error::ExhaustedStrategy { needed: horizon, available });
    }
    let n = s1.n_cells() as u128;
    // Horner over decimal digits: sum |a_j - b_j| * 10^(L-1-j).
    let partial = s1.terms()[..horizon]
        .iter()
        .zip(&s2.terms()[..horizon])
        .fold(0u128, |acc, (&a, &b)| acc * 10 + a.abs_diff(b) as u128);
    let lower_num = 9 * partial;
    Ok(StrategyBracket {
        lower_num,
        upper_num: lower_num + (n - 1),
        denom: n * 10u128.pow(horizon as u32),
        horizon,
    })
}

/// `d(p1, p2)` at truncation horizon `horizon`.
pub fn d_total(p1: &PhasePoint, p2: &PhasePoint, horizon: usize) -> Result<DistanceValue> {
    Ok(DistanceValue {
        state_part: d_state(&p1.state, &p2.state)?,
        strategy: d_strategy(&p1.strategy, &p2.strategy, horizon)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strat(terms: &[usize], n: usize) -> Strategy {
        Strategy::new(terms.to_vec(), n).unwrap()
    }

    #[test]
    fn hamming_examples() {
        let a: BitState = "011".parse().unwrap();
        let b: BitState = "110".parse().unwrap();
        assert_eq!(d_state(&a, &b).unwrap(), 2);
        assert_eq!(d_state(&a, &a).unwrap(), 0);
        let z: BitState = "0000".parse().unwrap();
        let o: BitState = "1111".parse().unwrap();
        assert_eq!(d_state(&z, &o).unwrap(), 4);
        assert!(matches!(d_state(&a, &z), Err(Error::Dimension { left: 3, right: 4 })));
    }

    #[test]
    fn first_term_weight() {
        // N = 10, |S^0 - Š^0| = 3: 9/10 * 3/10 = 0.27.
        let s1 = strat(&[4, 5, 5], 10);
        let s2 = strat(&[1, 5, 5], 10);
        for l in 1..=3 {
            let b = d_strategy(&s1, &s2, l).unwrap();
            assert!((b.lower() - 0.27).abs() < 1e-15, "{}", b.lower());
        }
    }

    #[test]
    fn identical_prefixes() {
        let s = strat(&[1, 3, 2, 4], 4);
        let b = d_strategy(&s, &s, 4).unwrap();
        assert_eq!(b.lower_num, 0);
        assert!((b.upper() - 0.75e-4).abs() < 1e-18);
    }

    #[test]
    fn alternating_two_cells_tends_to_one_half() {
        let s1 = strat(&[1; 15], 2);
        let s2 = strat(&[2; 15], 2);
        let b = d_strategy(&s1, &s2, 15).unwrap();
        assert!(b.lower() <= 0.5 && 0.5 <= b.upper());
        assert!(b.upper() - b.lower() <= 0.5e-15);
    }

    #[test]
    fn horizon_errors() {
        let s = strat(&[1, 2], 2);
        assert!(matches!(d_strategy(&s, &s, 3), Err(Error::ExhaustedStrategy { needed: 3, available: 2 })));
        let long = strat(&[1; 20], 2);
        assert!(matches!(d_strategy(&long, &long, 16), Err(Error::Parameter(_))));
        assert!(matches!(d_strategy(&s, &strat(&[1, 2], 3), 1), Err(Error::Dimension { .. })));
    }

    #[test]
    fn total_distance() {
        let s = strat(&[1, 2, 3], 3);
        let p = PhasePoint::new("010".parse().unwrap(), s.clone()).unwrap();
        let d = d_total(&p, &p, 3).unwrap();
        assert_eq!(d.state_part, 0);
        assert_eq!(d.strategy.lower_num, 0);
        let q = PhasePoint::new("011".parse().unwrap(), s).unwrap();
        let d = d_total(&p, &q, 3).unwrap();
        assert_eq!(d.state_part, 1);
        assert!(d.lower_at_least(1));
        assert!(!d.lower_at_least(2));
    }

    #[test]
    fn exact_threshold_comparison() {
        // d_s lower = 9/2 * (1/10) = 0.45, compared against 0.45 and 0.449.
        let d = DistanceValue { state_part: 0, strategy: d_strategy(&strat(&[1], 2), &strat(&[2], 2), 1).unwrap() };
        assert!(!d.lower_exceeds(45, 100));
        assert!(d.lower_exceeds(449, 1000));
    }
}
