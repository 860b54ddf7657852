//! Certified rational enclosure of `64 / pi^2`.
//!
//! The candidate-vector sets of the 1-reducedness test are cut off at squared
//! length `64 / pi^2`. That threshold is irrational, so any rational query can
//! be decided by refining a rational interval around pi until it excludes the
//! query. The interval comes from Machin's formula
//! `pi = 16 atan(1/5) - 4 atan(1/239)` with alternating-series tail bounds:
//! consecutive partial sums of `atan(1/x) = sum (-1)^j / ((2j+1) x^(2j+1))`
//! bracket the limit.

use num_traits::{One, Signed, Zero};

use crate::field::{Int, Rat};

/// Bracketing partial sums of `atan(1/x)`; `terms >= 1`.
fn atan_inv_bounds(x: u64, terms: usize) -> (Rat, Rat) {
    let x = Int::from(x);
    let x2 = &x * &x;
    let mut pow = x.clone();
    let mut sum = Rat::zero();
    for j in 0..terms {
        let term = Rat::new(Int::one(), Int::from(2 * j as u64 + 1) * &pow);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &x2;
    }
    let next = Rat::new(Int::one(), Int::from(2 * terms as u64 + 1) * &pow);
    if terms % 2 == 0 {
        (sum.clone(), sum + next)
    } else {
        (&sum - &next, sum)
    }
}

/// Rational `(lo, hi)` with `lo < pi < hi`.
fn pi_bounds(terms: usize) -> (Rat, Rat) {
    let (lo5, hi5) = atan_inv_bounds(5, terms);
    let (lo239, hi239) = atan_inv_bounds(239, terms);
    let c16 = Rat::from_integer(Int::from(16));
    let c4 = Rat::from_integer(Int::from(4));
    (&c16 * &lo5 - &c4 * &hi239, &c16 * &hi5 - &c4 * &lo239)
}

/// True iff `sqlen < 64 / pi^2`, decided exactly.
///
/// Starts from roughly 55 decimal digits of pi and doubles the series length
/// until the enclosure of `64 / pi^2` excludes `sqlen`; the threshold is
/// irrational, so this terminates for every rational input.
pub fn below_pi_threshold(sqlen: &Rat) -> bool {
    assert!(!sqlen.is_negative(), "squared length cannot be negative");
    // Nearly every query is decided by a cached small-denominator enclosure;
    // the series is only refined for queries inside it.
    static COARSE: std::sync::OnceLock<(Rat, Rat)> = std::sync::OnceLock::new();
    let (lo, hi) = COARSE.get_or_init(|| {
        // rounded outward to denominator 10^15 to keep comparisons cheap
        let (lo, hi) = threshold_enclosure(12);
        let scale = Int::from(10u64.pow(15));
        let lo = Rat::new((lo * &scale).floor().to_integer(), scale.clone());
        let hi = Rat::new((hi * &scale).ceil().to_integer(), scale);
        (lo, hi)
    });
    if sqlen <= lo {
        return true;
    }
    if sqlen >= hi {
        return false;
    }
    let mut terms = 24;
    loop {
        let (lo, hi) = threshold_enclosure(terms);
        if *sqlen <= lo {
            return true;
        }
        if *sqlen >= hi {
            return false;
        }
        terms *= 2;
    }
}

/// Rational `(lo, hi)` with `lo < 64 / pi^2 < hi` from `terms`-term series.
fn threshold_enclosure(terms: usize) -> (Rat, Rat) {
    let c64 = Rat::from_integer(Int::from(64));
    let (lo, hi) = pi_bounds(terms);
    (&c64 / (&hi * &hi), &c64 / (&lo * &lo))
}

/// A rational strictly above `64 / pi^2`, used to bound enumeration loops.
pub fn threshold_upper_bound() -> Rat {
    Rat::new(Int::from(13), Int::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn threshold_decisions() {
        assert!(below_pi_threshold(&rat(0, 1)));
        assert!(below_pi_threshold(&rat(2, 1)));
        assert!(!below_pi_threshold(&rat(7, 1)));
        // 64/pi^2 = 6.4845557531...
        assert!(below_pi_threshold(&rat(64845, 10000)));
        assert!(!below_pi_threshold(&rat(64846, 10000)));
        assert!(below_pi_threshold(&rat(648455575, 100000000)));
        assert!(!below_pi_threshold(&rat(648455576, 100000000)));
    }

    #[test]
    fn upper_bound_is_above_threshold() {
        assert!(!below_pi_threshold(&threshold_upper_bound()));
    }

    #[test]
    fn pi_enclosure_is_tight() {
        let (lo, hi) = pi_bounds(40);
        assert!(lo < hi);
        // 3.14159265 < pi < 3.14159266
        assert!(lo > rat(314159265, 100000000));
        assert!(hi < rat(314159266, 100000000));
    }
}
