//! Closed intervals of `f64` with outward rounding.
//!
//! Rust offers no control over the FPU rounding mode, so every operation
//! computes the round-to-nearest result and then steps one ulp outward.
//! Correctly rounded operations (`+ − × ÷ √`) are off by at most half an ulp,
//! so one step suffices; `ln` from the platform libm is only faithfully
//! rounded and gets two. An inequality is reported as true only when it holds
//! for every point of the enclosing interval.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, steps: u32) -> f64 {
    (0..steps).fold(x, |v, _| v.next_down())
}

fn up(x: f64, steps: u32) -> f64 {
    (0..steps).fold(x, |v, _| v.next_up())
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Enclosure of an integer (exact whenever `|n| ≤ 2⁵³`).
    pub fn int(n: i64) -> Self {
        let x = n as f64;
        if x as i64 == n && n.unsigned_abs() <= 1 << 53 {
            Interval::new(x, x)
        } else {
            Interval::new(x.next_down(), x.next_up())
        }
    }

    /// Enclosure of `π`.
    pub fn pi() -> Self {
        let x = std::f64::consts::PI;
        Interval::new(x.next_down(), x.next_up())
    }

    pub fn sqrt(self) -> Self {
        assert!(self.lo >= 0.0, "sqrt of interval with negative part");
        Interval::new(down(self.lo.sqrt(), 1).max(0.0), up(self.hi.sqrt(), 1))
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "ln of interval touching zero");
        Interval::new(down(self.lo.ln(), 2), up(self.hi.ln(), 2))
    }

    pub fn midpoint(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `self < other` for every pair of points.
    pub fn certainly_lt(self, other: Interval) -> bool {
        self.hi < other.lo
    }

    /// `self ≤ other` for every pair of points.
    pub fn certainly_le(self, other: Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(down(self.lo + o.lo, 1), up(self.hi + o.hi, 1))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(down(self.lo - o.hi, 1), up(self.hi - o.lo, 1))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by interval containing zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }
}
