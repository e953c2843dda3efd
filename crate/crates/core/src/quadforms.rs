//! Class numbers of negative discriminants and the genus of `X_0^+(p)`.
//!
//! [`class_number_reduced`] counts reduced forms directly and is the reference
//! every other quantity in this module is checked against.

use crate::arith::{factorize, genus_x0, kronecker, Level};
use crate::interval::Interval;
use num_rational::Ratio;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("{0} is not a negative discriminant (need D < 0, D ≡ 0,1 mod 4)")]
    NotDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{what} needs {bound}, got {got}")]
    OutOfRange { what: &'static str, bound: &'static str, got: i64 },
    #[error("{what} produced the non-integral value {value}")]
    NonIntegral { what: &'static str, value: Ratio<i64> },
}

/// A negative discriminant `D = d·m²` with `d` fundamental.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Discriminant {
    value: i64,
    fundamental: i64,
    conductor: u64,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self, QuadError> {
        if value >= 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(QuadError::NotDiscriminant(value));
        }
        let mut m = 1u64;
        for (p, e) in factorize(value.unsigned_abs()) {
            m *= p.pow(e / 2);
        }
        let mut d = value / (m * m) as i64;
        if d.rem_euclid(4) != 1 {
            // d is squarefree and ≡ 2, 3 mod 4, so the fundamental part is 4d
            // and m is even because D itself is a discriminant.
            d *= 4;
            m /= 2;
        }
        Ok(Discriminant { value, fundamental: d, conductor: m })
    }

    pub fn value(self) -> i64 {
        self.value
    }

    /// The fundamental discriminant `d` with `D = d·m²`.
    pub fn fundamental_part(self) -> i64 {
        self.fundamental
    }

    /// The conductor `m` with `D = d·m²`.
    pub fn conductor(self) -> u64 {
        self.conductor
    }

    pub fn is_fundamental(self) -> bool {
        self.conductor == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassNumberMethod {
    ReducedForms,
    CoxFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassNumberResult {
    pub discriminant: Discriminant,
    pub h: u64,
    pub method: ClassNumberMethod,
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn g(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    }
    g(g(a, b), c)
}

/// Number of reduced primitive forms `(a, b, c)` of discriminant `D`:
/// `|b| ≤ a ≤ c`, `b ≥ 0` whenever `|b| = a` or `a = c`.
pub fn class_number_reduced(d: i64) -> Result<u64, QuadError> {
    let disc = Discriminant::new(d)?;
    Ok(count_reduced(disc.value()))
}

fn count_reduced(d: i64) -> u64 {
    let n = -d;
    let mut h = 0;
    let mut a = 1i64;
    // a ≤ √(|D|/3)
    while 3 * a * a <= n {
        let mut b = -a + 1;
        if (b - d).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && !(b < 0 && a == c) && gcd3(a, b, c) == 1 {
                    h += 1;
                }
            }
            b += 2;
        }
        a += 1;
    }
    h
}

/// `h(dm²) = h(d)·m/w·∏_{p|m}(1 − (d/p)/p)` with `w = 3, 2, 1` for
/// `d = −3`, `d = −4` (and `m > 1`), otherwise.
pub fn class_number_cox(d: i64, m: u64) -> Result<u64, QuadError> {
    let disc = Discriminant::new(d)?;
    if !disc.is_fundamental() {
        return Err(QuadError::NotFundamental(d));
    }
    if m == 0 {
        return Err(QuadError::OutOfRange { what: "conductor", bound: "m ≥ 1", got: 0 });
    }
    let w = match (d, m) {
        (_, 1) => 1,
        (-3, _) => 3,
        (-4, _) => 2,
        _ => 1,
    };
    let mut h = Ratio::from_integer(count_reduced(d) as i64 * m as i64) / w;
    for (p, _) in factorize(m) {
        let p = p as i64;
        h *= Ratio::new(p - kronecker(d, p as u64) as i64, p);
    }
    if !h.is_integer() || h <= Ratio::from_integer(0) {
        return Err(QuadError::NonIntegral { what: "class_number_cox", value: h });
    }
    Ok(h.to_integer() as u64)
}

/// [`class_number_cox`] driven by a [`Discriminant`], returning the method used.
pub fn class_number(disc: Discriminant) -> ClassNumberResult {
    if disc.is_fundamental() {
        ClassNumberResult { discriminant: disc, h: count_reduced(disc.value()), method: ClassNumberMethod::ReducedForms }
    } else {
        let h = class_number_cox(disc.fundamental_part(), disc.conductor())
            .expect("Cox formula is integral for valid discriminants");
        ClassNumberResult { discriminant: disc, h, method: ClassNumberMethod::CoxFormula }
    }
}

fn log_shift() -> Interval {
    // 5 − 2 log 6
    Interval::int(5) - Interval::int(2) * Interval::int(6).ln()
}

/// Ramaré's bound `h(d) ≤ √|d|/(2π)·(log|d| + 5 − 2 log 6)`, as an enclosure.
pub fn ramare_bound(d: i64) -> Result<Interval, QuadError> {
    let disc = Discriminant::new(d)?;
    if !disc.is_fundamental() {
        return Err(QuadError::NotFundamental(d));
    }
    if d >= -4 {
        return Err(QuadError::OutOfRange { what: "ramare_bound", bound: "d < −4", got: d });
    }
    let n = Interval::int(-d);
    Ok(n.sqrt() / (Interval::int(2) * Interval::pi()) * (n.ln() + log_shift()))
}

/// `h(−4p) ≤ 3√p/(2π)·(log p + 5 − 2 log 6)` for primes `p ≥ 5`.
pub fn h4p_bound(p: u64) -> Result<Interval, QuadError> {
    if p < 5 {
        return Err(QuadError::OutOfRange { what: "h4p_bound", bound: "p ≥ 5", got: p as i64 });
    }
    let x = Interval::int(p as i64);
    Ok(Interval::int(3) * x.sqrt() / (Interval::int(2) * Interval::pi()) * (x.ln() + log_shift()))
}

/// `α_p` of the Fricke-quotient genus formula.
pub fn alpha(p: u64) -> Ratio<i64> {
    match p % 8 {
        7 => Ratio::from_integer(2),
        3 => Ratio::new(4, 3),
        _ => Ratio::from_integer(1),
    }
}

/// Genus of `X_0^+(p) = X_0(p)/w_p`: `(2g + 2 − α_p·h(−4p))/4`.
pub fn genus_x0_plus(p: u64) -> Result<u64, QuadError> {
    if p <= 3 || !crate::arith::is_prime(p) {
        return Err(QuadError::OutOfRange { what: "genus_x0_plus", bound: "prime p > 3", got: p as i64 });
    }
    let g = genus_x0(Level::new(p).expect("p > 3")) as i64;
    let h = count_reduced(-4 * p as i64) as i64;
    let v = (Ratio::from_integer(2 * g + 2) - alpha(p) * h) / 4;
    if !v.is_integer() || v < Ratio::from_integer(0) {
        return Err(QuadError::NonIntegral { what: "genus_x0_plus", value: v });
    }
    Ok(v.to_integer() as u64)
}

/// `g₀(p)/3 + 3 < g₀⁺(p) ≤ g₀(p)/2`, exactly.
pub fn plus_genus_inequality(p: u64) -> Result<bool, QuadError> {
    let g = Ratio::from_integer(genus_x0(Level::new(p).map_err(|_| QuadError::OutOfRange {
        what: "plus_genus_inequality",
        bound: "p ≥ 1",
        got: 0,
    })?) as i64);
    let gp = Ratio::from_integer(genus_x0_plus(p)? as i64);
    Ok(g / 3 + 3 < gp && gp <= g / 2)
}

/// Constant inside the logarithmic factor of the analytic threshold check.
///
/// The lower bound `g⁺ ≥ g/2 + 1/2 − (3√p/4π)(log p + c)` follows from the
/// `h(−4p)` bound, which carries `c = 5 − 2 log 6`. With this constant the
/// check first holds for every prime beyond 43633.
pub const ANALYTIC_LOG_SHIFT: i64 = 5;

/// Certified evaluation of
/// `g/3 + 3 < g/2 + 1/2 − 3√p/(4π)·(log p + shift − 2 log 6)`.
pub fn analytic_threshold_holds(p: u64, shift: i64) -> bool {
    let g = Interval::int(genus_x0(Level::new(p.max(1)).expect("p ≥ 1")) as i64);
    let x = Interval::int(p as i64);
    let two = Interval::int(2);
    let three = Interval::int(3);
    let lhs = g / three + three;
    let tail = three * x.sqrt() / (Interval::int(4) * Interval::pi())
        * (x.ln() + Interval::int(shift) - two * Interval::int(6).ln());
    let rhs = g / two + Interval::new(0.5, 0.5) - tail;
    lhs.certainly_lt(rhs)
}

/// The analytic inequality that settles the sandwich for large `p`.
pub fn analytic_threshold_check(p: u64) -> bool {
    analytic_threshold_holds(p, ANALYTIC_LOG_SHIFT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;
    use proptest::prelude::*;

    #[test]
    fn discriminant_decomposition() {
        let d = Discriminant::new(-892).unwrap();
        assert_eq!((d.fundamental_part(), d.conductor()), (-223, 2));
        let d = Discriminant::new(-12).unwrap();
        assert_eq!((d.fundamental_part(), d.conductor()), (-3, 2));
        let d = Discriminant::new(-16).unwrap();
        assert_eq!((d.fundamental_part(), d.conductor()), (-4, 2));
        let d = Discriminant::new(-20).unwrap();
        assert!(d.is_fundamental());
        assert!(Discriminant::new(-5).is_err());
        assert!(Discriminant::new(4).is_err());
        assert!(Discriminant::new(0).is_err());
    }

    #[test]
    fn reduced_examples() {
        assert_eq!(class_number_reduced(-4), Ok(1));
        assert_eq!(class_number_reduced(-3), Ok(1));
        assert_eq!(class_number_reduced(-892), Ok(7));
        assert_eq!(class_number_reduced(-908), Ok(15));
        assert_eq!(class_number_reduced(-20), Ok(2));
        assert_eq!(class_number_reduced(-223), Ok(7));
        assert_eq!(class_number_reduced(-23), Ok(3));
        assert!(class_number_reduced(-2).is_err());
    }

    #[test]
    fn cox_examples() {
        assert_eq!(class_number_cox(-4, 1), Ok(1));
        assert_eq!(class_number_cox(-223, 2), Ok(7));
        assert_eq!(class_number_cox(-3, 2), Ok(1));
        assert_eq!(class_number_reduced(-12), Ok(1));
        assert_eq!(class_number_cox(-12, 1), Err(QuadError::NotFundamental(-12)));
    }

    #[test]
    fn cox_matches_reduced_small() {
        for n in 3..=20_000i64 {
            let Ok(disc) = Discriminant::new(-n) else { continue };
            if disc.is_fundamental() {
                continue;
            }
            assert_eq!(
                class_number_cox(disc.fundamental_part(), disc.conductor()),
                class_number_reduced(-n),
                "D = {}",
                -n
            );
        }
    }

    #[test]
    fn ramare_examples() {
        let b = ramare_bound(-20).unwrap();
        assert!(b.lo > 3.1404 && b.hi < 3.1405);
        assert!(ramare_bound(-223).unwrap().lo >= 7.0);
        assert!(ramare_bound(-4).is_err());
        assert!(ramare_bound(-12).is_err());
    }

    #[test]
    fn h4p_examples() {
        let b = h4p_bound(5).unwrap();
        assert!(b.lo > 3.2 && b.hi < 3.25);
        assert!(h4p_bound(223).unwrap().lo >= 7.0);
        assert!(h4p_bound(3).is_err());
    }

    #[test]
    fn h4p_bound_holds_for_all_p_below_1e5() {
        for p in primes_in(5, 100_000) {
            let h = count_reduced(-4 * p as i64) as f64;
            assert!(h <= h4p_bound(p).unwrap().lo, "p = {p}");
        }
    }

    #[test]
    fn plus_genus_table_rows() {
        for (p, gp) in [(223, 6), (227, 5), (359, 6), (383, 8), (491, 12), (809, 26), (929, 30), (1409, 50)] {
            assert_eq!(genus_x0_plus(p), Ok(gp), "p = {p}");
        }
        assert_eq!(genus_x0_plus(37), Ok(1));
        assert_eq!(genus_x0_plus(53), Ok(1));
        assert!(genus_x0_plus(3).is_err());
        assert!(genus_x0_plus(221).is_err());
    }

    #[test]
    fn plus_genus_integral_to_1e5() {
        for p in primes_in(5, 100_000) {
            genus_x0_plus(p).unwrap();
        }
    }

    #[test]
    fn sandwich_examples() {
        assert_eq!(plus_genus_inequality(3001), Ok(true));
        assert_eq!(plus_genus_inequality(43633), Ok(true));
        assert_eq!(plus_genus_inequality(223), Ok(false));
    }

    #[test]
    fn analytic_examples() {
        assert!(analytic_threshold_check(43649));
        assert!(analytic_threshold_check(1_000_003));
        assert!(!analytic_threshold_check(5));
    }

    #[test]
    fn analytic_threshold_location() {
        let primes = primes_in(2, 200_000);
        let last_fail = |shift| primes.iter().rev().find(|&&p| !analytic_threshold_holds(p, shift)).copied();
        assert_eq!(last_fail(5), Some(43633));
        // The same inequality with 3 in place of 5 would already hold past 27901.
        assert_eq!(last_fail(3), Some(27901));
    }

    proptest! {
        #[test]
        fn cox_agrees_with_reduced(n in 3i64..100_000) {
            if let Ok(disc) = Discriminant::new(-n) {
                if !disc.is_fundamental() {
                    prop_assert_eq!(
                        class_number_cox(disc.fundamental_part(), disc.conductor()).unwrap(),
                        class_number_reduced(-n).unwrap()
                    );
                }
            }
        }

        #[test]
        fn ramare_is_sound(n in 5i64..100_000) {
            if let Ok(disc) = Discriminant::new(-n) {
                if disc.is_fundamental() {
                    let h = class_number_reduced(-n).unwrap() as f64;
                    prop_assert!(h <= ramare_bound(-n).unwrap().lo);
                }
            }
        }

        #[test]
        fn decomposition_roundtrip(n in 3i64..1_000_000) {
            if let Ok(disc) = Discriminant::new(-n) {
                let d = disc.fundamental_part();
                let m = disc.conductor() as i64;
                prop_assert_eq!(d * m * m, -n);
                prop_assert!(Discriminant::new(d).unwrap().is_fundamental());
            }
        }
    }
}
