//! Ogg's lower bound on `#X_0(N)(F_{q²})` and the finiteness thresholds it
//! implies for low-degree points.

use crate::arith::{is_prime, omega, psi, Level};
use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("q = {q} must be a prime of good reduction for level {n}")]
    BadPrime { n: u64, q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OggBound {
    pub level: Level,
    pub q: u64,
    pub bound: Ratio<i64>,
}

/// `L_q(N) = (q − 1)/12 · ψ(N) + 2^{ω(N)}`.
pub fn ogg_lower_bound(level: Level, q: u64) -> Result<OggBound, BoundError> {
    let n = level.get();
    if !is_prime(q) || n % q == 0 {
        return Err(BoundError::BadPrime { n, q });
    }
    let bound = Ratio::new((q as i64 - 1) * psi(level) as i64, 12) + (1i64 << omega(level));
    Ok(OggBound { level, q, bound })
}

/// `120d − 24`: beyond this prime level there are finitely many degree-`d`
/// points.
pub fn finiteness_threshold(d: u64) -> u64 {
    120 * d - 24
}

/// Whether Ogg's count at `q = 2` certifies finitely many degree-`d` points on
/// `X_0(p)`.
pub fn finite_by_ogg(p: u64, d: u64) -> bool {
    p > finiteness_threshold(d)
}

/// Points of degree `≤ d` being infinite forces gonality `≤ 2d`.
pub fn frey_gonality_cap(d: u64) -> u64 {
    2 * d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;
    use proptest::prelude::*;

    fn lv(n: u64) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn ogg_examples() {
        assert_eq!(ogg_lower_bound(lv(223), 2).unwrap().bound, Ratio::new(62, 3));
        assert_eq!(ogg_lower_bound(lv(1), 2).unwrap().bound, Ratio::new(13, 12));
        assert_eq!(ogg_lower_bound(lv(691), 2).unwrap().bound, Ratio::new(692, 12) + 2);
        assert_eq!(ogg_lower_bound(lv(22), 2), Err(BoundError::BadPrime { n: 22, q: 2 }));
        assert!(ogg_lower_bound(lv(23), 4).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(finiteness_threshold(6), 696);
        assert_eq!(finiteness_threshold(1), 96);
        assert_eq!(finiteness_threshold(25), 2976);
        assert!(finite_by_ogg(701, 6));
        assert!(!finite_by_ogg(691, 6));
        assert!(finite_by_ogg(3001, 25));
        assert_eq!(frey_gonality_cap(6), 12);
        assert_eq!(frey_gonality_cap(3), 6);
    }

    #[test]
    fn degree_six_failures_are_exactly_small_primes() {
        let failing: Vec<u64> = primes_in(3, 5000).into_iter().filter(|&p| !finite_by_ogg(p, 6)).collect();
        assert_eq!(failing, primes_in(3, 697));
    }

    proptest! {
        #[test]
        fn ogg_mechanism(p in proptest::sample::select(primes_in(3, 20_000)), d in 1u64..40) {
            if finite_by_ogg(p, d) {
                prop_assert!(ogg_lower_bound(lv(p), 2).unwrap().bound > Ratio::from_integer(10 * d as i64));
            }
        }

        #[test]
        fn ogg_monotone(p in 3u64..20_000, q in 3u64..20_000, d in 1u64..40) {
            if finite_by_ogg(p.min(q), d) {
                prop_assert!(finite_by_ogg(p.max(q), d));
            }
        }
    }
}
