//! Exact arithmetic invariants of `X_0(N)`.
//!
//! Everything here is integer arithmetic; the genus is derived from Shimura's
//! formula `g = 1 + ψ/12 − ν₂/4 − ν₃/3 − ν∞/2`, evaluated as
//! `12(g − 1) = ψ − 3ν₂ − 4ν₃ − 6ν∞` so no division happens until the end.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use std::fmt;

/// A positive level `N` together with its primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Level {
    n: u64,
    is_prime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("level must be a positive integer, got {0}")]
pub struct InvalidLevel(pub u64);

impl Level {
    pub fn new(n: u64) -> Result<Self, InvalidLevel> {
        if n == 0 {
            return Err(InvalidLevel(n));
        }
        Ok(Level { n, is_prime: is_prime(n) })
    }

    pub fn get(self) -> u64 {
        self.n
    }

    pub fn is_prime(self) -> bool {
        self.is_prime
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.n.fmt(f)
    }
}

/// All arithmetic invariants of `X_0(N)` at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusProfile {
    pub level: Level,
    pub psi: u64,
    pub omega: u32,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub genus: u64,
}

impl GenusProfile {
    pub fn of(level: Level) -> Self {
        let n = level.get();
        let fac = factorize(n);
        let psi = psi_from(n, &fac);
        let nu2 = nu2_from(&fac);
        let nu3 = nu3_from(&fac);
        let nu_inf = nu_inf_from(&fac);
        let genus = genus_from(psi, nu2, nu3, nu_inf);
        GenusProfile {
            level,
            psi,
            omega: fac.len() as u32,
            nu2,
            nu3,
            nu_inf,
            genus,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        if is_prime(n) {
            break;
        }
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primes in `[lo, hi)` in increasing order.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if hi <= lo {
        return Vec::new();
    }
    let width = hi - lo;
    let root = hi.isqrt() + 1;
    // A narrow window far from the origin is cheaper to test pointwise than
    // to sieve; otherwise sieve the window with the primes up to sqrt(hi).
    if width < root {
        return (lo..hi).filter(|&n| is_prime(n)).collect();
    }
    let base = sieve_below(root.min(hi));
    let mut composite = vec![false; width as usize];
    for &q in &base {
        let mut j = q.saturating_mul(q).max(lo.div_ceil(q).saturating_mul(q));
        while j < hi {
            composite[(j - lo) as usize] = true;
            j = j.saturating_add(q);
        }
    }
    (0..width).filter(|&i| !composite[i as usize]).map(|i| lo + i).collect()
}

fn sieve_below(hi: u64) -> Vec<u64> {
    let n = hi as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn psi_from(n: u64, fac: &[(u64, u32)]) -> u64 {
    fac.iter().fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

fn nu2_from(fac: &[(u64, u32)]) -> u64 {
    let mut r = 1;
    for &(p, e) in fac {
        r *= match p {
            2 if e >= 2 => 0,
            2 => 1,
            _ => (1 + kronecker(-4, p)) as u64,
        };
    }
    r
}

fn nu3_from(fac: &[(u64, u32)]) -> u64 {
    let mut r = 1;
    for &(p, e) in fac {
        r *= match p {
            3 if e >= 2 => 0,
            3 => 1,
            _ => (1 + kronecker(-3, p)) as u64,
        };
    }
    r
}

// Σ_{d|N} φ(gcd(d, N/d)) is multiplicative; at p^e it equals
// Σ_{i=0}^{e} φ(p^{min(i, e−i)}).
fn nu_inf_from(fac: &[(u64, u32)]) -> u64 {
    let mut r = 1;
    for &(p, e) in fac {
        let mut s = 0;
        for i in 0..=e {
            let k = i.min(e - i);
            s += if k == 0 { 1 } else { p.pow(k - 1) * (p - 1) };
        }
        r *= s;
    }
    r
}

fn genus_from(psi: u64, nu2: u64, nu3: u64, nu_inf: u64) -> u64 {
    let twelve_g = 12 + psi as i128 - 3 * nu2 as i128 - 4 * nu3 as i128 - 6 * nu_inf as i128;
    assert!(
        twelve_g >= 0 && twelve_g % 12 == 0,
        "genus formula produced non-integral 12g = {twelve_g}"
    );
    (twelve_g / 12) as u64
}

/// `ψ(N) = N·∏_{r|N}(1 + 1/r)`, the index of `Γ₀(N)` in `SL₂(Z)`.
pub fn psi(level: Level) -> u64 {
    psi_from(level.get(), &factorize(level.get()))
}

/// Number of distinct prime factors.
pub fn omega(level: Level) -> u32 {
    factorize(level.get()).len() as u32
}

/// Number of solutions of `x² + 1 = 0` in `Z/NZ`.
pub fn nu2(level: Level) -> u64 {
    nu2_from(&factorize(level.get()))
}

/// Number of solutions of `x² + x + 1 = 0` in `Z/NZ`.
pub fn nu3(level: Level) -> u64 {
    nu3_from(&factorize(level.get()))
}

/// Number of cusps, `Σ_{d|N} φ(gcd(d, N/d))`.
pub fn nu_inf(level: Level) -> u64 {
    nu_inf_from(&factorize(level.get()))
}

/// Genus of `X_0(N)`.
pub fn genus_x0(level: Level) -> u64 {
    GenusProfile::of(level).genus
}

/// The elementary lower bound `(p − 13)/12 ≤ g₀(p)`.
pub fn genus_lower_bound(p: u64) -> Ratio<i64> {
    Ratio::new(p as i64 - 13, 12)
}

/// Kronecker symbol `(d/n)` for `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut sign: i8 = 1;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        // (d/2) = 1 if d ≡ ±1 mod 8, −1 if d ≡ ±3 mod 8.
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= tz;
    }
    // Now n odd: Jacobi symbol (d mod n / n).
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(m % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    if m == 1 {
        sign
    } else {
        0
    }
}

/// `gcd` re-exported for callers that only need the integer helper.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
