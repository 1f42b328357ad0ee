//! Modular and multiplicative arithmetic: factorization, Euler phi,
//! divisor count, modular inverses, unit enumeration.
//!
//! Residues returned by this module live in `[1, q]`, matching summation
//! ranges of the form `sum over n = 1..q`. The degenerate modulus `q = 1`
//! is accepted everywhere and behaves as a torus with the single point `1`.

use crate::{Error, Result};

/// A positive modulus with its factorization and the arithmetic functions
/// derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    q: u64,
    factors: Vec<(u64, u32)>,
    phi: u64,
    d: u64,
    omega: u32,
}

impl Modulus {
    /// Factorizes `q` and caches `phi`, `d`, and `omega`. Rejects `q = 0`.
    pub fn new(q: u64) -> Result<Self> {
        factorize(q)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Prime factorization as ascending `(prime, exponent)` pairs.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Euler's totient `phi(q)`.
    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Number of divisors `d(q)`.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Number of distinct prime divisors `omega(q)`.
    pub fn omega(&self) -> u32 {
        self.omega
    }

    /// The parity constant `C_q` for the `t`-variable hyper-Kloosterman
    /// bound: `1` for odd `q`, `2^((t+1)/2)` for even `q`.
    pub fn c_parity(&self, t: u32) -> f64 {
        if self.q % 2 == 1 {
            1.0
        } else {
            2f64.powf((t as f64 + 1.0) / 2.0)
        }
    }

    /// Ascending list of units: `n` in `[1, q]` with `gcd(n, q) = 1`.
    pub fn units(&self) -> Vec<u64> {
        units(self.q)
    }
}

/// Greatest common divisor (binary-free Euclid; `gcd(0, 0) = 0`).
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `gcd(a mod q, b mod q, q)` with the convention `gcd(0, 0, q) = q`.
pub fn gcd3(a: i64, b: i64, q: u64) -> u64 {
    gcd(reduce(a, q), gcd(reduce(b, q), q))
}

/// Reduces a signed integer into `[0, q)`.
pub fn reduce(a: i64, q: u64) -> u64 {
    let q = q as i128;
    (((a as i128 % q) + q) % q) as u64
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // Deterministic Miller–Rabin for all n < 2^64 with this witness set.
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Brent's cycle variant of the rho method, run with a fixed sequence of
/// polynomial offsets so the whole factorization is deterministic. Only
/// reached for composites with no prime factor below 10^6.
fn rho_factor(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n) && n % 2 == 1);
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("rho failed for {n} with 63 offsets");
}

/// Factorizes `q` into a fully populated [`Modulus`]. Trial division up to
/// 10^6, then deterministic rho on the remaining cofactor.
pub fn factorize(q: u64) -> Result<Modulus> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = q;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0u32;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3u64;
    while p <= 1_000_000 && p * p <= rest {
        push(p, &mut rest);
        p += 2;
    }
    // rest is now 1, a prime, or a semiprime-like cofactor with all prime
    // factors above 10^6; split it recursively.
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime_u64(m) {
            large.push(m);
        } else {
            let d = rho_factor(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    large.sort_unstable();
    let mut i = 0;
    while i < large.len() {
        let p = large[i];
        let mut e = 0u32;
        while i < large.len() && large[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((p, e));
    }

    let mut phi = 1u64;
    let mut d = 1u64;
    for &(p, e) in &factors {
        phi *= (p - 1) * p.pow(e - 1);
        d *= (e + 1) as u64;
    }
    Ok(Modulus {
        q,
        omega: factors.len() as u32,
        factors,
        phi,
        d,
    })
}

/// Multiplicative inverse of `n` mod `q`, returned in `[1, q]`.
///
/// For `q = 1` every integer is its own inverse and the result is `1`.
pub fn mod_inverse(n: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    if q == 1 {
        return Ok(1);
    }
    let a = reduce(n, q);
    // extended Euclid on (a, q)
    let (mut old_r, mut r) = (a as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotCoprime {
            n,
            q,
            g: old_r as u64,
        });
    }
    let inv = ((old_s % q as i128 + q as i128) % q as i128) as u64;
    Ok(if inv == 0 { q } else { inv })
}

/// Ascending units of `q`: all `n` in `[1, q]` with `gcd(n, q) = 1`.
/// Length `phi(q)`; `units(1) = [1]`.
pub fn units(q: u64) -> Vec<u64> {
    (1..=q).filter(|&n| gcd(n, q) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        let m = factorize(12).unwrap();
        assert_eq!(m.factors(), &[(2, 2), (3, 1)]);
        assert_eq!((m.phi(), m.d(), m.omega()), (4, 6, 2));

        let one = factorize(1).unwrap();
        assert_eq!(one.factors(), &[]);
        assert_eq!((one.phi(), one.d(), one.omega()), (1, 1, 0));

        let p = factorize(97).unwrap();
        assert_eq!(p.factors(), &[(97, 1)]);
        assert_eq!((p.phi(), p.d(), p.omega()), (96, 2, 1));
    }

    #[test]
    fn factorize_rejects_zero() {
        assert_eq!(factorize(0), Err(Error::ZeroModulus));
    }

    #[test]
    fn factorize_large_semiprime() {
        // 1000003 * 1000033 has both factors above the trial-division bound
        let n = 1_000_003u64 * 1_000_033;
        let m = factorize(n).unwrap();
        assert_eq!(m.factors(), &[(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn arithmetic_functions_match_brute_force() {
        // Linear sieve as an independent oracle for phi, d, omega.
        let n = 10_000usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i);
            }
            for &p in &primes {
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        for q in 1..=n as u64 {
            let m = factorize(q).unwrap();
            let mut x = q as usize;
            let (mut phi, mut d, mut omega) = (1u64, 1u64, 0u32);
            while x > 1 {
                let p = spf[x] as usize;
                let mut e = 0u32;
                while x % p == 0 {
                    x /= p;
                    e += 1;
                }
                phi *= (p as u64 - 1) * (p as u64).pow(e - 1);
                d *= (e + 1) as u64;
                omega += 1;
            }
            assert_eq!(m.phi(), phi, "phi({q})");
            assert_eq!(m.d(), d, "d({q})");
            assert_eq!(m.omega(), omega, "omega({q})");
            assert_eq!(m.factors().iter().map(|&(p, e)| p.pow(e)).product::<u64>(), q);
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(1, 1).unwrap(), 1);
        assert_eq!(
            mod_inverse(2, 4),
            Err(Error::NotCoprime { n: 2, q: 4, g: 2 })
        );
        // negative input reduces first
        assert_eq!(mod_inverse(-4, 7).unwrap(), 5); // -4 ≡ 3
    }

    #[test]
    fn mod_inverse_round_trip() {
        for q in 1..=500u64 {
            for u in units(q) {
                let v = mod_inverse(u as i64, q).unwrap();
                assert_eq!(mul_mod(u % q, v % q, q), 1 % q, "u={u} q={q}");
                assert_eq!(mod_inverse(v as i64, q).unwrap(), u, "u={u} q={q}");
            }
        }
    }

    #[test]
    fn gcd3_examples() {
        assert_eq!(gcd3(4, 6, 10), 2);
        assert_eq!(gcd3(0, 0, 7), 7);
        assert_eq!(gcd3(5, 7, 12), 1);
        assert_eq!(gcd3(-3, 9, 12), 3); // -3 ≡ 9 (mod 12)
    }

    #[test]
    fn units_examples() {
        assert_eq!(units(5), vec![1, 2, 3, 4]);
        assert_eq!(units(12), vec![1, 5, 7, 11]);
        assert_eq!(units(2), vec![1]);
        assert_eq!(units(1), vec![1]);
    }

    #[test]
    fn units_length_is_phi() {
        for q in 1..=10_000u64 {
            assert_eq!(units(q).len() as u64, factorize(q).unwrap().phi(), "q={q}");
        }
    }

    proptest! {
        #[test]
        fn factors_multiply_back(q in 1u64..1_000_000) {
            let m = factorize(q).unwrap();
            let prod: u64 = m.factors().iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, q);
        }

        #[test]
        fn inverse_is_inverse(n in 1i64..10_000, q in 1u64..10_000) {
            match mod_inverse(n, q) {
                Ok(v) => {
                    prop_assert!(v >= 1 && v <= q);
                    prop_assert_eq!(mul_mod(reduce(n, q), v % q, q), 1 % q);
                }
                Err(Error::NotCoprime { g, .. }) => prop_assert!(g > 1),
                Err(e) => prop_assert!(false, "unexpected error {e:?}"),
            }
        }
    }
}
