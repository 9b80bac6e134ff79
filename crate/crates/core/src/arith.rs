//! Elementary number theory on `u64`: factorization, divisors, the Möbius
//! function and Euler's totient.

use crate::error::{Error, Result};
use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple. Panics on overflow.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .unwrap_or_else(|| panic!("lcm({a}, {b}) overflows u64"))
}

pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 5u64;
    let mut step = 2;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending. `divisors(0)` is empty.
pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Squarefree divisors `s` of `n` paired with `moebius(s)`.
pub fn squarefree_divisors(n: u64) -> Vec<(u64, i32)> {
    let mut out = vec![(1u64, 1i32)];
    for p in prime_factors(n) {
        let len = out.len();
        for i in 0..len {
            let (s, mu) = out[i];
            out.push((s * p, -mu));
        }
    }
    out
}

pub fn moebius(m: u64) -> Result<i32> {
    if m == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let mut mu = 1;
    for (_, e) in factorize(m) {
        if e > 1 {
            return Ok(0);
        }
        mu = -mu;
    }
    Ok(mu)
}

pub fn euler_phi(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidOrder(0));
    }
    Ok(phi(m))
}

pub(crate) fn phi(m: u64) -> u64 {
    factorize(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1))
}

/// Exponent of the prime `p` in `m` (`l(m, p)` in the graph conditions).
pub fn valuation(mut m: u64, p: u64) -> u32 {
    if m == 0 {
        return 0;
    }
    let mut l = 0;
    while m % p == 0 {
        m /= p;
        l += 1;
    }
    l
}

/// If `n = p^k` for a prime `p` and `k >= 1`, returns `p`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    let f = factorize(n);
    match f.as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
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

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1), Ok(1));
        assert_eq!(moebius(4), Ok(0));
        assert_eq!(moebius(30), Ok(-1));
        assert_eq!(moebius(6), Ok(1));
        assert_eq!(moebius(0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn euler_phi_matches_coprime_count() {
        for m in 1..=300u64 {
            let count = (1..=m).filter(|&k| gcd(k, m) == 1).count() as u64;
            assert_eq!(euler_phi(m).unwrap(), count, "m = {m}");
        }
        assert_eq!(euler_phi(1), Ok(1));
        assert_eq!(euler_phi(7), Ok(6));
        assert_eq!(euler_phi(12), Ok(4));
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn divisors_are_exhaustive() {
        for n in 1..=500u64 {
            let brute: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
            assert_eq!(divisors(n), brute);
        }
    }

    #[test]
    fn squarefree_divisors_carry_moebius() {
        for n in 1..=200u64 {
            for (s, mu) in squarefree_divisors(n) {
                assert_eq!(n % s, 0);
                assert_eq!(moebius(s).unwrap(), mu);
            }
        }
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..5000u64 {
            let brute = n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0);
            assert_eq!(is_prime(n), brute, "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_base(8), Some(2));
        assert_eq!(prime_power_base(49), Some(7));
        assert_eq!(prime_power_base(12), None);
        assert_eq!(prime_power_base(1), None);
        assert_eq!(valuation(48, 2), 4);
    }
}
