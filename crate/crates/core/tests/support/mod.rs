//! Reference implementations used as oracles by the integration tests.
//! They share no code with the library beyond its public types.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use qhsing::{Divisor, IntPolynomial};
use std::collections::BTreeMap;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn moebius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `target ∈ ℕ₀·g_1 + … + ℕ₀·g_r` by a boolean table.
pub fn semigroup_dp(target: u64, gens: &[u64]) -> bool {
    let t = target as usize;
    let mut reach = vec![false; t + 1];
    reach[0] = true;
    for i in 1..=t {
        reach[i] = gens.iter().any(|&g| g as usize <= i && reach[i - g as usize]);
    }
    reach[t]
}

/// (C1) straight from the definition: for every nonempty `J`, `d` lies in
/// the semigroup of `v_J`, or at least `|J|` indices `k ∉ J` have
/// `d - v_k` in it.
pub fn c1_brute(v: &[u64], d: u64) -> bool {
    let n = v.len();
    (1u32..1 << n).all(|mask| {
        let gens: Vec<u64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect();
        if semigroup_dp(d, &gens) {
            return true;
        }
        let hits = (0..n)
            .filter(|i| mask >> i & 1 == 0)
            .filter(|&k| semigroup_dp(d - v[k], &gens))
            .count();
        hits >= gens.len()
    })
}

/// The integer version: semigroups replaced by the lattices `gcd(v_J)·ℤ`.
pub fn c1_bar_brute(v: &[u64], d: u64) -> bool {
    let n = v.len();
    (1u32..1 << n).all(|mask| {
        let g = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(0, |g, i| gcd(g, v[i]));
        if d % g == 0 {
            return true;
        }
        let hits = (0..n)
            .filter(|i| mask >> i & 1 == 0)
            .filter(|&k| (d - v[k]) % g == 0)
            .count();
        hits >= mask.count_ones() as usize
    })
}

pub fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial; panics on a remainder.
fn poly_div(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i128; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db];
        q[i] = c;
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= c * y;
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "inexact division");
    q
}

/// `Φ_m` from `t^m - 1 = ∏_{e | m} Φ_e`.
pub fn cyclotomic(m: u64) -> Vec<i128> {
    let mut p = vec![0i128; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for e in divisors(m).into_iter().filter(|&e| e < m) {
        p = poly_div(&p, &cyclotomic(e));
    }
    p
}

/// `∏ Φ_m^{ν(m)}` for `ν ≥ 0`.
pub fn poly_from_nu(nu: &BTreeMap<u64, u64>) -> Vec<i128> {
    let mut out = vec![1i128];
    for (&m, &c) in nu {
        let f = cyclotomic(m);
        for _ in 0..c {
            out = poly_mul(&out, &f);
        }
    }
    out
}

pub fn int_poly_to_i128(p: &IntPolynomial) -> Vec<i128> {
    p.coeffs().iter().map(|c| c.to_i128().expect("small coefficient")).collect()
}

/// Roots of unity `e^{2πi·a/m}` as reduced `(a, m)` with multiplicities.
pub type Roots = BTreeMap<(u64, u64), u64>;

pub fn roots_of(nu: &BTreeMap<u64, u64>) -> Roots {
    let mut out = Roots::new();
    for (&m, &c) in nu {
        for a in (0..m).filter(|&a| gcd(a, m) == 1) {
            *out.entry((a, m)).or_default() += c;
        }
    }
    out
}

fn reduce_frac(a: u64, m: u64) -> (u64, u64) {
    let g = gcd(a, m);
    (a / g, m / g)
}

/// Eigenvalues of `A ⊗ B`: all pairwise products.
pub fn tensor_roots(a: &Roots, b: &Roots) -> Roots {
    let mut out = Roots::new();
    for (&(x, m), &c) in a {
        for (&(y, n), &e) in b {
            let l = m / gcd(m, n) * n;
            let s = (x * (l / m) + y * (l / n)) % l;
            *out.entry(reduce_frac(s, l)).or_default() += c * e;
        }
    }
    out
}

/// Back from roots to `ν`; panics if some order is not a whole orbit.
pub fn nu_of_roots(roots: &Roots) -> BTreeMap<u64, u64> {
    let mut by_order: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (&(_, m), &c) in roots {
        by_order.entry(m).or_default().push(c);
    }
    by_order
        .into_iter()
        .map(|(m, counts)| {
            assert_eq!(counts.len() as u64, phi(m), "orbit of order {m} incomplete");
            assert!(counts.windows(2).all(|w| w[0] == w[1]));
            (m, counts[0])
        })
        .collect()
}

/// Ramanujan sum `Σ_{gcd(a,m)=1} e^{2πi·ka/m}`.
pub fn ramanujan(m: u64, k: u64) -> i64 {
    let g = gcd(m, k);
    let q = m / g;
    moebius(q) * phi(m) as i64 / phi(q) as i64
}

/// `L(k) = Σ_m ν(m)·c_m(k)`, the trace of the `k`-th power.
pub fn lefschetz_from_nu(nu: &BTreeMap<u64, i64>, k: u64) -> i64 {
    nu.iter().map(|(&m, &c)| c * ramanujan(m, k)).sum()
}

/// `χ(n) = Σ_{n | m} ν(m)·μ(m/n)`.
pub fn chi_from_nu(nu: &BTreeMap<u64, i64>) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    for (&m, &c) in nu {
        for n in divisors(m) {
            *out.entry(n).or_default() += c * moebius(m / n);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn nu_ints(d: &Divisor) -> BTreeMap<u64, i64> {
    d.psi_coeffs()
        .iter()
        .map(|(&m, c)| {
            assert!(c.is_integer());
            (m, c.to_integer().to_i64().expect("small"))
        })
        .collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `ρ(t) = ∏ (t^d - t^{v_j}) / (t^{v_j} - 1)` evaluated at an integer.
pub fn rho_at(v: &[u64], d: u64, t: i64) -> BigRational {
    let t = BigInt::from(t);
    let pow = |e: u64| num_traits::pow(t.clone(), e as usize);
    v.iter().fold(BigRational::one(), |acc, &vj| {
        acc * BigRational::new(pow(d) - pow(vj), pow(vj) - BigInt::one())
    })
}

pub fn eval_poly(p: &IntPolynomial, t: i64) -> BigRational {
    let t = BigInt::from(t);
    let mut acc = BigInt::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc * &t + c;
    }
    BigRational::from_integer(acc)
}
