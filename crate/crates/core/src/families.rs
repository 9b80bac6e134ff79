//! Closed forms for standard families: cycle type, (generalized) chain
//! type, Thom–Sebastiani joins, the `D_k` curves and the join family
//! `D_{2^k q_1 + 1} ⊗ D_{2^k q_2 + 1}`.
//!
//! Every constructor checks its closed form against the general formulas in
//! [`crate::weight_systems`] and reports a mismatch as
//! [`Error::CrossCheck`].

use crate::arith::{checked_lcm, gcd};
use crate::cyclo_algebra::Divisor;
use crate::error::{Error, Result};
use crate::weight_systems::{divisor_d, WeightSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} = {x} does not fit in u64")))
}

fn checked_product(xs: impl IntoIterator<Item = u64>, what: &str) -> Result<u64> {
    xs.into_iter().try_fold(1u64, |acc, x| {
        acc.checked_mul(x)
            .ok_or_else(|| Error::Overflow(format!("{what} overflows u64")))
    })
}

/// `ρ(x_1, …, x_k) = x_1⋯x_k - x_2⋯x_k + … + (-1)^{k-1}x_k + (-1)^k`,
/// with `ρ() = 1`.
pub fn rho_seq(x: &[u64]) -> BigInt {
    // ρ(x_1, …, x_k) = x_1⋯x_k - ρ(x_2, …, x_k)
    let mut acc = BigInt::one();
    let mut prod = BigInt::one();
    for &xi in x.iter().rev() {
        prod *= big(xi);
        acc = &prod - acc;
    }
    acc
}

/// Exponents `a_1, …, a_n` of a cycle `x_1^{a_1}x_n + x_2^{a_2}x_1 + …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSpec {
    a: Vec<u64>,
}

impl CycleSpec {
    pub fn new(a: Vec<u64>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::DegenerateCycle("empty exponent list".into()));
        }
        if a.contains(&0) {
            return Err(Error::DegenerateCycle("exponents must be positive".into()));
        }
        let prod: BigInt = a.iter().map(|&x| big(x)).product();
        let d = if n % 2 == 0 { prod - 1 } else { prod + 1 };
        if d <= BigInt::zero() {
            return Err(Error::DegenerateCycle(format!(
                "product minus (-1)^n is {d}, not positive"
            )));
        }
        if n % 2 == 0 {
            // 1-based even positions are 0-based odd ones
            if a.iter().skip(1).step_by(2).all(|&x| x == 1) {
                return Err(Error::DegenerateCycle(
                    "all exponents at even positions equal 1".into(),
                ));
            }
            if a.iter().step_by(2).all(|&x| x == 1) {
                return Err(Error::DegenerateCycle(
                    "all exponents at odd positions equal 1".into(),
                ));
            }
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }
}

/// The integer weights `v_j = ρ(a_{j-1}, …, a_1, a_n, …, a_{j+1})` and
/// `d = ∏a_j - (-1)^n`, not reduced. Solves `a_j·w_j + w_{j-1} = 1`
/// cyclically, which is verified.
pub fn cycle_weights(spec: &CycleSpec) -> Result<WeightSystem> {
    let a = &spec.a;
    let n = a.len();
    let prod = checked_product(a.iter().copied(), "cycle degree")?;
    let d = if n % 2 == 0 { prod - 1 } else { prod + 1 };
    let mut v = Vec::with_capacity(n);
    for j in 0..n {
        let seq: Vec<u64> = (1..n).map(|i| a[(j + n - i) % n]).collect();
        v.push(to_u64(&rho_seq(&seq), "cycle weight")?);
    }
    for j in 0..n {
        let prev = v[(j + n - 1) % n];
        if (a[j] as u128) * (v[j] as u128) + prev as u128 != d as u128 {
            return Err(Error::CrossCheck(format!(
                "cycle equation fails at position {}: {}*{} + {} != {}",
                j + 1,
                a[j],
                v[j],
                prev,
                d
            )));
        }
    }
    WeightSystem::new(v, d).map_err(|e| Error::DegenerateCycle(e.to_string()))
}

/// `D_w = γ·Λ_{d/γ} + (-1)^n·Λ_1` with `γ = gcd(v_1, d)`.
pub fn cycle_divisor(spec: &CycleSpec) -> Result<Divisor> {
    let ws = cycle_weights(spec)?;
    let gamma = gcd(ws.v()[0], ws.d());
    if ws.v().iter().any(|&x| gcd(x, ws.d()) != gamma) {
        return Err(Error::CrossCheck("gcd(v_j, d) depends on j".into()));
    }
    let sign = if spec.a.len() % 2 == 0 { 1 } else { -1 };
    let closed = Divisor::from_chi_ints(&[(ws.d() / gamma, gamma as i64), (1, sign)]);
    let general = divisor_d(&ws);
    if closed != general {
        return Err(Error::CrossCheck(format!(
            "cycle closed form {closed} differs from product formula {general}"
        )));
    }
    let mu: BigInt = spec.a.iter().map(|&x| big(x)).product();
    if closed.degree() != BigRational::from_integer(mu) {
        return Err(Error::CrossCheck("cycle degree differs from ∏ a_j".into()));
    }
    Ok(closed)
}

/// Exponents of a chain `x_1^{a_1+1} + x_1x_2^{a_2} + … + x_{n-1}x_n^{a_n}`,
/// or of the generalized chain hanging off a seed weight `s_0/t_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    a: Vec<u64>,
    seed: Option<(u64, u64)>,
}

impl ChainSpec {
    /// The chain type: `w_0 = w_1 = 1/(a_1 + 1)`.
    pub fn chain(a: Vec<u64>) -> Result<Self> {
        Self::validate_exponents(&a)?;
        Ok(Self { a, seed: None })
    }

    /// The generalized chain `a_j·w_j + w_{j-1} = 1`, `w_0 = s_0/t_0`.
    pub fn with_seed(a: Vec<u64>, s0: u64, t0: u64) -> Result<Self> {
        Self::validate_exponents(&a)?;
        if s0 == 0 || s0 >= t0 || gcd(s0, t0) != 1 {
            return Err(Error::InvalidChain(format!(
                "seed {s0}/{t0} needs 0 < s_0 < t_0 and gcd(s_0, t_0) = 1"
            )));
        }
        Ok(Self {
            a,
            seed: Some((s0, t0)),
        })
    }

    fn validate_exponents(a: &[u64]) -> Result<()> {
        if a.is_empty() {
            return Err(Error::InvalidChain("empty exponent list".into()));
        }
        if a.contains(&0) {
            return Err(Error::InvalidChain("exponents must be positive".into()));
        }
        Ok(())
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn is_chain_form(&self) -> bool {
        self.seed.is_none()
    }

    /// `(s_0, t_0)`; `(1, a_1 + 1)` for the chain type.
    pub fn seed(&self) -> (u64, u64) {
        self.seed.unwrap_or((1, self.a[0] + 1))
    }
}

/// Everything the chain recursion produces. Vectors indexed by `j - 1`
/// hold the values for `j = 1, …, n`; `b` and `mu_seq` start at `j = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainData {
    pub weights: WeightSystem,
    pub seed: (u64, u64),
    pub s: Vec<u64>,
    pub t: Vec<u64>,
    pub beta: Vec<u64>,
    pub alpha: Vec<u64>,
    /// `b_0 = 1`, `b_k = (a_1 + 1)·a_2⋯a_k`; chain type only.
    pub b: Option<Vec<u64>>,
    /// `μ_0 = 1`, `μ_k = ρ(a_k, …, a_2, a_1 + 1)`; chain type only.
    pub mu_seq: Option<Vec<u64>>,
    pub divisor: Divisor,
}

impl ChainData {
    pub fn milnor(&self) -> BigRational {
        self.divisor.degree()
    }
}

fn cross(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::CrossCheck(msg()))
    }
}

pub fn chain_data(spec: &ChainSpec) -> Result<ChainData> {
    let a = &spec.a;
    let n = a.len();
    let (s0, t0) = spec.seed();
    let (mut s, mut t, mut beta, mut alpha) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    let (mut sp, mut tp) = (s0, t0);
    for &aj in a {
        let x = tp - sp;
        let bj = gcd(x, aj);
        let aj_red = aj / bj;
        sp = x / bj;
        tp = tp
            .checked_mul(aj_red)
            .ok_or_else(|| Error::Overflow("chain denominator overflows u64".into()))?;
        s.push(sp);
        t.push(tp);
        beta.push(bj);
        alpha.push(aj_red);
    }

    // s_j·β_j⋯β_1 = ρ(a_{j-1}, …, a_1)·t_0 + (-1)^j·s_0
    let mut beta_prod = BigInt::one();
    for j in 1..=n {
        beta_prod *= big(beta[j - 1]);
        let rev: Vec<u64> = a[..j - 1].iter().rev().copied().collect();
        let sign = if j % 2 == 0 { big(s0) } else { -big(s0) };
        let rhs = rho_seq(&rev) * big(t0) + sign;
        cross(big(s[j - 1]) * &beta_prod == rhs, || {
            format!("closed form for s_{j} fails")
        })?;
    }

    let d = t[n - 1];
    let v: Vec<u64> = (0..n).map(|j| s[j] * (d / t[j])).collect();
    let weights = WeightSystem::new(v, d)?;

    // (-1)^n Λ_1 + Σ_j (-1)^{n-j} β_j⋯β_1/(t_0 - s_0)·Λ_{t_j}
    let mut chi = vec![(1u64, BigRational::from_integer(BigInt::from(if n % 2 == 0 { 1 } else { -1 })))];
    let mut bp = BigInt::one();
    for j in 1..=n {
        bp *= big(beta[j - 1]);
        let c = BigRational::new(bp.clone(), big(t0 - s0));
        chi.push((t[j - 1], if (n - j) % 2 == 0 { c } else { -c }));
    }
    let divisor = Divisor::from_chi(chi);
    let general = divisor_d(&weights);
    cross(divisor == general, || {
        format!("chain closed form {divisor} differs from product formula {general}")
    })?;

    // ∏(1/w_j - 1) = (ρ(a_n, …, a_1) + (-1)^{n-1}·w_0)/(1 - w_0)
    let w0 = BigRational::new(big(s0), big(t0));
    let rev_all: Vec<u64> = a.iter().rev().copied().collect();
    let sign = if n % 2 == 1 { w0.clone() } else { -w0.clone() };
    let partial = (BigRational::from_integer(rho_seq(&rev_all)) + sign) / (BigRational::one() - w0);
    cross(partial == weights.milnor_product(), || {
        "partial Milnor number formula fails".into()
    })?;

    let (b, mu_seq) = if spec.is_chain_form() {
        let (b, mu) = chain_sequences(a)?;
        let mut bp = 1u64;
        for j in 1..=n {
            if j >= 2 {
                bp *= beta[j - 1];
            }
            cross(s[j - 1] * bp == mu[j - 1] && t[j - 1] * bp == b[j], || {
                format!("chain-type forms of s_{j}, t_{j} fail")
            })?;
            cross(mu[j] == b[j] - mu[j - 1], || format!("μ_{j} != b_{j} - μ_{}", j - 1))?;
        }
        cross(
            BigRational::from_integer(big(mu[n])) == weights.milnor_product(),
            || "μ_n differs from the Milnor number".into(),
        )?;
        (Some(b), Some(mu))
    } else {
        (None, None)
    };

    Ok(ChainData {
        weights,
        seed: (s0, t0),
        s,
        t,
        beta,
        alpha,
        b,
        mu_seq,
        divisor,
    })
}

/// `b_0..b_n` and `μ_0..μ_n` of the chain type.
fn chain_sequences(a: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    let n = a.len();
    let mut b = vec![1u64];
    let mut mu = vec![1u64];
    for k in 1..=n {
        let factor = if k == 1 { a[0] + 1 } else { a[k - 1] };
        b.push(
            b[k - 1]
                .checked_mul(factor)
                .ok_or_else(|| Error::Overflow("b_k overflows u64".into()))?,
        );
        let mut seq: Vec<u64> = a[1..k].iter().rev().copied().collect();
        seq.push(a[0] + 1);
        mu.push(to_u64(&rho_seq(&seq), "μ_k")?);
    }
    Ok((b, mu))
}

/// `Σ_{j=0}^n (-1)^{n-j}·Λ_{b_j}` for a chain.
pub fn orlik_randell_divisor(spec: &ChainSpec) -> Result<Divisor> {
    if !spec.is_chain_form() {
        return Err(Error::InvalidChain("needs the chain form w_0 = w_1".into()));
    }
    let (b, _) = chain_sequences(&spec.a)?;
    let n = spec.a.len();
    Ok(Divisor::from_chi(b.iter().enumerate().map(|(j, &bj)| {
        let c = if (n - j) % 2 == 0 { 1 } else { -1 };
        (bj, BigRational::from_integer(BigInt::from(c)))
    })))
}

/// Checks `D_w = Σ ⟨λ_i^μ⟩` where `Σ ⟨λ_i⟩ = Σ (-1)^{n-j}·Λ_{b_j}`: the
/// alternating divisor must have 0/1 multiplicities, `b_j/gcd(b_j, μ) = t_j`
/// for `j ≥ 1`, and its `μ`-th power map must equal `D_w`.
pub fn orlik_randell_check(spec: &ChainSpec) -> Result<bool> {
    let data = chain_data(spec)?;
    let lambda = orlik_randell_divisor(spec)?;
    let zero_one = lambda
        .psi_coeffs()
        .values()
        .all(|c| c.is_one() || c.is_zero());
    let b = data.b.as_ref().expect("chain form");
    let mu = *data.mu_seq.as_ref().expect("chain form").last().expect("n >= 1");
    let orders_match = (1..b.len()).all(|j| b[j] / gcd(b[j], mu) == data.t[j - 1]);
    let powered = lambda.power_map(mu);
    Ok(zero_one && orders_match && powered == data.divisor)
}

/// The join of two systems in disjoint variables over the common degree
/// `lcm(d_1, d_2)`; its divisor is checked to be the product of the
/// factors' divisors.
pub fn thom_sebastiani(ws1: &WeightSystem, ws2: &WeightSystem) -> Result<WeightSystem> {
    let d = checked_lcm(ws1.d(), ws2.d())
        .ok_or_else(|| Error::Overflow("common degree overflows u64".into()))?;
    let mut v: Vec<u64> = ws1.v().iter().map(|&x| x * (d / ws1.d())).collect();
    v.extend(ws2.v().iter().map(|&x| x * (d / ws2.d())));
    let joined = WeightSystem::new(v, d)?;
    let product = divisor_d(ws1).times(&divisor_d(ws2));
    let direct = divisor_d(&joined);
    cross(product == direct, || {
        format!("join divisor {direct} differs from product {product}")
    })?;
    Ok(joined)
}

/// The curve `D_{2q}` (`q ≥ 2`): weights `(1/(2q-1), (q-1)/(2q-1))`.
pub fn d_even(q: u64) -> Result<WeightSystem> {
    if q < 2 {
        return Err(Error::InvalidFamily(format!("D_{{2q}} needs q >= 2, got {q}")));
    }
    WeightSystem::from_normalized(&[(1, 2 * q - 1), (q - 1, 2 * q - 1)])
}

/// The curve `D_{2q+1}` (`q ≥ 1`): weights `(1/(2q), (2q-1)/(4q))`.
pub fn d_odd(q: u64) -> Result<WeightSystem> {
    if q < 1 {
        return Err(Error::InvalidFamily("D_{2q+1} needs q >= 1".into()));
    }
    WeightSystem::from_normalized(&[(1, 2 * q), (2 * q - 1, 4 * q)])
}

/// Validates the parameters of [`saito_family`].
pub fn check_saito_params(k: u32, q1: u64, q2: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidFamily("k must be at least 1".into()));
    }
    if q1 % 2 == 0 || q2 % 2 == 0 {
        return Err(Error::InvalidFamily(format!("q1 = {q1} and q2 = {q2} must be odd")));
    }
    let l = checked_lcm(q1, q2).ok_or_else(|| Error::Overflow("lcm(q1, q2)".into()))?;
    if l <= q1.max(q2) {
        return Err(Error::InvalidFamily(format!(
            "lcm({q1}, {q2}) = {l} must exceed max(q1, q2)"
        )));
    }
    Ok(())
}

/// `D_{2^k q_1 + 1} ⊗ D_{2^k q_2 + 1}` for odd `q_1, q_2` with
/// `lcm(q_1, q_2) > max(q_1, q_2)`.
pub fn saito_family(k: u32, q1: u64, q2: u64) -> Result<WeightSystem> {
    check_saito_params(k, q1, q2)?;
    let pow = 1u64
        .checked_shl(k - 1)
        .filter(|_| k < 63)
        .ok_or_else(|| Error::Overflow(format!("2^{k}")))?;
    let f1 = d_odd(pow.checked_mul(q1).ok_or_else(|| Error::Overflow("2^k q1".into()))?)?;
    let f2 = d_odd(pow.checked_mul(q2).ok_or_else(|| Error::Overflow("2^k q2".into()))?)?;
    thom_sebastiani(&f1, &f2)
}

/// Milnor number `(2^k q_1 + 1)(2^k q_2 + 1)` of a family member.
pub fn saito_milnor(k: u32, q1: u64, q2: u64) -> Option<u64> {
    let pow = 1u64.checked_shl(k).filter(|_| k < 63)?;
    let m1 = pow.checked_mul(q1)?.checked_add(1)?;
    let m2 = pow.checked_mul(q2)?.checked_add(1)?;
    m1.checked_mul(m2)
}

/// All parameter triples `(k, q_1, q_2)` with `q_1 < q_2` and Milnor
/// number at most `mu_max`, ordered by `(k, q_1, q_2)`.
pub fn saito_members(mu_max: u64) -> Vec<(u32, u64, u64)> {
    let mut out = Vec::new();
    let mut k = 1u32;
    // the smallest member for a given k has (q_1, q_2) = (3, 5)
    while saito_milnor(k, 3, 5).is_some_and(|m| m <= mu_max) {
        let mut q1 = 3u64;
        while saito_milnor(k, q1, q1 + 2).is_some_and(|m| m <= mu_max) {
            let mut q2 = q1 + 2;
            while saito_milnor(k, q1, q2).is_some_and(|m| m <= mu_max) {
                if check_saito_params(k, q1, q2).is_ok() {
                    out.push((k, q1, q2));
                }
                q2 += 2;
            }
            q1 += 2;
        }
        k += 1;
    }
    out
}

/// The Fermat system `x_1^{t_1} + … + x_n^{t_n}`, weights `1/t_j`.
pub fn fermat(t: &[u64]) -> Result<WeightSystem> {
    if t.iter().any(|&x| x < 2) {
        return Err(Error::InvalidFamily("Fermat exponents must be at least 2".into()));
    }
    let w: Vec<(u64, u64)> = t.iter().map(|&x| (1, x)).collect();
    WeightSystem::from_normalized(&w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_seq_values() {
        assert_eq!(rho_seq(&[]), big(1));
        assert_eq!(rho_seq(&[7]), big(6));
        assert_eq!(rho_seq(&[2, 3]), big(4));
    }

    #[test]
    fn small_cycles() {
        let ws = cycle_weights(&CycleSpec::new(vec![2, 3]).unwrap()).unwrap();
        assert_eq!(ws.to_string(), "2,1:5");
        let spec = CycleSpec::new(vec![2, 2, 2]).unwrap();
        assert_eq!(cycle_weights(&spec).unwrap().to_string(), "3,3,3:9");
        assert_eq!(
            cycle_divisor(&spec).unwrap(),
            Divisor::from_chi_ints(&[(3, 3), (1, -1)])
        );
        assert!(matches!(CycleSpec::new(vec![1, 1]), Err(Error::DegenerateCycle(_))));
        assert!(CycleSpec::new(vec![1, 5]).is_err());
    }

    #[test]
    fn small_chains() {
        let data = chain_data(&ChainSpec::chain(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(data.t, vec![3, 3]);
        assert_eq!(data.b, Some(vec![1, 3, 6]));
        assert_eq!(data.mu_seq, Some(vec![1, 2, 4]));
        assert_eq!(data.weights.reduce().to_string(), "1,1:3");
        let a = chain_data(&ChainSpec::chain(vec![4]).unwrap()).unwrap();
        assert_eq!(a.divisor, Divisor::from_chi_ints(&[(5, 1), (1, -1)]));
        assert!(ChainSpec::with_seed(vec![2], 2, 4).is_err());
        assert!(chain_data(&ChainSpec::with_seed(vec![2, 3], 2, 5).unwrap()).is_ok());
    }

    #[test]
    fn orlik_randell_small() {
        assert!(orlik_randell_check(&ChainSpec::chain(vec![3]).unwrap()).unwrap());
        assert!(orlik_randell_check(&ChainSpec::chain(vec![2, 2]).unwrap()).unwrap());
        assert!(orlik_randell_check(&ChainSpec::chain(vec![3, 2, 4]).unwrap()).unwrap());
    }

    #[test]
    fn curves_and_joins() {
        assert_eq!(divisor_d(&d_even(2).unwrap()), Divisor::from_chi_ints(&[(3, 1), (1, 1)]));
        let ws = saito_family(1, 3, 5).unwrap();
        assert_eq!(ws.reduce().to_string(), "10,25,6,27:60");
        assert!(saito_family(1, 3, 3).is_err());
        assert!(saito_family(1, 3, 9).is_err());
        assert!(saito_family(1, 2, 5).is_err());
    }
}
