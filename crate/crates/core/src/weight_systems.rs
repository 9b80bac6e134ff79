//! Integer weight systems `(v_1, …, v_n; d)` and their invariants: the
//! solvability conditions (C1), (C1)', (C2) with their ℤ-versions, the
//! divisor `D_w` of the monodromy, the exponent generating polynomial `ρ`,
//! Lefschetz numbers, `d_w` and `d_mon`.
//!
//! Variable indices are 0-based throughout the API.

use crate::arith::{gcd, lcm};
use crate::cyclo_algebra::Divisor;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Largest `n` for which the subset conditions are enumerated.
pub const SUBSET_LIMIT: usize = 20;

/// At most this many failing subsets are kept per condition.
pub const WITNESS_LIMIT: usize = 32;

/// An integer weight system with `0 < v_i < d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem {
    v: Vec<u64>,
    d: u64,
}

impl WeightSystem {
    pub fn new(v: Vec<u64>, d: u64) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidWeightSystem("no variables".into()));
        }
        if let Some(&bad) = v.iter().find(|&&x| x == 0 || x >= d) {
            return Err(Error::InvalidWeightSystem(format!(
                "weight {bad} is not in the range 0 < v < d = {d}"
            )));
        }
        if d > u32::MAX as u64 {
            return Err(Error::Overflow(format!("degree {d} exceeds 2^32 - 1")));
        }
        Ok(Self { v, d })
    }

    /// From normalized weights `w_j = s_j/t_j` with `0 < w_j < 1`; the
    /// result is reduced.
    pub fn from_normalized(w: &[(u64, u64)]) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidWeightSystem("no variables".into()));
        }
        let mut d = 1u64;
        for &(s, t) in w {
            if t == 0 || s == 0 || s >= t {
                return Err(Error::InvalidWeightSystem(format!(
                    "weight {s}/{t} is not in the open interval (0, 1)"
                )));
            }
            let g = gcd(s, t);
            d = crate::arith::checked_lcm(d, t / g)
                .ok_or_else(|| Error::Overflow("common denominator".into()))?;
        }
        let v = w
            .iter()
            .map(|&(s, t)| {
                let g = gcd(s, t);
                (s / g) * (d / (t / g))
            })
            .collect();
        Self::new(v, d).map(|ws| ws.reduce())
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn v(&self) -> &[u64] {
        &self.v
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Divides all entries by `gcd(v_1, …, v_n, d)`.
    pub fn reduce(&self) -> Self {
        let g = self.v.iter().fold(self.d, |acc, &x| gcd(acc, x));
        Self {
            v: self.v.iter().map(|x| x / g).collect(),
            d: self.d / g,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.v.iter().fold(self.d, |acc, &x| gcd(acc, x)) == 1
    }

    /// `w_j = v_j / d` in lowest terms.
    pub fn normalize(&self) -> Vec<BigRational> {
        self.v
            .iter()
            .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(self.d)))
            .collect()
    }

    /// Pairs `(s_j, t_j)` with `s_j/t_j = v_j/d` and `gcd(s_j, t_j) = 1`.
    pub fn st_pairs(&self) -> Vec<(u64, u64)> {
        self.v
            .iter()
            .map(|&x| {
                let g = gcd(x, self.d);
                (x / g, self.d / g)
            })
            .collect()
    }

    /// `d_w = lcm(t_j)`.
    pub fn dw(&self) -> u64 {
        self.st_pairs().iter().fold(1, |acc, &(_, t)| lcm(acc, t))
    }

    /// `M(k) = {j : t_j | k}`.
    pub fn m_of_k(&self, k: u64) -> Vec<usize> {
        self.st_pairs()
            .iter()
            .enumerate()
            .filter(|(_, &(_, t))| k % t == 0)
            .map(|(j, _)| j)
            .collect()
    }

    /// `μ(k) = ∏_{j ∈ M(k)} (d - v_j)/v_j`.
    pub fn mu_of_k(&self, k: u64) -> BigRational {
        self.m_of_k(k).into_iter().map(|j| self.factor(j)).product()
    }

    fn factor(&self, j: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.d - self.v[j]),
            BigInt::from(self.v[j]),
        )
    }

    /// `∏ (d - v_j)/v_j`, the Milnor number when the system has (C2).
    pub fn milnor_product(&self) -> BigRational {
        (0..self.n()).map(|j| self.factor(j)).product()
    }

    /// Every `w_j < 1/2`.
    pub fn all_weights_below_half(&self) -> bool {
        self.v.iter().all(|&x| 2 * x < self.d)
    }

    /// Weights sorted ascending, so permuted systems share a key.
    pub fn sorted(&self) -> Self {
        let mut v = self.v.clone();
        v.sort_unstable();
        Self { v, d: self.d }
    }

    /// `v1,...,vn:d` with `v` sorted ascending.
    pub fn canonical_key(&self) -> String {
        self.sorted().to_string()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(u64::to_string).collect();
        write!(f, "{}:{}", v.join(","), self.d)
    }
}

impl FromStr for WeightSystem {
    type Err = Error;

    /// Accepts `v1,...,vn:d` or normalized `s1/t1,...,sn/tn`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let token_err = |tok: &str, reason: &str| Error::Parse {
            token: tok.to_string(),
            reason: reason.to_string(),
        };
        let parse_u64 = |tok: &str| -> Result<u64> {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| token_err(tok.trim(), "expected a positive integer"))
        };
        if let Some((vs, d)) = s.split_once(':') {
            let d = parse_u64(d)?;
            let v = vs.split(',').map(parse_u64).collect::<Result<Vec<_>>>()?;
            Self::new(v, d)
        } else if s.contains('/') {
            let w = s
                .split(',')
                .map(|tok| {
                    let (a, b) = tok
                        .split_once('/')
                        .ok_or_else(|| token_err(tok.trim(), "expected s/t"))?;
                    Ok((parse_u64(a)?, parse_u64(b)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Self::from_normalized(&w)
        } else {
            Err(token_err(s, "expected `v1,...,vn:d` or `s1/t1,...,sn/tn`"))
        }
    }
}

impl Serialize for WeightSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn reduce(ws: &WeightSystem) -> WeightSystem {
    ws.reduce()
}

pub fn normalize(ws: &WeightSystem) -> Vec<BigRational> {
    ws.normalize()
}

pub fn st_pairs(ws: &WeightSystem) -> Vec<(u64, u64)> {
    ws.st_pairs()
}

pub fn dw(ws: &WeightSystem) -> u64 {
    ws.dw()
}

pub fn m_of_k(ws: &WeightSystem, k: u64) -> Vec<usize> {
    ws.m_of_k(k)
}

pub fn mu_of_k(ws: &WeightSystem, k: u64) -> BigRational {
    ws.mu_of_k(k)
}

/// `L(k) = (-1)^{n - |M(k)|}·μ(k)`.
pub fn lefschetz_ws(ws: &WeightSystem, k: u64) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let m = ws.m_of_k(k);
    let mu = ws.mu_of_k(k);
    Ok(if (ws.n() - m.len()) % 2 == 0 { mu } else { -mu })
}

/// Membership test for the numerical semigroup `Σ ℕ₀·g`.
///
/// Keeps, for each residue modulo the smallest generator, the least
/// representable number in that class (round-robin shortest paths), so the
/// cost is `O(min(g)·|g|)` independent of the target.
#[derive(Debug, Clone)]
pub struct Semigroup {
    modulus: u64,
    least: Vec<u128>,
}

impl Semigroup {
    /// Panics on an empty or zero generator list.
    pub fn new(generators: &[u64]) -> Self {
        let a = *generators.iter().min().expect("generators nonempty");
        assert!(a > 0, "generators are positive");
        let mut least = vec![u128::MAX; a as usize];
        least[0] = 0;
        let mut seen = Vec::new();
        for &g in generators {
            let step = g % a;
            if step == 0 || seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let p = gcd(a, step);
            let cycle = a / p;
            for r in 0..p {
                // start each residue cycle at its current minimum
                let mut start = r;
                let mut best = least[r as usize];
                let mut idx = r;
                for _ in 1..cycle {
                    idx = (idx + step) % a;
                    if least[idx as usize] < best {
                        best = least[idx as usize];
                        start = idx;
                    }
                }
                if best == u128::MAX {
                    continue;
                }
                let mut cur = best;
                let mut idx = start;
                for _ in 1..cycle {
                    idx = (idx + step) % a;
                    cur += g as u128;
                    let slot = &mut least[idx as usize];
                    if *slot < cur {
                        cur = *slot;
                    } else {
                        *slot = cur;
                    }
                }
            }
        }
        Self { modulus: a, least }
    }

    pub fn contains(&self, target: u64) -> bool {
        self.least[(target % self.modulus) as usize] <= target as u128
    }
}

/// `target ∈ Σ_{g} ℕ₀·g`. Zero is always a member.
pub fn semigroup_member(target: u64, generators: &[u64]) -> bool {
    Semigroup::new(generators).contains(target)
}

/// Which condition a failing subset violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionKind {
    C1,
    C2,
    #[serde(rename = "C1bar")]
    C1Bar,
    #[serde(rename = "C2bar")]
    C2Bar,
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::C1 => "C1",
            Self::C2 => "C2",
            Self::C1Bar => "C1bar",
            Self::C2Bar => "C2bar",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionFailure {
    pub condition: ConditionKind,
    /// 0-based variable indices of `J`.
    pub subset: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub c1: bool,
    pub c1_prime: bool,
    pub c2: bool,
    pub c1_bar: bool,
    pub c1_prime_bar: bool,
    pub c2_bar: bool,
    pub witness_failures: Vec<ConditionFailure>,
}

impl ConditionReport {
    pub fn failures(&self, kind: ConditionKind) -> impl Iterator<Item = &ConditionFailure> {
        self.witness_failures
            .iter()
            .filter(move |f| f.condition == kind)
    }
}

fn subset_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| mask & (1 << j) != 0).collect()
}

/// Result of the four clause evaluations for a single subset `J`.
struct SubsetVerdict {
    c1: bool,
    c2: bool,
    c1_bar: bool,
    c2_bar: bool,
    detail_n0: String,
    detail_z: String,
}

fn evaluate_subset(ws: &WeightSystem, mask: u32) -> SubsetVerdict {
    let n = ws.n();
    let d = ws.d;
    let j_idx = subset_indices(mask, n);
    let size = j_idx.len();
    let gens: Vec<u64> = j_idx.iter().map(|&j| ws.v[j]).collect();
    let sg = Semigroup::new(&gens);
    let g = gens.iter().fold(0, |acc, &x| gcd(acc, x));

    let d_in = sg.contains(d);
    let compat: Vec<usize> = (0..n).filter(|&k| sg.contains(d - ws.v[k])).collect();
    let compat_outside = compat.iter().filter(|&&k| mask & (1 << k) == 0).count();
    let d_in_z = d % g == 0;
    let compat_z: Vec<usize> = (0..n).filter(|&k| (d - ws.v[k]) % g == 0).collect();
    let compat_z_outside = compat_z.iter().filter(|&&k| mask & (1 << k) == 0).count();

    SubsetVerdict {
        c1: d_in || compat_outside >= size,
        c2: compat.len() >= size,
        c1_bar: d_in_z || compat_z_outside >= size,
        c2_bar: compat_z.len() >= size,
        detail_n0: format!(
            "d = {d} {} SG; {} of {} indices k have d - v_k in SG ({} outside J); need {size}",
            if d_in { "in" } else { "not in" },
            compat.len(),
            n,
            compat_outside
        ),
        detail_z: format!(
            "gcd over J = {g}; {} of {} numbers d - v_k divisible ({} outside J); need {size}",
            compat_z.len(),
            n,
            compat_z_outside
        ),
    }
}

/// Evaluates (C1), (C1)', (C2) and their ℤ-versions by enumerating all
/// nonempty subsets `J`.
pub fn check_conditions(ws: &WeightSystem) -> Result<ConditionReport> {
    let n = ws.n();
    if n > SUBSET_LIMIT {
        return Err(Error::InstanceTooLarge {
            n,
            limit: SUBSET_LIMIT,
        });
    }
    let mut report = ConditionReport {
        c1: true,
        c1_prime: true,
        c2: true,
        c1_bar: true,
        c1_prime_bar: true,
        c2_bar: true,
        witness_failures: Vec::new(),
    };
    let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
    let mut push = |report: &mut ConditionReport, kind: ConditionKind, mask: u32, detail: &str| {
        let c = counts.entry(kind as u8).or_default();
        if *c < WITNESS_LIMIT {
            report.witness_failures.push(ConditionFailure {
                condition: kind,
                subset: subset_indices(mask, n),
                detail: detail.to_string(),
            });
        }
        *c += 1;
    };
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        let small = 2 * size <= n + 1;
        let v = evaluate_subset(ws, mask);
        if !v.c1 {
            report.c1 = false;
            report.c1_prime &= !small;
            push(&mut report, ConditionKind::C1, mask, &v.detail_n0);
        }
        if !v.c2 {
            report.c2 = false;
            push(&mut report, ConditionKind::C2, mask, &v.detail_n0);
        }
        if !v.c1_bar {
            report.c1_bar = false;
            report.c1_prime_bar &= !small;
            push(&mut report, ConditionKind::C1Bar, mask, &v.detail_z);
        }
        if !v.c2_bar {
            report.c2_bar = false;
            push(&mut report, ConditionKind::C2Bar, mask, &v.detail_z);
        }
    }
    Ok(report)
}

/// (C1) restricted to single-variable subsets, a cheap necessary test.
pub fn singleton_c1(ws: &WeightSystem) -> bool {
    let n = ws.n();
    (0..n).all(|j| {
        let vj = ws.v[j];
        ws.d % vj == 0 || (0..n).any(|k| k != j && (ws.d - ws.v[k]) % vj == 0)
    })
}

/// `ρ = t^{Σ v_j}·∏ (t^{d - v_j} - 1)/(t^{v_j} - 1)`, or
/// [`Error::RhoNotPolynomial`] when the quotient leaves a remainder.
pub fn rho_poly(ws: &WeightSystem) -> Result<IntPolynomial> {
    let mut num = IntPolynomial::one();
    for &x in &ws.v {
        num.mul_binomial_assign((ws.d - x) as usize);
    }
    // A quotient by a product is polynomial iff every successive quotient
    // is, so the divisors can be taken off one at a time.
    let mut current = num;
    for (i, &x) in ws.v.iter().enumerate() {
        match current.div_binomial(x as usize) {
            Some(q) => current = q,
            None => {
                let mut rest = IntPolynomial::one();
                for &y in &ws.v[i..] {
                    rest.mul_binomial_assign(y as usize);
                }
                let (_, r) = current.div_rem_monic(&rest);
                return Err(Error::RhoNotPolynomial {
                    remainder_degree: r.degree().unwrap_or(0),
                });
            }
        }
    }
    let shift: u64 = ws.v.iter().sum();
    Ok(current.shift(shift as usize))
}

/// The exponents encoded by `ρ`: `σ(α)` is the coefficient of `t^{d·α}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub d: u64,
    pub sigma: BTreeMap<BigRational, BigInt>,
    pub milnor: BigInt,
}

impl SpectrumReport {
    /// All multiplicities are nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.sigma.values().all(|c| !c.is_negative())
    }

    /// The exponent multiset, ascending; `None` if some multiplicity is
    /// negative.
    pub fn exponents(&self) -> Option<Vec<BigRational>> {
        if !self.is_nonnegative() {
            return None;
        }
        let mut out = Vec::new();
        for (alpha, c) in &self.sigma {
            let times: usize = c.try_into().ok()?;
            out.extend(std::iter::repeat_n(alpha.clone(), times));
        }
        Some(out)
    }
}

pub fn spectrum(ws: &WeightSystem) -> Result<SpectrumReport> {
    let rho = rho_poly(ws)?;
    let d = BigInt::from(ws.d);
    let mut sigma = BTreeMap::new();
    for (i, c) in rho.coeffs().iter().enumerate() {
        if !c.is_zero() {
            sigma.insert(BigRational::new(BigInt::from(i), d.clone()), c.clone());
        }
    }
    Ok(SpectrumReport {
        d: ws.d,
        sigma,
        milnor: rho.eval_at_one(),
    })
}

/// `D_w = ∏ (1/s_j·Λ_{t_j} - Λ_1)`.
pub fn divisor_d(ws: &WeightSystem) -> Divisor {
    let factors: Vec<Divisor> = ws
        .st_pairs()
        .into_iter()
        .map(|(s, t)| {
            Divisor::from_chi([
                (t, BigRational::new(BigInt::one(), BigInt::from(s))),
                (1, -BigRational::one()),
            ])
        })
        .collect();
    Divisor::product(factors.iter())
}

/// The divisor `Σ_j ⟨e^{2πiα_j}⟩` read off the spectrum, provided the
/// multiplicities fill whole Galois orbits.
///
/// Returns `None` if some order `m` has unequal counts over its
/// primitive residues.
pub fn spectrum_divisor(spec: &SpectrumReport) -> Option<Divisor> {
    let mut by_order: BTreeMap<u64, BTreeMap<u64, BigInt>> = BTreeMap::new();
    for (alpha, c) in &spec.sigma {
        let den: u64 = alpha.denom().try_into().ok()?;
        let num: u64 = alpha.numer().try_into().ok()?;
        *by_order.entry(den).or_default().entry(num % den).or_default() += c;
    }
    let mut psi = Vec::new();
    for (m, residues) in by_order {
        let residues: BTreeMap<u64, BigInt> =
            residues.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if residues.is_empty() {
            continue;
        }
        let primitive = (0..m).filter(|&a| gcd(a, m) == 1);
        let mut count: Option<BigInt> = None;
        for a in primitive {
            let c = residues.get(&a).cloned().unwrap_or_default();
            match &count {
                None => count = Some(c),
                Some(prev) if *prev != c => return None,
                Some(_) => {}
            }
        }
        psi.push((m, BigRational::from_integer(count.unwrap_or_default())));
    }
    Some(Divisor::from_psi(psi))
}

/// Whether the spectrum yields exactly `D_w`, orbit by orbit.
pub fn verify_spectrum_divisor_match(ws: &WeightSystem) -> Result<bool> {
    let spec = spectrum(ws)?;
    Ok(spectrum_divisor(&spec).is_some_and(|d| d == divisor_d(ws)))
}

/// `d_mon = lcm{m : ν(m) > 0}` for a `D_w` with nonnegative integer `ν`.
pub fn d_mon(ws: &WeightSystem) -> Result<u64> {
    d_mon_of(&divisor_d(ws))
}

pub fn d_mon_of(div: &Divisor) -> Result<u64> {
    for (&m, c) in div.psi_coeffs() {
        if !c.is_integer() || c.is_negative() {
            return Err(Error::NotCharacteristicPolynomial {
                order: m,
                coeff: c.to_string(),
            });
        }
    }
    Ok(div.d_m())
}
