//! Exact arithmetic in the group ring of unit roots.
//!
//! A [`Divisor`] is a rational combination of Galois orbits of roots of
//! unity. It is stored in the Ψ-basis, where `Ψ_m` is the divisor of the
//! `m`-th cyclotomic polynomial `Φ_m`. Two further encodings are derived on
//! demand and related to the Ψ-basis by Möbius inversion:
//!
//! * the Λ-basis, `Λ_n = divis(t^n - 1) = Σ_{m | n} Ψ_m`, with coefficients
//!   `χ(n)` so that `ν(m) = Σ_{m | n} χ(n)`;
//! * Lefschetz numbers `L(k) = Σ_{m | k} m·χ(m)`, the power sums of the
//!   roots.
//!
//! Multiplication is the group-ring product `⟨ζ⟩·⟨η⟩ = ⟨ζη⟩`; on the Λ-basis
//! it is `Λ_a·Λ_b = gcd(a, b)·Λ_{lcm(a, b)}`. For divisors of polynomials it
//! realizes the tensor product `f ⊗ g` whose roots are all products of a
//! root of `f` with a root of `g`.

use crate::arith::{self, divisors, gcd, lcm, squarefree_divisors};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

pub use crate::arith::{euler_phi, moebius};

/// Sparse coefficient map `order -> rational`.
pub type CoeffMap = BTreeMap<u64, BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn add_into(map: &mut CoeffMap, key: u64, value: BigRational) {
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `ν -> χ`: `χ(n) = Σ_{n | m} ν(m)·μ(m/n)`.
fn psi_to_chi(psi: &CoeffMap) -> CoeffMap {
    let mut chi = CoeffMap::new();
    for (&m, nu) in psi {
        for (s, mu) in squarefree_divisors(m) {
            let term = if mu > 0 { nu.clone() } else { -nu.clone() };
            add_into(&mut chi, m / s, term);
        }
    }
    chi
}

/// `χ -> ν`: `ν(m) = Σ_{m | n} χ(n)`.
fn chi_to_psi(chi: &CoeffMap) -> CoeffMap {
    let mut psi = CoeffMap::new();
    for (&n, c) in chi {
        for m in divisors(n) {
            add_into(&mut psi, m, c.clone());
        }
    }
    psi
}

fn chi_product(a: &CoeffMap, b: &CoeffMap) -> CoeffMap {
    let mut out = CoeffMap::new();
    for (&x, cx) in a {
        for (&y, cy) in b {
            let g = gcd(x, y);
            add_into(&mut out, lcm(x, y), cx * cy * rat(g as i64));
        }
    }
    out
}

/// An element of `ℚ⟨S^UR⟩` spanned by the `Λ_m`, i.e. every divisor of a
/// product of cyclotomic polynomials together with its rational
/// combinations.
#[derive(Default)]
pub struct Divisor {
    psi: CoeffMap,
    chi: OnceLock<CoeffMap>,
}

impl Clone for Divisor {
    fn clone(&self) -> Self {
        Self {
            psi: self.psi.clone(),
            chi: self.chi.clone(),
        }
    }
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        self.psi == other.psi
    }
}

impl Eq for Divisor {}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Divisor({self})")
    }
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit element `⟨1⟩ = Λ_1 = Ψ_1`.
    pub fn one() -> Self {
        Self::psi(1)
    }

    /// `Ψ_n = divis Φ_n`. Panics if `n == 0`.
    pub fn psi(n: u64) -> Self {
        assert!(n > 0, "orders are positive");
        Self::from_psi([(n, rat(1))])
    }

    /// `Λ_n = divis(t^n - 1)`. Panics if `n == 0`.
    pub fn lambda(n: u64) -> Self {
        assert!(n > 0, "orders are positive");
        Self::from_chi([(n, rat(1))])
    }

    /// `E_n = Λ_n / n`, an idempotent.
    pub fn e(n: u64) -> Self {
        assert!(n > 0, "orders are positive");
        Self::from_chi([(n, BigRational::new(BigInt::one(), BigInt::from(n)))])
    }

    /// Builds from Ψ-basis multiplicities; repeated orders accumulate.
    pub fn from_psi(entries: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut psi = CoeffMap::new();
        for (m, c) in entries {
            assert!(m > 0, "orders are positive");
            add_into(&mut psi, m, c);
        }
        Self {
            psi,
            chi: OnceLock::new(),
        }
    }

    /// Builds from Λ-basis coefficients χ; repeated orders accumulate.
    pub fn from_chi(entries: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut chi = CoeffMap::new();
        for (n, c) in entries {
            assert!(n > 0, "orders are positive");
            add_into(&mut chi, n, c);
        }
        let psi = chi_to_psi(&chi);
        Self {
            psi,
            chi: OnceLock::from(chi),
        }
    }

    pub fn from_psi_ints(entries: &[(u64, i64)]) -> Self {
        Self::from_psi(entries.iter().map(|&(m, c)| (m, rat(c))))
    }

    pub fn from_chi_ints(entries: &[(u64, i64)]) -> Self {
        Self::from_chi(entries.iter().map(|&(m, c)| (m, rat(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.psi.is_empty()
    }

    /// Ψ-basis multiplicities ν (zero entries are never stored).
    pub fn psi_coeffs(&self) -> &CoeffMap {
        &self.psi
    }

    /// Λ-basis coefficients χ, computed once per value.
    pub fn chi(&self) -> &CoeffMap {
        self.chi.get_or_init(|| psi_to_chi(&self.psi))
    }

    pub fn nu(&self, m: u64) -> BigRational {
        self.psi.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn chi_at(&self, n: u64) -> BigRational {
        self.chi().get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The set `M` of orders with `ν(m) ≠ 0`.
    pub fn support(&self) -> Vec<u64> {
        self.psi.keys().copied().collect()
    }

    /// `d_M = lcm(M)`; 1 for the zero divisor.
    pub fn d_m(&self) -> u64 {
        self.psi.keys().fold(1, |acc, &m| lcm(acc, m))
    }

    /// Coefficientwise scaling.
    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let psi = self.psi.iter().map(|(&m, c)| (m, c * q)).collect();
        let chi = OnceLock::new();
        if let Some(c) = self.chi.get() {
            let _ = chi.set(c.iter().map(|(&m, v)| (m, v * q)).collect());
        }
        Self { psi, chi }
    }

    /// The group-ring product, computed bilinearly in the Λ-basis.
    pub fn times(&self, other: &Self) -> Self {
        Self::from_chi(chi_product(self.chi(), other.chi()))
    }

    /// `f ⊗ g` on divisors; the same operation as [`Divisor::times`].
    pub fn tensor(&self, other: &Self) -> Self {
        self.times(other)
    }

    /// Product of many factors, staying in the Λ-basis until the end.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Divisor>) -> Self {
        let mut acc: CoeffMap = [(1u64, rat(1))].into_iter().collect();
        for f in factors {
            acc = chi_product(&acc, f.chi());
        }
        Self::from_chi(acc)
    }

    /// `Σ ν(m)·φ(m)`, equivalently `Σ χ(n)·n`.
    pub fn degree(&self) -> BigRational {
        self.psi
            .iter()
            .map(|(&m, c)| c * rat(arith::phi(m) as i64))
            .sum()
    }

    /// Sum of the roots: `tr Λ_n = [n = 1]`, so the trace is `χ(1)`.
    pub fn trace(&self) -> BigRational {
        self.chi_at(1)
    }

    /// Lefschetz number `L(k) = Σ_{m | k} m·χ(m)`.
    pub fn lefschetz(&self, k: u64) -> Result<BigRational> {
        if k == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Ok(self
            .chi()
            .iter()
            .filter(|(&m, _)| k % m == 0)
            .map(|(&m, c)| c * rat(m as i64))
            .sum())
    }

    /// `L(k)` for every `k | d`. Requires the support to divide `d`.
    pub fn lefschetz_table(&self, d: u64) -> BTreeMap<u64, BigRational> {
        divisors(d)
            .into_iter()
            .map(|k| (k, self.lefschetz(k).expect("k >= 1")))
            .collect()
    }

    /// Recovers a divisor from its Lefschetz numbers on the divisors of
    /// `d`: `m·χ(m) = Σ_{k | m} μ(m/k)·L(k)`.
    pub fn from_lefschetz(table: &BTreeMap<u64, BigRational>, d: u64) -> Result<Self> {
        let mut chi = CoeffMap::new();
        for m in divisors(d) {
            let mut acc = BigRational::zero();
            for (s, mu) in squarefree_divisors(m) {
                let k = m / s;
                let l = table.get(&k).ok_or_else(|| {
                    Error::CrossCheck(format!("Lefschetz number L({k}) missing"))
                })?;
                if mu > 0 {
                    acc += l;
                } else {
                    acc -= l;
                }
            }
            add_into(&mut chi, m, acc / rat(m as i64));
        }
        Ok(Self::from_chi(chi))
    }

    /// Orbitwise power map `⟨λ⟩ ↦ ⟨λ^k⟩`, via
    /// `Σ_a ⟨e^{2πi ka/m}⟩ = gcd(k, m)·Λ_{m/gcd(k, m)}`.
    pub fn power_map(&self, k: u64) -> Self {
        assert!(k > 0, "power map needs k >= 1");
        Self::from_chi(self.chi().iter().map(|(&m, c)| {
            let g = gcd(k, m);
            (m / g, c * rat(g as i64))
        }))
    }

    pub fn is_integral(&self) -> bool {
        self.psi.values().all(|c| c.is_integer())
    }

    /// All ν(m) are nonnegative integers, i.e. the divisor of a polynomial.
    pub fn is_effective(&self) -> bool {
        self.psi
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Integer multiplicities if every ν(m) is a nonnegative integer.
    pub fn nonnegative_multiplicities(&self) -> Option<BTreeMap<u64, u64>> {
        self.psi
            .iter()
            .map(|(&m, c)| {
                if c.is_integer() && !c.is_negative() {
                    c.to_integer().to_u64().map(|v| (m, v))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Expands `∏ Φ_m^{ν(m)}` with exact integer coefficients.
    ///
    /// Works in the Λ-basis, `∏ (t^n - 1)^{χ(n)}`: every factor with
    /// positive exponent is multiplied in first, then the negative ones are
    /// divided out exactly. Each step is linear in the current degree.
    pub fn expand(&self) -> Result<IntPolynomial> {
        for (&m, c) in &self.psi {
            if !c.is_integer() || c.is_negative() {
                return Err(Error::NotPolynomialDivisor {
                    order: m,
                    coeff: c.to_string(),
                });
            }
        }
        let chi = self.chi();
        let mut p = IntPolynomial::one();
        for (&n, c) in chi.iter().filter(|(_, c)| c.is_positive()) {
            let times = c.to_integer().to_u64().expect("integral χ");
            for _ in 0..times {
                p.mul_binomial_assign(n as usize);
            }
        }
        for (&n, c) in chi.iter().filter(|(_, c)| c.is_negative()) {
            let times = (-c).to_integer().to_u64().expect("integral χ");
            for _ in 0..times {
                p = p.div_binomial(n as usize).ok_or_else(|| {
                    Error::CrossCheck(format!("t^{n} - 1 does not divide the partial product"))
                })?;
            }
        }
        Ok(p)
    }

    /// Λ-basis text form, e.g. `251*Lambda(265)+1*Lambda(1)`, orders
    /// descending.
    pub fn lambda_form(&self) -> String {
        format_terms(self.chi().iter().rev(), "Lambda")
    }

    /// Ψ-basis text with orders descending, e.g.
    /// `251*Psi(265)+251*Psi(53)+251*Psi(5)+252*Psi(1)`.
    pub fn psi_form(&self) -> String {
        format_terms(self.psi.iter().rev(), "Psi")
    }
}

fn format_terms<'a>(terms: impl Iterator<Item = (&'a u64, &'a BigRational)>, name: &str) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        out.push_str(&format!("{}*{name}({m})", c.abs()));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Divisor {
    /// Canonical Ψ-basis text `c*Psi(m)` with `m` ascending, e.g.
    /// `1*Psi(1)+2*Psi(4)-1/2*Psi(6)`; the zero divisor prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.psi.iter(), "Psi"))
    }
}

impl FromStr for Divisor {
    type Err = Error;

    /// Parses sums of `c*Psi(m)` and `c*Lambda(m)` terms (mixed is fine);
    /// a bare `Psi(m)` has coefficient 1.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parse_err = |reason: &str| Error::Parse {
            token: s.to_string(),
            reason: reason.to_string(),
        };
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut psi_terms = Vec::new();
        let mut chi_terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            let close = body.find(')').ok_or_else(|| parse_err("missing ')'"))?;
            let term = &body[..=close];
            rest = &body[close + 1..];
            let (coeff_str, basis_part) = match term.find('*') {
                Some(i) => (&term[..i], &term[i + 1..]),
                None => ("1", term),
            };
            let mut coeff: BigRational = coeff_str
                .parse()
                .map_err(|_| parse_err(&format!("bad coefficient `{coeff_str}`")))?;
            if negative {
                coeff = -coeff;
            }
            let (target, inner) = if let Some(inner) = basis_part.strip_prefix("Psi(") {
                (&mut psi_terms, inner)
            } else if let Some(inner) = basis_part.strip_prefix("Lambda(") {
                (&mut chi_terms, inner)
            } else {
                return Err(parse_err(&format!("unknown basis element `{basis_part}`")));
            };
            let order: u64 = inner
                .trim_end_matches(')')
                .parse()
                .map_err(|_| parse_err(&format!("bad order in `{basis_part}`")))?;
            if order == 0 {
                return Err(Error::InvalidOrder(0));
            }
            target.push((order, coeff));
        }
        Ok(Self::from_psi(psi_terms) + Self::from_chi(chi_terms))
    }
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        let mut psi = self.psi.clone();
        for (&m, c) in &rhs.psi {
            add_into(&mut psi, m, c.clone());
        }
        Divisor {
            psi,
            chi: OnceLock::new(),
        }
    }
}

impl Add for Divisor {
    type Output = Divisor;

    fn add(self, rhs: Divisor) -> Divisor {
        &self + &rhs
    }
}

impl Neg for &Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        self.scale(&rat(-1))
    }
}

impl Neg for Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        -&self
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Sub for Divisor {
    type Output = Divisor;

    fn sub(self, rhs: Divisor) -> Divisor {
        &self - &rhs
    }
}

impl Mul for &Divisor {
    type Output = Divisor;

    fn mul(self, rhs: &Divisor) -> Divisor {
        self.times(rhs)
    }
}

impl Mul for Divisor {
    type Output = Divisor;

    fn mul(self, rhs: Divisor) -> Divisor {
        self.times(&rhs)
    }
}

/// `Λ_n`; see [`Divisor::lambda`].
pub fn lambda_div(n: u64) -> Divisor {
    Divisor::lambda(n)
}

/// `Ψ_n`; see [`Divisor::psi`].
pub fn psi_div(n: u64) -> Divisor {
    Divisor::psi(n)
}

pub fn to_chi(a: &Divisor) -> CoeffMap {
    a.chi().clone()
}

pub fn from_chi(chi: CoeffMap) -> Divisor {
    Divisor::from_chi(chi)
}

/// `q·a`.
pub fn div_scale(q: &BigRational, a: &Divisor) -> Divisor {
    a.scale(q)
}

pub fn div_add(a: &Divisor, b: &Divisor) -> Divisor {
    a + b
}

pub fn div_mul(a: &Divisor, b: &Divisor) -> Divisor {
    a.times(b)
}

/// `Φ_m` with exact integer coefficients, from
/// `Φ_m = ∏_{d | m} (t^d - 1)^{μ(m/d)}`. Panics if `m == 0`.
pub fn cyclotomic(m: u64) -> IntPolynomial {
    assert!(m > 0, "orders are positive");
    let mut p = IntPolynomial::one();
    let sf = squarefree_divisors(m);
    for &(s, mu) in &sf {
        if mu > 0 {
            p.mul_binomial_assign((m / s) as usize);
        }
    }
    for &(s, mu) in &sf {
        if mu < 0 {
            p = p
                .div_binomial((m / s) as usize)
                .expect("cyclotomic quotient is exact");
        }
    }
    p
}

// Structured form `{"psi": {"m": [num, den], ...}}`. Numerator and
// denominator are JSON integers when they fit in i64, decimal strings
// otherwise.

struct BigIntJson<'a>(&'a BigInt);

impl Serialize for BigIntJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct RatJson<'a>(&'a BigRational);

impl Serialize for RatJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&BigIntJson(self.0.numer()))?;
        t.serialize_element(&BigIntJson(self.0.denom()))?;
        t.end()
    }
}

struct PsiJson<'a>(&'a CoeffMap);

impl Serialize for PsiJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (m, c) in self.0 {
            map.serialize_entry(&m.to_string(), &RatJson(c))?;
        }
        map.end()
    }
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("psi", &PsiJson(&self.psi))?;
        map.end()
    }
}

fn json_to_bigint<E: de::Error>(v: &serde_json::Value) -> std::result::Result<BigInt, E> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| E::custom(format!("non-integer coefficient {n}"))),
        serde_json::Value::String(s) => s
            .parse()
            .map_err(|_| E::custom(format!("bad integer string {s:?}"))),
        other => Err(E::custom(format!("expected integer, got {other}"))),
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct DivisorVisitor;

        impl<'de> Visitor<'de> for DivisorVisitor {
            type Value = Divisor;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object {\"psi\": {order: [num, den]}}")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Divisor, A::Error> {
                let mut psi: Option<BTreeMap<String, (serde_json::Value, serde_json::Value)>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    if key == "psi" {
                        psi = Some(map.next_value()?);
                    } else {
                        map.next_value::<de::IgnoredAny>()?;
                    }
                }
                let psi = psi.ok_or_else(|| de::Error::missing_field("psi"))?;
                let mut entries = Vec::with_capacity(psi.len());
                for (k, (num, den)) in psi {
                    let m: u64 = k
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad order {k:?}")))?;
                    if m == 0 {
                        return Err(de::Error::custom("order 0"));
                    }
                    let den = json_to_bigint::<A::Error>(&den)?;
                    if den.is_zero() {
                        return Err(de::Error::custom("zero denominator"));
                    }
                    entries.push((m, BigRational::new(json_to_bigint::<A::Error>(&num)?, den)));
                }
                Ok(Divisor::from_psi(entries))
            }
        }

        d.deserialize_map(DivisorVisitor)
    }
}
