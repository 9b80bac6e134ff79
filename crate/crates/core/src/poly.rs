//! Dense polynomials in `t` with arbitrary-precision integer coefficients.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::Mul;

/// Dense coefficient vector, index = power of `t`. Trailing zeros are never
/// stored, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    /// `t^m - 1`.
    pub fn binomial(m: usize) -> Self {
        let mut p = Self::monomial(m);
        p.coeffs[0] -= 1;
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Value at `t = 1`, i.e. the coefficient sum.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Multiplies in place by `t^m - 1`. Linear time.
    pub fn mul_binomial_assign(&mut self, m: usize) {
        if self.is_zero() {
            return;
        }
        let old_len = self.coeffs.len();
        self.coeffs.resize(old_len + m, BigInt::zero());
        // new[i] = old[i - m] - old[i]; walk downwards so old[i - m] is intact.
        for i in (0..old_len + m).rev() {
            let shifted = if i >= m {
                self.coeffs[i - m].clone()
            } else {
                BigInt::zero()
            };
            let own = if i < old_len {
                std::mem::take(&mut self.coeffs[i])
            } else {
                BigInt::zero()
            };
            self.coeffs[i] = shifted - own;
        }
        self.trim();
    }

    /// Exact division by `t^m - 1`; `None` if it leaves a remainder.
    pub fn div_binomial(&self, m: usize) -> Option<Self> {
        assert!(m > 0, "division by t^0 - 1 = 0");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.coeffs.len();
        if n <= m {
            return None;
        }
        // p = q * (t^m - 1)  =>  q_i = p_{i+m} + q_{i+m}
        let qlen = n - m;
        let mut q = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let above = if i + m < qlen {
                q[i + m].clone()
            } else {
                BigInt::zero()
            };
            q[i] = &self.coeffs[i + m] + above;
        }
        // low coefficients must satisfy p_i = -q_i
        for i in 0..m {
            let qi = q.get(i).cloned().unwrap_or_default();
            if self.coeffs[i].clone() + qi != BigInt::zero() {
                return None;
            }
        }
        Some(Self::from_coeffs(q))
    }

    /// Long division by a monic divisor, returning `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree().expect("monic polynomial is nonzero");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPolynomial::from_coeffs(out)
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: IntPolynomial) -> IntPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for IntPolynomial {
    /// Descending powers, e.g. `t^4 - t^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{abs}*t")?,
                _ if unit => write!(f, "t^{i}")?,
                _ => write!(f, "{abs}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_multiplication_matches_dense_product() {
        let mut p = IntPolynomial::from_i64(&[3, -1, 0, 2]);
        let dense = &p * &IntPolynomial::binomial(4);
        p.mul_binomial_assign(4);
        assert_eq!(p, dense);
    }

    #[test]
    fn binomial_division_round_trips() {
        let p = IntPolynomial::from_i64(&[5, 0, -2, 7, 1]);
        let mut q = p.clone();
        q.mul_binomial_assign(3);
        assert_eq!(q.div_binomial(3), Some(p.clone()));
        assert_eq!(p.div_binomial(3), None);
        assert_eq!(IntPolynomial::binomial(6).div_binomial(6), Some(IntPolynomial::one()));
    }

    #[test]
    fn long_division_remainder() {
        // t^3 + 2t + 5 = (t^2 + t + 3)(t - 1) + 8
        let n = IntPolynomial::from_i64(&[5, 2, 0, 1]);
        let d = IntPolynomial::from_i64(&[-1, 1]);
        let (q, r) = n.div_rem_monic(&d);
        assert_eq!(q, IntPolynomial::from_i64(&[3, 1, 1]));
        assert_eq!(r, IntPolynomial::from_i64(&[8]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(IntPolynomial::from_i64(&[1, 0, -1, 0, 1]).to_string(), "t^4 - t^2 + 1");
        assert_eq!(IntPolynomial::from_i64(&[-1, 1]).to_string(), "t - 1");
        assert_eq!(IntPolynomial::from_i64(&[0, -2, 3]).to_string(), "3*t^2 - 2*t");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
