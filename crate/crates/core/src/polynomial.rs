//! Dense integer polynomials in one variable, lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] = BigInt::one();
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// `self / divisor` when the division is exact over the integers.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let (c, r) = rem[top].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[top - dd + j] -= &c * dc;
            }
            quot[top - dd] = c;
        }
        rem[..dd]
            .iter()
            .all(|c| c.is_zero())
            .then(|| Self::new(quot))
    }

    /// Division by a monic polynomial; returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        assert!(
            divisor.leading().is_some_and(|c| c.is_one()),
            "divisor must be monic"
        );
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top].clone();
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[top - dd + j] -= &c * dc;
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Strips `t^k` factors and makes the lowest coefficient positive.
    pub fn normalized(&self) -> Self {
        let mut coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .skip_while(|c| c.is_zero())
            .cloned()
            .collect();
        if coeffs.first().is_some_and(|c| c.is_negative()) {
            coeffs.iter_mut().for_each(|c| *c = -c.clone());
        }
        Self::new(coeffs)
    }
}

/// Lowest degree first with explicit signs, e.g. `1 - 3t + t^2`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, magnitude.is_one()) {
                (0, _) => write!(f, "{magnitude}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{magnitude}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{magnitude}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `Φ_d`, the d-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(d: usize) -> IntPolynomial {
    assert!(d >= 1);
    let mut p = IntPolynomial::x_pow_minus_one(d);
    for e in 1..d {
        if d.is_multiple_of(e) {
            let (q, r) = p.div_rem_monic(&cyclotomic_polynomial(e));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(cyclotomic_polynomial(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(
            cyclotomic_polynomial(6),
            IntPolynomial::from_i64(&[1, -1, 1])
        );
        assert_eq!(
            cyclotomic_polynomial(12),
            IntPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
        assert_eq!(cyclotomic_polynomial(7).degree(), Some(6));
        assert_eq!(cyclotomic_polynomial(15).degree(), Some(8));
    }

    #[test]
    fn division_and_display() {
        let p = IntPolynomial::from_i64(&[-1, 0, 0, 1]);
        let (q, r) = p.div_rem_monic(&IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(q, IntPolynomial::from_i64(&[1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(
            IntPolynomial::from_i64(&[1, -3, 1]).to_string(),
            "1 - 3t + t^2"
        );
        assert_eq!(IntPolynomial::from_i64(&[-2, 1]).to_string(), "-2 + t");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn normalization_strips_powers_and_sign() {
        let p = IntPolynomial::from_i64(&[0, 0, -1, 3, -1]);
        assert_eq!(p.normalized(), IntPolynomial::from_i64(&[1, -3, 1]));
        assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(1));
    }
}
