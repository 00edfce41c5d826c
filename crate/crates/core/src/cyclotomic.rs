//! Exact arithmetic in the cyclotomic field `ℚ(ω)`, `ω = exp(2πi p/d)`.
//!
//! Elements are polynomials in `ω` reduced modulo `Φ_d`, stored as an
//! integer coefficient vector over a common positive denominator. Real
//! elements can be signed exactly: the embedding value is enclosed by
//! rigorous intervals that are refined until they exclude zero.

use std::cell::{OnceCell, RefCell};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polynomial::{cyclotomic_polynomial, IntPolynomial};
use crate::trig::{cos_two_pi_frac, Enclosure};

#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// Coefficients of `1, ω, ω², …` as exact rationals.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    fn normalize(mut self) -> Self {
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.is_zero() {
            self.den = BigInt::one();
        }
        self
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/{}", self.num, self.den)
    }
}

/// `ℚ(ω)` for one fixed primitive root of unity `ω = exp(2πi p/d)`.
pub struct CyclotomicField {
    order: u64,
    numerator: u64,
    modulus: IntPolynomial,
    degree: usize,
    // ω^e reduced modulo Φ_d, for 0 ≤ e < d
    powers: Vec<Vec<BigInt>>,
    cosines: RefCell<Option<(u32, Vec<Enclosure>)>>,
    // (midpoint, radius) of each cos(2πkp/d) in f64
    float_cosines: OnceCell<Vec<(f64, f64)>>,
}

impl CyclotomicField {
    /// Panics unless `0 < p < d` and `gcd(p, d) = 1`.
    pub fn new(numerator: u64, order: u64) -> Self {
        assert!(order >= 2 && numerator > 0 && numerator < order);
        assert!(numerator.gcd(&order) == 1, "ω must be a primitive root");
        let modulus = cyclotomic_polynomial(order as usize);
        let degree = modulus.degree().expect("nonzero");
        let mut powers = Vec::with_capacity(order as usize);
        let mut current = vec![BigInt::zero(); degree];
        current[0] = BigInt::one();
        for _ in 0..order {
            powers.push(current.clone());
            current = Self::shift_reduce(&modulus, &current);
        }
        CyclotomicField {
            order,
            numerator,
            modulus,
            degree,
            powers,
            cosines: RefCell::new(None),
            float_cosines: OnceCell::new(),
        }
    }

    // multiply by ω and reduce
    fn shift_reduce(modulus: &IntPolynomial, v: &[BigInt]) -> Vec<BigInt> {
        let n = v.len();
        let top = v[n - 1].clone();
        let mut out = vec![BigInt::zero(); n];
        for i in (1..n).rev() {
            out[i] = v[i - 1].clone();
        }
        if !top.is_zero() {
            for (i, c) in modulus.coeffs()[..n].iter().enumerate() {
                out[i] -= &top * c;
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `[ℚ(ω):ℚ] = φ(d)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            num: vec![BigInt::zero(); self.degree],
            den: BigInt::one(),
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.num[0] = BigInt::from(n);
        e
    }

    /// `ω^e` for any integer `e`.
    pub fn omega_pow(&self, e: i64) -> FieldElement {
        let idx = e.rem_euclid(self.order as i64) as usize;
        FieldElement {
            num: self.powers[idx].clone(),
            den: BigInt::one(),
        }
    }

    /// `Σ_j c_j ω^{j − shift}`.
    pub fn from_laurent(&self, coeffs: &[BigInt], shift: i64) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.degree];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (j as i64 - shift).rem_euclid(self.order as i64) as usize;
            for (acc, p) in num.iter_mut().zip(&self.powers[idx]) {
                if !p.is_zero() {
                    *acc += c * p;
                }
            }
        }
        FieldElement {
            num,
            den: BigInt::one(),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.combine(a, b, false)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.combine(a, b, true)
    }

    fn combine(&self, a: &FieldElement, b: &FieldElement, subtract: bool) -> FieldElement {
        if a.den == b.den {
            let num = a
                .num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| if subtract { x - y } else { x + y })
                .collect();
            return FieldElement {
                num,
                den: a.den.clone(),
            }
            .normalize();
        }
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| {
                let l = x * &b.den;
                let r = y * &a.den;
                if subtract {
                    l - r
                } else {
                    l + r
                }
            })
            .collect();
        FieldElement {
            num,
            den: &a.den * &b.den,
        }
        .normalize()
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn scale(&self, a: &FieldElement, c: i64) -> FieldElement {
        self.scale_int(a, &BigInt::from(c))
    }

    pub fn scale_int(&self, a: &FieldElement, c: &BigInt) -> FieldElement {
        if c.is_zero() {
            return self.zero();
        }
        FieldElement {
            num: a.num.iter().map(|x| x * c).collect(),
            den: a.den.clone(),
        }
        .normalize()
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let n = self.degree;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let phi = self.modulus.coeffs();
        for top in (n..prod.len()).rev() {
            let c = std::mem::take(&mut prod[top]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in phi[..n].iter().enumerate() {
                if !m.is_zero() {
                    prod[top - n + j] -= &c * m;
                }
            }
        }
        prod.truncate(n);
        FieldElement {
            num: prod,
            den: &a.den * &b.den,
        }
        .normalize()
    }

    /// Complex conjugation, `ω ↦ ω⁻¹`.
    pub fn conj(&self, a: &FieldElement) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.degree];
        for (k, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let image = &self.powers[(self.order as usize - k) % self.order as usize];
            for (slot, v) in num.iter_mut().zip(image) {
                if !v.is_zero() {
                    *slot += c * v;
                }
            }
        }
        FieldElement {
            num,
            den: a.den.clone(),
        }
        .normalize()
    }

    /// Multiplicative inverse by the extended Euclidean algorithm over ℚ[x].
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        type Poly = Vec<BigRational>;
        fn trim(p: &mut Poly) {
            while p.last().is_some_and(|c| c.is_zero()) {
                p.pop();
            }
        }
        fn sub_scaled_shift(target: &mut Poly, src: &Poly, c: &BigRational, shift: usize) {
            if target.len() < src.len() + shift {
                target.resize(src.len() + shift, BigRational::zero());
            }
            for (i, s) in src.iter().enumerate() {
                target[i + shift] -= c * s;
            }
            trim(target);
        }
        let mut r0: Poly = self
            .modulus
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut r1: Poly = a.coefficients();
        trim(&mut r1);
        let mut s0: Poly = Vec::new();
        let mut s1: Poly = vec![BigRational::one()];
        while r1.len() > 1 {
            // r0 = quot * r1 + rem, carried out in place on r0
            let mut quot: Poly = vec![BigRational::zero(); r0.len().saturating_sub(r1.len()) + 1];
            let lead = r1.last().unwrap().clone();
            while r0.len() >= r1.len() && !r0.is_empty() {
                let shift = r0.len() - r1.len();
                let c = r0.last().unwrap() / &lead;
                quot[shift] += &c;
                sub_scaled_shift(&mut r0, &r1, &c, shift);
            }
            // s_next = s0 - quot * s1
            let mut s_next = s0.clone();
            for (shift, c) in quot.iter().enumerate() {
                if !c.is_zero() {
                    sub_scaled_shift(&mut s_next, &s1, c, shift);
                }
            }
            std::mem::swap(&mut r0, &mut r1);
            s0 = std::mem::replace(&mut s1, s_next);
        }
        // r1 is a nonzero constant since Φ_d is irreducible
        let c = r1[0].clone();
        let mut coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        coeffs.resize(self.degree, BigRational::zero());
        Some(self.from_rationals(&coeffs))
    }

    pub fn from_rationals(&self, coeffs: &[BigRational]) -> FieldElement {
        assert!(coeffs.len() <= self.degree);
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        num.resize(self.degree, BigInt::zero());
        FieldElement { num, den }.normalize()
    }

    fn cosines(&self, bits: u32) -> Vec<Enclosure> {
        let mut cache = self.cosines.borrow_mut();
        if let Some((cached_bits, values)) = cache.as_ref() {
            if *cached_bits >= bits {
                return values.clone();
            }
        }
        let values: Vec<Enclosure> = (0..self.degree as u64)
            .map(|k| cos_two_pi_frac(k * self.numerator, self.order, bits))
            .collect();
        *cache = Some((bits, values.clone()));
        values
    }

    fn float_cosines(&self) -> &[(f64, f64)] {
        self.float_cosines.get_or_init(|| {
            self.cosines(64)
                .iter()
                .map(|e| {
                    let lo = e.lo.to_f64().unwrap_or(f64::NAN);
                    let hi = e.hi.to_f64().unwrap_or(f64::NAN);
                    // conversion error is far below 1e-15 on values in [-1, 1]
                    ((lo + hi) / 2.0, (hi - lo) / 2.0 + 1e-15)
                })
                .collect()
        })
    }

    // Decides the sign in double precision when the value clears a
    // generous bound on every rounding error involved; `None` otherwise.
    fn float_sign(&self, a: &FieldElement) -> Option<i32> {
        let cos = self.float_cosines();
        let mut sum = 0.0f64;
        let mut err = 0.0f64;
        let mut magnitude = 0.0f64;
        for (c, &(mid, rad)) in a.num.iter().zip(cos) {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64()?;
            if !c.is_finite() {
                return None;
            }
            sum += c * mid;
            err += c.abs() * rad;
            magnitude += (c * mid).abs();
        }
        let terms = a.num.len() as f64 + 2.0;
        let bound = 2.0 * (err + magnitude * terms * f64::EPSILON) + f64::MIN_POSITIVE;
        if !sum.is_finite() || !bound.is_finite() {
            return None;
        }
        if sum > bound {
            Some(1)
        } else if sum < -bound {
            Some(-1)
        } else {
            None
        }
    }

    /// Sign of a real element under the embedding `ω ↦ exp(2πi p/d)`.
    pub fn real_sign(&self, a: &FieldElement) -> i32 {
        debug_assert!(self.conj(a) == *a, "element is not real");
        if a.is_zero() {
            return 0;
        }
        if let Some(sign) = self.float_sign(a) {
            return sign;
        }
        let mut bits = 64;
        loop {
            let cos = self.cosines(bits);
            let mut total = Enclosure::exact(BigRational::zero());
            for (c, e) in a.num.iter().zip(&cos) {
                if !c.is_zero() {
                    total = total.add(&e.scale(c));
                }
            }
            if total.lo.is_positive() {
                return 1;
            }
            if total.hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_has_order_d() {
        for d in [2u64, 3, 5, 6, 8, 12] {
            let f = CyclotomicField::new(1, d);
            assert_eq!(f.omega_pow(d as i64), f.from_int(1));
            assert_eq!(f.omega_pow(0), f.from_int(1));
            assert_eq!(f.mul(&f.omega_pow(3), &f.omega_pow(-3)), f.from_int(1));
        }
    }

    #[test]
    fn inverse_and_conjugation() {
        let f = CyclotomicField::new(2, 7);
        let one = f.from_int(1);
        let a = f.sub(&one, &f.scale(&f.omega_pow(1), 3));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), one);
        assert_eq!(f.conj(&f.conj(&a)), a);
        assert_eq!(f.conj(&f.omega_pow(2)), f.omega_pow(5));
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn real_signs() {
        // ω + ω̄ = 2cos(2π/5) > 0, and 2cos(4π/5) < 0 for the other embedding
        let f = CyclotomicField::new(1, 5);
        let s = f.add(&f.omega_pow(1), &f.omega_pow(-1));
        assert_eq!(f.real_sign(&s), 1);
        let g = CyclotomicField::new(2, 5);
        let t = g.add(&g.omega_pow(1), &g.omega_pow(-1));
        assert_eq!(g.real_sign(&t), -1);
        // |1 - ω|² > 0
        let one = f.from_int(1);
        let d = f.sub(&one, &f.omega_pow(1));
        assert_eq!(f.real_sign(&f.mul(&d, &f.conj(&d))), 1);
        // ω + ω̄ - 1 = 0 at d = 6
        let h = CyclotomicField::new(1, 6);
        let z = h.sub(&h.add(&h.omega_pow(1), &h.omega_pow(-1)), &h.from_int(1));
        assert!(z.is_zero());
        assert_eq!(h.real_sign(&z), 0);
    }

    #[test]
    fn tiny_real_values_are_signed_correctly() {
        // 2cos(2π/12)·... compare √3 with 1732/1000: ω+ω̄ = √3 at d = 12
        let f = CyclotomicField::new(1, 12);
        let sqrt3 = f.add(&f.omega_pow(1), &f.omega_pow(-1));
        let approx = f.from_rationals(&[BigRational::new(17320508.into(), 10000000.into())]);
        assert_eq!(f.real_sign(&f.sub(&sqrt3, &approx)), 1);
        let approx_hi = f.from_rationals(&[BigRational::new(17320509.into(), 10000000.into())]);
        assert_eq!(f.real_sign(&f.sub(&sqrt3, &approx_hi)), -1);
    }
}
