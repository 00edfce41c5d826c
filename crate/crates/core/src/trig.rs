//! Rigorous rational enclosures of `π` and `cos(2πr)` for rational `r`.
//!
//! Endpoints are dyadic rationals rounded outward, so every enclosure
//! contains the true value.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn exact(v: BigRational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn neg(self) -> Self {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let c = BigRational::from_integer(c.clone());
        if c.is_negative() {
            Enclosure {
                lo: &self.hi * &c,
                hi: &self.lo * &c,
            }
        } else {
            Enclosure {
                lo: &self.lo * &c,
                hi: &self.hi * &c,
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

fn outward(lo: &BigRational, hi: &BigRational, bits: u32) -> Enclosure {
    Enclosure {
        lo: round_down(lo, bits),
        hi: round_up(hi, bits),
    }
}

// arctan(1/k) by its alternating series; consecutive partial sums bracket
// the limit once the terms decrease.
fn arctan_inv(k: u64, bits: u32) -> Enclosure {
    let eps = BigRational::new(BigInt::one(), pow2(bits + 4));
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = k.clone();
    let mut sum = BigRational::zero();
    let mut j: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &power * BigInt::from(2 * j + 1));
        if j.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        j += 1;
        power *= &k2;
        let next = BigRational::new(BigInt::one(), &power * BigInt::from(2 * j + 1));
        if next < eps {
            let other = if j.is_multiple_of(2) {
                &sum + &next
            } else {
                &sum - &next
            };
            let (lo, hi) = if other < sum {
                (other, sum)
            } else {
                (sum, other)
            };
            return outward(&lo, &hi, bits + 2);
        }
    }
}

/// `π = 16 arctan(1/5) - 4 arctan(1/239)`.
pub(crate) fn pi(bits: u32) -> Enclosure {
    let a = arctan_inv(5, bits + 6);
    let b = arctan_inv(239, bits + 6);
    let sixteen = BigRational::from_integer(16.into());
    let four = BigRational::from_integer(4.into());
    let lo = &sixteen * &a.lo - &four * &b.hi;
    let hi = &sixteen * &a.hi - &four * &b.lo;
    outward(&lo, &hi, bits)
}

// Taylor polynomial of cos at x with its Lagrange remainder bound.
fn cos_taylor(x: &BigRational, bits: u32) -> Enclosure {
    let eps = BigRational::new(BigInt::one(), pow2(bits + 4));
    let x2 = x * x;
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut j: u64 = 0;
    loop {
        if j.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        j += 1;
        term = &term * &x2 / BigRational::from_integer(BigInt::from((2 * j - 1) * (2 * j)));
        if term < eps {
            return outward(&(&sum - &term), &(&sum + &term), bits + 2);
        }
    }
}

/// Encloses `cos(2π r)`.
pub(crate) fn cos_two_pi(r: &BigRational, bits: u32) -> Enclosure {
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());

    // reduce into [0, 1)
    let mut r = r - BigRational::from_integer(r.floor().to_integer());
    if r > half {
        r = &one - &r;
    }
    let mut negate = false;
    if r > quarter {
        r = &half - &r;
        negate = true;
    }
    let result = if r.is_zero() {
        Enclosure::exact(one)
    } else if r == quarter {
        Enclosure::exact(BigRational::zero())
    } else {
        // x = 2πr lies in (0, π/2), where cos is decreasing
        let p = pi(bits + 4);
        let two_r = &r + &r;
        let x_lo = &two_r * &p.lo;
        let x_hi = &two_r * &p.hi;
        let at_hi = cos_taylor(&x_hi, bits + 2);
        let at_lo = cos_taylor(&x_lo, bits + 2);
        outward(&at_hi.lo, &at_lo.hi, bits)
    };
    if negate {
        result.neg()
    } else {
        result
    }
}

// keyed by (k mod d, d, bits)
type CosCache = Mutex<HashMap<(u64, u64, u32), Enclosure>>;

/// `cos(2π k/d)`, memoized across calls and threads.
pub(crate) fn cos_two_pi_frac(k: u64, d: u64, bits: u32) -> Enclosure {
    static CACHE: OnceLock<CosCache> = OnceLock::new();
    let key = (k % d, d, bits);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = cache.lock().expect("cache lock").get(&key) {
        return e.clone();
    }
    let e = cos_two_pi(
        &BigRational::new(BigInt::from(key.0), BigInt::from(d)),
        bits,
    );
    cache.lock().expect("cache lock").insert(key, e.clone());
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn contains(e: &Enclosure, x: f64, slack: f64) -> bool {
        e.lo.to_f64().unwrap() <= x + slack && x - slack <= e.hi.to_f64().unwrap()
    }

    #[test]
    fn pi_enclosure_is_tight_and_correct() {
        for bits in [20, 64, 200] {
            let p = pi(bits);
            assert!(p.lo < p.hi);
            assert!(contains(&p, std::f64::consts::PI, 1e-15));
            let width = (&p.hi - &p.lo).to_f64().unwrap();
            assert!(width < 2f64.powi(-(bits as i32) + 2));
        }
        // 355/113 overshoots π by about 2.7e-7
        assert!(pi(40).hi < q(355, 113));
    }

    #[test]
    fn cos_enclosures_match_f64() {
        for d in 1..40i64 {
            for k in -3..(2 * d) {
                let e = cos_two_pi(&q(k, d), 60);
                let x = (2.0 * std::f64::consts::PI * k as f64 / d as f64).cos();
                assert!(contains(&e, x, 1e-12), "k={k} d={d}");
                assert!((&e.hi - &e.lo).to_f64().unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_special_values() {
        assert_eq!(cos_two_pi(&q(1, 4), 30), Enclosure::exact(q(0, 1)));
        assert_eq!(cos_two_pi(&q(1, 2), 30), Enclosure::exact(q(-1, 1)));
        assert_eq!(cos_two_pi(&q(3, 1), 30), Enclosure::exact(q(1, 1)));
    }
}
