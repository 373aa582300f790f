//! Elements of the `Q`-field: rational functions in the formal root `Q`
//! (generic mode) or elements of the cyclotomic field `Q(zeta_m)`.
//!
//! The ring in force is passed alongside each operation as a [`Ring`]; a
//! `None` ring means the formal transcendental. Constants are represented
//! identically in both rings.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp;
use super::zpoly::ZPoly;

/// Cyclotomic modulus data for `Q` a primitive `m`-th root of unity.
#[derive(Debug)]
pub struct Cyclo {
    pub m: u32,
    pub phi: ZPoly,
}

impl Cyclo {
    pub fn degree(&self) -> usize {
        self.phi.degree()
    }
}

pub type Ring = Option<&'static Cyclo>;

/// The `m`-th cyclotomic polynomial, by exact division of `Q^m - 1`.
pub fn cyclotomic_poly(m: u32) -> ZPoly {
    let mut p = ZPoly::monomial(m as usize, BigInt::one()).sub(&ZPoly::one());
    for d in 1..m {
        if m % d == 0 {
            p = p.div_exact(&cyclotomic_poly(d)).expect("cyclotomic factor divides Q^m - 1");
        }
    }
    p
}

/// Interned modulus for `m`. Contexts live for the whole process.
pub fn cyclo(m: u32) -> &'static Cyclo {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static Cyclo>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(m)
        .or_insert_with(|| Box::leak(Box::new(Cyclo { m, phi: cyclotomic_poly(m) })))
}

/// `Q^shift * num / den`, canonical for the ring it lives in.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QElem {
    num: ZPoly,
    den: ZPoly,
    shift: i64,
}

impl Default for QElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl QElem {
    pub fn zero() -> Self {
        QElem { num: ZPoly::zero(), den: ZPoly::one(), shift: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(c: BigInt) -> Self {
        QElem { num: ZPoly::constant(c), den: ZPoly::one(), shift: 0 }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::generic(ZPoly::constant(r.numer().clone()), ZPoly::constant(r.denom().clone()), 0)
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the element is a rational constant.
    pub fn is_constant(&self) -> bool {
        self.shift == 0 && self.num.is_constant() && self.den.is_constant()
    }

    /// Image under `Q -> t` in `F_p` (generic ring only); `None` when the
    /// denominator vanishes there.
    pub fn eval_mod(&self, t: u64, p: u64) -> Option<u64> {
        let horner = |z: &ZPoly| z.eval_mod(p).iter().rev().fold(0u64, |acc, &c| modp::add(modp::mul(acc, t, p), c, p));
        let d = horner(&self.den);
        if d == 0 || t % p == 0 {
            return None;
        }
        let tp = if self.shift >= 0 { modp::pow(t, self.shift as u64, p) } else { modp::inv(modp::pow(t, self.shift.unsigned_abs(), p), p) };
        Some(modp::mul(modp::mul(horner(&self.num), modp::inv(d, p), p), tp, p))
    }

    pub fn q_pow(k: i64, ring: Ring) -> Self {
        match ring {
            None => QElem { num: ZPoly::one(), den: ZPoly::one(), shift: k },
            Some(c) => {
                let e = k.rem_euclid(c.m as i64) as usize;
                Self::cyclotomic(ZPoly::monomial(e, BigInt::one()), BigInt::one(), c)
            }
        }
    }

    /// Build and normalise a generic element.
    pub fn generic(num: ZPoly, den: ZPoly, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let tn = num.trailing_zeros();
        let td = den.trailing_zeros();
        let mut num = num.shift_down(tn);
        let mut den = den.shift_down(td);
        let shift = shift + tn as i64 - td as i64;
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
            if den.lc().is_negative() {
                num = num.neg();
                den = den.neg();
            }
        }
        QElem { num, den, shift }
    }

    fn cyclotomic(num: ZPoly, den: BigInt, c: &Cyclo) -> Self {
        let num = num.rem_monic(&c.phi);
        if num.is_zero() {
            return Self::zero();
        }
        let mut den = den;
        let mut num = num;
        if den.is_negative() {
            den = -den;
            num = num.neg();
        }
        let g = num.content().gcd(&den);
        if !g.is_one() {
            num = num.div_scalar(&g);
            den /= &g;
        }
        QElem { num, den: ZPoly::constant(den), shift: 0 }
    }

    /// Map an element into the cyclotomic ring. Panics when the
    /// denominator vanishes at the root of unity.
    pub fn into_ring(&self, c: &'static Cyclo) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let e = self.shift.rem_euclid(c.m as i64) as usize;
        let num = self.num.shift_up(e).rem_monic(&c.phi);
        if self.den.is_constant() {
            return Self::cyclotomic(num, self.den.lc(), c);
        }
        let den = Self::cyclotomic(self.den.clone(), BigInt::one(), c);
        let inv = den.inv(Some(c));
        Self::cyclotomic(num, BigInt::one(), c).mul(&inv, Some(c))
    }

    pub fn neg(&self) -> Self {
        QElem { num: self.num.neg(), den: self.den.clone(), shift: self.shift }
    }

    pub fn add(&self, o: &Self, ring: Ring) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        match ring {
            None => self.add_generic(o),
            Some(c) => {
                let (d1, d2) = (self.den.lc(), o.den.lc());
                if d1 == d2 {
                    Self::cyclotomic(self.num.add(&o.num), d1, c)
                } else {
                    let num = self.num.scale(&d2).add(&o.num.scale(&d1));
                    Self::cyclotomic(num, d1 * d2, c)
                }
            }
        }
    }

    fn add_generic(&self, o: &Self) -> Self {
        let e = self.shift.min(o.shift);
        let n1 = self.num.shift_up((self.shift - e) as usize);
        let n2 = o.num.shift_up((o.shift - e) as usize);
        if self.den == o.den {
            let num = n1.add(&n2);
            if self.den.is_one() {
                if num.is_zero() {
                    return Self::zero();
                }
                let tz = num.trailing_zeros();
                return QElem { num: num.shift_down(tz), den: ZPoly::one(), shift: e + tz as i64 };
            }
            return Self::generic(num, self.den.clone(), e);
        }
        let g = self.den.gcd(&o.den);
        let a1 = self.den.div_exact(&g).expect("gcd divides");
        let a2 = o.den.div_exact(&g).expect("gcd divides");
        let num = n1.mul(&a2).add(&n2.mul(&a1));
        let den = g.mul(&a1).mul(&a2);
        Self::generic(num, den, e)
    }

    pub fn sub(&self, o: &Self, ring: Ring) -> Self {
        self.add(&o.neg(), ring)
    }

    pub fn mul(&self, o: &Self, ring: Ring) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        match ring {
            None => {
                if self.den.is_one() && o.den.is_one() {
                    return QElem {
                        num: self.num.mul(&o.num),
                        den: ZPoly::one(),
                        shift: self.shift + o.shift,
                    };
                }
                let g1 = self.num.gcd(&o.den);
                let g2 = o.num.gcd(&self.den);
                let n1 = self.num.div_exact(&g1).expect("gcd divides");
                let d2 = o.den.div_exact(&g1).expect("gcd divides");
                let n2 = o.num.div_exact(&g2).expect("gcd divides");
                let d1 = self.den.div_exact(&g2).expect("gcd divides");
                let mut num = n1.mul(&n2);
                let mut den = d1.mul(&d2);
                if den.lc().is_negative() {
                    num = num.neg();
                    den = den.neg();
                }
                QElem { num, den, shift: self.shift + o.shift }
            }
            Some(c) => Self::cyclotomic(self.num.mul(&o.num), self.den.lc() * o.den.lc(), c),
        }
    }

    pub fn inv(&self, ring: Ring) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match ring {
            None => {
                let (mut num, mut den) = (self.den.clone(), self.num.clone());
                if den.lc().is_negative() {
                    num = num.neg();
                    den = den.neg();
                }
                QElem { num, den, shift: -self.shift }
            }
            Some(c) => {
                let s = inverse_mod(&self.num, &c.phi);
                // s is a rational polynomial; multiply by our integer denominator.
                let l = s.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                let coeffs: Vec<BigInt> =
                    s.iter().map(|r| (r * BigRational::from_integer(l.clone())).to_integer()).collect();
                let num = ZPoly::from_coeffs(coeffs).scale(&self.den.lc());
                Self::cyclotomic(num, l, c)
            }
        }
    }

    pub fn div(&self, o: &Self, ring: Ring) -> Self {
        self.mul(&o.inv(ring), ring)
    }

    pub fn pow(&self, mut e: u32, ring: Ring) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ring);
            }
        }
        acc
    }

    /// Sign of the leading integer coefficient of the numerator.
    pub fn lc_sign_negative(&self) -> bool {
        self.num.lc().is_negative()
    }
}

type QPoly = Vec<BigRational>;

fn qtrim(v: &mut QPoly) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn qsub_mul(a: &QPoly, q: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    for (i, qi) in q.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            if r.len() <= i + j {
                r.resize(i + j + 1, BigRational::zero());
            }
            r[i + j] -= qi * bj;
        }
    }
    qtrim(&mut r);
    r
}

fn qdivrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    qtrim(&mut r);
    let bl = b.len();
    let blc = b.last().unwrap().clone();
    if r.len() < bl {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - bl + 1];
    while r.len() >= bl {
        let k = r.len() - bl;
        let f = r.last().unwrap() / &blc;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &f * bj;
        }
        q[k] = f;
        r.pop();
        qtrim(&mut r);
    }
    qtrim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo the irreducible `m` over the rationals.
fn inverse_mod(a: &ZPoly, m: &ZPoly) -> QPoly {
    let to_q = |p: &ZPoly| -> QPoly { p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect() };
    let (mut r0, mut r1) = (to_q(m), to_q(a));
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    while !(r1.len() == 1) {
        assert!(!r1.is_empty(), "element not invertible modulo cyclotomic polynomial");
        let (q, r) = qdivrem(&r0, &r1);
        let s = qsub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c = r1[0].clone();
    s1.iter().map(|x| x / &c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(6), zp(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(4), zp(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), zp(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn generic_add_cancels() {
        // 1/(1-Q) + Q/(Q-1) = 1
        let a = QElem::generic(zp(&[1]), zp(&[1, -1]), 0);
        let b = QElem::generic(zp(&[0, 1]), zp(&[-1, 1]), 0);
        assert!(a.add(&b, None).is_one());
    }

    #[test]
    fn cyclotomic_inverse_round_trip() {
        let c = cyclo(12);
        let a = QElem::generic(zp(&[2, 1, 0, 3]), zp(&[1]), 0).into_ring(c);
        let b = a.inv(Some(c));
        assert!(a.mul(&b, Some(c)).is_one());
    }

    #[test]
    fn cyclotomic_q_cubed_plus_one_vanishes() {
        let c = cyclo(6);
        let q3 = QElem::q_pow(3, Some(c));
        assert!(q3.add(&QElem::one(), Some(c)).is_zero());
    }
}
