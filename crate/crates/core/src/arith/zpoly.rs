//! Dense univariate polynomials over the integers.
//!
//! This is the workhorse under the coefficient field: every rational function
//! in `Q` is a ratio of two of these. The gcd is a small-prime modular
//! algorithm (CRT lifting plus trial division), which keeps coefficient
//! growth out of the Euclidean remainder sequence.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp;

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly{:?}", self.c.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * Q^k`.
    pub fn monomial(k: usize, c: BigInt) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.c.get(k).cloned().unwrap_or_default()
    }

    /// Number of leading zero coefficients from the bottom (the power of `Q`
    /// dividing the polynomial).
    pub fn trailing_zeros(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.c.iter().cloned());
        ZPoly { c: v }
    }

    /// Divide by `Q^k`; the caller guarantees exactness.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.trailing_zeros() >= k || self.is_zero());
        ZPoly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    pub fn neg(&self) -> Self {
        ZPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        let mut v = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        ZPoly { c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_scalar(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        ZPoly { c: self.c.iter().map(|x| x / k).collect() }
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        self.div_scalar(&g)
    }

    /// Coefficients reduced into `[0, p)`, trimmed.
    pub fn eval_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self
            .c
            .iter()
            .map(|x| {
                let r = x.mod_floor(&pb);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Exact division over the integers. Returns `None` when `d` does not
    /// divide `self` in `Z[Q]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.c.len() == 1 {
            let k = &d.c[0];
            let mut v = Vec::with_capacity(self.c.len());
            for x in &self.c {
                let (q, r) = x.div_rem(k);
                if !r.is_zero() {
                    return None;
                }
                v.push(q);
            }
            return Some(ZPoly { c: v });
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let dlc = d.lc();
        let mut q = vec![BigInt::zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(&dlc);
            if !rr.is_zero() {
                return None;
            }
            for (j, dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    r[i + j] -= &qq * dc;
                }
            }
            q[i] = qq;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(q))
    }

    /// Gcd in `Z[Q]`, including the integer content, normalised to a
    /// positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive_with_content();
        }
        if o.is_zero() {
            return self.primitive_with_content();
        }
        let ca = self.content();
        let cb = o.content();
        let c = ca.gcd(&cb);
        if self.c.len() == 1 || o.c.len() == 1 {
            return Self::constant(c);
        }
        let a = self.div_scalar(&ca);
        let b = o.div_scalar(&cb);
        // Common powers of Q are handled outside the modular loop.
        let tz = a.trailing_zeros().min(b.trailing_zeros());
        let a = a.shift_down(a.trailing_zeros());
        let b = b.shift_down(b.trailing_zeros());
        let g = if a == b || a == b.neg() {
            a.primitive()
        } else if a.c.len() == 1 || b.c.len() == 1 {
            Self::one()
        } else if let Some(_) = a.div_exact(&b) {
            b.primitive()
        } else if let Some(_) = b.div_exact(&a) {
            a.primitive()
        } else {
            modular_gcd(&a, &b)
        };
        g.shift_up(tz).scale(&c)
    }

    fn primitive_with_content(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Evaluate at an integer.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &Self) -> Self {
        debug_assert!(m.lc().is_one());
        let dl = m.c.len();
        if self.c.len() < dl {
            return self.clone();
        }
        let mut r = self.c.clone();
        for i in (0..=r.len() - dl).rev() {
            let top = r[i + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            for (j, mc) in m.c.iter().enumerate() {
                if !mc.is_zero() {
                    r[i + j] -= &top * mc;
                }
            }
        }
        Self::from_coeffs(r)
    }
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut v = Vec::with_capacity(4096);
        let mut n: u64 = (1u64 << 62) - 57;
        while v.len() < 4096 {
            if modp::is_prime(n) {
                v.push(n);
            }
            n -= 2;
        }
        v
    })
}

fn symmetric(x: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    if x > half {
        x - m
    } else {
        x.clone()
    }
}

/// Gcd of two primitive polynomials with nonzero constant terms, degrees
/// at least one. Result primitive with positive leading coefficient.
fn modular_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let lcg = a.lc().gcd(&b.lc());
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut best_deg = usize::MAX;
    let mut last: Option<ZPoly> = None;
    for &p in primes() {
        let pb = BigInt::from(p);
        if (a.lc() % &pb).is_zero() || (b.lc() % &pb).is_zero() {
            continue;
        }
        let ap = a.eval_mod(p);
        let bp = b.eval_mod(p);
        let mut g = modp::gcd(&ap, &bp, p);
        let deg = g.len() - 1;
        if deg == 0 {
            return ZPoly::one();
        }
        if deg > best_deg {
            continue;
        }
        let lcgp = lcg.mod_floor(&pb).to_u64_digits().1.first().copied().unwrap_or(0);
        for c in g.iter_mut() {
            *c = modp::mul(*c, lcgp, p);
        }
        if deg < best_deg {
            best_deg = deg;
            modulus = pb.clone();
            acc = g.iter().map(|&c| BigInt::from(c)).collect();
            last = None;
            continue;
        }
        // CRT combine.
        let minv = modp::inv((&modulus % &pb).to_u64_digits().1.first().copied().unwrap_or(0), p);
        for (i, c) in g.iter().enumerate() {
            let cur = (&acc[i] % &pb).to_u64_digits().1.first().copied().unwrap_or(0);
            let diff = modp::sub(*c, cur, p);
            let t = modp::mul(diff, minv, p);
            acc[i] = &acc[i] + &modulus * BigInt::from(t);
        }
        modulus *= &pb;
        let half: BigInt = &modulus >> 1;
        let cand = ZPoly::from_coeffs(acc.iter().map(|x| symmetric(x, &modulus, &half)).collect());
        if last.as_ref() == Some(&cand) {
            let h = cand.primitive();
            if a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                return h;
            }
        }
        last = Some(cand);
    }
    panic!("modular gcd exhausted prime table");
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "Q")?,
                (1, false) => write!(f, "{a}*Q")?,
                (_, true) => write!(f, "Q^{k}")?,
                (_, false) => write!(f, "{a}*Q^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn gcd_of_products() {
        let f = p(&[1, -1]); // 1 - Q
        let g = p(&[3, 0, 2]);
        let h = p(&[-5, 7, 1]);
        let a = f.mul(&g).mul(&f);
        let b = f.mul(&h).scale(&BigInt::from(6));
        assert_eq!(a.gcd(&b), f.primitive());
    }

    #[test]
    fn gcd_includes_content_and_q_powers() {
        let a = p(&[0, 0, 4, 6]); // 2Q^2 (2 + 3Q)
        let b = p(&[0, 6, 9]); // 3Q (2 + 3Q)
        assert_eq!(a.gcd(&b), p(&[0, 2, 3]));
    }

    #[test]
    fn coprime_large() {
        let a = p(&[1, 2, 3, 4, 5, 6, 7]);
        let b = p(&[7, 0, -1, 0, 3]);
        assert_eq!(a.gcd(&b), ZPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 1]).mul(&p(&[2, 0, 1]));
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[2, 0, 1])));
        assert_eq!(a.div_exact(&p(&[1, 2])), None);
    }

    #[test]
    fn display_descending() {
        assert_eq!(p(&[1, -3, 0, 1]).to_string(), "Q^3 - 3*Q + 1");
    }
}
