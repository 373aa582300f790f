//! Polynomials in `x` over [`Scalar`], and bivariate bodies in `(x, s)`.

use std::fmt;

use crate::arith::modp;
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Dense polynomial in `x`, ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(k: usize, c: Scalar) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_default()
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

    /// Degree; zero reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    /// Order of vanishing at `x = 0`.
    pub fn x_order(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![Scalar::zero(); k];
        v.extend(self.c.iter().cloned());
        Poly { c: v }
    }

    /// Exact division by `x^k`.
    pub fn div_x_pow(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || self.x_order() >= k);
        Self::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    pub fn neg(&self) -> Self {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.c.get(i), o.c.get(i)) {
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
        let mut v = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = &v[i + j] + &(a * b);
                }
            }
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        Poly { c: self.c.iter().map(|x| x * k).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(&self.lc().inv().expect("nonzero leading coefficient"))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dl = d.c.len();
        let mut r = self.c.clone();
        if r.len() < dl {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lc().inv().expect("nonzero");
        let mut q = vec![Scalar::zero(); r.len() - dl + 1];
        while r.len() >= dl {
            let k = r.len() - dl;
            let top = r.last().unwrap();
            if !top.is_zero() {
                let f = top * &inv;
                for (j, dc) in d.c.iter().enumerate() {
                    if !dc.is_zero() {
                        r[k + j] = &r[k + j] - &(&f * dc);
                    }
                }
                q[k] = f;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.div_rem(self).1.is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.coprime_image(o) {
            return Poly::one();
        }
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            if b.is_constant() {
                return Poly::one();
            }
            let r = a.div_rem(&b).1.monic();
            a = std::mem::replace(&mut b, r);
        }
        a
    }

    /// Exact coprimality certificate: specialise `Q -> t` modulo a prime.
    /// A monic common divisor has coefficients in the local ring at that
    /// point, so its image divides both images; when the leading
    /// coefficients survive and the images are coprime, so are the inputs.
    fn coprime_image(&self, o: &Self) -> bool {
        const P: u64 = (1 << 61) - 1;
        const T: u64 = 1_000_003;
        if self.is_constant() || o.is_constant() {
            return false;
        }
        let image = |f: &Poly| f.c.iter().map(|c| c.eval_mod(T, P)).collect::<Option<Vec<u64>>>();
        let (Some(a), Some(b)) = (image(self), image(o)) else { return false };
        if a.last() == Some(&0) || b.last() == Some(&0) {
            return false;
        }
        modp::gcd(&a, &b, P).len() == 1
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(o);
        self.div_exact(&g).expect("gcd divides").mul(o).monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.c.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_int(k as i64)).collect())
    }

    /// `p(c x)`.
    pub fn scale_var(&self, c: &Scalar) -> Self {
        if c.is_one() {
            return self.clone();
        }
        let mut pw = Scalar::one();
        let mut v = Vec::with_capacity(self.c.len());
        for a in &self.c {
            v.push(a * &pw);
            pw = &pw * c;
        }
        Self::from_coeffs(v)
    }

    /// `p(q(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }
}

fn fmt_coeff_term(c: &Scalar, k: usize) -> (bool, String) {
    let mono = match k {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{k}"),
    };
    if let Some(r) = c.to_rational() {
        let neg = r < num_rational::BigRational::from_integer(0.into());
        let r = if neg { -r } else { r };
        let abs = if r.is_integer() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
        let body = if k == 0 {
            abs
        } else if abs == "1" {
            mono
        } else {
            format!("{abs}*{mono}")
        };
        (neg, body)
    } else if k == 0 {
        (false, format!("({c})"))
    } else {
        (false, format!("({c})*{mono}"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = fmt_coeff_term(c, k);
            if first {
                write!(f, "{}{body}", if neg { "-" } else { "" })?;
            } else {
                write!(f, "{}{body}", if neg { " - " } else { " + " })?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Polynomial in `s` with coefficients in `Scalar[x]`: index = `s`-degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Body {
    c: Vec<Poly>,
}

impl fmt::Debug for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Body{:?}", self.c)
    }
}

impl Body {
    pub fn zero() -> Self {
        Body { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_coeffs(vec![p])
    }

    pub fn from_coeffs(mut c: Vec<Poly>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Body { c }
    }

    /// Build from `(x-degree, s-degree, coefficient)` triples.
    pub fn from_terms(terms: &[(usize, usize, Scalar)]) -> Self {
        let smax = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut c = vec![Vec::<Scalar>::new(); smax + 1];
        for (xd, sd, v) in terms {
            let row = &mut c[*sd];
            if row.len() <= *xd {
                row.resize(xd + 1, Scalar::zero());
            }
            row[*xd] = &row[*xd] + v;
        }
        Self::from_coeffs(c.into_iter().map(Poly::from_coeffs).collect())
    }

    /// Nonzero `(x-degree, s-degree, coefficient)` triples, descending.
    pub fn terms(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (sd, p) in self.c.iter().enumerate() {
            for (xd, v) in p.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    out.push((xd, sd, v.clone()));
                }
            }
        }
        out.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
        out
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Poly {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_log_free(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn s_degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn x_degree(&self) -> usize {
        self.c.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Coefficient of the highest power of `s`.
    pub fn top(&self) -> Poly {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn x_order(&self) -> usize {
        self.c.iter().filter(|p| !p.is_zero()).map(|p| p.x_order()).min().unwrap_or(0)
    }

    pub fn mul_x_pow(&self, k: usize) -> Self {
        Body { c: self.c.iter().map(|p| p.mul_x_pow(k)).collect() }
    }

    pub fn div_x_pow(&self, k: usize) -> Self {
        Body { c: self.c.iter().map(|p| p.div_x_pow(k)).collect() }
    }

    pub fn neg(&self) -> Self {
        Body { c: self.c.iter().map(|p| p.neg()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.add(b),
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
            return self.mul_poly(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.mul_poly(&self.c[0]);
        }
        let mut v = vec![Poly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(v)
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::from_coeffs(self.c.iter().map(|a| a.mul(p)).collect())
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self::from_coeffs(self.c.iter().map(|a| a.scale(k)).collect())
    }

    /// `body(c x, s + h)`.
    pub fn substitute(&self, c: &Scalar, h: &Scalar) -> Self {
        let scaled: Vec<Poly> = self.c.iter().map(|p| p.scale_var(c)).collect();
        if h.is_zero() || scaled.len() <= 1 {
            return Self::from_coeffs(scaled);
        }
        // Horner in s: acc = acc * (s + h) + P_k.
        let mut acc = Body::zero();
        let lin = Body::from_coeffs(vec![Poly::constant(h.clone()), Poly::one()]);
        for p in scaled.into_iter().rev() {
            acc = acc.mul(&lin).add(&Body::from_poly(p));
        }
        acc
    }

    /// Exact division of every `s`-coefficient by `r`.
    pub fn div_exact_poly(&self, r: &Poly) -> Option<Self> {
        let mut v = Vec::with_capacity(self.c.len());
        for p in &self.c {
            v.push(p.div_exact(r)?);
        }
        Some(Self::from_coeffs(v))
    }

    /// Polynomial part of `body / r`, coefficientwise.
    pub fn poly_part(&self, r: &Poly) -> Self {
        Self::from_coeffs(self.c.iter().map(|p| p.div_rem(r).0).collect())
    }

    /// Monic gcd of all `s`-coefficients.
    pub fn content(&self) -> Poly {
        let mut g = Poly::zero();
        for p in &self.c {
            g = g.gcd(p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn try_content(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroInput("content of the zero body".into()));
        }
        Ok(self.content())
    }
}
