//! Quasi-polynomials `x^alpha * p(x, log x)` and their discrete Wronskians.
//!
//! The exponent prefactor is tracked separately from the body, so every
//! determinant is computed in `Scalar[x, s]`. `s` stands for `log x`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Body, Poly};
use crate::scalars::{Field, Scalar};

pub mod identities;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct QuasiPolynomial {
    exponent: Option<Rational64>,
    body: Body,
}

impl fmt::Debug for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            None => write!(f, "0"),
            Some(a) => {
                write!(f, "x^({a})*[")?;
                for (i, (xd, sd, c)) in self.body.terms().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({xd},{sd}: {c})")?;
                }
                write!(f, "]")
            }
        }
    }
}

pub(crate) fn rat_str(r: Rational64) -> String {
    r.to_string()
}

impl QuasiPolynomial {
    /// The canonical zero, which has no type.
    pub fn zero() -> Self {
        QuasiPolynomial { exponent: None, body: Body::zero() }
    }

    pub fn new(exponent: Rational64, body: Body) -> Self {
        if body.is_zero() {
            return Self::zero();
        }
        QuasiPolynomial { exponent: Some(exponent), body }
    }

    pub fn log_free(exponent: Rational64, p: Poly) -> Self {
        Self::new(exponent, Body::from_poly(p))
    }

    /// `x^alpha`.
    pub fn monomial(exponent: Rational64) -> Self {
        Self::log_free(exponent, Poly::one())
    }

    pub fn exponent(&self) -> Option<Rational64> {
        self.exponent
    }

    /// Exponent, reading 0 for the zero quasi-polynomial.
    pub fn alpha(&self) -> Rational64 {
        self.exponent.unwrap_or_else(Rational64::zero)
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    pub fn is_log_free(&self) -> bool {
        self.body.is_log_free()
    }

    /// The polynomial `p(x)` of a log-free quasi-polynomial.
    pub fn poly(&self) -> Result<Poly> {
        if !self.is_log_free() {
            return Err(Error::NotLogFree(self.to_string()));
        }
        Ok(self.body.coeff(0))
    }

    pub fn neg(&self) -> Self {
        QuasiPolynomial { exponent: self.exponent, body: self.body.neg() }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        match (self.exponent, o.exponent) {
            (None, _) => Ok(o.clone()),
            (_, None) => Ok(self.clone()),
            (Some(a), Some(b)) if a == b => Ok(Self::new(a, self.body.add(&o.body))),
            (Some(a), Some(b)) => Err(Error::TypeMismatch(rat_str(a), rat_str(b))),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self.exponent, o.exponent) {
            (Some(a), Some(b)) => Self::new(a + b, self.body.mul(&o.body)),
            _ => Self::zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        match self.exponent {
            Some(a) => Self::new(a, self.body.scale(c)),
            None => Self::zero(),
        }
    }

    /// Multiply the body by a polynomial in `x`; the type is unchanged.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        match self.exponent {
            Some(a) => Self::new(a, self.body.mul_poly(p)),
            None => Self::zero(),
        }
    }

    /// Re-express with exponent `alpha - k`, multiplying the body by `x^k`.
    pub fn with_exponent(&self, alpha: Rational64) -> Result<Self> {
        let Some(a) = self.exponent else { return Ok(Self::zero()) };
        let d = a - alpha;
        if !d.is_integer() || d < Rational64::zero() {
            return Err(Error::Precondition(format!("cannot rewrite type {a} as type {alpha}")));
        }
        Ok(Self::new(alpha, self.body.mul_x_pow(d.to_integer() as usize)))
    }

    /// `f(x q^{2k})`.
    pub fn shift(&self, field: &Field, k: i64) -> Self {
        let Some(a) = self.exponent else { return Self::zero() };
        if k == 0 {
            return self.clone();
        }
        let d = field.denominator() as i64;
        let pre = field.q_pow(2 * k * field.lattice(a).expect("exponent on the lattice"));
        let xs = field.q_pow(2 * k * d);
        let h = &field.log_q() * &Scalar::from_int(2 * k);
        Self::new(a, self.body.substitute(&xs, &h).scale(&pre))
    }

    /// Body of `f(x q^{2k})` with the `x^alpha` prefactor removed.
    fn shifted_body(&self, field: &Field, k: i64) -> Body {
        self.shift(field, k).body
    }
}

/// Laplace expansion over column subsets. For `rows.len() = r` and `ncols`
/// columns, returns a table indexed by column bitmask: entry `S` with
/// `|S| = r` holds the minor on all rows and the columns `S`.
pub(crate) fn minors_table(rows: &[Vec<Body>], ncols: usize) -> Vec<Body> {
    let n = 1usize << ncols;
    let mut cur = vec![Body::zero(); n];
    cur[0] = Body::one();
    for (r, row) in rows.iter().enumerate() {
        let mut next = vec![Body::zero(); n];
        for mask in 0..n {
            if mask.count_ones() as usize != r + 1 {
                continue;
            }
            let mut acc = Body::zero();
            for c in 0..ncols {
                if mask & (1 << c) == 0 || row[c].is_zero() {
                    continue;
                }
                let rest = mask & !(1 << c);
                if cur[rest].is_zero() {
                    continue;
                }
                let greater = (mask >> (c + 1)).count_ones();
                let term = row[c].mul(&cur[rest]);
                acc = if greater % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            next[mask] = acc;
        }
        cur = next;
    }
    cur
}

/// Rows `body_i(x q^{-2j}, s - 2jL)` (with the prefactor) for `j < ncols`.
pub(crate) fn shift_rows(field: &Field, fs: &[QuasiPolynomial], ncols: usize) -> Vec<Vec<Body>> {
    fs.iter().map(|f| (0..ncols).map(|j| f.shifted_body(field, -(j as i64))).collect()).collect()
}

/// Discrete Wronskian `det(g_i(x q^{-2(j-1)}))`. The empty Wronskian is 1.
pub fn wronskian(field: &Field, fs: &[QuasiPolynomial]) -> QuasiPolynomial {
    if fs.iter().any(|f| f.is_zero()) {
        return QuasiPolynomial::zero();
    }
    let alpha: Rational64 = fs.iter().map(|f| f.alpha()).sum();
    let k = fs.len();
    if k == 0 {
        return QuasiPolynomial::monomial(Rational64::zero());
    }
    if k == 1 {
        return fs[0].clone();
    }
    let rows = shift_rows(field, fs, k);
    let t = minors_table(&rows, k);
    QuasiPolynomial::new(alpha, t[(1 << k) - 1].clone())
}

/// Whether `r` divides every `s`-coefficient of the body; the quotient when it does.
pub fn poly_divides(r: &Poly, f: &QuasiPolynomial) -> Result<Option<QuasiPolynomial>> {
    if r.is_zero() {
        return Err(Error::ZeroInput("divisor polynomial is zero".into()));
    }
    let Some(a) = f.exponent else { return Ok(Some(QuasiPolynomial::zero())) };
    Ok(f.body.div_exact_poly(r).map(|b| QuasiPolynomial::new(a, b)))
}

/// `<f / g>_+`: polynomial part of the body ratio, type `alpha_f - alpha_g`.
pub fn polynomial_part(f: &QuasiPolynomial, g: &QuasiPolynomial) -> Result<QuasiPolynomial> {
    if g.is_zero() {
        return Err(Error::ZeroInput("polynomial part by zero".into()));
    }
    let r = g.poly()?;
    let Some(a) = f.exponent else { return Ok(QuasiPolynomial::zero()) };
    Ok(QuasiPolynomial::new(a - g.alpha(), f.body.poly_part(&r)))
}

/// `f / g` when `g` (log-free) divides `f` exactly.
pub fn exact_quotient(f: &QuasiPolynomial, g: &QuasiPolynomial, what: &str) -> Result<QuasiPolynomial> {
    let h = polynomial_part(f, g)?;
    if &h.mul(g) != f {
        return Err(Error::Division(what.to_string()));
    }
    Ok(h)
}

/// `<f>`: `x^alpha` times the coefficient of the top power of `s`.
pub fn top_part(f: &QuasiPolynomial) -> Result<QuasiPolynomial> {
    let Some(a) = f.exponent else { return Err(Error::ZeroInput("top part of zero".into())) };
    Ok(QuasiPolynomial::log_free(a, f.body.top()))
}

/// Monic gcd of all `s`-coefficients of all bodies.
pub fn content_gcd(fs: &[QuasiPolynomial]) -> Result<Poly> {
    let mut g = Poly::zero();
    for f in fs {
        for p in f.body.coeffs() {
            g = g.gcd(p);
        }
    }
    if g.is_zero() {
        return Err(Error::ZeroInput("content of all-zero inputs".into()));
    }
    Ok(g)
}

/// `x^alpha * N(x, s) / d(x)` with `d` monic and coprime to the content of `N`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QuasiRational {
    exponent: Option<Rational64>,
    num: Body,
    den: Poly,
}

impl fmt::Debug for QuasiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuasiRational({:?} / {:?})", QuasiPolynomial::new(self.alpha(), self.num.clone()), self.den)
    }
}

impl QuasiRational {
    pub fn zero() -> Self {
        QuasiRational { exponent: None, num: Body::zero(), den: Poly::one() }
    }

    pub fn new(exponent: Rational64, num: Body, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.content().gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact_poly(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if !den.is_monic() {
            let inv = den.lc().inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(QuasiRational { exponent: Some(exponent), num, den })
    }

    pub fn from_qp(f: &QuasiPolynomial) -> Self {
        match f.exponent {
            None => Self::zero(),
            Some(a) => QuasiRational { exponent: Some(a), num: f.body.clone(), den: Poly::one() },
        }
    }

    /// `f / g` for a log-free `g`.
    pub fn ratio(f: &QuasiPolynomial, g: &QuasiPolynomial) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = g.poly()?;
        match f.exponent {
            None => Ok(Self::zero()),
            Some(a) => Self::new(a - g.alpha(), f.body.clone(), d),
        }
    }

    pub fn exponent(&self) -> Option<Rational64> {
        self.exponent
    }

    pub fn alpha(&self) -> Rational64 {
        self.exponent.unwrap_or_else(Rational64::zero)
    }

    pub fn num(&self) -> &Body {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    pub fn s_degree(&self) -> usize {
        self.num.s_degree()
    }

    pub fn mul_qp(&self, f: &QuasiPolynomial) -> Self {
        match (self.exponent, f.exponent) {
            (Some(a), Some(b)) => Self::new(a + b, self.num.mul(&f.body), self.den.clone()).expect("nonzero denominator"),
            _ => Self::zero(),
        }
    }

    /// Interpret as a quasi-polynomial, moving any `x`-power of the
    /// denominator into the exponent. `None` if a genuine denominator remains.
    pub fn to_qp(&self) -> Option<QuasiPolynomial> {
        let a = self.exponent?;
        let k = self.den.x_order();
        let d = self.den.div_x_pow(k);
        let body = self.num.div_exact_poly(&d)?;
        Some(QuasiPolynomial::new(a - Rational64::from_integer(k as i64), body))
    }

    /// Sum as functions; exponents must agree modulo integers.
    pub fn add(&self, o: &Self) -> Result<Self> {
        let (Some(a), Some(b)) = (self.exponent, o.exponent) else {
            return Ok(if self.is_zero() { o.clone() } else { self.clone() });
        };
        let d = a - b;
        if !d.is_integer() {
            return Err(Error::TypeMismatch(rat_str(a), rat_str(b)));
        }
        let k = d.to_integer();
        let (e, l, r) = if k >= 0 {
            (b, self.num.mul_x_pow(k as usize), o.num.clone())
        } else {
            (a, self.num.clone(), o.num.mul_x_pow((-k) as usize))
        };
        let num = l.mul_poly(&o.den).add(&r.mul_poly(&self.den));
        Self::new(e, num, self.den.mul(&o.den))
    }

    /// Order at `x = 0` of the rational part: `ord num - ord den`.
    pub fn order_at_zero(&self) -> i64 {
        self.num.x_order() as i64 - self.den.x_order() as i64
    }

    /// The value, if this is a constant function.
    pub fn as_constant(&self) -> Option<Scalar> {
        let Some(a) = self.exponent else { return Some(Scalar::zero()) };
        if !self.num.is_log_free() {
            return None;
        }
        let n = self.num.coeff(0);
        let (kn, kd) = (n.x_order(), self.den.x_order());
        let (n0, d0) = (n.div_x_pow(kn), self.den.div_x_pow(kd));
        let total = a + Rational64::from_integer(kn as i64 - kd as i64);
        (n0.is_constant() && d0.is_one() && total.is_zero()).then(|| n0.lc())
    }

    /// Equality as functions: exponents may differ by an integer.
    pub fn same_value(&self, o: &Self) -> bool {
        match (self.exponent, o.exponent) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                let d = a - b;
                if !d.is_integer() {
                    return false;
                }
                let k = d.to_integer();
                let (mut l, mut r) = (self.num.mul_poly(&o.den), o.num.mul_poly(&self.den));
                if k >= 0 {
                    l = l.mul_x_pow(k as usize);
                } else {
                    r = r.mul_x_pow((-k) as usize);
                }
                l == r
            }
            _ => false,
        }
    }
}

/// `c(x) = c(x q^{-2})` as an exact identity.
pub fn is_quasi_constant(field: &Field, c: &QuasiRational) -> bool {
    let Some(a) = c.exponent else { return true };
    let Ok(na) = field.lattice(a) else { return false };
    let pre = field.q_pow(-2 * na);
    let xs = field.q_pow(-2 * field.denominator() as i64);
    let h = &field.log_q() * &Scalar::from_int(-2);
    let lhs = c.num.substitute(&xs, &h).scale(&pre).mul_poly(&c.den);
    let rhs = c.num.mul_poly(&c.den.scale_var(&xs));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn example_u(f: &Field) -> (QuasiPolynomial, QuasiPolynomial) {
        let u1 = QuasiPolynomial::log_free(r(1, 1), Poly::one());
        let c0 = f.one().try_div(&(&f.one() - &f.q_pow(-2))).unwrap();
        let c1 = f.q_pow(2).try_div(&(&f.log_q() * &f.int(2))).unwrap();
        let body = Body::from_terms(&[(0, 0, c0), (1, 1, c1)]);
        (u1, QuasiPolynomial::new(r(0, 1), body))
    }

    #[test]
    fn shift_of_x() {
        let f = Field::generic(1);
        let x = QuasiPolynomial::monomial(r(1, 1));
        let s = x.shift(&f, -1);
        assert_eq!(s, x.scale(&f.q_pow(-2)));
    }

    #[test]
    fn shift_of_log() {
        let f = Field::generic(1);
        let s = QuasiPolynomial::new(r(0, 1), Body::from_terms(&[(0, 1, f.one())]));
        let t = s.shift(&f, -1);
        let want = Body::from_terms(&[(0, 1, f.one()), (0, 0, &f.log_q() * &f.int(-2))]);
        assert_eq!(t.body(), &want);
    }

    #[test]
    fn shift_of_example_u2() {
        let f = Field::generic(1);
        let (_, u2) = example_u(&f);
        let t = u2.shift(&f, -1);
        // 1/(1-q^-2) + x (s - 2L)/(2L)
        let c0 = f.one().try_div(&(&f.one() - &f.q_pow(-2))).unwrap();
        let c1 = f.one().try_div(&(&f.log_q() * &f.int(2))).unwrap();
        let want = Body::from_terms(&[(0, 0, c0), (1, 1, c1), (1, 0, f.int(-1))]);
        assert_eq!(t.body(), &want);
    }

    #[test]
    fn example_wronskian() {
        let f = Field::generic(1);
        let (u1, u2) = example_u(&f);
        let w = wronskian(&f, &[u1.clone(), u2.clone()]);
        assert_eq!(w, QuasiPolynomial::log_free(r(1, 1), Poly::from_ints(&[1, -1])));
        assert_eq!(wronskian(&f, &[u1.clone()]), u1);
        assert!(wronskian(&f, &[u2.clone(), u2]).is_zero());
    }

    #[test]
    fn mismatched_types_do_not_add() {
        let a = QuasiPolynomial::monomial(r(1, 1));
        let b = QuasiPolynomial::monomial(r(0, 1));
        assert!(matches!(a.add(&b), Err(Error::TypeMismatch(..))));
        assert_eq!(a.add(&QuasiPolynomial::zero()).unwrap(), a);
        let h = QuasiPolynomial::monomial(r(1, 2));
        assert_eq!(h.mul(&h), a);
    }

    #[test]
    fn divisibility_and_parts() {
        let w = QuasiPolynomial::log_free(r(1, 1), Poly::from_ints(&[0, 1, -1]));
        let q = poly_divides(&Poly::x(), &w).unwrap().unwrap();
        assert_eq!(q.poly().unwrap(), Poly::from_ints(&[1, -1]));
        let f = QuasiPolynomial::new(r(0, 1), Body::from_coeffs(vec![Poly::x(), Poly::x()]));
        assert!(poly_divides(&Poly::from_ints(&[-1, 1]), &f).unwrap().is_none());
        assert!(poly_divides(&Poly::zero(), &f).is_err());

        let g = QuasiPolynomial::log_free(r(0, 1), Poly::x());
        let h = polynomial_part(&QuasiPolynomial::log_free(r(0, 1), Poly::from_ints(&[1, 0, 1])), &g).unwrap();
        assert_eq!(h.poly().unwrap(), Poly::x());
        let sx2 = QuasiPolynomial::new(r(0, 1), Body::from_coeffs(vec![Poly::zero(), Poly::from_ints(&[0, 0, 1])]));
        let h = polynomial_part(&sx2, &QuasiPolynomial::log_free(r(0, 1), Poly::from_ints(&[-1, 1]))).unwrap();
        assert_eq!(h.body(), &Body::from_coeffs(vec![Poly::zero(), Poly::from_ints(&[1, 1])]));
        assert!(polynomial_part(&sx2, &sx2).is_err());
    }

    #[test]
    fn top_parts() {
        let f = Field::generic(1);
        let (u1, u2) = example_u(&f);
        assert_eq!(top_part(&u1).unwrap(), u1);
        let c1 = f.q_pow(2).try_div(&(&f.log_q() * &f.int(2))).unwrap();
        assert_eq!(top_part(&u2).unwrap(), QuasiPolynomial::log_free(r(0, 1), Poly::monomial(1, c1)));
        let g = QuasiPolynomial::new(r(0, 1), Body::from_terms(&[(1, 2, f.one()), (0, 1, f.one())]));
        assert_eq!(top_part(&g).unwrap().poly().unwrap(), Poly::x());
    }

    #[test]
    fn quasi_constants() {
        let g = Field::generic(1);
        assert!(is_quasi_constant(&g, &QuasiRational::from_qp(&QuasiPolynomial::log_free(r(0, 1), Poly::from_ints(&[5])))));
        let x = QuasiRational::from_qp(&QuasiPolynomial::monomial(r(1, 1)));
        assert!(!is_quasi_constant(&g, &x));
        let c = Field::cyclotomic(6, 1).unwrap();
        let x3 = QuasiRational::from_qp(&QuasiPolynomial::monomial(r(3, 1)));
        assert!(is_quasi_constant(&c, &x3));
    }

    #[test]
    fn contents() {
        let a = QuasiPolynomial::log_free(r(0, 1), Poly::from_ints(&[0, -1, 1]));
        assert_eq!(content_gcd(&[a.clone()]).unwrap(), Poly::from_ints(&[0, -1, 1]));
        let b = QuasiPolynomial::log_free(r(0, 1), Poly::x());
        assert_eq!(content_gcd(&[a, b]).unwrap(), Poly::x());
        let c = QuasiPolynomial::new(r(0, 1), Body::from_coeffs(vec![Poly::from_ints(&[-1, 1]), Poly::from_ints(&[-1, 0, 1])]));
        let d = QuasiPolynomial::log_free(r(0, 1), Poly::from_ints(&[1, -2, 1]));
        assert_eq!(content_gcd(&[c, d]).unwrap(), Poly::from_ints(&[-1, 1]));
        assert!(content_gcd(&[QuasiPolynomial::zero()]).is_err());
    }
}
