//! The coefficient field.
//!
//! A [`Scalar`] is a rational function `A(L)/B(L)` whose coefficients live in
//! `K`, where `K = Q(Q)` for a formal `Q` or `K = Q(zeta_m)` when `Q` is a
//! primitive `m`-th root of unity. Here `q = Q^D` and `L = log q`. The
//! denominator `B` is monic in `L` and coprime to `A`, which makes the
//! representation unique.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::arith::qelem::{cyclo, QElem, Ring};
use crate::arith::zpoly::ZPoly;
use crate::error::{Error, Result};
use crate::parse::{self, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Generic,
    Cyclotomic(u32),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Generic => write!(f, "generic"),
            Mode::Cyclotomic(m) => write!(f, "cyclotomic:{m}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "generic" {
            return Ok(Mode::Generic);
        }
        if let Some(m) = s.strip_prefix("cyclotomic:") {
            let m: u32 = m.trim().parse().map_err(|_| Error::InvalidField(format!("bad modulus in {s:?}")))?;
            return Ok(Mode::Cyclotomic(m));
        }
        Err(Error::InvalidField(format!("unknown field mode {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldConfig {
    pub mode: Mode,
    pub denominator: u32,
}

impl FieldConfig {
    pub fn generic(denominator: u32) -> Self {
        FieldConfig { mode: Mode::Generic, denominator }
    }

    pub fn cyclotomic(m: u32, denominator: u32) -> Self {
        FieldConfig { mode: Mode::Cyclotomic(m), denominator }
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} D={}", self.mode, self.denominator)
    }
}

/// A validated field configuration. All scalar constructors that involve `Q`
/// go through here so that they pick up the cyclotomic relation.
#[derive(Clone, Debug)]
pub struct Field {
    config: FieldConfig,
    ring: Ring,
}

impl Field {
    /// Validate a configuration and build its context.
    pub fn new(config: FieldConfig) -> Result<Field> {
        if config.denominator == 0 {
            return Err(Error::InvalidField("exponent denominator must be positive".into()));
        }
        let ring = match config.mode {
            Mode::Generic => None,
            Mode::Cyclotomic(m) => {
                if m == 0 {
                    return Err(Error::InvalidField("cyclotomic modulus must be positive".into()));
                }
                if (2 * config.denominator as u64) % m as u64 == 0 {
                    return Err(Error::InvalidField(format!(
                        "q = Q^{} satisfies q^2 = 1 when Q is a primitive {m}-th root of unity",
                        config.denominator
                    )));
                }
                Some(cyclo(m))
            }
        };
        Ok(Field { config, ring })
    }

    pub fn generic(denominator: u32) -> Field {
        Self::new(FieldConfig::generic(denominator)).expect("generic fields are always valid")
    }

    pub fn cyclotomic(m: u32, denominator: u32) -> Result<Field> {
        Self::new(FieldConfig::cyclotomic(m, denominator))
    }

    pub fn config(&self) -> FieldConfig {
        self.config
    }

    pub fn mode(&self) -> Mode {
        self.config.mode
    }

    pub fn denominator(&self) -> u32 {
        self.config.denominator
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.ring.is_some()
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn int(&self, n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    pub fn rational(&self, r: &BigRational) -> Scalar {
        Scalar::from_ratio(r)
    }

    /// `Q^k`.
    pub fn q_pow(&self, k: i64) -> Scalar {
        Scalar::from_qelem(QElem::q_pow(k, self.ring), self.ring)
    }

    /// `L = log q`.
    pub fn log_q(&self) -> Scalar {
        Scalar::from_parts(vec![QElem::zero(), QElem::one()], vec![QElem::one()], self.ring)
    }

    /// `D * beta` as an integer, or the lattice error.
    pub fn lattice(&self, beta: Rational64) -> Result<i64> {
        let v = beta * Rational64::from_integer(self.config.denominator as i64);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::OffLattice { beta: beta.to_string(), denominator: self.config.denominator })
        }
    }

    /// `q^beta = Q^{D beta}`.
    pub fn q_power(&self, beta: Rational64) -> Result<Scalar> {
        Ok(self.q_pow(self.lattice(beta)?))
    }

    /// `q^{2 beta}`; the exponent must be on the lattice.
    pub fn q2_power(&self, beta: Rational64) -> Result<Scalar> {
        Ok(self.q_pow(2 * self.lattice(beta)?))
    }

    /// Whether `q^{2e} = 1` for a lattice exponent `e`.
    pub fn q2_is_one(&self, e: Rational64) -> bool {
        let n = e * Rational64::from_integer(2 * self.config.denominator as i64);
        if !n.is_integer() {
            return false;
        }
        match self.config.mode {
            Mode::Generic => n.is_zero(),
            Mode::Cyclotomic(m) => n.to_integer().rem_euclid(m as i64) == 0,
        }
    }

    /// Smallest positive `l` with `q^{2l} = 1`, if `q` is a root of unity.
    pub fn q2_period(&self) -> Option<i64> {
        match self.config.mode {
            Mode::Generic => None,
            Mode::Cyclotomic(m) => {
                let m = m as i64;
                Some(m / m.gcd(&(2 * self.config.denominator as i64)))
            }
        }
    }

    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let ring = self.ring;
        let sym = move |name: &str| -> Option<Scalar> {
            match name {
                "Q" => Some(Scalar::from_qelem(QElem::q_pow(1, ring), ring)),
                "L" => Some(Scalar::from_parts(vec![QElem::zero(), QElem::one()], vec![QElem::one()], ring)),
                _ => None,
            }
        };
        parse::parse(s, &sym)
    }
}

fn join(a: Ring, b: Ring) -> Ring {
    match (a, b) {
        (Some(x), Some(y)) => {
            assert_eq!(x.m, y.m, "mixing scalars from different cyclotomic fields");
            a
        }
        (Some(_), None) => a,
        _ => b,
    }
}

fn same_ring(a: Ring, b: Ring) -> bool {
    a.map(|c| c.m) == b.map(|c| c.m)
}

// Polynomials in L over K, ascending, trimmed.

fn kp_trim(v: &mut Vec<QElem>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn kp_add(a: &[QElem], b: &[QElem], r: Ring) -> Vec<QElem> {
    let n = a.len().max(b.len());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        v.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y, r),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    kp_trim(&mut v);
    v
}

fn kp_neg(a: &[QElem]) -> Vec<QElem> {
    a.iter().map(|x| x.neg()).collect()
}

fn kp_scale(a: &[QElem], c: &QElem, r: Ring) -> Vec<QElem> {
    if c.is_zero() {
        return Vec::new();
    }
    if c.is_one() {
        return a.to_vec();
    }
    a.iter().map(|x| x.mul(c, r)).collect()
}

fn kp_mul(a: &[QElem], b: &[QElem], r: Ring) -> Vec<QElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 {
        return kp_scale(b, &a[0], r);
    }
    if b.len() == 1 {
        return kp_scale(a, &b[0], r);
    }
    let mut v = vec![QElem::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                v[i + j] = v[i + j].add(&x.mul(y, r), r);
            }
        }
    }
    kp_trim(&mut v);
    v
}

fn kp_divrem(a: &[QElem], b: &[QElem], r: Ring) -> (Vec<QElem>, Vec<QElem>) {
    let bl = b.len();
    let mut rem = a.to_vec();
    if rem.len() < bl {
        return (Vec::new(), rem);
    }
    let inv = b[bl - 1].inv(r);
    let mut q = vec![QElem::zero(); rem.len() - bl + 1];
    while rem.len() >= bl {
        let k = rem.len() - bl;
        let f = rem[rem.len() - 1].mul(&inv, r);
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = rem[k + j].sub(&f.mul(bj, r), r);
        }
        q[k] = f;
        rem.pop();
        kp_trim(&mut rem);
    }
    kp_trim(&mut q);
    (q, rem)
}

fn kp_monic(a: &[QElem], r: Ring) -> Vec<QElem> {
    let lc = a.last().expect("nonzero polynomial");
    if lc.is_one() {
        return a.to_vec();
    }
    kp_scale(a, &lc.inv(r), r)
}

fn kp_gcd(a: &[QElem], b: &[QElem], r: Ring) -> Vec<QElem> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![QElem::one()];
        }
        let (_, rem) = kp_divrem(&x, &y, r);
        x = std::mem::replace(&mut y, rem);
    }
    kp_monic(&x, r)
}

/// Element of the coefficient field. Immutable value; arithmetic never needs
/// the [`Field`] because the cyclotomic modulus travels with the value.
#[derive(Clone)]
pub struct Scalar {
    num: Vec<QElem>,
    den: Vec<QElem>,
    cyc: Ring,
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Vec::new(), den: vec![QElem::one()], cyc: None }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_qelem(QElem::from_int(n), None)
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::from_qelem(QElem::from_ratio(r), None)
    }

    pub fn from_qelem(c: QElem, ring: Ring) -> Self {
        let num = if c.is_zero() { Vec::new() } else { vec![c] };
        Scalar { num, den: vec![QElem::one()], cyc: ring }
    }

    fn from_parts(mut num: Vec<QElem>, mut den: Vec<QElem>, ring: Ring) -> Self {
        kp_trim(&mut num);
        kp_trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Scalar { num, den: vec![QElem::one()], cyc: ring };
        }
        if den.len() == 1 {
            if !den[0].is_one() {
                num = kp_scale(&num, &den[0].inv(ring), ring);
            }
            return Scalar { num, den: vec![QElem::one()], cyc: ring };
        }
        let g = kp_gcd(&num, &den, ring);
        if g.len() > 1 {
            num = kp_divrem(&num, &g, ring).0;
            den = kp_divrem(&den, &g, ring).0;
        }
        let lc = den.last().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv(ring);
            num = kp_scale(&num, &inv, ring);
            den = kp_scale(&den, &inv, ring);
        }
        Scalar { num, den, cyc: ring }
    }

    fn lift(&self, ring: Ring) -> Scalar {
        match (self.cyc, ring) {
            (None, Some(c)) => {
                if self.is_rational() {
                    return Scalar { cyc: ring, ..self.clone() };
                }
                let num = self.num.iter().map(|x| x.into_ring(c)).collect();
                let den = self.den.iter().map(|x| x.into_ring(c)).collect();
                Self::from_parts(num, den, ring)
            }
            _ => self.clone(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.cyc
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.den.len() == 1 && self.num[0].is_one()
    }

    /// No dependence on `L`.
    pub fn is_l_free(&self) -> bool {
        self.num.len() <= 1 && self.den.len() == 1
    }

    /// A rational constant (no `Q`, no `L`).
    pub fn is_rational(&self) -> bool {
        self.is_l_free() && self.num.first().is_none_or(|c| c.is_constant())
    }

    /// Image under `Q -> t` in `F_p` for `L`-free elements of the generic field.
    pub(crate) fn eval_mod(&self, t: u64, p: u64) -> Option<u64> {
        if self.cyc.is_some() || !self.is_l_free() {
            return None;
        }
        match self.num.first() {
            None => Some(0),
            Some(c) => c.eval_mod(t, p),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        match self.num.first() {
            None => Some(BigRational::zero()),
            Some(c) => Some(BigRational::new(c.num().lc(), c.den().lc())),
        }
    }

    fn both(&self, o: &Scalar) -> (Scalar, Scalar, Ring) {
        let r = join(self.cyc, o.cyc);
        (self.lift(r), o.lift(r), r)
    }

    pub fn add_s(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, r) = self.both(o);
        if a.is_l_free() && b.is_l_free() {
            let s = a.num[0].add(&b.num[0], r);
            return Scalar::from_qelem(s, r);
        }
        if a.den == b.den {
            return Self::from_parts(kp_add(&a.num, &b.num, r), a.den.clone(), r);
        }
        let g = kp_gcd(&a.den, &b.den, r);
        let ad = kp_divrem(&a.den, &g, r).0;
        let bd = kp_divrem(&b.den, &g, r).0;
        let num = kp_add(&kp_mul(&a.num, &bd, r), &kp_mul(&b.num, &ad, r), r);
        let den = kp_mul(&a.den, &bd, r);
        Self::from_parts(num, den, r)
    }

    pub fn neg_s(&self) -> Scalar {
        Scalar { num: kp_neg(&self.num), den: self.den.clone(), cyc: self.cyc }
    }

    pub fn sub_s(&self, o: &Scalar) -> Scalar {
        self.add_s(&o.neg_s())
    }

    pub fn mul_s(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let (a, b, r) = self.both(o);
        if a.is_l_free() && b.is_l_free() {
            return Scalar::from_qelem(a.num[0].mul(&b.num[0], r), r);
        }
        if b.is_l_free() {
            return Scalar { num: kp_scale(&a.num, &b.num[0], r), den: a.den, cyc: r };
        }
        if a.is_l_free() {
            return Scalar { num: kp_scale(&b.num, &a.num[0], r), den: b.den, cyc: r };
        }
        Self::from_parts(kp_mul(&a.num, &b.num, r), kp_mul(&a.den, &b.den, r), r)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_l_free() {
            return Ok(Scalar::from_qelem(self.num[0].inv(self.cyc), self.cyc));
        }
        Ok(Self::from_parts(self.den.clone(), self.num.clone(), self.cyc))
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul_s(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = Scalar::one().lift(self.cyc);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_s(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_s(&b);
            }
        }
        Ok(acc)
    }

    /// Numerator and denominator as polynomials in `Z[Q, L]`: entry `k` is
    /// the coefficient of `L^k`. Fully reduced, sign fixed by the
    /// denominator's leading term.
    pub fn canonical_parts(&self) -> (Vec<ZPoly>, Vec<ZPoly>) {
        let all = self.num.iter().chain(self.den.iter()).filter(|c| !c.is_zero());
        let (mut num, mut den): (Vec<ZPoly>, Vec<ZPoly>);
        match self.cyc {
            None => {
                let mut lcm = ZPoly::one();
                let mut e = i64::MAX;
                for c in all {
                    e = e.min(c.shift());
                    if !c.den().is_one() {
                        let g = lcm.gcd(c.den());
                        lcm = lcm.mul(&c.den().div_exact(&g).expect("gcd divides"));
                    }
                }
                let conv = |c: &QElem| -> ZPoly {
                    if c.is_zero() {
                        return ZPoly::zero();
                    }
                    let f = lcm.div_exact(c.den()).expect("lcm is a multiple");
                    c.num().mul(&f).shift_up((c.shift() - e) as usize)
                };
                num = self.num.iter().map(conv).collect();
                den = self.den.iter().map(conv).collect();
                let mut g = ZPoly::zero();
                for p in num.iter().chain(den.iter()) {
                    g = g.gcd(p);
                }
                if !g.is_one() {
                    num = num.iter().map(|p| p.div_exact(&g).expect("content divides")).collect();
                    den = den.iter().map(|p| p.div_exact(&g).expect("content divides")).collect();
                }
            }
            Some(_) => {
                let mut lcm = BigInt::one();
                for c in all {
                    lcm = lcm.lcm(&c.den().lc());
                }
                let conv = |c: &QElem| -> ZPoly {
                    if c.is_zero() {
                        return ZPoly::zero();
                    }
                    c.num().scale(&(&lcm / c.den().lc()))
                };
                num = self.num.iter().map(conv).collect();
                den = self.den.iter().map(conv).collect();
                let mut g = BigInt::zero();
                for p in num.iter().chain(den.iter()) {
                    g = g.gcd(&p.content());
                }
                if !g.is_one() {
                    num = num.iter().map(|p| p.div_scalar(&g)).collect();
                    den = den.iter().map(|p| p.div_scalar(&g)).collect();
                }
            }
        }
        // Leading term of the denominator in (Q-degree, L-degree) order.
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (k, p) in den.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let key = (p.degree(), k);
            if best.as_ref().is_none_or(|b| (b.0, b.1) < key) {
                best = Some((key.0, key.1, p.lc()));
            }
        }
        if best.is_some_and(|b| b.2.is_negative()) {
            num = num.iter().map(|p| p.neg()).collect();
            den = den.iter().map(|p| p.neg()).collect();
        }
        (num, den)
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

fn fmt_zql(parts: &[ZPoly]) -> String {
    let mut terms: Vec<(usize, usize, BigInt)> = Vec::new();
    for (l, p) in parts.iter().enumerate() {
        for (qd, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push((qd, l, c.clone()));
            }
        }
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
    let mut out = String::new();
    for (i, (qd, ld, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if !a.is_one() || (*qd == 0 && *ld == 0) {
            factors.push(a.to_string());
        }
        match qd {
            0 => {}
            1 => factors.push("Q".into()),
            _ => factors.push(format!("Q^{qd}")),
        }
        match ld {
            0 => {}
            1 => factors.push("L".into()),
            _ => factors.push(format!("L^{ld}")),
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.canonical_parts();
        let n = fmt_zql(&num);
        if den.len() == 1 && den[0].is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", fmt_zql(&den))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        if same_ring(self.cyc, o.cyc) {
            return self.num == o.num && self.den == o.den;
        }
        let (a, b, _) = self.both(o);
        a.num == b.num && a.den == b.den
    }
}

impl Eq for Scalar {}

macro_rules! bin_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$f(o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    };
}

bin_op!(Add, add, add_s);
bin_op!(Sub, sub, sub_s);
bin_op!(Mul, mul, mul_s);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on a zero divisor; use [`Scalar::try_div`] at API boundaries.
    fn div(self, o: &Scalar) -> Scalar {
        self.try_div(o).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_s()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_s()
    }
}

impl Expr for Scalar {
    fn from_int(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_s(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_s(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_s(o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.try_div(o)
    }
    fn neg(&self) -> Self {
        self.neg_s()
    }
    fn pow(&self, e: i64) -> Result<Self> {
        Scalar::pow(self, e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic with an explicit error for division by zero.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.try_div(b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_product() {
        let f = Field::generic(1);
        let q = f.q_pow(1);
        assert_eq!((&q * &q).to_string(), "Q^2");
    }

    #[test]
    fn inverse_of_one_minus_q_inv_sq() {
        let f = Field::generic(1);
        let d = &f.one() - &f.q_pow(-2);
        let r = scalar_arith(&f.one(), &d, ArithOp::Div).unwrap();
        assert_eq!(r.to_string(), "(Q^2)/(Q^2 - 1)");
    }

    #[test]
    fn cyclotomic_relation() {
        let f = Field::cyclotomic(6, 1).unwrap();
        let v = &f.q_pow(3) + &f.one();
        assert!(v.is_zero());
        assert_eq!(v.to_string(), "0");
    }

    #[test]
    fn q_power_lattice() {
        let f = Field::generic(2);
        assert_eq!(f.q_power(Rational64::new(1, 2)).unwrap().to_string(), "Q");
        assert!(f.q_power(Rational64::new(1, 4)).is_err());
        let c = Field::cyclotomic(4, 1).unwrap();
        assert_eq!(c.q_power(Rational64::from_integer(2)).unwrap().to_string(), "-1");
        assert!(Field::generic(1).q_power(Rational64::zero()).unwrap().is_one());
    }

    #[test]
    fn specialize_rejects_q_squared_one() {
        assert!(Field::cyclotomic(2, 1).is_err());
        assert!(Field::cyclotomic(1, 1).is_err());
        assert!(Field::cyclotomic(4, 2).is_err());
        assert!(Field::cyclotomic(6, 1).is_ok());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = Field::generic(1);
        assert_eq!(scalar_arith(&f.one(), &f.zero(), ArithOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn l_rational_functions() {
        let f = Field::generic(1);
        let l = f.log_q();
        let a = f.one().try_div(&(&l * &f.int(2))).unwrap();
        assert_eq!(a.to_string(), "(1)/(2*L)");
        let b = &(&a * &l) * &f.int(2);
        assert!(b.is_one());
        let c = f.parse("(Q*L + 1)/(Q^2*L^2 - 1)").unwrap();
        assert_eq!(c.to_string(), "(1)/(Q*L - 1)");
    }

    #[test]
    fn parse_round_trip() {
        let f = Field::generic(1);
        for s in ["Q^2*L - 3*Q + 1", "(Q^2)/(Q^2 - 1)", "-Q^3", "(2*L)/(Q + 3)", "7"] {
            let v = f.parse(s).unwrap();
            assert_eq!(v.to_string(), s);
            assert_eq!(f.parse(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn cyclotomic_canonical_is_stable() {
        let f = Field::cyclotomic(12, 2).unwrap();
        let a = f.parse("(Q + 2)/(3*Q^3 - L)").unwrap();
        let s = a.to_string();
        assert_eq!(f.parse(&s).unwrap(), a);
        assert_eq!(f.parse(&s).unwrap().to_string(), s);
    }
}
