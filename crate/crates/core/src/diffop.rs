//! Difference operators in `tau: f(x) -> f(x q^{-2})` with rational coefficients:
//! the fundamental operator of a collection, first-order factorizations, the
//! operator of a Bethe solution, kernel coordinates and regularization.

use std::fmt;

use num_rational::Rational64;

use crate::bethe::{check_weights, BetheSolution, BetheSystem, WeightMode};
use crate::error::{Error, Result};
use crate::poly::{Body, Poly};
use crate::qpoly::{minors_table, shift_rows, top_part, wronskian, QuasiPolynomial, QuasiRational};
use crate::ratfunc::RatFunc;
use crate::reconstruct::{shift_poly, Collection};
use crate::scalars::Field;

/// `a_0 + a_1 tau + ... + a_N tau^N`.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferenceOperator {
    coeffs: Vec<RatFunc>,
}

impl fmt::Debug for DifferenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DifferenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().enumerate().rev().map(|(k, a)| format!("({a})*tau^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `tau r = r(x q^{-2})` for a rational function.
fn tau_rf(field: &Field, r: &RatFunc) -> RatFunc {
    r.scale_var(&field.q_pow(-2 * field.denominator() as i64))
}

impl DifferenceOperator {
    pub fn new(coeffs: Vec<RatFunc>) -> Result<Self> {
        if coeffs.last().is_none_or(|c| c.is_zero()) {
            return Err(Error::Precondition("leading coefficient of an operator must be nonzero".into()));
        }
        Ok(DifferenceOperator { coeffs })
    }

    pub fn identity() -> Self {
        DifferenceOperator { coeffs: vec![RatFunc::one()] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        let lead = self.coeffs.last().expect("nonempty").inv().expect("nonzero leading coefficient");
        DifferenceOperator { coeffs: self.coeffs.iter().map(|c| c.mul(&lead)).collect() }
    }

    /// `(tau - g) * self`.
    pub fn left_mul_first_order(&self, field: &Field, g: &RatFunc) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![RatFunc::zero(); n + 1];
        for (k, e) in self.coeffs.iter().enumerate() {
            out[k + 1] = out[k + 1].add(&tau_rf(field, e));
            out[k] = out[k].sub(&g.mul(e));
        }
        DifferenceOperator { coeffs: out }
    }
}

/// `(tau - g_1) ... (tau - g_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderFactorization {
    pub factors: Vec<RatFunc>,
}

impl FirstOrderFactorization {
    pub fn expand(&self, field: &Field) -> DifferenceOperator {
        self.factors.iter().rev().fold(DifferenceOperator::identity(), |acc, g| acc.left_mul_first_order(field, g))
    }
}

/// `a / b` when it is a rational function of `x` alone.
pub fn body_ratio(a: &Body, b: &Body) -> Option<RatFunc> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(RatFunc::zero());
    }
    if a.s_degree() != b.s_degree() {
        return None;
    }
    let r = RatFunc::new(a.top(), b.top()).ok()?;
    (a.mul_poly(r.den()) == b.mul_poly(r.num())).then_some(r)
}

fn not_rational(what: &str) -> Error {
    Error::NotLogFree(format!("{what} is not a rational function of x"))
}

/// `D_U f = W_{N+1}[u_1, ..., u_N, f] / W_N[u_1, ..., u_N]`.
pub fn fundamental_operator(field: &Field, u: &Collection) -> Result<DifferenceOperator> {
    let n = u.len();
    let rows = shift_rows(field, u.u(), n + 1);
    let table = minors_table(&rows, n + 1);
    let full = (1usize << (n + 1)) - 1;
    let w = &table[full ^ (1 << n)];
    if w.is_zero() {
        return Err(Error::Singular("the Wronskian of the collection vanishes".into()));
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let m = &table[full ^ (1 << j)];
        let a = body_ratio(m, w).ok_or_else(|| not_rational(&format!("coefficient a_{j}")))?;
        coeffs.push(if (n + j) % 2 == 0 { a } else { a.neg() });
    }
    let op = DifferenceOperator { coeffs };

    let wq = u.wronskian(field);
    let a0 = body_ratio(wq.shift(field, -1).body(), wq.body()).ok_or_else(|| not_rational("W_N(x q^-2) / W_N(x)"))?;
    let a0 = if n % 2 == 0 { a0 } else { a0.neg() };
    if op.coeffs[0] != a0 {
        return Err(Error::Assertion(format!("a_0 = {} but the Wronskian ratio gives {a0}", op.coeffs[0])));
    }
    for (i, ui) in u.u().iter().enumerate() {
        if !apply_operator(field, &op, ui).is_zero() {
            return Err(Error::Assertion(format!("D_U does not annihilate u_{}", i + 1)));
        }
    }
    Ok(op)
}

/// `sum_i a_i(x) f(x q^{-2i})`.
pub fn apply_operator(field: &Field, d: &DifferenceOperator, f: &QuasiPolynomial) -> QuasiRational {
    let Some(alpha) = f.exponent() else { return QuasiRational::zero() };
    let den = d.coeffs.iter().fold(Poly::one(), |acc, a| acc.lcm(a.den()));
    let mut num = Body::zero();
    for (i, a) in d.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let factor = a.num().mul(&den.div_exact(a.den()).expect("lcm is divisible"));
        num = num.add(&f.shift(field, -(i as i64)).body().mul_poly(&factor));
    }
    QuasiRational::new(alpha, num, den).expect("nonzero denominator")
}

/// `g_i = tau v_i / v_i` with `v_i = W_{N-i+1}[u_i..u_N] / W_{N-i}[u_{i+1}..u_N]`.
pub fn factorize_operator(field: &Field, u: &Collection) -> Result<FirstOrderFactorization> {
    let n = u.len();
    let tw: Vec<QuasiPolynomial> = (0..=n).map(|i| u.trailing_wronskian(field, i)).collect();
    let mut factors = Vec::with_capacity(n);
    for i in 1..=n {
        let (a, b) = (&tw[i - 1], &tw[i]);
        if a.is_zero() || b.is_zero() {
            return Err(Error::Singular(format!("trailing Wronskian vanishes at i = {i}")));
        }
        let num = a.shift(field, -1).body().mul(b.body());
        let den = a.body().mul(b.shift(field, -1).body());
        factors.push(body_ratio(&num, &den).ok_or_else(|| not_rational(&format!("factor {i}")))?);
    }
    Ok(FirstOrderFactorization { factors })
}

/// `D^t = prod_i (tau - q^{-2 lambda_i} R_i(x q^{-2}) / R_i(x))`.
pub fn bethe_operator(field: &Field, sol: &BetheSolution, sys: &BetheSystem) -> Result<FirstOrderFactorization> {
    sol.check_shape(sys)?;
    let n = sys.n;
    let mut factors = Vec::with_capacity(n);
    for i in 1..=n {
        let mut num = sol.p_at(i - 1);
        for j in i..n {
            num = num.mul(&shift_poly(field, &sys.t_at(j), i as i64 - j as i64));
        }
        let r = RatFunc::new(num, sol.p_at(i))?;
        let g = tau_rf(field, &r).div(&r)?.scale(&field.q2_power(-sys.lambda[i - 1])?);
        factors.push(g);
    }
    Ok(FirstOrderFactorization { factors })
}

pub fn operators_equal(a: &DifferenceOperator, b: &DifferenceOperator) -> bool {
    a.order() == b.order() && a.monic() == b.monic()
}

/// Cramer coordinates `c_i = W_N[u_1, .., f, .., u_N] / W_N[u]` of a kernel element.
pub fn kernel_coordinates(field: &Field, u: &Collection, f: &QuasiPolynomial) -> Result<Vec<QuasiRational>> {
    let n = u.len();
    if f.is_zero() {
        return Ok(vec![QuasiRational::zero(); n]);
    }
    let mut ext = u.u().to_vec();
    ext.push(f.clone());
    let res = wronskian(field, &ext);
    if !res.is_zero() {
        return Err(Error::NotInKernel(format!("W_(N+1)[u, f] = {res}")));
    }
    let w = u.wronskian(field);
    let mut cs = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = u.u().to_vec();
        v[i] = f.clone();
        cs.push(QuasiRational::ratio(&wronskian(field, &v), &w)?);
    }
    let mut sum = QuasiRational::zero();
    for (c, ui) in cs.iter().zip(u.u()) {
        sum = sum.add(&c.mul_qp(ui))?;
    }
    if !sum.same_value(&QuasiRational::from_qp(f)) {
        return Err(Error::Assertion("kernel coordinates do not reassemble f".into()));
    }
    for (i, c) in cs.iter().enumerate() {
        if !crate::qpoly::is_quasi_constant(field, c) {
            return Err(Error::Assertion(format!("coordinate c_{} is not a quasi-constant", i + 1)));
        }
        if c.s_degree() != 0 {
            return Err(Error::Assertion(format!("quasi-constant c_{} depends on log x", i + 1)));
        }
    }
    Ok(cs)
}

pub fn is_semiregular(field: &Field, u: &Collection) -> bool {
    u.is_semiregular(field)
}

/// Rational coefficients of `D_U` force a log-free `W_N`.
pub fn check_semiregular_consequence(field: &Field, u: &Collection) -> Result<bool> {
    match fundamental_operator(field, u) {
        Ok(_) => Ok(u.is_semiregular(field)),
        Err(Error::NotLogFree(_)) => Ok(true),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularizeMode {
    Any,
    PreserveType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `u_N` had logs; replaced by its top part.
    TopPart { size: usize },
    /// Top part was dependent; swapped `u_N` into slot `i` (rescaled by `x^shift`).
    Swap { size: usize, slot: usize, shift: i64 },
    /// Reduced through `W_2[u_i, u_N]` and reassembled.
    Reduce { size: usize },
}

#[derive(Clone, Debug)]
pub struct Regularized {
    pub collection: Collection,
    pub branches: Vec<Branch>,
}

fn smallest_period_multiple(period: i64, at_least: i64) -> i64 {
    if at_least <= 0 {
        0
    } else {
        (at_least + period - 1) / period * period
    }
}

/// A regular collection with the same fundamental operator.
pub fn regularize(field: &Field, u: &Collection, mode: RegularizeMode) -> Result<Regularized> {
    let d = fundamental_operator(field, u)?;
    let lambda = u.lambda();
    if mode == RegularizeMode::PreserveType && !field.is_cyclotomic() && !check_weights(field, &lambda, WeightMode::DominanceFree) {
        return Err(Error::NotRegularizableInType(format!(
            "weights {:?} are not dominance-free and q is not a root of unity",
            lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>()
        )));
    }
    let mut branches = Vec::new();
    let out = regularize_rec(field, u.u().to_vec(), mode, &mut branches)?;
    let collection = Collection::new(field, out)?;
    if !collection.is_regular(field) {
        return Err(Error::Assertion("regularized collection is not regular".into()));
    }
    if !operators_equal(&fundamental_operator(field, &collection)?, &d) {
        return Err(Error::Assertion("regularization changed the operator".into()));
    }
    if mode == RegularizeMode::PreserveType && collection.lambda() != lambda {
        return Err(Error::NotRegularizableInType("type could not be preserved".into()));
    }
    Ok(Regularized { collection, branches })
}

fn regularize_rec(field: &Field, mut u: Vec<QuasiPolynomial>, mode: RegularizeMode, log: &mut Vec<Branch>) -> Result<Vec<QuasiPolynomial>> {
    let n = u.len();
    let last = u[n - 1].clone();
    if !last.is_log_free() {
        let f = top_part(&last)?;
        let mut cand = u.clone();
        cand[n - 1] = f.clone();
        if !wronskian(field, &cand).is_zero() {
            u = cand;
            log.push(Branch::TopPart { size: n });
        } else {
            let coll = Collection::new(field, u.clone())?;
            let cs = kernel_coordinates(field, &coll, &f)?;
            let i = (0..n - 1)
                .find(|&i| !cs[i].is_zero())
                .ok_or_else(|| Error::Assertion("top part has no nonzero coordinate".into()))?;
            let mut shift = 0;
            let moved = if mode == RegularizeMode::PreserveType {
                let di = cs[i].order_at_zero();
                let ell = match field.q2_period() {
                    _ if di <= 0 => 0,
                    Some(per) => smallest_period_multiple(per, di),
                    None => {
                        return Err(Error::NotRegularizableInType(format!("slot {} needs x^{di}, and q is generic", i + 1)));
                    }
                };
                shift = ell - di;
                QuasiPolynomial::new(u[i].alpha(), last.body().mul_x_pow(shift as usize))
            } else {
                last.clone()
            };
            u[i] = moved;
            u[n - 1] = f;
            log.push(Branch::Swap { size: n, slot: i + 1, shift });
        }
    }
    if n == 1 {
        return Ok(u);
    }

    let un = u[n - 1].clone();
    let prime: Vec<QuasiPolynomial> = u[..n - 1].iter().map(|ui| wronskian(field, &[ui.clone(), un.clone()])).collect();
    let pcoll = Collection::new(field, prime.clone())?;
    let second = regularize_rec(field, prime, mode, log)?;
    log.push(Branch::Reduce { size: n });

    let mut coords = Vec::with_capacity(n - 1);
    let mut p = Poly::one();
    for s in &second {
        let cs = kernel_coordinates(field, &pcoll, s)?;
        for c in &cs {
            if !c.is_zero() {
                p = p.lcm(&c.den().div_x_pow(c.den().x_order()));
            }
        }
        coords.push(cs);
    }

    let mut out = Vec::with_capacity(n);
    for (s, cs) in second.iter().zip(&coords) {
        let natural = s.alpha() - un.alpha();
        let m = cs.iter().filter(|c| !c.is_zero()).map(|c| c.order_at_zero()).min().unwrap_or(0);
        let mut body = Body::zero();
        for (c, uj) in cs.iter().zip(&u) {
            if c.is_zero() {
                continue;
            }
            let d = c.order_at_zero();
            let numer = c.num().coeff(0);
            let numer = numer.div_x_pow(numer.x_order());
            let den = c.den().div_x_pow(c.den().x_order());
            let factor = p.div_exact(&den).expect("lcm is divisible").mul(&numer).mul_x_pow((d - m) as usize);
            body = body.add(&uj.body().mul_poly(&factor));
        }
        let mut e = natural + Rational64::from_integer(m);
        if m < 0 && mode == RegularizeMode::PreserveType {
            if let Some(per) = field.q2_period() {
                let ell = smallest_period_multiple(per, -m);
                body = body.mul_x_pow(ell as usize);
                e += Rational64::from_integer(ell);
            }
        }
        let mut ut = QuasiPolynomial::new(e, body);
        if e > natural {
            ut = ut.with_exponent(natural)?;
        }
        out.push(ut);
    }
    out.push(un);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GenericReport {
    /// `c_i` with `tilde u_i = c_i u_i`.
    pub diagonal: Vec<QuasiRational>,
    /// All `c_i` are constants (required when q is generic).
    pub constants: bool,
}

/// For generic weights: every `u_i` is log-free and `tilde u_i = c_i u_i`.
pub fn check_generic_consequences(field: &Field, u: &Collection, ut: &Collection) -> Result<GenericReport> {
    if !check_weights(field, &u.lambda(), WeightMode::Generic) {
        return Err(Error::Precondition("weights are not generic".into()));
    }
    let d = fundamental_operator(field, u)?;
    if !operators_equal(&d, &fundamental_operator(field, ut)?) {
        return Err(Error::Precondition("the two collections have different operators".into()));
    }
    for (i, ui) in u.u().iter().enumerate() {
        if !ui.is_log_free() {
            return Err(Error::Assertion(format!("u_{} has log terms: {ui}", i + 1)));
        }
    }
    let mut diagonal = Vec::with_capacity(u.len());
    for (i, v) in ut.u().iter().enumerate() {
        let cs = kernel_coordinates(field, u, v)?;
        for (j, c) in cs.iter().enumerate() {
            if j != i && !c.is_zero() {
                return Err(Error::Assertion(format!("tilde u_{} has a component along u_{}", i + 1, j + 1)));
            }
        }
        diagonal.push(cs[i].clone());
    }
    let constants = diagonal.iter().all(|c| c.as_constant().is_some());
    if !field.is_cyclotomic() && !constants {
        return Err(Error::Assertion("generic q but a non-constant rescaling was found".into()));
    }
    Ok(GenericReport { diagonal, constants })
}
