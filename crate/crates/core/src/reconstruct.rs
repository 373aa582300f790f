//! From admissible regular Bethe solutions to collections of quasi-polynomials
//! and back: Bezout pairs, discrete antiderivatives, the `F[y, V]` transform,
//! the level-by-level recursion, and preframes / frames.

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::bethe::{check_admissible, check_regular, BetheSolution, BetheSystem};
use crate::error::{Error, Result};
use crate::poly::{Body, Poly};
use crate::qpoly::{content_gcd, exact_quotient, poly_divides, polynomial_part, wronskian, QuasiPolynomial};
use crate::scalars::{Field, Scalar};

/// An ordered tuple of quasi-polynomials with nonzero top Wronskian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    u: Vec<QuasiPolynomial>,
}

impl Collection {
    pub fn new(field: &Field, u: Vec<QuasiPolynomial>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::Precondition("a collection needs at least one element".into()));
        }
        let c = Collection { u };
        if c.wronskian(field).is_zero() {
            return Err(Error::Singular("the Wronskian of the collection vanishes".into()));
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[QuasiPolynomial] {
        &self.u
    }

    pub fn lambda(&self) -> Vec<Rational64> {
        self.u.iter().map(|f| f.alpha()).collect()
    }

    pub fn wronskian(&self, field: &Field) -> QuasiPolynomial {
        wronskian(field, &self.u)
    }

    /// `W_{N-i}[u_{i+1}, ..., u_N]` for `0 <= i <= N` (1 when `i = N`).
    pub fn trailing_wronskian(&self, field: &Field, i: usize) -> QuasiPolynomial {
        wronskian(field, &self.u[i..])
    }

    pub fn is_semiregular(&self, field: &Field) -> bool {
        self.wronskian(field).is_log_free()
    }

    /// All trailing Wronskians are log-free.
    pub fn is_regular(&self, field: &Field) -> bool {
        (0..self.len()).all(|i| self.trailing_wronskian(field, i).is_log_free())
    }
}

/// `(T_1, ..., T_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preframe {
    pub t: Vec<Poly>,
}

impl Preframe {
    pub fn new(t: Vec<Poly>) -> Result<Self> {
        for (i, p) in t.iter().enumerate() {
            if !p.is_monic() {
                return Err(Error::Precondition(format!("T_{} is not monic", i + 1)));
            }
        }
        Ok(Preframe { t })
    }

    /// `(T_1, ..., T_{N-1}, 1)` from a Bethe system.
    pub fn from_system(sys: &BetheSystem) -> Self {
        let mut t = sys.t.clone();
        t.push(Poly::one());
        Preframe { t }
    }

    /// `Q^T_k = prod_{i=1}^k prod_{j=0}^{k-i} T_{N-i+1}(x q^{-2j})`; 1 for `k <= 0`.
    pub fn q(&self, field: &Field, k: usize) -> Poly {
        let n = self.t.len();
        let mut acc = Poly::one();
        for i in 1..=k.min(n) {
            let ti = &self.t[n - i];
            for j in 0..=(k - i) {
                acc = acc.mul(&shift_poly(field, ti, -(j as i64)));
            }
        }
        acc
    }
}

/// `p(x q^{2k})`.
pub fn shift_poly(field: &Field, p: &Poly, k: i64) -> Poly {
    if k == 0 {
        return p.clone();
    }
    p.scale_var(&field.q_pow(2 * k * field.denominator() as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutPair {
    pub a: QuasiPolynomial,
    pub b: QuasiPolynomial,
    /// `r p + s p(x q^{-2}) = 1`.
    pub r: Poly,
    pub s: Poly,
}

/// `A[y]`, `B[y]` with `y A + y(x q^{-2}) B = 1`. Since `y(x q^{-2})` carries
/// the prefactor `q^{-2 alpha}`, `B = q^{2 alpha} x^{-alpha} s`.
pub fn bezout(field: &Field, y: &QuasiPolynomial) -> Result<BezoutPair> {
    let p = y.poly()?;
    if p.is_zero() {
        return Err(Error::ZeroInput("Bezout pair of zero".into()));
    }
    let ps = shift_poly(field, &p, -1);
    let (g, r, s) = if p.is_constant() { (Poly::one(), Poly::constant(p.lc().inv()?), Poly::zero()) } else { p.ext_gcd(&ps) };
    if !g.is_one() || p.coeff(0).is_zero() {
        return Err(Error::NotAdmissible(format!("gcd(p(x), p(x q^-2)) = {g} for p = {p}")));
    }
    let a = -y.alpha();
    let b = QuasiPolynomial::log_free(a, s.scale(&field.q2_power(y.alpha())?));
    Ok(BezoutPair { a: QuasiPolynomial::log_free(a, r.clone()), b, r, s })
}

/// The unique `M(s)` with `M(s) - c M(s - 2L) = P(s)`, normalised by `M(0) = 0` when `c = 1`.
pub fn discrete_antiderivative_poly(field: &Field, p: &Poly, c: &Scalar) -> Poly {
    let two_l = &field.log_q() * &field.int(2);
    let back = Poly::from_coeffs(vec![two_l.neg_s(), Scalar::one()]);
    let apply = |m: &Poly| m.sub(&m.compose(&back).scale(c));
    let unit = c.is_one();
    let one_minus_c = &Scalar::one() - c;
    let mut m = Poly::zero();
    let mut rest = p.clone();
    while !rest.is_zero() {
        let k = rest.degree();
        let term = if unit {
            let d = &two_l * &field.int(k as i64 + 1);
            Poly::monomial(k + 1, &rest.lc() / &d)
        } else {
            Poly::monomial(k, &rest.lc() / &one_minus_c)
        };
        rest = rest.sub(&apply(&term));
        m = m.add(&term);
    }
    m
}

/// `I[f]` with `I[f](x) - I[f](x q^{-2}) = f(x)`; the `x^{alpha+i}` part uses
/// `c = q^{-2(alpha+i)}`.
pub fn discrete_antiderivative(field: &Field, f: &QuasiPolynomial) -> Result<QuasiPolynomial> {
    let Some(alpha) = f.exponent() else { return Ok(QuasiPolynomial::zero()) };
    let body = f.body();
    let xdeg = body.x_degree();
    let mut terms = Vec::new();
    for i in 0..=xdeg {
        let col: Vec<Scalar> = body.coeffs().iter().map(|p| p.coeff(i)).collect();
        let ps = Poly::from_coeffs(col);
        if ps.is_zero() {
            continue;
        }
        let c = field.q2_power(-(alpha + Rational64::from_integer(i as i64)))?;
        let m = discrete_antiderivative_poly(field, &ps, &c);
        for (sd, v) in m.coeffs().iter().enumerate() {
            if !v.is_zero() {
                terms.push((i, sd, v.clone()));
            }
        }
    }
    Ok(QuasiPolynomial::new(alpha, Body::from_terms(&terms)))
}

/// `F[y, V] = V B[y] + y I[v]` with `v = <(a V + b(xq^-2) V(xq^-2)) / y(xq^-2)>_+`.
pub fn f_transform(field: &Field, y: &QuasiPolynomial, v: &QuasiPolynomial) -> Result<QuasiPolynomial> {
    let bz = bezout(field, y)?;
    if v.is_zero() {
        return Ok(QuasiPolynomial::zero());
    }
    let num = bz.a.mul(v).add(&bz.b.shift(field, -1).mul(&v.shift(field, -1)))?;
    let small = polynomial_part(&num, &y.shift(field, -1))?;
    let j = discrete_antiderivative(field, &small)?;
    v.mul(&bz.b).add(&y.mul(&j))
}

/// The Bethe-side hypothesis of `f_transform`: `y | y(xq^2) V + y(xq^-2) V(xq^2)`.
pub fn vy_hypothesis(field: &Field, y: &QuasiPolynomial, v: &QuasiPolynomial) -> Result<bool> {
    let s = y.shift(field, 1).mul(v).add(&y.shift(field, -1).mul(&v.shift(field, 1)))?;
    Ok(poly_divides(&y.poly()?, &s)?.is_some())
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub collection: Collection,
    /// `y_0 .. y_N`.
    pub y: Vec<QuasiPolynomial>,
    /// `w[i][j]` for `1 <= i <= j <= N`; empty otherwise.
    pub w: Vec<Vec<QuasiPolynomial>>,
}

fn assert_eq_qp(lhs: &QuasiPolynomial, rhs: &QuasiPolynomial, what: impl FnOnce() -> String) -> Result<()> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::Assertion(format!("{}: {lhs} != {rhs}", what())))
    }
}

/// Build the collection `(u_1, ..., u_N)` of an admissible regular solution.
pub fn reconstruct_collection(field: &Field, sol: &BetheSolution, sys: &BetheSystem) -> Result<Reconstruction> {
    sol.check_shape(sys)?;
    if !check_admissible(field, sol) {
        return Err(Error::NotAdmissible("solution violates the admissibility condition".into()));
    }
    let reg = check_regular(field, sol, sys)?;
    if let Some(i) = reg.quotients.iter().position(|q| q.is_none()) {
        return Err(Error::Precondition(format!("solution is not regular: p_{0} does not divide P_{0}", i + 1)));
    }
    let n = sys.n;
    let frame = Preframe::from_system(sys);
    let y: Vec<QuasiPolynomial> = (0..=n).map(|i| QuasiPolynomial::log_free(sys.tail_sum(i), sol.p_at(i))).collect();
    let t_qp = |i: usize| QuasiPolynomial::log_free(Rational64::zero(), sys.t_at(i));

    let mut u = vec![QuasiPolynomial::zero(); n + 1];
    u[n] = y[n - 1].clone();
    let mut w = vec![vec![QuasiPolynomial::zero(); n + 1]; n + 1];
    w[n][n] = y[n].clone();

    for i in (1..n).rev() {
        for j in i + 1..=n {
            let v = y[i - 1].mul(&w[i + 1][j].shift(field, -1)).mul(&t_qp(i));
            let wij = f_transform(field, &y[i], &v)?;
            assert_eq_qp(&wronskian(field, &[wij.clone(), y[i].clone()]), &v, || format!("W2[w_{i}{j}, y_{i}]"))?;
            w[i][j] = wij;
        }
        w[i][i] = y[i].clone();

        let mut lhs = QuasiPolynomial::zero();
        let mut sum = QuasiPolynomial::zero();
        for j in i + 1..=n {
            let sign = if (j - i - 1) % 2 == 0 { 1 } else { -1 };
            let a = w[i + 1][j].shift(field, -1).mul(&u[j]).scale(&field.int(sign));
            lhs = lhs.add(&a)?;
            let b = w[i][j].mul(&u[j]).scale(&field.int(sign));
            sum = sum.add(&b)?;
        }
        let tprod = (i + 1..n).fold(Poly::one(), |acc, k| acc.mul(&sys.t_at(k)));
        assert_eq_qp(&lhs, &y[i].mul_poly(&tprod), || format!("alternating sum at level {i}"))?;
        u[i] = exact_quotient(&sum, &y[i], &format!("y_{i} does not divide the level-{i} sum"))?;

        let top = wronskian(field, &u[i..]);
        assert_eq_qp(&top, &y[i - 1].mul_poly(&frame.q(field, n - i + 1)), || format!("trailing Wronskian at level {i}"))?;
        let qk = frame.q(field, n - i);
        for j in i..=n {
            let rest: Vec<QuasiPolynomial> = (i..=n).filter(|&k| k != j).map(|k| u[k].clone()).collect();
            assert_eq_qp(&wronskian(field, &rest), &w[i][j].mul_poly(&qk), || format!("minor without u_{j} at level {i}"))?;
        }
    }

    let collection = Collection { u: u[1..].to_vec() };
    let rep = verify_preframe(field, &collection, &frame);
    if !rep.holds {
        return Err(Error::Assertion(format!("(T_1..T_(N-1), 1) is not a preframe: {:?}", rep.failing_subset)));
    }
    Ok(Reconstruction { collection, y, w })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreframeReport {
    pub holds: bool,
    /// 1-based indices of the first subset whose Wronskian is not divisible.
    pub failing_subset: Option<Vec<usize>>,
    /// `W_N / (x^{sum lambda} Q_N)` when that ratio is a constant.
    pub constant: Option<Scalar>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

/// Whether `(T_1, ..., T_N)` is a preframe of `U`.
pub fn verify_preframe(field: &Field, u: &Collection, t: &Preframe) -> PreframeReport {
    let n = u.len();
    let wn = u.wronskian(field);
    let qn = t.q(field, n);
    let constant = match wn.poly() {
        Ok(p) if t.t.len() == n && !p.is_zero() => {
            let c = &p.lc() / &qn.lc();
            (p == qn.scale(&c)).then_some(c)
        }
        _ => None,
    };
    if t.t.len() != n {
        return PreframeReport { holds: false, failing_subset: None, constant: None };
    }
    let mut all: Vec<Vec<usize>> = Vec::new();
    for k in 1..n {
        all.extend(subsets(n, k));
    }
    let qs: Vec<Poly> = (0..=n).map(|k| t.q(field, k)).collect();
    let bad = all
        .par_iter()
        .find_first(|s| {
            let fs: Vec<QuasiPolynomial> = s.iter().map(|&i| u.u[i].clone()).collect();
            let w = wronskian(field, &fs);
            !matches!(poly_divides(&qs[s.len()], &w), Ok(Some(_)))
        })
        .map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>());
    PreframeReport { holds: bad.is_none() && constant.is_some(), failing_subset: bad, constant }
}

/// The frame: `Q^T_k` is the gcd of all `k`-subset Wronskians.
pub fn compute_frame(field: &Field, u: &Collection) -> Result<Preframe> {
    let n = u.len();
    if !u.is_semiregular(field) {
        return Err(Error::NotLogFree("the collection is not semiregular".into()));
    }
    let mut qk = vec![Poly::one(); n + 1];
    for (k, slot) in qk.iter_mut().enumerate().skip(1) {
        let ws: Vec<QuasiPolynomial> = subsets(n, k)
            .par_iter()
            .map(|s| wronskian(field, &s.iter().map(|&i| u.u[i].clone()).collect::<Vec<_>>()))
            .collect();
        *slot = content_gcd(&ws)?;
    }
    let mut t = vec![Poly::one(); n];
    for k in 1..=n {
        let prev2 = if k >= 2 { shift_poly(field, &qk[k - 2], -1) } else { Poly::one() };
        let num = qk[k].mul(&prev2);
        let den = qk[k - 1].mul(&shift_poly(field, &qk[k - 1], -1));
        t[n - k] = num
            .div_exact(&den)
            .ok_or_else(|| Error::Division(format!("frame deconvolution is not exact at k = {k}")))?
            .monic();
    }
    Ok(Preframe { t })
}

#[derive(Clone, Debug)]
pub struct Forward {
    pub system: BetheSystem,
    pub solution: BetheSolution,
    /// Leading constants `c_i` of `y_i`.
    pub constants: Vec<Scalar>,
}

/// The Bethe data of a regular collection with respect to a preframe.
pub fn collection_to_bethe(field: &Field, u: &Collection, t: &Preframe) -> Result<Forward> {
    let n = u.len();
    if n < 2 {
        return Err(Error::Precondition("need N >= 2".into()));
    }
    if t.t.len() != n {
        return Err(Error::Schema(format!("preframe has {} entries, collection has {n}", t.t.len())));
    }
    let lambda = u.lambda();
    let mut p = Vec::with_capacity(n - 1);
    let mut constants = Vec::with_capacity(n - 1);
    for i in 1..n {
        let w = u.trailing_wronskian(field, i);
        let q = t.q(field, n - i);
        let y = poly_divides(&q, &w)?.ok_or_else(|| Error::Division(format!("Q_{} does not divide the trailing Wronskian at i = {i}", n - i)))?;
        let body = y.poly().map_err(|_| Error::NotLogFree(format!("y_{i} is not log-free; the collection is not regular")))?;
        let c = body.lc();
        constants.push(c.clone());
        p.push(body.scale(&c.inv()?));
    }
    let l = p.iter().map(|x| x.degree()).collect();
    let system = BetheSystem::new(field, lambda, t.t[..n - 1].to_vec(), l)?;
    Ok(Forward { system, solution: BetheSolution::new(p)?, constants })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn antiderivative_examples() {
        let f = Field::generic(1);
        let one = Poly::one();
        let m = discrete_antiderivative_poly(&f, &one, &Scalar::one());
        assert_eq!(m, Poly::monomial(1, f.one().try_div(&(&f.log_q() * &f.int(2))).unwrap()));
        let c = f.q_pow(3);
        let m = discrete_antiderivative_poly(&f, &one, &c);
        assert_eq!(m, Poly::constant(f.one().try_div(&(&f.one() - &c)).unwrap()));
        let m = discrete_antiderivative_poly(&f, &Poly::x(), &Scalar::one());
        let want = Poly::from_coeffs(vec![f.zero(), f.one().try_div(&f.int(2)).unwrap(), f.one().try_div(&(&f.log_q() * &f.int(4))).unwrap()]);
        assert_eq!(m, want);
    }

    #[test]
    fn antiderivative_contract() {
        for f in [Field::generic(2), Field::cyclotomic(6, 1).unwrap()] {
            let body = Body::from_terms(&[(0, 0, f.int(1)), (1, 1, f.q_pow(1)), (3, 0, f.int(-2)), (2, 2, f.int(5))]);
            for a in [r(0, 1), r(1, 1), r(-3, 1)] {
                let g = QuasiPolynomial::new(a, body.clone());
                let i = discrete_antiderivative(&f, &g).unwrap();
                assert_eq!(i.sub(&i.shift(&f, -1)).unwrap(), g);
            }
        }
    }

    #[test]
    fn bezout_examples() {
        let f = Field::generic(1);
        let y = QuasiPolynomial::log_free(r(1, 1), Poly::from_ints(&[-3, 1]));
        let bz = bezout(&f, &y).unwrap();
        let lhs = y.mul(&bz.a).add(&y.shift(&f, -1).mul(&bz.b)).unwrap();
        assert_eq!(lhs, QuasiPolynomial::monomial(r(0, 1)));
        let y1 = QuasiPolynomial::monomial(r(1, 2));
        let bz = bezout(&Field::generic(2), &y1).unwrap();
        assert_eq!(bz.a, QuasiPolynomial::monomial(r(-1, 2)));
        assert!(bz.b.is_zero());
        assert!(bezout(&f, &QuasiPolynomial::log_free(r(0, 1), Poly::x())).is_err());
    }

    #[test]
    fn f_transform_on_monomials() {
        let f = Field::generic(2);
        let y = QuasiPolynomial::monomial(r(0, 1));
        let v = QuasiPolynomial::monomial(r(1, 2));
        let big = f_transform(&f, &y, &v).unwrap();
        let want = QuasiPolynomial::monomial(r(1, 2)).scale(&f.one().try_div(&(&f.one() - &f.q_pow(-2))).unwrap());
        assert_eq!(big, want);
        assert_eq!(wronskian(&f, &[big, y]), v);
    }

    #[test]
    fn closed_form_n2() {
        for f in [Field::generic(2), Field::cyclotomic(12, 2).unwrap()] {
            let sys = BetheSystem::new(&f, vec![r(1, 2), r(0, 1)], vec![Poly::from_ints(&[-2, 1])], vec![1]).unwrap();
            let sol = BetheSolution::from_roots(vec![vec![&f.int(-2) * &f.q_pow(-2)]]);
            let rec = reconstruct_collection(&f, &sol, &sys).unwrap();
            let w = rec.collection.wronskian(&f);
            assert_eq!(w, QuasiPolynomial::log_free(r(1, 2), Poly::from_ints(&[-2, 1])));
            let fw = collection_to_bethe(&f, &rec.collection, &Preframe::from_system(&sys)).unwrap();
            assert_eq!(fw.solution.p, sol.p);
            let frame = compute_frame(&f, &rec.collection).unwrap();
            assert_eq!(frame, Preframe::from_system(&sys));
        }
    }

    #[test]
    fn empty_system_n2() {
        let f = Field::generic(2);
        let sys = BetheSystem::new(&f, vec![r(1, 2), r(0, 1)], vec![Poly::one()], vec![0]).unwrap();
        let sol = BetheSolution::new(vec![Poly::one()]).unwrap();
        let rec = reconstruct_collection(&f, &sol, &sys).unwrap();
        assert_eq!(rec.collection.u()[1], QuasiPolynomial::monomial(r(0, 1)));
        assert_eq!(rec.collection.wronskian(&f), QuasiPolynomial::monomial(r(1, 2)));
    }

    #[test]
    fn frame_deconvolution_matches_products() {
        let f = Field::generic(1);
        let t = Preframe::new(vec![Poly::from_ints(&[-2, 1]), Poly::from_ints(&[-5, 1]), Poly::from_ints(&[3, 1]), Poly::one()]).unwrap();
        let qk: Vec<Poly> = (0..=4).map(|k| t.q(&f, k)).collect();
        for k in 1..=4usize {
            let prev2 = if k >= 2 { shift_poly(&f, &qk[k - 2], -1) } else { Poly::one() };
            let got = qk[k].mul(&prev2).div_exact(&qk[k - 1].mul(&shift_poly(&f, &qk[k - 1], -1))).unwrap();
            assert_eq!(got, t.t[4 - k]);
        }
    }

    #[test]
    fn planted_non_preframe() {
        let f = Field::generic(1);
        let u = Collection::new(&f, vec![QuasiPolynomial::monomial(r(1, 1)), QuasiPolynomial::monomial(r(0, 1))]).unwrap();
        assert!(verify_preframe(&f, &u, &Preframe::new(vec![Poly::one(), Poly::one()]).unwrap()).holds);
        let bad = Preframe::new(vec![Poly::one(), Poly::from_ints(&[-7, 1])]).unwrap();
        let rep = verify_preframe(&f, &u, &bad);
        assert!(!rep.holds);
        assert!(rep.failing_subset.is_some());
    }

    #[test]
    fn log_terms_block_the_forward_map() {
        let f = Field::generic(1);
        let u1 = QuasiPolynomial::monomial(r(1, 1));
        let u2 = QuasiPolynomial::new(r(0, 1), Body::from_terms(&[(0, 1, f.one()), (0, 0, f.one())]));
        let u = Collection::new(&f, vec![u1, u2]).unwrap();
        let t = Preframe::new(vec![Poly::one(), Poly::one()]).unwrap();
        assert!(matches!(collection_to_bethe(&f, &u, &t), Err(Error::NotLogFree(_))));
    }
}
