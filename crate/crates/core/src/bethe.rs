//! Bethe ansatz data `(l, T, lambda)` and candidate solutions in root-free form.
//!
//! A solution is stored as the monic polynomials `p_i` whose roots are the
//! Bethe roots; regularity is decided by divisibility `p_i | P_i`, which
//! covers repeated roots without ever leaving the coefficient field.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qpoly::QuasiPolynomial;
use crate::scalars::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetheSystem {
    pub n: usize,
    pub lambda: Vec<Rational64>,
    /// `T_1 .. T_{N-1}`.
    pub t: Vec<Poly>,
    pub l: Vec<usize>,
}

impl BetheSystem {
    pub fn new(field: &Field, lambda: Vec<Rational64>, t: Vec<Poly>, l: Vec<usize>) -> Result<Self> {
        let n = lambda.len();
        if n < 2 {
            return Err(Error::Precondition("a Bethe system needs N >= 2".into()));
        }
        if t.len() != n - 1 || l.len() != n - 1 {
            return Err(Error::Schema(format!(
                "N = {n} needs {} polynomials T and {} degrees l, got {} and {}",
                n - 1,
                n - 1,
                t.len(),
                l.len()
            )));
        }
        for b in &lambda {
            field.lattice(*b)?;
        }
        for (i, ti) in t.iter().enumerate() {
            if !ti.is_monic() {
                return Err(Error::Precondition(format!("T_{} is not monic", i + 1)));
            }
        }
        Ok(BetheSystem { n, lambda, t, l })
    }

    /// `T_i` for `1 <= i <= N-1`, and `T_N = 1`.
    pub fn t_at(&self, i: usize) -> Poly {
        if (1..self.n).contains(&i) {
            self.t[i - 1].clone()
        } else {
            Poly::one()
        }
    }

    /// `lambda_{i+1} + ... + lambda_N`.
    pub fn tail_sum(&self, i: usize) -> Rational64 {
        self.lambda[i.min(self.n)..].iter().copied().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetheSolution {
    /// `p_1 .. p_{N-1}`.
    pub p: Vec<Poly>,
    pub roots: Option<Vec<Vec<Scalar>>>,
}

impl BetheSolution {
    pub fn new(p: Vec<Poly>) -> Result<Self> {
        for (i, pi) in p.iter().enumerate() {
            if !pi.is_monic() {
                return Err(Error::Precondition(format!("p_{} is not monic", i + 1)));
            }
        }
        Ok(BetheSolution { p, roots: None })
    }

    pub fn from_roots(roots: Vec<Vec<Scalar>>) -> Self {
        let p = roots
            .iter()
            .map(|rs| rs.iter().fold(Poly::one(), |acc, t| acc.mul(&Poly::from_coeffs(vec![t.neg_s(), Scalar::one()]))))
            .collect();
        BetheSolution { p, roots: Some(roots) }
    }

    /// Attach roots, checking that they multiply out to `p`.
    pub fn with_roots(mut self, roots: Vec<Vec<Scalar>>) -> Result<Self> {
        let other = Self::from_roots(roots);
        if other.p != self.p {
            return Err(Error::Precondition("roots do not multiply out to the polynomials p".into()));
        }
        self.roots = other.roots;
        Ok(self)
    }

    /// `p_i` with the convention `p_0 = p_N = 1`.
    pub fn p_at(&self, i: usize) -> Poly {
        if i >= 1 && i <= self.p.len() {
            self.p[i - 1].clone()
        } else {
            Poly::one()
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.p.iter().map(|p| p.degree()).collect()
    }

    pub fn check_shape(&self, sys: &BetheSystem) -> Result<()> {
        if self.p.len() != sys.n - 1 {
            return Err(Error::Schema(format!("expected {} polynomials p, got {}", sys.n - 1, self.p.len())));
        }
        if self.degrees() != sys.l {
            return Err(Error::Precondition(format!("degrees {:?} do not match l = {:?}", self.degrees(), sys.l)));
        }
        Ok(())
    }
}

/// `P_i` as an `x`-polynomial.
pub fn bethe_p_poly(field: &Field, i: usize, sol: &BetheSolution, sys: &BetheSystem) -> Result<Poly> {
    if i == 0 || i >= sys.n {
        return Err(Error::Index(format!("P_{i} requires 1 <= i <= {}", sys.n - 1)));
    }
    let q2 = field.q_pow(2 * field.denominator() as i64);
    let qm2 = field.q_pow(-2 * field.denominator() as i64);
    let (pi, pm, pp, ti) = (sol.p_at(i), sol.p_at(i - 1), sol.p_at(i + 1), sys.t_at(i));
    let a = pi.scale_var(&q2).mul(&pm).mul(&pp.scale_var(&qm2)).mul(&ti).scale(&field.q2_power(sys.lambda[i])?);
    let b = pi.scale_var(&qm2).mul(&pm.scale_var(&q2)).mul(&pp).mul(&ti.scale_var(&q2)).scale(&field.q2_power(sys.lambda[i - 1])?);
    Ok(a.add(&b))
}

/// `P_i` as a log-free quasi-polynomial of type 0.
pub fn bethe_p(field: &Field, i: usize, sol: &BetheSolution, sys: &BetheSystem) -> Result<QuasiPolynomial> {
    Ok(QuasiPolynomial::log_free(Rational64::zero(), bethe_p_poly(field, i, sol, sys)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularReport {
    pub regular: bool,
    /// `P_i / p_i` where the division is exact.
    pub quotients: Vec<Option<Poly>>,
}

pub fn check_regular(field: &Field, sol: &BetheSolution, sys: &BetheSystem) -> Result<RegularReport> {
    sol.check_shape(sys)?;
    let mut quotients = Vec::with_capacity(sys.n - 1);
    for i in 1..sys.n {
        let big = bethe_p_poly(field, i, sol, sys)?;
        quotients.push(big.div_exact(&sol.p_at(i)));
    }
    Ok(RegularReport { regular: quotients.iter().all(|q| q.is_some()), quotients })
}

/// Admissibility of a single polynomial: coprime to its `q^2`-shift and `p(0) != 0`.
pub fn poly_admissible(field: &Field, p: &Poly) -> bool {
    let q2 = field.q_pow(2 * field.denominator() as i64);
    !p.coeff(0).is_zero() && p.gcd(&p.scale_var(&q2)).is_one()
}

pub fn check_admissible(field: &Field, sol: &BetheSolution) -> bool {
    sol.p.iter().all(|p| poly_admissible(field, p))
}

pub fn check_generic(sol: &BetheSolution, sys: &BetheSystem) -> bool {
    let n = sys.n;
    (1..n.saturating_sub(1)).all(|i| sol.p_at(i).gcd(&sol.p_at(i + 1)).is_one())
        && (1..n).all(|i| sol.p_at(i).gcd(&sys.t_at(i)).is_one())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Generic,
    DominanceFree,
}

/// Whether `q^{2 e} = q^{2 s}` for some integer `s` (with `s >= 1` when `positive`).
fn resonant(field: &Field, e: Rational64, positive: bool) -> bool {
    match field.q2_period() {
        None => e.is_integer() && (!positive || e >= Rational64::one()),
        Some(per) => (1..=per).any(|s| field.q2_is_one(e - Rational64::from_integer(s))),
    }
}

pub fn check_weights(field: &Field, lambda: &[Rational64], mode: WeightMode) -> bool {
    let n = lambda.len();
    for i in 0..n {
        for j in 0..n {
            match mode {
                WeightMode::Generic if i != j => {
                    if resonant(field, lambda[i] - lambda[j], false) {
                        return false;
                    }
                }
                WeightMode::DominanceFree if i < j => {
                    if resonant(field, lambda[i] - lambda[j], true) {
                        return false;
                    }
                }
                _ => {}
            }
        }
    }
    true
}

/// Values `P_i^{(k)}(t)` for every root `t` of `p_i` of multiplicity `mu`, `k < mu`.
pub fn residuals_at_roots(field: &Field, sol: &BetheSolution, sys: &BetheSystem) -> Result<Vec<Scalar>> {
    let roots = sol
        .roots
        .as_ref()
        .ok_or_else(|| Error::Precondition("solution has no explicit roots; use check_regular".into()))?;
    let mut out = Vec::new();
    for (k, rs) in roots.iter().enumerate() {
        let i = k + 1;
        let big = bethe_p_poly(field, i, sol, sys)?;
        let mut seen: Vec<Scalar> = Vec::new();
        for t in rs {
            if seen.contains(t) {
                continue;
            }
            let mu = rs.iter().filter(|s| *s == t).count();
            let mut d = big.clone();
            for _ in 0..mu {
                out.push(d.eval(t));
                d = d.derivative();
            }
            seen.push(t.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    /// `lambda = (1/2, 0)`, `T_1 = x - w`, `p_1 = x + w q^{-1}`.
    fn closed_form(field: &Field, w: i64) -> (BetheSystem, BetheSolution) {
        let t1 = Poly::from_ints(&[-w, 1]);
        let sys = BetheSystem::new(field, vec![r(1, 2), r(0, 1)], vec![t1], vec![1]).unwrap();
        let d = field.denominator() as i64;
        let root = &field.int(-w) * &field.q_pow(-d);
        (sys, BetheSolution::from_roots(vec![vec![root]]))
    }

    #[test]
    fn closed_form_is_regular_admissible_generic() {
        for field in [Field::generic(2), Field::cyclotomic(12, 2).unwrap()] {
            let (sys, sol) = closed_form(&field, 2);
            assert!(check_regular(&field, &sol, &sys).unwrap().regular);
            assert!(check_admissible(&field, &sol));
            assert!(check_generic(&sol, &sys));
            assert!(residuals_at_roots(&field, &sol, &sys).unwrap().iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn root_at_t_zero_is_not_regular() {
        let field = Field::generic(2);
        let (sys, _) = closed_form(&field, 2);
        let sol = BetheSolution::from_roots(vec![vec![field.int(2)]]);
        assert!(!check_regular(&field, &sol, &sys).unwrap().regular);
        assert!(!check_generic(&sol, &sys));
        let bumped = BetheSolution::from_roots(vec![vec![&(&field.int(-2) * &field.q_pow(-2)) + &field.one()]]);
        assert!(residuals_at_roots(&field, &bumped, &sys).unwrap().iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn empty_system() {
        let field = Field::generic(1);
        let sys = BetheSystem::new(&field, vec![r(1, 1), r(0, 1)], vec![Poly::one()], vec![0]).unwrap();
        let sol = BetheSolution::new(vec![Poly::one()]).unwrap();
        let big = bethe_p_poly(&field, 1, &sol, &sys).unwrap();
        assert_eq!(big, Poly::constant(&field.q_pow(0) + &field.q_pow(2)));
        assert!(check_regular(&field, &sol, &sys).unwrap().regular);
        assert!(check_generic(&sol, &sys));
        assert!(bethe_p_poly(&field, 2, &sol, &sys).is_err());
    }

    #[test]
    fn direct_substitution() {
        let field = Field::generic(1);
        let sys = BetheSystem::new(&field, vec![r(2, 1), r(1, 1)], vec![Poly::from_ints(&[-3, 1])], vec![1]).unwrap();
        let sol = BetheSolution::new(vec![Poly::from_ints(&[-5, 1])]).unwrap();
        let q2 = field.q_pow(2);
        let qm2 = field.q_pow(-2);
        let x = Poly::x();
        let lin = |c: &Scalar, t: i64| x.scale(c).sub(&Poly::from_ints(&[t]));
        let want = lin(&q2, 5).mul(&lin(&field.one(), 3)).scale(&field.q_pow(2)).add(
            &lin(&qm2, 5).mul(&lin(&q2, 3)).scale(&field.q_pow(4)),
        );
        assert_eq!(bethe_p_poly(&field, 1, &sol, &sys).unwrap(), want);
    }

    #[test]
    fn admissibility() {
        let field = Field::generic(1);
        let t = field.int(3);
        let ok = BetheSolution::from_roots(vec![vec![t.clone()]]);
        assert!(check_admissible(&field, &ok));
        let bad = BetheSolution::from_roots(vec![vec![t.clone(), &t * &field.q_pow(2)]]);
        assert!(!check_admissible(&field, &bad));
        let zero = BetheSolution::new(vec![Poly::x()]).unwrap();
        assert!(!check_admissible(&field, &zero));
    }

    #[test]
    fn weights() {
        let g = Field::generic(2);
        assert!(check_weights(&g, &[r(1, 2), r(0, 1)], WeightMode::Generic));
        assert!(!check_weights(&g, &[r(1, 1), r(0, 1)], WeightMode::DominanceFree));
        assert!(check_weights(&g, &[r(0, 1), r(1, 1)], WeightMode::DominanceFree));
        assert!(!check_weights(&g, &[r(0, 1), r(1, 1)], WeightMode::Generic));
        let c = Field::cyclotomic(3, 2).unwrap();
        assert!(!check_weights(&c, &[r(1, 2), r(0, 1)], WeightMode::Generic));
    }
}
