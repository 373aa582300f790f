//! Determinant identities for discrete Wronskians, checked exactly on seeded
//! random log-free inputs, plus the index-pattern search for the
//! complementary-minor identity, whose index pattern is not fixed a priori.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use super::{wronskian, QuasiPolynomial};
use crate::random;
use crate::scalars::Field;

/// Equality of functions: aligns the `x^alpha` prefactors first.
pub fn same_function(a: &QuasiPolynomial, b: &QuasiPolynomial) -> bool {
    match (a.exponent(), b.exponent()) {
        (None, None) => true,
        (Some(x), Some(y)) => {
            let m = if x < y { x } else { y };
            match (a.with_exponent(m), b.with_exponent(m)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
        }
        _ => false,
    }
}

fn one() -> QuasiPolynomial {
    QuasiPolynomial::monomial(Rational64::from_integer(0))
}

fn product<'a>(it: impl IntoIterator<Item = &'a QuasiPolynomial>) -> QuasiPolynomial {
    it.into_iter().fold(one(), |acc, f| acc.mul(f))
}

fn sign(f: &QuasiPolynomial, negative: bool) -> QuasiPolynomial {
    if negative {
        f.neg()
    } else {
        f.clone()
    }
}

fn draw(field: &Field, seed: u64, n: usize) -> Vec<QuasiPolynomial> {
    let mut r = random::rng(seed);
    (0..n).map(|_| random::log_free(&mut r, field, 2)).collect()
}

fn without(fs: &[QuasiPolynomial], i: usize) -> Vec<QuasiPolynomial> {
    fs.iter().enumerate().filter(|(m, _)| *m != i).map(|(_, f)| f.clone()).collect()
}

/// `W_k[g f_1..g f_k] = W_k[f] * prod_{i<k} g(x q^{-2i})`.
pub fn check_common(field: &Field, fs: &[QuasiPolynomial], g: &QuasiPolynomial) -> bool {
    let k = fs.len();
    let gf: Vec<_> = fs.iter().map(|f| g.mul(f)).collect();
    let shifts: Vec<_> = (0..k as i64).map(|i| g.shift(field, -i)).collect();
    same_function(&wronskian(field, &gf), &wronskian(field, fs).mul(&product(&shifts)))
}

/// `h_i = W_{j+1}[g_i, f]`: `W_k[h] = W_{j+k}[g, f] * prod_{l=1}^{k-1} W_j[f](x q^{-2l})`.
pub fn check_wid(field: &Field, gs: &[QuasiPolynomial], fs: &[QuasiPolynomial]) -> bool {
    let k = gs.len() as i64;
    let h: Vec<_> = gs
        .iter()
        .map(|g| {
            let mut v = vec![g.clone()];
            v.extend_from_slice(fs);
            wronskian(field, &v)
        })
        .collect();
    let mut all = gs.to_vec();
    all.extend_from_slice(fs);
    let wf = wronskian(field, fs);
    let shifts: Vec<_> = (1..k).map(|l| wf.shift(field, -l)).collect();
    same_function(&wronskian(field, &h), &wronskian(field, &all).mul(&product(&shifts)))
}

/// Both last-row expansions:
/// `sum_i (-1)^i W_{k-1}[f \ f_i] f_i(x q^{-2l}) = 0` for `l <= k-2`, and
/// `sum_i (-1)^{k-i} W_{k-1}[f \ f_i] f_i(x q^{2-2k}) = W_k[f]` (1-based `i`).
pub fn check_wid2(field: &Field, fs: &[QuasiPolynomial]) -> (bool, bool) {
    let k = fs.len();
    let minors: Vec<_> = (0..k).map(|i| wronskian(field, &without(fs, i))).collect();
    let expand = |l: i64, sgn: &dyn Fn(usize) -> bool| {
        let mut acc = QuasiPolynomial::zero();
        for i in 0..k {
            let t = sign(&minors[i].mul(&fs[i].shift(field, -l)), sgn(i + 1));
            acc = add_any(&acc, &t);
        }
        acc
    };
    let vanish = (0..=(k as i64 - 2)).all(|l| expand(l, &|i| i % 2 == 1).is_zero());
    let last = expand(k as i64 - 1, &|i| (k - i) % 2 == 1);
    (vanish, same_function(&last, &wronskian(field, fs)))
}

/// Sum of two quasi-polynomials whose types differ by an integer.
fn add_any(a: &QuasiPolynomial, b: &QuasiPolynomial) -> QuasiPolynomial {
    match (a.exponent(), b.exponent()) {
        (None, _) => b.clone(),
        (_, None) => a.clone(),
        (Some(x), Some(y)) => {
            let m = if x < y { x } else { y };
            let a = a.with_exponent(m).expect("integer type offset");
            let b = b.with_exponent(m).expect("integer type offset");
            a.add(&b).expect("aligned types")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Index {
    K,
    KMinus1,
    KMinus2,
    J,
    JMinus1,
    JMinus2,
}

impl Index {
    fn eval(self, k: i64, j: i64) -> i64 {
        match self {
            Index::K => k,
            Index::KMinus1 => k - 1,
            Index::KMinus2 => k - 2,
            Index::J => j,
            Index::JMinus1 => j - 1,
            Index::JMinus2 => j - 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Index::K => "k",
            Index::KMinus1 => "k-1",
            Index::KMinus2 => "k-2",
            Index::J => "j",
            Index::JMinus1 => "j-1",
            Index::JMinus2 => "j-2",
        }
    }
}

/// Candidate reading of
/// `W_j[g..](x) = sign * W_{k-j}[f_{j+1}..f_k](x q^{-2a}) * prod_{l=lo}^{up} W_s[f_1..f_s](x q^{-2l})`
/// with `g_i = W_{k-1}[f without f_i]` and `a = a_j * j + a_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Wid3Pattern {
    pub descending: bool,
    pub a_j: i64,
    pub a_0: i64,
    pub s: Index,
    pub lo: i64,
    pub up: Index,
    pub negative: bool,
}

impl fmt::Display for Wid3Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = if self.descending { "g_j,...,g_1" } else { "g_1,...,g_j" };
        let a = match (self.a_j, self.a_0) {
            (0, c) => format!("{c}"),
            (1, 0) => "j".into(),
            (-1, 0) => "-j".into(),
            (1, c) => format!("j{c:+}"),
            (-1, c) => format!("-j{c:+}"),
            (m, c) => format!("{m}j{c:+}"),
        };
        let sgn = if self.negative { "-" } else { "" };
        let s = self.s.name();
        write!(
            f,
            "W_j[{lhs}](x) = {sgn}W_{{k-j}}[f_{{j+1}},...,f_k](x q^(-2({a}))) * prod_{{l={}}}^{{{}}} W_{s}[f_1,...,f_{s}](x q^(-2l))",
            self.lo,
            self.up.name()
        )
    }
}

impl Wid3Pattern {
    /// The search space.
    pub fn all() -> Vec<Wid3Pattern> {
        let mut v = Vec::new();
        for descending in [true, false] {
            for a_j in -1..=1 {
                for a_0 in -1..=1 {
                    for s in [Index::K, Index::KMinus1, Index::J, Index::JMinus1] {
                        for lo in 0..=1 {
                            for up in [Index::KMinus2, Index::KMinus1, Index::JMinus2, Index::JMinus1] {
                                for negative in [false, true] {
                                    v.push(Wid3Pattern { descending, a_j, a_0, s, lo, up, negative });
                                }
                            }
                        }
                    }
                }
            }
        }
        v
    }
}

/// Everything a pattern needs for one `(f_1..f_k, j)`.
struct Wid3Data {
    k: i64,
    j: i64,
    lhs_desc: QuasiPolynomial,
    lhs_asc: QuasiPolynomial,
    tail: QuasiPolynomial,
    heads: Vec<QuasiPolynomial>,
}

impl Wid3Data {
    fn new(field: &Field, fs: &[QuasiPolynomial], j: usize) -> Self {
        let k = fs.len();
        let g: Vec<_> = (0..k).map(|i| wronskian(field, &without(fs, i))).collect();
        let asc: Vec<_> = g[..j].to_vec();
        let desc: Vec<_> = asc.iter().rev().cloned().collect();
        Wid3Data {
            k: k as i64,
            j: j as i64,
            lhs_desc: wronskian(field, &desc),
            lhs_asc: wronskian(field, &asc),
            tail: wronskian(field, &fs[j..]),
            heads: (0..=k).map(|s| wronskian(field, &fs[..s])).collect(),
        }
    }

    fn holds(&self, field: &Field, p: &Wid3Pattern, cache: &mut HashMap<(i64, i64, i64), QuasiPolynomial>) -> bool {
        let (k, j) = (self.k, self.j);
        let s = p.s.eval(k, j);
        if s < 0 || s > k {
            return false;
        }
        let up = p.up.eval(k, j);
        let prod = cache
            .entry((s, p.lo, up))
            .or_insert_with(|| {
                let w = &self.heads[s as usize];
                (p.lo..=up).fold(one(), |acc, l| acc.mul(&w.shift(field, -l)))
            })
            .clone();
        let a = p.a_j * j + p.a_0;
        let rhs = sign(&self.tail.shift(field, -a).mul(&prod), p.negative);
        let lhs = if p.descending { &self.lhs_desc } else { &self.lhs_asc };
        same_function(lhs, &rhs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Wid3Search {
    pub candidates: usize,
    pub instances: usize,
    pub survivors: Vec<String>,
    pub unique: bool,
    pub pattern: Option<String>,
}

/// Filters the whole pattern space against `instances` random collections,
/// `k` cycling through `2..=max_k` and every `1 <= j <= k` tested per instance.
pub fn search_wid3(field: &Field, seed: u64, max_k: usize, instances: usize) -> (Vec<Wid3Pattern>, Wid3Search) {
    let all = Wid3Pattern::all();
    let candidates = all.len();
    let mut alive = all;
    let ks: Vec<usize> = (2..=max_k.max(2)).collect();
    for n in 0..instances {
        let k = ks[n % ks.len()];
        let fs = draw(field, random::sub_seed(seed, 30_000 + n as u64), k);
        for j in 1..=k {
            let data = Wid3Data::new(field, &fs, j);
            let mut cache = HashMap::new();
            alive.retain(|p| data.holds(field, p, &mut cache));
        }
    }
    let unique = alive.len() == 1;
    let report = Wid3Search {
        candidates,
        instances,
        survivors: alive.iter().map(|p| p.to_string()).collect(),
        unique,
        pattern: unique.then(|| alive[0].to_string()),
    };
    (alive, report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaResult {
    pub lemma: String,
    pub instances: usize,
    pub passed: usize,
    pub first_failure: Option<u64>,
}

impl LemmaResult {
    pub fn ok(&self) -> bool {
        self.passed == self.instances
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub field: String,
    pub seed: u64,
    pub max_k: usize,
    pub lemmas: Vec<LemmaResult>,
    pub wid3: Wid3Search,
    pub all_passed: bool,
}

fn run_lemma(name: &str, tag: u64, seed: u64, instances: usize, check: impl Fn(u64, usize) -> bool + Sync) -> LemmaResult {
    let results: Vec<(u64, bool)> = (0..instances)
        .into_par_iter()
        .map(|n| {
            let s = random::sub_seed(seed, tag * 1_000_000 + n as u64);
            (s, check(s, n))
        })
        .collect();
    LemmaResult {
        lemma: name.into(),
        instances,
        passed: results.iter().filter(|(_, ok)| *ok).count(),
        first_failure: results.iter().find(|(_, ok)| !ok).map(|(s, _)| *s),
    }
}

/// The identity suite: `instances` draws per lemma with sizes `<= max_k`,
/// then the complementary-minor pattern search on `wid3_instances` draws.
pub fn run_suite(field: &Field, seed: u64, max_k: usize, instances: usize, wid3_instances: usize) -> SuiteReport {
    let max_k = max_k.max(2);
    let common = run_lemma("common", 1, seed, instances, |s, n| {
        let k = 1 + n % max_k;
        let mut fs = draw(field, s, k + 1);
        let g = fs.pop().unwrap();
        check_common(field, &fs, &g)
    });
    let pairs: Vec<(usize, usize)> =
        (1..max_k).flat_map(|j| (1..=max_k - j).map(move |k| (j, k))).collect();
    let wid = run_lemma("wid", 2, seed, instances, |s, n| {
        let (j, k) = pairs[n % pairs.len()];
        let fs = draw(field, s, j + k);
        check_wid(field, &fs[..k], &fs[k..])
    });
    let wid2: Vec<(bool, bool)> = (0..instances)
        .into_par_iter()
        .map(|n| {
            let k = 2 + n % (max_k - 1);
            check_wid2(field, &draw(field, random::sub_seed(seed, 3_000_000 + n as u64), k))
        })
        .collect();
    let summarize = |name: &str, f: &dyn Fn(&(bool, bool)) -> bool| LemmaResult {
        lemma: name.into(),
        instances,
        passed: wid2.iter().filter(|r| f(r)).count(),
        first_failure: wid2
            .iter()
            .position(|r| !f(r))
            .map(|n| random::sub_seed(seed, 3_000_000 + n as u64)),
    };
    let lemmas = vec![
        common,
        wid,
        summarize("wid2-vanishing", &|r| r.0),
        summarize("wid2-expansion", &|r| r.1),
    ];
    let (_, wid3) = search_wid3(field, seed, max_k, wid3_instances);
    let all_passed = lemmas.iter().all(|l| l.ok()) && wid3.unique;
    SuiteReport { field: field.config().to_string(), seed, max_k, lemmas, wid3, all_passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_generic() {
        let f = Field::generic(2);
        let rep = run_suite(&f, 7, 3, 12, 6);
        for l in &rep.lemmas {
            assert!(l.ok(), "{l:?}");
        }
        assert!(rep.wid3.unique, "{:?}", rep.wid3.survivors);
    }

    #[test]
    fn k2_reading_is_unambiguous() {
        // for k = 2 every reading of the indices agrees
        let f = Field::generic(1);
        let fs = draw(&f, 3, 2);
        let d = Wid3Data::new(&f, &fs, 2);
        assert!(same_function(&d.lhs_desc, &wronskian(&f, &fs)));
    }

    #[test]
    fn same_function_aligns() {
        let a = QuasiPolynomial::monomial(Rational64::from_integer(1));
        let b = QuasiPolynomial::log_free(Rational64::from_integer(0), crate::poly::Poly::x());
        assert!(same_function(&a, &b));
        assert!(!same_function(&a, &QuasiPolynomial::zero()));
    }
}
