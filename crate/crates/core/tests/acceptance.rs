//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use bethe_qpoly::bethe::{check_admissible, check_generic, check_regular, residuals_at_roots, BetheSolution, BetheSystem};
use bethe_qpoly::diffop::{fundamental_operator, operators_equal, regularize, DifferenceOperator, RegularizeMode};
use bethe_qpoly::poly::{Body, Poly};
use bethe_qpoly::qpoly::identities::{run_suite, same_function, SuiteReport};
use bethe_qpoly::qpoly::{wronskian, QuasiPolynomial};
use bethe_qpoly::ratfunc::RatFunc;
use bethe_qpoly::reconstruct::{reconstruct_collection, verify_preframe, Collection, Preframe};
use bethe_qpoly::roundtrip::{self, RoundtripReport};
use bethe_qpoly::{Error, Field, Scalar};

type Outcome = Result<String, String>;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

// u1 = x, u2 = 1/(1 - q^-2) + q^2 x log x / (2 log q), type (1, 0)
fn golden(f: &Field) -> Collection {
    let d = f.denominator() as i64;
    let u1 = QuasiPolynomial::monomial(r(1, 1));
    let c0 = f.one().try_div(&(&f.one() - &f.q_pow(-2 * d))).unwrap();
    let c1 = f.q_pow(2 * d).try_div(&(&f.log_q() * &f.int(2))).unwrap();
    let u2 = QuasiPolynomial::new(r(0, 1), Body::from_terms(&[(0, 0, c0), (1, 1, c1)]));
    Collection::new(f, vec![u1, u2]).unwrap()
}

// tau^2 - (q^-2 + (1 - x q^-2)/(1 - x)) tau + q^-2 (1 - x q^-2)/(1 - x)
fn expected_operator(f: &Field) -> DifferenceOperator {
    let qm2 = f.q_pow(-2 * f.denominator() as i64);
    let ratio = RatFunc::new(Poly::from_coeffs(vec![f.one(), qm2.neg_s()]), Poly::from_ints(&[1, -1])).unwrap();
    let a1 = RatFunc::constant(qm2.clone()).add(&ratio).neg();
    let a0 = ratio.scale(&qm2);
    DifferenceOperator::new(vec![a0, a1, RatFunc::one()]).unwrap()
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let f = Field::generic(1);
    let u = golden(&f);
    let w = u.wronskian(&f);
    let want = QuasiPolynomial::log_free(r(0, 1), Poly::from_ints(&[0, 1, -1]));
    ensure(same_function(&w, &want), format!("W_2 = {w}"))?;
    let d = fundamental_operator(&f, &u).map_err(e2s)?;
    ensure(d == expected_operator(&f), format!("D_U = {d}"))?;
    let reg = regularize(&f, &u, RegularizeMode::Any).map_err(e2s)?;
    ensure(reg.collection.is_regular(&f), "regularize(any) is not regular")?;
    ensure(operators_equal(&fundamental_operator(&f, &reg.collection).map_err(e2s)?, &d), "regularize(any) changed the operator")?;
    match regularize(&f, &u, RegularizeMode::PreserveType) {
        Err(Error::NotRegularizableInType(_)) => {}
        other => return Err(format!("generic preserve_type: expected NotRegularizableInType, got {other:?}")),
    }
    for ell in [2u32, 3] {
        let fc = Field::cyclotomic(2 * ell, 1).map_err(e2s)?;
        let uc = golden(&fc);
        let reg = regularize(&fc, &uc, RegularizeMode::PreserveType).map_err(e2s)?;
        ensure(reg.collection.lambda() == vec![r(1, 1), r(0, 1)], "preserve_type changed the type")?;
        ensure(reg.collection.is_regular(&fc), "preserve_type result is not regular")?;
        let x_ell_u2 = QuasiPolynomial::new(r(0, 1), uc.u()[1].body().mul_x_pow(ell as usize));
        ensure(same_function(&reg.collection.u()[0], &x_ell_u2), format!("Cyclotomic({}): u'_1 != x^{ell} u_2", 2 * ell))?;
        let dc = fundamental_operator(&fc, &uc).map_err(e2s)?;
        ensure(operators_equal(&fundamental_operator(&fc, &reg.collection).map_err(e2s)?, &dc), "preserve_type changed the operator")?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("W_2 = x - x^2, D_U as expected, regularize any/preserve as documented ({t:?})"))
}

fn suite_ok(rep: &SuiteReport) -> Result<(), String> {
    for l in &rep.lemmas {
        ensure(l.ok(), format!("{} {}: {}/{} (first failing seed {:?})", rep.field, l.lemma, l.passed, l.instances, l.first_failure))?;
    }
    Ok(())
}

fn criterion2(suites: &[(SuiteReport, Duration)]) -> Outcome {
    let mut parts = Vec::new();
    for (rep, t) in suites {
        suite_ok(rep)?;
        ensure(*t < Duration::from_secs(60), format!("{}: took {t:?}", rep.field))?;
        let n = rep.lemmas.iter().map(|l| l.instances).min().unwrap_or(0);
        ensure(n >= 100, format!("only {n} instances"))?;
        parts.push(format!("{}: {} lemmas x {n} ({t:?})", rep.field, rep.lemmas.len()));
    }
    Ok(parts.join("; "))
}

/// `t = w(1 - kappa)/(q^2 - kappa)`, `kappa = q^{2(lambda_2 - lambda_1 + 1)}`.
fn closed_form(f: &Field, w: i64) -> Outcome {
    let lambda = vec![r(1, 2), r(0, 1)];
    let q2 = f.q2_power(r(1, 1)).map_err(e2s)?;
    let kappa = f.q2_power(lambda[1] - lambda[0] + r(1, 1)).map_err(e2s)?;
    let t = (&f.int(w) * &(&f.one() - &kappa)).try_div(&(&q2 - &kappa)).map_err(e2s)?;
    let qinv = f.q_power(r(-1, 1)).map_err(e2s)?;
    let p1 = Poly::from_coeffs(vec![&f.int(w) * &qinv, f.one()]);
    ensure(p1 == Poly::from_coeffs(vec![t.neg_s(), f.one()]), "x + w q^-1 does not match the root formula")?;
    let sys = BetheSystem::new(f, lambda, vec![Poly::from_coeffs(vec![f.int(-w), f.one()])], vec![1]).map_err(e2s)?;
    let sol = BetheSolution::new(vec![p1]).map_err(e2s)?.with_roots(vec![vec![t]]).map_err(e2s)?;
    ensure(check_admissible(f, &sol), "not admissible")?;
    ensure(check_regular(f, &sol, &sys).map_err(e2s)?.regular, "not regular")?;
    ensure(check_generic(&sol, &sys), "not generic")?;
    ensure(residuals_at_roots(f, &sol, &sys).map_err(e2s)?.iter().all(Scalar::is_zero), "residual at the root")?;
    let rec = reconstruct_collection(f, &sol, &sys).map_err(e2s)?;
    let w2 = wronskian(f, rec.collection.u());
    let want = QuasiPolynomial::log_free(r(1, 2), Poly::from_coeffs(vec![f.int(-w), f.one()]));
    ensure(w2 == want, format!("W_2 = {w2}"))?;
    let rep = verify_preframe(f, &rec.collection, &Preframe::from_system(&sys));
    ensure(rep.holds, "(T_1, 1) is not a preframe of the reconstruction")?;
    let sign = if w < 0 { "+" } else { "-" };
    Ok(format!("{}: w = {w}, W_2 = x^(1/2)(x {sign} {})", f.config(), w.abs()))
}

fn criterion3(f: &Field) -> Outcome {
    let mut out = Vec::new();
    for w in [2, -3, 5] {
        out.push(closed_form(f, w)?);
    }
    Ok(out.join("; "))
}

fn roundtrip_verdicts(rep: &RoundtripReport, t: Duration) -> (Outcome, Outcome) {
    let count = |n: usize| rep.instances.iter().filter(|i| i.n == n).count();
    let bad_rt = rep.instances.iter().find(|i| !i.roundtrip_ok);
    let bad_k = rep.instances.iter().find(|i| !i.kernel_ok);
    let sizes = format!("N=2:{} N=3:{} N=4:{}", count(2), count(3), count(4));
    let c4 = match bad_rt {
        Some(i) => Err(format!("{}: instance {} (N={}, seed {}): {:?}; first counterexample {}", rep.field, i.index, i.n, i.seed, i.failure, rep.first_counterexample.as_ref().map(|v| v.to_string()).unwrap_or_default())),
        None if count(2) < 25 || count(3) < 25 || count(4) < 5 => Err(format!("too few instances: {sizes}")),
        None => Ok(format!("{}: {sizes}, all round trips exact ({t:?})", rep.field)),
    };
    let c6 = match bad_k {
        Some(i) => Err(format!("{}: instance {} (N={}, seed {}): {:?}", rep.field, i.index, i.n, i.seed, i.failure)),
        None => {
            let combos: usize = rep.instances.iter().map(|i| i.kernel_combinations).sum();
            Ok(format!("{}: unit vectors on {} collections, {combos} planted combinations", rep.field, rep.instances.len()))
        }
    };
    (c4, c6)
}

fn criterion5(f: &Field) -> Outcome {
    let n = 100;
    for s in 0..n {
        let seed = bethe_qpoly::random::sub_seed(0xF00D, s);
        ensure(roundtrip::vy_instance(f, seed).map_err(e2s)?, format!("W_2[F[y,V], y] != V for seed {seed}"))?;
    }
    Ok(format!("{}: {n} planted instances", f.config()))
}

fn criterion8(suites: &[(SuiteReport, Duration)]) -> Outcome {
    let mut pattern = None;
    for (rep, _) in suites {
        ensure(rep.wid3.unique, format!("{}: {} surviving patterns: {:?}", rep.field, rep.wid3.survivors.len(), rep.wid3.survivors))?;
        ensure(rep.wid3.instances >= 50, "fewer than 50 instances")?;
        let p = rep.wid3.pattern.clone().unwrap();
        if let Some(prev) = &pattern {
            ensure(prev == &p, "fields disagree on the pattern")?;
        }
        pattern = Some(p);
    }
    Ok(format!("unique of {} candidates on 50 instances: {}", suites[0].0.wid3.candidates, pattern.unwrap()))
}

fn combine(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join(" | "))
}

fn main() -> ExitCode {
    let generic = Field::generic(2);
    let cyc = Field::cyclotomic(12, 2).expect("Q^2 is a primitive 6th root of unity");
    let plan = [(2, 25), (3, 25), (4, 5)];

    let suites: Vec<(SuiteReport, Duration)> = [Field::generic(2), Field::cyclotomic(6, 1).unwrap()]
        .iter()
        .map(|f| {
            let t = Instant::now();
            let rep = run_suite(f, 0, 4, 100, 50);
            (rep, t.elapsed())
        })
        .collect();

    let t = Instant::now();
    let rt_gen = roundtrip::run(&generic, 0, &plan, 3);
    let t_gen = t.elapsed();
    let t = Instant::now();
    let rt_cyc = roundtrip::run(&cyc, 0, &plan, 3);
    let t_cyc = t.elapsed();
    let (c4, c6) = roundtrip_verdicts(&rt_gen, t_gen);
    let (c4c, c6c) = roundtrip_verdicts(&rt_cyc, t_cyc);
    let c4 = c4.and_then(|s| {
        let total = t_gen + t_cyc;
        ensure(total < Duration::from_secs(600), format!("round trips took {total:?}"))?;
        Ok(s)
    });

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "golden example", criterion1()),
        (2, "determinant identity suite", criterion2(&suites)),
        (3, "N=2 closed form", criterion3(&generic)),
        (4, "round trip", c4),
        (5, "F[y,V] contract", criterion5(&generic)),
        (6, "kernel coordinates", c6),
        (
            7,
            "cyclotomic parity (q primitive 6th root)",
            combine(vec![criterion3(&cyc), c4c, criterion5(&cyc), c6c]),
        ),
        (8, "complementary-minor pattern", criterion8(&suites)),
    ];
    let mut failed = 0;
    for (n, name, res) in &results {
        match res {
            Ok(d) => println!("criterion {n} ({name}): PASS - {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL - {d}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
