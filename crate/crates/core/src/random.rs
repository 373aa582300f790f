//! Seeded random instances: small-integer coefficients, occasionally times a
//! power of `Q`, so that every test run is reproducible from a `u64`.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Body, Poly};
use crate::qpoly::QuasiPolynomial;
use crate::scalars::{Field, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mix a run seed with an instance index.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9)) ^ 0x94D0_49BB_1331_11EB
}

pub fn scalar(r: &mut ChaCha8Rng, field: &Field) -> Scalar {
    let mut n = 0;
    while n == 0 {
        n = r.gen_range(-4i64..=4);
    }
    let c = field.int(n);
    if r.gen_bool(0.25) {
        &c * &field.q_pow(r.gen_range(-2i64..=2))
    } else {
        c
    }
}

/// A nonzero polynomial of degree exactly `deg`.
pub fn poly(r: &mut ChaCha8Rng, field: &Field, deg: usize) -> Poly {
    let mut c: Vec<Scalar> = (0..deg).map(|_| if r.gen_bool(0.7) { scalar(r, field) } else { Scalar::zero() }).collect();
    c.push(scalar(r, field));
    Poly::from_coeffs(c)
}

pub fn monic_poly(r: &mut ChaCha8Rng, field: &Field, deg: usize) -> Poly {
    poly(r, field, deg).monic()
}

/// A lattice exponent in `[-1, 1]`.
pub fn exponent(r: &mut ChaCha8Rng, field: &Field) -> Rational64 {
    let d = field.denominator() as i64;
    Rational64::new(r.gen_range(-d..=d), d)
}

pub fn log_free(r: &mut ChaCha8Rng, field: &Field, max_deg: usize) -> QuasiPolynomial {
    let deg = r.gen_range(0..=max_deg);
    QuasiPolynomial::log_free(exponent(r, field), poly(r, field, deg))
}

/// A quasi-polynomial with at most `max_s` powers of `log x`.
pub fn with_logs(r: &mut ChaCha8Rng, field: &Field, max_deg: usize, max_s: usize) -> QuasiPolynomial {
    let s = r.gen_range(0..=max_s);
    let coeffs = (0..=s)
        .map(|_| {
            let d = r.gen_range(0..=max_deg);
            poly(r, field, d)
        })
        .collect();
    QuasiPolynomial::new(exponent(r, field), Body::from_coeffs(coeffs))
}
