//! Seeded random generators for sweeps and property checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::field::{Field, PrimeField, Rationals};
use crate::monomial::Monomial;
use crate::poly::{MPoly, PolyRing};

/// Random exponent vector of total degree at most `max_deg`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> Monomial {
    let mut budget = rng.gen_range(0..=max_deg);
    let mut exps = vec![0u32; nvars];
    let mut order: Vec<usize> = (0..nvars).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for (k, &i) in order.iter().enumerate() {
        let e = if k + 1 == nvars {
            budget
        } else {
            rng.gen_range(0..=budget)
        };
        exps[i] = e;
        budget -= e;
    }
    Monomial(exps)
}

/// Sum of up to `max_terms` random terms, coefficients drawn by `coeff`.
pub fn random_poly<F, R, C>(
    ring: &PolyRing<F>,
    rng: &mut R,
    max_deg: u32,
    max_terms: usize,
    mut coeff: C,
) -> MPoly<F>
where
    F: Field,
    R: Rng + ?Sized,
    C: FnMut(&mut R) -> F::Elem,
{
    let count = rng.gen_range(0..=max_terms);
    let mut f = ring.zero();
    for _ in 0..count {
        let m = random_monomial(rng, ring.nvars(), max_deg);
        let c = coeff(rng);
        f = &f + &ring.monomial(m, c);
    }
    f
}

/// Random polynomial over `F_p` with uniform coefficients.
pub fn random_fp_poly<R: Rng + ?Sized>(
    ring: &PolyRing<PrimeField>,
    rng: &mut R,
    max_deg: u32,
    max_terms: usize,
) -> MPoly<PrimeField> {
    let p = ring.field().modulus();
    random_poly(ring, rng, max_deg, max_terms, |r| r.gen_range(0..p))
}

/// Random polynomial over `Q` with coefficients `a/b`, `|a| ≤ 9`, `1 ≤ b ≤ 4`.
pub fn random_q_poly<R: Rng + ?Sized>(
    ring: &PolyRing<Rationals>,
    rng: &mut R,
    max_deg: u32,
    max_terms: usize,
) -> MPoly<Rationals> {
    random_poly(ring, rng, max_deg, max_terms, |r| {
        BigRational::new(BigInt::from(r.gen_range(-9i64..=9)), BigInt::from(r.gen_range(1i64..=4)))
    })
}

/// Random element generator for any field, via small integers or ratios.
pub fn random_elem<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R) -> F::Elem {
    let num = field.from_i64(rng.gen_range(-9i64..=9));
    let den = field.from_i64(rng.gen_range(1i64..=4));
    field.div(&num, &den).unwrap_or(num)
}
