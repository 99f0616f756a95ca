//! Point counts of `y^2 + a·x^3 + b·x = 0` over `F_p`, by rows and by slices.
//!
//! Slicing at `y = i` leaves the cubic `a·x^3 + b·x + i^2`; the affine point
//! count is the sum over `i` of its number of distinct roots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::field::{primes_up_to, Field, PrimeField};
use crate::monomial::Monomial;
use crate::poly::{MPoly, PolyRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl CurveSpec {
    /// Reduces `a` and `b` mod `p`; `a` must stay nonzero.
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let (a, b) = (field.reduce(a), field.reduce(b));
        if a == 0 {
            return Err(AlgebraError::InvalidArgument(format!(
                "a must be nonzero mod {p}"
            )));
        }
        Ok(Self { p, a, b })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated in new")
    }

    /// Whether `(x, y)` lies on the affine curve.
    pub fn contains(&self, x: u64, y: u64) -> bool {
        let p = self.p;
        (y * y % p + self.a * (x * x % p * x % p) % p + self.b * x % p) % p == 0
    }

    /// The slice cubic `a·x^3 + b·x + i^2` in `F_p[x]`.
    pub fn slice_cubic(&self, i: u64) -> MPoly<PrimeField> {
        let ring = PolyRing::new(self.field(), ["x"]);
        let i2 = i * i % self.p;
        ring.from_terms([
            (Monomial(vec![3]), self.a),
            (Monomial(vec![1]), self.b),
            (Monomial(vec![0]), i2),
        ])
    }
}

impl std::fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "y^2 + {}*x^3 + {}*x = 0 over F_{}", self.a, self.b, self.p)
    }
}

/// Affine points by scanning every `(x, y)`, plus the point at infinity.
pub fn naive_count(c: &CurveSpec) -> u64 {
    let mut n = 1;
    for x in 0..c.p {
        for y in 0..c.p {
            if c.contains(x, y) {
                n += 1;
            }
        }
    }
    n
}

/// `l_i` = number of distinct roots of the slice cubic at `y = i`, for `i = 0..p-1`.
pub fn slice_counts(c: &CurveSpec) -> Vec<u64> {
    (0..c.p)
        .into_par_iter()
        .map(|i| roots(&c.slice_cubic(i)).len() as u64)
        .collect()
}

fn roots(f: &MPoly<PrimeField>) -> Vec<u64> {
    (0..f.field().modulus())
        .filter(|&x| f.eval(&[x]).map(|v| v == 0).unwrap_or(false))
        .collect()
}

/// Multiplicity of the root `r` of a univariate polynomial, by repeated
/// synthetic division.
fn root_multiplicity(f: &MPoly<PrimeField>, r: u64) -> u64 {
    let field = f.field();
    let deg = f.total_degree().unwrap_or(0) as usize;
    // coefficients, highest degree first
    let mut coeffs: Vec<u64> = (0..=deg)
        .rev()
        .map(|d| f.coeff(&Monomial(vec![d as u32])))
        .collect();
    let mut mult = 0;
    while coeffs.len() > 1 {
        let mut quotient = Vec::with_capacity(coeffs.len() - 1);
        let mut acc = 0;
        for &c in &coeffs {
            acc = field.add(&field.mul(&acc, &r), &c);
            quotient.push(acc);
        }
        if quotient.pop() != Some(0) {
            break;
        }
        mult += 1;
        coeffs = quotient;
    }
    mult
}

/// Slice counts with roots weighted by multiplicity.
pub fn slice_counts_with_multiplicity(c: &CurveSpec) -> Vec<u64> {
    (0..c.p)
        .map(|i| {
            let f = c.slice_cubic(i);
            roots(&f).iter().map(|&r| root_multiplicity(&f, r)).sum()
        })
        .collect()
}

/// Some affine point of the curve where `2y` and `3a·x^2 + b` both vanish.
pub fn singular_point(c: &CurveSpec) -> Option<(u64, u64)> {
    let p = c.p;
    (0..p)
        .flat_map(|x| (0..p).map(move |y| (x, y)))
        .find(|&(x, y)| c.contains(x, y) && 2 * y % p == 0 && (3 * c.a % p * (x * x % p) + c.b) % p == 0)
}

pub fn singularity_check(c: &CurveSpec) -> bool {
    singular_point(c).is_some()
}

/// `⌊√n⌋` in integers.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `|N - (p+1)| ≤ 2⌊√p⌋ + 1`.
pub fn hasse_check(c: &CurveSpec) -> Result<bool> {
    if singularity_check(c) {
        return Err(AlgebraError::SingularCurve);
    }
    Ok(hasse_holds(c.p, naive_count(c)))
}

fn hasse_holds(p: u64, n: u64) -> bool {
    n.abs_diff(p + 1) <= 2 * isqrt(p) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceCountReport {
    pub curve: CurveSpec,
    pub equation: String,
    /// Slices are indexed by `i = 0..p-1`, which covers every residue once.
    pub slice_range: String,
    pub l: Vec<u64>,
    pub l_with_multiplicity: Vec<u64>,
    pub slice_sum_plus_one: u64,
    pub naive_count: u64,
    pub identity_holds: bool,
    pub singular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_point: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hasse_ok: Option<bool>,
}

/// Counts both ways, compares, and runs the sanity checks.
pub fn verify_identity(c: &CurveSpec) -> SliceCountReport {
    let l = slice_counts(c);
    let slice_sum_plus_one = l.iter().sum::<u64>() + 1;
    let naive = naive_count(c);
    let singular_point = singular_point(c);
    SliceCountReport {
        curve: *c,
        equation: format!("y^2 + {}*x^3 + {}*x", c.a, c.b),
        slice_range: format!("0..{}", c.p - 1),
        l_with_multiplicity: slice_counts_with_multiplicity(c),
        l,
        slice_sum_plus_one,
        naive_count: naive,
        identity_holds: slice_sum_plus_one == naive,
        singular: singular_point.is_some(),
        singular_point,
        hasse_ok: singular_point.is_none().then(|| hasse_holds(c.p, naive)),
    }
}

/// Points of `F_p^n` where every partial derivative of `f` vanishes.
pub fn critical_locus(f: &MPoly<PrimeField>, budget: u64) -> Result<Vec<Vec<u64>>> {
    let n = f.nvars();
    if n > 3 {
        return Err(AlgebraError::InvalidArgument(format!(
            "critical locus needs at most 3 variables, got {n}"
        )));
    }
    let p = f.field().modulus();
    let states = (p as u128).pow(n as u32);
    if states > budget as u128 {
        return Err(AlgebraError::StateBudgetExceeded { states, budget });
    }
    let grad = f.gradient();
    let mut out = Vec::new();
    let mut point = vec![0u64; n];
    for s in 0..states as u64 {
        let mut rest = s;
        for slot in point.iter_mut() {
            *slot = rest % p;
            rest /= p;
        }
        if grad.iter().all(|g| g.eval(&point).map(|v| v == 0).unwrap_or(false)) {
            out.push(point.clone());
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepCase {
    pub index: usize,
    pub report: SliceCountReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub pmax: u64,
    pub samples: usize,
    pub seed: u64,
    pub primes: usize,
    pub cases: usize,
    pub identity_failures: usize,
    pub singular: usize,
    pub hasse_failures: usize,
}

/// Specs for every prime `p ≤ pmax`, `samples` each, `a ∈ 1..p`, `b ∈ 0..p`.
/// Sampling is sequential so the list depends only on the seed.
pub fn sweep_specs(pmax: u64, samples: usize, seed: u64) -> Vec<CurveSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::new();
    for p in primes_up_to(pmax) {
        for _ in 0..samples {
            let a = rng.gen_range(1..p);
            let b = rng.gen_range(0..p);
            specs.push(CurveSpec { p, a, b });
        }
    }
    specs
}

/// Runs [`verify_identity`] over the sweep in parallel, keeping case order.
pub fn curve_sweep(pmax: u64, samples: usize, seed: u64) -> (SweepSummary, Vec<SweepCase>) {
    let specs = sweep_specs(pmax, samples, seed);
    let cases: Vec<SweepCase> = specs
        .par_iter()
        .enumerate()
        .map(|(index, c)| SweepCase {
            index,
            report: verify_identity(c),
        })
        .collect();
    let summary = SweepSummary {
        pmax,
        samples,
        seed,
        primes: primes_up_to(pmax).len(),
        cases: cases.len(),
        identity_failures: cases.iter().filter(|c| !c.report.identity_holds).count(),
        singular: cases.iter().filter(|c| c.report.singular).count(),
        hasse_failures: cases
            .iter()
            .filter(|c| c.report.hasse_ok == Some(false))
            .count(),
    };
    (summary, cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, a: i64, b: i64) -> CurveSpec {
        CurveSpec::new(p, a, b).unwrap()
    }

    #[test]
    fn p5_a1_b1() {
        let c = spec(5, 1, 1);
        assert_eq!(naive_count(&c), 4);
        assert_eq!(slice_counts(&c), vec![3, 0, 0, 0, 0]);
        let r = verify_identity(&c);
        assert!(r.identity_holds);
        assert_eq!(r.slice_sum_plus_one, 4);
        assert!(!r.singular);
        assert_eq!(r.hasse_ok, Some(true));
        assert!(hasse_check(&c).unwrap());
    }

    #[test]
    fn p2_a1_b1() {
        let c = spec(2, 1, 1);
        assert_eq!(slice_counts(&c), vec![2, 0]);
        // (0,0), (1,0)
        assert_eq!(naive_count(&c), 3);
        assert_eq!(singular_point(&c), Some((1, 0)));
        assert!(matches!(hasse_check(&c), Err(AlgebraError::SingularCurve)));
        let r = verify_identity(&c);
        assert!(r.identity_holds);
        assert_eq!(r.hasse_ok, None);
    }

    #[test]
    fn p3_a1_b0() {
        let c = spec(3, 1, 0);
        assert_eq!(naive_count(&c), 4);
        assert!(singularity_check(&c));
        assert!(verify_identity(&c).identity_holds);
    }

    #[test]
    fn p7_examples() {
        assert!(verify_identity(&spec(7, 1, 0)).identity_holds);
        let c = spec(7, 1, 1);
        assert!(!singularity_check(&c));
        assert!(hasse_check(&c).unwrap());
    }

    #[test]
    fn zero_a_rejected() {
        assert!(CurveSpec::new(5, 5, 1).is_err());
        assert!(CurveSpec::new(4, 1, 1).is_err());
    }

    #[test]
    fn multiplicities() {
        // x^3 over F_5 has a triple root at 0
        let c = spec(5, 1, 0);
        assert_eq!(slice_counts(&c)[0], 1);
        assert_eq!(slice_counts_with_multiplicity(&c)[0], 3);
        // x^3 + x = x(x-2)(x-3) over F_5
        assert_eq!(slice_counts_with_multiplicity(&spec(5, 1, 1))[0], 3);
    }

    #[test]
    fn critical_loci() {
        let r2 = PolyRing::new(PrimeField::new(2).unwrap(), ["x", "y"]);
        let f = r2.parse("y^3+x^2+x^3").unwrap();
        assert_eq!(critical_locus(&f, 100).unwrap(), vec![vec![0, 0]]);
        let r5 = PolyRing::new(PrimeField::new(5).unwrap(), ["x", "y"]);
        let f = r5.parse("x^2+y^2").unwrap();
        assert_eq!(critical_locus(&f, 100).unwrap(), vec![vec![0, 0]]);
        let r = PolyRing::new(PrimeField::new(5).unwrap(), ["x"]);
        for i in 0..5 {
            let f = r.parse(&format!("{}+x^3+x", i * i)).unwrap();
            assert!(critical_locus(&f, 100).unwrap().is_empty());
        }
        assert!(matches!(
            critical_locus(&f_big(), 10),
            Err(AlgebraError::StateBudgetExceeded { .. })
        ));
    }

    fn f_big() -> MPoly<PrimeField> {
        PolyRing::new(PrimeField::new(7).unwrap(), ["x", "y"]).parse("x*y").unwrap()
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..2000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }

    #[test]
    fn sweep_is_seeded() {
        assert_eq!(sweep_specs(30, 3, 9), sweep_specs(30, 3, 9));
        assert_ne!(sweep_specs(30, 3, 9), sweep_specs(30, 3, 10));
        let (summary, cases) = curve_sweep(30, 3, 9);
        assert_eq!(summary.cases, 30);
        assert_eq!(summary.identity_failures, 0);
        assert!(cases.iter().enumerate().all(|(i, c)| c.index == i));
    }
}
