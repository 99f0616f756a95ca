//! Buchberger's algorithm, quotient dimensions and Milnor numbers.
//!
//! Local dimensions at the origin are computed with a global order by adding
//! the power `m^N` of the maximal ideal and increasing `N` until the quotient
//! dimension stops changing. If `dim K[x]/(J + m^N) = dim K[x]/(J + m^{N+1})`
//! then `m^N ⊆ J + m^{N+1}`, so `m^N ⊆ J` locally by Nakayama and the value is
//! exact.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{AlgebraError, Result};
use crate::field::{reduce_rational, Field, PrimeField, Rationals};
use crate::monomial::{monomials_of_degree, Monomial, MonomialOrder};
use crate::poly::{MPoly, PolyRing};

/// Default upper bound on the truncation order used by [`local_dimension`].
pub const DEFAULT_N_MAX: u32 = 20;

type Terms<E> = Vec<(Monomial, E)>;

/// Dimension of a quotient as a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            Self::Finite(d) => Some(d),
            Self::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(d) => write!(f, "{d}"),
            Self::Infinite => f.write_str("infinite"),
        }
    }
}

/// Finite dimensions serialize as numbers, infinite ones as the string `"infinite"`.
impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(d) => s.serialize_u64(*d),
            Self::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// `p - c * m * q` for term lists sorted descending; `m * q` keeps its order.
fn sub_scaled<F: Field>(
    field: &F,
    order: &MonomialOrder,
    p: &[(Monomial, F::Elem)],
    q: &[(Monomial, F::Elem)],
    m: &Monomial,
    c: &F::Elem,
) -> Terms<F::Elem> {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let mut i = 0;
    let mut qs = q.iter().map(|(qm, qc)| (qm.mul(m), field.mul(qc, c))).peekable();
    loop {
        match (p.get(i), qs.peek()) {
            (None, None) => break,
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (None, Some(_)) => {
                let (bm, bc) = qs.next().unwrap();
                out.push((bm, field.neg(&bc)));
            }
            (Some(a), Some(b)) => match order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (bm, bc) = qs.next().unwrap();
                    out.push((bm, field.neg(&bc)));
                }
                Ordering::Equal => {
                    let (_, bc) = qs.next().unwrap();
                    let v = field.sub(&a.1, &bc);
                    if !field.is_zero(&v) {
                        out.push((a.0.clone(), v));
                    }
                    i += 1;
                }
            },
        }
    }
    out
}

fn make_monic<F: Field>(field: &F, p: &mut Terms<F::Elem>) {
    if let Some((_, lc)) = p.first() {
        let inv = field.inv(lc).expect("leading coefficient is nonzero");
        for (_, c) in p.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
}

/// Full multivariate division remainder of `p` by `basis` (each entry sorted
/// descending and nonzero).
fn remainder<F: Field>(
    field: &F,
    order: &MonomialOrder,
    mut p: Terms<F::Elem>,
    basis: &[Terms<F::Elem>],
) -> Terms<F::Elem> {
    let mut rem = Vec::new();
    while !p.is_empty() {
        let (lm, lc) = p[0].clone();
        let divisor = basis.iter().find(|g| g[0].0.divides(&lm));
        match divisor {
            Some(g) => {
                let q = g[0].0.quotient_of(&lm).expect("divides");
                let c = field.div(&lc, &g[0].1).expect("nonzero leading coefficient");
                p = sub_scaled(field, order, &p, g, &q, &c);
            }
            None => {
                rem.push(p.remove(0));
            }
        }
    }
    rem
}

fn s_poly_terms<F: Field>(
    field: &F,
    order: &MonomialOrder,
    f: &[(Monomial, F::Elem)],
    g: &[(Monomial, F::Elem)],
) -> Terms<F::Elem> {
    let (fm, fc) = &f[0];
    let (gm, gc) = &g[0];
    let l = fm.lcm(gm);
    let uf = fm.quotient_of(&l).unwrap();
    let ug = gm.quotient_of(&l).unwrap();
    let finv = field.inv(fc).unwrap();
    let ginv = field.inv(gc).unwrap();
    let a: Terms<F::Elem> = f
        .iter()
        .map(|(m, c)| (m.mul(&uf), field.mul(c, &finv)))
        .collect();
    sub_scaled(field, order, &a, g, &ug, &ginv)
}

fn to_terms<F: Field>(p: &MPoly<F>, order: &MonomialOrder) -> Terms<F::Elem> {
    p.sorted_terms(order)
}

fn from_terms<F: Field>(ring: &PolyRing<F>, t: Terms<F::Elem>) -> MPoly<F> {
    ring.from_terms(t)
}

/// A reduced Gröbner basis: monic generators sorted ascending by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    ring: PolyRing<F>,
    order: MonomialOrder,
    generators: Vec<MPoly<F>>,
    sorted: Vec<Terms<F::Elem>>,
}

fn check_ring<F: Field>(ring: &PolyRing<F>, p: &MPoly<F>) -> Result<()> {
    if p.ring() != ring {
        return Err(AlgebraError::DomainMismatch(format!(
            "{}[{}] vs {}[{}]",
            ring.field().name(),
            ring.var_names().join(","),
            p.field().name(),
            p.ring().var_names().join(",")
        )));
    }
    Ok(())
}

/// Reduced Gröbner basis of the ideal generated by `gens` under a global order.
///
/// Pairs are processed by the normal strategy: smallest total degree of the
/// lcm of leading monomials first, ties broken lexicographically on the pair
/// indices. Pairs with coprime leading monomials are skipped.
pub fn buchberger<F: Field>(gens: &[MPoly<F>], order: &MonomialOrder) -> Result<GroebnerBasis<F>> {
    let first = gens
        .first()
        .ok_or_else(|| AlgebraError::InvalidArgument("empty generator list".into()))?;
    let ring = first.ring().clone();
    for g in gens {
        check_ring(&ring, g)?;
    }
    if !order.is_global() {
        return Err(AlgebraError::InvalidArgument(
            "Buchberger's algorithm needs a global monomial order".into(),
        ));
    }
    if order.priority.len() != ring.nvars() {
        return Err(AlgebraError::InvalidArgument(format!(
            "monomial order on {} variables for a ring with {}",
            order.priority.len(),
            ring.nvars()
        )));
    }
    let field = ring.field().clone();

    let mut basis: Vec<Terms<F::Elem>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let mut t = to_terms(g, order);
        make_monic(&field, &mut t);
        basis.push(t);
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let pair_key = |basis: &[Terms<F::Elem>], &(i, j): &(usize, usize)| {
        (basis[i][0].0.lcm(&basis[j][0].0).degree(), i, j)
    };

    while !pairs.is_empty() {
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, pr)| pair_key(&basis, pr))
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(best);
        if basis[i][0].0.is_coprime(&basis[j][0].0) {
            continue;
        }
        let s = s_poly_terms(&field, order, &basis[i], &basis[j]);
        let mut r = remainder(&field, order, s, &basis);
        if r.is_empty() {
            continue;
        }
        make_monic(&field, &mut r);
        let k = basis.len();
        basis.push(r);
        if basis[k][0].0.is_one() {
            basis = vec![basis[k].clone()];
            pairs.clear();
            break;
        }
        for i in 0..k {
            pairs.push((i, k));
        }
    }

    let reduced = interreduce(&field, order, basis);
    Ok(GroebnerBasis::from_sorted(ring, order.clone(), reduced))
}

fn interreduce<F: Field>(
    field: &F,
    order: &MonomialOrder,
    basis: Vec<Terms<F::Elem>>,
) -> Vec<Terms<F::Elem>> {
    // Minimal basis: drop generators whose leading monomial is divisible by another's.
    let mut minimal: Vec<Terms<F::Elem>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lm = &g[0].0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != idx && h[0].0.divides(lm) && (h[0].0 != *lm || j < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Terms<F::Elem>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let head = minimal[i][0].clone();
        let tail = remainder(field, order, minimal[i][1..].to_vec(), &others);
        let mut g = vec![head];
        g.extend(tail);
        reduced.push(g);
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    reduced
}

impl<F: Field> GroebnerBasis<F> {
    fn from_sorted(ring: PolyRing<F>, order: MonomialOrder, sorted: Vec<Terms<F::Elem>>) -> Self {
        let generators = sorted.iter().map(|t| from_terms(&ring, t.clone())).collect();
        Self {
            ring,
            order,
            generators,
            sorted,
        }
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[MPoly<F>] {
        &self.generators
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.sorted.len() == 1 && self.sorted[0][0].0.is_one()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|g| g[0].0.clone()).collect()
    }

    /// Remainder of `f` on division by the basis; zero iff `f` is in the ideal.
    pub fn normal_form(&self, f: &MPoly<F>) -> Result<MPoly<F>> {
        check_ring(&self.ring, f)?;
        let r = remainder(
            self.ring.field(),
            &self.order,
            to_terms(f, &self.order),
            &self.sorted,
        );
        Ok(from_terms(&self.ring, r))
    }

    pub fn contains(&self, f: &MPoly<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Monomials divisible by no leading monomial, in BFS order from `1`;
    /// `None` when there are infinitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let n = self.ring.nvars();
        if self.is_unit_ideal() {
            return Some(Vec::new());
        }
        let lms = self.leading_monomials();
        let bounded = (0..n).all(|i| lms.iter().any(|m| matches!(m.pure_power(), Some((j, _)) if j == i)));
        if !bounded {
            return None;
        }
        let standard = |m: &Monomial| !lms.iter().any(|l| l.divides(m));
        let mut out = Vec::new();
        let one = Monomial::one(n);
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([one.clone()]);
        seen.insert(one);
        while let Some(m) = queue.pop_front() {
            for i in 0..n {
                let mut next = m.clone();
                next.0[i] += 1;
                if standard(&next) && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            out.push(m);
        }
        Some(out)
    }

    pub fn quotient_dimension(&self) -> Dimension {
        match self.standard_monomials() {
            Some(v) => Dimension::Finite(v.len() as u64),
            None => Dimension::Infinite,
        }
    }

    /// Whether every S-polynomial of the basis reduces to zero (checked on all pairs).
    pub fn is_groebner(&self) -> bool {
        let f = self.ring.field();
        (0..self.sorted.len()).all(|j| {
            (0..j).all(|i| {
                let s = s_poly_terms(f, &self.order, &self.sorted[i], &self.sorted[j]);
                remainder(f, &self.order, s, &self.sorted).is_empty()
            })
        })
    }

    /// Whether no term of any generator is divisible by another generator's
    /// leading monomial, and every generator is monic.
    pub fn is_reduced(&self) -> bool {
        let f = self.ring.field();
        self.sorted.iter().enumerate().all(|(i, g)| {
            f.is_one(&g[0].1)
                && self.sorted.iter().enumerate().all(|(j, h)| {
                    i == j || g.iter().all(|(m, _)| !h[0].0.divides(m))
                })
        })
    }
}

/// S-polynomial of two nonzero polynomials under `order`.
pub fn s_polynomial<F: Field>(f: &MPoly<F>, g: &MPoly<F>, order: &MonomialOrder) -> Result<MPoly<F>> {
    check_ring(f.ring(), g)?;
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::InvalidArgument("S-polynomial of zero".into()));
    }
    let t = s_poly_terms(f.field(), order, &to_terms(f, order), &to_terms(g, order));
    Ok(from_terms(f.ring(), t))
}

/// All monomials of total degree `n` as polynomials.
pub fn maximal_ideal_power<F: Field>(ring: &PolyRing<F>, n: u32) -> Vec<MPoly<F>> {
    monomials_of_degree(ring.nvars(), n)
        .into_iter()
        .map(|m| ring.monomial(m, ring.field().one()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDimension {
    pub dimension: u64,
    pub stabilized_at: u32,
}

/// Dimension of the local algebra at the origin of `K[x]/(gens)`.
///
/// Computes `d_N = dim K[x]/(gens + m^N)` for `N = 2, 3, ...` and returns the
/// first `d_N` with `d_N = d_{N+1}`.
pub fn local_dimension<F: Field>(
    ring: &PolyRing<F>,
    gens: &[MPoly<F>],
    n_max: u32,
) -> Result<LocalDimension> {
    if n_max < 2 {
        return Err(AlgebraError::InvalidArgument(format!(
            "truncation bound {n_max} is below 2"
        )));
    }
    for g in gens {
        check_ring(ring, g)?;
    }
    let order = MonomialOrder::grevlex(ring.nvars());
    let mut prev: Option<u64> = None;
    for n in 2..=n_max {
        let mut all: Vec<MPoly<F>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        all.extend(maximal_ideal_power(ring, n));
        let gb = buchberger(&all, &order)?;
        let d = gb
            .quotient_dimension()
            .finite()
            .expect("m^N makes the quotient finite");
        if prev == Some(d) {
            return Ok(LocalDimension {
                dimension: d,
                stabilized_at: n - 1,
            });
        }
        prev = Some(d);
    }
    Err(AlgebraError::NoStabilization { n_max })
}

/// Generators of the Jacobian ideal (all first partials, zeros dropped).
pub fn jacobian_ideal<F: Field>(f: &MPoly<F>) -> Vec<MPoly<F>> {
    f.gradient().into_iter().filter(|g| !g.is_zero()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorNumber {
    pub dimension: Dimension,
    /// Truncation order at which the local dimension stabilized.
    pub stabilized_at: Option<u32>,
}

/// Milnor number at the origin: local dimension of the Jacobian quotient.
/// Non-isolated critical points (no stabilization up to `n_max`) are reported
/// as infinite.
pub fn milnor_number<F: Field>(f: &MPoly<F>, n_max: u32) -> Result<MilnorNumber> {
    let jac = jacobian_ideal(f);
    match local_dimension(f.ring(), &jac, n_max) {
        Ok(ld) => Ok(MilnorNumber {
            dimension: Dimension::Finite(ld.dimension),
            stabilized_at: Some(ld.stabilized_at),
        }),
        Err(AlgebraError::NoStabilization { .. }) => Ok(MilnorNumber {
            dimension: Dimension::Infinite,
            stabilized_at: None,
        }),
        Err(e) => Err(e),
    }
}

/// Global dimension of `K[x]/J` for the Jacobian ideal `J` of `f`.
pub fn global_jacobian_dimension<F: Field>(f: &MPoly<F>) -> Result<Dimension> {
    let jac = jacobian_ideal(f);
    if jac.is_empty() {
        return Ok(if f.nvars() == 0 {
            Dimension::Finite(1)
        } else {
            Dimension::Infinite
        });
    }
    Ok(buchberger(&jac, &MonomialOrder::grevlex(f.nvars()))?.quotient_dimension())
}

/// Characteristic-`p` versus characteristic-0 Milnor numbers of an integral polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    pub f: String,
    pub p: u64,
    pub char_p_dimension: Dimension,
    pub char_0_dimension: Dimension,
    /// Vanishing cycles present in characteristic 0.
    pub tame: Option<u64>,
    /// Excess `char_p - char_0`; `None` when the characteristic-p side is infinite.
    pub wild: Option<i64>,
    pub total: Option<u64>,
    /// Largest truncation order at which either computation stabilized.
    pub truncation_order: Option<u32>,
    pub char_p_global_dimension: Dimension,
    pub char_0_global_dimension: Dimension,
    pub anomaly: Option<String>,
}

/// Reduces a polynomial with rational coefficients into `F_p[x]`.
pub fn reduce_mod_p(f: &MPoly<Rationals>, fp: PrimeField) -> Result<MPoly<PrimeField>> {
    let ring = PolyRing::new(fp, f.ring().var_names().to_vec());
    f.map_coeffs(&ring, |c| reduce_rational(&fp, c))
}

/// Splits the characteristic-`p` Milnor number of `f` into a tame part (the
/// characteristic-0 value) and a wild excess.
pub fn tame_wild_split(f: &MPoly<Rationals>, p: u64, n_max: u32) -> Result<MilnorReport> {
    let fp = PrimeField::new(p)?;
    let f_p = reduce_mod_p(f, fp)?;
    let mu_p = milnor_number(&f_p, n_max)?;
    let mu_0 = milnor_number(f, n_max)?;

    let (tame, wild, total, anomaly) = match (mu_p.dimension, mu_0.dimension) {
        (Dimension::Finite(dp), Dimension::Finite(d0)) => {
            let wild = dp as i64 - d0 as i64;
            let anomaly = (wild < 0).then(|| {
                format!("characteristic-{p} Milnor number {dp} is below the characteristic-0 value {d0}")
            });
            (Some(d0), Some(wild), Some(dp), anomaly)
        }
        (Dimension::Infinite, Dimension::Finite(d0)) => (
            Some(d0),
            None,
            None,
            Some(format!(
                "critical point is not isolated in characteristic {p}; Milnor number is infinite"
            )),
        ),
        (Dimension::Finite(dp), Dimension::Infinite) => (
            None,
            None,
            Some(dp),
            Some("critical point is not isolated in characteristic 0".to_string()),
        ),
        (Dimension::Infinite, Dimension::Infinite) => (
            None,
            None,
            None,
            Some("critical point is not isolated in either characteristic".to_string()),
        ),
    };
    Ok(MilnorReport {
        f: f.to_string(),
        p,
        char_p_dimension: mu_p.dimension,
        char_0_dimension: mu_0.dimension,
        tame,
        wild,
        total,
        truncation_order: mu_p.stabilized_at.max(mu_0.stabilized_at),
        char_p_global_dimension: global_jacobian_dimension(&f_p)?,
        char_0_global_dimension: global_jacobian_dimension(f)?,
        anomaly,
    })
}
