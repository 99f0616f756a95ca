//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::parse::parse_terms;

#[derive(Debug, PartialEq, Eq)]
struct RingData<F> {
    field: F,
    vars: Vec<String>,
}

/// `K[x_1, ..., x_n]` with named variables. Cheap to clone.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    inner: Arc<RingData<F>>,
}

impl<F: Field> PartialEq for PolyRing<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl<F: Field> Eq for PolyRing<F> {}

/// Default names: `x`, `x,y`, `x,y,z` for up to three variables, `x1..xn` otherwise.
pub fn default_var_names(n: usize) -> Vec<String> {
    match n {
        0..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

impl<F: Field> PolyRing<F> {
    pub fn new<S: Into<String>>(field: F, vars: impl IntoIterator<Item = S>) -> Self {
        Self {
            inner: Arc::new(RingData {
                field,
                vars: vars.into_iter().map(Into::into).collect(),
            }),
        }
    }

    pub fn with_nvars(field: F, n: usize) -> Self {
        Self::new(field, default_var_names(n))
    }

    pub fn field(&self) -> &F {
        &self.inner.field
    }

    pub fn nvars(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> MPoly<F> {
        MPoly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: F::Elem) -> MPoly<F> {
        self.monomial(Monomial::one(self.nvars()), c)
    }

    pub fn one(&self) -> MPoly<F> {
        self.constant(self.field().one())
    }

    pub fn var(&self, i: usize) -> Result<MPoly<F>> {
        if i >= self.nvars() {
            return Err(AlgebraError::IndexOutOfRange {
                index: i,
                len: self.nvars(),
            });
        }
        Ok(self.monomial(Monomial::var(self.nvars(), i, 1), self.field().one()))
    }

    pub fn monomial(&self, m: Monomial, c: F::Elem) -> MPoly<F> {
        assert_eq!(m.nvars(), self.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !self.field().is_zero(&c) {
            terms.insert(m, c);
        }
        MPoly {
            ring: self.clone(),
            terms,
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> MPoly<F> {
        let mut p = self.zero();
        for (m, c) in terms {
            assert_eq!(m.nvars(), self.nvars(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(&self, text: &str) -> Result<MPoly<F>> {
        let f = self.field();
        let mut out = self.zero();
        for t in parse_terms(text)? {
            let mut c = match &t.coeff {
                Some((n, d)) => f.from_ratio(n, d)?,
                None => f.one(),
            };
            if t.negative {
                c = f.neg(&c);
            }
            let mut m = Monomial::one(self.nvars());
            for fac in &t.factors {
                let i = self
                    .var_index(&fac.name)
                    .ok_or_else(|| AlgebraError::UnknownVariable(fac.name.clone()))?;
                m.0[i] += fac.exp;
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn from_json(&self, json: &PolyJson) -> Result<MPoly<F>> {
        if json.vars != self.inner.vars {
            return Err(AlgebraError::DomainMismatch(format!(
                "variables {:?} vs {:?}",
                json.vars, self.inner.vars
            )));
        }
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            if t.e.len() != self.nvars() {
                return Err(AlgebraError::InvalidArgument(format!(
                    "exponent vector {:?} for {} variables",
                    t.e,
                    self.nvars()
                )));
            }
            terms.push((Monomial(t.e.clone()), self.field().parse_elem(&t.c)?));
        }
        Ok(self.from_terms(terms))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(AlgebraError::DomainMismatch(format!(
                "{}[{}] vs {}[{}]",
                self.field().name(),
                self.var_names().join(","),
                other.field().name(),
                other.var_names().join(",")
            )));
        }
        Ok(())
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<F: Field> {
    ring: PolyRing<F>,
    terms: BTreeMap<Monomial, F::Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

/// `{"vars": [...], "terms": [{"c": "coeff", "e": [e1, ..., en]}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl<F: Field> MPoly<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: F::Elem) {
        let f = self.ring.field().clone();
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    /// Lowest total degree among the terms; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ring.check(&other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.ring.check(&other.ring)?;
        let f = self.field();
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), f.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ring.check(&other.ring)?;
        let f = self.field();
        let mut out = self.ring.zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let f = self.field();
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field();
        if f.is_zero(c) {
            return self.ring.zero();
        }
        Self {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), f.mul(a, c)))
                .collect(),
        }
    }

    /// Multiplies by the monomial `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let f = self.field();
        if f.is_zero(c) {
            return self.ring.zero();
        }
        Self {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), f.mul(a, c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `i`; coefficients are computed in the
    /// field, so `d/dx x^p = 0` over `F_p`.
    pub fn derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars() {
            return Err(AlgebraError::IndexOutOfRange {
                index: i,
                len: self.nvars(),
            });
        }
        let f = self.field();
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, f.mul(c, &f.from_i64(e as i64)));
        }
        Ok(out)
    }

    /// Iterated derivative `d^k/dx_i^k`.
    pub fn derivative_n(&self, i: usize, k: u32) -> Result<Self> {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative(i)?;
            if p.is_zero() {
                break;
            }
        }
        Ok(p)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars())
            .map(|i| self.derivative(i).expect("index in range"))
            .collect()
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars() {
            return Err(AlgebraError::DomainMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let f = self.field();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Drops every term of total degree `>= m`.
    pub fn truncate(&self, m: u32) -> Self {
        Self {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() < m)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, F::Elem)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(Monomial, F::Elem)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Moves the polynomial into another ring with the same variables by mapping
    /// each coefficient.
    pub fn map_coeffs<G: Field>(
        &self,
        target: &PolyRing<G>,
        mut map: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<MPoly<G>> {
        if target.nvars() != self.nvars() {
            return Err(AlgebraError::DomainMismatch(format!(
                "{} vs {} variables",
                self.nvars(),
                target.nvars()
            )));
        }
        let mut out = target.zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), map(c)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> PolyJson {
        let order = MonomialOrder::grevlex(self.nvars());
        PolyJson {
            vars: self.ring.var_names().to_vec(),
            terms: self
                .sorted_terms(&order)
                .into_iter()
                .map(|(m, c)| TermJson {
                    c: self.field().format(&c),
                    e: m.0,
                })
                .collect(),
        }
    }
}

/// Writes `x^2*y` style monomials; the empty string for `1`.
pub(crate) fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (name, &e) in vars.iter().zip(&m.0) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Appends `c*m` to a sum under construction with canonical sign handling.
pub(crate) fn push_signed_term(out: &mut String, coeff: &str, body: &str) {
    let (neg, mag) = match coeff.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, coeff),
    };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    match (mag, body.is_empty()) {
        (_, true) => out.push_str(mag),
        ("1", false) => out.push_str(body),
        (_, false) => {
            out.push_str(mag);
            out.push('*');
            out.push_str(body);
        }
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    /// Canonical form: terms in grevlex-descending order.
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return fm.write_str("0");
        }
        let order = MonomialOrder::grevlex(self.nvars());
        let mut out = String::new();
        for (m, c) in self.sorted_terms(&order) {
            let body = format_monomial(&m, self.ring.var_names());
            push_signed_term(&mut out, &self.field().format(&c), &body);
        }
        fm.write_str(&out)
    }
}

/// Serializes as the canonical text form.
impl<F: Field> Serialize for MPoly<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! impl_op {
    ($tr:ident, $method:ident, $call:ident) => {
        impl<F: Field> std::ops::$tr<&MPoly<F>> for &MPoly<F> {
            type Output = MPoly<F>;

            /// Panics when the operands live in different rings; use the
            /// `try_` method to get a [`AlgebraError::DomainMismatch`] instead.
            fn $method(self, rhs: &MPoly<F>) -> MPoly<F> {
                self.$call(rhs).expect("polynomials from the same ring")
            }
        }
    };
}

impl_op!(Add, add, try_add);
impl_op!(Sub, sub, try_sub);
impl_op!(Mul, mul, try_mul);

impl<F: Field> std::ops::Neg for &MPoly<F> {
    type Output = MPoly<F>;

    fn neg(self) -> MPoly<F> {
        MPoly::neg(self)
    }
}

/// Compares two polynomials by their grevlex-descending term lists; used only
/// for deterministic sorting.
pub fn canonical_cmp<F: Field>(a: &MPoly<F>, b: &MPoly<F>) -> Ordering {
    let o = MonomialOrder::grevlex(a.nvars());
    let ta = a.sorted_terms(&o);
    let tb = b.sorted_terms(&o);
    for (x, y) in ta.iter().zip(&tb) {
        match o.cmp(&x.0, &y.0) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    ta.len().cmp(&tb.len())
}

/// Integer coefficient helper for building test and example inputs.
pub fn int<F: Field>(f: &F, n: i64) -> F::Elem {
    f.from_bigint(&BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mono(v: &[u32]) -> Monomial {
        Monomial(v.to_vec())
    }

    #[test]
    fn parse_paper_polynomial() {
        let r = PolyRing::new(fp(2), ["x", "y"]);
        let f = r.parse("y^3 + x^2 + x^3").unwrap();
        let expected = r.from_terms([
            (mono(&[0, 3]), 1),
            (mono(&[2, 0]), 1),
            (mono(&[3, 0]), 1),
        ]);
        assert_eq!(f, expected);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn parse_zero_and_reduction() {
        let r = PolyRing::new(fp(3), ["x"]);
        assert!(r.parse("0").unwrap().is_zero());
        let f = r.parse("3*x^2 - 2*x").unwrap();
        assert_eq!(f, r.monomial(mono(&[1]), 1));
    }

    #[test]
    fn parse_errors() {
        let r = PolyRing::new(Rationals, ["x", "y"]);
        assert_eq!(
            r.parse("x + z").unwrap_err(),
            AlgebraError::UnknownVariable("z".into())
        );
        assert!(matches!(r.parse("y^3+"), Err(AlgebraError::Parse { pos: 4, .. })));
        let r5 = PolyRing::new(fp(5), ["x"]);
        assert!(r5.parse("x/5").is_err());
        assert!(r5.parse("1/5*x").is_err());
    }

    #[test]
    fn derivative_examples() {
        let rq = PolyRing::new(Rationals, ["x"]);
        let d = rq.parse("x^3").unwrap().derivative(0).unwrap();
        assert_eq!(d, rq.parse("3*x^2").unwrap());

        let r3 = PolyRing::new(fp(3), ["x"]);
        assert!(r3.parse("x^3").unwrap().derivative(0).unwrap().is_zero());

        let r2 = PolyRing::new(fp(2), ["x", "y"]);
        let f = r2.parse("y^3+x^2+x^3").unwrap();
        assert_eq!(f.derivative(0).unwrap(), r2.parse("x^2").unwrap());
        assert_eq!(f.derivative(1).unwrap(), r2.parse("y^2").unwrap());
        assert!(matches!(
            f.derivative(2),
            Err(AlgebraError::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn eval_examples() {
        let r2 = PolyRing::new(fp(2), ["x", "y"]);
        assert_eq!(r2.parse("y^3+x^2+x^3").unwrap().eval(&[0, 0]).unwrap(), 0);
        let r5 = PolyRing::new(fp(5), ["x"]);
        assert_eq!(r5.parse("x^3+x").unwrap().eval(&[2]).unwrap(), 0);
        assert_eq!(r5.one().eval(&[4]).unwrap(), 1);
        assert!(matches!(
            r5.one().eval(&[1, 2]),
            Err(AlgebraError::DomainMismatch(_))
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let r2 = PolyRing::new(fp(2), ["x", "y"]);
        let s = r2.parse("x+y").unwrap();
        assert_eq!(&s + &r2.zero(), s);
        assert_eq!(s.pow(2), r2.parse("x^2+y^2").unwrap());
        let rq = PolyRing::new(Rationals, ["x"]);
        let prod = &rq.parse("x-1").unwrap() * &rq.parse("x+1").unwrap();
        assert_eq!(prod, rq.parse("x^2-1").unwrap());
    }

    #[test]
    fn mismatched_rings() {
        let a = PolyRing::new(fp(3), ["x"]).parse("x").unwrap();
        let b = PolyRing::new(fp(5), ["x"]).parse("x").unwrap();
        assert!(matches!(a.try_add(&b), Err(AlgebraError::DomainMismatch(_))));
        let c = PolyRing::new(fp(3), ["y"]).parse("y").unwrap();
        assert!(matches!(a.try_mul(&c), Err(AlgebraError::DomainMismatch(_))));
    }

    #[test]
    fn canonical_display() {
        let rq = PolyRing::new(Rationals, ["x", "y"]);
        let f = rq.parse("1 - 1/2*x + y^3 + x^2*y - 3*x*y").unwrap();
        assert_eq!(f.to_string(), "x^2*y + y^3 - 3*x*y - 1/2*x + 1");
        assert_eq!(rq.zero().to_string(), "0");
        assert_eq!(rq.parse("-x").unwrap().to_string(), "-x");
        let r7 = PolyRing::new(fp(7), ["x"]);
        assert_eq!(r7.parse("-x - 1").unwrap().to_string(), "6*x + 6");
    }

    #[test]
    fn json_form() {
        let r = PolyRing::new(fp(2), ["x", "y"]);
        let f = r.parse("y^3+x^2+x^3").unwrap();
        let j = f.to_json();
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"vars":["x","y"],"terms":[{"c":"1","e":[3,0]},{"c":"1","e":[0,3]},{"c":"1","e":[2,0]}]}"#
        );
        assert_eq!(r.from_json(&j).unwrap(), f);
    }

    fn arb_poly_q(nvars: usize) -> impl Strategy<Value = MPoly<Rationals>> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), -5i64..6), 0..6).prop_map(
            move |terms| {
                let r = PolyRing::with_nvars(Rationals, nvars);
                r.from_terms(terms.into_iter().map(|(e, c)| (Monomial(e), int(&Rationals, c))))
            },
        )
    }

    fn arb_poly_p(p: u64, nvars: usize) -> impl Strategy<Value = MPoly<PrimeField>> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), 0u64..p), 0..6).prop_map(
            move |terms| {
                let r = PolyRing::with_nvars(fp(p), nvars);
                r.from_terms(terms.into_iter().map(|(e, c)| (Monomial(e), c)))
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms_q(a in arb_poly_q(2), b in arb_poly_q(2), c in arb_poly_q(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn leibniz_over_f5(a in arb_poly_p(5, 2), b in arb_poly_p(5, 2)) {
            for i in 0..2 {
                let lhs = (&a * &b).derivative(i).unwrap();
                let rhs = &(&a.derivative(i).unwrap() * &b) + &(&a * &b.derivative(i).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn leibniz_over_q(a in arb_poly_q(3), b in arb_poly_q(3)) {
            for i in 0..3 {
                let lhs = (&a * &b).derivative(i).unwrap();
                let rhs = &(&a.derivative(i).unwrap() * &b) + &(&a * &b.derivative(i).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn mixed_partials_commute(a in arb_poly_q(3), i in 0usize..3, j in 0usize..3) {
            let ij = a.derivative(i).unwrap().derivative(j).unwrap();
            let ji = a.derivative(j).unwrap().derivative(i).unwrap();
            prop_assert_eq!(ij, ji);
        }

        #[test]
        fn parse_serialize_roundtrip_q(a in arb_poly_q(3)) {
            prop_assert_eq!(a.ring().parse(&a.to_string()).unwrap(), a.clone());
            prop_assert_eq!(a.ring().from_json(&a.to_json()).unwrap(), a);
        }

        #[test]
        fn parse_serialize_roundtrip_p(a in arb_poly_p(7, 2)) {
            prop_assert_eq!(a.ring().parse(&a.to_string()).unwrap(), a);
        }
    }

    #[test]
    fn p_fold_derivative_kills_low_degree() {
        for p in [2u64, 3, 5, 7] {
            let r = PolyRing::new(fp(p), ["x"]);
            for d in 0..=50u32 {
                let f = r.monomial(mono(&[d]), 1);
                assert!(f.derivative_n(0, p as u32).unwrap().is_zero(), "p={p} d={d}");
            }
        }
    }
}
