//! The Weyl algebra `A_n(K)` of differential operators with polynomial coefficients.
//!
//! Operators are kept in normal form `Σ f_α ∂^α`: coefficients on the left,
//! derivatives on the right, one term per multi-index `α`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::groebner::buchberger;
use crate::monomial::{Monomial, MonomialOrder};
use crate::parse::parse_terms;
use crate::poly::{format_monomial, push_signed_term, MPoly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylOperator<F: Field> {
    ring: PolyRing<F>,
    terms: BTreeMap<Monomial, MPoly<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTermJson {
    pub c: String,
    pub e: Vec<u32>,
    pub alpha: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub vars: Vec<String>,
    pub terms: Vec<OpTermJson>,
}

impl<F: Field> WeylOperator<F> {
    pub fn zero(ring: &PolyRing<F>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(ring: &PolyRing<F>) -> Self {
        Self::multiplication(&ring.one())
    }

    /// Multiplication by a polynomial (an order-zero operator).
    pub fn multiplication(f: &MPoly<F>) -> Self {
        let mut op = Self::zero(f.ring());
        op.add_term(Monomial::one(f.nvars()), f.clone());
        op
    }

    /// `∂_i^k`.
    pub fn partial(ring: &PolyRing<F>, i: usize, k: u32) -> Result<Self> {
        if i >= ring.nvars() {
            return Err(AlgebraError::IndexOutOfRange {
                index: i,
                len: ring.nvars(),
            });
        }
        let mut op = Self::zero(ring);
        op.add_term(Monomial::var(ring.nvars(), i, k), ring.one());
        Ok(op)
    }

    /// `Σ f_α ∂^α` from `(f_α, α)` pairs; repeated multi-indices are summed.
    pub fn from_terms(ring: &PolyRing<F>, terms: impl IntoIterator<Item = (MPoly<F>, Monomial)>) -> Result<Self> {
        let mut op = Self::zero(ring);
        for (c, alpha) in terms {
            if c.ring() != ring || alpha.nvars() != ring.nvars() {
                return Err(AlgebraError::DomainMismatch(
                    "operator term from a different ring".into(),
                ));
            }
            op.add_term(alpha, c);
        }
        Ok(op)
    }

    /// Parses operator text. Besides variables, factors may be derivative
    /// tokens `d1 .. dn` (1-based) or `d<var>` such as `dx`. Each term is the
    /// composition of its factors in the order written, so `d1*x` means
    /// `∂ ∘ x = x∂ + 1`.
    pub fn parse(ring: &PolyRing<F>, text: &str) -> Result<Self> {
        let f = ring.field();
        let mut out = Self::zero(ring);
        for t in parse_terms(text)? {
            let mut c = match &t.coeff {
                Some((n, d)) => f.from_ratio(n, d)?,
                None => f.one(),
            };
            if t.negative {
                c = f.neg(&c);
            }
            let mut term = Self::multiplication(&ring.constant(c));
            for fac in &t.factors {
                let factor = if let Some(i) = ring.var_index(&fac.name) {
                    Self::multiplication(&ring.monomial(Monomial::var(ring.nvars(), i, fac.exp), f.one()))
                } else {
                    let i = derivative_index(ring, &fac.name)
                        .ok_or_else(|| AlgebraError::UnknownVariable(fac.name.clone()))?;
                    Self::partial(ring, i, fac.exp)?
                };
                term = term.compose(&factor)?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(α, f_α)` pairs in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &MPoly<F>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &Monomial) -> MPoly<F> {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Largest `|α|`; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn has_zero_order_term(&self) -> bool {
        self.terms.contains_key(&Monomial::one(self.nvars()))
    }

    /// The operator with its `α = 0` term removed, a representative of `D/O`.
    pub fn without_zero_order(&self) -> Self {
        let mut op = self.clone();
        op.terms.remove(&Monomial::one(self.nvars()));
        op
    }

    fn add_term(&mut self, alpha: Monomial, c: MPoly<F>) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&alpha) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(alpha, sum);
        }
    }

    fn check(&self, other_ring: &PolyRing<F>) -> Result<()> {
        if &self.ring != other_ring {
            return Err(AlgebraError::DomainMismatch(format!(
                "{}[{}] vs {}[{}]",
                self.ring.field().name(),
                self.ring.var_names().join(","),
                other_ring.field().name(),
                other_ring.var_names().join(",")
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(&other.ring)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    /// `f · P`: multiplies every coefficient on the left.
    pub fn left_mul_poly(&self, f: &MPoly<F>) -> Result<Self> {
        self.check(f.ring())?;
        let mut out = Self::zero(&self.ring);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c.try_mul(f)?);
        }
        Ok(out)
    }

    /// `∂_i ∘ P`, rewriting `∂_i g = g ∂_i + ∂_i(g)` term by term.
    pub fn left_mul_partial(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero(&self.ring);
        for (alpha, g) in &self.terms {
            let mut shifted = alpha.clone();
            shifted.0[i] += 1;
            out.add_term(shifted, g.clone());
            out.add_term(alpha.clone(), g.derivative(i)?);
        }
        Ok(out)
    }

    /// Normal form of `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(&other.ring)?;
        let mut out = Self::zero(&self.ring);
        for (alpha, f_alpha) in &self.terms {
            let mut q = other.clone();
            for (i, &k) in alpha.0.iter().enumerate() {
                for _ in 0..k {
                    q = q.left_mul_partial(i)?;
                }
            }
            for (beta, g) in q.left_mul_poly(f_alpha)?.terms {
                out.add_term(beta, g);
            }
        }
        Ok(out)
    }

    /// `Σ f_α · ∂^α(u)`.
    pub fn apply(&self, u: &MPoly<F>) -> Result<MPoly<F>> {
        self.check(u.ring())?;
        let mut acc = self.ring.zero();
        for (alpha, f_alpha) in &self.terms {
            let mut d = u.clone();
            for (i, &k) in alpha.0.iter().enumerate() {
                d = d.derivative_n(i, k)?;
            }
            if !d.is_zero() {
                acc = &acc + &(f_alpha * &d);
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> OperatorJson {
        let order = MonomialOrder::grevlex(self.nvars());
        let mut terms = Vec::new();
        for (alpha, c) in self.sorted_terms() {
            for (m, k) in c.sorted_terms(&order) {
                terms.push(OpTermJson {
                    c: self.ring.field().format(&k),
                    e: m.0,
                    alpha: alpha.0.clone(),
                });
            }
        }
        OperatorJson {
            vars: self.ring.var_names().to_vec(),
            terms,
        }
    }

    pub fn from_json(ring: &PolyRing<F>, json: &OperatorJson) -> Result<Self> {
        if json.vars != ring.var_names() {
            return Err(AlgebraError::DomainMismatch(format!(
                "variables {:?} vs {:?}",
                json.vars,
                ring.var_names()
            )));
        }
        let mut op = Self::zero(ring);
        for t in &json.terms {
            if t.e.len() != ring.nvars() || t.alpha.len() != ring.nvars() {
                return Err(AlgebraError::InvalidArgument(
                    "exponent vector length does not match the variables".into(),
                ));
            }
            let c = ring.field().parse_elem(&t.c)?;
            op.add_term(Monomial(t.alpha.clone()), ring.monomial(Monomial(t.e.clone()), c));
        }
        Ok(op)
    }

    /// Terms with `α` in grevlex-descending order.
    fn sorted_terms(&self) -> Vec<(&Monomial, &MPoly<F>)> {
        let order = MonomialOrder::grevlex(self.nvars());
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }
}

fn derivative_index<F: Field>(ring: &PolyRing<F>, name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if let Ok(k) = rest.parse::<usize>() {
        return (1..=ring.nvars()).contains(&k).then(|| k - 1);
    }
    ring.var_index(rest)
}

impl<F: Field> fmt::Display for WeylOperator<F> {
    /// Expanded form such as `x^2*d1^2 + 4*x*d1 + 2`, parseable by [`WeylOperator::parse`].
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return fm.write_str("0");
        }
        let order = MonomialOrder::grevlex(self.nvars());
        let vars = self.ring.var_names();
        let mut out = String::new();
        for (alpha, c) in self.sorted_terms() {
            let mut d_part = Vec::new();
            for (i, &k) in alpha.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => d_part.push(format!("d{}", i + 1)),
                    _ => d_part.push(format!("d{}^{k}", i + 1)),
                }
            }
            for (m, k) in c.sorted_terms(&order) {
                let x_part = format_monomial(&m, vars);
                let body = [x_part, d_part.join("*")]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join("*");
                push_signed_term(&mut out, &self.ring.field().format(&k), &body);
            }
        }
        fm.write_str(&out)
    }
}

impl<F: Field> Serialize for WeylOperator<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A generator whose derivative leaves the ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct StabilityWitness<F: Field> {
    pub generator: usize,
    pub variable: usize,
    /// Normal form of `∂_variable(generator)` modulo the ideal; nonzero.
    pub residue: MPoly<F>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct StabilityReport<F: Field> {
    pub stable: bool,
    pub witness: Option<StabilityWitness<F>>,
}

/// Whether the ideal generated by `gens` is closed under every `∂_i`.
/// Over a field of characteristic 0 the only such ideals of `K[x]` are `0` and
/// `(1)`; in characteristic `p` ideals like `(x^p)` are stable.
pub fn is_d_stable<F: Field>(gens: &[MPoly<F>]) -> Result<StabilityReport<F>> {
    let first = gens
        .first()
        .ok_or_else(|| AlgebraError::InvalidArgument("empty generator list".into()))?;
    let gb = buchberger(gens, &MonomialOrder::grevlex(first.nvars()))?;
    for (gi, g) in gens.iter().enumerate() {
        for i in 0..g.nvars() {
            let r = gb.normal_form(&g.derivative(i)?)?;
            if !r.is_zero() {
                return Ok(StabilityReport {
                    stable: false,
                    witness: Some(StabilityWitness {
                        generator: gi,
                        variable: i,
                        residue: r,
                    }),
                });
            }
        }
    }
    Ok(StabilityReport {
        stable: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poly::int;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn third_derivative_of_cubic_sum() {
        let r = PolyRing::new(Rationals, ["x"]);
        let d3 = WeylOperator::partial(&r, 0, 3).unwrap();
        let u = r.parse("1+x+x^2+x^3").unwrap();
        assert_eq!(d3.apply(&u).unwrap(), r.constant(int(&Rationals, 6)));
    }

    #[test]
    fn stepwise_char_two() {
        let r = PolyRing::new(fp(2), ["x"]);
        let d = WeylOperator::partial(&r, 0, 1).unwrap();
        let u = r.parse("1+x+x^2+x^3").unwrap();
        let once = d.apply(&u).unwrap();
        assert_eq!(once, r.parse("1+x^2").unwrap());
        assert!(d.apply(&once).unwrap().is_zero());
    }

    #[test]
    fn identity_operator() {
        let r = PolyRing::new(Rationals, ["x", "y"]);
        let u = r.parse("x^2*y - 3").unwrap();
        assert_eq!(WeylOperator::identity(&r).apply(&u).unwrap(), u);
    }

    #[test]
    fn defining_relation() {
        let r = PolyRing::new(Rationals, ["x"]);
        let op = WeylOperator::parse(&r, "d1*x").unwrap();
        assert_eq!(op, WeylOperator::parse(&r, "x*d1 + 1").unwrap());
        assert_eq!(op.to_string(), "x*d1 + 1");
    }

    #[test]
    fn second_order_composition() {
        let rq = PolyRing::new(Rationals, ["x"]);
        let p = WeylOperator::partial(&rq, 0, 2).unwrap();
        let q = WeylOperator::multiplication(&rq.parse("x^2").unwrap());
        let pq = p.compose(&q).unwrap();
        assert_eq!(pq, WeylOperator::parse(&rq, "x^2*d1^2 + 4*x*d1 + 2").unwrap());
        assert_eq!(pq.to_string(), "x^2*d1^2 + 4*x*d1 + 2");

        let r2 = PolyRing::new(fp(2), ["x"]);
        let p = WeylOperator::partial(&r2, 0, 2).unwrap();
        let q = WeylOperator::multiplication(&r2.parse("x^2").unwrap());
        assert_eq!(p.compose(&q).unwrap().to_string(), "x^2*d1^2");
    }

    #[test]
    fn composition_matches_application_on_low_powers() {
        // Oracle for the ∂² ∘ x² example: apply both sides to x^m, m = 0..3.
        let rq = PolyRing::new(Rationals, ["x"]);
        let lhs = WeylOperator::parse(&rq, "d1^2*x^2").unwrap();
        for m in 0..4u32 {
            let u = rq.monomial(Monomial(vec![m]), int(&Rationals, 1));
            let direct = u.try_mul(&rq.parse("x^2").unwrap()).unwrap().derivative_n(0, 2).unwrap();
            assert_eq!(lhs.apply(&u).unwrap(), direct);
        }
    }

    #[test]
    fn operator_parsing_variants() {
        let r = PolyRing::new(Rationals, ["x", "y"]);
        let a = WeylOperator::parse(&r, "x^2*d1^2 + d2").unwrap();
        let b = WeylOperator::parse(&r, "x^2*dx^2 + dy").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.order(), Some(2));
        assert_eq!(
            WeylOperator::parse(&r, "d3").unwrap_err(),
            AlgebraError::UnknownVariable("d3".into())
        );
        assert_eq!(
            WeylOperator::parse(&r, "q*d1").unwrap_err(),
            AlgebraError::UnknownVariable("q".into())
        );
    }

    #[test]
    fn json_roundtrip() {
        let r = PolyRing::new(fp(5), ["x", "y"]);
        let op = WeylOperator::parse(&r, "3*x*y*d1*d2 + x^2*d2 + 4").unwrap();
        let j = op.to_json();
        assert_eq!(j.terms[0].alpha, vec![1, 1]);
        assert_eq!(WeylOperator::from_json(&r, &j).unwrap(), op);
        assert_eq!(WeylOperator::parse(&r, &op.to_string()).unwrap(), op);
    }

    #[test]
    fn zero_order_handling() {
        let r = PolyRing::new(Rationals, ["x"]);
        let op = WeylOperator::parse(&r, "d1 + x").unwrap();
        assert!(op.has_zero_order_term());
        let rep = op.without_zero_order();
        assert!(!rep.has_zero_order_term());
        assert_eq!(rep, WeylOperator::partial(&r, 0, 1).unwrap());
    }

    #[test]
    fn mismatched_operands() {
        let a = WeylOperator::partial(&PolyRing::new(fp(3), ["x"]), 0, 1).unwrap();
        let b = WeylOperator::partial(&PolyRing::new(fp(5), ["x"]), 0, 1).unwrap();
        assert!(matches!(a.compose(&b), Err(AlgebraError::DomainMismatch(_))));
        let u = PolyRing::new(fp(5), ["x"]).parse("x").unwrap();
        assert!(matches!(a.apply(&u), Err(AlgebraError::DomainMismatch(_))));
    }

    #[test]
    fn stability_examples() {
        let r2 = PolyRing::new(fp(2), ["x"]);
        assert!(is_d_stable(&[r2.parse("x^2").unwrap()]).unwrap().stable);

        let rq = PolyRing::new(Rationals, ["x"]);
        let rep = is_d_stable(&[rq.parse("x^2").unwrap()]).unwrap();
        assert!(!rep.stable);
        let w = rep.witness.unwrap();
        assert_eq!((w.generator, w.variable), (0, 0));
        assert_eq!(w.residue, rq.parse("2*x").unwrap());

        let r3 = PolyRing::new(fp(3), ["x"]);
        assert!(is_d_stable(&[r3.parse("x^3").unwrap()]).unwrap().stable);
    }

    #[test]
    fn monomial_ideals_over_q_are_never_stable() {
        let rq = PolyRing::new(Rationals, ["x"]);
        for m in 1..12u32 {
            let g = rq.monomial(Monomial(vec![m]), int(&Rationals, 1));
            assert!(!is_d_stable(&[g]).unwrap().stable, "m = {m}");
        }
        for p in [2u64, 3, 5, 7, 11] {
            let r = PolyRing::new(fp(p), ["x"]);
            let g = r.monomial(Monomial(vec![p as u32]), 1);
            assert!(is_d_stable(&[g]).unwrap().stable, "p = {p}");
        }
    }
}
