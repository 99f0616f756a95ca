//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

/// Exponent vector `x_1^{e_1} ... x_n^{e_n}`.
///
/// The derived `Ord` is plain lexicographic comparison of the vectors and is
/// only used for storage; term orders live in [`MonomialOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Self(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        self.divides(other)
            .then(|| Self(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// If this is a pure power `x_i^e` with `e > 0`, returns `(i, e)`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`, in
/// lexicographically descending order of exponent vectors.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(nvars, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, 0, d, &mut vec![0; nvars], &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Grevlex,
    Lex,
    /// Anti-degree order (lower total degree is larger, ties by grevlex).
    /// A local order: `1 > x`; not a well-order.
    LocalDegreeAnti,
}

impl std::str::FromStr for OrderKind {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grevlex" => Ok(Self::Grevlex),
            "lex" => Ok(Self::Lex),
            "local-degree-anti" | "local" => Ok(Self::LocalDegreeAnti),
            other => Err(AlgebraError::InvalidArgument(format!(
                "unknown monomial order `{other}` (expected grevlex, lex or local-degree-anti)"
            ))),
        }
    }
}

/// A term order together with a variable priority: `priority[0]` is the
/// most significant variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        Self {
            kind,
            priority: (0..nvars).collect(),
        }
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grevlex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; priority.len()];
        for &i in &priority {
            if i >= priority.len() || std::mem::replace(&mut seen[i], true) {
                return Err(AlgebraError::InvalidArgument(format!(
                    "variable priority {priority:?} is not a permutation"
                )));
            }
        }
        Ok(Self { kind, priority })
    }

    pub fn is_global(&self) -> bool {
        !matches!(self.kind, OrderKind::LocalDegreeAnti)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => self.lex_cmp(a, b),
            OrderKind::Grevlex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| self.revlex_tie(a, b)),
            OrderKind::LocalDegreeAnti => b
                .degree()
                .cmp(&a.degree())
                .then_with(|| self.revlex_tie(a, b)),
        }
    }

    fn lex_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &i in &self.priority {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    // Among equal degrees, the monomial with the smaller exponent in the
    // least significant differing variable is larger.
    fn revlex_tie(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &i in self.priority.iter().rev() {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial(v.to_vec())
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::grevlex(3);
        // x > y > z, x^2 > xy > y^2 > xz > yz > z^2
        let seq = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?} > {:?}", w[0], w[1]);
        }
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_with_priority() {
        let o = MonomialOrder::with_priority(OrderKind::Lex, vec![1, 0]).unwrap();
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[5, 0])), Ordering::Greater);
        assert!(MonomialOrder::with_priority(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn local_order_prefers_low_degree() {
        let o = MonomialOrder::new(OrderKind::LocalDegreeAnti, 2);
        assert_eq!(o.cmp(&m(&[0, 0]), &m(&[1, 0])), Ordering::Greater);
        assert!(!o.is_global());
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(1, 7), vec![m(&[7])]);
    }

    #[test]
    fn pure_powers() {
        assert_eq!(m(&[0, 3]).pure_power(), Some((1, 3)));
        assert_eq!(m(&[1, 3]).pure_power(), None);
        assert_eq!(m(&[0, 0]).pure_power(), None);
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(
            kind in prop_oneof![Just(OrderKind::Grevlex), Just(OrderKind::Lex), Just(OrderKind::LocalDegreeAnti)],
            a in prop::collection::vec(0u32..5, 3),
            b in prop::collection::vec(0u32..5, 3),
            w in prop::collection::vec(0u32..5, 3),
        ) {
            let o = MonomialOrder::new(kind, 3);
            let (a, b, w) = (Monomial(a), Monomial(b), Monomial(w));
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&w), &b.mul(&w)));
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
        }
    }
}
