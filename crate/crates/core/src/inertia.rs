//! Differential-inertia membership on truncated polynomial modules.
//!
//! The module `K[x_1..x_n]/(monomials of degree >= m)` carries the operators
//! induced by truncation: a basis monomial is mapped by the operator and every
//! resulting monomial of degree `>= m` is dropped.
//!
//! `D` belongs to level `i` when, for every `k <= i`, the kernel of `D ∘ ∂^k`
//! on the module consists of the constants only. The element-wise variant
//! (does `D ∘ ∂^k` send a given element to zero?) is exposed separately as
//! [`annihilation_check`].

use std::fmt;

use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::{format_monomial, MPoly, PolyRing};
use crate::weyl::WeylOperator;

/// `K[x_1..x_n]` modulo all monomials of total degree `>= truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientModule<F: Field> {
    ring: PolyRing<F>,
    truncation: u32,
    basis: Vec<Monomial>,
}

impl<F: Field> QuotientModule<F> {
    pub fn new(ring: &PolyRing<F>, truncation: u32) -> Result<Self> {
        if truncation == 0 {
            return Err(AlgebraError::InvalidArgument(
                "truncation order must be at least 1".into(),
            ));
        }
        let basis = (0..truncation)
            .flat_map(|d| {
                let mut ms = monomials_of_degree(ring.nvars(), d);
                ms.reverse();
                ms
            })
            .collect();
        Ok(Self {
            ring: ring.clone(),
            truncation,
            basis,
        })
    }

    /// Parses `x^4` (one variable, `K[x]/(x^4)`) or `(x,y)^3` (all monomials of
    /// degree 3 and up in `x, y`).
    pub fn parse(field: F, spec: &str) -> Result<Self> {
        let bad = || AlgebraError::Parse {
            pos: 0,
            msg: format!("module `{spec}` is not of the form `x^m` or `(x,y,...)^m`"),
        };
        let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let (base, exp) = compact.rsplit_once('^').ok_or_else(bad)?;
        let m: u32 = exp.parse().map_err(|_| bad())?;
        let names: Vec<String> = match base.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            Some(inner) => inner.split(',').map(str::to_string).collect(),
            None => vec![base.to_string()],
        };
        let valid = |n: &String| {
            !n.is_empty()
                && n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        if !names.iter().all(valid) {
            return Err(bad());
        }
        Self::new(&PolyRing::new(field, names), m)
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Standard monomials, by degree ascending.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Image of `u` in the module.
    pub fn reduce(&self, u: &MPoly<F>) -> MPoly<F> {
        u.truncate(self.truncation)
    }

    fn coords(&self, u: &MPoly<F>) -> Vec<F::Elem> {
        self.basis.iter().map(|m| u.coeff(m)).collect()
    }

    fn element(&self, coords: &[F::Elem]) -> MPoly<F> {
        self.ring.from_terms(
            self.basis
                .iter()
                .cloned()
                .zip(coords.iter().cloned()),
        )
    }

    /// Matrix of the induced operator on the monomial basis (column `j` is the
    /// image of basis monomial `j`).
    pub fn matrix_of(&self, op: &WeylOperator<F>) -> Result<Matrix<F>> {
        if op.ring() != &self.ring {
            return Err(AlgebraError::DomainMismatch(format!(
                "operator over {}[{}] on a module over {}[{}]",
                op.ring().field().name(),
                op.ring().var_names().join(","),
                self.ring.field().name(),
                self.ring.var_names().join(",")
            )));
        }
        let n = self.dimension();
        let f = self.ring.field();
        let mut m = Matrix::zeros(f.clone(), n, n);
        for (j, b) in self.basis.iter().enumerate() {
            let image = self.reduce(&op.apply(&self.ring.monomial(b.clone(), f.one()))?);
            for (i, c) in self.coords(&image).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }
}

impl<F: Field> fmt::Display for QuotientModule<F> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.ring.var_names();
        let field = self.ring.field().name();
        if vars.len() == 1 {
            let top = format_monomial(&Monomial(vec![self.truncation]), vars);
            write!(fm, "{field}[{}]/({top})", vars[0])
        } else {
            write!(fm, "{field}[{}]/({})^{}", vars.join(","), vars.join(","), self.truncation)
        }
    }
}

impl<F: Field> Serialize for QuotientModule<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Kernel of the induced operator on the module, as module elements.
pub fn kernel_on_quotient<F: Field>(
    op: &WeylOperator<F>,
    module: &QuotientModule<F>,
) -> Result<Vec<MPoly<F>>> {
    let m = module.matrix_of(op)?;
    Ok(m
        .kernel_basis()
        .iter()
        .map(|v| module.element(v))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct InertiaLevel<F: Field> {
    pub k: u32,
    /// Normal form of `D ∘ ∂^k`.
    pub operator: WeylOperator<F>,
    pub kernel_dimension: usize,
    pub kernel_equals_constants: bool,
    pub kernel_basis: Vec<MPoly<F>>,
    /// `(D ∘ ∂^k)(element)` in the module, when an element was supplied.
    pub element_value: Option<MPoly<F>>,
    pub element_annihilated: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct InertiaReport<F: Field> {
    pub operator: WeylOperator<F>,
    pub level: u32,
    pub direction: String,
    pub module: QuotientModule<F>,
    pub element: Option<MPoly<F>>,
    pub per_k: Vec<InertiaLevel<F>>,
    /// Kernel of `D ∘ ∂^k` is exactly the constants for every `k <= level`.
    pub member: bool,
    /// `D ∘ ∂^k` annihilates the element for every `k <= level`.
    pub element_member: Option<bool>,
}

fn kernel_is_constants<F: Field>(kernel: &[MPoly<F>]) -> bool {
    // Reduced echelon basis: the constants alone give the single vector `1`.
    kernel.len() == 1 && kernel[0].is_constant() && !kernel[0].is_zero()
}

/// Tests `D ∘ ∂^k` for `k = 0..=level`, with `∂` the derivative in variable
/// `direction`. `D` must have no zero-order term.
pub fn inertia_membership<F: Field>(
    d: &WeylOperator<F>,
    level: u32,
    module: &QuotientModule<F>,
    direction: usize,
    element: Option<&MPoly<F>>,
) -> Result<InertiaReport<F>> {
    if d.has_zero_order_term() {
        return Err(AlgebraError::ZeroOrderTerm);
    }
    let ring = module.ring();
    let partial = WeylOperator::partial(ring, direction, 1)?;
    let element = element.map(|u| module.reduce(u));
    let mut composed = d.clone();
    let mut per_k = Vec::with_capacity(level as usize + 1);
    for k in 0..=level {
        if k > 0 {
            composed = composed.compose(&partial)?;
        }
        let kernel = kernel_on_quotient(&composed, module)?;
        let (element_value, element_annihilated) = match &element {
            Some(u) => {
                let v = module.reduce(&composed.apply(u)?);
                let zero = v.is_zero();
                (Some(v), Some(zero))
            }
            None => (None, None),
        };
        per_k.push(InertiaLevel {
            k,
            operator: composed.clone(),
            kernel_dimension: kernel.len(),
            kernel_equals_constants: kernel_is_constants(&kernel),
            kernel_basis: kernel,
            element_value,
            element_annihilated,
        });
    }
    let member = per_k.iter().all(|l| l.kernel_equals_constants);
    let element_member = element
        .as_ref()
        .map(|_| per_k.iter().all(|l| l.element_annihilated == Some(true)));
    Ok(InertiaReport {
        operator: d.clone(),
        level,
        direction: ring.var_names()[direction].clone(),
        module: module.clone(),
        element,
        per_k,
        member,
        element_member,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Annihilation<F: Field> {
    pub value: MPoly<F>,
    pub annihilated: bool,
}

/// `(D ∘ ∂^k)(u)` reduced in the module, with `∂` in the first variable.
pub fn annihilation_check<F: Field>(
    d: &WeylOperator<F>,
    k: u32,
    u: &MPoly<F>,
    module: &QuotientModule<F>,
) -> Result<Annihilation<F>> {
    if d.ring() != module.ring() || u.ring() != module.ring() {
        return Err(AlgebraError::DomainMismatch(
            "operator, element and module must share one ring".into(),
        ));
    }
    let op = d.compose(&WeylOperator::partial(module.ring(), 0, k)?)?;
    let value = module.reduce(&op.apply(&module.reduce(u))?);
    let annihilated = value.is_zero();
    Ok(Annihilation { value, annihilated })
}

/// Whether the Hessian of `f` at the origin is nondegenerate.
/// Fails with [`AlgebraError::NotCritical`] if `f` has linear terms.
pub fn morse_check<F: Field>(f: &MPoly<F>) -> Result<bool> {
    if f.terms().any(|(m, _)| m.degree() == 1) {
        return Err(AlgebraError::NotCritical);
    }
    let n = f.nvars();
    let field = f.field().clone();
    let origin = vec![field.zero(); n];
    let mut h = Matrix::zeros(field, n, n);
    for i in 0..n {
        let di = f.derivative(i)?;
        for j in 0..n {
            h.set(i, j, di.derivative(j)?.eval(&origin)?);
        }
    }
    Ok(h.rank() == n)
}
