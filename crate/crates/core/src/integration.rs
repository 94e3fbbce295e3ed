//! The integral `∫x(a) = δ_{e,a}` and what follows from it: completeness,
//! expansion of group functions, and the scalar product.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    conjugation_matrix, Algebra, AlgebraElement, AlgebraError, ALGEBRA_TOL, PRUNE_TOL,
};
use crate::groups::{Group, GroupElement};
use crate::report::{CheckRecord, VerificationReport};
use crate::C64;

/// A finitely supported function `f: G → C`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupFunction {
    values: BTreeMap<GroupElement, C64>,
}

impl GroupFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums repeated elements and drops negligible values.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (GroupElement, C64)>) -> Self {
        let mut values = BTreeMap::new();
        for (a, c) in pairs {
            *values.entry(a).or_insert_with(C64::default) += c;
        }
        values.retain(|_, c: &mut C64| c.norm() >= PRUNE_TOL);
        Self { values }
    }

    /// Indicator of `a`.
    pub fn delta(a: GroupElement) -> Self {
        Self::from_pairs([(a, C64::new(1.0, 0.0))])
    }

    /// Values `values[i]` at element index `i` of a finite group.
    pub fn from_vector(g: &Group, values: &[C64]) -> Self {
        Self::from_pairs(values.iter().enumerate().map(|(i, &c)| (g.element(i), c)))
    }

    pub fn to_vector(&self, g: &Group) -> Option<Vec<C64>> {
        let n = g.order()?;
        let mut out = vec![C64::default(); n];
        for (a, c) in &self.values {
            out[g.index_of(a)?] = *c;
        }
        Some(out)
    }

    pub fn get(&self, a: &GroupElement) -> C64 {
        self.values.get(a).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &C64)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_in(&self, g: &Group) -> Result<(), AlgebraError> {
        for a in self.values.keys() {
            g.check_element(a)?;
        }
        Ok(())
    }

    /// `f*(a) = conj(f(a⁻¹))`.
    pub fn star(&self, g: &Group) -> Self {
        Self::from_pairs(self.values.iter().map(|(a, c)| (g.inverse(a), c.conj())))
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest pointwise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.values
            .keys()
            .chain(other.values.keys())
            .map(|a| (self.get(a) - other.get(a)).norm())
            .fold(0.0, f64::max)
    }
}

/// The coefficient of `x(e)`.
pub fn ati_integral(u: &AlgebraElement) -> C64 {
    u.coefficient(&u.algebra().group().identity())
}

/// `Σ f(a) x(a)`.
pub fn embed(algebra: &Arc<Algebra>, f: &GroupFunction) -> Result<AlgebraElement, AlgebraError> {
    AlgebraElement::from_terms(algebra, f.iter().map(|(a, c)| (a.clone(), *c)))
}

/// Builds `M_{bc} = ∫ x(b)(xC)_c` with `(xC)_c = Σ_k x(k) C_{k,c}` and compares
/// it with the identity matrix.
pub fn completeness_check(algebra: &Arc<Algebra>) -> Result<VerificationReport, AlgebraError> {
    let c = conjugation_matrix(algebra)?;
    let g = algebra.group();
    let n = c.nrows();
    let xc: Vec<AlgebraElement> = (0..n)
        .map(|col| {
            AlgebraElement::from_terms(
                algebra,
                (0..n)
                    .filter(|&k| c[(k, col)] != 0.0)
                    .map(|k| (g.element(k), C64::new(c[(k, col)], 0.0))),
            )
        })
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0_f64;
    for b in 0..n {
        let xb = AlgebraElement::generator(algebra, &g.element(b))?;
        for (col, xcc) in xc.iter().enumerate() {
            let m = ati_integral(&xb.multiply(xcc)?);
            let target = if b == col { 1.0 } else { 0.0 };
            worst = worst.max((m - target).norm());
        }
    }
    let mut report = VerificationReport::new("completeness");
    report.push(CheckRecord::new(
        "integral_x_xc_is_identity",
        worst,
        ALGEBRA_TOL,
    ));
    Ok(report)
}

/// `f(a) = ∫ u·x(a⁻¹)`. On finite groups every element is evaluated; on
/// lattices only the support of `u` can contribute.
pub fn invert(u: &AlgebraElement) -> Result<GroupFunction, AlgebraError> {
    let algebra = u.algebra();
    if !algebra.is_normalized() {
        return Err(AlgebraError::NotNormalized("invert"));
    }
    let g = algebra.group();
    let candidates: Vec<GroupElement> = if g.is_finite() {
        g.elements()
    } else {
        u.terms().map(|(a, _)| a.clone()).collect()
    };
    let mut out = Vec::with_capacity(candidates.len());
    for a in candidates {
        let probe = AlgebraElement::generator(algebra, &g.inverse(&a))?;
        out.push((a, ati_integral(&u.multiply(&probe)?)));
    }
    Ok(GroupFunction::from_pairs(out))
}

/// `⟨f|g⟩ = ∫ ⟨f|xC⟩⟨x|g⟩`, where `⟨f|xC⟩ = Σ conj(f(a)) x(a⁻¹)` is the
/// involution of `Σ f(a) x(a)`.
pub fn scalar_product(
    algebra: &Arc<Algebra>,
    f: &GroupFunction,
    g: &GroupFunction,
) -> Result<C64, AlgebraError> {
    let bra = embed(algebra, f)?.involution()?;
    let ket = embed(algebra, g)?;
    Ok(ati_integral(&bra.multiply(&ket)?))
}

/// `Σ conj(f(a)) g(a)`.
pub fn scalar_product_direct(f: &GroupFunction, g: &GroupFunction) -> C64 {
    f.iter().map(|(a, c)| c.conj() * g.get(a)).sum()
}
