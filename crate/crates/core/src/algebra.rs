//! The projective group algebra.
//!
//! Elements are finite sums `Σ f(a) x(a)` with the product extended
//! bilinearly from `x(a)x(b) = e^{iα(a,b)} x(ab)`. For finite groups the
//! right and left multiplications are also available as matrices, together
//! with the conjugation matrix `C_{a,b} = δ_{ab,e}` that intertwines them.
//!
//! Matrix conventions: `R(a)` and `L(a)` act on the column of generators,
//! `(R(a) x)_b = x(b) x(a)` and `(x^T L(a))_c = x(a) x(c)`. On a coefficient
//! column `u` this means `u·x(a)` has coefficients `R(a)^T u` and `x(a)·u` has
//! coefficients `L(a) u`.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::cocycles::{is_normalized, Cocycle, CocycleError};
use crate::groups::{Group, GroupElement, GroupError};
use crate::phase::cis;
use crate::report::{CheckRecord, VerificationReport};
use crate::{CMatrix, C64};

/// Coefficients with modulus below this are dropped.
pub const PRUNE_TOL: f64 = 1e-15;

/// Comparison tolerance for algebra-level identities.
pub const ALGEBRA_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("{0} requires a normalized cocycle")]
    NotNormalized(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A group together with a cocycle compatible with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    group: Group,
    cocycle: Cocycle,
    normalized: bool,
}

impl Algebra {
    pub fn new(group: Group, cocycle: Cocycle) -> Result<Arc<Self>, AlgebraError> {
        cocycle.check_compatible(&group)?;
        let normalized = cocycle.normalized_flag() || is_normalized(&group, &cocycle);
        Ok(Arc::new(Self {
            group,
            cocycle,
            normalized,
        }))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `α(a,b)`.
    pub fn phase(&self, a: &GroupElement, b: &GroupElement) -> f64 {
        self.cocycle.phase(&self.group, a, b)
    }

    fn require_normalized(&self, op: &'static str) -> Result<(), AlgebraError> {
        if self.normalized {
            Ok(())
        } else {
            Err(AlgebraError::NotNormalized(op))
        }
    }

    fn require_finite(&self, op: &str) -> Result<usize, AlgebraError> {
        self.group.order().ok_or_else(|| {
            AlgebraError::Unsupported(format!("{op} needs a finite group; use the operator form"))
        })
    }
}

fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: Arc<Algebra>,
    terms: BTreeMap<GroupElement, C64>,
}

impl AlgebraElement {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative unit `x(e)`.
    pub fn one(algebra: &Arc<Algebra>) -> Self {
        let e = algebra.group.identity();
        Self::generator(algebra, &e).expect("identity is an element")
    }

    /// The singleton `x(a)`.
    pub fn generator(algebra: &Arc<Algebra>, a: &GroupElement) -> Result<Self, AlgebraError> {
        Self::from_terms(algebra, [(a.clone(), C64::new(1.0, 0.0))])
    }

    /// `Σ c x(a)` over the given pairs; repeated elements are summed.
    pub fn from_terms(
        algebra: &Arc<Algebra>,
        terms: impl IntoIterator<Item = (GroupElement, C64)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(algebra);
        for (a, c) in terms {
            algebra.group.check_element(&a)?;
            *out.terms.entry(a).or_default() += c;
        }
        out.prune();
        Ok(out)
    }

    /// Element whose coefficients are `coeffs[i]` at group element `i`.
    pub fn from_vector(algebra: &Arc<Algebra>, coeffs: &[C64]) -> Result<Self, AlgebraError> {
        let n = algebra.require_finite("from_vector")?;
        if coeffs.len() != n {
            return Err(AlgebraError::Unsupported(format!(
                "{} coefficients for a group of order {n}",
                coeffs.len()
            )));
        }
        Self::from_terms(
            algebra,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (algebra.group.element(i), c)),
        )
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coefficient(&self, a: &GroupElement) -> C64 {
        self.terms.get(a).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense coefficient vector of an element over a finite group.
    pub fn to_vector(&self) -> Result<Vec<C64>, AlgebraError> {
        let n = self.algebra.require_finite("to_vector")?;
        let mut out = vec![C64::default(); n];
        for (a, c) in &self.terms {
            out[self.algebra.group.index_of(a).expect("element")] = *c;
        }
        Ok(out)
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            *out.terms.entry(a.clone()).or_default() += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune();
        out
    }

    /// Bilinear extension of `x(a)x(b) = e^{iα(a,b)} x(ab)`.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let alg = &self.algebra;
        let mut out = Self::zero(alg);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let ab = alg.group.op(a, b);
                *out.terms.entry(ab).or_default() += ca * cb * cis(alg.phase(a, b));
            }
        }
        out.prune();
        Ok(out)
    }

    /// Antilinear extension of `x(a)* = x(a⁻¹)`.
    pub fn involution(&self) -> Result<Self, AlgebraError> {
        self.algebra.require_normalized("involution")?;
        let g = &self.algebra.group;
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (g.inverse(a), c.conj()))
                .collect(),
        })
    }

    /// `u·x(a)`.
    pub fn apply_r(&self, a: &GroupElement) -> Result<Self, AlgebraError> {
        self.multiply(&Self::generator(&self.algebra, a)?)
    }

    /// `x(a)·u`.
    pub fn apply_l(&self, a: &GroupElement) -> Result<Self, AlgebraError> {
        Self::generator(&self.algebra, a)?.multiply(self)
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Self) -> Result<f64, AlgebraError> {
        self.check_same(other)?;
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|a| (self.coefficient(a) - other.coefficient(a)).norm())
            .fold(0.0, f64::max))
    }
}

/// Right and left regular representations with the conjugation matrix.
#[derive(Debug, Clone)]
pub struct RegularRepPair {
    /// `R[i]` is the matrix of element `i`.
    pub r: Vec<CMatrix>,
    pub l: Vec<CMatrix>,
    pub c: DMatrix<f64>,
}

/// `(R(a))_{bc} = δ_{ba,c} e^{iα(b,a)}`, `(L(a))_{bc} = δ_{ac,b} e^{iα(a,c)}`.
pub fn regular_reps(algebra: &Arc<Algebra>) -> Result<RegularRepPair, AlgebraError> {
    let n = algebra.require_finite("regular_reps")?;
    algebra.require_normalized("regular_reps")?;
    let g = &algebra.group;
    let alpha = &algebra.cocycle;
    let mut r = Vec::with_capacity(n);
    let mut l = Vec::with_capacity(n);
    for a in 0..n {
        let mut ra = CMatrix::zeros(n, n);
        let mut la = CMatrix::zeros(n, n);
        for b in 0..n {
            ra[(b, g.op_index(b, a))] = cis(alpha.phase_index(b, a));
            // L(a)_{bc} nonzero iff b = ac
            la[(g.op_index(a, b), b)] = cis(alpha.phase_index(a, b));
        }
        r.push(ra);
        l.push(la);
    }
    Ok(RegularRepPair {
        r,
        l,
        c: conjugation_matrix(algebra)?,
    })
}

/// `C_{a,b} = δ_{ab,e}`.
pub fn conjugation_matrix(algebra: &Arc<Algebra>) -> Result<DMatrix<f64>, AlgebraError> {
    let n = algebra.require_finite("conjugation_matrix")?;
    algebra.require_normalized("conjugation_matrix")?;
    let g = &algebra.group;
    Ok(DMatrix::from_fn(n, n, |a, b| {
        if g.op_index(a, b) == 0 {
            1.0
        } else {
            0.0
        }
    }))
}

fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks `C^T = C`, `C R(a) C⁻¹ = L(a)` for every `a`, and that `R` and `L`
/// are projective representations with the algebra's cocycle.
pub fn check_self_conjugacy(algebra: &Arc<Algebra>) -> Result<VerificationReport, AlgebraError> {
    let reps = regular_reps(algebra)?;
    let n = reps.r.len();
    let g = &algebra.group;
    let mut report = VerificationReport::new("self_conjugacy");

    let symmetric = (&reps.c - reps.c.transpose()).amax();
    report.push(CheckRecord::new("c_symmetric", symmetric, ALGEBRA_TOL));

    let c = reps.c.map(|x| C64::new(x, 0.0));
    let Some(c_inv) = c.clone().try_inverse() else {
        report.push(CheckRecord::new("c_invertible", f64::INFINITY, ALGEBRA_TOL));
        return Ok(report);
    };
    let intertwine = (0..n)
        .map(|a| max_entry_diff(&(&c * &reps.r[a] * &c_inv), &reps.l[a]))
        .fold(0.0, f64::max);
    report.push(CheckRecord::new(
        "c_r_cinv_equals_l",
        intertwine,
        ALGEBRA_TOL,
    ));

    let row_sums = (0..n)
        .map(|a| (reps.c.row(a).sum() - 1.0).abs())
        .fold(0.0, f64::max);
    report.push(CheckRecord::new("c_row_sums", row_sums, ALGEBRA_TOL));

    let mut right = 0.0_f64;
    let mut left = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            let ab = g.op_index(a, b);
            let ph = cis(algebra.cocycle.phase_index(a, b));
            right = right.max(max_entry_diff(
                &(&reps.r[a] * &reps.r[b]),
                &(&reps.r[ab] * ph),
            ));
            left = left.max(max_entry_diff(
                &(&reps.l[a] * &reps.l[b]),
                &(&reps.l[ab] * ph),
            ));
        }
    }
    report.push(CheckRecord::new("r_projective", right, ALGEBRA_TOL));
    report.push(CheckRecord::new("l_projective", left, ALGEBRA_TOL));
    Ok(report)
}

/// The row `xC` with entries `(xC)_b = x(b⁻¹)` is a left eigenvector of every
/// `R(a)` with eigenvalue `x(a)`: `Σ_b (xC)_b R(a)_{bc} = x(a)(xC)_c`. Both
/// sides are evaluated as algebra elements for every `a` and `c`.
pub fn check_eigen_bra(algebra: &Arc<Algebra>) -> Result<VerificationReport, AlgebraError> {
    let reps = regular_reps(algebra)?;
    let n = reps.r.len();
    let g = &algebra.group;
    let xc: Vec<AlgebraElement> = (0..n)
        .map(|b| {
            // (xC)_b = Σ_k x(k) C_{k,b}
            AlgebraElement::from_terms(
                algebra,
                (0..n)
                    .filter(|&k| reps.c[(k, b)] != 0.0)
                    .map(|k| (g.element(k), C64::new(reps.c[(k, b)], 0.0))),
            )
        })
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0_f64;
    let mut inverse_form = 0.0_f64;
    for (b, xcb) in xc.iter().enumerate() {
        let expected = AlgebraElement::generator(algebra, &g.element(g.inverse_index(b)))?;
        inverse_form = inverse_form.max(xcb.distance(&expected)?);
    }
    for a in 0..n {
        let xa = AlgebraElement::generator(algebra, &g.element(a))?;
        for c in 0..n {
            let mut lhs = AlgebraElement::zero(algebra);
            for (b, xcb) in xc.iter().enumerate() {
                let entry = reps.r[a][(b, c)];
                if entry != C64::default() {
                    lhs = lhs.add(&xcb.scale(entry))?;
                }
            }
            let rhs = xa.multiply(&xc[c])?;
            worst = worst.max(lhs.distance(&rhs)?);
        }
    }
    let mut report = VerificationReport::new("eigen_bra");
    report.push(CheckRecord::new(
        "xc_is_inverse_generator",
        inverse_form,
        ALGEBRA_TOL,
    ));
    report.push(CheckRecord::new("xc_r_equals_x_xc", worst, ALGEBRA_TOL));
    Ok(report)
}
