//! Fourier analysis on groups, vector and projective.
//!
//! The transform of `f` in a representation `x` is `Σ f(a) x(a)`. In the
//! formal representation this is an algebra element, in a matrix
//! representation a dense matrix, and for the characters
//! `χ_q(a) = e^{−2πi q·a/n}` of `(Z_n)^D` a function of `q`.

use std::f64::consts::TAU;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{regular_reps, Algebra, AlgebraElement, AlgebraError, ALGEBRA_TOL};
use crate::cocycles::{Cocycle, GaugePhase};
use crate::groups::{Group, GroupElement};
use crate::integration::{ati_integral, embed, GroupFunction};
use crate::phase::{cis, dist_mod_2pi, PHASE_TOL};
use crate::report::{CheckRecord, VerificationReport};
use crate::{CMatrix, C64};

/// Tolerance for the projective property of matrix representations.
pub const REP_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("matrices are not a projective representation of the cocycle (residual {residual:.3e} at {pair})")]
    NotARepresentation { residual: f64, pair: String },
}

/// A finite-dimensional projective representation of a finite group.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    algebra: Arc<Algebra>,
    mats: Vec<CMatrix>,
}

impl MatrixRep {
    /// `mats[i]` represents element `i`. Verifies
    /// `M(a)M(b) = e^{iα(a,b)} M(ab)` on every pair.
    pub fn new(algebra: Arc<Algebra>, mats: Vec<CMatrix>) -> Result<Self, HarmonicError> {
        let g = algebra.group();
        let n = g.order().ok_or_else(|| {
            HarmonicError::Unsupported("matrix representations need a finite group".into())
        })?;
        if mats.len() != n {
            return Err(HarmonicError::Mismatch(format!(
                "{} matrices for a group of order {n}",
                mats.len()
            )));
        }
        let dim = mats[0].nrows();
        if mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(HarmonicError::Mismatch("matrices differ in shape".into()));
        }
        let rep = Self { algebra, mats };
        let (residual, pair) = rep.projective_residual();
        if residual >= REP_TOL || residual.is_nan() {
            return Err(HarmonicError::NotARepresentation { residual, pair });
        }
        Ok(rep)
    }

    /// The right regular representation of a normalized algebra.
    pub fn regular(algebra: &Arc<Algebra>) -> Result<Self, HarmonicError> {
        let reps = regular_reps(algebra)?;
        Self::new(Arc::clone(algebra), reps.r)
    }

    /// `x'(a) = e^{−iφ(a)} x(a)`, which represents `cocycle` when that is the
    /// gauge transform of the current one by `φ`.
    pub fn rephase(&self, phi: &GaugePhase, cocycle: Cocycle) -> Result<Self, HarmonicError> {
        let g = self.algebra.group().clone();
        phi.check_compatible(&g)
            .map_err(|e| HarmonicError::Algebra(e.into()))?;
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(i, m)| m * cis(-phi.eval(&g, &g.element(i))))
            .collect();
        Self::new(Algebra::new(g, cocycle)?, mats)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn matrix(&self, a: &GroupElement) -> Option<&CMatrix> {
        self.algebra.group().index_of(a).map(|i| &self.mats[i])
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    fn projective_residual(&self) -> (f64, String) {
        let g = self.algebra.group();
        let n = self.mats.len();
        let mut worst = (0.0_f64, String::new());
        for a in 0..n {
            for b in 0..n {
                let ab = g.op_index(a, b);
                let ph = cis(self.algebra.phase(&g.element(a), &g.element(b)));
                let r = max_entry_diff(&(&self.mats[a] * &self.mats[b]), &(&self.mats[ab] * ph));
                if r > worst.0 || r.is_nan() {
                    worst = (
                        r,
                        format!("({}, {})", g.label(&g.element(a)), g.label(&g.element(b))),
                    );
                }
            }
        }
        worst
    }
}

pub(crate) fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub enum Representation {
    /// `a ↦ x(a)` into the algebra itself.
    Formal(Arc<Algebra>),
    Matrix(MatrixRep),
    /// The characters of `(Z_n)^D`; vector case only.
    Character(Group),
}

impl Representation {
    /// Characters of the group of an algebra whose cocycle vanishes.
    pub fn character(algebra: &Arc<Algebra>) -> Result<Self, HarmonicError> {
        let g = algebra.group();
        if g.modulus().is_none() {
            return Err(HarmonicError::Unsupported(format!(
                "characters are provided for (Z_n)^D, got {}",
                g.describe()
            )));
        }
        require_vector_case(algebra)?;
        Ok(Representation::Character(g.clone()))
    }

    pub fn group(&self) -> &Group {
        match self {
            Representation::Formal(a) => a.group(),
            Representation::Matrix(m) => m.algebra().group(),
            Representation::Character(g) => g,
        }
    }
}

fn require_vector_case(algebra: &Algebra) -> Result<(), HarmonicError> {
    let g = algebra.group();
    let zero = algebra.cocycle().is_zero()
        || g.elements().iter().all(|a| {
            g.elements()
                .iter()
                .all(|b| dist_mod_2pi(algebra.phase(a, b)) < PHASE_TOL)
        }) && g.is_finite();
    if zero {
        Ok(())
    } else {
        Err(HarmonicError::Unsupported(
            "vector-case operation on a projective cocycle".into(),
        ))
    }
}

/// Value of a transform.
#[derive(Debug, Clone)]
pub enum Transform {
    Element(AlgebraElement),
    Matrix(CMatrix),
    /// `f̃(q)` indexed like the group's elements.
    Spectrum(Vec<C64>),
}

impl Transform {
    pub fn as_matrix(&self) -> Option<&CMatrix> {
        match self {
            Transform::Matrix(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_spectrum(&self) -> Option<&[C64]> {
        match self {
            Transform::Spectrum(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_element(&self) -> Option<&AlgebraElement> {
        match self {
            Transform::Element(e) => Some(e),
            _ => None,
        }
    }
}

/// `χ_q(a) = e^{−2πi q·a/n}`.
pub fn character_value(n: u64, q: &[i64], a: &[i64]) -> C64 {
    let dot: i64 = q.iter().zip(a).map(|(x, y)| x * y).sum();
    cis(-TAU * dot.rem_euclid(n as i64) as f64 / n as f64)
}

/// `Σ f(a) x(a)`.
pub fn fourier(f: &GroupFunction, rep: &Representation) -> Result<Transform, HarmonicError> {
    fourier_with(f, rep, false)
}

/// As [`fourier`]; `volume_normalized` divides by the group order.
pub fn fourier_with(
    f: &GroupFunction,
    rep: &Representation,
    volume_normalized: bool,
) -> Result<Transform, HarmonicError> {
    let g = rep.group();
    f.check_in(g).map_err(|_| {
        HarmonicError::Mismatch(format!("function is not supported on {}", g.describe()))
    })?;
    let scale = if volume_normalized {
        let n = g.order().ok_or_else(|| {
            HarmonicError::Unsupported("volume normalization needs a finite group".into())
        })?;
        1.0 / n as f64
    } else {
        1.0
    };
    let out = match rep {
        Representation::Formal(algebra) => {
            Transform::Element(embed(algebra, f)?.scale(C64::new(scale, 0.0)))
        }
        Representation::Matrix(m) => {
            let d = m.dim();
            let mut acc = CMatrix::zeros(d, d);
            for (a, c) in f.iter() {
                acc += m.matrix(a).expect("checked membership") * (c * scale);
            }
            Transform::Matrix(acc)
        }
        Representation::Character(g) => {
            let n = g.modulus().expect("cyclic power");
            let spectrum = g
                .elements()
                .iter()
                .map(|q| {
                    let q = q.coords().expect("vector");
                    f.iter()
                        .map(|(a, c)| c * character_value(n, q, a.coords().expect("vector")))
                        .sum::<C64>()
                        * scale
                })
                .collect();
            Transform::Spectrum(spectrum)
        }
    };
    Ok(out)
}

/// Spectral data for the vector-case inversion formula.
#[derive(Debug, Clone)]
pub enum SpectralData {
    /// `f̃(q)` for every character of `(Z_n)^D`, indexed like the group.
    Characters(Vec<C64>),
    /// `Σ f(b) R(b)` in the right regular representation.
    Regular(CMatrix),
}

/// Recovers `f` from its transform when the cocycle vanishes:
/// `f(a) = (1/n_G) Σ_q f̃(q) χ_q(a⁻¹)` over characters, or
/// `f(a) = (1/n_G) tr[f̂ R(a⁻¹)]` through the regular representation, which
/// contains every irreducible representation `λ` exactly `d_λ` times.
pub fn invert_vector_finite(
    algebra: &Arc<Algebra>,
    data: &SpectralData,
) -> Result<GroupFunction, HarmonicError> {
    let g = algebra.group();
    let order = g
        .order()
        .ok_or_else(|| HarmonicError::Unsupported("finite-group inversion on a lattice".into()))?;
    require_vector_case(algebra)?;
    let norm = 1.0 / order as f64;
    match data {
        SpectralData::Characters(spectrum) => {
            let n = g.modulus().ok_or_else(|| {
                HarmonicError::Unsupported("character inversion needs (Z_n)^D".into())
            })?;
            if spectrum.len() != order {
                return Err(HarmonicError::Mismatch(format!(
                    "{} spectral values for {order} characters",
                    spectrum.len()
                )));
            }
            let elems = g.elements();
            Ok(GroupFunction::from_pairs(elems.iter().map(|a| {
                let ainv = g.inverse(a);
                let ainv = ainv.coords().expect("vector");
                let value: C64 = elems
                    .iter()
                    .zip(spectrum)
                    .map(|(q, fq)| fq * character_value(n, q.coords().expect("vector"), ainv))
                    .sum();
                (a.clone(), value * norm)
            })))
        }
        SpectralData::Regular(fhat) => {
            let reps = regular_reps(algebra)?;
            if fhat.nrows() != order || fhat.ncols() != order {
                return Err(HarmonicError::Mismatch(format!(
                    "regular transform must be {order}x{order}"
                )));
            }
            Ok(GroupFunction::from_pairs((0..order).map(|a| {
                let rinv = &reps.r[g.inverse_index(a)];
                (g.element(a), (fhat * rinv).trace() * norm)
            })))
        }
    }
}

/// `h(a) = Σ_b f1(b) f2(b⁻¹a)`.
pub fn convolution(g: &Group, f1: &GroupFunction, f2: &GroupFunction) -> GroupFunction {
    GroupFunction::from_pairs(
        f1.iter()
            .flat_map(|(b, x)| f2.iter().map(move |(c, y)| (g.op(b, c), x * y))),
    )
}

/// `h(a) = Σ_b f1(b) f2(b⁻¹a) e^{iα(b, b⁻¹a)}`.
pub fn deformed_convolution(
    algebra: &Arc<Algebra>,
    f1: &GroupFunction,
    f2: &GroupFunction,
) -> Result<GroupFunction, HarmonicError> {
    let g = algebra.group();
    f1.check_in(g)?;
    f2.check_in(g)?;
    Ok(GroupFunction::from_pairs(f1.iter().flat_map(|(b, x)| {
        f2.iter()
            .map(move |(c, y)| (g.op(b, c), x * y * cis(algebra.phase(b, c))))
    })))
}

/// Both sides of `∫ f̂* f̂ = Σ |f(a)|²` with the formal transform.
pub fn plancherel_sides(
    algebra: &Arc<Algebra>,
    f: &GroupFunction,
) -> Result<(C64, f64), HarmonicError> {
    f.check_in(algebra.group())?;
    let fhat = embed(algebra, f)?;
    let lhs = ati_integral(&fhat.involution()?.multiply(&fhat)?);
    Ok((lhs, f.norm_sq()))
}

pub fn plancherel_check(
    algebra: &Arc<Algebra>,
    f: &GroupFunction,
) -> Result<VerificationReport, HarmonicError> {
    let (lhs, rhs) = plancherel_sides(algebra, f)?;
    let mut report = VerificationReport::new("plancherel");
    report.push(
        CheckRecord::new("integral_fhat_star_fhat", (lhs - rhs).norm(), ALGEBRA_TOL)
            .with_detail(format!("lhs = {lhs}, rhs = {rhs}")),
    );
    Ok(report)
}

/// The product on character transforms induced by the deformed convolution,
/// `h̃(q) = Σ_{a,b} f(a) g(b) e^{iα(a,b)} χ_q(a) χ_q(b)`, where `f` and `g` are
/// first recovered from `f̃` and `g̃` by inverse DFT.
pub fn moyal_star(
    algebra: &Arc<Algebra>,
    ft: &[C64],
    gt: &[C64],
) -> Result<Vec<C64>, HarmonicError> {
    let g = algebra.group();
    let n = g.modulus().ok_or_else(|| {
        HarmonicError::Unsupported(format!("Moyal product needs (Z_n)^D, got {}", g.describe()))
    })?;
    let order = g.order().expect("finite");
    for s in [ft, gt] {
        if s.len() != order {
            return Err(HarmonicError::Mismatch(format!(
                "{} spectral values for {order} characters",
                s.len()
            )));
        }
    }
    let elems = g.elements();
    let inverse_dft = |s: &[C64]| -> Vec<(usize, C64)> {
        elems
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let ainv = g.inverse(a);
                let ainv = ainv.coords().expect("vector");
                let v: C64 = elems
                    .iter()
                    .zip(s)
                    .map(|(q, sq)| sq * character_value(n, q.coords().expect("vector"), ainv))
                    .sum();
                (i, v / order as f64)
            })
            .filter(|(_, v)| v.norm() >= crate::algebra::PRUNE_TOL)
            .collect()
    };
    let f = inverse_dft(ft);
    let h = inverse_dft(gt);
    let mut weights = Vec::with_capacity(f.len() * h.len());
    for &(a, fa) in &f {
        for &(b, gb) in &h {
            let w = fa * gb * cis(algebra.phase(&elems[a], &elems[b]));
            weights.push((a, b, w));
        }
    }
    Ok(elems
        .iter()
        .map(|q| {
            let q = q.coords().expect("vector");
            weights
                .iter()
                .map(|&(a, b, w)| {
                    w * character_value(n, q, elems[a].coords().expect("vector"))
                        * character_value(n, q, elems[b].coords().expect("vector"))
                })
                .sum()
        })
        .collect())
}

/// Checks the deformed convolution theorem in `rep`:
/// `x̂(f ∗_α g) = x̂(f) x̂(g)`.
pub fn deformed_convolution_theorem_residual(
    rep: &Representation,
    f: &GroupFunction,
    h: &GroupFunction,
) -> Result<f64, HarmonicError> {
    let algebra = match rep {
        Representation::Formal(a) => Arc::clone(a),
        Representation::Matrix(m) => Arc::clone(m.algebra()),
        Representation::Character(g) => Algebra::new(g.clone(), Cocycle::zero())?,
    };
    let conv = deformed_convolution(&algebra, f, h)?;
    let lhs = fourier(&conv, rep)?;
    let (tf, th) = (fourier(f, rep)?, fourier(h, rep)?);
    Ok(match (lhs, tf, th) {
        (Transform::Element(l), Transform::Element(a), Transform::Element(b)) => {
            l.distance(&a.multiply(&b)?)?
        }
        (Transform::Matrix(l), Transform::Matrix(a), Transform::Matrix(b)) => {
            max_entry_diff(&l, &(a * b))
        }
        (Transform::Spectrum(l), Transform::Spectrum(a), Transform::Spectrum(b)) => l
            .iter()
            .zip(a.iter().zip(&b))
            .map(|(l, (x, y))| (l - x * y).norm())
            .fold(0.0, f64::max),
        _ => unreachable!("one representation yields one transform kind"),
    })
}
