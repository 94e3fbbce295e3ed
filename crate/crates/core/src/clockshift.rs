//! Clock and shift matrices: the `n × n` realization of the projective
//! algebra of `Z_n²`.
//!
//! `U1` is the cyclic shift `(U1)_{a,b} = δ_{a,b−1} + δ_{a,n}δ_{b,1}` and `U2`
//! the clock `diag(1, ω, …, ω^{n−1})` with `ω = e^{2πi/n}` (1-based indices in
//! these formulas, 0-based storage). Elements are dressed as
//! `x(m) = e^{iπ m₁m₂/n} U1^{m₁} U2^{m₂}` for canonical `m ∈ [0,n)²`, and the
//! cocycle is read off the matrices rather than assumed.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, ALGEBRA_TOL};
use crate::cocycles::{commutator_pairing, normalize, validate_cocycle, Cocycle, CocycleError};
use crate::groups::{make_cyclic_power, Group, GroupElement};
use crate::harmonic::{
    deformed_convolution_theorem_residual, fourier, max_entry_diff, HarmonicError, MatrixRep,
    Representation,
};
use crate::integration::{ati_integral, embed, invert};
use crate::phase::{cis, dist_mod_2pi};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling;
use crate::{CMatrix, C64};

/// Matrix entries of one product ratio must agree to this tolerance.
pub const RATIO_TOL: f64 = 1e-10;

/// Largest `n` accepted by [`consistency_check`].
pub const MAX_CHECKED_N: usize = 16;

/// Random elements and pairs drawn by [`consistency_check`].
pub const CONSISTENCY_TRIALS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClockShiftError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "x(m)x(m') is not a scalar multiple of x(m+m') at m = {m}, m' = {mp} (spread {spread:.3e})"
    )]
    RepresentationInconsistency { m: String, mp: String, spread: f64 },
    #[error("matrix is {rows}x{cols}, expected {n}x{n}")]
    ShapeMismatch { rows: usize, cols: usize, n: usize },
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

fn check_n(n: usize) -> Result<(), ClockShiftError> {
    if n < 2 {
        return Err(ClockShiftError::InvalidParameter(format!(
            "clock and shift matrices need n >= 2, got {n}"
        )));
    }
    Ok(())
}

/// `(U1, U2)`: shift and clock.
pub fn clock_shift_matrices(n: usize) -> Result<(CMatrix, CMatrix), ClockShiftError> {
    check_n(n)?;
    let one = C64::new(1.0, 0.0);
    let mut u1 = CMatrix::zeros(n, n);
    for a in 0..n {
        u1[(a, (a + 1) % n)] = one;
    }
    let u2 = CMatrix::from_fn(n, n, |a, b| {
        if a == b {
            cis(TAU * a as f64 / n as f64)
        } else {
            C64::default()
        }
    });
    Ok((u1, u2))
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    (0..k).fold(CMatrix::identity(m.nrows(), m.ncols()), |acc, _| acc * m)
}

/// `x(m) = e^{iπ m₁m₂/n} U1^{m₁} U2^{m₂}`.
pub fn realize(n: usize, m: &[i64]) -> Result<CMatrix, ClockShiftError> {
    check_n(n)?;
    if m.len() != 2 || m.iter().any(|&c| c < 0 || c as usize >= n) {
        return Err(ClockShiftError::InvalidParameter(format!(
            "{m:?} is not a canonical element of Z_{n}^2"
        )));
    }
    let (u1, u2) = clock_shift_matrices(n)?;
    let (m1, m2) = (m[0] as usize, m[1] as usize);
    Ok(power(&u1, m1) * power(&u2, m2) * cis(PI * (m1 * m2) as f64 / n as f64))
}

fn realize_all(n: usize, g: &Group) -> Result<Vec<CMatrix>, ClockShiftError> {
    g.elements()
        .iter()
        .map(|m| realize(n, m.coords().expect("vector")))
        .collect()
}

/// `α(m,m') = arg[x(m)x(m') / x(m+m')]`, tabulated on `(Z_n)²`.
pub fn measured_cocycle(n: usize) -> Result<Cocycle, ClockShiftError> {
    check_n(n)?;
    let g = make_cyclic_power(n as u64, 2).expect("n >= 2");
    let mats = realize_all(n, &g)?;
    let order = mats.len();
    let mut table = vec![vec![0.0; order]; order];
    for a in 0..order {
        for b in 0..order {
            let p = &mats[a] * &mats[b];
            let q = &mats[g.op_index(a, b)];
            let ratio = scalar_ratio(&p, q).ok_or_else(|| {
                ClockShiftError::RepresentationInconsistency {
                    m: g.element(a).to_string(),
                    mp: g.element(b).to_string(),
                    spread: f64::INFINITY,
                }
            })?;
            let spread = max_entry_diff(&p, &(q * ratio));
            if spread >= RATIO_TOL {
                return Err(ClockShiftError::RepresentationInconsistency {
                    m: g.element(a).to_string(),
                    mp: g.element(b).to_string(),
                    spread,
                });
            }
            table[a][b] = ratio.arg();
        }
    }
    Ok(Cocycle::table(table)?)
}

/// `p_ij / q_ij` at the largest entry of `q`.
fn scalar_ratio(p: &CMatrix, q: &CMatrix) -> Option<C64> {
    let (idx, _) = q
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let denom = q.as_slice()[idx];
    if denom.norm() < 0.5 {
        return None;
    }
    Some(p.as_slice()[idx] / denom)
}

/// `Tr[A]/n`.
pub fn trace_integral(n: usize, a: &CMatrix) -> Result<C64, ClockShiftError> {
    if a.nrows() != n || a.ncols() != n {
        return Err(ClockShiftError::ShapeMismatch {
            rows: a.nrows(),
            cols: a.ncols(),
            n,
        });
    }
    Ok(a.trace() / n as f64)
}

/// The clock and shift realization bundled with its algebra.
#[derive(Debug, Clone)]
pub struct ClockShift {
    pub n: usize,
    pub u1: CMatrix,
    pub u2: CMatrix,
    /// `Z_n²` with the measured cocycle.
    pub rep: MatrixRep,
}

impl ClockShift {
    pub fn new(n: usize) -> Result<Self, ClockShiftError> {
        let (u1, u2) = clock_shift_matrices(n)?;
        let g = make_cyclic_power(n as u64, 2).expect("n >= 2");
        let mats = realize_all(n, &g)?;
        let algebra = Algebra::new(g, measured_cocycle(n)?)?;
        Ok(Self {
            n,
            u1,
            u2,
            rep: MatrixRep::new(algebra, mats)?,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.rep.algebra()
    }

    pub fn group(&self) -> &Group {
        self.rep.algebra().group()
    }

    /// The realization rephased so that its cocycle is normalized.
    pub fn normalized_rep(&self) -> Result<MatrixRep, ClockShiftError> {
        let (cocycle, phi) = normalize(self.group(), self.algebra().cocycle())?;
        Ok(self.rep.rephase(&phi, cocycle)?)
    }
}

/// Verifies the realization end to end: generator relations, the measured
/// cocycle, trace orthogonality, the deformed convolution theorem, and the
/// agreement of the trace integral with the algebraic one.
pub fn consistency_check(n: usize, seed: u64) -> Result<VerificationReport, ClockShiftError> {
    if !(2..=MAX_CHECKED_N).contains(&n) {
        return Err(ClockShiftError::InvalidParameter(format!(
            "consistency check supports 2 <= n <= {MAX_CHECKED_N}, got {n}"
        )));
    }
    let cs = ClockShift::new(n)?;
    let g = cs.group().clone();
    let id = CMatrix::identity(n, n);
    let mut report = VerificationReport::new(format!("clockshift_n{n}"));

    let periodic =
        max_entry_diff(&power(&cs.u1, n), &id).max(max_entry_diff(&power(&cs.u2, n), &id));
    report.push(CheckRecord::new(
        "generators_periodic",
        periodic,
        ALGEBRA_TOL,
    ));

    let inv = |m: &CMatrix| m.clone().try_inverse().expect("unitary");
    let comm = &cs.u1 * &cs.u2 * inv(&cs.u1) * inv(&cs.u2);
    let omega = cis(TAU / n as f64);
    report.push(CheckRecord::new(
        "generator_commutator",
        max_entry_diff(&comm, &(&id * omega)),
        ALGEBRA_TOL,
    ));

    let mats = cs.rep.matrices();
    let unitary = mats
        .iter()
        .map(|m| max_entry_diff(&(m.adjoint() * m), &id))
        .fold(0.0, f64::max);
    report.push(CheckRecord::new("elements_unitary", unitary, ALGEBRA_TOL));

    let alpha = cs.algebra().cocycle();
    let order = mats.len();
    let mut projective = 0.0_f64;
    let mut orthogonal = 0.0_f64;
    for a in 0..order {
        for b in 0..order {
            let ph = cis(alpha.phase_index(a, b));
            projective = projective.max(max_entry_diff(
                &(&mats[a] * &mats[b]),
                &(&mats[g.op_index(a, b)] * ph),
            ));
            let inner = (mats[a].adjoint() * &mats[b]).trace() / n as f64;
            let target = if a == b { 1.0 } else { 0.0 };
            orthogonal = orthogonal.max((inner - target).norm());
        }
    }
    report.push(CheckRecord::new(
        "projective_representation",
        projective,
        ALGEBRA_TOL,
    ));
    report.push(CheckRecord::new(
        "trace_orthogonality",
        orthogonal,
        ALGEBRA_TOL,
    ));

    let valid = validate_cocycle(&g, alpha)?;
    report.absorb(valid);
    let e1 = GroupElement::Vector(vec![1, 0]);
    let e2 = GroupElement::Vector(vec![0, 1]);
    let beta = commutator_pairing(&g, alpha, &e1, &e2)?;
    report.push(
        CheckRecord::new(
            "commutator_pairing",
            dist_mod_2pi(beta - TAU / n as f64),
            1e-10,
        )
        .with_detail(format!("beta(e1,e2) = {beta}")),
    );

    let mut rng = sampling::rng(seed);
    let rep = Representation::Matrix(cs.rep.clone());
    let mut theorem = 0.0_f64;
    for _ in 0..CONSISTENCY_TRIALS {
        let f = sampling::function(&g, &mut rng);
        let h = sampling::function(&g, &mut rng);
        theorem = theorem.max(deformed_convolution_theorem_residual(&rep, &f, &h)?);
    }
    report.push(CheckRecord::new(
        "deformed_convolution_theorem",
        theorem,
        ALGEBRA_TOL,
    ));

    let normalized = cs.normalized_rep()?;
    let nrep = Representation::Matrix(normalized.clone());
    let (mut trace_vs_ati, mut trace_vs_invert) = (0.0_f64, 0.0_f64);
    for _ in 0..CONSISTENCY_TRIALS {
        let f = sampling::function(&g, &mut rng);
        for (algebra, r) in [(cs.algebra(), &rep), (normalized.algebra(), &nrep)] {
            let u = embed(algebra, &f)?;
            let a = fourier(&f, r)?;
            let t = trace_integral(n, a.as_matrix().expect("matrix"))?;
            trace_vs_ati = trace_vs_ati.max((t - ati_integral(&u)).norm());
        }
        let u = embed(normalized.algebra(), &f)?;
        let a = fourier(&f, &nrep)?;
        let t = trace_integral(n, a.as_matrix().expect("matrix"))?;
        trace_vs_invert = trace_vs_invert.max((t - invert(&u)?.get(&g.identity())).norm());
    }
    report.push(CheckRecord::new(
        "trace_integral_equals_ati",
        trace_vs_ati,
        ALGEBRA_TOL,
    ));
    report.push(CheckRecord::new(
        "trace_integral_equals_inverted_identity",
        trace_vs_invert,
        ALGEBRA_TOL,
    ));
    Ok(report)
}
