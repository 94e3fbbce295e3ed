//! Derivations and automorphisms of abelian projective group algebras.
//!
//! A derivation multiplies each generator by an additive label,
//! `D x(a) = σ(a) x(a)` with `σ(ab) = σ(a) + σ(b)`; on `Z^D` the coordinate
//! derivations use `σ(m) = −i m_i`. Automorphisms rescale generators by a
//! character, `S(φ) x(m) = e^{−iφ·m} x(m)`.
//!
//! `(Z_n)^D` has no nonzero additive complex labels, so only automorphisms
//! with `φ ∈ (2π/n) Z^D` are offered there.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, ALGEBRA_TOL};
use crate::groups::{Group, GroupElement};
use crate::integration::{ati_integral, embed, invert};
use crate::phase::cis;
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{self, LATTICE_BOX, LATTICE_TRIPLES};
use crate::{C64, DEFAULT_SEED};

/// Relative tolerance for additivity of user-supplied labels.
pub const ADDITIVITY_TOL: f64 = 1e-12;

/// Tolerance for testing that a phase is a multiple of 2π/n.
pub const QUANTIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalculusError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("derivation or automorphism does not act on this algebra: {0}")]
    Mismatch(String),
    #[error("label map is not additive: residual {residual:.3e} at {pair}")]
    NotAdditive { residual: f64, pair: String },
}

type Label = Arc<dyn Fn(&GroupElement) -> C64 + Send + Sync>;

#[derive(Clone)]
pub enum Derivation {
    /// `x(m) ↦ −i m_index x(m)` on `Z^D`; `index` is 0-based.
    Coordinate { index: usize, rank: usize },
    /// `x(a) ↦ σ(a) x(a)` for a validated additive `σ` on `group`.
    Sigma { group: Group, sigma: Label },
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Coordinate { index, rank } => f
                .debug_struct("Coordinate")
                .field("index", index)
                .field("rank", rank)
                .finish(),
            Derivation::Sigma { group, .. } => f
                .debug_struct("Sigma")
                .field("group", &group.describe())
                .finish_non_exhaustive(),
        }
    }
}

impl Derivation {
    /// The derivation along coordinate `index` of `Z^D`.
    pub fn coordinate(g: &Group, index: usize) -> Result<Self, CalculusError> {
        if !g.is_lattice() {
            return Err(CalculusError::Mismatch(format!(
                "coordinate derivations exist on Z^D only, got {}",
                g.describe()
            )));
        }
        if index >= g.rank() {
            return Err(CalculusError::InvalidParameter(format!(
                "coordinate {index} out of range for {}",
                g.describe()
            )));
        }
        Ok(Derivation::Coordinate {
            index,
            rank: g.rank(),
        })
    }

    /// A label derivation. Additivity is checked on every pair of a finite
    /// group and on seeded pairs from a box on lattices.
    pub fn sigma(
        g: &Group,
        sigma: impl Fn(&GroupElement) -> C64 + Send + Sync + 'static,
    ) -> Result<Self, CalculusError> {
        let pairs: Vec<(GroupElement, GroupElement)> = match g.order() {
            Some(n) => (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| (g.element(a), g.element(b)))
                .collect(),
            None => {
                let mut rng = sampling::rng(DEFAULT_SEED);
                (0..LATTICE_TRIPLES)
                    .map(|_| {
                        (
                            sampling::element(g, &mut rng, LATTICE_BOX),
                            sampling::element(g, &mut rng, LATTICE_BOX),
                        )
                    })
                    .collect()
            }
        };
        let e = sigma(&g.identity());
        if e.norm() >= ADDITIVITY_TOL {
            return Err(CalculusError::NotAdditive {
                residual: e.norm(),
                pair: format!("({0}, {0})", g.label(&g.identity())),
            });
        }
        for (a, b) in &pairs {
            let (sa, sb) = (sigma(a), sigma(b));
            let r = (sigma(&g.op(a, b)) - sa - sb).norm();
            if r.is_nan() || r >= ADDITIVITY_TOL * (1.0 + sa.norm() + sb.norm()) {
                return Err(CalculusError::NotAdditive {
                    residual: r,
                    pair: format!("({}, {})", g.label(a), g.label(b)),
                });
            }
        }
        Ok(Derivation::Sigma {
            group: g.clone(),
            sigma: Arc::new(sigma),
        })
    }

    fn check_acts_on(&self, g: &Group) -> Result<(), CalculusError> {
        let ok = match self {
            Derivation::Coordinate { rank, .. } => g.is_lattice() && g.rank() == *rank,
            Derivation::Sigma { group, .. } => group == g,
        };
        if ok {
            Ok(())
        } else {
            Err(CalculusError::Mismatch(g.describe()))
        }
    }

    /// `σ(a)`.
    pub fn label(&self, a: &GroupElement) -> C64 {
        match self {
            Derivation::Coordinate { index, .. } => {
                C64::new(0.0, -(a.coords().expect("vector")[*index] as f64))
            }
            Derivation::Sigma { sigma, .. } => sigma(a),
        }
    }
}

/// `D(Σ f(a) x(a)) = Σ σ(a) f(a) x(a)`.
pub fn derive(d: &Derivation, u: &AlgebraElement) -> Result<AlgebraElement, CalculusError> {
    let algebra = u.algebra();
    d.check_acts_on(algebra.group())?;
    Ok(AlgebraElement::from_terms(
        algebra,
        u.terms().map(|(a, c)| (a.clone(), c * d.label(a))),
    )?)
}

/// `D(uv) = (Du)v + u(Dv)` on `trials` seeded random pairs.
pub fn check_leibniz(
    d: &Derivation,
    algebra: &Arc<Algebra>,
    seed: u64,
    trials: usize,
) -> Result<VerificationReport, CalculusError> {
    d.check_acts_on(algebra.group())?;
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let u = sampling::algebra_element(algebra, &mut rng);
        let v = sampling::algebra_element(algebra, &mut rng);
        let lhs = derive(d, &u.multiply(&v)?)?;
        let rhs = derive(d, &u)?
            .multiply(&v)?
            .add(&u.multiply(&derive(d, &v)?)?)?;
        worst = worst.max(lhs.distance(&rhs)?);
    }
    let mut report = VerificationReport::new("leibniz");
    report.push(
        CheckRecord::new("d_uv_equals_du_v_plus_u_dv", worst, ALGEBRA_TOL)
            .with_detail(format!("{trials} pairs, seed {seed:#x}")),
    );
    Ok(report)
}

/// `∫ D u`, which is `σ(e) u(e) = 0`.
pub fn integral_of_derivation(d: &Derivation, u: &AlgebraElement) -> Result<C64, CalculusError> {
    Ok(ati_integral(&derive(d, u)?))
}

/// `S(φ) x(m) = e^{−iφ·m} x(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    phases: Vec<f64>,
    modulus: Option<u64>,
}

impl Automorphism {
    /// Phases `φ` for `Z^D` or `(Z_n)^D`; on `(Z_n)^D` each `φ_i` must be a
    /// multiple of `2π/n`.
    pub fn new(g: &Group, phases: Vec<f64>) -> Result<Self, CalculusError> {
        if g.rank() == 0 {
            return Err(CalculusError::Mismatch(format!(
                "automorphisms need coordinates, got {}",
                g.describe()
            )));
        }
        if phases.len() != g.rank() {
            return Err(CalculusError::InvalidParameter(format!(
                "{} phases for {}",
                phases.len(),
                g.describe()
            )));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(CalculusError::InvalidParameter(
                "phase is not finite".into(),
            ));
        }
        if let Some(n) = g.modulus() {
            let step = std::f64::consts::TAU / n as f64;
            if let Some(p) = phases
                .iter()
                .find(|&&p| ((p / step) - (p / step).round()).abs() > QUANTIZATION_TOL)
            {
                return Err(CalculusError::InvalidParameter(format!(
                    "phase {p} is not a multiple of 2π/{n}"
                )));
            }
        }
        Ok(Self {
            phases,
            modulus: g.modulus(),
        })
    }

    /// `φ = 2πk/n` on `(Z_n)^D`.
    pub fn quantized(g: &Group, k: &[i64]) -> Result<Self, CalculusError> {
        let n = g.modulus().ok_or_else(|| {
            CalculusError::Mismatch(format!(
                "quantized phases need (Z_n)^D, got {}",
                g.describe()
            ))
        })?;
        Self::new(
            g,
            k.iter()
                .map(|&k| std::f64::consts::TAU * k as f64 / n as f64)
                .collect(),
        )
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `S(φ₁)∘S(φ₂) = S(φ₁+φ₂)`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| a + b)
                .collect(),
            modulus: self.modulus,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            phases: self.phases.iter().map(|p| -p).collect(),
            modulus: self.modulus,
        }
    }

    /// `e^{−iφ·m}`.
    pub fn factor(&self, m: &GroupElement) -> C64 {
        let m = m.coords().expect("vector");
        cis(-self
            .phases
            .iter()
            .zip(m)
            .map(|(p, &x)| p * x as f64)
            .sum::<f64>())
    }

    fn check_acts_on(&self, g: &Group) -> Result<(), CalculusError> {
        if g.rank() == self.phases.len() && g.modulus() == self.modulus && g.rank() > 0 {
            Ok(())
        } else {
            Err(CalculusError::Mismatch(g.describe()))
        }
    }
}

pub fn apply_automorphism(
    s: &Automorphism,
    u: &AlgebraElement,
) -> Result<AlgebraElement, CalculusError> {
    s.check_acts_on(u.algebra().group())?;
    Ok(AlgebraElement::from_terms(
        u.algebra(),
        u.terms().map(|(m, c)| (m.clone(), c * s.factor(m))),
    )?)
}

/// Checks on `trials` seeded random elements that `S` preserves the
/// integral, is multiplicative, and transports coefficients as
/// `f(m) ↦ e^{−iφ·m} f(m)`.
pub fn measure_invariance_check(
    s: &Automorphism,
    algebra: &Arc<Algebra>,
    seed: u64,
    trials: usize,
) -> Result<VerificationReport, CalculusError> {
    s.check_acts_on(algebra.group())?;
    let mut rng = sampling::rng(seed);
    let (mut integral, mut multiplicative, mut transport) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..trials {
        let f = sampling::function(algebra.group(), &mut rng);
        let u = embed(algebra, &f)?;
        let v = sampling::algebra_element(algebra, &mut rng);
        let su = apply_automorphism(s, &u)?;
        integral = integral.max((ati_integral(&su) - ati_integral(&u)).norm());
        let lhs = apply_automorphism(s, &u.multiply(&v)?)?;
        let rhs = su.multiply(&apply_automorphism(s, &v)?)?;
        multiplicative = multiplicative.max(lhs.distance(&rhs)?);
        let recovered = if algebra.is_normalized() {
            invert(&su)?
        } else {
            crate::integration::GroupFunction::from_pairs(su.terms().map(|(a, c)| (a.clone(), *c)))
        };
        for (m, fm) in f.iter() {
            transport = transport.max((recovered.get(m) - s.factor(m) * fm).norm());
        }
    }
    let mut report = VerificationReport::new("automorphism");
    report.push(CheckRecord::new(
        "integral_invariant",
        integral,
        ALGEBRA_TOL,
    ));
    report.push(CheckRecord::new(
        "multiplicative",
        multiplicative,
        ALGEBRA_TOL,
    ));
    report.push(CheckRecord::new("phase_transport", transport, ALGEBRA_TOL));
    Ok(report)
}

/// `U_i = x(e_i)` on `Z^D` or `(Z_n)^D`.
pub fn lattice_generator(
    algebra: &Arc<Algebra>,
    index: usize,
) -> Result<AlgebraElement, CalculusError> {
    let g = algebra.group();
    if index >= g.rank() {
        return Err(CalculusError::InvalidParameter(format!(
            "generator {index} out of range for {}",
            g.describe()
        )));
    }
    let mut coords = vec![0; g.rank()];
    coords[index] = 1;
    Ok(AlgebraElement::generator(
        algebra,
        &GroupElement::Vector(coords),
    )?)
}

/// `U_i U_k U_i⁻¹ U_k⁻¹`, with inverses taken in the algebra as
/// `x(a)⁻¹ = e^{−iα(a,a⁻¹)} x(a⁻¹)`.
pub fn generator_commutator(
    algebra: &Arc<Algebra>,
    i: usize,
    k: usize,
) -> Result<AlgebraElement, CalculusError> {
    let g = algebra.group();
    let ui = lattice_generator(algebra, i)?;
    let uk = lattice_generator(algebra, k)?;
    let inv = |u: &AlgebraElement| -> Result<AlgebraElement, CalculusError> {
        let (a, _) = u.terms().next().expect("generator");
        let ainv = g.inverse(a);
        Ok(AlgebraElement::generator(algebra, &ainv)?.scale(cis(-algebra.phase(a, &ainv))))
    };
    Ok(ui
        .multiply(&uk)?
        .multiply(&inv(&ui)?)?
        .multiply(&inv(&uk)?)?)
}
