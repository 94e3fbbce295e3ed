//! 2-cocycles, gauge transformations and normalization.
//!
//! Convention: rephasing `x'(a) = e^{−iφ(a)} x(a)` changes the cocycle to
//! `α'(a,b) = α(a,b) + φ(ab) − φ(a) − φ(b)`. A coboundary is the image of the
//! zero cocycle under such a rephasing.
//!
//! Backings:
//! - zero, usable on every group;
//! - a table of phases indexed by finite-group element indices;
//! - on `Z^D`, a bilinear form `Σ θ_ij a_i b_j` plus the coboundary of a
//!   finitely supported phase (the "shift"), which is how rephasings of
//!   bilinear cocycles stay exact.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::groups::{Group, GroupElement};
use crate::phase::{dist_mod_2pi, reduce, PHASE_TOL};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{self, LATTICE_BOX, LATTICE_TRIPLES};
use crate::DEFAULT_SEED;

/// Tolerance for the normalization conditions on tabulated cocycles.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error("cocycle backing incompatible with group: {0}")]
    TypeMismatch(String),
    #[error("gauge phase domain does not match: {0}")]
    DomainMismatch(String),
    #[error("invalid cocycle data: {0}")]
    Invalid(String),
    #[error("not a cocycle: residual {residual:.3e} at {triple}")]
    NotACocycle { residual: f64, triple: String },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Backing {
    Zero,
    Table {
        order: usize,
        alpha: Vec<f64>,
    },
    Lattice {
        theta: Vec<Vec<f64>>,
        shift: BTreeMap<GroupElement, f64>,
    },
}

/// A phase-valued function `α(a,b)` in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    backing: Backing,
    normalized: bool,
}

/// A rephasing `φ: G → R`.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugePhase {
    /// Values indexed by finite-group element index.
    Table(Vec<f64>),
    /// `φ(a) = Σ q_ij a_i a_j + sparse(a)` on `Z^D`.
    Lattice {
        quadratic: Option<Vec<Vec<f64>>>,
        sparse: BTreeMap<GroupElement, f64>,
    },
}

fn check_finite_matrix(m: &[Vec<f64>], what: &str) -> Result<usize, CocycleError> {
    let n = m.len();
    if n == 0 {
        return Err(CocycleError::Invalid(format!("{what} is empty")));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(CocycleError::Invalid(format!(
                "{what} row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(CocycleError::Invalid(format!(
                "{what} row {i} is not finite"
            )));
        }
    }
    Ok(n)
}

fn quadratic_form(q: &[Vec<f64>], a: &[i64], b: &[i64]) -> f64 {
    q.iter()
        .zip(a)
        .map(|(row, &ai)| {
            let inner: f64 = row.iter().zip(b).map(|(&qij, &bj)| qij * bj as f64).sum();
            ai as f64 * inner
        })
        .sum()
}

impl Cocycle {
    pub fn zero() -> Self {
        Self {
            backing: Backing::Zero,
            normalized: true,
        }
    }

    /// Tabulated cocycle, `alpha[i][j] = α(element i, element j)`. Phases are
    /// stored reduced to (−π, π].
    pub fn table(alpha: Vec<Vec<f64>>) -> Result<Self, CocycleError> {
        let order = check_finite_matrix(&alpha, "cocycle table")?;
        Ok(Self {
            backing: Backing::Table {
                order,
                alpha: alpha.into_iter().flatten().map(reduce).collect(),
            },
            normalized: false,
        })
    }

    /// `α(a,b) = Σ θ_ij a_i b_j` on `Z^D`.
    pub fn bilinear(theta: Vec<Vec<f64>>) -> Result<Self, CocycleError> {
        check_finite_matrix(&theta, "bilinear form")?;
        Ok(Self {
            backing: Backing::Lattice {
                theta,
                shift: BTreeMap::new(),
            },
            normalized: false,
        })
    }

    /// Whether [`normalize`] produced this cocycle (or it is the zero cocycle).
    pub fn normalized_flag(&self) -> bool {
        self.normalized
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.backing {
            Backing::Zero => "zero",
            Backing::Table { .. } => "table",
            Backing::Lattice { .. } => "bilinear",
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.backing {
            Backing::Zero => true,
            Backing::Table { alpha, .. } => alpha.iter().all(|&x| x == 0.0),
            Backing::Lattice { theta, shift } => {
                theta.iter().flatten().all(|&x| x == 0.0) && shift.values().all(|&x| x == 0.0)
            }
        }
    }

    /// Bilinear part of a lattice cocycle.
    pub fn theta(&self) -> Option<&[Vec<f64>]> {
        match &self.backing {
            Backing::Lattice { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn check_compatible(&self, g: &Group) -> Result<(), CocycleError> {
        match (&self.backing, g.order()) {
            (Backing::Zero, _) => Ok(()),
            (Backing::Table { order, .. }, Some(n)) if *order == n => Ok(()),
            (Backing::Table { order, .. }, Some(n)) => Err(CocycleError::TypeMismatch(format!(
                "table of order {order} on a group of order {n}"
            ))),
            (Backing::Table { .. }, None) => Err(CocycleError::TypeMismatch(
                "tabulated cocycle on a lattice".to_string(),
            )),
            (Backing::Lattice { theta, shift }, None) => {
                if theta.len() != g.rank() {
                    return Err(CocycleError::TypeMismatch(format!(
                        "{0}x{0} bilinear form on {1}",
                        theta.len(),
                        g.describe()
                    )));
                }
                match shift.keys().find(|a| !g.contains(a)) {
                    Some(a) => Err(CocycleError::TypeMismatch(format!(
                        "gauge support {a} outside {}",
                        g.describe()
                    ))),
                    None => Ok(()),
                }
            }
            (Backing::Lattice { .. }, Some(_)) => Err(CocycleError::TypeMismatch(format!(
                "bilinear cocycle on finite group {}",
                g.describe()
            ))),
        }
    }

    /// `α(a,b)` reduced to (−π, π]. The cocycle must be compatible with `g`
    /// and both arguments must be elements of `g`.
    pub fn phase(&self, g: &Group, a: &GroupElement, b: &GroupElement) -> f64 {
        match &self.backing {
            Backing::Zero => 0.0,
            Backing::Table { order, alpha } => {
                let i = g.index_of(a).expect("element of the group");
                let j = g.index_of(b).expect("element of the group");
                alpha[i * order + j]
            }
            Backing::Lattice { theta, shift } => {
                let (x, y) = (a.coords().expect("vector"), b.coords().expect("vector"));
                let mut total = quadratic_form(theta, x, y);
                if !shift.is_empty() {
                    let at = |e: &GroupElement| shift.get(e).copied().unwrap_or(0.0);
                    total += at(&g.op(a, b)) - at(a) - at(b);
                }
                reduce(total)
            }
        }
    }

    /// Phase between finite-group elements given by index.
    pub fn phase_index(&self, i: usize, j: usize) -> f64 {
        match &self.backing {
            Backing::Zero => 0.0,
            Backing::Table { order, alpha } => alpha[i * order + j],
            Backing::Lattice { .. } => unreachable!("lattice cocycles have no index form"),
        }
    }

    /// Dense phase table of a cocycle on a finite group.
    pub fn tabulate(&self, g: &Group) -> Result<Vec<Vec<f64>>, CocycleError> {
        self.check_compatible(g)?;
        let n = g
            .order()
            .ok_or_else(|| CocycleError::Unsupported("tabulating on a lattice".into()))?;
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.phase_index(i, j)).collect())
            .collect())
    }
}

impl GaugePhase {
    /// Zero rephasing appropriate for `g`.
    pub fn identity(g: &Group) -> Self {
        match g.order() {
            Some(n) => GaugePhase::Table(vec![0.0; n]),
            None => GaugePhase::Lattice {
                quadratic: None,
                sparse: BTreeMap::new(),
            },
        }
    }

    /// Tabulated phase with `φ(e) = 0`.
    pub fn table(values: Vec<f64>) -> Result<Self, CocycleError> {
        match values.first() {
            None => Err(CocycleError::Invalid("empty gauge phase".into())),
            Some(&v) if v != 0.0 => Err(CocycleError::Invalid(format!(
                "gauge phase at the identity must be 0, got {v}"
            ))),
            _ if values.iter().any(|x| !x.is_finite()) => {
                Err(CocycleError::Invalid("gauge phase is not finite".into()))
            }
            _ => Ok(GaugePhase::Table(values)),
        }
    }

    /// Finitely supported phase on a lattice with `φ(e) = 0`.
    pub fn sparse(values: BTreeMap<GroupElement, f64>) -> Result<Self, CocycleError> {
        for (a, v) in &values {
            if !v.is_finite() {
                return Err(CocycleError::Invalid(format!(
                    "gauge phase at {a} is not finite"
                )));
            }
            if a.coords().is_some_and(|c| c.iter().all(|&x| x == 0)) && *v != 0.0 {
                return Err(CocycleError::Invalid(
                    "gauge phase at the identity must be 0".into(),
                ));
            }
        }
        Ok(GaugePhase::Lattice {
            quadratic: None,
            sparse: values,
        })
    }

    /// `φ(a) = Σ q_ij a_i a_j` on a lattice.
    pub fn quadratic(q: Vec<Vec<f64>>) -> Result<Self, CocycleError> {
        check_finite_matrix(&q, "quadratic gauge")?;
        Ok(GaugePhase::Lattice {
            quadratic: Some(q),
            sparse: BTreeMap::new(),
        })
    }

    pub fn check_compatible(&self, g: &Group) -> Result<(), CocycleError> {
        match (self, g.order()) {
            (GaugePhase::Table(v), Some(n)) if v.len() == n => Ok(()),
            (GaugePhase::Lattice { quadratic, sparse }, None) => {
                if quadratic.as_ref().is_some_and(|q| q.len() != g.rank()) {
                    return Err(CocycleError::DomainMismatch(format!(
                        "quadratic gauge of the wrong size for {}",
                        g.describe()
                    )));
                }
                match sparse.keys().find(|a| !g.contains(a)) {
                    Some(a) => Err(CocycleError::DomainMismatch(format!(
                        "{a} is not in {}",
                        g.describe()
                    ))),
                    None => Ok(()),
                }
            }
            _ => Err(CocycleError::DomainMismatch(format!(
                "gauge phase does not live on {}",
                g.describe()
            ))),
        }
    }

    pub fn eval(&self, g: &Group, a: &GroupElement) -> f64 {
        match self {
            GaugePhase::Table(v) => v[g.index_of(a).expect("element of the group")],
            GaugePhase::Lattice { quadratic, sparse } => {
                let q = quadratic.as_ref().map_or(0.0, |q| {
                    let x = a.coords().expect("vector");
                    quadratic_form(q, x, x)
                });
                q + sparse.get(a).copied().unwrap_or(0.0)
            }
        }
    }

    pub fn negate(&self) -> Self {
        match self {
            GaugePhase::Table(v) => GaugePhase::Table(v.iter().map(|x| -x).collect()),
            GaugePhase::Lattice { quadratic, sparse } => GaugePhase::Lattice {
                quadratic: quadratic
                    .as_ref()
                    .map(|q| q.iter().map(|r| r.iter().map(|x| -x).collect()).collect()),
                sparse: sparse.iter().map(|(a, v)| (a.clone(), -v)).collect(),
            },
        }
    }

    /// Largest `|φ(a)|` mod 2π over a finite group. For lattice phases, the
    /// largest coefficient of the quadratic form or sparse value.
    pub fn max_abs(&self) -> f64 {
        match self {
            GaugePhase::Table(v) => v.iter().map(|&x| dist_mod_2pi(x)).fold(0.0, f64::max),
            GaugePhase::Lattice { quadratic, sparse } => {
                // only the symmetric part of q contributes to aᵀqa
                let q = quadratic.as_ref().map_or(0.0, |q| {
                    (0..q.len())
                        .flat_map(|i| (0..q.len()).map(move |j| (i, j)))
                        .map(|(i, j)| ((q[i][j] + q[j][i]) / 2.0).abs())
                        .fold(0.0, f64::max)
                });
                sparse.values().map(|&x| dist_mod_2pi(x)).fold(q, f64::max)
            }
        }
    }
}

/// Checks `α(a,b) + α(ab,c) = α(b,c) + α(a,bc)` mod 2π: exhaustively on
/// finite groups, on seeded triples from a coordinate box on lattices.
pub fn validate_cocycle(g: &Group, alpha: &Cocycle) -> Result<VerificationReport, CocycleError> {
    validate_cocycle_seeded(g, alpha, DEFAULT_SEED)
}

pub fn validate_cocycle_seeded(
    g: &Group,
    alpha: &Cocycle,
    seed: u64,
) -> Result<VerificationReport, CocycleError> {
    alpha.check_compatible(g)?;
    let residual = |a: &GroupElement, b: &GroupElement, c: &GroupElement| {
        let ab = g.op(a, b);
        let bc = g.op(b, c);
        dist_mod_2pi(
            alpha.phase(g, a, b) + alpha.phase(g, &ab, c)
                - alpha.phase(g, b, c)
                - alpha.phase(g, a, &bc),
        )
    };
    let mut worst = (0.0_f64, String::new());
    let label = |a: &GroupElement, b: &GroupElement, c: &GroupElement| {
        format!("({}, {}, {})", g.label(a), g.label(b), g.label(c))
    };
    let detail;
    match g.order() {
        Some(n) => {
            let t = alpha.tabulate(g)?;
            for a in 0..n {
                for b in 0..n {
                    let ab = g.op_index(a, b);
                    for c in 0..n {
                        let bc = g.op_index(b, c);
                        let r = dist_mod_2pi(t[a][b] + t[ab][c] - t[b][c] - t[a][bc]);
                        if r > worst.0 || r.is_nan() {
                            worst = (r, label(&g.element(a), &g.element(b), &g.element(c)));
                        }
                    }
                }
            }
            detail = format!("exhaustive over {} triples", n * n * n);
        }
        None => {
            let mut rng = sampling::rng(seed);
            for _ in 0..LATTICE_TRIPLES {
                let a = sampling::element(g, &mut rng, LATTICE_BOX);
                let b = sampling::element(g, &mut rng, LATTICE_BOX);
                let c = sampling::element(g, &mut rng, LATTICE_BOX);
                let r = residual(&a, &b, &c);
                if r > worst.0 || r.is_nan() {
                    worst = (r, label(&a, &b, &c));
                }
            }
            detail = format!(
                "{LATTICE_TRIPLES} triples in [-{LATTICE_BOX},{LATTICE_BOX}]^{} seed {seed:#x}",
                g.rank()
            );
        }
    }
    let mut check = CheckRecord::new("cocycle_condition", worst.0, PHASE_TOL);
    check = if check.pass {
        check.with_detail(detail)
    } else {
        check.with_detail(format!("{detail}; worst triple {}", worst.1))
    };
    let mut report = VerificationReport::new("cocycle");
    report.push(check);
    Ok(report)
}

fn require_valid(g: &Group, alpha: &Cocycle) -> Result<(), CocycleError> {
    let report = validate_cocycle(g, alpha)?;
    let check = &report.checks[0];
    if check.pass {
        Ok(())
    } else {
        Err(CocycleError::NotACocycle {
            residual: check.max_residual,
            triple: check.detail.clone().unwrap_or_default(),
        })
    }
}

/// The trivial cocycle `α(a,b) = φ(ab) − φ(a) − φ(b)`.
pub fn coboundary(g: &Group, phi: &GaugePhase) -> Result<Cocycle, CocycleError> {
    let mut c = gauge_transform(g, &Cocycle::zero(), phi)?;
    c.normalized = false;
    Ok(c)
}

/// `α'(a,b) = α(a,b) + φ(ab) − φ(a) − φ(b)`, reduced mod 2π.
pub fn gauge_transform(
    g: &Group,
    alpha: &Cocycle,
    phi: &GaugePhase,
) -> Result<Cocycle, CocycleError> {
    alpha.check_compatible(g)?;
    phi.check_compatible(g)?;
    match (g.order(), phi) {
        (Some(n), GaugePhase::Table(p)) => {
            let mut table = alpha.tabulate(g)?;
            for (i, row) in table.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x += p[g.op_index(i, j)] - p[i] - p[j];
                }
            }
            debug_assert_eq!(table.len(), n);
            Cocycle::table(table)
        }
        (None, GaugePhase::Lattice { quadratic, sparse }) => {
            let d = g.rank();
            let (mut theta, mut shift) = match &alpha.backing {
                Backing::Lattice { theta, shift } => (theta.clone(), shift.clone()),
                _ => (vec![vec![0.0; d]; d], BTreeMap::new()),
            };
            if let Some(q) = quadratic {
                for i in 0..d {
                    for j in 0..d {
                        theta[i][j] += q[i][j] + q[j][i];
                    }
                }
            }
            for (a, v) in sparse {
                *shift.entry(a.clone()).or_insert(0.0) += v;
            }
            shift.retain(|_, v| *v != 0.0);
            Ok(Cocycle {
                backing: Backing::Lattice { theta, shift },
                normalized: false,
            })
        }
        _ => unreachable!("compatibility checked above"),
    }
}

/// Numerical normalization test: `α(e,a) = α(a,e) = α(a,a⁻¹) = 0`.
///
/// Exhaustive on finite groups. On lattices it is decided from the backing:
/// the bilinear part must be antisymmetric and the shift odd.
pub fn is_normalized(g: &Group, alpha: &Cocycle) -> bool {
    if alpha.check_compatible(g).is_err() {
        return false;
    }
    match &alpha.backing {
        Backing::Zero => true,
        Backing::Table { .. } => normalization_residual(g, alpha) < NORMALIZATION_TOL,
        Backing::Lattice { theta, shift } => {
            let d = theta.len();
            let antisymmetric = (0..d)
                .all(|i| (0..d).all(|j| (theta[i][j] + theta[j][i]).abs() < NORMALIZATION_TOL));
            let odd = shift.iter().all(|(a, v)| {
                let minus = shift.get(&g.inverse(a)).copied().unwrap_or(0.0);
                dist_mod_2pi(v + minus) < NORMALIZATION_TOL
            });
            antisymmetric && odd
        }
    }
}

fn normalization_residual(g: &Group, alpha: &Cocycle) -> f64 {
    let n = g.order().expect("finite");
    (0..n)
        .map(|a| {
            let inv = g.inverse_index(a);
            dist_mod_2pi(alpha.phase_index(0, a))
                .max(dist_mod_2pi(alpha.phase_index(a, 0)))
                .max(dist_mod_2pi(alpha.phase_index(a, inv)))
        })
        .fold(0.0, f64::max)
}

/// Rephases `α` so that `α(e,a) = α(a,e) = α(a,a⁻¹) = 0`.
///
/// The gauge is `φ(a) = α(a,a⁻¹)/2`, computed once per inverse pair so both
/// members use the same branch of the phase; if `α(e,e) ≠ 0` it is first
/// removed by `φ(e) = α(e,e)`.
pub fn normalize(g: &Group, alpha: &Cocycle) -> Result<(Cocycle, GaugePhase), CocycleError> {
    require_valid(g, alpha)?;
    let phi = match (&alpha.backing, g.order()) {
        (Backing::Zero, _) => GaugePhase::identity(g),
        (_, Some(n)) => {
            let t = alpha.tabulate(g)?;
            let ee = t[0][0];
            let mut phi = vec![0.0; n];
            phi[0] = ee;
            for a in 1..n {
                let inv = g.inverse_index(a);
                if inv < a {
                    phi[a] = phi[inv];
                } else {
                    phi[a] = (t[a][inv] + ee) / 2.0;
                }
            }
            GaugePhase::Table(phi)
        }
        (Backing::Lattice { theta, shift }, None) => {
            let quadratic = theta
                .iter()
                .map(|row| row.iter().map(|x| -x / 2.0).collect())
                .collect();
            let mut sparse = BTreeMap::new();
            for a in shift.keys() {
                for b in [a.clone(), g.inverse(a)] {
                    let at = |e: &GroupElement| shift.get(e).copied().unwrap_or(0.0);
                    let v = -(at(&b) + at(&g.inverse(&b))) / 2.0;
                    if v != 0.0 {
                        sparse.insert(b, v);
                    }
                }
            }
            GaugePhase::Lattice {
                quadratic: Some(quadratic),
                sparse,
            }
        }
        (Backing::Table { .. }, None) => unreachable!("compatibility checked"),
    };
    let mut normalized = match alpha.backing {
        Backing::Zero => Cocycle::zero(),
        _ => gauge_transform(g, alpha, &phi)?,
    };
    normalized.normalized = true;
    Ok((normalized, phi))
}

/// The identities every normalized cocycle satisfies, checked mod 2π:
/// normalization itself, `α(b⁻¹,b) = α(b,b⁻¹)`, `α(a,b) + α(ab,b⁻¹) = 0`,
/// `α(a⁻¹,b⁻¹) = −α(b,a)` and `α(ab,b⁻¹) = α(b⁻¹,a⁻¹)`.
pub fn check_identities(g: &Group, alpha: &Cocycle) -> Result<VerificationReport, CocycleError> {
    check_identities_seeded(g, alpha, DEFAULT_SEED)
}

pub fn check_identities_seeded(
    g: &Group,
    alpha: &Cocycle,
    seed: u64,
) -> Result<VerificationReport, CocycleError> {
    alpha.check_compatible(g)?;
    let pairs: Vec<(GroupElement, GroupElement)> = match g.order() {
        Some(n) => (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (g.element(a), g.element(b)))
            .collect(),
        None => {
            let mut rng = sampling::rng(seed);
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
    let e = g.identity();
    let p = |a: &GroupElement, b: &GroupElement| alpha.phase(g, a, b);
    let mut worst = [0.0_f64; 5];
    for (a, b) in &pairs {
        let (ai, bi) = (g.inverse(a), g.inverse(b));
        let ab = g.op(a, b);
        let r = [
            dist_mod_2pi(p(&e, a))
                .max(dist_mod_2pi(p(a, &e)))
                .max(dist_mod_2pi(p(a, &ai))),
            dist_mod_2pi(p(&bi, b) - p(b, &bi)),
            dist_mod_2pi(p(a, b) + p(&ab, &bi)),
            dist_mod_2pi(p(&ai, &bi) + p(b, a)),
            dist_mod_2pi(p(&ab, &bi) - p(&bi, &ai)),
        ];
        for (w, x) in worst.iter_mut().zip(r) {
            *w = w.max(x);
        }
    }
    let names = [
        "normalization",
        "inverse_symmetry",
        "right_inverse_cancellation",
        "inverse_pair_antisymmetry",
        "product_inverse_exchange",
    ];
    let mut report = VerificationReport::new("cocycle_identities");
    for (name, w) in names.iter().zip(worst) {
        report.push(CheckRecord::new(*name, w, PHASE_TOL));
    }
    Ok(report)
}

/// `β(a,b) = α(a,b) − α(b,a)` mod 2π on an abelian group. Gauge invariant.
pub fn commutator_pairing(
    g: &Group,
    alpha: &Cocycle,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<f64, CocycleError> {
    if !g.is_abelian() {
        return Err(CocycleError::Unsupported(
            "commutator pairing needs an abelian group".into(),
        ));
    }
    alpha.check_compatible(g)?;
    for x in [a, b] {
        if !g.contains(x) {
            return Err(CocycleError::DomainMismatch(format!(
                "{x} is not in {}",
                g.describe()
            )));
        }
    }
    Ok(reduce(alpha.phase(g, a, b) - alpha.phase(g, b, a)))
}

/// Whether the commutator pairing vanishes identically on a finite abelian
/// group, i.e. whether `α` is a coboundary.
pub fn is_trivial_abelian(g: &Group, alpha: &Cocycle) -> Result<bool, CocycleError> {
    let n = match g.order() {
        Some(n) if g.is_abelian() => n,
        _ => {
            return Err(CocycleError::Unsupported(format!(
                "triviality test needs a finite abelian group, got {}",
                g.describe()
            )))
        }
    };
    alpha.check_compatible(g)?;
    Ok((0..n).all(|a| {
        (0..a).all(|b| dist_mod_2pi(alpha.phase_index(a, b) - alpha.phase_index(b, a)) < PHASE_TOL)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_cyclic_power, make_lattice, make_symmetric};
    use std::f64::consts::{FRAC_PI_3, PI};

    fn v(c: &[i64]) -> GroupElement {
        GroupElement::Vector(c.to_vec())
    }

    #[test]
    fn zero_cocycle_validates_everywhere() {
        for g in [
            make_cyclic_power(3, 2).unwrap(),
            make_symmetric(3).unwrap(),
            make_lattice(2).unwrap(),
        ] {
            let r = validate_cocycle(&g, &Cocycle::zero()).unwrap();
            assert!(r.pass);
            assert_eq!(r.checks[0].max_residual, 0.0);
        }
    }

    #[test]
    fn bilinear_upper_triangular_validates_on_z2() {
        let g = make_lattice(2).unwrap();
        let alpha = Cocycle::bilinear(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let r = validate_cocycle(&g, &alpha).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn violating_table_fails_with_named_triple() {
        let g = make_cyclic_power(2, 1).unwrap();
        // α(e,1) = 0.1 while α(e,e) = 0 breaks (e,e,1)
        let alpha = Cocycle::table(vec![vec![0.0, 0.1], vec![0.0, 0.3]]).unwrap();
        let r = validate_cocycle(&g, &alpha).unwrap();
        assert!(!r.pass);
        assert!(r.checks[0]
            .detail
            .as_ref()
            .unwrap()
            .contains("worst triple"));
    }

    #[test]
    fn bilinear_on_finite_group_is_a_type_mismatch() {
        let g = make_cyclic_power(2, 2).unwrap();
        let alpha = Cocycle::bilinear(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            validate_cocycle(&g, &alpha),
            Err(CocycleError::TypeMismatch(_))
        ));
        let table = Cocycle::table(vec![vec![0.0]]).unwrap();
        assert!(validate_cocycle(&make_lattice(1).unwrap(), &table).is_err());
    }

    #[test]
    fn coboundary_examples() {
        let g = make_cyclic_power(2, 1).unwrap();
        let zero = coboundary(&g, &GaugePhase::identity(&g)).unwrap();
        assert!(zero.is_zero());

        let phi = GaugePhase::table(vec![0.0, FRAC_PI_3]).unwrap();
        let c = coboundary(&g, &phi).unwrap();
        let one = v(&[1]);
        assert!((c.phase(&g, &one, &one) + 2.0 * FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn gauge_phase_rejects_nonzero_identity() {
        assert!(GaugePhase::table(vec![0.5, 0.0]).is_err());
        let mut m = BTreeMap::new();
        m.insert(v(&[0, 0]), 1.0);
        assert!(GaugePhase::sparse(m).is_err());
    }

    #[test]
    fn inverse_gauge_restores_zero() {
        let g = make_cyclic_power(3, 1).unwrap();
        let phi = GaugePhase::table(vec![0.0, 0.7, -1.9]).unwrap();
        let c = coboundary(&g, &phi).unwrap();
        let back = gauge_transform(&g, &c, &phi.negate()).unwrap();
        for row in back.tabulate(&g).unwrap() {
            for x in row {
                assert!(dist_mod_2pi(x) < 1e-14);
            }
        }
    }

    #[test]
    fn normalize_z2_half_phase() {
        let g = make_cyclic_power(2, 1).unwrap();
        let c = 1.1;
        let alpha = Cocycle::table(vec![vec![0.0, 0.0], vec![0.0, c]]).unwrap();
        assert!(validate_cocycle(&g, &alpha).unwrap().pass);
        let (norm, phi) = normalize(&g, &alpha).unwrap();
        assert!(norm.normalized_flag());
        assert!(norm.phase_index(1, 1).abs() < 1e-15);
        match phi {
            GaugePhase::Table(p) => assert!((p[1] - c / 2.0).abs() < 1e-15),
            _ => panic!("finite gauge expected"),
        }
    }

    #[test]
    fn normalize_removes_identity_phase() {
        // α ≡ c is a valid cocycle with α(e,e) = c
        let g = make_cyclic_power(3, 1).unwrap();
        let alpha = Cocycle::table(vec![vec![0.4; 3]; 3]).unwrap();
        assert!(validate_cocycle(&g, &alpha).unwrap().pass);
        let (norm, _) = normalize(&g, &alpha).unwrap();
        assert!(is_normalized(&g, &norm));
    }

    #[test]
    fn normalize_rejects_non_cocycles() {
        let g = make_cyclic_power(2, 1).unwrap();
        let alpha = Cocycle::table(vec![vec![0.0, 0.1], vec![0.0, 0.3]]).unwrap();
        assert!(matches!(
            normalize(&g, &alpha),
            Err(CocycleError::NotACocycle { .. })
        ));
    }

    #[test]
    fn normalize_bilinear_uses_half_diagonal() {
        let g = make_lattice(2).unwrap();
        let theta = vec![vec![0.3, 1.0], vec![-0.2, 0.7]];
        let alpha = Cocycle::bilinear(theta.clone()).unwrap();
        let (norm, phi) = normalize(&g, &alpha).unwrap();
        assert!(is_normalized(&g, &norm));
        let mut rng = sampling::rng(7);
        for _ in 0..200 {
            let a = sampling::element(&g, &mut rng, 6);
            let x = a.coords().unwrap();
            let diag: f64 = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| theta[i][j] * (x[i] * x[j]) as f64)
                .sum();
            // α(a,−a) = −Σ θ_ij a_i a_j, unreduced
            assert!((phi.eval(&g, &a) + diag / 2.0).abs() < 1e-12);
            assert!(dist_mod_2pi(norm.phase(&g, &a, &g.inverse(&a))) < 1e-10);
        }
        let (again, phi2) = normalize(&g, &norm).unwrap();
        let (t1, t2) = (again.theta().unwrap(), norm.theta().unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert!((t1[i][j] - t2[i][j]).abs() < 1e-15);
            }
        }
        assert!(phi2.max_abs() < 1e-15);
    }

    #[test]
    fn normalize_lattice_with_shift_is_exact() {
        let g = make_lattice(1).unwrap();
        let mut m = BTreeMap::new();
        m.insert(v(&[2]), 0.9);
        m.insert(v(&[-1]), -0.4);
        let c = gauge_transform(
            &g,
            &Cocycle::bilinear(vec![vec![0.25]]).unwrap(),
            &GaugePhase::sparse(m).unwrap(),
        )
        .unwrap();
        assert!(!is_normalized(&g, &c));
        let (norm, _) = normalize(&g, &c).unwrap();
        assert!(is_normalized(&g, &norm));
        assert!(check_identities(&g, &norm).unwrap().pass);
    }

    #[test]
    fn check_identities_examples() {
        let s3 = make_symmetric(3).unwrap();
        assert!(check_identities(&s3, &Cocycle::zero()).unwrap().pass);

        let z2 = make_lattice(2).unwrap();
        let anti = Cocycle::bilinear(vec![vec![0.0, 0.8], vec![-0.8, 0.0]]).unwrap();
        assert!(check_identities(&z2, &anti).unwrap().pass);

        let sym = Cocycle::bilinear(vec![vec![0.0, 0.8], vec![0.8, 0.0]]).unwrap();
        assert!(!check_identities(&z2, &sym).unwrap().pass);
    }

    #[test]
    fn commutator_pairing_of_bilinear_form() {
        let g = make_lattice(2).unwrap();
        let theta = vec![vec![0.1, 0.5], vec![-0.3, 0.2]];
        let alpha = Cocycle::bilinear(theta.clone()).unwrap();
        let a = v(&[1, 2]);
        let b = v(&[-1, 1]);
        let expected: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| {
                (theta[i][j] - theta[j][i])
                    * (a.coords().unwrap()[i] * b.coords().unwrap()[j]) as f64
            })
            .sum();
        let beta = commutator_pairing(&g, &alpha, &a, &b).unwrap();
        assert!(dist_mod_2pi(beta - expected) < 1e-14);
    }

    #[test]
    fn commutator_pairing_needs_abelian_group() {
        let s3 = make_symmetric(3).unwrap();
        assert!(matches!(
            commutator_pairing(
                &s3,
                &Cocycle::zero(),
                &GroupElement::Index(1),
                &GroupElement::Index(2)
            ),
            Err(CocycleError::Unsupported(_))
        ));
        assert!(is_trivial_abelian(&s3, &Cocycle::zero()).is_err());
        assert!(is_trivial_abelian(&make_lattice(2).unwrap(), &Cocycle::zero()).is_err());
    }

    #[test]
    fn coboundaries_are_trivial() {
        let g = make_cyclic_power(4, 1).unwrap();
        let phi = GaugePhase::table(vec![0.0, 0.3, 2.0, -1.0]).unwrap();
        let c = coboundary(&g, &phi).unwrap();
        assert!(is_trivial_abelian(&g, &c).unwrap());
        assert!(is_trivial_abelian(&g, &Cocycle::zero()).unwrap());
        let z3 = make_cyclic_power(3, 1).unwrap();
        let c3 = coboundary(&z3, &GaugePhase::table(vec![0.0, 1.0, PI]).unwrap()).unwrap();
        for a in z3.elements() {
            for b in z3.elements() {
                assert!(commutator_pairing(&z3, &c3, &a, &b).unwrap().abs() < 1e-14);
            }
        }
    }
}
