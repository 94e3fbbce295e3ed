use std::path::{Path, PathBuf};
use std::sync::Arc;

use pga_core::algebra::{check_self_conjugacy, ALGEBRA_TOL};
use pga_core::clockshift::{consistency_check, ClockShift};
use pga_core::cocycles::{check_identities_seeded, normalize, validate_cocycle_seeded};
use pga_core::harmonic::{
    deformed_convolution, deformed_convolution_theorem_residual, fourier, invert_vector_finite,
    plancherel_sides, MatrixRep, Representation, SpectralData, Transform,
};
use pga_core::integration::{completeness_check, invert};
use pga_core::{
    sampling, Algebra, CheckRecord, Cocycle, Group, GroupFunction, GroupKind, VerificationReport,
    C64,
};
use serde_json::{json, Value};

use crate::input::{read_function, read_json, CocycleDef, GroupDef};
use crate::output::{self, emit};
use crate::{CliError, Options, RepKind};

/// Random functions and pairs drawn by the sampled checks of `verify`.
pub const VERIFY_SAMPLES: usize = 20;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Input(format!("--{flag} is required")))
}

struct Setup {
    group: Group,
    cocycle: Cocycle,
    clockshift: Option<usize>,
}

fn setup(opts: &Options) -> Result<Setup, CliError> {
    let group = read_json::<GroupDef>(required(&opts.group, "group")?)?.build()?;
    let def = match &opts.cocycle {
        Some(p) => read_json::<CocycleDef>(p)?,
        None => CocycleDef::Zero,
    };
    let clockshift = match (def.is_clockshift(), group.kind()) {
        (true, GroupKind::CyclicPower { n, .. }) => Some(n as usize),
        _ => None,
    };
    let cocycle = def.build(&group)?;
    Ok(Setup {
        group,
        cocycle,
        clockshift,
    })
}

fn finish(report: VerificationReport, tol: Option<f64>) -> VerificationReport {
    match tol {
        Some(t) => report.with_tolerance(t),
        None => report,
    }
}

pub fn verify(opts: &Options) -> Result<bool, CliError> {
    let Setup {
        group: g,
        cocycle: alpha,
        clockshift,
    } = setup(opts)?;
    let mut report = VerificationReport::new("verify");
    report.absorb(validate_cocycle_seeded(&g, &alpha, opts.seed).map_err(input)?);
    if !report.pass {
        let report = finish(report, opts.tol);
        emit(&report, opts.out.as_deref())?;
        return Ok(report.pass);
    }
    let (normal, _) = normalize(&g, &alpha).map_err(input)?;
    report.absorb(check_identities_seeded(&g, &normal, opts.seed).map_err(input)?);
    let alg = Algebra::new(g.clone(), normal).map_err(input)?;
    if g.is_finite() {
        report.absorb(check_self_conjugacy(&alg).map_err(input)?);
        report.absorb(completeness_check(&alg).map_err(input)?);
    }

    let mut rng = sampling::rng(opts.seed);
    let mut plancherel = VerificationReport::new("plancherel");
    let mut worst = 0.0_f64;
    for _ in 0..VERIFY_SAMPLES {
        let f = sampling::function(&g, &mut rng);
        let (lhs, rhs) = plancherel_sides(&alg, &f).map_err(input)?;
        worst = worst.max((lhs - rhs).norm());
    }
    plancherel.push(CheckRecord::new(
        "integral_fhat_star_fhat",
        worst,
        ALGEBRA_TOL,
    ));
    report.absorb(plancherel);

    let rep = Representation::Formal(Arc::clone(&alg));
    let mut theorem = VerificationReport::new("convolution_theorem");
    let mut worst = 0.0_f64;
    for _ in 0..VERIFY_SAMPLES {
        let f = sampling::function(&g, &mut rng);
        let h = sampling::function(&g, &mut rng);
        worst = worst.max(deformed_convolution_theorem_residual(&rep, &f, &h).map_err(input)?);
    }
    theorem.push(CheckRecord::new("transform_of_product", worst, ALGEBRA_TOL));
    report.absorb(theorem);

    if let Some(n) = clockshift {
        report.absorb(consistency_check(n, opts.seed).map_err(input)?);
    }
    let report = finish(report, opts.tol);
    emit(&report, opts.out.as_deref())?;
    Ok(report.pass)
}

fn matrix_rep(alg: &Arc<Algebra>, clockshift: Option<usize>) -> Result<MatrixRep, CliError> {
    match clockshift {
        Some(n) => Ok(ClockShift::new(n).map_err(input)?.rep),
        None => MatrixRep::regular(alg).map_err(|e| {
            CliError::Input(format!("matrix transform needs a normalized cocycle: {e}"))
        }),
    }
}

fn check(residual: f64, tol: f64) -> Value {
    json!({"residual": residual, "tolerance": tol, "pass": residual < tol})
}

pub fn fourier_cmd(opts: &Options) -> Result<bool, CliError> {
    let Setup {
        group: g,
        cocycle: alpha,
        clockshift,
    } = setup(opts)?;
    let f = read_function(required(&opts.input, "in")?, &g)?;
    let alg = Algebra::new(g.clone(), alpha).map_err(input)?;
    let tol = opts.tol.unwrap_or(ALGEBRA_TOL);
    let rep = opts.rep.unwrap_or(if clockshift.is_some() {
        RepKind::Matrix
    } else if alg.cocycle().is_zero() && g.modulus().is_some() {
        RepKind::Character
    } else {
        RepKind::Formal
    });
    let rhs = f.norm_sq();
    let (transform, lhs, inverse) = match rep {
        RepKind::Character => {
            let r = Representation::character(&alg)
                .map_err(|e| CliError::Input(format!("character transform unavailable: {e}")))?;
            let spectrum = match fourier(&f, &r).map_err(input)? {
                Transform::Spectrum(s) => s,
                _ => unreachable!("characters yield a spectrum"),
            };
            let order = spectrum.len() as f64;
            let lhs = spectrum.iter().map(|c| c.norm_sqr()).sum::<f64>() / order;
            let inverse = invert_vector_finite(&alg, &SpectralData::Characters(spectrum.clone()))
                .map_err(input)?;
            let transform = g
                .elements()
                .iter()
                .zip(&spectrum)
                .map(|(q, c)| json!({"q": q, "re": c.re, "im": c.im}))
                .collect();
            (Value::Array(transform), C64::new(lhs, 0.0), inverse)
        }
        RepKind::Formal => {
            if !alg.is_normalized() {
                return Err(CliError::Input(
                    "the formal transform needs a normalized cocycle".into(),
                ));
            }
            let u = match fourier(&f, &Representation::Formal(Arc::clone(&alg))).map_err(input)? {
                Transform::Element(u) => u,
                _ => unreachable!("formal transforms are algebra elements"),
            };
            let (lhs, _) = plancherel_sides(&alg, &f).map_err(input)?;
            let inverse = invert(&u).map_err(input)?;
            let terms = GroupFunction::from_pairs(u.terms().map(|(a, c)| (a.clone(), *c)));
            (output::function(&terms), lhs, inverse)
        }
        RepKind::Matrix => {
            if !g.is_finite() {
                return Err(CliError::Input(
                    "matrix transforms need a finite group".into(),
                ));
            }
            let m = matrix_rep(&alg, clockshift)?;
            let a = match fourier(&f, &Representation::Matrix(m.clone())).map_err(input)? {
                Transform::Matrix(a) => a,
                _ => unreachable!("matrix representations yield matrices"),
            };
            let dim = m.dim() as f64;
            let lhs = (a.adjoint() * &a).trace() / dim;
            let inverse = GroupFunction::from_pairs(
                g.elements()
                    .into_iter()
                    .zip(m.matrices())
                    .map(|(x, mx)| (x, (mx.adjoint() * &a).trace() / dim)),
            );
            (output::matrix(&a), lhs, inverse)
        }
    };
    let plancherel_residual = (lhs - rhs).norm();
    let round_trip = inverse.distance(&f);
    let pass = plancherel_residual < tol && round_trip < tol;
    let doc = json!({
        "rep": rep.name(),
        "transform": transform,
        "inverse": output::function(&inverse),
        "checks": {
            "plancherel": {
                "lhs": lhs.re,
                "rhs": rhs,
                "residual": plancherel_residual,
                "tolerance": tol,
                "pass": plancherel_residual < tol,
            },
            "round_trip": check(round_trip, tol),
        },
    });
    emit(&doc, opts.out.as_deref())?;
    Ok(pass)
}

pub fn convolve(opts: &Options) -> Result<bool, CliError> {
    let Setup {
        group: g,
        cocycle: alpha,
        clockshift,
    } = setup(opts)?;
    let f1 = read_function(required(&opts.input, "in")?, &g)?;
    let f2 = read_function(required(&opts.in2, "in2")?, &g)?;
    let alg = Algebra::new(g.clone(), alpha).map_err(input)?;
    let tol = opts.tol.unwrap_or(ALGEBRA_TOL);
    let h = deformed_convolution(&alg, &f1, &f2).map_err(input)?;
    let rep = match opts.rep {
        Some(RepKind::Matrix) | None if clockshift.is_some() => {
            Representation::Matrix(matrix_rep(&alg, clockshift)?)
        }
        Some(RepKind::Matrix) => Representation::Matrix(matrix_rep(&alg, None)?),
        Some(RepKind::Character) => Representation::character(&alg)
            .map_err(|e| CliError::Input(format!("character transform unavailable: {e}")))?,
        Some(RepKind::Formal) | None => Representation::Formal(Arc::clone(&alg)),
    };
    let residual = deformed_convolution_theorem_residual(&rep, &f1, &f2).map_err(input)?;
    let doc = json!({
        "convolution": output::function(&h),
        "checks": {"transform_product": check(residual, tol)},
    });
    emit(&doc, opts.out.as_deref())?;
    Ok(residual < tol)
}

pub fn clockshift(opts: &Options) -> Result<bool, CliError> {
    let n = match (opts.n, &opts.group) {
        (Some(n), _) => n,
        (None, Some(p)) => match read_json::<GroupDef>(p)?.build()?.kind() {
            GroupKind::CyclicPower { n, d: 2 } => n as usize,
            _ => {
                return Err(CliError::Input(
                    "clock and shift matrices need Z_n^2".into(),
                ))
            }
        },
        (None, None) => return Err(CliError::Input("--n or --group is required".into())),
    };
    let cs = ClockShift::new(n).map_err(input)?;
    let report = finish(consistency_check(n, opts.seed).map_err(input)?, opts.tol);
    let doc = json!({
        "n": n,
        "u1": output::matrix(&cs.u1),
        "u2": output::matrix(&cs.u2),
        "report": report,
    });
    emit(&doc, opts.out.as_deref())?;
    Ok(report.pass)
}

/// Re-judges a stored report and prints one line per check.
pub fn report(opts: &Options) -> Result<bool, CliError> {
    let doc: Value = read_json(required(&opts.input, "in")?)?;
    let inner = doc.get("report").cloned().unwrap_or(doc);
    let stored: VerificationReport = serde_json::from_value(inner)
        .map_err(|e| CliError::Input(format!("not a verification report: {e}")))?;
    let judged = match opts.tol {
        Some(t) => stored.with_tolerance(t),
        None => {
            let mut fresh = VerificationReport::new(stored.suite.clone());
            for c in &stored.checks {
                let mut c2 = CheckRecord::new(c.name.clone(), c.max_residual, c.tolerance);
                c2.detail = c.detail.clone();
                fresh.push(c2);
            }
            fresh
        }
    };
    for c in &judged.checks {
        println!(
            "{} {} residual={:.3e} tolerance={:.3e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.max_residual,
            c.tolerance
        );
    }
    println!(
        "{} {} ({} checks)",
        if judged.pass { "PASS" } else { "FAIL" },
        judged.suite,
        judged.checks.len()
    );
    if let Some(p) = opts.out.as_deref() {
        emit(&judged, Some(p))?;
    }
    Ok(judged.pass)
}
