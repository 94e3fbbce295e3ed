//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use pga_core::algebra::{check_self_conjugacy, regular_reps};
use pga_core::calculus::{
    check_leibniz, integral_of_derivation, measure_invariance_check, Automorphism, Derivation,
};
use pga_core::clockshift::{measured_cocycle, realize, trace_integral, ClockShift};
use pga_core::cocycles::{
    check_identities_seeded, coboundary, normalize, validate_cocycle_seeded, GaugePhase,
};
use pga_core::groups::{make_cyclic_power, make_lattice, make_symmetric};
use pga_core::harmonic::{
    deformed_convolution, deformed_convolution_theorem_residual, fourier, invert_vector_finite,
    moyal_star, plancherel_sides, Representation, SpectralData, Transform,
};
use pga_core::integration::{ati_integral, completeness_check, embed};
use pga_core::sampling::{self, CheckRng};
use pga_core::{Algebra, CMatrix, Cocycle, Group, GroupElement, GroupFunction, C64, DEFAULT_SEED};
use rand::Rng;

const COCYCLE_TOL: f64 = 1e-10;
const MATRIX_TOL: f64 = 1e-12;

struct Criterion {
    title: &'static str,
    items: Vec<(String, f64, f64)>,
    failures: Vec<String>,
}

impl Criterion {
    fn new(title: &'static str) -> Self {
        Self {
            title,
            items: Vec::new(),
            failures: Vec::new(),
        }
    }

    /// Records `residual < tol`.
    fn bound(&mut self, label: impl Into<String>, residual: f64, tol: f64) {
        let label = label.into();
        if residual.is_nan() || residual >= tol {
            self.failures
                .push(format!("{label}: {residual:.3e} >= {tol:.0e}"));
        }
        self.items.push((label, residual, tol));
    }

    /// Records an exact identity.
    fn exact(&mut self, label: impl Into<String>, holds: bool) {
        let label = label.into();
        if !holds {
            self.failures.push(format!("{label}: not exact"));
        }
        self.items
            .push((label, if holds { 0.0 } else { f64::INFINITY }, 0.0));
    }

    fn error(&mut self, label: impl Into<String>, e: impl std::fmt::Display) {
        self.failures.push(format!("{}: {e}", label.into()));
    }

    fn finish(self, number: usize) -> bool {
        let pass = self.failures.is_empty();
        println!(
            "{} criterion {number}: {}",
            if pass { "PASS" } else { "FAIL" },
            self.title
        );
        for (label, residual, tol) in &self.items {
            if *tol > 0.0 {
                println!("      {label}: max residual {residual:.3e} (tol {tol:.0e})");
            } else {
                println!("      {label}: exact");
            }
        }
        for f in &self.failures {
            println!("      failure: {f}");
        }
        pass
    }
}

fn random_phase(n: usize, rng: &mut CheckRng) -> GaugePhase {
    let mut v = vec![0.0];
    v.extend((1..n).map(|_| rng.random_range(-PI..PI)));
    GaugePhase::table(v).expect("phi(e) = 0")
}

fn random_theta(d: usize, rng: &mut CheckRng) -> Cocycle {
    let theta = (0..d)
        .map(|_| (0..d).map(|_| rng.random_range(-PI..PI)).collect())
        .collect();
    Cocycle::bilinear(theta).expect("square")
}

fn cocycle_axioms(rng: &mut CheckRng) -> Criterion {
    let mut c = Criterion::new("cocycle condition and normalized identities");
    let mut suite: Vec<(String, Group, Cocycle)> = Vec::new();
    for g in [make_cyclic_power(4, 1), make_symmetric(3), make_lattice(2)] {
        let g = g.unwrap();
        suite.push((format!("zero on {}", g.describe()), g, Cocycle::zero()));
    }
    for g in [
        make_cyclic_power(4, 1),
        make_cyclic_power(3, 2),
        make_symmetric(3),
    ] {
        let g = g.unwrap();
        for _ in 0..20 {
            let phi = random_phase(g.order().unwrap(), rng);
            suite.push((
                format!("coboundaries on {}", g.describe()),
                g.clone(),
                coboundary(&g, &phi).unwrap(),
            ));
        }
    }
    for d in [1, 2] {
        let g = make_lattice(d).unwrap();
        for _ in 0..5 {
            suite.push((
                format!("bilinear on {}", g.describe()),
                g.clone(),
                random_theta(d, rng),
            ));
        }
    }
    for n in 2..=8 {
        let g = make_cyclic_power(n as u64, 2).unwrap();
        match measured_cocycle(n) {
            Ok(a) => suite.push((format!("clock-shift n={n}"), g, a)),
            Err(e) => c.error(format!("clock-shift n={n}"), e),
        }
    }
    let mut worst: Vec<(String, f64, f64)> = Vec::new();
    let mut note =
        |label: &str, cond: f64, ident: f64| match worst.iter_mut().find(|w| w.0 == label) {
            Some(w) => {
                w.1 = w.1.max(cond);
                w.2 = w.2.max(ident);
            }
            None => worst.push((label.to_string(), cond, ident)),
        };
    for (label, g, alpha) in &suite {
        let result = validate_cocycle_seeded(g, alpha, DEFAULT_SEED).and_then(|v| {
            if !g.is_finite() {
                let sampled = v.checks[0].detail.as_deref().unwrap_or("");
                assert!(
                    sampled.contains("1024"),
                    "lattice sampling too small: {sampled}"
                );
            }
            let (normal, _) = normalize(g, alpha)?;
            let ids = check_identities_seeded(g, &normal, DEFAULT_SEED)?;
            Ok((v.max_residual(), ids.max_residual()))
        });
        match result {
            Ok((cond, ident)) => note(label, cond, ident),
            Err(e) => c.error(label.clone(), e),
        }
    }
    for (label, cond, ident) in worst {
        c.bound(format!("{label}: cocycle condition"), cond, COCYCLE_TOL);
        c.bound(
            format!("{label}: identities after normalization"),
            ident,
            COCYCLE_TOL,
        );
    }
    c
}

fn conjugacy_groups() -> Vec<Group> {
    let mut groups: Vec<Group> = (2..=8).map(|n| make_cyclic_power(n, 1).unwrap()).collect();
    groups.push(make_cyclic_power(2, 2).unwrap());
    groups.push(make_cyclic_power(3, 2).unwrap());
    groups.push(make_symmetric(3).unwrap());
    groups
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn self_conjugacy() -> Criterion {
    let mut c = Criterion::new("self-conjugacy C R(a) C^-1 = L(a)");
    for g in conjugacy_groups() {
        let alg = Algebra::new(g.clone(), Cocycle::zero()).unwrap();
        let n = g.order().unwrap();
        match (check_self_conjugacy(&alg), regular_reps(&alg)) {
            (Ok(report), Ok(reps)) => {
                let lib = report
                    .check("c_r_cinv_equals_l")
                    .map_or(f64::INFINITY, |r| r.max_residual);
                let one = C64::new(1.0, 0.0);
                let cm = CMatrix::from_fn(n, n, |a, b| {
                    if g.op_index(a, b) == 0 {
                        one
                    } else {
                        C64::default()
                    }
                });
                let mut oracle = 0.0_f64;
                for a in 0..n {
                    let r = CMatrix::from_fn(n, n, |b, k| {
                        if g.op_index(b, a) == k {
                            one
                        } else {
                            C64::default()
                        }
                    });
                    let l = CMatrix::from_fn(n, n, |b, k| {
                        if g.op_index(a, k) == b {
                            one
                        } else {
                            C64::default()
                        }
                    });
                    oracle = oracle
                        .max(max_diff(&reps.r[a], &r))
                        .max(max_diff(&reps.l[a], &l))
                        .max(max_diff(&(&cm * &r * &cm), &l));
                }
                c.bound(g.describe(), lib.max(oracle), MATRIX_TOL);
            }
            (Err(e), _) | (_, Err(e)) => c.error(g.describe(), e),
        }
    }
    c
}

fn completeness() -> Criterion {
    let mut c = Criterion::new("completeness of x and xC under the integral");
    for g in conjugacy_groups() {
        let alg = Algebra::new(g.clone(), Cocycle::zero()).unwrap();
        match completeness_check(&alg) {
            Ok(r) => c.bound(g.describe(), r.max_residual(), MATRIX_TOL),
            Err(e) => c.error(g.describe(), e),
        }
    }
    c
}

fn character_inversion(rng: &mut CheckRng) -> Criterion {
    let mut c = Criterion::new("character inversion and regular trace identity");
    for g in [
        make_cyclic_power(5, 1).unwrap(),
        make_cyclic_power(4, 2).unwrap(),
    ] {
        let alg = Algebra::new(g.clone(), Cocycle::zero()).unwrap();
        let rep = Representation::character(&alg).unwrap();
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let f = sampling::function(&g, rng);
            let spectrum = match fourier(&f, &rep) {
                Ok(Transform::Spectrum(s)) => s,
                _ => unreachable!(),
            };
            let oracle = dft(&g, &f);
            let back =
                invert_vector_finite(&alg, &SpectralData::Characters(spectrum.clone())).unwrap();
            let spectral_err = spectrum
                .iter()
                .zip(&oracle)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            worst = worst.max(back.distance(&f)).max(spectral_err);
        }
        c.bound(
            format!("100 functions on {}", g.describe()),
            worst,
            MATRIX_TOL,
        );
    }
    let s3 = make_symmetric(3).unwrap();
    let alg = Algebra::new(s3.clone(), Cocycle::zero()).unwrap();
    let reps = regular_reps(&alg).unwrap();
    let exact = reps
        .r
        .iter()
        .enumerate()
        .all(|(a, r)| r.trace() == C64::new(if a == 0 { 6.0 } else { 0.0 }, 0.0));
    c.exact("tr R(a) = 6 delta(a,e) on S_3", exact);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let f = sampling::function(&s3, rng);
        let fhat = reps
            .r
            .iter()
            .enumerate()
            .fold(CMatrix::zeros(6, 6), |acc, (i, r)| {
                acc + r * f.get(&s3.element(i))
            });
        let back = invert_vector_finite(&alg, &SpectralData::Regular(fhat)).unwrap();
        worst = worst.max(back.distance(&f));
    }
    c.bound(
        "100 functions on S_3 through the regular representation",
        worst,
        MATRIX_TOL,
    );
    c
}

/// `f̃(q) = Σ_a f(a) e^{−2πi q·a/n}`, written out independently.
fn dft(g: &Group, f: &GroupFunction) -> Vec<C64> {
    let n = g.modulus().unwrap() as f64;
    g.elements()
        .iter()
        .map(|q| {
            let q = q.coords().unwrap();
            f.iter()
                .map(|(a, c)| {
                    let dot: i64 = q.iter().zip(a.coords().unwrap()).map(|(x, y)| x * y).sum();
                    c * C64::from_polar(1.0, -TAU * dot as f64 / n)
                })
                .sum()
        })
        .collect()
}

fn plancherel(rng: &mut CheckRng) -> Criterion {
    let mut c = Criterion::new("Plancherel identity");
    let mut algebras: Vec<(String, Arc<Algebra>)> = conjugacy_groups()
        .into_iter()
        .map(|g| {
            (
                format!("{} (zero)", g.describe()),
                Algebra::new(g, Cocycle::zero()).unwrap(),
            )
        })
        .collect();
    for n in 2..=4 {
        let cs = ClockShift::new(n).unwrap();
        let (normal, _) = normalize(cs.group(), cs.algebra().cocycle()).unwrap();
        algebras.push((
            format!("Z_{n}^2 clock-shift, normalized"),
            Algebra::new(cs.group().clone(), normal).unwrap(),
        ));
    }
    let s3 = make_symmetric(3).unwrap();
    let twisted = coboundary(&s3, &random_phase(6, rng)).unwrap();
    let (normal, _) = normalize(&s3, &twisted).unwrap();
    algebras.push((
        "S_3 coboundary, normalized".into(),
        Algebra::new(s3, normal).unwrap(),
    ));
    let z2 = make_lattice(2).unwrap();
    let (normal, _) = normalize(&z2, &random_theta(2, rng)).unwrap();
    algebras.push((
        "Z^2 bilinear, normalized".into(),
        Algebra::new(z2, normal).unwrap(),
    ));

    for (label, alg) in algebras {
        let mut worst = 0.0_f64;
        for _ in 0..200 {
            let f = sampling::function(alg.group(), rng);
            match plancherel_sides(&alg, &f) {
                Ok((lhs, rhs)) => worst = worst.max((lhs - rhs).norm()),
                Err(e) => {
                    c.error(label.clone(), e);
                    break;
                }
            }
        }
        c.bound(format!("200 functions on {label}"), worst, MATRIX_TOL);
    }
    c
}

fn convolution_theorem(rng: &mut CheckRng) -> Criterion {
    let mut c = Criterion::new("deformed convolution theorem in clock-shift representations");
    for n in 2..=5 {
        let cs = ClockShift::new(n).unwrap();
        let rep = Representation::Matrix(cs.rep.clone());
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let f = sampling::function(cs.group(), rng);
            let h = sampling::function(cs.group(), rng);
            worst = worst.max(deformed_convolution_theorem_residual(&rep, &f, &h).unwrap());
        }
        c.bound(format!("n={n}, 50 pairs"), worst, MATRIX_TOL);
    }
    c
}

fn clock_shift(rng: &mut CheckRng) -> Criterion {
    let mut c = Criterion::new("clock and shift realization");
    let (mut periodic, mut traces, mut commutator, mut integrals) =
        (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for n in 2..=8 {
        let cs = ClockShift::new(n).unwrap();
        let id = CMatrix::identity(n, n);
        let pow = |m: &CMatrix| (0..n).fold(id.clone(), |acc, _| acc * m);
        periodic = periodic
            .max(max_diff(&pow(&cs.u1), &id))
            .max(max_diff(&pow(&cs.u2), &id));
        let inv = |m: &CMatrix| m.clone().try_inverse().unwrap();
        let comm = &cs.u1 * &cs.u2 * inv(&cs.u1) * inv(&cs.u2);
        commutator = commutator.max(max_diff(
            &comm,
            &(&id * C64::from_polar(1.0, TAU / n as f64)),
        ));
        for m in cs.group().elements() {
            let x = realize(n, m.coords().unwrap()).unwrap();
            let expected = if m == cs.group().identity() {
                n as f64
            } else {
                0.0
            };
            traces = traces.max((x.trace() - expected).norm());
        }
        let rep = Representation::Matrix(cs.rep.clone());
        for _ in 0..50 {
            let f = sampling::function(cs.group(), rng);
            let a = match fourier(&f, &rep).unwrap() {
                Transform::Matrix(a) => a,
                _ => unreachable!(),
            };
            let t = trace_integral(n, &a).unwrap();
            let u = embed(cs.algebra(), &f).unwrap();
            let e = cs.group().identity();
            integrals = integrals
                .max((t - ati_integral(&u)).norm())
                .max((t - f.get(&e)).norm());
        }
    }
    c.bound("U_i^n = 1, n = 2..8", periodic, MATRIX_TOL);
    c.bound("Tr x(m) = n delta(m,0), n = 2..8", traces, MATRIX_TOL);
    c.bound(
        "U1 U2 U1^-1 U2^-1 = exp(2 pi i/n), n = 2..8",
        commutator,
        MATRIX_TOL,
    );
    c.bound(
        "trace integral = ATI integral, 50 elements per n = 2..8",
        integrals,
        MATRIX_TOL,
    );
    let g = make_cyclic_power(2, 2).unwrap();
    let alpha = measured_cocycle(2).unwrap();
    let value = alpha.phase(
        &g,
        &GroupElement::Vector(vec![1, 0]),
        &GroupElement::Vector(vec![0, 1]),
    );
    c.bound(
        "measured n=2 alpha((1,0),(0,1)) = -pi/2",
        (value + PI / 2.0).abs(),
        MATRIX_TOL,
    );
    c
}

fn calculus(rng: &mut CheckRng) -> Criterion {
    let mut c = Criterion::new("derivations, automorphisms and the Moyal product");
    let z2 = make_lattice(2).unwrap();
    let (mut leibniz, mut multiplicative) = (0.0_f64, 0.0_f64);
    let (mut derivation_exact, mut measure_exact) = (true, true);
    for _ in 0..4 {
        let alg = Algebra::new(z2.clone(), random_theta(2, rng)).unwrap();
        for i in 0..2 {
            let d = Derivation::coordinate(&z2, i).unwrap();
            leibniz = leibniz.max(
                check_leibniz(&d, &alg, rng.random(), 100)
                    .unwrap()
                    .max_residual(),
            );
            for _ in 0..100 {
                let u = sampling::algebra_element(&alg, rng);
                derivation_exact &= integral_of_derivation(&d, &u).unwrap() == C64::default();
            }
        }
        let s = Automorphism::new(
            &z2,
            vec![rng.random_range(-PI..PI), rng.random_range(-PI..PI)],
        )
        .unwrap();
        let report = measure_invariance_check(&s, &alg, rng.random(), 100).unwrap();
        measure_exact &= report.check("integral_invariant").unwrap().max_residual == 0.0;
        multiplicative = multiplicative.max(report.check("multiplicative").unwrap().max_residual);
    }
    c.bound(
        "Leibniz rule, 100 pairs x 8 derivation/cocycle combinations on Z^2",
        leibniz,
        MATRIX_TOL,
    );
    c.exact(
        "integral of D u = 0 on 800 random elements",
        derivation_exact,
    );
    c.exact("integral of S(phi) u = integral of u", measure_exact);
    c.bound("S(phi) multiplicative", multiplicative, MATRIX_TOL);

    for n in 2..=4 {
        let cs = ClockShift::new(n).unwrap();
        let g = cs.group().clone();
        let alg = cs.algebra();
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let f = sampling::function(&g, rng);
            let h = sampling::function(&g, rng);
            let spectral = moyal_star(alg, &dft(&g, &f), &dft(&g, &h)).unwrap();
            let direct = dft(&g, &deformed_convolution(alg, &f, &h).unwrap());
            worst = worst.max(
                spectral
                    .iter()
                    .zip(&direct)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max),
            );
        }
        c.bound(
            format!("Moyal product, two routes on Z_{n}^2"),
            worst,
            MATRIX_TOL,
        );
    }
    c
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn pga(args: &[&str], out: Option<&Path>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pga"));
    cmd.args(args);
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().expect("pga runs");
    let bytes = match out {
        Some(p) => std::fs::read(p).unwrap_or_default(),
        None => o.stdout,
    };
    (o.status.code().unwrap_or(-1), bytes)
}

fn cli() -> Criterion {
    let mut c = Criterion::new("CLI determinism and exit codes");
    let dir = tempfile::tempdir().unwrap();
    let fx = fixtures();
    let f = |name: &str| fx.join(name).to_string_lossy().into_owned();
    let configs: [(&str, Vec<String>); 3] = [
        (
            "verify Z_3^2 clock-shift",
            vec![
                "verify".into(),
                "--group".into(),
                f("z3sq.json"),
                "--cocycle".into(),
                f("clockshift.json"),
            ],
        ),
        (
            "fourier Z_5",
            vec![
                "fourier".into(),
                "--group".into(),
                f("z5.json"),
                "--in".into(),
                f("f_z5.json"),
            ],
        ),
        (
            "clockshift n=4",
            vec![
                "clockshift".into(),
                "--n".into(),
                "4".into(),
                "--seed".into(),
                "0x1234".into(),
            ],
        ),
    ];
    for (label, args) in &configs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
        let (code_a, bytes_a) = pga(&args, Some(&a));
        let (code_b, bytes_b) = pga(&args, Some(&b));
        c.exact(
            format!("{label}: identical bytes across runs"),
            code_a == code_b && !bytes_a.is_empty() && bytes_a == bytes_b,
        );
    }
    let golden: [(&str, Vec<String>, i32); 3] = [
        (
            "pass: Z_4 with zero cocycle",
            vec![
                "verify".into(),
                "--group".into(),
                f("z4.json"),
                "--cocycle".into(),
                f("zero.json"),
            ],
            0,
        ),
        (
            "mathematical failure: unquantized form on Z_3^2",
            vec![
                "verify".into(),
                "--group".into(),
                f("z3sq.json"),
                "--cocycle".into(),
                f("theta_unquantized.json"),
            ],
            1,
        ),
        (
            "malformed input: non-associative table",
            vec!["verify".into(), "--group".into(), f("broken_table.json")],
            2,
        ),
    ];
    for (label, args, expected) in &golden {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _) = pga(&args, None);
        c.exact(
            format!("{label} exits {expected} (got {code})"),
            code == *expected,
        );
    }
    c
}

fn main() {
    let start = Instant::now();
    let mut rng = sampling::rng(DEFAULT_SEED);
    let criteria = [
        cocycle_axioms(&mut rng),
        self_conjugacy(),
        completeness(),
        character_inversion(&mut rng),
        plancherel(&mut rng),
        convolution_theorem(&mut rng),
        clock_shift(&mut rng),
        calculus(&mut rng),
        cli(),
    ];
    let mut failed = 0;
    for (i, c) in criteria.into_iter().enumerate() {
        if !c.finish(i + 1) {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of 9 criteria passed in {:.1} s",
        9 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
