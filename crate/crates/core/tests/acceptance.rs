//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ghlab_core::cli::{run, CommandKind, RunConfig};
use ghlab_core::compositions::{
    build_composites, build_rational_morphism, verify_harmonic_morphism, BaseConstants, FamilyPolynomial, RationalMap,
    MORPHISM_FLOOR,
};
use ghlab_core::duality::{dual_estimate, dual_pharmonic_verify, measure_compact_horizontal, DualContext};
use ghlab_core::families::{build_family, coefficient_lemma, EigenFamily, FamilyKind};
use ghlab_core::lie::{build_basis, build_symmetric_pair, ComplexMatrix, GroupKind, C64};
use ghlab_core::pharmonic::{build_phi_p, numeric_crosscheck, verify_proper_pharmonic, EigenSpec, SpecSource};
use ghlab_core::poly::MatrixPolynomial;
use ghlab_core::tension::{
    compare_full_vs_horizontal, estimate_eigenvalues, EigenEstimate, OperatorContext, PointSource, Sampling,
};
use ghlab_core::Result;

const SEED: u64 = 42;
const ONE: C64 = C64::new(1.0, 0.0);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn complex(p: usize, q: usize) -> Result<EigenFamily> {
    build_family(FamilyKind::ComplexGrassmannian { p, q })
}

fn full_estimate(family: &EigenFamily, samples: usize) -> Result<EigenEstimate> {
    let basis = family.kind.basis();
    estimate_eigenvalues(
        &family.polynomials(),
        &OperatorContext::full(&basis),
        PointSource::Group(&basis),
        &Sampling::new(SEED, samples),
    )
}

fn casimir() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let basis = build_basis(GroupKind::Unitary, n);
        let target = ComplexMatrix::identity(n).scale_real(-(n as f64));
        worst = worst.max(basis.casimir().max_abs_diff(&target));
    }
    outcome(
        worst < 1e-10,
        format!("max entry deviation {worst:.2e} (< 1e-10), n = 1..6"),
    )
}

fn lemma() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in 2..=5 {
        let r = coefficient_lemma(GroupKind::Unitary, n, &Sampling::new(SEED, 50))?;
        pass &= r.samples == 50;
        worst = worst.max(r.tau_residual).max(r.kappa_residual);
    }
    outcome(
        pass && worst < 1e-9,
        format!("max residual {worst:.2e} (< 1e-9), U(2..5), 50 points"),
    )
}

fn families() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (p, q) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        let family = complex(p, q)?;
        let est = full_estimate(&family, 20)?;
        let err = (est.lambda_mean - family.claimed_lambda)
            .norm()
            .max((est.mu_mean - family.claimed_mu).norm());
        worst = worst.max(est.lambda_max_dev).max(est.mu_max_dev).max(err);
        parts.push(format!(
            "({p},{q}) -> ({:.3}, {:.3})",
            est.lambda_mean.re, est.mu_mean.re
        ));
    }
    outcome(
        worst < 1e-8,
        format!("max deviation {worst:.2e} (< 1e-8), 20 points; {}", parts.join(", ")),
    )
}

fn composites() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (p, q) in [(1, 2), (2, 2)] {
        let family = complex(p, q)?;
        let base = full_estimate(&family, 20)?;
        let basis = family.kind.basis();
        for d in [2, 3] {
            let generators = FamilyPolynomial::all_monomials(family.len(), d);
            let constants = BaseConstants::Measured {
                lambda: base.lambda_mean,
                mu: base.mu_mean,
            };
            let comp = build_composites(&family, d, &generators, constants)?;
            let est = estimate_eigenvalues(
                &comp.members,
                &OperatorContext::full(&basis),
                PointSource::Group(&basis),
                &Sampling::new(SEED, 20),
            )?;
            let rel =
                |measured: C64, expected: C64| (measured - expected).norm() / expected.norm().max(f64::MIN_POSITIVE);
            worst = worst
                .max(rel(est.lambda_mean, comp.derived_lambda))
                .max(rel(est.mu_mean, comp.derived_mu))
                .max(est.lambda_max_dev / comp.derived_lambda.norm())
                .max(est.mu_max_dev / comp.derived_mu.norm());
            count += comp.members.len();
        }
    }
    outcome(
        worst < 1e-8,
        format!("max relative error {worst:.2e} (< 1e-8), {count} composites, d = 2,3"),
    )
}

fn quotients() -> Result<Outcome> {
    let family = complex(1, 2)?;
    let basis = family.kind.basis();
    let ctx = OperatorContext::full(&basis);
    let sampling = Sampling::new(SEED, 50).with_floor(MORPHISM_FLOOR);
    let m = FamilyPolynomial::monomial;
    let square = FamilyPolynomial::from_terms([(vec![0, 0], ONE), (vec![2, 2], ONE)]);
    let first = build_rational_morphism(&family, &m(&[1]), &m(&[0]), SEED)?;
    let maps = vec![
        build_rational_morphism(&family, &m(&[1, 2]), &m(&[0, 0]), SEED)?,
        build_rational_morphism(&family, &square, &m(&[1, 1]), SEED)?,
        first.mobius(C64::new(2.0, 1.0), ONE, C64::new(0.0, 1.0), C64::new(3.0, 0.0))?,
        first,
    ];
    let mut worst = 0.0f64;
    for map in &maps {
        let r = verify_harmonic_morphism(map, &ctx, PointSource::Group(&basis), &sampling, 1e-8)?;
        if r.samples != 50 {
            return outcome(false, format!("only {} points", r.samples));
        }
        worst = worst.max(r.tau_residual).max(r.kappa_residual);
    }
    let polys = family.polynomials();
    let product = polys[0].checked_mul(&polys[1])?;
    let control = verify_harmonic_morphism(&product, &ctx, PointSource::Group(&basis), &sampling, 1e-8)?;
    let control_size = control.tau_residual.max(control.kappa_residual);
    outcome(
        worst < 1e-8 && control_size > 1e-3,
        format!(
            "{} quotients max residual {worst:.2e} (< 1e-8), 50 points; control {control_size:.2e} (> 1e-3)",
            maps.len()
        ),
    )
}

fn pharmonic() -> Result<Outcome> {
    let start = Instant::now();
    let specs = [
        EigenSpec::real(-3.0, 0.0, SpecSource::Claimed)?,
        EigenSpec::real(-1.0, -1.0, SpecSource::Claimed)?,
        EigenSpec::real(-2.0, -1.0, SpecSource::Claimed)?,
        EigenSpec::real(-6.0, -2.0, SpecSource::Claimed)?,
    ];
    let mut symbolic = true;
    for spec in &specs {
        for p in 1..=5 {
            let phi = build_phi_p(p, spec, ONE, C64::new(0.5, -1.0))?;
            let v = verify_proper_pharmonic(&phi, p, spec)?;
            symbolic &= v.passes && v.chain[..p as usize].iter().all(|f| !f.is_zero());
        }
    }
    let symbolic_time = start.elapsed();

    // μ = 0: z11 with the 𝔪 directions of U(4)/U(1)×U(3); Grassmannian: z11 on U(2).
    let u4 = build_basis(GroupKind::Unitary, 4);
    let pair = build_symmetric_pair(&u4, &[1, 3])?;
    let z11_4 = complex(1, 3)?.polynomials().remove(0);
    let (horizontal, _) = measure_compact_horizontal(std::slice::from_ref(&z11_4), &pair, &Sampling::new(SEED, 20))?;
    let u2 = build_basis(GroupKind::Unitary, 2);
    let z11_2 = complex(1, 1)?.polynomials().remove(0);
    let full = EigenSpec::real(-2.0, -1.0, SpecSource::Claimed)?;
    let sampling = Sampling::new(SEED, 20);
    let mut worst = 0.0f64;
    for p in [2, 3] {
        let f = build_phi_p(p, &horizontal, ONE, ONE)?;
        let ctx = OperatorContext::horizontal(&pair);
        let r = numeric_crosscheck(&f, &horizontal, &z11_4, &ctx, PointSource::Group(&u4), &sampling)?;
        worst = worst.max(r.max_deviation);
        let f = build_phi_p(p, &full, ONE, ONE)?;
        let r = numeric_crosscheck(
            &f,
            &full,
            &z11_2,
            &OperatorContext::full(&u2),
            PointSource::Group(&u2),
            &sampling,
        )?;
        worst = worst.max(r.max_deviation);
    }
    let mu_zero = (horizontal.lambda - C64::new(-3.0, 0.0)).norm() < 1e-8 && horizontal.mu.norm() < 1e-8;
    outcome(
        symbolic && mu_zero && worst < 1e-4 && symbolic_time < Duration::from_secs(1),
        format!(
            "symbolic proper and sharp p = 1..5: {symbolic} ({:.0} ms); crosscheck {worst:.2e} (< 1e-4), 20 points",
            symbolic_time.as_secs_f64() * 1e3
        ),
    )
}

fn lifting() -> Result<Outcome> {
    let sampling = Sampling::new(SEED, 20).with_floor(MORPHISM_FLOOR);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (blocks, family) in [(vec![2, 2], complex(2, 2)?), (vec![1, 1, 2], complex(1, 3)?)] {
        let n: usize = blocks.iter().sum();
        let pair = build_symmetric_pair(&build_basis(GroupKind::Unitary, n), &blocks)?;
        let polys = family.polynomials();
        for member in &polys[1..4] {
            let ratio = RationalMap {
                numerator: member.clone(),
                denominator: polys[0].clone(),
                degree: blocks[0],
            };
            let lift = compare_full_vs_horizontal(&ratio, &pair, &sampling, 1e-9)?;
            if lift.samples != 20 {
                return outcome(false, format!("only {} points", lift.samples));
            }
            worst = worst.max(lift.gap).max(lift.k_residual);
            count += 1;
        }
    }
    outcome(
        worst < 1e-9,
        format!("{count} invariant ratios, max |tau_full - tau_horizontal| {worst:.2e} (< 1e-9), 20 points"),
    )
}

fn duality() -> Result<Outcome> {
    let sampling = Sampling::new(SEED, 20);
    let mut worst = 0.0f64;
    let mut chain = true;
    for (p, q) in [(1, 1), (1, 2), (2, 2)] {
        let polys: Vec<MatrixPolynomial> = complex(p, q)?.polynomials();
        let pair = build_symmetric_pair(&build_basis(GroupKind::Unitary, p + q), &[p, q])?;
        let (spec, _) = measure_compact_horizontal(&polys, &pair, &sampling)?;
        let dual = DualContext::new(&pair, spec);
        let est = dual_estimate(&polys, &dual, &sampling)?;
        worst = worst
            .max(est.lambda_error)
            .max(est.mu_error)
            .max(est.estimate.lambda_max_dev)
            .max(est.estimate.mu_max_dev);
        let report = dual_pharmonic_verify(2, &dual, &polys[0], &sampling, 1e-4)?;
        chain &= report.passes();
    }
    outcome(
        worst < 1e-6 && chain,
        format!(
            "max |dual + compact| {worst:.2e} (< 1e-6); dual p-harmonic chain {}",
            if chain { "PASS" } else { "FAIL" }
        ),
    )
}

fn quaternionic() -> Result<Outcome> {
    let mut lemma_worst = 0.0f64;
    for n in [2, 3] {
        let r = coefficient_lemma(GroupKind::Symplectic, n, &Sampling::new(SEED, 50))?;
        lemma_worst = lemma_worst.max(r.tau_residual).max(r.kappa_residual);
    }
    let mut constancy = 0.0f64;
    let mut recorded = Vec::new();
    for (p, q) in [(1, 1), (1, 2)] {
        let family = build_family(FamilyKind::QuaternionicGrassmannian { p, q })?;
        let est = full_estimate(&family, 20)?;
        constancy = constancy.max(est.lambda_max_dev).max(est.mu_max_dev);
        let agrees =
            (est.lambda_mean - family.claimed_lambda).norm() < 1e-8 && (est.mu_mean - family.claimed_mu).norm() < 1e-8;
        recorded.push(format!(
            "({p},{q}) measured ({:.3}, {:.3}) vs claimed ({}, {}) {}",
            est.lambda_mean.re,
            est.mu_mean.re,
            family.claimed_lambda.re,
            family.claimed_mu.re,
            if agrees { "PASS" } else { "WARN" }
        ));
    }
    outcome(
        lemma_worst < 1e-9 && constancy < 1e-8,
        format!(
            "Sp lemma {lemma_worst:.2e} (< 1e-9); constancy {constancy:.2e} (< 1e-8); {}",
            recorded.join("; ")
        ),
    )
}

fn determinism() -> Result<Outcome> {
    let cfg = RunConfig {
        command: CommandKind::Sweep,
        n: 4,
        ..RunConfig::default()
    };
    let a = run(&cfg);
    let b = run(&cfg);
    let same = a.report.deterministic_json() == b.report.deterministic_json();
    outcome(
        same && a.report.error.is_none() && !a.report.findings.is_empty(),
        format!(
            "two sweeps byte-identical: {same}; {} findings, status {}",
            a.report.findings.len(),
            a.report.status.label()
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Result<Outcome>, Duration);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (1, "casimir normalization", casimir, secs(1)),
        (2, "matrix-coefficient identities", lemma, secs(5)),
        (3, "Grassmannian eigenfamilies", families, secs(30)),
        (4, "composite eigenfamilies", composites, secs(30)),
        (5, "rational harmonic morphisms", quotients, secs(10)),
        (6, "proper p-harmonic functions", pharmonic, secs(10)),
        (7, "lifting of invariant functions", lifting, secs(10)),
        (8, "compact/non-compact duality", duality, secs(30)),
        (9, "quaternionic constants", quaternionic, secs(60)),
        (10, "determinism", determinism, secs(300)),
    ];
    let mut failures = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed < limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {id:>2} {:<4} {name}: {detail}; {:.2} s (< {} s)",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
