//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit on
//! any failure.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use oracles::{colored_partitions, half_odd_partitions, radical_dims_by_closure};
use valg_cli::{run, Command, JobSpec, Status};
use vertex_algebroid::algebroid::VertexAlgebroid;
use vertex_algebroid::field::FieldEngine;
use vertex_algebroid::fixtures::{
    heisenberg, heisenberg_plus_null, mutants, nilpotent, null_heisenberg, odd_grading, rank3,
};
use vertex_algebroid::grading::SectorGrading;
use vertex_algebroid::identities::{
    generator_states, jacobi_grid, verify_automorphism, verify_jacobi, verify_reduction_consistency,
};
use vertex_algebroid::lie_algebroid::lie_algebroid_quotient;
use vertex_algebroid::rational::minus_one;
use vertex_algebroid::twisted::{
    build_mb, build_twisted, induce_twisted, relations_w, twisted_loop, TwistedContext, TwistedFiber,
};
use vertex_algebroid::vacuum::build_vertex_algebra;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axiom_suites() -> Outcome {
    let mut checked = 0;
    for (name, b) in [("F1", heisenberg()), ("F2", rank3()), ("F3", nilpotent())] {
        let quotient = lie_algebroid_quotient(&b).map_err(|e| e.to_string())?;
        for r in [b.a.check(), b.to_tca().check(), b.check(), quotient.lie.check()] {
            ensure(r.passed(), || format!("{name}: {} fails: {:?}", r.name, r.violations.first()))?;
            checked += r.checked;
        }
    }
    let all = mutants();
    for m in &all {
        ensure(m.caught(), || format!("mutant of {} / {} not caught", m.checker, m.law))?;
    }
    Ok(format!("{checked} axiom instances, {} mutants caught", all.len()))
}

fn untwisted_dimensions() -> Outcome {
    let cases = [
        ("heisenberg_t1.json", 5, (0..=5).map(|n| colored_partitions(1, n)).collect::<Vec<_>>()),
        ("rank3.json", 3, (0..=3).map(|n| colored_partitions(3, n)).collect()),
        ("nilpotent_t1.json", 2, vec![nilpotent().dim_a(), 0, 0]),
    ];
    let mut out = Vec::new();
    for (file, n, oracle) in cases {
        let r = run(&JobSpec::new(Command::Build, fixture(file), n));
        ensure(r.status == Status::Pass, || format!("{file}: {}", r.render_text()))?;
        let dims = &r.dimensions["V_B"];
        ensure(*dims == oracle, || format!("{file}: {dims:?} != oracle {oracle:?}"))?;
        out.push(format!("{dims:?}"));
    }
    Ok(out.join(" "))
}

fn twisted_dimensions() -> Outcome {
    let r = run(&JobSpec::new(Command::Twist, fixture("heisenberg.json"), 5));
    ensure(r.status == Status::Pass, || r.render_text())?;
    let oracle: Vec<usize> = (0..=5).map(half_odd_partitions).collect();
    let mb = &r.dimensions["M_B(U)"];
    ensure(*mb == oracle, || format!("{mb:?} != oracle {oracle:?}"))?;
    ensure(r.dimensions["J(U)"].iter().all(|&d| d == 0), || format!("J = {:?}", r.dimensions["J(U)"]))?;
    let simple = r
        .checks
        .iter()
        .find(|c| c.report.name.starts_with("graded simplicity"))
        .ok_or("simplicity not checked")?;
    ensure(simple.report.passed() && !simple.vacuous, || "L_g(U) is not graded simple".into())?;
    Ok(format!("M_B(U) = {mb:?}, J = 0, simple"))
}

fn identity_suites() -> Outcome {
    let required = [
        "Jacobi identity on V_B",
        "commutator formula on V_B",
        "commutator formula on M_B(U)",
        "locality",
        "loop algebra Lie axioms",
    ];
    let mut total = 0;
    for (file, module_jacobi) in [
        ("heisenberg_t1.json", "Jacobi identity on M_B(U)"),
        ("heisenberg.json", "twisted Jacobi identity on M_B(U)"),
    ] {
        let mut job = JobSpec::new(Command::Verify, fixture(file), 3);
        job.grid = 2;
        let r = run(&job);
        ensure(r.status == Status::Pass, || format!("{file}:\n{}", r.render_text()))?;
        ensure(!r.notes.iter().any(|n| n.contains("sampled")), || "grid was sampled".into())?;
        for name in required.iter().chain([&module_jacobi]) {
            let c = r.checks.iter().find(|c| c.report.name == *name).ok_or(format!("{file}: {name} missing"))?;
            ensure(!c.vacuous, || format!("{file}: {name} is vacuous"))?;
        }
        total += r.checks.iter().map(|c| c.report.checked).sum::<u64>();
    }

    // negative control: a rescaled second bracket term must be detected
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let ctx = TwistedContext::new(&b, &g).map_err(|e| e.to_string())?;
    let lie = twisted_loop(&ctx, 9).and_then(|l| l.with_second_term_scale(minus_one())).map_err(|e| e.to_string())?;
    let mg = induce_twisted(&ctx, Arc::new(lie), &TwistedFiber::trivial(&b, &g), 9).map_err(|e| e.to_string())?;
    let w = relations_w(&ctx, &mg).map_err(|e| e.to_string())?;
    let mb = build_mb(&mg, &w).map_err(|e| e.to_string())?;
    let va = build_vertex_algebra(&b, 4).map_err(|e| e.to_string())?;
    let src = FieldEngine::new(va.vb.clone(), va.vb.clone()).map_err(|e| e.to_string())?;
    let target = FieldEngine::new(va.vb.clone(), mb).map_err(|e| e.to_string())?;
    let beta = generator_states(&va).map_err(|e| e.to_string())?.into_iter().find(|s| s.degree == 1).ok_or("no β")?;
    let bad = verify_jacobi(&src, &target, &beta, &beta, &jacobi_grid(1), 3).map_err(|e| e.to_string())?;
    ensure(!bad.passed(), || "sign error in the bracket went unnoticed".into())?;
    Ok(format!("{total} identity instances, zero residuals; injected sign error caught"))
}

fn automorphisms() -> Outcome {
    let b = heisenberg();
    let va = build_vertex_algebra(&b, 3).map_err(|e| e.to_string())?;
    let e = FieldEngine::new(va.vb.clone(), va.vb.clone()).map_err(|e| e.to_string())?;
    let f = odd_grading(&b, &[], &[0]).sign_automorphism().ok_or("no sign automorphism")?;
    let r = verify_automorphism(&va, &e, &f, &f).map_err(|e| e.to_string())?;
    ensure(r.passed() && !r.vacuous(), || format!("{:?}", r.violations.first()))?;
    Ok(format!("{} instances", r.checked))
}

fn reduction_consistency() -> Outcome {
    let mut n = 0;
    for (name, b, cut) in [("F1", heisenberg(), 4), ("F3", nilpotent(), 3)] {
        let r = verify_reduction_consistency(&b, cut).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed() && !r.vacuous(), || format!("{name}: {:?}", r.violations.first()))?;
        n += r.checked;
    }
    Ok(format!("{n} slice and mode-table comparisons"))
}

fn falsification_guards() -> Outcome {
    let cases: Vec<(&str, VertexAlgebroid, SectorGrading, bool, i64)> = vec![
        ("F1 T=2", heisenberg(), odd_grading(&heisenberg(), &[], &[0]), false, 5),
        ("F1 T=1", heisenberg(), SectorGrading::trivial(&heisenberg()), true, 4),
        ("F2 T=1", rank3(), SectorGrading::trivial(&rank3()), true, 3),
        ("F2 T=2", rank3(), odd_grading(&rank3(), &[], &[0, 2]), false, 4),
        ("F3 T=2", nilpotent(), odd_grading(&nilpotent(), &[1], &[]), false, 2),
        ("F3 T=1", nilpotent(), SectorGrading::trivial(&nilpotent()), true, 2),
        ("null β", null_heisenberg(), SectorGrading::trivial(&null_heisenberg()), true, 4),
        ("β ⊕ null", heisenberg_plus_null(), odd_grading(&heisenberg_plus_null(), &[], &[1]), false, 4),
    ];
    let mut fibers_seen = 0;
    for (name, b, g, with_regular, n) in cases {
        let mut fibers = vec![TwistedFiber::trivial(&b, &g)];
        if with_regular {
            fibers.push(TwistedFiber::regular(&b, &g));
        }
        for u in fibers {
            let p = build_twisted(&b, &g, &u, n).map_err(|e| format!("{name}: {e}"))?;
            if !p.fiber_report.passed() {
                continue;
            }
            fibers_seen += 1;
            ensure(p.degree0_defect.is_none() && p.mb.dim(0) == u.dim, || {
                format!("{name}: M_B(U)(0) has dimension {} but dim U = {}", p.mb.dim(0), u.dim)
            })?;
            for m in [&p.mg, &p.mb, &p.lg] {
                let r = m.check_invariance();
                ensure(r.passed(), || format!("{name}: relation subspaces not stable: {:?}", r.violations.first()))?;
            }
        }
        let va = build_vertex_algebra(&b, n.min(4)).map_err(|e| format!("{name}: {e}"))?;
        ensure(va.vb.check_invariance().passed(), || format!("{name}: V_B relations not stable"))?;
    }
    for file in ["heisenberg.json", "heisenberg_t1.json", "rank3.json", "nilpotent.json", "nilpotent_t1.json"] {
        let r = run(&JobSpec::new(Command::Twist, fixture(file), 3));
        ensure(r.exit_code != 4, || format!("{file}: internal failure {:?}", r.error))?;
    }
    Ok(format!("{fibers_seen} passing fibers, degree 0 equals U, closures stable"))
}

fn radical_vs_brute_force() -> Outcome {
    let cases = [
        ("null β, T=1", null_heisenberg(), SectorGrading::trivial(&null_heisenberg()), 4),
        ("null β, T=2", null_heisenberg(), odd_grading(&null_heisenberg(), &[], &[0]), 5),
        ("β ⊕ null, T=1", heisenberg_plus_null(), SectorGrading::trivial(&heisenberg_plus_null()), 2),
        ("β ⊕ null, T=2", heisenberg_plus_null(), odd_grading(&heisenberg_plus_null(), &[], &[0, 1]), 3),
        ("F1, T=2", heisenberg(), odd_grading(&heisenberg(), &[], &[0]), 5),
    ];
    let mut nontrivial = 0;
    for (name, b, g, n) in cases {
        let p = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), n).map_err(|e| format!("{name}: {e}"))?;
        ensure(p.mb.total_dim() <= 12, || format!("{name}: total dimension {}", p.mb.total_dim()))?;
        let brute = radical_dims_by_closure(&p.mb);
        ensure(p.j_dims() == brute, || format!("{name}: recursive {:?} != brute force {brute:?}", p.j_dims()))?;
        if brute.iter().any(|&d| d > 0) {
            nontrivial += 1;
        }
    }
    ensure(nontrivial >= 2, || "no module with a nonzero radical was tested".into())?;
    Ok(format!("{nontrivial} modules with nonzero J agree"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("axiom suites and mutation tests", axiom_suites, Duration::from_secs(1)),
        ("untwisted dimensions", untwisted_dimensions, Duration::from_secs(10)),
        ("twisted dimensions", twisted_dimensions, Duration::from_secs(10)),
        ("identity suites", identity_suites, Duration::from_secs(60)),
        ("automorphism extension", automorphisms, Duration::from_secs(60)),
        ("reduction consistency", reduction_consistency, Duration::from_secs(60)),
        ("falsification guards", falsification_guards, Duration::from_secs(60)),
        ("radical vs brute force", radical_vs_brute_force, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
