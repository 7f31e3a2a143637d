use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vertex_algebroid::field::FieldEngine;
use vertex_algebroid::grading::{check_algebroid_endomorphism, check_sector_grading, DEFAULT_MAX_ORDER};
use vertex_algebroid::identities::{
    basis_states, generator_states, jacobi_grid, restricted_witness, verify_automorphism, verify_commutator_transfer,
    verify_derivative, verify_jacobi, verify_level, verify_reduction_consistency, verify_submodule_correspondence,
    with_growing_cutoff, JacobiIndex,
};
use vertex_algebroid::lie_algebroid::lie_algebroid_quotient;
use vertex_algebroid::module::{GradedModule, StateVector};
use vertex_algebroid::report::CheckReport;
use vertex_algebroid::twisted::{
    build_twisted, check_fiber_conditions, fiber_restriction, is_simple_graded, twisted_loop, TwistedContext,
    TwistedFiber,
};
use vertex_algebroid::vacuum::build_vertex_algebra;

use crate::input::{parse_input, ParsedInput};
use crate::report::JobReport;
use crate::{CliError, Command, JobSpec};

/// Runs a job to completion. Every failure is folded into the report.
pub fn run(job: &JobSpec) -> JobReport {
    let name = match job.command {
        Command::Check => "check",
        Command::Build => "build",
        Command::Twist => "twist",
        Command::Verify => "verify",
    };
    let mut report = JobReport::new(name, &job.input.display().to_string(), job.max_degree);
    let outcome = load(job).and_then(|parsed| {
        report.t = parsed.grading.t;
        report.warnings = parsed.warnings.clone();
        if job.max_degree < 0 {
            return Err(CliError::Input("--max-degree must be non-negative".into()));
        }
        match job.command {
            Command::Check => cmd_check(&parsed, &mut report),
            Command::Build => cmd_build(&parsed, job, &mut report),
            Command::Twist => cmd_twist(&parsed, job, &mut report),
            Command::Verify => cmd_verify(&parsed, job, &mut report),
        }
    });
    report.finish(outcome);
    report
}

fn load(job: &JobSpec) -> Result<ParsedInput, CliError> {
    let text = std::fs::read_to_string(&job.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", job.input.display())))?;
    parse_input(&text)
}

/// Axiom checks for every structure in the file.
pub fn cmd_check(p: &ParsedInput, report: &mut JobReport) -> Result<(), CliError> {
    let b = &p.algebroid;
    report.push(b.a.check());
    report.push(b.to_tca().check());
    report.push(b.check());
    report.push(lie_algebroid_quotient(b)?.lie.check());
    let grading = check_sector_grading(b, &p.grading);
    let grading_ok = grading.passed();
    report.push(grading);
    if let Some(f) = p.grading.sign_automorphism() {
        let (mut r, info) = check_algebroid_endomorphism(b, &f, DEFAULT_MAX_ORDER);
        r.name = "sign automorphism".into();
        if !info.bijective {
            r.fail("bijective", vec![], "singular", "invertible");
        }
        if let Some(o) = info.order {
            r.note(format!("order {o}"));
        }
        report.push(r);
    }
    if grading_ok && b.check().passed() {
        let ctx = TwistedContext::new(b, &p.grading)?;
        for (i, fiber) in p.fibers.iter().enumerate() {
            let mut r = check_fiber_conditions(&ctx, fiber);
            r.name = format!("fiber {i}");
            report.push(r);
        }
    } else if !p.fibers.is_empty() {
        report.notes.push("fiber conditions skipped: the algebroid or its grading fails its axioms".into());
    }
    Ok(())
}

/// Graded dimensions of the vertex algebra `V_B` up to the cutoff.
pub fn cmd_build(p: &ParsedInput, job: &JobSpec, report: &mut JobReport) -> Result<(), CliError> {
    let b = &p.algebroid;
    let axioms = b.check();
    if !axioms.passed() {
        report.push(axioms);
        report.notes.push("build skipped: the algebroid fails its axioms".into());
        return Ok(());
    }
    let va = build_vertex_algebra(b, job.max_degree)?;
    report.dimensions.insert("V_B".into(), va.vb.dims());
    if job.dump_basis {
        let slices = (0..=job.max_degree).map(|d| va.vb.quotient_labels(d)).collect();
        report.bases.insert("V_B".into(), slices);
    }
    report.push(va.report.clone());
    let mut inv = va.vb.check_invariance();
    inv.name = "relation subspaces are mode-stable".into();
    report.push(inv);
    Ok(())
}

fn select_fiber(p: &ParsedInput, index: usize) -> Result<TwistedFiber, CliError> {
    if p.fibers.is_empty() && index == 0 {
        return Ok(TwistedFiber::trivial(&p.algebroid, &p.grading));
    }
    p.fibers
        .get(index)
        .cloned()
        .ok_or_else(|| CliError::Input(format!("--fiber {index}: the file lists {} fibers", p.fibers.len())))
}

/// Dimensions of `M_B(U)`, `J(U)` and `L_g(U)` in degrees `k/T`, with the
/// fiber conditions and simplicity of the quotient.
pub fn cmd_twist(p: &ParsedInput, job: &JobSpec, report: &mut JobReport) -> Result<(), CliError> {
    let b = &p.algebroid;
    let axioms = b.check();
    if !axioms.passed() {
        report.push(axioms);
        report.notes.push("twist skipped: the algebroid fails its axioms".into());
        return Ok(());
    }
    let fiber = select_fiber(p, job.fiber)?;
    let pipe = build_twisted(b, &p.grading, &fiber, job.max_degree)?;
    report.dimensions.insert("M_g(U)".into(), pipe.mg.dims());
    report.dimensions.insert("M_B(U)".into(), pipe.mb.dims());
    report.dimensions.insert("J(U)".into(), pipe.j_dims());
    report.dimensions.insert("L_g(U)".into(), pipe.lg.dims());
    if job.dump_basis {
        let slices = (0..=job.max_degree).map(|d| pipe.mb.quotient_labels(d)).collect();
        report.bases.insert("M_B(U)".into(), slices);
    }
    let mut fiber_report = pipe.fiber_report.clone();
    fiber_report.name = "fiber conditions".into();
    report.push(fiber_report);
    if let Some(d) = &pipe.degree0_defect {
        report.notes.push(d.clone());
    }
    let mut inv = pipe.mb.check_invariance();
    inv.name = "relation subspaces are mode-stable".into();
    report.push(inv);
    let (back, mut round_trip) = fiber_restriction(&pipe.context, &pipe.mb)?;
    round_trip.name = "degree-0 slice reproduces U".into();
    if pipe.fiber_report.passed() && back != fiber {
        round_trip.fail("fiber tables", vec![], "restricted action differs", "input action");
    }
    report.push(round_trip);
    let simple = is_simple_graded(&pipe.lg)?;
    if fiber.dim == 1 {
        report.push(simple);
    } else {
        report.notes.push(format!("graded simplicity of L_g(U): {}", simple.summary()));
    }
    Ok(())
}

/// The Jacobi grid, exhaustive when small enough and otherwise a seeded
/// sample, listed in a fixed order.
pub fn grid_indices(bound: i64, limit: usize, seed: u64) -> (Vec<JacobiIndex>, Option<String>) {
    if bound < 0 {
        return (Vec::new(), None);
    }
    let full = jacobi_grid(bound);
    if full.len() <= limit {
        return (full, None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<(usize, JacobiIndex)> = full.iter().copied().enumerate().collect::<Vec<_>>()
        .choose_multiple(&mut rng, limit)
        .copied()
        .collect();
    picked.sort_by_key(|(i, _)| *i);
    let note = format!("Jacobi grid sampled: {limit} of {} points, seed {seed}", full.len());
    (picked.into_iter().map(|(_, x)| x).collect(), Some(note))
}

/// The identity suites on `V_B` and on the module induced from the selected
/// fiber.
pub fn cmd_verify(p: &ParsedInput, job: &JobSpec, report: &mut JobReport) -> Result<(), CliError> {
    let b = &p.algebroid;
    let g = &p.grading;
    let axioms = b.check();
    if !axioms.passed() {
        report.push(axioms);
        report.notes.push("verify skipped: the algebroid fails its axioms".into());
        return Ok(());
    }
    let t = g.t as i64;
    let n = job.max_degree;
    let (indices, sample_note) = grid_indices(job.grid, job.sample_limit, job.seed);
    report.notes.extend(sample_note);
    let reach = job.grid.max(0);

    let ctx = TwistedContext::new(b, g)?;
    let lie = twisted_loop(&ctx, n)?;
    let mut axioms = lie.verify_lie_axioms();
    axioms.name = "loop algebra Lie axioms".into();
    report.push(axioms);
    report.push(lie.check_locality());
    report.push(lie.check_centrality());

    // untwisted suites on V_B, degrees in integer units
    let n1 = (n / t).max(1);
    let start = n1 + 3 * reach + 1;
    let (suites, used) = with_growing_cutoff(start, 1, start + 2 * reach + 6, |c| {
        let va = build_vertex_algebra(b, c)?;
        let e = FieldEngine::new(va.vb.clone(), va.vb.clone())?;
        let gens = generator_states(&va)?;
        let mut jac = CheckReport::new("Jacobi identity on V_B");
        for u in &gens {
            for v in &gens {
                jac.absorb(verify_jacobi(&e, &e, u, v, &indices, n1)?);
            }
        }
        let mut comm = verify_commutator_transfer(&e, &e, &gens, reach, n1)?;
        comm.name = "commutator formula on V_B".into();
        Ok(vec![jac, comm])
    })?;
    report.notes.push(format!("V_B suites ran at cutoff {used}"));
    for s in suites {
        report.push(s);
    }

    // the same suites on the module, degrees in units of 1/T
    let fiber = select_fiber(p, job.fiber)?;
    let src_cut = 2 + reach;
    let va = build_vertex_algebra(b, src_cut.max(3))?;
    let gens = generator_states(&va)?;
    let start = n + 3 * reach * t + t;
    let (suites, used) = with_growing_cutoff(start, t, start + (2 * reach + 6) * t, |c| {
        let pipe = build_twisted(b, g, &fiber, c)?;
        if let Some(d) = &pipe.degree0_defect {
            return Err(CliError::Input(format!("fiber does not satisfy the degree-0 conditions: {d}")).into_core());
        }
        let target = FieldEngine::new(va.vb.clone(), pipe.mb.clone())?;
        let src = FieldEngine::new(va.vb.clone(), va.vb.clone())?;
        module_suites(&va, &src, &target, &gens, &pipe.mb, &indices, reach, n)
    })?;
    report.notes.push(format!("module suites ran at cutoff {used} (units of 1/T)"));
    for s in suites {
        report.push(s);
    }

    let n_aut = n1.min(3);
    let va = build_vertex_algebra(b, n_aut)?;
    let e = FieldEngine::new(va.vb.clone(), va.vb.clone())?;
    match g.sign_automorphism() {
        Some(f) => report.push(verify_automorphism(&va, &e, &f, &f)?),
        None => report.notes.push("automorphism suite skipped: v ↦ ζ^r v is not rational for T > 2".into()),
    }
    report.push(verify_reduction_consistency(b, n1)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn module_suites(
    va: &vertex_algebroid::vacuum::VertexAlgebra,
    src: &FieldEngine,
    target: &FieldEngine,
    gens: &[StateVector],
    m: &GradedModule,
    indices: &[JacobiIndex],
    reach: i64,
    w_max: i64,
) -> vertex_algebroid::error::Result<Vec<CheckReport>> {
    let t = m.t();
    let mut jac = CheckReport::new(if t == 1 { "Jacobi identity on M_B(U)" } else { "twisted Jacobi identity on M_B(U)" });
    for u in gens {
        for v in gens {
            jac.absorb(verify_jacobi(src, target, u, v, indices, w_max)?);
        }
    }
    let mut comm = verify_commutator_transfer(src, target, gens, reach, w_max)?;
    comm.name = "commutator formula on M_B(U)".into();
    let mut out = vec![jac, comm];
    if let Some(unit) = gens.iter().find(|s| s.degree == 0 && is_unit_state(va, s)) {
        out.push(verify_level(target, unit)?);
    }
    let states = basis_states(&va.vb, 2);
    out.push(verify_derivative(va, target, &states, w_max)?);
    out.push(restricted_witness(target, gens, w_max.min(t))?);
    let seeds = basis_states(m, t);
    out.push(verify_submodule_correspondence(target, gens, &seeds)?);
    Ok(out)
}

fn is_unit_state(va: &vertex_algebroid::vacuum::VertexAlgebra, s: &StateVector) -> bool {
    let vac = va.vb.normal_form(0, &va.vb.induced.base_vector(0));
    s.vector == vac
}

impl CliError {
    fn into_core(self) -> vertex_algebroid::error::Error {
        use vertex_algebroid::error::Error as E;
        match self {
            CliError::Input(m) => E::Input(m),
            CliError::Window(m) => E::Window(m),
            CliError::Internal(m) => E::Internal(m),
        }
    }
}
