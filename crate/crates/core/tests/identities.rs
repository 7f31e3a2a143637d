use vertex_algebroid::field::FieldEngine;
use vertex_algebroid::fixtures::{heisenberg, heisenberg_plus_null, nilpotent, odd_grading, rank3};
use vertex_algebroid::grading::scaling_endomorphism;
use vertex_algebroid::identities::*;
use vertex_algebroid::module::StateVector;
use vertex_algebroid::rational::int;
use vertex_algebroid::report::CheckReport;
use vertex_algebroid::twisted::{build_twisted, TwistedFiber};
use vertex_algebroid::vacuum::build_vertex_algebra;

fn assert_pass(r: &CheckReport) {
    assert!(!r.vacuous(), "{} checked nothing", r.name);
    assert!(r.passed(), "{}: {:#?}", r.name, &r.violations[..r.violations.len().min(3)]);
}

#[test]
fn untwisted_heisenberg_jacobi() {
    let va = build_vertex_algebra(&heisenberg(), 5).unwrap();
    let engine = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let gens = generator_states(&va).unwrap();
    let beta = gens.iter().find(|s| s.degree == 1).unwrap().clone();
    let r = verify_jacobi(&engine, &engine, &beta, &beta, &jacobi_grid(1), 1).unwrap();
    assert_pass(&r);
}

#[test]
fn twisted_heisenberg_jacobi() {
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let va = build_vertex_algebra(&b, 4).unwrap();
    let src = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let pipe = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 8).unwrap();
    let target = FieldEngine::new(va.vb.clone(), pipe.mb.clone()).unwrap();
    let beta = generator_states(&va).unwrap().into_iter().find(|s| s.degree == 1).unwrap();
    let r = verify_jacobi(&src, &target, &beta, &beta, &jacobi_grid(1), 3).unwrap();
    assert_pass(&r);
}

#[test]
fn commutator_level_and_derivative() {
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let va = build_vertex_algebra(&b, 4).unwrap();
    let src = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let pipe = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 8).unwrap();
    let target = FieldEngine::new(va.vb.clone(), pipe.mb.clone()).unwrap();
    let gens = generator_states(&va).unwrap();
    assert_pass(&verify_commutator_transfer(&src, &target, &gens, 1, 3).unwrap());
    let unit = gens.iter().find(|s| s.degree == 0).unwrap();
    assert_pass(&verify_level(&target, unit).unwrap());
    let states: Vec<StateVector> = basis_states(&va.vb, 2);
    assert_pass(&verify_derivative(&va, &target, &states, 2).unwrap());
    assert_pass(&restricted_witness(&target, &gens, 2).unwrap());
}

#[test]
fn untwisted_rank3_commutator() {
    let va = build_vertex_algebra(&rank3(), 3).unwrap();
    let engine = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let gens = generator_states(&va).unwrap();
    assert_pass(&verify_commutator_transfer(&engine, &engine, &gens, 1, 1).unwrap());
}

#[test]
fn sign_and_scaling_automorphisms_extend_functorially() {
    let b = heisenberg_plus_null();
    let va = build_vertex_algebra(&b, 3).unwrap();
    let engine = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let f = odd_grading(&b, &[], &[0]).sign_automorphism().unwrap();
    let g = scaling_endomorphism(&b, &[(1, int(3))]);
    assert_pass(&verify_automorphism(&va, &engine, &f, &g).unwrap());
}

#[test]
fn regular_fiber_recovers_vertex_algebra() {
    assert_pass(&verify_reduction_consistency(&heisenberg(), 4).unwrap());
    assert_pass(&verify_reduction_consistency(&nilpotent(), 3).unwrap());
}

#[test]
fn fields_and_modes_generate_same_submodules() {
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let va = build_vertex_algebra(&b, 3).unwrap();
    let pipe = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 6).unwrap();
    let target = FieldEngine::new(va.vb.clone(), pipe.mb.clone()).unwrap();
    let gens = generator_states(&va).unwrap();
    let seeds = basis_states(&pipe.mb, 3);
    assert_pass(&verify_submodule_correspondence(&target, &gens, &seeds).unwrap());
}

#[test]
fn growing_cutoff_retries_window_errors() {
    let b = heisenberg();
    let (dims, n) = with_growing_cutoff(1, 1, 6, |n| {
        let va = build_vertex_algebra(&b, n)?;
        if n < 4 {
            return Err(vertex_algebroid::error::Error::Window("small".into()));
        }
        Ok(va.vb.dims())
    })
    .unwrap();
    assert_eq!(n, 4);
    assert_eq!(dims, vec![1, 1, 2, 3, 5]);
}

#[test]
fn rescaled_central_term_breaks_twisted_jacobi() {
    use std::sync::Arc;
    use vertex_algebroid::twisted::{build_mb, induce_twisted, relations_w, twisted_loop, TwistedContext};
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let ctx = TwistedContext::new(&b, &g).unwrap();
    let lie = twisted_loop(&ctx, 8).unwrap().with_second_term_scale(int(2)).unwrap();
    let mg = induce_twisted(&ctx, Arc::new(lie), &TwistedFiber::trivial(&b, &g), 8).unwrap();
    let w = relations_w(&ctx, &mg).unwrap();
    let mb = build_mb(&mg, &w).unwrap();
    let va = build_vertex_algebra(&b, 4).unwrap();
    let src = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let target = FieldEngine::new(va.vb.clone(), mb).unwrap();
    let beta = generator_states(&va).unwrap().into_iter().find(|s| s.degree == 1).unwrap();
    let r = verify_jacobi(&src, &target, &beta, &beta, &jacobi_grid(1), 3).unwrap();
    assert!(!r.passed());
}
