use vertex_algebroid::field::{annihilator_in_module, check_annihilator_invariance, FieldEngine};
use vertex_algebroid::fixtures::{heisenberg, odd_grading};
use vertex_algebroid::identities::{basis_states, generator_states};
use vertex_algebroid::module::StateVector;
use vertex_algebroid::twisted::{build_twisted, TwistedFiber};
use vertex_algebroid::vacuum::build_vertex_algebra;

#[test]
fn vacuum_field_is_the_identity() {
    let va = build_vertex_algebra(&heisenberg(), 4).unwrap();
    let e = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let vac = StateVector::new(0, va.vb.induced.base_vector(0));
    for w in basis_states(&va.vb, 3) {
        let out = e.coefficient(&vac, -1, &w).unwrap().unwrap();
        assert_eq!(va.vb.normal_form(out.degree, &out.vector), w.vector);
        for q in [0, 1] {
            let other = e.coefficient(&vac, q, &w).unwrap();
            assert!(other.is_none_or(|s| s.is_zero()));
        }
    }
}

#[test]
fn beta_one_beta_is_the_vacuum() {
    let va = build_vertex_algebra(&heisenberg(), 3).unwrap();
    let e = FieldEngine::new(va.vb.clone(), va.vb.clone()).unwrap();
    let beta = generator_states(&va).unwrap().into_iter().find(|s| s.degree == 1).unwrap();
    let out = e.coefficient(&beta, 1, &beta).unwrap().unwrap();
    assert_eq!(out.degree, 0);
    assert_eq!(va.vb.normal_form(0, &out.vector), va.vb.normal_form(0, &va.vb.induced.base_vector(0)));
    let zero = e.coefficient(&beta, 0, &beta).unwrap().unwrap();
    assert!(va.vb.normal_form(1, &zero.vector).is_zero());
}

#[test]
fn annihilators_in_the_twisted_fock_space() {
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let va = build_vertex_algebra(&b, 3).unwrap();
    let p = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 4).unwrap();
    let e = FieldEngine::new(va.vb.clone(), p.mb.clone()).unwrap();
    let vac = StateVector::new(0, va.vb.induced.base_vector(0));
    let beta = generator_states(&va).unwrap().into_iter().find(|s| s.degree == 1).unwrap();

    let everything = annihilator_in_module(&e, &[]).unwrap();
    for (d, s) in everything.iter().enumerate() {
        assert_eq!(s.rank(), p.mb.dim(d as i64));
    }
    for states in [vec![vac], vec![beta]] {
        let ann = annihilator_in_module(&e, &states).unwrap();
        assert!(ann.iter().all(|s| s.is_zero()));
        assert!(check_annihilator_invariance(&p.mb, &ann).passed());
    }
}
