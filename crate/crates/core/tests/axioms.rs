use vertex_algebroid::fixtures::{heisenberg, heisenberg_plus_null, mutants, nilpotent, null_heisenberg, rank3};
use vertex_algebroid::lie_algebroid::lie_algebroid_quotient;

#[test]
fn fixtures_pass_every_checker() {
    for b in [heisenberg(), rank3(), nilpotent(), null_heisenberg(), heisenberg_plus_null()] {
        let reports = [
            b.a.check(),
            b.to_tca().check(),
            b.check(),
            lie_algebroid_quotient(&b).unwrap().lie.check(),
        ];
        for r in reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.violations.first());
        }
    }
}

#[test]
fn every_mutant_is_caught_with_a_witness() {
    let all = mutants();
    for checker in ["commutative algebra", "1-truncated conformal algebra", "vertex algebroid", "Lie algebroid"] {
        assert!(all.iter().any(|m| m.checker == checker));
    }
    for m in &all {
        assert_eq!(m.report.name, m.checker);
        assert!(m.caught(), "{} / {}: {:?}", m.checker, m.law, m.report.violations);
    }
}
