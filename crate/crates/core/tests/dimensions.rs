mod oracles;

use oracles::{colored_partitions, half_odd_partitions, radical_dims_by_closure};
use vertex_algebroid::fixtures::{heisenberg, heisenberg_plus_null, nilpotent, null_heisenberg, odd_grading, rank3};
use vertex_algebroid::grading::SectorGrading;
use vertex_algebroid::twisted::{build_twisted, TwistedFiber};
use vertex_algebroid::vacuum::build_vertex_algebra;

#[test]
fn oracles_match_known_counts() {
    let p: Vec<usize> = (0..=5).map(|n| colored_partitions(1, n)).collect();
    assert_eq!(p, vec![1, 1, 2, 3, 5, 7]);
    let p3: Vec<usize> = (0..=3).map(|n| colored_partitions(3, n)).collect();
    assert_eq!(p3, vec![1, 3, 9, 22]);
    let h: Vec<usize> = (0..=5).map(half_odd_partitions).collect();
    assert_eq!(h, vec![1, 1, 1, 2, 2, 3]);
}

#[test]
fn heisenberg_vertex_algebra_counts_partitions() {
    let va = build_vertex_algebra(&heisenberg(), 5).unwrap();
    let oracle: Vec<usize> = (0..=5).map(|n| colored_partitions(1, n)).collect();
    assert_eq!(va.vb.dims(), oracle);
    assert!(va.report.passed());
}

#[test]
fn rank3_vertex_algebra_counts_colored_partitions() {
    let va = build_vertex_algebra(&rank3(), 3).unwrap();
    let oracle: Vec<usize> = (0..=3).map(|n| colored_partitions(3, n)).collect();
    assert_eq!(va.vb.dims(), oracle);
}

#[test]
fn nilpotent_vertex_algebra_is_a_in_degree_zero() {
    let va = build_vertex_algebra(&nilpotent(), 2).unwrap();
    assert_eq!(va.vb.dims(), vec![2, 0, 0]);
}

#[test]
fn twisted_heisenberg_counts_half_odd_partitions() {
    let b = heisenberg();
    let g = odd_grading(&b, &[], &[0]);
    let p = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 5).unwrap();
    let oracle: Vec<usize> = (0..=5).map(half_odd_partitions).collect();
    assert_eq!(p.mb.dims(), oracle);
    assert_eq!(p.lg.dims(), oracle);
}

#[test]
fn twisted_nilpotent_keeps_only_the_fixed_fiber() {
    let b = nilpotent();
    let g = odd_grading(&b, &[1], &[]);
    let p = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 2).unwrap();
    assert_eq!(p.mb.dims(), vec![1, 0, 0]);
}

#[test]
fn untwisted_pipeline_matches_vertex_algebra_dims() {
    for b in [heisenberg(), rank3()] {
        let g = SectorGrading::trivial(&b);
        let p = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), 3).unwrap();
        let oracle: Vec<usize> = (0..=3).map(|n| colored_partitions(b.dim_b(), n)).collect();
        assert_eq!(p.mb.dims(), oracle);
    }
}

#[test]
fn recursive_radical_matches_exhaustive_closure() {
    let cases = [
        (null_heisenberg(), 1u32, 4i64),
        (null_heisenberg(), 2, 5),
        (heisenberg_plus_null(), 1, 2),
        (heisenberg(), 2, 5),
    ];
    let mut nontrivial = 0;
    for (b, t, n) in cases {
        let g = if t == 1 { SectorGrading::trivial(&b) } else { odd_grading(&b, &[], &(0..b.dim_b()).collect::<Vec<_>>()) };
        let p = build_twisted(&b, &g, &TwistedFiber::trivial(&b, &g), n).unwrap();
        assert!(p.mb.total_dim() <= 12, "{:?}", p.mb.dims());
        assert_eq!(p.j_dims(), radical_dims_by_closure(&p.mb), "T={t}, dims {:?}", p.mb.dims());
        if p.j_dims().iter().any(|&d| d > 0) {
            nontrivial += 1;
        }
    }
    assert!(nontrivial >= 2);
}
