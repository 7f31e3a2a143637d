//! Small algebroids used throughout the tests, the command-line examples and
//! the acceptance suite.

use crate::algebra::CommAlgebra;
use crate::algebroid::VertexAlgebroid;
use crate::grading::SectorGrading;
use crate::lie_algebroid::lie_algebroid_quotient;
use crate::rational::{int, minus_one, one};
use crate::report::CheckReport;
use crate::twisted::TwistedFiber;

/// Rank-one Heisenberg algebroid: `A = Q·e`, `B = Q·β`, `<β,β> = e`,
/// `π = 0`, `∂ = 0`.
pub fn heisenberg() -> VertexAlgebroid {
    let mut b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), vec!["β".into()]);
    b.action.add_entry(0, 0, 0, &one());
    b.pairing.add_entry(0, 0, 0, &one());
    b
}

/// Rank-three abelian algebroid over `Q·e` with the identity pairing.
pub fn rank3() -> VertexAlgebroid {
    let labels = vec!["β1".into(), "β2".into(), "β3".into()];
    let mut b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), labels);
    for i in 0..3 {
        b.action.add_entry(0, i, i, &one());
        b.pairing.add_entry(i, i, 0, &one());
    }
    b
}

/// `A = Q[x]/(x²)`, `B = 0`.
pub fn nilpotent() -> VertexAlgebroid {
    VertexAlgebroid::zero(CommAlgebra::truncated_polynomials("x", 2), vec![])
}

/// `A = Q·e`, `B = Q·β` with every structure map zero except the action.
pub fn null_heisenberg() -> VertexAlgebroid {
    let mut b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), vec!["β".into()]);
    b.action.add_entry(0, 0, 0, &one());
    b
}

/// `B = span{β, γ}` over `Q·e` with `<β,β> = e` and `γ` null.
pub fn heisenberg_plus_null() -> VertexAlgebroid {
    let mut b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), vec!["β".into(), "γ".into()]);
    b.action.add_entry(0, 0, 0, &one());
    b.action.add_entry(0, 1, 1, &one());
    b.pairing.add_entry(0, 0, 0, &one());
    b
}

/// `T = 2` grading putting the listed basis vectors of `A` and `B` in
/// sector 1.
pub fn odd_grading(b: &VertexAlgebroid, odd_a: &[usize], odd_b: &[usize]) -> SectorGrading {
    let mut g = SectorGrading::trivial(b);
    g.t = 2;
    for &i in odd_a {
        g.a_sectors[i] = 1;
    }
    for &i in odd_b {
        g.b_sectors[i] = 1;
    }
    g
}

/// The one-dimensional fiber on which the identity of `A⁰` acts as 1 and
/// everything else acts as 0.
pub fn trivial_fiber(b: &VertexAlgebroid, g: &SectorGrading) -> TwistedFiber {
    TwistedFiber::trivial(b, g)
}

/// A structure with one deliberately corrupted table, the checker that should
/// reject it and the law that should be named in the report.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub checker: &'static str,
    pub law: &'static str,
    pub report: CheckReport,
}

impl Mutant {
    /// The report has a violation of `law` carrying a witness tuple.
    pub fn caught(&self) -> bool {
        self.report
            .violations
            .iter()
            .any(|v| v.law.contains(self.law) && !v.witness.is_empty())
    }
}

fn mutant(checker: &'static str, law: &'static str, report: CheckReport) -> Mutant {
    Mutant { checker, law, report }
}

/// One corrupted table per axiom family of every structure checker.
pub fn mutants() -> Vec<Mutant> {
    let mut out = Vec::new();

    let mut a = CommAlgebra::scalars("e");
    a.unit = a.unit.scaled(&int(2));
    out.push(mutant("commutative algebra", "unit", a.check()));
    let mut a = CommAlgebra::truncated_polynomials("x", 3);
    a.add_product_entry(1, 2, 2, &one());
    out.push(mutant("commutative algebra", "commutativity", a.check()));
    let mut a = CommAlgebra::truncated_polynomials("x", 3);
    a.add_product_entry(1, 2, 1, &one());
    a.add_product_entry(2, 1, 1, &one());
    out.push(mutant("commutative algebra", "associativity", a.check()));

    let mut c = heisenberg().to_tca();
    c.partial.add_entry(0, 0, &one());
    out.push(mutant("1-truncated conformal algebra", "derivation", c.check()));
    let mut c = rank3().to_tca();
    c.u1v.add_entry(0, 1, 0, &one());
    out.push(mutant("1-truncated conformal algebra", "commutativity", c.check()));
    let mut c = rank3().to_tca();
    c.u0v.add_entry(0, 1, 2, &one());
    c.u0v.add_entry(1, 0, 2, &minus_one());
    out.push(mutant("1-truncated conformal algebra", "associativity", c.check()));

    let mut b = heisenberg();
    b.action.add_entry(0, 0, 0, &one());
    out.push(mutant("vertex algebroid", "unit action", b.check()));
    let mut b = heisenberg_plus_null();
    b.pairing.add_entry(0, 1, 0, &one());
    out.push(mutant("vertex algebroid", "symmetric pairing", b.check()));
    let mut b = rank3();
    b.bracket.add_entry(0, 1, 2, &one());
    out.push(mutant("vertex algebroid", "[u,v] + [v,u] = ∂<u,v>", b.check()));
    let mut b = heisenberg();
    b.partial.add_entry(0, 0, &one());
    out.push(mutant("vertex algebroid", "<v, ∂a> = π(v)(a)", b.check()));
    let mut b = heisenberg();
    b.anchor.add_entry(0, 0, 0, &one());
    out.push(mutant("vertex algebroid", "anchor acts by derivations", b.check()));

    let base = lie_algebroid_quotient(&rank3()).expect("abelian quotient").lie;
    let mut l = base.clone();
    l.bracket.add_entry(0, 1, 2, &one());
    out.push(mutant("Lie algebroid", "antisymmetry", l.check()));
    let mut l = base.clone();
    l.action.add_entry(0, 0, 0, &one());
    out.push(mutant("Lie algebroid", "unit action", l.check()));
    let mut l = lie_algebroid_quotient(&heisenberg()).expect("quotient").lie;
    l.anchor.add_entry(0, 0, 0, &one());
    out.push(mutant("Lie algebroid", "anchor acts by derivations", l.check()));
    out
}
