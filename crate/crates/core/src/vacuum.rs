//! The vacuum module `V_L` of the untwisted loop algebra, the ideal generated
//! by the algebroid relations, and the quotient vertex algebra `V_B`.

use std::sync::Arc;

use crate::algebroid::VertexAlgebroid;
use crate::error::{Error, Result};
use crate::grading::GradedEndomorphism;
use crate::induced::InducedModule;
use crate::linalg::{rank_of, LinearMap, SparseVector};
use crate::loop_lie::{LoopLie, Mode};
use crate::module::{closure, Flavor, GradedModule, StateVector};
use crate::rational::int;
use crate::report::CheckReport;

#[derive(Debug, Clone)]
pub struct VertexAlgebra {
    pub algebroid: VertexAlgebroid,
    pub lie: Arc<LoopLie>,
    /// `V_L` with no relations.
    pub vl: GradedModule,
    /// `V_B = V_L / I_B`.
    pub vb: GradedModule,
    /// Slice identifications with `A` and `B` and the spanning property of
    /// monomials in `B`-modes.
    pub report: CheckReport,
}

/// Default bound on the number of `a(-1)` letters in a `V_L` monomial.
pub fn default_cap(b: &VertexAlgebroid) -> usize {
    b.dim_a() + 2
}

pub fn build_vacuum_lie(b: &VertexAlgebroid, n: i64) -> Result<GradedModule> {
    let tca = b.to_tca();
    let sectors = vec![0; tca.dim()];
    let lie = Arc::new(LoopLie::build(tca, &sectors, 1, n)?);
    let induced = InducedModule::vacuum(lie, n, default_cap(b))?;
    Ok(GradedModule::free(Flavor::VacuumLie, Arc::new(induced)))
}

/// `a ↦ a(-1)1` for `a ∈ A`, in monomial coordinates of degree 0.
pub fn a_state(m: &GradedModule, a: &SparseVector) -> Result<SparseVector> {
    let lie = &m.induced.lie;
    let vac = m.induced.base_vector(0);
    let mode = lie.reduce(&lie.tca.embed0(a), -1)?;
    Ok(m.induced.act_element(&mode, 0, 0, &vac)?.expect("degree 0"))
}

/// `b ↦ b(-1)1` for `b ∈ B`, in monomial coordinates of degree 1.
pub fn b_state(m: &GradedModule, b: &SparseVector) -> Result<SparseVector> {
    let lie = &m.induced.lie;
    let vac = m.induced.base_vector(0);
    let mode = lie.reduce(&lie.tca.embed1(b), -1)?;
    Ok(m.induced.act_element(&mode, 1, 0, &vac)?.expect("degree 1"))
}

/// The generators `e(-1)1 - 1`, `a(-1)a'(-1)1 - (aa')(-1)1` and
/// `a(-1)b(-1)1 - (ab)(-1)1` over basis vectors.
pub fn relation_generators(b: &VertexAlgebroid, vl: &GradedModule) -> Result<Vec<StateVector>> {
    let ind = &vl.induced;
    let lie = &ind.lie;
    let mut out = Vec::new();
    let unit = a_state(vl, &b.a.unit)?.sub(&ind.base_vector(0));
    out.push(StateVector::new(0, unit));
    for i in 0..b.dim_a() {
        let ai = lie.reduce(&lie.tca.embed0(&b.a_basis(i)), -1)?;
        for j in 0..b.dim_a() {
            let aj = a_state(vl, &b.a_basis(j))?;
            let lhs = ind.act_element(&ai, 0, 0, &aj)?.expect("degree 0");
            let rhs = a_state(vl, &b.a.mul(&b.a_basis(i), &b.a_basis(j)))?;
            out.push(StateVector::new(0, lhs.sub(&rhs)));
        }
        if vl.cutoff() >= 1 {
            for j in 0..b.dim_b() {
                let bj = b_state(vl, &b.b_basis(j))?;
                let lhs = ind.act_element(&ai, 0, 1, &bj)?.expect("degree 1");
                let rhs = b_state(vl, &b.act(&b.a_basis(i), &b.b_basis(j)))?;
                out.push(StateVector::new(1, lhs.sub(&rhs)));
            }
        }
    }
    Ok(out)
}

/// The translation operator on the vacuum module, determined by
/// `[D, u(k)] = -k u(k-1)` and `D1 = 0`. Works on monomial coordinates, so
/// it applies to `V_L` and, after reduction, to `V_B`.
pub fn translation_d(m: &GradedModule, d: i64, v: &SparseVector) -> Result<SparseVector> {
    let ind = &m.induced;
    if !matches!(ind.fiber, crate::induced::Fiber::Vacuum { .. }) || ind.t() != 1 {
        return Err(Error::Input("translation is defined on the untwisted vacuum module only".into()));
    }
    if d + 1 > m.cutoff() {
        return Err(Error::Window(format!("D of a degree-{d} state exceeds the cutoff")));
    }
    let mut out = SparseVector::zero(ind.slice_dim(d + 1));
    for (col, c) in v.iter() {
        out.add_scaled(c, &d_monomial(m, d, col)?);
    }
    Ok(m.normal_form(d + 1, &out))
}

fn d_monomial(m: &GradedModule, d: i64, col: usize) -> Result<SparseVector> {
    let ind = &m.induced;
    let lie = &ind.lie;
    let mono = ind.slices[d as usize].basis[col].clone();
    let Some((&c1, rest)) = mono.modes.split_first() else {
        return Ok(SparseVector::zero(ind.slice_dim(d + 1)));
    };
    let rd = d - lie.degree(c1);
    let rest = crate::induced::Monomial { modes: rest.to_vec(), fiber: mono.fiber };
    let rv = ind.monomial_vector(rd, &rest).expect("suffix of a basis monomial");
    let Mode { gen, k } = lie.modes[c1];
    // [D, u(k)] r
    let shifted = lie.reduce(&lie.tca.basis(gen), k - 1)?.scaled(&-int(k));
    let mut out = ind.act_element(&shifted, lie.degree(c1) + 1, rd, &rv)?.expect("degree ≥ 0");
    // u(k) D r
    let dr = d_monomial(m, rd, ind.slices[rd as usize].index_of(&rest).expect("suffix"))?;
    if let Some(w) = ind.act(c1, rd + 1, &dr)? {
        out = out.add(&w);
    }
    Ok(out)
}

/// Builds `V_B` truncated at degree `n`.
pub fn build_vertex_algebra(b: &VertexAlgebroid, n: i64) -> Result<VertexAlgebra> {
    b.validate_shapes()?;
    let vl = build_vacuum_lie(b, n)?;
    let gens = relation_generators(b, &vl)?;
    let mut seeds = Vec::new();
    for g in gens {
        let mut s = g;
        loop {
            seeds.push(s.clone());
            if s.degree + 1 > n {
                break;
            }
            let next = translation_d(&vl, s.degree, &s.vector)?;
            s = StateVector::new(s.degree + 1, next);
        }
    }
    let relations = closure(&vl.induced, vl.relations.clone(), &seeds)?;
    let vb = GradedModule {
        flavor: Flavor::VertexAlgebra,
        induced: vl.induced.clone(),
        relations,
    };
    vb.assert_invariant()?;
    let report = vertex_algebra_report(b, &vb);
    Ok(VertexAlgebra {
        algebroid: b.clone(),
        lie: vl.induced.lie.clone(),
        vl,
        vb,
        report,
    })
}

fn vertex_algebra_report(b: &VertexAlgebroid, vb: &GradedModule) -> CheckReport {
    let mut r = CheckReport::new("vertex algebra slices");
    r.count();
    if vb.dim(0) != b.dim_a() {
        r.fail("degree-0 slice ≅ A", vec![], vb.dim(0).to_string(), b.dim_a().to_string());
    }
    if vb.cutoff() >= 1 {
        r.count();
        if vb.dim(1) != b.dim_b() {
            r.fail("degree-1 slice ≅ B", vec![], vb.dim(1).to_string(), b.dim_b().to_string());
        }
    }
    let ind = &vb.induced;
    let lie = &ind.lie;
    for d in 0..=vb.cutoff() {
        let spanning: Vec<SparseVector> = ind.slices[d as usize]
            .basis
            .iter()
            .enumerate()
            .filter(|(_, m)| m.modes.iter().filter(|&&i| lie.is_a_mode(i)).count() <= 1)
            .map(|(c, _)| vb.normal_form(d, &SparseVector::unit(ind.slice_dim(d), c)))
            .collect();
        r.count();
        let rank = rank_of(&spanning);
        if rank != vb.dim(d) {
            r.fail(
                "B-mode words on a single a(-1) span the slice",
                vec![format!("degree {d}")],
                format!("rank {rank}"),
                format!("dimension {}", vb.dim(d)),
            );
        }
    }
    r
}

/// Matrices of the extension of `f` to `V_B`, one per slice, in quotient
/// coordinates. Fails with an internal error if the extension does not
/// preserve the relations.
pub fn extend_automorphism(va: &VertexAlgebra, f: &GradedEndomorphism) -> Result<Vec<LinearMap>> {
    let vb = &va.vb;
    let ind = &vb.induced;
    let lie = &ind.lie;
    let fc = f.on_c();
    let mut out = Vec::new();
    for d in 0..=vb.cutoff() {
        let slice = &ind.slices[d as usize];
        let mut images = Vec::with_capacity(slice.dim());
        for mono in &slice.basis {
            let mut v = ind.base_vector(mono.fiber);
            let mut deg = 0;
            for &c in mono.modes.iter().rev() {
                let Mode { gen, k } = lie.modes[c];
                let elem = lie.reduce(&fc.column(gen).clone(), k)?;
                v = ind.act_element(&elem, lie.degree(c), deg, &v)?.expect("creation mode");
                deg += lie.degree(c);
            }
            images.push(vb.normal_form(d, &v));
        }
        let full = LinearMap::from_columns(slice.dim(), images);
        for row in vb.relations[d as usize].rows() {
            if !full.apply(row).is_zero() {
                return Err(Error::Internal(format!(
                    "extension of the automorphism does not preserve the degree-{d} relations"
                )));
            }
        }
        let cols = vb
            .quotient_basis(d)
            .into_iter()
            .map(|c| vb.coords(d, full.column(c)))
            .collect();
        out.push(LinearMap::from_columns(vb.dim(d), cols));
    }
    Ok(out)
}

/// `D` on the quotient `V_B` in quotient coordinates, as a map from slice `d`
/// to slice `d + 1`.
pub fn translation_matrix(vb: &GradedModule, d: i64) -> Result<LinearMap> {
    let cols = vb
        .quotient_basis(d)
        .into_iter()
        .map(|c| {
            let v = translation_d(vb, d, &SparseVector::unit(vb.induced.slice_dim(d), c))?;
            Ok(vb.coords(d + 1, &v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearMap::from_columns(vb.dim(d + 1), cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CommAlgebra;
    use crate::rational::one;

    fn heisenberg() -> VertexAlgebroid {
        let mut b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), vec!["β".into()]);
        b.action.add_entry(0, 0, 0, &one());
        b.pairing.add_entry(0, 0, 0, &one());
        b
    }

    #[test]
    fn heisenberg_dims() {
        let va = build_vertex_algebra(&heisenberg(), 5).unwrap();
        assert_eq!(va.vb.dims(), vec![1, 1, 2, 3, 5, 7]);
        assert!(va.report.passed(), "{:?}", va.report);
    }

    #[test]
    fn translation_of_generator() {
        let va = build_vertex_algebra(&heisenberg(), 3).unwrap();
        let beta = b_state(&va.vb, &SparseVector::unit(1, 0)).unwrap();
        let d_beta = translation_d(&va.vb, 1, &beta).unwrap();
        let lie = &va.lie;
        let m2 = lie.index_of(Mode { gen: 1, k: -2 }).unwrap();
        let expected = va
            .vb
            .induced
            .act(m2, 0, &va.vb.induced.base_vector(0))
            .unwrap()
            .unwrap();
        assert_eq!(d_beta, va.vb.normal_form(2, &expected));
        let vac = va.vb.induced.base_vector(0);
        assert!(translation_d(&va.vb, 0, &vac).unwrap().is_zero());
    }
}
