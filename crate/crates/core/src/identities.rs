//! Identity suites: Jacobi identity coefficients on untwisted and twisted
//! modules, commutator formulas, level, derivative rule, automorphism
//! functoriality and the agreement of the `T = 1` module pipeline with the
//! vertex algebra itself.

use crate::algebroid::VertexAlgebroid;
use crate::error::{Error, Result};
use crate::field::FieldEngine;
use crate::grading::{GradedEndomorphism, SectorGrading};
use crate::linalg::{LinearMap, SparseVector, Subspace};
use crate::module::{closure, GradedModule, StateVector};
use crate::rational::{binomial, frac, int, sign};
use crate::report::CheckReport;
use crate::twisted::{build_twisted, TwistedFiber, TwistedPipeline};
use crate::vacuum::{a_state, b_state, build_vertex_algebra, extend_automorphism, translation_d, VertexAlgebra};

/// One instance `(p, s, t)` of the Jacobi identity, with `s` and `t` given as
/// integer offsets from the sectors of `u` and `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiIndex {
    pub p: i64,
    pub s_offset: i64,
    pub t_offset: i64,
}

/// The full cube `{-bound..bound}³`.
pub fn jacobi_grid(bound: i64) -> Vec<JacobiIndex> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        for s_offset in -bound..=bound {
            for t_offset in -bound..=bound {
                out.push(JacobiIndex { p, s_offset, t_offset });
            }
        }
    }
    out
}

/// Normal-form basis vectors of the target in degrees `0..=max`.
pub fn basis_states(m: &GradedModule, max: i64) -> Vec<StateVector> {
    let mut out = Vec::new();
    for d in 0..=max.min(m.cutoff()) {
        for c in m.quotient_basis(d) {
            out.push(StateVector::new(d, SparseVector::unit(m.induced.slice_dim(d), c)));
        }
    }
    out
}

fn state_label(m: &GradedModule, s: &StateVector) -> String {
    s.vector.render(Some(&m.induced.slice_labels(s.degree)))
}

fn zero_at(m: &GradedModule, d: i64) -> SparseVector {
    SparseVector::zero(m.induced.slice_dim(d))
}

fn add_into(acc: &mut SparseVector, coeff: &crate::rational::Rational, s: Option<StateVector>) {
    if let Some(s) = s {
        acc.add_scaled(coeff, &s.vector);
    }
}

/// `v_{qk/T}` applied to an optional state.
fn apply(engine: &FieldEngine, v: &StateVector, qk: i64, w: Option<&StateVector>) -> Result<Option<StateVector>> {
    match w {
        Some(w) if !w.is_zero() => engine.coefficient(v, qk, w),
        _ => Ok(None),
    }
}

/// The coefficient of `z0^{-p-1} z1^{-s-1} z2^{-t-1}` in the (twisted)
/// Jacobi identity for `Y(u, z1)`, `Y(v, z2)` on `w`:
///
/// `Σ_m C(s,m) (u_{p+m} v)_{s+t-m} w
///   = Σ_m (-1)^m C(p,m) [u_{p+s-m} v_{t+m} w - (-1)^p v_{p+t-m} u_{s+m} w]`.
///
/// `va` computes products inside the vertex algebra, `target` acts on the
/// module.
pub fn verify_jacobi(
    va: &FieldEngine,
    target: &FieldEngine,
    u: &StateVector,
    v: &StateVector,
    indices: &[JacobiIndex],
    w_max: i64,
) -> Result<CheckReport> {
    let t = target.t();
    let m = &target.target;
    let mut r = CheckReport::new(if t == 1 { "Jacobi identity" } else { "twisted Jacobi identity" });
    if va.t() != 1 {
        return Err(Error::Input("vertex algebra products must be untwisted".into()));
    }
    let ru = target.state_sector(u)?;
    let rv = target.state_sector(v)?;
    let ws = basis_states(m, w_max);
    let src = &va.target;
    for idx in indices {
        let p = idx.p;
        let sk = ru + idx.s_offset * t;
        let tk = rv + idx.t_offset * t;
        let s = frac(sk, t);
        for w in &ws {
            let final_deg = target.output_degree(u.degree, p * t + sk, w.degree) + t * v.degree - tk - t;
            if final_deg < 0 {
                continue;
            }
            if final_deg > m.cutoff() {
                return Err(Error::Window(format!("Jacobi instance needs degree {final_deg}")));
            }
            let mut lhs = zero_at(m, final_deg);
            let mut j = 0i64;
            while va.output_degree(u.degree, p + j, v.degree) >= 0 {
                if let Some(uv) = va.coefficient(u, p + j, v)? {
                    let c = binomial(&s, j as u32);
                    add_into(&mut lhs, &c, apply(target, &uv, sk + tk - j * t, Some(w))?);
                }
                j += 1;
            }
            let mut rhs = zero_at(m, final_deg);
            let mut j = 0i64;
            loop {
                let qk = tk + j * t;
                if target.output_degree(v.degree, qk, w.degree) < 0 {
                    break;
                }
                let inner = target.coefficient(v, qk, w)?;
                let c = sign(j) * binomial(&int(p), j as u32);
                add_into(&mut rhs, &c, apply(target, u, p * t + sk - j * t, inner.as_ref())?);
                j += 1;
            }
            let mut j = 0i64;
            loop {
                let qk = sk + j * t;
                if target.output_degree(u.degree, qk, w.degree) < 0 {
                    break;
                }
                let inner = target.coefficient(u, qk, w)?;
                let c = -(sign(p) * sign(j) * binomial(&int(p), j as u32));
                add_into(&mut rhs, &c, apply(target, v, p * t + tk - j * t, inner.as_ref())?);
                j += 1;
            }
            let lhs = m.normal_form(final_deg, &lhs);
            let rhs = m.normal_form(final_deg, &rhs);
            let labels = m.induced.slice_labels(final_deg);
            r.compare(
                "Jacobi coefficient",
                || {
                    vec![
                        state_label(src, u),
                        state_label(src, v),
                        format!("p={p}"),
                        format!("s={s}"),
                        format!("t={}", frac(tk, t)),
                        state_label(m, w),
                    ]
                },
                &lhs,
                &rhs,
                Some(&labels),
            );
        }
    }
    Ok(r)
}

/// `[u_m, v_n] w = Σ_j C(m,j) (u_j v)_{m+n-j} w` for `m`, `n` within `bound`
/// of the sectors of `u` and `v`.
pub fn verify_commutator_transfer(
    va: &FieldEngine,
    target: &FieldEngine,
    gens: &[StateVector],
    bound: i64,
    w_max: i64,
) -> Result<CheckReport> {
    let t = target.t();
    let m = &target.target;
    let mut r = CheckReport::new("commutator formula");
    let ws = basis_states(m, w_max);
    for u in gens {
        let ru = target.state_sector(u)?;
        for v in gens {
            let rv = target.state_sector(v)?;
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let mk = ru + a * t;
                    let nk = rv + b * t;
                    for w in &ws {
                        let deg = target.output_degree(u.degree, mk, w.degree) + t * v.degree - nk - t;
                        if deg < 0 {
                            continue;
                        }
                        if deg > m.cutoff() {
                            return Err(Error::Window(format!("commutator needs degree {deg}")));
                        }
                        let mut lhs = zero_at(m, deg);
                        let vw = target.coefficient(v, nk, w)?;
                        add_into(&mut lhs, &int(1), apply(target, u, mk, vw.as_ref())?);
                        let uw = target.coefficient(u, mk, w)?;
                        add_into(&mut lhs, &int(-1), apply(target, v, nk, uw.as_ref())?);
                        let mut rhs = zero_at(m, deg);
                        let mut j = 0i64;
                        while va.output_degree(u.degree, j, v.degree) >= 0 {
                            if let Some(uv) = va.coefficient(u, j, v)? {
                                let c = binomial(&frac(mk, t), j as u32);
                                add_into(&mut rhs, &c, apply(target, &uv, mk + nk - j * t, Some(w))?);
                            }
                            j += 1;
                        }
                        let lhs = m.normal_form(deg, &lhs);
                        let rhs = m.normal_form(deg, &rhs);
                        let labels = m.induced.slice_labels(deg);
                        r.compare(
                            "[u_m, v_n] = Σ C(m,j) (u_j v)_{m+n-j}",
                            || {
                                vec![
                                    state_label(&va.target, u),
                                    state_label(&va.target, v),
                                    format!("m={}", frac(mk, t)),
                                    format!("n={}", frac(nk, t)),
                                    state_label(m, w),
                                ]
                            },
                            &lhs,
                            &rhs,
                            Some(&labels),
                        );
                    }
                }
            }
        }
    }
    Ok(r)
}

/// The mode `e(-1)` of the identity of `A` acts as the identity on every
/// slice, and so does the field of the vacuum-class state `e(-1)1`.
pub fn verify_level(target: &FieldEngine, unit_state: &StateVector) -> Result<CheckReport> {
    let m = &target.target;
    let lie = &m.induced.lie;
    let t = m.t();
    let mut r = CheckReport::new("level one");
    let alg_unit = lie.tca.embed0(&target_unit(target)?);
    let mode = lie.reduce(&alg_unit, -t)?;
    for w in basis_states(m, m.cutoff()) {
        let labels = m.induced.slice_labels(w.degree);
        let by_mode = m.normal_form(
            w.degree,
            &m.induced.act_element(&mode, 0, w.degree, &w.vector)?.expect("degree 0"),
        );
        r.compare("e(-1) w = w", || vec![state_label(m, &w)], &by_mode, &w.vector, Some(&labels));
        let by_field = target.coefficient(unit_state, -t, &w)?.map_or_else(|| zero_at(m, w.degree), |s| s.vector);
        r.compare("Y(e, x) w = w", || vec![state_label(m, &w)], &by_field, &w.vector, Some(&labels));
    }
    Ok(r)
}

fn target_unit(target: &FieldEngine) -> Result<SparseVector> {
    let lie = &target.source.induced.lie;
    // The engine does not keep the algebroid, so find the unit of A as the
    // basis vector whose a(-1)1 reduces to the vacuum.
    let n0 = lie.tca.dim0();
    let vac = target.source.induced.base_vector(0);
    let vac = target.source.normal_form(0, &vac);
    for i in 0..n0 {
        let st = a_state(&target.source, &SparseVector::unit(n0, i))?;
        if target.source.normal_form(0, &st) == vac {
            return Ok(SparseVector::unit(n0, i));
        }
    }
    Err(Error::Input("the identity of A is not a basis vector".into()))
}

/// `(Dv)_q w = -q v_{q-1} w`.
pub fn verify_derivative(va: &VertexAlgebra, target: &FieldEngine, states: &[StateVector], w_max: i64) -> Result<CheckReport> {
    let m = &target.target;
    let t = m.t();
    let mut r = CheckReport::new("derivative rule");
    let ws = basis_states(m, w_max);
    for v in states {
        if v.degree + 1 > va.vb.cutoff() {
            continue;
        }
        let dv = StateVector::new(v.degree + 1, translation_d(&va.vb, v.degree, &v.vector)?);
        let rv = target.state_sector(v)?;
        for w in &ws {
            let hi = target.output_degree(dv.degree, 0, w.degree);
            let lo = hi - m.cutoff();
            for qk in lo..=hi {
                if (qk - rv).rem_euclid(t) != 0 {
                    continue;
                }
                let deg = target.output_degree(dv.degree, qk, w.degree);
                let lhs = target.coefficient(&dv, qk, w)?.map_or_else(|| zero_at(m, deg), |s| s.vector);
                let rhs = target
                    .coefficient(v, qk - t, w)?
                    .map_or_else(|| zero_at(m, deg), |s| s.vector)
                    .scaled(&-frac(qk, t));
                let labels = m.induced.slice_labels(deg);
                r.compare(
                    "(Dv)_q = -q v_{q-1}",
                    || vec![state_label(&va.vb, v), format!("q={}", frac(qk, t)), state_label(m, w)],
                    &lhs,
                    &rhs,
                    Some(&labels),
                );
            }
        }
    }
    Ok(r)
}

/// For every generator `u` and basis vector `w` records the largest index
/// with `u_q w ≠ 0` and checks that all higher materialized indices vanish.
pub fn restricted_witness(target: &FieldEngine, gens: &[StateVector], w_max: i64) -> Result<CheckReport> {
    let m = &target.target;
    let t = m.t();
    let mut r = CheckReport::new("lower truncation");
    for u in gens {
        let ru = target.state_sector(u)?;
        for w in basis_states(m, w_max) {
            let hi = target.output_degree(u.degree, 0, w.degree);
            let lo = hi - m.cutoff();
            let mut bound = None;
            for qk in (lo..=hi).rev() {
                if (qk - ru).rem_euclid(t) != 0 {
                    continue;
                }
                if target.coefficient(u, qk, &w)?.is_some_and(|s| !m.normal_form(s.degree, &s.vector).is_zero()) {
                    bound = Some(qk);
                    break;
                }
            }
            // above `hi` the degree is negative, so every coefficient is zero
            for qk in (hi + 1)..=(hi + 2 * t) {
                r.count();
                if target.coefficient(u, qk, &w)?.is_some_and(|s| !s.is_zero()) {
                    r.fail(
                        "u_q w = 0 for large q",
                        vec![state_label(&target.source, u), state_label(m, &w), format!("q={}", frac(qk, t))],
                        "nonzero",
                        "0",
                    );
                }
            }
            r.note(format!(
                "{} on {}: vanishes beyond q = {}",
                state_label(&target.source, u),
                state_label(m, &w),
                bound.map_or("-∞".to_string(), |b| frac(b, t).to_string())
            ));
        }
    }
    Ok(r)
}

/// Functoriality `f(v_q w) = (f v)_q (f w)` of the extension to `V_B`, its
/// restriction to degrees 0 and 1, and compatibility with composition.
pub fn verify_automorphism(va: &VertexAlgebra, engine: &FieldEngine, f: &GradedEndomorphism, g: &GradedEndomorphism) -> Result<CheckReport> {
    let vb = &va.vb;
    let mut r = CheckReport::new("automorphism extension");
    let ff = extend_automorphism(va, f)?;
    let apply_f = |s: &StateVector| -> StateVector {
        let c = vb.coords(s.degree, &s.vector);
        StateVector::new(s.degree, vb.lift(s.degree, &ff[s.degree as usize].apply(&c)))
    };
    let states = basis_states(vb, vb.cutoff());
    for v in &states {
        for w in &states {
            let hi = engine.output_degree(v.degree, 0, w.degree);
            for qk in (hi - vb.cutoff())..=hi {
                let deg = engine.output_degree(v.degree, qk, w.degree);
                let lhs = engine.coefficient(v, qk, w)?.map_or_else(|| zero_at(vb, deg), |s| apply_f(&s).vector);
                let rhs = engine
                    .coefficient(&apply_f(v), qk, &apply_f(w))?
                    .map_or_else(|| zero_at(vb, deg), |s| vb.normal_form(deg, &s.vector));
                let labels = vb.induced.slice_labels(deg);
                r.compare(
                    "f(v_q w) = (f v)_q (f w)",
                    || vec![state_label(vb, v), format!("q={qk}"), state_label(vb, w)],
                    &lhs,
                    &rhs,
                    Some(&labels),
                );
            }
        }
    }
    let b = &va.algebroid;
    for i in 0..b.dim_a() {
        let lhs = apply_f(&StateVector::new(0, vb.normal_form(0, &a_state(vb, &b.a_basis(i))?))).vector;
        let rhs = vb.normal_form(0, &a_state(vb, &f.a_map.apply(&b.a_basis(i)))?);
        r.compare("restriction to degree 0 is f", || vec![b.a.labels[i].clone()], &lhs, &rhs, None);
    }
    if vb.cutoff() >= 1 {
        for i in 0..b.dim_b() {
            let lhs = apply_f(&StateVector::new(1, vb.normal_form(1, &b_state(vb, &b.b_basis(i))?))).vector;
            let rhs = vb.normal_form(1, &b_state(vb, &f.b_map.apply(&b.b_basis(i)))?);
            r.compare("restriction to degree 1 is f", || vec![b.labels[i].clone()], &lhs, &rhs, None);
        }
    }
    let gg = extend_automorphism(va, g)?;
    let fg = extend_automorphism(va, &f.compose(g))?;
    for d in 0..=vb.cutoff() {
        let composed = ff[d as usize].compose(&gg[d as usize]);
        r.count();
        if composed != fg[d as usize] {
            r.fail(
                "extension of f∘g = extension of f ∘ extension of g",
                vec![format!("degree {d}")],
                format!("{:?}", fg[d as usize].columns()),
                format!("{:?}", composed.columns()),
            );
        }
    }
    Ok(r)
}

/// Compares the `T = 1` module induced from the regular fiber `A` with `V_B`
/// through `X ⊗ a ↦ X a(-1)1`: the map must be a bijection on every slice and
/// commute with every mode.
pub fn verify_reduction_consistency(b: &VertexAlgebroid, n: i64) -> Result<CheckReport> {
    let g = SectorGrading::trivial(b);
    let va = build_vertex_algebra(b, n)?;
    let pipe = build_twisted(b, &g, &TwistedFiber::regular(b, &g), n)?;
    let mut r = CheckReport::new("untwisted module pipeline vs vertex algebra");
    let mb = &pipe.mb;
    let vb = &va.vb;
    r.count();
    if mb.dims() != vb.dims() {
        r.fail("slice dimensions", vec![], format!("{:?}", mb.dims()), format!("{:?}", vb.dims()));
        return Ok(r);
    }
    let phi = reduction_map(&pipe, &va)?;
    for d in 0..=n {
        r.count();
        if phi[d as usize].rank() != vb.dim(d) {
            r.fail("identification is bijective", vec![format!("degree {d}")], phi[d as usize].rank().to_string(), vb.dim(d).to_string());
        }
    }
    let lie_m = &mb.induced.lie;
    let lie_v = &vb.induced.lie;
    r.count();
    if lie_m.modes != lie_v.modes {
        r.fail("same loop algebra basis", vec![], "different", "equal");
        return Ok(r);
    }
    for x in 0..lie_m.dim() {
        for d in 0..=n {
            let td = d + lie_m.degree(x);
            if td < 0 || td > n {
                continue;
            }
            let act_m = mode_matrix(mb, x, d)?;
            let act_v = mode_matrix(vb, x, d)?;
            let lhs = phi[td as usize].compose(&act_m);
            let rhs = act_v.compose(&phi[d as usize]);
            r.count();
            if lhs != rhs {
                r.fail(
                    "identification intertwines modes",
                    vec![lie_m.mode_label(lie_m.modes[x]), format!("degree {d}")],
                    format!("{:?}", lhs.columns()),
                    format!("{:?}", rhs.columns()),
                );
            }
        }
    }
    Ok(r)
}

/// Matrix of a basis mode from slice `d` in quotient coordinates.
pub fn mode_matrix(m: &GradedModule, x: usize, d: i64) -> Result<LinearMap> {
    let td = d + m.induced.lie.degree(x);
    let cols = m
        .quotient_basis(d)
        .into_iter()
        .map(|c| {
            let v = m.act(x, d, &SparseVector::unit(m.induced.slice_dim(d), c))?.expect("non-negative degree");
            Ok(m.coords(td, &v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearMap::from_columns(m.dim(td), cols))
}

fn reduction_map(pipe: &TwistedPipeline, va: &VertexAlgebra) -> Result<Vec<LinearMap>> {
    let mb = &pipe.mb;
    let vb = &va.vb;
    let lie = &vb.induced.lie;
    let a_idx = &pipe.context.fixed.a_indices;
    let mut out = Vec::new();
    for d in 0..=mb.cutoff() {
        let slice = &mb.induced.slices[d as usize];
        let mut images = Vec::with_capacity(slice.dim());
        for mono in &slice.basis {
            let mut v = a_state(vb, &va.algebroid.a_basis(a_idx[mono.fiber]))?;
            let mut deg = 0;
            for &c in mono.modes.iter().rev() {
                let mode = mb.induced.lie.modes[c];
                let x = lie.index_of(mode).ok_or_else(|| Error::Internal("mode missing from V_B".into()))?;
                v = vb.induced.act(x, deg, &v)?.expect("creation mode");
                deg += lie.degree(x);
            }
            images.push(vb.normal_form(d, &v));
        }
        let full = LinearMap::from_columns(vb.induced.slice_dim(d), images);
        for row in mb.relations[d as usize].rows() {
            if !full.apply(row).is_zero() {
                return Err(Error::Internal(format!("identification is not defined on degree-{d} relations")));
            }
        }
        let cols = mb.quotient_basis(d).into_iter().map(|c| vb.coords(d, full.column(c))).collect();
        out.push(LinearMap::from_columns(vb.dim(d), cols));
    }
    Ok(out)
}

/// Closing a seed family under basis modes and under the field coefficients
/// of the generator states gives the same subspaces.
pub fn verify_submodule_correspondence(target: &FieldEngine, gens: &[StateVector], seeds: &[StateVector]) -> Result<CheckReport> {
    let m = &target.target;
    let t = m.t();
    let mut r = CheckReport::new("modes and generator fields generate the same submodules");
    for seed in seeds {
        let by_modes = closure(&m.induced, m.relations.clone(), std::slice::from_ref(seed))?;
        let mut by_fields: Vec<Subspace> = m.relations.clone();
        let mut queue = vec![seed.clone()];
        by_fields[seed.degree as usize].insert(&seed.vector);
        while let Some(w) = queue.pop() {
            for u in gens {
                let ru = target.state_sector(u)?;
                let hi = target.output_degree(u.degree, 0, w.degree);
                for qk in (hi - m.cutoff())..=hi {
                    if (qk - ru).rem_euclid(t) != 0 {
                        continue;
                    }
                    if let Some(s) = target.coefficient(u, qk, &w)? {
                        if let Some(new) = by_fields[s.degree as usize].insert(&s.vector) {
                            queue.push(StateVector::new(s.degree, new));
                        }
                    }
                }
            }
        }
        for d in 0..=m.cutoff() {
            r.count();
            let (a, b) = (&by_modes[d as usize], &by_fields[d as usize]);
            if !(a.contains_subspace(b) && b.contains_subspace(a)) {
                r.fail(
                    "closures agree",
                    vec![state_label(m, seed), format!("degree {}", frac(d, t))],
                    format!("rank {} by modes", a.rank()),
                    format!("rank {} by fields", b.rank()),
                );
            }
        }
    }
    Ok(r)
}

/// Generator states `a(-1)1` and `b(-1)1` for the basis of `A` and `B`, in
/// normal form of `vb`.
pub fn generator_states(va: &VertexAlgebra) -> Result<Vec<StateVector>> {
    let b = &va.algebroid;
    let vb = &va.vb;
    let mut out = Vec::new();
    for i in 0..b.dim_a() {
        let v = vb.normal_form(0, &a_state(vb, &b.a_basis(i))?);
        if !v.is_zero() {
            out.push(StateVector::new(0, v));
        }
    }
    if vb.cutoff() >= 1 {
        for i in 0..b.dim_b() {
            let v = vb.normal_form(1, &b_state(vb, &b.b_basis(i))?);
            if !v.is_zero() {
                out.push(StateVector::new(1, v));
            }
        }
    }
    Ok(out)
}

/// Runs `f` with increasing cutoffs until it stops reporting a window error.
pub fn with_growing_cutoff<T>(start: i64, step: i64, max: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<(T, i64)> {
    let mut n = start;
    loop {
        match f(n) {
            Err(Error::Window(msg)) => {
                if n + step > max {
                    return Err(Error::Window(msg));
                }
                n += step;
            }
            Err(e) => return Err(e),
            Ok(v) => return Ok((v, n)),
        }
    }
}
