//! Twisted modules induced from degree-zero fibers: fiber conditions, the
//! induced module `M_g(U)`, its universal quotient `M_B(U)`, the maximal
//! submodule `J(U)` meeting degree 0 trivially, and the quotient `L_g(U)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebroid::VertexAlgebroid;
use crate::error::{Error, Result};
use crate::field::FieldEngine;
use crate::grading::{check_sector_grading, fixed_subalgebroid, FixedPart, SectorGrading};
use crate::induced::{Fiber, InducedModule};
use crate::lie_algebroid::{lie_algebroid_quotient, AlgebroidQuotient, LieAlgebroidModule};
use crate::linalg::{kernel, transpose, BilinearMap, LinearMap, SparseVector, Subspace};
use crate::loop_lie::{LoopLie, Mode};
use crate::module::{generated_submodule, closure, Flavor, GradedModule, StateVector};
use crate::rational::{frac, one};
use crate::report::CheckReport;
use crate::vacuum::{build_vacuum_lie, relation_generators};

/// A module `U` over the sector-0 parts `A⁰` and `B⁰`. The `B⁰` action must
/// vanish on `A⁰∂A⁰`, so that it descends to the Lie algebroid
/// `B⁰/A⁰∂A⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedFiber {
    pub dim: usize,
    /// `A⁰ × U → U`, indexed by the sector-0 basis vectors of `A`.
    pub a0_action: BilinearMap,
    /// `B⁰ × U → U`, indexed by the sector-0 basis vectors of `B`.
    pub g_action: BilinearMap,
}

impl TwistedFiber {
    pub fn zero(b: &VertexAlgebroid, g: &SectorGrading, dim: usize) -> Self {
        let na = g.a_sectors.iter().filter(|&&r| r == 0).count();
        let nb = g.b_sectors.iter().filter(|&&r| r == 0).count();
        debug_assert_eq!(g.a_sectors.len(), b.dim_a());
        Self {
            dim,
            a0_action: BilinearMap::zero(na, dim, dim),
            g_action: BilinearMap::zero(nb, dim, dim),
        }
    }

    /// One-dimensional fiber on which the identity of `A⁰` acts as 1 and all
    /// other basis vectors act as 0.
    pub fn trivial(b: &VertexAlgebroid, g: &SectorGrading) -> Self {
        let mut f = Self::zero(b, g, 1);
        let a_idx: Vec<usize> = (0..b.dim_a()).filter(|&i| g.a_sectors[i] == 0).collect();
        if let Some(u) = b.a.unit_index() {
            if let Some(p) = a_idx.iter().position(|&i| i == u) {
                f.a0_action.add_entry(p, 0, 0, &one());
            }
        }
        f
    }

    /// `A⁰` acting on itself, `B⁰` acting through the anchor.
    pub fn regular(b: &VertexAlgebroid, g: &SectorGrading) -> Self {
        let a_idx: Vec<usize> = (0..b.dim_a()).filter(|&i| g.a_sectors[i] == 0).collect();
        let b_idx: Vec<usize> = (0..b.dim_b()).filter(|&i| g.b_sectors[i] == 0).collect();
        let n = a_idx.len();
        let mut f = Self::zero(b, g, n);
        let local = |v: &SparseVector| {
            SparseVector::from_entries(n, v.iter().filter_map(|(i, c)| a_idx.iter().position(|&k| k == i).map(|p| (p, c.clone()))))
        };
        for (p, &i) in a_idx.iter().enumerate() {
            for (q, &j) in a_idx.iter().enumerate() {
                f.a0_action.set_basis(p, q, local(&b.a.mul(&b.a_basis(i), &b.a_basis(j))));
            }
        }
        for (p, &i) in b_idx.iter().enumerate() {
            for (q, &j) in a_idx.iter().enumerate() {
                f.g_action.set_basis(p, q, local(&b.pi(&b.b_basis(i), &b.a_basis(j))));
            }
        }
        f
    }

    /// `U ⊕ U'`.
    pub fn direct_sum(&self, other: &TwistedFiber) -> TwistedFiber {
        let n = self.dim + other.dim;
        let sum = |x: &BilinearMap, y: &BilinearMap| {
            let mut out = BilinearMap::zero(x.left_dim(), n, n);
            for (i, j, k, c) in x.entries() {
                out.add_entry(i, j, k, c);
            }
            for (i, j, k, c) in y.entries() {
                out.add_entry(i, self.dim + j, self.dim + k, c);
            }
            out
        };
        TwistedFiber {
            dim: n,
            a0_action: sum(&self.a0_action, &other.a0_action),
            g_action: sum(&self.g_action, &other.g_action),
        }
    }
}

/// The algebroid, its grading, the fixed part and the Lie algebroid
/// `B⁰/A⁰∂A⁰`.
#[derive(Debug, Clone)]
pub struct TwistedContext {
    pub algebroid: VertexAlgebroid,
    pub grading: SectorGrading,
    pub fixed: FixedPart,
    pub quotient: AlgebroidQuotient,
}

impl TwistedContext {
    pub fn new(b: &VertexAlgebroid, g: &SectorGrading) -> Result<Self> {
        g.validate(b)?;
        let gr = check_sector_grading(b, g);
        if !gr.passed() {
            return Err(Error::Input(format!("grading is not compatible: {}", gr.summary())));
        }
        let fixed = fixed_subalgebroid(b, g)?;
        let quotient = lie_algebroid_quotient(&fixed.algebroid)?;
        Ok(Self {
            algebroid: b.clone(),
            grading: g.clone(),
            fixed,
            quotient,
        })
    }

    pub fn t(&self) -> u32 {
        self.grading.t
    }

    fn pos_a(&self, i: usize) -> Option<usize> {
        self.fixed.a_indices.iter().position(|&k| k == i)
    }

    fn pos_b(&self, i: usize) -> Option<usize> {
        self.fixed.b_indices.iter().position(|&k| k == i)
    }

    /// A sector-0 vector of `A` in `A⁰` coordinates.
    fn local_a(&self, v: &SparseVector) -> Option<SparseVector> {
        let mut out = SparseVector::zero(self.fixed.a_indices.len());
        for (i, c) in v.iter() {
            out.set(self.pos_a(i)?, c.clone());
        }
        Some(out)
    }

    fn local_b(&self, v: &SparseVector) -> Option<SparseVector> {
        let mut out = SparseVector::zero(self.fixed.b_indices.len());
        for (i, c) in v.iter() {
            out.set(self.pos_b(i)?, c.clone());
        }
        Some(out)
    }

    /// The fiber as a module over `B⁰/A⁰∂A⁰`.
    pub fn lie_module(&self, fiber: &TwistedFiber) -> LieAlgebroidModule {
        let lifts = &self.quotient.lifts;
        let mut g_action = BilinearMap::zero(lifts.len(), fiber.dim, fiber.dim);
        for (p, &i) in lifts.iter().enumerate() {
            for k in 0..fiber.dim {
                g_action.set_basis(p, k, fiber.g_action.basis(i, k).clone());
            }
        }
        LieAlgebroidModule {
            dim: fiber.dim,
            a_action: fiber.a0_action.clone(),
            g_action,
        }
    }
}

/// `(aa')u = 0` and `(ab)u = (1 - r/T)(a_0 b)u` for `a ∈ A^r`, `a' ∈ A^{T-r}`,
/// `b ∈ B^{T-r}`, `0 < r < T`, together with the module axioms over
/// `B⁰/A⁰∂A⁰`.
pub fn check_fiber_conditions(ctx: &TwistedContext, fiber: &TwistedFiber) -> CheckReport {
    let mut r = CheckReport::new("fiber conditions");
    let b = &ctx.algebroid;
    let g = &ctx.grading;
    let (na0, nb0) = (ctx.fixed.a_indices.len(), ctx.fixed.b_indices.len());
    let n = fiber.dim;
    if fiber.a0_action.left_dim() != na0
        || fiber.a0_action.right_dim() != n
        || fiber.a0_action.out_dim() != n
        || fiber.g_action.left_dim() != nb0
        || fiber.g_action.right_dim() != n
        || fiber.g_action.out_dim() != n
    {
        r.fail("fiber table shapes", vec![], "inconsistent", format!("A⁰: {na0}, B⁰: {nb0}, U: {n}"));
        return r;
    }
    r.absorb(ctx.quotient.lie.check_module(&ctx.lie_module(fiber)));
    let u = |k: usize| SparseVector::unit(n, k);
    let un = |k: usize| format!("u{k}");
    let b0_labels = &ctx.fixed.algebroid.labels;
    for s in ctx.quotient.kernel.rows() {
        for k in 0..n {
            r.compare(
                "A⁰∂A⁰ acts by zero",
                || vec![s.render(Some(b0_labels)), un(k)],
                &fiber.g_action.apply(s, &u(k)),
                &SparseVector::zero(n),
                None,
            );
        }
    }
    let t = g.t as i64;
    let an = |i: usize| b.a.labels[i].clone();
    let bn = |i: usize| b.labels[i].clone();
    for x in 0..b.dim_a() {
        let rx = g.a_sectors[x] as i64;
        if rx == 0 {
            continue;
        }
        for y in 0..b.dim_a() {
            if g.a_sectors[y] as i64 + rx != t {
                continue;
            }
            let prod = b.a.mul(&b.a_basis(x), &b.a_basis(y));
            let Some(p0) = ctx.local_a(&prod) else {
                r.fail("(aa')u = 0", vec![an(x), an(y)], "product outside sector 0", "sector 0");
                continue;
            };
            for k in 0..n {
                r.compare(
                    "(aa')u = 0",
                    || vec![an(x), an(y), un(k)],
                    &fiber.a0_action.apply(&p0, &u(k)),
                    &SparseVector::zero(n),
                    None,
                );
            }
        }
        for y in 0..b.dim_b() {
            if g.b_sectors[y] as i64 + rx != t {
                continue;
            }
            let ab = b.act(&b.a_basis(x), &b.b_basis(y));
            let a0b = b.pi(&b.b_basis(y), &b.a_basis(x)).scaled(&-one());
            let (Some(ab0), Some(a0b0)) = (ctx.local_b(&ab), ctx.local_a(&a0b)) else {
                r.fail("(ab)u = (1 - r/T)(a_0 b)u", vec![an(x), bn(y)], "product outside sector 0", "sector 0");
                continue;
            };
            let factor = one() - frac(rx, t);
            for k in 0..n {
                r.compare(
                    "(ab)u = (1 - r/T)(a_0 b)u",
                    || vec![an(x), bn(y), un(k)],
                    &fiber.g_action.apply(&ab0, &u(k)),
                    &fiber.a0_action.apply(&a0b0, &u(k)).scaled(&factor),
                    None,
                );
            }
        }
    }
    r
}

/// The twisted loop algebra of `B` with the window needed for a module
/// truncated at `cutoff`.
pub fn twisted_loop(ctx: &TwistedContext, cutoff: i64) -> Result<LoopLie> {
    LoopLie::build(ctx.algebroid.to_tca(), &ctx.grading.c_sectors(), ctx.t(), cutoff)
}

/// `M_g(U)`: `a(-1)` acts on `U` through `A⁰`, `b(0)` through `B⁰`, positive
/// modes by zero.
pub fn induce_twisted(ctx: &TwistedContext, lie: Arc<LoopLie>, fiber: &TwistedFiber, cutoff: i64) -> Result<GradedModule> {
    let n0 = lie.tca.dim0();
    let mut ops = HashMap::new();
    for i in 0..lie.dim() {
        if lie.degree(i) != 0 {
            continue;
        }
        let Mode { gen, .. } = lie.modes[i];
        let op = if gen < n0 {
            ctx.pos_a(gen).map(|p| fiber.a0_action.left_operator(p))
        } else {
            ctx.pos_b(gen - n0).map(|p| fiber.g_action.left_operator(p))
        };
        let op = op.ok_or_else(|| Error::Internal("degree-zero mode outside sector 0".into()))?;
        ops.insert(i, op);
    }
    let induced = InducedModule::new(lie, Fiber::Module { dim: fiber.dim, ops }, cutoff)?;
    Ok(GradedModule::free(Flavor::Induced, Arc::new(induced)))
}

/// All `v_q u` for `v` among the algebroid relations, `u` a fiber basis
/// vector and `q` such that the result is materialized.
pub fn relations_w(ctx: &TwistedContext, mg: &GradedModule) -> Result<Vec<StateVector>> {
    let vl = build_vacuum_lie(&ctx.algebroid, 1)?;
    let gens = relation_generators(&ctx.algebroid, &vl)?;
    let engine = FieldEngine::new(vl, mg.clone())?;
    let mut out = Vec::new();
    for v in &gens {
        if v.is_zero() {
            continue;
        }
        for k in 0..mg.induced.fiber_dim() {
            let w = StateVector::new(0, mg.induced.base_vector(k));
            let hi = engine.output_degree(v.degree, 0, 0);
            for qk in (hi - mg.cutoff())..=hi {
                if let Some(s) = engine.coefficient(v, qk, &w)? {
                    if !s.is_zero() {
                        out.push(s);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The universal module: `M_g(U)` modulo the submodule generated by `W`.
pub fn build_mb(mg: &GradedModule, w: &[StateVector]) -> Result<GradedModule> {
    let relations = closure(&mg.induced, mg.relations.clone(), w)?;
    let mb = GradedModule {
        flavor: Flavor::Universal,
        induced: mg.induced.clone(),
        relations,
    };
    mb.assert_invariant()?;
    Ok(mb)
}

/// `J(0) = 0` and `J(d) = {w : x w ∈ J(d + deg x)}` for every lowering basis
/// mode `x`, in quotient coordinates.
pub fn radical_j(m: &GradedModule) -> Result<Vec<Subspace>> {
    let lie = &m.induced.lie;
    let lowering: Vec<usize> = (0..lie.dim()).filter(|&i| lie.degree(i) < 0).collect();
    let mut j: Vec<Subspace> = vec![Subspace::zero(m.dim(0))];
    for d in 1..=m.cutoff() {
        let n = m.dim(d);
        let basis = m.quotient_basis(d);
        let mut rows = Vec::new();
        for &x in &lowering {
            let dd = d + lie.degree(x);
            if dd < 0 {
                continue;
            }
            let mut cols = Vec::with_capacity(n);
            for &c in &basis {
                let v = m
                    .act(x, d, &SparseVector::unit(m.induced.slice_dim(d), c))?
                    .expect("non-negative degree");
                cols.push(j[dd as usize].reduce(&m.coords(dd, &v)));
            }
            rows.extend(transpose(m.dim(dd), &cols));
        }
        j.push(kernel(n, &rows)?);
    }
    Ok(j)
}

/// `m` modulo per-degree subspaces given in quotient coordinates.
pub fn quotient_module(m: &GradedModule, sub: &[Subspace], flavor: Flavor) -> GradedModule {
    let mut relations = m.relations.clone();
    for d in 0..=m.cutoff() {
        for row in sub[d as usize].rows() {
            relations[d as usize].insert(&m.lift(d, row));
        }
    }
    GradedModule {
        flavor,
        induced: m.induced.clone(),
        relations,
    }
}

/// Matrix of a homogeneous degree-0 element of the loop algebra on `M(0)`,
/// in quotient coordinates.
fn degree0_matrix(m: &GradedModule, elem: &SparseVector) -> Result<LinearMap> {
    let cols = m
        .quotient_basis(0)
        .into_iter()
        .map(|c| {
            let v = m.induced.act_element(elem, 0, 0, &SparseVector::unit(m.induced.slice_dim(0), c))?;
            Ok(m.coords(0, &v.expect("degree 0")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearMap::from_columns(m.dim(0), cols))
}

/// Reads the fiber structure back off the degree-0 slice.
pub fn fiber_restriction(ctx: &TwistedContext, m: &GradedModule) -> Result<(TwistedFiber, CheckReport)> {
    let lie = &m.induced.lie;
    let n = m.dim(0);
    let t = lie.t;
    let mut fiber = TwistedFiber::zero(&ctx.algebroid, &ctx.grading, n);
    for (p, &i) in ctx.fixed.a_indices.iter().enumerate() {
        let elem = lie.reduce(&lie.tca.embed0(&ctx.algebroid.a_basis(i)), -t)?;
        let mat = degree0_matrix(m, &elem)?;
        for k in 0..n {
            fiber.a0_action.set_basis(p, k, mat.column(k).clone());
        }
    }
    for (p, &i) in ctx.fixed.b_indices.iter().enumerate() {
        let elem = lie.reduce(&lie.tca.embed1(&ctx.algebroid.b_basis(i)), 0)?;
        let mat = degree0_matrix(m, &elem)?;
        for k in 0..n {
            fiber.g_action.set_basis(p, k, mat.column(k).clone());
        }
    }
    let report = check_fiber_conditions(ctx, &fiber);
    Ok((fiber, report))
}

/// Graded simplicity of the truncation: nonzero, no graded submodule missing
/// degree 0, every basis vector generates the whole truncation, and the
/// degree-0 slice is simple for the operators that preserve it.
pub fn is_simple_graded(m: &GradedModule) -> Result<CheckReport> {
    let t = m.t();
    let mut r = CheckReport::new(format!("graded simplicity up to degree {}", frac(m.cutoff(), t)));
    if m.total_dim() == 0 {
        r.fail("nonzero module", vec![], "zero module", "nonzero");
        return Ok(r);
    }
    let j = radical_j(m)?;
    for d in 0..=m.cutoff() {
        r.count();
        if !j[d as usize].is_zero() {
            r.fail(
                "no graded submodule avoids degree 0",
                vec![format!("degree {}", frac(d, t))],
                format!("dimension {}", j[d as usize].rank()),
                "0",
            );
        }
    }
    for d in 0..=m.cutoff() {
        let labels = m.induced.slice_labels(d);
        for c in m.quotient_basis(d) {
            let seed = StateVector::new(d, SparseVector::unit(m.induced.slice_dim(d), c));
            let sub = generated_submodule(m, &[seed])?;
            for d2 in 0..=m.cutoff() {
                r.count();
                if !sub[d2 as usize].is_full() {
                    r.fail(
                        "every basis vector generates the module",
                        vec![labels[c].clone(), format!("degree {}", frac(d2, t))],
                        format!("codimension {}", sub[d2 as usize].codim()),
                        "0",
                    );
                }
            }
        }
    }
    let n = m.dim(0);
    let lie = &m.induced.lie;
    let mut ops = Vec::new();
    for i in 0..lie.dim() {
        if lie.degree(i) == 0 {
            ops.push(degree0_matrix(m, &SparseVector::unit(lie.dim(), i))?);
        }
    }
    for x in 0..lie.dim() {
        let dx = lie.degree(x);
        if dx <= 0 || dx > m.cutoff() {
            continue;
        }
        for y in 0..lie.dim() {
            if lie.degree(y) != -dx {
                continue;
            }
            let cols = m
                .quotient_basis(0)
                .into_iter()
                .map(|c| {
                    let up = m.act(x, 0, &SparseVector::unit(m.induced.slice_dim(0), c))?.expect("raising");
                    let down = m.act(y, dx, &up)?.expect("degree 0");
                    Ok(m.coords(0, &down))
                })
                .collect::<Result<Vec<_>>>()?;
            ops.push(LinearMap::from_columns(n, cols));
        }
    }
    r.count();
    let span = operator_algebra_dim(n, &ops);
    if span != n * n {
        r.fail(
            "degree-0 slice is simple over the degree-preserving operators",
            vec![format!("dim M(0) = {n}")],
            format!("operator algebra of dimension {span}"),
            format!("{}", n * n),
        );
    }
    Ok(r)
}

/// Dimension of the unital algebra generated by `ops` inside `End(Q^n)`.
fn operator_algebra_dim(n: usize, ops: &[LinearMap]) -> usize {
    let flat = |m: &LinearMap| {
        let mut v = SparseVector::zero(n * n);
        for j in 0..n {
            for (i, c) in m.column(j).iter() {
                v.set(i * n + j, c.clone());
            }
        }
        v
    };
    let mut span = Subspace::zero(n * n);
    let mut queue = vec![LinearMap::identity(n)];
    span.insert(&flat(&queue[0]));
    while let Some(m) = queue.pop() {
        for op in ops {
            let p = op.compose(&m);
            if span.insert(&flat(&p)).is_some() {
                queue.push(p);
            }
        }
    }
    span.rank()
}

/// Every stage of the construction for one fiber.
#[derive(Debug, Clone)]
pub struct TwistedPipeline {
    pub context: TwistedContext,
    pub fiber: TwistedFiber,
    pub fiber_report: CheckReport,
    pub lie: Arc<LoopLie>,
    pub mg: GradedModule,
    /// Span of `W_g(U)` per degree, in monomial coordinates.
    pub w: Vec<Subspace>,
    pub mb: GradedModule,
    /// Set when the fiber conditions fail and `M_B(U)(0)` is smaller than `U`.
    pub degree0_defect: Option<String>,
    /// `J(U)` in quotient coordinates of `M_B(U)`.
    pub j: Vec<Subspace>,
    pub lg: GradedModule,
}

impl TwistedPipeline {
    pub fn j_dims(&self) -> Vec<usize> {
        self.j.iter().map(|s| s.rank()).collect()
    }
}

pub fn build_twisted(b: &VertexAlgebroid, g: &SectorGrading, fiber: &TwistedFiber, cutoff: i64) -> Result<TwistedPipeline> {
    let ctx = TwistedContext::new(b, g)?;
    let fiber_report = check_fiber_conditions(&ctx, fiber);
    if fiber_report.has_failure("fiber table shapes") {
        return Err(Error::Input("fiber tables do not match the sector-0 bases".into()));
    }
    let lie = Arc::new(twisted_loop(&ctx, cutoff)?);
    let mg = induce_twisted(&ctx, lie.clone(), fiber, cutoff)?;
    let seeds = relations_w(&ctx, &mg)?;
    let mut w: Vec<Subspace> = mg.relations.clone();
    for s in &seeds {
        w[s.degree as usize].insert(&s.vector);
    }
    let mb = build_mb(&mg, &seeds)?;
    let mut degree0_defect = None;
    if !w[0].is_zero() || mb.dim(0) != fiber.dim {
        let msg = format!(
            "relations reach degree 0: dim W(0) = {}, dim M_B(U)(0) = {} but dim U = {}",
            w[0].rank(),
            mb.dim(0),
            fiber.dim
        );
        if fiber_report.passed() {
            return Err(Error::Internal(msg));
        }
        degree0_defect = Some(msg);
    }
    let j = radical_j(&mb)?;
    let lg = quotient_module(&mb, &j, Flavor::Simple);
    Ok(TwistedPipeline {
        context: ctx,
        fiber: fiber.clone(),
        fiber_report,
        lie,
        mg,
        w,
        mb,
        degree0_defect,
        j,
        lg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn twisted_heisenberg_pipeline() {
        let b = fixtures::heisenberg();
        let g = fixtures::odd_grading(&b, &[], &[0]);
        let u = TwistedFiber::trivial(&b, &g);
        let p = build_twisted(&b, &g, &u, 5).unwrap();
        assert!(p.fiber_report.passed());
        assert_eq!(p.mb.dims(), vec![1, 1, 1, 2, 2, 3]);
        assert!(p.j.iter().all(|s| s.is_zero()));
        assert!(is_simple_graded(&p.lg).unwrap().passed());
        let (back, rep) = fiber_restriction(&p.context, &p.mb).unwrap();
        assert!(rep.passed());
        assert_eq!(back, u);
    }

    #[test]
    fn nilpotent_twisted_is_fiber_only() {
        let b = fixtures::nilpotent();
        let g = fixtures::odd_grading(&b, &[1], &[]);
        let u = TwistedFiber::trivial(&b, &g);
        let p = build_twisted(&b, &g, &u, 2).unwrap();
        assert_eq!(p.mb.dims(), vec![1, 0, 0]);
    }

    #[test]
    fn doubled_fiber_is_not_simple() {
        let b = fixtures::heisenberg();
        let g = SectorGrading::trivial(&b);
        let u = TwistedFiber::trivial(&b, &g);
        let p = build_twisted(&b, &g, &u.direct_sum(&u), 2).unwrap();
        let r = is_simple_graded(&p.lg).unwrap();
        assert!(r.has_failure("every basis vector generates"));
    }
}
