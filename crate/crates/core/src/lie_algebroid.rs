//! Lie A-algebroids, their modules, and the quotient `B / A∂A`.

use crate::algebra::CommAlgebra;
use crate::algebroid::VertexAlgebroid;
use crate::error::{Error, Result};
use crate::linalg::{BilinearMap, SparseVector, Subspace};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebroid {
    pub a: CommAlgebra,
    pub labels: Vec<String>,
    pub bracket: BilinearMap,
    /// `(a, u) ↦ a u`, `A × g → g`.
    pub action: BilinearMap,
    /// `(u, a) ↦ u a`, `g × A → A`.
    pub anchor: BilinearMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebroidModule {
    pub dim: usize,
    /// `A × W → W`.
    pub a_action: BilinearMap,
    /// `g × W → W`.
    pub g_action: BilinearMap,
}

/// `B / A∂A` together with the data relating it to `B`.
#[derive(Debug, Clone)]
pub struct AlgebroidQuotient {
    pub lie: LieAlgebroid,
    /// `A∂A = span{a * ∂a'}` inside `B`.
    pub kernel: Subspace,
    /// Basis vectors of `B` whose classes form the quotient basis.
    pub lifts: Vec<usize>,
}

impl AlgebroidQuotient {
    /// Class of `v ∈ B` in quotient coordinates.
    pub fn project(&self, v: &SparseVector) -> SparseVector {
        let r = self.kernel.reduce(v);
        SparseVector::from_entries(
            self.lifts.len(),
            self.lifts.iter().enumerate().map(|(k, &c)| (k, r.get(c))),
        )
    }
}

impl LieAlgebroid {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(a: CommAlgebra) -> Self {
        let na = a.dim();
        Self {
            a,
            labels: vec![],
            bracket: BilinearMap::zero(0, 0, 0),
            action: BilinearMap::zero(na, 0, 0),
            anchor: BilinearMap::zero(0, na, na),
        }
    }

    /// Antisymmetry, Jacobi, `A`-module laws, derivation and homomorphism
    /// properties of the anchor, `[u, av] = a[u,v] + (ua)v` and
    /// `a(ub) = (au)b`.
    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::new("Lie algebroid");
        let (na, ng) = (self.a.dim(), self.dim());
        let la = Some(self.a.labels.as_slice());
        let lg = Some(self.labels.as_slice());
        let an = |i: usize| self.a.labels[i].clone();
        let gn = |i: usize| self.labels[i].clone();
        let a = |i| SparseVector::unit(na, i);
        let g = |i| SparseVector::unit(ng, i);
        let br = |x: &SparseVector, y: &SparseVector| self.bracket.apply(x, y);
        let act = |x: &SparseVector, y: &SparseVector| self.action.apply(x, y);
        let anc = |x: &SparseVector, y: &SparseVector| self.anchor.apply(x, y);
        let mul = |x: &SparseVector, y: &SparseVector| self.a.mul(x, y);

        for u in 0..ng {
            r.compare("antisymmetry [u,u] = 0", || vec![gn(u)], &br(&g(u), &g(u)), &SparseVector::zero(ng), lg);
            r.compare("unit action", || vec![gn(u)], &act(&self.a.unit, &g(u)), &g(u), lg);
            for v in 0..ng {
                r.compare(
                    "antisymmetry [u,v] = -[v,u]",
                    || vec![gn(u), gn(v)],
                    &br(&g(u), &g(v)),
                    &br(&g(v), &g(u)).scaled(&crate::rational::minus_one()),
                    lg,
                );
                for w in 0..ng {
                    let lhs = br(&g(u), &br(&g(v), &g(w)));
                    let rhs = br(&br(&g(u), &g(v)), &g(w)).add(&br(&g(v), &br(&g(u), &g(w))));
                    r.compare("Jacobi identity", || vec![gn(u), gn(v), gn(w)], &lhs, &rhs, lg);
                }
                for x in 0..na {
                    let lhs = anc(&br(&g(u), &g(v)), &a(x));
                    let rhs = anc(&g(u), &anc(&g(v), &a(x))).sub(&anc(&g(v), &anc(&g(u), &a(x))));
                    r.compare("anchor is a Lie homomorphism", || vec![gn(u), gn(v), an(x)], &lhs, &rhs, la);

                    let lhs = br(&g(u), &act(&a(x), &g(v)));
                    let rhs = act(&a(x), &br(&g(u), &g(v))).add(&act(&anc(&g(u), &a(x)), &g(v)));
                    r.compare("[u,av] = a[u,v] + (ua)v", || vec![gn(u), an(x), gn(v)], &lhs, &rhs, lg);
                }
            }
            for x in 0..na {
                for y in 0..na {
                    let lhs = anc(&g(u), &mul(&a(x), &a(y)));
                    let rhs = mul(&anc(&g(u), &a(x)), &a(y)).add(&mul(&a(x), &anc(&g(u), &a(y))));
                    r.compare("anchor acts by derivations", || vec![gn(u), an(x), an(y)], &lhs, &rhs, la);

                    let lhs = act(&a(x), &act(&a(y), &g(u)));
                    let rhs = act(&mul(&a(x), &a(y)), &g(u));
                    r.compare("A-module law", || vec![an(x), an(y), gn(u)], &lhs, &rhs, lg);

                    let lhs = mul(&a(x), &anc(&g(u), &a(y)));
                    let rhs = anc(&act(&a(x), &g(u)), &a(y));
                    r.compare("a(ub) = (au)b", || vec![an(x), gn(u), an(y)], &lhs, &rhs, la);
                }
            }
        }
        r
    }

    /// Checks that `W` is a module: `A`- and `g`-module laws,
    /// `u(aw) - a(uw) = (ua)w` and `a(uw) = (au)w`.
    pub fn check_module(&self, w: &LieAlgebroidModule) -> CheckReport {
        let mut r = CheckReport::new("Lie algebroid module");
        let (na, ng, nw) = (self.a.dim(), self.dim(), w.dim);
        if w.a_action.left_dim() != na
            || w.a_action.right_dim() != nw
            || w.g_action.left_dim() != ng
            || w.g_action.right_dim() != nw
        {
            r.fail("table shapes", vec![], "inconsistent", "consistent");
            return r;
        }
        let an = |i: usize| self.a.labels[i].clone();
        let gn = |i: usize| self.labels[i].clone();
        let wn = |i: usize| format!("w{i}");
        let a = |i| SparseVector::unit(na, i);
        let g = |i| SparseVector::unit(ng, i);
        let wb = |i| SparseVector::unit(nw, i);
        let aw = |x: &SparseVector, y: &SparseVector| w.a_action.apply(x, y);
        let gw = |x: &SparseVector, y: &SparseVector| w.g_action.apply(x, y);

        for k in 0..nw {
            r.compare("unit acts as identity", || vec![wn(k)], &aw(&self.a.unit, &wb(k)), &wb(k), None);
            for x in 0..na {
                for y in 0..na {
                    let lhs = aw(&a(x), &aw(&a(y), &wb(k)));
                    let rhs = aw(&self.a.mul(&a(x), &a(y)), &wb(k));
                    r.compare("A-module law", || vec![an(x), an(y), wn(k)], &lhs, &rhs, None);
                }
            }
            for u in 0..ng {
                for v in 0..ng {
                    let lhs = gw(&g(u), &gw(&g(v), &wb(k))).sub(&gw(&g(v), &gw(&g(u), &wb(k))));
                    let rhs = gw(&self.bracket.apply(&g(u), &g(v)), &wb(k));
                    r.compare("g-module law", || vec![gn(u), gn(v), wn(k)], &lhs, &rhs, None);
                }
                for x in 0..na {
                    let lhs = gw(&g(u), &aw(&a(x), &wb(k))).sub(&aw(&a(x), &gw(&g(u), &wb(k))));
                    let rhs = aw(&self.anchor.apply(&g(u), &a(x)), &wb(k));
                    r.compare("u(aw) - a(uw) = (ua)w", || vec![gn(u), an(x), wn(k)], &lhs, &rhs, None);

                    let lhs = aw(&a(x), &gw(&g(u), &wb(k)));
                    let rhs = gw(&self.action.apply(&a(x), &g(u)), &wb(k));
                    r.compare("a(uw) = (au)w", || vec![an(x), gn(u), wn(k)], &lhs, &rhs, None);
                }
            }
        }
        r
    }
}

impl LieAlgebroidModule {
    /// `A` acting on itself by multiplication and `g` by the anchor.
    pub fn regular(lie: &LieAlgebroid) -> Self {
        Self {
            dim: lie.a.dim(),
            a_action: lie.a.product.clone(),
            g_action: lie.anchor.clone(),
        }
    }

    pub fn zero(lie: &LieAlgebroid, dim: usize) -> Self {
        Self {
            dim,
            a_action: BilinearMap::zero(lie.a.dim(), dim, dim),
            g_action: BilinearMap::zero(lie.dim(), dim, dim),
        }
    }
}

/// The Lie algebroid `B / A∂A`.
///
/// Fails with an internal error if the induced operations are not well
/// defined on the quotient, which cannot happen for a valid vertex algebroid.
pub fn lie_algebroid_quotient(b: &VertexAlgebroid) -> Result<AlgebroidQuotient> {
    let (na, nb) = (b.dim_a(), b.dim_b());
    let mut kernel = Subspace::zero(nb);
    for x in 0..na {
        for y in 0..na {
            kernel.insert(&b.act(&b.a_basis(x), &b.d(&b.a_basis(y))));
        }
    }
    let lifts = kernel.free_columns();
    let m = lifts.len();
    let quotient = AlgebroidQuotient {
        lie: LieAlgebroid::zero(b.a.clone()),
        kernel: kernel.clone(),
        lifts: lifts.clone(),
    };
    let mut bracket = BilinearMap::zero(m, m, m);
    let mut action = BilinearMap::zero(na, m, m);
    let mut anchor = BilinearMap::zero(m, na, na);
    for (p, &i) in lifts.iter().enumerate() {
        for (q, &j) in lifts.iter().enumerate() {
            bracket.set_basis(p, q, quotient.project(&b.br(&b.b_basis(i), &b.b_basis(j))));
        }
        for x in 0..na {
            action.set_basis(x, p, quotient.project(&b.act(&b.a_basis(x), &b.b_basis(i))));
            anchor.set_basis(p, x, b.pi(&b.b_basis(i), &b.a_basis(x)));
        }
    }
    // Well-definedness: the kernel must be killed by every induced operation.
    for s in kernel.rows() {
        for j in 0..nb {
            let bj = b.b_basis(j);
            if !quotient.project(&b.br(s, &bj)).is_zero() || !quotient.project(&b.br(&bj, s)).is_zero() {
                return Err(Error::Internal("A∂A is not an ideal for the bracket".into()));
            }
        }
        for x in 0..na {
            if !quotient.project(&b.act(&b.a_basis(x), s)).is_zero() {
                return Err(Error::Internal("A∂A is not an A-submodule".into()));
            }
            if !b.pi(s, &b.a_basis(x)).is_zero() {
                return Err(Error::Internal("anchor does not vanish on A∂A".into()));
            }
        }
    }
    Ok(AlgebroidQuotient {
        lie: LieAlgebroid {
            a: b.a.clone(),
            labels: lifts.iter().map(|&i| b.labels[i].clone()).collect(),
            bracket,
            action,
            anchor,
        },
        kernel,
        lifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one};

    #[test]
    fn non_antisymmetric_bracket_fails() {
        let mut g = LieAlgebroid::zero(CommAlgebra::scalars("e"));
        g.labels = vec!["u".into()];
        g.bracket = BilinearMap::zero(1, 1, 1);
        g.bracket.add_entry(0, 0, 0, &one());
        g.action = BilinearMap::zero(1, 1, 1);
        g.action.add_entry(0, 0, 0, &one());
        g.anchor = BilinearMap::zero(1, 1, 1);
        assert!(g.check().has_failure("antisymmetry"));
    }

    #[test]
    fn zero_algebroid_and_module() {
        let g = LieAlgebroid::zero(CommAlgebra::scalars("e"));
        assert!(g.check().passed());
        assert!(g.check_module(&LieAlgebroidModule::zero(&g, 0)).passed());
    }

    #[test]
    fn mismatched_module_fails() {
        // g = Q·u acting on A = Q[x]/(x²) by u(x) = x, W one-dimensional with
        // both actions trivial except x·w: then (ux)w ≠ 0 while u(xw) = x(uw) = 0.
        let a = CommAlgebra::truncated_polynomials("x", 2);
        let mut g = LieAlgebroid::zero(a.clone());
        g.labels = vec!["u".into()];
        g.bracket = BilinearMap::zero(1, 1, 1);
        g.action = BilinearMap::zero(2, 1, 1);
        g.action.add_entry(0, 0, 0, &one());
        g.anchor = BilinearMap::zero(1, 2, 2);
        g.anchor.add_entry(0, 1, 1, &one());
        let mut w = LieAlgebroidModule::zero(&g, 1);
        w.a_action.add_entry(0, 0, 0, &one());
        w.a_action.add_entry(1, 0, 0, &int(1));
        let r = g.check_module(&w);
        assert!(r.has_failure("u(aw) - a(uw) = (ua)w"));
    }
}
