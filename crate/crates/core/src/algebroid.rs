//! Vertex A-algebroids and their conversion to 1-truncated conformal
//! algebras on `A ⊕ B`.

use crate::algebra::CommAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{BilinearMap, LinearMap, SparseVector};
use crate::rational::minus_one;
use crate::report::CheckReport;
use crate::tca::Tca;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexAlgebroid {
    pub a: CommAlgebra,
    pub labels: Vec<String>,
    /// `(a, v) ↦ a * v`, `A × B → B`.
    pub action: BilinearMap,
    /// Leibniz bracket `B × B → B`.
    pub bracket: BilinearMap,
    /// `(v, a) ↦ π(v)(a)`, `B × A → A`.
    pub anchor: BilinearMap,
    /// Symmetric pairing `B × B → A`.
    pub pairing: BilinearMap,
    /// `∂: A → B`.
    pub partial: LinearMap,
}

impl VertexAlgebroid {
    /// All structure maps zero.
    pub fn zero(a: CommAlgebra, labels: Vec<String>) -> Self {
        let (na, nb) = (a.dim(), labels.len());
        Self {
            a,
            labels,
            action: BilinearMap::zero(na, nb, nb),
            bracket: BilinearMap::zero(nb, nb, nb),
            anchor: BilinearMap::zero(nb, na, na),
            pairing: BilinearMap::zero(nb, nb, na),
            partial: LinearMap::zero(na, nb),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.a.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.labels.len()
    }

    pub fn validate_shapes(&self) -> Result<()> {
        let (na, nb) = (self.dim_a(), self.dim_b());
        let ok = self.action.left_dim() == na
            && self.action.right_dim() == nb
            && self.action.out_dim() == nb
            && self.bracket.left_dim() == nb
            && self.bracket.right_dim() == nb
            && self.bracket.out_dim() == nb
            && self.anchor.left_dim() == nb
            && self.anchor.right_dim() == na
            && self.anchor.out_dim() == na
            && self.pairing.left_dim() == nb
            && self.pairing.right_dim() == nb
            && self.pairing.out_dim() == na
            && self.partial.in_dim() == na
            && self.partial.out_dim() == nb;
        if ok {
            Ok(())
        } else {
            Err(Error::Input("algebroid table shapes are inconsistent".into()))
        }
    }

    pub fn a_basis(&self, i: usize) -> SparseVector {
        SparseVector::unit(self.dim_a(), i)
    }

    pub fn b_basis(&self, i: usize) -> SparseVector {
        SparseVector::unit(self.dim_b(), i)
    }

    pub fn act(&self, a: &SparseVector, v: &SparseVector) -> SparseVector {
        self.action.apply(a, v)
    }

    pub fn br(&self, u: &SparseVector, v: &SparseVector) -> SparseVector {
        self.bracket.apply(u, v)
    }

    pub fn pi(&self, v: &SparseVector, a: &SparseVector) -> SparseVector {
        self.anchor.apply(v, a)
    }

    pub fn pair(&self, u: &SparseVector, v: &SparseVector) -> SparseVector {
        self.pairing.apply(u, v)
    }

    pub fn d(&self, a: &SparseVector) -> SparseVector {
        self.partial.apply(a)
    }

    /// Checks the structural requirements (unit action, Leibniz law, anchor a
    /// Leibniz homomorphism into derivations, symmetric pairing, `π∘∂ = 0`)
    /// and the nine compatibility conditions on every basis tuple.
    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::new("vertex algebroid");
        let (na, nb) = (self.dim_a(), self.dim_b());
        let la = Some(self.a.labels.as_slice());
        let lb = Some(self.labels.as_slice());
        let an = |i: usize| self.a.labels[i].clone();
        let bn = |i: usize| self.labels[i].clone();
        let a = |i| self.a_basis(i);
        let b = |i| self.b_basis(i);
        let mul = |x: &SparseVector, y: &SparseVector| self.a.mul(x, y);

        for v in 0..nb {
            r.compare("unit action 1*v = v", || vec![bn(v)], &self.act(&self.a.unit, &b(v)), &b(v), lb);
        }
        for u in 0..nb {
            for v in 0..nb {
                r.compare(
                    "symmetric pairing",
                    || vec![bn(u), bn(v)],
                    &self.pair(&b(u), &b(v)),
                    &self.pair(&b(v), &b(u)),
                    la,
                );
                for w in 0..nb {
                    let lhs = self.br(&b(u), &self.br(&b(v), &b(w)));
                    let rhs = self
                        .br(&self.br(&b(u), &b(v)), &b(w))
                        .add(&self.br(&b(v), &self.br(&b(u), &b(w))));
                    r.compare("Leibniz law", || vec![bn(u), bn(v), bn(w)], &lhs, &rhs, lb);
                }
                let uv = self.br(&b(u), &b(v));
                for x in 0..na {
                    let lhs = self.pi(&uv, &a(x));
                    let rhs = self
                        .pi(&b(u), &self.pi(&b(v), &a(x)))
                        .sub(&self.pi(&b(v), &self.pi(&b(u), &a(x))));
                    r.compare(
                        "anchor is a Leibniz homomorphism",
                        || vec![bn(u), bn(v), an(x)],
                        &lhs,
                        &rhs,
                        la,
                    );
                }
            }
            for x in 0..na {
                for y in 0..na {
                    let lhs = self.pi(&b(u), &mul(&a(x), &a(y)));
                    let rhs = mul(&self.pi(&b(u), &a(x)), &a(y)).add(&mul(&a(x), &self.pi(&b(u), &a(y))));
                    r.compare("anchor acts by derivations", || vec![bn(u), an(x), an(y)], &lhs, &rhs, la);
                }
            }
        }
        for x in 0..na {
            let dx = self.d(&a(x));
            for y in 0..na {
                r.compare(
                    "π∘∂ = 0",
                    || vec![an(x), an(y)],
                    &self.pi(&dx, &a(y)),
                    &SparseVector::zero(na),
                    la,
                );
            }
        }

        // The nine compatibility conditions.
        for x in 0..na {
            for y in 0..na {
                let xy = mul(&a(x), &a(y));
                for v in 0..nb {
                    let lhs = self.act(&a(x), &self.act(&a(y), &b(v))).sub(&self.act(&xy, &b(v)));
                    let rhs = self
                        .act(&self.pi(&b(v), &a(x)), &self.d(&a(y)))
                        .add(&self.act(&self.pi(&b(v), &a(y)), &self.d(&a(x))));
                    r.compare(
                        "a*(a'*v) - (aa')*v = π(v)(a)*∂a' + π(v)(a')*∂a",
                        || vec![an(x), an(y), bn(v)],
                        &lhs,
                        &rhs,
                        lb,
                    );
                }
                let lhs = self.d(&xy);
                let rhs = self.act(&a(x), &self.d(&a(y))).add(&self.act(&a(y), &self.d(&a(x))));
                r.compare("∂(aa') = a*∂a' + a'*∂a", || vec![an(x), an(y)], &lhs, &rhs, lb);
            }
        }
        for u in 0..nb {
            for x in 0..na {
                for v in 0..nb {
                    let lhs = self.br(&b(u), &self.act(&a(x), &b(v)));
                    let rhs = self
                        .act(&self.pi(&b(u), &a(x)), &b(v))
                        .add(&self.act(&a(x), &self.br(&b(u), &b(v))));
                    r.compare("[u, a*v] = π(u)(a)*v + a*[u,v]", || vec![bn(u), an(x), bn(v)], &lhs, &rhs, lb);

                    let lhs = self.pair(&self.act(&a(x), &b(u)), &b(v));
                    let rhs = mul(&a(x), &self.pair(&b(u), &b(v))).sub(&self.pi(&b(u), &self.pi(&b(v), &a(x))));
                    r.compare(
                        "<a*u, v> = a<u,v> - π(u)(π(v)(a))",
                        || vec![an(x), bn(u), bn(v)],
                        &lhs,
                        &rhs,
                        la,
                    );
                }
                let av = self.act(&a(x), &b(u));
                for y in 0..na {
                    let lhs = self.pi(&av, &a(y));
                    let rhs = mul(&a(x), &self.pi(&b(u), &a(y)));
                    r.compare("π(a*v) = aπ(v)", || vec![an(x), bn(u), an(y)], &lhs, &rhs, la);
                }
                let dx = self.d(&a(x));
                r.compare(
                    "[v, ∂a] = ∂(π(v)(a))",
                    || vec![bn(u), an(x)],
                    &self.br(&b(u), &dx),
                    &self.d(&self.pi(&b(u), &a(x))),
                    lb,
                );
                r.compare(
                    "<v, ∂a> = π(v)(a)",
                    || vec![bn(u), an(x)],
                    &self.pair(&b(u), &dx),
                    &self.pi(&b(u), &a(x)),
                    la,
                );
            }
            for v in 0..nb {
                let lhs = self.br(&b(u), &b(v)).add(&self.br(&b(v), &b(u)));
                let rhs = self.d(&self.pair(&b(u), &b(v)));
                r.compare("[u,v] + [v,u] = ∂<u,v>", || vec![bn(u), bn(v)], &lhs, &rhs, lb);
                for w in 0..nb {
                    let lhs = self.pi(&b(u), &self.pair(&b(v), &b(w)));
                    let rhs = self
                        .pair(&self.br(&b(u), &b(v)), &b(w))
                        .add(&self.pair(&b(v), &self.br(&b(u), &b(w))));
                    r.compare(
                        "π(v)(<v1,v2>) = <[v,v1],v2> + <v1,[v,v2]>",
                        || vec![bn(u), bn(v), bn(w)],
                        &lhs,
                        &rhs,
                        la,
                    );
                }
            }
        }
        r.note(
            "invariance of the pairing is checked on all basis triples (v, v1, v2) independently, \
             which already covers any polarized reading",
        );
        r
    }

    /// The 1-truncated conformal algebra on `C0 = A`, `C1 = B` with
    /// `a_i a' = 0`, `u_0 v = [u,v]`, `u_1 v = <u,v>`, `u_0 a = π(u)(a)` and
    /// `a_0 u = -π(u)(a)`.
    pub fn to_tca(&self) -> Tca {
        let (na, nb) = (self.dim_a(), self.dim_b());
        let mut c = Tca::zero(self.a.labels.clone(), self.labels.clone());
        c.partial = self.partial.clone();
        c.u0v = self.bracket.clone();
        c.u1v = self.pairing.clone();
        c.u0a = self.anchor.clone();
        let mut a0u = BilinearMap::zero(na, nb, na);
        for x in 0..na {
            for u in 0..nb {
                a0u.set_basis(x, u, self.anchor.basis(u, x).scaled(&minus_one()));
            }
        }
        c.a0u = a0u;
        c
    }

    /// Builds the algebroid from a conformal algebra on `A ⊕ B` together with
    /// an `A`-action on `B`, and checks the compatibility conditions that make
    /// the two descriptions equivalent.
    pub fn from_tca(a: &CommAlgebra, tca: &Tca, action: &BilinearMap) -> Result<(VertexAlgebroid, CheckReport)> {
        let (na, nb) = (a.dim(), tca.dim1());
        if tca.dim0() != na {
            return Err(Error::Dimension {
                expected: na,
                found: tca.dim0(),
            });
        }
        if action.left_dim() != na || action.right_dim() != nb || action.out_dim() != nb {
            return Err(Error::Input("A-action table has the wrong shape".into()));
        }
        let alg = VertexAlgebroid {
            a: a.clone(),
            labels: tca.labels1.clone(),
            action: action.clone(),
            bracket: tca.u0v.clone(),
            anchor: tca.u0a.clone(),
            pairing: tca.u1v.clone(),
            partial: tca.partial.clone(),
        };
        let mut r = CheckReport::new("conformal algebra with A-action");
        r.absorb(tca.check());
        let la = Some(a.labels.as_slice());
        let lb = Some(alg.labels.as_slice());
        let an = |i: usize| a.labels[i].clone();
        let bn = |i: usize| alg.labels[i].clone();
        let ab = |i| alg.a_basis(i);
        let bb = |i| alg.b_basis(i);
        // u_0 a = -a_0 u is part of the conformal algebra axioms; here we only
        // need the extra compatibilities with the module structure.
        for x in 0..na {
            for y in 0..na {
                let xy = a.mul(&ab(x), &ab(y));
                for u in 0..nb {
                    let lhs = alg.act(&ab(x), &alg.act(&ab(y), &bb(u))).sub(&alg.act(&xy, &bb(u)));
                    let rhs = alg
                        .act(&alg.pi(&bb(u), &ab(x)), &alg.d(&ab(y)))
                        .add(&alg.act(&alg.pi(&bb(u), &ab(y)), &alg.d(&ab(x))));
                    r.compare(
                        "a(a'u) - (aa')u = (u_0 a)∂a' + (u_0 a')∂a",
                        || vec![an(x), an(y), bn(u)],
                        &lhs,
                        &rhs,
                        lb,
                    );
                    let lhs = alg.pi(&bb(u), &xy);
                    let rhs = a
                        .mul(&ab(x), &alg.pi(&bb(u), &ab(y)))
                        .add(&a.mul(&alg.pi(&bb(u), &ab(x)), &ab(y)));
                    r.compare("u_0(aa') = a(u_0 a') + (u_0 a)a'", || vec![bn(u), an(x), an(y)], &lhs, &rhs, la);
                }
                let lhs = alg.d(&xy);
                let rhs = alg.act(&ab(x), &alg.d(&ab(y))).add(&alg.act(&ab(y), &alg.d(&ab(x))));
                r.compare("∂(aa') = a∂a' + a'∂a", || vec![an(x), an(y)], &lhs, &rhs, lb);
            }
        }
        for u in 0..nb {
            for x in 0..na {
                for v in 0..nb {
                    let lhs = alg.br(&bb(u), &alg.act(&ab(x), &bb(v))).sub(&alg.act(&ab(x), &alg.br(&bb(u), &bb(v))));
                    let rhs = alg.act(&alg.pi(&bb(u), &ab(x)), &bb(v));
                    r.compare("u_0(av) - a(u_0 v) = (u_0 a)v", || vec![bn(u), an(x), bn(v)], &lhs, &rhs, lb);

                    let lhs = alg.pair(&alg.act(&ab(x), &bb(u)), &bb(v));
                    let rhs = a
                        .mul(&ab(x), &alg.pair(&bb(u), &bb(v)))
                        .sub(&alg.pi(&bb(u), &alg.pi(&bb(v), &ab(x))));
                    r.compare("(au)_1 v = a(u_1 v) - u_0 v_0 a", || vec![an(x), bn(u), bn(v)], &lhs, &rhs, la);
                }
            }
        }
        for x in 0..na {
            for y in 0..na {
                for v in 0..nb {
                    // a_0(a'v) = a'(a_0 v): -π(a'v)(a) = -a'π(v)(a)
                    let lhs = alg.pi(&alg.act(&ab(y), &bb(v)), &ab(x));
                    let rhs = a.mul(&ab(y), &alg.pi(&bb(v), &ab(x)));
                    r.compare("a_0(a'v) = a'(a_0 v)", || vec![an(x), an(y), bn(v)], &lhs, &rhs, la);
                }
            }
        }
        Ok((alg, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::one;

    fn heisenberg() -> VertexAlgebroid {
        let mut b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), vec!["β".into()]);
        b.action.add_entry(0, 0, 0, &one());
        b.pairing.add_entry(0, 0, 0, &one());
        b
    }

    #[test]
    fn heisenberg_passes_and_converts() {
        let b = heisenberg();
        assert!(b.check().passed());
        let c = b.to_tca();
        assert!(c.check().passed());
        let (back, r) = VertexAlgebroid::from_tca(&b.a, &c, &b.action).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(back, b);
    }

    #[test]
    fn inconsistent_pairing_fails() {
        let mut b = heisenberg();
        // 2β paired with β no longer scales with a
        b.action = BilinearMap::zero(1, 1, 1);
        b.action.add_entry(0, 0, 0, &crate::rational::int(2));
        let r = b.check();
        assert!(r.has_failure("<a*u, v> = a<u,v> - π(u)(π(v)(a))"));
    }

    #[test]
    fn zero_algebroid_passes() {
        let b = VertexAlgebroid::zero(CommAlgebra::scalars("e"), vec![]);
        assert!(b.check().passed());
        let c = b.to_tca();
        assert_eq!(c.dim1(), 0);
        assert!(c.check().passed());
    }
}
