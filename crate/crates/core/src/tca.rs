//! 1-truncated conformal algebras `C = C0 ⊕ C1`.
//!
//! Elements of `C` are vectors of dimension `dim0 + dim1` with the `C0`
//! coordinates first. Only four products can be nonzero for degree reasons:
//! `a_0 u ∈ C0`, `u_0 a ∈ C0`, `u_0 v ∈ C1` and `u_1 v ∈ C0`
//! (`a ∈ C0`, `u, v ∈ C1`).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{BilinearMap, LinearMap, SparseVector};
use crate::rational::{minus_one, Rational};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq)]
pub struct Tca {
    pub labels0: Vec<String>,
    pub labels1: Vec<String>,
    /// `∂: C0 → C1`.
    pub partial: LinearMap,
    /// `(a, u) ↦ a_0 u`, `C0 × C1 → C0`.
    pub a0u: BilinearMap,
    /// `(u, a) ↦ u_0 a`, `C1 × C0 → C0`.
    pub u0a: BilinearMap,
    /// `(u, v) ↦ u_0 v`, `C1 × C1 → C1`.
    pub u0v: BilinearMap,
    /// `(u, v) ↦ u_1 v`, `C1 × C1 → C0`.
    pub u1v: BilinearMap,
}

impl Tca {
    pub fn zero(labels0: Vec<String>, labels1: Vec<String>) -> Self {
        let (n0, n1) = (labels0.len(), labels1.len());
        Self {
            labels0,
            labels1,
            partial: LinearMap::zero(n0, n1),
            a0u: BilinearMap::zero(n0, n1, n0),
            u0a: BilinearMap::zero(n1, n0, n0),
            u0v: BilinearMap::zero(n1, n1, n1),
            u1v: BilinearMap::zero(n1, n1, n0),
        }
    }

    pub fn dim0(&self) -> usize {
        self.labels0.len()
    }

    pub fn dim1(&self) -> usize {
        self.labels1.len()
    }

    pub fn dim(&self) -> usize {
        self.dim0() + self.dim1()
    }

    /// Labels of `C`, `C0` first.
    pub fn labels(&self) -> Vec<String> {
        self.labels0.iter().chain(self.labels1.iter()).cloned().collect()
    }

    pub fn basis(&self, i: usize) -> SparseVector {
        SparseVector::unit(self.dim(), i)
    }

    pub fn is_degree0(&self, i: usize) -> bool {
        i < self.dim0()
    }

    /// Splits an element of `C` into its `C0` and `C1` parts.
    pub fn split(&self, x: &SparseVector) -> (SparseVector, SparseVector) {
        let n0 = self.dim0();
        let mut x0 = SparseVector::zero(n0);
        let mut x1 = SparseVector::zero(self.dim1());
        for (i, c) in x.iter() {
            if i < n0 {
                x0.set(i, c.clone());
            } else {
                x1.set(i - n0, c.clone());
            }
        }
        (x0, x1)
    }

    pub fn embed0(&self, x0: &SparseVector) -> SparseVector {
        SparseVector::from_entries(self.dim(), x0.iter().map(|(i, c)| (i, c.clone())))
    }

    pub fn embed1(&self, x1: &SparseVector) -> SparseVector {
        let n0 = self.dim0();
        SparseVector::from_entries(self.dim(), x1.iter().map(|(i, c)| (i + n0, c.clone())))
    }

    /// `∂` extended to `C` by zero on `C1`.
    pub fn derive(&self, x: &SparseVector) -> SparseVector {
        let (x0, _) = self.split(x);
        self.embed1(&self.partial.apply(&x0))
    }

    /// The product `x_i y` for `i ∈ {0, 1}` on arbitrary elements of `C`.
    pub fn op(&self, i: u8, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let (x0, x1) = self.split(x);
        let (y0, y1) = self.split(y);
        let mut out = SparseVector::zero(self.dim());
        match i {
            0 => {
                if !x0.is_zero() && !y1.is_zero() {
                    out = self.embed0(&self.a0u.apply(&x0, &y1));
                }
                if !x1.is_zero() && !y0.is_zero() {
                    out = out.add(&self.embed0(&self.u0a.apply(&x1, &y0)));
                }
                if !x1.is_zero() && !y1.is_zero() {
                    out = out.add(&self.embed1(&self.u0v.apply(&x1, &y1)));
                }
            }
            1 => {
                if !x1.is_zero() && !y1.is_zero() {
                    out = self.embed0(&self.u1v.apply(&x1, &y1));
                }
            }
            _ => {}
        }
        out
    }

    /// Checks the derivation, commutativity and associativity axioms on all
    /// basis tuples.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("1-truncated conformal algebra");
        let labels = self.labels();
        let lab = Some(labels.as_slice());
        let n0 = self.dim0();
        let n = self.dim();
        let name = |i: usize| labels[i].clone();

        for a in 0..n0 {
            let ea = self.basis(a);
            let da = self.derive(&ea);
            for x in 0..n {
                let ex = self.basis(x);
                report.compare(
                    "derivation: (∂a)_0 = 0",
                    || vec![name(a), name(x)],
                    &self.op(0, &da, &ex),
                    &SparseVector::zero(n),
                    lab,
                );
                report.compare(
                    "derivation: (∂a)_1 = -a_0",
                    || vec![name(a), name(x)],
                    &self.op(1, &da, &ex),
                    &self.op(0, &ea, &ex).scaled(&minus_one()),
                    lab,
                );
            }
            for u in n0..n {
                let eu = self.basis(u);
                report.compare(
                    "derivation: ∂(u_0 a) = u_0 ∂a",
                    || vec![name(u), name(a)],
                    &self.derive(&self.op(0, &eu, &ea)),
                    &self.op(0, &eu, &da),
                    lab,
                );
                report.compare(
                    "commutativity: u_0 a = -a_0 u",
                    || vec![name(u), name(a)],
                    &self.op(0, &eu, &ea),
                    &self.op(0, &ea, &eu).scaled(&minus_one()),
                    lab,
                );
            }
        }
        for u in n0..n {
            let eu = self.basis(u);
            for v in n0..n {
                let ev = self.basis(v);
                let rhs = self
                    .op(0, &ev, &eu)
                    .scaled(&minus_one())
                    .add(&self.derive(&self.op(1, &ev, &eu)));
                report.compare(
                    "commutativity: u_0 v = -v_0 u + ∂(v_1 u)",
                    || vec![name(u), name(v)],
                    &self.op(0, &eu, &ev),
                    &rhs,
                    lab,
                );
                report.compare(
                    "commutativity: u_1 v = v_1 u",
                    || vec![name(u), name(v)],
                    &self.op(1, &eu, &ev),
                    &self.op(1, &ev, &eu),
                    lab,
                );
            }
        }
        for x in 0..n {
            let ex = self.basis(x);
            for y in 0..n {
                let ey = self.basis(y);
                let xy = self.op(0, &ex, &ey);
                for z in 0..n {
                    let ez = self.basis(z);
                    let xz = self.op(0, &ex, &ez);
                    for i in 0..2u8 {
                        let lhs = self.op(0, &ex, &self.op(i, &ey, &ez));
                        let rhs = self.op(i, &ey, &xz).add(&self.op(i, &xy, &ez));
                        let law = if i == 0 {
                            "associativity: α_0 β_0 γ = β_0 α_0 γ + (α_0 β)_0 γ"
                        } else {
                            "associativity: α_0 β_1 γ = β_1 α_0 γ + (α_0 β)_1 γ"
                        };
                        report.compare(law, || vec![name(x), name(y), name(z)], &lhs, &rhs, lab);
                    }
                }
            }
        }
        report
    }

    /// Scales `u_1 v` by `1/ℓ` and `∂` by `ℓ`.
    pub fn rescale(&self, ell: &Rational) -> Result<Tca> {
        if ell.is_zero() {
            return Err(Error::Input("rescaling parameter must be nonzero".into()));
        }
        let mut out = self.clone();
        out.u1v = self.u1v.scaled(&ell.recip());
        out.partial = LinearMap::from_columns(
            self.dim1(),
            self.partial.columns().iter().map(|c| c.scaled(ell)).collect(),
        );
        Ok(out)
    }
}
