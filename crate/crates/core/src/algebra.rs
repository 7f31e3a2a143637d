//! Finite-dimensional unital commutative associative algebras.

use crate::error::{Error, Result};
use crate::linalg::{BilinearMap, LinearMap, SparseVector, Subspace};
use crate::rational::Rational;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq)]
pub struct CommAlgebra {
    pub labels: Vec<String>,
    /// The identity element. Usually a basis vector, but quotient algebras
    /// may have an identity that is a combination of basis vectors.
    pub unit: SparseVector,
    pub product: BilinearMap,
}

impl CommAlgebra {
    pub fn new(labels: Vec<String>, unit: SparseVector, product: BilinearMap) -> Result<Self> {
        let n = labels.len();
        if unit.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: unit.dim(),
            });
        }
        if product.left_dim() != n || product.right_dim() != n || product.out_dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: product.out_dim(),
            });
        }
        Ok(Self { labels, unit, product })
    }

    /// The algebra `Q·e` with `e·e = e`.
    pub fn scalars(label: &str) -> Self {
        let mut product = BilinearMap::zero(1, 1, 1);
        product.add_entry(0, 0, 0, &crate::rational::one());
        Self {
            labels: vec![label.to_string()],
            unit: SparseVector::unit(1, 0),
            product,
        }
    }

    /// `Q[x]/(x^n)` on the basis `1, x, …, x^{n-1}`.
    pub fn truncated_polynomials(var: &str, n: usize) -> Self {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        let mut product = BilinearMap::zero(n, n, n);
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    product.add_entry(i, j, i + j, &crate::rational::one());
                }
            }
        }
        Self {
            labels,
            unit: SparseVector::unit(n, 0),
            product,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        self.product.apply(x, y)
    }

    pub fn basis(&self, i: usize) -> SparseVector {
        SparseVector::unit(self.dim(), i)
    }

    /// Multiplication by the basis vector `i` as a linear map.
    pub fn left_mul(&self, i: usize) -> LinearMap {
        self.product.left_operator(i)
    }

    /// Index of the identity when it is a single basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        match self.unit.leading() {
            Some((i, c)) if self.unit.nnz() == 1 && c == &crate::rational::one() => Some(i),
            _ => None,
        }
    }

    /// Checks commutativity, associativity and the unit law on every basis tuple.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("commutative algebra");
        let n = self.dim();
        let labels = Some(self.labels.as_slice());
        let lab = |i: usize| self.labels[i].clone();
        for i in 0..n {
            let x = self.basis(i);
            report.compare("unit", || vec![lab(i)], &self.mul(&self.unit, &x), &x, labels);
            for j in 0..n {
                let y = self.basis(j);
                report.compare(
                    "commutativity",
                    || vec![lab(i), lab(j)],
                    &self.mul(&x, &y),
                    &self.mul(&y, &x),
                    labels,
                );
                for k in 0..n {
                    let z = self.basis(k);
                    report.compare(
                        "associativity",
                        || vec![lab(i), lab(j), lab(k)],
                        &self.mul(&self.mul(&x, &y), &z),
                        &self.mul(&x, &self.mul(&y, &z)),
                        labels,
                    );
                }
            }
        }
        report
    }

    /// Restriction to the span of the given basis vectors, which must form a
    /// unital subalgebra.
    pub fn restrict(&self, indices: &[usize]) -> Result<CommAlgebra> {
        let local = |v: &SparseVector| -> Result<SparseVector> {
            let mut out = SparseVector::zero(indices.len());
            for (i, c) in v.iter() {
                let pos = indices
                    .iter()
                    .position(|&k| k == i)
                    .ok_or_else(|| Error::Input(format!("product leaves the subalgebra at {}", self.labels[i])))?;
                out.set(pos, c.clone());
            }
            Ok(out)
        };
        let m = indices.len();
        let mut product = BilinearMap::zero(m, m, m);
        for (p, &i) in indices.iter().enumerate() {
            for (q, &j) in indices.iter().enumerate() {
                product.set_basis(p, q, local(self.product.basis(i, j))?);
            }
        }
        CommAlgebra::new(
            indices.iter().map(|&i| self.labels[i].clone()).collect(),
            local(&self.unit)?,
            product,
        )
    }

    /// Quotient by an ideal, using the non-pivot columns as basis.
    pub fn quotient(&self, ideal: &Subspace) -> CommAlgebra {
        let free = ideal.free_columns();
        let project = |v: &SparseVector| -> SparseVector {
            let r = ideal.reduce(v);
            SparseVector::from_entries(free.len(), free.iter().enumerate().map(|(k, &c)| (k, r.get(c))))
        };
        let m = free.len();
        let mut product = BilinearMap::zero(m, m, m);
        for (p, &i) in free.iter().enumerate() {
            for (q, &j) in free.iter().enumerate() {
                product.set_basis(p, q, project(self.product.basis(i, j)));
            }
        }
        CommAlgebra {
            labels: free.iter().map(|&i| format!("[{}]", self.labels[i])).collect(),
            unit: project(&self.unit),
            product,
        }
    }

    /// Is `ideal` closed under multiplication by the algebra?
    pub fn is_ideal(&self, ideal: &Subspace) -> bool {
        (0..self.dim()).all(|i| ideal.rows().all(|r| ideal.contains(&self.mul(&self.basis(i), r))))
    }

    pub fn add_product_entry(&mut self, i: usize, j: usize, k: usize, c: &Rational) {
        self.product.add_entry(i, j, k, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn scalars_pass() {
        assert!(CommAlgebra::scalars("e").check().passed());
    }

    #[test]
    fn dual_numbers_pass() {
        let a = CommAlgebra::truncated_polynomials("x", 2);
        let r = a.check();
        assert!(r.passed());
        // 2 unit + 4 commutativity + 8 associativity instances
        assert_eq!(r.checked, 14);
    }

    #[test]
    fn broken_unit_fails() {
        let mut a = CommAlgebra::truncated_polynomials("x", 2);
        // e·x = 2x and x·e = 2x
        a.add_product_entry(0, 1, 1, &int(1));
        a.add_product_entry(1, 0, 1, &int(1));
        let r = a.check();
        assert!(r.has_failure("unit"));
    }

    #[test]
    fn quotient_of_cubic_by_square() {
        let a = CommAlgebra::truncated_polynomials("x", 3);
        let ideal = Subspace::spanned_by(3, &[a.basis(2)]).unwrap();
        assert!(a.is_ideal(&ideal));
        let q = a.quotient(&ideal);
        assert_eq!(q.dim(), 2);
        assert!(q.check().passed());
        assert!(q.mul(&q.basis(1), &q.basis(1)).is_zero());
    }
}
