//! Graded quotients of induced modules by mode-invariant relation subspaces.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::induced::InducedModule;
use crate::linalg::{SparseVector, Subspace};
use crate::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// The vacuum module of the untwisted loop algebra.
    VacuumLie,
    /// Its quotient by the ideal generated by the algebroid relations.
    VertexAlgebra,
    /// A module induced from a degree-zero fiber.
    Induced,
    /// The induced module modulo the relations generated by the algebroid relations.
    Universal,
    /// The universal module modulo its maximal submodule meeting degree 0 trivially.
    Simple,
}

/// A homogeneous vector of an induced module.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    /// Degree in units of `1/T`.
    pub degree: i64,
    pub vector: SparseVector,
}

impl StateVector {
    pub fn new(degree: i64, vector: SparseVector) -> Self {
        Self { degree, vector }
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct GradedModule {
    pub flavor: Flavor,
    pub induced: Arc<InducedModule>,
    /// Per-degree relation subspaces in monomial coordinates.
    pub relations: Vec<Subspace>,
}

impl GradedModule {
    /// The induced module itself, with no relations.
    pub fn free(flavor: Flavor, induced: Arc<InducedModule>) -> Self {
        let relations = induced.slices.iter().map(|s| Subspace::zero(s.dim())).collect();
        Self {
            flavor,
            induced,
            relations,
        }
    }

    pub fn cutoff(&self) -> i64 {
        self.induced.cutoff
    }

    pub fn t(&self) -> i64 {
        self.induced.t()
    }

    pub fn dim(&self, d: i64) -> usize {
        self.relations[d as usize].codim()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.cutoff()).map(|d| self.dim(d)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn normal_form(&self, d: i64, v: &SparseVector) -> SparseVector {
        self.relations[d as usize].reduce(v)
    }

    /// Monomial columns whose classes form the quotient basis of slice `d`.
    pub fn quotient_basis(&self, d: i64) -> Vec<usize> {
        self.relations[d as usize].free_columns()
    }

    pub fn quotient_labels(&self, d: i64) -> Vec<String> {
        let labels = self.induced.slice_labels(d);
        self.quotient_basis(d).into_iter().map(|c| labels[c].clone()).collect()
    }

    /// Coordinates of the class of `v` in the quotient basis.
    pub fn coords(&self, d: i64, v: &SparseVector) -> SparseVector {
        let r = self.relations[d as usize].reduce(v);
        let free = self.quotient_basis(d);
        SparseVector::from_entries(
            free.len(),
            r.iter().map(|(c, x)| (free.binary_search(&c).expect("normal forms live on free columns"), x.clone())),
        )
    }

    /// The normal-form vector with the given quotient coordinates.
    pub fn lift(&self, d: i64, coords: &SparseVector) -> SparseVector {
        let basis = self.quotient_basis(d);
        SparseVector::from_entries(
            self.induced.slice_dim(d),
            coords.iter().map(|(k, c)| (basis[k], c.clone())),
        )
    }

    /// Basis mode acting on a vector of slice `d`, in normal form.
    pub fn act(&self, x: usize, d: i64, v: &SparseVector) -> Result<Option<SparseVector>> {
        let target = d + self.induced.lie.degree(x);
        Ok(self.induced.act(x, d, v)?.map(|w| self.normal_form(target, &w)))
    }

    /// Checks that every relation row is mapped into the relations by every
    /// basis mode whose target degree is materialized.
    pub fn check_invariance(&self) -> CheckReport {
        let mut r = CheckReport::new(format!("{:?} relation invariance", self.flavor));
        let lie = &self.induced.lie;
        let mut skipped = 0usize;
        for d in 0..=self.cutoff() {
            for row in self.relations[d as usize].rows() {
                for x in 0..lie.dim() {
                    let target = d + lie.degree(x);
                    if target < 0 || target > self.cutoff() {
                        continue;
                    }
                    match self.induced.act(x, d, row) {
                        Ok(Some(w)) => {
                            r.count();
                            if !self.relations[target as usize].contains(&w) {
                                let labels = self.induced.slice_labels(d);
                                r.fail(
                                    "mode action preserves relations",
                                    vec![lie.mode_label(lie.modes[x]), row.render(Some(&labels))],
                                    w.render(Some(&self.induced.slice_labels(target))),
                                    "member of the relation subspace",
                                );
                            }
                        }
                        Ok(None) => {}
                        Err(_) => skipped += 1,
                    }
                }
            }
        }
        if skipped > 0 {
            r.note(format!("{skipped} actions skipped at the a(-1) word cap"));
        }
        r
    }

    /// Like [`check_invariance`](Self::check_invariance) but turns a failure
    /// into an internal-consistency error.
    pub fn assert_invariant(&self) -> Result<()> {
        let r = self.check_invariance();
        if r.passed() {
            Ok(())
        } else {
            Err(Error::Internal(format!(
                "relations of the {:?} module are not invariant: {}",
                self.flavor,
                r.violations[0].witness.join(", ")
            )))
        }
    }
}

/// Smallest family of subspaces containing `base` and `seeds` that is closed
/// under every basis mode with materialized target degree.
///
/// `base` is assumed to be invariant already. Vectors are first pushed down
/// by the non-creation modes and only then raised, until nothing new appears.
/// Actions that exceed the `a(-1)` word cap are skipped.
pub fn closure(induced: &InducedModule, base: Vec<Subspace>, seeds: &[StateVector]) -> Result<Vec<Subspace>> {
    let mut spaces = base;
    let lie = &induced.lie;
    let mut lower: VecDeque<StateVector> = VecDeque::new();
    let mut raise: VecDeque<StateVector> = VecDeque::new();
    let push = |spaces: &mut Vec<Subspace>, s: StateVector, lower: &mut VecDeque<StateVector>, raise: &mut VecDeque<StateVector>| {
        if let Some(r) = spaces[s.degree as usize].insert(&s.vector) {
            let s = StateVector::new(s.degree, r);
            lower.push_back(s.clone());
            raise.push_back(s);
        }
    };
    for s in seeds {
        if s.degree < 0 || s.degree > induced.cutoff {
            return Err(Error::Window(format!("seed degree {} outside the module", s.degree)));
        }
        push(&mut spaces, s.clone(), &mut lower, &mut raise);
    }
    loop {
        let (s, creating) = if let Some(s) = lower.pop_front() {
            (s, false)
        } else if let Some(s) = raise.pop_front() {
            (s, true)
        } else {
            break;
        };
        for x in 0..lie.dim() {
            if induced.is_creation(x) != creating {
                continue;
            }
            let target = s.degree + lie.degree(x);
            if target < 0 || target > induced.cutoff {
                continue;
            }
            match induced.act(x, s.degree, &s.vector) {
                Ok(Some(w)) if !w.is_zero() => push(&mut spaces, StateVector::new(target, w), &mut lower, &mut raise),
                Ok(_) => {}
                Err(Error::Window(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(spaces)
}

/// The submodule generated by `seeds` in the quotient `module`, as subspaces
/// of monomial coordinates containing the relations.
pub fn generated_submodule(module: &GradedModule, seeds: &[StateVector]) -> Result<Vec<Subspace>> {
    closure(&module.induced, module.relations.clone(), seeds)
}
