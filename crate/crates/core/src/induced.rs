//! Degree-truncated induced modules over a loop Lie algebra, with PBW
//! monomial bases and mode actions computed by straightening.
//!
//! A monomial `c_1 c_2 ⋯ c_k · u` lists creation modes in increasing basis
//! order, i.e. by decreasing degree with `a(-1)` modes innermost, applied to
//! a fiber basis vector `u`.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::linalg::{LinearMap, SparseVector};
use crate::loop_lie::LoopLie;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub modes: Vec<usize>,
    pub fiber: usize,
}

#[derive(Debug, Clone)]
pub enum Fiber {
    /// Induced from the trivial one-dimensional module of the non-negative
    /// modes; `a(-1)` words are materialized up to `cap` letters.
    Vacuum { cap: usize },
    /// Induced from a module `U` of the degree-zero modes; positive-degree
    /// modes act by zero on `U`. `ops` maps each degree-zero basis mode to its
    /// matrix on `U`.
    Module { dim: usize, ops: HashMap<usize, LinearMap> },
}

#[derive(Debug, Clone)]
pub struct Slice {
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

type ActionKey = (usize, usize, usize);

#[derive(Debug)]
pub struct InducedModule {
    pub lie: Arc<LoopLie>,
    pub fiber: Fiber,
    /// Highest materialized degree, in units of `1/T`.
    pub cutoff: i64,
    pub slices: Vec<Slice>,
    is_creation: Vec<bool>,
    cache: Mutex<HashMap<ActionKey, SparseVector>>,
}

impl InducedModule {
    pub fn vacuum(lie: Arc<LoopLie>, cutoff: i64, cap: usize) -> Result<Self> {
        Self::new(lie, Fiber::Vacuum { cap }, cutoff)
    }

    pub fn new(lie: Arc<LoopLie>, fiber: Fiber, cutoff: i64) -> Result<Self> {
        if cutoff > lie.window {
            return Err(Error::Window(format!(
                "module cutoff {cutoff} exceeds the loop algebra window {}",
                lie.window
            )));
        }
        if let Fiber::Module { dim, ops } = &fiber {
            for (&i, m) in ops {
                if lie.degree(i) != 0 || m.in_dim() != *dim || m.out_dim() != *dim {
                    return Err(Error::Input("fiber operator has the wrong shape or degree".into()));
                }
            }
        }
        let is_creation: Vec<bool> = (0..lie.dim())
            .map(|i| {
                let d = lie.degree(i);
                d > 0 || (d == 0 && lie.is_a_mode(i) && matches!(fiber, Fiber::Vacuum { .. }))
            })
            .collect();
        let creation: Vec<usize> = (0..lie.dim()).filter(|&i| is_creation[i]).collect();
        let fiber_dim = match &fiber {
            Fiber::Vacuum { .. } => 1,
            Fiber::Module { dim, .. } => *dim,
        };
        let cap = match &fiber {
            Fiber::Vacuum { cap } => *cap,
            Fiber::Module { .. } => 0,
        };
        let mut slices = Vec::new();
        for d in 0..=cutoff {
            let mut words = Vec::new();
            enumerate(&lie, &creation, 0, d, cap, &mut Vec::new(), &mut words);
            let mut basis: Vec<Monomial> = words
                .into_iter()
                .flat_map(|w| (0..fiber_dim).map(move |f| Monomial { modes: w.clone(), fiber: f }))
                .collect();
            basis.sort_by_key(|m| (Reverse(a_count(&lie, m)), m.modes.clone(), m.fiber));
            let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            slices.push(Slice { basis, index });
        }
        Ok(Self {
            lie,
            fiber,
            cutoff,
            slices,
            is_creation,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn t(&self) -> i64 {
        self.lie.t
    }

    pub fn slice_dim(&self, d: i64) -> usize {
        self.slices[d as usize].dim()
    }

    pub fn is_creation(&self, mode: usize) -> bool {
        self.is_creation[mode]
    }

    pub fn fiber_dim(&self) -> usize {
        match &self.fiber {
            Fiber::Vacuum { .. } => 1,
            Fiber::Module { dim, .. } => *dim,
        }
    }

    fn cap(&self) -> Option<usize> {
        match &self.fiber {
            Fiber::Vacuum { cap } => Some(*cap),
            Fiber::Module { .. } => None,
        }
    }

    pub fn monomial_label(&self, m: &Monomial) -> String {
        let mut s: String = m.modes.iter().map(|&i| self.lie.mode_label(self.lie.modes[i])).collect::<Vec<_>>().join(" ");
        let base = match &self.fiber {
            Fiber::Vacuum { .. } => "1".to_string(),
            Fiber::Module { .. } => format!("u{}", m.fiber),
        };
        if !s.is_empty() {
            s.push(' ');
        }
        s + &base
    }

    pub fn slice_labels(&self, d: i64) -> Vec<String> {
        self.slices[d as usize].basis.iter().map(|m| self.monomial_label(m)).collect()
    }

    /// The vector of the monomial `modes · fiber` (modes in any order are
    /// not accepted: `modes` must already be canonical).
    pub fn monomial_vector(&self, d: i64, m: &Monomial) -> Option<SparseVector> {
        let slice = self.slices.get(d as usize)?;
        slice.index_of(m).map(|i| SparseVector::unit(slice.dim(), i))
    }

    /// The distinguished vector `1` (or the first fiber vector) in degree 0.
    pub fn base_vector(&self, fiber: usize) -> SparseVector {
        let m = Monomial { modes: vec![], fiber };
        SparseVector::unit(self.slices[0].dim(), self.slices[0].index_of(&m).expect("fiber vector"))
    }

    /// Action of a basis mode on a basis vector of slice `d`. `None` means the
    /// target degree is negative, so the result is zero.
    pub fn act_basis(&self, x: usize, d: i64, col: usize) -> Result<Option<SparseVector>> {
        let target = d + self.lie.degree(x);
        if target < 0 {
            return Ok(None);
        }
        if target > self.cutoff {
            return Err(Error::Window(format!("action lands in degree {target} above cutoff {}", self.cutoff)));
        }
        let key = (x, d as usize, col);
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(Some(v.clone()));
        }
        let v = self.compute(x, d, col)?;
        self.cache.lock().expect("cache lock").insert(key, v.clone());
        Ok(Some(v))
    }

    fn canonical(&self, target: i64, m: Monomial) -> Result<SparseVector> {
        if let Some(cap) = self.cap() {
            if a_count(&self.lie, &m) > cap {
                return Err(Error::Window(format!("a(-1) word longer than the cap {cap}")));
            }
        }
        let slice = &self.slices[target as usize];
        let i = slice
            .index_of(&m)
            .ok_or_else(|| Error::Internal(format!("monomial {} missing from degree {target}", self.monomial_label(&m))))?;
        Ok(SparseVector::unit(slice.dim(), i))
    }

    fn compute(&self, x: usize, d: i64, col: usize) -> Result<SparseVector> {
        let target = d + self.lie.degree(x);
        let out_dim = self.slices[target as usize].dim();
        let mono = self.slices[d as usize].basis[col].clone();
        let Some((&c1, rest)) = mono.modes.split_first() else {
            if self.is_creation[x] {
                return self.canonical(target, Monomial { modes: vec![x], fiber: mono.fiber });
            }
            if let Fiber::Module { ops, dim } = &self.fiber {
                if let Some(op) = ops.get(&x) {
                    let img = op.apply(&SparseVector::unit(*dim, mono.fiber));
                    let mut out = SparseVector::zero(out_dim);
                    for (f, c) in img.iter() {
                        out.add_scaled(c, &self.canonical(0, Monomial { modes: vec![], fiber: f })?);
                    }
                    return Ok(out);
                }
            }
            return Ok(SparseVector::zero(out_dim));
        };
        if self.is_creation[x] && x <= c1 {
            let mut modes = vec![x];
            modes.extend_from_slice(&mono.modes);
            return self.canonical(target, Monomial { modes, fiber: mono.fiber });
        }
        // x c1 r = c1 (x r) + [x, c1] r
        let rd = d - self.lie.degree(c1);
        let rest = Monomial { modes: rest.to_vec(), fiber: mono.fiber };
        let rcol = self.slices[rd as usize].index_of(&rest).expect("suffix of a basis monomial");
        let mut out = SparseVector::zero(out_dim);
        if let Some(y) = self.act_basis(x, rd, rcol)? {
            let yd = rd + self.lie.degree(x);
            for (j, c) in y.iter() {
                if let Some(z) = self.act_basis(c1, yd, j)? {
                    out.add_scaled(c, &z);
                }
            }
        }
        for (m, c) in self.lie.bracket_basis(x, c1)?.iter() {
            if let Some(z) = self.act_basis(m, rd, rcol)? {
                out.add_scaled(c, &z);
            }
        }
        Ok(out)
    }

    /// Action of a basis mode on an arbitrary vector of slice `d`.
    pub fn act(&self, x: usize, d: i64, v: &SparseVector) -> Result<Option<SparseVector>> {
        let target = d + self.lie.degree(x);
        if target < 0 {
            return Ok(None);
        }
        let mut out = SparseVector::zero(self.slices.get(target as usize).map_or(0, |s| s.dim()));
        for (j, c) in v.iter() {
            if let Some(z) = self.act_basis(x, d, j)? {
                out.add_scaled(c, &z);
            }
        }
        Ok(Some(out))
    }

    /// Action of a homogeneous combination of basis modes of degree `deg`.
    pub fn act_element(&self, elem: &SparseVector, deg: i64, d: i64, v: &SparseVector) -> Result<Option<SparseVector>> {
        let target = d + deg;
        if target < 0 {
            return Ok(None);
        }
        if target > self.cutoff {
            return Err(Error::Window(format!("action lands in degree {target} above cutoff {}", self.cutoff)));
        }
        let mut out = SparseVector::zero(self.slices[target as usize].dim());
        for (x, c) in elem.iter() {
            if let Some(z) = self.act(x, d, v)? {
                out.add_scaled(c, &z);
            }
        }
        Ok(Some(out))
    }
}

fn a_count(lie: &LoopLie, m: &Monomial) -> usize {
    m.modes.iter().filter(|&&i| lie.degree(i) == 0).count()
}

/// All non-decreasing words in `creation[from..]` of total degree `d`.
fn enumerate(
    lie: &LoopLie,
    creation: &[usize],
    from: usize,
    d: i64,
    cap: usize,
    word: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if d == 0 {
        out.push(word.clone());
    }
    for (pos, &c) in creation.iter().enumerate().skip(from) {
        let deg = lie.degree(c);
        if deg > d {
            continue;
        }
        if deg == 0 && word.iter().filter(|&&i| lie.degree(i) == 0).count() >= cap {
            continue;
        }
        word.push(c);
        enumerate(lie, creation, pos, d - deg, cap, word, out);
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_lie::Mode;
    use crate::rational::{frac, one};
    use crate::tca::Tca;

    fn heisenberg() -> Tca {
        let mut c = Tca::zero(vec!["e".into()], vec!["β".into()]);
        c.u1v.add_entry(0, 0, 0, &one());
        c
    }

    #[test]
    fn twisted_fock_dims() {
        let lie = Arc::new(LoopLie::build(heisenberg(), &[0, 1], 2, 5).unwrap());
        let e = lie.index_of(Mode { gen: 0, k: -2 }).unwrap();
        let mut ops = HashMap::new();
        ops.insert(e, LinearMap::identity(1));
        let m = InducedModule::new(lie, Fiber::Module { dim: 1, ops }, 5).unwrap();
        let dims: Vec<usize> = (0..=5).map(|d| m.slice_dim(d)).collect();
        assert_eq!(dims, vec![1, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn heisenberg_commutator_on_vacuum() {
        let lie = Arc::new(LoopLie::build(heisenberg(), &[0, 1], 2, 3).unwrap());
        let e = lie.index_of(Mode { gen: 0, k: -2 }).unwrap();
        let up = lie.index_of(Mode { gen: 1, k: -1 }).unwrap();
        let down = lie.index_of(Mode { gen: 1, k: 1 }).unwrap();
        let mut ops = HashMap::new();
        ops.insert(e, LinearMap::identity(1));
        let m = InducedModule::new(lie, Fiber::Module { dim: 1, ops }, 3).unwrap();
        let one_state = m.base_vector(0);
        let v = m.act(up, 0, &one_state).unwrap().unwrap();
        let back = m.act(down, 1, &v).unwrap().unwrap();
        assert_eq!(back, one_state.scaled(&frac(1, 2)));
    }

    #[test]
    fn vacuum_cap_limits_degree_zero() {
        let lie = Arc::new(LoopLie::build(heisenberg(), &[0, 0], 1, 2).unwrap());
        let m = InducedModule::vacuum(lie, 2, 3).unwrap();
        // 1, e, e², e³
        assert_eq!(m.slice_dim(0), 4);
        // β(-1) e^k for k ≤ 3
        assert_eq!(m.slice_dim(1), 4);
    }
}
