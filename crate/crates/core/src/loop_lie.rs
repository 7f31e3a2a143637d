//! The `(1/T)Z`-graded loop Lie algebra of a 1-truncated conformal algebra
//! with a sector grading, truncated to a symmetric degree window.
//!
//! Exponents and degrees are stored as integer numerators over `T`: the mode
//! `u(k/T)` has degree `-k` for `u ∈ C1` and `-k - T` for `u ∈ C0`.

use std::cmp::Reverse;
use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{SparseVector, Subspace};
use crate::rational::{frac, one, Rational};
use crate::report::CheckReport;
use crate::tca::Tca;

/// `gen(k/T)` for a basis vector `gen` of `C` (`C0` indices first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub gen: usize,
    pub k: i64,
}

#[derive(Debug, Clone)]
pub struct LoopLie {
    pub tca: Tca,
    /// Sector of every basis vector of `C`.
    pub sectors: Vec<u32>,
    pub t: i64,
    /// Degrees `-window ..= window`, in units of `1/T`.
    pub window: i64,
    pub modes: Vec<Mode>,
    index: HashMap<Mode, usize>,
    /// `∂C0⁰ ⊆ C1` in `C1` coordinates; `b(0)` modes live on its free columns.
    zero_modes: Subspace,
    table: Vec<Option<SparseVector>>,
    second_term_scale: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularSplit {
    pub positive: Vec<usize>,
    pub zero: Vec<usize>,
    pub negative: Vec<usize>,
}

impl LoopLie {
    pub fn build(tca: Tca, sectors: &[u32], t: u32, window: i64) -> Result<Self> {
        if t == 0 {
            return Err(Error::Input("T must be a positive integer".into()));
        }
        if sectors.len() != tca.dim() {
            return Err(Error::Input("sector list does not match the basis of C".into()));
        }
        if sectors.iter().any(|&r| r >= t) {
            return Err(Error::Input("sector out of range".into()));
        }
        if window < 0 {
            return Err(Error::Input("negative degree window".into()));
        }
        check_grading(&tca, sectors, t)?;
        let t = t as i64;
        let n0 = tca.dim0();
        let n1 = tca.dim1();
        let mut zero_modes = Subspace::zero(n1);
        for a in 0..n0 {
            if sectors[a] == 0 {
                zero_modes.insert(tca.partial.column(a));
            }
        }
        let mut modes = Vec::new();
        for a in 0..n0 {
            if sectors[a] == 0 {
                modes.push(Mode { gen: a, k: -t });
            }
        }
        for j in 0..n1 {
            let gen = n0 + j;
            let r = sectors[gen] as i64;
            for k in -window..=window {
                if (k - r).rem_euclid(t) != 0 {
                    continue;
                }
                if k != 0 || !zero_modes.is_pivot(j) {
                    modes.push(Mode { gen, k });
                }
            }
        }
        let deg = |m: &Mode| if m.gen < n0 { -m.k - t } else { -m.k };
        modes.sort_by_key(|m| (Reverse(deg(m)), m.gen, m.k));
        let index = modes.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut out = Self {
            tca,
            sectors: sectors.to_vec(),
            t,
            window,
            modes,
            index,
            zero_modes,
            table: Vec::new(),
            second_term_scale: one(),
        };
        out.fill_table()?;
        Ok(out)
    }

    /// Rebuilds the bracket table with the `(m + s/T)(b_1 b')` term scaled by
    /// `scale`. Anything other than 1 breaks the Lie structure; used to check
    /// that verification suites notice.
    pub fn with_second_term_scale(mut self, scale: Rational) -> Result<Self> {
        self.second_term_scale = scale;
        self.fill_table()?;
        Ok(self)
    }

    fn fill_table(&mut self) -> Result<()> {
        let n = self.dim();
        let mut table = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if self.in_window(self.degree(i) + self.degree(j)) {
                    let (mi, mj) = (self.modes[i], self.modes[j]);
                    let v = self.bracket_raw(&self.tca.basis(mi.gen), mi.k, &self.tca.basis(mj.gen), mj.k)?;
                    table[i * n + j] = Some(v);
                }
            }
        }
        self.table = table;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn in_window(&self, degree: i64) -> bool {
        degree.abs() <= self.window
    }

    pub fn mode_degree(&self, m: Mode) -> i64 {
        if m.gen < self.tca.dim0() {
            -m.k - self.t
        } else {
            -m.k
        }
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.mode_degree(self.modes[i])
    }

    pub fn index_of(&self, m: Mode) -> Option<usize> {
        self.index.get(&m).copied()
    }

    pub fn is_a_mode(&self, i: usize) -> bool {
        self.modes[i].gen < self.tca.dim0()
    }

    pub fn mode_label(&self, m: Mode) -> String {
        let labels = self.tca.labels();
        format!("{}({})", labels[m.gen], frac(m.k, self.t))
    }

    pub fn labels(&self) -> Vec<String> {
        self.modes.iter().map(|&m| self.mode_label(m)).collect()
    }

    /// Expresses the raw mode `x(k/T)`, `x ∈ C` homogeneous of a sector
    /// compatible with `k`, in the chosen basis.
    pub fn reduce(&self, x: &SparseVector, k: i64) -> Result<SparseVector> {
        let n0 = self.tca.dim0();
        let mut out = SparseVector::zero(self.dim());
        let mut at_zero = SparseVector::zero(self.tca.dim1());
        for (g, c) in x.iter() {
            if (k - self.sectors[g] as i64).rem_euclid(self.t) != 0 {
                return Err(Error::Internal(format!(
                    "exponent {} is not in the sector of {}",
                    frac(k, self.t),
                    self.tca.labels()[g]
                )));
            }
            let m = Mode { gen: g, k };
            if !self.in_window(self.mode_degree(m)) {
                return Err(Error::Window(format!(
                    "mode {} outside degree window ±{}/{}",
                    self.mode_label(m),
                    self.window,
                    self.t
                )));
            }
            if g < n0 {
                if k == -self.t {
                    out.add_at(self.index[&m], c);
                } else {
                    // a(m) = -(1/(m+1)) (∂a)(m+1)
                    let coeff = -(c * frac(self.t, k + self.t));
                    let da = self.tca.embed1(self.tca.partial.column(g));
                    out.add_scaled(&coeff, &self.reduce(&da, k + self.t)?);
                }
            } else if k == 0 {
                at_zero.add_at(g - n0, c);
            } else {
                out.add_at(self.index[&m], c);
            }
        }
        if !at_zero.is_zero() {
            for (j, c) in self.zero_modes.reduce(&at_zero).iter() {
                out.add_at(self.index[&Mode { gen: n0 + j, k: 0 }], c);
            }
        }
        Ok(out)
    }

    /// `[x(k1/T), y(k2/T)] = (x_0 y)((k1+k2)/T) + (k1/T)(x_1 y)((k1+k2)/T - 1)`.
    pub fn bracket_raw(&self, x: &SparseVector, k1: i64, y: &SparseVector, k2: i64) -> Result<SparseVector> {
        let mut out = SparseVector::zero(self.dim());
        let p0 = self.tca.op(0, x, y);
        if !p0.is_zero() {
            out = self.reduce(&p0, k1 + k2)?;
        }
        let p1 = self.tca.op(1, x, y);
        if !p1.is_zero() && k1 != 0 {
            let coeff = frac(k1, self.t) * &self.second_term_scale;
            out.add_scaled(&coeff, &self.reduce(&p1, k1 + k2 - self.t)?);
        }
        Ok(out)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Result<&SparseVector> {
        self.table[i * self.dim() + j].as_ref().ok_or_else(|| {
            Error::Window(format!(
                "bracket [{}, {}] leaves the degree window",
                self.mode_label(self.modes[i]),
                self.mode_label(self.modes[j])
            ))
        })
    }

    pub fn bracket(&self, x: &SparseVector, y: &SparseVector) -> Result<SparseVector> {
        let mut out = SparseVector::zero(self.dim());
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&(a * b), self.bracket_basis(i, j)?);
            }
        }
        Ok(out)
    }

    /// Overwrites one table entry.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: SparseVector) {
        let n = self.dim();
        self.table[i * n + j] = Some(value);
    }

    /// Antisymmetry, Jacobi and degree additivity on every basis pair and
    /// triple whose brackets stay in the window.
    pub fn verify_lie_axioms(&self) -> CheckReport {
        let mut r = CheckReport::new("loop Lie algebra");
        let n = self.dim();
        let labels = self.labels();
        let lab = Some(labels.as_slice());
        for i in 0..n {
            for j in 0..n {
                let Ok(xy) = self.bracket_basis(i, j) else { continue };
                let d = self.degree(i) + self.degree(j);
                r.count();
                if let Some((bad, _)) = xy.iter().find(|(k, _)| self.degree(*k) != d) {
                    r.fail(
                        "degree additivity",
                        vec![labels[i].clone(), labels[j].clone()],
                        labels[bad].clone(),
                        format!("degree {}", frac(d, self.t)),
                    );
                }
                if let Ok(yx) = self.bracket_basis(j, i) {
                    r.compare(
                        "antisymmetry",
                        || vec![labels[i].clone(), labels[j].clone()],
                        xy,
                        &yx.scaled(&-one()),
                        lab,
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let total = self.degree(i) + self.degree(j) + self.degree(k);
                    if !self.in_window(total) {
                        continue;
                    }
                    let x = SparseVector::unit(n, i);
                    let y = SparseVector::unit(n, j);
                    let z = SparseVector::unit(n, k);
                    let jacobi = || -> Result<(SparseVector, SparseVector)> {
                        let lhs = self.bracket(&x, &self.bracket(&y, &z)?)?;
                        let rhs = self
                            .bracket(&self.bracket(&x, &y)?, &z)?
                            .add(&self.bracket(&y, &self.bracket(&x, &z)?)?);
                        Ok((lhs, rhs))
                    };
                    if let Ok((lhs, rhs)) = jacobi() {
                        r.compare(
                            "Jacobi: [x,[y,z]] = [[x,y],z] + [y,[x,z]]",
                            || vec![labels[i].clone(), labels[j].clone(), labels[k].clone()],
                            &lhs,
                            &rhs,
                            lab,
                        );
                    }
                }
            }
        }
        r
    }

    pub fn triangular_split(&self) -> TriangularSplit {
        let mut s = TriangularSplit {
            positive: vec![],
            zero: vec![],
            negative: vec![],
        };
        for i in 0..self.dim() {
            match self.degree(i).signum() {
                1 => s.positive.push(i),
                0 => s.zero.push(i),
                _ => s.negative.push(i),
            }
        }
        s
    }

    /// Locality of the generating series as identities between raw brackets:
    /// `F(m+2,n) - 2F(m+1,n+1) + F(m,n+2) = 0` for `b, b' ∈ C1`,
    /// `F(m+1,n) - F(m,n+1) = 0` for `a ∈ C0, b ∈ C1`, and `[a, a'] = 0`.
    pub fn check_locality(&self) -> CheckReport {
        let mut r = CheckReport::new("locality");
        let labels = self.labels();
        let lab = Some(labels.as_slice());
        let n0 = self.tca.dim0();
        let nc = self.tca.dim();
        let t = self.t;
        let w = self.window + 2 * t;
        let exps = |g: usize| {
            let s = self.sectors[g] as i64;
            (-w..=w).filter(move |k| (k - s).rem_euclid(t) == 0)
        };
        let f = |x: usize, k1: i64, y: usize, k2: i64| self.bracket_raw(&self.tca.basis(x), k1, &self.tca.basis(y), k2);
        let names = self.tca.labels();
        for x in 0..nc {
            for y in 0..nc {
                for k1 in exps(x) {
                    for k2 in exps(y) {
                        let wit = || vec![names[x].clone(), names[y].clone(), frac(k1, t).to_string(), frac(k2, t).to_string()];
                        if x < n0 && y < n0 {
                            if let Ok(v) = f(x, k1, y, k2) {
                                r.compare("[a(m), a'(n)] = 0", wit, &v, &SparseVector::zero(self.dim()), lab);
                            }
                        } else if x < n0 || y < n0 {
                            let pair = (|| Ok::<_, Error>((f(x, k1 + t, y, k2)?, f(x, k1, y, k2 + t)?)))();
                            if let Ok((p, q)) = pair {
                                r.compare("(x1 - x2)[a(x1), b(x2)] = 0", wit, &p, &q, lab);
                            }
                        } else {
                            let triple = (|| {
                                Ok::<_, Error>((f(x, k1 + 2 * t, y, k2)?, f(x, k1 + t, y, k2 + t)?, f(x, k1, y, k2 + 2 * t)?))
                            })();
                            if let Ok((p, q, s)) = triple {
                                let lhs = p.add(&s);
                                r.compare("(x1 - x2)^2[b(x1), b'(x2)] = 0", wit, &lhs, &q.scaled(&Rational::from_integer(2.into())), lab);
                            }
                        }
                    }
                }
            }
        }
        r
    }

    /// `a(-1)` is central whenever `a_0 u = 0` for every `u ∈ C1`.
    pub fn check_centrality(&self) -> CheckReport {
        let mut r = CheckReport::new("centrality of a(-1)");
        let labels = self.labels();
        let n0 = self.tca.dim0();
        for a in 0..n0 {
            let inert = (0..self.tca.dim1()).all(|u| self.tca.a0u.basis(a, u).is_zero());
            let Some(i) = self.index_of(Mode { gen: a, k: -self.t }) else { continue };
            if !inert {
                continue;
            }
            for j in 0..self.dim() {
                if let Ok(v) = self.bracket_basis(i, j) {
                    r.compare(
                        "[a(-1), x] = 0",
                        || vec![labels[i].clone(), labels[j].clone()],
                        v,
                        &SparseVector::zero(self.dim()),
                        Some(&labels),
                    );
                }
            }
        }
        r
    }
}

/// Every structure map must send sectors `(r, s)` to `r + s mod T`.
fn check_grading(tca: &Tca, sectors: &[u32], t: u32) -> Result<()> {
    let n0 = tca.dim0();
    let bad = |what: &str| Err(Error::Input(format!("{what} does not respect the sector grading")));
    for a in 0..n0 {
        for (j, c) in tca.partial.column(a).iter() {
            if !c.is_zero() && sectors[n0 + j] != sectors[a] {
                return bad("∂");
            }
        }
    }
    let tables = [
        (&tca.a0u, 0, n0, 0),
        (&tca.u0a, n0, 0, 0),
        (&tca.u0v, n0, n0, n0),
        (&tca.u1v, n0, n0, 0),
    ];
    for (map, li, ri, oi) in tables {
        for (i, j, k, _) in map.entries() {
            if (sectors[li + i] + sectors[ri + j]) % t != sectors[oi + k] {
                return bad("a product");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn heisenberg() -> Tca {
        let mut c = Tca::zero(vec!["e".into()], vec!["β".into()]);
        c.u1v.add_entry(0, 0, 0, &one());
        c
    }

    fn idx(l: &LoopLie, gen: usize, k: i64) -> usize {
        l.index_of(Mode { gen, k }).unwrap()
    }

    #[test]
    fn untwisted_heisenberg_basis() {
        let l = LoopLie::build(heisenberg(), &[0, 0], 1, 3).unwrap();
        let split = l.triangular_split();
        let zero: Vec<String> = split.zero.iter().map(|&i| l.labels()[i].clone()).collect();
        assert_eq!(zero, vec!["e(-1)", "β(0)"]);
        for d in 1..=3 {
            let at: Vec<usize> = (0..l.dim()).filter(|&i| l.degree(i) == d).collect();
            assert_eq!(at, vec![idx(&l, 1, -d)]);
        }
        let e = idx(&l, 0, -1);
        let br = l.bracket_basis(idx(&l, 1, 1), idx(&l, 1, -1)).unwrap();
        assert_eq!(br, &SparseVector::unit(l.dim(), e));
        assert!(l.verify_lie_axioms().passed());
        assert!(l.check_locality().passed());
        assert!(l.check_centrality().passed());
    }

    #[test]
    fn twisted_heisenberg_basis() {
        let l = LoopLie::build(heisenberg(), &[0, 1], 2, 3).unwrap();
        let split = l.triangular_split();
        assert_eq!(split.zero, vec![idx(&l, 0, -2)]);
        assert_eq!(split.positive.len(), 2);
        assert_eq!(split.negative.len(), 2);
        let br = l.bracket_basis(idx(&l, 1, 1), idx(&l, 1, -1)).unwrap();
        assert_eq!(br, &SparseVector::unit(l.dim(), idx(&l, 0, -2)).scaled(&frac(1, 2)));
        assert!(l.verify_lie_axioms().passed());
        assert!(l.check_locality().passed());
    }

    #[test]
    fn reduction_of_a_modes() {
        // C0 = span{e, x}, ∂x = y ∈ C1.
        let mut c = Tca::zero(vec!["e".into(), "x".into()], vec!["y".into()]);
        c.partial.add_entry(1, 0, &one());
        let l = LoopLie::build(c, &[0, 0, 0], 1, 3).unwrap();
        // y(0) = (∂x)(0) is killed, so no y(0) in the basis
        assert!(l.index_of(Mode { gen: 2, k: 0 }).is_none());
        assert!(l.reduce(&SparseVector::unit(3, 2), 0).unwrap().is_zero());
        // x(1) = -(1/2) y(2)
        let v = l.reduce(&SparseVector::unit(3, 1), 1).unwrap();
        assert_eq!(v, SparseVector::unit(l.dim(), idx(&l, 2, 2)).scaled(&frac(-1, 2)));
        assert!(matches!(l.reduce(&SparseVector::unit(3, 2), 7), Err(Error::Window(_))));
    }

    #[test]
    fn odd_nilpotent_modes_vanish() {
        let c = Tca::zero(vec!["e".into(), "x".into()], vec![]);
        let l = LoopLie::build(c, &[0, 1], 2, 3).unwrap();
        assert_eq!(l.dim(), 1);
        for k in [-5, -3, -1, 1] {
            assert!(l.reduce(&SparseVector::unit(2, 1), k).unwrap().is_zero());
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut l = LoopLie::build(heisenberg(), &[0, 0], 1, 2).unwrap();
        let (i, j) = (idx(&l, 1, 1), idx(&l, 1, -1));
        let n = l.dim();
        l.set_bracket(i, j, SparseVector::unit(n, idx(&l, 0, -1)).scaled(&frac(2, 1)));
        let r = l.verify_lie_axioms();
        assert!(r.has_failure("antisymmetry"));
    }

    #[test]
    fn inconsistent_grading_rejected() {
        assert!(matches!(LoopLie::build(heisenberg(), &[1, 0], 2, 2), Err(Error::Input(_))));
    }
}
