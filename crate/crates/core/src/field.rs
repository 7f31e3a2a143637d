//! Coefficients `v_q w` of the vertex operators `Y_M(v, x)` for states of the
//! vacuum module acting on a (possibly twisted) module.
//!
//! The field of a generator is its mode action. For a monomial state
//! `v = u(p) v'` the coefficient is recovered from the Jacobi identity
//! coefficient at `(p, s, t = q - s)`:
//!
//! ```text
//! (u_p v')_q w = Σ_{m≥0} (-1)^m C(p,m) [u_{p+s-m} v'_{t+m} w - (-1)^p v'_{p+t-m} u_{s+m} w]
//!              - Σ_{m≥1} C(s,m) (u_{p+m} v')_{q-m} w
//! ```
//!
//! with `s` chosen in the sector of `u` (`s = r/T` for `u ∈ C1` or `r = 0`,
//! `s = r/T - 1` otherwise). The sums are finite because both modules are
//! graded from degree 0.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::induced::Monomial;
use crate::linalg::{kernel, transpose, SparseVector, Subspace};
use crate::loop_lie::Mode;
use crate::module::{GradedModule, StateVector};
use crate::rational::{binomial, frac, int, sign};
use crate::report::CheckReport;

type Key = (usize, usize, i64, i64, usize);

#[derive(Debug)]
pub struct FieldEngine {
    /// Untwisted vacuum module of the states.
    pub source: GradedModule,
    /// The module the fields act on.
    pub target: GradedModule,
    cache: Mutex<HashMap<Key, Option<SparseVector>>>,
}

impl FieldEngine {
    pub fn new(source: GradedModule, target: GradedModule) -> Result<Self> {
        if source.t() != 1 {
            return Err(Error::Input("field states must come from an untwisted module".into()));
        }
        if source.induced.lie.tca.dim() != target.induced.lie.tca.dim() {
            return Err(Error::Input("source and target are built from different algebras".into()));
        }
        Ok(Self {
            source,
            target,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn t(&self) -> i64 {
        self.target.t()
    }

    /// Sector of `u ∈ C` as seen by the target module.
    fn gen_sector(&self, gen: usize) -> i64 {
        self.target.induced.lie.sectors[gen] as i64
    }

    pub fn monomial_sector(&self, sd: i64, col: usize) -> i64 {
        let lie = &self.source.induced.lie;
        let mono = &self.source.induced.slices[sd as usize].basis[col];
        mono.modes.iter().map(|&i| self.gen_sector(lie.modes[i].gen)).sum::<i64>().rem_euclid(self.t())
    }

    /// The common sector of the monomials in `v`.
    pub fn state_sector(&self, v: &StateVector) -> Result<i64> {
        let mut sectors = v.vector.iter().map(|(c, _)| self.monomial_sector(v.degree, c));
        let Some(first) = sectors.next() else { return Ok(0) };
        if sectors.all(|r| r == first) {
            Ok(first)
        } else {
            Err(Error::Input("state is not homogeneous for the sector grading".into()))
        }
    }

    /// Degree of `v_q w` in units of `1/T`, for `v` of weight `sd`, `q = qk/T`,
    /// `w` of degree `wd`.
    pub fn output_degree(&self, sd: i64, qk: i64, wd: i64) -> i64 {
        let t = self.t();
        wd + t * sd - qk - t
    }

    /// `v_{qk/T} w`, in normal form of the target. `None` stands for zero
    /// because of a negative degree or a sector mismatch.
    pub fn coefficient(&self, v: &StateVector, qk: i64, w: &StateVector) -> Result<Option<StateVector>> {
        let td = self.output_degree(v.degree, qk, w.degree);
        if td < 0 {
            return Ok(None);
        }
        if td > self.target.cutoff() {
            return Err(Error::Window(format!(
                "coefficient lands in degree {td} above the module cutoff {}",
                self.target.cutoff()
            )));
        }
        let mut out = SparseVector::zero(self.target.induced.slice_dim(td));
        let mut any = false;
        for (sc, a) in v.vector.iter() {
            for (wc, b) in w.vector.iter() {
                if let Some(z) = self.mono(v.degree, sc, qk, w.degree, wc)? {
                    out.add_scaled(&(a * b), &z);
                    any = true;
                }
            }
        }
        if !any {
            return Ok(None);
        }
        Ok(Some(StateVector::new(td, out)))
    }

    /// Raw target mode `gen(k/T)` on a target vector of degree `wd`.
    fn target_mode(&self, gen: usize, k: i64, wd: i64, w: &SparseVector) -> Result<Option<SparseVector>> {
        let lie = &self.target.induced.lie;
        let deg = lie.mode_degree(Mode { gen, k });
        let td = wd + deg;
        if td < 0 || w.is_zero() {
            return Ok(None);
        }
        if td > self.target.cutoff() {
            return Err(Error::Window(format!(
                "mode action lands in degree {td} above the module cutoff {}",
                self.target.cutoff()
            )));
        }
        let elem = lie.reduce(&lie.tca.basis(gen), k)?;
        let v = self.target.induced.act_element(&elem, deg, wd, w)?.expect("non-negative degree");
        Ok(Some(self.target.normal_form(td, &v)))
    }

    /// `v_{qk/T} w` on a target vector for a source monomial `v`.
    fn on_vector(&self, sd: i64, sc: usize, qk: i64, wd: i64, w: &SparseVector) -> Result<Option<SparseVector>> {
        let mut out: Option<SparseVector> = None;
        for (wc, c) in w.iter() {
            if let Some(z) = self.mono(sd, sc, qk, wd, wc)? {
                match &mut out {
                    Some(o) => o.add_scaled(c, &z),
                    None => out = Some(z.scaled(c)),
                }
            }
        }
        Ok(out)
    }

    fn mono(&self, sd: i64, sc: usize, qk: i64, wd: i64, wc: usize) -> Result<Option<SparseVector>> {
        let t = self.t();
        let td = self.output_degree(sd, qk, wd);
        if td < 0 || (qk - self.monomial_sector(sd, sc)).rem_euclid(t) != 0 {
            return Ok(None);
        }
        if td > self.target.cutoff() {
            return Err(Error::Window(format!(
                "coefficient lands in degree {td} above the module cutoff {}",
                self.target.cutoff()
            )));
        }
        let key = (sd as usize, sc, qk, wd, wc);
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(sd, sc, qk, wd, wc)?;
        self.cache.lock().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, sd: i64, sc: usize, qk: i64, wd: i64, wc: usize) -> Result<Option<SparseVector>> {
        let t = self.t();
        let td = self.output_degree(sd, qk, wd);
        let out_dim = self.target.induced.slice_dim(td);
        let w = SparseVector::unit(self.target.induced.slice_dim(wd), wc);
        let src = &self.source.induced;
        let slie = &src.lie;
        let mono = src.slices[sd as usize].basis[sc].clone();
        let Some((&c1, rest)) = mono.modes.split_first() else {
            return Ok(if qk == -t { Some(self.target.normal_form(wd, &w)) } else { None });
        };
        let Mode { gen: u, k: p } = slie.modes[c1];
        let rd = sd - slie.degree(c1);
        let rest = Monomial { modes: rest.to_vec(), fiber: mono.fiber };
        let rc = src.slices[rd as usize].index_of(&rest).expect("suffix of a basis monomial");
        let r = self.gen_sector(u);
        let sk = if u >= slie.tca.dim0() || r == 0 { r } else { r - t };
        let tk = qk - sk;
        let s = frac(sk, t);
        let mut out = SparseVector::zero(out_dim);

        // Σ_m (-1)^m C(p,m) u_{p+s-m} (v'_{t+m} w)
        let mut m = 0i64;
        loop {
            let inner_k = tk + m * t;
            if self.output_degree(rd, inner_k, wd) < 0 {
                break;
            }
            let coeff = sign(m) * binomial(&int(p), m as u32);
            if !coeff.is_zero() {
                if let Some(inner) = self.mono(rd, rc, inner_k, wd, wc)? {
                    let id = self.output_degree(rd, inner_k, wd);
                    if let Some(z) = self.target_mode(u, p * t + sk - m * t, id, &inner)? {
                        out.add_scaled(&coeff, &z);
                    }
                }
            }
            m += 1;
        }

        // -(-1)^p Σ_m (-1)^m C(p,m) v'_{p+t-m} (u_{s+m} w)
        let mut m = 0i64;
        loop {
            let uk = sk + m * t;
            let ud = wd + self.target.induced.lie.mode_degree(Mode { gen: u, k: uk });
            if ud < 0 {
                break;
            }
            let coeff = -(sign(p) * sign(m) * binomial(&int(p), m as u32));
            if !coeff.is_zero() {
                if let Some(y) = self.target_mode(u, uk, wd, &w)? {
                    if let Some(z) = self.on_vector(rd, rc, p * t + tk - m * t, ud, &y)? {
                        out.add_scaled(&coeff, &z);
                    }
                }
            }
            m += 1;
        }

        // -Σ_{m≥1} C(s,m) (u_{p+m} v')_{q-m} w, computed in the source
        let rv = SparseVector::unit(src.slice_dim(rd), rc);
        let mut m = 1i64;
        loop {
            let coeff = -binomial(&s, m as u32);
            if coeff.is_zero() {
                break;
            }
            let elem_mode = Mode { gen: u, k: p + m };
            let yd = rd + slie.mode_degree(elem_mode);
            if yd < 0 {
                break;
            }
            let elem = slie.reduce(&slie.tca.basis(u), p + m)?;
            let y = src.act_element(&elem, slie.mode_degree(elem_mode), rd, &rv)?.expect("non-negative degree");
            let y = self.source.normal_form(yd, &y);
            for (yc, c) in y.iter() {
                if let Some(z) = self.mono(yd, yc, qk - m * t, wd, wc)? {
                    out.add_scaled(&(&coeff * c), &z);
                }
            }
            m += 1;
        }
        Ok(Some(self.target.normal_form(td, &out)))
    }
}

/// `{w ∈ M(d) : v_q w = 0 for all v ∈ S and all q with v_q w materialized}`
/// per degree, in quotient coordinates of the target.
pub fn annihilator_in_module(engine: &FieldEngine, states: &[StateVector]) -> Result<Vec<Subspace>> {
    let target = &engine.target;
    let t = engine.t();
    let mut out = Vec::new();
    for d in 0..=target.cutoff() {
        let n = target.dim(d);
        let basis = target.quotient_basis(d);
        let mut functionals: Vec<SparseVector> = Vec::new();
        for s in states {
            let r = engine.state_sector(s)?;
            let lo = engine.output_degree(s.degree, 0, d) - target.cutoff();
            let hi = engine.output_degree(s.degree, 0, d);
            for qk in lo..=hi {
                if (qk - r).rem_euclid(t) != 0 {
                    continue;
                }
                let od = engine.output_degree(s.degree, qk, d);
                let mut cols = Vec::with_capacity(n);
                for &c in &basis {
                    let w = StateVector::new(d, SparseVector::unit(target.induced.slice_dim(d), c));
                    let img = engine.coefficient(s, qk, &w)?;
                    cols.push(img.map_or_else(|| SparseVector::zero(target.dim(od)), |z| target.coords(od, &z.vector)));
                }
                functionals.extend(transpose(target.dim(od), &cols));
            }
        }
        out.push(kernel(n, &functionals)?);
    }
    Ok(out)
}

/// Checks that the annihilator is stable under every basis mode that keeps
/// the degree inside the truncation.
pub fn check_annihilator_invariance(target: &GradedModule, ann: &[Subspace]) -> CheckReport {
    let mut r = CheckReport::new("annihilator is a submodule");
    let lie = &target.induced.lie;
    for d in 0..=target.cutoff() {
        for row in ann[d as usize].rows() {
            let v = target.lift(d, row);
            for x in 0..lie.dim() {
                let td = d + lie.degree(x);
                if td < 0 || td > target.cutoff() {
                    continue;
                }
                if let Ok(Some(w)) = target.act(x, d, &v) {
                    r.count();
                    if !ann[td as usize].contains(&target.coords(td, &w)) {
                        r.fail(
                            "mode action preserves the annihilator",
                            vec![lie.mode_label(lie.modes[x]), format!("degree {d}")],
                            w.render(None),
                            "member of the annihilator",
                        );
                    }
                }
            }
        }
    }
    r
}
