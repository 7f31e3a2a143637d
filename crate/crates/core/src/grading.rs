//! Finite-order automorphisms given as `Z/T` sector gradings, algebroid
//! endomorphisms, the fixed-point subalgebroid and the overlap ideal.

use serde::{Deserialize, Serialize};

use crate::algebra::CommAlgebra;
use crate::algebroid::VertexAlgebroid;
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, SparseVector, Subspace};
use crate::rational::{minus_one, one, Rational};
use crate::report::CheckReport;

pub const DEFAULT_MAX_ORDER: u32 = 64;

/// Sector `r(v) ∈ {0, …, T-1}` for every basis vector of `A` and of `B`.
/// Encodes the diagonal automorphism `v ↦ ζ^{r(v)} v` with `ζ` a primitive
/// `T`-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorGrading {
    pub t: u32,
    pub a_sectors: Vec<u32>,
    pub b_sectors: Vec<u32>,
}

impl SectorGrading {
    pub fn trivial(b: &VertexAlgebroid) -> Self {
        Self {
            t: 1,
            a_sectors: vec![0; b.dim_a()],
            b_sectors: vec![0; b.dim_b()],
        }
    }

    pub fn validate(&self, b: &VertexAlgebroid) -> Result<()> {
        if self.t == 0 {
            return Err(Error::Input("T must be a positive integer".into()));
        }
        if self.a_sectors.len() != b.dim_a() || self.b_sectors.len() != b.dim_b() {
            return Err(Error::Input("sector list does not match the basis".into()));
        }
        if let Some(r) = self.a_sectors.iter().chain(&self.b_sectors).find(|&&r| r >= self.t) {
            return Err(Error::Input(format!("sector {r} is not below T = {}", self.t)));
        }
        Ok(())
    }

    /// Sectors of `C = A ⊕ B` in the conformal-algebra ordering.
    pub fn c_sectors(&self) -> Vec<u32> {
        self.a_sectors.iter().chain(&self.b_sectors).copied().collect()
    }

    fn add(&self, r: u32, s: u32) -> u32 {
        (r + s) % self.t
    }

    /// The automorphism `v ↦ (-1)^{r(v)} v`, which is rational only when
    /// `T ≤ 2`.
    pub fn sign_automorphism(&self) -> Option<GradedEndomorphism> {
        if self.t > 2 {
            return None;
        }
        let diag = |sectors: &[u32]| {
            let n = sectors.len();
            LinearMap::from_columns(
                n,
                sectors
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| SparseVector::from_entries(n, [(i, if r == 0 { one() } else { minus_one() })]))
                    .collect(),
            )
        };
        Some(GradedEndomorphism {
            a_map: diag(&self.a_sectors),
            b_map: diag(&self.b_sectors),
        })
    }
}

/// Checks that every structure constant respects sector addition mod `T`.
pub fn check_sector_grading(b: &VertexAlgebroid, g: &SectorGrading) -> CheckReport {
    let mut r = CheckReport::new("sector grading");
    if let Err(e) = g.validate(b) {
        r.fail("well-formed grading", vec![], e.to_string(), "valid");
        return r;
    }
    let an = |i: usize| b.a.labels[i].clone();
    let bn = |i: usize| b.labels[i].clone();
    let entry = |r: &mut CheckReport, law: &str, inputs: Vec<(String, u32)>, out: (String, u32)| {
        r.count();
        let expected = inputs.iter().fold(0, |acc, (_, s)| g.add(acc, *s));
        if expected != out.1 {
            let mut w: Vec<String> = inputs.iter().map(|(l, s)| format!("{l}[{s}]")).collect();
            w.push(format!("→ {}[{}]", out.0, out.1));
            r.violations.push(crate::report::Violation {
                law: law.to_string(),
                witness: w,
                lhs: format!("sector {}", out.1),
                rhs: format!("sector {expected}"),
            });
        }
    };
    for (i, _) in b.a.unit.iter() {
        r.count();
        if g.a_sectors[i] != 0 {
            r.fail("identity lies in sector 0", vec![an(i)], format!("sector {}", g.a_sectors[i]), "sector 0");
        }
    }
    for (i, j, k, _) in b.a.product.entries() {
        entry(&mut r, "product", vec![(an(i), g.a_sectors[i]), (an(j), g.a_sectors[j])], (an(k), g.a_sectors[k]));
    }
    for (i, j, k, _) in b.action.entries() {
        entry(&mut r, "A-action", vec![(an(i), g.a_sectors[i]), (bn(j), g.b_sectors[j])], (bn(k), g.b_sectors[k]));
    }
    for (i, j, k, _) in b.bracket.entries() {
        entry(&mut r, "bracket", vec![(bn(i), g.b_sectors[i]), (bn(j), g.b_sectors[j])], (bn(k), g.b_sectors[k]));
    }
    for (i, j, k, _) in b.pairing.entries() {
        entry(&mut r, "pairing", vec![(bn(i), g.b_sectors[i]), (bn(j), g.b_sectors[j])], (an(k), g.a_sectors[k]));
    }
    for (i, j, k, _) in b.anchor.entries() {
        entry(&mut r, "anchor", vec![(bn(i), g.b_sectors[i]), (an(j), g.a_sectors[j])], (an(k), g.a_sectors[k]));
    }
    for i in 0..b.dim_a() {
        for (k, _) in b.partial.column(i).iter() {
            entry(&mut r, "∂", vec![(an(i), g.a_sectors[i])], (bn(k), g.b_sectors[k]));
        }
    }
    r
}

/// A linear map on `A ⊕ B` preserving both summands.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedEndomorphism {
    pub a_map: LinearMap,
    pub b_map: LinearMap,
}

impl GradedEndomorphism {
    pub fn identity(b: &VertexAlgebroid) -> Self {
        Self {
            a_map: LinearMap::identity(b.dim_a()),
            b_map: LinearMap::identity(b.dim_b()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedEndomorphism) -> GradedEndomorphism {
        GradedEndomorphism {
            a_map: self.a_map.compose(&other.a_map),
            b_map: self.b_map.compose(&other.b_map),
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.a_map.in_dim() == self.a_map.out_dim()
            && self.b_map.in_dim() == self.b_map.out_dim()
            && self.a_map.rank() == self.a_map.in_dim()
            && self.b_map.rank() == self.b_map.in_dim()
    }

    /// As a block-diagonal map on `C = A ⊕ B`.
    pub fn on_c(&self) -> LinearMap {
        let (na, nb) = (self.a_map.in_dim(), self.b_map.in_dim());
        let n = na + nb;
        let mut cols = Vec::with_capacity(n);
        for c in self.a_map.columns() {
            cols.push(SparseVector::from_entries(n, c.iter().map(|(i, x)| (i, x.clone()))));
        }
        for c in self.b_map.columns() {
            cols.push(SparseVector::from_entries(n, c.iter().map(|(i, x)| (i + na, x.clone()))));
        }
        LinearMap::from_columns(n, cols)
    }
}

/// Outcome of checking a candidate endomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndomorphismInfo {
    pub bijective: bool,
    /// Multiplicative order when found at most `max_order`.
    pub order: Option<u32>,
}

/// Checks the six homomorphism conditions (with `f(e) = e`) on all basis
/// tuples, then bijectivity and the multiplicative order up to `max_order`.
pub fn check_algebroid_endomorphism(
    b: &VertexAlgebroid,
    f: &GradedEndomorphism,
    max_order: u32,
) -> (CheckReport, EndomorphismInfo) {
    let mut r = CheckReport::new("algebroid endomorphism");
    let (na, nb) = (b.dim_a(), b.dim_b());
    if f.a_map.in_dim() != na || f.a_map.out_dim() != na || f.b_map.in_dim() != nb || f.b_map.out_dim() != nb {
        r.fail("shape", vec![], "mismatched", "square maps on A and B");
        return (
            r,
            EndomorphismInfo {
                bijective: false,
                order: None,
            },
        );
    }
    let la = Some(b.a.labels.as_slice());
    let lb = Some(b.labels.as_slice());
    let an = |i: usize| b.a.labels[i].clone();
    let bn = |i: usize| b.labels[i].clone();
    let fa = |v: &SparseVector| f.a_map.apply(v);
    let fb = |v: &SparseVector| f.b_map.apply(v);
    let a = |i| b.a_basis(i);
    let bb = |i| b.b_basis(i);

    r.compare("f(e) = e", Vec::new, &fa(&b.a.unit), &b.a.unit, la);
    for x in 0..na {
        for y in 0..na {
            r.compare(
                "f|A is an algebra homomorphism",
                || vec![an(x), an(y)],
                &fa(&b.a.mul(&a(x), &a(y))),
                &b.a.mul(&fa(&a(x)), &fa(&a(y))),
                la,
            );
        }
        r.compare("f∘∂ = ∂∘f", || vec![an(x)], &fb(&b.d(&a(x))), &b.d(&fa(&a(x))), lb);
        for v in 0..nb {
            r.compare(
                "f(a*b) = f(a)*f(b)",
                || vec![an(x), bn(v)],
                &fb(&b.act(&a(x), &bb(v))),
                &b.act(&fa(&a(x)), &fb(&bb(v))),
                lb,
            );
            r.compare(
                "f(b_0 a) = f(b)_0 f(a)",
                || vec![bn(v), an(x)],
                &fa(&b.pi(&bb(v), &a(x))),
                &b.pi(&fb(&bb(v)), &fa(&a(x))),
                la,
            );
        }
    }
    for u in 0..nb {
        for v in 0..nb {
            r.compare(
                "f|B is a Leibniz homomorphism",
                || vec![bn(u), bn(v)],
                &fb(&b.br(&bb(u), &bb(v))),
                &b.br(&fb(&bb(u)), &fb(&bb(v))),
                lb,
            );
            r.compare(
                "<f u, f v> = f<u,v>",
                || vec![bn(u), bn(v)],
                &b.pair(&fb(&bb(u)), &fb(&bb(v))),
                &fa(&b.pair(&bb(u), &bb(v))),
                la,
            );
        }
    }
    let bijective = f.is_bijective();
    let order = if bijective {
        let id = GradedEndomorphism::identity(b);
        let mut power = f.clone();
        let mut found = None;
        for k in 1..=max_order {
            if power == id {
                found = Some(k);
                break;
            }
            power = f.compose(&power);
        }
        found
    } else {
        None
    };
    match (bijective, order) {
        (false, _) => r.note("not bijective"),
        (true, Some(k)) => r.note(format!("automorphism of order {k}")),
        (true, None) => r.note(format!("automorphism of infinite order or order above {max_order}")),
    }
    (r, EndomorphismInfo { bijective, order })
}

/// Sector-0 part of `A` and `B` with the index maps back into the full bases.
#[derive(Debug, Clone)]
pub struct FixedPart {
    pub algebroid: VertexAlgebroid,
    pub a_indices: Vec<usize>,
    pub b_indices: Vec<usize>,
}

/// Restricts every table to the sector-0 basis vectors.
pub fn fixed_subalgebroid(b: &VertexAlgebroid, g: &SectorGrading) -> Result<FixedPart> {
    g.validate(b)?;
    let a_idx: Vec<usize> = (0..b.dim_a()).filter(|&i| g.a_sectors[i] == 0).collect();
    let b_idx: Vec<usize> = (0..b.dim_b()).filter(|&i| g.b_sectors[i] == 0).collect();
    let a0 = b.a.restrict(&a_idx)?;
    let pos_a = |v: &SparseVector| -> Result<SparseVector> { local(v, &a_idx) };
    let pos_b = |v: &SparseVector| -> Result<SparseVector> { local(v, &b_idx) };
    let (ma, mb) = (a_idx.len(), b_idx.len());
    let mut out = VertexAlgebroid::zero(a0, b_idx.iter().map(|&i| b.labels[i].clone()).collect());
    for (p, &i) in a_idx.iter().enumerate() {
        for (q, &j) in b_idx.iter().enumerate() {
            out.action.set_basis(p, q, pos_b(b.action.basis(i, j))?);
            out.anchor.set_basis(q, p, pos_a(b.anchor.basis(j, i))?);
        }
    }
    for (p, &i) in b_idx.iter().enumerate() {
        for (q, &j) in b_idx.iter().enumerate() {
            out.bracket.set_basis(p, q, pos_b(b.bracket.basis(i, j))?);
            out.pairing.set_basis(p, q, pos_a(b.pairing.basis(i, j))?);
        }
    }
    let mut cols = Vec::with_capacity(ma);
    for &i in &a_idx {
        cols.push(pos_b(b.partial.column(i))?);
    }
    out.partial = LinearMap::from_columns(mb, cols);
    Ok(FixedPart {
        algebroid: out,
        a_indices: a_idx,
        b_indices: b_idx,
    })
}

fn local(v: &SparseVector, indices: &[usize]) -> Result<SparseVector> {
    let mut out = SparseVector::zero(indices.len());
    for (i, c) in v.iter() {
        let pos = indices
            .iter()
            .position(|&k| k == i)
            .ok_or_else(|| Error::Input("structure map leaves sector 0".into()))?;
        out.set(pos, c.clone());
    }
    Ok(out)
}

/// `I = Σ_{r=1}^{T-1} A^r · A^{T-r}` inside `A^0`.
#[derive(Debug, Clone)]
pub struct OverlapIdeal {
    pub a0: CommAlgebra,
    /// Sector-0 basis indices of `A`.
    pub a0_indices: Vec<usize>,
    pub ideal: Subspace,
    pub quotient: CommAlgebra,
    pub report: CheckReport,
}

pub fn overlap_ideal(a: &CommAlgebra, g: &SectorGrading) -> Result<OverlapIdeal> {
    if g.a_sectors.len() != a.dim() || g.t == 0 {
        return Err(Error::Input("grading does not match A".into()));
    }
    let idx: Vec<usize> = (0..a.dim()).filter(|&i| g.a_sectors[i] == 0).collect();
    let a0 = a.restrict(&idx)?;
    let mut ideal = Subspace::zero(idx.len());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let (ri, rj) = (g.a_sectors[i], g.a_sectors[j]);
            if ri != 0 && rj != 0 && ri + rj == g.t {
                ideal.insert(&local(a.product.basis(i, j), &idx)?);
            }
        }
    }
    let mut report = CheckReport::new("overlap ideal");
    for k in 0..a0.dim() {
        for row in ideal.rows() {
            let prod = a0.mul(&a0.basis(k), row);
            report.count();
            if !ideal.contains(&prod) {
                report.fail(
                    "A0·I ⊆ I",
                    vec![a0.labels[k].clone(), row.render(Some(&a0.labels))],
                    prod.render(Some(&a0.labels)),
                    "member of I",
                );
            }
        }
    }
    let quotient = a0.quotient(&ideal);
    Ok(OverlapIdeal {
        a0,
        a0_indices: idx,
        ideal,
        quotient,
        report,
    })
}

/// Matrix of `f` in a form convenient for tests: scale basis vector `i` of
/// `B` by `c`, identity elsewhere.
pub fn scaling_endomorphism(b: &VertexAlgebroid, scales: &[(usize, Rational)]) -> GradedEndomorphism {
    let mut f = GradedEndomorphism::identity(b);
    let nb = b.dim_b();
    let mut cols: Vec<SparseVector> = f.b_map.columns().to_vec();
    for (i, c) in scales {
        cols[*i] = SparseVector::unit(nb, *i).scaled(c);
    }
    f.b_map = LinearMap::from_columns(nb, cols);
    f
}
