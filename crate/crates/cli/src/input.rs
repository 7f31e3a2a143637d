//! JSON input files: an algebra `A`, an algebroid `B` over it, sectors of a
//! finite-order automorphism and optional degree-zero fibers.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;
use vertex_algebroid::algebra::CommAlgebra;
use vertex_algebroid::algebroid::VertexAlgebroid;
use vertex_algebroid::grading::SectorGrading;
use vertex_algebroid::linalg::{BilinearMap, LinearMap, SparseVector};
use vertex_algebroid::rational::{parse_rational, Rational};
use vertex_algebroid::twisted::TwistedFiber;

use crate::CliError;

/// A basis reference: either a label or a zero-based position.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Index {
    Position(usize),
    Label(String),
}

type Quad = (Index, Index, Index, String);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    #[serde(rename = "T", default = "one_u32")]
    t: u32,
    #[serde(rename = "A")]
    a: RawA,
    #[serde(rename = "B", default)]
    b: RawB,
    #[serde(default)]
    sectors: BTreeMap<String, u32>,
    #[serde(default)]
    fibers: Vec<RawFiber>,
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawA {
    basis: Vec<String>,
    #[serde(default)]
    unit: Option<Index>,
    #[serde(default)]
    product: Vec<Quad>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawB {
    #[serde(default)]
    basis: Vec<String>,
    #[serde(default)]
    action: Vec<Quad>,
    #[serde(default)]
    bracket: Vec<Quad>,
    #[serde(default)]
    pairing: Vec<Quad>,
    #[serde(default)]
    anchor: Vec<Quad>,
    #[serde(default)]
    partial: Vec<(Index, Index, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiber {
    dim: usize,
    #[serde(rename = "A0_action", default)]
    a0_action: Vec<(Index, usize, usize, String)>,
    #[serde(rename = "g_action", default)]
    g_action: Vec<(Index, usize, usize, String)>,
}

/// Everything read from one input file.
#[derive(Debug, Clone)]
pub struct ParsedInput {
    pub algebroid: VertexAlgebroid,
    pub grading: SectorGrading,
    pub fibers: Vec<TwistedFiber>,
    pub warnings: Vec<String>,
}

struct Basis<'a> {
    what: &'a str,
    labels: HashMap<&'a str, usize>,
    len: usize,
}

impl<'a> Basis<'a> {
    fn new(what: &'a str, labels: &'a [String]) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if map.insert(l.as_str(), i).is_some() {
                return Err(CliError::Input(format!("duplicate label {l:?} in {what} basis")));
            }
        }
        Ok(Self {
            what,
            labels: map,
            len: labels.len(),
        })
    }

    fn resolve(&self, idx: &Index, path: &str) -> Result<usize, CliError> {
        match idx {
            Index::Position(i) if *i < self.len => Ok(*i),
            Index::Position(i) => Err(CliError::Input(format!("{path}: index {i} outside the {} basis", self.what))),
            Index::Label(l) => self
                .labels
                .get(l.as_str())
                .copied()
                .ok_or_else(|| CliError::Input(format!("{path}: unknown {} label {l:?}", self.what))),
        }
    }
}

struct Coefficients<'w> {
    warnings: &'w mut Vec<String>,
}

impl Coefficients<'_> {
    fn parse(&mut self, text: &str, path: &str) -> Result<Rational, CliError> {
        let p = parse_rational(text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
        if p.normalized {
            self.warnings.push(format!("{path}: rational {text:?} normalized to {}", p.value));
        }
        Ok(p.value)
    }
}

fn fill(
    table: &mut BilinearMap,
    entries: &[Quad],
    bases: [&Basis; 3],
    name: &str,
    coeffs: &mut Coefficients,
) -> Result<(), CliError> {
    for (n, (i, j, k, c)) in entries.iter().enumerate() {
        let path = format!("{name}[{n}]");
        let (i, j, k) = (
            bases[0].resolve(i, &path)?,
            bases[1].resolve(j, &path)?,
            bases[2].resolve(k, &path)?,
        );
        let c = coeffs.parse(c, &path)?;
        table.add_entry(i, j, k, &c);
    }
    Ok(())
}

/// Parses and shape-checks an input document. Axioms are not checked here.
pub fn parse_input(text: &str) -> Result<ParsedInput, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawInput = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Input(format!("{path}: {inner} (line {}, column {})", inner.line(), inner.column()))
    })?;
    build(raw)
}

fn build(raw: RawInput) -> Result<ParsedInput, CliError> {
    let mut warnings = Vec::new();
    let mut coeffs = Coefficients { warnings: &mut warnings };
    let na = raw.a.basis.len();
    let nb = raw.b.basis.len();
    let a_basis = Basis::new("A", &raw.a.basis)?;
    let b_basis = Basis::new("B", &raw.b.basis)?;
    if let Some(l) = raw.b.basis.iter().find(|l| a_basis.labels.contains_key(l.as_str())) {
        return Err(CliError::Input(format!("label {l:?} is used in both A and B")));
    }
    if raw.t == 0 {
        return Err(CliError::Input("T: must be a positive integer".into()));
    }

    let unit = match (&raw.a.unit, na) {
        (Some(u), _) => SparseVector::unit(na, a_basis.resolve(u, "A.unit")?),
        (None, 0) => SparseVector::zero(0),
        (None, _) => return Err(CliError::Input("A.unit: missing for a nonzero algebra".into())),
    };
    let mut product = BilinearMap::zero(na, na, na);
    fill(&mut product, &raw.a.product, [&a_basis, &a_basis, &a_basis], "A.product", &mut coeffs)?;
    let a = CommAlgebra::new(raw.a.basis.clone(), unit, product).map_err(|e| CliError::Input(format!("A: {e}")))?;

    let mut b = VertexAlgebroid::zero(a, raw.b.basis.clone());
    fill(&mut b.action, &raw.b.action, [&a_basis, &b_basis, &b_basis], "B.action", &mut coeffs)?;
    fill(&mut b.bracket, &raw.b.bracket, [&b_basis, &b_basis, &b_basis], "B.bracket", &mut coeffs)?;
    fill(&mut b.pairing, &raw.b.pairing, [&b_basis, &b_basis, &a_basis], "B.pairing", &mut coeffs)?;
    fill(&mut b.anchor, &raw.b.anchor, [&b_basis, &a_basis, &a_basis], "B.anchor", &mut coeffs)?;
    let mut partial = LinearMap::zero(na, nb);
    for (n, (x, v, c)) in raw.b.partial.iter().enumerate() {
        let path = format!("B.partial[{n}]");
        let (x, v) = (a_basis.resolve(x, &path)?, b_basis.resolve(v, &path)?);
        let c = coeffs.parse(c, &path)?;
        partial.add_entry(x, v, &c);
    }
    b.partial = partial;
    b.validate_shapes().map_err(|e| CliError::Input(e.to_string()))?;

    let mut grading = SectorGrading::trivial(&b);
    grading.t = raw.t;
    for (label, &r) in &raw.sectors {
        if r >= raw.t {
            return Err(CliError::Input(format!("sectors.{label}: sector {r} is not below T = {}", raw.t)));
        }
        if let Some(&i) = a_basis.labels.get(label.as_str()) {
            grading.a_sectors[i] = r;
        } else if let Some(&i) = b_basis.labels.get(label.as_str()) {
            grading.b_sectors[i] = r;
        } else {
            return Err(CliError::Input(format!("sectors.{label}: unknown label")));
        }
    }

    // fiber tables are indexed by the sector-0 bases A⁰ and B⁰
    let a0: Vec<String> = (0..na).filter(|&i| grading.a_sectors[i] == 0).map(|i| raw.a.basis[i].clone()).collect();
    let b0: Vec<String> = (0..nb).filter(|&i| grading.b_sectors[i] == 0).map(|i| raw.b.basis[i].clone()).collect();
    let a0_basis = Basis::new("A⁰", &a0)?;
    let b0_basis = Basis::new("B⁰", &b0)?;
    let mut fibers = Vec::new();
    for (n, f) in raw.fibers.iter().enumerate() {
        let mut fiber = TwistedFiber::zero(&b, &grading, f.dim);
        for (table, entries, basis, name) in [
            (&mut fiber.a0_action, &f.a0_action, &a0_basis, "A0_action"),
            (&mut fiber.g_action, &f.g_action, &b0_basis, "g_action"),
        ] {
            for (m, (x, i, j, c)) in entries.iter().enumerate() {
                let path = format!("fibers[{n}].{name}[{m}]");
                let x = basis.resolve(x, &path)?;
                if *i >= f.dim || *j >= f.dim {
                    return Err(CliError::Input(format!("{path}: fiber index outside dimension {}", f.dim)));
                }
                let c = coeffs.parse(c, &path)?;
                table.add_entry(x, *i, *j, &c);
            }
        }
        fibers.push(fiber);
    }
    Ok(ParsedInput {
        algebroid: b,
        grading,
        fibers,
        warnings,
    })
}
