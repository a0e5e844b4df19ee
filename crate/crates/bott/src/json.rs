//! JSON file formats. Rationals are strings `"p/q"` (or `"p"`), every other
//! number is an integer.

use std::collections::BTreeSet;

use bott_core::chern::{Candidate, ChernData, Semistability};
use bott_core::divisor::{DivisorPolytope, InvariantDivisor, ReducedDivisor};
use bott_core::fan::BottMatrix;
use bott_core::filtration::{Filtration, FiltrationBundle};
use bott_core::lattice::AdaptedBasis;
use bott_core::linalg::{self, Subspace};
use bott_core::positivity::{PositivityReport, VarietyReport, Via};
use bott_core::rational::{self, Rational};
use bott_core::{Error, MaximalCone, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub k: usize,
    pub c: Vec<Vec<i64>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<BottMatrix> {
        if self.c.len() != self.k {
            return Err(Error::Input(format!("\"k\" is {} but \"c\" has {} rows", self.k, self.c.len())));
        }
        BottMatrix::from_rows(&self.c)
    }

    pub fn from_matrix(c: &BottMatrix) -> Self {
        MatrixJson { k: c.height(), c: c.rows() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallJson {
    pub mask: u32,
    pub pivot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<u32>,
    pub walls: Vec<WallJson>,
}

impl FanJson {
    pub fn from_matrix(c: &BottMatrix) -> Self {
        FanJson {
            rays: c.rays().into_iter().map(|r| r.vector).collect(),
            max_cones: c.maximal_cones().map(|m| m.selection).collect(),
            walls: c.walls().map(|w| WallJson { mask: w.mask, pivot: w.pivot }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisorJson {
    Full(Vec<i64>),
    Reduced(Vec<i64>),
}

impl DivisorJson {
    /// Reads comma-separated coefficients: `k` of them are a class in the
    /// Picard basis, `2k` are coefficients on every ray.
    pub fn from_csv(csv: &str, k: usize) -> Result<Self> {
        let values = parse_csv_ints(csv)?;
        match values.len() {
            n if n == k => Ok(DivisorJson::Reduced(values)),
            n if n == 2 * k => Ok(DivisorJson::Full(values)),
            n => Err(Error::Input(format!("expected {k} or {} coefficients, got {n}", 2 * k))),
        }
    }

    pub fn to_divisor(&self, c: &BottMatrix) -> Result<InvariantDivisor> {
        let (values, expected) = match self {
            DivisorJson::Full(m) => (m, c.ray_count()),
            DivisorJson::Reduced(a) => (a, c.height()),
        };
        if values.len() != expected {
            return Err(Error::Input(format!("expected {expected} coefficients, got {}", values.len())));
        }
        Ok(match self {
            DivisorJson::Full(m) => InvariantDivisor::new(m.clone()),
            DivisorJson::Reduced(a) => ReducedDivisor::new(a.clone()).embed(),
        })
    }
}

pub fn parse_csv_ints(csv: &str) -> Result<Vec<i64>> {
    csv.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Input(format!("not an integer: {s:?}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpaceJson {
    pub normal: Vec<i64>,
    pub bound: i64,
}

pub fn polytope_json(p: &DivisorPolytope) -> Vec<HalfSpaceJson> {
    p.inequalities.iter().map(|h| HalfSpaceJson { normal: h.normal.clone(), bound: h.bound }).collect()
}

pub fn vector_json(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

pub fn parse_vector(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rational::parse(s)).collect()
}

pub fn subspace_json(s: &Subspace) -> Vec<Vec<String>> {
    s.basis().iter().map(|v| vector_json(v)).collect()
}

pub fn parse_subspace(rows: &[Vec<String>], ambient: usize) -> Result<Subspace> {
    linalg::canonicalize(rows.iter().map(|r| parse_vector(r)).collect::<Result<_>>()?, ambient)
}

/// Reads `"1,0;0,1"`: vectors separated by `;`, entries by `,`.
pub fn parse_subspace_rows(text: &str, ambient: usize) -> Result<Subspace> {
    let rows: Vec<Vec<String>> = text
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split(',').map(|x| x.trim().to_string()).collect())
        .collect();
    parse_subspace(&rows, ambient)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpJson {
    pub level: i64,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayFiltrationJson {
    pub ray: usize,
    pub jumps: Vec<JumpJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub dim: usize,
    pub filtrations: Vec<RayFiltrationJson>,
}

impl BundleJson {
    pub fn from_bundle(e: &FiltrationBundle) -> Self {
        let filtrations = e
            .filtrations()
            .iter()
            .enumerate()
            .map(|(i, f)| RayFiltrationJson {
                ray: i + 1,
                jumps: f.steps().iter().map(|(l, s)| JumpJson { level: *l, basis: subspace_json(s) }).collect(),
            })
            .collect();
        BundleJson { dim: e.rank(), filtrations }
    }

    /// Rays missing from the file carry the trivial filtration. Each
    /// filtration must end with a jump to the zero subspace.
    pub fn to_bundle(&self, rays: usize) -> Result<FiltrationBundle> {
        let mut filtrations = vec![Filtration::trivial(self.dim); rays];
        let mut seen = BTreeSet::new();
        for rf in &self.filtrations {
            if rf.ray == 0 || rf.ray > rays {
                return Err(Error::Input(format!("ray {} out of range 1..={rays}", rf.ray)));
            }
            if !seen.insert(rf.ray) {
                return Err(Error::Input(format!("ray {} listed twice", rf.ray)));
            }
            let steps = rf
                .jumps
                .iter()
                .map(|j| Ok((j.level, parse_subspace(&j.basis, self.dim)?)))
                .collect::<Result<Vec<_>>>()?;
            filtrations[rf.ray - 1] = Filtration::new(self.dim, steps)
                .map_err(|e| Error::Input(format!("ray {}: {e}", rf.ray)))?;
        }
        FiltrationBundle::new(self.dim, filtrations)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedBasisJson {
    pub rays: Vec<usize>,
    pub vectors: Vec<Vec<String>>,
    pub multidegrees: Vec<Vec<i64>>,
}

impl AdaptedBasisJson {
    pub fn new(b: &AdaptedBasis) -> Self {
        AdaptedBasisJson {
            rays: b.labels.clone(),
            vectors: b.vectors.iter().map(|v| vector_json(v)).collect(),
            multidegrees: b.multidegrees.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeBasisJson {
    pub cone: u32,
    pub basis: AdaptedBasisJson,
}

pub fn cone_bases(bases: &[(MaximalCone, AdaptedBasis)]) -> Vec<ConeBasisJson> {
    bases.iter().map(|(m, b)| ConeBasisJson { cone: m.selection, basis: AdaptedBasisJson::new(b) }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityJson {
    pub s_jet_level: i64,
    pub ample: bool,
    pub nef: bool,
    pub big: Option<bool>,
    pub nef_and_big: bool,
    pub via: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s_jet_ample: Option<bool>,
}

impl PositivityJson {
    pub fn new(r: &PositivityReport, sjet: Option<i64>) -> Self {
        let via = match r.via {
            Via::ClosedForm => "closed_form",
            Via::Oracle => "oracle",
            Via::Both => "both",
        };
        PositivityJson {
            s_jet_level: r.s_jet_level,
            ample: r.ample,
            nef: r.nef,
            big: r.big,
            nef_and_big: r.nef_and_big,
            via: via.into(),
            s_jet_ample: sjet.map(|s| r.s_jet_level >= s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyJson {
    pub fano: bool,
    pub weak_fano: bool,
    pub tangent_splits: bool,
    pub anticanonical: Vec<i64>,
    pub sjet_of_minus_k: i64,
}

impl VarietyJson {
    pub fn new(r: &VarietyReport) -> Self {
        VarietyJson {
            fano: r.fano,
            weak_fano: r.weak_fano,
            tangent_splits: r.tangent_splits,
            anticanonical: r.anticanonical.a.clone(),
            sjet_of_minus_k: r.sjet_of_minus_k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub line: Vec<String>,
    pub degree: i64,
}

impl CandidateJson {
    pub fn new(c: &Candidate) -> Self {
        CandidateJson { line: vector_json(&c.line.basis()[0]), degree: c.degree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernJson {
    pub rank: usize,
    pub c1: Vec<i64>,
    pub c2: i64,
    pub discriminant: String,
}

impl ChernJson {
    pub fn new(cd: &ChernData, discriminant: &Rational) -> Self {
        ChernJson { rank: cd.rank, c1: cd.c1.m.clone(), c2: cd.c2, discriminant: rational::format(discriminant) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub slope: String,
    pub semistable: bool,
    pub max_destabilizer: CandidateJson,
    pub candidates: Vec<CandidateJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chern: Option<ChernJson>,
}

impl StabilityJson {
    pub fn new(s: &Semistability, chern: Option<ChernJson>) -> Self {
        StabilityJson {
            slope: rational::format(&s.slope),
            semistable: s.semistable,
            max_destabilizer: CandidateJson::new(&s.max_destabilizer),
            candidates: s.candidates.iter().map(CandidateJson::new).collect(),
            chern,
        }
    }
}

/// Envelope for every successful command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_echo: serde_json::Value,
    /// Present exactly when the command succeeded.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<serde_json::Value>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_agreement: Option<bool>,
}
