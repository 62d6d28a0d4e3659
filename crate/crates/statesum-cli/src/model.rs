//! JSON model files.
//!
//! A model file names algebras, Frobenius forms, involutions, crossings and bimodules;
//! later sections refer to earlier ones by key. Scalars are strings: `"p/q"`, `"p"`, or
//! `"cyclo(N)[c0,c1,...]"`.
//!
//! ```json
//! {
//!   "algebras": { "A": { "kind": "matrix", "n": 2, "ring": "C" } },
//!   "frobenius": { "F": { "algebra": "A", "family": "fhk", "r": "1" } },
//!   "crossings": { "X": { "kind": "canonical", "frobenius": "F" } }
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statesum::algebra::{Algebra, BlockKind, Ring};
use statesum::defect::BimoduleData;
use statesum::frobenius::Frobenius;
use statesum::group::{AbelianGroup, FiniteGroup};
use statesum::km::{standard_involution, InvolutionData, InvolutionKind};
use statesum::spin::{bicharacter_crossing, block_grading, division_ring_grading, Bicharacter, CrossingData};
use statesum::Cyclo;

use crate::error::{CliError, Location, Result};

type K = Cyclo;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frobenius: BTreeMap<String, FrobeniusSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub involutions: BTreeMap<String, InvolutionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub crossings: BTreeMap<String, CrossingSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RingName {
    R,
    #[serde(rename = "C_R")]
    CR,
    #[serde(rename = "H_R")]
    HR,
    C,
}

impl From<RingName> for Ring {
    fn from(r: RingName) -> Ring {
        match r {
            RingName::R => Ring::R,
            RingName::CR => Ring::CR,
            RingName::HR => Ring::HR,
            RingName::C => Ring::C,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GradingSpec {
    /// `Z_2`: diagonal `p + (n-p)` blocks even, off-diagonal blocks odd.
    Block { p: usize },
    /// By the units of `C_R` or `H_R`.
    DivisionRing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub left: String,
    pub right: String,
    /// Result as `label -> coefficient`; omitted products are zero.
    pub terms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    Matrix {
        n: usize,
        ring: RingName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grading: Option<GradingSpec>,
    },
    Cyclic { n: usize },
    Abelian { orders: Vec<u32> },
    Symmetric { k: usize },
    /// `M_n(C)` in the clock-and-shift basis, graded by `Z_n x Z_n`.
    Pauli { n: usize },
    DirectSum { summands: Vec<String> },
    Structure { labels: Vec<String>, unit: Vec<String>, products: Vec<ProductSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Fhk,
    Group,
    /// `eps(a) = Tr(x a)`; needs `x` or `diag`.
    Element,
    /// Explicit `eps` on the basis.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrobeniusSpec {
    pub algebra: String,
    pub family: FamilyName,
    pub r: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    /// Diagonal of `x` on a single matrix block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionName {
    Transpose,
    Hermitian,
    Quaternionic,
    GroupInverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionSpec {
    pub frobenius: String,
    pub kind: InvolutionName,
    /// `a -> s a^* s^{-1}` with `s` given in coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_by: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CrossingSpec {
    Canonical { frobenius: String },
    /// Bicharacter on the algebra's grading group, by its values on generator pairs.
    Bicharacter { frobenius: String, values: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleSpec {
    pub frobenius: String,
    /// Curl sign on the defect line, `1` or `-1`.
    pub sign: i64,
}

/// Fully constructed and validated model.
#[derive(Clone, Default)]
pub struct Model {
    pub algebras: BTreeMap<String, Arc<Algebra<K>>>,
    pub frobenius: BTreeMap<String, Frobenius<K>>,
    pub involutions: BTreeMap<String, InvolutionData<K>>,
    pub crossings: BTreeMap<String, CrossingData<K>>,
    pub bimodules: BTreeMap<String, BimoduleData<K>>,
}

impl ModelFile {
    /// Syntax-level parse; see [`parse_model`] for the validated object graph.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }
}

/// Parses and builds every entity, reporting the first failure with the key's position.
pub fn parse_model(text: &str) -> Result<(ModelFile, Model)> {
    let file = ModelFile::from_json(text)?;
    let model = Resolver { file: &file, text: Some(text), model: Model::default(), visiting: BTreeSet::new() }.run()?;
    Ok((file, model))
}

pub fn build_model(file: &ModelFile) -> Result<Model> {
    Resolver { file, text: None, model: Model::default(), visiting: BTreeSet::new() }.run()
}

/// Line and column (1-based) of `"key"` after the first `"section"` in `text`.
fn locate(text: Option<&str>, section: &str, key: &str) -> Location {
    let Some(text) = text else { return Location(None) };
    let start = text.find(&format!("\"{section}\"")).unwrap_or(0);
    let Some(off) = text[start..].find(&format!("\"{key}\"")).map(|o| o + start) else {
        return Location(None);
    };
    let before = &text[..off];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Location(Some((line, column)))
}

struct Resolver<'a> {
    file: &'a ModelFile,
    text: Option<&'a str>,
    model: Model,
    visiting: BTreeSet<String>,
}

impl<'a> Resolver<'a> {
    fn run(mut self) -> Result<Model> {
        for key in self.file.algebras.keys() {
            self.algebra(key)?;
        }
        for (key, spec) in &self.file.frobenius {
            let f = self.frobenius(key, spec)?;
            self.model.frobenius.insert(key.clone(), f);
        }
        for (key, spec) in &self.file.involutions {
            let f = self.frobenius_ref("involutions", key, &spec.frobenius)?;
            let mut kind = match spec.kind {
                InvolutionName::Transpose => InvolutionKind::Transpose,
                InvolutionName::Hermitian => InvolutionKind::Hermitian,
                InvolutionName::Quaternionic => InvolutionKind::Quaternionic,
                InvolutionName::GroupInverse => InvolutionKind::GroupInverse,
            };
            if let Some(s) = &spec.conjugate_by {
                kind = InvolutionKind::Conjugated { s: self.scalars("involutions", key, s)?, base: Box::new(kind) };
            }
            let inv = standard_involution(&f, &kind).map_err(|e| self.construct("involutions", key, e))?;
            self.model.involutions.insert(key.clone(), inv);
        }
        for (key, spec) in &self.file.crossings {
            let x = match spec {
                CrossingSpec::Canonical { frobenius } => CrossingData::canonical(self.frobenius_ref("crossings", key, frobenius)?),
                CrossingSpec::Bicharacter { frobenius, values } => {
                    let f = self.frobenius_ref("crossings", key, frobenius)?;
                    let group = f
                        .algebra()
                        .grading()
                        .map(|g| g.group.clone())
                        .ok_or_else(|| self.spec_err("crossings", key, "algebra carries no grading"))?;
                    let values = values.iter().map(|row| self.scalars("crossings", key, row)).collect::<Result<Vec<_>>>()?;
                    let bc = Bicharacter::new(group, values).map_err(|e| self.construct("crossings", key, e))?;
                    bicharacter_crossing(&f, &bc).map_err(|e| self.construct("crossings", key, e))?
                }
            };
            self.model.crossings.insert(key.clone(), x);
        }
        for (key, spec) in &self.file.bimodules {
            let f = self.frobenius_ref("bimodules", key, &spec.frobenius)?;
            let v = BimoduleData::regular(f, K::from_int(spec.sign)).map_err(|e| self.construct("bimodules", key, e))?;
            self.model.bimodules.insert(key.clone(), v);
        }
        Ok(self.model)
    }

    fn at(&self, section: &str, key: &str) -> Location {
        locate(self.text, section, key)
    }

    fn construct(&self, section: &'static str, key: &str, source: statesum::Error) -> CliError {
        CliError::Construct { section, key: key.to_string(), source, at: self.at(section, key) }
    }

    fn spec_err(&self, section: &'static str, key: &str, message: impl Into<String>) -> CliError {
        CliError::Spec { section, key: key.to_string(), message: message.into(), at: self.at(section, key) }
    }

    fn reference(&self, section: &'static str, key: &str, target: &str) -> CliError {
        CliError::Reference { section, key: key.to_string(), target: target.to_string(), at: self.at(section, key) }
    }

    fn scalar(&self, section: &'static str, key: &str, s: &str) -> Result<K> {
        s.parse().map_err(|e| self.spec_err(section, key, format!("bad scalar {s:?}: {e}")))
    }

    fn scalars(&self, section: &'static str, key: &str, v: &[String]) -> Result<Vec<K>> {
        v.iter().map(|s| self.scalar(section, key, s)).collect()
    }

    fn frobenius_ref(&self, section: &'static str, key: &str, target: &str) -> Result<Frobenius<K>> {
        self.model.frobenius.get(target).cloned().ok_or_else(|| self.reference(section, key, target))
    }

    fn algebra(&mut self, key: &str) -> Result<Arc<Algebra<K>>> {
        if let Some(a) = self.model.algebras.get(key) {
            return Ok(a.clone());
        }
        let spec = self.file.algebras.get(key).ok_or_else(|| self.reference("algebras", key, key))?;
        if !self.visiting.insert(key.to_string()) {
            return Err(self.spec_err("algebras", key, "cyclic direct-sum reference"));
        }
        let err = |r: &Self, e| r.construct("algebras", key, e);
        let a = match spec {
            AlgebraSpec::Matrix { n, ring, grading } => {
                if *n == 0 {
                    return Err(self.spec_err("algebras", key, "matrix size must be positive"));
                }
                let a = Algebra::matrix(*n, (*ring).into());
                match grading {
                    None => a,
                    Some(g) => {
                        let g = match g {
                            GradingSpec::Block { p } => block_grading(*n, *p),
                            GradingSpec::DivisionRing => division_ring_grading(*n, (*ring).into()),
                        }
                        .map_err(|e| err(self, e))?;
                        a.with_grading(g).map_err(|e| err(self, e))?
                    }
                }
            }
            AlgebraSpec::Cyclic { n } if *n > 0 => Algebra::cyclic(*n),
            AlgebraSpec::Cyclic { .. } => return Err(self.spec_err("algebras", key, "group order must be positive")),
            AlgebraSpec::Abelian { orders } => Algebra::abelian(&AbelianGroup::new(orders.clone()).map_err(|e| err(self, e))?),
            AlgebraSpec::Symmetric { k } if (1..=5).contains(k) => Algebra::group(&FiniteGroup::symmetric(*k)),
            AlgebraSpec::Symmetric { .. } => return Err(self.spec_err("algebras", key, "symmetric group degree must be 1..=5")),
            AlgebraSpec::Pauli { n } => Algebra::pauli(*n).map_err(|e| err(self, e))?,
            AlgebraSpec::DirectSum { summands } => {
                let mut parts = Vec::new();
                for s in summands {
                    if !self.file.algebras.contains_key(s) {
                        return Err(self.reference("algebras", key, s));
                    }
                    parts.push(self.algebra(s)?);
                }
                let (first, rest) = parts.split_first().ok_or_else(|| self.spec_err("algebras", key, "empty direct sum"))?;
                rest.iter().fold((**first).clone(), |acc, p| Algebra::direct_sum(&acc, p))
            }
            AlgebraSpec::Structure { labels, unit, products } => {
                let index = |l: &str| labels.iter().position(|x| x == l);
                let n = labels.len();
                let mut mult = vec![vec![Vec::new(); n]; n];
                for p in products {
                    let (Some(a), Some(b)) = (index(&p.left), index(&p.right)) else {
                        return Err(self.spec_err("algebras", key, format!("unknown label in product {} * {}", p.left, p.right)));
                    };
                    for (label, c) in &p.terms {
                        let d = index(label).ok_or_else(|| self.spec_err("algebras", key, format!("unknown label {label}")))?;
                        mult[a][b].push((d, self.scalar("algebras", key, c)?));
                    }
                }
                let unit = self.scalars("algebras", key, unit)?;
                let a = Algebra::from_structure(labels.clone(), mult, unit).map_err(|e| err(self, e))?;
                a.validate().map_err(|e| err(self, e))?;
                a
            }
        };
        self.visiting.remove(key);
        let a = Arc::new(a);
        self.model.algebras.insert(key.to_string(), a.clone());
        Ok(a)
    }

    fn frobenius(&mut self, key: &str, spec: &FrobeniusSpec) -> Result<Frobenius<K>> {
        const S: &str = "frobenius";
        if !self.file.algebras.contains_key(&spec.algebra) {
            return Err(self.reference(S, key, &spec.algebra));
        }
        let a = self.algebra(&spec.algebra)?;
        let r = self.scalar(S, key, &spec.r)?;
        let err = |r: &Self, e| r.construct(S, key, e);
        match spec.family {
            FamilyName::Fhk => Frobenius::fhk(a, r).map_err(|e| err(self, e)),
            FamilyName::Group => Frobenius::group_form(a, r).map_err(|e| err(self, e)),
            FamilyName::Raw => {
                let eps = spec.eps.as_ref().ok_or_else(|| self.spec_err(S, key, "raw family needs `eps`"))?;
                Frobenius::new(a, self.scalars(S, key, eps)?, r).map_err(|e| err(self, e))
            }
            FamilyName::Element => {
                let x = match (&spec.x, &spec.diag) {
                    (Some(x), None) => self.scalars(S, key, x)?,
                    (None, Some(d)) => {
                        let (n, units) = match a.blocks() {
                            [b] => match b.kind {
                                BlockKind::Matrix { n, ring } => (n, ring.units()),
                                _ => return Err(self.spec_err(S, key, "`diag` needs a single matrix block")),
                            },
                            _ => return Err(self.spec_err(S, key, "`diag` needs a single matrix block")),
                        };
                        if d.len() != n {
                            return Err(self.construct(S, key, statesum::Error::DimensionMismatch { expected: n, got: d.len() }));
                        }
                        let mut x = vec![K::from_int(0); units * n * n];
                        for (l, v) in d.iter().enumerate() {
                            x[Algebra::<K>::matrix_unit_index(n, 0, l, l)] = self.scalar(S, key, v)?;
                        }
                        x
                    }
                    _ => return Err(self.spec_err(S, key, "element family needs exactly one of `x`, `diag`")),
                };
                Frobenius::from_element(a, &x, r).map_err(|e| err(self, e))
            }
        }
    }
}
