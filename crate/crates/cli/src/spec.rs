//! JSON input specs. Every object carries a `kind` discriminator and unknown
//! fields are rejected.

use std::path::Path;
use std::sync::Arc;

use nctriples_core::algebra::Operator;
use nctriples_core::groups::{FiniteTable, GroupElement, GroupHom, GroupModel};
use nctriples_core::weights::{WeightKind, WeightModel};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Input or configuration problem (exit code 2).
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A real number given as a decimal string (exact for integers) or a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Value(f64),
}

impl Num {
    pub fn value(&self) -> Result<f64, InputError> {
        match self {
            Num::Value(v) => Ok(*v),
            Num::Text(s) => s
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| InputError(format!("not a decimal number: {s:?}"))),
        }
    }
}

fn values(nums: &[Num]) -> Result<Vec<f64>, InputError> {
    nums.iter().map(Num::value).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        order: u64,
    },
    FreeAbelian {
        rank: usize,
    },
    Free {
        rank: usize,
    },
    Symmetric {
        degree: usize,
    },
    Finite {
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        identity: Option<usize>,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupModel, InputError> {
        Ok(match self {
            GroupSpec::Cyclic { order } => GroupModel::cyclic(*order)?,
            GroupSpec::FreeAbelian { rank } => GroupModel::FreeAbelian(*rank),
            GroupSpec::Free { rank } => GroupModel::Free(*rank),
            GroupSpec::Symmetric { degree } => GroupModel::symmetric(*degree)?,
            GroupSpec::Finite { labels, table, identity } => {
                GroupModel::Finite(FiniteTable::new(labels.clone(), table.clone(), None, *identity)?)
            }
            GroupSpec::Product { left, right } => GroupModel::product(left.build()?, right.build()?),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    WordLength {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Constant {
        value: Num,
    },
    Hom {
        coefficients: Vec<Num>,
    },
    Affine {
        constant: Num,
        coefficients: Vec<Num>,
    },
    Table {
        values: Vec<Num>,
    },
    Polynomial {
        coefficients: Vec<Num>,
    },
    /// `ω ∘ φ` for a homomorphism into the group of `weight`.
    Pullback {
        hom: HomSpec,
        weight: Box<WeightSpec>,
    },
}

impl WeightSpec {
    pub fn build(&self, group: &Arc<GroupModel>) -> Result<WeightModel, InputError> {
        Ok(match self {
            WeightSpec::WordLength { generators: None } => WeightModel::standard_length(group.clone())?,
            WeightSpec::WordLength { generators: Some(g) } => {
                WeightModel::word_length(group.clone(), &parse_elements(group, g)?)?
            }
            WeightSpec::Constant { value } => WeightModel::constant(group.clone(), value.value()?),
            WeightSpec::Hom { coefficients } => WeightModel::hom(group.clone(), values(coefficients)?)?,
            WeightSpec::Affine { constant, coefficients } => {
                WeightModel::affine(group.clone(), constant.value()?, values(coefficients)?)?
            }
            WeightSpec::Table { values: v } => WeightModel::table(group.clone(), values(v)?)?,
            WeightSpec::Polynomial { coefficients } => WeightModel::polynomial(group.clone(), values(coefficients)?)?,
            WeightSpec::Pullback { hom, weight } => {
                let h = hom.build()?;
                if h.source() != group {
                    return Err(InputError("pullback homomorphism does not start at the weight's group".into()));
                }
                let inner = weight.build(h.target())?;
                WeightModel::pullback(&h, &inner)?
            }
        })
    }
}

pub fn parse_elements(group: &GroupModel, texts: &[String]) -> Result<Vec<GroupElement>, InputError> {
    texts.iter().map(|t| Ok(group.parse_element(t)?)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HomSpec {
    /// Images of generators (infinite sources) or of enough elements to
    /// determine the map (finite sources), as `[x, φ(x)]` pairs.
    Hom {
        source: GroupSpec,
        target: GroupSpec,
        images: Vec<(String, String)>,
    },
    Identity {
        group: GroupSpec,
    },
}

impl HomSpec {
    pub fn build(&self) -> Result<GroupHom, InputError> {
        match self {
            HomSpec::Hom { source, target, images } => {
                let s = Arc::new(source.build()?);
                let t = Arc::new(target.build()?);
                let pairs = images
                    .iter()
                    .map(|(x, y)| Ok((s.parse_element(x)?, t.parse_element(y)?)))
                    .collect::<Result<Vec<_>, InputError>>()?;
                Ok(GroupHom::from_images(s, t, &pairs)?)
            }
            HomSpec::Identity { group } => Ok(GroupHom::identity(Arc::new(group.build()?))),
        }
    }
}

/// A triple: group, weight and truncation; `summary` is written by
/// `build-triple` and ignored on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TripleSpec {
    Triple {
        group: GroupSpec,
        weight: WeightSpec,
        radius: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        double: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        summary: Option<serde_json::Value>,
    },
}

pub struct BuiltTriple {
    pub group: Arc<GroupModel>,
    pub weight: WeightModel,
    pub radius: u32,
    pub generators: Vec<GroupElement>,
    pub double: bool,
}

impl TripleSpec {
    pub fn build(&self) -> Result<BuiltTriple, InputError> {
        let TripleSpec::Triple {
            group,
            weight,
            radius,
            generators,
            double,
            ..
        } = self;
        let g = Arc::new(group.build()?);
        let w = weight.build(&g)?;
        let gens = match generators {
            Some(list) => parse_elements(&g, list)?,
            None => default_generators(&w),
        };
        Ok(BuiltTriple {
            group: g,
            weight: w,
            radius: *radius,
            generators: gens,
            double: *double,
        })
    }
}

/// Word-length generators when the weight names them, canonical ones otherwise.
pub fn default_generators(weight: &WeightModel) -> Vec<GroupElement> {
    match weight.kind() {
        WeightKind::WordLength { generators } => {
            let mut out: Vec<GroupElement> = Vec::new();
            let group = weight.group();
            for g in generators {
                if !out.contains(g) && !out.contains(&group.inverse(g)) {
                    out.push(g.clone());
                }
            }
            out
        }
        _ => weight.group().canonical_generators(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    /// Dense matrix, rows of `[re, im]` entries.
    Matrix {
        entries: Vec<Vec<(f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hom: Option<HomSpec>,
    },
    /// `λ·1` on a single triple.
    ScaledIdentity { lambda: Num },
}

impl PhiSpec {
    pub fn build(&self, rows: usize, cols: usize) -> Result<(Operator, Option<GroupHom>), InputError> {
        match self {
            PhiSpec::Matrix { entries, hom } => {
                let rows_c: Vec<Vec<Complex64>> = entries
                    .iter()
                    .map(|r| r.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
                    .collect();
                let op = Operator::from_rows(rows_c)?;
                let h = hom.as_ref().map(HomSpec::build).transpose()?;
                Ok((op, h))
            }
            PhiSpec::ScaledIdentity { lambda } => {
                if rows != cols {
                    return Err(InputError("scaled identity needs triples of equal dimension".into()));
                }
                Ok((Operator::identity(rows)?.scale(Complex64::new(lambda.value()?, 0.0)), None))
            }
        }
    }
}
