//! JSON input files and their conversion into core objects.
//!
//! Rationals are written as JSON integers or as "p/q" strings. Every file
//! may carry `"format_version": 1`; other versions are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::sync::Arc;

use gradua::bundle::GradedBundleAtlas;
use gradua::characterization::DVBData;
use gradua::grading::{Parity, Variable};
use gradua::rational;
use gradua::space::GradedSpace;
use gradua::superalg::NDeg2Data;
use gradua::weil::{PresentedGradedAlgebra, Tensor3};
use gradua::{GradedPolyMap, Polynomial, RankVector, Rational, VariableTable, Weight};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("{source_name}: {message}")]
    Json { source_name: String, message: String },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] gradua::Error),
}

pub type InputResult<T> = std::result::Result<T, InputError>;

/// Reads a file path or, when the argument starts with `{` or `[`, inline JSON.
pub fn load<T: DeserializeOwned>(arg: &str) -> InputResult<T> {
    let trimmed = arg.trim_start();
    let (text, name) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        (arg.to_string(), "inline JSON".to_string())
    } else {
        let text = fs::read_to_string(arg).map_err(|e| InputError::Io {
            path: arg.to_string(),
            message: e.to_string(),
        })?;
        (text, arg.to_string())
    };
    serde_json::from_str(&text).map_err(|e| InputError::Json {
        source_name: name,
        message: e.to_string(),
    })
}

fn check_version(v: Option<u32>) -> InputResult<()> {
    match v {
        Some(v) if v != FORMAT_VERSION => Err(InputError::Version(v)),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Int(i64),
    Text(String),
}

impl RationalInput {
    pub fn value(&self) -> InputResult<Rational> {
        match self {
            RationalInput::Int(n) => Ok(rational::int(*n)),
            RationalInput::Text(s) => {
                rational::parse(s).map_err(|_| InputError::Invalid(format!("`{s}` is not a rational number")))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum WeightInput {
    Scalar(u32),
    Tuple(Vec<u32>),
}

impl WeightInput {
    fn grades(&self) -> Vec<u32> {
        match self {
            WeightInput::Scalar(w) => vec![*w],
            WeightInput::Tuple(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ParityInput {
    Even,
    Odd,
}

impl From<ParityInput> for Parity {
    fn from(p: ParityInput) -> Parity {
        match p {
            ParityInput::Even => Parity::Even,
            ParityInput::Odd => Parity::Odd,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableInput {
    pub name: String,
    pub weight: WeightInput,
    #[serde(default)]
    pub parity: Option<ParityInput>,
}

pub fn variable_table(vars: &[VariableInput], allow_base: bool) -> InputResult<VariableTable> {
    let any_parity = vars.iter().any(|v| v.parity.is_some());
    let vs: Vec<Variable> = vars
        .iter()
        .map(|v| {
            let w = Weight::new(v.weight.grades());
            let w = match (any_parity, v.parity) {
                (true, p) => w.with_parity(p.unwrap_or(ParityInput::Even).into()),
                (false, _) => w,
            };
            Variable::new(v.name.clone(), w)
        })
        .collect();
    if vs.is_empty() {
        return Ok(VariableTable::empty(1));
    }
    let t = if allow_base {
        VariableTable::with_base(vs)?
    } else {
        VariableTable::new(vs)?
    };
    Ok(t)
}

/// `{"rank": [..]}` or `{"variables": [..]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceInput {
    #[serde(default)]
    pub format_version: Option<u32>,
    #[serde(default)]
    pub rank: Option<Vec<usize>>,
    #[serde(default)]
    pub variables: Option<Vec<VariableInput>>,
}

impl SpaceInput {
    pub fn table(&self) -> InputResult<Arc<VariableTable>> {
        check_version(self.format_version)?;
        match (&self.rank, &self.variables) {
            (Some(r), None) => Ok(Arc::new(VariableTable::from_rank(&RankVector::new(r.clone())))),
            (None, Some(v)) => Ok(Arc::new(variable_table(v, false)?)),
            _ => Err(InputError::Invalid("a space needs exactly one of `rank` or `variables`".into())),
        }
    }

    pub fn space(&self) -> InputResult<GradedSpace> {
        Ok(GradedSpace::from_table(self.table()?)?)
    }
}

/// Components of a map, one expression per target coordinate in the
/// source coordinates. The target defaults to the source space.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapInput {
    #[serde(default)]
    pub format_version: Option<u32>,
    #[serde(default)]
    pub target: Option<SpaceInput>,
    pub components: Vec<String>,
}

impl MapInput {
    pub fn map(&self, source: &Arc<VariableTable>) -> InputResult<GradedPolyMap> {
        check_version(self.format_version)?;
        let target = match &self.target {
            Some(t) => t.table()?,
            None => source.clone(),
        };
        let comps = self
            .components
            .iter()
            .map(|c| Polynomial::parse(c, source))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GradedPolyMap::new(source, &target, comps)?)
    }
}

pub type NestedTensor = Vec<Vec<Vec<RationalInput>>>;

fn tensor(nested: &NestedTensor, shape: [usize; 3]) -> InputResult<Tensor3> {
    let values = nested
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(RationalInput::value).collect::<InputResult<Vec<_>>>())
                .collect::<InputResult<Vec<_>>>()
        })
        .collect::<InputResult<Vec<_>>>()?;
    if shape.iter().any(|&d| d == 0) && values.iter().all(|m| m.iter().all(Vec::is_empty)) {
        return Ok(Tensor3::zeros(shape[0], shape[1], shape[2]));
    }
    Ok(Tensor3::from_nested(&values, shape)?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductInput {
    #[serde(default)]
    pub i: Option<u32>,
    #[serde(default)]
    pub j: Option<u32>,
    #[serde(default)]
    pub left: Option<Vec<u32>>,
    #[serde(default)]
    pub right: Option<Vec<u32>>,
    pub tensor: NestedTensor,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentInput {
    pub grade: Vec<u32>,
    pub dim: usize,
    #[serde(default)]
    pub parities: Option<Vec<ParityInput>>,
}

/// Presented graded algebra.
///
/// N-graded form: `{"order": k, "dims": [1, n1, ..., nk], "mu": [{"i", "j", "tensor"}]}`
/// with optional `"parities": [[..], ..]` per component. Multi-graded form:
/// `{"bound": [k, l], "components": [{"grade", "dim"}], "mu": [{"left", "right", "tensor"}]}`.
/// Products given for (i, j) only are completed to (j, i) by (super)commutativity.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraInput {
    #[serde(default)]
    pub format_version: Option<u32>,
    #[serde(default)]
    pub order: Option<u32>,
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
    #[serde(default)]
    pub parities: Option<Vec<Vec<ParityInput>>>,
    #[serde(default)]
    pub bound: Option<Vec<u32>>,
    #[serde(default)]
    pub components: Option<Vec<ComponentInput>>,
    #[serde(default)]
    pub mu: Vec<ProductInput>,
}

impl AlgebraInput {
    pub fn algebra(&self) -> InputResult<PresentedGradedAlgebra> {
        check_version(self.format_version)?;
        let (bound, dims, parities) = match (&self.order, &self.dims, &self.bound, &self.components) {
            (Some(k), Some(d), None, None) => {
                if d.len() != *k as usize + 1 {
                    return Err(InputError::Invalid(format!(
                        "`dims` must list {} entries for order {k}",
                        k + 1
                    )));
                }
                let dims: BTreeMap<Vec<u32>, usize> =
                    d.iter().enumerate().map(|(w, &n)| (vec![w as u32], n)).collect();
                let parities = match &self.parities {
                    None => None,
                    Some(ps) => {
                        if ps.len() != d.len() {
                            return Err(InputError::Invalid("one parity list per component".into()));
                        }
                        Some(
                            ps.iter()
                                .enumerate()
                                .map(|(w, p)| (vec![w as u32], p.iter().map(|&x| x.into()).collect()))
                                .collect::<BTreeMap<_, Vec<Parity>>>(),
                        )
                    }
                };
                (vec![*k], dims, parities)
            }
            (None, None, Some(b), Some(cs)) => {
                let dims: BTreeMap<Vec<u32>, usize> = cs.iter().map(|c| (c.grade.clone(), c.dim)).collect();
                let any = cs.iter().any(|c| c.parities.is_some());
                let parities = any.then(|| {
                    cs.iter()
                        .map(|c| {
                            let ps = c
                                .parities
                                .clone()
                                .unwrap_or_else(|| vec![ParityInput::Even; c.dim]);
                            (c.grade.clone(), ps.into_iter().map(Parity::from).collect())
                        })
                        .collect::<BTreeMap<_, Vec<Parity>>>()
                });
                let mut parities = parities;
                if let Some(p) = parities.as_mut() {
                    p.entry(vec![0; b.len()]).or_insert_with(|| vec![Parity::Even]);
                }
                (b.clone(), dims, parities)
            }
            _ => {
                return Err(InputError::Invalid(
                    "an algebra needs either `order` and `dims` or `bound` and `components`".into(),
                ))
            }
        };
        let dim_of = |g: &[u32]| -> usize {
            dims.get(g)
                .copied()
                .unwrap_or(if g.iter().all(|&x| x == 0) { 1 } else { 0 })
        };
        let mut products = Vec::new();
        for p in &self.mu {
            let (g, h) = match (&p.i, &p.j, &p.left, &p.right) {
                (Some(i), Some(j), None, None) if bound.len() == 1 => (vec![*i], vec![*j]),
                (None, None, Some(l), Some(r)) => (l.clone(), r.clone()),
                _ => {
                    return Err(InputError::Invalid(
                        "each product needs `i` and `j` (N-graded) or `left` and `right`".into(),
                    ))
                }
            };
            if g.len() != bound.len() || h.len() != bound.len() {
                return Err(InputError::Invalid(format!("product grades {g:?}, {h:?} have the wrong arity")));
            }
            let s: Vec<u32> = g.iter().zip(&h).map(|(a, b)| a + b).collect();
            let shape = [dim_of(&g), dim_of(&h), dim_of(&s)];
            products.push((g, h, tensor(&p.tensor, shape)?));
        }
        Ok(PresentedGradedAlgebra::from_grades(bound, &dims, parities.as_ref(), products)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapPair {
    pub base_map: Vec<String>,
    pub fiber_map: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionInput {
    pub from: String,
    pub to: String,
    pub base_map: Vec<String>,
    pub fiber_map: Vec<String>,
    #[serde(default)]
    pub inverse: Option<MapPair>,
}

/// Multi-chart atlas over a polynomial base.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasInput {
    #[serde(default)]
    pub format_version: Option<u32>,
    pub charts: Vec<String>,
    #[serde(default)]
    pub base: Vec<String>,
    pub fiber: Vec<VariableInput>,
    #[serde(default)]
    pub transitions: Vec<TransitionInput>,
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

impl AtlasInput {
    pub fn atlas(&self) -> InputResult<GradedBundleAtlas> {
        check_version(self.format_version)?;
        let names: Vec<&str> = self.base.iter().map(String::as_str).collect();
        let base = GradedBundleAtlas::base_table(&names)?;
        let fiber = Arc::new(variable_table(&self.fiber, false)?);
        let mut atlas = GradedBundleAtlas::new(self.charts.clone(), base, fiber)?;
        for t in &self.transitions {
            let map = atlas.parse_map(&strs(&t.base_map), &strs(&t.fiber_map))?;
            match &t.inverse {
                Some(inv) => {
                    let back = atlas.parse_map(&strs(&inv.base_map), &strs(&inv.fiber_map))?;
                    atlas.set_transition_with_inverse(&t.from, &t.to, map, back)?;
                }
                None => atlas.set_transition(&t.from, &t.to, map)?,
            }
        }
        Ok(atlas)
    }
}

/// `{"dims": [a, b, c], "map": tensor}` for E^{1,0} ⊗ E^{0,1} → E^{1,1}.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DvbInput {
    #[serde(default)]
    pub format_version: Option<u32>,
    pub dims: [usize; 3],
    pub map: NestedTensor,
}

impl DvbInput {
    pub fn data(&self) -> InputResult<DVBData> {
        check_version(self.format_version)?;
        Ok(DVBData::new(tensor(&self.map, self.dims)?))
    }
}

/// `{"odd_dim": d1, "even_dim": d2, "map": tensor}` with an antisymmetric map.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NDeg2Input {
    #[serde(default)]
    pub format_version: Option<u32>,
    pub odd_dim: usize,
    pub even_dim: usize,
    pub map: NestedTensor,
}

impl NDeg2Input {
    pub fn data(&self) -> InputResult<NDeg2Data> {
        check_version(self.format_version)?;
        let t = tensor(&self.map, [self.odd_dim, self.odd_dim, self.even_dim])?;
        Ok(NDeg2Data::new(t)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_space() {
        let s: SpaceInput = load(r#"{"rank": [1, 1]}"#).unwrap();
        assert_eq!(s.space().unwrap().rank(), &RankVector::new(vec![1, 1]));
    }

    #[test]
    fn negative_weight_is_located() {
        let err = load::<SpaceInput>(r#"{"variables": [{"name": "y", "weight": -1}]}"#).unwrap_err();
        assert!(matches!(err, InputError::Json { .. }));
        assert!(err.to_string().contains("column"));
    }

    #[test]
    fn algebra_forms() {
        let a: AlgebraInput = load(
            r#"{"order": 2, "dims": [1, 1, 1], "mu": [{"i": 1, "j": 1, "tensor": [[[1]]]}]}"#,
        )
        .unwrap();
        assert_eq!(a.algebra().unwrap().dims(), &[1, 1, 1]);
        let b: AlgebraInput = load(
            r#"{"bound": [1, 1], "components": [{"grade": [1, 0], "dim": 1}, {"grade": [0, 1], "dim": 1},
                {"grade": [1, 1], "dim": 1}], "mu": [{"left": [1, 0], "right": [0, 1], "tensor": [[["1/2"]]]}]}"#,
        )
        .unwrap();
        assert_eq!(b.algebra().unwrap().total_dim(), 4);
        let v: AlgebraInput = load(r#"{"format_version": 7, "order": 0, "dims": [1]}"#).unwrap();
        assert!(matches!(v.algebra(), Err(InputError::Version(7))));
    }

    #[test]
    fn map_and_atlas() {
        let s: SpaceInput = load(r#"{"variables": [{"name": "y", "weight": 1}, {"name": "z", "weight": 2}]}"#).unwrap();
        let m: MapInput = load(r#"{"components": ["y", "z + y^2"]}"#).unwrap();
        assert!(m.map(&s.table().unwrap()).unwrap().is_graded());
        let a: AtlasInput = load(
            r#"{"charts": ["U", "V"], "base": ["x"], "fiber": [{"name": "y", "weight": 1}],
                "transitions": [{"from": "U", "to": "V", "base_map": ["x + 1"], "fiber_map": ["2*y"],
                "inverse": {"base_map": ["x - 1"], "fiber_map": ["1/2*y"]}}]}"#,
        )
        .unwrap();
        assert!(a.atlas().unwrap().check_cocycle().unwrap().pass());
    }
}
