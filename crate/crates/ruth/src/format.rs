//! The JSON interchange format: groupoids, bundles, representations,
//! morphisms, functors, `G`-spaces and task lists.
//!
//! Scalars serialize as exact rational strings (`"p/q"`, or `"p"` for
//! integers); omitted tensor entries are zero.  Parsing validates every
//! cross-reference before any computation; serialization is canonical
//! (sorted keys, tensors ordered by `(k, string, source degree)`), so
//! `serialize ∘ parse` is idempotent.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cochain::{GradedBundle, GradedMap, Tensor};
use crate::error::Error;
use crate::groupoid::GString;
use crate::linalg::Matrix;
use crate::Rational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Document {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    pub groupoid: RawGroupoid,
    /// additional named groupoids (functor sources/targets)
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groupoids: BTreeMap<String, RawGroupoid>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundle: BTreeMap<String, RawBundle>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rep: BTreeMap<String, RawRep>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphism: BTreeMap<String, RawMorphism>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functor: BTreeMap<String, RawFunctor>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gspace: BTreeMap<String, RawGSpace>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<RawTask>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<RawArrow>,
    pub units: BTreeMap<String, String>,
    pub inverses: BTreeMap<String, String>,
    /// composition triples `[g, h, gh]`
    pub comp: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawArrow {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawBundle {
    /// `[a, b]`
    pub amplitude: [i64; 2],
    /// object -> degree (as string) -> fiber dimension; omitted = 0
    pub dims: BTreeMap<String, BTreeMap<String, usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRep {
    pub bundle: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tensors: Vec<RawTensorEntry>,
}

/// One block of a structure or morphism tensor.  `k = 0` entries name an
/// `object`; higher `k` name the `string` of arrow ids.  The matrix maps the
/// source-degree-`l` fiber at the string's source to the appropriate target
/// fiber; rows of exact rational strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawTensorEntry {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub string: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    pub l: i64,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tensors: Vec<RawTensorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawFunctor {
    /// name of the source groupoid (`"main"` for the primary one)
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawGSpace {
    pub points: Vec<String>,
    pub moment: BTreeMap<String, String>,
    /// action triples `[arrow, point, image]`
    pub action: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawTask {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gspace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pages: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_dims: Option<Vec<usize>>,
}

pub fn parse_rational(s: &str, path: &str) -> Result<Rational, Error> {
    Rational::from_str(s.trim()).map_err(|e| Error::SchemaError {
        path: path.to_string(),
        reason: format!("not an exact rational `{s}`: {e}"),
    })
}

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

/// Reads a raw tensor entry list into tensors with the given degree law
/// (`shift_of(k)`), validating strings and shapes against the groupoid.
pub fn tensors_from_entries(
    g: &crate::groupoid::FiniteGroupoid,
    entries: &[RawTensorEntry],
    shift_of: &dyn Fn(usize) -> i64,
    path: &str,
) -> Result<Vec<Tensor<Rational>>, Error> {
    let mut by_k: BTreeMap<usize, Tensor<Rational>> = BTreeMap::new();
    for (idx, e) in entries.iter().enumerate() {
        let epath = format!("{path}.tensors[{idx}]");
        let string = if e.k == 0 {
            let name = e.object.as_deref().ok_or_else(|| Error::SchemaError {
                path: epath.clone(),
                reason: "k = 0 entries need an `object`".into(),
            })?;
            let x = g.object_by_name(name).ok_or_else(|| Error::DanglingReference {
                path: epath.clone(),
                name: name.to_string(),
            })?;
            GString::object(x)
        } else {
            if e.string.len() != e.k {
                return Err(Error::SchemaError {
                    path: epath.clone(),
                    reason: format!("string length {} does not match k = {}", e.string.len(), e.k),
                });
            }
            let mut arrows = Vec::new();
            for name in &e.string {
                arrows.push(g.arrow_by_name(name).ok_or_else(|| Error::DanglingReference {
                    path: epath.clone(),
                    name: name.clone(),
                })?);
            }
            GString::from_arrows(g, arrows).ok_or_else(|| Error::SchemaError {
                path: epath.clone(),
                reason: "arrows are not composable".into(),
            })?
        };
        let rows = e.matrix.len();
        let cols = e.matrix.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(rows, cols);
        for (i, row) in e.matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::SchemaError {
                    path: epath.clone(),
                    reason: "ragged matrix".into(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                let q = parse_rational(v, &format!("{epath}.matrix[{i}][{j}]"))?;
                m.set(i, j, q);
            }
        }
        let t = by_k
            .entry(e.k)
            .or_insert_with(|| Tensor::zero(e.k, shift_of(e.k)));
        t.add_block(string, e.l, &m, &Rational::from_integer(1.into()));
    }
    Ok(by_k.into_values().collect())
}

/// Canonical entry list of a tensor family.
pub fn entries_from_tensors(
    g: &crate::groupoid::FiniteGroupoid,
    tensors: &[Tensor<Rational>],
) -> Vec<RawTensorEntry> {
    let mut out = Vec::new();
    for t in tensors {
        for (s, gm) in t.iter() {
            for (l, block) in gm.blocks() {
                let matrix: Vec<Vec<String>> = (0..block.rows())
                    .map(|i| (0..block.cols()).map(|j| block.get(i, j).to_string()).collect())
                    .collect();
                out.push(RawTensorEntry {
                    k: t.k(),
                    string: if s.is_empty() {
                        Vec::new()
                    } else {
                        s.arrows().iter().map(|&a| g.arrow_name(a).to_string()).collect()
                    },
                    object: s.is_empty().then(|| g.object_name(s.moment()).to_string()),
                    l,
                    matrix,
                });
            }
        }
    }
    out.sort_by(|a, b| (a.k, &a.string, &a.object, a.l).cmp(&(b.k, &b.string, &b.object, b.l)));
    out
}

pub fn bundle_from_raw(
    g: &crate::groupoid::FiniteGroupoid,
    raw: &RawBundle,
    path: &str,
) -> Result<GradedBundle, Error> {
    let [a, b] = raw.amplitude;
    if a > b {
        return Err(Error::SchemaError {
            path: path.to_string(),
            reason: format!("amplitude [{a}, {b}] has a > b"),
        });
    }
    let mut dims = vec![vec![0usize; (b - a + 1) as usize]; g.n_objects()];
    for (obj, per_degree) in &raw.dims {
        let x = g.object_by_name(obj).ok_or_else(|| Error::DanglingReference {
            path: format!("{path}.dims"),
            name: obj.clone(),
        })?;
        for (deg, &d) in per_degree {
            let l: i64 = deg.parse().map_err(|_| Error::SchemaError {
                path: format!("{path}.dims.{obj}"),
                reason: format!("bad degree key `{deg}`"),
            })?;
            if l < a || l > b {
                return Err(Error::SchemaError {
                    path: format!("{path}.dims.{obj}.{deg}"),
                    reason: "degree outside the amplitude".into(),
                });
            }
            dims[x.0][(l - a) as usize] = d;
        }
    }
    Ok(GradedBundle::new(a, b, dims))
}

pub fn bundle_to_raw(g: &crate::groupoid::FiniteGroupoid, bundle: &GradedBundle) -> RawBundle {
    let (a, b) = bundle.amplitude();
    let mut dims: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for x in g.objects() {
        let mut per = BTreeMap::new();
        for l in a..=b {
            let d = bundle.dim(x, l);
            if d > 0 {
                per.insert(l.to_string(), d);
            }
        }
        if !per.is_empty() {
            dims.insert(g.object_name(x).to_string(), per);
        }
    }
    RawBundle { amplitude: [a, b], dims }
}

pub fn groupoid_to_raw(g: &crate::groupoid::FiniteGroupoid) -> RawGroupoid {
    RawGroupoid {
        objects: g.objects().map(|x| g.object_name(x).to_string()).collect(),
        arrows: g
            .arrows()
            .map(|a| RawArrow {
                id: g.arrow_name(a).to_string(),
                src: g.object_name(g.src(a)).to_string(),
                tgt: g.object_name(g.tgt(a)).to_string(),
            })
            .collect(),
        units: g
            .objects()
            .map(|x| (g.object_name(x).to_string(), g.arrow_name(g.unit(x)).to_string()))
            .collect(),
        inverses: g
            .arrows()
            .map(|a| (g.arrow_name(a).to_string(), g.arrow_name(g.inv(a)).to_string()))
            .collect(),
        comp: {
            let mut triples = Vec::new();
            for a in g.arrows() {
                for b in g.arrows() {
                    if let Some(ab) = g.compose(a, b) {
                        triples.push([
                            g.arrow_name(a).to_string(),
                            g.arrow_name(b).to_string(),
                            g.arrow_name(ab).to_string(),
                        ]);
                    }
                }
            }
            triples
        },
    }
}

pub fn groupoid_data_from_raw(raw: &RawGroupoid) -> crate::groupoid::GroupoidData {
    crate::groupoid::GroupoidData {
        objects: raw.objects.clone(),
        arrows: raw.arrows.iter().map(|a| (a.id.clone(), a.src.clone(), a.tgt.clone())).collect(),
        units: raw.units.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        inverses: raw.inverses.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        comp: raw.comp.iter().map(|[a, b, c]| (a.clone(), b.clone(), c.clone())).collect(),
    }
}

/// Shared helper: a graded map as a displayable block list (used in reports).
pub fn graded_map_summary(gm: &GradedMap<Rational>) -> String {
    let blocks: Vec<String> = gm
        .blocks()
        .map(|(l, m)| format!("deg {l}: {}x{} ({} nonzero)", m.rows(), m.cols(), m.nnz()))
        .collect();
    blocks.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_roundtrip_as_strings() {
        for s in ["0", "5", "-7", "3/4", "-22/7"] {
            let q = parse_rational(s, "test").unwrap();
            assert_eq!(rational_to_string(&q), s);
        }
        assert!(parse_rational("1.5", "test").is_err());
    }

    #[test]
    fn groupoid_raw_roundtrip() {
        let g = crate::groupoid::cyclic_group(2);
        let raw = groupoid_to_raw(&g);
        let data = groupoid_data_from_raw(&raw);
        let g2 = crate::groupoid::FiniteGroupoid::validate(&data).unwrap();
        assert_eq!(groupoid_to_raw(&g2), raw);
    }
}
