//! The JSON experiment document read by every subcommand except `verify`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::crystal::{CrystalAutomorphism, CrystalElement, CrystalGroup, PointGroup};
use crate::group::{AbelianAutomorphism, AbelianElement, FgAbelianGroup, IntMatrix};
use crate::peters::FiniteSubset;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto: Option<AutoSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<ElementSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<ElementSpec>>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    FreeAbelian {
        rank: usize,
    },
    FgAbelian {
        rank: usize,
        torsion: Vec<i64>,
    },
    Crystal {
        rank: usize,
        point_group: PointGroupSpec,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        action: BTreeMap<String, IntMatrix>,
        /// Keys are `"h,k"`.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        cocycle: BTreeMap<String, Vec<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointGroupSpec {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoSpec {
    pub lattice: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_map: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_map: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<BTreeMap<String, Vec<i64>>>,
}

/// `[x₁, …, x_p, t₁, …]` for abelian groups, `{"point": h, "lattice": [...]}`
/// for crystal groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Flat(Vec<i64>),
    Crystal(CrystalElementSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalElementSpec {
    pub point: String,
    pub lattice: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_support: Option<usize>,
}

impl Params {
    pub fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

fn spec_err(field: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Spec {
        field: field.into(),
        message: msg.to_string(),
    }
}

/// Strict parse; syntax errors carry line and column, schema errors the key path.
pub fn parse_spec_str(text: &str) -> Result<SpecDocument, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: SpecDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = if path == "." { "document".to_string() } else { path };
        spec_err(field, format!("{inner}"))
    })?;
    doc.build()?;
    Ok(doc)
}

pub fn parse_spec(path: &Path) -> Result<SpecDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_spec_str(&text)
}

/// Pretty JSON with sorted keys in maps; parsing it gives back an equal document.
pub fn canonical_json(doc: &SpecDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("spec documents serialize");
    s.push('\n');
    s
}

/// The validated objects a document describes.
#[derive(Clone, Debug)]
pub enum Built {
    Abelian {
        group: FgAbelianGroup,
        auto: Option<AbelianAutomorphism>,
        omega: Option<Vec<AbelianElement>>,
        set: Option<FiniteSubset>,
    },
    Crystal {
        group: CrystalGroup,
        auto: Option<CrystalAutomorphism>,
        omega: Option<Vec<CrystalElement>>,
    },
}

impl SpecDocument {
    pub fn build(&self) -> Result<Built, CliError> {
        match &self.group {
            GroupSpec::FreeAbelian { rank } => self.build_abelian(FgAbelianGroup::free(*rank)),
            GroupSpec::FgAbelian { rank, torsion } => {
                let g = FgAbelianGroup::new(*rank, torsion.clone()).map_err(|e| spec_err("group.torsion", e))?;
                self.build_abelian(g)
            }
            GroupSpec::Crystal {
                rank,
                point_group,
                action,
                cocycle,
            } => self.build_crystal(*rank, point_group, action, cocycle),
        }
    }

    fn build_abelian(&self, group: FgAbelianGroup) -> Result<Built, CliError> {
        let p = group.rank();
        let t = group.torsion_len();
        let auto = match &self.auto {
            None => None,
            Some(a) => {
                if a.quotient_map.is_some() || a.translation.is_some() {
                    return Err(spec_err("auto", "quotient_map and translation apply only to crystal groups"));
                }
                if a.lattice.rows() != p || a.lattice.cols() != p {
                    return Err(spec_err("auto.lattice", format!("must be {p}x{p}")));
                }
                if !a.lattice.is_unimodular() {
                    let det = a.lattice.det().map(|d| d.to_string()).unwrap_or_default();
                    return Err(spec_err("auto.lattice", format!("matrix is not unimodular (determinant {det})")));
                }
                let torsion = a.torsion_map.clone().unwrap_or_else(|| IntMatrix::identity(t));
                let mixing = a.mixing.clone().unwrap_or_else(|| IntMatrix::zeros(t, p));
                Some(
                    AbelianAutomorphism::new(group.clone(), a.lattice.clone(), torsion, mixing)
                        .map_err(|e| spec_err("auto", e))?,
                )
            }
        };
        let elements = |field: &str, list: &Option<Vec<ElementSpec>>| -> Result<Option<Vec<AbelianElement>>, CliError> {
            list.as_ref()
                .map(|xs| {
                    xs.iter()
                        .enumerate()
                        .map(|(i, x)| match x {
                            ElementSpec::Flat(v) => group
                                .element_from_flat(v)
                                .map_err(|e| spec_err(format!("{field}[{i}]"), e)),
                            ElementSpec::Crystal(_) => Err(spec_err(
                                format!("{field}[{i}]"),
                                "expected a flat integer list for an abelian group",
                            )),
                        })
                        .collect()
                })
                .transpose()
        };
        let omega = elements("omega", &self.omega)?;
        let set = elements("set", &self.set)?
            .map(|xs| FiniteSubset::new(group.clone(), xs).map_err(|e| spec_err("set", e)))
            .transpose()?;
        Ok(Built::Abelian {
            group,
            auto,
            omega,
            set,
        })
    }

    fn build_crystal(
        &self,
        rank: usize,
        point: &PointGroupSpec,
        action: &BTreeMap<String, IntMatrix>,
        cocycle: &BTreeMap<String, Vec<i64>>,
    ) -> Result<Built, CliError> {
        let names = point.elements.clone();
        let find = |field: &str, name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| spec_err(field, format!("unknown point-group element {name:?}")))
        };
        let table = point
            .table
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|x| find(&format!("group.point_group.table[{i}]"), x))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pg = PointGroup::new(names.clone(), table).map_err(|e| spec_err("group.point_group", e))?;
        let mut mats = vec![IntMatrix::identity(rank); names.len()];
        for (h, m) in action {
            mats[find("group.action", h)?] = m.clone();
        }
        let mut theta = vec![vec![vec![0; rank]; names.len()]; names.len()];
        for (key, v) in cocycle {
            let (h, k) = key
                .split_once(',')
                .ok_or_else(|| spec_err("group.cocycle", format!("key {key:?} is not of the form \"h,k\"")))?;
            theta[find("group.cocycle", h.trim())?][find("group.cocycle", k.trim())?] = v.clone();
        }
        let group = CrystalGroup::new(rank, pg, mats, theta).map_err(|e| spec_err("group", e))?;

        let auto = match &self.auto {
            None => None,
            Some(a) => {
                if a.torsion_map.is_some() || a.mixing.is_some() {
                    return Err(spec_err("auto", "torsion_map and mixing apply only to abelian groups"));
                }
                if !a.lattice.is_square() || a.lattice.rows() != rank {
                    return Err(spec_err("auto.lattice", format!("must be {rank}x{rank}")));
                }
                if !a.lattice.is_unimodular() {
                    let det = a.lattice.det().map(|d| d.to_string()).unwrap_or_default();
                    return Err(spec_err("auto.lattice", format!("matrix is not unimodular (determinant {det})")));
                }
                let mut q: Vec<usize> = (0..names.len()).collect();
                for (from, to) in a.quotient_map.iter().flatten() {
                    q[find("auto.quotient_map", from)?] = find("auto.quotient_map", to)?;
                }
                let mut t = vec![vec![0; rank]; names.len()];
                for (h, v) in a.translation.iter().flatten() {
                    t[find("auto.translation", h)?] = v.clone();
                }
                Some(CrystalAutomorphism::new(&group, q, a.lattice.clone(), t).map_err(|e| spec_err("auto", e))?)
            }
        };
        if self.set.is_some() {
            return Err(spec_err("set", "growth sets are supported for abelian groups only"));
        }
        let omega = self
            .omega
            .as_ref()
            .map(|xs| {
                xs.iter()
                    .enumerate()
                    .map(|(i, x)| {
                        let field = format!("omega[{i}]");
                        match x {
                            ElementSpec::Crystal(c) => {
                                let h = find(&field, &c.point)?;
                                let el = CrystalElement::new(h, c.lattice.clone());
                                group.check(&el).map_err(|e| spec_err(&field, e))?;
                                Ok(el)
                            }
                            ElementSpec::Flat(_) => Err(spec_err(field, "expected {\"point\": ..., \"lattice\": [...]}")),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        Ok(Built::Crystal { group, auto, omega })
    }
}
