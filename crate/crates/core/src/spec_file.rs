//! JSON algebra files.
//!
//! ```json
//! { "kind": "free", "degree_bound": 8,
//!   "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 3}],
//!   "differential": {"x": "a^2"} }
//! ```
//!
//! Structure-constant files list `basis` per degree, the `unit`, `products`
//! as `{left, right, result: [{basis, coeff}]}` and `differential` entries as
//! `{on, result}`. Coefficients are strings such as `"3"` or `"-1/2"`.
//! Output always has sorted keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    build_free_cdga, build_sc_algebra, to_sc_presentation, Algebra, DifferentialEntry,
    GeneratorSpec, Presentation, ProductEntry, ScPresentation,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub basis: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFileEntry {
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub result: Vec<CoefficientEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialFileEntry {
    pub on: String,
    #[serde(default)]
    pub result: Vec<CoefficientEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraSpecFile {
    Free {
        degree_bound: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        generators: Vec<GeneratorEntry>,
        #[serde(default)]
        differential: BTreeMap<String, String>,
    },
    StructureConstants {
        degree_bound: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        basis: Vec<Vec<String>>,
        unit: String,
        products: Vec<ProductFileEntry>,
        #[serde(default)]
        differential: Vec<DifferentialFileEntry>,
    },
}

fn coefficient(context: &str, src: &str) -> Result<Rational> {
    parse_rational(src)
        .ok_or_else(|| Error::SpecFile(format!("bad coefficient `{src}` in entry for `{context}`")))
}

fn linear_combination(
    context: &str,
    entries: &[CoefficientEntry],
) -> Result<Vec<(String, Rational)>> {
    entries
        .iter()
        .map(|e| Ok((e.basis.clone(), coefficient(context, &e.coeff)?)))
        .collect()
}

fn entries(terms: &[(String, Rational)]) -> Vec<CoefficientEntry> {
    terms
        .iter()
        .map(|(basis, c)| CoefficientEntry {
            basis: basis.clone(),
            coeff: format_rational(c),
        })
        .collect()
}

impl AlgebraSpecFile {
    pub fn from_json(src: &str) -> Result<AlgebraSpecFile> {
        serde_json::from_str(src).map_err(|e| Error::SpecFile(e.to_string()))
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<Algebra> {
        match self {
            AlgebraSpecFile::Free {
                degree_bound,
                label,
                generators,
                differential,
            } => {
                let gens: Vec<GeneratorSpec> = generators
                    .iter()
                    .map(|g| GeneratorSpec::new(g.name.clone(), g.degree))
                    .collect();
                let diffs = differential
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), Expr::parse(v)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let alg = build_free_cdga(&gens, &diffs, *degree_bound)?;
                Ok(match label {
                    Some(l) => alg.relabel(l.clone()),
                    None => alg,
                })
            }
            AlgebraSpecFile::StructureConstants { .. } => {
                build_sc_algebra(&self.sc_presentation()?)
            }
        }
    }

    /// Like [`AlgebraSpecFile::build`], but a structure-constant table is
    /// assembled without the axiom check so its violations can be reported.
    pub fn build_unchecked(&self) -> Result<Algebra> {
        match self {
            AlgebraSpecFile::Free { .. } => self.build(),
            AlgebraSpecFile::StructureConstants { .. } => {
                self.sc_presentation()?.assemble_unchecked()
            }
        }
    }

    fn sc_presentation(&self) -> Result<ScPresentation> {
        let AlgebraSpecFile::StructureConstants {
            degree_bound,
            label,
            basis,
            unit,
            products,
            differential,
        } = self
        else {
            unreachable!("called on a structure-constant file");
        };
        let products = products
            .iter()
            .map(|p| {
                let context = format!("{}*{}", p.left, p.right);
                Ok(ProductEntry {
                    left: p.left.clone(),
                    right: p.right.clone(),
                    result: linear_combination(&context, &p.result)?,
                })
            })
            .collect::<Result<_>>()?;
        let differential = differential
            .iter()
            .map(|d| {
                Ok(DifferentialEntry {
                    on: d.on.clone(),
                    result: linear_combination(&format!("d{}", d.on), &d.result)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ScPresentation {
            label: label
                .clone()
                .unwrap_or_else(|| "structure constants".into()),
            degree_bound: *degree_bound,
            basis: basis.clone(),
            unit: unit.clone(),
            products,
            differential,
        })
    }

    /// Free algebras export their generators; everything else exports its
    /// multiplication table.
    pub fn export(algebra: &Algebra) -> AlgebraSpecFile {
        match algebra.presentation() {
            Presentation::Free(free) => AlgebraSpecFile::Free {
                degree_bound: algebra.degree_bound(),
                label: Some(algebra.label().to_string()),
                generators: free
                    .generators
                    .iter()
                    .map(|g| GeneratorEntry {
                        name: g.name.clone(),
                        degree: g.degree,
                    })
                    .collect(),
                differential: free
                    .generators
                    .iter()
                    .zip(&free.differential)
                    .filter(|(_, e)| !e.terms.is_empty())
                    .map(|(g, e)| (g.name.clone(), e.to_string()))
                    .collect(),
            },
            Presentation::StructureConstants => {
                let sc = to_sc_presentation(algebra);
                AlgebraSpecFile::StructureConstants {
                    degree_bound: sc.degree_bound,
                    label: Some(sc.label),
                    basis: sc.basis,
                    unit: sc.unit,
                    products: sc
                        .products
                        .iter()
                        .map(|p| ProductFileEntry {
                            left: p.left.clone(),
                            right: p.right.clone(),
                            result: entries(&p.result),
                        })
                        .collect(),
                    differential: sc
                        .differential
                        .iter()
                        .map(|d| DifferentialFileEntry {
                            on: d.on.clone(),
                            result: entries(&d.result),
                        })
                        .collect(),
                }
            }
        }
    }
}

pub fn load_algebra(src: &str) -> Result<Algebra> {
    AlgebraSpecFile::from_json(src)?.build()
}

pub fn export_algebra(algebra: &Algebra) -> String {
    AlgebraSpecFile::export(algebra).to_json()
}
