//! The design file: everything one synthesis run produces, as TOML.
//!
//! Floats are written in shortest round-trip form, so every numeric field
//! reads back bit-identical.

use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::toml_error;
use crate::coupling::CouplingMatrix;
use crate::error::{Error, Result};
use crate::polynomials::CharacteristicPolynomials;
use crate::prototype::{CouplingTargets, FilterSpec, LowpassPrototype};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub created_unix: u64,
}

impl Provenance {
    pub fn now() -> Self {
        Self {
            tool: "resonet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignFile {
    pub spec: FilterSpec<f64>,
    pub prototype: LowpassPrototype<f64>,
    pub targets: CouplingTargets<f64>,
    pub matrix: CouplingMatrix<f64>,
    pub polynomials: Option<CharacteristicPolynomials<f64>>,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    qe1: f64,
    qen: f64,
    m: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRecord {
    epsilon: f64,
    e_roots: Vec<[f64; 2]>,
    f_roots: Vec<[f64; 2]>,
    p_roots: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DesignRecord {
    provenance: Provenance,
    spec: FilterSpec<f64>,
    prototype: LowpassPrototype<f64>,
    targets: CouplingTargets<f64>,
    matrix: MatrixRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polynomials: Option<PolynomialRecord>,
}

fn pairs(roots: &[Complex64]) -> Vec<[f64; 2]> {
    roots.iter().map(|z| [z.re, z.im]).collect()
}

fn roots(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl DesignFile {
    pub fn to_toml(&self) -> String {
        let record = DesignRecord {
            provenance: self.provenance.clone(),
            spec: self.spec,
            prototype: self.prototype.clone(),
            targets: self.targets.clone(),
            matrix: MatrixRecord {
                qe1: self.matrix.qe1(),
                qen: self.matrix.qen(),
                m: self.matrix.rows(),
            },
            polynomials: self.polynomials.as_ref().map(|p| PolynomialRecord {
                epsilon: p.epsilon,
                e_roots: pairs(&p.e_roots),
                f_roots: pairs(&p.f_roots),
                p_roots: pairs(&p.p_roots),
            }),
        };
        toml::to_string(&record).expect("design record serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let r: DesignRecord = toml::from_str(text).map_err(|e| toml_error(e, text))?;
        let structural = |message: String| Error::Parse {
            line: None,
            message,
        };
        r.spec.validate()?;
        if r.prototype.g.len() != r.spec.order + 2 {
            return Err(structural(format!(
                "prototype has {} g-values, expected {}",
                r.prototype.g.len(),
                r.spec.order + 2
            )));
        }
        if r.targets.k.len() + 1 != r.spec.order || r.matrix.m.len() != r.spec.order {
            return Err(structural("targets or matrix size does not match the spec order".into()));
        }
        let matrix = CouplingMatrix::from_rows(&r.matrix.m, r.matrix.qe1, r.matrix.qen)?;
        for (i, row) in r.matrix.m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != matrix.get(i, j) {
                    return Err(structural(format!(
                        "coupling matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            spec: r.spec,
            prototype: r.prototype,
            targets: r.targets,
            matrix,
            polynomials: r.polynomials.map(|p| CharacteristicPolynomials {
                e_roots: roots(&p.e_roots),
                f_roots: roots(&p.f_roots),
                p_roots: roots(&p.p_roots),
                epsilon: p.epsilon,
            }),
            provenance: r.provenance,
        })
    }
}
