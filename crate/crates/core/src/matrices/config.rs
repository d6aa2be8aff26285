//! JSON description of a structure matrix.
//!
//! ```json
//! {"kind": "chessboard", "domain": "N", "xi": 0.5, "orientation": "one_on_even_sum"}
//! {"kind": "torus", "domain": "Z", "phases": {"formula": "linear", "slope": 0.25}}
//! {"kind": "gram", "domain": "N", "vectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    chessboard, constant_one, gram_from_vectors, torus_from_phases, ChessboardParams,
    IndexDomain, Orientation, PhaseSequence, StructureMatrix, VectorFamily,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixConfig {
    ConstantOne {
        domain: IndexDomain,
    },
    Torus {
        domain: IndexDomain,
        phases: PhasesConfig,
    },
    Chessboard {
        domain: IndexDomain,
        xi: f64,
        #[serde(default)]
        orientation: Orientation,
    },
    Gram {
        domain: IndexDomain,
        vectors: VectorsConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhasesConfig {
    Explicit(Vec<f64>),
    Formula(PhaseFormula),
    Seeded { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "formula", rename_all = "snake_case")]
pub enum PhaseFormula {
    Linear {
        slope: f64,
        #[serde(default)]
        intercept: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorsConfig {
    Explicit(Vec<Vec<[f64; 2]>>),
    Random { random: RandomVectors },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomVectors {
    pub dim: usize,
    pub seed: u64,
}

impl MatrixConfig {
    /// Parses a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix configuration: {e}")))
    }

    pub fn domain(&self) -> IndexDomain {
        match self {
            MatrixConfig::ConstantOne { domain }
            | MatrixConfig::Torus { domain, .. }
            | MatrixConfig::Chessboard { domain, .. }
            | MatrixConfig::Gram { domain, .. } => *domain,
        }
    }

    pub fn build(&self) -> Result<StructureMatrix> {
        match self {
            MatrixConfig::ConstantOne { domain } => Ok(constant_one(*domain)),
            MatrixConfig::Torus { domain, phases } => {
                let nu = match phases {
                    PhasesConfig::Explicit(v) if v.is_empty() => {
                        return Err(Error::Parse("torus phases must be nonempty".into()))
                    }
                    PhasesConfig::Explicit(v) => PhaseSequence::cyclic(v.clone()),
                    PhasesConfig::Formula(PhaseFormula::Linear { slope, intercept }) => {
                        PhaseSequence::Linear { slope: *slope, intercept: *intercept }
                    }
                    PhasesConfig::Seeded { seed } => PhaseSequence::seeded(*seed),
                };
                Ok(torus_from_phases(*domain, nu))
            }
            MatrixConfig::Chessboard { domain, xi, orientation } => {
                chessboard(*domain, ChessboardParams::new(*xi, *orientation)?)
            }
            MatrixConfig::Gram { domain, vectors } => {
                let family = match vectors {
                    VectorsConfig::Explicit(v) => VectorFamily::Cyclic(
                        v.iter()
                            .map(|vec| vec.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                            .collect(),
                    ),
                    VectorsConfig::Random { random } => {
                        VectorFamily::Random { dim: random.dim, seed: random.seed }
                    }
                };
                gram_from_vectors(*domain, family)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let a = MatrixConfig::from_json(r#"{"kind":"constant_one","domain":"N"}"#).unwrap();
        assert_eq!(a, MatrixConfig::ConstantOne { domain: IndexDomain::Naturals });

        let t = MatrixConfig::from_json(
            r#"{"kind":"torus","domain":"Z","phases":{"formula":"linear","slope":0.5}}"#,
        )
        .unwrap();
        let m = t.build().unwrap();
        assert!((m.entry(1, 0) - Complex64::from_polar(1.0, 0.5)).norm() < 1e-15);

        let t = MatrixConfig::from_json(r#"{"kind":"torus","domain":"Z","phases":[0.0, 1.0]}"#).unwrap();
        let m = t.build().unwrap();
        assert!((m.entry(3, 2) - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);

        let c = MatrixConfig::from_json(
            r#"{"kind":"chessboard","domain":"Z","xi":0.25,"orientation":"one_on_odd_sum"}"#,
        )
        .unwrap();
        assert_eq!(c.build().unwrap().entry(0, 0).re, 0.25);
        let c = MatrixConfig::from_json(r#"{"kind":"chessboard","domain":"N","xi":0.25}"#).unwrap();
        assert_eq!(c.build().unwrap().entry(0, 1).re, 0.25);

        let g = MatrixConfig::from_json(
            r#"{"kind":"gram","domain":"N","vectors":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#,
        )
        .unwrap();
        let m = g.build().unwrap();
        assert_eq!(m.entry(0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(m.entry(0, 2), Complex64::new(1.0, 0.0));

        let g = MatrixConfig::from_json(
            r#"{"kind":"gram","domain":"N","vectors":{"random":{"dim":8,"seed":4}}}"#,
        )
        .unwrap();
        assert!(g.build().unwrap().diagonal_defect(crate::matrices::IndexWindow::new(0, 9).unwrap()) < 1e-12);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(MatrixConfig::from_json(r#"{"kind":"unknown","domain":"N"}"#).is_err());
        assert!(MatrixConfig::from_json(r#"{"kind":"constant_one","domain":"Q"}"#).is_err());
        assert!(MatrixConfig::from_json("not json").is_err());
        let bad_xi = MatrixConfig::from_json(r#"{"kind":"chessboard","domain":"N","xi":2}"#).unwrap();
        assert!(bad_xi.build().is_err());
        let bad_vec =
            MatrixConfig::from_json(r#"{"kind":"gram","domain":"N","vectors":[[[2,0]]]}"#).unwrap();
        assert!(matches!(bad_vec.build(), Err(Error::NotUnitVector { .. })));
    }
}
