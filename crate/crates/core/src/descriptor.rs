//! JSON descriptors for spaces, coins and projections.
//!
//! ```json
//! {"space": {"space": "circle", "n": 4},
//!  "coin": {"coin": "hadamard2"},
//!  "projection": {"rho": "identity"},
//!  "phi": 0.0}
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Amplitude;
use crate::projection::ProjectionMap;
use crate::spaces::{cyclic_quotient_of, lattice_quotient, llattice_quotient, PositionSpace};
use crate::walk::{CoinMatrix, WalkSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase")]
pub enum SpaceDescriptor {
    Z2,
    Z1,
    Circle { n: i64 },
    Llattice,
}

impl SpaceDescriptor {
    pub fn build(&self) -> Result<Arc<PositionSpace>> {
        Ok(match self {
            SpaceDescriptor::Z2 => PositionSpace::z2(),
            SpaceDescriptor::Z1 => PositionSpace::z1(),
            SpaceDescriptor::Circle { n } => PositionSpace::circle(*n)?,
            SpaceDescriptor::Llattice => PositionSpace::llattice(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "coin", rename_all = "lowercase")]
pub enum CoinDescriptor {
    Grover4,
    Hadamard2,
    /// Rows of `[re, im]` pairs.
    Matrix {
        rows: Vec<Vec<[f64; 2]>>,
    },
}

impl CoinDescriptor {
    pub fn build(&self) -> Result<CoinMatrix> {
        match self {
            CoinDescriptor::Grover4 => Ok(crate::catalog::grover_coin()),
            CoinDescriptor::Hadamard2 => Ok(crate::catalog::hadamard_coin()),
            CoinDescriptor::Matrix { rows } => CoinMatrix::new(
                rows.iter()
                    .map(|r| r.iter().map(|[re, im]| Amplitude::new(*re, *im)).collect())
                    .collect(),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rho", rename_all = "lowercase")]
pub enum ProjectionDescriptor {
    Lattice {
        k: i64,
        l: i64,
    },
    Mod {
        n: i64,
    },
    #[serde(rename = "llattice-diag")]
    LLatticeDiag,
    Identity,
}

impl ProjectionDescriptor {
    /// Builds the map and checks that it starts from `source`.
    pub fn build(&self, source: &Arc<PositionSpace>) -> Result<ProjectionMap> {
        let pmap = match self {
            ProjectionDescriptor::Lattice { k, l } => lattice_quotient(*k, *l)?,
            ProjectionDescriptor::Mod { n } => cyclic_quotient_of(source.clone(), *n)?,
            ProjectionDescriptor::LLatticeDiag => llattice_quotient(),
            ProjectionDescriptor::Identity => ProjectionMap::identity(source.clone()),
        };
        if **pmap.source() != **source {
            return Err(Error::SpaceMismatch {
                left: pmap.source().name().to_string(),
                right: source.name().to_string(),
            });
        }
        Ok(pmap)
    }
}

/// A walk and projection read from a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub space: SpaceDescriptor,
    pub coin: CoinDescriptor,
    #[serde(default)]
    pub projection: Option<ProjectionDescriptor>,
    #[serde(default)]
    pub phi: Option<f64>,
}

impl WalkConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn walk(&self) -> Result<WalkSpec> {
        WalkSpec::homogeneous(self.space.build()?, self.coin.build()?)
    }

    pub fn projection(&self, walk: &WalkSpec) -> Result<Option<ProjectionMap>> {
        self.projection
            .as_ref()
            .map(|p| p.build(walk.space()))
            .transpose()
    }
}
