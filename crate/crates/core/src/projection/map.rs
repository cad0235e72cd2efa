use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spaces::{PositionKey, PositionSpace, UnimodularFrame};

pub type RhoFn = Arc<dyn Fn(&PositionKey) -> PositionKey + Send + Sync>;

/// The concrete form of a projection map.
#[derive(Clone)]
pub enum RhoKind {
    Identity,
    /// `Z^2 -> Z`, `(x, y) -> k x + l y` with `sigma = u y - v x`.
    Lattice(UnimodularFrame),
    /// A one-dimensional lattice folded onto `Z_n`, with `sigma(x) = x`.
    Modulo {
        n: i64,
    },
    /// L-lattice onto the line along the diagonals, `(x, y) -> x + y`.
    LLatticeDiagonal,
    /// `outer` applied after `inner`.
    Composite {
        inner: Box<ProjectionMap>,
        outer: Box<ProjectionMap>,
    },
    /// Arbitrary user map, used for validating candidate maps.
    Custom {
        name: String,
        rho: RhoFn,
    },
}

impl fmt::Debug for RhoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoKind::Identity => write!(f, "Identity"),
            RhoKind::Lattice(fr) => write!(f, "Lattice({fr:?})"),
            RhoKind::Modulo { n } => write!(f, "Modulo({n})"),
            RhoKind::LLatticeDiagonal => write!(f, "LLatticeDiagonal"),
            RhoKind::Composite { inner, outer } => {
                write!(f, "Composite({:?} then {:?})", inner.kind, outer.kind)
            }
            RhoKind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// A map `rho` from a source space onto a target space whose displacements
/// are the induced `c'`, one per source displacement and in the same order.
#[derive(Clone, Debug)]
pub struct ProjectionMap {
    source: Arc<PositionSpace>,
    target: Arc<PositionSpace>,
    kind: RhoKind,
    /// `sigma(c)` for every source displacement, when `sigma` exists.
    displacement_sigma: Option<Vec<i64>>,
}

impl ProjectionMap {
    pub(crate) fn from_parts(
        source: Arc<PositionSpace>,
        target: Arc<PositionSpace>,
        kind: RhoKind,
        displacement_sigma: Option<Vec<i64>>,
    ) -> Result<Self> {
        if source.coin_dim() != target.coin_dim() {
            return Err(Error::DimensionMismatch {
                expected: source.coin_dim(),
                found: target.coin_dim(),
            });
        }
        Ok(ProjectionMap {
            source,
            target,
            kind,
            displacement_sigma,
        })
    }

    /// The identity map of a space onto itself.
    pub fn identity(space: Arc<PositionSpace>) -> Self {
        ProjectionMap {
            source: space.clone(),
            target: space,
            kind: RhoKind::Identity,
            displacement_sigma: None,
        }
    }

    /// Wraps an arbitrary function. Nothing is assumed about it; run
    /// [`check_rho_consistency`](crate::spaces::check_rho_consistency) before
    /// relying on it.
    pub fn custom(
        name: impl Into<String>,
        source: Arc<PositionSpace>,
        target: Arc<PositionSpace>,
        rho: impl Fn(&PositionKey) -> PositionKey + Send + Sync + 'static,
    ) -> Result<Self> {
        ProjectionMap::from_parts(
            source,
            target,
            RhoKind::Custom {
                name: name.into(),
                rho: Arc::new(rho),
            },
            None,
        )
    }

    /// `next` after `self`. The composite carries `sigma(x) = sigma_1(x) +
    /// sigma_2(rho_1(x))` when both maps have one, so that the phased
    /// projection of the composite equals the composition of phased
    /// projections.
    pub fn then(&self, next: &ProjectionMap) -> Result<ProjectionMap> {
        if *self.target != *next.source {
            return Err(Error::IncompatibleComposition {
                left: self.target.name().to_string(),
                right: next.source.name().to_string(),
            });
        }
        let displacement_sigma = match (&self.displacement_sigma, &next.displacement_sigma) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(p, q)| p + q).collect()),
            _ => None,
        };
        ProjectionMap::from_parts(
            self.source.clone(),
            next.target.clone(),
            RhoKind::Composite {
                inner: Box::new(self.clone()),
                outer: Box::new(next.clone()),
            },
            displacement_sigma,
        )
    }

    pub fn name(&self) -> String {
        match &self.kind {
            RhoKind::Identity => "identity".into(),
            RhoKind::Lattice(f) => format!("lattice(k={}, l={})", f.k, f.l),
            RhoKind::Modulo { n } => format!("mod({n})"),
            RhoKind::LLatticeDiagonal => "llattice-diag".into(),
            RhoKind::Composite { inner, outer } => {
                format!("{} then {}", inner.name(), outer.name())
            }
            RhoKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn source(&self) -> &Arc<PositionSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PositionSpace> {
        &self.target
    }

    pub fn kind(&self) -> &RhoKind {
        &self.kind
    }

    /// The lattice frame for `rho(x, y) = k x + l y` maps.
    pub fn frame(&self) -> Option<UnimodularFrame> {
        match self.kind {
            RhoKind::Lattice(f) => Some(f),
            _ => None,
        }
    }

    pub fn has_sigma(&self) -> bool {
        self.displacement_sigma.is_some()
    }

    /// `sigma(c)` per source displacement.
    pub fn displacement_sigma(&self) -> Option<&[i64]> {
        self.displacement_sigma.as_deref()
    }

    pub fn rho(&self, x: &PositionKey) -> Result<PositionKey> {
        self.source.check(x)?;
        let overflow = || Error::Overflow { pos: x.clone() };
        Ok(match &self.kind {
            RhoKind::Identity => x.clone(),
            RhoKind::Lattice(f) => PositionKey::scalar(f.rho(x.x(), x.y()).ok_or_else(overflow)?),
            RhoKind::Modulo { n } => PositionKey::scalar(x.x().rem_euclid(*n)),
            RhoKind::LLatticeDiagonal => {
                PositionKey::scalar(x.x().checked_add(x.y()).ok_or_else(overflow)?)
            }
            RhoKind::Composite { inner, outer } => outer.rho(&inner.rho(x)?)?,
            RhoKind::Custom { rho, .. } => rho(x),
        })
    }

    pub fn sigma(&self, x: &PositionKey) -> Result<i64> {
        self.source.check(x)?;
        let missing = || Error::MissingSigma(self.name());
        let overflow = || Error::Overflow { pos: x.clone() };
        match &self.kind {
            RhoKind::Lattice(f) => f.sigma(x.x(), x.y()).ok_or_else(overflow),
            RhoKind::Modulo { .. } => Ok(x.x()),
            RhoKind::Composite { inner, outer } if self.has_sigma() => {
                let s1 = inner.sigma(x)?;
                let s2 = outer.sigma(&inner.rho(x)?)?;
                s1.checked_add(s2).ok_or_else(overflow)
            }
            _ => Err(missing()),
        }
    }

    /// One preimage of a target position.
    pub fn section(&self, target: &PositionKey) -> Result<PositionKey> {
        self.target.check(target)?;
        match &self.kind {
            RhoKind::Identity => Ok(target.clone()),
            RhoKind::Lattice(f) => {
                let r = target.x();
                let overflow = || Error::Overflow {
                    pos: target.clone(),
                };
                Ok(PositionKey::pair(
                    f.u.checked_mul(r).ok_or_else(overflow)?,
                    f.v.checked_mul(r).ok_or_else(overflow)?,
                ))
            }
            RhoKind::Modulo { .. } => Ok(target.clone()),
            RhoKind::LLatticeDiagonal => Ok(PositionKey::pair(target.x(), 0)),
            RhoKind::Composite { inner, outer } => inner.section(&outer.section(target)?),
            RhoKind::Custom { .. } => Err(Error::NotInvertible(self.name())),
        }
    }

    /// The source position with coordinates `(rho, sigma) = (target, s)`,
    /// or `None` when no such position exists.
    pub fn lift(&self, target: &PositionKey, s: i64) -> Result<Option<PositionKey>> {
        self.target.check(target)?;
        match &self.kind {
            RhoKind::Lattice(f) => Ok(f.lift(target.x(), s).map(|(x, y)| PositionKey::pair(x, y))),
            RhoKind::Modulo { n } => {
                Ok((s.rem_euclid(*n) == target.x()).then(|| PositionKey::scalar(s)))
            }
            _ => Err(Error::NotInvertible(self.name())),
        }
    }
}
