//! Projection of walks onto quotient spaces.
//!
//! A [`ProjectionMap`] `rho: X -> X'` sums amplitudes over each fiber,
//! optionally weighting them by `exp(i phi sigma(x))`. When the coin is
//! constant on fibers the projected states evolve under the induced walk
//! `(S', C')` built by [`induced_walk`].
//!
//! Only finitely supported states are representable, so the projection is
//! defined on every input; the one failure mode is a vanishing image.

mod map;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Amplitude, WalkState};
use crate::spaces::{window, PositionKey};
use crate::walk::{CoinAssignment, StepPhase, WalkSpec, UNITARY_TOL};

pub use map::{ProjectionMap, RhoFn, RhoKind};

/// Norm below which a projected state counts as the zero vector.
pub const NULL_TOL: f64 = 1e-12;

/// Default tolerance for [`verify_commutation`].
pub const COMMUTATION_TOL: f64 = 1e-10;

fn check_source(pmap: &ProjectionMap, state: &WalkState) -> Result<()> {
    if **state.space() != **pmap.source() {
        return Err(Error::SpaceMismatch {
            left: state.space().name().to_string(),
            right: pmap.source().name().to_string(),
        });
    }
    Ok(())
}

/// The phased projection without the null check.
pub fn project_raw(pmap: &ProjectionMap, phi: f64, state: &WalkState) -> Result<WalkState> {
    check_source(pmap, state)?;
    let phased = phi != 0.0;
    if phased && !pmap.has_sigma() {
        return Err(Error::MissingSigma(pmap.name()));
    }
    let mut out = WalkState::empty(pmap.target().clone());
    for (x, v) in state.iter() {
        let z = if phased {
            Complex64::cis(phi * pmap.sigma(x)? as f64)
        } else {
            Amplitude::new(1.0, 0.0)
        };
        out.accumulate(pmap.rho(x)?, v, z)?;
    }
    Ok(out)
}

/// `|x>|c> -> exp(i phi sigma(x)) |rho(x)>|c>`; `phi = 0` is the plain
/// projection and needs no `sigma`. The result is not normalised.
pub fn project_state(pmap: &ProjectionMap, phi: f64, state: &WalkState) -> Result<WalkState> {
    let out = project_raw(pmap, phi, state)?;
    let norm = out.norm();
    if norm < NULL_TOL {
        return Err(Error::NullProjection { norm });
    }
    Ok(out)
}

pub fn project_state_normalized(
    pmap: &ProjectionMap,
    phi: f64,
    state: &WalkState,
) -> Result<WalkState> {
    project_state(pmap, phi, state)?.normalized()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub passed: bool,
    pub classes: usize,
    /// Two equivalent positions whose coins differ.
    pub witness: Option<(PositionKey, PositionKey)>,
}

/// Checks that `C_x` is constant on every fiber met by the window. Each
/// fiber is also compared against the representative used for `C'`.
pub fn check_coin_homogeneity(
    walk: &WalkSpec,
    pmap: &ProjectionMap,
    window: &[PositionKey],
) -> Result<HomogeneityReport> {
    let mut classes: BTreeMap<PositionKey, Vec<PositionKey>> = BTreeMap::new();
    for x in window {
        classes.entry(pmap.rho(x)?).or_default().push(x.clone());
    }
    let n = classes.len();
    let CoinAssignment::Positional { .. } = walk.coin() else {
        return Ok(HomogeneityReport {
            passed: true,
            classes: n,
            witness: None,
        });
    };
    for (r, members) in classes {
        let rep = match pmap.section(&r) {
            Ok(p) => p,
            Err(Error::NotInvertible(_)) => members[0].clone(),
            Err(e) => return Err(e),
        };
        let reference = walk.coin().at(&rep);
        for x in &members {
            if walk.coin().at(x).max_abs_diff(&reference) >= UNITARY_TOL {
                return Ok(HomogeneityReport {
                    passed: false,
                    classes: n,
                    witness: Some((rep, x.clone())),
                });
            }
        }
    }
    Ok(HomogeneityReport {
        passed: true,
        classes: n,
        witness: None,
    })
}

/// Positions reachable from `seeds` in `steps` moves; the region whose coins
/// matter for an evolution of that length.
pub fn default_window<'a>(
    walk: &WalkSpec,
    seeds: impl IntoIterator<Item = &'a PositionKey>,
    steps: usize,
) -> Result<Vec<PositionKey>> {
    Ok(window::reachable(walk.space(), seeds, steps)?
        .into_iter()
        .collect())
}

/// The walk on the target space intertwined with `walk` through the phased
/// projection: displacements `c'`, coin `C'_[x] = C_x`, and step phases
/// `exp(i phi sigma(c))` when `phi != 0`.
pub fn induced_walk(
    walk: &WalkSpec,
    pmap: &ProjectionMap,
    phi: f64,
    window: &[PositionKey],
) -> Result<WalkSpec> {
    if **walk.space() != **pmap.source() {
        return Err(Error::SpaceMismatch {
            left: walk.space().name().to_string(),
            right: pmap.source().name().to_string(),
        });
    }
    let report = check_coin_homogeneity(walk, pmap, window)?;
    if let Some((x, y)) = report.witness {
        return Err(Error::InhomogeneousCoin { x, y });
    }
    let coin = match walk.coin() {
        CoinAssignment::Homogeneous(m) => CoinAssignment::Homogeneous(m.clone()),
        CoinAssignment::Positional { dim, coin } => {
            let probe = pmap.target().enumerate().map_or_else(
                || PositionKey::new(&vec![0; pmap.target().dimension()]),
                |v| v[0].clone(),
            );
            pmap.section(&probe)?;
            let (coin, pmap) = (coin.clone(), pmap.clone());
            CoinAssignment::Positional {
                dim: *dim,
                coin: std::sync::Arc::new(move |x| {
                    coin(&pmap.section(x).expect("section defined on the target"))
                }),
            }
        }
    };
    let mut induced = WalkSpec::new(pmap.target().clone(), coin)?;
    let own = walk.phase().cloned();
    let projected = if phi != 0.0 {
        let sigma = pmap
            .displacement_sigma()
            .ok_or_else(|| Error::MissingSigma(pmap.name()))?;
        Some(StepPhase::new(phi, sigma))
    } else {
        None
    };
    let phase = match (own, projected) {
        (Some(a), Some(b)) => Some(a.combined(&b)),
        (a, b) => a.or(b),
    };
    if let Some(p) = phase {
        induced = induced.with_phase(p)?;
    }
    Ok(induced)
}

/// `||$ S C psi - S' C' $ psi||` and its factors for one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntertwiningResiduals {
    pub coin: f64,
    pub step: f64,
    pub full: f64,
}

pub fn intertwining_residuals(
    walk: &WalkSpec,
    induced: &WalkSpec,
    pmap: &ProjectionMap,
    phi: f64,
    psi: &WalkState,
) -> Result<IntertwiningResiduals> {
    let p = |s: &WalkState| project_raw(pmap, phi, s);
    let ppsi = p(psi)?;
    let coin = p(&walk.apply_coin(psi)?)?.distance(&induced.apply_coin(&ppsi)?)?;
    let step = p(&walk.apply_step(psi)?)?.distance(&induced.apply_step(&ppsi)?)?;
    let full = p(&walk.step(psi)?)?.distance(&induced.step(&ppsi)?)?;
    Ok(IntertwiningResiduals { coin, step, full })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub steps: usize,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub passed: bool,
}

impl CommutationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serialisable")
    }
}

/// Compares `$_phi (S C)^t psi0` with `(S' C')^t $_phi psi0` for every
/// `t <= n`. The two branches are evolved independently.
pub fn verify_commutation(
    walk: &WalkSpec,
    pmap: &ProjectionMap,
    phi: f64,
    psi0: &WalkState,
    n: usize,
    tol: f64,
) -> Result<CommutationReport> {
    let projected0 = project_state(pmap, phi, psi0)?;
    let window = default_window(walk, psi0.positions(), n)?;
    let induced = induced_walk(walk, pmap, phi, &window)?;
    let (parent, child) = rayon::join(
        || -> Result<Vec<WalkState>> {
            walk.trajectory(psi0, n)?
                .iter()
                .map(|s| project_raw(pmap, phi, s))
                .collect()
        },
        || induced.trajectory(&projected0, n),
    );
    let (parent, child) = (parent?, child?);
    let residuals = parent
        .iter()
        .zip(&child)
        .map(|(a, b)| a.distance(b))
        .collect::<Result<Vec<f64>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(CommutationReport {
        steps: n,
        residuals,
        max_residual,
        passed: max_residual < tol,
    })
}
