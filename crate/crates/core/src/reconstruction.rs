//! Recovering a source state from its phased projections.
//!
//! With `(r, s) = (rho(x), sigma(x))` as coordinates on the source, the
//! phased projection at `phi` is `P_phi(r) = sum_s exp(i phi s) alpha(r, s)`,
//! a trigonometric polynomial in `phi`. Sampling it on `M` equispaced phases
//! and applying the inverse DFT recovers every `alpha(r, s)` exactly as long
//! as the `sigma` values present in each fiber fit in `M` consecutive
//! integers.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{CoinVector, CompensatedSum, StateDump, WalkState};
use crate::projection::{induced_walk, project_raw, ProjectionMap};
use crate::spaces::{window, PositionKey};
use crate::walk::WalkSpec;

/// Tolerance on grid phases supplied alongside projections.
pub const GRID_TOL: f64 = 1e-12;

/// `phi_j = offset + 2 pi j / M` for `j = 0, ..., M - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    samples: usize,
    offset: f64,
}

impl PhaseGrid {
    pub fn new(samples: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidParameter(
                "phase grid needs at least one sample".into(),
            ));
        }
        Ok(PhaseGrid {
            samples,
            offset: 0.0,
        })
    }

    pub fn with_offset(self, offset: f64) -> Self {
        PhaseGrid { offset, ..self }
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn phi(&self, j: usize) -> f64 {
        self.offset + TAU * j as f64 / self.samples as f64
    }

    pub fn phases(&self) -> Vec<f64> {
        (0..self.samples).map(|j| self.phi(j)).collect()
    }

    /// `exp(-i s phi_j)`, with `s j` reduced modulo `M` before scaling.
    fn kernel(&self, s: i64, j: usize) -> Complex64 {
        let m = self.samples as i128;
        let k = (s as i128 * j as i128).rem_euclid(m) as f64;
        Complex64::cis(-TAU * k / self.samples as f64) * Complex64::cis(-(s as f64) * self.offset)
    }
}

/// Range of `sigma` values to recover, either one window for every fiber or
/// a window per target position.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaBounds {
    Global { min: i64, max: i64 },
    PerFiber(BTreeMap<i64, (i64, i64)>),
}

impl SigmaBounds {
    /// Samples needed for exact recovery: the widest window.
    pub fn required_samples(&self) -> usize {
        let width = |(lo, hi): (i64, i64)| (hi - lo + 1).max(0) as usize;
        match self {
            SigmaBounds::Global { min, max } => width((*min, *max)),
            SigmaBounds::PerFiber(m) => m.values().copied().map(width).max().unwrap_or(0),
        }
    }

    pub fn for_fiber(&self, r: i64) -> Result<(i64, i64)> {
        match self {
            SigmaBounds::Global { min, max } => Ok((*min, *max)),
            SigmaBounds::PerFiber(m) => m.get(&r).copied().ok_or(Error::MissingFiber(r)),
        }
    }

    /// The global window enclosing every fiber window.
    pub fn global(&self) -> SigmaBounds {
        match self {
            SigmaBounds::Global { .. } => self.clone(),
            SigmaBounds::PerFiber(m) => {
                let min = m.values().map(|b| b.0).min().unwrap_or(0);
                let max = m.values().map(|b| b.1).max().unwrap_or(0);
                SigmaBounds::Global { min, max }
            }
        }
    }
}

/// Min and max of `sigma` over the support; `(0, 0)` for an empty state.
pub fn sigma_support_bounds(state: &WalkState, pmap: &ProjectionMap) -> Result<(i64, i64)> {
    bounds_over(state.positions(), pmap).map(|b| match b.global() {
        SigmaBounds::Global { min, max } => (min, max),
        SigmaBounds::PerFiber(_) => unreachable!(),
    })
}

/// Per-fiber `sigma` windows of the support.
pub fn fiber_sigma_bounds(state: &WalkState, pmap: &ProjectionMap) -> Result<SigmaBounds> {
    bounds_over(state.positions(), pmap)
}

/// Per-fiber `sigma` windows of every position an `n`-step evolution of
/// `psi0` can reach. Needs no knowledge of the evolved state.
pub fn cone_sigma_bounds(
    walk: &WalkSpec,
    pmap: &ProjectionMap,
    psi0: &WalkState,
    n: usize,
) -> Result<SigmaBounds> {
    let cone = window::reachable(walk.space(), psi0.positions(), n)?;
    bounds_over(cone.iter(), pmap)
}

fn bounds_over<'a>(
    positions: impl Iterator<Item = &'a PositionKey>,
    pmap: &ProjectionMap,
) -> Result<SigmaBounds> {
    if !pmap.has_sigma() {
        return Err(Error::MissingSigma(pmap.name()));
    }
    let mut out: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
    for x in positions {
        let r = pmap.rho(x)?.x();
        let s = pmap.sigma(x)?;
        out.entry(r)
            .and_modify(|b| *b = (b.0.min(s), b.1.max(s)))
            .or_insert((s, s));
    }
    Ok(SigmaBounds::PerFiber(out))
}

/// What to do when a window is wider than the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AliasPolicy {
    /// Fail with [`Error::GridTooCoarse`].
    Reject,
    /// Recover only the first `M` values of each window, each one summed
    /// with its aliases. Used for negative controls.
    Allow,
}

/// Grid and windows for one reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionPlan {
    pub grid: PhaseGrid,
    pub bounds: SigmaBounds,
}

impl ReconstructionPlan {
    /// Smallest odd grid covering every window.
    pub fn auto(bounds: SigmaBounds) -> Self {
        let m = bounds.required_samples().max(1);
        let m = m | 1;
        ReconstructionPlan {
            grid: PhaseGrid {
                samples: m,
                offset: 0.0,
            },
            bounds,
        }
    }

    pub fn with_samples(bounds: SigmaBounds, samples: usize) -> Result<Self> {
        Ok(ReconstructionPlan {
            grid: PhaseGrid::new(samples)?,
            bounds,
        })
    }
}

/// How the phase of the induced walks is carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// `exp(i phi sigma(c))` on the step operator.
    #[default]
    StepCarried,
    /// The same factors folded into the coin, `C' -> D C'`.
    CoinAbsorbed,
}

/// `(phi_j, P_phi_j state)` for every grid phase. Zero projections are kept.
pub fn project_family(
    pmap: &ProjectionMap,
    state: &WalkState,
    grid: &PhaseGrid,
) -> Result<Vec<(f64, WalkState)>> {
    grid.phases()
        .into_par_iter()
        .map(|phi| Ok((phi, project_raw(pmap, phi, state)?)))
        .collect()
}

/// Projections of `(S C)^n psi0` obtained without evolving on the source:
/// `psi0` is projected at each phase and evolved by the induced walk.
pub fn induced_family(
    walk: &WalkSpec,
    pmap: &ProjectionMap,
    psi0: &WalkState,
    n: usize,
    grid: &PhaseGrid,
    convention: PhaseConvention,
) -> Result<Vec<(f64, WalkState)>> {
    let window: Vec<PositionKey> = window::reachable(walk.space(), psi0.positions(), n)?
        .into_iter()
        .collect();
    grid.phases()
        .into_par_iter()
        .map(|phi| {
            let mut induced = induced_walk(walk, pmap, phi, &window)?;
            if convention == PhaseConvention::CoinAbsorbed {
                induced = induced.absorb_step_phase();
            }
            let start = project_raw(pmap, phi, psi0)?;
            Ok((phi, induced.evolve(&start, n)?))
        })
        .collect()
}

/// Inverts projections taken on the default grid `phi_j = 2 pi j / M`.
pub fn reconstruct(
    projections: &[(f64, WalkState)],
    pmap: &ProjectionMap,
    bounds: &SigmaBounds,
) -> Result<WalkState> {
    let grid = PhaseGrid::new(projections.len())?;
    reconstruct_on_grid(projections, pmap, bounds, &grid, AliasPolicy::Reject)
}

/// Inverts projections taken on `grid`. Each recovered vector is
/// `(1/M) sum_j exp(-i s phi_j) P_j(r)` placed at the source position with
/// coordinates `(r, s)`.
pub fn reconstruct_on_grid(
    projections: &[(f64, WalkState)],
    pmap: &ProjectionMap,
    bounds: &SigmaBounds,
    grid: &PhaseGrid,
    policy: AliasPolicy,
) -> Result<WalkState> {
    let m = grid.samples();
    if projections.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: projections.len(),
        });
    }
    for (j, (phi, state)) in projections.iter().enumerate() {
        let expected = grid.phi(j);
        if (phi - expected).abs() > GRID_TOL || !phi.is_finite() {
            return Err(Error::InconsistentGrid {
                index: j,
                expected,
                found: *phi,
            });
        }
        if **state.space() != **pmap.target() {
            return Err(Error::SpaceMismatch {
                left: state.space().name().to_string(),
                right: pmap.target().name().to_string(),
            });
        }
    }
    if !pmap.has_sigma() {
        return Err(Error::MissingSigma(pmap.name()));
    }

    let fibers: BTreeSet<PositionKey> = projections
        .iter()
        .flat_map(|(_, s)| s.positions().cloned())
        .collect();
    let mut windows = Vec::with_capacity(fibers.len());
    for r in fibers {
        let (lo, hi) = bounds.for_fiber(r.x())?;
        let width = (hi - lo + 1).max(0) as usize;
        if width > m && policy == AliasPolicy::Reject {
            return Err(Error::GridTooCoarse {
                required: width,
                samples: m,
            });
        }
        let hi = hi.min(lo.saturating_add(m as i64 - 1));
        windows.push((r, lo, hi));
    }

    let d = pmap.source().coin_dim();
    let recovered: Vec<Vec<(PositionKey, CoinVector)>> = windows
        .par_iter()
        .map(|(r, lo, hi)| -> Result<Vec<(PositionKey, CoinVector)>> {
            let mut out = Vec::new();
            for s in *lo..=*hi {
                let Some(x) = pmap.lift(r, s)? else {
                    continue;
                };
                let mut sums = vec![CompensatedSum::default(); d];
                for (j, (_, state)) in projections.iter().enumerate() {
                    let Some(v) = state.get(r) else {
                        continue;
                    };
                    let k = grid.kernel(s, j);
                    for (acc, a) in sums.iter_mut().zip(v.iter()) {
                        acc.add(k * a);
                    }
                }
                let v: CoinVector = sums.iter().map(|acc| acc.value() / m as f64).collect();
                if !v.is_zero() {
                    out.push((x, v));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    WalkState::new(pmap.source().clone(), recovered.into_iter().flatten())
}

/// Summary written by the reconstruct command.
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport {
    pub samples: usize,
    pub bounds: SigmaBounds,
    /// Largest amplitude error against the reference state, when given.
    pub max_error: Option<f64>,
    pub recovered: StateDump,
}

impl ReconstructionReport {
    pub fn new(
        plan: &ReconstructionPlan,
        recovered: &WalkState,
        reference: Option<&WalkState>,
    ) -> Result<Self> {
        let max_error = reference.map(|r| recovered.max_abs_diff(r)).transpose()?;
        Ok(ReconstructionReport {
            samples: plan.grid.samples(),
            bounds: plan.bounds.clone(),
            max_error,
            recovered: recovered.to_dump(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serialisable")
    }
}
