//! Coin and step operators and the one-step evolution `U = S C`.
//!
//! Operators act on sparse states directly and are never stored as
//! matrices; [`dense`] builds explicit matrices for finite spaces only.

mod coin;
pub mod dense;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Amplitude, CoinVector, WalkState, ZERO};
use crate::spaces::{PositionKey, PositionSpace};

pub use coin::{CoinAssignment, CoinFn, CoinMatrix, UNITARY_TOL};

/// State-level comparison tolerance used by the checks in this crate.
pub const STATE_TOL: f64 = 1e-10;

/// Per-displacement phase `exp(i angle_c)` carried by the step operator.
#[derive(Clone, Debug, PartialEq)]
pub struct StepPhase {
    angles: Vec<f64>,
}

impl StepPhase {
    /// `angle_c = phi * sigma(c)`.
    pub fn new(phi: f64, sigma: &[i64]) -> Self {
        StepPhase {
            angles: sigma.iter().map(|&s| phi * s as f64).collect(),
        }
    }

    pub fn from_angles(angles: Vec<f64>) -> Self {
        StepPhase { angles }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn factors(&self) -> Vec<Amplitude> {
        self.angles.iter().map(|&a| Complex64::cis(a)).collect()
    }

    pub fn combined(&self, other: &StepPhase) -> StepPhase {
        StepPhase {
            angles: self
                .angles
                .iter()
                .zip(&other.angles)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// A coined walk: space, coin assignment and an optional step phase.
#[derive(Clone, Debug)]
pub struct WalkSpec {
    space: Arc<PositionSpace>,
    coin: CoinAssignment,
    phase: Option<StepPhase>,
}

impl WalkSpec {
    pub fn new(space: Arc<PositionSpace>, coin: CoinAssignment) -> Result<Self> {
        if coin.dim() != space.coin_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.coin_dim(),
                found: coin.dim(),
            });
        }
        if let Some(m) = coin.homogeneous() {
            let residual = m.unitarity_residual();
            if residual >= UNITARY_TOL {
                return Err(Error::NotUnitary { residual });
            }
        }
        Ok(WalkSpec {
            space,
            coin,
            phase: None,
        })
    }

    pub fn homogeneous(space: Arc<PositionSpace>, coin: CoinMatrix) -> Result<Self> {
        WalkSpec::new(space, CoinAssignment::Homogeneous(coin))
    }

    pub fn with_phase(mut self, phase: StepPhase) -> Result<Self> {
        if phase.angles.len() != self.space.coin_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.coin_dim(),
                found: phase.angles.len(),
            });
        }
        self.phase = Some(phase);
        Ok(self)
    }

    /// Equivalent walk with the step phases moved into the coin:
    /// `S_phi C = S (D C)` with `D = diag(exp(i angle_c))`.
    pub fn absorb_step_phase(&self) -> WalkSpec {
        match &self.phase {
            None => self.clone(),
            Some(p) => WalkSpec {
                space: self.space.clone(),
                coin: self.coin.premultiplied(&p.factors()),
                phase: None,
            },
        }
    }

    pub fn space(&self) -> &Arc<PositionSpace> {
        &self.space
    }

    pub fn coin(&self) -> &CoinAssignment {
        &self.coin
    }

    pub fn phase(&self) -> Option<&StepPhase> {
        self.phase.as_ref()
    }

    /// Largest unitarity residual of `C_x` over a window.
    pub fn max_unitarity_residual<'a>(
        &self,
        window: impl IntoIterator<Item = &'a PositionKey>,
    ) -> f64 {
        match &self.coin {
            CoinAssignment::Homogeneous(m) => m.unitarity_residual(),
            CoinAssignment::Positional { coin, .. } => window
                .into_iter()
                .map(|x| coin(x).unitarity_residual())
                .fold(0.0, f64::max),
        }
    }

    /// Phase accumulated along a closed path of displacements from `start`.
    pub fn loop_phase(&self, start: &PositionKey, path: &[usize]) -> Result<f64> {
        let mut x = start.clone();
        let mut total = 0.0;
        for &c in path {
            x = self.space.apply(&x, c)?;
            total += self.phase.as_ref().map_or(0.0, |p| p.angles[c]);
        }
        if x != *start {
            return Err(Error::InvalidParameter(format!(
                "path from {start} ends at {x}, not a loop"
            )));
        }
        Ok(total)
    }

    fn check_state(&self, state: &WalkState) -> Result<()> {
        if **state.space() != *self.space {
            return Err(Error::SpaceMismatch {
                left: state.space().name().to_string(),
                right: self.space.name().to_string(),
            });
        }
        Ok(())
    }

    fn step_factors(&self) -> Option<Vec<Amplitude>> {
        self.phase.as_ref().map(StepPhase::factors)
    }

    /// `|x>|c> -> |x> (x) C_x|c>`.
    pub fn apply_coin(&self, state: &WalkState) -> Result<WalkState> {
        self.check_state(state)?;
        let mut out = WalkState::empty(self.space.clone());
        for (x, v) in state.iter() {
            out.insert_unchecked(x.clone(), self.coin.apply_at(x, v));
        }
        Ok(out)
    }

    /// `|x>|c> -> exp(i angle_c) |x.c>|c>`. Exactly-zero amplitudes are not
    /// transported.
    pub fn apply_step(&self, state: &WalkState) -> Result<WalkState> {
        self.check_state(state)?;
        let factors = self.step_factors();
        let mut out = WalkState::empty(self.space.clone());
        for (x, v) in state.iter() {
            for (c, a) in v.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let y = self.space.apply(x, c)?;
                let a = match &factors {
                    Some(f) => a * f[c],
                    None => *a,
                };
                out.add_amplitude_unchecked(y, c, a);
            }
        }
        Ok(out)
    }

    /// One application of `U = S C`.
    pub fn step(&self, state: &WalkState) -> Result<WalkState> {
        self.apply_step(&self.apply_coin(state)?)
    }

    /// `(S C)^n |psi>`.
    pub fn evolve(&self, state: &WalkState, n: usize) -> Result<WalkState> {
        self.check_state(state)?;
        let mut psi = state.clone();
        for _ in 0..n {
            psi = self.step(&psi)?;
        }
        Ok(psi)
    }

    /// Every intermediate state `psi_0, ..., psi_n`.
    pub fn trajectory(&self, state: &WalkState, n: usize) -> Result<Vec<WalkState>> {
        self.check_state(state)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(state.clone());
        for t in 0..n {
            let next = self.step(&out[t])?;
            out.push(next);
        }
        Ok(out)
    }

    /// Same evolution as [`evolve`](Self::evolve), computed position by
    /// position from the recurrence
    /// `alpha_x' = sum_c Pi_c C_p alpha_p` with `p = c^-1(x)`.
    pub fn evolve_recurrence(&self, state: &WalkState, n: usize) -> Result<WalkState> {
        self.check_state(state)?;
        let d = self.space.coin_dim();
        let factors = self.step_factors();
        let mut psi = state.clone();
        for _ in 0..n {
            let mut targets = BTreeSet::new();
            for x in psi.positions() {
                for c in 0..d {
                    targets.insert(self.space.apply(x, c)?);
                }
            }
            let mut coins: HashMap<PositionKey, CoinMatrix> = HashMap::new();
            let mut next = WalkState::empty(self.space.clone());
            for x in targets {
                let mut alpha = CoinVector::zeros(d);
                for c in 0..d {
                    let Some(p) = self.space.preimage(&x, c)? else {
                        continue;
                    };
                    let Some(prev) = psi.get(&p) else {
                        continue;
                    };
                    let m = coins.entry(p.clone()).or_insert_with(|| self.coin.at(&p));
                    let mut a: Amplitude =
                        m.row(c).iter().zip(prev.iter()).map(|(m, v)| m * v).sum();
                    if let Some(f) = &factors {
                        a *= f[c];
                    }
                    alpha[c] = a;
                }
                next.insert_unchecked(x, alpha);
            }
            psi = next;
        }
        Ok(psi)
    }
}
