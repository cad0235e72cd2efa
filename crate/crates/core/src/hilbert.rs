//! Sparse vectors of `l2(X) (x) C^d`.
//!
//! A [`WalkState`] stores one coin vector per occupied position. Nothing is
//! pruned implicitly: an entry whose amplitudes cancel to zero stays in the
//! support until [`WalkState::prune`] is called.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::spaces::{PositionKey, PositionSpace};

pub type Amplitude = Complex64;

pub const ZERO: Amplitude = Complex64::new(0.0, 0.0);

/// The coin-register part of a state at one position.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoinVector(SmallVec<[Amplitude; 4]>);

impl CoinVector {
    pub fn zeros(dim: usize) -> Self {
        CoinVector(SmallVec::from_elem(ZERO, dim))
    }

    pub fn basis(dim: usize, c: usize) -> Self {
        let mut v = CoinVector::zeros(dim);
        v.0[c] = Amplitude::new(1.0, 0.0);
        v
    }

    pub fn from_real(entries: &[f64]) -> Self {
        entries.iter().map(|&r| Amplitude::new(r, 0.0)).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Amplitude] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Amplitude> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| *a == ZERO)
    }

    pub fn scaled(&self, z: Amplitude) -> Self {
        self.0.iter().map(|a| a * z).collect()
    }

    pub fn add_assign_scaled(&mut self, other: &CoinVector, z: Amplitude) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += b * z;
        }
    }

    /// `sum_c conj(self_c) other_c`.
    pub fn dot(&self, other: &CoinVector) -> Amplitude {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &CoinVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl FromIterator<Amplitude> for CoinVector {
    fn from_iter<T: IntoIterator<Item = Amplitude>>(iter: T) -> Self {
        CoinVector(iter.into_iter().collect())
    }
}

impl From<Vec<Amplitude>> for CoinVector {
    fn from(v: Vec<Amplitude>) -> Self {
        CoinVector(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[Amplitude; N]> for CoinVector {
    fn from(v: [Amplitude; N]) -> Self {
        CoinVector(SmallVec::from_slice(&v))
    }
}

impl Index<usize> for CoinVector {
    type Output = Amplitude;
    fn index(&self, c: usize) -> &Amplitude {
        &self.0[c]
    }
}

impl IndexMut<usize> for CoinVector {
    fn index_mut(&mut self, c: usize) -> &mut Amplitude {
        &mut self.0[c]
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn step((sum, comp): &mut (f64, f64), x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    pub fn add(&mut self, z: Amplitude) {
        Self::step(&mut self.re, z.re);
        Self::step(&mut self.im, z.im);
    }

    pub fn value(&self) -> Amplitude {
        Amplitude::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// A finitely supported vector of `H = H_P (x) H_C`.
#[derive(Clone, Debug)]
pub struct WalkState {
    space: Arc<PositionSpace>,
    support: BTreeMap<PositionKey, CoinVector>,
}

impl WalkState {
    /// Builds a state from position/coin pairs, summing repeated positions.
    pub fn new(
        space: Arc<PositionSpace>,
        assignments: impl IntoIterator<Item = (PositionKey, CoinVector)>,
    ) -> Result<Self> {
        let mut state = WalkState::empty(space);
        for (x, v) in assignments {
            state.accumulate(x, &v, Amplitude::new(1.0, 0.0))?;
        }
        Ok(state)
    }

    pub fn empty(space: Arc<PositionSpace>) -> Self {
        WalkState {
            space,
            support: BTreeMap::new(),
        }
    }

    /// `|x> (x) |c>`.
    pub fn basis(space: Arc<PositionSpace>, x: PositionKey, c: usize) -> Result<Self> {
        let d = space.coin_dim();
        if c >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: c + 1,
            });
        }
        WalkState::new(space, [(x, CoinVector::basis(d, c))])
    }

    /// Adds `z * v` to the coin vector at `x`.
    pub fn accumulate(&mut self, x: PositionKey, v: &CoinVector, z: Amplitude) -> Result<()> {
        let d = self.space.coin_dim();
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
        self.space.check(&x)?;
        self.support
            .entry(x)
            .or_insert_with(|| CoinVector::zeros(d))
            .add_assign_scaled(v, z);
        Ok(())
    }

    /// Adds `z` to one amplitude. The caller guarantees `x` lies in the space.
    pub(crate) fn add_amplitude_unchecked(&mut self, x: PositionKey, c: usize, z: Amplitude) {
        let d = self.space.coin_dim();
        self.support
            .entry(x)
            .or_insert_with(|| CoinVector::zeros(d))[c] += z;
    }

    pub(crate) fn insert_unchecked(&mut self, x: PositionKey, v: CoinVector) {
        self.support.insert(x, v);
    }

    pub fn space(&self) -> &Arc<PositionSpace> {
        &self.space
    }

    pub fn coin_dim(&self) -> usize {
        self.space.coin_dim()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PositionKey, &CoinVector)> {
        self.support.iter()
    }

    pub fn positions(&self) -> impl Iterator<Item = &PositionKey> {
        self.support.keys()
    }

    pub fn get(&self, x: &PositionKey) -> Option<&CoinVector> {
        self.support.get(x)
    }

    /// Amplitude of `|x>|c>`, zero off the support.
    pub fn amplitude(&self, x: &PositionKey, c: usize) -> Amplitude {
        self.support.get(x).map_or(ZERO, |v| v[c])
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for v in self.support.values() {
            acc.add(Amplitude::new(v.norm_sqr(), 0.0));
        }
        acc.value().re
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn same_space(&self, other: &WalkState) -> Result<()> {
        if self.space == other.space || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.space.name().to_string(),
                right: other.space.name().to_string(),
            })
        }
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &WalkState) -> Result<Amplitude> {
        self.same_space(other)?;
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = CompensatedSum::default();
        for (x, v) in &small.support {
            if let Some(w) = large.support.get(x) {
                acc.add(if flip { w.dot(v) } else { v.dot(w) });
            }
        }
        Ok(acc.value())
    }

    pub fn scaled(&self, z: Amplitude) -> WalkState {
        WalkState {
            space: self.space.clone(),
            support: self
                .support
                .iter()
                .map(|(x, v)| (x.clone(), v.scaled(z)))
                .collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Amplitude, other: &WalkState, b: Amplitude) -> Result<WalkState> {
        self.same_space(other)?;
        let mut out = self.scaled(a);
        for (x, v) in &other.support {
            out.support
                .entry(x.clone())
                .or_insert_with(|| CoinVector::zeros(v.dim()))
                .add_assign_scaled(v, b);
        }
        Ok(out)
    }

    /// `||self - other||`.
    pub fn distance(&self, other: &WalkState) -> Result<f64> {
        Ok(self
            .combine(Amplitude::new(1.0, 0.0), other, Amplitude::new(-1.0, 0.0))?
            .norm())
    }

    /// Largest `|self - other|` over all amplitudes of either support.
    pub fn max_abs_diff(&self, other: &WalkState) -> Result<f64> {
        self.same_space(other)?;
        let zero = CoinVector::zeros(self.coin_dim());
        let mut worst: f64 = 0.0;
        for (x, v) in &self.support {
            worst = worst.max(v.max_abs_diff(other.support.get(x).unwrap_or(&zero)));
        }
        for (x, w) in &other.support {
            if !self.support.contains_key(x) {
                worst = worst.max(w.max_abs_diff(&zero));
            }
        }
        Ok(worst)
    }

    /// Probability mass per position.
    pub fn position_distribution(&self) -> BTreeMap<PositionKey, f64> {
        self.support
            .iter()
            .map(|(x, v)| (x.clone(), v.norm_sqr()))
            .collect()
    }

    /// Drops positions whose every amplitude has modulus `<= eps`.
    pub fn prune(&mut self, eps: f64) {
        self.support.retain(|_, v| v.iter().any(|a| a.norm() > eps));
    }

    pub fn pruned(mut self, eps: f64) -> Self {
        self.prune(eps);
        self
    }

    pub fn normalized(&self) -> Result<WalkState> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NullProjection { norm: 0.0 });
        }
        Ok(self.scaled(Amplitude::new(1.0 / n, 0.0)))
    }

    pub fn to_dump(&self) -> StateDump {
        StateDump {
            space: self.space.name().to_string(),
            support: self
                .support
                .iter()
                .map(|(x, v)| SiteDump {
                    pos: x.coords().to_vec(),
                    coin: v.iter().map(|a| [a.re, a.im]).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dump()).expect("state dump is serialisable")
    }

    /// Parses a dump produced for `space`.
    pub fn from_dump(space: Arc<PositionSpace>, dump: &StateDump) -> Result<WalkState> {
        if dump.space != space.name() {
            return Err(Error::SpaceMismatch {
                left: dump.space.clone(),
                right: space.name().to_string(),
            });
        }
        let sites = dump.support.iter().map(|s| {
            (
                PositionKey::new(&s.pos),
                s.coin
                    .iter()
                    .map(|[re, im]| Amplitude::new(*re, *im))
                    .collect::<CoinVector>(),
            )
        });
        WalkState::new(space, sites)
    }

    pub fn from_json(space: Arc<PositionSpace>, json: &str) -> Result<WalkState> {
        let dump: StateDump =
            serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
        WalkState::from_dump(space, &dump)
    }

    /// One row per position: coordinates, then probability.
    pub fn distribution_csv(&self) -> String {
        let mut out = String::new();
        for (x, p) in self.position_distribution() {
            for c in x.coords() {
                write!(out, "{c},").unwrap();
            }
            writeln!(out, "{p:.16e}").unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteDump {
    pub pos: Vec<i64>,
    pub coin: Vec<[f64; 2]>,
}

/// JSON form: `{"space": name, "support": [{"pos": [..], "coin": [[re, im], ..]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub space: String,
    pub support: Vec<SiteDump>,
}
