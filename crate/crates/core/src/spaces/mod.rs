//! Position sets, their displacement families and integer bookkeeping.
//!
//! A [`PositionSpace`] is a countable set of integer-coordinate positions
//! together with an ordered family of injective displacements. The order of
//! the displacements is the coin basis order of any walk on the space.

mod bezout;
mod quotient;
pub mod window;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use bezout::{bezout, gcd, BezoutPair, UnimodularFrame};
pub use quotient::{
    check_rho_consistency, cyclic_quotient, cyclic_quotient_of, lattice_quotient,
    llattice_quotient, ConsistencyReport, RhoCounterexample,
};

pub type Coords = SmallVec<[i64; 2]>;

/// A point of a position space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PositionKey(Coords);

impl PositionKey {
    pub fn new(coords: &[i64]) -> Self {
        PositionKey(Coords::from_slice(coords))
    }

    pub fn scalar(x: i64) -> Self {
        PositionKey::new(&[x])
    }

    pub fn pair(x: i64, y: i64) -> Self {
        PositionKey::new(&[x, y])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// First coordinate; the only one for one-dimensional spaces.
    pub fn x(&self) -> i64 {
        self.0[0]
    }

    pub fn y(&self) -> i64 {
        self.0[1]
    }

    fn parity(&self) -> i64 {
        self.0
            .iter()
            .fold(0i64, |acc, c| acc + c.rem_euclid(2))
            .rem_euclid(2)
    }
}

impl From<i64> for PositionKey {
    fn from(x: i64) -> Self {
        PositionKey::scalar(x)
    }
}

impl From<(i64, i64)> for PositionKey {
    fn from((x, y): (i64, i64)) -> Self {
        PositionKey::pair(x, y)
    }
}

impl fmt::Display for PositionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [x] => write!(f, "{x}"),
            cs => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// How a displacement moves a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    /// `x -> x + offset`, reduced modulo the space size on cyclic spaces.
    Translate(Coords),
    /// Offset chosen by the parity of the coordinate sum.
    Alternating { even: Coords, odd: Coords },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Displacement {
    label: String,
    action: Action,
}

impl Displacement {
    pub fn translate(label: impl Into<String>, offset: &[i64]) -> Self {
        Displacement {
            label: label.into(),
            action: Action::Translate(Coords::from_slice(offset)),
        }
    }

    pub fn alternating(label: impl Into<String>, even: &[i64], odd: &[i64]) -> Self {
        Displacement {
            label: label.into(),
            action: Action::Alternating {
                even: Coords::from_slice(even),
                odd: Coords::from_slice(odd),
            },
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    /// Offset for a pure translation, `None` for parity-dependent moves.
    pub fn offset(&self) -> Option<&[i64]> {
        match &self.action {
            Action::Translate(t) => Some(t),
            Action::Alternating { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// `Z^dim`.
    Lattice { dim: usize },
    /// `Z_modulus`, coordinates in `0..modulus`.
    Cyclic { modulus: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionSpace {
    name: String,
    geometry: Geometry,
    displacements: Vec<Displacement>,
}

impl PositionSpace {
    pub fn new(
        name: impl Into<String>,
        geometry: Geometry,
        displacements: Vec<Displacement>,
    ) -> Result<Self> {
        let name = name.into();
        let dim = match geometry {
            Geometry::Lattice { dim } => dim,
            Geometry::Cyclic { modulus } => {
                if modulus < 1 {
                    return Err(Error::InvalidModulus(modulus));
                }
                1
            }
        };
        for (i, d) in displacements.iter().enumerate() {
            if displacements[..i].iter().any(|o| o.label == d.label) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate displacement label `{}` in space `{name}`",
                    d.label
                )));
            }
            let ok = match &d.action {
                Action::Translate(t) => t.len() == dim,
                Action::Alternating { even, odd } => {
                    matches!(geometry, Geometry::Lattice { .. })
                        && even.len() == dim
                        && odd.len() == dim
                }
            };
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "displacement `{}` does not fit the geometry of `{name}`",
                    d.label
                )));
            }
        }
        Ok(PositionSpace {
            name,
            geometry,
            displacements,
        })
    }

    /// The square lattice with displacements (R, L, U, D).
    pub fn z2() -> Arc<Self> {
        Arc::new(
            PositionSpace::new(
                "z2",
                Geometry::Lattice { dim: 2 },
                vec![
                    Displacement::translate("R", &[1, 0]),
                    Displacement::translate("L", &[-1, 0]),
                    Displacement::translate("U", &[0, 1]),
                    Displacement::translate("D", &[0, -1]),
                ],
            )
            .expect("static space"),
        )
    }

    /// The line with displacements (R, L) = (+1, -1).
    pub fn z1() -> Arc<Self> {
        Arc::new(
            PositionSpace::new(
                "z1",
                Geometry::Lattice { dim: 1 },
                vec![
                    Displacement::translate("R", &[1]),
                    Displacement::translate("L", &[-1]),
                ],
            )
            .expect("static space"),
        )
    }

    /// The `n`-vertex circle with displacements (R, L) = (+1, -1) mod n.
    pub fn circle(n: i64) -> Result<Arc<Self>> {
        Ok(Arc::new(PositionSpace::new(
            format!("circle{n}"),
            Geometry::Cyclic { modulus: n },
            vec![
                Displacement::translate("R", &[1]),
                Displacement::translate("L", &[-1]),
            ],
        )?))
    }

    /// The L-lattice realised on `Z^2`: `a` steps right from even sites and
    /// up from odd ones, `b` steps left from even sites and down from odd
    /// ones. Both change `x + y` by exactly one.
    pub fn llattice() -> Arc<Self> {
        Arc::new(
            PositionSpace::new(
                "llattice",
                Geometry::Lattice { dim: 2 },
                vec![
                    Displacement::alternating("a", &[1, 0], &[0, 1]),
                    Displacement::alternating("b", &[-1, 0], &[0, -1]),
                ],
            )
            .expect("static space"),
        )
    }

    /// A one-dimensional lattice with the given labelled translations.
    pub fn line_with(name: impl Into<String>, steps: &[(&str, i64)]) -> Result<Arc<Self>> {
        Ok(Arc::new(PositionSpace::new(
            name,
            Geometry::Lattice { dim: 1 },
            steps
                .iter()
                .map(|(l, s)| Displacement::translate(*l, &[*s]))
                .collect(),
        )?))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dimension(&self) -> usize {
        match self.geometry {
            Geometry::Lattice { dim } => dim,
            Geometry::Cyclic { .. } => 1,
        }
    }

    /// Number of displacements, i.e. the coin dimension of walks on the space.
    pub fn coin_dim(&self) -> usize {
        self.displacements.len()
    }

    pub fn displacements(&self) -> &[Displacement] {
        &self.displacements
    }

    pub fn label(&self, index: usize) -> &str {
        &self.displacements[index].label
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.displacements
            .iter()
            .position(|d| d.label == label)
            .ok_or_else(|| Error::UnknownDisplacement {
                space: self.name.clone(),
                label: label.to_string(),
            })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.geometry, Geometry::Cyclic { .. })
    }

    pub fn contains(&self, x: &PositionKey) -> bool {
        match self.geometry {
            Geometry::Lattice { dim } => x.dim() == dim,
            Geometry::Cyclic { modulus } => x.dim() == 1 && (0..modulus).contains(&x.x()),
        }
    }

    pub fn check(&self, x: &PositionKey) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::InvalidPosition {
                space: self.name.clone(),
                pos: x.clone(),
            })
        }
    }

    /// All positions of a finite space in coordinate order.
    pub fn enumerate(&self) -> Option<Vec<PositionKey>> {
        match self.geometry {
            Geometry::Cyclic { modulus } => Some((0..modulus).map(PositionKey::scalar).collect()),
            Geometry::Lattice { .. } => None,
        }
    }

    /// Reduces raw coordinates onto the space (mod N on circles).
    pub fn normalize(&self, x: &PositionKey) -> PositionKey {
        match self.geometry {
            Geometry::Cyclic { modulus } => PositionKey::scalar(x.x().rem_euclid(modulus)),
            Geometry::Lattice { .. } => x.clone(),
        }
    }

    /// `x . c` for the displacement with the given index.
    pub fn apply(&self, x: &PositionKey, c: usize) -> Result<PositionKey> {
        self.check(x)?;
        let offset = match &self.displacements[c].action {
            Action::Translate(t) => t,
            Action::Alternating { even, odd } => {
                if x.parity() == 0 {
                    even
                } else {
                    odd
                }
            }
        };
        self.shift(x, offset, 1)
    }

    pub fn apply_label(&self, x: &PositionKey, label: &str) -> Result<PositionKey> {
        let c = self.index_of(label)?;
        self.apply(x, c)
    }

    /// The unique `p` with `p . c = z`, if any.
    pub fn preimage(&self, z: &PositionKey, c: usize) -> Result<Option<PositionKey>> {
        self.check(z)?;
        match &self.displacements[c].action {
            Action::Translate(t) => self.shift(z, t, -1).map(Some),
            Action::Alternating { even, odd } => {
                let from_even = self.shift(z, even, -1)?;
                if from_even.parity() == 0 {
                    return Ok(Some(from_even));
                }
                let from_odd = self.shift(z, odd, -1)?;
                Ok((from_odd.parity() == 1).then_some(from_odd))
            }
        }
    }

    fn shift(&self, x: &PositionKey, offset: &[i64], sign: i64) -> Result<PositionKey> {
        let overflow = || Error::Overflow { pos: x.clone() };
        match self.geometry {
            Geometry::Cyclic { modulus } => {
                let t = (sign * offset[0]).rem_euclid(modulus);
                let v = (x.x() as i128 + t as i128).rem_euclid(modulus as i128);
                Ok(PositionKey::scalar(v as i64))
            }
            Geometry::Lattice { .. } => {
                let mut out = Coords::with_capacity(offset.len());
                for (a, t) in x.0.iter().zip(offset) {
                    let t = t.checked_mul(sign).ok_or_else(overflow)?;
                    out.push(a.checked_add(t).ok_or_else(overflow)?);
                }
                Ok(PositionKey(out))
            }
        }
    }
}

impl fmt::Display for PositionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_right_step() {
        let z2 = PositionSpace::z2();
        assert_eq!(
            z2.apply_label(&(3, 5).into(), "R").unwrap(),
            PositionKey::pair(4, 5)
        );
    }

    #[test]
    fn circle_wraps() {
        let c4 = PositionSpace::circle(4).unwrap();
        assert_eq!(c4.apply_label(&3.into(), "R").unwrap(), 0.into());
        assert_eq!(c4.apply_label(&0.into(), "L").unwrap(), 3.into());
        assert!(c4.apply(&4.into(), 0).is_err());
        assert_eq!(
            PositionSpace::circle(0).unwrap_err(),
            Error::InvalidModulus(0)
        );
    }

    #[test]
    fn llattice_parity_rule() {
        let ll = PositionSpace::llattice();
        let a = |p: (i64, i64)| ll.apply_label(&p.into(), "a").unwrap();
        let b = |p: (i64, i64)| ll.apply_label(&p.into(), "b").unwrap();
        assert_eq!(a((0, 0)), PositionKey::pair(1, 0));
        assert_eq!(a((1, 0)), PositionKey::pair(1, 1));
        assert_eq!(b((0, 0)), PositionKey::pair(-1, 0));
        assert_eq!(b((1, 0)), PositionKey::pair(1, -1));
        // a raises and b lowers x + y from either parity
        for x in -3..3 {
            for y in -3..3 {
                let p = a((x, y));
                assert_eq!(p.x() + p.y(), x + y + 1);
                let q = b((x, y));
                assert_eq!(q.x() + q.y(), x + y - 1);
            }
        }
    }

    #[test]
    fn preimage_inverts_apply() {
        for space in [PositionSpace::z2(), PositionSpace::llattice()] {
            for x in -4..4 {
                for y in -4..4 {
                    let p = PositionKey::pair(x, y);
                    for c in 0..space.coin_dim() {
                        let img = space.apply(&p, c).unwrap();
                        assert_eq!(space.preimage(&img, c).unwrap(), Some(p.clone()));
                    }
                }
            }
        }
        let c5 = PositionSpace::circle(5).unwrap();
        for m in 0..5 {
            let img = c5.apply(&m.into(), 1).unwrap();
            assert_eq!(c5.preimage(&img, 1).unwrap(), Some(m.into()));
        }
    }

    #[test]
    fn unknown_label_and_bad_position() {
        let z2 = PositionSpace::z2();
        assert!(matches!(
            z2.apply_label(&(0, 0).into(), "Q"),
            Err(Error::UnknownDisplacement { .. })
        ));
        assert!(matches!(
            z2.apply(&PositionKey::scalar(0), 0),
            Err(Error::InvalidPosition { .. })
        ));
    }

    #[test]
    fn overflow_is_checked() {
        let line = PositionSpace::line_with("jumps", &[("J", i64::MAX)]).unwrap();
        assert!(matches!(
            line.apply(&1.into(), 0),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(PositionSpace::line_with("dup", &[("R", 1), ("R", 2)]).is_err());
    }
}
