//! Quotient maps between position spaces and the consistency check that
//! makes them usable as projections.

use std::sync::Arc;

use serde::Serialize;

use super::{Action, Displacement, Geometry, PositionKey, PositionSpace, UnimodularFrame};
use crate::error::{Error, Result};
use crate::projection::{ProjectionMap, RhoKind};

/// `rho(x, y) = k x + l y` from the square lattice onto the line, with
/// `sigma(x, y) = u y - v x`. Induced displacements are `(+k, -k, +l, -l)`.
pub fn lattice_quotient(k: i64, l: i64) -> Result<ProjectionMap> {
    let frame = UnimodularFrame::new(k, l)?;
    let neg = |a: i64| {
        a.checked_neg()
            .ok_or_else(|| Error::InvalidParameter(format!("-{a} overflows")))
    };
    let target = PositionSpace::line_with(
        format!("z1/lattice({k},{l})"),
        &[("R'", k), ("L'", neg(k)?), ("U'", l), ("D'", neg(l)?)],
    )?;
    let source = PositionSpace::z2();
    let sigma = source
        .displacements()
        .iter()
        .map(|d| {
            let t = d.offset().expect("z2 displacements are translations");
            frame
                .sigma(t[0], t[1])
                .expect("unit offsets cannot overflow")
        })
        .collect();
    ProjectionMap::from_parts(source, target, RhoKind::Lattice(frame), Some(sigma))
}

/// `rho(x) = x mod n` from the plain line onto the `n`-circle, `sigma(x) = x`.
pub fn cyclic_quotient(n: i64) -> Result<ProjectionMap> {
    cyclic_quotient_of(PositionSpace::z1(), n)
}

/// Folds any one-dimensional translation lattice onto `Z_n`.
pub fn cyclic_quotient_of(source: Arc<PositionSpace>, n: i64) -> Result<ProjectionMap> {
    if n < 1 {
        return Err(Error::InvalidModulus(n));
    }
    if source.geometry() != (Geometry::Lattice { dim: 1 }) {
        return Err(Error::InvalidParameter(format!(
            "cannot fold `{}`: not a one-dimensional lattice",
            source.name()
        )));
    }
    let mut displacements = Vec::with_capacity(source.coin_dim());
    let mut sigma = Vec::with_capacity(source.coin_dim());
    for d in source.displacements() {
        let Action::Translate(t) = d.action() else {
            return Err(Error::InvalidParameter(format!(
                "displacement `{}` is not a translation",
                d.label()
            )));
        };
        displacements.push(Displacement::translate(
            format!("{}'", d.label()),
            &[t[0].rem_euclid(n)],
        ));
        sigma.push(t[0]);
    }
    let target_name = format!("{}/mod{n}", source.name());
    let target = Arc::new(PositionSpace::new(
        target_name,
        Geometry::Cyclic { modulus: n },
        displacements,
    )?);
    ProjectionMap::from_parts(source, target, RhoKind::Modulo { n }, Some(sigma))
}

/// `rho(x, y) = x + y` from the L-lattice onto the line; `a -> +1`, `b -> -1`.
pub fn llattice_quotient() -> ProjectionMap {
    let target = PositionSpace::line_with("z1/llattice-diag", &[("a'", 1), ("b'", -1)])
        .expect("static space");
    ProjectionMap::from_parts(
        PositionSpace::llattice(),
        target,
        RhoKind::LLatticeDiagonal,
        None,
    )
    .expect("matching coin dimensions")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoCounterexample {
    pub x: PositionKey,
    pub y: PositionKey,
    pub displacement: String,
    pub rho_x: PositionKey,
    pub rho_y: PositionKey,
    pub rho_xc: PositionKey,
    pub rho_yc: PositionKey,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub passed: bool,
    /// Unordered pairs of distinct window positions examined.
    pub pairs_checked: usize,
    pub counterexample: Option<RhoCounterexample>,
}

/// Brute-force check of `rho(x) = rho(y) <=> rho(x.c) = rho(y.c)` over all
/// pairs of the window and every displacement.
pub fn check_rho_consistency(
    pmap: &ProjectionMap,
    window: &[PositionKey],
) -> Result<ConsistencyReport> {
    let space = pmap.source();
    let images: Vec<PositionKey> = window.iter().map(|x| pmap.rho(x)).collect::<Result<_>>()?;
    let pairs = window.len() * window.len().saturating_sub(1) / 2;
    for c in 0..space.coin_dim() {
        let moved: Vec<PositionKey> = window
            .iter()
            .map(|x| pmap.rho(&space.apply(x, c)?))
            .collect::<Result<_>>()?;
        for i in 0..window.len() {
            for j in (i + 1)..window.len() {
                let same_before = images[i] == images[j];
                let same_after = moved[i] == moved[j];
                if same_before != same_after {
                    return Ok(ConsistencyReport {
                        passed: false,
                        pairs_checked: pairs,
                        counterexample: Some(RhoCounterexample {
                            x: window[i].clone(),
                            y: window[j].clone(),
                            displacement: space.label(c).to_string(),
                            rho_x: images[i].clone(),
                            rho_y: images[j].clone(),
                            rho_xc: moved[i].clone(),
                            rho_yc: moved[j].clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(ConsistencyReport {
        passed: true,
        pairs_checked: pairs,
        counterexample: None,
    })
}
