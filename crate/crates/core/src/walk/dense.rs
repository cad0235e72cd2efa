//! Explicit matrices for walks on finite spaces. Basis index of `|m>|c>` is
//! `m * d + c` with `m` the position's rank in coordinate order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::sync::Arc;

use super::WalkSpec;
use crate::error::{Error, Result};
use crate::hilbert::{CoinVector, WalkState, ZERO};
use crate::spaces::{PositionKey, PositionSpace};

fn positions(space: &PositionSpace) -> Result<Vec<PositionKey>> {
    space
        .enumerate()
        .ok_or_else(|| Error::InvalidParameter(format!("space `{}` is infinite", space.name())))
}

pub fn to_vector(state: &WalkState) -> Result<DVector<Complex64>> {
    let sites = positions(state.space())?;
    let d = state.coin_dim();
    let mut v = DVector::from_element(sites.len() * d, ZERO);
    for (m, x) in sites.iter().enumerate() {
        if let Some(a) = state.get(x) {
            for c in 0..d {
                v[m * d + c] = a[c];
            }
        }
    }
    Ok(v)
}

pub fn from_vector(space: Arc<PositionSpace>, v: &DVector<Complex64>) -> Result<WalkState> {
    let sites = positions(&space)?;
    let d = space.coin_dim();
    if v.len() != sites.len() * d {
        return Err(Error::DimensionMismatch {
            expected: sites.len() * d,
            found: v.len(),
        });
    }
    WalkState::new(
        space,
        sites
            .into_iter()
            .enumerate()
            .map(|(m, x)| (x, (0..d).map(|c| v[m * d + c]).collect::<CoinVector>())),
    )
}

fn build(
    spec: &WalkSpec,
    op: impl Fn(&WalkState) -> Result<WalkState>,
) -> Result<DMatrix<Complex64>> {
    let space = spec.space().clone();
    let sites = positions(&space)?;
    let d = space.coin_dim();
    let dim = sites.len() * d;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (j, x) in sites.iter().enumerate() {
        for c in 0..d {
            let col = to_vector(&op(&WalkState::basis(space.clone(), x.clone(), c)?)?)?;
            m.set_column(j * d + c, &col);
        }
    }
    Ok(m)
}

pub fn coin_matrix(spec: &WalkSpec) -> Result<DMatrix<Complex64>> {
    build(spec, |s| spec.apply_coin(s))
}

pub fn step_matrix(spec: &WalkSpec) -> Result<DMatrix<Complex64>> {
    build(spec, |s| spec.apply_step(s))
}

/// `U = S C`.
pub fn evolution_matrix(spec: &WalkSpec) -> Result<DMatrix<Complex64>> {
    Ok(step_matrix(spec)? * coin_matrix(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::hadamard_coin;
    use crate::walk::StepPhase;

    #[test]
    fn circle_operator_is_unitary() {
        let c3 = PositionSpace::circle(3).unwrap();
        let w = WalkSpec::homogeneous(c3, hadamard_coin())
            .unwrap()
            .with_phase(StepPhase::new(1.1, &[1, -1]))
            .unwrap();
        let u = evolution_matrix(&w).unwrap();
        let id = DMatrix::<Complex64>::identity(6, 6);
        assert!((u.adjoint() * &u - id).camax() < 1e-14);
        assert!(to_vector(&WalkState::empty(PositionSpace::z1())).is_err());
    }
}
