use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Amplitude, CoinVector, ZERO};
use crate::spaces::PositionKey;

/// Unitarity tolerance on `max |C^dag C - I|`.
pub const UNITARY_TOL: f64 = 1e-12;

/// A dense `d x d` complex matrix acting on the coin register.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinMatrix {
    dim: usize,
    data: Vec<Amplitude>,
}

impl CoinMatrix {
    /// Unitarity-checked construction from rows.
    pub fn new(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let m = CoinMatrix::from_rows(rows)?;
        let residual = m.unitarity_residual();
        if residual >= UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(m)
    }

    /// Shape-checked but not unitarity-checked construction.
    pub fn from_rows(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(CoinMatrix { dim, data })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        CoinMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Amplitude::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Amplitude::new(1.0, 0.0);
        }
        CoinMatrix { dim, data }
    }

    pub fn diagonal(entries: &[Amplitude]) -> Self {
        let dim = entries.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, e) in entries.iter().enumerate() {
            data[i * dim + i] = *e;
        }
        CoinMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.data[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Amplitude] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<Amplitude>> {
        self.data.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn apply(&self, v: &CoinVector) -> CoinVector {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn mul(&self, other: &CoinMatrix) -> CoinMatrix {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                for j in 0..d {
                    data[i * d + j] += a * other.get(k, j);
                }
            }
        }
        CoinMatrix { dim: d, data }
    }

    pub fn adjoint(&self) -> CoinMatrix {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.get(i, j).conj();
            }
        }
        CoinMatrix { dim: d, data }
    }

    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |C^dag C - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&CoinMatrix::identity(self.dim))
    }
}

pub type CoinFn = Arc<dyn Fn(&PositionKey) -> CoinMatrix + Send + Sync>;

/// `x -> C_x`.
#[derive(Clone)]
pub enum CoinAssignment {
    Homogeneous(CoinMatrix),
    Positional { dim: usize, coin: CoinFn },
}

impl CoinAssignment {
    pub fn positional(
        dim: usize,
        coin: impl Fn(&PositionKey) -> CoinMatrix + Send + Sync + 'static,
    ) -> Self {
        CoinAssignment::Positional {
            dim,
            coin: Arc::new(coin),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CoinAssignment::Homogeneous(m) => m.dim(),
            CoinAssignment::Positional { dim, .. } => *dim,
        }
    }

    pub fn at(&self, x: &PositionKey) -> CoinMatrix {
        match self {
            CoinAssignment::Homogeneous(m) => m.clone(),
            CoinAssignment::Positional { coin, .. } => coin(x),
        }
    }

    /// Applies `C_x` without cloning the homogeneous matrix.
    pub fn apply_at(&self, x: &PositionKey, v: &CoinVector) -> CoinVector {
        match self {
            CoinAssignment::Homogeneous(m) => m.apply(v),
            CoinAssignment::Positional { coin, .. } => coin(x).apply(v),
        }
    }

    pub fn homogeneous(&self) -> Option<&CoinMatrix> {
        match self {
            CoinAssignment::Homogeneous(m) => Some(m),
            CoinAssignment::Positional { .. } => None,
        }
    }

    /// `x -> D C_x` for a diagonal `D`.
    pub fn premultiplied(&self, diag: &[Amplitude]) -> CoinAssignment {
        let d = CoinMatrix::diagonal(diag);
        match self {
            CoinAssignment::Homogeneous(m) => CoinAssignment::Homogeneous(d.mul(m)),
            CoinAssignment::Positional { dim, coin } => {
                let coin = coin.clone();
                CoinAssignment::Positional {
                    dim: *dim,
                    coin: Arc::new(move |x| d.mul(&coin(x))),
                }
            }
        }
    }
}

impl fmt::Debug for CoinAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinAssignment::Homogeneous(m) => f.debug_tuple("Homogeneous").field(m).finish(),
            CoinAssignment::Positional { dim, .. } => f
                .debug_struct("Positional")
                .field("dim", dim)
                .finish_non_exhaustive(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let err = CoinMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
        assert!(matches!(
            CoinMatrix::from_rows(vec![vec![ZERO; 2], vec![ZERO; 3]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn premultiplied_positional() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = CoinMatrix::from_real(&[&[h, h], &[h, -h]]).unwrap();
        let a = CoinAssignment::positional(2, move |_| had.clone());
        let i = Amplitude::new(0.0, 1.0);
        let p = a.premultiplied(&[i, Amplitude::new(1.0, 0.0)]);
        let m = p.at(&PositionKey::scalar(3));
        assert!((m.get(0, 0) - i * h).norm() < 1e-15);
        assert!((m.get(1, 1) + h).norm() < 1e-15);
        assert!(m.unitarity_residual() < 1e-15);
    }
}
