use crate::error::{Error, Result};

/// Coefficients with `u*k + v*l = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BezoutPair {
    pub u: i64,
    pub v: i64,
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

fn extended_euclid(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Bezout coefficients for coprime `(k, l)`.
///
/// Among all solutions `u + j*l` the one with the smallest `|u|` is returned,
/// ties going to the smaller `u`. When `l = 0` (so `k = +-1`) `v` is taken as 0.
pub fn bezout(k: i64, l: i64) -> Result<BezoutPair> {
    let g = gcd(k, l);
    if g != 1 {
        return Err(Error::NotCoprime { k, l, gcd: g });
    }
    if l == 0 {
        return Ok(BezoutPair { u: k, v: 0 });
    }
    let (_, u0, _) = extended_euclid(k as i128, l as i128);
    let m = (l as i128).abs();
    let lo = u0.rem_euclid(m);
    let hi = lo - m;
    let u = if hi.abs() <= lo.abs() { hi } else { lo };
    let v = (1 - u * k as i128) / l as i128;
    debug_assert_eq!(u * k as i128 + v * l as i128, 1);
    Ok(BezoutPair {
        u: i64::try_from(u).expect("|u| < |l|"),
        v: i64::try_from(v)
            .map_err(|_| Error::InvalidParameter(format!("({k}, {l}) overflows")))?,
    })
}

/// The unit-determinant change of coordinates `(x, y) -> (r, s)` with
/// `r = k x + l y` and `s = u y - v x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnimodularFrame {
    pub k: i64,
    pub l: i64,
    pub u: i64,
    pub v: i64,
}

impl UnimodularFrame {
    pub fn new(k: i64, l: i64) -> Result<Self> {
        let BezoutPair { u, v } = bezout(k, l)?;
        Ok(UnimodularFrame { k, l, u, v })
    }

    /// `[[k, l], [-v, u]]`.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.k, self.l], [-self.v, self.u]]
    }

    /// `[[u, -l], [v, k]]`.
    pub fn inverse_matrix(&self) -> [[i64; 2]; 2] {
        [[self.u, -self.l], [self.v, self.k]]
    }

    pub fn determinant(&self) -> i64 {
        let [[a, b], [c, d]] = self.matrix();
        a * d - b * c
    }

    pub fn rho(&self, x: i64, y: i64) -> Option<i64> {
        self.k.checked_mul(x)?.checked_add(self.l.checked_mul(y)?)
    }

    pub fn sigma(&self, x: i64, y: i64) -> Option<i64> {
        self.u.checked_mul(y)?.checked_sub(self.v.checked_mul(x)?)
    }

    /// The unique `(x, y)` with the given `(rho, sigma)` coordinates.
    pub fn lift(&self, r: i64, s: i64) -> Option<(i64, i64)> {
        let x = self.u.checked_mul(r)?.checked_sub(self.l.checked_mul(s)?)?;
        let y = self.v.checked_mul(r)?.checked_add(self.k.checked_mul(s)?)?;
        Some((x, y))
    }
}
