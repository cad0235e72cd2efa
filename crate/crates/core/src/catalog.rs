//! Ready-made coins, walks, projections and distinguished states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilbert::{Amplitude, CoinVector, WalkState};
use crate::projection::ProjectionMap;
use crate::spaces::{
    check_rho_consistency, cyclic_quotient, lattice_quotient, llattice_quotient, window,
    Displacement, PositionKey, PositionSpace,
};
use crate::walk::{CoinAssignment, CoinMatrix, WalkSpec, UNITARY_TOL};

/// `(1/2) (2 J - 2 I)` in (R, L, U, D) order.
pub fn grover_coin() -> CoinMatrix {
    CoinMatrix::from_real(&[
        &[-0.5, 0.5, 0.5, 0.5],
        &[0.5, -0.5, 0.5, 0.5],
        &[0.5, 0.5, -0.5, 0.5],
        &[0.5, 0.5, 0.5, -0.5],
    ])
    .expect("grover coin is orthogonal")
}

pub fn hadamard_coin() -> CoinMatrix {
    let h = FRAC_1_SQRT_2;
    CoinMatrix::from_real(&[&[h, h], &[h, -h]]).expect("hadamard coin is orthogonal")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

const R: usize = 0;
const L: usize = 1;
const U: usize = 2;
const D: usize = 3;

fn coin4(entries: &[(usize, f64)]) -> CoinVector {
    let mut v = CoinVector::zeros(4);
    for &(c, a) in entries {
        v[c] += Amplitude::new(a, 0.0);
    }
    v
}

/// The four-site Grover eigenstate anchored at `(x, y)`, normalised.
pub fn trapped_state(x: i64, y: i64, sign: Sign) -> WalkState {
    let p = sign.value();
    let k = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    WalkState::new(
        PositionSpace::z2(),
        [
            ((x, y).into(), coin4(&[(L, k), (D, k)])),
            ((x, y + 1).into(), coin4(&[(L, p * k), (U, p * k)])),
            ((x + 1, y).into(), coin4(&[(R, p * k), (D, p * k)])),
            ((x + 1, y + 1).into(), coin4(&[(R, k), (U, k)])),
        ],
    )
    .expect("valid z2 state")
}

/// Line onto which a trapped state is projected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectedLine {
    /// `rho(x, y) = x`.
    Lazy,
    /// `rho(x, y) = x + y`.
    DoubleLine,
}

impl ProjectedLine {
    pub fn projection(self) -> ProjectionMap {
        match self {
            ProjectedLine::Lazy => lattice_quotient(1, 0),
            ProjectedLine::DoubleLine => lattice_quotient(1, 1),
        }
        .expect("coprime")
    }
}

/// The projected trapped states written out directly, not normalised.
pub fn projected_trapped_state(kind: ProjectedLine, x: i64, y: i64, sign: Sign) -> WalkState {
    let p = sign.value();
    let k = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let target = kind.projection().target().clone();
    let sites: Vec<(PositionKey, CoinVector)> = match kind {
        ProjectedLine::Lazy => vec![
            (x.into(), coin4(&[(L, (1.0 + p) * k), (D, k), (U, p * k)])),
            (
                (x + 1).into(),
                coin4(&[(R, (1.0 + p) * k), (U, k), (D, p * k)]),
            ),
        ],
        ProjectedLine::DoubleLine => vec![
            ((x + y).into(), coin4(&[(L, k), (D, k)])),
            (
                (x + y + 1).into(),
                coin4(&[(L, p * k), (R, p * k), (U, p * k), (D, p * k)]),
            ),
            ((x + y + 2).into(), coin4(&[(R, k), (U, k)])),
        ],
    };
    WalkState::new(target, sites).expect("valid projected state")
}

/// Extra parameters for [`scenario`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub k: Option<i64>,
    pub l: Option<i64>,
    pub n_circle: Option<i64>,
    pub phi: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            k: None,
            l: None,
            n_circle: None,
            phi: 0.0,
        }
    }
}

pub const SCENARIOS: [&str; 5] = [
    "grover2d_to_lazy",
    "lattice_to_jumps",
    "line_to_circle",
    "llattice_to_line",
    "lattice_to_doubled",
];

/// A walk, a projection for it, and named states to start from.
#[derive(Clone, Debug)]
pub struct ScenarioDescriptor {
    pub name: String,
    pub walk: WalkSpec,
    pub pmap: ProjectionMap,
    pub phi: f64,
    /// The first entry is the default initial state.
    pub initial_states: Vec<(String, WalkState)>,
}

impl ScenarioDescriptor {
    pub fn default_state(&self) -> &WalkState {
        &self.initial_states[0].1
    }

    pub fn state(&self, name: &str) -> Option<&WalkState> {
        self.initial_states
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }
}

fn c(re: f64, im: f64) -> Amplitude {
    Amplitude::new(re, im)
}

/// `(1, i, -1, -i) / 2` or `(1, i) / sqrt 2`.
pub fn default_coin(dim: usize) -> CoinVector {
    match dim {
        4 => CoinVector::from(vec![c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)]),
        2 => CoinVector::from(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]),
        d => {
            let a = 1.0 / (d as f64).sqrt();
            (0..d).map(|_| c(a, 0.0)).collect()
        }
    }
}

fn states_2d(space: &Arc<PositionSpace>) -> Result<Vec<(String, WalkState)>> {
    let half = FRAC_1_SQRT_2;
    Ok(vec![
        (
            "origin".into(),
            WalkState::new(space.clone(), [((0, 0).into(), default_coin(4))])?,
        ),
        (
            "basis_R".into(),
            WalkState::basis(space.clone(), (2, -1).into(), 0)?,
        ),
        (
            "two_site".into(),
            WalkState::new(
                space.clone(),
                [
                    ((0, 0).into(), CoinVector::from_real(&[0.0, 0.0, half, 0.0])),
                    (
                        (1, 3).into(),
                        CoinVector::from(vec![c(0.0, 0.0), c(0.0, half), c(0.0, 0.0), c(0.0, 0.0)]),
                    ),
                ],
            )?,
        ),
    ])
}

fn states_line(space: &Arc<PositionSpace>) -> Result<Vec<(String, WalkState)>> {
    let h = FRAC_1_SQRT_2;
    Ok(vec![
        (
            "origin".into(),
            WalkState::new(space.clone(), [(0.into(), default_coin(2))])?,
        ),
        (
            "basis_R".into(),
            WalkState::basis(space.clone(), 0.into(), 0)?,
        ),
        (
            "two_site".into(),
            WalkState::new(
                space.clone(),
                [
                    (0.into(), CoinVector::from_real(&[h, 0.0])),
                    (5.into(), CoinVector::from(vec![c(0.0, 0.0), c(0.0, -h)])),
                ],
            )?,
        ),
    ])
}

fn states_llattice(space: &Arc<PositionSpace>) -> Result<Vec<(String, WalkState)>> {
    let h = FRAC_1_SQRT_2;
    Ok(vec![
        (
            "origin".into(),
            WalkState::new(space.clone(), [((0, 0).into(), default_coin(2))])?,
        ),
        (
            "basis_a_odd".into(),
            WalkState::basis(space.clone(), (1, 0).into(), 0)?,
        ),
        (
            "two_site".into(),
            WalkState::new(
                space.clone(),
                [
                    ((0, 0).into(), CoinVector::from_real(&[0.0, h])),
                    (
                        (2, 3).into(),
                        CoinVector::from(vec![c(0.5, 0.0), c(0.0, 0.5)]),
                    ),
                ],
            )?,
        ),
    ])
}

fn lattice_scenario(name: &str, k: i64, l: i64, phi: f64) -> Result<ScenarioDescriptor> {
    let walk = WalkSpec::homogeneous(PositionSpace::z2(), grover_coin())?;
    let pmap = lattice_quotient(k, l)?;
    let initial_states = states_2d(walk.space())?;
    Ok(ScenarioDescriptor {
        name: name.into(),
        walk,
        pmap,
        phi,
        initial_states,
    })
}

/// Looks up a catalog scenario by name.
pub fn scenario(name: &str, params: &ScenarioParams) -> Result<ScenarioDescriptor> {
    if !params.phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phi = {}", params.phi)));
    }
    let unused = |what: &str, v: Option<i64>| match v {
        Some(_) => Err(Error::InvalidParameter(format!(
            "`{name}` takes no {what} parameter"
        ))),
        None => Ok(()),
    };
    let desc = match name {
        "grover2d_to_lazy" => {
            unused("k", params.k)?;
            unused("l", params.l)?;
            unused("circle size", params.n_circle)?;
            lattice_scenario(name, 1, 0, params.phi)?
        }
        "lattice_to_jumps" => {
            unused("circle size", params.n_circle)?;
            let l = params.l.unwrap_or(1);
            if l != 1 {
                return Err(Error::InvalidParameter(format!(
                    "`{name}` has l = 1, got {l}"
                )));
            }
            lattice_scenario(name, params.k.unwrap_or(2), 1, params.phi)?
        }
        "lattice_to_doubled" => {
            unused("k", params.k)?;
            unused("l", params.l)?;
            unused("circle size", params.n_circle)?;
            lattice_scenario(name, 1, 1, params.phi)?
        }
        "line_to_circle" => {
            unused("k", params.k)?;
            unused("l", params.l)?;
            let n = params.n_circle.unwrap_or(4);
            if n < 1 {
                return Err(Error::InvalidParameter(format!("circle size {n} < 1")));
            }
            let walk = WalkSpec::homogeneous(PositionSpace::z1(), hadamard_coin())?;
            let initial_states = states_line(walk.space())?;
            ScenarioDescriptor {
                name: name.into(),
                walk,
                pmap: cyclic_quotient(n)?,
                phi: params.phi,
                initial_states,
            }
        }
        "llattice_to_line" => {
            unused("k", params.k)?;
            unused("l", params.l)?;
            unused("circle size", params.n_circle)?;
            if params.phi != 0.0 {
                return Err(Error::InvalidParameter(
                    "the L-lattice projection carries no sigma; phi must be 0".into(),
                ));
            }
            let walk = WalkSpec::homogeneous(PositionSpace::llattice(), hadamard_coin())?;
            let initial_states = states_llattice(walk.space())?;
            ScenarioDescriptor {
                name: name.into(),
                walk,
                pmap: llattice_quotient(),
                phi: 0.0,
                initial_states,
            }
        }
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    validate(&desc)?;
    Ok(desc)
}

fn validate(desc: &ScenarioDescriptor) -> Result<()> {
    let win = match desc.walk.space().dimension() {
        1 => window::interval(-6, 6),
        _ => window::square(3),
    };
    let report = check_rho_consistency(&desc.pmap, &win)?;
    if !report.passed {
        return Err(Error::InvalidParameter(format!(
            "projection `{}` fails the consistency check",
            desc.pmap.name()
        )));
    }
    for (_, s) in &desc.initial_states {
        crate::projection::project_state(&desc.pmap, desc.phi, s)?;
    }
    Ok(())
}

/// The Grover walk on the square lattice.
pub fn grover2d() -> WalkSpec {
    WalkSpec::homogeneous(PositionSpace::z2(), grover_coin()).expect("grover coin fits z2")
}

/// Drops the fourth coin direction of a four-coin walk whose coin keeps
/// `span{R, L, U}` invariant, giving the three-coin lazy formulation.
pub fn restrict_to_three_coin(spec: &WalkSpec, state: &WalkState) -> Result<(WalkSpec, WalkState)> {
    let space = spec.space();
    if space.coin_dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: space.coin_dim(),
        });
    }
    if spec.phase().is_some() {
        return Err(Error::InvalidParameter(
            "restriction of phase-carrying walks is not supported".into(),
        ));
    }
    let Some(m) = spec.coin().homogeneous() else {
        return Err(Error::InvalidParameter(
            "restriction needs a homogeneous coin".into(),
        ));
    };
    let residual = (0..3).map(|c| m.get(D, c).norm()).fold(0.0, f64::max);
    if residual >= UNITARY_TOL {
        return Err(Error::SubspaceNotInvariant { residual });
    }
    for (x, v) in state.iter() {
        let magnitude = v[D].norm();
        if magnitude != 0.0 {
            return Err(Error::StateOutsideSubspace {
                pos: x.clone(),
                magnitude,
            });
        }
    }
    let displacements: Vec<Displacement> = space.displacements()[..3].to_vec();
    let reduced = Arc::new(PositionSpace::new(
        format!("{}/3coin", space.name()),
        space.geometry(),
        displacements,
    )?);
    let block: Vec<Vec<Amplitude>> = (0..3)
        .map(|i| (0..3).map(|j| m.get(i, j)).collect())
        .collect();
    let walk = WalkSpec::new(
        reduced.clone(),
        CoinAssignment::Homogeneous(CoinMatrix::new(block)?),
    )?;
    let sites = state
        .iter()
        .map(|(x, v)| (x.clone(), v.iter().take(3).copied().collect::<CoinVector>()));
    Ok((walk, WalkState::new(reduced, sites)?))
}

/// Pads a three-coin state with a zero fourth component.
pub fn embed_three_coin(state: &WalkState, space: Arc<PositionSpace>) -> Result<WalkState> {
    let sites = state.iter().map(|(x, v)| {
        let mut w: CoinVector = v.iter().copied().collect();
        if w.dim() == 3 {
            w = w
                .iter()
                .copied()
                .chain([Amplitude::new(0.0, 0.0)])
                .collect();
        }
        (x.clone(), w)
    });
    WalkState::new(space, sites)
}
