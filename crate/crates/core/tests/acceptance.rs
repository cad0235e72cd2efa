//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qwproj::catalog::{
    grover2d, grover_coin, hadamard_coin, projected_trapped_state, restrict_to_three_coin,
    scenario, trapped_state, ProjectedLine, ScenarioParams, Sign, SCENARIOS,
};
use qwproj::projection::{induced_walk, project_raw, project_state, verify_commutation};
use qwproj::reconstruction::{
    cone_sigma_bounds, induced_family, project_family, reconstruct, reconstruct_on_grid,
    AliasPolicy, PhaseConvention, PhaseGrid,
};
use qwproj::spaces::{
    check_rho_consistency, cyclic_quotient, lattice_quotient, llattice_quotient, window,
    PositionKey,
};
use qwproj::walk::StepPhase;
use qwproj::{CoinVector, Error, PositionSpace, ProjectionMap, WalkSpec, WalkState};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 1. commutation for every scenario from three starting states, t <= 30.
fn commutation_suite() -> Outcome {
    const TOL: f64 = 1e-10;
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    let mut failures = Vec::new();
    for name in SCENARIOS {
        let params = match name {
            "line_to_circle" => ScenarioParams {
                n_circle: Some(4),
                phi: PI / 3.0,
                ..Default::default()
            },
            "lattice_to_jumps" => ScenarioParams {
                k: Some(3),
                ..Default::default()
            },
            _ => ScenarioParams::default(),
        };
        let s = scenario(name, &params).unwrap();
        for (label, psi0) in &s.initial_states {
            let r = verify_commutation(&s.walk, &s.pmap, s.phi, psi0, 30, TOL).unwrap();
            runs += 1;
            worst = worst.max(r.max_residual);
            if !r.passed {
                failures.push(format!("{name}/{label}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && runs >= 15 && secs < 10.0,
        format!("{runs} runs, max residual {worst:.2e} (tol 1e-10), {secs:.2}s (limit 10s) {failures:?}"),
    )
}

/// 2. trapped states and their projections.
fn trapped_suite() -> Outcome {
    let walk = grover2d();
    let mut ok = true;
    let mut leak_max: f64 = 0.0;
    let mut eig_max: f64 = 0.0;
    let mut printed_max: f64 = 0.0;
    let mut induced_max: f64 = 0.0;
    let mut lambdas = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let phi = trapped_state(-1, 2, sign);
        let one = walk.step(&phi).unwrap();
        let lambda = phi.inner(&one).unwrap();
        ok &= (lambda.norm() - 1.0).abs() < 1e-12;
        lambdas.push(lambda);
        let expect = phi.scaled(lambda);
        eig_max = eig_max.max(one.distance(&expect).unwrap());

        let mut psi = phi.clone();
        for t in 1..=50 {
            psi = walk.step(&psi).unwrap();
            let leak: f64 = psi
                .iter()
                .filter(|(x, _)| phi.get(x).is_none())
                .map(|(_, v)| v.norm_sqr())
                .fold(0.0, |a, b| a + b)
                .sqrt();
            leak_max = leak_max.max(leak);
            let expect = phi.scaled(lambda.powu(t));
            eig_max = eig_max.max(psi.distance(&expect).unwrap());
        }

        for kind in [ProjectedLine::Lazy, ProjectedLine::DoubleLine] {
            let pmap = kind.projection();
            let direct = project_state(&pmap, 0.0, &phi).unwrap();
            let printed = projected_trapped_state(kind, -1, 2, sign);
            printed_max = printed_max.max(direct.max_abs_diff(&printed).unwrap());
            let win = window::reachable(walk.space(), phi.positions(), 1).unwrap();
            let win: Vec<_> = win.into_iter().collect();
            let induced = induced_walk(&walk, &pmap, 0.0, &win).unwrap();
            let stepped = induced.step(&printed).unwrap();
            induced_max = induced_max.max(stepped.distance(&printed.scaled(lambda)).unwrap());
        }
    }
    ok &= leak_max < 1e-12 && eig_max < 1e-12 && printed_max < 1e-14 && induced_max < 1e-12;
    outcome(
        ok,
        format!(
            "lambda+ = {:.3}, lambda- = {:.3}; leakage {leak_max:.1e} (tol 1e-12), eigen residual {eig_max:.1e} (tol 1e-12), printed forms {printed_max:.1e} (tol 1e-14), induced eigen residual {induced_max:.1e} (tol 1e-12)",
            lambdas[0], lambdas[1]
        ),
    )
}

/// Circle walk built by hand: Hadamard coin, seam hops 3 -> 0 and 0 -> 3
/// carry `exp(+-i twist)`. Basis index `2 m + c`.
fn seam_oracle(n: usize, twist: f64) -> DMatrix<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let dim = 2 * n;
    let mut coin = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    let mut shift = coin.clone();
    for m in 0..n {
        coin[(2 * m, 2 * m)] = c(h, 0.0);
        coin[(2 * m, 2 * m + 1)] = c(h, 0.0);
        coin[(2 * m + 1, 2 * m)] = c(h, 0.0);
        coin[(2 * m + 1, 2 * m + 1)] = c(-h, 0.0);
        let right = (m + 1) % n;
        let left = (m + n - 1) % n;
        shift[(2 * right, 2 * m)] = if m == n - 1 {
            Complex64::cis(twist)
        } else {
            c(1.0, 0.0)
        };
        shift[(2 * left + 1, 2 * m + 1)] = if m == 0 {
            Complex64::cis(-twist)
        } else {
            c(1.0, 0.0)
        };
    }
    shift * coin
}

fn to_dense(state: &WalkState, n: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(2 * n, c(0.0, 0.0));
    for (x, a) in state.iter() {
        let m = x.x() as usize;
        v[2 * m] = a[0];
        v[2 * m + 1] = a[1];
    }
    v
}

/// 3. twisted circle against the dense seam oracle.
fn twisted_circle() -> Outcome {
    const N: usize = 4;
    let walk = WalkSpec::homogeneous(PositionSpace::z1(), hadamard_coin()).unwrap();
    let pmap = cyclic_quotient(N as i64).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let starts = [
        WalkState::new(
            PositionSpace::z1(),
            [(0.into(), CoinVector::from(vec![c(h, 0.0), c(0.0, h)]))],
        )
        .unwrap(),
        WalkState::new(
            PositionSpace::z1(),
            [
                (3.into(), CoinVector::from(vec![c(0.6, 0.0), c(0.0, 0.0)])),
                (
                    (-6).into(),
                    CoinVector::from(vec![c(0.0, 0.0), c(0.0, 0.8)]),
                ),
            ],
        )
        .unwrap(),
    ];
    let mut worst: f64 = 0.0;
    let mut twist_err: f64 = 0.0;
    for phi in [0.0, PI / 3.0, 1.0] {
        let induced = induced_walk(&walk, &pmap, phi, &window::interval(-50, 50)).unwrap();
        twist_err =
            twist_err.max((induced.loop_phase(&0.into(), &[0; N]).unwrap() - N as f64 * phi).abs());
        let u = seam_oracle(N, N as f64 * phi);
        let gauge = DMatrix::from_fn(2 * N, 2 * N, |i, j| {
            if i == j {
                Complex64::cis(phi * (i / 2) as f64)
            } else {
                c(0.0, 0.0)
            }
        });
        let gauge_inv = gauge.adjoint();
        for psi0 in &starts {
            let mut oracle = &gauge_inv * to_dense(&project_raw(&pmap, phi, psi0).unwrap(), N);
            let mut psi = psi0.clone();
            for t in 0..=40 {
                if t > 0 {
                    psi = walk.step(&psi).unwrap();
                    oracle = &u * oracle;
                }
                let lib = to_dense(&project_raw(&pmap, phi, &psi).unwrap(), N);
                let diff = (lib - &gauge * &oracle).camax();
                worst = worst.max(diff);
            }
        }
    }
    outcome(
        worst < 1e-12 && twist_err < 1e-12,
        format!("phi in {{0, pi/3, 1}}, t <= 40: max elementwise diff {worst:.1e} (tol 1e-12), loop phase error {twist_err:.1e}"),
    )
}

/// 4. reconstruction round trip and the aliasing control.
fn reconstruction_suite() -> Outcome {
    let start = Instant::now();
    let n = 10;
    let walk = grover2d();
    let psi0 = WalkState::new(
        walk.space().clone(),
        [((0, 0).into(), CoinVector::from_real(&[0.5; 4]))],
    )
    .unwrap();
    let target = walk.evolve(&psi0, n).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for (k, l) in [(1, 0), (2, 1), (3, 5)] {
        let pmap = lattice_quotient(k, l).unwrap();
        let bounds = cone_sigma_bounds(&walk, &pmap, &psi0, n).unwrap();
        let grid = PhaseGrid::new(2 * n + 1).unwrap();
        let direct = reconstruct(
            &project_family(&pmap, &target, &grid).unwrap(),
            &pmap,
            &bounds,
        )
        .unwrap();
        let induced = reconstruct(
            &induced_family(&walk, &pmap, &psi0, n, &grid, PhaseConvention::StepCarried).unwrap(),
            &pmap,
            &bounds,
        )
        .unwrap();
        let absorbed = reconstruct(
            &induced_family(&walk, &pmap, &psi0, n, &grid, PhaseConvention::CoinAbsorbed).unwrap(),
            &pmap,
            &bounds,
        )
        .unwrap();
        let err = [&direct, &induced, &absorbed]
            .iter()
            .map(|s| s.max_abs_diff(&target).unwrap())
            .fold(0.0, f64::max);

        let coarse = PhaseGrid::new(2 * n - 1).unwrap();
        let fam = project_family(&pmap, &target, &coarse).unwrap();
        let aliased =
            reconstruct_on_grid(&fam, &pmap, &bounds.global(), &coarse, AliasPolicy::Allow)
                .unwrap();
        let alias_err = aliased.max_abs_diff(&target).unwrap();
        ok &= err < 1e-10 && alias_err > 1e-6;
        lines.push(format!(
            "({k},{l}): err {err:.1e}, M=19 err {alias_err:.1e}"
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 30.0;
    outcome(
        ok,
        format!(
            "M=21 tol 1e-10, control > 1e-6: {}; {secs:.2}s (limit 30s)",
            lines.join("; ")
        ),
    )
}

/// 5. both evolution engines on random sparse states.
fn engine_suite() -> Outcome {
    let walks = [
        WalkSpec::homogeneous(PositionSpace::z2(), grover_coin()).unwrap(),
        WalkSpec::homogeneous(PositionSpace::z1(), hadamard_coin()).unwrap(),
        WalkSpec::homogeneous(PositionSpace::circle(4).unwrap(), hadamard_coin())
            .unwrap()
            .with_phase(StepPhase::new(1.0, &[1, -1]))
            .unwrap(),
        WalkSpec::homogeneous(PositionSpace::llattice(), hadamard_coin()).unwrap(),
    ];
    let mut rng = common::rng(2024);
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for walk in &walks {
        for _ in 0..50 {
            let psi = common::random_state(walk.space(), &mut rng, 6, 5);
            let n = rng.gen_range(0..=20);
            let a = walk.evolve(&psi, n).unwrap();
            let b = walk.evolve_recurrence(&psi, n).unwrap();
            worst = worst.max(a.max_abs_diff(&b).unwrap());
            trials += 1;
        }
    }
    outcome(
        worst < 1e-12,
        format!("{trials} trials on z2, z1, z4, llattice; max diff {worst:.1e} (tol 1e-12)"),
    )
}

/// 6. consistency condition on large windows.
fn consistency_suite() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    let checks: Vec<(ProjectionMap, Vec<PositionKey>)> = vec![
        (lattice_quotient(1, 0).unwrap(), window::square(7)),
        (lattice_quotient(2, 1).unwrap(), window::square(7)),
        (lattice_quotient(3, 5).unwrap(), window::square(7)),
        (cyclic_quotient(4).unwrap(), window::interval(-100, 100)),
        (llattice_quotient(), window::square(7)),
    ];
    for (pmap, win) in &checks {
        let r = check_rho_consistency(pmap, win).unwrap();
        ok &= r.passed && r.pairs_checked >= 10_000;
        lines.push(format!(
            "{} {} pairs {}",
            pmap.name(),
            r.pairs_checked,
            if r.passed { "ok" } else { "FAILED" }
        ));
    }
    let square = ProjectionMap::custom(
        "x^2",
        PositionSpace::z2(),
        lattice_quotient(1, 0).unwrap().target().clone(),
        |x| PositionKey::scalar(x.x() * x.x()),
    )
    .unwrap();
    let r = check_rho_consistency(&square, &window::square(3)).unwrap();
    let ce = r.counterexample.as_ref();
    ok &= !r.passed && ce.is_some();
    if let Some(ce) = ce {
        lines.push(format!(
            "x^2 rejected: rho({}) = {}, rho({}) = {}, after {} {} vs {}",
            ce.x, ce.rho_x, ce.y, ce.rho_y, ce.displacement, ce.rho_xc, ce.rho_yc
        ));
    }
    outcome(ok, lines.join("; "))
}

/// 7. vanishing projections.
fn pathology_suite() -> Outcome {
    let z2 = PositionSpace::z2();
    let cases: Vec<(ProjectionMap, f64, WalkState)> = vec![
        (
            lattice_quotient(1, 0).unwrap(),
            0.0,
            WalkState::new(
                z2.clone(),
                [
                    ((0, 0).into(), CoinVector::basis(4, 0)),
                    ((0, 1).into(), CoinVector::basis(4, 0).scaled(c(-1.0, 0.0))),
                ],
            )
            .unwrap(),
        ),
        (
            cyclic_quotient(4).unwrap(),
            0.0,
            WalkState::new(
                PositionSpace::z1(),
                [
                    (1.into(), CoinVector::basis(2, 1)),
                    (5.into(), CoinVector::basis(2, 1).scaled(c(-1.0, 0.0))),
                ],
            )
            .unwrap(),
        ),
        (
            // exp(i pi/2 * 4) = 1 makes the phased fold cancel too
            cyclic_quotient(4).unwrap(),
            PI / 2.0,
            WalkState::new(
                PositionSpace::z1(),
                [
                    (0.into(), CoinVector::basis(2, 0)),
                    (4.into(), CoinVector::basis(2, 0).scaled(c(-1.0, 0.0))),
                ],
            )
            .unwrap(),
        ),
        (
            llattice_quotient(),
            0.0,
            WalkState::new(
                PositionSpace::llattice(),
                [
                    ((1, 0).into(), CoinVector::basis(2, 0)),
                    ((0, 1).into(), CoinVector::basis(2, 0).scaled(c(-1.0, 0.0))),
                ],
            )
            .unwrap(),
        ),
    ];
    let mut ok = true;
    for (pmap, phi, psi) in &cases {
        for _ in 0..3 {
            ok &= matches!(
                project_state(pmap, *phi, psi),
                Err(Error::NullProjection { .. })
            );
        }
        let walk = WalkSpec::homogeneous(
            pmap.source().clone(),
            if pmap.source().coin_dim() == 4 {
                grover_coin()
            } else {
                hadamard_coin()
            },
        )
        .unwrap();
        ok &= matches!(
            verify_commutation(&walk, pmap, *phi, psi, 5, 1e-10),
            Err(Error::NullProjection { .. })
        );
    }
    let anti = r#"{"space":"z2","support":[{"pos":[0,0],"coin":[[1,0],[0,0],[0,0],[0,0]]},{"pos":[0,1],"coin":[[-1,0],[0,0],[0,0],[0,0]]}]}"#;
    let mut codes = Vec::new();
    for _ in 0..2 {
        let out = Command::new(env!("CARGO_BIN_EXE_qwproj"))
            .args(["verify", "--scenario", "grover2d_to_lazy", "--init", anti])
            .output()
            .unwrap();
        codes.push(out.status.code());
    }
    ok &= codes.iter().all(|c| *c == Some(3));
    outcome(
        ok,
        format!(
            "{} antisymmetric cases raise NullProjection; CLI exit codes {codes:?}",
            cases.len()
        ),
    )
}

/// 8. norm conservation over 100 steps.
fn unitarity_suite() -> Outcome {
    let n = 100;
    let tol = 1e-12 * (n as f64 + 1.0);
    let mut walks: Vec<(String, WalkSpec, WalkState)> = Vec::new();
    for name in SCENARIOS {
        let params = match name {
            "line_to_circle" => ScenarioParams {
                phi: 1.0,
                ..Default::default()
            },
            _ => ScenarioParams::default(),
        };
        let s = scenario(name, &params).unwrap();
        let psi0 = s.default_state().clone();
        let win: Vec<_> = window::reachable(s.walk.space(), psi0.positions(), 1)
            .unwrap()
            .into_iter()
            .collect();
        let induced = induced_walk(&s.walk, &s.pmap, s.phi, &win).unwrap();
        let projected = project_state(&s.pmap, s.phi, &psi0)
            .unwrap()
            .normalized()
            .unwrap();
        walks.push((name.to_string(), s.walk.clone(), psi0));
        walks.push((format!("{name}/induced"), induced, projected));
    }
    let lazy =
        PositionSpace::line_with("lazy", &[("R", 1), ("L", -1), ("U", 0), ("D", 0)]).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let block = qwproj::CoinMatrix::from_real(&[
        &[h, h, 0.0, 0.0],
        &[h, -h, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let w4 = WalkSpec::homogeneous(lazy.clone(), block).unwrap();
    let s4 = WalkState::new(
        lazy,
        [(0.into(), CoinVector::from_real(&[0.6, 0.0, 0.8, 0.0]))],
    )
    .unwrap();
    let (w3, s3) = restrict_to_three_coin(&w4, &s4).unwrap();
    walks.push(("lazy/3coin".into(), w3, s3));
    let mut worst: f64 = 0.0;
    for (_, walk, psi0) in &walks {
        let n0 = psi0.norm();
        for psi in walk.trajectory(psi0, n).unwrap() {
            worst = worst.max((psi.norm() - n0).abs());
        }
    }
    outcome(
        worst < tol,
        format!(
            "{} walks, n = {n}: max norm drift {worst:.1e} (tol {tol:.1e})",
            walks.len()
        ),
    )
}

fn main() {
    let suites: [(&str, fn() -> Outcome); 8] = [
        ("commutation", commutation_suite),
        ("trapped states", trapped_suite),
        ("twisted circle", twisted_circle),
        ("reconstruction", reconstruction_suite),
        ("engine equivalence", engine_suite),
        ("consistency check", consistency_suite),
        ("null projection", pathology_suite),
        ("unitarity", unitarity_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in suites.iter().enumerate() {
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{name}] {tag}: {}", i + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
