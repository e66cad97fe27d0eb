mod common;

use mcurve::geom::wrap_angle;
use mcurve::hermite::{default_lambda_grid, drawable_region, fit_g1, FittedSegment, HermiteProblem, DEFAULT_FIT_TOL};
use mcurve::Error;

fn check_round_trip(p: &HermiteProblem, seg: &FittedSegment) {
    let c = seg.sample(64).unwrap();
    let (first, last) = (c.samples[0], *c.samples.last().unwrap());
    let chord = p.chord()[0].hypot(p.chord()[1]);
    let e0 = (first.x - p.p_start[0]).hypot(first.y - p.p_start[1]);
    let e1 = (last.x - p.p_end[0]).hypot(last.y - p.p_end[1]);
    assert!(e0 <= 1e-8 * chord && e1 <= 1e-8 * chord, "endpoint errors {e0} {e1} chord {chord}");
    let a0 = p.t_start[1].atan2(p.t_start[0]);
    let a1 = p.t_end[1].atan2(p.t_end[0]);
    assert!(wrap_angle(first.theta - a0).abs() < 1e-8);
    assert!(wrap_angle(last.theta - a1).abs() < 1e-8);
}

#[test]
fn random_problems_round_trip() {
    let mut rng = common::rng(5);
    for alpha in [0.0, 0.5, 1.0, 2.0, -1.0, 10.0] {
        for _ in 0..12 {
            let p = common::in_region_problem(&mut rng, alpha);
            let seg = fit_g1(&p, DEFAULT_FIT_TOL).unwrap_or_else(|e| panic!("{p:?}: {e}"));
            assert!(seg.residual < 1e-8);
            check_round_trip(&p, &seg);
        }
    }
}

fn scaled(p: &HermiteProblem, c: f64) -> HermiteProblem {
    HermiteProblem {
        p_start: [c * p.p_start[0], c * p.p_start[1]],
        p_end: [c * p.p_end[0], c * p.p_end[1]],
        ..*p
    }
}

#[test]
fn similarity_invariance() {
    let mut rng = common::rng(6);
    for alpha in [0.25, 1.0, 2.0] {
        for _ in 0..5 {
            let p = common::in_region_problem(&mut rng, alpha);
            let base = fit_g1(&p, DEFAULT_FIT_TOL).unwrap();
            for c in [0.01, 1.0, 100.0] {
                let seg = fit_g1(&scaled(&p, c), DEFAULT_FIT_TOL).unwrap();
                assert!((seg.lambda() - base.lambda()).abs() <= 1e-9 * base.lambda());
                assert!((seg.s_total - base.s_total).abs() <= 1e-9 * base.s_total);
                let wl = seg.world_lambda() * c;
                assert!((wl - base.world_lambda()).abs() <= 1e-9 * base.world_lambda());
            }
        }
    }
}

#[test]
fn mirror_symmetry() {
    let mut rng = common::rng(7);
    for _ in 0..10 {
        let p = common::in_region_problem(&mut rng, 0.5);
        let m = HermiteProblem::new(
            [p.p_start[0], -p.p_start[1]],
            [p.p_end[0], -p.p_end[1]],
            [p.t_start[0], -p.t_start[1]],
            [p.t_end[0], -p.t_end[1]],
            p.alpha,
        );
        let (a, b) = (fit_g1(&p, DEFAULT_FIT_TOL).unwrap(), fit_g1(&m, DEFAULT_FIT_TOL).unwrap());
        assert!((a.lambda() - b.lambda()).abs() <= 1e-9 * a.lambda());
        let (ca, cb) = (a.sample(20).unwrap(), b.sample(20).unwrap());
        for (u, v) in ca.samples.iter().zip(&cb.samples) {
            assert!((u.x - v.x).abs() < 1e-9 && (u.y + v.y).abs() < 1e-9);
            assert!((u.kappa + v.kappa).abs() < 1e-9 * u.kappa.abs().max(1.0));
        }
    }
}

#[test]
fn limited_regions_reject_outside_chords() {
    for alpha in [-1.0, 0.0, 2.0] {
        let delta = 1.5;
        let region = drawable_region(alpha, delta, &default_lambda_grid(alpha, delta)).unwrap();
        assert!(region.psi_max < delta);
        let psi = 0.5 * (region.psi_max + delta);
        let p = HermiteProblem::from_angles([0.0, 0.0], [psi.cos(), psi.sin()], 0.0, delta, alpha);
        match fit_g1(&p, DEFAULT_FIT_TOL) {
            Err(Error::NoSolution { psi_max, .. }) => assert_eq!(psi_max, region.psi_max),
            other => panic!("alpha {alpha}: expected NoSolution, got {other:?}"),
        }
    }
}
