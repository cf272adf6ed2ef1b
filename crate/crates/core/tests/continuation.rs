mod common;

use std::f64::consts::PI;

use common::c64;
use num_complex::Complex64;
use ptwave_core::continuation::{
    atlas, threshold, threshold_seed, trace_singularity, trace_zero, trace_zeros, Branch, BranchKind, Drive, TRACE_TOL,
};
use ptwave_core::model::eval_f;
use ptwave_core::singularities::{polish_point, real_system_normalized};
use ptwave_core::zerofinder::{find_zeros, SearchRegion};
use ptwave_core::ModelParams;

fn p(gamma: f64, ell: f64) -> ModelParams {
    ModelParams::new(gamma, ell).unwrap()
}

fn seeds(gamma: f64, region: SearchRegion) -> Vec<Complex64> {
    find_zeros(region, p(gamma, 0.0), 1e-12).unwrap().into_iter().map(|z| z.k).collect()
}

fn reverify(b: &Branch) {
    for pt in &b.points {
        let v = eval_f(pt.k, pt.params).unwrap();
        let step = v.newton_step().norm() / pt.k.norm().max(1.0);
        let res = v.relative_residual().min(step);
        assert!(res <= TRACE_TOL, "{:?} at {pt:?}: residual {res:e}", b.kind);
    }
}

#[test]
fn gamma_three_trajectories_cross_once_downward() {
    let s = seeds(3.0, SearchRegion::new(2.0, 6.5, 1.0, 2.5).unwrap());
    assert_eq!(s.len(), 3, "{s:?}");
    let branches = trace_zeros(&s, p(3.0, 0.0), Drive::Ell, (0.0, 10.0), 0.0).unwrap();
    for b in &branches {
        reverify(b);
        assert!(!b.flags.stalled && !b.flags.collision);
        assert_eq!(b.events.len(), 1, "{:?}", b.events);
        let e = b.events[0];
        assert!(e.downward);
        assert!((e.k.re - 1.20119).abs() < 1e-4, "{e:?}");
        assert!(b.points.last().unwrap().k.im < 0.0);
    }
    // crossings one quarter-period apart
    let mut ells: Vec<f64> = branches.iter().map(|b| b.events[0].param).collect();
    ells.sort_by(f64::total_cmp);
    for w in ells.windows(2) {
        assert!((w[1] - w[0] - PI / (2.0 * 1.20119)).abs() < 1e-3);
    }
}

#[test]
fn crossings_lie_on_atlas_curves() {
    let s = seeds(3.0, SearchRegion::new(2.0, 6.5, 1.0, 2.5).unwrap());
    let branches = trace_zeros(&s, p(3.0, 0.0), Drive::Ell, (0.0, 10.0), 0.0).unwrap();
    let at = atlas(15.0, 20.0).unwrap();
    for b in &branches {
        let e = b.events[0];
        // within the atlas step, then exactly after polishing at the event
        let hit = at
            .branches
            .iter()
            .flat_map(|c| c.gammas_at_ell(e.param))
            .filter(|g| (g - 3.0).abs() < 1e-2)
            .any(|g| {
                let (k, g) = polish_point(e.k.re, g, e.param).unwrap();
                (g - 3.0).abs() < 1e-7 && (k - e.k.re).abs() < 1e-7
            });
        assert!(hit, "no singularity curve meets gamma = 3 at ell = {}", e.param);
    }
    for c in &at.branches {
        assert_eq!(c.kind, BranchKind::SingularityCurve);
        assert!(!c.flags.stalled);
        for pt in &c.points {
            let [a, b] = real_system_normalized(pt.k.re, pt.params.gamma, pt.params.ell).unwrap();
            assert!(a.hypot(b) <= TRACE_TOL, "{pt:?}");
        }
    }
}

#[test]
fn gamma_sixteen_trajectories_return_upward() {
    let s = seeds(16.0, SearchRegion::new(3.5, 8.0, -0.5, 2.5).unwrap());
    assert_eq!(s.len(), 4, "{s:?}");
    let branches = trace_zeros(&s, p(16.0, 0.0), Drive::Ell, (0.0, 10.0), 0.0).unwrap();
    let mut ups = 0;
    for b in &branches {
        reverify(b);
        let tail = &b.points[b.points.len() * 4 / 5..];
        assert!(tail.iter().all(|pt| pt.k.im > 0.0));
        ups += b.events.iter().filter(|e| !e.downward).count();
    }
    assert!(ups >= 1);
}

#[test]
fn driving_gamma_flips_a_ladder_zero() {
    // near ell = 50 the ladder sits below the axis for gamma = 40, above for 50
    let s = find_zeros(SearchRegion::around(c64(3.0 * PI / 100.0, 0.0), 0.01).unwrap(), p(40.0, 50.0), 1e-14).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].k.im < 0.0);
    let b = trace_zero(s[0].k, p(40.0, 50.0), Drive::Gamma, (40.0, 50.0), 0.0).unwrap();
    reverify(&b);
    assert!(b.points.last().unwrap().k.im > 0.0);
    assert_eq!(b.events.len(), 1);
    assert!(!b.events[0].downward);
    assert!((b.events[0].param - 4.5 * PI * PI).abs() < 0.05, "{:?}", b.events);
}

#[test]
fn threshold_curve_decreases() {
    let b = threshold((0.0, 3.0), 0.05).unwrap();
    assert_eq!(b.kind, BranchKind::ThresholdCurve);
    assert_eq!(b.points.len(), 61);
    assert!((b.points[0].params.gamma - 2.072).abs() < 5e-3);
    for w in b.points.windows(2) {
        assert!(w[1].params.gamma < w[0].params.gamma);
    }
    let seed = threshold_seed().unwrap();
    assert_eq!(seed.ell, 0.0);
    let down = trace_singularity(seed, Drive::Ell, (0.0, 1.0), 0.0).unwrap();
    assert!(down.points.last().unwrap().params.gamma < seed.gamma);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(trace_zero(c64(1.0, 1.0), p(3.0, 0.0), Drive::Ell, (0.0, 1.0), 0.0).is_err());
    assert!(trace_zero(c64(1.0, 1.0), p(3.0, 0.0), Drive::Ell, (0.0, f64::NAN), 0.0).is_err());
    assert!(trace_zero(c64(1.0, 1.0), p(3.0, 0.0), Drive::Ell, (0.0, 1.0), -0.1).is_err());
    assert!(threshold((1.0, 1.0), 0.05).is_err());
    assert!(atlas(-1.0, 5.0).is_err());
}
