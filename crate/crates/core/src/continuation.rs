//! Branch tracing in parameter space.
//!
//! Zero trajectories `k(ℓ)` or `k(γ)` use a secant predictor and Newton on
//! the complex equation `F = 0`. Singularity curves use the two real
//! equations in `(k, γ)` or `(k, ℓ)`, falling back to pseudo-arclength in
//! `(k, γ, ℓ)` at folds.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Module, Result};
use crate::model::{eval_df_dell, eval_f, ModelParams};
use crate::singularities::{polish_point, real_system_normalized, threshold_seeds, SingularityPoint};

/// Residual bound every branch point satisfies on re-evaluation.
pub const TRACE_TOL: f64 = 1e-9;
/// Relative distance a seed may move while being corrected onto a zero.
const SEED_RADIUS: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    Ell,
    Gamma,
}

impl Drive {
    fn of(self, p: ModelParams) -> f64 {
        match self {
            Drive::Ell => p.ell,
            Drive::Gamma => p.gamma,
        }
    }

    fn with(self, p: ModelParams, v: f64) -> Result<ModelParams> {
        match self {
            Drive::Ell => ModelParams::new(p.gamma, v),
            Drive::Gamma => ModelParams::new(v, p.ell),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchKind {
    SingularityCurve,
    ZeroTrajectory,
    ThresholdCurve,
}

impl BranchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchKind::SingularityCurve => "singularity_curve",
            BranchKind::ZeroTrajectory => "zero_trajectory",
            BranchKind::ThresholdCurve => "threshold_curve",
        }
    }
}

/// Seed index and periodicity shift a branch was started from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Origin {
    pub seed_id: Option<usize>,
    pub shift: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    pub params: ModelParams,
    pub k: Complex64,
    /// Smaller of `|F| / term size` and `|F/F'| / max(1, |k|)`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BranchFlags {
    /// Corrector failed at the minimal step.
    pub stalled: bool,
    /// Another tracked zero came within `10 tol`.
    pub collision: bool,
    /// Switched to pseudo-arclength at a fold.
    pub fold: bool,
    /// Left the parameter domain (`γ ≤ 0`, `ℓ < 0` or `k ≤ 0`).
    pub left_domain: bool,
}

impl BranchFlags {
    pub fn labels(&self) -> String {
        let mut v = Vec::new();
        if self.stalled {
            v.push("stalled");
        }
        if self.collision {
            v.push("collision");
        }
        if self.fold {
            v.push("fold");
        }
        if self.left_domain {
            v.push("left_domain");
        }
        v.join("|")
    }
}

/// Sign change of `Im k` along a zero trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingEvent {
    /// Value of the driven parameter at the crossing.
    pub param: f64,
    pub k: Complex64,
    /// `Im k` goes from positive to negative.
    pub downward: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub points: Vec<BranchPoint>,
    pub kind: BranchKind,
    pub drive: Drive,
    pub origin: Origin,
    pub flags: BranchFlags,
    pub events: Vec<CrossingEvent>,
}

impl Branch {
    fn new(kind: BranchKind, drive: Drive, origin: Origin) -> Self {
        Branch {
            points: Vec::new(),
            kind,
            drive,
            origin,
            flags: BranchFlags::default(),
            events: Vec::new(),
        }
    }

    /// Linear interpolation of `(k, other parameter)` at driven value `p`,
    /// on the first segment that brackets `p`.
    pub fn interpolate(&self, p: f64) -> Option<(Complex64, ModelParams)> {
        let d = self.drive;
        self.points.windows(2).find_map(|w| {
            let (a, b) = (d.of(w[0].params), d.of(w[1].params));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if p < lo || p > hi || a == b {
                return None;
            }
            let t = (p - a) / (b - a);
            let k = w[0].k + (w[1].k - w[0].k) * t;
            let gamma = w[0].params.gamma + (w[1].params.gamma - w[0].params.gamma) * t;
            let ell = w[0].params.ell + (w[1].params.ell - w[0].params.ell) * t;
            Some((k, ModelParams { gamma, ell }))
        })
    }

    /// Every `γ` at which the curve meets the line `ℓ = ell`.
    pub fn gammas_at_ell(&self, ell: f64) -> Vec<f64> {
        self.points
            .windows(2)
            .filter_map(|w| {
                let (a, b) = (w[0].params.ell, w[1].params.ell);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                if ell < lo || ell > hi || a == b {
                    return None;
                }
                let t = (ell - a) / (b - a);
                Some(w[0].params.gamma + (w[1].params.gamma - w[0].params.gamma) * t)
            })
            .collect()
    }
}

struct StepControl {
    h: f64,
    cap: f64,
    min: f64,
    successes: usize,
}

impl StepControl {
    fn new(span: f64, step: f64) -> Self {
        let cap = span / 50.0;
        let h = if step > 0.0 { step.min(cap) } else { span / 200.0 };
        StepControl {
            h,
            cap,
            min: span * 1e-9,
            successes: 0,
        }
    }

    fn accept(&mut self) {
        self.successes += 1;
        if self.successes >= 5 {
            self.h = (2.0 * self.h).min(self.cap);
            self.successes = 0;
        }
    }

    /// Halve the step; false once it is below the minimum.
    fn reject(&mut self) -> bool {
        self.successes = 0;
        self.h *= 0.5;
        self.h >= self.min
    }
}

fn check_range(range: (f64, f64), step: f64) -> Result<()> {
    if !range.0.is_finite() || !range.1.is_finite() || range.0 == range.1 || !step.is_finite() || step < 0.0 {
        return Err(Error::domain(
            Module::Continuation,
            format!("range must be a finite non-empty interval and step non-negative, got {range:?}, {step}"),
        ));
    }
    Ok(())
}

/// `∂F/∂p` at `k` in the scale of `eval_f(k, params)`.
fn dparam(k: Complex64, params: ModelParams, drive: Drive) -> Result<Complex64> {
    match drive {
        Drive::Ell => eval_df_dell(k, params),
        Drive::Gamma => {
            let base = eval_f(k, params)?;
            let h = 1e-6 * params.gamma.max(1.0);
            let lo = (params.gamma - h).max(0.0);
            let hi = params.gamma + h;
            let fp = eval_f(k, ModelParams { gamma: hi, ..params })?.rescaled(base.log_scale);
            let fm = eval_f(k, ModelParams { gamma: lo, ..params })?.rescaled(base.log_scale);
            Ok((fp.f - fm.f) / (hi - lo))
        }
    }
}

fn point_residual(k: Complex64, params: ModelParams) -> Option<f64> {
    let v = eval_f(k, params).ok()?;
    if v.f.norm() == 0.0 {
        return Some(0.0);
    }
    Some(v.relative_residual().min(v.newton_step().norm() / k.norm().max(1.0)))
}

/// Newton on `F(·, params) = 0`; returns the root and its residual.
fn correct_zero(start: Complex64, params: ModelParams) -> Option<(Complex64, f64)> {
    let mut k = start;
    for _ in 0..30 {
        let v = eval_f(k, params).ok()?;
        if v.f.norm() == 0.0 {
            return Some((k, 0.0));
        }
        let step = v.newton_step();
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        k -= step;
        if step.norm() <= 1e-14 * k.norm().max(1e-3) {
            let r = point_residual(k, params)?;
            return (r <= TRACE_TOL).then_some((k, r));
        }
    }
    None
}

/// Follow a zero of `F` from `seed_k` at `params` while the driven
/// parameter runs from `range.0` to `range.1`.
pub fn trace_zero(seed_k: Complex64, params: ModelParams, drive: Drive, range: (f64, f64), step: f64) -> Result<Branch> {
    check_range(range, step)?;
    trace_zero_from(seed_k, drive.with(params, range.0)?, drive, range, step, Origin::default())
}

fn trace_zero_from(
    seed_k: Complex64,
    params: ModelParams,
    drive: Drive,
    range: (f64, f64),
    step: f64,
    origin: Origin,
) -> Result<Branch> {
    let (k0, r0) = correct_zero(seed_k, params)
        .filter(|(k, _)| (k - seed_k).norm() <= SEED_RADIUS * seed_k.norm().max(1.0))
        .ok_or_else(|| Error::Convergence {
            module: Module::Continuation,
            msg: format!("seed {seed_k} is not a zero at gamma={}, ell={}", params.gamma, params.ell),
        })?;
    let dir = (range.1 - range.0).signum();
    let span = (range.1 - range.0).abs();
    let mut ctl = StepControl::new(span, step);
    let mut branch = Branch::new(BranchKind::ZeroTrajectory, drive, origin);
    branch.points.push(BranchPoint { params, k: k0, residual: r0 });
    let mut slope: Option<Complex64> = None;
    loop {
        let last = *branch.points.last().expect("seeded");
        let p = drive.of(last.params);
        if (range.1 - p) * dir <= 0.0 {
            break;
        }
        let h = ctl.h.min((range.1 - p).abs());
        let p_new = if h == (range.1 - p).abs() { range.1 } else { p + dir * h };
        let Ok(next_params) = drive.with(last.params, p_new) else {
            branch.flags.left_domain = true;
            break;
        };
        let dkdp = match slope {
            Some(s) => s,
            None => {
                let v = eval_f(last.k, last.params)?;
                -dparam(last.k, last.params, drive)? / v.df
            }
        };
        let delta = p_new - p;
        let pred = last.k + dkdp * delta;
        let accepted = correct_zero(pred, next_params).filter(|(k, _)| {
            // reject a jump onto a neighbouring zero
            (k - pred).norm() <= 0.3 * (pred - last.k).norm() + 1e-9 * k.norm().max(1.0)
        });
        match accepted {
            Some((k, residual)) => {
                slope = Some((k - last.k) / delta);
                let point = BranchPoint { params: next_params, k, residual };
                if let Some(ev) = crossing(&last, &point, drive) {
                    branch.events.push(ev);
                }
                branch.points.push(point);
                ctl.accept();
            }
            None => {
                if !ctl.reject() {
                    branch.flags.stalled = true;
                    break;
                }
            }
        }
    }
    Ok(branch)
}

/// Locate where `Im k` changes sign between two consecutive points.
fn crossing(a: &BranchPoint, b: &BranchPoint, drive: Drive) -> Option<CrossingEvent> {
    if (a.k.im > 0.0) == (b.k.im > 0.0) {
        return None;
    }
    let downward = a.k.im > 0.0;
    let (mut pa, mut ka) = (drive.of(a.params), a.k);
    let (mut pb, mut kb) = (drive.of(b.params), b.k);
    let mut best = if a.k.im.abs() < b.k.im.abs() { (pa, ka) } else { (pb, kb) };
    for _ in 0..40 {
        if kb.im == ka.im {
            break;
        }
        let t = (ka.im / (ka.im - kb.im)).clamp(0.05, 0.95);
        let p = pa + (pb - pa) * t;
        let guess = ka + (kb - ka) * t;
        let Some((k, _)) = drive.with(a.params, p).ok().and_then(|q| correct_zero(guess, q)) else { break };
        best = (p, k);
        if k.im.abs() <= 1e-13 * k.norm().max(1.0) {
            break;
        }
        if (k.im > 0.0) == (ka.im > 0.0) {
            pa = p;
            ka = k;
        } else {
            pb = p;
            kb = k;
        }
    }
    Some(CrossingEvent { param: best.0, k: best.1, downward })
}

/// Trace several zeros at the same parameters and flag collisions.
pub fn trace_zeros(seeds: &[Complex64], params: ModelParams, drive: Drive, range: (f64, f64), step: f64) -> Result<Vec<Branch>> {
    check_range(range, step)?;
    let start = drive.with(params, range.0)?;
    let mut branches = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &k)| {
            trace_zero_from(k, start, drive, range, step, Origin { seed_id: Some(i), shift: 0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = branches.len();
    for i in 0..n {
        for j in i + 1..n {
            if collide(&branches[i], &branches[j]) {
                branches[i].flags.collision = true;
                branches[j].flags.collision = true;
            }
        }
    }
    Ok(branches)
}

fn collide(a: &Branch, b: &Branch) -> bool {
    a.points.iter().any(|pt| {
        b.interpolate(a.drive.of(pt.params))
            .is_some_and(|(k, _)| (k - pt.k).norm() < 10.0 * TRACE_TOL * pt.k.norm().max(1.0))
    })
}

/// State `(k, γ, ℓ)` on a singularity curve.
type State = [f64; 3];

fn residual(x: State) -> Option<[f64; 2]> {
    real_system_normalized(x[0], x[1], x[2]).ok().filter(|r| r[0].is_finite() && r[1].is_finite())
}

/// Central-difference Jacobian of the normalized real system, 2 × 3.
fn jacobian(x: State) -> Option<[[f64; 3]; 2]> {
    let mut j = [[0.0; 3]; 2];
    for c in 0..3 {
        let h = 1e-7 * x[c].abs().max(1e-2);
        let (mut xp, mut xm) = (x, x);
        xp[c] += h;
        xm[c] -= h;
        let (fp, fm) = (residual(xp)?, residual(xm)?);
        for r in 0..2 {
            j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    Some(j)
}

/// Index of the driven coordinate in a [`State`].
fn slot(drive: Drive) -> usize {
    match drive {
        Drive::Gamma => 1,
        Drive::Ell => 2,
    }
}

fn in_domain(x: State) -> bool {
    x[0] > 0.0 && x[1] > 0.0 && x[2] >= 0.0
}

/// Stop test for the real-system correctors. Near `u → 1` one equation has
/// a weak gradient and the step stagnates above the rounding level, so a
/// small residual alone also ends the iteration.
fn converged(x: State, step: f64) -> Option<bool> {
    let r = residual(x)?;
    let size = r[0].abs() + r[1].abs();
    Some(size < 1e-13 || (step <= 1e-12 * norm(x).max(1.0) && size < 1e-11))
}

/// Newton in `(k, other)` with the driven coordinate held fixed.
fn correct_natural(mut x: State, drive: Drive) -> Option<State> {
    let free = match drive {
        Drive::Ell => [0, 1],
        Drive::Gamma => [0, 2],
    };
    for _ in 0..25 {
        let f = residual(x)?;
        let j = jacobian(x)?;
        let a = [[j[0][free[0]], j[0][free[1]]], [j[1][free[0]], j[1][free[1]]]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let d0 = (f[0] * a[1][1] - f[1] * a[0][1]) / det;
        let d1 = (a[0][0] * f[1] - a[1][0] * f[0]) / det;
        x[free[0]] -= d0;
        x[free[1]] -= d1;
        if !in_domain(x) {
            return None;
        }
        if converged(x, (d0 * d0 + d1 * d1).sqrt())? {
            return Some(x);
        }
    }
    None
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Unit tangent of the curve at `x`, oriented along `prev`.
fn tangent(x: State, prev: [f64; 3]) -> Option<[f64; 3]> {
    let j = jacobian(x)?;
    let t = cross(j[0], j[1]);
    let n = norm(t);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    let s = if dot(t, prev) < 0.0 { -1.0 / n } else { 1.0 / n };
    Some([t[0] * s, t[1] * s, t[2] * s])
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = dot(a[0], cross(a[1], a[2]));
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let col = |c: usize| -> [[f64; 3]; 3] {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        m
    };
    let d = |m: [[f64; 3]; 3]| dot(m[0], cross(m[1], m[2]));
    Some([d(col(0)) / det, d(col(1)) / det, d(col(2)) / det])
}

/// Newton on the bordered system `R(x) = 0`, `t · (x − pred) = 0`.
fn correct_arclength(pred: State, t: [f64; 3]) -> Option<State> {
    let mut x = pred;
    for _ in 0..25 {
        let f = residual(x)?;
        let j = jacobian(x)?;
        let g = dot(t, [x[0] - pred[0], x[1] - pred[1], x[2] - pred[2]]);
        let d = solve3([j[0], j[1], t], [f[0], f[1], g])?;
        for c in 0..3 {
            x[c] -= d[c];
        }
        if !in_domain(x) {
            return None;
        }
        if converged(x, norm(d))? {
            return Some(x);
        }
    }
    None
}

fn state_point(x: State) -> Option<BranchPoint> {
    let params = ModelParams::new(x[1], x[2]).ok()?;
    let k = Complex64::new(x[0], 0.0);
    let residual = point_residual(k, params)?;
    (residual <= TRACE_TOL).then_some(BranchPoint { params, k, residual })
}

/// Follow a spectral singularity while the driven parameter runs from the
/// seed's value toward `range.1`. `range.0` bounds the curve from the other
/// side once it folds back.
pub fn trace_singularity(seed: SingularityPoint, drive: Drive, range: (f64, f64), step: f64) -> Result<Branch> {
    check_range(range, step)?;
    trace_singularity_from(seed, drive, range, step, Origin::default())
}

fn trace_singularity_from(
    seed: SingularityPoint,
    drive: Drive,
    range: (f64, f64),
    step: f64,
    origin: Origin,
) -> Result<Branch> {
    let s = slot(drive);
    let x0 = correct_natural([seed.k, seed.gamma, seed.ell], drive).ok_or_else(|| Error::Convergence {
        module: Module::Continuation,
        msg: format!("seed k={}, gamma={}, ell={} is not on a singularity curve", seed.k, seed.gamma, seed.ell),
    })?;
    let mut branch = Branch::new(BranchKind::SingularityCurve, drive, origin);
    let first = state_point(x0).ok_or(Error::Accuracy { value: f64::NAN })?;
    branch.points.push(first);
    let dir = (range.1 - range.0).signum();
    let (lo, hi) = if range.0 <= range.1 { range } else { (range.1, range.0) };
    let span = hi - lo;
    let mut ctl = StepControl::new(span, step);
    let mut states = vec![x0];
    let mut arclength = false;
    let mut t_prev = {
        let mut t = [0.0; 3];
        t[s] = dir;
        t
    };
    let max_points = 20_000;
    while states.len() < max_points {
        let x = *states.last().expect("seeded");
        if !arclength && (range.1 - x[s]) * dir <= 0.0 {
            break;
        }
        let next = if arclength {
            let t = tangent(x, t_prev).unwrap_or(t_prev);
            let h = ctl.h;
            arclength_step(x, t, h)
        } else {
            let h = ctl.h.min((range.1 - x[s]).abs());
            let target = if h == (range.1 - x[s]).abs() { range.1 } else { x[s] + dir * h };
            let t = match tangent(x, t_prev) {
                Some(t) if t[s].abs() > 1e-3 => t,
                _ => {
                    arclength = true;
                    branch.flags.fold = true;
                    continue;
                }
            };
            let scale = (target - x[s]) / t[s];
            let mut pred = [x[0] + scale * t[0], x[1] + scale * t[1], x[2] + scale * t[2]];
            pred[s] = target;
            correct_natural(pred, drive)
                .filter(|y| dist(*y, pred) <= 0.3 * scale.abs() + 1e-9)
                .map(|y| (y, t))
        };
        // a rank drop where two curves cross stalls the step control
        let next = next.or_else(|| {
            (arclength && ctl.h < 1e-6 * span).then(|| step_over(x, t_prev, span)).flatten()
        });
        match next.and_then(|(y, t)| state_point(y).map(|p| (y, t, p))) {
            Some((y, t, p)) => {
                if arclength && (y[s] < lo || y[s] > hi) {
                    let edge = if y[s] < lo { lo } else { hi };
                    if let Some(z) = land(x, y, s, edge, drive).and_then(state_point) {
                        branch.points.push(z);
                    }
                    break;
                }
                t_prev = t;
                states.push(y);
                branch.points.push(p);
                ctl.accept();
            }
            None => {
                if arclength {
                    let h = ctl.h;
                    let ahead = [x[0] + h * t_prev[0], x[1] + h * t_prev[1], x[2] + h * t_prev[2]];
                    if !in_domain(ahead) {
                        branch.flags.left_domain = true;
                        break;
                    }
                }
                if !ctl.reject() {
                    if arclength {
                        branch.flags.stalled = true;
                        break;
                    }
                    arclength = true;
                    branch.flags.fold = true;
                    ctl = StepControl::new(span, step);
                }
            }
        }
    }
    if states.len() >= max_points {
        branch.flags.stalled = true;
    }
    Ok(branch)
}

fn dist(a: State, b: State) -> f64 {
    norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

fn arclength_step(x: State, t: [f64; 3], h: f64) -> Option<(State, [f64; 3])> {
    let pred = [x[0] + h * t[0], x[1] + h * t[1], x[2] + h * t[2]];
    correct_arclength(pred, t).filter(|y| dist(*y, pred) <= 0.3 * h).map(|y| (y, t))
}

/// Jump past a singular point along the incoming tangent.
fn step_over(x: State, t: [f64; 3], span: f64) -> Option<(State, [f64; 3])> {
    [1e-4, 1e-3, 1e-2].iter().find_map(|f| {
        let (y, _) = arclength_step(x, t, f * span)?;
        let t_new = tangent(y, t)?;
        (dot(t_new, t) > 0.5).then_some((y, t_new))
    })
}

/// Point where the segment `x → y` crosses `coordinate s = edge`, corrected
/// onto the curve.
fn land(x: State, y: State, s: usize, edge: f64, drive: Drive) -> Option<State> {
    let t = (edge - x[s]) / (y[s] - x[s]);
    let mut pred = [x[0] + t * (y[0] - x[0]), x[1] + t * (y[1] - x[1]), x[2] + t * (y[2] - x[2])];
    pred[s] = edge;
    correct_natural(pred, drive).filter(|z| z[s] == edge)
}

/// Sample `γ⋆(ℓ)` along the threshold curve on `ell = range.0, range.0 + step, …`.
///
/// The curve starts at the lowest spectral singularity at `ℓ = 0`.
pub fn threshold(range: (f64, f64), step: f64) -> Result<Branch> {
    check_range(range, step)?;
    if !(step > 0.0) || range.0 < 0.0 || range.1 < range.0 {
        return Err(Error::domain(Module::Continuation, "threshold needs 0 ≤ a < b and step > 0"));
    }
    let seed = threshold_seed()?;
    let traced = trace_singularity_from(seed, Drive::Ell, (0.0, range.1), 0.0, Origin { seed_id: Some(0), shift: 0 })?;
    let mut out = Branch::new(BranchKind::ThresholdCurve, Drive::Ell, traced.origin);
    out.flags = traced.flags;
    let count = ((range.1 - range.0) / step + 1e-9).floor() as usize;
    for i in 0..=count {
        let ell = range.0 + step * i as f64;
        let Some((k, p)) = traced.interpolate(ell) else {
            out.flags.stalled = true;
            break;
        };
        let (k, gamma) = polish_point(k.re, p.gamma, ell)?;
        let point = state_point([k, gamma, ell]).ok_or(Error::Accuracy { value: f64::NAN })?;
        out.points.push(point);
    }
    Ok(out)
}

/// The lowest spectral singularity at `ℓ = 0`.
pub fn threshold_seed() -> Result<SingularityPoint> {
    threshold_seeds(2.0)?.into_iter().next().ok_or_else(|| Error::Convergence {
        module: Module::Continuation,
        msg: "no threshold seed found".into(),
    })
}

/// Pair of branches meeting in the `(ℓ, γ)` plane at distinct `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Intersection {
    pub branch_a: usize,
    pub branch_b: usize,
    pub ell: f64,
    pub gamma: f64,
    pub k_a: f64,
    pub k_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atlas {
    pub seeds: Vec<SingularityPoint>,
    pub branches: Vec<Branch>,
    pub intersections: Vec<Intersection>,
}

/// Singularity curves from the `ℓ = 0` seeds with `γ ≤ gamma_max` and their
/// shifts `ℓ_n = nπ/(2k) ≤ ell_max`, each traced both ways in `ℓ`.
pub fn atlas(gamma_max: f64, ell_max: f64) -> Result<Atlas> {
    if !(gamma_max > 0.0) || !(ell_max > 0.0) || !gamma_max.is_finite() || !ell_max.is_finite() {
        return Err(Error::domain(Module::Continuation, "atlas bounds must be positive"));
    }
    let seeds: Vec<SingularityPoint> = threshold_seeds(k_bound(gamma_max))?
        .into_iter()
        .filter(|s| s.gamma <= gamma_max)
        .collect();
    let mut jobs = Vec::new();
    for (id, s) in seeds.iter().enumerate() {
        let period = PI / (2.0 * s.k);
        let mut n = 0;
        while n as f64 * period <= ell_max {
            jobs.push((id, n, SingularityPoint { ell: n as f64 * period, n, ..*s }));
            n += 1;
        }
    }
    let traced: Vec<Branch> = jobs
        .par_iter()
        .filter_map(|&(id, n, seed)| {
            let origin = Origin { seed_id: Some(id), shift: n };
            let fwd = trace_singularity_from(seed, Drive::Ell, (0.0, ell_max), 0.0, origin).ok()?;
            let back = if seed.ell > 0.0 {
                trace_singularity_from(seed, Drive::Ell, (ell_max, 0.0), 0.0, origin).ok()
            } else {
                None
            };
            Some(join(back, fwd))
        })
        .collect();
    let mut branches: Vec<Branch> = Vec::new();
    for b in traced {
        if !branches.iter().any(|a| overlaps(&b, a)) {
            branches.push(b);
        }
    }
    let intersections = intersections(&branches);
    Ok(Atlas { seeds, branches, intersections })
}

/// Seeds with `γ ≤ gamma_max` have `k` below `2√γ + 1`.
fn k_bound(gamma_max: f64) -> f64 {
    2.0 * gamma_max.sqrt() + 1.0
}

fn join(back: Option<Branch>, fwd: Branch) -> Branch {
    let Some(mut back) = back else { return fwd };
    back.points.reverse();
    back.points.extend(fwd.points.into_iter().skip(1));
    back.flags.stalled |= fwd.flags.stalled;
    back.flags.fold |= fwd.flags.fold;
    back.flags.left_domain |= fwd.flags.left_domain;
    back
}

/// Most of `b` lies on `a`.
fn overlaps(b: &Branch, a: &Branch) -> bool {
    let near = b
        .points
        .iter()
        .filter(|p| {
            a.points.windows(2).any(|w| {
                segment_distance(
                    [p.params.ell, p.params.gamma, p.k.re],
                    [w[0].params.ell, w[0].params.gamma, w[0].k.re],
                    [w[1].params.ell, w[1].params.gamma, w[1].k.re],
                ) <= 1e-6 * (1.0 + p.params.gamma)
            })
        })
        .count();
    near as f64 >= 0.8 * b.points.len() as f64
}

fn segment_distance(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let ap = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let l2 = dot(ab, ab);
    let t = if l2 > 0.0 { (dot(ap, ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    norm([ap[0] - t * ab[0], ap[1] - t * ab[1], ap[2] - t * ab[2]])
}

fn intersections(branches: &[Branch]) -> Vec<Intersection> {
    let mut out = Vec::new();
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            for wa in branches[i].points.windows(2) {
                for wb in branches[j].points.windows(2) {
                    if let Some(x) = meet(wa, wb) {
                        out.push(Intersection { branch_a: i, branch_b: j, ..x });
                    }
                }
            }
        }
    }
    out
}

fn meet(a: &[BranchPoint], b: &[BranchPoint]) -> Option<Intersection> {
    let p = [a[0].params.ell, a[0].params.gamma];
    let r = [a[1].params.ell - p[0], a[1].params.gamma - p[1]];
    let q = [b[0].params.ell, b[0].params.gamma];
    let s = [b[1].params.ell - q[0], b[1].params.gamma - q[1]];
    let den = r[0] * s[1] - r[1] * s[0];
    if den == 0.0 {
        return None;
    }
    let qp = [q[0] - p[0], q[1] - p[1]];
    let t = (qp[0] * s[1] - qp[1] * s[0]) / den;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / den;
    if !(0.0..1.0).contains(&t) || !(0.0..1.0).contains(&u) {
        return None;
    }
    let k_a = a[0].k.re + t * (a[1].k.re - a[0].k.re);
    let k_b = b[0].k.re + u * (b[1].k.re - b[0].k.re);
    if (k_a - k_b).abs() <= 1e-6 * k_a.max(1.0) {
        return None;
    }
    Some(Intersection {
        branch_a: 0,
        branch_b: 0,
        ell: p[0] + t * r[0],
        gamma: p[1] + t * r[1],
        k_a,
        k_b,
    })
}
