//! Counting, locating and classifying zeros in bounded windows.
//!
//! Zeros are counted by tracking the phase of the function along the
//! contour with adaptive segment bisection, cross-checked against the
//! trapezoid integral of the logarithmic derivative. Windows are split into
//! four children until every cell holds at most one zero, which is then
//! polished by Newton iteration (Muller as fallback).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Module, Result};
use crate::model::{eval_f, eval_f_minus, eval_f_plus, FValue, ModelParams};

/// Axis-aligned rectangle in the complex `k` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub boundary_samples: usize,
    pub max_depth: usize,
}

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 128;
pub const DEFAULT_MAX_DEPTH: usize = 40;

impl SearchRegion {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        SearchRegion {
            re_min,
            re_max,
            im_min,
            im_max,
            boundary_samples: DEFAULT_BOUNDARY_SAMPLES,
            max_depth: DEFAULT_MAX_DEPTH,
        }
        .validated()
    }

    /// Square of half-width `half` around `center`.
    pub fn around(center: Complex64, half: f64) -> Result<Self> {
        Self::new(center.re - half, center.re + half, center.im - half, center.im + half)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        self.boundary_samples = samples;
        self.validated()
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    fn validated(self) -> Result<Self> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::domain(
                Module::Zerofinder,
                format!("degenerate region {self:?}"),
            ));
        }
        if self.boundary_samples < 64 {
            return Err(Error::domain(
                Module::Zerofinder,
                format!("boundary_samples must be at least 64, got {}", self.boundary_samples),
            ));
        }
        Ok(self)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn contains(&self, k: Complex64, slack: f64) -> bool {
        k.re >= self.re_min - slack
            && k.re <= self.re_max + slack
            && k.im >= self.im_min - slack
            && k.im <= self.im_max + slack
    }

    fn dilated(&self, attempt: usize) -> SearchRegion {
        const SHIFTS: [[f64; 4]; 5] = [
            [0.37, 0.61, 0.23, 0.89],
            [0.71, 0.13, 0.97, 0.41],
            [0.29, 0.83, 0.59, 0.17],
            [0.93, 0.47, 0.11, 0.67],
            [0.53, 0.31, 0.79, 0.07],
        ];
        let s = SHIFTS[attempt % SHIFTS.len()];
        let scale = 1e-4 * (attempt + 1) as f64 * self.diameter();
        SearchRegion {
            re_min: self.re_min - s[0] * scale,
            re_max: self.re_max + s[1] * scale,
            im_min: self.im_min - s[2] * scale,
            im_max: self.im_max + s[3] * scale,
            ..*self
        }
    }

    fn to_contour(self) -> Contour {
        Contour::Rect(self)
    }
}

/// Closed, positively oriented contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contour {
    Rect(SearchRegion),
    Disc {
        center: Complex64,
        radius: f64,
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line(Complex64, Complex64),
    Arc { center: Complex64, radius: f64, theta0: f64, theta1: f64 },
}

impl Piece {
    fn at(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Line(a, b) => a + (b - a) * s,
            Piece::Arc { center, radius, theta0, theta1 } => {
                center + Complex64::from_polar(radius, theta0 + (theta1 - theta0) * s)
            }
        }
    }
}

impl Contour {
    pub fn disc(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::domain(Module::Zerofinder, format!("bad disc radius {radius}")));
        }
        Ok(Contour::Disc {
            center,
            radius,
            samples: DEFAULT_BOUNDARY_SAMPLES,
        })
    }

    fn pieces(&self) -> Vec<(Piece, usize)> {
        match *self {
            Contour::Rect(r) => {
                let c = [
                    Complex64::new(r.re_min, r.im_min),
                    Complex64::new(r.re_max, r.im_min),
                    Complex64::new(r.re_max, r.im_max),
                    Complex64::new(r.re_min, r.im_max),
                ];
                let w = r.re_max - r.re_min;
                let h = r.im_max - r.im_min;
                let per = 2.0 * (w + h);
                let n = |len: f64| ((r.boundary_samples as f64 * len / per).ceil() as usize).max(4);
                vec![
                    (Piece::Line(c[0], c[1]), n(w)),
                    (Piece::Line(c[1], c[2]), n(h)),
                    (Piece::Line(c[2], c[3]), n(w)),
                    (Piece::Line(c[3], c[0]), n(h)),
                ]
            }
            Contour::Disc { center, radius, samples } => {
                let tau = std::f64::consts::TAU;
                vec![(
                    Piece::Arc {
                        center,
                        radius,
                        theta0: 0.0,
                        theta1: tau,
                    },
                    samples.max(64),
                )]
            }
        }
    }

    fn dilated(&self, attempt: usize) -> Contour {
        match *self {
            Contour::Rect(r) => Contour::Rect(r.dilated(attempt)),
            Contour::Disc { center, radius, samples } => {
                const SHIFTS: [f64; 5] = [0.37, 0.71, 0.29, 0.93, 0.53];
                let grow = 1e-4 * (attempt + 1) as f64 * SHIFTS[attempt % 5];
                Contour::Disc {
                    center,
                    radius: radius * (1.0 + grow),
                    samples,
                }
            }
        }
    }

    pub fn contains(&self, k: Complex64) -> bool {
        match *self {
            Contour::Rect(r) => r.contains(k, 0.0),
            Contour::Disc { center, radius, .. } => (k - center).norm() <= radius,
        }
    }
}

/// A function analytic in `k`, evaluated with its derivative.
pub trait AnalyticFunction: Sync {
    fn eval(&self, k: Complex64) -> Result<FValue>;
    fn source(&self) -> Source;
}

/// Which function a zero was found for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Full,
    FPlus,
    FMinus,
}

/// The full characteristic function at fixed parameters.
#[derive(Debug, Clone, Copy)]
pub struct FullModel(pub ModelParams);

impl AnalyticFunction for FullModel {
    fn eval(&self, k: Complex64) -> Result<FValue> {
        eval_f(k, self.0)
    }
    fn source(&self) -> Source {
        Source::Full
    }
}

/// One of the single-step factors.
#[derive(Debug, Clone, Copy)]
pub enum SingleStep {
    Plus(f64),
    Minus(f64),
}

impl AnalyticFunction for SingleStep {
    fn eval(&self, k: Complex64) -> Result<FValue> {
        match *self {
            SingleStep::Plus(g) => eval_f_plus(k, g),
            SingleStep::Minus(g) => eval_f_minus(k, g),
        }
    }
    fn source(&self) -> Source {
        match self {
            SingleStep::Plus(_) => Source::FPlus,
            SingleStep::Minus(_) => Source::FMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    TrivialOrigin,
    Resonance,
    Eigenvalue,
    SpectralSingularity,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::TrivialOrigin => "TrivialOrigin",
            Classification::Resonance => "Resonance",
            Classification::Eigenvalue => "Eigenvalue",
            Classification::SpectralSingularity => "SpectralSingularity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub k: Complex64,
    pub classification: Classification,
    pub multiplicity: usize,
    pub residual: f64,
    pub newton_iters: usize,
    /// Set for clusters that could not be separated and for zeros that no
    /// iteration managed to polish.
    pub unresolved: bool,
    pub source: Source,
}

/// Width of the band around the real axis treated as `Im k = 0`.
pub fn class_band(k: Complex64) -> f64 {
    1e-9 * k.norm().max(1.0)
}

/// Floor on `|F| / scale` along a contour; below it the contour is said to
/// pass through a zero.
const BOUNDARY_FLOOR: f64 = 1e-12;
const MAX_JITTERS: usize = 5;
const MAX_SEGMENT_DEPTH: usize = 48;
const MAX_PHASE_STEP: f64 = std::f64::consts::FRAC_PI_4;
const PHASE_MISMATCH: f64 = 0.2;

#[derive(Debug, Clone, Copy)]
struct Winding {
    count: i64,
    /// log of the largest `|F|` met along the contour
    log_max: f64,
}

fn log_abs(v: &FValue) -> f64 {
    v.f.norm().ln() + v.log_scale
}

fn near_zero(v: &FValue, length: f64) -> bool {
    if !(v.f.norm() > 0.0) || !v.f.re.is_finite() || !v.f.im.is_finite() {
        return true;
    }
    let step = v.newton_step().norm();
    v.relative_residual() < BOUNDARY_FLOOR || step < BOUNDARY_FLOOR * length
}

fn wind_once<F: AnalyticFunction + ?Sized>(fun: &F, contour: &Contour) -> Result<Winding> {
    let mut phase = 0.0;
    let mut trap = 0.0;
    let mut log_max = f64::NEG_INFINITY;
    for (piece, n) in contour.pieces() {
        let length = (piece.at(1.0) - piece.at(0.0)).norm().max(match piece {
            Piece::Arc { radius, .. } => radius,
            _ => 0.0,
        });
        let mut s_prev = 0.0;
        let mut v_prev = fun.eval(piece.at(0.0))?;
        if near_zero(&v_prev, length) {
            return Err(Error::Contour { jitters: 0 });
        }
        log_max = log_max.max(log_abs(&v_prev));
        for j in 1..=n {
            let s = j as f64 / n as f64;
            let v = fun.eval(piece.at(s))?;
            if near_zero(&v, length) {
                return Err(Error::Contour { jitters: 0 });
            }
            log_max = log_max.max(log_abs(&v));
            let (dp, dt) = segment(fun, &piece, length, s_prev, v_prev, s, v, 0, &mut log_max)?;
            phase += dp;
            trap += dt;
            s_prev = s;
            v_prev = v;
        }
    }
    let turns = phase / std::f64::consts::TAU;
    let count = turns.round();
    let by_integral = trap / std::f64::consts::TAU;
    if (by_integral - count).abs() > 0.25 {
        return Err(Error::Accuracy { value: by_integral });
    }
    Ok(Winding {
        count: count as i64,
        log_max,
    })
}

/// Phase change and trapezoid estimate of `Im ∫ F'/F` over one segment.
#[allow(clippy::too_many_arguments)]
fn segment<F: AnalyticFunction + ?Sized>(
    fun: &F,
    piece: &Piece,
    length: f64,
    sa: f64,
    va: FValue,
    sb: f64,
    vb: FValue,
    depth: usize,
    log_max: &mut f64,
) -> Result<(f64, f64)> {
    let a = piece.at(sa);
    let b = piece.at(sb);
    let dphase = (vb.f / va.f).arg();
    let trap = (0.5 * (va.log_derivative() + vb.log_derivative()) * (b - a)).im;
    if dphase.abs() <= MAX_PHASE_STEP && (trap - dphase).abs() <= PHASE_MISMATCH {
        return Ok((dphase, trap));
    }
    if depth >= MAX_SEGMENT_DEPTH {
        return Err(Error::Contour { jitters: 0 });
    }
    let sm = 0.5 * (sa + sb);
    let vm = fun.eval(piece.at(sm))?;
    if near_zero(&vm, length) {
        return Err(Error::Contour { jitters: 0 });
    }
    *log_max = log_max.max(log_abs(&vm));
    let (p1, t1) = segment(fun, piece, length, sa, va, sm, vm, depth + 1, log_max)?;
    let (p2, t2) = segment(fun, piece, length, sm, vm, sb, vb, depth + 1, log_max)?;
    Ok((p1 + p2, t1 + t2))
}

/// Winding number with up to five jitters of the contour; returns the
/// contour actually used.
fn wind<F: AnalyticFunction + ?Sized>(fun: &F, contour: &Contour) -> Result<(Winding, Contour)> {
    let mut current = *contour;
    for attempt in 0..=MAX_JITTERS {
        match wind_once(fun, &current) {
            Ok(w) => {
                if w.count < 0 {
                    return Err(Error::Accuracy { value: w.count as f64 });
                }
                return Ok((w, current));
            }
            Err(Error::Contour { .. }) if attempt < MAX_JITTERS => {
                current = contour.dilated(attempt);
            }
            Err(Error::Contour { .. }) => return Err(Error::Contour { jitters: MAX_JITTERS }),
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

/// Number of zeros of `F(·, ell, gamma)` inside `region`, with multiplicity.
pub fn count_zeros(region: SearchRegion, params: ModelParams) -> Result<usize> {
    count_zeros_with(&FullModel(params), &region.to_contour())
}

/// Number of zeros of `fun` inside a contour.
pub fn count_zeros_with<F: AnalyticFunction + ?Sized>(fun: &F, contour: &Contour) -> Result<usize> {
    wind(fun, contour).map(|(w, _)| w.count as usize)
}

/// Locate and classify every zero of `F(·, ell, gamma)` in `region`.
pub fn find_zeros(region: SearchRegion, params: ModelParams, tol: f64) -> Result<Vec<ZeroRecord>> {
    let fun = FullModel(params);
    let records = find_zeros_with(&fun, region, tol)?;
    records.into_iter().map(|r| classify(r, params)).collect()
}

/// Zeros of `F` in a disc: the bounding square is searched and the total
/// multiplicity inside the disc is checked against the disc's own count.
pub fn find_zeros_in_disc(
    center: Complex64,
    radius: f64,
    params: ModelParams,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    let fun = FullModel(params);
    let records = find_zeros_in_disc_with(&fun, center, radius, tol)?;
    records.into_iter().map(|r| classify(r, params)).collect()
}

pub fn find_zeros_in_disc_with<F: AnalyticFunction + ?Sized>(
    fun: &F,
    center: Complex64,
    radius: f64,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    let disc = Contour::disc(center, radius)?;
    let (w, used) = wind(fun, &disc)?;
    let used_radius = match used {
        Contour::Disc { radius, .. } => radius,
        _ => radius,
    };
    let square = SearchRegion::around(center, used_radius * 1.0173)?;
    let all = find_zeros_with(fun, square, tol)?;
    let inside: Vec<ZeroRecord> = all
        .into_iter()
        .filter(|r| (r.k - center).norm() <= used_radius)
        .collect();
    let total: usize = inside.iter().map(|r| r.multiplicity).sum();
    if total as i64 != w.count {
        return Err(Error::Consistency {
            module: Module::Zerofinder,
            msg: format!("disc count {} but {} located", w.count, total),
        });
    }
    Ok(inside)
}

/// Locate zeros of `fun` in `region`. Records carry a class assigned by the
/// sign of `Im k` only; [`classify`] refines it.
pub fn find_zeros_with<F: AnalyticFunction + ?Sized>(
    fun: &F,
    region: SearchRegion,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    if !(tol > 0.0) {
        return Err(Error::domain(Module::Zerofinder, "tolerance must be positive"));
    }
    let (w, used) = wind(fun, &region.to_contour())?;
    let root = match used {
        Contour::Rect(r) => r,
        _ => region,
    };
    let ctx = Ctx {
        tol,
        multiple_radius: 1e-7 * root.diameter().max(1e-300),
    };
    let mut records = cell(fun, &ctx, root, w, 0)?;
    records.sort_by(|a, b| {
        a.k.re
            .partial_cmp(&b.k.re)
            .unwrap()
            .then(a.k.im.partial_cmp(&b.k.im).unwrap())
    });
    let merged = merge(records, tol);
    let total: usize = merged.iter().map(|r| r.multiplicity).sum();
    if total as i64 != w.count {
        return Err(Error::Consistency {
            module: Module::Zerofinder,
            msg: format!("region count {} but {} located", w.count, total),
        });
    }
    Ok(merged)
}

struct Ctx {
    tol: f64,
    /// cells smaller than this with winding above one are treated as
    /// holding a single multiple zero
    multiple_radius: f64,
}

const SPLIT_FRACTIONS: [(f64, f64); 5] = [
    (0.5123, 0.4871),
    (0.4637, 0.5291),
    (0.5419, 0.4583),
    (0.4789, 0.5557),
    (0.5261, 0.4413),
];

fn split(r: &SearchRegion, attempt: usize) -> [SearchRegion; 4] {
    let (fx, fy) = SPLIT_FRACTIONS[attempt % SPLIT_FRACTIONS.len()];
    let xm = r.re_min + fx * (r.re_max - r.re_min);
    let ym = r.im_min + fy * (r.im_max - r.im_min);
    let mk = |a, b, c, d| SearchRegion {
        re_min: a,
        re_max: b,
        im_min: c,
        im_max: d,
        ..*r
    };
    [
        mk(r.re_min, xm, r.im_min, ym),
        mk(xm, r.re_max, r.im_min, ym),
        mk(r.re_min, xm, ym, r.im_max),
        mk(xm, r.re_max, ym, r.im_max),
    ]
}

fn children<F: AnalyticFunction + ?Sized>(
    fun: &F,
    parent: &SearchRegion,
    count: i64,
) -> Result<Vec<(SearchRegion, Winding)>> {
    let mut last_err = None;
    for attempt in 0..SPLIT_FRACTIONS.len() {
        let kids = split(parent, attempt);
        let counted: Vec<Result<Winding>> = kids
            .par_iter()
            .map(|c| wind_once(fun, &c.to_contour()))
            .collect();
        let mut ok = Vec::with_capacity(4);
        let mut failed = false;
        for (c, w) in kids.iter().zip(counted) {
            match w {
                Ok(w) => ok.push((*c, w)),
                Err(e) => {
                    last_err = Some(e);
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            continue;
        }
        let sum: i64 = ok.iter().map(|(_, w)| w.count).sum();
        if sum == count {
            return Ok(ok);
        }
        last_err = Some(Error::Consistency {
            module: Module::Zerofinder,
            msg: format!("children count {sum}, parent {count}"),
        });
    }
    Err(last_err.unwrap())
}

fn cell<F: AnalyticFunction + ?Sized>(
    fun: &F,
    ctx: &Ctx,
    region: SearchRegion,
    w: Winding,
    depth: usize,
) -> Result<Vec<ZeroRecord>> {
    if w.count == 0 {
        return Ok(Vec::new());
    }
    let m = w.count as usize;
    if m == 1 || region.diameter() <= ctx.multiple_radius {
        if let Some(rec) = polish_in_cell(fun, ctx, &region, m, w.log_max) {
            return Ok(vec![rec]);
        }
    }
    if depth >= region.max_depth || region.diameter() <= ctx.multiple_radius {
        let k = region.center();
        return Ok(vec![ZeroRecord {
            k,
            classification: by_sign(k),
            multiplicity: m,
            residual: f64::NAN,
            newton_iters: 0,
            unresolved: true,
            source: fun.source(),
        }]);
    }
    let kids = match children(fun, &region, w.count) {
        Ok(k) => k,
        Err(_) => {
            let k = region.center();
            return Ok(vec![ZeroRecord {
                k,
                classification: by_sign(k),
                multiplicity: m,
                residual: f64::NAN,
                newton_iters: 0,
                unresolved: true,
                source: fun.source(),
            }]);
        }
    };
    let parts: Vec<Result<Vec<ZeroRecord>>> = kids
        .into_par_iter()
        .map(|(r, cw)| cell(fun, ctx, r, cw, depth + 1))
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn by_sign(k: Complex64) -> Classification {
    if k.norm() < class_band(k) {
        Classification::TrivialOrigin
    } else if k.im.abs() <= class_band(k) {
        Classification::SpectralSingularity
    } else if k.im > 0.0 {
        Classification::Resonance
    } else {
        Classification::Eigenvalue
    }
}

/// Residual of `v` against both the term magnitude and the cell scale.
fn residual_of(v: &FValue, log_scale_ref: f64) -> f64 {
    let rel = v.relative_residual();
    let cell = (log_abs(v) - log_scale_ref).exp();
    rel.min(cell)
}

fn polish_in_cell<F: AnalyticFunction + ?Sized>(
    fun: &F,
    ctx: &Ctx,
    region: &SearchRegion,
    m: usize,
    log_max: f64,
) -> Option<ZeroRecord> {
    let slack = 1e-9 * region.diameter();
    let abs_floor = 1e-3 * region.diameter();
    let try_root = |res: Option<(Complex64, usize)>| -> Option<ZeroRecord> {
        let (k, iters) = res?;
        if !region.contains(k, slack) {
            return None;
        }
        let v = fun.eval(k).ok()?;
        let residual = residual_of(&v, log_max);
        if !(residual <= ctx.tol) {
            return None;
        }
        Some(ZeroRecord {
            k,
            classification: by_sign(k),
            multiplicity: m,
            residual,
            newton_iters: iters,
            unresolved: false,
            source: fun.source(),
        })
    };
    let start = region.center();
    try_root(newton(fun, start, m as f64, abs_floor)).or_else(|| {
        let h = 0.25 * (region.re_max - region.re_min).min(region.im_max - region.im_min);
        try_root(muller(fun, start, h, abs_floor))
    })
}

const MAX_ITERS: usize = 80;

/// Newton iteration `k -= m F/F'`; `m` is the expected multiplicity.
pub(crate) fn newton<F: AnalyticFunction + ?Sized>(
    fun: &F,
    start: Complex64,
    m: f64,
    abs_floor: f64,
) -> Option<(Complex64, usize)> {
    let mut k = start;
    // best iterate whose value is at rounding level; near k = 0 the step
    // test never fires because the noise of F is absolute there
    let mut floor: Option<(f64, Complex64)> = None;
    for it in 1..=MAX_ITERS {
        let v = fun.eval(k).ok()?;
        if v.f.norm() == 0.0 {
            return Some((k, it));
        }
        let noise = v.f.norm() / (NOISE_ULPS * f64::EPSILON * v.magnitude);
        if noise <= 1.0 && floor.is_none_or(|(n, _)| noise < n) {
            floor = Some((noise, k));
        }
        let step = v.newton_step() * m;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        k -= step;
        if step.norm() <= 4e-16 * k.norm().max(1e-8 * abs_floor) {
            return Some((k, it));
        }
    }
    floor.map(|(_, k)| (k, MAX_ITERS))
}

const NOISE_ULPS: f64 = 4.0;

fn muller<F: AnalyticFunction + ?Sized>(
    fun: &F,
    start: Complex64,
    h: f64,
    abs_floor: f64,
) -> Option<(Complex64, usize)> {
    let value = |k: Complex64| -> Option<(Complex64, f64)> {
        let v = fun.eval(k).ok()?;
        Some((v.f, v.log_scale))
    };
    // values are brought to the scale of the newest point
    let mut x = [start - h, start + Complex64::new(0.0, h), start];
    let mut y = Vec::with_capacity(3);
    for xi in &x {
        y.push(value(*xi)?);
    }
    for it in 1..=MAX_ITERS {
        let ref_scale = y[2].1;
        let f: Vec<Complex64> = y.iter().map(|(f, s)| f * (s - ref_scale).exp()).collect();
        let h1 = x[1] - x[0];
        let h2 = x[2] - x[1];
        let d1 = (f[1] - f[0]) / h1;
        let d2 = (f[2] - f[1]) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * a * f[2]).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == 0.0 {
            return None;
        }
        let dx = -2.0 * f[2] / den;
        if !dx.re.is_finite() || !dx.im.is_finite() {
            return None;
        }
        let xn = x[2] + dx;
        x = [x[1], x[2], xn];
        y = vec![y[1], y[2], value(xn)?];
        if dx.norm() <= 4e-16 * xn.norm().max(1e-8 * abs_floor) || y[2].0.norm() == 0.0 {
            return Some((xn, it));
        }
    }
    None
}

fn merge(records: Vec<ZeroRecord>, tol: f64) -> Vec<ZeroRecord> {
    let mut out: Vec<ZeroRecord> = Vec::with_capacity(records.len());
    for r in records {
        let dup = out.iter_mut().find(|o| {
            !o.unresolved && !r.unresolved && (o.k - r.k).norm() <= 10.0 * tol * o.k.norm().max(1.0)
        });
        match dup {
            Some(o) => {
                if r.residual < o.residual {
                    o.k = r.k;
                    o.residual = r.residual;
                }
            }
            None => out.push(r),
        }
    }
    out
}

/// Assign the class of a refined zero of `F(·, ell, gamma)`.
///
/// Zeros within the band around the real axis are polished along the real
/// axis first and labeled spectral singularities only if a real zero is
/// confirmed there.
pub fn classify(record: ZeroRecord, params: ModelParams) -> Result<ZeroRecord> {
    match record.source {
        Source::Full => classify_with(&FullModel(params), record, params.gamma),
        Source::FPlus => classify_with(&SingleStep::Plus(params.gamma), record, params.gamma),
        Source::FMinus => classify_with(&SingleStep::Minus(params.gamma), record, params.gamma),
    }
}

/// Residual target for the real-axis polish of near-real zeros.
const REAL_POLISH_TOL: f64 = 1e-9;
/// Rounding budget, in ulps of the summed terms, for the distance from the
/// polished real point to the zero.
const REAL_DISTANCE_ULPS: f64 = 64.0;

pub fn classify_with<F: AnalyticFunction + ?Sized>(
    fun: &F,
    mut record: ZeroRecord,
    gamma: f64,
) -> Result<ZeroRecord> {
    let k = record.k;
    let band = class_band(k);
    record.classification = if k.norm() < band {
        Classification::TrivialOrigin
    } else if k.im.abs() <= band {
        match real_polish(fun, k.re) {
            Some((kr, res)) if res <= REAL_POLISH_TOL && on_axis(fun, kr) => {
                record.k = Complex64::new(kr, 0.0);
                record.residual = record.residual.min(res);
                Classification::SpectralSingularity
            }
            _ if k.im > 0.0 => Classification::Resonance,
            _ if k.im < 0.0 => Classification::Eigenvalue,
            _ => Classification::SpectralSingularity,
        }
    } else if k.im > 0.0 {
        Classification::Resonance
    } else {
        Classification::Eigenvalue
    };
    if record.classification == Classification::Eigenvalue && !record.unresolved {
        let lhs = (record.k.re * record.k.im).abs();
        let bound = 0.5 * gamma + 1e-8 * gamma;
        if lhs > bound {
            return Err(Error::Consistency {
                module: Module::Zerofinder,
                msg: format!("|Re k Im k| = {lhs} exceeds gamma/2 at k = {}", record.k),
            });
        }
    }
    Ok(record)
}

/// The nearest zero of `F` to the real point `x` is within rounding of `x`:
/// `|F/F'|` is no larger than the error of `F` itself divided by `|F'|`.
fn on_axis<F: AnalyticFunction + ?Sized>(fun: &F, x: f64) -> bool {
    fun.eval(Complex64::new(x, 0.0)).is_ok_and(|v| {
        let floor = REAL_DISTANCE_ULPS * f64::EPSILON * v.magnitude.max(v.f.norm());
        v.f.norm() <= floor
    })
}

/// Gauss-Newton for `F(x) = 0` over real `x`; returns the point and its
/// relative residual.
pub(crate) fn real_polish<F: AnalyticFunction + ?Sized>(fun: &F, x0: f64) -> Option<(f64, f64)> {
    let mut x = x0;
    let mut best = None;
    for _ in 0..30 {
        let v = fun.eval(Complex64::new(x, 0.0)).ok()?;
        let res = v.relative_residual();
        if best.is_none_or(|(_, r)| res < r) {
            best = Some((x, res));
        }
        let den = v.df.norm_sqr();
        if den == 0.0 {
            break;
        }
        let dx = (v.df.conj() * v.f).re / den;
        x -= dx;
        if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
            break;
        }
    }
    if let Some((xb, _)) = best {
        let v = fun.eval(Complex64::new(x, 0.0)).ok()?;
        let res = v.relative_residual();
        if best.is_none_or(|(_, r)| res < r) {
            return Some((x, res));
        }
        return Some((xb, best.unwrap().1));
    }
    None
}

/// Whether `k` lies in the union of the exponential sector and the central
/// disc that contains all zeros for `gamma > 0`.
pub fn verify_region_bounds(record: &ZeroRecord, params: ModelParams) -> bool {
    in_location_domain(record.k, params)
}

pub fn location_radius(gamma: f64) -> f64 {
    gamma.sqrt() * (39.0f64 / 20.0).max(0.5 * gamma.sqrt())
}

pub fn in_location_domain(k: Complex64, params: ModelParams) -> bool {
    let g = params.gamma;
    let l = params.ell;
    let slack = 1.0 + 1e-9;
    let a = k.norm();
    let rg = location_radius(g);
    if a <= rg * slack {
        return true;
    }
    if k.im <= 0.0 {
        return false;
    }
    let e = ((l + 1.0) * k.im).exp();
    let sg = g.sqrt();
    sg * e < a * slack && a < 47.0 / 25.0 * sg * e * slack && a < 76.0 / 73.0 * g * ((l + 9.0 / 8.0) * a).exp() * slack
}
