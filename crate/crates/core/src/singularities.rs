//! Real-axis zeros (spectral singularities).
//!
//! With `β = √(2γ)` and `k = (β/2)√(u⁻² − u²)`, `u ∈ (0,1)`, the complex
//! equation `F = 0` on the real axis becomes two real equations
//!
//! ```text
//! A1 = B cos 4kℓ,   A2 = -B sin 4kℓ
//! A1 = (u⁴ − 2) cos(β/u) + u⁴ (2u⁴ − 1) cosh βu
//! A2 = 2√(1 − u⁴) (u⁶ sinh βu − sin(β/u))
//! B  = u⁴ (cosh βu − cos(β/u))
//! ```
//!
//! Eliminating `ℓ` leaves the solvability condition `g(u, β) = 0`; `ℓ` is
//! then recovered from an arctangent with a parity rule on its branch.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::u_from_k;
use crate::error::{Error, Module, Result};
use crate::model::{eval_f, ModelParams};

/// A real zero `k > 0` of `F(·, ell, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityPoint {
    pub k: f64,
    pub gamma: f64,
    pub ell: f64,
    pub u: f64,
    pub beta: f64,
    pub n: i64,
    /// `|F| / scale` at the point.
    pub residual: f64,
    /// Set when the sign argument of the parity rule vanished and the
    /// arctangent limit was used.
    pub flagged: bool,
}

pub fn k_from_u(u: f64, beta: f64) -> f64 {
    0.5 * beta * (1.0 / (u * u) - u * u).sqrt()
}

/// The solvability function `g(u, β)`, with its limit 1 at `u = 0`.
pub fn g(u: f64, beta: f64) -> Result<f64> {
    check_u(u)?;
    if u == 0.0 {
        return Ok(1.0);
    }
    Ok(g_raw(u, beta))
}

fn check_u(u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(Module::Singularities, format!("u = {u} outside [0, 1]")));
    }
    Ok(())
}

fn g_raw(u: f64, beta: f64) -> f64 {
    let u4 = u.powi(4);
    let (ch, sh) = ((beta * u).cosh(), (beta * u).sinh());
    let (c, s) = ((beta / u).cos(), (beta / u).sin());
    u4 * (1.0 - u4) * ch * c - 2.0 * u4 * u * u * sh * s + 1.0 - u4 * u4 * u4
}

/// `∂g/∂u`.
pub fn g_u(u: f64, beta: f64) -> f64 {
    let u2 = u * u;
    let u4 = u2 * u2;
    let (ch, sh) = ((beta * u).cosh(), (beta * u).sinh());
    let (c, s) = ((beta / u).cos(), (beta / u).sin());
    (4.0 * u2 * u - 8.0 * u4 * u2 * u) * ch * c
        + beta * u4 * (1.0 - u4) * sh * c
        + beta * u2 * (1.0 - u4) * ch * s
        - 12.0 * u4 * u * sh * s
        - 2.0 * beta * u4 * u2 * ch * s
        + 2.0 * beta * u4 * sh * c
        - 12.0 * u4 * u4 * u2 * u
}

/// `∂g/∂β`.
pub fn g_beta(u: f64, beta: f64) -> f64 {
    let u4 = u.powi(4);
    let (ch, sh) = ((beta * u).cosh(), (beta * u).sinh());
    let (c, s) = ((beta / u).cos(), (beta / u).sin());
    u4 * (1.0 - u4) * (u * sh * c - ch * s / u) - 2.0 * u4 * u * u * (u * ch * s + sh * c / u)
}

/// `g* = u ∂g/∂u − 6g`, written out.
pub fn g_star(u: f64, beta: f64) -> f64 {
    let u4 = u.powi(4);
    let (ch, sh) = ((beta * u).cosh(), (beta * u).sinh());
    let (c, s) = ((beta / u).cos(), (beta / u).sin());
    beta * u.powi(3) * (1.0 - 3.0 * u4) * ch * s + beta * u4 * u * (3.0 - u4) * sh * c
        - 2.0 * u4 * (1.0 + u4) * ch * c
        - 6.0 * (1.0 + u4 * u4 * u4)
}

/// Left end `(1 + β/4)⁻¹` of the root-bearing part of `[0, 1)`.
pub fn no_root_band(beta: f64) -> f64 {
    1.0 / (1.0 + 0.25 * beta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Coefficients {
    a1: f64,
    a2: f64,
    b: f64,
}

fn coefficients(u: f64, beta: f64) -> Coefficients {
    let u4 = u.powi(4);
    let (ch, sh) = ((beta * u).cosh(), (beta * u).sinh());
    let (c, s) = ((beta / u).cos(), (beta / u).sin());
    Coefficients {
        a1: (u4 - 2.0) * c + u4 * (2.0 * u4 - 1.0) * ch,
        a2: 2.0 * (1.0 - u4).sqrt() * (u4 * u * u * sh - s),
        b: u4 * (ch - c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllRecovery {
    pub ell: f64,
    pub flagged: bool,
}

/// Relative size of the parity-rule argument below which it counts as zero.
const PARITY_ZERO: f64 = 1e-14;
/// Negative `ell` of at most this size is taken as `ell = 0`.
const ELL_CLAMP: f64 = 1e-12;

/// `ell` on branch `n` of the arctangent, if the parity rule admits `n`
/// and the result is non-negative.
pub fn recover_ell(u: f64, beta: f64, n: i64) -> Option<EllRecovery> {
    if !(u > 0.0 && u < 1.0) || !(beta > 0.0) || n < 0 {
        return None;
    }
    let co = coefficients(u, beta);
    let k = k_from_u(u, beta);
    let (theta, even, flagged) = if co.a1.abs() <= PARITY_ZERO * co.b.abs().max(1.0) {
        // arctangent at its limit; continuity picks the even branch
        (-co.a2.signum() * 0.5 * PI, true, true)
    } else {
        ((-co.a2 / co.a1).atan(), co.a1 > 0.0, false)
    };
    if (n % 2 == 0) != even {
        return None;
    }
    let mut ell = (theta + PI * n as f64) / (4.0 * k);
    if ell < 0.0 && ell > -ELL_CLAMP {
        ell = 0.0;
    }
    (ell >= 0.0).then_some(EllRecovery { ell, flagged })
}

/// Roots of `g(·, β)` in `(0, 1)`, bracketed on a uniform grid starting at
/// the root-free band edge and bisected to `1e-12`.
pub fn solve_g_for_u(beta: f64) -> Vec<f64> {
    solve_g_for_u_with(beta, 4000)
}

pub fn solve_g_for_u_with(beta: f64, cells: usize) -> Vec<f64> {
    if !(beta > 0.0) {
        return Vec::new();
    }
    let lo = no_root_band(beta);
    let hi = 1.0;
    let f = |u: f64| g_raw(u, beta);
    let mut roots = Vec::new();
    let mut u_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=cells {
        let u = if i == cells { hi } else { lo + (hi - lo) * i as f64 / cells as f64 };
        let fu = f(u);
        if f_prev == 0.0 && u_prev > lo && u_prev < 1.0 {
            roots.push(u_prev);
        } else if f_prev * fu < 0.0 {
            let r = bisect(&f, u_prev, u, 1e-12);
            // g(1, β) vanishes whenever sin β does; that endpoint is k = 0
            if r < 1.0 - 1e-9 {
                roots.push(r);
            }
        }
        u_prev = u;
        f_prev = fu;
    }
    roots
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) <= tol || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Certified root-free `β` range of `g` and the point where roots first
/// appear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapCertificate {
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub u_star: f64,
    pub beta_star: f64,
    /// Minimum of `g` over the scan grid of `(beta_lo, beta_star - 1e-3) × [0, 1]`.
    pub grid_margin: f64,
    /// Set when Newton failed and the nested bisection gave the touching point.
    pub by_bisection: bool,
}

impl GapCertificate {
    /// The corresponding open `gamma` interval `(β_lo²/2, β*²/2)`.
    pub fn gamma_gap(&self) -> (f64, f64) {
        (0.5 * self.beta_lo * self.beta_lo, 0.5 * self.beta_star * self.beta_star)
    }
}

pub const GAP_GRID: usize = 2000;

pub fn gap_certificate() -> Result<GapCertificate> {
    gap_certificate_with(GAP_GRID)
}

pub fn gap_certificate_with(grid: usize) -> Result<GapCertificate> {
    let (u0, b0) = gap_seed();
    let (u_star, beta_star, by_bisection) = match gap_newton(u0, b0) {
        Some((u, b)) => (u, b, false),
        None => {
            let (u, b) = gap_bisection()?;
            (u, b, true)
        }
    };
    let beta_lo = PI;
    let beta_top = beta_star - 1e-3;
    let grid_margin = (1..=grid)
        .into_par_iter()
        .map(|i| {
            let beta = beta_lo + (beta_top - beta_lo) * i as f64 / grid as f64;
            (0..grid).fold(f64::INFINITY, |m, j| {
                let u = j as f64 / (grid - 1) as f64;
                let v = if u == 0.0 { 1.0 } else { g_raw(u, beta) };
                m.min(v)
            })
        })
        .reduce(|| f64::INFINITY, f64::min);
    if !(grid_margin > 0.0) {
        return Err(Error::Consistency {
            module: Module::Singularities,
            msg: format!("gap grid minimum {grid_margin} is not positive"),
        });
    }
    Ok(GapCertificate {
        beta_lo,
        beta_hi: beta_star,
        u_star,
        beta_star,
        grid_margin,
        by_bisection,
    })
}

/// Grid point minimizing `|g| + |g*|` over the window where roots first appear.
fn gap_seed() -> (f64, f64) {
    let n = 200;
    let mut best = (f64::INFINITY, 0.6, 4.8);
    for i in 0..=n {
        let beta = PI + (5.0 - PI) * i as f64 / n as f64;
        for j in 0..=n {
            let u = 0.3 + 0.69 * j as f64 / n as f64;
            let v = g_raw(u, beta).abs() + g_star(u, beta).abs();
            if v < best.0 {
                best = (v, u, beta);
            }
        }
    }
    (best.1, best.2)
}

fn gap_newton(mut u: f64, mut beta: f64) -> Option<(f64, f64)> {
    let h = 1e-7;
    for _ in 0..50 {
        let f1 = g_raw(u, beta);
        let f2 = g_star(u, beta);
        let j11 = g_u(u, beta);
        let j12 = g_beta(u, beta);
        let j21 = (g_star(u + h, beta) - g_star(u - h, beta)) / (2.0 * h);
        let j22 = (g_star(u, beta + h) - g_star(u, beta - h)) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let du = (f1 * j22 - f2 * j12) / det;
        let db = (j11 * f2 - j21 * f1) / det;
        u -= du;
        beta -= db;
        if !(u > 0.0 && u < 1.0) || !(beta > PI && beta < 5.0) {
            return None;
        }
        if du.abs() < 1e-15 && db.abs() < 1e-14 {
            return Some((u, beta));
        }
    }
    (g_raw(u, beta).abs() < 1e-12 && g_star(u, beta).abs() < 1e-10).then_some((u, beta))
}

/// Minimum over `u` of `g(·, β)` on the root-bearing part of `[0, 1]`.
fn min_over_u(beta: f64) -> (f64, f64) {
    let lo = no_root_band(beta);
    let n = 2000;
    let mut best = (f64::INFINITY, lo);
    for j in 0..=n {
        let u = lo + (1.0 - lo) * j as f64 / n as f64;
        let v = g_raw(u, beta);
        if v < best.0 {
            best = (v, u);
        }
    }
    // golden-section refinement within one cell either side
    let h = (1.0 - lo) / n as f64;
    let (mut a, mut b) = ((best.1 - h).max(lo), (best.1 + h).min(1.0));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = b - r * (b - a);
        let x2 = a + r * (b - a);
        if g_raw(x1, beta) < g_raw(x2, beta) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let u = 0.5 * (a + b);
    (g_raw(u, beta), u)
}

fn gap_bisection() -> Result<(f64, f64)> {
    // the minimum over u is positive inside the gap and negative at β = 5
    let (mut a, mut b) = (PI + 1e-3, 5.0);
    if min_over_u(a).0 <= 0.0 || min_over_u(b).0 >= 0.0 {
        return Err(Error::Convergence {
            module: Module::Singularities,
            msg: "gap endpoint not bracketed".into(),
        });
    }
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if min_over_u(m).0 > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-13 {
            break;
        }
    }
    let beta = 0.5 * (a + b);
    Ok((min_over_u(beta).1, beta))
}

/// Left-hand side of the design equation in `β` for fixed `k`.
pub fn design_equation(beta: f64, k: f64) -> f64 {
    let r = (2.0 * k * k + (4.0 * k.powi(4) + beta.powi(4)).sqrt()).sqrt();
    let b2 = beta * beta;
    let b4 = b2 * b2;
    2.0 * b4 * k * k * (b2 / r).cosh() * r.cos() - b4 * b2 * (b2 / r).sinh() * r.sin()
        + 2.0 * k * k * (16.0 * k.powi(4) + 3.0 * b4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignOptions {
    pub beta_max: f64,
    pub cells: usize,
    /// Keep `ell` values up to this bound.
    pub ell_max: f64,
    /// Use every positive root, not only the smallest.
    pub all_roots: bool,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions {
            beta_max: 30.0,
            cells: 3000,
            ell_max: 10.0,
            all_roots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Design {
    pub k: f64,
    pub beta_roots: Vec<f64>,
    pub points: Vec<SingularityPoint>,
    /// No root in `(0, beta_max]`.
    pub range_exhausted: bool,
}

/// Residual target of the `|F|` round-trip check.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

pub fn design_for_k(k: f64) -> Result<Design> {
    design_for_k_with(k, DesignOptions::default())
}

pub fn design_for_k_with(k: f64, opts: DesignOptions) -> Result<Design> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(Module::Singularities, format!("k must be positive, got {k}")));
    }
    let lo = 1e-4;
    let f = |b: f64| design_equation(b, k);
    let mut roots = Vec::new();
    let mut b_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=opts.cells {
        let b = lo + (opts.beta_max - lo) * i as f64 / opts.cells as f64;
        let fb = f(b);
        if f_prev * fb < 0.0 || fb == 0.0 {
            roots.push(if fb == 0.0 { b } else { bisect(&f, b_prev, b, 0.0) });
            if !opts.all_roots {
                break;
            }
        }
        b_prev = b;
        f_prev = fb;
    }
    let mut points = Vec::new();
    for &beta in &roots {
        let u = beta / (2.0 * k * k + (4.0 * k.powi(4) + beta.powi(4)).sqrt()).sqrt();
        points.extend(points_on_root(u, beta, k, opts.ell_max)?);
    }
    sort_points(&mut points);
    Ok(Design {
        k,
        range_exhausted: roots.is_empty(),
        beta_roots: roots,
        points,
    })
}

fn points_on_root(u: f64, beta: f64, k: f64, ell_max: f64) -> Result<Vec<SingularityPoint>> {
    let gamma = 0.5 * beta * beta;
    let mut out = Vec::new();
    let n_max = (4.0 * k * ell_max / PI).ceil() as i64 + 2;
    for n in 0..=n_max {
        let Some(rec) = recover_ell(u, beta, n) else { continue };
        if rec.ell > ell_max {
            break;
        }
        let params = ModelParams::new(gamma, rec.ell)?;
        let residual = eval_f(Complex64::new(k, 0.0), params)?.relative_residual();
        if residual <= ROUND_TRIP_TOL {
            out.push(SingularityPoint {
                k,
                gamma,
                ell: rec.ell,
                u,
                beta,
                n,
                residual,
                flagged: rec.flagged,
            });
        }
    }
    Ok(out)
}

/// Points built from a root `u` of `g(·, β)`, for every admissible branch
/// with `ell ≤ ell_max`.
pub fn points_from_u(u: f64, beta: f64, ell_max: f64) -> Result<Vec<SingularityPoint>> {
    points_on_root(u, beta, k_from_u(u, beta), ell_max)
}

fn sort_points(points: &mut Vec<SingularityPoint>) {
    points.sort_by(|a, b| {
        (a.k, a.gamma, a.ell)
            .partial_cmp(&(b.k, b.gamma, b.ell))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    points.dedup_by(|a, b| {
        (a.k - b.k).abs() <= 1e-8 && (a.gamma - b.gamma).abs() <= 1e-8 && (a.ell - b.ell).abs() <= 1e-8
    });
}

/// One row of the minimal-amplitude scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub k: f64,
    pub gamma_min: Option<f64>,
    pub ell_min: Option<f64>,
    /// `ell_min + jπ/(2k)` for `j = 0..ELL_FAMILY`.
    pub ell_family: Vec<f64>,
    pub point: Option<SingularityPoint>,
}

pub const ELL_FAMILY: usize = 4;

pub fn min_scan(k_max: f64, dk: f64) -> Result<Vec<ScanRow>> {
    if !(k_max > 0.0) || !(dk > 0.0) || !k_max.is_finite() || !dk.is_finite() {
        return Err(Error::domain(Module::Singularities, "k_max and dk must be positive"));
    }
    let n = (k_max / dk + 1e-9).floor() as usize;
    let rows: Vec<Result<ScanRow>> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let k = dk * i as f64;
            let opts = DesignOptions {
                ell_max: f64::INFINITY,
                ..DesignOptions::default()
            };
            let d = design_for_k_first(k, opts)?;
            Ok(match d {
                Some(p) => ScanRow {
                    k,
                    gamma_min: Some(p.gamma),
                    ell_min: Some(p.ell),
                    ell_family: (0..ELL_FAMILY)
                        .map(|j| p.ell + j as f64 * PI / (2.0 * k))
                        .collect(),
                    point: Some(p),
                },
                None => ScanRow {
                    k,
                    gamma_min: None,
                    ell_min: None,
                    ell_family: Vec::new(),
                    point: None,
                },
            })
        })
        .collect();
    rows.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanField {
    GammaMin,
    EllMin,
}

/// A discontinuity between consecutive scan rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanJump {
    pub field: ScanField,
    pub k_before: f64,
    pub k_after: f64,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGaps {
    /// Wavenumbers without a minimal root.
    pub empty: Vec<f64>,
    pub jumps: Vec<ScanJump>,
}

/// Rows without a root, and jumps of `γ_min` by more than a quarter of its
/// value or of `ℓ_min` by more than half a period `π/(2k)`.
pub fn scan_gaps(rows: &[ScanRow]) -> ScanGaps {
    let empty = rows.iter().filter(|r| r.gamma_min.is_none()).map(|r| r.k).collect();
    let mut jumps = Vec::new();
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut push = |field, before: f64, after: f64| {
            jumps.push(ScanJump { field, k_before: a.k, k_after: b.k, before, after });
        };
        if let (Some(x), Some(y)) = (a.gamma_min, b.gamma_min) {
            if (y - x).abs() > 0.25 * x.max(y) {
                push(ScanField::GammaMin, x, y);
            }
        }
        if let (Some(x), Some(y)) = (a.ell_min, b.ell_min) {
            if (y - x).abs() > 0.5 * PI / (2.0 * b.k) {
                push(ScanField::EllMin, x, y);
            }
        }
    }
    ScanGaps { empty, jumps }
}

/// Minimal-`β` design point with the smallest admissible `ell`.
fn design_for_k_first(k: f64, opts: DesignOptions) -> Result<Option<SingularityPoint>> {
    let d = design_for_k_with(k, DesignOptions { ell_max: 0.0, ..opts })?;
    let Some(&beta) = d.beta_roots.first() else { return Ok(None) };
    let u = beta / (2.0 * k * k + (4.0 * k.powi(4) + beta.powi(4)).sqrt()).sqrt();
    // the first admissible branch lies within two arctangent periods
    let pts = points_on_root(u, beta, k, PI / k)?;
    Ok(pts.into_iter().next())
}

/// Spectral singularities at `ℓ = 0` on the minimal-`β` design branch,
/// for `k ≤ k_max`, sorted by `γ`.
///
/// At `ℓ = 0` the branch `n = 0` needs `A2 = 0` with `A1 > 0`. Sign changes
/// of `A2` along the minimal root are bracketed on a `k` grid and then
/// polished on the real system.
pub fn threshold_seeds(k_max: f64) -> Result<Vec<SingularityPoint>> {
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::domain(Module::Singularities, "k_max must be positive"));
    }
    let dk = 5e-3;
    let n = (k_max / dk).ceil() as usize;
    let samples: Vec<Option<(f64, f64, Coefficients)>> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let k = dk * i as f64;
            let d = design_for_k_with(k, DesignOptions { ell_max: 0.0, ..DesignOptions::default() }).ok()?;
            let beta = *d.beta_roots.first()?;
            let u = beta / (2.0 * k * k + (4.0 * k.powi(4) + beta.powi(4)).sqrt()).sqrt();
            Some((k, beta, coefficients(u, beta)))
        })
        .collect();
    let mut out: Vec<SingularityPoint> = Vec::new();
    for w in samples.windows(2) {
        let (Some((k0, b0, c0)), Some((k1, b1, c1))) = (w[0], w[1]) else { continue };
        // a jump of the minimal root is not a crossing
        if (b1 - b0).abs() > 0.05 * b0.max(1.0) || c0.a1 <= 0.0 || c1.a1 <= 0.0 {
            continue;
        }
        let (h0, h1) = (c0.a2 / c0.b, c1.a2 / c1.b);
        if h0 * h1 > 0.0 {
            continue;
        }
        let t = if h0 == h1 { 0.0 } else { h0 / (h0 - h1) };
        let k = k0 + t * (k1 - k0);
        let beta = b0 + t * (b1 - b0);
        let Ok((k, gamma)) = polish_point(k, 0.5 * beta * beta, 0.0) else { continue };
        let beta = (2.0 * gamma).sqrt();
        let u = u_from_k(k, beta);
        let residual = eval_f(Complex64::new(k, 0.0), ModelParams::new(gamma, 0.0)?)?.relative_residual();
        if residual > ROUND_TRIP_TOL || out.iter().any(|p| (p.k - k).abs() < 1e-8) {
            continue;
        }
        out.push(SingularityPoint { k, gamma, ell: 0.0, u, beta, n: 0, residual, flagged: false });
    }
    out.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    Ok(out)
}

/// The two real equations at a real `k`, before normalization.
pub fn real_system_residual(k: f64, params: ModelParams) -> Result<(f64, f64)> {
    let [r1, r2, _] = real_system_parts(k, params.gamma, params.ell)?;
    Ok((r1, r2))
}

/// `(A1 − B cos 4kℓ, A2 + B sin 4kℓ, B)`.
pub fn real_system_parts(k: f64, gamma: f64, ell: f64) -> Result<[f64; 3]> {
    if !(k > 0.0) || !(gamma > 0.0) {
        return Err(Error::domain(
            Module::Singularities,
            format!("real system needs k > 0 and gamma > 0, got k={k}, gamma={gamma}"),
        ));
    }
    let beta = (2.0 * gamma).sqrt();
    let u = u_from_k(k, beta);
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(Module::Singularities, format!("u = {u} outside (0, 1)")));
    }
    let co = coefficients(u, beta);
    let a = 4.0 * k * ell;
    Ok([co.a1 - co.b * a.cos(), co.a2 + co.b * a.sin(), co.b])
}

/// `(r1, r2) / B`, which equals `(Re, Im)` of `F₋F₊/F₀ − e^{−4ikℓ}`.
pub fn real_system_normalized(k: f64, gamma: f64, ell: f64) -> Result<[f64; 2]> {
    let [r1, r2, b] = real_system_parts(k, gamma, ell)?;
    Ok([r1 / b, r2 / b])
}

/// Polish a near-singular point `(k, gamma)` at fixed `ell` by Newton on
/// the normalized real system.
pub fn polish_point(k: f64, gamma: f64, ell: f64) -> Result<(f64, f64)> {
    let (mut k, mut gamma) = (k, gamma);
    for _ in 0..60 {
        let f = real_system_normalized(k, gamma, ell)?;
        let hk = 1e-7 * k.max(1e-3);
        let hg = 1e-7 * gamma.max(1e-3);
        let fk1 = real_system_normalized(k + hk, gamma, ell)?;
        let fk0 = real_system_normalized(k - hk, gamma, ell)?;
        let fg1 = real_system_normalized(k, gamma + hg, ell)?;
        let fg0 = real_system_normalized(k, gamma - hg, ell)?;
        let j = [
            [(fk1[0] - fk0[0]) / (2.0 * hk), (fg1[0] - fg0[0]) / (2.0 * hg)],
            [(fk1[1] - fk0[1]) / (2.0 * hk), (fg1[1] - fg0[1]) / (2.0 * hg)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dk = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dg = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        k -= dk;
        gamma -= dg;
        if dk.abs() <= 1e-15 * k.abs() && dg.abs() <= 1e-15 * gamma.abs() {
            return Ok((k, gamma));
        }
    }
    let f = real_system_normalized(k, gamma, ell)?;
    if f[0].abs() + f[1].abs() < 1e-12 {
        Ok((k, gamma))
    } else {
        Err(Error::Convergence {
            module: Module::Singularities,
            msg: format!("real system polish stalled at k={k}, gamma={gamma}"),
        })
    }
}
