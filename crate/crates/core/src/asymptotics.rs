//! Closed-form predictions for zeros: the large-distance ladder, its
//! admissibility threshold, the small-amplitude imaginary zero, zeros of the
//! single-step factors and the large-distance convergence targets.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Module, Result};
use crate::model::{eval_factors, ModelParams};
use crate::zerofinder::{
    classify_with, count_zeros_with, find_zeros_in_disc, find_zeros_with, location_radius, Classification,
    Contour, FullModel, SearchRegion, SingleStep, ZeroRecord,
};

fn positive_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(Module::Asymptotics, format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

/// Admissibility threshold: index `n` is covered at distance `ell` when
/// `π|n|/2 + π/4 ≤ theta(gamma) · ell`.
pub fn theta(gamma: f64) -> Result<f64> {
    positive_gamma(gamma)?;
    let q = 1.0 - (-FRAC_PI_4).exp();
    Ok(2.0 * q * gamma / (17.0 * (1.0 + q.sqrt()) * gamma.sqrt() + 10.0 * PI / 3f64.sqrt()))
}

pub fn is_admissible(n: i64, params: ModelParams) -> Result<bool> {
    Ok(PI * n.unsigned_abs() as f64 / 2.0 + FRAC_PI_4 <= theta(params.gamma)? * params.ell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LadderCount {
    /// `⌊1/2 + 2 Θ ℓ / π⌋`; indices `-n..=n` form the ladder.
    pub n: i64,
    /// Set when even `n = 0` fails the admissibility inequality.
    pub below_threshold: bool,
}

pub fn ladder_count(params: ModelParams) -> Result<LadderCount> {
    if !(params.ell > 0.0) {
        return Err(Error::domain(Module::Asymptotics, "ell must be positive"));
    }
    let th = theta(params.gamma)?;
    Ok(LadderCount {
        n: (0.5 + 2.0 * th * params.ell / PI).floor() as i64,
        below_threshold: FRAC_PI_4 > th * params.ell,
    })
}

/// Largest `|n|` satisfying the admissibility inequality, if any.
pub fn max_admissible_index(params: ModelParams) -> Result<Option<i64>> {
    let th = theta(params.gamma)? * params.ell;
    if th < FRAC_PI_4 {
        return Ok(None);
    }
    Ok(Some(((th - FRAC_PI_4) / FRAC_PI_2).floor() as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderPrediction {
    pub n: i64,
    pub k_pred: Complex64,
    /// Radius `π/(4ℓ)` of the isolating disc around `πn/(2ℓ)`.
    pub radius: f64,
    pub admissible: bool,
}

impl LadderPrediction {
    pub fn center(&self, ell: f64) -> f64 {
        PI * self.n as f64 / (2.0 * ell)
    }
}

struct BetaTerms {
    sh: f64,
    sn: f64,
    den: f64,
}

fn beta_terms(gamma: f64) -> BetaTerms {
    let b = (2.0 * gamma).sqrt();
    let den = b.cosh() - b.cos();
    assert!(den > 0.0, "cosh - cos must be positive for positive gamma");
    BetaTerms {
        sh: b.sinh(),
        sn: b.sin(),
        den,
    }
}

fn ladder_common(n: i64, params: ModelParams) -> Result<(f64, f64, BetaTerms, bool)> {
    positive_gamma(params.gamma)?;
    if !(params.ell > 0.0) {
        return Err(Error::domain(Module::Asymptotics, "ell must be positive"));
    }
    let admissible = is_admissible(n, params)?;
    Ok((n as f64, 1.0 / params.ell, beta_terms(params.gamma), admissible))
}

/// Three-term large-`ell` expansion of the `n`-th ladder zero.
///
/// The `ell⁻³` coefficient is the one that reproduces the fourth-order
/// residual; see [`ladder_predict_printed`] for the alternative form.
pub fn ladder_predict(n: i64, params: ModelParams) -> Result<LadderPrediction> {
    let (nf, inv, t, admissible) = ladder_common(n, params)?;
    let g = params.gamma;
    let t1 = Complex64::new(PI * nf / 2.0 * inv, 0.0);
    let t2 = Complex64::new(second_order(nf, g, &t) * inv * inv, 0.0);
    let d2 = g * t.den * t.den;
    let re3 = PI * nf * (t.sh - t.sn).powi(2) / (4.0 * d2);
    let im3 = -PI * PI * nf * nf * t.sh * t.sn / (2.0 * d2);
    let t3 = Complex64::new(re3, im3) * inv.powi(3);
    Ok(LadderPrediction {
        n,
        k_pred: t1 + t2 + t3,
        radius: PI * inv / 4.0,
        admissible,
    })
}

/// The expansion with the `ell⁻³` coefficient
/// `-(iπ²n² sinh β sin β - 2πn (sinh β - sin β)²) / (γ (cosh β - cos β)²)`.
/// Its residual decays only like `ell⁻³`.
pub fn ladder_predict_printed(n: i64, params: ModelParams) -> Result<LadderPrediction> {
    let (nf, inv, t, admissible) = ladder_common(n, params)?;
    let g = params.gamma;
    let t1 = Complex64::new(PI * nf / 2.0 * inv, 0.0);
    let t2 = Complex64::new(second_order(nf, g, &t) * inv * inv, 0.0);
    let d2 = g * t.den * t.den;
    let num = Complex64::new(-2.0 * PI * nf * (t.sh - t.sn).powi(2), PI * PI * nf * nf * t.sh * t.sn);
    let t3 = -num / d2 * inv.powi(3);
    Ok(LadderPrediction {
        n,
        k_pred: t1 + t2 + t3,
        radius: PI * inv / 4.0,
        admissible,
    })
}

/// A ladder zero located in its isolating disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderZero {
    pub prediction: LadderPrediction,
    /// Zeros of `F` in the disc, with multiplicity.
    pub count: usize,
    /// The zero itself when the disc isolates exactly one.
    pub found: Option<ZeroRecord>,
}

pub fn ladder_zero(n: i64, params: ModelParams, tol: f64) -> Result<LadderZero> {
    let prediction = ladder_predict(n, params)?;
    let center = Complex64::new(prediction.center(params.ell), 0.0);
    let disc = Contour::disc(center, prediction.radius)?;
    let count = count_zeros_with(&FullModel(params), &disc)?;
    let found = if count == 1 {
        find_zeros_in_disc(center, prediction.radius, params, tol)?.into_iter().next()
    } else {
        None
    };
    Ok(LadderZero { prediction, count, found })
}

fn second_order(nf: f64, g: f64, t: &BetaTerms) -> f64 {
    -2f64.sqrt() * PI * nf * (t.sh - t.sn) / (4.0 * g.sqrt() * t.den)
}

/// Two-term expansions of the small-`gamma` imaginary zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallGammaZero {
    /// Leading term linear in `gamma`.
    pub linear_leading: Complex64,
    /// Leading term quadratic in `gamma`; this is the one the zero follows.
    pub quadratic_leading: Complex64,
}

pub fn small_gamma_zero(params: ModelParams) -> SmallGammaZero {
    let (g, l) = (params.gamma, params.ell);
    let c1 = l + 1.0 / 3.0;
    let c4 = 2.0 * l.powi(3) + 8.0 / 3.0 * l * l + 53.0 / 45.0 * l + 53.0 / 315.0;
    let high = c4 * g.powi(4);
    SmallGammaZero {
        linear_leading: Complex64::new(0.0, c1 * g + high),
        quadratic_leading: Complex64::new(0.0, c1 * g * g + high),
    }
}

/// Radius `r0 √γ` of the disc holding every lower-half-plane zero of `F±`.
pub fn single_step_radius(gamma: f64) -> f64 {
    1.2 * gamma.sqrt().max(1.0) * gamma.sqrt()
}

/// Zeros of `F+` and `F-` in `region`, tagged by source and classified.
///
/// Real zeros are checked against the reduced real system for the factor;
/// a mismatch is a consistency error.
pub fn single_step_zeros(gamma: f64, region: SearchRegion) -> Result<Vec<ZeroRecord>> {
    positive_gamma(gamma)?;
    let tol = 1e-10;
    let mut out = Vec::new();
    for fun in [SingleStep::Plus(gamma), SingleStep::Minus(gamma)] {
        for rec in find_zeros_with(&fun, region, tol)? {
            let rec = classify_with(&fun, rec, gamma)?;
            if rec.classification == Classification::SpectralSingularity {
                check_real_single_step_zero(fun, rec.k.re, gamma)?;
            }
            out.push(rec);
        }
    }
    Ok(out)
}

/// `u ∈ (0,1)` from a real wavenumber via `k = (β/2)√(u⁻² − u²)`.
pub fn u_from_k(k: f64, beta: f64) -> f64 {
    let r = (2.0 * k * k + (4.0 * k.powi(4) + beta.powi(4)).sqrt()).sqrt();
    beta / r
}

/// Root `u0` of `√(1 − u⁴) = tanh(βu/2)` and the residual of the companion
/// equation `√(1 − u⁴) cos(β/2u) − u² sin(β/2u)` there. `F+` has a real
/// zero exactly when the residual vanishes, at `k = (β/2)√(u0⁻² − u0²) > 0`;
/// `F-` then vanishes at `-k`.
pub fn single_step_real_condition(beta: f64) -> (f64, f64) {
    let h = |u: f64| (1.0 - u.powi(4)).sqrt() - (0.5 * beta * u).tanh();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let u = 0.5 * (lo + hi);
    let a = 0.5 * beta / u;
    (u, (1.0 - u.powi(4)).sqrt() * a.cos() - u * u * a.sin())
}

fn check_real_single_step_zero(fun: SingleStep, k: f64, gamma: f64) -> Result<()> {
    let sign_ok = match fun {
        SingleStep::Plus(_) => k > 0.0,
        SingleStep::Minus(_) => k < 0.0,
    };
    let beta = (2.0 * gamma).sqrt();
    let u = u_from_k(k.abs(), beta);
    let r = (1.0 - u.powi(4)).sqrt() - (0.5 * beta * u).tanh();
    if !sign_ok || r.abs() > 1e-6 {
        return Err(Error::Consistency {
            module: Module::Asymptotics,
            msg: format!("real zero k = {k} of {fun:?} fails the reduced real system (residual {r})"),
        });
    }
    Ok(())
}

/// Lower-half-plane zeros of `F+` and `F-` and the constants that govern
/// how zeros of `F` approach them as `ell` grows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeEllTargets {
    pub targets: Vec<LargeEllTarget>,
    pub constants: Option<ConvergenceConstants>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeEllTarget {
    pub k: Complex64,
    /// Exponential convergence rate `2 Im K + d` (negative).
    pub rate: f64,
    pub from_plus: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub d: f64,
}

impl ConvergenceConstants {
    /// Height below which `F` has exactly as many zeros as `F- F+`, for
    /// `ell` large enough.
    pub fn separation_line(&self, ell: f64) -> f64 {
        -(ell * self.c1.sqrt() / self.c2.sqrt()).ln() / (2.0 * (1.0 - 2f64.ln()) * ell)
    }

    /// Bound on `|k(ell) - K|` for a target `K`.
    pub fn distance_bound(&self, target: &LargeEllTarget, ell: f64) -> f64 {
        (self.c1 / self.c4).sqrt() * (target.rate * ell).exp()
    }
}

/// Grid resolution for the constant scans.
pub const CONSTANT_GRID: usize = 400;

pub fn large_ell_targets(gamma: f64) -> Result<LargeEllTargets> {
    positive_gamma(gamma)?;
    let rad = single_step_radius(gamma) * 1.01;
    let region = SearchRegion::new(-rad, rad, -rad, -1e-9)?;
    let mut ks: Vec<(Complex64, bool)> = Vec::new();
    for (fun, plus) in [(SingleStep::Plus(gamma), true), (SingleStep::Minus(gamma), false)] {
        for rec in find_zeros_with(&fun, region, 1e-11)? {
            ks.push((rec.k, plus));
        }
    }
    if ks.is_empty() {
        return Ok(LargeEllTargets {
            targets: Vec::new(),
            constants: None,
        });
    }
    // coinciding points are identified
    let mut distinct: Vec<Complex64> = Vec::new();
    for (k, _) in &ks {
        if !distinct.iter().any(|q| (q - k).norm() < 1e-9 * k.norm().max(1.0)) {
            distinct.push(*k);
        }
    }
    let mut d = f64::INFINITY;
    for (i, a) in distinct.iter().enumerate() {
        d = d.min(a.im.abs());
        for b in &distinct[i + 1..] {
            d = d.min((a - b).norm());
        }
    }
    let targets = ks
        .iter()
        .map(|&(k, from_plus)| LargeEllTarget {
            k,
            rate: 2.0 * k.im + d,
            from_plus,
        })
        .collect();
    let constants = convergence_constants(gamma, &distinct, d)?;
    Ok(LargeEllTargets {
        targets,
        constants: Some(constants),
    })
}

fn product_abs(k: Complex64, gamma: f64) -> f64 {
    match eval_factors(k, gamma) {
        Ok(p) => (p.minus.f * p.plus.f).norm() * (p.minus.log_scale + p.plus.log_scale).exp(),
        Err(_) => f64::NAN,
    }
}

/// Minimum of `f` over a box with a grid scan followed by three rounds of
/// local refinement around the best node.
fn grid_min(f: &(dyn Fn(f64, f64) -> f64 + Sync), x: (f64, f64), y: (f64, f64), n: usize) -> f64 {
    let scan = |x0: f64, x1: f64, y0: f64, y1: f64, m: usize| -> (f64, f64, f64) {
        (0..=m)
            .into_par_iter()
            .map(|i| {
                let xi = x0 + (x1 - x0) * i as f64 / m as f64;
                let mut best = (f64::INFINITY, xi, y0);
                for j in 0..=m {
                    let yj = y0 + (y1 - y0) * j as f64 / m as f64;
                    let v = f(xi, yj);
                    if v < best.0 {
                        best = (v, xi, yj);
                    }
                }
                best
            })
            .reduce(|| (f64::INFINITY, x0, y0), |a, b| if b.0 < a.0 { b } else { a })
    };
    let (mut v, mut bx, mut by) = scan(x.0, x.1, y.0, y.1, n);
    let (mut hx, mut hy) = ((x.1 - x.0) / n as f64, (y.1 - y.0) / n as f64);
    for _ in 0..3 {
        let x0 = (bx - hx).max(x.0);
        let x1 = (bx + hx).min(x.1);
        let y0 = (by - hy).max(y.0);
        let y1 = (by + hy).min(y.1);
        let r = scan(x0, x1, y0, y1, 20);
        if r.0 < v {
            (v, bx, by) = r;
        }
        hx /= 10.0;
        hy /= 10.0;
    }
    v
}

fn convergence_constants(gamma: f64, targets: &[Complex64], d: f64) -> Result<ConvergenceConstants> {
    let r = location_radius(gamma) / gamma.sqrt();
    let rg = gamma.sqrt() * r;
    let c1 = gamma * gamma + (1.0 + r * r).recip() * ((1.0 + r * r) * gamma).sqrt().sinh().powi(2);
    let n = CONSTANT_GRID;
    let c2 = grid_min(
        &|x, y| product_abs(Complex64::new(x, y), gamma) / (y * y),
        (-rg, rg),
        (-0.5 * d, -0.5 * d / n as f64),
        n,
    );
    let c3 = grid_min(
        &|t, _| product_abs(Complex64::from_polar(rg, -PI * t), gamma),
        (0.0, 1.0),
        (0.0, 0.0),
        n,
    );
    let mut c4 = f64::INFINITY;
    for k0 in targets {
        let m = grid_min(
            &|rho, phi| {
                let z = Complex64::from_polar(rho, phi);
                product_abs(k0 + z, gamma) / (rho * rho)
            },
            (0.5 * d / n as f64, 0.5 * d),
            (0.0, 2.0 * PI),
            n,
        );
        c4 = c4.min(m);
    }
    Ok(ConvergenceConstants { c1, c2, c3, c4, d })
}
