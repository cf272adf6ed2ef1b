//! The characteristic function of the double-step waveguide
//!
//! ```text
//! F(k, l, g)  = F-(k, g) F+(k, g) - exp(-4ikl) F0(k, g)
//! F±(k, g)    = 2ik cos √(k² ± ig) - (2k² ± ig) sin √(k² ± ig) / √(k² ± ig)
//! F0(k, g)    = g² · [sin √(k² - ig) / √(k² - ig)] · [sin √(k² + ig) / √(k² + ig)]
//! ```
//!
//! together with its single-step factors and the reduced function
//! `G = F / k`. All evaluators return analytic `k`-derivatives and a common
//! exponential scale.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Module, Result};
use crate::kernels::{kernel_eval, EntireKernelValue};

/// Gain-and-loss amplitude `gamma` and half gain-to-loss distance `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub ell: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, ell: f64) -> Result<Self> {
        if !gamma.is_finite() || !ell.is_finite() {
            return Err(Error::domain(Module::Model, "parameters must be finite"));
        }
        if gamma < 0.0 || ell < 0.0 {
            return Err(Error::domain(
                Module::Model,
                format!("gamma and ell must be non-negative, got gamma={gamma}, ell={ell}"),
            ));
        }
        Ok(ModelParams { gamma, ell })
    }
}

/// A value and its `k`-derivative, both multiplied by `exp(-log_scale)`.
///
/// `magnitude` is the size of the terms that were summed to form `f`
/// (same scaling), so `|f| / magnitude` is a cancellation-aware relative
/// residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FValue {
    pub f: Complex64,
    pub df: Complex64,
    pub log_scale: f64,
    pub magnitude: f64,
}

impl FValue {
    /// `f · exp(log_scale)`; may overflow.
    pub fn value(&self) -> Complex64 {
        self.f * self.log_scale.exp()
    }

    pub fn derivative(&self) -> Complex64 {
        self.df * self.log_scale.exp()
    }

    /// Newton step `F / F'`, independent of the scale.
    pub fn newton_step(&self) -> Complex64 {
        self.f / self.df
    }

    /// Logarithmic derivative `F' / F`.
    pub fn log_derivative(&self) -> Complex64 {
        self.df / self.f
    }

    /// `|f| / magnitude`, or `|f|` when the terms themselves vanish.
    pub fn relative_residual(&self) -> f64 {
        if self.magnitude > 0.0 {
            self.f.norm() / self.magnitude
        } else {
            self.f.norm()
        }
    }

    /// Re-express in the scale `log_scale`.
    pub fn rescaled(&self, log_scale: f64) -> FValue {
        let factor = (self.log_scale - log_scale).exp();
        FValue {
            f: self.f * factor,
            df: self.df * factor,
            log_scale,
            magnitude: self.magnitude * factor,
        }
    }
}

fn check_finite(k: Complex64, gamma: f64) -> Result<()> {
    if !k.re.is_finite() || !k.im.is_finite() || !gamma.is_finite() {
        return Err(Error::domain(
            Module::Model,
            format!("non-finite input k={k}, gamma={gamma}"),
        ));
    }
    Ok(())
}

/// `+1` selects `F+` (argument `k² + ig`), `-1` selects `F-`.
fn single_step(k: Complex64, gamma: f64, sign: f64, kern: &EntireKernelValue) -> FValue {
    let i = Complex64::i();
    let a = 2.0 * k * k + sign * i * gamma;
    let two_ik = 2.0 * i * k;
    let f = two_ik * kern.c - a * kern.s;
    // d/dk: z = k² ± ig, dz/dk = 2k
    let df = 2.0 * i * kern.c + two_ik * kern.dc * (2.0 * k) - 4.0 * k * kern.s - a * kern.ds * (2.0 * k);
    FValue {
        f,
        df,
        log_scale: kern.log_scale,
        magnitude: (two_ik * kern.c).norm() + (a * kern.s).norm(),
    }
}

struct Kernels {
    minus: EntireKernelValue,
    plus: EntireKernelValue,
}

/// Kernel values larger than this are renormalized so that products of
/// two of them stay finite.
const RENORM_LIMIT: f64 = 1e100;

fn renormalized(mut v: EntireKernelValue) -> EntireKernelValue {
    let size = v.c.norm().max(v.s.norm());
    if size > RENORM_LIMIT {
        v.c /= size;
        v.s /= size;
        v.dc /= size;
        v.ds /= size;
        v.log_scale += size.ln();
    }
    v
}

fn kernels(k: Complex64, gamma: f64) -> Result<Kernels> {
    let k2 = k * k;
    let ig = Complex64::new(0.0, gamma);
    Ok(Kernels {
        minus: renormalized(kernel_eval(k2 - ig)?),
        plus: renormalized(kernel_eval(k2 + ig)?),
    })
}

/// `F-(k, gamma)` with its derivative.
pub fn eval_f_minus(k: Complex64, gamma: f64) -> Result<FValue> {
    check_finite(k, gamma)?;
    let kern = renormalized(kernel_eval(k * k - Complex64::new(0.0, gamma))?);
    Ok(single_step(k, gamma, -1.0, &kern))
}

/// `F+(k, gamma)` with its derivative.
pub fn eval_f_plus(k: Complex64, gamma: f64) -> Result<FValue> {
    check_finite(k, gamma)?;
    let kern = renormalized(kernel_eval(k * k + Complex64::new(0.0, gamma))?);
    Ok(single_step(k, gamma, 1.0, &kern))
}

fn f0_from(k: Complex64, gamma: f64, kern: &Kernels) -> FValue {
    let g2 = gamma * gamma;
    let two_k = 2.0 * k;
    let f = g2 * kern.minus.s * kern.plus.s;
    let df = g2 * (kern.minus.ds * two_k * kern.plus.s + kern.minus.s * kern.plus.ds * two_k);
    FValue {
        f,
        df,
        log_scale: kern.minus.log_scale + kern.plus.log_scale,
        magnitude: f.norm(),
    }
}

/// `F0(k, gamma)` with its derivative.
pub fn eval_f0(k: Complex64, gamma: f64) -> Result<FValue> {
    check_finite(k, gamma)?;
    let kern = kernels(k, gamma)?;
    Ok(f0_from(k, gamma, &kern))
}

/// The three pieces of `F` at one point, sharing the kernel evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Factors {
    pub minus: FValue,
    pub plus: FValue,
    pub f0: FValue,
}

pub fn eval_factors(k: Complex64, gamma: f64) -> Result<Factors> {
    check_finite(k, gamma)?;
    let kern = kernels(k, gamma)?;
    Ok(Factors {
        minus: single_step(k, gamma, -1.0, &kern.minus),
        plus: single_step(k, gamma, 1.0, &kern.plus),
        f0: f0_from(k, gamma, &kern),
    })
}

/// `F(k, ell, gamma)` with its derivative.
///
/// The factor `exp(max(0, 4 ell Im k))` is pulled out of both terms before
/// they are combined, so `exp(-4ik ell)` never appears unscaled.
pub fn eval_f(k: Complex64, params: ModelParams) -> Result<FValue> {
    check_finite(k, params.gamma)?;
    if !params.ell.is_finite() {
        return Err(Error::domain(Module::Model, "non-finite ell"));
    }
    let parts = eval_factors(k, params.gamma)?;
    Ok(combine(k, params.ell, &parts))
}

pub(crate) fn combine(k: Complex64, ell: f64, parts: &Factors) -> FValue {
    let i = Complex64::i();
    let (m, p, f0) = (&parts.minus, &parts.plus, &parts.f0);
    let shift = (4.0 * ell * k.im).max(0.0);
    let prod = m.f * p.f;
    let dprod = m.df * p.f + m.f * p.df;
    let e = (-4.0 * i * k * ell - shift).exp();
    let p_scale = (-shift).exp();
    let f = prod * p_scale - e * f0.f;
    let df = dprod * p_scale - e * (-4.0 * i * ell * f0.f + f0.df);
    FValue {
        f,
        df,
        log_scale: m.log_scale + p.log_scale + shift,
        magnitude: prod.norm() * p_scale + (e * f0.f).norm(),
    }
}

/// `∂F/∂ell`, in the same scale as [`eval_f`] at the same point.
pub fn eval_df_dell(k: Complex64, params: ModelParams) -> Result<Complex64> {
    let parts = eval_factors(k, params.gamma)?;
    let i = Complex64::i();
    let shift = (4.0 * params.ell * k.im).max(0.0);
    let e = (-4.0 * i * k * params.ell - shift).exp();
    Ok(4.0 * i * k * e * parts.f0.f)
}

/// Below this `|k|` the reduced function comes from the Taylor series of `F`.
pub const G_SERIES_RADIUS: f64 = 1e-4;

/// `G = F / k` with the removable singularity at `k = 0` filled in.
pub fn eval_g(k: Complex64, params: ModelParams) -> Result<FValue> {
    check_finite(k, params.gamma)?;
    if k.norm() >= G_SERIES_RADIUS {
        let fv = eval_f(k, params)?;
        return Ok(FValue {
            f: fv.f / k,
            df: (fv.df - fv.f / k) / k,
            log_scale: fv.log_scale,
            magnitude: fv.magnitude / k.norm(),
        });
    }
    let (coeffs, log_scale) = taylor_f(params)?;
    // G = sum_{j>=1} a_j k^(j-1)
    let mut g = Complex64::new(0.0, 0.0);
    let mut dg = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for j in 1..coeffs.len() {
        g += coeffs[j] * pow;
        if j + 1 < coeffs.len() {
            dg += coeffs[j + 1] * pow * (j as f64);
        }
        pow *= k;
    }
    let magnitude = coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    Ok(FValue {
        f: g,
        df: dg,
        log_scale,
        magnitude,
    })
}

/// Taylor coefficients `a_0..a_4` of `F(·, ell, gamma)` at `k = 0`, built
/// from the expansions of the kernels around `z = ±i gamma` in powers of `k²`.
pub fn taylor_f(params: ModelParams) -> Result<([Complex64; 5], f64)> {
    let gamma = params.gamma;
    let i = Complex64::i();
    let expand = |sign: f64| -> Result<([Complex64; 3], [Complex64; 3], f64)> {
        let z0 = Complex64::new(0.0, sign * gamma);
        let v = kernel_eval(z0)?;
        // c(z0 + k²) = c0 + c'(z0) k² + c''(z0)/2 k⁴, likewise for s
        let (c2, s2) = if z0.norm() <= crate::kernels::SERIES_RADIUS {
            // c'' = 1/12 - z/120, s'' = 1/60 - z/840 near 0
            let c_dd = 1.0 / 12.0 - z0 / 120.0;
            let s_dd = 1.0 / 60.0 - z0 / 840.0;
            (c_dd * 0.5, s_dd * 0.5)
        } else {
            let c_dd = -v.ds * 0.5;
            let s_dd = (v.dc - 3.0 * v.ds) / (2.0 * z0);
            (c_dd * 0.5, s_dd * 0.5)
        };
        Ok(([v.c, v.dc, c2], [v.s, v.ds, s2], v.log_scale))
    };
    let (cm, sm, lm) = expand(-1.0)?;
    let (cp, sp, lp) = expand(1.0)?;

    let single = |c: &[Complex64; 3], s: &[Complex64; 3], sign: f64| -> [Complex64; 5] {
        let ig = i * gamma * sign;
        [
            -ig * s[0],
            2.0 * i * c[0],
            -2.0 * s[0] - ig * s[1],
            2.0 * i * c[1],
            -2.0 * s[1] - ig * s[2],
        ]
    };
    let fm = single(&cm, &sm, -1.0);
    let fp = single(&cp, &sp, 1.0);
    let g2 = gamma * gamma;
    let zero = Complex64::new(0.0, 0.0);
    let f0 = [
        g2 * sm[0] * sp[0],
        zero,
        g2 * (sm[0] * sp[1] + sm[1] * sp[0]),
        zero,
        g2 * (sm[0] * sp[2] + sm[1] * sp[1] + sm[2] * sp[0]),
    ];
    let mut exp_series = [Complex64::new(1.0, 0.0); 5];
    let a = -4.0 * i * params.ell;
    for j in 1..5 {
        exp_series[j] = exp_series[j - 1] * a / (j as f64);
    }
    let mut out = [zero; 5];
    for n in 0..5 {
        for j in 0..=n {
            out[n] += fm[j] * fp[n - j] - exp_series[j] * f0[n - j];
        }
    }
    Ok((out, lm + lp))
}
