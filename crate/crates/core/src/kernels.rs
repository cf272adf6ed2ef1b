//! Entire building blocks `cos √z` and `sin √z / √z`.
//!
//! Both functions are even in `√z`, so they are entire in `z` and do not
//! depend on which square root is taken. Small arguments go through the
//! power series in `z`; large `|Im √z|` is returned in scaled form so that
//! callers can combine products without overflow.

use num_complex::Complex64;

use crate::error::{Error, Module, Result};

/// Below this `|z|` the values come from the power series.
pub const SERIES_RADIUS: f64 = 1e-2;
/// Below this `|z|` the derivative of `sin √z / √z` comes from its series;
/// the closed form `(c - s) / 2z` cancels badly there.
const DS_SERIES_RADIUS: f64 = 1.0;
/// `|Im √z|` above which values are returned scaled by `exp(-|Im √z|)`.
pub const SCALE_THRESHOLD: f64 = 700.0;

/// `c = cos √z`, `s = sin √z / √z` and their `z`-derivatives.
///
/// The true values are the stored ones times `exp(log_scale)`; `log_scale`
/// is zero unless `|Im √z|` exceeds [`SCALE_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntireKernelValue {
    pub c: Complex64,
    pub s: Complex64,
    pub dc: Complex64,
    pub ds: Complex64,
    pub log_scale: f64,
}

impl EntireKernelValue {
    /// Values with the scale folded back in. Overflows to infinity when
    /// the scaled form was needed.
    pub fn unscaled(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        let f = self.log_scale.exp();
        (self.c * f, self.s * f, self.dc * f, self.ds * f)
    }
}

/// Evaluate the kernels at `z` using the principal square root.
pub fn kernel_eval(z: Complex64) -> Result<EntireKernelValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(Module::Kernels, format!("non-finite argument {z}")));
    }
    Ok(kernel_eval_with_root(z, z.sqrt()))
}

/// Evaluate the kernels at `z` given a square root `w` of `z` (either sign).
///
/// No validation; `w * w` is assumed to equal `z`.
pub fn kernel_eval_with_root(z: Complex64, w: Complex64) -> EntireKernelValue {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        let (c, s) = series_cs(z);
        return EntireKernelValue {
            c,
            s,
            dc: -s * 0.5,
            ds: series_ds(z),
            log_scale: 0.0,
        };
    }

    let t = w.im.abs();
    let (c, s, log_scale) = if t > SCALE_THRESHOLD {
        let i = Complex64::i();
        let e_plus = (i * w - t).exp();
        let e_minus = (-i * w - t).exp();
        ((e_plus + e_minus) * 0.5, (e_plus - e_minus) / (2.0 * i * w), t)
    } else {
        (w.cos(), w.sin() / w, 0.0)
    };

    let ds = if r <= DS_SERIES_RADIUS {
        series_ds(z)
    } else {
        (c - s) / (2.0 * z)
    };

    EntireKernelValue {
        c,
        s,
        dc: -s * 0.5,
        ds,
        log_scale,
    }
}

fn series_cs(z: Complex64) -> (Complex64, Complex64) {
    // c = sum (-z)^n / (2n)!,  s = sum (-z)^n / (2n+1)!
    let mz = -z;
    let mut term_c = Complex64::new(1.0, 0.0);
    let mut term_s = Complex64::new(1.0, 0.0);
    let mut c = term_c;
    let mut s = term_s;
    for n in 1..12 {
        let nf = n as f64;
        term_c *= mz / ((2.0 * nf - 1.0) * (2.0 * nf));
        term_s *= mz / ((2.0 * nf) * (2.0 * nf + 1.0));
        c += term_c;
        s += term_s;
    }
    (c, s)
}

fn series_ds(z: Complex64) -> Complex64 {
    // d/dz sum (-1)^n z^n / (2n+1)! = sum_{n>=1} (-1)^n n z^(n-1) / (2n+1)!
    let mut base = Complex64::new(-1.0 / 6.0, 0.0); // (-1)^1 z^0 / 3!
    let mut ds = base;
    for n in 2..22 {
        let nf = n as f64;
        base *= -z / ((2.0 * nf) * (2.0 * nf + 1.0));
        ds += base * nf;
    }
    ds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_values() {
        let v = kernel_eval(c64(0.0, 0.0)).unwrap();
        assert_eq!(v.c, c64(1.0, 0.0));
        assert_eq!(v.s, c64(1.0, 0.0));
        assert_eq!(v.dc, c64(-0.5, 0.0));
        assert!((v.ds - c64(-1.0 / 6.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn pi_squared() {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let v = kernel_eval(c64(pi2, 0.0)).unwrap();
        assert!((v.c - c64(-1.0, 0.0)).norm() < 1e-15);
        assert!(v.s.norm() < 1e-15);
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        for &arg in &[0.0, 0.7, 1.9, 3.0, -2.2] {
            let z = Complex64::from_polar(SERIES_RADIUS, arg);
            let (c, s) = series_cs(z);
            let w = z.sqrt();
            assert!((c - w.cos()).norm() < 1e-15);
            assert!((s - w.sin() / w).norm() < 1e-15);
        }
    }

    #[test]
    fn ds_series_matches_closed_form_outside_cancellation() {
        let z = c64(0.9, -0.3);
        let w = z.sqrt();
        let closed = (w.cos() - w.sin() / w) / (2.0 * z);
        assert!((series_ds(z) - closed).norm() < 1e-14);
    }

    #[test]
    fn scaled_branch_is_consistent() {
        // |Im sqrt z| just above and below the threshold
        let w_lo = c64(3.0, 699.0);
        let w_hi = c64(3.0, 701.0);
        let lo = kernel_eval(w_lo * w_lo).unwrap();
        let hi = kernel_eval(w_hi * w_hi).unwrap();
        assert_eq!(lo.log_scale, 0.0);
        assert!(hi.log_scale > 700.0);
        // cos w / cosh(Im w) has modulus ~1 in both cases
        let lo_mod = lo.c.norm() / (699.0f64).cosh();
        let hi_mod = hi.c.norm() * 2.0;
        assert!((lo_mod - 1.0).abs() < 1e-3);
        assert!((hi_mod - 1.0).abs() < 1e-3);
    }

    #[test]
    fn non_finite_input_rejected() {
        assert!(kernel_eval(c64(f64::NAN, 0.0)).is_err());
        assert!(kernel_eval(c64(0.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        let z = c64(-3.5, 7.25);
        let a = kernel_eval(z).unwrap();
        let b = kernel_eval(z.conj()).unwrap();
        assert!((a.c.conj() - b.c).norm() < 1e-13 * a.c.norm());
        assert!((a.s.conj() - b.s).norm() < 1e-13 * a.s.norm());
        assert!((a.ds.conj() - b.ds).norm() < 1e-13 * a.ds.norm());
    }
}
