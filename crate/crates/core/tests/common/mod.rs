#![allow(dead_code)]

pub mod reference;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a - b| / max(|b|, floor)`.
pub fn rel(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

/// Uniform point of the disc `|z| <= r`.
pub fn disc_point<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    let rad = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rad, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Direct transcription of the characteristic function with plain complex
/// `cos`/`sin`; no scaling, no series.
pub fn naive_f(k: Complex64, gamma: f64, ell: f64) -> Complex64 {
    let i = Complex64::i();
    let c = |z: Complex64| z.sqrt().cos();
    let s = |z: Complex64| {
        let w = z.sqrt();
        if w.norm() < 1e-8 { Complex64::new(1.0, 0.0) } else { w.sin() / w }
    };
    let zm = k * k - i * gamma;
    let zp = k * k + i * gamma;
    let fm = 2.0 * i * k * c(zm) - (2.0 * k * k - i * gamma) * s(zm);
    let fp = 2.0 * i * k * c(zp) - (2.0 * k * k + i * gamma) * s(zp);
    let f0 = gamma * gamma * s(zm) * s(zp);
    fm * fp - (-4.0 * i * k * ell).exp() * f0
}
