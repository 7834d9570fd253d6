//! Complex `tanh`/`coth` that stay finite for large `|Re z|` and report poles.
//!
//! `num_complex`'s `tanh` goes through `sinh(2x)/cosh(2x)` and returns NaN once
//! `|Re z|` exceeds ~355. Here the Kahan formulation is used, with a saturated
//! branch for `|Re z| > SATURATION`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

/// Beyond this `|Re z|`, `tanh z = ±1 + O(e^{-2|Re z|})` to full precision.
const SATURATION: f64 = 20.0;

/// Relative distance at which an argument counts as sitting on a pole.
pub const POLE_TOL: f64 = 1e-12;

pub fn tanh(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    if x.abs() > SATURATION {
        let e = (-2.0 * x.abs()).exp();
        return Complex64::new(x.signum(), 4.0 * y.sin() * y.cos() * e);
    }
    let t = y.tan();
    let beta = 1.0 + t * t;
    let s = x.sinh();
    let rho = (1.0 + s * s).sqrt();
    let denom = 1.0 + beta * s * s;
    if beta.is_finite() && denom.is_finite() {
        Complex64::new(beta * rho * s / denom, t / denom)
    } else {
        // |tan y| overflowed: y sits next to π/2 + nπ
        let (two_x, two_y) = (2.0 * x, 2.0 * y);
        let d = two_x.cosh() + two_y.cos();
        Complex64::new(two_x.sinh() / d, two_y.sin() / d)
    }
}

pub fn coth(z: Complex64) -> Complex64 {
    tanh(z).inv()
}

/// Nearest point of `offset + iπℤ` if `z` lies on it within [`POLE_TOL`].
fn near_lattice(z: Complex64, offset: f64) -> Option<Complex64> {
    let scale = 1.0 + z.norm();
    let n = ((z.im - offset) / PI).round();
    let pole = Complex64::new(0.0, offset + n * PI);
    ((z - pole).norm() <= POLE_TOL * scale).then_some(pole)
}

/// Pole of `tanh` at `z` (the set `i(π/2 + πℤ)`), if any.
pub fn tanh_pole(z: Complex64) -> Option<Complex64> {
    near_lattice(z, FRAC_PI_2)
}

/// Pole of `coth` at `z` (the set `iπℤ`), if any.
pub fn coth_pole(z: Complex64) -> Option<Complex64> {
    near_lattice(z, 0.0)
}
