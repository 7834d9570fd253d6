use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorizer::{Branch, CompoundFactorization, KDVB_B};

/// Trajectories are cut off once `|U|` passes this bound.
pub const BLOW_UP: f64 = 1e12;

/// State vector for [`rk4`].
pub trait State: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl State for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl State for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub thetas: Vec<f64>,
    pub values: Vec<T>,
    /// The solution left the finite range before the end of the span; the
    /// trajectory stops at the last good step.
    pub blew_up: bool,
}

impl<T: Copy> Trajectory<T> {
    pub fn last(&self) -> (f64, T) {
        let i = self.values.len() - 1;
        (self.thetas[i], self.values[i])
    }
}

/// Classical fourth-order Runge-Kutta from `span.0` to `span.1`. The step is
/// shrunk so that a whole number of steps lands on the end point; spans may
/// run backwards.
pub fn rk4<T, F>(f: F, y0: T, span: (f64, f64), step: f64) -> Result<Trajectory<T>>
where
    T: State,
    F: Fn(f64, T) -> T,
{
    let (a, b) = span;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput("integration span must be finite".into()));
    }
    if !y0.magnitude().is_finite() {
        return Err(Error::InvalidInput("initial value must be finite".into()));
    }
    let n = ((b - a).abs() / step).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut out = Trajectory { thetas: vec![a], values: vec![y0], blew_up: false };
    let mut y = y0;
    for i in 0..n {
        let t = a + h * i as f64;
        let k1 = f(t, y);
        let k2 = f(t + h / 2.0, y + k1 * (h / 2.0));
        let k3 = f(t + h / 2.0, y + k2 * (h / 2.0));
        let k4 = f(t + h, y + k3 * h);
        let next = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let m = next.magnitude();
        if !m.is_finite() || m > BLOW_UP {
            out.blew_up = true;
            break;
        }
        y = next;
        out.thetas.push(if i == n - 1 { b } else { t + h });
        out.values.push(y);
    }
    Ok(out)
}

/// Integrates `U' = A U^{3/2} + (2/5) U`, `A = ±√(2/3)`, for real `U > 0`.
pub fn oracle_integrate_bernoulli(branch: Branch, u0: f64, span: (f64, f64), step: f64) -> Result<Trajectory<f64>> {
    if !(u0 > 0.0) {
        return Err(Error::InvalidInput(format!("Bernoulli oracle needs U₀ > 0, got {u0}")));
    }
    let a = branch.sign() * (2.0f64 / 3.0).sqrt();
    // a negative U can only arise from overshoot; the sqrt then yields NaN and stops the run
    rk4(move |_, u: f64| a * u * u.sqrt() + KDVB_B * u, u0, span, step)
}

/// Integrates the Riccati equation `U' = A U² + B U + C` of a compound
/// factorization in the complex plane.
pub fn oracle_integrate_riccati(
    fact: &CompoundFactorization,
    u0: Complex64,
    span: (f64, f64),
    step: f64,
) -> Result<Trajectory<Complex64>> {
    let (a, b, c) = (fact.a, fact.b, fact.c);
    rk4(move |_, u: Complex64| u * u * a + u * b + c, u0, span, step)
}
