use num_complex::Complex64;

use super::{Equation, ResidualReport};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::solutions::jet::{differentiate, Poly};
use crate::solutions::{Family, WaveSolution};

fn real(theta: f64) -> Complex64 {
    Complex64::new(theta, 0.0)
}

/// Maps a pole to `None`, propagates everything else.
fn skip_pole<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Pole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `w'' − w' + p w − w² − q w³ − k` with exact derivatives of the closed form.
pub fn residual_first_integral(solution: &WaveSolution, theta_grid: &[f64]) -> Result<ResidualReport> {
    let (p, q, k) = (solution.p(), solution.q(), solution.k());
    let samples = theta_grid
        .iter()
        .map(|&th| {
            let jet = skip_pole(solution.jet(real(th)))?;
            let r = jet.map(|j| (j.d2 - j.d1 + j.w * p - j.w * j.w - j.w * j.w * j.w * q - k).norm());
            Ok((real(th), r))
        })
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_samples(Equation::OdeL8, samples)
}

/// `w''' − w'' + (p − 2w − 3q w²) w'` evaluated pointwise from the jet.
fn l6_pointwise(solution: &WaveSolution, theta: f64) -> Result<Option<Complex64>> {
    let (p, q) = (solution.p(), solution.q());
    Ok(skip_pole(solution.jet(real(theta)))?
        .map(|j| j.d3 - j.d2 + (Complex64::new(p, 0.0) - j.w * 2.0 - j.w * j.w * (3.0 * q)) * j.d1))
}

/// Residual of the third-order reduced ODE.
pub fn l6_residual(solution: &WaveSolution, theta_grid: &[f64]) -> Result<ResidualReport> {
    let samples = theta_grid
        .iter()
        .map(|&th| Ok((real(th), l6_pointwise(solution, th)?.map(|r| r.norm()))))
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_samples(Equation::OdeL6, samples)
}

/// Compares `d/dθ [w'' − w' + p w − w² − q w³]` with the third-order ODE
/// expression. The first is obtained by differentiating the first-integral
/// expression as a polynomial in the generator, the second pointwise from the
/// jet. The two agree for any smooth profile, solution or not.
pub fn check_first_integral_consistency(solution: &WaveSolution, theta_grid: &[f64]) -> Result<ResidualReport> {
    let profile = solution.profile();
    let (p, q) = (solution.p(), solution.q());
    let d = profile.derivatives(2);
    let w = &d[0];
    let w2 = w * w;
    let w3 = &w2 * w;
    let first_integral = &(&(&(&d[2] - &d[1]) + &w.scale(p)) - &w2) - &w3.scale(q);
    let derivative: Poly = differentiate(&first_integral, &profile.flow);

    let samples = theta_grid
        .iter()
        .map(|&th| {
            let g = skip_pole(solution.generator(real(th)))?;
            let pointwise = l6_pointwise(solution, th)?;
            let r = match (g, pointwise) {
                (Some(g), Some(b)) => Some((derivative.eval(g) - b).norm()),
                _ => None,
            };
            Ok((real(th), r))
        })
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_samples(Equation::OdeL6, samples)
}

/// How spatial and temporal derivatives are obtained in [`residual_pde`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdeMode {
    /// Exact derivatives of the closed form.
    Analytic,
    /// Second-order central differences with step `h` in both `x` and `t`
    /// (five-point stencil for `u_xxx`).
    FiniteDifference { h: f64 },
}

fn pde_equation(params: &PhysicalParams) -> Equation {
    if params.beta == 0.0 {
        Equation::PdeL1
    } else {
        Equation::PdeL2
    }
}

fn pde_expression(
    params: &PhysicalParams,
    u: Complex64,
    u_t: Complex64,
    u_x: Complex64,
    u_xx: Complex64,
    u_xxx: Complex64,
) -> Complex64 {
    u_t - u_xxx * params.s + u_xx * params.mu + u * u_x * params.alpha + u * u * u_x * params.beta
}

/// Central-difference derivatives of `u` at `(x, t)`; `None` if any stencil
/// point is a pole.
fn stencil<F>(u: &F, x: f64, t: f64, h: f64) -> Result<Option<[Complex64; 5]>>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let pts = [
        u(x - 2.0 * h, t),
        u(x - h, t),
        u(x, t),
        u(x + h, t),
        u(x + 2.0 * h, t),
        u(x, t - h),
        u(x, t + h),
    ];
    let mut vals = [Complex64::new(0.0, 0.0); 7];
    for (slot, r) in vals.iter_mut().zip(pts) {
        match skip_pole(r)? {
            Some(v) => *slot = v,
            None => return Ok(None),
        }
    }
    let [m2, m1, c, p1, p2, tm, tp] = vals;
    let u_x = (p1 - m1) / (2.0 * h);
    let u_xx = (p1 - c * 2.0 + m1) / (h * h);
    let u_xxx = (p2 - p1 * 2.0 + m1 * 2.0 - m2) / (2.0 * h * h * h);
    let u_t = (tp - tm) / (2.0 * h);
    Ok(Some([c, u_t, u_x, u_xx, u_xxx]))
}

/// Finite-difference PDE residual of an arbitrary field `u(x, t)`.
pub fn residual_pde_fn<F>(u: F, xt_grid: &[(f64, f64)], params: &PhysicalParams, h: f64) -> Result<ResidualReport>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    params.validate()?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("finite-difference step must be positive, got {h}")));
    }
    let samples = xt_grid
        .iter()
        .map(|&(x, t)| {
            let r = stencil(&u, x, t, h)?
                .map(|[c, ut, ux, uxx, uxxx]| pde_expression(params, c, ut, ux, uxx, uxxx).norm());
            Ok((Complex64::new(x, t), r))
        })
        .collect::<Result<Vec<_>>>()?;
    ResidualReport::from_samples(pde_equation(params), samples)
}

/// Characteristic width in `x` of the family's front, if it has one.
fn front_width(solution: &WaveSolution, params: &PhysicalParams) -> Option<f64> {
    let (s, mu) = (params.s.abs(), params.mu.abs());
    match solution.family() {
        Family::KdvbRegular | Family::KdvbSingular => Some(10.0 * s / mu),
        Family::CompoundTanhPlus | Family::CompoundTanhMinus if solution.discriminant() > 0.0 => {
            Some(6.0 * s / (mu * solution.discriminant()))
        }
        _ => None,
    }
}

/// Residual of `u_t − s u_xxx + μ u_xx + α u u_x + β u² u_x` for the
/// solution mapped to physical variables with `params`.
///
/// In finite-difference mode the report carries a warning when `h` exceeds a
/// twentieth of the front width.
pub fn residual_pde(
    solution: &WaveSolution,
    xt_grid: &[(f64, f64)],
    params: &PhysicalParams,
    mode: PdeMode,
) -> Result<ResidualReport> {
    match mode {
        PdeMode::FiniteDifference { h } => {
            let mut report = residual_pde_fn(|x, t| solution.eval_physical_with(x, t, params), xt_grid, params, h)?;
            if let Some(width) = front_width(solution, params) {
                if h > width / 20.0 {
                    report.warning = Some(format!("step h = {h} is coarse for front width {width:.3e}"));
                }
            }
            Ok(report)
        }
        PdeMode::Analytic => {
            params.validate()?;
            let samples = xt_grid
                .iter()
                .map(|&(x, t)| {
                    let r = skip_pole(solution.physical_jet_with(x, t, params))?.map(|j| {
                        let u_t = -j.d1 * params.v;
                        pde_expression(params, j.w, u_t, j.d1, j.d2, j.d3).norm()
                    });
                    Ok((Complex64::new(x, t), r))
                })
                .collect::<Result<Vec<_>>>()?;
            ResidualReport::from_samples(pde_equation(params), samples)
        }
    }
}
