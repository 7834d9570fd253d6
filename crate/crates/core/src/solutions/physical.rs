//! Closed forms written directly in the physical variables `(x, t)`.

use num_complex::Complex64;

use super::{compound_only, eval_rational, hyperbolic, kdvb_only, rational_only, snapped_sqrt, Family};
use crate::error::{Error, Result};
use crate::params::{reduce, to_reduced_coordinate, PhysicalParams};

fn xi(x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
    Complex64::new(x - params.v * t, 0.0) - params.xi0
}

/// Pole error located at the `x` where the travelling coordinate hits `xi_pole`.
fn pole_at(xi_pole: Complex64, t: f64, params: &PhysicalParams) -> Error {
    Error::Pole { location: xi_pole + params.xi0 + params.v * t }
}

/// `v/α + (3μ²/(25αs)){[1 + tanh(μ(x − vt − ξ₀)/(10s))]² − 2}`, with `coth`
/// for the singular family.
pub fn eval_kdvb_physical(family: Family, x: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    kdvb_only(family)?;
    params.validate()?;
    let PhysicalParams { s, mu, alpha, v, .. } = *params;
    let z = xi(x, t, params) * (mu / (10.0 * s));
    let (pole, g) = match family {
        Family::KdvbRegular => (hyperbolic::tanh_pole(z), hyperbolic::tanh(z)),
        _ => (hyperbolic::coth_pole(z), hyperbolic::coth(z)),
    };
    if let Some(zp) = pole {
        return Err(pole_at(zp * (10.0 * s / mu), t, params));
    }
    let one_plus = g + 1.0;
    Ok((one_plus * one_plus - 2.0) * (3.0 * mu * mu / (25.0 * alpha * s)) + v / alpha)
}

fn require_compound_coefficients(params: &PhysicalParams) -> Result<()> {
    params.validate()?;
    if params.beta == 0.0 {
        return Err(Error::ParamDomain("compound families require beta ≠ 0".into()));
    }
    if params.beta * params.s < 0.0 {
        return Err(Error::UnsupportedDomain(format!(
            "beta·s = {} < 0 gives imaginary coefficients",
            params.beta * params.s
        )));
    }
    Ok(())
}

/// `Δ = √(18vs/μ² + 9sα²/(2βμ²) − 3)`.
pub fn physical_discriminant(params: &PhysicalParams) -> Result<f64> {
    require_compound_coefficients(params)?;
    let PhysicalParams { s, mu, alpha, beta, v, .. } = *params;
    let mu2 = mu * mu;
    snapped_sqrt(&[18.0 * v * s / mu2, 9.0 * s * alpha * alpha / (2.0 * beta * mu2), -3.0])
}

/// `−α/(2β) ± (μ/√(6βs))[1 + Δ tanh(μΔ(x − vt − ξ₀)/(6s))]`.
///
/// For `μ > 0` and `α > 0` this is the physical image of the reduced family
/// with the same label; flipping the sign of `μ` or `α` swaps the labels.
pub fn eval_compound_physical(family: Family, x: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    compound_only(family)?;
    let delta = physical_discriminant(params)?;
    let PhysicalParams { s, mu, alpha, beta, .. } = *params;
    let z = xi(x, t, params) * (mu * delta / (6.0 * s));
    if delta != 0.0 {
        if let Some(zp) = hyperbolic::tanh_pole(z) {
            return Err(pole_at(zp * (6.0 * s / (mu * delta)), t, params));
        }
    }
    let g = hyperbolic::tanh(z);
    let sign = family.label_sign();
    Ok((g * delta + 1.0) * (sign * mu / (6.0 * beta * s).sqrt()) - alpha / (2.0 * beta))
}

/// Ways of writing the rational solution in physical variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RationalForm {
    /// The reduced rational family pushed through `φ = (2μ²/(αs)) w`,
    /// `θ = μ(x − vt − ξ₀)/s`.
    Transformed,
    /// `−(α/(2β))(1 ± √(2βμ²/(3sα²))) − 6αμk₀/(2βμ ± k₀√(6sβα²)(x − vt − ξ₀))`.
    Closed,
    /// `−(α/(2β))[1 ± ε + 6εk₀/(ε ± k₀(x − vt − ξ₀))]`, `ε = μ√(2β/(3sα²))`.
    Epsilon,
}

impl RationalForm {
    pub const ALL: [RationalForm; 3] = [RationalForm::Transformed, RationalForm::Closed, RationalForm::Epsilon];

    pub fn name(self) -> &'static str {
        match self {
            RationalForm::Transformed => "transformed",
            RationalForm::Closed => "closed",
            RationalForm::Epsilon => "epsilon",
        }
    }
}

/// Velocity attached to the ε-form: `(α/(2β))²(ε² − 1)`.
///
/// Equal to the degenerate velocity `μ²/(6s) − α²/(4β)` only when `β = 1`.
pub fn epsilon_form_velocity(params: &PhysicalParams) -> Result<f64> {
    require_compound_coefficients(params)?;
    let PhysicalParams { s, mu, alpha, beta, .. } = *params;
    let eps2 = mu * mu * 2.0 * beta / (3.0 * s * alpha * alpha);
    Ok((alpha / (2.0 * beta)).powi(2) * (eps2 - 1.0))
}

fn denominator_pole(den: Complex64, scale: f64) -> bool {
    den.norm() <= hyperbolic::POLE_TOL * scale
}

/// Evaluates one of the physical rational forms at `(x, t)` using the
/// velocity stored in `params` as is.
pub fn rational_physical_form(
    form: RationalForm,
    family: Family,
    x: f64,
    t: f64,
    params: &PhysicalParams,
    k0: f64,
) -> Result<Complex64> {
    rational_only(family)?;
    require_compound_coefficients(params)?;
    let PhysicalParams { s, mu, alpha, beta, .. } = *params;
    let sign = family.label_sign();
    let xi = xi(x, t, params);
    match form {
        RationalForm::Transformed => {
            let q = reduce(params)?.q;
            let theta = to_reduced_coordinate(x, t, params)?;
            match eval_rational(family, theta, q, k0) {
                Ok(w) => Ok(w * params.amplitude_scale()),
                Err(Error::Pole { location }) => Err(pole_at(location / params.coordinate_scale(), t, params)),
                Err(e) => Err(e),
            }
        }
        RationalForm::Closed => {
            let root = (2.0 * beta * mu * mu / (3.0 * s * alpha * alpha)).sqrt();
            let constant = -(alpha / (2.0 * beta)) * (1.0 + sign * root);
            let slope = sign * k0 * (6.0 * s * beta * alpha * alpha).sqrt();
            let den = xi * slope + 2.0 * beta * mu;
            if denominator_pole(den, (2.0 * beta * mu).abs() + (xi * slope).norm()) {
                return Err(pole_at(Complex64::new(-2.0 * beta * mu / slope, 0.0), t, params));
            }
            Ok(-(den.inv()) * (6.0 * alpha * mu * k0) + constant)
        }
        RationalForm::Epsilon => {
            let eps = mu * (2.0 * beta / (3.0 * s * alpha * alpha)).sqrt();
            let den = xi * (sign * k0) + eps;
            if denominator_pole(den, eps.abs() + (xi * k0).norm()) {
                return Err(pole_at(Complex64::new(-eps / (sign * k0), 0.0), t, params));
            }
            let bracket = den.inv() * (6.0 * eps * k0) + 1.0 + sign * eps;
            Ok(bracket * (-alpha / (2.0 * beta)))
        }
    }
}

/// Physical rational family; the velocity must sit on the degenerate line
/// `v = μ²/(6s) − α²/(4β)`, i.e. Δ = 0.
///
/// Evaluates [`RationalForm::Transformed`], the only form that satisfies the
/// PDE for every `μ` and `s` (see the rational audit in `verify`).
pub fn eval_rational_physical(
    family: Family,
    x: f64,
    t: f64,
    params: &PhysicalParams,
    k0: f64,
) -> Result<Complex64> {
    rational_only(family)?;
    if physical_discriminant(params)? != 0.0 {
        return Err(Error::ParamDomain(format!(
            "rational family requires v = {}, got {}",
            params.degenerate_velocity()?,
            params.v
        )));
    }
    rational_physical_form(RationalForm::Transformed, family, x, t, params, k0)
}
