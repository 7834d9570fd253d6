//! Closed-form travelling-wave families.
//!
//! Reduced variables (`θ`, `w`) are the primary evaluation domain; physical
//! evaluators either map a reduced solution through the change of variables
//! or implement the physical closed form directly, and the two are
//! cross-checked in the tests.
//!
//! | family              | reduced form                                           |
//! |---------------------|--------------------------------------------------------|
//! | `KdvbRegular`       | `δ + (3/50)[1 + tanh((θ−θ₀)/10)]²`                      |
//! | `KdvbSingular`      | `δ + (3/50)[1 + coth((θ−θ₀)/10)]²`                      |
//! | `CompoundTanh±`     | `−1/(3q) ± [1 + Δ tanh(Δ(θ−θ₀)/6)]/(3√(2q))`            |
//! | `Rational±`         | `−(k₀/A)/(A + k₀(θ−θ₀)) − (A+1)/(6A²)`, `A = ±√(q/2)`   |
//! | `Constant(±)`       | `−(A+1)/(6A²)`                                          |
//!
//! with `Δ = √(18p + 6/q − 3)`. The rational families live on `Δ = 0`.

pub mod hyperbolic;
pub mod jet;
mod physical;
mod sweep;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorizer::{factorize_compound, factorize_kdvb, Branch, KDVB_P_OFFSET};
use crate::params::{reduce, PhysicalParams, ReducedParams};

pub use jet::{Jet, Poly, Profile};
pub use physical::{
    eval_compound_physical, eval_kdvb_physical, eval_rational_physical, epsilon_form_velocity,
    physical_discriminant, rational_physical_form, RationalForm,
};
pub use sweep::{phase_sweep_surface, sample, PhaseSweep, Sample, SweepSurface};

/// Tag of a closed-form family.
///
/// The constant solution carries the sign of `A = ±√(q/2)` it was derived with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    KdvbRegular,
    KdvbSingular,
    CompoundTanhPlus,
    CompoundTanhMinus,
    RationalPlus,
    RationalMinus,
    Constant(Branch),
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::KdvbRegular,
        Family::KdvbSingular,
        Family::CompoundTanhPlus,
        Family::CompoundTanhMinus,
        Family::RationalPlus,
        Family::RationalMinus,
        Family::Constant(Branch::Plus),
        Family::Constant(Branch::Minus),
    ];

    pub fn is_kdvb(self) -> bool {
        matches!(self, Family::KdvbRegular | Family::KdvbSingular)
    }

    pub fn is_compound_tanh(self) -> bool {
        matches!(self, Family::CompoundTanhPlus | Family::CompoundTanhMinus)
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Family::RationalPlus | Family::RationalMinus)
    }

    /// Sign of the factorization coefficient `A` the family solves
    /// `U' = f₁(U) U` with.
    ///
    /// The `±` label of the compound tanh families is opposite to the sign of
    /// `A`: the tanh family `U⁺` is centred on `−B/(2A)` with `A = −√(q/2)`.
    /// For the KdVB families the regular kink goes with the minus sign.
    pub fn a_branch(self) -> Branch {
        match self {
            Family::KdvbRegular => Branch::Minus,
            Family::KdvbSingular => Branch::Plus,
            Family::CompoundTanhPlus => Branch::Minus,
            Family::CompoundTanhMinus => Branch::Plus,
            Family::RationalPlus => Branch::Plus,
            Family::RationalMinus => Branch::Minus,
            Family::Constant(b) => b,
        }
    }

    /// Sign in front of the `1/(3√(2q))` term (compound) or the `ε` term
    /// (rational physical forms).
    fn label_sign(self) -> f64 {
        match self {
            Family::CompoundTanhPlus | Family::RationalPlus => 1.0,
            Family::CompoundTanhMinus | Family::RationalMinus => -1.0,
            _ => 1.0,
        }
    }

    /// The constant the family reduces to as Δ → 0 (compound tanh families
    /// only): the one with the same sign of `A`.
    pub fn degenerate_limit(self) -> Option<Family> {
        match self {
            Family::CompoundTanhPlus | Family::CompoundTanhMinus => {
                Some(Family::Constant(self.a_branch()))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::KdvbRegular => "kdvb-regular",
            Family::KdvbSingular => "kdvb-singular",
            Family::CompoundTanhPlus => "compound-plus",
            Family::CompoundTanhMinus => "compound-minus",
            Family::RationalPlus => "rational-plus",
            Family::RationalMinus => "rational-minus",
            Family::Constant(Branch::Plus) => "constant-plus",
            Family::Constant(Branch::Minus) => "constant-minus",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| {
                let names: Vec<String> = Family::ALL.iter().map(|f| f.to_string()).collect();
                Error::InvalidInput(format!("unknown family '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

fn kdvb_only(family: Family) -> Result<()> {
    if family.is_kdvb() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{family} is not a KdVB family")))
    }
}

fn compound_only(family: Family) -> Result<()> {
    if family.is_compound_tanh() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{family} is not a compound tanh family")))
    }
}

fn rational_only(family: Family) -> Result<()> {
    if family.is_rational() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{family} is not a rational family")))
    }
}

fn positive_q(q: f64) -> Result<()> {
    if q == 0.0 {
        Err(Error::ParamDomain("compound families require q ≠ 0".into()))
    } else if q < 0.0 {
        Err(Error::UnsupportedDomain(format!("compound families with q = {q} < 0")))
    } else if !q.is_finite() {
        Err(Error::InvalidInput("q must be finite".into()))
    } else {
        Ok(())
    }
}

/// Square root of a sum of terms, with cancellation noise snapped to zero.
///
/// A sum whose magnitude is within a few ulps of the largest term is
/// indistinguishable from zero in double precision; this is what makes
/// e.g. `v = μ²/(6s) − α²/(4β)` evaluate to `Δ = 0` exactly.
pub(crate) fn snapped_sqrt(terms: &[f64]) -> Result<f64> {
    let sum: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if !sum.is_finite() {
        return Err(Error::InvalidInput("discriminant is not finite".into()));
    }
    if sum.abs() <= 8.0 * f64::EPSILON * scale {
        return Ok(0.0);
    }
    if sum < 0.0 {
        return Err(Error::UnsupportedDomain(format!(
            "Δ² = {sum} < 0 (oscillatory family)"
        )));
    }
    Ok(sum.sqrt())
}

/// `Δ = √(18p + 6/q − 3)`.
pub fn compound_discriminant(p: f64, q: f64) -> Result<f64> {
    positive_q(q)?;
    snapped_sqrt(&[18.0 * p, 6.0 / q, -3.0])
}

/// `p` for which `Δ = 0`: `6p = 1 − 2/q`.
pub fn degenerate_p(q: f64) -> Result<f64> {
    positive_q(q)?;
    Ok((1.0 - 2.0 / q) / 6.0)
}

fn universal_generator(family: Family, theta: Complex64, theta0: Complex64) -> Result<Complex64> {
    let z = (theta - theta0) / 10.0;
    let (pole, g) = match family {
        Family::KdvbRegular => (hyperbolic::tanh_pole(z), hyperbolic::tanh(z)),
        _ => (hyperbolic::coth_pole(z), hyperbolic::coth(z)),
    };
    match pole {
        Some(zp) => Err(Error::Pole { location: theta0 + zp * 10.0 }),
        None => Ok(g),
    }
}

/// `(3/50)[1 + tanh((θ−θ₀)/10)]²` (regular) or the same with `coth` (singular).
pub fn eval_universal(family: Family, theta: Complex64, theta0: Complex64) -> Result<Complex64> {
    kdvb_only(family)?;
    let g = universal_generator(family, theta, theta0)?;
    let one_plus = g + 1.0;
    Ok(one_plus * one_plus * (3.0 / 50.0))
}

fn compound_generator(delta: f64, theta: Complex64, theta0: Complex64) -> Result<Complex64> {
    let z = (theta - theta0) * (delta / 6.0);
    match hyperbolic::tanh_pole(z) {
        Some(zp) if delta != 0.0 => Err(Error::Pole { location: theta0 + zp * (6.0 / delta) }),
        _ => Ok(hyperbolic::tanh(z)),
    }
}

/// `−1/(3q) ± (1/(3√(2q)))[1 + Δ tanh(Δ(θ−θ₀)/6)]`.
pub fn eval_compound(family: Family, theta: Complex64, reduced: &ReducedParams) -> Result<Complex64> {
    compound_only(family)?;
    let q = reduced.q;
    let delta = compound_discriminant(reduced.p, q)?;
    let g = compound_generator(delta, theta, reduced.theta0)?;
    let centre = -1.0 / (3.0 * q);
    let half_width = family.label_sign() / (3.0 * (2.0 * q).sqrt());
    Ok((g * delta + 1.0) * half_width + centre)
}

fn rational_a(family: Family, q: f64) -> f64 {
    family.a_branch().sign() * (q / 2.0).sqrt()
}

fn rational_generator(a: f64, k0: f64, theta: Complex64) -> Result<Complex64> {
    let den = theta * k0 + a;
    let scale = a.abs() + (theta * k0).norm();
    if den.norm() <= hyperbolic::POLE_TOL * scale {
        return Err(Error::Pole { location: Complex64::new(-a / k0, 0.0) });
    }
    Ok(den.inv())
}

/// `−(k₀/A)/(A + k₀θ) − (A+1)/(6A²)` with `A = ±√(q/2)` for `Rational±`.
pub fn eval_rational(family: Family, theta: Complex64, q: f64, k0: f64) -> Result<Complex64> {
    rational_only(family)?;
    positive_q(q)?;
    let a = rational_a(family, q);
    let g = rational_generator(a, k0, theta)?;
    Ok(g * (-k0 / a) - (a + 1.0) / (6.0 * a * a))
}

/// A closed-form solution of the reduced first integral
/// `w'' − w' + p w − w² − q w³ = k`, with the constants fixed by its
/// factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSolution {
    family: Family,
    reduced: ReducedParams,
    physical: Option<PhysicalParams>,
    discriminant: f64,
    k0: f64,
    epsilon: Option<f64>,
    amplitude: f64,
}

impl WaveSolution {
    /// Universal KdVB solution displaced by δ; fixes `p = 2δ + 6/25` and
    /// `k = pδ − δ²`.
    pub fn kdvb(family: Family, delta: f64, theta0: Complex64) -> Result<Self> {
        kdvb_only(family)?;
        let fact = factorize_kdvb(delta, family.a_branch());
        Ok(Self {
            family,
            reduced: fact.reduced().with_theta0(theta0),
            physical: None,
            discriminant: 0.0,
            k0: 0.0,
            epsilon: None,
            amplitude: 1.0,
        })
    }

    pub fn compound(family: Family, p: f64, q: f64, theta0: Complex64) -> Result<Self> {
        compound_only(family)?;
        let discriminant = compound_discriminant(p, q)?;
        let fact = factorize_compound(&ReducedParams::new(p, q), family.a_branch())?;
        Ok(Self {
            family,
            reduced: fact.reduced().with_theta0(theta0),
            physical: None,
            discriminant,
            k0: 0.0,
            epsilon: None,
            amplitude: 1.0,
        })
    }

    /// Rational family on the degenerate line `6p = 1 − 2/q`.
    pub fn rational(family: Family, q: f64, k0: f64, theta0: Complex64) -> Result<Self> {
        rational_only(family)?;
        Self::degenerate(family, q, k0, theta0)
    }

    pub fn constant(q: f64, branch: Branch) -> Result<Self> {
        Self::degenerate(Family::Constant(branch), q, 0.0, Complex64::new(0.0, 0.0))
    }

    fn degenerate(family: Family, q: f64, k0: f64, theta0: Complex64) -> Result<Self> {
        let p = degenerate_p(q)?;
        let fact = factorize_compound(&ReducedParams::new(p, q), family.a_branch())?;
        Ok(Self {
            family,
            reduced: fact.reduced().with_theta0(theta0),
            physical: None,
            discriminant: 0.0,
            k0,
            epsilon: None,
            amplitude: 1.0,
        })
    }

    /// Builds the family from physical coefficients. `k0` is only used by the
    /// rational families.
    ///
    /// KdVB families need `β = 0`; the δ displacement follows from the
    /// velocity. Rational and constant families need the velocity on the
    /// degenerate line `v = μ²/(6s) − α²/(4β)`.
    pub fn from_physical(family: Family, params: &PhysicalParams, k0: f64) -> Result<Self> {
        let reduced = reduce(params)?;
        let mut sol = match family {
            Family::KdvbRegular | Family::KdvbSingular => {
                if params.beta != 0.0 {
                    return Err(Error::ParamDomain("KdVB families require beta = 0".into()));
                }
                let delta = (reduced.p - KDVB_P_OFFSET) / 2.0;
                Self::kdvb(family, delta, reduced.theta0)?
            }
            Family::CompoundTanhPlus | Family::CompoundTanhMinus => {
                Self::compound(family, reduced.p, reduced.q, reduced.theta0)?
            }
            Family::RationalPlus | Family::RationalMinus | Family::Constant(_) => {
                if compound_discriminant(reduced.p, reduced.q)? != 0.0 {
                    return Err(Error::ParamDomain(format!(
                        "{family} requires v = μ²/(6s) − α²/(4β) = {}, got {}",
                        params.degenerate_velocity()?,
                        params.v
                    )));
                }
                let k0 = if family.is_rational() { k0 } else { 0.0 };
                let mut sol = Self::degenerate(family, reduced.q, k0, reduced.theta0)?;
                // keep the caller's velocity rather than the rounded degenerate one
                sol.reduced.p = reduced.p;
                sol.epsilon = Some(params.mu * (2.0 * params.beta / (3.0 * params.s * params.alpha.powi(2))).sqrt());
                sol
            }
        };
        sol.physical = Some(*params);
        Ok(sol)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn reduced(&self) -> &ReducedParams {
        &self.reduced
    }

    pub fn physical(&self) -> Option<&PhysicalParams> {
        self.physical.as_ref()
    }

    /// Δ for the compound tanh families, zero otherwise.
    pub fn discriminant(&self) -> f64 {
        self.discriminant
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// `ε = μ√(2β/(3sα²))`, set for degenerate families built from physical
    /// coefficients.
    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn p(&self) -> f64 {
        self.reduced.p
    }

    pub fn q(&self) -> f64 {
        self.reduced.q
    }

    pub fn theta0(&self) -> Complex64 {
        self.reduced.theta0
    }

    /// First-integral constant `k` fixed by the factorization.
    pub fn k(&self) -> f64 {
        self.reduced.k.unwrap_or(0.0)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Same closed form multiplied by `factor`. Used for negative controls:
    /// anything other than `factor = 1` is not a solution.
    pub fn perturbed(&self, factor: f64) -> Self {
        Self { amplitude: self.amplitude * factor, ..self.clone() }
    }

    pub fn with_theta0(&self, theta0: Complex64) -> Self {
        let mut out = self.clone();
        out.reduced.theta0 = theta0;
        if let Some(p) = out.physical.as_mut() {
            p.xi0 = theta0 * (p.s / p.mu);
        }
        out
    }

    /// Generator `g(θ)` of the [`Profile`] representation.
    pub fn generator(&self, theta: Complex64) -> Result<Complex64> {
        let theta0 = self.reduced.theta0;
        match self.family {
            Family::KdvbRegular | Family::KdvbSingular => universal_generator(self.family, theta, theta0),
            Family::CompoundTanhPlus | Family::CompoundTanhMinus => {
                compound_generator(self.discriminant, theta, theta0)
            }
            Family::RationalPlus | Family::RationalMinus => {
                let a = rational_a(self.family, self.reduced.q);
                rational_generator(a, self.k0, theta - theta0)
                    .map_err(|_| Error::Pole { location: theta0 - a / self.k0 })
            }
            Family::Constant(_) => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    /// The closed form as `P(g)` with the generator flow `g' = G(g)`.
    pub fn profile(&self) -> Profile {
        let (poly, flow) = match self.family {
            Family::KdvbRegular | Family::KdvbSingular => {
                let delta = self.reduced.delta.unwrap_or(0.0);
                let c = 3.0 / 50.0;
                (Poly::new(vec![delta + c, 2.0 * c, c]), Poly::new(vec![0.1, 0.0, -0.1]))
            }
            Family::CompoundTanhPlus | Family::CompoundTanhMinus => {
                let q = self.reduced.q;
                let d = self.discriminant;
                let c1 = self.family.label_sign() / (3.0 * (2.0 * q).sqrt());
                (
                    Poly::new(vec![-1.0 / (3.0 * q) + c1, c1 * d]),
                    Poly::new(vec![d / 6.0, 0.0, -d / 6.0]),
                )
            }
            Family::RationalPlus | Family::RationalMinus | Family::Constant(_) => {
                let a = rational_a(self.family, self.reduced.q);
                let k0 = self.k0;
                (
                    Poly::new(vec![-(a + 1.0) / (6.0 * a * a), -k0 / a]),
                    Poly::new(vec![0.0, 0.0, -k0]),
                )
            }
        };
        Profile { poly: poly.scale(self.amplitude), flow }
    }

    /// Direct evaluation of the closed form `w(θ)`.
    pub fn eval(&self, theta: Complex64) -> Result<Complex64> {
        let theta0 = self.reduced.theta0;
        let w = match self.family {
            Family::KdvbRegular | Family::KdvbSingular => {
                eval_universal(self.family, theta, theta0)? + self.reduced.delta.unwrap_or(0.0)
            }
            Family::CompoundTanhPlus | Family::CompoundTanhMinus => {
                eval_compound(self.family, theta, &self.reduced)?
            }
            Family::RationalPlus | Family::RationalMinus => {
                eval_rational(self.family, theta - theta0, self.reduced.q, self.k0)
                    .map_err(|e| match e {
                        Error::Pole { location } => Error::Pole { location: location + theta0 },
                        other => other,
                    })?
            }
            Family::Constant(b) => {
                let family = match b {
                    Branch::Plus => Family::RationalPlus,
                    Branch::Minus => Family::RationalMinus,
                };
                eval_rational(family, Complex64::new(0.0, 0.0), self.reduced.q, 0.0)?
            }
        };
        Ok(w * self.amplitude)
    }

    /// `w`, `w'`, `w''`, `w'''` from the exact derivative of the profile.
    pub fn jet(&self, theta: Complex64) -> Result<Jet> {
        let g = self.generator(theta)?;
        Ok(self.profile().jet(g))
    }

    fn physical_or_err(&self) -> Result<&PhysicalParams> {
        self.physical
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("solution has no physical parameters".into()))
    }

    /// `θ` at `(x, t)` before the phase is subtracted: `μ(x − vt)/s`.
    fn physical_theta(params: &PhysicalParams, x: f64, t: f64) -> Complex64 {
        Complex64::new(params.coordinate_scale() * (x - params.v * t), 0.0)
    }

    /// `u(x, t) = (2μ²/(αs)) w(μ(x − vt)/s)` using the attached physical
    /// parameters.
    pub fn eval_physical(&self, x: f64, t: f64) -> Result<Complex64> {
        let params = self.physical_or_err()?;
        self.eval_physical_with(x, t, params)
    }

    /// As [`eval_physical`](Self::eval_physical) but with explicit
    /// coefficients; they should reduce to this solution's `p` and `q`.
    pub fn eval_physical_with(&self, x: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
        let w = self.eval(Self::physical_theta(params, x, t))?;
        Ok(w * params.amplitude_scale())
    }

    /// `u, u_ξ, u_ξξ, u_ξξξ` at `(x, t)`; `u_t = −v u_ξ`.
    pub fn physical_jet_with(&self, x: f64, t: f64, params: &PhysicalParams) -> Result<Jet> {
        let jet = self.jet(Self::physical_theta(params, x, t))?;
        let (c, m) = (params.amplitude_scale(), params.coordinate_scale());
        Ok(Jet { w: jet.w * c, d1: jet.d1 * (c * m), d2: jet.d2 * (c * m * m), d3: jet.d3 * (c * m * m * m) })
    }
}
