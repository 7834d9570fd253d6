//! Coefficient model of the KdVB / compound KdVB equations and the linear
//! change of variables that reduces the travelling-wave ODE to
//!
//! ```text
//! w''' − w'' + (p − 2w − 3q w²) w' = 0,    w'' − w' + (p w − w² − q w³) = k
//! ```
//!
//! with `ξ = x − vt = (s/μ) θ` and `φ(ξ) = (2μ²/(αs)) w(θ)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients of `u_t = s u_xxx − μ u_xx − α u u_x − β u² u_x` together with
/// the travelling-wave velocity and phase.
///
/// `beta == 0` is the standard KdVB equation. The phase `xi0` is complex: an
/// imaginary phase shift is how the regular and singular families connect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub s: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub v: f64,
    pub xi0: Complex64,
}

impl PhysicalParams {
    pub fn new(s: f64, mu: f64, alpha: f64, beta: f64, v: f64, xi0: Complex64) -> Result<Self> {
        let params = Self { s, mu, alpha, beta, v, xi0 };
        params.validate()?;
        Ok(params)
    }

    /// Real-phase convenience constructor.
    pub fn real(s: f64, mu: f64, alpha: f64, beta: f64, v: f64) -> Result<Self> {
        Self::new(s, mu, alpha, beta, v, Complex64::new(0.0, 0.0))
    }

    /// Exact zeros only; conditioning of tiny coefficients is the caller's concern.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("s", self.s),
            ("mu", self.mu),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("v", self.v),
            ("xi0.re", self.xi0.re),
            ("xi0.im", self.xi0.im),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::ParamDomain(format!("{name} must be finite")));
        }
        if self.s == 0.0 {
            return Err(Error::ParamDomain("s must be non-zero".into()));
        }
        if self.mu == 0.0 {
            return Err(Error::ParamDomain("mu must be non-zero".into()));
        }
        if self.alpha == 0.0 {
            return Err(Error::ParamDomain("alpha must be non-zero".into()));
        }
        Ok(())
    }

    pub fn with_velocity(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    pub fn with_phase(mut self, xi0: Complex64) -> Self {
        self.xi0 = xi0;
        self
    }

    /// `2μ²/(αs)`, the factor between `w(θ)` and `φ(ξ)`.
    pub fn amplitude_scale(&self) -> f64 {
        2.0 * self.mu * self.mu / (self.alpha * self.s)
    }

    /// `μ/s`, i.e. `dθ/dξ`.
    pub fn coordinate_scale(&self) -> f64 {
        self.mu / self.s
    }

    /// Velocity at which the compound discriminant Δ vanishes: `v = μ²/(6s) − α²/(4β)`.
    pub fn degenerate_velocity(&self) -> Result<f64> {
        if self.beta == 0.0 {
            return Err(Error::ParamDomain(
                "degenerate velocity requires beta ≠ 0".into(),
            ));
        }
        Ok(self.mu * self.mu / (6.0 * self.s) - self.alpha * self.alpha / (4.0 * self.beta))
    }
}

/// Coefficients of the reduced ODE.
///
/// `delta` and `k` are only known once a factorization has been chosen; they
/// are `None` straight out of [`reduce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub p: f64,
    pub q: f64,
    pub delta: Option<f64>,
    pub k: Option<f64>,
    pub theta0: Complex64,
}

impl ReducedParams {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q, delta: None, k: None, theta0: Complex64::new(0.0, 0.0) }
    }

    pub fn with_theta0(mut self, theta0: Complex64) -> Self {
        self.theta0 = theta0;
        self
    }

    /// Recovers the physical coefficients given the three scales the reduction
    /// divides out (`s`, `μ`, `α`).
    pub fn to_physical(&self, s: f64, mu: f64, alpha: f64) -> Result<PhysicalParams> {
        let v = self.p * mu * mu / s;
        let beta = 3.0 * s * alpha * alpha * self.q / (4.0 * mu * mu);
        let xi0 = self.theta0 * (s / mu);
        PhysicalParams::new(s, mu, alpha, beta, v, xi0)
    }
}

/// `p = vs/μ²`, `q = 4βμ²/(3sα²)`, `θ₀ = μξ₀/s`.
pub fn reduce(params: &PhysicalParams) -> Result<ReducedParams> {
    params.validate()?;
    let PhysicalParams { s, mu, alpha, beta, v, xi0 } = *params;
    Ok(ReducedParams {
        p: v * s / (mu * mu),
        q: 4.0 * beta * mu * mu / (3.0 * s * alpha * alpha),
        delta: None,
        k: None,
        theta0: xi0 * (mu / s),
    })
}

/// `φ = (2μ²/(αs)) w`.
pub fn to_physical_amplitude(w: Complex64, params: &PhysicalParams) -> Result<Complex64> {
    params.validate()?;
    Ok(w * params.amplitude_scale())
}

/// Inverse of [`to_physical_amplitude`].
pub fn from_physical_amplitude(phi: Complex64, params: &PhysicalParams) -> Result<Complex64> {
    params.validate()?;
    Ok(phi / params.amplitude_scale())
}

/// `θ = μ(x − vt − ξ₀)/s`.
pub fn to_reduced_coordinate(x: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    params.validate()?;
    Ok((Complex64::new(x - params.v * t, 0.0) - params.xi0) * params.coordinate_scale())
}

/// Inverse of [`to_reduced_coordinate`] at fixed `t`. The result is complex
/// whenever the phase is.
pub fn from_reduced_coordinate(theta: Complex64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    params.validate()?;
    Ok(theta / params.coordinate_scale() + params.xi0 + params.v * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduce_fig7_parameters() {
        let params = PhysicalParams::real(2.0, 1.0, 3.0, 2.0, -0.04).unwrap();
        let r = reduce(&params).unwrap();
        assert!((r.p + 0.08).abs() < 1e-15);
        assert!((r.q - 4.0 / 27.0).abs() < 1e-15);
        assert_eq!(r.delta, None);
        assert_eq!(r.k, None);
    }

    #[test]
    fn reduce_trivial_and_substitution() {
        let r = reduce(&PhysicalParams::real(1.0, 1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((r.p, r.q), (0.0, 0.0));

        let r = reduce(&PhysicalParams::real(1.0, 2.0, 1.0, 3.0, 1.0).unwrap()).unwrap();
        assert!((r.p - 0.25).abs() < 1e-15);
        assert!((r.q - 16.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_zero_coefficients() {
        assert!(matches!(PhysicalParams::real(0.0, 1.0, 1.0, 0.0, 0.0), Err(Error::ParamDomain(_))));
        assert!(matches!(PhysicalParams::real(1.0, 0.0, 1.0, 0.0, 0.0), Err(Error::ParamDomain(_))));
        assert!(matches!(PhysicalParams::real(1.0, 1.0, 0.0, 0.0, 0.0), Err(Error::ParamDomain(_))));
        // constructed by hand, bypassing `new`
        let bad = PhysicalParams { s: 0.0, mu: 1.0, alpha: 1.0, beta: 0.0, v: 0.0, xi0: c(0.0, 0.0) };
        assert!(reduce(&bad).is_err());
        assert!(to_physical_amplitude(c(1.0, 0.0), &bad).is_err());
    }

    #[test]
    fn amplitude_examples() {
        let any = PhysicalParams::real(1.3, -0.7, 2.1, 0.0, 0.4).unwrap();
        assert_eq!(to_physical_amplitude(c(0.0, 0.0), &any).unwrap(), c(0.0, 0.0));

        let p = PhysicalParams::real(2.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert!((to_physical_amplitude(c(1.0, 0.0), &p).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        // 2μ²/(αs) = 25
        let p = PhysicalParams::real(1.0, 5.0, 2.0, 0.0, 0.0).unwrap();
        let phi = to_physical_amplitude(c(3.0 / 50.0, 0.0), &p).unwrap();
        assert!((phi - c(1.5, 0.0)).norm() < 1e-14);
        let w = from_physical_amplitude(phi, &p).unwrap();
        assert!((w - c(3.0 / 50.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn reduced_coordinate_examples() {
        let (s, mu, v) = (2.0, 0.5, 1.5);
        let p = PhysicalParams::real(s, mu, 1.0, 0.0, v).unwrap();
        let t = 3.0;
        assert_eq!(to_reduced_coordinate(v * t, t, &p).unwrap(), c(0.0, 0.0));

        let theta = to_reduced_coordinate(10.0 * s / mu + v * t, t, &p).unwrap();
        assert!((theta - c(10.0, 0.0)).norm() < 1e-13);

        let pi = std::f64::consts::PI;
        let p = p.with_velocity(0.0).with_phase(c(0.0, 5.0 * pi * s / mu));
        let theta = to_reduced_coordinate(0.0, 0.0, &p).unwrap();
        assert!((theta - c(0.0, -5.0 * pi)).norm() < 1e-13);
    }

    #[test]
    fn degenerate_velocity_of_fig7() {
        let p = PhysicalParams::real(2.0, 1.0, 3.0, 2.0, 0.0).unwrap();
        assert!((p.degenerate_velocity().unwrap() + 25.0 / 24.0).abs() < 1e-15);
        let kdvb = PhysicalParams::real(2.0, 1.0, 3.0, 0.0, 0.0).unwrap();
        assert!(kdvb.degenerate_velocity().is_err());
    }
}
