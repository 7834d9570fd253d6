//! Independent checks of the closed forms.
//!
//! - [`residual`]: pointwise residuals of the reduced first integral, of its
//!   derivative, and of the PDE itself (analytic or finite differences).
//! - [`oracle`]: fixed-step RK4 integration of the first-order factor ODEs.
//! - [`audit`]: consistency audit of the physical rational forms.
//! - [`suite`]: the named check list behind `kdvb verify`.

pub mod audit;
pub mod oracle;
pub mod residual;
pub mod suite;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use audit::{audit_rational_forms, AuditEntry, RationalAudit, VelocitySource};
pub use oracle::{oracle_integrate_bernoulli, oracle_integrate_riccati, rk4, Trajectory};
pub use residual::{
    check_first_integral_consistency, l6_residual, residual_first_integral, residual_pde, residual_pde_fn,
    PdeMode,
};
pub use suite::{run_suite, CheckOutcome, CheckResult, Scope, Tolerances};

/// Which equation a residual was measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `u_t − s u_xxx + μ u_xx + α u u_x = 0`
    PdeL1,
    /// `u_t − s u_xxx + μ u_xx + α u u_x + β u² u_x = 0`
    PdeL2,
    /// `w''' − w'' + (p − 2w − 3q w²) w' = 0`
    OdeL6,
    /// `w'' − w' + p w − w² − q w³ − k = 0`
    OdeL8,
    BernoulliKb8,
    RiccatiC4,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::PdeL1 => "kdvb-pde",
            Equation::PdeL2 => "compound-kdvb-pde",
            Equation::OdeL6 => "reduced-ode",
            Equation::OdeL8 => "first-integral",
            Equation::BernoulliKb8 => "bernoulli",
            Equation::RiccatiC4 => "riccati",
        })
    }
}

/// Summary of `|residual|` over a sample grid. Pole cells are counted in
/// `n_poles` and left out of the statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Grid point with the largest residual: `θ + 0i` on reduced grids,
    /// `x + it` on space-time grids.
    pub worst_point: Complex64,
    pub n_samples: usize,
    pub n_poles: usize,
    pub equation: Equation,
    pub warning: Option<String>,
}

impl ResidualReport {
    /// Aggregates `(point, residual)` pairs; `None` marks a pole.
    pub fn from_samples<I>(equation: Equation, samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, Option<f64>)>,
    {
        let mut report = ResidualReport {
            max_abs: 0.0,
            mean_abs: 0.0,
            worst_point: Complex64::new(0.0, 0.0),
            n_samples: 0,
            n_poles: 0,
            equation,
            warning: None,
        };
        let mut sum = 0.0;
        for (point, residual) in samples {
            match residual {
                None => report.n_poles += 1,
                Some(r) => {
                    let r = if r.is_nan() { f64::INFINITY } else { r };
                    if report.n_samples == 0 || r > report.max_abs {
                        report.max_abs = r;
                        report.worst_point = point;
                    }
                    sum += r;
                    report.n_samples += 1;
                }
            }
        }
        if report.n_samples == 0 {
            return Err(Error::InvalidInput(format!(
                "no usable samples ({} poles)",
                report.n_poles
            )));
        }
        report.mean_abs = sum / report.n_samples as f64;
        Ok(report)
    }
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_statistics() {
        let samples = vec![
            (Complex64::new(0.0, 0.0), Some(1.0)),
            (Complex64::new(1.0, 0.0), None),
            (Complex64::new(2.0, 0.0), Some(3.0)),
            (Complex64::new(3.0, 0.0), Some(2.0)),
        ];
        let r = ResidualReport::from_samples(Equation::OdeL8, samples).unwrap();
        assert_eq!(r.max_abs, 3.0);
        assert_eq!(r.mean_abs, 2.0);
        assert_eq!(r.worst_point, Complex64::new(2.0, 0.0));
        assert_eq!(r.n_samples, 3);
        assert_eq!(r.n_poles, 1);
        assert!(r.max_abs >= r.mean_abs);
    }

    #[test]
    fn report_needs_samples() {
        assert!(ResidualReport::from_samples(Equation::OdeL8, vec![(Complex64::new(0.0, 0.0), None)]).is_err());
    }

    #[test]
    fn nan_residual_is_worst() {
        let r = ResidualReport::from_samples(
            Equation::OdeL8,
            vec![(Complex64::new(0.0, 0.0), Some(1.0)), (Complex64::new(1.0, 0.0), Some(f64::NAN))],
        )
        .unwrap();
        assert!(r.max_abs.is_infinite());
        assert_eq!(r.worst_point, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-50.0, 50.0, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], -50.0);
        assert_eq!(g[199], 50.0);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
