//! Grid sampling and the imaginary-phase sweep `θ₀ = iaπ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{eval_universal, kdvb_only, Family};
use crate::error::{Error, Result};

/// One grid cell: a value, or the pole that was hit there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sample {
    Value(Complex64),
    Pole(Complex64),
}

impl Sample {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            Sample::Value(v) => Some(*v),
            Sample::Pole(_) => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Sample::Pole(_))
    }
}

/// Turns a pole error into a flagged cell; any other error aborts.
pub fn sample(result: Result<Complex64>) -> Result<Sample> {
    match result {
        Ok(v) => Ok(Sample::Value(v)),
        Err(Error::Pole { location }) => Ok(Sample::Pole(location)),
        Err(e) => Err(e),
    }
}

/// Range of the phase parameter `a` in `θ₀ = iaπ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSweep {
    a_min: f64,
    a_max: f64,
    steps: usize,
}

impl PhaseSweep {
    pub fn new(a_min: f64, a_max: f64, steps: usize) -> Result<Self> {
        if !(a_min.is_finite() && a_max.is_finite()) {
            return Err(Error::InvalidInput("sweep bounds must be finite".into()));
        }
        if steps < 2 {
            return Err(Error::InvalidInput(format!("sweep needs at least 2 steps, got {steps}")));
        }
        if a_min >= a_max {
            return Err(Error::InvalidInput(format!("sweep needs a_min < a_max, got [{a_min}, {a_max}]")));
        }
        Ok(Self { a_min, a_max, steps })
    }

    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    pub fn a_max(&self) -> f64 {
        self.a_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Evenly spaced values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == n {
                    self.a_max
                } else {
                    self.a_min + (self.a_max - self.a_min) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

/// `U(θ, a)` on the rectangle `a × θ`; `rows[i][j]` is `(a[i], theta[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSurface {
    pub family: Family,
    pub a: Vec<f64>,
    pub theta: Vec<f64>,
    pub rows: Vec<Vec<Sample>>,
}

impl SweepSurface {
    pub fn row(&self, i: usize) -> &[Sample] {
        &self.rows[i]
    }
}

/// Samples the universal KdVB family with `θ₀ = iaπ` over the grid. Rows are
/// independent and evaluated in parallel; poles are flagged per cell.
pub fn phase_sweep_surface(family: Family, sweep: &PhaseSweep, theta_grid: &[f64]) -> Result<SweepSurface> {
    kdvb_only(family)?;
    if theta_grid.is_empty() {
        return Err(Error::InvalidInput("empty θ grid".into()));
    }
    let a = sweep.values();
    let rows = a
        .par_iter()
        .map(|&a| {
            let theta0 = Complex64::new(0.0, a * PI);
            theta_grid
                .iter()
                .map(|&th| sample(eval_universal(family, Complex64::new(th, 0.0), theta0)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepSurface { family, a, theta: theta_grid.to_vec(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn sweep_validation() {
        assert!(PhaseSweep::new(0.0, 1.0, 1).is_err());
        assert!(PhaseSweep::new(1.0, 1.0, 5).is_err());
        assert!(PhaseSweep::new(2.0, 1.0, 5).is_err());
        let s = PhaseSweep::new(-5.0, 0.0, 51).unwrap();
        let a = s.values();
        assert_eq!(a.len(), 51);
        assert_eq!(a[0], -5.0);
        assert_eq!(a[50], 0.0);
        assert!((a[25] + 2.5).abs() < 1e-15);
    }

    #[test]
    fn a_zero_row_is_real_regular_kink() {
        let thetas = grid(-40.0, 40.0, 81);
        let s = phase_sweep_surface(Family::KdvbRegular, &PhaseSweep::new(-1.0, 0.0, 3).unwrap(), &thetas).unwrap();
        let last = s.row(2);
        for (j, cell) in last.iter().enumerate() {
            let v = cell.value().unwrap();
            assert_eq!(v.im, 0.0);
            let direct = eval_universal(Family::KdvbRegular, Complex64::new(thetas[j], 0.0), Complex64::new(0.0, 0.0)).unwrap();
            assert_eq!(v, direct);
        }
    }

    #[test]
    fn a_minus_five_row_is_singular_family() {
        let thetas = grid(-40.0, 40.0, 81);
        let s = phase_sweep_surface(Family::KdvbRegular, &PhaseSweep::new(-5.0, 0.0, 11).unwrap(), &thetas).unwrap();
        for (j, cell) in s.row(0).iter().enumerate() {
            let singular = sample(eval_universal(
                Family::KdvbSingular,
                Complex64::new(thetas[j], 0.0),
                Complex64::new(0.0, 0.0),
            ))
            .unwrap();
            match (cell, singular) {
                (Sample::Value(a), Sample::Value(b)) => assert!((a - b).norm() < 1e-10 * (1.0 + b.norm())),
                (Sample::Pole(_), Sample::Pole(_)) => assert_eq!(thetas[j], 0.0),
                other => panic!("mismatch at θ = {}: {other:?}", thetas[j]),
            }
        }
    }

    #[test]
    fn half_period_row_at_origin() {
        let s = phase_sweep_surface(Family::KdvbRegular, &PhaseSweep::new(-5.0, 0.0, 3).unwrap(), &[0.0]).unwrap();
        assert!((s.a[1] + 2.5).abs() < 1e-15);
        let v = s.row(1)[0].value().unwrap();
        assert!((v - Complex64::new(0.0, 0.12)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_requests() {
        let sweep = PhaseSweep::new(-1.0, 0.0, 2).unwrap();
        assert!(phase_sweep_surface(Family::KdvbRegular, &sweep, &[]).is_err());
        assert!(phase_sweep_surface(Family::CompoundTanhPlus, &sweep, &[0.0]).is_err());
    }
}
