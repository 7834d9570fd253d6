use std::fmt;

use super::residual::residual_pde_fn;
use crate::error::Result;
use crate::params::PhysicalParams;
use crate::solutions::{epsilon_form_velocity, rational_physical_form, RationalForm};
use crate::solutions::Family;

/// Which velocity formula an audit entry was run with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VelocitySource {
    /// `v = μ²/(6s) − α²/(4β)`, where Δ vanishes.
    Degenerate,
    /// `v = (α/(2β))²(ε² − 1)`, the velocity quoted with the ε-form.
    EpsilonForm,
}

impl VelocitySource {
    pub const ALL: [VelocitySource; 2] = [VelocitySource::Degenerate, VelocitySource::EpsilonForm];

    pub fn name(self) -> &'static str {
        match self {
            VelocitySource::Degenerate => "degenerate",
            VelocitySource::EpsilonForm => "epsilon-form",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub form: RationalForm,
    pub velocity_source: VelocitySource,
    pub velocity: f64,
    /// Largest finite-difference PDE residual over both rational families and
    /// all `k₀` values.
    pub max_abs: f64,
    pub exact: bool,
}

/// PDE residuals of every physical rational form under both velocity
/// formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalAudit {
    pub params: PhysicalParams,
    pub degenerate_velocity: f64,
    pub epsilon_velocity: f64,
    /// Largest pointwise difference between the closed and ε forms at the
    /// degenerate velocity.
    pub closed_vs_epsilon: f64,
    pub tolerance: f64,
    pub entries: Vec<AuditEntry>,
}

impl RationalAudit {
    pub fn entry(&self, form: RationalForm, source: VelocitySource) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.form == form && e.velocity_source == source)
    }

    pub fn velocities_agree(&self) -> bool {
        let scale = self.degenerate_velocity.abs().max(self.epsilon_velocity.abs()).max(1.0);
        (self.degenerate_velocity - self.epsilon_velocity).abs() <= 1e-12 * scale
    }

    /// The transformed form at the degenerate velocity: the combination the
    /// library evaluates.
    pub fn reference_exact(&self) -> bool {
        self.entry(RationalForm::Transformed, VelocitySource::Degenerate).is_some_and(|e| e.exact)
    }

    /// One line per combination that fails the PDE, plus the velocity
    /// mismatch if present.
    pub fn discrepancies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.velocities_agree() {
            out.push(format!(
                "velocity formulas disagree: degenerate v = {:.16e}, epsilon-form v = {:.16e}",
                self.degenerate_velocity, self.epsilon_velocity
            ));
        }
        for e in self.entries.iter().filter(|e| !e.exact) {
            out.push(format!(
                "{} form with {} velocity is not a solution: PDE residual {:.3e}",
                e.form.name(),
                e.velocity_source.name(),
                e.max_abs
            ));
        }
        out
    }
}

impl fmt::Display for RationalAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "rational audit: s={} mu={} alpha={} beta={}", p.s, p.mu, p.alpha, p.beta)?;
        writeln!(f, "  degenerate v   = {:.16e}", self.degenerate_velocity)?;
        writeln!(f, "  epsilon-form v = {:.16e}", self.epsilon_velocity)?;
        writeln!(f, "  |closed - epsilon| = {:.3e}", self.closed_vs_epsilon)?;
        for e in &self.entries {
            writeln!(
                f,
                "  {:<12} {:<13} v={:<24.16e} max_abs={:.3e}  {}",
                e.form.name(),
                e.velocity_source.name(),
                e.velocity,
                e.max_abs,
                if e.exact { "exact" } else { "NOT A SOLUTION" }
            )?;
        }
        Ok(())
    }
}

/// Runs every rational form with both velocity formulas through the
/// finite-difference PDE residual. `xt_grid` must stay clear of the poles of
/// all forms.
pub fn audit_rational_forms(
    params: &PhysicalParams,
    k0s: &[f64],
    xt_grid: &[(f64, f64)],
    h: f64,
    tolerance: f64,
) -> Result<RationalAudit> {
    let degenerate_velocity = params.degenerate_velocity()?;
    let epsilon_velocity = epsilon_form_velocity(params)?;
    let families = [Family::RationalPlus, Family::RationalMinus];

    let mut entries = Vec::new();
    for form in RationalForm::ALL {
        for source in VelocitySource::ALL {
            let velocity = match source {
                VelocitySource::Degenerate => degenerate_velocity,
                VelocitySource::EpsilonForm => epsilon_velocity,
            };
            let at = params.with_velocity(velocity);
            let mut max_abs: f64 = 0.0;
            for family in families {
                for &k0 in k0s {
                    let r = residual_pde_fn(|x, t| rational_physical_form(form, family, x, t, &at, k0), xt_grid, &at, h)?;
                    max_abs = max_abs.max(r.max_abs);
                }
            }
            entries.push(AuditEntry { form, velocity_source: source, velocity, max_abs, exact: max_abs < tolerance });
        }
    }

    let at = params.with_velocity(degenerate_velocity);
    let mut closed_vs_epsilon: f64 = 0.0;
    for family in families {
        for &k0 in k0s {
            for &(x, t) in xt_grid {
                let a = rational_physical_form(RationalForm::Closed, family, x, t, &at, k0);
                let b = rational_physical_form(RationalForm::Epsilon, family, x, t, &at, k0);
                if let (Ok(a), Ok(b)) = (a, b) {
                    closed_vs_epsilon = closed_vs_epsilon.max((a - b).norm());
                }
            }
        }
    }

    Ok(RationalAudit {
        params: *params,
        degenerate_velocity,
        epsilon_velocity,
        closed_vs_epsilon,
        tolerance,
        entries,
    })
}
