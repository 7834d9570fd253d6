use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::audit::{audit_rational_forms, RationalAudit, VelocitySource};
use super::oracle::{oracle_integrate_bernoulli, oracle_integrate_riccati};
use super::residual::{check_first_integral_consistency, l6_residual, residual_first_integral, residual_pde, PdeMode};
use super::linspace;
use crate::error::{Error, Result};
use crate::factorizer::{factorize_compound, factorize_kdvb, verify_factorization, Branch};
use crate::params::{PhysicalParams, ReducedParams};
use crate::solutions::{Family, RationalForm, WaveSolution};

/// Pass thresholds by check class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Residuals with exact derivatives.
    pub analytic: f64,
    /// Finite-difference PDE residuals.
    pub pde: f64,
    /// RK4 trajectories against closed forms.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { analytic: 1e-9, pde: 1e-5, oracle: 1e-6 }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { analytic: tol, pde: tol, oracle: tol }
    }
}

/// Which part of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    Factorization,
    /// Rational and constant families plus the rational-form audit.
    CompoundRational,
    Family(Family),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::All => f.write_str("all"),
            Scope::Factorization => f.write_str("factorization"),
            Scope::CompoundRational => f.write_str("compound-rational"),
            Scope::Family(family) => family.fmt(f),
        }
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Scope::All),
            "factorization" => Ok(Scope::Factorization),
            "compound-rational" => Ok(Scope::CompoundRational),
            other => other.parse().map(Scope::Family).map_err(|_| {
                Error::InvalidInput(format!(
                    "unknown scope '{other}' (expected all, factorization, compound-rational or a family name)"
                ))
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    /// A reported discrepancy in a printed formula that the library does not
    /// rely on. Does not affect the exit status.
    Flag,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckOutcome::Pass => "PASS",
            CheckOutcome::Fail => "FAIL",
            CheckOutcome::Flag => "FLAG",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub max_abs: f64,
    pub tolerance: f64,
    pub outcome: CheckOutcome,
    /// Whether the value must grow when the solution is perturbed. False for
    /// identities and for checks that do not involve a solution.
    pub sensitive: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub scope: Scope,
    pub perturbation: f64,
    pub checks: Vec<CheckResult>,
    pub audits: Vec<RationalAudit>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != CheckOutcome::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        writeln!(f, "{:<width$}  {:>10}  {:>9}  result", "check", "max_abs", "tolerance")?;
        for c in &self.checks {
            if c.outcome == CheckOutcome::Flag {
                write!(f, "{:<width$}  {:>10}  {:>9}  {}", c.name, "-", "-", c.outcome)?;
            } else {
                write!(f, "{:<width$}  {:>10.3e}  {:>9.1e}  {}", c.name, c.max_abs, c.tolerance, c.outcome)?;
            }
            if let Some(note) = &c.note {
                write!(f, "  {note}")?;
            }
            writeln!(f)?;
        }
        for audit in &self.audits {
            writeln!(f)?;
            write!(f, "{audit}")?;
            for line in audit_verdict(audit) {
                writeln!(f, "  verdict: {line}")?;
            }
        }
        let failed = self.checks.iter().filter(|c| c.outcome == CheckOutcome::Fail).count();
        let flagged = self.checks.iter().filter(|c| c.outcome == CheckOutcome::Flag).count();
        writeln!(f)?;
        write!(f, "{} checks, {} failed, {} flagged", self.checks.len(), failed, flagged)
    }
}

/// Plain-language conclusions of one audit.
pub fn audit_verdict(audit: &RationalAudit) -> Vec<String> {
    let exact_velocities = |form: RationalForm| {
        let ok: Vec<&str> = VelocitySource::ALL
            .iter()
            .filter(|&&s| audit.entry(form, s).is_some_and(|e| e.exact))
            .map(|s| s.name())
            .collect();
        if ok.is_empty() {
            "no velocity".to_string()
        } else {
            ok.join(" and ")
        }
    };
    let mut out = vec![
        format!(
            "closed and epsilon forms {} (max difference {:.3e})",
            if audit.closed_vs_epsilon < 1e-9 { "are the same function" } else { "differ" },
            audit.closed_vs_epsilon
        ),
        format!(
            "velocity formulas {}",
            if audit.velocities_agree() { "agree" } else { "disagree" }
        ),
    ];
    for form in RationalForm::ALL {
        out.push(format!("{} form is residual-exact with {}", form.name(), exact_velocities(form)));
    }
    out
}

/// Deterministic low-discrepancy points in (0, 1].
fn unit_points(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let root2 = 2f64.sqrt() - 1.0;
    (1..=n).map(move |i| (1.0 - (i as f64 * golden).fract(), (i as f64 * root2).fract()))
}

/// 200 points on `[−20, −1] ∪ [1, 20]`, clear of the rational poles at
/// `|θ| ≤ 1/2` used by the suite.
fn off_pole_grid() -> Vec<f64> {
    let mut grid = linspace(-20.0, -1.0, 100);
    grid.extend(linspace(1.0, 20.0, 100));
    grid
}

fn xt_grid(x: (f64, f64), t: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    let xs = linspace(x.0, x.1, n);
    linspace(t.0, t.1, n).into_iter().flat_map(|t| xs.iter().map(move |&x| (x, t))).collect()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const FD_STEP: f64 = 1e-3;

fn kdvb_pde_params() -> PhysicalParams {
    PhysicalParams { s: 1.0, mu: 3.0, alpha: 2.0, beta: 0.0, v: 0.5, xi0: ZERO }
}

fn fig7(v: f64) -> PhysicalParams {
    PhysicalParams { s: 2.0, mu: 1.0, alpha: 3.0, beta: 2.0, v, xi0: ZERO }
}

struct Suite {
    tol: Tolerances,
    perturbation: f64,
    checks: Vec<CheckResult>,
    audits: Vec<RationalAudit>,
}

impl Suite {
    fn bound(&mut self, name: String, max_abs: f64, tolerance: f64, sensitive: bool) {
        let outcome = if max_abs <= tolerance { CheckOutcome::Pass } else { CheckOutcome::Fail };
        self.checks.push(CheckResult { name, max_abs, tolerance, outcome, sensitive, note: None });
    }

    fn analytic(&mut self, name: String, max_abs: f64) {
        self.bound(name, max_abs, self.tol.analytic, true)
    }

    fn perturb(&self, sol: WaveSolution) -> WaveSolution {
        if self.perturbation == 1.0 {
            sol
        } else {
            sol.perturbed(self.perturbation)
        }
    }

    fn factorization(&mut self) -> Result<()> {
        let real_u: Vec<Complex64> = unit_points(100).map(|(a, _)| c(10.0 * a)).collect();
        let mut worst: f64 = 0.0;
        for delta in [-2.0, 0.0, 1.0, 3.7] {
            for branch in [Branch::Plus, Branch::Minus] {
                worst = worst.max(verify_factorization(&factorize_kdvb(delta, branch), &real_u)?.max());
            }
        }
        self.bound("factorization/kdvb".into(), worst, self.tol.analytic, false);

        let complex_u: Vec<Complex64> =
            unit_points(100).map(|(r, phi)| Complex64::from_polar(0.1 + 1.9 * r, 2.0 * PI * phi)).collect();
        let mut worst: f64 = 0.0;
        for p in linspace(-1.0, 1.0, 5) {
            for q in linspace(0.1, 4.0, 5) {
                for branch in [Branch::Plus, Branch::Minus] {
                    let fact = factorize_compound(&ReducedParams::new(p, q), branch)?;
                    worst = worst.max(verify_factorization(&fact, &complex_u)?.max());
                }
            }
        }
        self.bound("factorization/compound".into(), worst, self.tol.analytic, false);
        Ok(())
    }

    /// First-integral, third-order ODE and consistency checks for a set of
    /// reduced solutions; the ODE and consistency checks use the first one.
    fn reduced_checks(&mut self, family: Family, solutions: &[WaveSolution], grid: &[f64]) -> Result<()> {
        let mut worst: f64 = 0.0;
        for sol in solutions {
            worst = worst.max(residual_first_integral(&self.perturb(sol.clone()), grid)?.max_abs);
        }
        self.analytic(format!("{family}/first-integral"), worst);
        let first = self.perturb(solutions[0].clone());
        let l6 = l6_residual(&first, grid)?.max_abs;
        // w' = 0 makes the third-order ODE hold for any constant
        let sensitive = !matches!(family, Family::Constant(_));
        self.bound(format!("{family}/reduced-ode"), l6, self.tol.analytic, sensitive);
        let consistency = check_first_integral_consistency(&first, grid)?.max_abs;
        self.bound(format!("{family}/consistency"), consistency, self.tol.analytic, false);
        Ok(())
    }

    /// Finite-difference and analytic PDE residuals plus their agreement.
    fn pde_checks(&mut self, family: Family, solutions: &[WaveSolution], grid: &[(f64, f64)], h: f64) -> Result<()> {
        let (mut fd_max, mut exact_max, mut gap): (f64, f64, f64) = (0.0, 0.0, 0.0);
        let mut warning = None;
        for sol in solutions {
            let sol = self.perturb(sol.clone());
            let params = *sol.physical().ok_or_else(|| Error::InvalidInput("no physical parameters".into()))?;
            let fd = residual_pde(&sol, grid, &params, PdeMode::FiniteDifference { h })?;
            let exact = residual_pde(&sol, grid, &params, PdeMode::Analytic)?;
            fd_max = fd_max.max(fd.max_abs);
            exact_max = exact_max.max(exact.max_abs);
            gap = gap.max((fd.max_abs - exact.max_abs).abs());
            warning = warning.or(fd.warning);
        }
        // a constant field has vanishing derivatives at any amplitude
        let sensitive = !matches!(family, Family::Constant(_));
        self.bound(format!("{family}/pde-fd"), fd_max, self.tol.pde, sensitive);
        if let Some(w) = warning {
            self.checks.last_mut().expect("just pushed").note = Some(w);
        }
        self.bound(format!("{family}/pde-analytic"), exact_max, self.tol.analytic, sensitive);
        self.bound(format!("{family}/pde-fd-vs-analytic"), gap, self.tol.pde, false);
        Ok(())
    }

    fn kdvb(&mut self, family: Family) -> Result<()> {
        let grid = linspace(-50.0, 50.0, 200);
        let reduced: Vec<WaveSolution> =
            [0.0, 1.5, -0.7].iter().map(|&d| WaveSolution::kdvb(family, d, ZERO)).collect::<Result<_>>()?;
        self.reduced_checks(family, &reduced, &grid)?;

        let params = kdvb_pde_params();
        let physical = [WaveSolution::from_physical(family, &params, 0.0)?];
        let xt = match family {
            Family::KdvbRegular => xt_grid((-8.0, 8.0), (0.0, 2.0), 20),
            _ => xt_grid((4.0, 12.0), (0.0, 1.0), 20),
        };
        self.pde_checks(family, &physical, &xt, FD_STEP)?;

        let sol = self.perturb(WaveSolution::kdvb(family, 0.0, ZERO)?);
        let span = match family {
            Family::KdvbRegular => (0.0, 40.0),
            _ => (-40.0, -5.0),
        };
        let u0 = sol.eval(c(span.0))?.re;
        let traj = oracle_integrate_bernoulli(family.a_branch(), u0, span, 0.01)?;
        let mut worst: f64 = if traj.blew_up { f64::INFINITY } else { 0.0 };
        for (th, u) in traj.thetas.iter().zip(&traj.values) {
            worst = worst.max((u - sol.eval(c(*th))?.re).abs());
        }
        self.bound(format!("{family}/bernoulli-oracle"), worst, self.tol.oracle, true);

        if family == Family::KdvbSingular {
            let theta0 = c(0.3);
            let shifted = self.perturb(WaveSolution::kdvb(Family::KdvbRegular, 0.0, theta0 + Complex64::new(0.0, 5.0 * PI))?);
            let singular = WaveSolution::kdvb(Family::KdvbSingular, 0.0, theta0)?;
            let mut worst: f64 = 0.0;
            for th in linspace(-50.0, 50.0, 200) {
                if let (Ok(a), Ok(b)) = (shifted.eval(c(th)), singular.eval(c(th))) {
                    worst = worst.max((a - b).norm());
                }
            }
            self.analytic(format!("{family}/phase-identity"), worst);
        }
        Ok(())
    }

    fn compound(&mut self, family: Family) -> Result<()> {
        let sets = [(0.4, 1.3), (0.0, 2.0), (-0.08, 4.0 / 27.0)];
        let reduced: Vec<WaveSolution> =
            sets.iter().map(|&(p, q)| WaveSolution::compound(family, p, q, ZERO)).collect::<Result<_>>()?;
        self.reduced_checks(family, &reduced, &linspace(-20.0, 20.0, 200))?;

        let physical = [WaveSolution::from_physical(family, &fig7(-0.04), 0.0)?];
        self.pde_checks(family, &physical, &xt_grid((-10.0, 10.0), (0.0, 2.0), 20), FD_STEP)?;

        let (p, q) = (-0.08, 4.0 / 27.0);
        let sol = self.perturb(WaveSolution::compound(family, p, q, ZERO)?);
        let fact = factorize_compound(&ReducedParams::new(p, q), family.a_branch())?;
        let traj = oracle_integrate_riccati(&fact, sol.eval(ZERO)?, (0.0, 10.0), 0.005)?;
        let worst = trajectory_error(&traj, &sol)?;
        self.bound(format!("{family}/riccati-oracle"), worst, self.tol.oracle, true);
        Ok(())
    }

    fn rational(&mut self, family: Family) -> Result<()> {
        let mut reduced = Vec::new();
        for q in [0.5, 4.0 / 27.0] {
            for k0 in [1.0, 0.0, -2.0] {
                reduced.push(WaveSolution::rational(family, q, k0, ZERO)?);
            }
        }
        self.reduced_checks(family, &reduced, &off_pole_grid())?;

        let physical: Vec<WaveSolution> =
            [1.0, -2.0].iter().map(|&k0| WaveSolution::from_physical(family, &fig7(-25.0 / 24.0), k0)).collect::<Result<_>>()?;
        // the large constant offset makes roundoff dominate at h = 1e-3
        self.pde_checks(family, &physical, &xt_grid((8.0, 20.0), (0.0, 1.0), 20), 1e-2)?;

        let q = 0.5;
        let sol = self.perturb(WaveSolution::rational(family, q, 1.0, ZERO)?);
        let fact = factorize_compound(&ReducedParams::new(sol.p(), q), family.a_branch())?;
        // integrate away from the pole at θ = −A
        let span = if fact.a > 0.0 { (0.0, 10.0) } else { (0.0, -10.0) };
        let traj = oracle_integrate_riccati(&fact, sol.eval(ZERO)?, span, 0.005)?;
        let worst = trajectory_error(&traj, &sol)?;
        self.bound(format!("{family}/riccati-oracle"), worst, self.tol.oracle, true);
        Ok(())
    }

    fn constant(&mut self, branch: Branch) -> Result<()> {
        let family = Family::Constant(branch);
        let reduced: Vec<WaveSolution> =
            [0.5, 4.0 / 27.0].iter().map(|&q| WaveSolution::constant(q, branch)).collect::<Result<_>>()?;
        self.reduced_checks(family, &reduced, &linspace(-10.0, 10.0, 200))?;

        let physical = [WaveSolution::from_physical(family, &fig7(-25.0 / 24.0), 0.0)?];
        self.pde_checks(family, &physical, &xt_grid((-10.0, 10.0), (0.0, 1.0), 20), FD_STEP)?;

        let sol = self.perturb(reduced[0].clone());
        let fact = factorize_compound(&ReducedParams::new(sol.p(), sol.q()), branch)?;
        let traj = oracle_integrate_riccati(&fact, sol.eval(ZERO)?, (0.0, 10.0), 0.01)?;
        let worst = trajectory_error(&traj, &sol)?;
        self.bound(format!("{family}/riccati-oracle"), worst, self.tol.oracle, true);

        // compound tanh family with the same A approaches the constant as Δ²
        let tanh_family = [Family::CompoundTanhPlus, Family::CompoundTanhMinus]
            .into_iter()
            .find(|f| f.a_branch() == branch)
            .expect("one compound family per branch");
        let q = 0.5;
        let target = WaveSolution::constant(q, branch)?.eval(ZERO)?;
        let error = |delta: f64| -> Result<f64> {
            let p = (delta * delta + 3.0 - 6.0 / q) / 18.0;
            Ok((WaveSolution::compound(tanh_family, p, q, ZERO)?.eval(c(3.0))? - target).norm())
        };
        let ratio = error(1e-2)? / error(5e-3)?;
        self.checks.push(CheckResult {
            name: format!("{family}/degenerate-limit-order"),
            max_abs: (ratio - 4.0).abs(),
            tolerance: 0.5,
            outcome: if (ratio - 4.0).abs() <= 0.5 { CheckOutcome::Pass } else { CheckOutcome::Fail },
            sensitive: false,
            note: Some(format!("error ratio per halving of Δ = {ratio:.4}")),
        });
        Ok(())
    }

    fn audit(&mut self) -> Result<()> {
        let grid = xt_grid((5.0, 15.0), (0.0, 1.0), 12);
        let cases = [("fig7", fig7(0.0)), ("matched", PhysicalParams { s: 1.5, mu: 1.5, alpha: 2.0, beta: 1.0, v: 0.0, xi0: ZERO })];
        for (label, params) in cases {
            let audit = audit_rational_forms(&params, &[1.0, -2.0], &grid, FD_STEP, self.tol.pde)?;
            let reference = audit
                .entry(RationalForm::Transformed, VelocitySource::Degenerate)
                .expect("reference entry")
                .max_abs;
            self.bound(format!("audit/{label}/transformed-degenerate"), reference, self.tol.pde, false);
            for line in audit.discrepancies() {
                self.checks.push(CheckResult {
                    name: format!("audit/{label}/discrepancy"),
                    max_abs: f64::NAN,
                    tolerance: f64::NAN,
                    outcome: CheckOutcome::Flag,
                    sensitive: false,
                    note: Some(line),
                });
            }
            self.audits.push(audit);
        }
        Ok(())
    }

    fn family(&mut self, family: Family) -> Result<()> {
        match family {
            Family::KdvbRegular | Family::KdvbSingular => self.kdvb(family),
            Family::CompoundTanhPlus | Family::CompoundTanhMinus => self.compound(family),
            Family::RationalPlus | Family::RationalMinus => self.rational(family),
            Family::Constant(b) => self.constant(b),
        }
    }
}

fn trajectory_error(traj: &super::oracle::Trajectory<Complex64>, sol: &WaveSolution) -> Result<f64> {
    let mut worst: f64 = if traj.blew_up { f64::INFINITY } else { 0.0 };
    for (th, u) in traj.thetas.iter().zip(&traj.values) {
        worst = worst.max((u - sol.eval(c(*th))?).norm());
    }
    Ok(worst)
}

/// Runs the checks for `scope`. With `perturbation ≠ 1` every solution is
/// scaled by that factor first, so residual and oracle checks are expected
/// to fail.
pub fn run_suite(scope: Scope, tolerances: &Tolerances, perturbation: f64) -> Result<SuiteReport> {
    if !(perturbation.is_finite() && perturbation != 0.0) {
        return Err(Error::InvalidInput(format!("perturbation factor must be finite and nonzero, got {perturbation}")));
    }
    for t in [tolerances.analytic, tolerances.pde, tolerances.oracle] {
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be non-negative, got {t}")));
        }
    }
    let mut suite = Suite { tol: *tolerances, perturbation, checks: Vec::new(), audits: Vec::new() };
    match scope {
        Scope::All => {
            suite.factorization()?;
            for family in Family::ALL {
                suite.family(family)?;
            }
            suite.audit()?;
        }
        Scope::Factorization => suite.factorization()?,
        Scope::CompoundRational => {
            for family in [
                Family::RationalPlus,
                Family::RationalMinus,
                Family::Constant(Branch::Plus),
                Family::Constant(Branch::Minus),
            ] {
                suite.family(family)?;
            }
            suite.audit()?;
        }
        Scope::Family(family) => suite.family(family)?,
    }
    Ok(SuiteReport { scope, perturbation, checks: suite.checks, audits: suite.audits })
}
