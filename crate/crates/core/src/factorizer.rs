//! Factorization of `U'' − U' + F(U) = 0` as `[D − f₂(U)][D − f₁(U)] U = 0`.
//!
//! Matching against the expanded operator gives two compatibility conditions:
//!
//! ```text
//! f₁(U) f₂(U) = F(U)/U                   (product condition)
//! f₂(U) + d(f₁(U) U)/dU = 1              (derivative condition)
//! ```
//!
//! Any factorization yields the first-order equation `U' = f₁(U) U`, whose
//! solutions solve the second-order one. Two ansätze are implemented: `f₁`
//! linear in `U^{1/2}` for the KdVB equation (a Bernoulli equation of degree
//! 3/2) and `f₁ U` quadratic in `U` for the compound equation (a Riccati
//! equation).

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ReducedParams;

/// Explicit sign selector for the `±` choices in the factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

/// The pieces of a factorization needed to check the compatibility
/// conditions. `d_f1u` is the exact derivative `d(f₁(U) U)/dU`.
pub trait Ansatz {
    fn f1(&self, u: Complex64) -> Complex64;
    fn f2(&self, u: Complex64) -> Complex64;
    /// The nonlinear term `F(U)` of `U'' − U' + F(U) = 0`.
    fn rhs(&self, u: Complex64) -> Complex64;
    fn d_f1u(&self, u: Complex64) -> Complex64;

    /// Right-hand side of the compatible first-order equation `U' = f₁(U) U`.
    fn compatible_rhs(&self, u: Complex64) -> Complex64 {
        self.f1(u) * u
    }
}

/// Ansatz assembled from arbitrary closures, for checking hand-built or
/// perturbed factor pairs.
pub struct ClosureAnsatz<F1, F2, R, D> {
    pub f1: F1,
    pub f2: F2,
    pub rhs: R,
    pub d_f1u: D,
}

impl<F1, F2, R, D> Ansatz for ClosureAnsatz<F1, F2, R, D>
where
    F1: Fn(Complex64) -> Complex64,
    F2: Fn(Complex64) -> Complex64,
    R: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    fn f1(&self, u: Complex64) -> Complex64 {
        (self.f1)(u)
    }
    fn f2(&self, u: Complex64) -> Complex64 {
        (self.f2)(u)
    }
    fn rhs(&self, u: Complex64) -> Complex64 {
        (self.rhs)(u)
    }
    fn d_f1u(&self, u: Complex64) -> Complex64 {
        (self.d_f1u)(u)
    }
}

/// KdVB factorization after the displacement `w = U + δ`:
/// `f₁ = A U^{1/2} + B`, `f₂ = (1 − B) − (3/2) A U^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdvbFactorization {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub p: f64,
    pub k: f64,
    pub branch: Branch,
}

pub const KDVB_B: f64 = 0.4;
pub const KDVB_P_OFFSET: f64 = 6.0 / 25.0;

/// `A = ±√(2/3)`, `B = 2/5`, `p = 2δ + 6/25`, `k = pδ − δ²`.
pub fn factorize_kdvb(delta: f64, branch: Branch) -> KdvbFactorization {
    let p = 2.0 * delta + KDVB_P_OFFSET;
    KdvbFactorization {
        a: branch.sign() * (2.0f64 / 3.0).sqrt(),
        b: KDVB_B,
        delta,
        p,
        k: p * delta - delta * delta,
        branch,
    }
}

impl KdvbFactorization {
    /// Residual of the displaced equation `U'' − U' + (p − 2δ)U − U²` at a
    /// given jet. Once `p = 2δ + 6/25` is imposed it no longer depends on δ.
    pub fn ode_residual(&self, u: Complex64, du: Complex64, d2u: Complex64) -> Complex64 {
        d2u - du + (self.p - 2.0 * self.delta) * u - u * u
    }

    pub fn reduced(&self) -> ReducedParams {
        ReducedParams { delta: Some(self.delta), k: Some(self.k), ..ReducedParams::new(self.p, 0.0) }
    }
}

impl Ansatz for KdvbFactorization {
    fn f1(&self, u: Complex64) -> Complex64 {
        u.sqrt() * self.a + self.b
    }
    fn f2(&self, u: Complex64) -> Complex64 {
        Complex64::new(1.0 - self.b, 0.0) - u.sqrt() * (1.5 * self.a)
    }
    fn rhs(&self, u: Complex64) -> Complex64 {
        u * (self.p - 2.0 * self.delta) - u * u
    }
    fn d_f1u(&self, u: Complex64) -> Complex64 {
        u.sqrt() * (1.5 * self.a) + self.b
    }
}

/// Compound KdVB factorization: `f₁ U = A U² + B U + C`, `f₂ = −2A U + (1 − B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompoundFactorization {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: f64,
    pub q: f64,
    pub k: f64,
    pub branch: Branch,
}

/// `A = ±√(q/2)`, `B = (A+1)/(3A)`, `C = [(2 − 9p)/A + 1/A² − 1/A³]/18`,
/// `k = C(1 − 2A)/(3A)`.
///
/// Only `q > 0` is supported; for `q < 0` the coefficient `A` is imaginary.
pub fn factorize_compound(reduced: &ReducedParams, branch: Branch) -> Result<CompoundFactorization> {
    let (p, q) = (reduced.p, reduced.q);
    if q == 0.0 {
        return Err(Error::CompoundRequiresNonzeroQ);
    }
    if q < 0.0 {
        return Err(Error::UnsupportedDomain(format!(
            "compound factorization with q = {q} < 0 has imaginary A"
        )));
    }
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::InvalidInput("p and q must be finite".into()));
    }
    let a = branch.sign() * (q / 2.0).sqrt();
    let b = (a + 1.0) / (3.0 * a);
    let c = ((2.0 - 9.0 * p) / a + 1.0 / (a * a) - 1.0 / (a * a * a)) / 18.0;
    let k = c * (1.0 - 2.0 * a) / (3.0 * a);
    Ok(CompoundFactorization { a, b, c, p, q, k, branch })
}

impl CompoundFactorization {
    pub fn reduced(&self) -> ReducedParams {
        ReducedParams { k: Some(self.k), ..ReducedParams::new(self.p, self.q) }
    }

    /// Discriminant of `A U² + B U + C`; equals Δ²/9 with Δ² = 18p + 6/q − 3.
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }
}

impl Ansatz for CompoundFactorization {
    fn f1(&self, u: Complex64) -> Complex64 {
        u * self.a + self.b + self.c / u
    }
    fn f2(&self, u: Complex64) -> Complex64 {
        Complex64::new(1.0 - self.b, 0.0) - u * (2.0 * self.a)
    }
    fn rhs(&self, u: Complex64) -> Complex64 {
        u * self.p - u * u - u * u * u * self.q - self.k
    }
    fn d_f1u(&self, u: Complex64) -> Complex64 {
        u * (2.0 * self.a) + self.b
    }
    fn compatible_rhs(&self, u: Complex64) -> Complex64 {
        u * u * self.a + u * self.b + self.c
    }
}

/// Largest residuals of the two compatibility conditions over a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationResiduals {
    /// `max |f₁ f₂ − F/U|`
    pub product: f64,
    /// `max |f₂ + d(f₁U)/dU − 1|`
    pub derivative: f64,
}

impl FactorizationResiduals {
    pub fn max(&self) -> f64 {
        self.product.max(self.derivative)
    }
}

/// Checks both compatibility conditions at every sample. `U = 0` is rejected
/// because the product condition divides by `U`; complex samples are fine
/// since `F(U)/U` is a polynomial (or Laurent polynomial) in `U`.
pub fn verify_factorization<A: Ansatz + ?Sized>(
    ansatz: &A,
    samples: &[Complex64],
) -> Result<FactorizationResiduals> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    let mut out = FactorizationResiduals { product: 0.0, derivative: 0.0 };
    for &u in samples {
        if u == Complex64::new(0.0, 0.0) {
            return Err(Error::ParamDomain(
                "product condition is undefined at U = 0".into(),
            ));
        }
        let product = (ansatz.f1(u) * ansatz.f2(u) - ansatz.rhs(u) / u).norm();
        let derivative = (ansatz.f2(u) + ansatz.d_f1u(u) - 1.0).norm();
        out.product = out.product.max(product);
        out.derivative = out.derivative.max(derivative);
    }
    Ok(out)
}
