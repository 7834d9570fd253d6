//! Exact derivatives of the closed forms.
//!
//! Every family is a polynomial `P(g)` in a generator `g(θ)` whose derivative
//! is itself a polynomial, `g' = G(g)`:
//!
//! | generator                 | flow `G(g)`     |
//! |---------------------------|-----------------|
//! | `tanh(κ(θ−θ₀))`           | `κ(1 − g²)`     |
//! | `coth(κ(θ−θ₀))`           | `κ(1 − g²)`     |
//! | `1/(A + k₀(θ−θ₀))`        | `−k₀ g²`        |
//!
//! so `d/dθ P(g) = P'(g) G(g)` and derivatives of any order stay polynomials.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Real polynomial, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(Vec<f64>);

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0.0) {
            self.0.pop();
        }
    }

    pub fn eval(&self, g: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * g + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * factor).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + rhs.0.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// `P ↦ P'(g) G(g)`, the θ-derivative expressed in the generator.
pub fn differentiate(p: &Poly, flow: &Poly) -> Poly {
    &p.derivative() * flow
}

/// `w`, `w'`, `w''`, `w'''` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub w: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

/// A closed form written as `P(g(θ))` together with the generator flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub poly: Poly,
    pub flow: Poly,
}

impl Profile {
    /// The first `n` derivatives of the profile polynomial, starting with `P`.
    pub fn derivatives(&self, n: usize) -> Vec<Poly> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.poly.clone());
        for i in 0..n {
            let next = differentiate(&out[i], &self.flow);
            out.push(next);
        }
        out
    }

    pub fn jet(&self, g: Complex64) -> Jet {
        let d = self.derivatives(3);
        Jet { w: d[0].eval(g), d1: d[1].eval(g), d2: d[2].eval(g), d3: d[3].eval(g) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_arithmetic() {
        let a = Poly::new(vec![1.0, 2.0]);
        let b = Poly::new(vec![-1.0, 0.0, 3.0]);
        assert_eq!((&a * &b).coeffs(), &[-1.0, -2.0, 3.0, 6.0]);
        assert_eq!((&a + &b).coeffs(), &[0.0, 2.0, 3.0]);
        assert_eq!((&a - &a).coeffs(), &[] as &[f64]);
        assert_eq!(b.derivative().coeffs(), &[0.0, 6.0]);
        let g = Complex64::new(0.5, -1.0);
        assert!((b.eval(g) - (g * g * 3.0 - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn tanh_derivatives_match_finite_differences() {
        // P(g) = g, flow 1 − g², so w = tanh θ
        let profile = Profile { poly: Poly::new(vec![0.0, 1.0]), flow: Poly::new(vec![1.0, 0.0, -1.0]) };
        let theta = 0.37f64;
        let jet = profile.jet(Complex64::new(theta.tanh(), 0.0));
        let h = 1e-4;
        let f = |x: f64| x.tanh();
        let d1 = (f(theta + h) - f(theta - h)) / (2.0 * h);
        let d2 = (f(theta + h) - 2.0 * f(theta) + f(theta - h)) / (h * h);
        assert!((jet.d1.re - d1).abs() < 1e-8);
        assert!((jet.d2.re - d2).abs() < 1e-6);
        let sech2 = 1.0 - theta.tanh().powi(2);
        let exact_d3 = -2.0 * sech2 * sech2 + 4.0 * theta.tanh().powi(2) * sech2;
        assert!((jet.d3.re - exact_d3).abs() < 1e-14);
    }
}
