//! The dimensionless geometry factor α(Nₓ, ε): momentum quadrature over
//! per-node Green's-function solves, inner lattice sum over x̃.
//!
//! The q̃ rule is Gauss-Legendre mapped onto [0, q̃_max] through q̃ = q̃_max·t³,
//! which clusters nodes against the q̃·ln q̃ endpoint behavior of the
//! integrand; 64 nodes resolve the smooth part to machine level.

use crate::error::{Error, Result};
use crate::greens::solve;
use crate::kernel::{assemble_from_tables, GeometryTables, RegularizationParams};
use crate::lattice::{ContinuumSchedule, Lattice};
use crate::profile::HeightProfile;
use crate::specfun::{k0_pos, k1_pos};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Fixed quadrature for the q̃ integral on (0, q̃_max].
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    q_max: f64,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Builds the mapped rule; `n_q` ≥ 8 and `q_max` > 5.
pub fn build_momentum_quadrature(n_q: usize, q_max: f64) -> Result<MomentumQuadrature> {
    if n_q < 8 {
        return Err(Error::Config(format!(
            "momentum quadrature needs at least 8 nodes, got {n_q}"
        )));
    }
    if !(q_max > 5.0) {
        return Err(Error::Config(format!(
            "momentum cutoff must exceed 5, got {q_max}"
        )));
    }
    let (xs, ws) = gauss_legendre(n_q);
    let mut nodes = Vec::with_capacity(n_q);
    let mut weights = Vec::with_capacity(n_q);
    for (x, w) in xs.iter().zip(&ws) {
        let t = 0.5 * (x + 1.0);
        nodes.push(q_max * t * t * t);
        weights.push(1.5 * q_max * t * t * w);
    }
    Ok(MomentumQuadrature {
        nodes,
        weights,
        q_max,
    })
}

impl MomentumQuadrature {
    /// Defaults: 64 nodes, cutoff 30 (integrand is below 1e-20 of peak there).
    pub fn default_rule() -> Self {
        build_momentum_quadrature(64, 30.0).expect("default rule is valid")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫₀^qmax f dq̃ for a plain integrand, mostly used in tests.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&q, &w)| w * f(q))
            .sum()
    }
}

/// One α(Nₓ, ε) evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSample {
    pub nx: usize,
    pub epsilon: f64,
    pub alpha: f64,
}

/// α on a caller-provided lattice (the half-length override path).
pub fn alpha_sample_on_lattice(
    profile: &HeightProfile,
    lattice: &Lattice,
    epsilon: f64,
    quad: &MomentumQuadrature,
) -> Result<AlphaSample> {
    let reg = RegularizationParams::new(epsilon)?;
    let tables = GeometryTables::build(profile, lattice)?;

    // independent solves per momentum node, reduced in ascending node order
    let contributions: Vec<Result<f64>> = quad
        .nodes
        .par_iter()
        .zip(quad.weights.par_iter())
        .map(|(&q, &wq)| -> Result<f64> {
            let system = assemble_from_tables(&tables, q, &reg)?;
            let sol = solve(&system)?;
            let mut inner = 0.0;
            for ((v, w), r) in sol.values.iter().zip(system.weights()).zip(system.rhs()) {
                inner += v * w * r;
            }
            let c = wq * q * inner;
            if !c.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite momentum contribution at q={q}, nx={}, eps={epsilon}",
                    lattice.nx()
                )));
            }
            Ok(c)
        })
        .collect();

    let mut alpha = 0.0;
    for c in contributions {
        alpha += c?;
    }
    alpha *= 2.0;
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Numerical(format!(
            "alpha sample came out nonpositive or non-finite: {alpha} (nx={}, eps={epsilon})",
            lattice.nx()
        )));
    }
    Ok(AlphaSample {
        nx: lattice.nx(),
        epsilon,
        alpha,
    })
}

/// α(Nₓ, ε) for a rescaled profile under the continuum schedule.
pub fn alpha_sample(
    profile: &HeightProfile,
    schedule: &ContinuumSchedule,
    nx: usize,
    epsilon: f64,
    quad: &MomentumQuadrature,
) -> Result<AlphaSample> {
    let lattice = Lattice::from_schedule(schedule, nx)?;
    alpha_sample_on_lattice(profile, &lattice, epsilon, quad)
}

/// Closed-form planar integrand 2·q̃·ΔM̃₁₂·M̃₂₁; test oracle only.
pub fn analytic_planar_integrand(q: f64, x: f64) -> f64 {
    debug_assert!(q > 0.0);
    let u = (1.0 + x * x).sqrt();
    let zu = q * u;
    2.0 * q * (q / u) * k1_pos(zu) / PI * k0_pos(zu) / (2.0 * PI)
}

/// Analytic planar ΔM̃₁₂ = (1/π)(q̃/u)K₁(q̃u); test oracle only.
pub fn analytic_planar_delta_m12(q: f64, x: f64) -> f64 {
    let u = (1.0 + x * x).sqrt();
    (q / u) * k1_pos(q * u) / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadrature_invariants() {
        let rule = build_momentum_quadrature(8, 30.0).unwrap();
        let total: f64 = rule.weights().iter().sum();
        assert_relative_eq!(total, 30.0, max_relative = 1e-12);
        for w in rule.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(rule.nodes()[0] > 0.0);
        assert!(*rule.nodes().last().unwrap() <= 30.0);
    }

    #[test]
    fn quadrature_test_integral() {
        // ∫₀³⁰ q e^{-2q} dq = 1/4 up to e^{-60} tail
        let rule = MomentumQuadrature::default_rule();
        let got = rule.integrate(|q| q * (-2.0 * q).exp());
        assert_relative_eq!(got, 0.25, max_relative = 1e-10);
    }

    #[test]
    fn quadrature_validation() {
        assert!(build_momentum_quadrature(7, 30.0).is_err());
        assert!(build_momentum_quadrature(16, 4.0).is_err());
    }

    #[test]
    fn analytic_integrand_values() {
        // frozen: 2·(1/π)K₁(1)·(1/2π)K₀(1)
        assert_relative_eq!(
            analytic_planar_integrand(1.0, 0.0),
            0.025676576605121113,
            max_relative = 1e-12
        );
        // even in x, positive, decaying
        assert_eq!(
            analytic_planar_integrand(0.7, 1.3),
            analytic_planar_integrand(0.7, -1.3)
        );
        assert!(analytic_planar_integrand(12.0, 0.0) < (-24.0f64).exp());
    }

    #[test]
    fn planar_alpha_sample_regression() {
        // full-pipeline value frozen on first run; sits above 1/(4π) at this ε
        let schedule = ContinuumSchedule::default_schedule();
        let quad = MomentumQuadrature::default_rule();
        let planar = HeightProfile::planar();
        let s = alpha_sample(&planar, &schedule, 100, 0.02, &quad).unwrap();
        assert!(s.alpha > 0.0);
        assert_relative_eq!(s.alpha, 0.08005, max_relative = 2e-3);
    }

    #[test]
    fn trough_alpha_exceeds_planar() {
        let schedule = ContinuumSchedule::default_schedule();
        let quad = MomentumQuadrature::default_rule();
        let planar = HeightProfile::planar();
        // ωA = 1 trough at H/A = 1: rescaled well profile h̃ = 1 - cos(x̃)
        let well = HeightProfile::sine(1.0, 1.0, -std::f64::consts::FRAC_PI_2)
            .unwrap()
            .shifted(1.0);
        let a_pl = alpha_sample(&planar, &schedule, 80, 0.02, &quad).unwrap();
        let a_well = alpha_sample(&well, &schedule, 80, 0.02, &quad).unwrap();
        assert!(a_well.alpha > a_pl.alpha);
    }
}
