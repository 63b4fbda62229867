//! Assembly of the regularized surface-propagator matrix M̃₁₁ and the
//! right-hand side M̃₁₂ at fixed dimensionless momentum q̃.
//!
//! The K₀ kernel diverges logarithmically at coincident points; entries with
//! combined argument z = q̃·distance at or below the cutoff ε are replaced by
//! the matched smooth cap −(ln(z+ε) − K₀(ε) − ln 2ε)/2π, which is continuous
//! at z = ε and finite at z = 0.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::profile::HeightProfile;
use crate::specfun::k0_pos;
use std::io::{Read, Write};

const TWO_PI_INV: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// Short-distance cutoff for the kernel's combined argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    epsilon: f64,
}

impl RegularizationParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::Config(format!(
                "regularization cutoff must be positive, got {epsilon}"
            )));
        }
        Ok(RegularizationParams { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Regularized kernel value (1/2π)K₀(z) with the smooth cap for z ≤ ε.
pub fn regularized_m11(z: f64, reg: &RegularizationParams) -> f64 {
    debug_assert!(z >= 0.0);
    let eps = reg.epsilon;
    if z > eps {
        TWO_PI_INV * k0_pos(z)
    } else {
        -TWO_PI_INV * ((z + eps).ln() - k0_pos(eps) - (2.0 * eps).ln())
    }
}

/// Same with K₀(ε) hoisted out of the entry loop.
#[inline]
fn regularized_m11_hoisted(z: f64, eps: f64, k0_eps: f64) -> f64 {
    if z > eps {
        TWO_PI_INV * k0_pos(z)
    } else {
        -TWO_PI_INV * ((z + eps).ln() - k0_eps - (2.0 * eps).ln())
    }
}

/// Euclidean surface distance √((x'−x)² + (h(x')−h(x))²).
pub fn kernel_argument(profile: &HeightProfile, x: f64, xp: f64) -> Result<f64> {
    let dx = xp - x;
    let dh = profile.height(xp)? - profile.height(x)?;
    Ok((dx * dx + dh * dh).sqrt())
}

/// Distance from the surface point at x' to the sphere at (0, 1).
pub fn rhs_argument(profile: &HeightProfile, xp: f64) -> Result<f64> {
    let dh = profile.height(xp)? - 1.0;
    let d = (xp * xp + dh * dh).sqrt();
    if d <= 0.0 {
        return Err(Error::Geometry(format!(
            "surface touches the sphere at x = {xp}"
        )));
    }
    Ok(d)
}

/// Momentum-independent geometry data reused across all (q̃, ε) assemblies
/// on one lattice: pair distances, sphere distances and metric weights.
#[derive(Debug, Clone)]
pub struct GeometryTables {
    nx: usize,
    /// row-major |xᵢ - xⱼ| surface distances
    distances: Vec<f64>,
    sphere_distances: Vec<f64>,
    weights: Vec<f64>,
}

impl GeometryTables {
    pub fn build(profile: &HeightProfile, lattice: &Lattice) -> Result<Self> {
        let nodes = lattice.nodes();
        let nx = nodes.len();
        let ax = lattice.spacing();
        let heights: Vec<f64> = nodes
            .iter()
            .map(|&x| profile.height(x))
            .collect::<Result<_>>()?;
        let mut weights = Vec::with_capacity(nx);
        for &x in nodes {
            weights.push(profile.metric_factor(x)? * ax);
        }
        let mut sphere_distances = Vec::with_capacity(nx);
        for (i, &x) in nodes.iter().enumerate() {
            let dh = heights[i] - 1.0;
            let d = (x * x + dh * dh).sqrt();
            if d <= 0.0 {
                return Err(Error::Geometry(format!(
                    "surface touches the sphere at x = {x}"
                )));
            }
            sphere_distances.push(d);
        }
        let mut distances = vec![0.0; nx * nx];
        for i in 0..nx {
            for j in (i + 1)..nx {
                let dx = nodes[j] - nodes[i];
                let dh = heights[j] - heights[i];
                let d = (dx * dx + dh * dh).sqrt();
                distances[i * nx + j] = d;
                distances[j * nx + i] = d;
            }
        }
        Ok(GeometryTables {
            nx,
            distances,
            sphere_distances,
            weights,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
}

/// Discretized kernel system at one momentum node: symmetric matrix,
/// right-hand side and integration weights √g·aₓ.
#[derive(Debug, Clone)]
pub struct KernelSystem {
    pub q: f64,
    pub epsilon: f64,
    nx: usize,
    /// row-major Nₓ×Nₓ
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    weights: Vec<f64>,
}

impl KernelSystem {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.nx + j]
    }

    /// Flat little-endian f64 dump: [nx, q, ε], matrix (row-major), rhs, weights.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let mut put = |v: f64| w.write_all(&v.to_le_bytes()).map_err(Error::from);
        put(self.nx as f64)?;
        put(self.q)?;
        put(self.epsilon)?;
        for &v in self.matrix.iter().chain(&self.rhs).chain(&self.weights) {
            put(v)?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = [0u8; 8];
        let mut get = |r: &mut R| -> Result<f64> {
            r.read_exact(&mut buf)?;
            Ok(f64::from_le_bytes(buf))
        };
        let nx = get(&mut r)? as usize;
        if nx == 0 {
            return Err(Error::Parse("kernel dump has zero size header".into()));
        }
        let q = get(&mut r)?;
        let epsilon = get(&mut r)?;
        let read_vec = |r: &mut R, n: usize| -> Result<Vec<f64>> {
            let mut out = Vec::with_capacity(n);
            let mut buf = [0u8; 8];
            for _ in 0..n {
                r.read_exact(&mut buf)?;
                out.push(f64::from_le_bytes(buf));
            }
            Ok(out)
        };
        let matrix = read_vec(&mut r, nx * nx)?;
        let rhs = read_vec(&mut r, nx)?;
        let weights = read_vec(&mut r, nx)?;
        Ok(KernelSystem {
            q,
            epsilon,
            nx,
            matrix,
            rhs,
            weights,
        })
    }
}

/// Maps precomputed geometry onto the kernel at one (q̃, ε).
pub fn assemble_from_tables(
    tables: &GeometryTables,
    q: f64,
    reg: &RegularizationParams,
) -> Result<KernelSystem> {
    if !(q > 0.0) {
        return Err(Error::Config(format!("momentum must be positive, got {q}")));
    }
    let nx = tables.nx;
    let eps = reg.epsilon;
    let k0_eps = k0_pos(eps);
    let diag = regularized_m11_hoisted(0.0, eps, k0_eps);
    let mut matrix = vec![0.0; nx * nx];
    for i in 0..nx {
        matrix[i * nx + i] = diag;
        for j in (i + 1)..nx {
            let v = regularized_m11_hoisted(q * tables.distances[i * nx + j], eps, k0_eps);
            matrix[i * nx + j] = v;
            matrix[j * nx + i] = v;
        }
    }
    let rhs: Vec<f64> = tables
        .sphere_distances
        .iter()
        .map(|&d| TWO_PI_INV * k0_pos(q * d))
        .collect();
    Ok(KernelSystem {
        q,
        epsilon: eps,
        nx,
        matrix,
        rhs,
        weights: tables.weights.clone(),
    })
}

/// Full assembly from a rescaled profile (sphere at height 1) and lattice.
pub fn assemble(
    profile: &HeightProfile,
    lattice: &Lattice,
    q: f64,
    reg: &RegularizationParams,
) -> Result<KernelSystem> {
    let tables = GeometryTables::build(profile, lattice)?;
    assemble_from_tables(&tables, q, reg)
}
