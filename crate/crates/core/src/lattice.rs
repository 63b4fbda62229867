//! Uniform midpoint grids and the coupled continuum/infinite-length schedule.
//!
//! The schedule ties box half-length and spacing to one parameter:
//! Lₓ(Nₓ) = (a₀ₓ/2)·√(Nₓ·N₀ₓ), so aₓ → 0 and Lₓ → ∞ together as Nₓ grows.

use crate::error::{Error, Result};

/// Reference spacing a₀ₓ at the reference site count N₀ₓ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumSchedule {
    a0x: f64,
    n0x: usize,
}

impl ContinuumSchedule {
    pub fn new(a0x: f64, n0x: usize) -> Result<Self> {
        if !(a0x > 0.0) {
            return Err(Error::Config(format!(
                "reference lattice spacing must be positive, got {a0x}"
            )));
        }
        if n0x < 2 || n0x % 2 != 0 {
            return Err(Error::Config(format!(
                "reference site count must be even and at least 2, got {n0x}"
            )));
        }
        Ok(ContinuumSchedule { a0x, n0x })
    }

    /// Default schedule: Lₓ(80) = 2 in units of the rescaled distance.
    pub fn default_schedule() -> Self {
        ContinuumSchedule { a0x: 0.05, n0x: 80 }
    }

    pub fn a0x(&self) -> f64 {
        self.a0x
    }

    pub fn n0x(&self) -> usize {
        self.n0x
    }

    /// Box half-length Lₓ(Nₓ) = (a₀ₓ/2)·√(Nₓ·N₀ₓ).
    pub fn half_length(&self, nx: usize) -> f64 {
        0.5 * self.a0x * ((nx * self.n0x) as f64).sqrt()
    }

    /// Spacing aₓ(Nₓ) = a₀ₓ·√(N₀ₓ/Nₓ).
    pub fn spacing(&self, nx: usize) -> f64 {
        self.a0x * (self.n0x as f64 / nx as f64).sqrt()
    }
}

/// Midpoint grid of Nₓ nodes on (−Lₓ, Lₓ), symmetric about 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    nx: usize,
    lx: f64,
    ax: f64,
    nodes: Vec<f64>,
}

impl Lattice {
    /// Grid from the schedule; Nₓ must be even and not coarser than N₀ₓ.
    pub fn from_schedule(schedule: &ContinuumSchedule, nx: usize) -> Result<Self> {
        if nx < schedule.n0x {
            return Err(Error::Config(format!(
                "nx = {nx} is coarser than the schedule reference {}; the continuum extrapolation needs nx >= n0x",
                schedule.n0x
            )));
        }
        Self::with_half_length(nx, schedule.half_length(nx))
    }

    /// Direct construction with an explicit half-length override.
    pub fn with_half_length(nx: usize, lx: f64) -> Result<Self> {
        if nx < 2 || nx % 2 != 0 {
            return Err(Error::Config(format!(
                "lattice site count must be even and at least 2, got {nx}"
            )));
        }
        if !(lx > 0.0) {
            return Err(Error::Config(format!(
                "lattice half-length must be positive, got {lx}"
            )));
        }
        let ax = 2.0 * lx / nx as f64;
        let nodes = (0..nx).map(|i| -lx + ax * (i as f64 + 0.5)).collect();
        Ok(Lattice { nx, lx, ax, nodes })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn half_length(&self) -> f64 {
        self.lx
    }

    pub fn spacing(&self) -> f64 {
        self.ax
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}
