//! Direct solve of the discretized Green's-function equation
//! Σⱼ M̃₁₁(i,j)·w(j)·ΔM̃₁₂(j) = M̃₁₂(i) at fixed momentum.
//!
//! Dense LU with partial pivoting on the composed nonsymmetric operator
//! matrix·diag(weights); deterministic pivot choice, residual-checked.

use crate::error::{Error, Result};
use crate::kernel::KernelSystem;

/// Relative residual bound every accepted solution satisfies.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Pivot threshold relative to the largest composed-matrix entry.
pub const PIVOT_TOL: f64 = 1e-14;

/// Solved combined propagator ΔM̃₁₂ on the lattice nodes.
#[derive(Debug, Clone)]
pub struct GreensSolution {
    pub q: f64,
    pub values: Vec<f64>,
}

/// LU factorization with partial pivoting, in place, row-major.
/// Returns the permutation; fails on pivots below `PIVOT_TOL`·max|entry|.
fn lu_factor(a: &mut [f64], n: usize, pivot_floor: f64) -> std::result::Result<Vec<usize>, usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in (k + 1)..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best < pivot_floor {
            return Err(k);
        }
        if p != k {
            perm.swap(k, p);
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
        }
        let inv = 1.0 / a[k * n + k];
        for i in (k + 1)..n {
            let l = a[i * n + k] * inv;
            a[i * n + k] = l;
            if l != 0.0 {
                let (head, tail) = a.split_at_mut(i * n);
                let row_k = &head[k * n + k + 1..k * n + n];
                let row_i = &mut tail[k + 1..n];
                for (ri, rk) in row_i.iter_mut().zip(row_k) {
                    *ri -= l * rk;
                }
            }
        }
    }
    Ok(perm)
}

fn lu_solve(a: &[f64], n: usize, perm: &[usize], b: &[f64]) -> Vec<f64> {
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 1..n {
        let mut acc = x[i];
        for k in 0..i {
            acc -= a[i * n + k] * x[k];
        }
        x[i] = acc;
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for k in (i + 1)..n {
            acc -= a[i * n + k] * x[k];
        }
        x[i] = acc / a[i * n + i];
    }
    x
}

/// Solves one assembled system for ΔM̃₁₂.
pub fn solve(system: &KernelSystem) -> Result<GreensSolution> {
    let n = system.nx();
    let m = system.matrix();
    let w = system.weights();
    let rhs = system.rhs();

    // composed operator A = M·diag(w)
    let mut a = vec![0.0; n * n];
    let mut max_entry = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let v = m[i * n + j] * w[j];
            if !v.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite kernel entry at ({i},{j}), q={}, eps={}, nx={n}",
                    system.q, system.epsilon
                )));
            }
            a[i * n + j] = v;
            max_entry = max_entry.max(v.abs());
        }
    }

    let perm = lu_factor(&mut a, n, PIVOT_TOL * max_entry).map_err(|col| Error::Conditioning {
        q: system.q,
        epsilon: system.epsilon,
        nx: n,
        detail: format!("pivot below {PIVOT_TOL:.0e} of max entry at column {col}"),
    })?;
    let values = lu_solve(&a, n, &perm, rhs);

    // residual against the original operator
    let mut rmax = 0.0f64;
    let mut bmax = 0.0f64;
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += m[i * n + j] * w[j] * values[j];
        }
        rmax = rmax.max((acc - rhs[i]).abs());
        bmax = bmax.max(rhs[i].abs());
    }
    if !(rmax <= RESIDUAL_TOL * bmax) {
        return Err(Error::Conditioning {
            q: system.q,
            epsilon: system.epsilon,
            nx: n,
            detail: format!(
                "solve residual {:.3e} exceeds {RESIDUAL_TOL:.0e} of rhs",
                rmax / bmax
            ),
        });
    }

    Ok(GreensSolution {
        q: system.q,
        values,
    })
}
