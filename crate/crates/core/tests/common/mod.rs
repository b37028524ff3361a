//! Independent reference solvers and shared fixtures for integration tests.
#![allow(dead_code)]

use mfs::sparse::CsrMatrix;
use mfs::{build_space, Assembler, Continuity, SplineSpace};

/// Systems up to this size go through dense LU with partial pivoting,
/// larger ones through banded elimination.
pub const DENSE_LIMIT: usize = 1500;

/// Largest system in the oracle grid.
pub const GRID_MAX_N: usize = 20_000;

/// Gaussian elimination with partial pivoting on a row-major dense matrix.
pub fn dense_lu_solve(mut a: Vec<f64>, n: usize, mut b: Vec<f64>) -> Vec<f64> {
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs())).unwrap();
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            b.swap(k, piv);
        }
        let akk = a[k * n + k];
        for i in k + 1..n {
            let l = a[i * n + k] / akk;
            if l == 0.0 {
                continue;
            }
            for j in k + 1..n {
                a[i * n + j] -= l * a[k * n + j];
            }
            b[i] -= l * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i * n + j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i * n + i];
    }
    x
}

/// Gaussian elimination without pivoting inside the band of an SPD matrix.
pub fn band_lu_solve(m: &CsrMatrix, mut b: Vec<f64>) -> Vec<f64> {
    let n = m.n();
    let bw = m.half_bandwidth();
    let w = 2 * bw + 1;
    let mut band = vec![0.0; n * w];
    for i in 0..n {
        let (cols, vals) = m.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            band[i * w + j + bw - i] = v;
        }
    }
    for k in 0..n {
        let last = (k + bw).min(n - 1);
        let (top, rest) = band.split_at_mut((k + 1) * w);
        let pivot_row = &top[k * w..];
        let akk = pivot_row[bw];
        let urow = &pivot_row[bw + 1..];
        for i in k + 1..=last {
            let row = &mut rest[(i - k - 1) * w..(i - k) * w];
            let off = k + bw - i;
            let l = row[off] / akk;
            row[off] = l;
            if l == 0.0 {
                continue;
            }
            let len = (last - k).min(urow.len());
            for (x, &u) in row[off + 1..off + 1 + len].iter_mut().zip(&urow[..len]) {
                *x -= l * u;
            }
            b[i] -= l * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let last = (i + bw).min(n - 1);
        let row = &band[i * w..(i + 1) * w];
        let s: f64 = (i + 1..=last).map(|j| row[j + bw - i] * x[j]).sum();
        x[i] = (b[i] - s) / row[bw];
    }
    x
}

/// Reference solution of the assembled global system.
pub fn oracle_solve(space: &SplineSpace) -> Vec<f64> {
    let (a, b) = Assembler::new(space).global_system();
    if a.n() <= DENSE_LIMIT {
        dense_lu_solve(a.to_dense(), a.n(), b)
    } else {
        band_lu_solve(&a, b)
    }
}

pub fn rel_diff(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let den: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / den
}

pub type Config = (usize, usize, Continuity, usize);

/// Every `(d, p, continuity, s)` with `d ≤ 3`, `p ≤ 4`, `s ≥ 1` and at
/// most [`GRID_MAX_N`] unknowns. C^{p-1} with `p = 1` is the C0 space and
/// is listed once.
pub fn grid() -> Vec<Config> {
    let mut out = Vec::new();
    for d in 1..=3 {
        for p in 1..=4 {
            for c in [Continuity::C0, Continuity::Cpm1] {
                if c == Continuity::Cpm1 && p == 1 {
                    continue;
                }
                for s in 1.. {
                    match build_space(d, p, c, s) {
                        Ok(space) if space.n_dofs() <= GRID_MAX_N => out.push((d, p, c, s)),
                        _ => break,
                    }
                }
            }
        }
    }
    out
}

/// FLOPs of one front with `q` eliminated and `r` interface unknowns,
/// counted operation by operation: the LU of the interior block, the two
/// triangular solves against the coupling blocks, the Schur update, the
/// forward sweep over the right-hand side and the back-substitution.
pub fn front_flops(q: u64, r: u64) -> u64 {
    let mut f = 0;
    for k in 0..q {
        let below = q - k - 1;
        f += below; // multipliers
        f += 2 * below * below; // interior update
    }
    for k in 0..q {
        let below = q - k - 1;
        f += 2 * below * r; // L⁻¹B
        f += r; // multipliers of CU⁻¹
        f += 2 * below * r; // CU⁻¹ columns
        f += 2 * r * r; // Schur update
    }
    f += q * q.saturating_sub(1) + 2 * q * r; // forward sweep
    f += 2 * q * r + q * q.saturating_sub(1) + q; // back-substitution
    f
}
