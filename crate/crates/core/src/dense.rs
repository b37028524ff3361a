//! Dense kernels for frontal matrices with exact FLOP counting.
//!
//! Every scalar multiply, divide, add and subtract counts as one FLOP.
//! Counters are advanced by loop trip counts inside the kernels.

const NB: usize = 64;
const MR: usize = 4;
const NR: usize = 4;
/// Column panels per cache block of the trailing update.
const JC: usize = 64;

/// Right-looking LU without pivoting of the leading `q` pivots of the
/// row-major `n × n` matrix `a`, in place.
///
/// Afterwards `a[..q][..q]` holds `L\U` of the interior block, `a[..q][q..]`
/// holds `L⁻¹B`, `a[q..][..q]` holds `CU⁻¹` and `a[q..][q..]` holds the
/// Schur complement `D − CA⁻¹B`. On breakdown returns the offending pivot
/// row and value.
pub(crate) fn partial_lu(a: &mut [f64], n: usize, q: usize, threshold: f64, flops: &mut u64) -> Result<(), (usize, f64)> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert!(q <= n);
    let mut kb = 0;
    while kb < q {
        let ke = (kb + NB).min(q);

        // panel: columns kb..ke, rows kb..n
        for k in kb..ke {
            let pivot = a[k * n + k];
            if !(pivot.abs() >= threshold) {
                return Err((k, pivot));
            }
            let (top, bottom) = a.split_at_mut((k + 1) * n);
            let urow = &top[k * n + k + 1..k * n + ke];
            for row in bottom.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                for (x, &u) in row[k + 1..ke].iter_mut().zip(urow) {
                    *x -= l * u;
                }
            }
            *flops += ((n - k - 1) * (1 + 2 * (ke - k - 1))) as u64;
        }

        // U12 row block: rows kb..ke, columns ke..n
        if ke < n {
            for k in kb..ke {
                let (top, bottom) = a[..ke * n].split_at_mut((k + 1) * n);
                let urow = &top[k * n + ke..k * n + n];
                for row in bottom.chunks_exact_mut(n) {
                    let l = row[k];
                    for (x, &u) in row[ke..].iter_mut().zip(urow) {
                        *x -= l * u;
                    }
                }
                *flops += (2 * (ke - k - 1) * (n - ke)) as u64;
            }
            trailing_update(a, n, kb, ke);
            *flops += (2 * (n - ke) * (n - ke) * (ke - kb)) as u64;
        }
        kb = ke;
    }
    Ok(())
}

/// `a[i][j] -= Σ_{k ∈ kb..ke} a[i][k]·a[k][j]` for `i, j ≥ ke`.
fn trailing_update(a: &mut [f64], n: usize, kb: usize, ke: usize) {
    let kw = ke - kb;
    let m = n - ke;
    if m == 0 || kw == 0 {
        return;
    }
    let mut lp = vec![0.0; m * kw];
    for (i, dst) in lp.chunks_exact_mut(kw).enumerate() {
        let base = (ke + i) * n;
        dst.copy_from_slice(&a[base + kb..base + ke]);
    }
    let panels = m.div_ceil(NR);
    let mut up = vec![0.0; panels * kw * NR];
    for k in 0..kw {
        let row = &a[(kb + k) * n + ke..(kb + k) * n + n];
        for (j, &v) in row.iter().enumerate() {
            up[(j / NR) * kw * NR + k * NR + j % NR] = v;
        }
    }

    for jc in (0..panels).step_by(JC) {
        let jc_end = (jc + JC).min(panels);
        for i0 in (0..m).step_by(MR) {
            let rows = MR.min(m - i0);
            for pj in jc..jc_end {
                let cols = NR.min(m - pj * NR);
                let ub = &up[pj * kw * NR..(pj + 1) * kw * NR];
                let lb = &lp[i0 * kw..(i0 + rows) * kw];
                let c0 = ke + pj * NR;
                if rows == MR && cols == NR {
                    kernel_full(a, n, ke + i0, c0, lb, ub, kw);
                } else {
                    for r in 0..rows {
                        let base = (ke + i0 + r) * n + c0;
                        let lrow = &lb[r * kw..(r + 1) * kw];
                        for c in 0..cols {
                            let mut acc = a[base + c];
                            for (k, &l) in lrow.iter().enumerate() {
                                acc -= l * ub[k * NR + c];
                            }
                            a[base + c] = acc;
                        }
                    }
                }
            }
        }
    }
}

#[inline(always)]
fn kernel_full(a: &mut [f64], n: usize, r0: usize, c0: usize, lb: &[f64], ub: &[f64], kw: usize) {
    let mut acc = [[0.0f64; NR]; MR];
    for (r, acc_row) in acc.iter_mut().enumerate() {
        let base = (r0 + r) * n + c0;
        acc_row.copy_from_slice(&a[base..base + NR]);
    }
    let (l0, rest) = lb.split_at(kw);
    let (l1, rest) = rest.split_at(kw);
    let (l2, l3) = rest.split_at(kw);
    let l3 = &l3[..kw];
    for (k, u) in ub.chunks_exact(NR).enumerate().take(kw) {
        let l = [l0[k], l1[k], l2[k], l3[k]];
        for r in 0..MR {
            for c in 0..NR {
                acc[r][c] -= l[r] * u[c];
            }
        }
    }
    for (r, acc_row) in acc.iter().enumerate() {
        let base = (r0 + r) * n + c0;
        a[base..base + NR].copy_from_slice(acc_row);
    }
}

/// Applies the forward elimination of [`partial_lu`] to a right-hand side:
/// `f ← L⁻¹f`, then `g ← g − (CU⁻¹)f`.
pub(crate) fn forward_rhs(a: &[f64], n: usize, q: usize, rhs: &mut [f64], flops: &mut u64) {
    for i in 1..q {
        let row = &a[i * n..i * n + i];
        let mut s = rhs[i];
        for (l, x) in row.iter().zip(&rhs[..i]) {
            s -= l * x;
        }
        rhs[i] = s;
    }
    let (f, g) = rhs.split_at_mut(q);
    for (i, gi) in g.iter_mut().enumerate() {
        let row = &a[(q + i) * n..(q + i) * n + q];
        let mut s = *gi;
        for (l, x) in row.iter().zip(f.iter()) {
            s -= l * x;
        }
        *gi = s;
    }
    *flops += (q * q.saturating_sub(1) + 2 * q * (n - q)) as u64;
}

/// Solves `U x = f − U12 y` for the interior unknowns, given the interface
/// values `y`. `lu` is `q × q`, `u12` is `q × r`, both row-major.
pub(crate) fn back_solve(lu: &[f64], u12: &[f64], f: &[f64], y: &[f64], flops: &mut u64) -> Vec<f64> {
    let q = f.len();
    let r = y.len();
    let mut x: Vec<f64> = f
        .iter()
        .enumerate()
        .map(|(i, &fi)| {
            let mut s = fi;
            for (b, yj) in u12[i * r..(i + 1) * r].iter().zip(y) {
                s -= b * yj;
            }
            s
        })
        .collect();
    for i in (0..q).rev() {
        let row = &lu[i * q..(i + 1) * q];
        let mut s = x[i];
        for (u, xk) in row[i + 1..].iter().zip(&x[i + 1..]) {
            s -= u * xk;
        }
        x[i] = s / row[i];
    }
    *flops += (2 * q * r + q * q.saturating_sub(1) + q) as u64;
    x
}
