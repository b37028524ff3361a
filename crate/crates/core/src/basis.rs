//! B-spline basis evaluation (Cox–de Boor) and Gauss–Legendre rules.

use crate::error::{Error, Result};
use crate::space::Continuity;

/// Open knot vector on `[0, 1]` with uniformly spaced breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    degree: usize,
    knots: Vec<f64>,
}

impl KnotVector {
    /// End knots get multiplicity `p+1`; interior breakpoints get `p` (C0)
    /// or `1` (C^{p-1}).
    pub fn open_uniform(degree: usize, n_elems: usize, continuity: Continuity) -> Self {
        let interior = match continuity {
            Continuity::C0 => degree.max(1),
            Continuity::Cpm1 => 1,
        };
        let mut knots = vec![0.0; degree + 1];
        for b in 1..n_elems {
            let x = b as f64 / n_elems as f64;
            knots.extend(std::iter::repeat(x).take(interior));
        }
        knots.extend(std::iter::repeat(1.0).take(degree + 1));
        Self { degree, knots }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn n_functions(&self) -> usize {
        self.knots.len() - self.degree - 1
    }
}

/// Nonzero basis functions at one point: `values[k]` and `derivs[k]` belong
/// to global function `first + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval1d {
    pub first: usize,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
}

fn find_span(p: usize, knots: &[f64], x: f64) -> Result<usize> {
    let n = knots.len() - p - 1;
    let (lo, hi) = (knots[p], knots[n]);
    if !(lo..=hi).contains(&x) {
        return Err(Error::OutsideDomain { x, lo, hi });
    }
    if x >= hi {
        // last nonempty span
        return Ok((p..n).rev().find(|&k| knots[k] < knots[k + 1]).unwrap_or(p));
    }
    Ok(knots.partition_point(|&t| t <= x) - 1)
}

/// Evaluates the `p+1` nonzero B-splines of degree `p` and their first
/// derivatives at `x`.
pub fn eval_basis_1d(p: usize, knots: &[f64], x: f64) -> Result<BasisEval1d> {
    if knots.len() < 2 * (p + 1) {
        return Err(Error::InvalidConfig(format!(
            "{} knots cannot carry degree-{p} B-splines",
            knots.len()
        )));
    }
    let span = find_span(p, knots, x)?;

    // ndu[j][r] (r <= j): basis values of degree j; ndu[j][r] (r < j): knot differences
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let values: Vec<f64> = (0..=p).map(|r| ndu[r][p]).collect();
    let derivs = (0..=p)
        .map(|r| {
            if p == 0 {
                return 0.0;
            }
            let mut d = 0.0;
            if r >= 1 {
                d += ndu[r - 1][p - 1] / ndu[p][r - 1];
            }
            if r < p {
                d -= ndu[r][p - 1] / ndu[p][r];
            }
            d * p as f64
        })
        .collect();

    Ok(BasisEval1d {
        first: span - p,
        values,
        derivs,
    })
}

/// Gauss–Legendre points and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (pn, dpn) = legendre(n, x);
            dp = dpn;
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if dp == 0.0 {
            dp = legendre(n, x).1;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (points, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knot_counts() {
        let kv = KnotVector::open_uniform(2, 4, Continuity::C0);
        assert_eq!(kv.n_functions(), 9);
        let kv = KnotVector::open_uniform(2, 6, Continuity::Cpm1);
        assert_eq!(kv.n_functions(), 8);
        assert_eq!(kv.knots().len(), 11);
    }

    #[test]
    fn linear_hats_at_midpoint() {
        let kv = KnotVector::open_uniform(1, 4, Continuity::C0);
        let ev = eval_basis_1d(1, kv.knots(), 0.375).unwrap();
        assert_eq!(ev.first, 1);
        assert!((ev.values[0] - 0.5).abs() < 1e-15);
        assert!((ev.values[1] - 0.5).abs() < 1e-15);
        assert!((ev.derivs[0] + 4.0).abs() < 1e-12);
        assert!((ev.derivs[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_is_indicator() {
        let knots = [0.0, 0.25, 0.5, 0.75, 1.0];
        let ev = eval_basis_1d(0, &knots, 0.6).unwrap();
        assert_eq!(ev.first, 2);
        assert_eq!(ev.values, vec![1.0]);
        assert_eq!(ev.derivs, vec![0.0]);
    }

    #[test]
    fn quadratic_partition_of_unity() {
        for c in [Continuity::C0, Continuity::Cpm1] {
            let kv = KnotVector::open_uniform(2, 5, c);
            for &x in &[0.0, 0.13, 0.5, 0.77, 1.0] {
                let ev = eval_basis_1d(2, kv.knots(), x).unwrap();
                assert_eq!(ev.values.len(), 3);
                assert!((ev.values.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!(ev.derivs.iter().sum::<f64>().abs() < 1e-11);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let kv = KnotVector::open_uniform(3, 4, Continuity::Cpm1);
        let x = 0.4;
        let h = 1e-6;
        let ev = eval_basis_1d(3, kv.knots(), x).unwrap();
        let up = eval_basis_1d(3, kv.knots(), x + h).unwrap();
        let dn = eval_basis_1d(3, kv.knots(), x - h).unwrap();
        assert_eq!((up.first, dn.first), (ev.first, ev.first));
        for k in 0..4 {
            let fd = (up.values[k] - dn.values[k]) / (2.0 * h);
            assert!((fd - ev.derivs[k]).abs() < 1e-6, "{fd} vs {}", ev.derivs[k]);
        }
    }

    #[test]
    fn endpoint_and_outside() {
        let kv = KnotVector::open_uniform(2, 3, Continuity::Cpm1);
        let ev = eval_basis_1d(2, kv.knots(), 1.0).unwrap();
        assert_eq!(ev.first, kv.n_functions() - 3);
        assert!((ev.values[2] - 1.0).abs() < 1e-15);
        let ev = eval_basis_1d(2, kv.knots(), 0.0).unwrap();
        assert_eq!(ev.first, 0);
        assert!((ev.values[0] - 1.0).abs() < 1e-15);
        assert!(matches!(eval_basis_1d(2, kv.knots(), 1.5), Err(Error::OutsideDomain { .. })));
        assert!(matches!(eval_basis_1d(2, kv.knots(), -1e-9), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn gauss_rules() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(1);
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 2.0).abs() < 1e-15);
        // n points integrate x^(2n-1) and x^(2n-2) exactly
        for n in 1..=9 {
            let (x, w) = gauss_legendre(n);
            let even = 2 * n - 2;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(even as i32)).sum();
            assert!((q - 2.0 / (even as f64 + 1.0)).abs() < 1e-14, "n={n}");
            let odd: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * n as i32 - 1)).sum();
            assert!(odd.abs() < 1e-14);
        }
    }
}
