//! Exact cost records, closed-form predictors and scaling fits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{Continuity, SplineSpace};

/// Per-level measured/predicted ratios above this spread count as drift
/// when they also move monotonically with the level.
pub const DRIFT_FACTOR: f64 = 1.5;

/// Exact FLOPs spent on one front by the solver: partial LU of the
/// interior block with its coupling blocks and Schur update, forward
/// elimination of the right-hand side, and back-substitution.
pub fn exact_front_flops(q: usize, r: usize) -> u64 {
    let (q, r) = (q as u64, r as u64);
    let lu: u64 = (1..q).map(|k| (q - k) + 2 * (q - k) * (q - k)).sum();
    let qm1 = q.saturating_sub(1);
    lu + 2 * q * qm1 * r + 2 * q * r * r + 5 * q * r + 2 * q * qm1 + q
}

/// Stored factor entries of one front: `q² + 2qr`.
pub fn exact_front_entries(q: usize, r: usize) -> u64 {
    let (q, r) = (q as u64, r as u64);
    q * q + 2 * q * r
}

/// Leading-order cost of eliminating `q` unknowns coupled to `r` others:
/// `((2/3)q³ + 2q²r + 2qr², q² + 2qr)`.
pub fn schur_cost_model(q: f64, r: f64) -> (f64, f64) {
    (2.0 / 3.0 * q * q * q + 2.0 * q * q * r + 2.0 * q * r * r, q * q + 2.0 * q * r)
}

/// Leading-order interior and interface sizes of a cluster at level `i`,
/// unit constants.
pub fn predict_qr(d: usize, p: usize, continuity: Continuity, i: usize) -> (f64, f64) {
    let pd = (p as f64).powi(d as i32);
    let pd1 = (p as f64).powi(d as i32 - 1);
    let g = 2f64.powi(((d - 1) * i) as i32);
    match (continuity, i) {
        (Continuity::C0, 0) => (pd, pd1),
        (Continuity::C0, _) => (g * pd1, g * pd1),
        (Continuity::Cpm1, 0) => (1.0, pd),
        (Continuity::Cpm1, _) => (g * pd, g * pd),
    }
}

/// Leading-order per-cluster FLOPs and memory at level `i`.
pub fn level_estimate(d: usize, p: usize, continuity: Continuity, i: usize) -> (f64, f64) {
    let pf = p as f64;
    let pw = |e: usize| pf.powi(e as i32);
    let g = |e: usize| 2f64.powi((e * (d - 1) * i) as i32);
    match (continuity, i) {
        (Continuity::C0, 0) => (pw(3 * d), pw(2 * d)),
        (Continuity::C0, _) => (g(3) * pw(3 * (d - 1)), g(2) * pw(2 * (d - 1))),
        (Continuity::Cpm1, 0) => {
            let mem = match d {
                1 => pw(1),
                2 => pw(2),
                _ => pw(4),
            };
            (pw(2 * d), mem)
        }
        (Continuity::Cpm1, _) => (g(3) * pw(3 * d), g(2) * pw(2 * d)),
    }
}

/// Number of clusters at level `i`: `(2^d)^(s-i)`.
pub fn n_clusters(d: usize, s: usize, i: usize) -> f64 {
    2f64.powi((d * (s - i)) as i32)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DominantTerm {
    pub tag: String,
    pub value: f64,
}

fn dominant(d: usize, p: usize, continuity: Continuity, n: f64) -> (DominantTerm, DominantTerm) {
    let pf = p as f64;
    let ln = (n / (pf * pf)).ln();
    let (ft, fv, mt, mv) = match (d, continuity) {
        (1, _) => ("N p^2", n * pf * pf, "N p", n * pf),
        (2, Continuity::C0) => (
            "N p^4 + N^{1.5}",
            n * pf.powi(4) + n.powf(1.5),
            "N p^2 + N log(N/p^2)",
            n * pf * pf + n * ln,
        ),
        (2, Continuity::Cpm1) => ("N^{1.5} p^3", n.powf(1.5) * pf.powi(3), "p^2 N log(N/p^2)", pf * pf * n * ln),
        (_, Continuity::C0) => (
            "N p^6 + N^2",
            n * pf.powi(6) + n * n,
            "N p^3 + N^{4/3}",
            n * pf.powi(3) + n.powf(4.0 / 3.0),
        ),
        (_, Continuity::Cpm1) => ("N^2 p^3", n * n * pf.powi(3), "p^2 N^{4/3}", pf * pf * n.powf(4.0 / 3.0)),
    };
    (
        DominantTerm {
            tag: ft.to_string(),
            value: fv,
        },
        DominantTerm {
            tag: mt.to_string(),
            value: mv,
        },
    )
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LevelPrediction {
    pub i: usize,
    pub n_clusters: f64,
    pub q_pred: f64,
    pub r_pred: f64,
    /// Per-cluster leading-order estimates.
    pub flops_level: f64,
    pub mem_level: f64,
    /// Per-cluster cost model evaluated at `(q_pred, r_pred)`.
    pub model_flops: f64,
    pub model_entries: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Prediction {
    pub d: usize,
    pub p: usize,
    pub continuity: Continuity,
    pub s: usize,
    #[serde(rename = "N")]
    pub n_dofs: usize,
    /// Levels `0..s`; the root is reported separately.
    pub per_level: Vec<LevelPrediction>,
    pub root_q: f64,
    pub root_flops: f64,
    pub root_entries: f64,
    /// Level sum of the cost model over predicted sizes, root included.
    pub level_sum_flops: f64,
    pub level_sum_entries: f64,
    /// Level sum of the leading-order estimates.
    pub total_flops_pred: f64,
    pub total_mem_pred: f64,
    pub dominant_flops: DominantTerm,
    pub dominant_memory: DominantTerm,
    /// Same as `dominant_flops.tag`.
    pub dominant_term: String,
}

pub fn predict_total(d: usize, p: usize, continuity: Continuity, s: usize) -> Result<Prediction> {
    let space = SplineSpace::new(d, p, continuity, s)?;
    let continuity = space.continuity();
    let per_level: Vec<LevelPrediction> = (0..s)
        .map(|i| {
            let (q, r) = predict_qr(d, p, continuity, i);
            let (flops_level, mem_level) = level_estimate(d, p, continuity, i);
            let (model_flops, model_entries) = schur_cost_model(q, r);
            LevelPrediction {
                i,
                n_clusters: n_clusters(d, s, i),
                q_pred: q,
                r_pred: r,
                flops_level,
                mem_level,
                model_flops,
                model_entries,
            }
        })
        .collect();
    let root_q = predict_qr(d, p, continuity, s).0;
    let (root_flops, root_entries) = schur_cost_model(root_q, 0.0);
    let level_sum_flops = per_level.iter().map(|l| l.n_clusters * l.model_flops).sum::<f64>() + root_flops;
    let level_sum_entries = per_level.iter().map(|l| l.n_clusters * l.model_entries).sum::<f64>() + root_entries;
    let total_flops_pred = per_level.iter().map(|l| l.n_clusters * l.flops_level).sum();
    let total_mem_pred = per_level.iter().map(|l| l.n_clusters * l.mem_level).sum();
    let (dominant_flops, dominant_memory) = dominant(d, p, continuity, space.n_dofs() as f64);
    Ok(Prediction {
        d,
        p,
        continuity,
        s,
        n_dofs: space.n_dofs(),
        per_level,
        root_q,
        root_flops,
        root_entries,
        level_sum_flops,
        level_sum_entries,
        total_flops_pred,
        total_mem_pred,
        dominant_term: dominant_flops.tag.clone(),
        dominant_flops,
        dominant_memory,
    })
}

/// Measured cost of one front.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct FrontCost {
    pub level: usize,
    pub q: usize,
    pub r: usize,
    pub flops: u64,
    pub entries: u64,
    /// Whether the cluster box touches the domain boundary.
    pub boundary: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LevelCost {
    pub i: usize,
    pub n_clusters: usize,
    pub flops: u64,
    pub entries: u64,
    /// Median over clusters not touching the boundary, or over all
    /// clusters when every one touches it.
    pub q_rep: usize,
    pub r_rep: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CostRecord {
    pub d: usize,
    pub p: usize,
    pub continuity: Continuity,
    pub s: usize,
    #[serde(rename = "N")]
    pub n_dofs: usize,
    /// Levels `0..=s`, the root last.
    pub per_level: Vec<LevelCost>,
    #[serde(skip)]
    pub fronts: Vec<FrontCost>,
    pub total_flops: u64,
    pub total_factor_entries: u64,
    pub total_factor_bytes: u64,
}

fn median(mut v: Vec<usize>) -> usize {
    v.sort_unstable();
    v.get(v.len() / 2).copied().unwrap_or(0)
}

impl CostRecord {
    pub fn from_fronts(space: &SplineSpace, fronts: impl IntoIterator<Item = FrontCost>) -> Self {
        let fronts: Vec<FrontCost> = fronts.into_iter().collect();
        let s = space.levels();
        let per_level = (0..=s)
            .map(|i| {
                let at: Vec<&FrontCost> = fronts.iter().filter(|f| f.level == i).collect();
                let inner: Vec<&FrontCost> = at.iter().copied().filter(|f| !f.boundary).collect();
                let rep = if inner.is_empty() { &at } else { &inner };
                LevelCost {
                    i,
                    n_clusters: at.len(),
                    flops: at.iter().map(|f| f.flops).sum(),
                    entries: at.iter().map(|f| f.entries).sum(),
                    q_rep: median(rep.iter().map(|f| f.q).collect()),
                    r_rep: median(rep.iter().map(|f| f.r).collect()),
                }
            })
            .collect::<Vec<_>>();
        let total_flops = per_level.iter().map(|l| l.flops).sum();
        let total_factor_entries: u64 = per_level.iter().map(|l| l.entries).sum();
        Self {
            d: space.dim(),
            p: space.degree(),
            continuity: space.continuity(),
            s,
            n_dofs: space.n_dofs(),
            per_level,
            fronts,
            total_flops,
            total_factor_entries,
            total_factor_bytes: 8 * total_factor_entries,
        }
    }

    /// Cost model summed over the measured front sizes.
    pub fn model_flops(&self) -> f64 {
        self.fronts.iter().map(|f| schur_cost_model(f.q as f64, f.r as f64).0).sum()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScalingFit {
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Number of (largest) samples used in the fit.
    pub fitted: usize,
}

/// Log-log least squares of value against size over the larger half of
/// the samples.
pub fn fit_scaling(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 samples, got {}", samples.len())));
    }
    if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::DegenerateFit("sizes must be strictly increasing".into()));
    }
    if samples.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::DegenerateFit("sizes and values must be positive".into()));
    }
    if samples.iter().all(|s| s.1 == samples[0].1) {
        return Err(Error::DegenerateFit("all values are equal".into()));
    }
    let fitted = samples.len().div_ceil(2);
    let pts: Vec<(f64, f64)> = samples[samples.len() - fitted..].iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = fitted as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(ScalingFit {
        samples: samples.to_vec(),
        exponent,
        intercept,
        r2,
        fitted,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LevelComparison {
    pub i: usize,
    pub measured_flops: u64,
    pub predicted_flops: f64,
    pub flops_ratio: f64,
    pub measured_entries: u64,
    pub predicted_entries: f64,
    pub memory_ratio: f64,
    pub q_ratio: f64,
    pub r_ratio: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Comparison {
    pub per_level: Vec<LevelComparison>,
    pub total_flops_ratio: f64,
    pub total_memory_ratio: f64,
    pub flops_drift: bool,
    pub memory_drift: bool,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// True when the ratios move monotonically and spread by more than
/// [`DRIFT_FACTOR`].
pub fn drifts(ratios: &[f64]) -> bool {
    let finite: Vec<f64> = ratios.iter().copied().filter(|r| r.is_finite() && *r > 0.0).collect();
    if finite.len() < 3 {
        return false;
    }
    let up = finite.windows(2).all(|w| w[1] > w[0]);
    let down = finite.windows(2).all(|w| w[1] < w[0]);
    let max = finite.iter().copied().fold(f64::MIN, f64::max);
    let min = finite.iter().copied().fold(f64::MAX, f64::min);
    (up || down) && max / min > DRIFT_FACTOR
}

/// Measured against predicted cost, level by level (the root as level `s`).
pub fn compare(measured: &CostRecord, predicted: &Prediction) -> Comparison {
    let per_level: Vec<LevelComparison> = measured
        .per_level
        .iter()
        .map(|m| {
            let (pf, pe, q, r) = match predicted.per_level.get(m.i) {
                Some(l) => (l.n_clusters * l.model_flops, l.n_clusters * l.model_entries, l.q_pred, l.r_pred),
                None => (predicted.root_flops, predicted.root_entries, predicted.root_q, 0.0),
            };
            LevelComparison {
                i: m.i,
                measured_flops: m.flops,
                predicted_flops: pf,
                flops_ratio: ratio(m.flops as f64, pf),
                measured_entries: m.entries,
                predicted_entries: pe,
                memory_ratio: ratio(m.entries as f64, pe),
                q_ratio: ratio(m.q_rep as f64, q),
                r_ratio: ratio(m.r_rep as f64, r),
            }
        })
        .collect();
    let inner = |f: fn(&LevelComparison) -> f64| -> Vec<f64> {
        per_level
            .iter()
            .filter(|l| l.i >= 1 && l.i < measured.s)
            .map(f)
            .collect()
    };
    Comparison {
        total_flops_ratio: ratio(measured.total_flops as f64, predicted.level_sum_flops),
        total_memory_ratio: ratio(measured.total_factor_entries as f64, predicted.level_sum_entries),
        flops_drift: drifts(&inner(|l| l.flops_ratio)),
        memory_drift: drifts(&inner(|l| l.memory_ratio)),
        per_level,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cost_model_limits() {
        assert_eq!(schur_cost_model(0.0, 5.0), (0.0, 0.0));
        let (f, e) = schur_cost_model(10.0, 0.0);
        assert!((f - 2000.0 / 3.0).abs() < 1e-9);
        assert_eq!(e, 100.0);
    }

    #[test]
    fn exact_front_counts() {
        assert_eq!(exact_front_flops(0, 7), 0);
        // one pivot, one interface: divide, update, rhs update, back-solve
        assert_eq!(exact_front_flops(1, 1), 2 + 1 + 2 + 2 + 1);
        assert_eq!(exact_front_entries(3, 2), 9 + 12);
        let ratio = exact_front_flops(64, 64) as f64 / schur_cost_model(64.0, 64.0).0;
        assert!((ratio - 1.0).abs() < 0.15, "{ratio}");
    }

    #[test]
    fn predicted_cluster_sizes() {
        assert_eq!(predict_qr(3, 2, Continuity::C0, 0), (8.0, 4.0));
        assert_eq!(predict_qr(2, 3, Continuity::Cpm1, 0), (1.0, 9.0));
        assert_eq!(predict_qr(2, 2, Continuity::Cpm1, 2), (16.0, 16.0));
        assert_eq!(predict_qr(1, 5, Continuity::C0, 4), (1.0, 1.0));
    }

    #[test]
    fn dominant_tags() {
        let t = |d, c| {
            let p = predict_total(d, 2, c, 2).unwrap();
            (p.dominant_flops.tag, p.dominant_memory.tag)
        };
        assert_eq!(t(1, Continuity::C0).0, "N p^2");
        assert_eq!(t(1, Continuity::Cpm1).1, "N p");
        assert_eq!(t(2, Continuity::C0).1, "N p^2 + N log(N/p^2)");
        assert_eq!(t(2, Continuity::Cpm1).0, "N^{1.5} p^3");
        assert_eq!(t(3, Continuity::C0).0, "N p^6 + N^2");
        assert_eq!(t(3, Continuity::Cpm1), ("N^2 p^3".into(), "p^2 N^{4/3}".into()));
    }

    #[test]
    fn one_dimensional_totals() {
        // 2^s p^3 + sum_{i=1}^{s-1} 2^{s-i}
        let pr = predict_total(1, 3, Continuity::C0, 4).unwrap();
        assert_eq!(pr.total_flops_pred, 16.0 * 27.0 + 8.0 + 4.0 + 2.0);
        assert_eq!(pr.total_mem_pred, 16.0 * 9.0 + 8.0 + 4.0 + 2.0);
        let pr = predict_total(1, 3, Continuity::Cpm1, 4).unwrap();
        assert_eq!(pr.total_flops_pred, 16.0 * 9.0 + 14.0 * 27.0);
        assert_eq!(pr.total_mem_pred, 16.0 * 3.0 + 14.0 * 9.0);
    }

    #[test]
    fn level_sum_matches_independent_sum() {
        for d in 1..=3 {
            for c in [Continuity::C0, Continuity::Cpm1] {
                for s in 1..=5 {
                    let p = 3;
                    let pr = predict_total(d, p, c, s).unwrap();
                    let mut total = 0.0;
                    for i in 0..=s {
                        let nc = (1u64 << (d * (s - i))) as f64;
                        let (q, r) = if i == s {
                            (predict_qr(d, p, c, s).0, 0.0)
                        } else {
                            predict_qr(d, p, c, i)
                        };
                        total += nc * (2.0 / 3.0 * q.powi(3) + 2.0 * q * q * r + 2.0 * q * r * r);
                    }
                    assert!((pr.level_sum_flops - total).abs() <= 1e-12 * total);
                }
            }
        }
    }

    #[test]
    fn fits_power_laws() {
        let f = fit_scaling(&[(1e2, 1e4), (1e3, 1e6), (1e4, 1e8)]).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-9);
        assert_eq!(f.fitted, 2);
        let f = fit_scaling(&[(1.0, 3.0), (2.0, 6.0), (4.0, 12.0), (8.0, 24.0)]).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_fits() {
        assert!(matches!(fit_scaling(&[(1.0, 1.0), (2.0, 2.0)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(
            fit_scaling(&[(1.0, 5.0), (2.0, 5.0), (3.0, 5.0)]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(fit_scaling(&[(2.0, 1.0), (1.0, 2.0), (3.0, 3.0)]).is_err());
    }

    #[test]
    fn drift_detection() {
        assert!(drifts(&[1.0, 1.5, 2.0, 3.0]));
        assert!(!drifts(&[1.0, 1.1, 1.2]));
        assert!(!drifts(&[1.0, 3.0, 1.0, 3.0]));
        assert!(!drifts(&[1.0, 2.0]));
    }

    proptest! {
        #[test]
        fn predictions_increase_in_p_and_s(d in 1usize..=3, p in 1usize..6, s in 1usize..6, cpm1: bool) {
            let c = if cpm1 { Continuity::Cpm1 } else { Continuity::C0 };
            let base = predict_total(d, p, c, s).unwrap();
            let more_p = predict_total(d, p + 1, c, s).unwrap();
            let more_s = predict_total(d, p, c, s + 1).unwrap();
            prop_assert!(more_p.total_flops_pred > base.total_flops_pred);
            prop_assert!(more_s.total_flops_pred > base.total_flops_pred);
            prop_assert!(base.level_sum_flops > 0.0 && base.total_mem_pred > 0.0);
        }

        #[test]
        fn recovers_exponents(a in 0.2f64..3.0, c in 0.1f64..100.0, n in 3usize..10) {
            let samples: Vec<(f64, f64)> = (1..=n).map(|k| {
                let x = 10f64 * 2f64.powi(k as i32);
                (x, c * x.powf(a))
            }).collect();
            let f = fit_scaling(&samples).unwrap();
            prop_assert!((f.exponent - a).abs() < 1e-9);
        }

        #[test]
        fn exact_counts_exceed_model_lower_terms(q in 0usize..80, r in 0usize..80) {
            let exact = exact_front_flops(q, r) as f64;
            let (model, _) = schur_cost_model(q as f64, r as f64);
            if q >= 8 {
                prop_assert!(exact / model > 0.9 && exact / model < 1.6);
            }
            prop_assert_eq!(exact_front_entries(q, r), (q * q + 2 * q * r) as u64);
        }
    }
}
