//! Structured tensor-product B-spline spaces and their cluster hierarchy.
//!
//! A space of degree `p` over a uniform mesh of the unit `d`-cube is either
//! C0 (interior knots of multiplicity `p`) or C^{p-1} (simple interior
//! knots). Level-0 clusters are single elements for C0 and blocks of `p+1`
//! elements per dimension for C^{p-1}; every level above merges `2^d`
//! siblings. A basis function becomes *interior* (fully assembled) at the
//! lowest level whose cluster box contains its whole support.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// Per-dimension index; entries beyond the space dimension are zero.
pub type MultiIndex = [usize; MAX_DIM];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    C0,
    Cpm1,
}

impl fmt::Display for Continuity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Continuity::C0 => "c0",
            Continuity::Cpm1 => "cpm1",
        })
    }
}

impl FromStr for Continuity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c0" => Ok(Continuity::C0),
            "cpm1" => Ok(Continuity::Cpm1),
            other => Err(Error::InvalidConfig(format!(
                "unknown continuity '{other}' (expected c0 or cpm1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplineSpace {
    dim: usize,
    degree: usize,
    continuity: Continuity,
    levels: usize,
    elems_per_dim: usize,
    dofs_per_dim: usize,
}

/// Builds the space for dimension `d`, degree `p` and `s` elimination levels.
///
/// C^{p-1} with `p = 1` coincides with C0 and is normalized to it.
pub fn build_space(d: usize, p: usize, continuity: Continuity, s: usize) -> Result<SplineSpace> {
    SplineSpace::new(d, p, continuity, s)
}

impl SplineSpace {
    pub fn new(dim: usize, degree: usize, continuity: Continuity, levels: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidDimension(dim));
        }
        if degree < 1 {
            return Err(Error::InvalidDegree(degree));
        }
        if levels < 1 {
            return Err(Error::InvalidLevels(levels));
        }
        let continuity = if continuity == Continuity::Cpm1 && degree == 1 {
            log::warn!("C^(p-1) with p = 1 is the C0 space; using c0");
            Continuity::C0
        } else {
            continuity
        };
        let too_large = || Error::TooLarge(format!("d={dim}, p={degree}, s={levels}"));
        let blocks = 1usize.checked_shl(levels as u32).filter(|_| levels < 40).ok_or_else(too_large)?;
        let (elems_per_dim, dofs_per_dim) = match continuity {
            Continuity::C0 => (blocks, degree.checked_mul(blocks).ok_or_else(too_large)? + 1),
            Continuity::Cpm1 => {
                let e = (degree + 1).checked_mul(blocks).ok_or_else(too_large)?;
                (e, e + degree)
            }
        };
        dofs_per_dim.checked_pow(dim as u32).ok_or_else(too_large)?;
        Ok(Self {
            dim,
            degree,
            continuity,
            levels,
            elems_per_dim,
            dofs_per_dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    /// Number of elimination levels `s`; the root cluster lives at level `s`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn elems_per_dim(&self) -> usize {
        self.elems_per_dim
    }

    pub fn dofs_per_dim(&self) -> usize {
        self.dofs_per_dim
    }

    /// Total number of unknowns `N`.
    pub fn n_dofs(&self) -> usize {
        self.dofs_per_dim.pow(self.dim as u32)
    }

    pub fn n_elems(&self) -> usize {
        self.elems_per_dim.pow(self.dim as u32)
    }

    /// Elements per dimension in a level-0 cluster.
    pub fn base_cluster_width(&self) -> usize {
        match self.continuity {
            Continuity::C0 => 1,
            Continuity::Cpm1 => self.degree + 1,
        }
    }

    /// Elements per dimension in a level-`level` cluster.
    pub fn cluster_width(&self, level: usize) -> usize {
        self.base_cluster_width() << level
    }

    pub fn clusters_per_dim(&self, level: usize) -> usize {
        1 << (self.levels - level)
    }

    pub fn n_clusters(&self, level: usize) -> usize {
        self.clusters_per_dim(level).pow(self.dim as u32)
    }

    /// Inclusive element range on which the 1D basis function `j` is nonzero.
    pub fn support_1d(&self, j: usize) -> (usize, usize) {
        let p = self.degree;
        let last = self.elems_per_dim - 1;
        match self.continuity {
            Continuity::C0 if j % p == 0 => {
                let v = j / p;
                (v.saturating_sub(1), v.min(last))
            }
            Continuity::C0 => (j / p, j / p),
            Continuity::Cpm1 => (j.saturating_sub(p), j.min(last)),
        }
    }

    /// Lowest level at which the 1D support of `j` fits inside one cluster.
    pub fn level_1d(&self, j: usize) -> usize {
        let (lo, hi) = self.support_1d(j);
        (0..=self.levels)
            .find(|&i| {
                let w = self.cluster_width(i);
                lo / w == hi / w
            })
            .unwrap_or(self.levels)
    }

    /// Level at which the tensor-product function `dof` is eliminated.
    pub fn dof_level(&self, dof: usize) -> usize {
        let idx = self.multi_index(dof);
        idx[..self.dim].iter().map(|&j| self.level_1d(j)).max().unwrap_or(0)
    }

    pub fn linear_index(&self, idx: &MultiIndex) -> usize {
        idx[..self.dim].iter().fold(0, |acc, &j| acc * self.dofs_per_dim + j)
    }

    pub fn multi_index(&self, mut dof: usize) -> MultiIndex {
        let mut idx = [0; MAX_DIM];
        for k in (0..self.dim).rev() {
            idx[k] = dof % self.dofs_per_dim;
            dof /= self.dofs_per_dim;
        }
        idx
    }

    pub fn elem_linear_index(&self, elem: &MultiIndex) -> usize {
        elem[..self.dim].iter().fold(0, |acc, &e| acc * self.elems_per_dim + e)
    }

    fn check_dof(&self, dof: &MultiIndex) -> Result<()> {
        if dof[..self.dim].iter().any(|&j| j >= self.dofs_per_dim) || dof[self.dim..].iter().any(|&j| j != 0) {
            return Err(Error::DofOutOfRange {
                dof: dof[..self.dim].to_vec(),
                dofs_per_dim: self.dofs_per_dim,
            });
        }
        Ok(())
    }

    pub(crate) fn check_elem(&self, elem: &MultiIndex) -> Result<()> {
        if elem[..self.dim].iter().any(|&e| e >= self.elems_per_dim) || elem[self.dim..].iter().any(|&e| e != 0) {
            return Err(Error::ElementOutOfRange {
                elem: elem[..self.dim].to_vec(),
                elems_per_dim: self.elems_per_dim,
            });
        }
        Ok(())
    }

    /// 1D functions whose support lies inside elements `lo..=hi`.
    fn inside_1d(&self, lo: usize, hi: usize) -> Range<usize> {
        let n = self.dofs_per_dim;
        let start = partition_point(n, |j| self.support_1d(j).0 < lo);
        let end = partition_point(n, |j| self.support_1d(j).1 <= hi);
        start..end.max(start)
    }

    /// 1D functions whose support meets elements `lo..=hi`.
    pub(crate) fn touching_1d(&self, lo: usize, hi: usize) -> Range<usize> {
        let n = self.dofs_per_dim;
        let start = partition_point(n, |j| self.support_1d(j).1 < lo);
        let end = partition_point(n, |j| self.support_1d(j).0 <= hi);
        start..end.max(start)
    }

    pub(crate) fn dim_ranges(&self, f: impl Fn(usize) -> Range<usize>) -> [Range<usize>; MAX_DIM] {
        std::array::from_fn(|k| if k < self.dim { f(k) } else { 0..1 })
    }
}

/// First index in `0..n` for which the monotone predicate `pred` is false.
fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Lexicographic walk over the product of per-dimension ranges.
pub(crate) fn for_each_in_box(ranges: &[Range<usize>; MAX_DIM], mut f: impl FnMut(MultiIndex)) {
    for a in ranges[0].clone() {
        for b in ranges[1].clone() {
            for c in ranges[2].clone() {
                f([a, b, c]);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofSupport {
    pub dof: MultiIndex,
    /// Inclusive lower element corner.
    pub lo: MultiIndex,
    /// Inclusive upper element corner.
    pub hi: MultiIndex,
}

pub fn dof_support(space: &SplineSpace, dof: &MultiIndex) -> Result<DofSupport> {
    space.check_dof(dof)?;
    let mut lo = [0; MAX_DIM];
    let mut hi = [0; MAX_DIM];
    for k in 0..space.dim {
        (lo[k], hi[k]) = space.support_1d(dof[k]);
    }
    Ok(DofSupport { dof: *dof, lo, hi })
}

/// A node of the elimination tree: a box of elements together with the
/// unknowns it eliminates (`interior`, the `q` block) and the unknowns it
/// shares with the rest of the mesh (`interface`, the `r` block).
///
/// Both lists hold linear DOF indices in increasing (lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub level: usize,
    /// Position of the cluster among the level's clusters, per dimension.
    pub block: MultiIndex,
    pub lo: MultiIndex,
    pub hi: MultiIndex,
    pub interior: Vec<usize>,
    pub interface: Vec<usize>,
}

impl Cluster {
    pub fn q(&self) -> usize {
        self.interior.len()
    }

    pub fn r(&self) -> usize {
        self.interface.len()
    }

    /// Front DOFs: interior first, then interface.
    pub fn dofs(&self) -> impl Iterator<Item = usize> + '_ {
        self.interior.iter().chain(&self.interface).copied()
    }

    /// True when the cluster's box reaches the domain boundary.
    pub fn touches_boundary(&self, space: &SplineSpace) -> bool {
        let n = space.clusters_per_dim(self.level);
        self.block[..space.dim()].iter().any(|&b| b == 0 || b + 1 == n)
    }

    /// Local front position of a global DOF, if the cluster carries it.
    pub fn local_index(&self, dof: usize) -> Option<usize> {
        self.interior
            .binary_search(&dof)
            .ok()
            .or_else(|| self.interface.binary_search(&dof).ok().map(|k| k + self.interior.len()))
    }
}

/// Builds the cluster at `level` with per-dimension position `block`.
pub fn cluster_at(space: &SplineSpace, level: usize, block: MultiIndex) -> Cluster {
    let levels_1d: Vec<usize> = (0..space.dofs_per_dim).map(|j| space.level_1d(j)).collect();
    build_cluster(space, &levels_1d, level, block)
}

fn build_cluster(space: &SplineSpace, levels_1d: &[usize], level: usize, block: MultiIndex) -> Cluster {
    let w = space.cluster_width(level);
    let mut lo = [0; MAX_DIM];
    let mut hi = [0; MAX_DIM];
    for k in 0..space.dim {
        lo[k] = block[k] * w;
        hi[k] = lo[k] + w - 1;
    }

    let dof_level = |idx: &MultiIndex| idx[..space.dim].iter().map(|&j| levels_1d[j]).max().unwrap_or(0);

    let mut interior = Vec::new();
    for_each_in_box(&space.dim_ranges(|k| space.inside_1d(lo[k], hi[k])), |idx| {
        if dof_level(&idx) == level {
            interior.push(space.linear_index(&idx));
        }
    });
    let mut interface = Vec::new();
    for_each_in_box(&space.dim_ranges(|k| space.touching_1d(lo[k], hi[k])), |idx| {
        if dof_level(&idx) > level {
            interface.push(space.linear_index(&idx));
        }
    });

    Cluster {
        level,
        block,
        lo,
        hi,
        interior,
        interface,
    }
}

/// All clusters of `level`, ordered lexicographically by box corner.
pub fn classify_level(space: &SplineSpace, level: usize) -> Result<Vec<Cluster>> {
    if level > space.levels {
        return Err(Error::LevelOutOfRange {
            level,
            levels: space.levels,
        });
    }
    let n = space.clusters_per_dim(level);
    let levels_1d: Vec<usize> = (0..space.dofs_per_dim).map(|j| space.level_1d(j)).collect();
    let mut out = Vec::with_capacity(space.n_clusters(level));
    for_each_in_box(&space.dim_ranges(|_| 0..n), |block| {
        out.push(build_cluster(space, &levels_1d, level, block))
    });
    Ok(out)
}
