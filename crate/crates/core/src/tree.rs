//! The elimination tree: `(2^d)^(s-i)` clusters at level `i`, each parent
//! covering the `2^d` children that tile its box.

use serde::Serialize;

use crate::error::Result;
use crate::space::{classify_level, for_each_in_box, Cluster, Continuity, MultiIndex, SplineSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId {
    pub level: usize,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct EliminationTree {
    space: SplineSpace,
    levels: Vec<Vec<Cluster>>,
    /// `children[i][c]`: indices into `levels[i - 1]`; empty for `i = 0`.
    children: Vec<Vec<Vec<usize>>>,
}

pub fn build_tree(space: &SplineSpace) -> Result<EliminationTree> {
    let s = space.levels();
    let levels = (0..=s).map(|i| classify_level(space, i)).collect::<Result<Vec<_>>>()?;
    let d = space.dim();
    let mut children = vec![Vec::new()];
    for i in 1..=s {
        let n_child = space.clusters_per_dim(i - 1);
        let kids = levels[i]
            .iter()
            .map(|parent| {
                // Z-order: siblings 2b + δ, δ ∈ {0,1}^d lexicographic
                let ranges = space.dim_ranges(|k| 2 * parent.block[k]..2 * parent.block[k] + 2);
                let mut out = Vec::with_capacity(1 << d);
                for_each_in_box(&ranges, |b: MultiIndex| {
                    out.push(b[..d].iter().fold(0, |acc, &x| acc * n_child + x));
                });
                out
            })
            .collect();
        children.push(kids);
    }
    Ok(EliminationTree {
        space: space.clone(),
        levels,
        children,
    })
}

impl EliminationTree {
    pub fn space(&self) -> &SplineSpace {
        &self.space
    }

    /// Number of elimination levels `s`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &[Cluster] {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Vec<Cluster>] {
        &self.levels
    }

    pub fn cluster(&self, id: NodeId) -> &Cluster {
        &self.levels[id.level][id.index]
    }

    pub fn children(&self, id: NodeId) -> &[usize] {
        if id.level == 0 {
            &[]
        } else {
            &self.children[id.level][id.index]
        }
    }

    pub fn root(&self) -> &Cluster {
        &self.levels[self.depth()][0]
    }

    pub fn n_nodes(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Serializable summary of the tree for debugging.
    pub fn dump(&self) -> TreeDump {
        let d = self.space.dim();
        TreeDump {
            d,
            p: self.space.degree(),
            continuity: self.space.continuity(),
            s: self.depth(),
            n: self.space.n_dofs(),
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(i, clusters)| LevelDump {
                    i,
                    clusters: clusters
                        .iter()
                        .map(|c| ClusterDump {
                            lo: c.lo[..d].to_vec(),
                            hi: c.hi[..d].to_vec(),
                            q: c.q(),
                            r: c.r(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeDump {
    pub d: usize,
    pub p: usize,
    pub continuity: Continuity,
    pub s: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub levels: Vec<LevelDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDump {
    pub i: usize,
    pub clusters: Vec<ClusterDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterDump {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
    pub q: usize,
    pub r: usize,
}

/// Elimination order (children before parents) and its reverse for
/// back-substitution. Clusters within one wave share no data and may be
/// processed concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub elimination: Vec<NodeId>,
    pub back_substitution: Vec<NodeId>,
    pub waves: Vec<Vec<NodeId>>,
}

pub fn schedule(tree: &EliminationTree) -> Schedule {
    let waves: Vec<Vec<NodeId>> = tree
        .levels
        .iter()
        .enumerate()
        .map(|(level, cs)| (0..cs.len()).map(|index| NodeId { level, index }).collect())
        .collect();
    let elimination: Vec<NodeId> = waves.iter().flatten().copied().collect();
    let back_substitution = elimination.iter().rev().copied().collect();
    Schedule {
        elimination,
        back_substitution,
        waves,
    }
}
