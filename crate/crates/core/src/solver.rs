//! Multi-frontal factorization: per-front static condensation, upward
//! merging of Schur complements, root solve and downward back-substitution.

use rayon::prelude::*;

use crate::assembly::{Assembler, Front};
use crate::cost::{CostRecord, FrontCost};
use crate::dense;
use crate::error::{Error, Result};
use crate::space::{Cluster, MultiIndex, SplineSpace};
use crate::tree::{build_tree, schedule, EliminationTree, NodeId};

/// Pivots smaller than this fraction of the largest front diagonal entry
/// are treated as breakdown.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Worker threads for same-level fronts; 1 runs sequentially.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { threads: 1 }
    }
}

/// A front after elimination of its `q` interior unknowns.
///
/// `lu` holds `L\U` of the interior block (`q × q`), `u12 = L⁻¹B` (`q × r`)
/// and `l21 = CU⁻¹` (`r × q`); together these are the stored factors.
/// `schur = D − CA⁻¹B` and `rhs_update = g − CA⁻¹f` are handed to the parent.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredFront {
    pub level: usize,
    pub block: MultiIndex,
    pub dofs: Vec<usize>,
    pub n_interior: usize,
    pub lu: Vec<f64>,
    pub u12: Vec<f64>,
    pub l21: Vec<f64>,
    pub schur: Vec<f64>,
    /// Interior right-hand side after forward elimination, `L⁻¹f`.
    pub rhs_interior: Vec<f64>,
    pub rhs_update: Vec<f64>,
    /// FLOPs spent on this front so far (elimination, then back-substitution).
    pub flops: u64,
}

impl FactoredFront {
    pub fn q(&self) -> usize {
        self.n_interior
    }

    pub fn r(&self) -> usize {
        self.dofs.len() - self.n_interior
    }

    pub fn interior(&self) -> &[usize] {
        &self.dofs[..self.n_interior]
    }

    pub fn interface(&self) -> &[usize] {
        &self.dofs[self.n_interior..]
    }

    /// Stored factor entries: `q² + 2qr`.
    pub fn factor_entries(&self) -> usize {
        self.lu.len() + self.u12.len() + self.l21.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    /// `‖Ax − b‖₂ / ‖b‖₂` against the assembled global system.
    pub residual_norm: f64,
}

/// Eliminates the interior block of `front` (partial LU without pivoting).
pub fn schur_eliminate(front: Front) -> Result<FactoredFront> {
    let Front {
        level,
        block,
        dofs,
        n_interior: q,
        mut matrix,
        mut rhs,
    } = front;
    let n = dofs.len();
    let r = n - q;
    let max_diag = (0..n).map(|i| matrix[i * n + i].abs()).fold(0.0, f64::max);
    let threshold = PIVOT_TOLERANCE * max_diag;

    let mut flops = 0;
    dense::partial_lu(&mut matrix, n, q, threshold, &mut flops).map_err(|(row, pivot)| Error::PivotBreakdown {
        level,
        row,
        pivot,
        threshold,
    })?;
    dense::forward_rhs(&matrix, n, q, &mut rhs, &mut flops);

    let mut lu = Vec::with_capacity(q * q);
    let mut u12 = Vec::with_capacity(q * r);
    for row in matrix[..q * n].chunks_exact(n) {
        lu.extend_from_slice(&row[..q]);
        u12.extend_from_slice(&row[q..]);
    }
    let mut l21 = Vec::with_capacity(r * q);
    let mut schur = Vec::with_capacity(r * r);
    for row in matrix[q * n..].chunks_exact(n) {
        l21.extend_from_slice(&row[..q]);
        schur.extend_from_slice(&row[q..]);
    }
    let rhs_update = rhs.split_off(q);

    Ok(FactoredFront {
        level,
        block,
        dofs,
        n_interior: q,
        lu,
        u12,
        l21,
        schur,
        rhs_interior: rhs,
        rhs_update,
        flops,
    })
}

/// Assembles the parent front from its children's Schur complements,
/// consuming children in the given (sibling) order.
pub fn merge(parent: &Cluster, children: &[&FactoredFront]) -> Result<Front> {
    let mut front = Front::zeros(parent);
    let n = front.size();
    for child in children {
        let local = child
            .interface()
            .iter()
            .map(|&g| {
                parent.local_index(g).ok_or(Error::IndexMismatch {
                    level: parent.level,
                    dof: g,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let r = local.len();
        for (a, &la) in local.iter().enumerate() {
            front.rhs[la] += child.rhs_update[a];
            let src = &child.schur[a * r..(a + 1) * r];
            for (&lb, &v) in local.iter().zip(src) {
                front.matrix[la * n + lb] += v;
            }
        }
    }
    Ok(front)
}

/// Recovers every unknown top-down: the root front yields its interior
/// directly, each lower front solves `x = A⁻¹(f − By)` with its stored
/// factors once its interface values `y` are known.
///
/// `fronts[i]` must hold the factored fronts of tree level `i` in cluster
/// order. Back-substitution FLOPs are added to each front's counter.
pub fn back_substitute(tree: &EliminationTree, fronts: &mut [Vec<FactoredFront>]) -> Vec<f64> {
    let mut values = vec![0.0; tree.space().n_dofs()];
    for id in schedule(tree).back_substitution {
        let f = &mut fronts[id.level][id.index];
        let y: Vec<f64> = f.interface().iter().map(|&g| values[g]).collect();
        let mut flops = 0;
        let x = dense::back_solve(&f.lu, &f.u12, &f.rhs_interior, &y, &mut flops);
        f.flops += flops;
        for (&g, v) in f.interior().iter().zip(x) {
            values[g] = v;
        }
    }
    values
}

pub fn solve(space: &SplineSpace) -> Result<(Solution, CostRecord)> {
    solve_with(space, &SolveOptions::default())
}

/// Runs the whole pipeline: tree, level-0 fronts, bottom-up elimination,
/// root solve and back-substitution. Returns the solution with exact
/// FLOP and factor-memory counters.
pub fn solve_with(space: &SplineSpace, options: &SolveOptions) -> Result<(Solution, CostRecord)> {
    let tree = build_tree(space)?;
    let asm = Assembler::new(space);
    let pool = if options.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.threads)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut fronts: Vec<Vec<FactoredFront>> = Vec::with_capacity(tree.depth() + 1);
    for wave in schedule(&tree).waves {
        let below = fronts.last();
        let work = |id: &NodeId| -> Result<FactoredFront> {
            let cluster = tree.cluster(*id);
            let front = match below {
                None => asm.build_front(cluster)?,
                Some(children) => {
                    let kids: Vec<&FactoredFront> = tree.children(*id).iter().map(|&k| &children[k]).collect();
                    merge(cluster, &kids)?
                }
            };
            schur_eliminate(front)
        };
        let level = match &pool {
            Some(pool) => pool.install(|| wave.par_iter().map(work).collect::<Result<Vec<_>>>())?,
            None => wave.iter().map(work).collect::<Result<Vec<_>>>()?,
        };
        if let Some(children) = fronts.last_mut() {
            for child in children.iter_mut() {
                child.schur = Vec::new();
                child.rhs_update = Vec::new();
            }
        }
        fronts.push(level);
    }

    let values = back_substitute(&tree, &mut fronts);

    let (a, b) = asm.global_system();
    let ax = a.matvec(&values);
    let res: f64 = ax.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let bnorm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual_norm = if bnorm > 0.0 { res / bnorm } else { res };

    let costs = fronts.iter().zip(tree.levels()).flat_map(|(level, clusters)| {
        level.iter().zip(clusters).map(|(f, cluster)| FrontCost {
            level: f.level,
            q: f.q(),
            r: f.r(),
            flops: f.flops,
            entries: f.factor_entries() as u64,
            boundary: cluster.touches_boundary(space),
        })
    });
    let record = CostRecord::from_fronts(space, costs);

    Ok((Solution { values, residual_norm }, record))
}
