//! Element matrices and level-0 frontal matrices for the model problem
//! `-Δu + u = 1` on the unit cube with natural boundary conditions.
//!
//! Every basis function stays an unknown and the operator is symmetric
//! positive definite, so fronts can be factored without pivoting.

use crate::basis::{eval_basis_1d, gauss_legendre, KnotVector};
use crate::error::{Error, Result};
use crate::space::{for_each_in_box, Cluster, MultiIndex, SplineSpace, MAX_DIM};
use crate::sparse::CsrMatrix;

/// 1D integrals over one element, `(p+1)×(p+1)` row-major.
#[derive(Debug, Clone)]
struct Element1d {
    first: usize,
    mass: Vec<f64>,
    stiffness: Vec<f64>,
    load: Vec<f64>,
}

impl Element1d {
    /// Neutral factor for the unused trailing dimensions.
    fn unit() -> Self {
        Self {
            first: 0,
            mass: vec![1.0],
            stiffness: vec![0.0],
            load: vec![1.0],
        }
    }

    fn n(&self) -> usize {
        self.load.len()
    }
}

/// Dense element contributions. `dofs` are the `(p+1)^d` global indices in
/// lexicographic order; matrices are row-major over that ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatrix {
    pub dofs: Vec<usize>,
    pub stiffness: Vec<f64>,
    pub mass: Vec<f64>,
    pub load: Vec<f64>,
}

impl ElementMatrix {
    /// `K_e + M_e`.
    pub fn matrix(&self) -> Vec<f64> {
        self.stiffness.iter().zip(&self.mass).map(|(k, m)| k + m).collect()
    }
}

/// Dense frontal matrix of one cluster.
///
/// Rows and columns follow `dofs`: the first `n_interior` entries are the
/// fully assembled unknowns (the `A` block), the rest are shared with other
/// clusters (the `D` block).
#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub level: usize,
    pub block: MultiIndex,
    pub dofs: Vec<usize>,
    pub n_interior: usize,
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl Front {
    pub fn zeros(cluster: &Cluster) -> Self {
        let n = cluster.q() + cluster.r();
        Self {
            level: cluster.level,
            block: cluster.block,
            dofs: cluster.dofs().collect(),
            n_interior: cluster.q(),
            matrix: vec![0.0; n * n],
            rhs: vec![0.0; n],
        }
    }

    pub fn size(&self) -> usize {
        self.dofs.len()
    }

    pub fn q(&self) -> usize {
        self.n_interior
    }

    pub fn r(&self) -> usize {
        self.dofs.len() - self.n_interior
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.size() + j]
    }
}

/// Caches the per-dimension element integrals of one space.
///
/// Element matrices come from tensor-product Gauss–Legendre quadrature with
/// `p+1` points per dimension. The integrands are separable, so the tensor
/// rule is evaluated as products of 1D rules.
pub struct Assembler<'a> {
    space: &'a SplineSpace,
    knots: KnotVector,
    elements: Vec<Element1d>,
}

impl<'a> Assembler<'a> {
    pub fn new(space: &'a SplineSpace) -> Self {
        let p = space.degree();
        let ne = space.elems_per_dim();
        let knots = KnotVector::open_uniform(p, ne, space.continuity());
        let (xi, wq) = gauss_legendre(p + 1);
        let h = 1.0 / ne as f64;
        let n = p + 1;
        let elements = (0..ne)
            .map(|e| {
                let a = e as f64 * h;
                let mut el = Element1d {
                    first: 0,
                    mass: vec![0.0; n * n],
                    stiffness: vec![0.0; n * n],
                    load: vec![0.0; n],
                };
                for (x, w) in xi.iter().zip(&wq) {
                    let pt = a + 0.5 * (x + 1.0) * h;
                    let w = 0.5 * w * h;
                    let ev = eval_basis_1d(p, knots.knots(), pt).expect("quadrature point inside the mesh");
                    el.first = ev.first;
                    for i in 0..n {
                        el.load[i] += w * ev.values[i];
                        for j in 0..n {
                            el.mass[i * n + j] += w * ev.values[i] * ev.values[j];
                            el.stiffness[i * n + j] += w * ev.derivs[i] * ev.derivs[j];
                        }
                    }
                }
                el
            })
            .collect();
        Self { space, knots, elements }
    }

    pub fn space(&self) -> &SplineSpace {
        self.space
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn element_matrix(&self, elem: &MultiIndex) -> Result<ElementMatrix> {
        self.space.check_elem(elem)?;
        let d = self.space.dim();
        let unit = Element1d::unit();
        let f: [&Element1d; MAX_DIM] = std::array::from_fn(|k| if k < d { &self.elements[elem[k]] } else { &unit });
        let n = [f[0].n(), f[1].n(), f[2].n()];
        let m = n[0] * n[1] * n[2];

        let mut dofs = Vec::with_capacity(m);
        let mut load = Vec::with_capacity(m);
        for_each_in_box(&[0..n[0], 0..n[1], 0..n[2]], |a| {
            let mut idx = [0; MAX_DIM];
            for k in 0..d {
                idx[k] = f[k].first + a[k];
            }
            dofs.push(self.space.linear_index(&idx));
            load.push(f[0].load[a[0]] * f[1].load[a[1]] * f[2].load[a[2]]);
        });

        let mut stiffness = Vec::with_capacity(m * m);
        let mut mass = Vec::with_capacity(m * m);
        for_each_in_box(&[0..n[0], 0..n[1], 0..n[2]], |a| {
            for_each_in_box(&[0..n[0], 0..n[1], 0..n[2]], |b| {
                let mm: [f64; MAX_DIM] = std::array::from_fn(|k| f[k].mass[a[k] * n[k] + b[k]]);
                let ss: [f64; MAX_DIM] = std::array::from_fn(|k| f[k].stiffness[a[k] * n[k] + b[k]]);
                mass.push(mm[0] * mm[1] * mm[2]);
                stiffness.push(ss[0] * mm[1] * mm[2] + mm[0] * ss[1] * mm[2] + mm[0] * mm[1] * ss[2]);
            });
        });

        Ok(ElementMatrix {
            dofs,
            stiffness,
            mass,
            load,
        })
    }

    /// Assembles the frontal matrix of a level-0 cluster from its elements.
    ///
    /// Elements are visited lexicographically and each element's entries are
    /// added in DOF order, so the result is bit-reproducible.
    pub fn build_front(&self, cluster: &Cluster) -> Result<Front> {
        if cluster.level != 0 {
            return Err(Error::InvalidConfig(format!(
                "fronts are assembled from elements only at level 0 (got level {})",
                cluster.level
            )));
        }
        let mut front = Front::zeros(cluster);
        let n = front.size();
        let ranges = self.space.dim_ranges(|k| cluster.lo[k]..cluster.hi[k] + 1);
        let mut result = Ok(());
        for_each_in_box(&ranges, |elem| {
            if result.is_err() {
                return;
            }
            result = self.element_matrix(&elem).and_then(|em| {
                let local = em
                    .dofs
                    .iter()
                    .map(|&g| {
                        cluster.local_index(g).ok_or(Error::IndexMismatch {
                            level: cluster.level,
                            dof: g,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let m = local.len();
                for (a, &la) in local.iter().enumerate() {
                    front.rhs[la] += em.load[a];
                    for (b, &lb) in local.iter().enumerate() {
                        front.matrix[la * n + lb] += em.stiffness[a * m + b] + em.mass[a * m + b];
                    }
                }
                Ok(())
            });
        });
        result.map(|_| front)
    }

    /// Global matrix and load vector, assembled element by element.
    pub fn global_system(&self) -> (CsrMatrix, Vec<f64>) {
        let space = self.space;
        let n_dofs = space.n_dofs();
        let rows = (0..n_dofs)
            .map(|g| {
                let idx = space.multi_index(g);
                let ranges = space.dim_ranges(|k| {
                    let (lo, hi) = space.support_1d(idx[k]);
                    space.touching_1d(lo, hi)
                });
                let mut cols = Vec::new();
                for_each_in_box(&ranges, |j| cols.push(space.linear_index(&j)));
                cols
            })
            .collect();
        let mut a = CsrMatrix::from_pattern(rows);
        let mut b = vec![0.0; n_dofs];
        let ne = space.elems_per_dim();
        for_each_in_box(&space.dim_ranges(|_| 0..ne), |elem| {
            let em = self.element_matrix(&elem).expect("element inside the mesh");
            let m = em.dofs.len();
            for (i, &gi) in em.dofs.iter().enumerate() {
                b[gi] += em.load[i];
                for (j, &gj) in em.dofs.iter().enumerate() {
                    let ok = a.add(gi, gj, em.stiffness[i * m + j] + em.mass[i * m + j]);
                    debug_assert!(ok, "({gi}, {gj}) missing from the pattern");
                }
            }
        });
        (a, b)
    }
}

pub fn element_matrix(space: &SplineSpace, elem: &MultiIndex) -> Result<ElementMatrix> {
    Assembler::new(space).element_matrix(elem)
}

pub fn build_front(space: &SplineSpace, cluster: &Cluster) -> Result<Front> {
    Assembler::new(space).build_front(cluster)
}
