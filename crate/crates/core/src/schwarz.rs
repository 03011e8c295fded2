//! One- and two-level additive Schwarz preconditioners for the composite
//! interface system.
//!
//! The one-level method solves the composite matrix exactly on one
//! overlapping space per compartment: the compartment's own free DOFs plus
//! every DOF of foreign elements that touch the compartment's closure (a
//! one-element-deep overlap that includes corner contacts and the duplicated
//! interface copies on the far side).
//!
//! The two-level method adds a coarse space spanned by interface functions:
//! one column per (lattice corner, compartment copy) pair, set to one at
//! that copy and zero on the rest of the interface, optionally plus one
//! column per interface edge, set to one on the interior duplicated pairs of
//! both sides. Every column is extended into compartment interiors by the
//! discrete harmonic extension of the composite matrix, and the coarse
//! operator is its Galerkin triple product, factorized once.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::CompositeSystem;
use crate::error::{Error, Result};
use crate::linalg::{Factorization, LinearOp, SparseSym};
use crate::mesh::{DofClass, DofPartition, MeshTopology, SubdomainKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoarseMode {
    VertexOnly,
    VertexAndEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecondKind {
    None,
    AdditiveSchwarz,
    Gdsw,
}

/// A sparse vector over free-DOF indices, ascending.
#[derive(Debug, Clone)]
pub struct SparseCol {
    pub idx: Vec<usize>,
    pub val: Vec<f64>,
}

/// One overlapping compartment space with its exact factorization.
#[derive(Debug)]
pub struct LocalSpace {
    pub sub: usize,
    /// Free-DOF indices of the space, ascending.
    pub dofs: Vec<usize>,
    factor: Factorization,
}

/// Coarse basis, Galerkin matrix, and its factorization.
#[derive(Debug)]
pub struct CoarseSpace {
    pub cols: Vec<SparseCol>,
    pub k0: SparseSym,
    factor: Factorization,
}

#[derive(Debug)]
pub struct SchwarzPreconditioner {
    n: usize,
    local: Vec<LocalSpace>,
    coarse: Option<CoarseSpace>,
}

impl SchwarzPreconditioner {
    /// Builds the preconditioner for the free-DOF system in `sys`. Returns
    /// `None` for [`PrecondKind::None`] (run the solver unpreconditioned).
    pub fn build(
        topo: &MeshTopology,
        part: &DofPartition,
        sys: &CompositeSystem,
        kind: PrecondKind,
        coarse_mode: CoarseMode,
    ) -> Result<Option<Self>> {
        let coarse = match kind {
            PrecondKind::None => return Ok(None),
            PrecondKind::AdditiveSchwarz => None,
            PrecondKind::Gdsw => Some(build_coarse_space(topo, part, sys, coarse_mode)?),
        };
        let local = build_local_spaces(topo, sys)?;
        Ok(Some(SchwarzPreconditioner { n: sys.n_free(), local, coarse }))
    }

    pub fn local_spaces(&self) -> &[LocalSpace] {
        &self.local
    }

    pub fn coarse(&self) -> Option<&CoarseSpace> {
        self.coarse.as_ref()
    }

    pub fn coarse_size(&self) -> usize {
        self.coarse.as_ref().map_or(0, |c| c.cols.len())
    }
}

impl LinearOp for SchwarzPreconditioner {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.iter_mut().for_each(|v| *v = 0.0);
        if let Some(cs) = &self.coarse {
            let mut r0 = vec![0.0; cs.cols.len()];
            for (c, col) in cs.cols.iter().enumerate() {
                r0[c] = col.idx.iter().zip(&col.val).map(|(&i, &v)| v * x[i]).sum();
            }
            let z0 = cs.factor.solve(&r0);
            for (c, col) in cs.cols.iter().enumerate() {
                for (&i, &v) in col.idx.iter().zip(&col.val) {
                    y[i] += v * z0[c];
                }
            }
        }
        let mut xi = Vec::new();
        for ls in &self.local {
            xi.clear();
            xi.extend(ls.dofs.iter().map(|&d| x[d]));
            let zi = ls.factor.solve(&xi);
            for (k, &d) in ls.dofs.iter().enumerate() {
                y[d] += zi[k];
            }
        }
    }
}

/// Does element `e` (a unit grid square) touch the closure of compartment
/// `target`? Contact through a single corner point counts.
fn element_touches(topo: &MeshTopology, target: usize, e: &crate::mesh::Element) -> bool {
    let c = &topo.config;
    let (ex, ey) = e.grid;
    match topo.subdomains[target].kind {
        SubdomainKind::Extracellular => {
            // cell elements sit inside the block; they touch the frame's
            // closure exactly when they reach the block boundary ring
            let f = c.frame_elems;
            ex == f
                || ex + 1 == f + c.block_w()
                || ey == f
                || ey + 1 == f + c.block_h()
        }
        SubdomainKind::Cell { cx, cy } => {
            let x0 = c.frame_elems + cx * c.elems_long;
            let y0 = c.frame_elems + cy * c.elems_short;
            let (x1, y1) = (x0 + c.elems_long, y0 + c.elems_short);
            ex + 1 >= x0 && ex <= x1 && ey + 1 >= y0 && ey <= y1
        }
    }
}

fn build_local_spaces(topo: &MeshTopology, sys: &CompositeSystem) -> Result<Vec<LocalSpace>> {
    let index = &sys.map.index;
    let mut spaces = Vec::with_capacity(topo.subdomains.len());
    for target in 0..topo.subdomains.len() {
        let mut dofs: Vec<usize> = Vec::new();
        let own = &topo.subdomains[target];
        for d in own.dof_start..own.dof_start + own.n_dofs {
            if index[d] != usize::MAX {
                dofs.push(index[d]);
            }
        }
        for s in &topo.subdomains {
            if s.id == target {
                continue;
            }
            for e in &s.elements {
                if element_touches(topo, target, e) {
                    for &d in &e.dofs {
                        if index[d] != usize::MAX {
                            dofs.push(index[d]);
                        }
                    }
                }
            }
        }
        dofs.sort_unstable();
        dofs.dedup();
        let local = sys.matrix.principal_submatrix(&dofs);
        let factor = Factorization::new(&local)?;
        spaces.push(LocalSpace { sub: target, dofs, factor });
    }
    Ok(spaces)
}

/// Per-compartment interior solvers for the harmonic extension. Interior
/// blocks of the composite matrix decouple by compartment because the jump
/// mass only touches interface DOFs.
struct InteriorSolvers {
    /// Free-DOF indices of each compartment's interior, ascending.
    lists: Vec<Vec<usize>>,
    factors: Vec<Factorization>,
    /// Free index -> position within its compartment list (MAX elsewhere).
    pos: Vec<usize>,
    /// Free index -> owning compartment (only valid on interior DOFs).
    sub_of: Vec<usize>,
}

fn build_interior_solvers(
    topo: &MeshTopology,
    part: &DofPartition,
    sys: &CompositeSystem,
) -> Result<InteriorSolvers> {
    let n = sys.n_free();
    let mut lists = Vec::with_capacity(topo.subdomains.len());
    let mut factors = Vec::with_capacity(topo.subdomains.len());
    let mut pos = vec![usize::MAX; n];
    let mut sub_of = vec![usize::MAX; n];
    for s in &topo.subdomains {
        let mut list = Vec::new();
        for d in s.dof_start..s.dof_start + s.n_dofs {
            if part.class[d] == DofClass::Interior {
                let fi = sys.map.index[d];
                debug_assert_ne!(fi, usize::MAX);
                pos[fi] = list.len();
                sub_of[fi] = s.id;
                list.push(fi);
            }
        }
        let block = sys.matrix.principal_submatrix(&list);
        factors.push(Factorization::new(&block)?);
        lists.push(list);
    }
    Ok(InteriorSolvers { lists, factors, pos, sub_of })
}

/// Extends prescribed interface values harmonically into every compartment
/// they border, returning the full sparse column.
fn harmonic_column(
    support: &[(usize, f64)],
    solvers: &InteriorSolvers,
    sys: &CompositeSystem,
) -> SparseCol {
    let mut per_sub: alloc::collections::BTreeMap<usize, Vec<f64>> =
        alloc::collections::BTreeMap::new();
    for &(g, val) in support {
        let (cols, vals) = sys.matrix.row(g);
        for (&c, &v) in cols.iter().zip(vals) {
            if solvers.pos[c] != usize::MAX {
                let sub = solvers.sub_of[c];
                let rhs =
                    per_sub.entry(sub).or_insert_with(|| vec![0.0; solvers.lists[sub].len()]);
                rhs[solvers.pos[c]] -= v * val;
            }
        }
    }
    let mut entries: Vec<(usize, f64)> = support.to_vec();
    for (sub, rhs) in per_sub {
        let x = solvers.factors[sub].solve(&rhs);
        for (k, &fi) in solvers.lists[sub].iter().enumerate() {
            entries.push((fi, x[k]));
        }
    }
    entries.sort_unstable_by_key(|&(i, _)| i);
    SparseCol {
        idx: entries.iter().map(|&(i, _)| i).collect(),
        val: entries.iter().map(|&(_, v)| v).collect(),
    }
}

fn build_coarse_space(
    topo: &MeshTopology,
    part: &DofPartition,
    sys: &CompositeSystem,
    mode: CoarseMode,
) -> Result<CoarseSpace> {
    let solvers = build_interior_solvers(topo, part, sys)?;
    let fidx = |d: usize| {
        let fi = sys.map.index[d];
        debug_assert_ne!(fi, usize::MAX, "interface DOFs are never constrained");
        fi
    };
    let mut cols = Vec::new();
    for v in &topo.vertices {
        for &(_, dof) in &v.copies {
            cols.push(harmonic_column(&[(fidx(dof), 1.0)], &solvers, sys));
        }
    }
    if mode == CoarseMode::VertexAndEdge {
        for e in &topo.edges {
            let m = e.pairs.len();
            let mut support = Vec::with_capacity(2 * (m - 2));
            for &(di, dj) in &e.pairs[1..m - 1] {
                support.push((fidx(di), 1.0));
                support.push((fidx(dj), 1.0));
            }
            if !support.is_empty() {
                cols.push(harmonic_column(&support, &solvers, sys));
            }
        }
        // Without a Dirichlet constraint the columns sum to the constant
        // vector, which K annihilates; drop one so the Galerkin matrix
        // stays positive definite.
        if part.dirichlet.is_empty() {
            cols.pop();
        }
    }

    // Galerkin product: k0[c][d] = phi_c^T K phi_d, built from K*phi_c and
    // an inverse index of column supports.
    let n = sys.n_free();
    let n0 = cols.len();
    let mut inv: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for (c, col) in cols.iter().enumerate() {
        for (&i, &v) in col.idx.iter().zip(&col.val) {
            inv[i].push((c as u32, v));
        }
    }
    let mut y = vec![0.0; n];
    let mut yseen = vec![false; n];
    let mut ytouch: Vec<usize> = Vec::new();
    let mut row = vec![0.0; n0];
    let mut rseen = vec![false; n0];
    let mut rtouch: Vec<usize> = Vec::new();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for c in 0..n0 {
        for (&i, &v) in cols[c].idx.iter().zip(&cols[c].val) {
            let (rc, rv) = sys.matrix.row(i);
            for (&j, &kv) in rc.iter().zip(rv) {
                if !yseen[j] {
                    yseen[j] = true;
                    ytouch.push(j);
                }
                y[j] += kv * v;
            }
        }
        for &j in &ytouch {
            let yj = y[j];
            for &(d, pv) in &inv[j] {
                let d = d as usize;
                if d >= c {
                    if !rseen[d] {
                        rseen[d] = true;
                        rtouch.push(d);
                    }
                    row[d] += yj * pv;
                }
            }
        }
        for &d in &rtouch {
            let v = row[d];
            triplets.push((c, d, v));
            if d > c {
                triplets.push((d, c, v));
            }
            row[d] = 0.0;
            rseen[d] = false;
        }
        rtouch.clear();
        for &j in &ytouch {
            y[j] = 0.0;
            yseen[j] = false;
        }
        ytouch.clear();
    }
    let k0 = SparseSym::from_triplets(n0, triplets);
    let factor = match Factorization::new(&k0) {
        Ok(f) => f,
        Err(Error::NotPositiveDefinite { row }) => {
            return Err(Error::RankDeficientCoarse { column: row })
        }
        Err(e) => return Err(e),
    };
    Ok(CoarseSpace { cols, k0, factor })
}
