//! Finite element assembly for the composite system.
//!
//! Each compartment contributes a standard Q1 stiffness block weighted by
//! its conductivity; compartments couple only through 1D mass matrices on
//! the duplicated interface nodes, testing the jump `u_i - u_j` against
//! itself. One implicit step of the interface dynamics solves
//!
//! `(tau * A + M) u = M u_prev - tau * B f`
//!
//! where `A` is block-diagonal stiffness, `M` the capacitance-weighted jump
//! mass, `B` the same jump mass without the capacitance, and `f` the nodal
//! interface current (ionic on membranes, passive on gap junctions).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{LinearOp, SparseSym};
use crate::mesh::{DofClass, DofPartition, InterfaceIndex, MeshTopology};

/// Q1 stiffness on an `hx` by `hy` rectangle with conductivity `sigma`,
/// nodes counterclockwise from the lower-left corner.
pub fn element_stiffness_q1(hx: f64, hy: f64, sigma: f64) -> [[f64; 4]; 4] {
    const KX: [[f64; 4]; 4] = [
        [2.0, -2.0, -1.0, 1.0],
        [-2.0, 2.0, 1.0, -1.0],
        [-1.0, 1.0, 2.0, -2.0],
        [1.0, -1.0, -2.0, 2.0],
    ];
    const KY: [[f64; 4]; 4] = [
        [2.0, 1.0, -1.0, -2.0],
        [1.0, 2.0, -2.0, -1.0],
        [-1.0, -2.0, 2.0, 1.0],
        [-2.0, -1.0, 1.0, 2.0],
    ];
    let cx = sigma * hy / (6.0 * hx);
    let cy = sigma * hx / (6.0 * hy);
    let mut k = [[0.0; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            k[p][q] = cx * KX[p][q] + cy * KY[p][q];
        }
    }
    k
}

/// Consistent mass of one 1D segment of length `len` with weight `c`.
pub fn edge_mass_1d(len: f64, c: f64) -> [[f64; 2]; 2] {
    let s = c * len / 6.0;
    [[2.0 * s, s], [s, 2.0 * s]]
}

/// Block-diagonal stiffness over all compartments, each block scaled by its
/// conductivity.
pub fn assemble_stiffness(topo: &MeshTopology) -> SparseSym {
    let h = topo.config.h;
    let mut triplets = Vec::new();
    for s in &topo.subdomains {
        let ke = element_stiffness_q1(h, h, s.sigma);
        for e in &s.elements {
            for p in 0..4 {
                for q in 0..4 {
                    triplets.push((e.dofs[p], e.dofs[q], ke[p][q]));
                }
            }
        }
    }
    SparseSym::from_triplets(topo.n_dofs, triplets)
}

/// Jump mass over every interface edge: `u^T M u = c Sum_e Int_e (u_i - u_j)^2`.
/// Each geometric segment is integrated once, with the consistent 1D mass
/// tested against the jump, giving the +same-side / -cross-side pattern.
pub fn assemble_jump_mass(topo: &MeshTopology, c: f64) -> SparseSym {
    let h = topo.config.h;
    let m1 = edge_mass_1d(h, c);
    let mut triplets = Vec::new();
    for e in &topo.edges {
        for seg in e.pairs.windows(2) {
            let (i0, j0) = seg[0];
            let (i1, j1) = seg[1];
            let side_i = [i0, i1];
            let side_j = [j0, j1];
            for p in 0..2 {
                for q in 0..2 {
                    triplets.push((side_i[p], side_i[q], m1[p][q]));
                    triplets.push((side_j[p], side_j[q], m1[p][q]));
                    triplets.push((side_i[p], side_j[q], -m1[p][q]));
                    triplets.push((side_j[p], side_i[q], -m1[p][q]));
                }
            }
        }
    }
    SparseSym::from_triplets(topo.n_dofs, triplets)
}

/// Maps between the full DOF numbering and the free (non-Dirichlet) subset.
#[derive(Debug, Clone)]
pub struct FreeDofMap {
    pub free: Vec<usize>,
    /// Full index to free index; `usize::MAX` marks constrained DOFs.
    pub index: Vec<usize>,
}

impl FreeDofMap {
    pub fn new(part: &DofPartition) -> Self {
        let mut free = Vec::new();
        let mut index = vec![usize::MAX; part.class.len()];
        for (dof, &c) in part.class.iter().enumerate() {
            if c != DofClass::Dirichlet {
                index[dof] = free.len();
                free.push(dof);
            }
        }
        FreeDofMap { free, index }
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&d| full[d]).collect()
    }

    /// Scatters `reduced` into `full`, leaving constrained entries alone.
    pub fn expand_into(&self, reduced: &[f64], full: &mut [f64]) {
        for (k, &d) in self.free.iter().enumerate() {
            full[d] = reduced[k];
        }
    }
}

/// The assembled implicit-step system: global blocks plus the free-DOF
/// restriction of `tau * A + M` that the solver iterates on.
#[derive(Debug, Clone)]
pub struct CompositeSystem {
    pub tau: f64,
    pub c_m: f64,
    /// Global conductivity block-diagonal.
    pub stiffness: SparseSym,
    /// Global capacitance-weighted jump mass.
    pub jump_mass: SparseSym,
    pub map: FreeDofMap,
    /// `tau * A + M` on free DOFs.
    pub matrix: SparseSym,
}

impl CompositeSystem {
    /// Same mesh and blocks, recomposed for a different step size.
    pub fn with_tau(&self, tau: f64) -> CompositeSystem {
        let full = SparseSym::linear_combination(tau, &self.stiffness, 1.0, &self.jump_mass);
        CompositeSystem {
            tau,
            c_m: self.c_m,
            stiffness: self.stiffness.clone(),
            jump_mass: self.jump_mass.clone(),
            map: self.map.clone(),
            matrix: full.principal_submatrix(&self.map.free),
        }
    }

    pub fn n_free(&self) -> usize {
        self.map.n_free()
    }
}

/// Assembles blocks and composes the free-DOF system. A partition without
/// Dirichlet DOFs leaves the constant vector in the kernel, so the caller
/// must opt in with `allow_singular` and deflate during the solve.
pub fn assemble_system(
    topo: &MeshTopology,
    part: &DofPartition,
    tau: f64,
    c_m: f64,
    allow_singular: bool,
) -> Result<CompositeSystem> {
    if !(tau > 0.0) || !(c_m > 0.0) {
        return Err(Error::InvalidParameter(String::from(
            "step size and capacitance must be positive",
        )));
    }
    if part.dirichlet.is_empty() && !allow_singular {
        return Err(Error::SingularSystem(String::from(
            "no Dirichlet DOFs: constants are in the kernel; enable kernel deflation",
        )));
    }
    let stiffness = assemble_stiffness(topo);
    let jump_mass = assemble_jump_mass(topo, c_m);
    let map = FreeDofMap::new(part);
    let full = SparseSym::linear_combination(tau, &stiffness, 1.0, &jump_mass);
    let matrix = full.principal_submatrix(&map.free);
    Ok(CompositeSystem { tau, c_m, stiffness, jump_mass, map, matrix })
}

/// Right-hand side of one implicit step, on the full DOF set:
/// `M u_prev - tau * B f` with `f` given per interface slot and `B` the
/// unweighted 1D edge mass applied edge by edge.
pub fn assemble_rhs(
    topo: &MeshTopology,
    index: &InterfaceIndex,
    jump_mass: &SparseSym,
    tau: f64,
    u_prev: &[f64],
    f_slots: &[f64],
) -> Vec<f64> {
    assert_eq!(u_prev.len(), topo.n_dofs);
    assert_eq!(f_slots.len(), index.n_slots());
    let h = topo.config.h;
    let mut rhs = jump_mass.apply(u_prev);
    let mut w: Vec<f64> = Vec::new();
    for &(s, t) in &index.edge_slots {
        w.clear();
        w.resize(t - s, 0.0);
        for k in 0..t - s - 1 {
            let (f0, f1) = (f_slots[s + k], f_slots[s + k + 1]);
            w[k] += h / 6.0 * (2.0 * f0 + f1);
            w[k + 1] += h / 6.0 * (f0 + 2.0 * f1);
        }
        for (k, slot) in index.slots[s..t].iter().enumerate() {
            rhs[slot.dof_i] -= tau * w[k];
            rhs[slot.dof_j] += tau * w[k];
        }
    }
    rhs
}
