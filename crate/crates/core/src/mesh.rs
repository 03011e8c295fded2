//! Compartment grids and their interface topology.
//!
//! The domain is a rectangular extracellular frame enclosing an `nx` by `ny`
//! block of elongated rectangular cells. Every compartment is meshed with
//! square Q1 elements on a shared integer grid, and every compartment owns
//! its nodes outright: where two compartments meet, both carry a node at the
//! same grid point, and the pairing of those duplicated nodes is recorded as
//! interface edges. No degrees of freedom are shared across compartments.
//!
//! Grid layout (in grid units, one unit = one element edge):
//! - outer rectangle: `(W + 2F) x (Ht + 2F)` elements, origin at `(0, 0)`,
//! - cell block: `[F, F+W] x [F, F+Ht]` with `W = nx*elems_long`,
//!   `Ht = ny*elems_short`, `F = frame_elems`,
//! - cell `(cx, cy)` occupies `[F + cx*elems_long, ..] x [F + cy*elems_short, ..]`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default conductivity for every compartment.
pub const DEFAULT_SIGMA: f64 = 3e-3;

/// Mesh dimensions in elements. All compartments share the square element
/// size `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryConfig {
    pub n_cells_x: usize,
    pub n_cells_y: usize,
    /// Elements along a cell's long (x) direction.
    pub elems_long: usize,
    /// Elements along a cell's short (y) direction.
    pub elems_short: usize,
    /// Frame thickness in elements.
    pub frame_elems: usize,
    /// Element edge length.
    pub h: f64,
}

impl GeometryConfig {
    /// Standard proportions: cells are six times longer than tall, the frame
    /// is one cell height thick, and `h` shrinks with refinement so the
    /// physical geometry stays fixed (cell size 24 x 4 length units).
    pub fn cells(n_cells_x: usize, n_cells_y: usize, elems_short: usize) -> Self {
        GeometryConfig {
            n_cells_x,
            n_cells_y,
            elems_long: 6 * elems_short,
            elems_short,
            frame_elems: elems_short,
            h: 4.0 / elems_short as f64,
        }
    }

    /// Cell block width in grid units.
    pub fn block_w(&self) -> usize {
        self.n_cells_x * self.elems_long
    }

    /// Cell block height in grid units.
    pub fn block_h(&self) -> usize {
        self.n_cells_y * self.elems_short
    }

    /// Outer rectangle size in grid units.
    pub fn outer(&self) -> (usize, usize) {
        (self.block_w() + 2 * self.frame_elems, self.block_h() + 2 * self.frame_elems)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells_x * self.n_cells_y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdomainKind {
    Extracellular,
    Cell { cx: usize, cy: usize },
}

/// One compartment: a contiguous block of global DOFs plus its elements.
#[derive(Debug, Clone)]
pub struct Subdomain {
    pub id: usize,
    pub kind: SubdomainKind,
    pub sigma: f64,
    pub dof_start: usize,
    pub n_dofs: usize,
    /// Grid coordinates of each local node, indexed by `dof - dof_start`.
    pub node_grid: Vec<(usize, usize)>,
    pub elements: Vec<Element>,
}

/// One Q1 element. Nodes are ordered counterclockwise from the lower-left
/// corner: SW, SE, NE, NW.
#[derive(Debug, Clone, Copy)]
pub struct Element {
    pub sub: usize,
    /// Lower-left corner in grid units.
    pub grid: (usize, usize),
    pub dofs: [usize; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Cell-to-frame contact (reactive membrane).
    Membrane,
    /// Cell-to-cell contact (passive gap junction).
    Gap,
}

/// A maximal straight run of duplicated node pairs where two compartments
/// meet. For membranes `sub_i` is the cell and `sub_j` the frame; for gaps
/// `sub_i` is the lower cell id. Jumps are oriented `u_i - u_j`.
#[derive(Debug, Clone)]
pub struct InterfaceEdge {
    pub kind: EdgeKind,
    pub sub_i: usize,
    pub sub_j: usize,
    /// `(dof in sub_i, dof in sub_j)` per node, ascending along the edge.
    pub pairs: Vec<(usize, usize)>,
    /// Grid coordinates per pair.
    pub grid: Vec<(usize, usize)>,
}

/// A cell-block lattice corner together with every compartment that carries
/// a DOF there. These are the endpoints of interface edges and the anchors
/// of the coarse space.
#[derive(Debug, Clone)]
pub struct InterfaceVertex {
    pub grid: (usize, usize),
    /// `(subdomain, dof)` copies at this corner, ascending by subdomain id.
    pub copies: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct MeshTopology {
    pub config: GeometryConfig,
    pub subdomains: Vec<Subdomain>,
    pub edges: Vec<InterfaceEdge>,
    pub vertices: Vec<InterfaceVertex>,
    pub n_dofs: usize,
    frame_nodes: BTreeMap<(usize, usize), usize>,
}

impl MeshTopology {
    /// Global DOF of the frame node at grid point `g`, if the frame has one.
    pub fn frame_dof(&self, g: (usize, usize)) -> Option<usize> {
        self.frame_nodes.get(&g).copied()
    }

    /// Global DOF of cell `sub`'s node at (global) grid point `g`, if `g`
    /// lies inside that cell's rectangle.
    pub fn cell_dof(&self, sub: usize, g: (usize, usize)) -> Option<usize> {
        let s = &self.subdomains[sub];
        let (ox, oy) = match s.kind {
            SubdomainKind::Cell { cx, cy } => (
                self.config.frame_elems + cx * self.config.elems_long,
                self.config.frame_elems + cy * self.config.elems_short,
            ),
            SubdomainKind::Extracellular => return None,
        };
        if g.0 < ox || g.1 < oy {
            return None;
        }
        let (lx, ly) = (g.0 - ox, g.1 - oy);
        if lx > self.config.elems_long || ly > self.config.elems_short {
            return None;
        }
        Some(s.dof_start + ly * (self.config.elems_long + 1) + lx)
    }

    pub fn subdomain_dof(&self, sub: usize, g: (usize, usize)) -> Option<usize> {
        if sub == 0 {
            self.frame_dof(g)
        } else {
            self.cell_dof(sub, g)
        }
    }

    /// Which subdomain owns a global DOF.
    pub fn dof_subdomain(&self, dof: usize) -> usize {
        debug_assert!(dof < self.n_dofs);
        match self.subdomains.binary_search_by(|s| {
            if dof < s.dof_start {
                core::cmp::Ordering::Greater
            } else if dof >= s.dof_start + s.n_dofs {
                core::cmp::Ordering::Less
            } else {
                core::cmp::Ordering::Equal
            }
        }) {
            Ok(i) => i,
            Err(_) => unreachable!("dof ranges tile 0..n_dofs"),
        }
    }

    /// Grid coordinates of a global DOF.
    pub fn dof_grid(&self, dof: usize) -> (usize, usize) {
        let s = &self.subdomains[self.dof_subdomain(dof)];
        s.node_grid[dof - s.dof_start]
    }

    pub fn set_extracellular_sigma(&mut self, sigma: f64) {
        self.subdomains[0].sigma = sigma;
    }

    /// Per-cell conductivities in cell id order (row-major from the
    /// bottom-left cell).
    pub fn set_cell_sigmas(&mut self, sigmas: &[f64]) -> Result<()> {
        let n = self.config.n_cells();
        if sigmas.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sigmas.len() });
        }
        for (s, &v) in self.subdomains[1..].iter_mut().zip(sigmas) {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(String::from(
                    "conductivity must be positive",
                )));
            }
            s.sigma = v;
        }
        Ok(())
    }

    /// Internal-consistency sweep: duplicated pairs sit on identical grid
    /// points, edges run between distinct compartments in ascending order,
    /// and edge/vertex counts match the closed-form values for the block
    /// layout.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidGeometry(String::from(msg)));
        let (nx, ny) = (self.config.n_cells_x, self.config.n_cells_y);
        let gaps = ny * (nx - 1) + nx * (ny - 1);
        let membranes = 2 * (nx + ny);
        if self.edges.iter().filter(|e| e.kind == EdgeKind::Gap).count() != gaps {
            return bad("gap edge count");
        }
        if self.edges.iter().filter(|e| e.kind == EdgeKind::Membrane).count() != membranes {
            return bad("membrane edge count");
        }
        if self.vertices.len() != (nx + 1) * (ny + 1) {
            return bad("vertex count");
        }
        for e in &self.edges {
            if e.sub_i == e.sub_j || e.pairs.len() != e.grid.len() || e.pairs.len() < 2 {
                return bad("malformed edge");
            }
            for (k, (&(di, dj), &g)) in e.pairs.iter().zip(&e.grid).enumerate() {
                let si = &self.subdomains[e.sub_i];
                let sj = &self.subdomains[e.sub_j];
                if si.node_grid[di - si.dof_start] != g || sj.node_grid[dj - sj.dof_start] != g {
                    return bad("pair grid mismatch");
                }
                if k > 0 {
                    let p = e.grid[k - 1];
                    let step = (g.0 as i64 - p.0 as i64, g.1 as i64 - p.1 as i64);
                    if step != (1, 0) && step != (0, 1) {
                        return bad("pairs not ascending along edge");
                    }
                }
            }
        }
        for v in &self.vertices {
            if v.copies.len() < 2 || v.copies.windows(2).any(|w| w[0].0 >= w[1].0) {
                return bad("vertex copies not ascending");
            }
            for &(sub, dof) in &v.copies {
                if self.subdomain_dof(sub, v.grid) != Some(dof) {
                    return bad("vertex copy lookup mismatch");
                }
            }
        }
        Ok(())
    }
}

/// Builds the full compartment mesh for `config`.
pub fn build_geometry(config: &GeometryConfig) -> Result<MeshTopology> {
    let c = config;
    if c.n_cells_x == 0
        || c.n_cells_y == 0
        || c.elems_long == 0
        || c.elems_short == 0
        || c.frame_elems == 0
    {
        return Err(Error::InvalidGeometry(String::from("all element counts must be positive")));
    }
    if !(c.h > 0.0) {
        return Err(Error::InvalidGeometry(String::from("element size must be positive")));
    }
    let (nx, ny) = (c.n_cells_x, c.n_cells_y);
    let (el, es, f) = (c.elems_long, c.elems_short, c.frame_elems);
    let (w, ht) = (c.block_w(), c.block_h());
    let (gw, gh) = c.outer();

    // Frame: outer grid minus the strict interior of the cell block.
    let mut frame_nodes = BTreeMap::new();
    let mut node_grid = Vec::new();
    for gy in 0..=gh {
        for gx in 0..=gw {
            let inside = gx > f && gx < f + w && gy > f && gy < f + ht;
            if !inside {
                frame_nodes.insert((gx, gy), node_grid.len());
                node_grid.push((gx, gy));
            }
        }
    }
    let mut elements = Vec::new();
    for ey in 0..gh {
        for ex in 0..gw {
            let in_block = ex >= f && ex < f + w && ey >= f && ey < f + ht;
            if in_block {
                continue;
            }
            let at = |x: usize, y: usize| frame_nodes[&(x, y)];
            elements.push(Element {
                sub: 0,
                grid: (ex, ey),
                dofs: [at(ex, ey), at(ex + 1, ey), at(ex + 1, ey + 1), at(ex, ey + 1)],
            });
        }
    }
    let mut subdomains = vec![Subdomain {
        id: 0,
        kind: SubdomainKind::Extracellular,
        sigma: DEFAULT_SIGMA,
        dof_start: 0,
        n_dofs: node_grid.len(),
        node_grid,
        elements,
    }];

    // Cells, row-major from the bottom-left.
    let mut dof_start = subdomains[0].n_dofs;
    for cy in 0..ny {
        for cx in 0..nx {
            let id = 1 + cy * nx + cx;
            let (ox, oy) = (f + cx * el, f + cy * es);
            let row = el + 1;
            let mut node_grid = Vec::with_capacity(row * (es + 1));
            for ly in 0..=es {
                for lx in 0..=el {
                    node_grid.push((ox + lx, oy + ly));
                }
            }
            let mut elements = Vec::with_capacity(el * es);
            for ly in 0..es {
                for lx in 0..el {
                    let sw = dof_start + ly * row + lx;
                    elements.push(Element {
                        sub: id,
                        grid: (ox + lx, oy + ly),
                        dofs: [sw, sw + 1, sw + row + 1, sw + row],
                    });
                }
            }
            subdomains.push(Subdomain {
                id,
                kind: SubdomainKind::Cell { cx, cy },
                sigma: DEFAULT_SIGMA,
                dof_start,
                n_dofs: row * (es + 1),
                node_grid,
                elements,
            });
            dof_start += row * (es + 1);
        }
    }
    let n_dofs = dof_start;
    let mut topo = MeshTopology {
        config: config.clone(),
        subdomains,
        edges: Vec::new(),
        vertices: Vec::new(),
        n_dofs,
        frame_nodes,
    };

    // Interface edges: each cell visits its sides in S, E, N, W order and
    // emits the edge when it is the lower-id endpoint (always, for
    // membranes; gaps are emitted from the south/west cell only).
    let cell_id = |cx: usize, cy: usize| 1 + cy * nx + cx;
    for cy in 0..ny {
        for cx in 0..nx {
            let id = cell_id(cx, cy);
            let (ox, oy) = (f + cx * el, f + cy * es);
            let hrun = |y: usize| -> Vec<(usize, usize)> { (0..=el).map(|i| (ox + i, y)).collect() };
            let vrun = |x: usize| -> Vec<(usize, usize)> { (0..=es).map(|i| (x, oy + i)).collect() };
            let mut emit = |grid: Vec<(usize, usize)>, other: Option<usize>| {
                let (kind, sub_j) = match other {
                    None => (EdgeKind::Membrane, 0),
                    Some(n) => (EdgeKind::Gap, n),
                };
                let pairs = grid
                    .iter()
                    .map(|&g| {
                        let di = topo.cell_dof(id, g).expect("side node inside own cell");
                        let dj = topo
                            .subdomain_dof(sub_j, g)
                            .expect("matching node in adjacent compartment");
                        (di, dj)
                    })
                    .collect();
                topo.edges.push(InterfaceEdge { kind, sub_i: id, sub_j, pairs, grid });
            };
            if cy == 0 {
                emit(hrun(oy), None);
            }
            if cx + 1 < nx {
                emit(vrun(ox + el), Some(cell_id(cx + 1, cy)));
            } else {
                emit(vrun(ox + el), None);
            }
            if cy + 1 < ny {
                emit(hrun(oy + es), Some(cell_id(cx, cy + 1)));
            } else {
                emit(hrun(oy + es), None);
            }
            if cx == 0 {
                emit(vrun(ox), None);
            }
        }
    }

    // Cell-block lattice corners and every DOF copy living there.
    for vy in 0..=ny {
        for vx in 0..=nx {
            let g = (f + vx * el, f + vy * es);
            let mut copies = Vec::new();
            if vx == 0 || vx == nx || vy == 0 || vy == ny {
                copies.push((0, topo.frame_dof(g).expect("frame covers block boundary")));
            }
            for cy in vy.saturating_sub(1)..=vy.min(ny - 1) {
                for cx in vx.saturating_sub(1)..=vx.min(nx - 1) {
                    let id = cell_id(cx, cy);
                    copies.push((id, topo.cell_dof(id, g).expect("corner inside cell")));
                }
            }
            topo.vertices.push(InterfaceVertex { grid: g, copies });
        }
    }
    Ok(topo)
}

/// Which Dirichlet set to impose on the outer boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirichletSpec {
    /// Pure Neumann problem; the operator kernel (constants) must be handled
    /// by the solver.
    None,
    /// Grounds the frame along the outer edge at `x = 0`.
    LeftOuterEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofClass {
    Interior,
    Interface,
    Dirichlet,
}

/// Disjoint split of all DOFs into interior, interface (any duplicated node
/// copy), and Dirichlet sets.
#[derive(Debug, Clone)]
pub struct DofPartition {
    pub class: Vec<DofClass>,
    pub interior: Vec<usize>,
    pub interface: Vec<usize>,
    pub dirichlet: Vec<usize>,
}

pub fn classify_dofs(topo: &MeshTopology, spec: DirichletSpec) -> DofPartition {
    let mut class = vec![DofClass::Interior; topo.n_dofs];
    for e in &topo.edges {
        for &(di, dj) in &e.pairs {
            class[di] = DofClass::Interface;
            class[dj] = DofClass::Interface;
        }
    }
    if spec == DirichletSpec::LeftOuterEdge {
        let gh = topo.config.outer().1;
        for gy in 0..=gh {
            let dof = topo.frame_dof((0, gy)).expect("outer boundary is frame");
            debug_assert!(class[dof] == DofClass::Interior, "outer edge never duplicated");
            class[dof] = DofClass::Dirichlet;
        }
    }
    let mut part = DofPartition {
        class,
        interior: Vec::new(),
        interface: Vec::new(),
        dirichlet: Vec::new(),
    };
    for (dof, &c) in part.class.iter().enumerate() {
        match c {
            DofClass::Interior => part.interior.push(dof),
            DofClass::Interface => part.interface.push(dof),
            DofClass::Dirichlet => part.dirichlet.push(dof),
        }
    }
    part
}

/// One duplicated node pair, flattened out of the edge list. The membrane
/// state vector and the jump-term assembly are both indexed by slot.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceSlot {
    pub edge: usize,
    pub pos: usize,
    pub dof_i: usize,
    pub dof_j: usize,
    pub membrane: bool,
}

#[derive(Debug, Clone)]
pub struct InterfaceIndex {
    pub slots: Vec<InterfaceSlot>,
    /// Slot range `[start, end)` of each edge.
    pub edge_slots: Vec<(usize, usize)>,
}

impl InterfaceIndex {
    pub fn build(topo: &MeshTopology) -> Self {
        let mut slots = Vec::new();
        let mut edge_slots = Vec::with_capacity(topo.edges.len());
        for (ei, e) in topo.edges.iter().enumerate() {
            let start = slots.len();
            let membrane = e.kind == EdgeKind::Membrane;
            for (pos, &(dof_i, dof_j)) in e.pairs.iter().enumerate() {
                slots.push(InterfaceSlot { edge: ei, pos, dof_i, dof_j, membrane });
            }
            edge_slots.push((start, slots.len()));
        }
        InterfaceIndex { slots, edge_slots }
    }

    pub fn n_slots(&self) -> usize {
        self.slots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid24x4(nx: usize, ny: usize) -> MeshTopology {
        build_geometry(&GeometryConfig::cells(nx, ny, 4)).unwrap()
    }

    #[test]
    fn frame_node_count_matches_hand_count() {
        // 2x2 cells of 24x4 elements, frame 4 thick: outer grid 56x16.
        // Nodes 57*17 = 969 minus strict block interior 47*7 = 329.
        let topo = grid24x4(2, 2);
        assert_eq!(topo.subdomains[0].n_dofs, 640);
        assert_eq!(topo.n_dofs, 640 + 4 * 25 * 5);
        assert_eq!(topo.subdomains.len(), 5);
        topo.validate().unwrap();
    }

    #[test]
    fn single_cell_all_nodes_duplicated() {
        // One 6x1-element cell: all 14 cell nodes sit on the membrane, so
        // the interface has 28 DOFs (both copies) and no interior cell DOFs.
        let topo = build_geometry(&GeometryConfig::cells(1, 1, 1)).unwrap();
        topo.validate().unwrap();
        let part = classify_dofs(&topo, DirichletSpec::None);
        assert_eq!(part.interface.len(), 28);
        assert_eq!(part.dirichlet.len(), 0);
        let cell = &topo.subdomains[1];
        assert_eq!(cell.n_dofs, 14);
        assert!(part.interface.iter().filter(|&&d| d >= cell.dof_start).count() == 14);
    }

    #[test]
    fn edge_counts_follow_block_formulas() {
        for (nx, ny) in [(1, 1), (3, 1), (1, 3), (2, 2), (3, 2)] {
            let topo = grid24x4(nx, ny);
            topo.validate().unwrap();
            let gaps = topo.edges.iter().filter(|e| e.kind == EdgeKind::Gap).count();
            let mem = topo.edges.iter().filter(|e| e.kind == EdgeKind::Membrane).count();
            assert_eq!(gaps, ny * (nx - 1) + nx * (ny - 1), "{nx}x{ny}");
            assert_eq!(mem, 2 * (nx + ny), "{nx}x{ny}");
            assert_eq!(topo.vertices.len(), (nx + 1) * (ny + 1));
        }
    }

    #[test]
    fn vertex_copy_histogram_two_by_two() {
        // 3x3 lattice: 4 block corners see (frame, cell), 4 side midpoints
        // see (frame, cell, cell), the center sees 4 cells.
        let topo = grid24x4(2, 2);
        let mut hist = [0usize; 5];
        for v in &topo.vertices {
            hist[v.copies.len()] += 1;
        }
        assert_eq!(hist, [0, 0, 4, 4, 1]);
        let total: usize = topo.vertices.iter().map(|v| v.copies.len()).sum();
        assert_eq!(total, 24);
    }

    #[test]
    fn membrane_pairs_cell_first_and_gap_pairs_lower_first() {
        let topo = grid24x4(2, 2);
        for e in &topo.edges {
            match e.kind {
                EdgeKind::Membrane => {
                    assert!(e.sub_i >= 1);
                    assert_eq!(e.sub_j, 0);
                }
                EdgeKind::Gap => assert!(e.sub_i < e.sub_j && e.sub_i >= 1),
            }
        }
    }

    #[test]
    fn dirichlet_left_edge_sits_on_outer_boundary() {
        let topo = grid24x4(2, 1);
        let part = classify_dofs(&topo, DirichletSpec::LeftOuterEdge);
        let gh = topo.config.outer().1;
        assert_eq!(part.dirichlet.len(), gh + 1);
        for &d in &part.dirichlet {
            assert_eq!(topo.dof_grid(d).0, 0);
            assert_eq!(topo.dof_subdomain(d), 0);
        }
        assert_eq!(
            part.interior.len() + part.interface.len() + part.dirichlet.len(),
            topo.n_dofs
        );
    }

    #[test]
    fn interface_index_flattens_edges_in_order() {
        let topo = grid24x4(2, 1);
        let index = InterfaceIndex::build(&topo);
        let expect: usize = topo.edges.iter().map(|e| e.pairs.len()).sum();
        assert_eq!(index.n_slots(), expect);
        for (ei, &(s, t)) in index.edge_slots.iter().enumerate() {
            assert_eq!(t - s, topo.edges[ei].pairs.len());
            for (k, slot) in index.slots[s..t].iter().enumerate() {
                assert_eq!(slot.edge, ei);
                assert_eq!(slot.pos, k);
                assert_eq!(slot.membrane, topo.edges[ei].kind == EdgeKind::Membrane);
            }
        }
    }

    #[test]
    fn dof_lookups_round_trip() {
        let topo = grid24x4(2, 2);
        for dof in (0..topo.n_dofs).step_by(7) {
            let sub = topo.dof_subdomain(dof);
            let g = topo.dof_grid(dof);
            assert_eq!(topo.subdomain_dof(sub, g), Some(dof));
        }
    }

    #[test]
    fn zero_sized_config_rejected() {
        let mut c = GeometryConfig::cells(1, 1, 1);
        c.elems_short = 0;
        assert!(matches!(build_geometry(&c), Err(Error::InvalidGeometry(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_small_grids_validate(
            nx in 1usize..4,
            ny in 1usize..4,
            es in 1usize..3,
            f in 1usize..3,
        ) {
            let mut c = GeometryConfig::cells(nx, ny, es);
            c.frame_elems = f;
            let topo = build_geometry(&c).unwrap();
            topo.validate().unwrap();
            let part = classify_dofs(&topo, DirichletSpec::LeftOuterEdge);
            // every edge endpoint classed as interface, sets disjoint
            prop_assert_eq!(
                part.interior.len() + part.interface.len() + part.dirichlet.len(),
                topo.n_dofs
            );
            let index = InterfaceIndex::build(&topo);
            for s in &index.slots {
                prop_assert_eq!(part.class[s.dof_i], DofClass::Interface);
                prop_assert_eq!(part.class[s.dof_j], DofClass::Interface);
            }
            // element count: every grid square is covered exactly once
            let (gw, gh) = c.outer();
            let total: usize = topo.subdomains.iter().map(|s| s.elements.len()).sum();
            prop_assert_eq!(total, gw * gh);
        }
    }
}
