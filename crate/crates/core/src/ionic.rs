//! Interface current models: an excitable two-variable membrane on
//! cell-to-frame contacts and a passive ohmic law on cell-to-cell contacts.
//!
//! The excitable model is a cubic recovery system in the normalized
//! potential `phi = (v - v_rest) / v_amp`. Its rates are dimensionless; the
//! `time_scale` factor converts them to 1/ms, and `i_scale` converts the
//! reaction rate into a current density consistent with the capacitance
//! used in the jump mass (both are resolved via [`IonicParams::with_capacitance`]).

use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::InterfaceIndex;

#[derive(Debug, Clone)]
pub struct IonicParams {
    /// Cubic stiffness of the excitation nullcline.
    pub k: f64,
    /// Excitation threshold in normalized units.
    pub a: f64,
    pub eps0: f64,
    pub mu1: f64,
    pub mu2: f64,
    /// Resting potential (mV).
    pub v_rest: f64,
    /// Action potential amplitude (mV).
    pub v_amp: f64,
    /// Reaction rate unit in 1/ms.
    pub time_scale: f64,
    /// Gap junction conductance relative to the interface capacitance.
    pub kappa_g: f64,
    /// Current scale: capacitance times amplitude.
    pub i_scale: f64,
    /// Resolved gap conductance: `kappa_g` times capacitance.
    pub kappa_eff: f64,
}

impl Default for IonicParams {
    fn default() -> Self {
        IonicParams {
            k: 8.0,
            a: 0.15,
            eps0: 0.002,
            mu1: 0.2,
            mu2: 0.3,
            v_rest: -85.0,
            v_amp: 100.0,
            time_scale: 1.0,
            kappa_g: 1.0,
            // resolved for capacitance 1e-4
            i_scale: 0.01,
            kappa_eff: 1e-4,
        }
    }
}

impl IonicParams {
    /// Resolves the current scales against the capacitance used in the jump
    /// mass, keeping membrane and gap dynamics step-size robust.
    pub fn with_capacitance(mut self, c_m: f64) -> Self {
        self.i_scale = c_m * self.v_amp;
        self.kappa_eff = self.kappa_g * c_m;
        self
    }

    pub fn phi(&self, v: f64) -> f64 {
        (v - self.v_rest) / self.v_amp
    }

    /// Dimensionless excitation rate `-k phi (phi - a)(phi - 1) - phi w`.
    pub fn reaction_rate(&self, phi: f64, w: f64) -> f64 {
        -self.k * phi * (phi - self.a) * (phi - 1.0) - phi * w
    }

    /// Outward membrane current density at `(v, w)`; negative while the
    /// membrane depolarizes.
    pub fn ionic_current(&self, v: f64, w: f64) -> f64 {
        -self.i_scale * self.time_scale * self.reaction_rate(self.phi(v), w)
    }

    /// `dw/dt` of the recovery variable, in 1/ms.
    pub fn gating_rate(&self, v: f64, w: f64) -> f64 {
        let phi = self.phi(v);
        let denom = phi + self.mu2;
        let mut eps = self.eps0;
        if denom != 0.0 {
            eps += self.mu1 * w / denom;
        }
        self.time_scale * eps * (-w - self.k * phi * (phi - self.a - 1.0))
    }

    /// Outward current across a gap junction with jump `v`.
    pub fn gap_junction_current(&self, v: f64) -> f64 {
        self.kappa_eff * v
    }
}

/// Interface state sampled per slot: the jump `v = u_i - u_j` and, on
/// membrane slots, the recovery variable `w` (gap slots keep `w = 0`).
#[derive(Debug, Clone)]
pub struct MembraneState {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl MembraneState {
    /// Resting state: `v_rest` across membranes, zero across gaps, recovery
    /// fully deactivated.
    pub fn rest(index: &InterfaceIndex, params: &IonicParams) -> Self {
        let n = index.n_slots();
        let mut v = vec![0.0; n];
        for (s, slot) in index.slots.iter().enumerate() {
            if slot.membrane {
                v[s] = params.v_rest;
            }
        }
        MembraneState { v, w: vec![0.0; n] }
    }
}

/// Jumps `u_i - u_j` per slot from a full-DOF vector.
pub fn compute_jumps(index: &InterfaceIndex, u: &[f64]) -> Vec<f64> {
    index.slots.iter().map(|s| u[s.dof_i] - u[s.dof_j]).collect()
}

/// Advances the recovery variables one explicit step and returns the nodal
/// interface current for the upcoming implicit solve. The recovery update
/// runs first, so the current sees the fresh `w`; `stim` is subtracted on
/// membrane slots (a positive stimulus depolarizes).
pub fn membrane_step(
    state: &mut MembraneState,
    index: &InterfaceIndex,
    params: &IonicParams,
    tau: f64,
    stim: &[f64],
) -> Vec<f64> {
    let n = index.n_slots();
    assert_eq!(state.v.len(), n);
    assert_eq!(stim.len(), n);
    let mut f = vec![0.0; n];
    for (s, slot) in index.slots.iter().enumerate() {
        let v = state.v[s];
        if slot.membrane {
            let w = state.w[s] + tau * params.gating_rate(v, state.w[s]);
            state.w[s] = w;
            f[s] = params.ionic_current(v, w) - stim[s];
        } else {
            f[s] = params.gap_junction_current(v);
        }
    }
    f
}
