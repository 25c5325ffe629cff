//! Gate-level compilation of the walk step.
//!
//! An arc `(u, v)` is stored as `|q_u p_u, c p_v>` where `c` is the rank of
//! `v`'s set among the `M - 1` sets other than `u`'s. Circuits need `M - 1`
//! and `N` to be powers of two so that every register value in range is a
//! valid code; graphs of other sizes are only available through
//! [`crate::fullsim`].
//!
//! Comparators, adders and the marking oracle are kept as exact primitives.
//! [`CostModel`] converts them to estimated basic-gate counts.

mod build;
mod gate;
mod interp;
mod layout;
mod text;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixedpoint::RobustSchedule;
use crate::fullsim::EdgeState;
use crate::graph::GraphConfig;

pub use build::{build_coin, build_query, build_shift, build_step};
pub use gate::{CostModel, Gate, GateKind};
pub use interp::{apply_gate, execute, zero_state, MAX_QUBITS};
pub use layout::{decode, encode, read_register, write_register, QubitLayout, RegisterName};
pub use text::{emit, parse, CIRCUIT_HEADER};

/// An ordered gate list over a layout, with the graph it was compiled for.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    config: GraphConfig,
    layout: QubitLayout,
    alpha: Option<f64>,
    beta: Option<f64>,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(
        config: GraphConfig,
        layout: QubitLayout,
        alpha: Option<f64>,
        beta: Option<f64>,
        gates: Vec<Gate>,
    ) -> Self {
        Circuit {
            config,
            layout,
            alpha,
            beta,
            gates,
        }
    }

    pub fn config(&self) -> &GraphConfig {
        &self.config
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_counts(&self, model: &CostModel) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            *counts.counts.entry(g.kind()).or_default() += 1;
            *counts.estimates.entry(g.kind()).or_default() += model.cost(g);
        }
        counts
    }
}

/// Per-primitive tally with an estimated basic-gate cost.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateCounts {
    counts: BTreeMap<GateKind, usize>,
    estimates: BTreeMap<GateKind, f64>,
}

impl GateCounts {
    pub fn count(&self, kind: GateKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn estimate(&self, kind: GateKind) -> f64 {
        self.estimates.get(&kind).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn total_estimate(&self) -> f64 {
        self.estimates.values().sum()
    }

    /// One `KIND count estimate` line per primitive present, then a total.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (kind, n) in &self.counts {
            out.push_str(&format!(
                "{:<7} {:>6} {:>10}\n",
                kind.mnemonic(),
                n,
                self.estimate(*kind)
            ));
        }
        out.push_str(&format!(
            "{:<7} {:>6} {:>10}\n",
            "total",
            self.total(),
            self.total_estimate()
        ));
        out
    }
}

/// Places an edge-space state on the register basis.
pub fn embed(state: &EdgeState) -> Result<Vec<Complex64>> {
    let config = state.config();
    let layout = QubitLayout::for_config(config)?;
    let mut out = zero_state(&layout)?;
    out[0] = Complex64::new(0.0, 0.0);
    for (k, a) in state.amplitudes().iter().enumerate() {
        let (u, v) = crate::fullsim::arc_at(config, k)?;
        out[encode(config, u, v)?] = *a;
    }
    Ok(out)
}

/// Reads the arc amplitudes back and returns the norm left on indices that
/// encode no arc.
pub fn extract(config: &GraphConfig, statevector: &[Complex64]) -> Result<(EdgeState, f64)> {
    let dim = config.edge_space_dimension() as usize;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let mut stray = 0.0;
    for (i, a) in statevector.iter().enumerate() {
        match decode(config, i) {
            Some((u, v)) => amps[crate::fullsim::arc_index(config, u, v)?] = *a,
            None => stray += a.norm_sqr(),
        }
    }
    Ok((EdgeState::new(*config, amps)?, stray.sqrt()))
}

/// Largest amplitude on any basis state with a nonzero ancilla.
pub fn ancilla_leak(layout: &QubitLayout, statevector: &[Complex64]) -> f64 {
    let mask = (1 << layout.flag()) | (1 << layout.scratch());
    statevector
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask != 0)
        .map(|(_, a)| a.norm())
        .fold(0.0, f64::max)
}

/// Compares a compiled step with the edge-space step on every arc basis
/// state. Returns the largest amplitude deviation.
pub fn verify_step(config: &GraphConfig, alpha: f64, beta: f64) -> Result<f64> {
    let circuit = build_step(config, alpha, beta)?;
    let mut worst: f64 = 0.0;
    for u in config.vertices() {
        for v in config.vertices().filter(|v| v.set != u.set) {
            let start = EdgeState::basis(*config, u, v)?;
            let expected = embed(&start.walk_step(alpha, beta))?;
            let got = execute(&circuit, &embed(&start)?)?;
            let dev = got
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// Runs the robust walk from the uniform arc state through the interpreter
/// and returns the success probability after each step.
pub fn run_robust(config: &GraphConfig, schedule: &RobustSchedule) -> Result<Vec<f64>> {
    if schedule.betas().len() != schedule.alphas().len() + 1 {
        return Err(Error::MalformedSchedule {
            alphas: schedule.alphas().len(),
            betas: schedule.betas().len(),
        });
    }
    let mut state = embed(&EdgeState::uniform(*config)?)?;
    let success =
        |sv: &[Complex64]| -> Result<f64> { Ok(extract(config, sv)?.0.success_probability()) };
    let mut out = vec![success(&state)?];
    for (alpha, beta) in schedule.step_phases() {
        state = execute(&build_step(config, alpha, beta)?, &state)?;
        out.push(success(&state)?);
    }
    Ok(out)
}
