use std::fmt;

/// A primitive with exact unitary semantics. Registers are qubit lists,
/// least significant bit first.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Hadamard.
    H(usize),
    /// Pauli X.
    X(usize),
    /// Exchanges two qubits.
    Swap(usize, usize),
    /// `flag ^= (a <= b)` comparing both registers as unsigned integers.
    Cle {
        a: Vec<usize>,
        b: Vec<usize>,
        flag: usize,
    },
    /// `reg += 1 (mod 2^width)` when qubit `ctrl` equals `polarity`.
    Inc {
        reg: Vec<usize>,
        ctrl: usize,
        polarity: bool,
    },
    /// `reg -= 1 (mod 2^width)` when qubit `ctrl` equals `polarity`.
    Dec {
        reg: Vec<usize>,
        ctrl: usize,
        polarity: bool,
    },
    /// Multiplies by `e^{i theta}` when every qubit of `reg` is 0.
    Phase0 { reg: Vec<usize>, theta: f64 },
    /// `diag(1, e^{i beta})` on one qubit.
    Rz { qubit: usize, beta: f64 },
    /// Multiplies every amplitude by `e^{i theta}`.
    GPhase(f64),
    /// `flag ^= is_marked(pos_sub, pos_idx)`; positions outside the graph
    /// count as unmarked.
    Oracle { flag: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Swap,
    Cle,
    Inc,
    Dec,
    Phase0,
    Rz,
    GPhase,
    Oracle,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::H,
        GateKind::X,
        GateKind::Swap,
        GateKind::Cle,
        GateKind::Inc,
        GateKind::Dec,
        GateKind::Phase0,
        GateKind::Rz,
        GateKind::GPhase,
        GateKind::Oracle,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Swap => "SWAP",
            GateKind::Cle => "CLE",
            GateKind::Inc => "INC",
            GateKind::Dec => "DEC",
            GateKind::Phase0 => "PHASE0",
            GateKind::Rz => "RZ",
            GateKind::GPhase => "GPHASE",
            GateKind::Oracle => "ORACLE",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.mnemonic() == s)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Swap(..) => GateKind::Swap,
            Gate::Cle { .. } => GateKind::Cle,
            Gate::Inc { .. } => GateKind::Inc,
            Gate::Dec { .. } => GateKind::Dec,
            Gate::Phase0 { .. } => GateKind::Phase0,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::GPhase(_) => GateKind::GPhase,
            Gate::Oracle { .. } => GateKind::Oracle,
        }
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Rz { qubit: q, .. } | Gate::Oracle { flag: q } => {
                vec![*q]
            }
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Cle { a, b, flag } => a.iter().chain(b).copied().chain([*flag]).collect(),
            Gate::Inc { reg, ctrl, .. } | Gate::Dec { reg, ctrl, .. } => {
                reg.iter().copied().chain([*ctrl]).collect()
            }
            Gate::Phase0 { reg, .. } => reg.clone(),
            Gate::GPhase(_) => Vec::new(),
        }
    }
}

/// Conversion rates from primitives to basic gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    /// Basic gates per bit of a comparator.
    pub comparator: f64,
    /// Basic gates per bit of a controlled adder.
    pub adder: f64,
    /// Basic gates per squared width of a zero-controlled phase.
    pub phase0: f64,
    /// Basic gates charged for one oracle call.
    pub oracle: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            comparator: 4.0,
            adder: 4.0,
            phase0: 1.0,
            oracle: 1.0,
        }
    }
}

impl CostModel {
    /// Estimated basic-gate cost of one gate.
    pub fn cost(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::H(_) | Gate::X(_) | Gate::Rz { .. } => 1.0,
            Gate::Swap(..) => 3.0,
            Gate::Cle { a, b, .. } => self.comparator * a.len().max(b.len()) as f64,
            Gate::Inc { reg, .. } | Gate::Dec { reg, .. } => self.adder * reg.len() as f64,
            Gate::Phase0 { reg, .. } => self.phase0 * (reg.len() * reg.len()) as f64,
            Gate::GPhase(_) => 0.0,
            Gate::Oracle { .. } => self.oracle,
        }
    }
}
