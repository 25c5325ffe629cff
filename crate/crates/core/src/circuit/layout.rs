use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{GraphConfig, VertexId};

/// Named qubit registers. Qubit `q` is bit `q` of a basis index; within a
/// register the first qubit is the least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegisterName {
    PosSub,
    PosIdx,
    CoinSub,
    CoinIdx,
    Flag,
    Scratch,
}

impl RegisterName {
    pub const ALL: [RegisterName; 6] = [
        RegisterName::PosSub,
        RegisterName::PosIdx,
        RegisterName::CoinSub,
        RegisterName::CoinIdx,
        RegisterName::Flag,
        RegisterName::Scratch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegisterName::PosSub => "pos_sub",
            RegisterName::PosIdx => "pos_idx",
            RegisterName::CoinSub => "coin_sub",
            RegisterName::CoinIdx => "coin_idx",
            RegisterName::Flag => "flag",
            RegisterName::Scratch => "scratch",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == name)
    }
}

impl fmt::Display for RegisterName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Register widths for a graph with `M - 1 = 2^l_m` and `N = 2^l_n`.
///
/// Order from qubit 0: `pos_sub` (`l_m + 1`), `pos_idx` (`l_n`),
/// `coin_sub` (`l_m`), `coin_idx` (`l_n`), `flag`, `scratch`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitLayout {
    l_m: usize,
    l_n: usize,
}

fn ceil_log2(x: usize) -> usize {
    (usize::BITS - (x.max(1) - 1).leading_zeros()) as usize
}

impl QubitLayout {
    pub fn new(l_m: usize, l_n: usize) -> Self {
        QubitLayout { l_m, l_n }
    }

    /// Layout for `config`; requires `M - 1` and `N` to be powers of two.
    pub fn for_config(config: &GraphConfig) -> Result<Self> {
        let (m, n) = (config.sets(), config.set_size());
        if !(m - 1).is_power_of_two() || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo {
                sets: m,
                set_size: n,
            });
        }
        Ok(QubitLayout::new(ceil_log2(m - 1), ceil_log2(n)))
    }

    pub fn l_m(&self) -> usize {
        self.l_m
    }

    pub fn l_n(&self) -> usize {
        self.l_n
    }

    pub fn total_qubits(&self) -> usize {
        2 * (self.l_m + self.l_n) + 3
    }

    pub fn width(&self, reg: RegisterName) -> usize {
        match reg {
            RegisterName::PosSub => self.l_m + 1,
            RegisterName::PosIdx | RegisterName::CoinIdx => self.l_n,
            RegisterName::CoinSub => self.l_m,
            RegisterName::Flag | RegisterName::Scratch => 1,
        }
    }

    pub fn offset(&self, reg: RegisterName) -> usize {
        RegisterName::ALL
            .iter()
            .take_while(|r| **r != reg)
            .map(|r| self.width(*r))
            .sum()
    }

    /// Qubits of `reg`, least significant first.
    pub fn register(&self, reg: RegisterName) -> Vec<usize> {
        let start = self.offset(reg);
        (start..start + self.width(reg)).collect()
    }

    pub fn flag(&self) -> usize {
        self.offset(RegisterName::Flag)
    }

    pub fn scratch(&self) -> usize {
        self.offset(RegisterName::Scratch)
    }

    /// Register and bit position of a qubit.
    pub fn locate(&self, qubit: usize) -> Option<(RegisterName, usize)> {
        RegisterName::ALL.into_iter().find_map(|r| {
            let start = self.offset(r);
            (qubit >= start && qubit < start + self.width(r)).then(|| (r, qubit - start))
        })
    }

    pub fn qubit(&self, reg: RegisterName, bit: usize) -> Option<usize> {
        (bit < self.width(reg)).then(|| self.offset(reg) + bit)
    }
}

/// Reads the unsigned value held by `reg` in basis index `index`.
pub fn read_register(reg: &[usize], index: usize) -> usize {
    reg.iter()
        .enumerate()
        .fold(0, |acc, (bit, &q)| acc | (((index >> q) & 1) << bit))
}

/// Overwrites `reg` in `index` with the low bits of `value`.
pub fn write_register(reg: &[usize], index: usize, value: usize) -> usize {
    reg.iter().enumerate().fold(index, |acc, (bit, &q)| {
        (acc & !(1 << q)) | (((value >> bit) & 1) << q)
    })
}

/// Basis index of the arc `(u, v)` with both ancillas clear.
pub fn encode(config: &GraphConfig, u: VertexId, v: VertexId) -> Result<usize> {
    let layout = QubitLayout::for_config(config)?;
    config.check_vertex(u)?;
    config.check_vertex(v)?;
    if u.set == v.set {
        return Err(Error::NotAdjacent);
    }
    let c = if v.set < u.set { v.set } else { v.set - 1 };
    let mut index = 0;
    for (reg, value) in [
        (RegisterName::PosSub, u.set),
        (RegisterName::PosIdx, u.index),
        (RegisterName::CoinSub, c),
        (RegisterName::CoinIdx, v.index),
    ] {
        index = write_register(&layout.register(reg), index, value);
    }
    Ok(index)
}

/// Inverse of [`encode`]; `None` for indices that encode no arc.
pub fn decode(config: &GraphConfig, index: usize) -> Option<(VertexId, VertexId)> {
    let layout = QubitLayout::for_config(config).ok()?;
    if index >> layout.total_qubits() != 0 {
        return None;
    }
    let get = |r| read_register(&layout.register(r), index);
    if get(RegisterName::Flag) != 0 || get(RegisterName::Scratch) != 0 {
        return None;
    }
    let (q_u, p_u) = (get(RegisterName::PosSub), get(RegisterName::PosIdx));
    let (c, p_v) = (get(RegisterName::CoinSub), get(RegisterName::CoinIdx));
    let (m, n) = (config.sets(), config.set_size());
    if q_u >= m || c >= m - 1 || p_u >= n || p_v >= n {
        return None;
    }
    let q_v = if c < q_u { c } else { c + 1 };
    Some((VertexId::new(q_u, p_u), VertexId::new(q_v, p_v)))
}
