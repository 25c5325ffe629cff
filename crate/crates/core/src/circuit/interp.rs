//! Exact statevector interpreter.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::GraphConfig;

use super::layout::{read_register, write_register, QubitLayout, RegisterName};
use super::{Circuit, Gate};

/// Largest register count the interpreter will allocate for.
pub const MAX_QUBITS: usize = 26;

/// `|0...0>` over the layout.
pub fn zero_state(layout: &QubitLayout) -> Result<Vec<Complex64>> {
    let n = layout.total_qubits();
    if n > MAX_QUBITS {
        return Err(Error::TooLarge {
            dimension: 1u64 << n.min(63),
            limit: 1u64 << MAX_QUBITS,
        });
    }
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    v[0] = Complex64::new(1.0, 0.0);
    Ok(v)
}

fn permute(state: &mut Vec<Complex64>, f: impl Fn(usize) -> usize) {
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (i, a) in state.iter().enumerate() {
        out[f(i)] = *a;
    }
    *state = out;
}

fn bit(index: usize, q: usize) -> bool {
    (index >> q) & 1 == 1
}

fn step_register(reg: &[usize], index: usize, up: bool) -> usize {
    if reg.is_empty() {
        return index;
    }
    let modulus = 1usize << reg.len();
    let v = read_register(reg, index);
    let next = if up {
        (v + 1) % modulus
    } else {
        (v + modulus - 1) % modulus
    };
    write_register(reg, index, next)
}

/// Applies one gate in place.
pub fn apply_gate(
    gate: &Gate,
    config: &GraphConfig,
    layout: &QubitLayout,
    state: &mut Vec<Complex64>,
) {
    match gate {
        Gate::H(q) => {
            let mask = 1 << q;
            for i in 0..state.len() {
                if i & mask == 0 {
                    let (a, b) = (state[i], state[i | mask]);
                    state[i] = (a + b) * FRAC_1_SQRT_2;
                    state[i | mask] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        Gate::X(q) => permute(state, |i| i ^ (1 << q)),
        Gate::Swap(a, b) => permute(state, |i| {
            if bit(i, *a) == bit(i, *b) {
                i
            } else {
                i ^ (1 << a) ^ (1 << b)
            }
        }),
        Gate::Cle { a, b, flag } => permute(state, |i| {
            if read_register(a, i) <= read_register(b, i) {
                i ^ (1 << flag)
            } else {
                i
            }
        }),
        Gate::Inc {
            reg,
            ctrl,
            polarity,
        } => permute(state, |i| {
            if bit(i, *ctrl) == *polarity {
                step_register(reg, i, true)
            } else {
                i
            }
        }),
        Gate::Dec {
            reg,
            ctrl,
            polarity,
        } => permute(state, |i| {
            if bit(i, *ctrl) == *polarity {
                step_register(reg, i, false)
            } else {
                i
            }
        }),
        Gate::Phase0 { reg, theta } => {
            let phase = Complex64::from_polar(1.0, *theta);
            for (i, a) in state.iter_mut().enumerate() {
                if reg.iter().all(|&q| !bit(i, q)) {
                    *a *= phase;
                }
            }
        }
        Gate::Rz { qubit, beta } => {
            let phase = Complex64::from_polar(1.0, *beta);
            for (i, a) in state.iter_mut().enumerate() {
                if bit(i, *qubit) {
                    *a *= phase;
                }
            }
        }
        Gate::GPhase(theta) => {
            let phase = Complex64::from_polar(1.0, *theta);
            state.iter_mut().for_each(|a| *a *= phase);
        }
        Gate::Oracle { flag } => {
            let pos_sub = layout.register(RegisterName::PosSub);
            let pos_idx = layout.register(RegisterName::PosIdx);
            permute(state, |i| {
                if config.marks(read_register(&pos_sub, i), read_register(&pos_idx, i)) {
                    i ^ (1 << flag)
                } else {
                    i
                }
            })
        }
    }
}

/// Runs every gate of `circuit` on `state`.
pub fn execute(circuit: &Circuit, state: &[Complex64]) -> Result<Vec<Complex64>> {
    let expected = 1usize << circuit.layout().total_qubits();
    if state.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: state.len(),
        });
    }
    let mut out = state.to_vec();
    for gate in circuit.gates() {
        apply_gate(gate, circuit.config(), circuit.layout(), &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;

    fn bare(gates: Vec<Gate>) -> Circuit {
        let cfg = GraphConfig::every_set(5, 4, 1).unwrap();
        Circuit::new(
            cfg,
            QubitLayout::for_config(&cfg).unwrap(),
            None,
            None,
            gates,
        )
    }

    fn basis(i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << 11];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = basis(37);
        assert_eq!(execute(&bare(vec![]), &s).unwrap(), s);
        assert!(execute(&bare(vec![]), &s[..8]).is_err());
    }

    #[test]
    fn hadamard_on_zero() {
        let out = execute(&bare(vec![Gate::H(0)]), &basis(0)).unwrap();
        assert!((out[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(out[2..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn comparator_sets_flag_on_equal_values() {
        let (a, b, flag) = (vec![0, 1], vec![2, 3], 4);
        let i = write_register(&b, write_register(&a, 0, 3), 3);
        let out = execute(
            &bare(vec![Gate::Cle {
                a: a.clone(),
                b: b.clone(),
                flag,
            }]),
            &basis(i),
        )
        .unwrap();
        assert_eq!(out[i | 1 << flag], Complex64::new(1.0, 0.0));
        let j = write_register(&b, write_register(&a, 0, 3), 2);
        let out = execute(&bare(vec![Gate::Cle { a, b, flag }]), &basis(j)).unwrap();
        assert_eq!(out[j], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn adders_wrap_and_respect_polarity() {
        let reg = vec![0, 1];
        let inc = Gate::Inc {
            reg: reg.clone(),
            ctrl: 5,
            polarity: true,
        };
        let out = execute(&bare(vec![inc.clone()]), &basis(3 | 1 << 5)).unwrap();
        assert_eq!(out[1 << 5], Complex64::new(1.0, 0.0));
        let out = execute(&bare(vec![inc]), &basis(3)).unwrap();
        assert_eq!(out[3], Complex64::new(1.0, 0.0));
        let dec = Gate::Dec {
            reg,
            ctrl: 5,
            polarity: false,
        };
        let out = execute(&bare(vec![dec]), &basis(0)).unwrap();
        assert_eq!(out[3], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn diagonal_gates() {
        let out = execute(
            &bare(vec![Gate::Phase0 {
                reg: vec![0, 1],
                theta: 1.0,
            }]),
            &basis(4),
        )
        .unwrap();
        assert!((out[4] - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);
        let out = execute(
            &bare(vec![Gate::Phase0 {
                reg: vec![0, 1],
                theta: 1.0,
            }]),
            &basis(2),
        )
        .unwrap();
        assert_eq!(out[2], Complex64::new(1.0, 0.0));
        let out = execute(
            &bare(vec![Gate::Rz {
                qubit: 3,
                beta: 0.5,
            }]),
            &basis(8),
        )
        .unwrap();
        assert!((out[8] - Complex64::from_polar(1.0, 0.5)).norm() < 1e-15);
        let out = execute(
            &bare(vec![Gate::Phase0 {
                reg: vec![],
                theta: 0.5,
            }]),
            &basis(8),
        )
        .unwrap();
        assert!((out[8] - Complex64::from_polar(1.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn oracle_reads_position_registers() {
        // every_set(5, 4, 1): index 0 of each set is marked
        let c = bare(vec![Gate::Oracle { flag: 9 }]);
        let out = execute(&c, &basis(0)).unwrap();
        assert_eq!(out[1 << 9], Complex64::new(1.0, 0.0));
        let pos_idx_one = 1 << 3;
        let out = execute(&c, &basis(pos_idx_one)).unwrap();
        assert_eq!(out[pos_idx_one], Complex64::new(1.0, 0.0));
        // pos_sub = 6 lies outside the graph
        let out = execute(&c, &basis(6)).unwrap();
        assert_eq!(out[6], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn size_guard() {
        assert!(zero_state(&QubitLayout::new(20, 20)).is_err());
        assert_eq!(zero_state(&QubitLayout::new(0, 0)).unwrap().len(), 8);
    }
}
