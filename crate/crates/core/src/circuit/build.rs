//! Compilation of the walk factors.
//!
//! The shift acts on `|q_u p_u, c p_v>` as
//! `|(c+1) p_v, q_u p_u>` when `q_u <= c` and `|c p_v, (q_u-1) p_u>` otherwise.
//! It is built in five stages:
//!
//! 1. swap `pos_idx` with `coin_idx`;
//! 2. `flag ^= (pos_sub <= coin_sub)`;
//! 3. swap `pos_sub` with `scratch:coin_sub` (scratch as the top bit);
//! 4. increment `pos_sub` if `flag = 1`, decrement `scratch:coin_sub` if `flag = 0`;
//! 5. `flag ^= !(pos_sub <= coin_sub)`.
//!
//! After stage 4 with `flag = 1` the registers hold `pos_sub = c + 1` and
//! `coin = q_u <= c`, so the comparison in stage 5 is false and flips the
//! flag back to 0. With `flag = 0` they hold `pos_sub = c` and
//! `coin = q_u - 1 >= c`, so the comparison is true and the flag stays 0.
//! In both branches the coin value is at most `M - 2 < 2^l_m`, which clears
//! `scratch`.

use crate::error::Result;
use crate::graph::GraphConfig;

use super::layout::{QubitLayout, RegisterName};
use super::{Circuit, Gate};

fn coin_qubits(layout: &QubitLayout) -> Vec<usize> {
    let mut q = layout.register(RegisterName::CoinSub);
    q.extend(layout.register(RegisterName::CoinIdx));
    q
}

/// Flip-flop shift `|u v> -> |v u>`.
pub fn build_shift(config: &GraphConfig) -> Result<Circuit> {
    let layout = QubitLayout::for_config(config)?;
    let pos_sub = layout.register(RegisterName::PosSub);
    let pos_idx = layout.register(RegisterName::PosIdx);
    let coin_sub = layout.register(RegisterName::CoinSub);
    let coin_idx = layout.register(RegisterName::CoinIdx);
    let flag = layout.flag();
    let mut coin_ext = coin_sub.clone();
    coin_ext.push(layout.scratch());

    let mut gates = Vec::new();
    gates.extend(
        pos_idx
            .iter()
            .zip(&coin_idx)
            .map(|(&a, &b)| Gate::Swap(a, b)),
    );
    let compare = Gate::Cle {
        a: pos_sub.clone(),
        b: coin_sub.clone(),
        flag,
    };
    gates.push(compare.clone());
    gates.extend(
        pos_sub
            .iter()
            .zip(&coin_ext)
            .map(|(&a, &b)| Gate::Swap(a, b)),
    );
    gates.push(Gate::Inc {
        reg: pos_sub.clone(),
        ctrl: flag,
        polarity: true,
    });
    gates.push(Gate::Dec {
        reg: coin_ext,
        ctrl: flag,
        polarity: false,
    });
    gates.push(compare);
    gates.push(Gate::X(flag));
    Ok(Circuit::new(*config, layout, None, None, gates))
}

/// Coin `(1 - e^{-i alpha})|s><s| - I` on the coin registers.
pub fn build_coin(config: &GraphConfig, alpha: f64) -> Result<Circuit> {
    let layout = QubitLayout::for_config(config)?;
    let coin = coin_qubits(&layout);
    let mut gates: Vec<Gate> = coin.iter().map(|&q| Gate::H(q)).collect();
    gates.push(Gate::GPhase(std::f64::consts::PI));
    gates.push(Gate::Phase0 {
        reg: coin.clone(),
        theta: -alpha,
    });
    gates.extend(coin.iter().map(|&q| Gate::H(q)));
    Ok(Circuit::new(*config, layout, Some(alpha), None, gates))
}

/// Phase `e^{i beta}` on arcs whose position vertex is marked.
pub fn build_query(config: &GraphConfig, beta: f64) -> Result<Circuit> {
    let layout = QubitLayout::for_config(config)?;
    let flag = layout.flag();
    let gates = vec![
        Gate::Oracle { flag },
        Gate::Rz { qubit: flag, beta },
        Gate::Oracle { flag },
    ];
    Ok(Circuit::new(*config, layout, None, Some(beta), gates))
}

/// One step `S C(alpha) Q(beta)`: query first, then coin, then shift.
pub fn build_step(config: &GraphConfig, alpha: f64, beta: f64) -> Result<Circuit> {
    let mut gates = build_query(config, beta)?.gates;
    gates.extend(build_coin(config, alpha)?.gates);
    gates.extend(build_shift(config)?.gates);
    let layout = QubitLayout::for_config(config)?;
    Ok(Circuit::new(
        *config,
        layout,
        Some(alpha),
        Some(beta),
        gates,
    ))
}
