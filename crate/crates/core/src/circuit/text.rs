//! Line-oriented circuit format.
//!
//! ```text
//! # mpqw-circuit v1
//! # layout l_m=1 l_n=1 M=3 N=2 n=1 case=2
//! # params alpha=1.3 beta=0.7
//! ORACLE flag[0]
//! RZ flag[0] ; angle=0.7
//! H coin_sub[0]
//! PHASE0 coin_sub[0..0] coin_idx[0..0] ; angle=-1.3
//! CLE pos_sub[0..1] coin_sub[0..0] flag[0]
//! DEC coin_sub[0..0]+scratch[0..0] flag[0] 0
//! ```
//!
//! Single qubits are written `name[i]`. Ordered registers are slices
//! `name[i..j]` joined by `+`, least significant slice first, or `none`
//! when empty. `PHASE0` lists its slices separated by spaces. Angles carry
//! 9 significant digits, so a parsed circuit re-emits byte for byte.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{GraphConfig, MarkedSets};
use crate::numfmt::significant;

use super::layout::{QubitLayout, RegisterName};
use super::{Circuit, Gate, GateKind};

pub const CIRCUIT_HEADER: &str = "# mpqw-circuit v1";

const ANGLE_DIGITS: usize = 9;

fn angle(x: f64) -> String {
    significant(x, ANGLE_DIGITS)
}

fn qubit_name(layout: &QubitLayout, q: usize) -> String {
    match layout.locate(q) {
        Some((reg, bit)) => format!("{reg}[{bit}]"),
        None => format!("q[{q}]"),
    }
}

/// Maximal runs of consecutive qubits inside one named register.
fn slices(layout: &QubitLayout, qubits: &[usize]) -> Vec<String> {
    let mut out: Vec<(RegisterName, usize, usize)> = Vec::new();
    for &q in qubits {
        let (reg, bit) = layout.locate(q).expect("gate qubits lie inside the layout");
        match out.last_mut() {
            Some((r, _, end)) if *r == reg && *end + 1 == bit => *end = bit,
            _ => out.push((reg, bit, bit)),
        }
    }
    out.into_iter()
        .map(|(r, a, b)| format!("{r}[{a}..{b}]"))
        .collect()
}

fn register_operand(layout: &QubitLayout, qubits: &[usize]) -> String {
    if qubits.is_empty() {
        "none".to_string()
    } else {
        slices(layout, qubits).join("+")
    }
}

fn emit_gate(layout: &QubitLayout, gate: &Gate) -> String {
    let q = |x: usize| qubit_name(layout, x);
    let r = |x: &[usize]| register_operand(layout, x);
    let pol = |p: bool| if p { "1" } else { "0" };
    let name = gate.kind().mnemonic();
    match gate {
        Gate::H(a) | Gate::X(a) => format!("{name} {}", q(*a)),
        Gate::Swap(a, b) => format!("{name} {} {}", q(*a), q(*b)),
        Gate::Cle { a, b, flag } => format!("{name} {} {} {}", r(a), r(b), q(*flag)),
        Gate::Inc {
            reg,
            ctrl,
            polarity,
        }
        | Gate::Dec {
            reg,
            ctrl,
            polarity,
        } => {
            format!("{name} {} {} {}", r(reg), q(*ctrl), pol(*polarity))
        }
        Gate::Phase0 { reg, theta } => {
            let operands = if reg.is_empty() {
                "none".to_string()
            } else {
                slices(layout, reg).join(" ")
            };
            format!("{name} {operands} ; angle={}", angle(*theta))
        }
        Gate::Rz { qubit, beta } => format!("{name} {} ; angle={}", q(*qubit), angle(*beta)),
        Gate::GPhase(theta) => format!("{name} ; angle={}", angle(*theta)),
        Gate::Oracle { flag } => format!("{name} {}", q(*flag)),
    }
}

/// Serializes a circuit.
pub fn emit(circuit: &Circuit) -> String {
    let layout = circuit.layout();
    let config = circuit.config();
    let mut out = String::new();
    out.push_str(CIRCUIT_HEADER);
    out.push('\n');
    let _ = writeln!(
        out,
        "# layout l_m={} l_n={} M={} N={} n={} case={}",
        layout.l_m(),
        layout.l_n(),
        config.sets(),
        config.set_size(),
        config.marked(),
        config.case().tag()
    );
    out.push_str("# params");
    if let Some(a) = circuit.alpha() {
        let _ = write!(out, " alpha={}", angle(a));
    }
    if let Some(b) = circuit.beta() {
        let _ = write!(out, " beta={}", angle(b));
    }
    out.push('\n');
    for gate in circuit.gates() {
        out.push_str(&emit_gate(layout, gate));
        out.push('\n');
    }
    out
}

fn key_values(line: usize, body: &str) -> Result<Vec<(&str, &str)>> {
    body.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .ok_or_else(|| Error::parse(line, format!("expected key=value, got '{kv}'")))
        })
        .collect()
}

fn lookup<'a>(line: usize, kvs: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    kvs.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::parse(line, format!("missing '{key}'")))
}

fn number<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{s}'")))
}

struct OperandParser<'a> {
    layout: &'a QubitLayout,
    line: usize,
}

impl OperandParser<'_> {
    fn name_and_bracket<'s>(&self, s: &'s str) -> Result<(RegisterName, &'s str)> {
        let (name, rest) = s.split_once('[').ok_or_else(|| {
            Error::parse(self.line, format!("expected register operand, got '{s}'"))
        })?;
        let inner = rest
            .strip_suffix(']')
            .ok_or_else(|| Error::parse(self.line, format!("unterminated operand '{s}'")))?;
        let reg = RegisterName::from_name(name)
            .ok_or_else(|| Error::parse(self.line, format!("unknown register '{name}'")))?;
        Ok((reg, inner))
    }

    fn resolve(&self, reg: RegisterName, bit: usize) -> Result<usize> {
        self.layout
            .qubit(reg, bit)
            .ok_or_else(|| Error::parse(self.line, format!("{reg}[{bit}] outside the layout")))
    }

    fn qubit(&self, s: &str) -> Result<usize> {
        let (reg, inner) = self.name_and_bracket(s)?;
        let bit = number(self.line, inner, "qubit index")?;
        self.resolve(reg, bit)
    }

    fn slice(&self, s: &str) -> Result<Vec<usize>> {
        let (reg, inner) = self.name_and_bracket(s)?;
        let (a, b) = inner
            .split_once("..")
            .ok_or_else(|| Error::parse(self.line, format!("expected range in '{s}'")))?;
        let (a, b): (usize, usize) = (
            number(self.line, a, "range start")?,
            number(self.line, b, "range end")?,
        );
        if a > b {
            return Err(Error::parse(
                self.line,
                format!("descending range in '{s}'"),
            ));
        }
        (a..=b).map(|bit| self.resolve(reg, bit)).collect()
    }

    fn register(&self, s: &str) -> Result<Vec<usize>> {
        if s == "none" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for part in s.split('+') {
            out.extend(self.slice(part)?);
        }
        Ok(out)
    }

    fn polarity(&self, s: &str) -> Result<bool> {
        match s {
            "1" => Ok(true),
            "0" => Ok(false),
            _ => Err(Error::parse(
                self.line,
                format!("polarity must be 0 or 1, got '{s}'"),
            )),
        }
    }
}

fn parse_gate(layout: &QubitLayout, line: usize, text: &str) -> Result<Gate> {
    let (body, angle) = match text.split_once(';') {
        Some((body, tail)) => {
            let tail = tail.trim();
            let value = tail
                .strip_prefix("angle=")
                .ok_or_else(|| Error::parse(line, format!("expected 'angle=', got '{tail}'")))?;
            (body, Some(number::<f64>(line, value, "angle")?))
        }
        None => (text, None),
    };
    let mut words = body.split_whitespace();
    let mnemonic = words
        .next()
        .ok_or_else(|| Error::parse(line, "empty gate line"))?;
    let kind = GateKind::from_mnemonic(mnemonic)
        .ok_or_else(|| Error::parse(line, format!("unknown gate '{mnemonic}'")))?;
    let args: Vec<&str> = words.collect();
    let p = OperandParser { layout, line };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::parse(
                line,
                format!("{mnemonic} takes {n} operands, got {}", args.len()),
            ))
        }
    };
    let needs_angle = matches!(kind, GateKind::Phase0 | GateKind::Rz | GateKind::GPhase);
    if needs_angle != angle.is_some() {
        return Err(Error::parse(
            line,
            if needs_angle {
                format!("{mnemonic} requires an angle")
            } else {
                format!("{mnemonic} takes no angle")
            },
        ));
    }
    let theta = angle.unwrap_or(0.0);
    Ok(match kind {
        GateKind::H => {
            arity(1)?;
            Gate::H(p.qubit(args[0])?)
        }
        GateKind::X => {
            arity(1)?;
            Gate::X(p.qubit(args[0])?)
        }
        GateKind::Swap => {
            arity(2)?;
            Gate::Swap(p.qubit(args[0])?, p.qubit(args[1])?)
        }
        GateKind::Cle => {
            arity(3)?;
            Gate::Cle {
                a: p.register(args[0])?,
                b: p.register(args[1])?,
                flag: p.qubit(args[2])?,
            }
        }
        GateKind::Inc | GateKind::Dec => {
            arity(3)?;
            let (reg, ctrl, polarity) = (
                p.register(args[0])?,
                p.qubit(args[1])?,
                p.polarity(args[2])?,
            );
            if kind == GateKind::Inc {
                Gate::Inc {
                    reg,
                    ctrl,
                    polarity,
                }
            } else {
                Gate::Dec {
                    reg,
                    ctrl,
                    polarity,
                }
            }
        }
        GateKind::Phase0 => {
            if args.is_empty() {
                return Err(Error::parse(line, "PHASE0 needs operands or 'none'"));
            }
            let reg = if args == ["none"] {
                Vec::new()
            } else {
                let mut reg = Vec::new();
                for a in &args {
                    reg.extend(p.slice(a)?);
                }
                reg
            };
            Gate::Phase0 { reg, theta }
        }
        GateKind::Rz => {
            arity(1)?;
            Gate::Rz {
                qubit: p.qubit(args[0])?,
                beta: theta,
            }
        }
        GateKind::GPhase => {
            arity(0)?;
            Gate::GPhase(theta)
        }
        GateKind::Oracle => {
            arity(1)?;
            Gate::Oracle {
                flag: p.qubit(args[0])?,
            }
        }
    })
}

/// Parses the output of [`emit`].
pub fn parse(text: &str) -> Result<Circuit> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, CIRCUIT_HEADER)) => {}
        Some((n, other)) => {
            return Err(Error::parse(
                n,
                format!("expected '{CIRCUIT_HEADER}', got '{other}'"),
            ))
        }
        None => return Err(Error::parse(1, "empty input")),
    }
    let mut setup: Option<(GraphConfig, QubitLayout)> = None;
    let mut alpha = None;
    let mut beta = None;
    let mut gates = Vec::new();
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix("# layout") {
            let kvs = key_values(n, body)?;
            let get = |k| lookup(n, &kvs, k).and_then(|v| number::<usize>(n, v, k));
            let tag = lookup(n, &kvs, "case").and_then(|v| number::<u8>(n, v, "case"))?;
            let case = MarkedSets::from_tag(tag).map_err(|e| Error::parse(n, e.to_string()))?;
            let config = GraphConfig::new(get("M")?, get("N")?, get("n")?, case)
                .map_err(|e| Error::parse(n, e.to_string()))?;
            let layout =
                QubitLayout::for_config(&config).map_err(|e| Error::parse(n, e.to_string()))?;
            if (layout.l_m(), layout.l_n()) != (get("l_m")?, get("l_n")?) {
                return Err(Error::parse(n, "register widths do not match M and N"));
            }
            setup = Some((config, layout));
        } else if let Some(body) = line.strip_prefix("# params") {
            for (k, v) in key_values(n, body)? {
                match k {
                    "alpha" => alpha = Some(number(n, v, "alpha")?),
                    "beta" => beta = Some(number(n, v, "beta")?),
                    _ => return Err(Error::parse(n, format!("unknown parameter '{k}'"))),
                }
            }
        } else if line.starts_with('#') {
            continue;
        } else {
            let (_, layout) = setup
                .as_ref()
                .ok_or_else(|| Error::parse(n, "gate before '# layout' line"))?;
            gates.push(parse_gate(layout, n, line)?);
        }
    }
    let (config, layout) = setup.ok_or_else(|| Error::parse(1, "missing '# layout' line"))?;
    Ok(Circuit::new(config, layout, alpha, beta, gates))
}
