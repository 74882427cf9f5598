//! Boolean circuits over AND, OR and NOT, in a line-based netlist format:
//!
//! ```text
//! # comment
//! input x
//! input y
//! gate g = AND x y
//! gate h = NOT g
//! output h
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ReductionError;

pub type WireId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Op {
    And,
    Or,
    Not,
}

impl Op {
    fn arity(self) -> usize {
        match self {
            Op::Not => 1,
            _ => 2,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Op::And => "AND",
            Op::Or => "OR",
            Op::Not => "NOT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub out: WireId,
    pub op: Op,
    pub ins: Vec<WireId>,
}

/// A validated circuit. Wires are numbered in declaration order; `gates` is
/// topologically sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub wires: Vec<String>,
    pub inputs: Vec<WireId>,
    pub gates: Vec<Gate>,
    pub output: WireId,
}

impl Circuit {
    pub fn wire_id(&self, name: &str) -> Option<WireId> {
        self.wires.iter().position(|w| w == name)
    }

    /// Value of every wire under the given input values.
    pub fn eval_wires(&self, inputs: &[bool]) -> Result<Vec<bool>, ReductionError> {
        if inputs.len() != self.inputs.len() {
            return Err(ReductionError::WrongAssignmentLength { expected: self.inputs.len(), got: inputs.len() });
        }
        let mut val = vec![false; self.wires.len()];
        for (&w, &x) in self.inputs.iter().zip(inputs) {
            val[w] = x;
        }
        for g in &self.gates {
            val[g.out] = match g.op {
                Op::And => val[g.ins[0]] && val[g.ins[1]],
                Op::Or => val[g.ins[0]] || val[g.ins[1]],
                Op::Not => !val[g.ins[0]],
            };
        }
        Ok(val)
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<bool, ReductionError> {
        Ok(self.eval_wires(inputs)?[self.output])
    }

    pub fn and_count(&self) -> usize {
        self.gates.iter().filter(|g| g.op == Op::And).count()
    }

    /// Netlist text that parses back to an equal circuit.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut driven_by_gate = vec![None; self.wires.len()];
        for (k, g) in self.gates.iter().enumerate() {
            driven_by_gate[g.out] = Some(k);
        }
        // Declaration order keeps wire ids stable across a round trip.
        for (w, name) in self.wires.iter().enumerate() {
            match driven_by_gate[w] {
                None => writeln!(s, "input {name}").unwrap(),
                Some(k) => {
                    let g = &self.gates[k];
                    let args: Vec<&str> = g.ins.iter().map(|&i| self.wires[i].as_str()).collect();
                    writeln!(s, "gate {name} = {} {}", g.op.keyword(), args.join(" ")).unwrap();
                }
            }
        }
        writeln!(s, "output {}", self.wires[self.output]).unwrap();
        s
    }
}

struct RawGate {
    out: String,
    op: Op,
    ins: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || "_.~'[]-".contains(c))
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ReductionError> {
    let mut wires: Vec<String> = Vec::new();
    let mut index: HashMap<String, WireId> = HashMap::new();
    let mut inputs = Vec::new();
    let mut raw: Vec<RawGate> = Vec::new();
    let mut output: Option<String> = None;
    let mut declare = |name: &str, wires: &mut Vec<String>| -> Result<WireId, ReductionError> {
        if index.contains_key(name) {
            return Err(ReductionError::MultipleDrivers(name.to_string()));
        }
        wires.push(name.to_string());
        index.insert(name.to_string(), wires.len() - 1);
        Ok(wires.len() - 1)
    };
    for (k, rawline) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| ReductionError::Parse { line, msg };
        let t = rawline.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        match f[0] {
            "input" => {
                if f.len() != 2 || !valid_name(f[1]) {
                    return Err(err("expected `input <name>`".into()));
                }
                inputs.push(declare(f[1], &mut wires)?);
            }
            "output" => {
                if f.len() != 2 || !valid_name(f[1]) {
                    return Err(err("expected `output <name>`".into()));
                }
                if output.is_some() {
                    return Err(err("a circuit has exactly one output".into()));
                }
                output = Some(f[1].to_string());
            }
            "gate" => {
                if f.len() < 4 || f[2] != "=" || !valid_name(f[1]) {
                    return Err(err("expected `gate <name> = <OP> <args>`".into()));
                }
                let op = match f[3].to_ascii_uppercase().as_str() {
                    "AND" => Op::And,
                    "OR" => Op::Or,
                    "NOT" => Op::Not,
                    other => return Err(err(format!("unknown gate type {other:?}"))),
                };
                let args = &f[4..];
                if args.len() != op.arity() || !args.iter().all(|a| valid_name(a)) {
                    return Err(err(format!("{} takes {} input(s)", op.keyword(), op.arity())));
                }
                declare(f[1], &mut wires)?;
                raw.push(RawGate { out: f[1].to_string(), op, ins: args.iter().map(|a| a.to_string()).collect() });
            }
            other => return Err(err(format!("unknown keyword {other:?}"))),
        }
    }
    let lookup = |name: &str| index.get(name).copied().ok_or_else(|| ReductionError::UndrivenWire(name.to_string()));
    let mut gates = Vec::with_capacity(raw.len());
    for g in &raw {
        let ins = g.ins.iter().map(|a| lookup(a)).collect::<Result<Vec<_>, _>>()?;
        gates.push(Gate { out: lookup(&g.out)?, op: g.op, ins });
    }
    let output = lookup(&output.ok_or(ReductionError::MissingOutput)?)?;
    let gates = topo_sort(&wires, gates)?;
    Ok(Circuit { wires, inputs, gates, output })
}

/// Kahn's algorithm, always taking the ready gate declared first.
fn topo_sort(wires: &[String], gates: Vec<Gate>) -> Result<Vec<Gate>, ReductionError> {
    let mut driver = vec![None; wires.len()];
    for (k, g) in gates.iter().enumerate() {
        driver[g.out] = Some(k);
    }
    let mut pending: Vec<usize> = gates.iter().map(|g| g.ins.iter().filter(|&&i| driver[i].is_some()).count()).collect();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    for (k, g) in gates.iter().enumerate() {
        for &i in &g.ins {
            if let Some(d) = driver[i] {
                users[d].push(k);
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..gates.len()).filter(|&k| pending[k] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(k) = ready.pop_first() {
        order.push(k);
        for &u in &users[k] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.insert(u);
            }
        }
    }
    if order.len() < gates.len() {
        let stuck = (0..gates.len()).find(|k| pending[*k] > 0).expect("some gate is stuck");
        return Err(ReductionError::CycleDetected(wires[gates[stuck].out].clone()));
    }
    let mut slots: Vec<Option<Gate>> = gates.into_iter().map(Some).collect();
    Ok(order.into_iter().map(|k| slots[k].take().expect("each gate once")).collect())
}

/// Rewrites every `g = AND a b` as `g = NOT (OR (NOT a) (NOT b))`.
/// Adds three gates per AND; all other gates and wire names are kept.
pub fn eliminate_and(circuit: &Circuit) -> Circuit {
    let mut wires = circuit.wires.clone();
    let mut taken: BTreeSet<String> = wires.iter().cloned().collect();
    let mut fresh = |base: String, wires: &mut Vec<String>| -> WireId {
        let mut name = base.clone();
        let mut k = 1;
        while taken.contains(&name) {
            name = format!("{base}{k}");
            k += 1;
        }
        taken.insert(name.clone());
        wires.push(name);
        wires.len() - 1
    };
    let mut gates = Vec::with_capacity(circuit.gates.len() + 3 * circuit.and_count());
    for g in &circuit.gates {
        if g.op != Op::And {
            gates.push(g.clone());
            continue;
        }
        let base = circuit.wires[g.out].clone();
        let na = fresh(format!("{base}~na"), &mut wires);
        let nb = fresh(format!("{base}~nb"), &mut wires);
        let or = fresh(format!("{base}~or"), &mut wires);
        gates.push(Gate { out: na, op: Op::Not, ins: vec![g.ins[0]] });
        gates.push(Gate { out: nb, op: Op::Not, ins: vec![g.ins[1]] });
        gates.push(Gate { out: or, op: Op::Or, ins: vec![na, nb] });
        gates.push(Gate { out: g.out, op: Op::Not, ins: vec![or] });
    }
    Circuit { wires, inputs: circuit.inputs.clone(), gates, output: circuit.output }
}
