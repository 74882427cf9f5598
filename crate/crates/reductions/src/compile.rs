//! Circuit-SAT to EFX⁰₀ allocations on a goods graph with priceless edges.

use efx_core::fairness::satisfies;
use efx_core::{Allocation, Notion};

use crate::bundle::{Builder, EdgeRole, GadgetInfo, GadgetKind, Params, ReductionBundle, SignalEdge, Source};
use crate::circuit::{Circuit, Op};
use crate::gadgets::{
    add_not_or_wire, add_or, add_terminator, not_wire_completion, or_completion, terminator_completion, Sig, EPS1,
    EPS2,
};
use crate::ReductionError;

/// Compiles an AND-free circuit. Every wire gets a signal edge; a gate whose two
/// OR operands coincide reads its second operand through a WIRE copy. The
/// output signal is capped by a terminator that forces it True.
pub fn build_circuit_allocation_instance(circuit: &Circuit) -> Result<ReductionBundle, ReductionError> {
    if let Some(g) = circuit.gates.iter().find(|g| g.op == Op::And) {
        return Err(ReductionError::ContainsAnd(circuit.wires[g.out].clone()));
    }
    let mut b = Builder::default();
    let mut signals: Vec<SignalEdge> = Vec::new();
    let new_signal = |b: &mut Builder, name: String, wire: Option<usize>, signals: &mut Vec<SignalEdge>| {
        let upper = b.vertex(name.clone());
        let lower = b.vertex(format!("{name}'"));
        let edge = b.edge(upper, lower, None, EdgeRole::Signal { signal: signals.len() });
        signals.push(SignalEdge { name, upper, lower, edge, wire });
        signals.len() - 1
    };
    for (w, name) in circuit.wires.iter().enumerate() {
        new_signal(&mut b, name.clone(), Some(w), &mut signals);
    }
    let mut gadgets: Vec<GadgetInfo> = Vec::new();
    for gate in &circuit.gates {
        let out = gate.out;
        match gate.op {
            Op::Not => {
                let edges = add_not_or_wire(&mut b, gadgets.len(), GadgetKind::Not, Sig::of(&signals[gate.ins[0]]), Sig::of(&signals[out]));
                gadgets.push(GadgetInfo { kind: GadgetKind::Not, inputs: vec![gate.ins[0]], output: out, internal: vec![], edges });
            }
            Op::Or => {
                let x = gate.ins[0];
                let mut y = gate.ins[1];
                if x == y {
                    let copy = new_signal(&mut b, format!("{}^copy", circuit.wires[out]), None, &mut signals);
                    let edges = add_not_or_wire(&mut b, gadgets.len(), GadgetKind::Wire, Sig::of(&signals[x]), Sig::of(&signals[copy]));
                    gadgets.push(GadgetInfo { kind: GadgetKind::Wire, inputs: vec![x], output: copy, internal: vec![], edges });
                    y = copy;
                }
                let prefix = circuit.wires[out].clone();
                let (internal, edges) = add_or(
                    &mut b,
                    gadgets.len(),
                    &prefix,
                    Sig::of(&signals[x]),
                    Sig::of(&signals[y]),
                    Sig::of(&signals[out]),
                );
                gadgets.push(GadgetInfo { kind: GadgetKind::Or, inputs: vec![x, y], output: out, internal, edges });
            }
            Op::And => unreachable!("rejected above"),
        }
    }
    let o = circuit.output;
    let (internal, edges) = add_terminator(&mut b, gadgets.len(), "terminator", Sig::of(&signals[o]));
    gadgets.push(GadgetInfo { kind: GadgetKind::Terminator, inputs: vec![], output: o, internal, edges });
    let params = Params { priceless: None, eps1: Some(EPS1), eps2: Some(EPS2) };
    b.finish(Source::Circuit { circuit: circuit.clone(), signals, gadgets }, params)
}

/// Value of every signal, copies included.
fn signal_values(circuit: &Circuit, signals: &[SignalEdge], gadgets: &[GadgetInfo], inputs: &[bool]) -> Result<Vec<bool>, ReductionError> {
    let wires = circuit.eval_wires(inputs)?;
    let mut val: Vec<bool> = signals.iter().map(|s| s.wire.map_or(false, |w| wires[w])).collect();
    for g in gadgets.iter().filter(|g| g.kind == GadgetKind::Wire) {
        val[g.output] = val[g.inputs[0]];
    }
    Ok(val)
}

/// Builds the EFX⁰₀ allocation for input values that make the output True:
/// each signal edge to the endpoint its value names, each gadget completed.
pub fn circuit_assignment_to_allocation(bundle: &ReductionBundle, inputs: &[bool]) -> Result<Allocation, ReductionError> {
    let (circuit, signals, gadgets) = bundle.circuit_parts()?;
    let val = signal_values(circuit, signals, gadgets, inputs)?;
    if !val[circuit.output] {
        return Err(ReductionError::OutputFalse);
    }
    let inst = &bundle.instance;
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    let sig = |k: usize| Sig::of(&signals[k]);
    for (k, s) in signals.iter().enumerate() {
        alloc.assign(s.edge, sig(k).holder(val[k]));
    }
    for g in gadgets {
        let owners: Vec<usize> = match g.kind {
            GadgetKind::Or => {
                let (x, y) = (g.inputs[0], g.inputs[1]);
                or_completion(&g.internal, sig(x), sig(y), sig(g.output), val[x], val[y]).to_vec()
            }
            GadgetKind::Terminator => terminator_completion(&g.internal, sig(g.output)).to_vec(),
            GadgetKind::Not | GadgetKind::Wire => {
                let holders = [sig(g.inputs[0]).holder(val[g.inputs[0]]), sig(g.output).holder(val[g.output])];
                not_wire_completion(inst, &g.edges, &holders)
            }
        };
        for (&e, a) in g.edges.iter().zip(owners) {
            alloc.assign(e, a);
        }
    }
    if !satisfies(inst, &alloc, Notion::EFX00).unwrap_or(false) {
        return Err(ReductionError::NotEfx(Notion::EFX00));
    }
    Ok(alloc)
}

/// Reads input values off an EFX⁰₀ allocation: True iff the upper endpoint owns the input's edge.
pub fn allocation_to_circuit_assignment(bundle: &ReductionBundle, alloc: &Allocation) -> Result<Vec<bool>, ReductionError> {
    let (circuit, signals, _) = bundle.circuit_parts()?;
    let inst = &bundle.instance;
    alloc.validate(inst)?;
    if !satisfies(inst, alloc, Notion::EFX00).unwrap_or(false) {
        return Err(ReductionError::NotEfx(Notion::EFX00));
    }
    let inputs: Vec<bool> = circuit
        .inputs
        .iter()
        .map(|&w| {
            let s = signals.iter().find(|s| s.wire == Some(w)).expect("every wire has a signal");
            alloc.owner(s.edge) == Some(s.upper)
        })
        .collect();
    if !circuit.eval(&inputs)? {
        return Err(ReductionError::OutputFalse);
    }
    Ok(inputs)
}
