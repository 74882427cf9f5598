//! (3,B2)-SAT to EFX⁺₋ orientations of a mixed graph.
//!
//! Vertex layout for `n` variables and `m` clauses: `a_i^T = 2i`, `a_i^F = 2i+1`,
//! clause `j` at `2n+j`, then the three Δ agents.

use efx_core::fairness::satisfies;
use efx_core::{Allocation, Instance, Notion, Orientation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bundle::{Builder, EdgeRole, Params, ReductionBundle, Source};
use crate::ReductionError;

/// CNF where every clause has 3 distinct literals and every variable occurs
/// exactly twice positive and twice negative. Literals are DIMACS style: `±(var+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sat3B2Formula {
    pub n_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl Sat3B2Formula {
    /// Validates the occurrence structure.
    pub fn new(n_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, ReductionError> {
        let mut pos = vec![0usize; n_vars];
        let mut neg = vec![0usize; n_vars];
        for (j, c) in clauses.iter().enumerate() {
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(ReductionError::NotThreeDistinctLiterals { clause: j });
            }
            for &l in c {
                let v = l.unsigned_abs() as usize;
                if l == 0 || v > n_vars {
                    return Err(ReductionError::Parse { line: 0, msg: format!("literal {l} out of range") });
                }
                if l > 0 {
                    pos[v - 1] += 1;
                } else {
                    neg[v - 1] += 1;
                }
            }
        }
        for var in 0..n_vars {
            if pos[var] != 2 || neg[var] != 2 {
                return Err(ReductionError::OccurrenceCountViolated { var: var + 1, pos: pos[var], neg: neg[var] });
            }
        }
        Ok(Sat3B2Formula { n_vars, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Clause indices containing `x_var` (0-based) with the given polarity, in order.
    pub fn occurrences(&self, var: usize, positive: bool) -> Vec<usize> {
        let lit = if positive { var as i32 + 1 } else { -(var as i32 + 1) };
        (0..self.m()).filter(|&j| self.clauses[j].contains(&lit)).collect()
    }

    /// First clause not satisfied by `assignment`.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| {
            !c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n_vars, self.m());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        s
    }
}

/// Parses DIMACS-like CNF: `c` comment lines, one `p cnf n m` header,
/// then clauses of three literals each terminated by `0`.
pub fn parse_sat3b2(text: &str) -> Result<Sat3B2Formula, ReductionError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        last_line = line;
        let err = |msg: String| ReductionError::Parse { line, msg };
        if t.starts_with('p') {
            let f: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() {
                return Err(err("second header".into()));
            }
            if f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
                return Err(err("expected `p cnf <vars> <clauses>`".into()));
            }
            let n = f[2].parse().map_err(|_| err(format!("bad variable count {:?}", f[2])))?;
            let m = f[3].parse().map_err(|_| err(format!("bad clause count {:?}", f[3])))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err("clause before header".into()));
        };
        for tok in t.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err(format!("bad literal {tok:?}")))?;
            if l == 0 {
                if current.len() != 3 {
                    return Err(err(format!("clause has {} literals, need 3", current.len())));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                if l.unsigned_abs() as usize > n {
                    return Err(err(format!("literal {l} exceeds {n} variables")));
                }
                current.push(l);
                if current.len() > 3 {
                    return Err(err("clause has more than 3 literals".into()));
                }
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(ReductionError::Parse { line: last_line, msg: "missing `p cnf` header".into() });
    };
    if !current.is_empty() {
        return Err(ReductionError::Parse { line: last_line, msg: "last clause not terminated by 0".into() });
    }
    if clauses.len() != m {
        return Err(ReductionError::ClauseCount { declared: m, found: clauses.len() });
    }
    Sat3B2Formula::new(n, clauses)
}

fn t_of(i: usize) -> usize {
    2 * i
}

fn f_of(i: usize) -> usize {
    2 * i + 1
}

/// Builds the mixed graph. Edge order: variable edges, literal edges clause by
/// clause, the Δ triangle, then penalties from every `a_i^T`, `a_i^F`, `a_j^C` to `a_1^Δ`.
pub fn build_sat_orientation_instance(formula: &Sat3B2Formula) -> Result<ReductionBundle, ReductionError> {
    let n = formula.n_vars;
    let mut b = Builder::default();
    for i in 1..=n {
        b.vertex(format!("T{i}"));
        b.vertex(format!("F{i}"));
    }
    for j in 1..=formula.m() {
        b.vertex(format!("C{j}"));
    }
    let d: Vec<usize> = (1..=3).map(|k| b.vertex(format!("D{k}"))).collect();
    for i in 0..n {
        b.edge(t_of(i), f_of(i), Some((2, 2)), EdgeRole::Variable { var: i });
    }
    for (j, c) in formula.clauses.iter().enumerate() {
        for &l in c {
            let var = l.unsigned_abs() as usize - 1;
            let side = if l > 0 { t_of(var) } else { f_of(var) };
            b.edge(2 * n + j, side, Some((1, 1)), EdgeRole::Literal { clause: j, var, positive: l > 0 });
        }
    }
    for (x, y) in [(0, 1), (1, 2), (0, 2)] {
        b.edge(d[x], d[y], Some((-1, -1)), EdgeRole::Triangle);
    }
    for a in 0..2 * n + formula.m() {
        b.edge(a, d[0], Some((-1, -1)), EdgeRole::Penalty { agent: a });
    }
    b.finish(Source::Sat3b2 { formula: formula.clone() }, Params::default())
}

/// Translates a satisfying assignment into an EFX⁺₋ orientation.
pub fn sat_assignment_to_orientation(
    bundle: &ReductionBundle,
    assignment: &[bool],
) -> Result<Orientation, ReductionError> {
    let formula = bundle.formula()?;
    if assignment.len() != formula.n_vars {
        return Err(ReductionError::WrongAssignmentLength { expected: formula.n_vars, got: assignment.len() });
    }
    if let Some(clause) = formula.first_unsatisfied(assignment) {
        return Err(ReductionError::NotSatisfying { clause });
    }
    let inst = &bundle.instance;
    let n = formula.n_vars;
    let d1 = 2 * n + formula.m();
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    for (e, role) in bundle.map.edge_roles.iter().enumerate() {
        let ed = inst.edge(e);
        let owner = match *role {
            EdgeRole::Variable { var } => {
                if assignment[var] {
                    t_of(var)
                } else {
                    f_of(var)
                }
            }
            EdgeRole::Literal { clause, var, positive } => {
                if assignment[var] == positive {
                    2 * n + clause
                } else {
                    ed.other(2 * n + clause)
                }
            }
            // (Δ1,Δ2)→Δ1, (Δ2,Δ3)→Δ2, (Δ1,Δ3)→Δ3.
            EdgeRole::Triangle => {
                if ed.u == d1 && ed.v == d1 + 2 {
                    ed.v
                } else {
                    ed.u
                }
            }
            EdgeRole::Penalty { agent } => agent,
            _ => return Err(ReductionError::WrongSource("(3,B2)-SAT")),
        };
        alloc.assign(e, owner);
    }
    let o = Orientation::new(inst, alloc)?;
    debug_assert!(satisfies(inst, &o, Notion::EFXPlusMinus).unwrap_or(false));
    Ok(o)
}

/// Reads the assignment back: `x_i` is True iff `a_i^T` owns the variable edge.
pub fn orientation_to_sat_assignment(
    bundle: &ReductionBundle,
    orientation: &Allocation,
) -> Result<Vec<bool>, ReductionError> {
    let formula = bundle.formula()?;
    let inst = &bundle.instance;
    orientation.validate(inst)?;
    if let Some(e) = orientation.first_unallocated() {
        return Err(ReductionError::NotAnOrientation(format!("edge {e} has no owner")));
    }
    if !orientation.is_orientation(inst) {
        return Err(ReductionError::NotAnOrientation("some edge is owned by a non-endpoint".into()));
    }
    if !satisfies(inst, orientation, Notion::EFXPlusMinus).unwrap_or(false) {
        return Err(ReductionError::NotEfx(Notion::EFXPlusMinus));
    }
    Ok((0..formula.n_vars).map(|i| orientation.owner(i) == Some(t_of(i))).collect())
}

/// Agent `a = 0` tied to a chore triangle on agents 1, 2, 3 by the chore edge `(0, 1)`.
/// Every EFX⁺₋ orientation gives `(0, 1)` to agent 0.
pub fn build_chore_anchor_gadget() -> Instance {
    Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (1, 3)], &[(-1, -1); 4]).expect("fixed gadget is valid")
}

/// A random valid formula with `n_vars` variables (a multiple of 3) and a hidden
/// satisfying assignment, which is returned alongside.
pub fn random_satisfiable(seed: u64, n_vars: usize) -> (Sat3B2Formula, Vec<bool>) {
    assert!(n_vars % 3 == 0, "(3,B2) needs 4n divisible by 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hidden: Vec<bool> = (0..n_vars).map(|_| rng.gen()).collect();
    let mut lits: Vec<i32> = (1..=n_vars as i32).flat_map(|v| [v, v, -v, -v]).collect();
    loop {
        lits.shuffle(&mut rng);
        let clauses: Vec<[i32; 3]> = lits.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        if let Ok(f) = Sat3B2Formula::new(n_vars, clauses) {
            if f.first_unsatisfied(&hidden).is_none() {
                return (f, hidden);
            }
        }
    }
}
