use std::fs;
use std::io::Write;
use std::path::Path;

use efx_core::fairness::{check, satisfies};
use efx_core::generate::{random_instance, random_tree_instance, ValueKind};
use efx_core::goods_chores::{
    chores_ef_allocation, chores_efx0_orientation, chores_efxminus_orientation, goods_efx0_allocation,
    goods_efxplus_orientation,
};
use efx_core::json::{allocation_from_json, allocation_to_json, instance_from_json, instance_to_json};
use efx_core::mixed_allocation::{efx0minus_allocation_traced, efxplus0_allocation, efxplusminus_allocation};
use efx_core::mixed_orientation::{path_efx0minus_decide, star_efx00_decide, tree_efxplus0_orientation};
use efx_core::oracle::{oracle_count, oracle_exists, SearchSpec};
use efx_core::{Allocation, DecideResult, Instance, Notion, SolveError};
use efx_reductions::{
    allocation_to_circuit_assignment, build_circuit_allocation_instance, build_sat_orientation_instance,
    circuit_assignment_to_allocation, eliminate_and, orientation_to_sat_assignment, parse_circuit, parse_sat3b2,
    sat_assignment_to_orientation, ReductionBundle, ReductionMap, Source,
};

use crate::exit::{Exit, EXIT_MISMATCH, EXIT_NONE, EXIT_OK};
use crate::trace::{SolveTrace, Step, TRACE_VERSION};
use crate::{
    CertifyArgs, CheckArgs, Command, DecideArgs, GenArgs, Kind, Mode, OracleArgs, ReduceArgs, ReduceCommand,
    SearchArgs, SolveArgs,
};

type Out<'a> = &'a mut dyn Write;

pub(crate) fn dispatch(cmd: Command, out: Out, err: Out) -> Result<i32, Exit> {
    match cmd {
        Command::Check(a) => cmd_check(a, out),
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Decide(a) => cmd_decide(a, out, err),
        Command::Reduce(r) => cmd_reduce(r, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Gen(a) => cmd_gen(a, out),
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text).map_err(|e| Exit::internal(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: Out) -> Result<(), Exit> {
    match path {
        Some(p) => write(p, text),
        None => out.write_all(text.as_bytes()).map_err(Exit::internal),
    }
}

fn load_instance(path: &Path) -> Result<Instance, Exit> {
    Ok(instance_from_json(&read(path)?)?)
}

fn notion(s: &str) -> Result<Notion, Exit> {
    s.parse().map_err(Exit::usage)
}

fn line(w: Out, text: impl std::fmt::Display) -> Result<(), Exit> {
    writeln!(w, "{text}").map_err(Exit::internal)
}

fn cmd_check(a: CheckArgs, out: Out) -> Result<i32, Exit> {
    let inst = load_instance(&a.instance.instance)?;
    let alloc = allocation_from_json(&read(&a.alloc)?, &inst)?;
    let notions: Vec<Notion> = if a.notion.iter().any(|n| n == "all") {
        Notion::ALL.to_vec()
    } else {
        a.notion.iter().map(|n| notion(n)).collect::<Result<_, _>>()?
    };
    let reports = notions.iter().map(|&n| check(&inst, &alloc, n)).collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.is_satisfied());
    if a.json {
        let text = serde_json::to_string_pretty(&reports).map_err(Exit::internal)?;
        line(out, text)?;
    } else {
        for r in &reports {
            if r.is_satisfied() {
                line(out, format!("{}: PASS", r.notion))?;
                continue;
            }
            line(out, format!("{}: FAIL ({} violations)", r.notion, r.violations.len()))?;
            for v in &r.violations {
                let witness = match v.edge {
                    Some(e) => format!(" after removing edge {e} from the {:?} side", v.side),
                    None => String::new(),
                };
                line(out, format!("  agent {} envies agent {}{witness}", v.envious, v.envied))?;
            }
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_NONE })
}

/// Result of running whichever procedure fits the instance and notion.
struct Found {
    result: DecideResult,
    method: String,
    steps: Vec<Step>,
}

impl Found {
    fn some(alloc: Allocation, method: &str) -> Self {
        Found { result: DecideResult::found(alloc), method: method.to_string(), steps: Vec::new() }
    }

    fn decided(result: DecideResult, method: &str) -> Self {
        Found { result, method: method.to_string(), steps: Vec::new() }
    }
}

fn configure_jobs(jobs: usize) {
    if jobs > 1 {
        // Fails only if a pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

fn exhaustive(inst: &Instance, notion: Notion, mode: Mode, search: &SearchArgs) -> Result<Found, Exit> {
    configure_jobs(search.jobs);
    let spec = match mode {
        Mode::Allocation => SearchSpec::allocations(notion),
        Mode::Orientation => SearchSpec::orientations(notion),
    }
    .with_budget(search.budget)
    .with_parallel(search.jobs > 1);
    Ok(Found::decided(oracle_exists(inst, &spec)?, "exhaustive search"))
}

/// Falls through to the next procedure when the graph has the wrong shape.
fn shape_mismatch(e: &SolveError) -> bool {
    matches!(
        e,
        SolveError::NotAStar | SolveError::NotAPath | SolveError::NotATree(_) | SolveError::UnsupportedSignPattern { .. }
    )
}

fn find(inst: &Instance, notion: Notion, mode: Mode, root: usize, search: &SearchArgs, err: Out) -> Result<Found, Exit> {
    use Notion::*;
    if root >= inst.n().max(1) {
        return Err(Exit::usage(format!("root {root} is not an agent")));
    }
    let goods = inst.is_goods();
    let chores = inst.is_chores();
    match mode {
        Mode::Orientation => {
            match notion {
                EFXgPlus if goods => return Ok(Found::some(goods_efxplus_orientation(inst)?, "goods orientation")),
                EFXc0 if chores => return Ok(Found::decided(chores_efx0_orientation(inst)?, "chores EFX0 decider")),
                EFXcMinus if chores => {
                    return Ok(Found::decided(chores_efxminus_orientation(inst)?, "chores EFX- decider"))
                }
                EFXPlus0 | EFXPlusMinus => match tree_efxplus0_orientation(inst, root) {
                    Ok(a) => return Ok(Found::some(a, "tree orientation")),
                    Err(e) if shape_mismatch(&e) => {}
                    Err(e) => return Err(e.into()),
                },
                EFX00 | EFX0Minus => {
                    match star_efx00_decide(inst, notion) {
                        Ok(r) => return Ok(Found::decided(r, "star decider")),
                        Err(e) if shape_mismatch(&e) => {}
                        Err(e) => return Err(e.into()),
                    }
                    match path_efx0minus_decide(inst) {
                        Ok(r) => return Ok(Found::decided(r, "path decider")),
                        Err(e) if shape_mismatch(&e) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
                _ => {}
            }
            line(err, format!("note: no polynomial procedure applies to {notion} orientations here; using exhaustive search"))?;
            exhaustive(inst, notion, mode, search)
        }
        Mode::Allocation => match notion {
            EFX0Minus => {
                let (alloc, st) = efx0minus_allocation_traced(inst)?;
                Ok(Found {
                    result: DecideResult::found(alloc),
                    method: "EFX0- allocation".into(),
                    steps: st.trace.iter().map(Step::from).collect(),
                })
            }
            EFXPlus0 => Ok(Found::some(efxplus0_allocation(inst), "EFX+0 allocation")),
            EFXPlusMinus => Ok(Found::some(efxplusminus_allocation(inst), "EFX+0 allocation")),
            EFXgPlus if goods => Ok(Found::some(goods_efxplus_orientation(inst)?, "goods orientation")),
            EFXg0 if goods => Ok(Found::some(goods_efx0_allocation(inst)?, "goods EFX0 allocation")),
            EF | EFXc0 | EFXcMinus if chores && (inst.n() >= 3 || inst.m() == 0) => {
                Ok(Found::some(chores_ef_allocation(inst)?, "chores envy-free allocation"))
            }
            EFX00 => {
                line(
                    err,
                    format!(
                        "note: deciding EFX00 allocations is NP-hard; using exhaustive search (budget {})",
                        search.budget
                    ),
                )?;
                exhaustive(inst, notion, mode, search)
            }
            _ => {
                line(err, format!("note: no polynomial procedure applies to {notion} allocations here; using exhaustive search"))?;
                exhaustive(inst, notion, mode, search)
            }
        },
    }
}

/// Re-runs the checker on a witness; any disagreement is a hard failure.
fn verify(inst: &Instance, alloc: &Allocation, notion: Notion, mode: Mode) -> Result<(), Exit> {
    let ok = satisfies(inst, alloc, notion).unwrap_or(false) && (mode == Mode::Allocation || alloc.is_orientation(inst));
    if ok {
        Ok(())
    } else {
        Err(Exit::new(EXIT_MISMATCH, format!("produced allocation fails the {notion} checker")))
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Allocation => "allocation",
        Mode::Orientation => "orientation",
    }
}

fn cmd_solve(a: SolveArgs, out: Out, err: Out) -> Result<i32, Exit> {
    let notion = notion(&a.notion)?;
    let inst = load_instance(&a.instance.instance)?;
    let found = find(&inst, notion, a.mode, a.root, &a.search, err)?;
    let verified = match &found.result.witness {
        Some(w) => {
            verify(&inst, w, notion, a.mode)?;
            true
        }
        None => false,
    };
    if let Some(path) = &a.trace {
        let trace = SolveTrace {
            version: TRACE_VERSION,
            notion: notion.to_string(),
            mode: mode_name(a.mode).into(),
            method: found.method.clone(),
            steps: found.steps,
            owners: found.result.witness.as_ref().map(|w| w.owners().to_vec()).unwrap_or_default(),
            verified,
        };
        write(path, &trace.to_json())?;
    }
    let Some(w) = found.result.witness else {
        line(out, format!("NOT-EXISTS: no {notion} {} ({})", mode_name(a.mode), found.method))?;
        return Ok(EXIT_NONE);
    };
    let verdict = format!("{notion}: PASS ({})", found.method);
    match &a.out {
        Some(p) => {
            write(p, &allocation_to_json(&w))?;
            line(out, verdict)?;
        }
        None => {
            emit(None, &allocation_to_json(&w), out)?;
            line(err, verdict)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_decide(a: DecideArgs, out: Out, err: Out) -> Result<i32, Exit> {
    let notion = notion(&a.notion)?;
    let inst = load_instance(&a.instance.instance)?;
    let found = find(&inst, notion, a.mode, 0, &a.search, err)?;
    match &found.result.witness {
        Some(w) => {
            verify(&inst, w, notion, a.mode)?;
            if let Some(p) = &a.out {
                write(p, &allocation_to_json(w))?;
            }
            line(out, format!("EXISTS ({})", found.method))?;
            Ok(EXIT_OK)
        }
        None => {
            line(out, format!("NOT-EXISTS ({})", found.method))?;
            Ok(EXIT_NONE)
        }
    }
}

fn cmd_reduce(r: ReduceCommand, out: Out) -> Result<i32, Exit> {
    let (args, bundle) = match r {
        ReduceCommand::Sat3b2(a) => {
            let f = parse_sat3b2(&read(&a.input)?)?;
            let b = build_sat_orientation_instance(&f)?;
            (a, b)
        }
        ReduceCommand::Circuit(a) => {
            let c = eliminate_and(&parse_circuit(&read(&a.input)?)?);
            let b = build_circuit_allocation_instance(&c)?;
            (a, b)
        }
    };
    write_bundle(&args, &bundle)?;
    line(out, format!("{} agents, {} edges", bundle.instance.n(), bundle.instance.m()))?;
    Ok(EXIT_OK)
}

fn write_bundle(a: &ReduceArgs, b: &ReductionBundle) -> Result<(), Exit> {
    write(&a.out, &instance_to_json(&b.instance))?;
    write(&a.map, &b.map.to_json())
}

fn parse_assignment(s: &str) -> Result<Vec<bool>, Exit> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().to_ascii_lowercase().as_str() {
            "1" | "t" | "true" => Ok(true),
            "0" | "f" | "false" => Ok(false),
            other => Err(Exit::usage(format!("bad assignment value {other:?} (use 1/0 or t/f)"))),
        })
        .collect()
}

fn cmd_certify(a: CertifyArgs, out: Out) -> Result<i32, Exit> {
    let instance = load_instance(&a.instance.instance)?;
    let map = ReductionMap::from_json(&read(&a.map)?).map_err(Exit::invalid)?;
    if map.edge_roles.len() != instance.m() || map.vertex_names.len() != instance.n() {
        return Err(Exit::invalid("map does not describe this instance"));
    }
    let bundle = ReductionBundle { instance, map };
    let sat = matches!(bundle.map.source, Source::Sat3b2 { .. });
    if let Some(text) = &a.assignment {
        let x = parse_assignment(text)?;
        let alloc = if sat {
            sat_assignment_to_orientation(&bundle, &x)?.into_allocation()
        } else {
            circuit_assignment_to_allocation(&bundle, &x)?
        };
        emit(a.out.as_deref(), &allocation_to_json(&alloc), out)?;
        return Ok(EXIT_OK);
    }
    let cert = a.cert.as_ref().expect("clap requires --assignment or --cert");
    let alloc = allocation_from_json(&read(cert)?, &bundle.instance)?;
    let x = if sat {
        orientation_to_sat_assignment(&bundle, &alloc)?
    } else {
        allocation_to_circuit_assignment(&bundle, &alloc)?
    };
    let text: Vec<&str> = x.iter().map(|&b| if b { "1" } else { "0" }).collect();
    line(out, text.join(","))?;
    Ok(EXIT_OK)
}

fn cmd_oracle(a: OracleArgs, out: Out) -> Result<i32, Exit> {
    let notion = notion(&a.notion)?;
    let inst = load_instance(&a.instance.instance)?;
    configure_jobs(a.search.jobs);
    let spec = match a.mode {
        Mode::Allocation => SearchSpec::allocations(notion),
        Mode::Orientation => SearchSpec::orientations(notion),
    }
    .with_budget(a.search.budget)
    .with_parallel(a.search.jobs > 1);
    if a.count {
        line(out, format!("count: {}", oracle_count(&inst, &spec)?))?;
        return Ok(EXIT_OK);
    }
    let r = oracle_exists(&inst, &spec)?;
    match &r.witness {
        Some(w) => {
            if let Some(p) = &a.out {
                write(p, &allocation_to_json(w))?;
            }
            line(out, "EXISTS")?;
            Ok(EXIT_OK)
        }
        None => {
            line(out, "NOT-EXISTS")?;
            Ok(EXIT_NONE)
        }
    }
}

fn cmd_gen(a: GenArgs, out: Out) -> Result<i32, Exit> {
    let (kind, lo, hi) = match a.kind {
        Kind::Goods => (ValueKind::Goods, 0, 9),
        Kind::Chores => (ValueKind::Chores, -9, 0),
        Kind::Mixed => (ValueKind::Mixed, -5, 5),
    };
    let (lo, hi) = (a.lo.unwrap_or(lo), a.hi.unwrap_or(hi));
    let inst = if a.tree {
        random_tree_instance(a.seed, kind, a.n, lo, hi)
    } else {
        random_instance(a.seed, kind, a.n, a.m, lo, hi)
    }
    .map_err(Exit::usage)?;
    emit(a.out.as_deref(), &instance_to_json(&inst), out)?;
    Ok(EXIT_OK)
}
