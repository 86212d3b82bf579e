//! Query dispatch: wire parsed queries to the decision engines and render
//! reports.

use std::time::Instant;

use crate::query::{InputError, QuerySpec, Task};
use crate::report::{BpolImprintDump, OracleReport, PolImprintDump, Report};

use strata_core::algebra::{transition_monoid, Morphism};
use strata_core::basis::{Basis, BasisKind, CompatibleMorphism};
use strata_core::bpol::bpol_imprint;
use strata_core::decide::{
    covering_with, separation_with, Answer, Iterations, JointRecognizer, Level, Sizes, Verdict,
};
use strata_core::oracles;
use strata_core::pol::{pol_saturate, WorkOrder};
use strata_core::{Budget, Error};

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Core(Error),
}

impl CliError {
    /// 2 for input problems, 3 for guard breaches.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) if e.is_guard_breach() => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Core(e)
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> CliError {
        CliError::Input(e)
    }
}

#[derive(Debug, Default, Clone)]
pub struct ExecFlags {
    pub dump_pol: bool,
    pub dump_bpol: bool,
    pub trace: bool,
    pub oracle: Option<String>,
}

pub fn execute(spec: &QuerySpec, flags: &ExecFlags) -> Result<String, CliError> {
    let start = Instant::now();
    let budget = Budget::new(&spec.options.limits);

    if let Some(oracle) = &flags.oracle {
        return run_oracle(spec, oracle, &budget, start);
    }

    let level = Level::parse(&spec.level).map_err(|e| InputError::new("/level", e.to_string()))?;
    let basis = resolve_basis(spec, level, &budget)?;
    let trace = flags.trace || spec.options.trace;

    match spec.task {
        Task::Separate => {
            let l1 = spec.language(&spec.args[0], "/args/0")?;
            let l2 = spec.language(&spec.args[1], "/args/1")?;
            let joint = JointRecognizer::new(&[l1, l2], &budget)?;
            let verdict = separation_with(l1, l2, &joint, &basis, level.is_boolean(), &budget)?;
            if trace {
                print_trace(&verdict);
            }
            let mut report = Report::from_verdict(&verdict);
            attach_extras(&mut report, flags, joint.rho.eta(), &basis, &budget)?;
            finish(&mut report, spec, start);
            Ok(report.render())
        }
        Task::Member => {
            let l = spec.language(&spec.args[0], "/args/0")?;
            let complement = l.complement();
            let joint = JointRecognizer::new(&[l, &complement], &budget)?;
            let mut verdict =
                separation_with(l, &complement, &joint, &basis, level.is_boolean(), &budget)?;
            verdict.answer = match verdict.answer {
                Answer::Separable => Answer::Member,
                Answer::Inseparable => Answer::NonMember,
                other => other,
            };
            if trace {
                print_trace(&verdict);
            }
            let mut report = Report::from_verdict(&verdict);
            attach_extras(&mut report, flags, joint.rho.eta(), &basis, &budget)?;
            finish(&mut report, spec, start);
            Ok(report.render())
        }
        Task::Cover => {
            if !level.is_boolean() {
                return Err(CliError::Core(Error::CoveringNeedsBooleanLevel(
                    level.name().to_string(),
                )));
            }
            let mut languages = Vec::new();
            for (i, name) in spec.args.iter().enumerate() {
                languages.push(spec.language(name, &format!("/args/{i}"))?);
            }
            let joint = JointRecognizer::new(&languages, &budget)?;
            let verdict = covering_with(&joint, &basis, &budget)?;
            if trace {
                print_trace(&verdict);
            }
            let mut report = Report::from_verdict(&verdict);
            attach_extras(&mut report, flags, joint.rho.eta(), &basis, &budget)?;
            finish(&mut report, spec, start);
            Ok(report.render())
        }
        Task::Imprint => {
            let mut languages = Vec::new();
            for (i, name) in spec.args.iter().enumerate() {
                languages.push(spec.language(name, &format!("/args/{i}"))?);
            }
            let joint = JointRecognizer::new(&languages, &budget)?;
            let rho = &joint.rho;
            let mut report = if level.is_boolean() {
                let run = bpol_imprint(&basis, rho, &budget, WorkOrder::Fifo)?;
                if trace {
                    for (i, entry) in run.trace.iter().enumerate() {
                        eprintln!(
                            "outer iteration {}: pairs {}, frontier {}",
                            i + 1,
                            entry.pairs,
                            entry.frontier_triples
                        );
                    }
                }
                let mut report = Report {
                    verdict: "Imprint".to_string(),
                    bad_value: None,
                    sizes: Sizes {
                        monoid: rho.base_size(),
                        rating_base: rho.base_size(),
                        classes: basis.class_count(),
                    },
                    iterations: Iterations {
                        outer: run.outer_iterations,
                        frontier: run.frontier_triples,
                    },
                    wall_ms: None,
                    monoid: None,
                    pol_imprint: None,
                    bpol_imprint: Some(BpolImprintDump::new(&basis, &run.imprint)),
                };
                if flags.dump_pol {
                    report.pol_imprint = Some(pol_dump(rho.eta(), &basis, &budget)?);
                }
                report
            } else {
                let alpha = CompatibleMorphism::new(rho.eta(), &basis, &budget)?;
                let run = pol_saturate(&alpha, rho, &budget, WorkOrder::Fifo)?;
                Report {
                    verdict: "Imprint".to_string(),
                    bad_value: None,
                    sizes: Sizes {
                        monoid: alpha.size(),
                        rating_base: rho.base_size(),
                        classes: basis.class_count(),
                    },
                    iterations: Iterations {
                        outer: 1,
                        frontier: run.work_items,
                    },
                    wall_ms: None,
                    monoid: None,
                    pol_imprint: Some(PolImprintDump::new(alpha.morphism().labels(), &run.imprint)),
                    bpol_imprint: None,
                }
            };
            if flags.dump_pol || flags.dump_bpol {
                report.monoid = Some(rho.eta().dump());
            }
            finish(&mut report, spec, start);
            Ok(report.render())
        }
    }
}

fn finish(report: &mut Report, spec: &QuerySpec, start: Instant) {
    if spec.options.timing {
        report.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
}

fn print_trace(verdict: &Verdict) {
    for (i, entry) in verdict.trace.iter().enumerate() {
        eprintln!(
            "outer iteration {}: pairs {}, frontier {}",
            i + 1,
            entry.pairs,
            entry.frontier_triples
        );
    }
}

/// Attach `--dump-pol` / `--dump-bpol` payloads (they rerun the engines
/// over the query's rating map) plus the monoid dump.
fn attach_extras(
    report: &mut Report,
    flags: &ExecFlags,
    eta: &Morphism,
    basis: &Basis,
    budget: &Budget,
) -> Result<(), CliError> {
    if !(flags.dump_pol || flags.dump_bpol) {
        return Ok(());
    }
    report.monoid = Some(eta.dump());
    let rho = strata_core::rating::RatingMap::new(eta.clone(), budget)?;
    if flags.dump_bpol {
        let run = bpol_imprint(basis, &rho, budget, WorkOrder::Fifo)?;
        report.bpol_imprint = Some(BpolImprintDump::new(basis, &run.imprint));
    }
    if flags.dump_pol {
        report.pol_imprint = Some(pol_dump(eta, basis, budget)?);
    }
    Ok(())
}

fn pol_dump(eta: &Morphism, basis: &Basis, budget: &Budget) -> Result<PolImprintDump, CliError> {
    let alpha = CompatibleMorphism::new(eta, basis, budget)?;
    let rho = strata_core::rating::RatingMap::new(eta.clone(), budget)?;
    let run = pol_saturate(&alpha, &rho, budget, WorkOrder::Fifo)?;
    Ok(PolImprintDump::new(alpha.morphism().labels(), &run.imprint))
}

fn resolve_basis(spec: &QuerySpec, level: Level, budget: &Budget) -> Result<Basis, CliError> {
    let selector = match &spec.options.basis {
        None => return Ok(Basis::builtin(level.basis_kind(), &spec.alphabet, budget)?),
        Some(selector) => selector,
    };
    if let Some(path) = selector.strip_prefix("custom:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError::new("/options/basis", format!("cannot read `{path}`: {e}")))?;
        let dump: strata_core::algebra::MonoidDump = serde_json::from_str(&text)
            .map_err(|e| InputError::new("/options/basis", format!("`{path}`: {e}")))?;
        let morphism = Morphism::from_dump(&dump, &spec.alphabet, budget)
            .map_err(|e| InputError::new("/options/basis", format!("`{path}`: {e}")))?;
        return Ok(Basis::from_morphism("custom", &morphism, budget)?);
    }
    let kind =
        BasisKind::parse(selector).map_err(|e| InputError::new("/options/basis", e.to_string()))?;
    Ok(Basis::builtin(kind, &spec.alphabet, budget)?)
}

fn run_oracle(
    spec: &QuerySpec,
    oracle: &str,
    budget: &Budget,
    start: Instant,
) -> Result<String, CliError> {
    let arg = |i: usize| -> Result<&strata_core::automata::Dfa, CliError> {
        let name = spec.args.get(i).ok_or_else(|| {
            InputError::new("/args", format!("oracle `{oracle}` needs argument {i}"))
        })?;
        Ok(spec.language(name, &format!("/args/{i}"))?)
    };
    let result = match oracle {
        "j_trivial" => {
            let rec = transition_monoid(arg(0)?, budget)?;
            oracles::is_j_trivial(rec.morphism.target())
        }
        "upward_closed" => oracles::is_upward_closed(arg(0)?),
        "k_subword" => {
            oracles::k_subword_separable(arg(0)?, arg(1)?, spec.options.subword_bound, budget)?
        }
        other => {
            return Err(CliError::Input(InputError::new(
                "",
                format!("unknown oracle `{other}`"),
            )))
        }
    };
    let report = OracleReport {
        oracle: oracle.to_string(),
        result,
        wall_ms: spec
            .options
            .timing
            .then(|| start.elapsed().as_millis() as u64),
    };
    Ok(report.render())
}
