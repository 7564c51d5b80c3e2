//! Command handlers: run the requested operation on a loaded scenario and
//! print a deterministic report.

use crate::scenario::{self, Scenario};
use crate::{Command, CubeOp, FunctorOp, ModuleOp, VerifyOp};
use adelic_core::functors::{self, KoszulData};
use adelic_core::modules;
use adelic_core::ring::{parse_elem, AlgPrime, Elem};
use adelic_core::verifier::{self, Verdict};
use serde::Serialize;
use serde_json::json;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] scenario::ScenarioError),
    #[error("{0}")]
    Engine(String),
}

macro_rules! engine {
    ($e:expr) => {
        $e.map_err(|err| RunError::Engine(err.to_string()))?
    };
}

pub fn run(
    cmd: &Command,
    window: usize,
    poset_primes: Option<&str>,
    text: bool,
) -> Result<ExitCode, RunError> {
    match cmd {
        Command::Cube { op } => match op {
            CubeOp::Build { scenario } => {
                let s = scenario::load(scenario, poset_primes)?;
                let cube = engine!(s.build_cube());
                let entries: Vec<_> = cube
                    .flags()
                    .iter()
                    .map(|f| {
                        json!({
                            "flag": f.to_string(),
                            "carrier": cube.entry(f).unwrap().carrier.to_string(),
                        })
                    })
                    .collect();
                emit(
                    &json!({
                        "command": "cube build",
                        "variant": cube.variant,
                        "dimension": cube.r,
                        "entries": entries,
                        "warnings": s.poset.warnings,
                    }),
                    text,
                );
                Ok(ExitCode::SUCCESS)
            }
            CubeOp::CheckLaw { scenario } => {
                let s = scenario::load(scenario, poset_primes)?;
                let cube = engine!(s.build_cube());
                let report = engine!(adelic_core::cube::check_cochain_law(&cube));
                let pass = report.pass();
                emit(
                    &json!({
                        "command": "cube check-law",
                        "pass": pass,
                        "checks": report.checks,
                        "violations": report.violations,
                    }),
                    text,
                );
                Ok(exit_pass_fail(pass))
            }
        },
        Command::Verify { op } => match op {
            VerifyOp::Pullback { scenario } => {
                let s = scenario::load(scenario, poset_primes)?;
                let cube = engine!(s.build_cube());
                let report = engine!(verifier::verify_pullback(&cube));
                emit(&serde_to_value(&report), text);
                Ok(match report.verdict {
                    Verdict::Pullback => ExitCode::SUCCESS,
                    Verdict::NotPullback => ExitCode::from(2),
                    Verdict::RelativePullback => ExitCode::from(3),
                })
            }
            VerifyOp::BpEquivalence { scenario } => {
                let s = scenario::load(scenario, poset_primes)?;
                let report =
                    engine!(verifier::verify_bp_equivalence(&s.poset, &s.coefficient));
                let pass = report.equivalent;
                emit(&serde_to_value(&report), text);
                Ok(exit_pass_fail(pass))
            }
        },
        Command::Functor { op } => run_functor(op, window, poset_primes, text),
        Command::Module { op } => run_module(op, window, poset_primes, text),
    }
}

fn run_functor(
    op: &FunctorOp,
    window: usize,
    poset_primes: Option<&str>,
    text: bool,
) -> Result<ExitCode, RunError> {
    match op {
        FunctorOp::Gamma { scenario, prime } => {
            let s = scenario::load(scenario, poset_primes)?;
            let p = find_prime(&s, prime)?;
            let report = engine!(functors::gamma(&KoszulData::of(&p), &s.coefficient));
            emit(&serde_to_value(&report), text);
            Ok(ExitCode::SUCCESS)
        }
        FunctorOp::Localize { scenario, prime } => {
            let s = scenario::load(scenario, poset_primes)?;
            let p = find_prime(&s, prime)?;
            let l = engine!(functors::localize(&p, &s.coefficient));
            let table = engine!(adelic_core::complex::homology_table(&l));
            emit(
                &json!({
                    "command": "functor localize",
                    "carrier": l.carrier.to_string(),
                    "homology": table,
                }),
                text,
            );
            Ok(ExitCode::SUCCESS)
        }
        FunctorOp::Complete { scenario, prime } => {
            let s = scenario::load(scenario, poset_primes)?;
            let p = find_prime(&s, prime)?;
            let c = engine!(functors::complete(&p, &s.coefficient));
            let tower = engine!(functors::complete_report(&p, &s.coefficient, window));
            emit(
                &json!({
                    "command": "functor complete",
                    "carrier": c.carrier.to_string(),
                    "tower": tower,
                }),
                text,
            );
            Ok(ExitCode::SUCCESS)
        }
        FunctorOp::Support { scenario } => {
            let s = scenario::load(scenario, poset_primes)?;
            let report = engine!(functors::support(&s.coefficient, &s.poset));
            emit(&serde_to_value(&report), text);
            Ok(ExitCode::SUCCESS)
        }
        FunctorOp::Cosupport { scenario } => {
            let s = scenario::load(scenario, poset_primes)?;
            let report = engine!(functors::cosupport(&s.coefficient, &s.poset, window));
            emit(&serde_to_value(&report), text);
            Ok(ExitCode::SUCCESS)
        }
        FunctorOp::Filtration { scenario, level } => {
            let s = scenario::load(scenario, poset_primes)?;
            let report = engine!(functors::dim_filtration(&s.coefficient, *level, &s.poset));
            emit(&serde_to_value(&report), text);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_module(
    op: &ModuleOp,
    _window: usize,
    poset_primes: Option<&str>,
    text: bool,
) -> Result<ExitCode, RunError> {
    match op {
        ModuleOp::TensorUp { scenario } => {
            let s = scenario::load(scenario, poset_primes)?;
            let x = engine!(s.build_module());
            let vertices: Vec<_> = x
                .vertices
                .iter()
                .map(|(f, v)| {
                    json!({
                        "flag": f.to_string(),
                        "carrier": v.carrier.to_string(),
                        "acyclic": modules::vertex_acyclic(v).unwrap_or(false),
                    })
                })
                .collect();
            emit(
                &json!({"command": "module tensor-up", "vertices": vertices}),
                text,
            );
            Ok(ExitCode::SUCCESS)
        }
        ModuleOp::Cocartesian { scenario } => {
            let s = scenario::load(scenario, poset_primes)?;
            let x = engine!(s.build_module());
            let status = engine!(modules::is_cocartesian(&x));
            let pass = status.cocartesian;
            emit(&serde_to_value(&status), text);
            Ok(exit_pass_fail(pass))
        }
        ModuleOp::Holim { scenario } => {
            let s = scenario::load(scenario, poset_primes)?;
            let x = engine!(s.build_module());
            let n = engine!(modules::holim_module(&x));
            let table = engine!(adelic_core::complex::homology_table(&n));
            emit(
                &json!({"command": "module holim", "homology": table}),
                text,
            );
            Ok(ExitCode::SUCCESS)
        }
        ModuleOp::Roundtrip { scenario } => {
            let s = scenario::load(scenario, poset_primes)?;
            let trip = if s.torsion_cospan.is_some() {
                let x = engine!(s.build_module());
                engine!(modules::roundtrip_module(&x))
            } else {
                engine!(modules::roundtrip_coefficient(&s.coefficient, &s.poset))
            };
            let pass = match &trip {
                modules::RoundTrip::Coefficient { pass, .. } => *pass,
                modules::RoundTrip::Module { pass, .. } => *pass,
            };
            emit(&serde_to_value(&trip), text);
            Ok(exit_pass_fail(pass))
        }
        ModuleOp::Reconstruct {
            scenario,
            dimension,
        } => {
            let s = scenario::load(scenario, poset_primes)?;
            let x = engine!(s.build_module());
            let (_, report) = engine!(modules::f_d_reconstruct(&x, *dimension));
            let pass = report.eta_is_equivalence_at_d && report.cone_supported_below;
            emit(&serde_to_value(&report), text);
            Ok(exit_pass_fail(pass))
        }
    }
}

fn find_prime(s: &Scenario, key: &str) -> Result<AlgPrime, RunError> {
    // accept either the canonical key "(2)" or a bare generator list "2"
    for p in &s.poset.primes {
        if p.key() == key {
            return Ok(p.clone());
        }
    }
    let core = s.poset.base.core();
    let gens: Result<Vec<Elem>, _> = key
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .filter(|t| !t.trim().is_empty() && *t != "0")
        .map(|t| parse_elem(t.trim(), &core))
        .collect();
    match gens {
        Ok(gens) if gens.is_empty() => Ok(AlgPrime::zero_ideal(s.poset.base.clone())),
        Ok(gens) => {
            let height = gens.len() as u32;
            AlgPrime::new(s.poset.base.clone(), gens, height)
                .map_err(|e| RunError::Engine(e.to_string()))
        }
        Err(e) => Err(RunError::Engine(e.to_string())),
    }
}

fn exit_pass_fail(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn serde_to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable report")
}

fn emit(value: &serde_json::Value, text: bool) {
    if text {
        print_text(value, 0);
    } else {
        println!("{}", serde_json::to_string_pretty(value).expect("json"));
    }
}

fn print_text(value: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                match v {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_text(v, indent + 1);
                    }
                    _ => println!("{pad}{k}: {v}"),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                match item {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        println!("{pad}-");
                        print_text(item, indent + 1);
                    }
                    _ => println!("{pad}- {item}"),
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}
