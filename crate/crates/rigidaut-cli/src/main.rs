use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rigidaut::autos::{compose, parse_automorphism, Automorphism};
use rigidaut::isotropy::{
    cross_verify, membership, structure, IsotropyVerdict, StructureReport, VerifyReport, UNKNOWN,
};
use rigidaut::models::{build_model, canonical_derivation, exp_apply, parse_variety, Model};
use rigidaut::{Error, ErrorKind};

/// Isotropy groups of locally nilpotent derivations on rigid-like varieties.
#[derive(Parser)]
#[command(name = "rigidaut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Variety description file.
    #[arg(long)]
    variety: PathBuf,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an automorphism to an element.
    Apply {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        aut: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Apply Exp(f·D) for the canonical derivation D.
    Exp {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Test whether an automorphism commutes with factor·D.
    Commutes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        aut: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
    },
    /// Closed-form isotropy membership, checked against the oracle.
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        aut: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
        /// Fail on documented errata as well.
        #[arg(long)]
        strict: bool,
    },
    /// Structure of the isotropy group of factor·D.
    Structure {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
    },
    /// Compose automorphisms; the last one listed acts first.
    Compose {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 1, required = true)]
        aut: Vec<PathBuf>,
    },
    /// Cross-verify closed forms against the oracle on random samples.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail on documented errata as well.
        #[arg(long)]
        strict: bool,
    },
}

enum Failure {
    Error(Error),
    Discrepancy,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model, Error> {
    let (spec, ctx) =
        parse_variety(&read(path)?).map_err(|e| e.context(&path.display().to_string()))?;
    build_model(spec, &ctx)
}

fn load_aut(model: &Model, path: &Path) -> Result<Automorphism, Error> {
    parse_automorphism(model, &read(path)?).map_err(|e| e.context(&path.display().to_string()))
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn show_verdict(v: &IsotropyVerdict, json: bool) {
    if json {
        return print_json(v);
    }
    let closed = v.closed_form.map_or("n/a".to_string(), |c| c.to_string());
    println!("closed form: {closed}");
    println!("oracle: {}", v.oracle);
    println!("discrepancy: {}", v.discrepancy);
    if let Some(w) = &v.witness {
        println!("witness: {}: {} != {}", w.generator, w.lhs, w.rhs);
    }
    if let Some(e) = &v.erratum {
        println!("erratum: {e}");
    }
}

fn show_structure(r: &StructureReport, json: bool) {
    if json {
        return print_json(r);
    }
    match &r.descriptor {
        Some(d) => println!("{d}"),
        None => println!("structure: {UNKNOWN}"),
    }
    for (k, v) in &r.details {
        println!("{k}: {v}");
    }
    for n in r.notes.iter().filter(|n| *n != UNKNOWN) {
        println!("note: {n}");
    }
}

fn show_report(r: &VerifyReport, json: bool) {
    if json {
        return print_json(r);
    }
    println!("family {} seed {} version {}", r.family, r.seed, r.version);
    println!(
        "trials {}: {} agree, {} oracle-only, {} documented errata, {} discrepancies ({} members)",
        r.trials,
        r.agreements,
        r.oracle_only,
        r.errata.len(),
        r.discrepancies.len(),
        r.members
    );
    for s in r.errata.iter().chain(&r.discrepancies) {
        let tag = if s.verdict.erratum.is_some() {
            "erratum"
        } else {
            "discrepancy"
        };
        println!(
            "  {tag} #{}: aut {} factor {}",
            s.index, s.automorphism, s.factor
        );
        if let Some(w) = &s.verdict.witness {
            println!("    witness {}: {} != {}", w.generator, w.lhs, w.rhs);
        }
    }
}

fn show_element(model: &Model, e: &rigidaut::LaurentPoly, json: bool) {
    let text = model.display(e);
    if json {
        print_json(&serde_json::json!({ "element": text }));
    } else {
        println!("{text}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Apply {
            common,
            aut,
            element,
        } => {
            let model = load_model(&common.variety)?;
            let aut = load_aut(&model, &aut)?;
            let e = model.parse_element(&element)?;
            show_element(&model, &aut.apply(&model, &e)?, common.json);
        }
        Command::Exp {
            common,
            factor,
            element,
        } => {
            let model = load_model(&common.variety)?;
            let f = model.parse_element(&factor)?;
            let e = model.parse_element(&element)?;
            let out = exp_apply(&model, &canonical_derivation(&model), &f, &e)?;
            show_element(&model, &out, common.json);
        }
        Command::Commutes {
            common,
            aut,
            factor,
        } => {
            let model = load_model(&common.variety)?;
            let aut = load_aut(&model, &aut)?;
            let f = model.parse_element(&factor)?;
            show_verdict(&membership(&model, &aut, &f)?, common.json);
        }
        Command::Member {
            common,
            aut,
            factor,
            strict,
        } => {
            let model = load_model(&common.variety)?;
            let aut = load_aut(&model, &aut)?;
            let f = model.parse_element(&factor)?;
            let verdict = membership(&model, &aut, &f)?;
            show_verdict(&verdict, common.json);
            if verdict.is_undocumented_discrepancy() || (strict && verdict.discrepancy) {
                return Err(Failure::Discrepancy);
            }
        }
        Command::Structure { common, factor } => {
            let model = load_model(&common.variety)?;
            let f = model.parse_element(&factor)?;
            show_structure(&structure(&model, &f)?, common.json);
        }
        Command::Compose { common, aut } => {
            let model = load_model(&common.variety)?;
            let auts = aut
                .iter()
                .map(|p| load_aut(&model, p))
                .collect::<Result<Vec<_>, _>>()?;
            let mut iter = auts.into_iter().rev();
            let mut acc = iter.next().expect("clap requires one");
            for second in iter {
                acc = compose(&model, &second, &acc)?;
            }
            let images: Vec<(String, String)> = acc
                .generator_images(&model)?
                .into_iter()
                .map(|(g, e)| (g.name().to_string(), model.display(&e)))
                .collect();
            if common.json {
                let images: serde_json::Map<String, serde_json::Value> =
                    images.into_iter().map(|(g, e)| (g, e.into())).collect();
                print_json(
                    &serde_json::json!({ "params": acc.params().to_string(), "images": images }),
                );
            } else {
                println!("{}", acc.params());
                for (g, e) in images {
                    println!("{g} -> {e}");
                }
            }
        }
        Command::Verify {
            common,
            trials,
            seed,
            strict,
        } => {
            let model = load_model(&common.variety)?;
            let report = cross_verify(&model, trials, seed)?;
            show_report(&report, common.json);
            if !report.passed() || (strict && !report.errata.is_empty()) {
                return Err(Failure::Discrepancy);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Discrepancy) => {
            eprintln!("error: discrepancy");
            ExitCode::from(5)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind {
                ErrorKind::Parse => 2,
                ErrorKind::Validation => 3,
                ErrorKind::Math => 4,
            })
        }
    }
}
