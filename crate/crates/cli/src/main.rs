//! `casewise`: argument generation, attacks, extensions, queries and
//! postulate checks for theories with defeasible rules and reasoning by
//! cases.
//!
//! Exit status is 0 on success, 1 when a query is false or a postulate
//! fails, and 2 when the input cannot be read, parsed or evaluated.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use casewise_core::baselines::{
    ddl_extensions, gor_closure, gor_saf, parse_ddl, DEFAULT_GOR_BOUND,
};
use casewise_core::postulates::{check_all, Status};
use casewise_core::semantics::{consequences_of, extensions, witnesses};
use casewise_core::{
    build_saf, parse_formula, parse_theory, ArgTheory, GenConfig, Mode, Saf, Semantics,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Emit, Format};

#[derive(Parser, Debug)]
#[command(name = "casewise", version, about)]
struct Cli {
    #[command(flatten)]
    gen: GenArgs,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Maximum rule applications per argument
    #[arg(long, env = "CASEWISE_BUDGET", global = true)]
    budget: Option<u32>,

    /// Maximum premises of a strict step
    #[arg(long, global = true)]
    strict_premises: Option<usize>,

    /// Maximum arguments per generated theory
    #[arg(long, global = true)]
    max_arguments: Option<usize>,

    /// Keep rbc arguments over non-minimal disjunctions
    #[arg(long, global = true)]
    all_disjunctions: bool,
}

impl GenArgs {
    fn config(&self) -> GenConfig {
        let mut cfg = GenConfig::default();
        if let Some(b) = self.budget {
            cfg.max_rule_applications = b;
        }
        if let Some(k) = self.strict_premises {
            cfg.max_strict_premises = k;
        }
        if let Some(m) = self.max_arguments {
            cfg.max_arguments = m;
        }
        cfg.minimal_disjunctions = !self.all_disjunctions;
        cfg
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the arguments and hypothetical arguments of a theory
    Arguments { theory: PathBuf },
    /// List the attack relation
    Attacks { theory: PathBuf },
    /// Enumerate extensions
    Extensions {
        theory: PathBuf,
        #[arg(long, default_value = "grounded")]
        sem: Semantics,
    },
    /// Decide whether a formula is a consequence
    Query {
        theory: PathBuf,
        formula: String,
        #[arg(long, default_value = "grounded")]
        sem: Semantics,
        #[arg(long, default_value = "forall")]
        mode: Mode,
    },
    /// Check the rationality postulates on every complete extension
    Postulates { theory: PathBuf },
    /// Run a comparison system
    Baseline {
        #[arg(value_enum)]
        system: System,
        input: PathBuf,
        /// Formula to decide skeptically
        #[arg(long)]
        query: Option<String>,
        #[arg(long, default_value = "complete")]
        sem: Semantics,
        #[arg(long, default_value = "forall")]
        mode: Mode,
        /// Bound on derived gOR rules
        #[arg(long, default_value_t = DEFAULT_GOR_BOUND)]
        bound: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum System {
    /// Disjunctive default logic
    Ddl,
    /// Rules closed under the generalized OR rule
    Gor,
}

/// A failure to produce any answer.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Core {
        path: String,
        source: casewise_core::Error,
    },
    #[error(transparent)]
    Eval(#[from] casewise_core::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn theory(path: &Path) -> Result<ArgTheory, CliError> {
    parse_theory(&read(path)?).map_err(|source| CliError::Core {
        path: path.display().to_string(),
        source,
    })
}

fn formula(text: &str) -> Result<casewise_core::Formula, CliError> {
    parse_formula(text).map_err(|e| CliError::Core {
        path: "formula".into(),
        source: e.into(),
    })
}

fn warn(saf: &Saf) {
    for w in saf.arguments().warnings() {
        eprintln!("warning: {w}");
    }
}

fn run(cli: &Cli, emit: &mut Emit) -> Result<bool, CliError> {
    let cfg = cli.gen.config();
    match &cli.command {
        Command::Arguments { theory: path } => {
            let saf = build_saf(&theory(path)?, &cfg);
            warn(&saf);
            emit.arguments(&saf);
            Ok(true)
        }
        Command::Attacks { theory: path } => {
            let saf = build_saf(&theory(path)?, &cfg);
            warn(&saf);
            emit.attacks(&saf);
            Ok(true)
        }
        Command::Extensions { theory: path, sem } => {
            let saf = build_saf(&theory(path)?, &cfg);
            warn(&saf);
            let exts = extensions(&saf, *sem)?;
            emit.extensions(&saf, *sem, &exts);
            Ok(true)
        }
        Command::Query {
            theory: path,
            formula: text,
            sem,
            mode,
        } => {
            let phi = formula(text)?;
            let saf = build_saf(&theory(path)?, &cfg);
            warn(&saf);
            let exts = extensions(&saf, *sem)?;
            let verdict = consequences_of(&saf, &exts, *mode).contains(&phi);
            emit.query(
                &saf,
                &phi,
                *sem,
                *mode,
                verdict,
                &witnesses(&saf, &exts, *mode, &phi),
            );
            Ok(verdict)
        }
        Command::Postulates { theory: path } => {
            let mut saf = build_saf(&theory(path)?, &cfg);
            warn(&saf);
            let exts = extensions(&saf, Semantics::Complete)?;
            let reports: Vec<_> = exts.iter().map(|e| check_all(&mut saf, e)).collect();
            emit.postulates(&reports);
            Ok(reports.iter().flatten().all(|r| r.status != Status::Fail))
        }
        Command::Baseline {
            system: System::Ddl,
            input,
            query,
            ..
        } => {
            let t = parse_ddl(&read(input)?).map_err(|source| CliError::Core {
                path: input.display().to_string(),
                source,
            })?;
            let exts = ddl_extensions(&t);
            let verdict = query.as_deref().map(formula).transpose()?.map(|phi| {
                let holds = exts.iter().all(|e| e.entails(&phi));
                (phi, holds)
            });
            emit.ddl(&exts, verdict.as_ref());
            Ok(verdict.is_none_or(|(_, holds)| holds))
        }
        Command::Baseline {
            system: System::Gor,
            input,
            query,
            sem,
            mode,
            bound,
        } => {
            let at = theory(input)?;
            let closure = gor_closure(at.defeasible(), *bound);
            if closure.truncated {
                eprintln!("warning: gOR closure stopped at {bound} derived rules");
            }
            let saf = gor_saf(&at, &cfg, *bound);
            warn(&saf);
            let exts = extensions(&saf, *sem)?;
            let concs = consequences_of(&saf, &exts, *mode);
            let verdict = query.as_deref().map(formula).transpose()?.map(|phi| {
                let holds = concs.contains(&phi);
                (phi, holds)
            });
            emit.gor(&at, &closure, &saf, *sem, *mode, &concs, verdict.as_ref());
            Ok(verdict.is_none_or(|(_, holds)| holds))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut emit = Emit::new(cli.format);
    let result = run(&cli, &mut emit);
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout
        .write_all(emit.into_output().as_bytes())
        .and_then(|_| stdout.flush())
    {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
