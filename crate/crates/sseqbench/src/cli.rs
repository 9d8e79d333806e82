use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::chart::ChartFormat;
use crate::commands::{self, Artifact};
use crate::config;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sseqbench", version, about = "Bounded Serre spectral sequence workbench")]
pub struct Cli {
    /// Workbench config (`.json` selects the JSON form).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write artifacts into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissible differentials and the page-by-page elimination log.
    Constraints,
    /// Per-branch associated graded for one bundle class.
    Gauge {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Override for a residue class, `label=0|1`.
        #[arg(long = "epsilon", value_parser = parse_binding)]
        epsilon: Vec<(String, bool)>,
        /// Values for other unknowns, `name=0|1`.
        #[arg(long = "set", value_parser = parse_binding)]
        set: Vec<(String, bool)>,
    },
    /// The E_2 page with its basis.
    E2,
    /// E_infinity for fixed values of every unknown.
    Einfty {
        #[arg(long = "set", value_parser = parse_binding)]
        set: Vec<(String, bool)>,
    },
    /// E_infinity for every assignment of the unknowns.
    Sweep,
    /// Universal-coefficient derivation of the fibre's low cohomology.
    Uct,
    /// Hit-problem quotient dimensions through a degree.
    Hit {
        #[arg(long)]
        bound: u32,
    },
    /// Chart of one page.
    Chart {
        #[arg(long)]
        page: u32,
        #[arg(long, value_enum)]
        format: ChartFormat,
        #[arg(long = "set", value_parser = parse_binding)]
        set: Vec<(String, bool)>,
    },
    /// Steenrod table skeleton with forced entries filled in.
    SqScaffold,
    /// The config in normalized form.
    Normalize {
        #[arg(long)]
        json: bool,
    },
}

fn parse_binding(s: &str) -> Result<(String, bool), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=0|1, found `{s}`"))?;
    let value = match value.trim() {
        "0" => false,
        "1" => true,
        v => return Err(format!("value must be 0 or 1, found `{v}`")),
    };
    Ok((name.trim().to_string(), value))
}

fn bindings(pairs: &[(String, bool)]) -> Result<BTreeMap<String, bool>, CliError> {
    let mut out = BTreeMap::new();
    for (k, v) in pairs {
        if out.insert(k.clone(), *v).is_some_and(|old| old != *v) {
            return Err(CliError::Validation(format!("conflicting values for `{k}`")));
        }
    }
    Ok(out)
}

pub fn run(cli: &Cli) -> Result<Vec<Artifact>, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Validation("--config <path> is required".into()))?;
    let cfg = config::load(path)?;
    match &cli.command {
        Command::Constraints => commands::constraints(&cfg),
        Command::Gauge { k, epsilon, set } => commands::gauge(&cfg, *k, &bindings(epsilon)?, &bindings(set)?),
        Command::E2 => commands::e2(&cfg),
        Command::Einfty { set } => commands::einfty(&cfg, &bindings(set)?),
        Command::Sweep => commands::sweep(&cfg),
        Command::Uct => commands::uct(&cfg),
        Command::Hit { bound } => commands::hit(&cfg, *bound),
        Command::Chart { page, format, set } => commands::chart(&cfg, *page, *format, &bindings(set)?),
        Command::SqScaffold => commands::sq_scaffold(&cfg),
        Command::Normalize { json } => commands::normalize(&cfg, *json),
    }
}

fn emit(cli: &Cli, artifacts: &[Artifact], stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |path: &std::path::Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io(dir))?;
            for a in artifacts {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.content).map_err(io(&path))?;
                writeln!(stdout, "wrote {}", path.display()).map_err(io(&path))?;
            }
        }
        None => {
            let many = artifacts.len() > 1;
            for (i, a) in artifacts.iter().enumerate() {
                let path = std::path::Path::new("<stdout>");
                if many {
                    if i > 0 {
                        writeln!(stdout).map_err(io(path))?;
                    }
                    writeln!(stdout, "==> {} <==", a.name).map_err(io(path))?;
                }
                stdout.write_all(a.content.as_bytes()).map_err(io(path))?;
            }
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 on success, 1 for invalid input, 2 for a broken internal invariant.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => 1,
            };
        }
    };
    match run(&cli).and_then(|a| emit(&cli, &a, stdout)) {
        Ok(()) => 0,
        // A closed downstream pipe (e.g. `| head`) is not a failure.
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
