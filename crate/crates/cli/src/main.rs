use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wiggler_cli::{parse_config, run, CliError, Command, CommandOutput};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    /// Forward photon energy against beam energy
    Kinematics,
    /// Spin-averaged angular spectrum and polarization
    Angular,
    /// Population evolution along the tube
    Tube,
    /// Wavelength-shift diagnostics of radiation coherence
    Coherence,
    /// Scale parameters of the scenario
    Limits,
}

#[derive(Debug, Parser)]
#[command(name = "wiggler", version, about = "Photon emission by electrons wiggling in a laser")]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// Scenario configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, `section.key=value`; repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file; CSV goes to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism
    #[arg(long)]
    threads: Option<usize>,
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.display().to_string(), source };
    let mut w = BufWriter::new(File::create(path).map_err(err)?);
    w.write_all(text.as_bytes()).map_err(err)?;
    w.flush().map_err(err)
}

fn emit(out: &CommandOutput, path: Option<&Path>) -> Result<(), CliError> {
    let report = out.report.to_json();
    let stdout_err = |source| CliError::Write { path: "<stdout>".into(), source };
    match (&out.table, path) {
        (Some(t), Some(p)) => {
            write_file(p, &t.to_text())?;
            let mut rp = p.as_os_str().to_owned();
            rp.push(".report.json");
            write_file(Path::new(&rp), &report)?;
        }
        (Some(t), None) => {
            t.write_to(io::stdout().lock()).map_err(stdout_err)?;
            eprintln!("{report}");
        }
        (None, Some(p)) => write_file(p, &report)?,
        (None, None) => println!("{report}"),
    }
    Ok(())
}

fn execute(args: &Args) -> Result<(), CliError> {
    let cfg = parse_config(args.config.as_deref(), &args.set)?;
    let command = match args.command {
        Sub::Kinematics => Command::Kinematics,
        Sub::Angular => Command::Angular,
        Sub::Tube => Command::Tube,
        Sub::Coherence => Command::Coherence,
        Sub::Limits => Command::Limits,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().expect("thread pool");
    let out = pool.install(|| run(command, &cfg))?;
    let path = args.out.clone().or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    emit(&out, path.as_deref())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wiggler: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
