use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use haskelite_core::{Error, Program, TraceOptions, TraceStatus, Tracer};

use haskelite::service;

#[derive(Parser)]
#[command(name = "haskelite", version, about = "Step-by-step evaluation traces for a lazy Haskell subset")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression against a program and print its trace.
    Run {
        /// Program source file.
        file: std::path::PathBuf,
        /// Expression to evaluate.
        #[arg(short, long)]
        expr: String,
        /// Print the trace as JSON.
        #[arg(long)]
        json: bool,
        /// Maximum number of machine transitions.
        #[arg(long, default_value_t = TraceOptions::default().fuel)]
        fuel: u64,
        /// Dots shown per hidden nesting level.
        #[arg(long, default_value_t = TraceOptions::default().dots_per_level)]
        dots: usize,
        /// Stop at weak head normal form instead of evaluating the result fully.
        #[arg(long)]
        no_force: bool,
        /// Show every machine transition.
        #[arg(long)]
        machine_steps: bool,
    },
    /// Print the type of an expression.
    Type {
        #[arg(short, long)]
        expr: String,
        /// Program whose definitions are in scope.
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Serve the stepping API over HTTP.
    Serve {
        /// Port to listen on; defaults to $HASKELITE_PORT or 8080.
        #[arg(long)]
        port: Option<u16>,
    },
}

const EXIT_MATCH_FAILURE: u8 = 2;
const EXIT_TYPE: u8 = 3;
const EXIT_SYNTAX: u8 = 4;
const EXIT_FUEL: u8 = 5;
const EXIT_OTHER: u8 = 1;

fn report(e: &Error) -> ExitCode {
    let d = e.diagnostic();
    match (d.line, d.column) {
        (Some(l), Some(c)) => eprintln!("{} error at {l}:{c}: {}", d.kind, d.message),
        _ => eprintln!("{} error: {}", d.kind, d.message),
    }
    ExitCode::from(match e {
        Error::Syntax(_) => EXIT_SYNTAX,
        Error::Type(_) => EXIT_TYPE,
        Error::Runtime(_) => EXIT_OTHER,
    })
}

fn read(path: &std::path::Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_OTHER)
    })
}

fn run(file: &std::path::Path, expr: &str, json: bool, options: TraceOptions) -> ExitCode {
    let src = match read(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let program = match Program::load(&src) {
        Ok(p) => Arc::new(p),
        Err(e) => return report(&e),
    };
    for w in &program.warnings {
        eprintln!("warning: {w}");
    }
    let entry = match program.entry(expr) {
        Ok(ep) => ep,
        Err(e) => return report(&e),
    };
    let mut tracer = Tracer::new(program, &entry, options);
    tracer.run_to_end();
    if json {
        println!("{}", serde_json::to_string_pretty(tracer.entries()).expect("entries serialize"));
    } else {
        print!("{}", tracer.plain());
    }
    if let Some(msg) = tracer.status().message() {
        eprintln!("error: {msg}");
    }
    match tracer.status() {
        TraceStatus::Done => ExitCode::SUCCESS,
        TraceStatus::MatchFailure(_) => ExitCode::from(EXIT_MATCH_FAILURE),
        TraceStatus::OutOfFuel | TraceStatus::EntryLimit => ExitCode::from(EXIT_FUEL),
        TraceStatus::Failed(_) | TraceStatus::Running => ExitCode::from(EXIT_OTHER),
    }
}

fn type_of(file: Option<&std::path::Path>, expr: &str) -> ExitCode {
    let src = match file.map(read).transpose() {
        Ok(s) => s.unwrap_or_default(),
        Err(code) => return code,
    };
    match Program::load(&src).and_then(|p| p.type_of(expr)) {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, expr, json, fuel, dots, no_force, machine_steps } => {
            let options = TraceOptions { fuel, dots_per_level: dots, force: !no_force, machine_steps, ..TraceOptions::default() };
            run(&file, &expr, json, options)
        }
        Command::Type { expr, file } => type_of(file.as_deref(), &expr),
        Command::Serve { port } => {
            let port = port
                .or_else(|| std::env::var("HASKELITE_PORT").ok().and_then(|p| p.parse().ok()))
                .unwrap_or(8080);
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            match rt.block_on(service::serve(port)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("server error: {e}");
                    ExitCode::from(EXIT_OTHER)
                }
            }
        }
    }
}
