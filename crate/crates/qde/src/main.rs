use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use qde::spec::{Params, SystemSpec, SCHEMA_VERSION};
use qde::{exit, parse_spec_file, run_task, QdeError, ResultRecord, Task};

#[derive(Parser)]
#[command(name = "qde", version, about = "Information and dynamical entropy of quantum partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the task of every spec in a file.
    Run {
        spec: PathBuf,
        /// Output directory for JSON records and CSV series.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override `params.seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the randomized property suite.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Capacity bounds up to block length `n` for the state and code of a spec.
    Capacity {
        spec: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        n: u8,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { spec, out, seed, threads } => run(&spec, &out, threads, |s| {
            if let Some(seed) = seed {
                s.params.seed = seed;
            }
        }),
        Command::Capacity { spec, n, out, seed, threads } => run(&spec, &out, threads, |s| {
            s.task = Task::Capacity;
            s.params.n = n.into();
            s.params.optimizer.max_block = s.params.optimizer.max_block.max(n.into());
            if let Some(seed) = seed {
                s.params.seed = seed;
            }
        }),
        Command::Verify { dims, trials, seed, out, threads } => {
            let spec = SystemSpec {
                schema_version: SCHEMA_VERSION.into(),
                name: Some("verify".into()),
                algebra: None,
                state: None,
                partitions: Vec::new(),
                unitary: None,
                classical: None,
                task: Task::Verify,
                params: Params { dims, trials, seed, ..Params::default() },
            };
            with_pool(threads, || {
                let system = spec.build()?;
                let record = run_task(&spec, &system, "verify")?;
                emit(&record, out.as_deref(), "verify")?;
                Ok(record.all_passed())
            })
        }
    };
    match outcome {
        Ok(true) => ExitCode::from(exit::SUCCESS),
        Ok(false) => ExitCode::from(exit::VIOLATION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Parse, adjust, run every spec and write outputs. Returns whether every check
/// passed.
fn run(path: &Path, out: &Path, threads: Option<usize>, adjust: impl Fn(&mut SystemSpec)) -> Result<bool, QdeError> {
    let text = std::fs::read_to_string(path).map_err(|e| QdeError::Io { path: path.to_path_buf(), source: e })?;
    let parsed = parse_spec_file(&text)?;
    let many = parsed.len() > 1;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("result").to_string();
    let mut jobs = Vec::with_capacity(parsed.len());
    for (i, (mut spec, system)) in parsed.into_iter().enumerate() {
        let before = spec.clone();
        adjust(&mut spec);
        let system = if spec == before { system } else { spec.build()? };
        let name = match (&spec.name, many) {
            (Some(n), _) => n.clone(),
            (None, false) => stem.clone(),
            (None, true) => format!("{stem}-{i}"),
        };
        jobs.push((spec, system, name));
    }
    let records: Vec<Result<ResultRecord, QdeError>> =
        with_pool(threads, || jobs.par_iter().map(|(spec, system, name)| run_task(spec, system, name)).collect());
    // tasks are isolated: write every record that succeeded, then report the first failure
    let mut all_passed = true;
    let mut first_error = None;
    for record in records {
        match record.and_then(|r| emit(&r, Some(out), &r.name).map(|()| r.all_passed())) {
            Ok(passed) => all_passed &= passed,
            Err(e) if first_error.is_none() => first_error = Some(e),
            Err(e) => eprintln!("error: {e}"),
        }
    }
    match first_error {
        Some(e) => Err(e),
        None => Ok(all_passed),
    }
}

fn emit(record: &ResultRecord, out: Option<&Path>, stem: &str) -> Result<(), QdeError> {
    print!("{}", record.table());
    if let Some(dir) = out {
        for p in record.write(dir, stem)? {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}
