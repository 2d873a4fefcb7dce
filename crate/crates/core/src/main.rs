use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use gesplayer::config::EngineConfig;
use gesplayer::generate::{generate_trace, trace_to_ndjson, Scenario, ScenarioName};
use gesplayer::replay::{replay, write_command_log};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "gesplayer", version, about = "Hand-landmark gestures to video-player commands")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a frame trace and write the command log.
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic frame trace.
    Gen {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        fps: u32,
        #[arg(long = "duration-ms", default_value_t = 2000)]
        duration_ms: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the WebSocket streaming service.
    Serve {
        #[arg(long)]
        port: u16,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

enum Failure {
    Io(String),
    Usage(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load_config(path: Option<&Path>) -> Result<EngineConfig, Failure> {
    let Some(path) = path else {
        return Ok(EngineConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Replay { trace, config, out } => {
            let config = load_config(config.as_deref())?;
            let file = File::open(&trace)
                .map_err(|e| Failure::Io(format!("{}: {e}", trace.display())))?;
            let result = replay(BufReader::new(file), &config)?;
            let stderr = io::stderr();
            let mut diag = stderr.lock();
            for d in &result.diagnostics {
                writeln!(diag, "{}", d.to_json_line())?;
            }
            let log = File::create(&out)
                .map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
            write_command_log(&result.commands, BufWriter::new(log))?;
            let snapshot = result.player.snapshot(result.last_t_ms.unwrap_or(0));
            println!("{}", snapshot.to_json_line());
        }
        Command::Gen {
            scenario,
            seed,
            fps,
            duration_ms,
            noise,
            out,
        } => {
            let name: ScenarioName = scenario
                .parse()
                .map_err(|e| Failure::Usage(format!("{e}")))?;
            let s = Scenario::new(name, duration_ms, fps, noise, seed);
            let frames = generate_trace(&s).map_err(|e| Failure::Usage(e.to_string()))?;
            let text = trace_to_ndjson(&frames);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => io::stdout().lock().write_all(text.as_bytes())?,
            }
        }
        Command::Serve { port, config, host } => {
            let config = Arc::new(load_config(config.as_deref())?);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = gesplayer::serve::bind(&host, port).await?;
                log::info!("listening on ws://{}", listener.local_addr()?);
                gesplayer::serve::serve(listener, config).await
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
