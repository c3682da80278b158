use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use reflex_cli::{cmd_neuron_trace, cmd_run, cmd_solve, RunArgs, SolveArgs, Task, TraceArgs};

#[derive(Parser)]
#[command(name = "reflex", version, about = "Reflexive group decisions over a pulse channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Forward,
    Inverse,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the forward or inverse task without the channel.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "forward")]
        task: TaskArg,
        /// Controlled subject (inverse task).
        #[arg(long)]
        subject: Option<String>,
        /// Target alternative, e.g. "{alpha}" or "1" (inverse task).
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Simulate one resonate-and-fire neuron and write its trace.
    NeuronTrace {
        #[arg(long)]
        omega: f64,
        /// Pulses as "mag@time,mag@time,...".
        #[arg(long, default_value = "")]
        pulses: String,
        #[arg(long, default_value_t = 6.0)]
        duration: f64,
        #[arg(long, default_value = "trace.csv")]
        out: PathBuf,
    },
    /// Run a scenario end to end over the simulated channel.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            config,
            task,
            subject,
            target,
            seed,
            out_dir,
        } => cmd_solve(&SolveArgs {
            config,
            task: match task {
                TaskArg::Forward => Task::Forward,
                TaskArg::Inverse => Task::Inverse,
            },
            subject,
            target,
            seed,
            out_dir,
        }),
        Command::NeuronTrace {
            omega,
            pulses,
            duration,
            out,
        } => cmd_neuron_trace(&TraceArgs {
            omega,
            pulses,
            duration,
            out,
        }),
        Command::Run { config, seed, out_dir } => cmd_run(&RunArgs { config, seed, out_dir }),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(reflex_cli::EXIT_ERROR as u8)
        }
    }
}
