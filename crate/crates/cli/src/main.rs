use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tanglescope_cli::report::DEFAULT_POOL_CAP;
use tanglescope_cli::{
    analyze, fixture_files, load_picture, render, resolution, AnalysisReport, AnalyzeOptions,
    CliError, Format, Mode,
};

#[derive(Parser)]
#[command(name = "tanglescope", version, about = "Tangle analysis of small pictures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Svg,
    Mask,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Picture file: a P2/P5 gray map or a grid text file.
    file: PathBuf,
    /// Input format; guessed from the contents by default.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Code width for gray maps.
    #[arg(long, default_value_t = 1)]
    bits: usize,
    /// Offset N; defaults to the largest edge weight.
    #[arg(long = "N")]
    offset: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a picture and print a JSON report.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Also write the report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Largest picture for the exact pool.
        #[arg(long, default_value_t = DEFAULT_POOL_CAP)]
        pool_cap: usize,
    },
    /// Draw the tree-set lines of a report.
    Render {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        style: Style,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a built-in picture as grid and gray map files.
    Fixtures {
        #[arg(value_parser = fixture_files::NAMES)]
        name: String,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Print the largest supported resolution.
    Resolution {
        #[command(flatten)]
        input: InputArgs,
        /// Restrict to the pixels of this hex bitmask.
        #[arg(long)]
        subset: Option<String>,
    },
}

fn write(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Analyze {
            input,
            mode,
            json,
            pool_cap,
        } => {
            let picture = load_picture(&input.file, input.format, input.bits)?;
            let opts = AnalyzeOptions {
                mode,
                offset: input.offset,
                pool_cap,
            };
            let report = analyze(picture, &opts)?;
            let text = report.to_json()?;
            println!("{text}");
            if let Some(path) = json {
                write(&path, &text)?;
            }
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed");
                Ok(ExitCode::from(2))
            }
        }
        Command::Render {
            report,
            style,
            output,
        } => {
            let text = std::fs::read_to_string(&report).map_err(|source| CliError::Io {
                path: report.display().to_string(),
                source,
            })?;
            let report = AnalysisReport::from_json(&text)?;
            let out = match style {
                Style::Svg => render::render_svg(&report)?,
                Style::Mask => render::render_mask(&report)?,
            };
            write(&output, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fixtures { name, output } => {
            for path in fixture_files::write_fixture(&name, &output)? {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolution { input, subset } => {
            let picture = load_picture(&input.file, input.format, input.bits)?;
            println!("{}", resolution(picture, input.offset, subset.as_deref())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tanglescope: {e}");
            ExitCode::FAILURE
        }
    }
}
