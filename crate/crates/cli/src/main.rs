//! `kazlab`: batch CLI over the spectral-measure, Weyl-sum, representation,
//! tensor-product, and Heisenberg/affine computations. Every command builds
//! a scenario and runs it through the same deterministic dispatcher as
//! `kazlab run <scenario.toml>`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kazlab_cli::{
    AffineDecayParams, CliError, Command, DataFormat, HeisenbergDecayParams, KazhdanCertifyParams,
    KazhdanWitnessParams, MeasureEvalParams, MeasureSource, OutputSpec, RepProjectParams,
    Scenario, SequenceSource, TensorDiagnoseParams, WeylScanParams, WindowSource,
};

#[derive(Parser)]
#[command(name = "kazlab", version, about = "Kazhdan-set witness laboratory")]
struct Cli {
    /// Directory for all output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Format of the main data artifact.
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Csv)]
    format: CliFormat,
    /// Seed recorded in reports (all commands are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Top,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

impl From<CliFormat> for DataFormat {
    fn from(f: CliFormat) -> Self {
        match f {
            CliFormat::Csv => DataFormat::Csv,
            CliFormat::Json => DataFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Top {
    /// Evaluate a measure description file.
    Measure {
        #[command(subcommand)]
        cmd: MeasureCmd,
    },
    /// Weyl/Cesàro character sums.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Kazhdan-set witnesses and certificates on ℤ.
    Kazhdan {
        #[command(subcommand)]
        cmd: KazhdanCmd,
    },
    /// Representation-side operations.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Truncated tensor-product diagnostics.
    Tensor {
        #[command(subcommand)]
        cmd: TensorCmd,
    },
    /// Heisenberg-group coefficient scans.
    Heisenberg {
        #[command(subcommand)]
        cmd: HeisenbergCmd,
    },
    /// Aff₊(ℝ) coefficient scans.
    Affine {
        #[command(subcommand)]
        cmd: AffineCmd,
    },
    /// Run a scenario file.
    Run { scenario: PathBuf },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Export Fourier–Stieltjes coefficients of a measure file.
    Eval {
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = -64, allow_negative_numbers = true)]
        lo: i64,
        #[arg(long, default_value_t = 64, allow_negative_numbers = true)]
        hi: i64,
        /// Data file name override.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Cesàro means of e^{2iπ h n_k θ} for h up to --harmonics.
    Scan {
        /// Sequence spec: poly:1,0,0 | lacunary:2^k+k | list:4,11,30.
        #[arg(long)]
        seq: String,
        /// Angle in turns: 1/3, sqrt2, golden, 0.25, 0x….
        #[arg(long)]
        theta: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 8)]
        harmonics: u32,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum KazhdanCmd {
    /// Construct the Dirac-convolution witness that a set is not Kazhdan.
    Witness {
        #[arg(long)]
        set: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 30)]
        window: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the doubling-chain certificate against a measure.
    Certify {
        #[arg(long)]
        set: String,
        #[arg(long)]
        measure: String,
        #[arg(long = "K")]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        recovery_n: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Decompose a unitary and project an operator onto its commutant.
    Project {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        operator: String,
        #[arg(long, default_value_t = 1e-8)]
        cluster_tol: f64,
    },
}

#[derive(Subcommand)]
enum TensorCmd {
    /// Per-slot weak-mixing diagnostic and C₀ partial sums.
    Diagnose {
        #[arg(long)]
        sequence: String,
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        /// Generator exponents, comma separated.
        #[arg(long, default_value = "1", value_delimiter = ',', allow_negative_numbers = true)]
        word: Vec<i64>,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum HeisenbergCmd {
    /// |⟨π_{±λ}(0,0,p)u, u⟩| over a grid of momenta.
    Decay {
        #[arg(long)]
        lambda: f64,
        /// "gaussian" or a window CSV path.
        #[arg(long, default_value = "gaussian")]
        window: String,
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        #[arg(long, default_value_t = 4097)]
        points: usize,
        #[arg(long)]
        pmax: f64,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum AffineCmd {
    /// |⟨π₊(a,b)f, f⟩| over a grid of translations b.
    Decay {
        #[arg(long)]
        a: f64,
        /// "bump" or a window CSV path.
        #[arg(long, default_value = "bump")]
        window: String,
        #[arg(long, default_value_t = 8.0)]
        center: f64,
        #[arg(long, default_value_t = 0.8)]
        width: f64,
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        #[arg(long, default_value_t = 4097)]
        points: usize,
        #[arg(long)]
        bmax: f64,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

fn window_source(spec: &str) -> WindowSource {
    if spec == "gaussian" || spec == "bump" {
        WindowSource::Named(spec.to_owned())
    } else {
        WindowSource::File {
            file: spec.to_owned(),
        }
    }
}

fn build_scenario(cli: &Cli) -> Result<Scenario, CliError> {
    let mut output = OutputSpec {
        format: cli.format.into(),
        ..Default::default()
    };
    let command = match &cli.command {
        Top::Run { scenario } => {
            let text = std::fs::read_to_string(scenario)?;
            let mut parsed = Scenario::parse(&text)?;
            parsed.seed = cli.seed;
            return Ok(parsed);
        }
        Top::Measure {
            cmd: MeasureCmd::Eval { measure, lo, hi, out },
        } => {
            output.data = out.clone();
            Command::MeasureEval(MeasureEvalParams {
                measure: MeasureSource::Path(measure.clone()),
                lo: *lo,
                hi: *hi,
            })
        }
        Top::Weyl {
            cmd:
                WeylCmd::Scan {
                    seq,
                    theta,
                    n,
                    harmonics,
                    out,
                },
        } => {
            output.data = out.clone();
            Command::WeylScan(WeylScanParams {
                seq: seq.clone(),
                theta: theta.clone(),
                n: *n,
                harmonics: *harmonics,
            })
        }
        Top::Kazhdan {
            cmd:
                KazhdanCmd::Witness {
                    set,
                    epsilon,
                    depth,
                    window,
                    out,
                },
        } => {
            output.report = out.clone();
            Command::KazhdanWitness(KazhdanWitnessParams {
                set: set.clone(),
                epsilon: *epsilon,
                depth: *depth,
                window: *window,
            })
        }
        Top::Kazhdan {
            cmd:
                KazhdanCmd::Certify {
                    set,
                    measure,
                    k,
                    recovery_n,
                    out,
                },
        } => {
            output.report = out.clone();
            Command::KazhdanCertify(KazhdanCertifyParams {
                set: set.clone(),
                measure: MeasureSource::Path(measure.clone()),
                k: *k,
                recovery_n: *recovery_n,
            })
        }
        Top::Rep {
            cmd:
                RepCmd::Project {
                    rep,
                    operator,
                    cluster_tol,
                },
        } => Command::RepProject(RepProjectParams {
            rep: rep.clone(),
            operator: operator.clone(),
            cluster_tol: *cluster_tol,
        }),
        Top::Tensor {
            cmd:
                TensorCmd::Diagnose {
                    sequence,
                    threshold,
                    word,
                    out,
                },
        } => {
            output.data = out.clone();
            Command::TensorDiagnose(TensorDiagnoseParams {
                sequence: SequenceSource::Path(sequence.clone()),
                threshold: *threshold,
                word: word.clone(),
            })
        }
        Top::Heisenberg {
            cmd:
                HeisenbergCmd::Decay {
                    lambda,
                    window,
                    radius,
                    points,
                    pmax,
                    steps,
                    out,
                },
        } => {
            output.data = out.clone();
            Command::HeisenbergDecay(HeisenbergDecayParams {
                lambda: *lambda,
                window: window_source(window),
                radius: *radius,
                points: *points,
                pmax: *pmax,
                steps: *steps,
            })
        }
        Top::Affine {
            cmd:
                AffineCmd::Decay {
                    a,
                    window,
                    center,
                    width,
                    radius,
                    points,
                    bmax,
                    steps,
                    out,
                },
        } => {
            output.data = out.clone();
            Command::AffineDecay(AffineDecayParams {
                a: *a,
                window: window_source(window),
                center: *center,
                width: *width,
                radius: *radius,
                points: *points,
                bmax: *bmax,
                steps: *steps,
            })
        }
    };
    Ok(Scenario {
        command,
        seed: cli.seed,
        output,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = match build_scenario(&cli) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match kazlab_cli::run(&scenario, &cli.out_dir) {
        Ok(outcome) => {
            for f in outcome.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.record());
    ExitCode::from(e.exit_code() as u8)
}
