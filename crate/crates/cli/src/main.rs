use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rmt_core::ensembles::{
    sample_prescribed_singular, sample_wishart, EntryDistribution, Field, RngStream, SingularProfile,
};
use rmt_core::harness::{
    emit_csv_law_table, emit_csv_measure, emit_csv_report, emit_svg_histogram, emit_svg_panels, read_csv_measure,
    read_matrix, sample_ensemble, verify_by_name, write_matrix, write_report_json, EnsembleSpec, Overlay, Panel,
    DEFAULT_SEED, VERIFY_NAMES,
};
use rmt_core::laws::LawSpec;
use rmt_core::spectra::{eigvals_general, eigvals_hermitian, singular_values, EmpiricalMeasure};
use rmt_core::{Result, RmtError};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "rmt", version, about = "Random-matrix sampling, spectra and limit-law verification")]
struct Cli {
    /// Worker threads (defaults to all available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleName {
    Goe,
    Gue,
    /// Real symmetric with Rademacher entries.
    Wigner,
    /// `(1/n)XXᵀ`, `X` of size `p × n`.
    Wishart,
    Ginibre,
    GinibreComplex,
    /// Square matrix with Rademacher entries.
    Rademacher,
    Elliptical,
    Haar,
    /// `UΣV*` with the singular values read from `--profile`.
    SingleRing,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one matrix and write it in the rmt-matrix format.
    Sample {
        #[arg(long, value_enum)]
        ensemble: EnsembleName,
        #[arg(long)]
        n: usize,
        /// Rows of the Wishart data matrix.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        rho: Option<f64>,
        /// Wishart aspect ratio p/n, used when `--p` is absent.
        #[arg(long)]
        alpha: Option<f64>,
        /// File of singular values, separated by commas or whitespace.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Eigenvalues (or singular values) of a matrix file, as CSV.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        singular: bool,
        /// Multiply every value by this factor, e.g. 1/√n.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification suite and write its JSON report.
    Verify {
        /// One of: semicircle, bai_yin, tracy_widom, mp, hard_edge, quarter_circle, circular,
        /// elliptical, single_ring, single_ring_gapped, rigidity, gumbel, counting_local.
        law: String,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Matrix size (suite default when absent).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Render a measure CSV as SVG.
    Plot {
        #[arg(value_enum)]
        kind: PlotKind,
        /// Measure CSV; repeat for side-by-side scatter panels.
        #[arg(long = "in", required = true)]
        inputs: Vec<PathBuf>,
        /// Law spec (`semicircle`, `mp:0.25`, `disc`, `ellipse:0.5`, `annulus:a,b`, ...).
        #[arg(long)]
        overlay: Option<String>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reference-law tables.
    Laws {
        #[command(subcommand)]
        action: LawsAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Scatter,
    Hist,
}

#[derive(Subcommand)]
enum LawsAction {
    /// Write `x,density,cdf` on an even grid of the support.
    Dump {
        #[arg(long)]
        law: String,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_profile(path: &Path) -> Result<SingularProfile> {
    let text = std::fs::read_to_string(path).map_err(|e| RmtError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut sigmas = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        match tok.parse::<f64>() {
            Ok(v) => sigmas.push(v),
            // header line
            Err(_) if sigmas.is_empty() => continue,
            Err(_) => return Err(RmtError::Parse(format!("{}: bad number '{tok}'", path.display()))),
        }
    }
    SingularProfile::from_unsorted(sigmas)
}

#[allow(clippy::too_many_arguments)]
fn sample(
    ensemble: EnsembleName,
    n: usize,
    p: Option<usize>,
    rho: Option<f64>,
    alpha: Option<f64>,
    profile: Option<&Path>,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let mut rng = RngStream::new(seed, 0);
    let spec = match ensemble {
        EnsembleName::Goe => EnsembleSpec::Goe,
        EnsembleName::Gue => EnsembleSpec::Gue,
        EnsembleName::Wigner => EnsembleSpec::Wigner {
            offdiag: EntryDistribution::Rademacher,
            diag: None,
        },
        EnsembleName::Wishart => {
            let rows = match (p, alpha) {
                (Some(p), _) => p,
                (None, Some(a)) if a > 0.0 => ((a * n as f64).round() as usize).max(1),
                (None, Some(a)) => return Err(RmtError::InvalidParameter {
                    name: "alpha",
                    value: a,
                    reason: "must be positive".into(),
                }),
                (None, None) => return Err(RmtError::InvalidInput("wishart needs --p or --alpha".into())),
            };
            return write_matrix(&sample_wishart(rows, n, None, &mut rng)?, out);
        }
        EnsembleName::Ginibre => EnsembleSpec::Ginibre { field: Field::Real },
        EnsembleName::GinibreComplex => EnsembleSpec::Ginibre { field: Field::Complex },
        EnsembleName::Rademacher => EnsembleSpec::Iid {
            entry: EntryDistribution::Rademacher,
        },
        EnsembleName::Elliptical => EnsembleSpec::Elliptical {
            rho: rho.ok_or_else(|| RmtError::InvalidInput("elliptical needs --rho".into()))?,
        },
        EnsembleName::Haar => EnsembleSpec::HaarUnitary,
        EnsembleName::SingleRing => {
            let path = profile.ok_or_else(|| RmtError::InvalidInput("single-ring needs --profile".into()))?;
            let prof = read_profile(path)?;
            if prof.len() != n {
                return Err(RmtError::InvalidProfile(format!(
                    "profile has {} values but --n is {n}",
                    prof.len()
                )));
            }
            return write_matrix(&sample_prescribed_singular(&prof, &mut rng)?, out);
        }
    };
    write_matrix(&sample_ensemble(&spec, n, &mut rng)?, out)
}

fn spectrum(input: &Path, singular: bool, scale: f64, out: &Path) -> Result<()> {
    let m = read_matrix(input)?;
    let s = if singular {
        singular_values(&m)?
    } else if m.is_square() && m.is_hermitian(1e-12) {
        eigvals_hermitian(&m)?
    } else {
        eigvals_general(&m)?
    };
    let s = s.scaled(scale);
    let mu = match (s.real_values(), s.complex_values()) {
        (Some(v), _) => EmpiricalMeasure::from_real(v.to_vec())?,
        (_, Some(z)) => EmpiricalMeasure::from_complex(z.to_vec())?,
        _ => unreachable!("a spectrum is real or complex"),
    };
    emit_csv_measure(&mu, out)
}

fn parse_overlay(spec: &str) -> Result<Overlay> {
    if let Some(rest) = spec.strip_prefix("annulus:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| RmtError::Parse("annulus needs `annulus:a,b`".into()))?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| RmtError::Parse(format!("bad number '{s}' in overlay")))
        };
        return Ok(Overlay::Annulus {
            inner: num(a)?,
            outer: num(b)?,
        });
    }
    let law: LawSpec = spec.parse()?;
    match law {
        LawSpec::UniformDisc => Ok(Overlay::Circle { radius: 1.0 }),
        LawSpec::UniformEllipse { rho } => Ok(Overlay::Ellipse { rho }),
        _ => Err(RmtError::InvalidInput(format!("'{spec}' is not a planar law"))),
    }
}

fn plot(kind: PlotKind, inputs: &[PathBuf], overlay: Option<&str>, bins: Option<usize>, out: &Path) -> Result<()> {
    let measures = inputs.iter().map(|p| read_csv_measure(p)).collect::<Result<Vec<_>>>()?;
    match kind {
        PlotKind::Hist => {
            if measures.len() != 1 {
                return Err(RmtError::InvalidInput("histograms take exactly one --in".into()));
            }
            let law = overlay.map(|s| s.parse::<LawSpec>().and_then(|l| l.build_1d())).transpose()?;
            emit_svg_histogram(&measures[0], law.as_ref(), bins, out)
        }
        PlotKind::Scatter => {
            let overlays = overlay.map(parse_overlay).transpose()?.into_iter().collect::<Vec<_>>();
            let panels: Vec<Panel<'_>> = measures
                .iter()
                .zip(inputs)
                .map(|(m, p)| Panel {
                    title: p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                    measure: m,
                    overlays: overlays.clone(),
                })
                .collect();
            emit_svg_panels(&panels, out)
        }
    }
}

enum Outcome {
    Done,
    Verified(bool),
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Sample {
            ensemble,
            n,
            p,
            rho,
            alpha,
            profile,
            seed,
            out,
        } => sample(ensemble, n, p, rho, alpha, profile.as_deref(), seed, &out).map(|_| Outcome::Done),
        Command::Spectrum {
            input,
            singular,
            scale,
            out,
        } => spectrum(&input, singular, scale, &out).map(|_| Outcome::Done),
        Command::Verify {
            law,
            alpha,
            rho,
            epsilon,
            n,
            trials,
            seed,
            report,
            csv,
        } => {
            if !VERIFY_NAMES.contains(&law.as_str()) && law != "tw" {
                return Err(RmtError::InvalidInput(format!(
                    "unknown law '{law}'; expected one of {}",
                    VERIFY_NAMES.join(", ")
                )));
            }
            let param = alpha.or(rho).or(epsilon);
            let r = verify_by_name(&law, param, n, trials, seed)?;
            write_report_json(&r, &report)?;
            if let Some(path) = csv {
                emit_csv_report(&r, &path)?;
            }
            for v in &r.verdicts {
                println!(
                    "{} {}: {:.6} {} {}",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.criterion,
                    v.observed,
                    v.relation.symbol(),
                    v.threshold
                );
            }
            for note in &r.notes {
                println!("note: {note}");
            }
            Ok(Outcome::Verified(r.passed))
        }
        Command::Plot {
            kind,
            inputs,
            overlay,
            bins,
            out,
        } => plot(kind, &inputs, overlay.as_deref(), bins, &out).map(|_| Outcome::Done),
        Command::Laws {
            action: LawsAction::Dump { law, grid, out },
        } => {
            let spec: LawSpec = law.parse()?;
            if spec.is_planar() {
                return Err(RmtError::InvalidInput(format!("'{law}' has no one-dimensional table")));
            }
            emit_csv_law_table(&spec.build_1d()?, grid, &out).map(|_| Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok(Outcome::Done) | Ok(Outcome::Verified(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Verified(false)) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
