//! One entry point per limit law. Each fixes the sampler, normalization,
//! statistic and metric, then replaces the runner's default verdicts with
//! the checks for that law.

use num_complex::Complex64;

use super::config::{EnsembleSpec, ExperimentConfig, LineMetric, ProfileSpec, SpectrumKind, Statistic};
use super::runner::{run_experiment, ExperimentReport, SizeAggregate, Verdict};
use crate::ensembles::{EntryDistribution, Field};
use crate::error::{Result, RmtError};
use crate::laws::{LawSpec, RadiusMode};
use crate::metrics::wasserstein1_circle;
use crate::spectra::EmpiricalMeasure;

pub const DEFAULT_SEED: u64 = 0x5EED_2024;

pub const SEMICIRCLE_KS: f64 = 0.05;
pub const SECOND_MOMENT_TOL: f64 = 0.05;
pub const BAI_YIN_WINDOW: (f64, f64) = (1.85, 2.02);
pub const TW_KS: f64 = 0.05;
pub const MP_KS: f64 = 0.05;
/// Half-width of the window around `(1 − √α)²`.
pub const HARD_EDGE_LOW_TOL: f64 = 0.05;
/// Distance below and above `(1 + √α)²` of the largest-eigenvalue window.
pub const SOFT_EDGE_WINDOW: (f64, f64) = (0.10, 0.05);
pub const EDGE_TRIAL_FRACTION: f64 = 0.9;
pub const QUARTER_KS: f64 = 0.05;
pub const QUARTER_MEAN_TOL: f64 = 0.02;
pub const CIRCULAR_MASS_TOL: f64 = 0.02;
pub const GUMBEL_KS: f64 = 0.08;
pub const ELLIPSE_INSIDE: f64 = 0.99;
pub const ELLIPSE_INNER_TOL: f64 = 0.03;
pub const RIGIDITY_CONSTANT: f64 = 1.0;
pub const RIGIDITY_SEPARATION: f64 = 5.0;
pub const EVEN_SPACING_TOL: f64 = 1e-6;
pub const RING_SLACK: f64 = 0.05;
pub const RING_INSIDE: f64 = 0.995;
pub const RING_BAND_MASS: f64 = 0.01;
pub const COUNTING_REL_TOL: f64 = 0.5;

fn config(
    ensemble: EnsembleSpec,
    sizes: Vec<usize>,
    trials: usize,
    statistic: Statistic,
    law: Option<LawSpec>,
    tolerance: f64,
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        ensemble,
        sizes,
        trials,
        statistic,
        spectrum: SpectrumKind::Eigen,
        law,
        tolerance,
        master_seed: seed,
    }
}

fn with_verdicts(mut report: ExperimentReport, verdicts: Vec<Verdict>) -> ExperimentReport {
    report.verdicts = verdicts;
    report.refresh();
    report
}

fn extra_min(agg: &SizeAggregate, key: &str) -> f64 {
    agg.extras[key].min
}

fn worst_deviation(report: &ExperimentReport, size: usize, key: &str, target: f64) -> f64 {
    report
        .records_for(size)
        .map(|r| (r.extras[key] - target).abs())
        .fold(0.0, f64::max)
}

fn fraction_in_window(report: &ExperimentReport, size: usize, key: &str, lo: f64, hi: f64) -> f64 {
    let (mut hits, mut total) = (0usize, 0usize);
    for r in report.records_for(size) {
        let v = if key == "value" { r.value } else { r.extras[key] };
        total += 1;
        if lo <= v && v <= hi {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

/// Rademacher-entry real Wigner matrix.
pub fn rademacher_wigner() -> EnsembleSpec {
    EnsembleSpec::Wigner {
        offdiag: EntryDistribution::Rademacher,
        diag: None,
    }
}

/// Semicircle law for a Wigner ensemble: per-trial KS of the ESM of `X/√n`
/// and the error of its second moment.
pub fn verify_semicircle(ensemble: EnsembleSpec, n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    if !matches!(ensemble, EnsembleSpec::Goe | EnsembleSpec::Gue | EnsembleSpec::Wigner { .. }) {
        return Err(RmtError::InvalidInput(format!("{} is not a Wigner ensemble", ensemble.label())));
    }
    let label = ensemble.label();
    let cfg = config(
        ensemble,
        vec![n],
        trials,
        Statistic::EsmVsLaw { metric: LineMetric::Ks },
        Some(LawSpec::Semicircle {
            radius_mode: RadiusMode::Wigner2,
        }),
        SEMICIRCLE_KS,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let agg = &report.aggregates[0];
    let verdicts = vec![
        Verdict::at_most(format!("{label} n={n}: max KS to semicircle"), agg.value.max, SEMICIRCLE_KS),
        Verdict::at_most(
            format!("{label} n={n}: max |second moment - 1|"),
            worst_deviation(&report, n, "moment2", 1.0),
            SECOND_MOMENT_TOL,
        ),
    ];
    Ok(with_verdicts(report, verdicts))
}

/// Largest GUE eigenvalue over `√n` at increasing sizes.
pub fn verify_bai_yin(sizes: &[usize], trials: usize, seed: u64) -> Result<ExperimentReport> {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let cfg = config(
        EnsembleSpec::Gue,
        sorted.clone(),
        trials,
        Statistic::Edge,
        None,
        BAI_YIN_WINDOW.1 - BAI_YIN_WINDOW.0,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let medians: Vec<f64> = report.aggregates.iter().map(|a| a.value.median).collect();
    let mut verdicts = Vec::new();
    let steps = medians.windows(2).filter(|w| w[1] > w[0]).count();
    verdicts.push(Verdict::new(
        "median edge increases with n (increasing steps)",
        steps as f64,
        super::runner::Relation::AtLeast,
        (medians.len() - 1) as f64,
    ));
    let last = *sorted.last().expect("sizes validated non-empty");
    let m = *medians.last().unwrap();
    verdicts.push(Verdict::at_least(format!("n={last}: median edge lower bound"), m, BAI_YIN_WINDOW.0));
    verdicts.push(Verdict::at_most(format!("n={last}: median edge upper bound"), m, BAI_YIN_WINDOW.1));
    Ok(with_verdicts(report, verdicts))
}

/// Rescaled largest GUE eigenvalue against `F₂`.
pub fn verify_tw(n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let cfg = config(EnsembleSpec::Gue, vec![n], trials, Statistic::TwFluctuation, None, TW_KS, seed);
    run_experiment(&cfg)
}

/// Wishart `(1/n)XXᵀ` with `p/n = alpha` against the Marchenko–Pastur law.
/// When `alpha > 1` the zero block must have exactly `p − n` eigenvalues.
pub fn verify_mp(alpha: f64, p: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let ensemble = EnsembleSpec::Wishart { ratio: alpha };
    let (_, cols) = ensemble.data_shape(p)?;
    let cfg = config(
        ensemble,
        vec![p],
        trials,
        Statistic::EsmVsLaw { metric: LineMetric::Ks },
        Some(LawSpec::MarchenkoPastur { alpha }),
        MP_KS,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let agg = &report.aggregates[0];
    let mut verdicts = vec![Verdict::at_most(
        format!("alpha={alpha} p={p}: max KS of continuous part"),
        agg.value.max,
        MP_KS,
    )];
    if p > cols {
        let expected = (p - cols) as f64;
        verdicts.push(Verdict::at_most(
            format!("alpha={alpha} p={p}: max |zero count - {expected}|"),
            worst_deviation(&report, p, "atom_count", expected),
            0.0,
        ));
    }
    Ok(with_verdicts(report, verdicts))
}

/// Extreme nonzero Wishart eigenvalues against `(1 ± √alpha)²`.
pub fn verify_hard_edge(alpha: f64, p: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(RmtError::param("alpha", alpha, "hard-edge checks need 0 < alpha < 1"));
    }
    let cfg = config(
        EnsembleSpec::Wishart { ratio: alpha },
        vec![p],
        trials,
        Statistic::Edge,
        Some(LawSpec::MarchenkoPastur { alpha }),
        SOFT_EDGE_WINDOW.1,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let lower = (1.0 - alpha.sqrt()).powi(2);
    let upper = (1.0 + alpha.sqrt()).powi(2);
    let (lo_a, lo_b) = (lower - HARD_EDGE_LOW_TOL, lower + HARD_EDGE_LOW_TOL);
    let (hi_a, hi_b) = (upper - SOFT_EDGE_WINDOW.0, upper + SOFT_EDGE_WINDOW.1);
    let verdicts = vec![
        Verdict::at_least(
            format!("alpha={alpha} p={p}: trials with smallest eigenvalue in [{lo_a:.3}, {lo_b:.3}]"),
            fraction_in_window(&report, p, "min", lo_a, lo_b),
            EDGE_TRIAL_FRACTION,
        ),
        Verdict::at_least(
            format!("alpha={alpha} p={p}: trials with largest eigenvalue in [{hi_a:.3}, {hi_b:.3}]"),
            fraction_in_window(&report, p, "value", hi_a, hi_b),
            EDGE_TRIAL_FRACTION,
        ),
    ];
    Ok(with_verdicts(report, verdicts))
}

/// Singular values of real Ginibre over `√n` against the quarter-circle law.
pub fn verify_quarter_circle(n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let mut cfg = config(
        EnsembleSpec::Ginibre { field: Field::Real },
        vec![n],
        trials,
        Statistic::EsmVsLaw { metric: LineMetric::Ks },
        Some(LawSpec::QuarterCircle),
        QUARTER_KS,
        seed,
    );
    cfg.spectrum = SpectrumKind::Singular;
    let report = run_experiment(&cfg)?;
    let mean = 8.0 / (3.0 * std::f64::consts::PI);
    let verdicts = vec![
        Verdict::at_most(format!("n={n}: max KS to quarter circle"), report.aggregates[0].value.max, QUARTER_KS),
        Verdict::at_most(
            format!("n={n}: max |mean - 8/(3 pi)|"),
            worst_deviation(&report, n, "moment1", mean),
            QUARTER_MEAN_TOL,
        ),
    ];
    Ok(with_verdicts(report, verdicts))
}

/// Rademacher-entry square i.i.d. matrix.
pub fn rademacher_iid() -> EnsembleSpec {
    EnsembleSpec::Iid {
        entry: EntryDistribution::Rademacher,
    }
}

/// Disc masses of `X/√n` at radii 1/4, 1/2, 3/4 and 1 against `r²`.
pub fn verify_circular(ensemble: EnsembleSpec, n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let label = ensemble.label();
    let cfg = config(
        ensemble,
        vec![n],
        trials,
        Statistic::EsmVsLaw { metric: LineMetric::Ks },
        Some(LawSpec::UniformDisc),
        CIRCULAR_MASS_TOL,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let v = Verdict::at_most(
        format!("{label} n={n}: max |disc mass - r^2|"),
        report.aggregates[0].value.max,
        CIRCULAR_MASS_TOL,
    );
    Ok(with_verdicts(report, vec![v]))
}

/// Elliptical law: nearly all eigenvalues inside the slightly dilated
/// ellipse, and the mass of the ellipse shrunk to 0.6 against 0.36.
pub fn verify_elliptical(rho: f64, n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let cfg = config(
        EnsembleSpec::Elliptical { rho },
        vec![n],
        trials,
        Statistic::EsmVsLaw { metric: LineMetric::Ks },
        Some(LawSpec::UniformEllipse { rho }),
        1.0 - ELLIPSE_INSIDE,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let agg = &report.aggregates[0];
    let verdicts = vec![
        Verdict::at_least(
            format!("rho={rho} n={n}: min fraction inside 1.05 x ellipse"),
            extra_min(agg, "inside_1.05"),
            ELLIPSE_INSIDE,
        ),
        Verdict::at_most(
            format!("rho={rho} n={n}: max |mass of 0.6 x ellipse - 0.36|"),
            worst_deviation(&report, n, "inside_0.6", 0.36),
            ELLIPSE_INNER_TOL,
        ),
    ];
    Ok(with_verdicts(report, verdicts))
}

/// Evenly spaced singular values `1 + 5k/n`.
pub fn linear_profile() -> ProfileSpec {
    ProfileSpec::Linear { start: 1.0, span: 5.0 }
}

/// Half the singular values at 1, half at 3.
pub fn gapped_profile() -> ProfileSpec {
    ProfileSpec::Gapped {
        low: 1.0,
        high: 3.0,
        fraction: 0.5,
    }
}

/// `UΣV*` with Haar `U, V`: containment in the single ring, the Weyl–Horn
/// inequalities, and at least 1% of the moduli in each of 10 radial bands.
pub fn verify_single_ring(profile: ProfileSpec, n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let cfg = config(
        EnsembleSpec::PrescribedSingular { profile },
        vec![n],
        trials,
        Statistic::RingContainment { slack: RING_SLACK },
        None,
        1.0 - RING_INSIDE,
        seed,
    );
    let report = run_experiment(&cfg)?;
    let agg = &report.aggregates[0];
    let verdicts = vec![
        Verdict::at_least(format!("n={n}: min fraction of moduli in the ring"), agg.value.min, RING_INSIDE),
        Verdict::at_least(format!("n={n}: Weyl-Horn holds on every trial"), extra_min(agg, "weyl_horn"), 1.0),
        Verdict::at_least(
            format!("n={n}: min mass of a radial band"),
            extra_min(agg, "band_min_fraction"),
            RING_BAND_MASS,
        ),
    ];
    Ok(with_verdicts(report, verdicts))
}

/// Haar unitary rigidity: median `W₁·n/√log n` at each size, a control with
/// i.i.d. uniform phases at `control_n`, and the evenly spaced self-test.
pub fn verify_rigidity(sizes: &[usize], control_n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let cfg = config(
        EnsembleSpec::HaarUnitary,
        sizes.to_vec(),
        trials,
        Statistic::RigidityW1,
        None,
        RIGIDITY_CONSTANT,
        seed,
    );
    let mut report = run_experiment(&cfg)?;
    let mut verdicts: Vec<Verdict> = report
        .aggregates
        .iter()
        .map(|a| {
            Verdict::at_most(
                format!("n={}: median W1*n/sqrt(log n)", a.size),
                a.value.median,
                RIGIDITY_CONSTANT,
            )
        })
        .collect();

    let control_cfg = ExperimentConfig {
        ensemble: EnsembleSpec::UniformPhases,
        sizes: vec![control_n],
        ..cfg.clone()
    };
    let control = run_experiment(&control_cfg)?;
    let haar_at = match report.aggregate(control_n) {
        Some(a) => a.extras["w1"].median,
        None => {
            let extra = run_experiment(&ExperimentConfig {
                sizes: vec![control_n],
                ..cfg.clone()
            })?;
            extra.aggregates[0].extras["w1"].median
        }
    };
    let ratio = control.aggregates[0].extras["w1"].median / haar_at;
    verdicts.push(Verdict::at_least(
        format!("n={control_n}: median W1 of iid phases / median W1 of Haar"),
        ratio,
        RIGIDITY_SEPARATION,
    ));
    report
        .notes
        .push(format!("iid-phase control at n={control_n}: median W1 {:.6e}", control.aggregates[0].extras["w1"].median));

    for &n in sizes {
        let even = EmpiricalMeasure::from_complex(
            (0..n)
                .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
                .collect(),
        )?;
        let w = wasserstein1_circle(&even)?.value;
        verdicts.push(Verdict::at_most(
            format!("n={n}: |W1(evenly spaced) - pi/(2n)|"),
            (w - std::f64::consts::PI / (2.0 * n as f64)).abs(),
            EVEN_SPACING_TOL,
        ));
    }
    report.wall_time_s += control.wall_time_s;
    Ok(with_verdicts(report, verdicts))
}

/// Centered and scaled complex Ginibre spectral radius against the Gumbel law.
pub fn verify_gumbel(n: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let cfg = config(
        EnsembleSpec::Ginibre { field: Field::Complex },
        vec![n],
        trials,
        Statistic::GumbelFluctuation,
        None,
        GUMBEL_KS,
        seed,
    );
    run_experiment(&cfg)
}

/// Eigenvalues of complex Ginibre over `√n` in the disc of radius
/// `n^{−1/2+ε}`, against the uniform-disc count `n·r²`. Expected counts
/// below 5 are reported without a verdict.
pub fn counting_local(n: usize, epsilon: f64, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let cfg = config(
        EnsembleSpec::Ginibre { field: Field::Complex },
        vec![n],
        trials,
        Statistic::CountingLocal { epsilon },
        Some(LawSpec::UniformDisc),
        COUNTING_REL_TOL,
        seed,
    );
    run_experiment(&cfg)
}

/// Dispatches a law name to its verifier with the default sizes of each
/// suite. `param` is the law's scalar parameter where it has one.
pub fn verify_by_name(name: &str, param: Option<f64>, n: Option<usize>, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let size = |d: usize| n.unwrap_or(d);
    match name {
        "semicircle" => {
            let mut r = verify_semicircle(EnsembleSpec::Gue, size(1000), trials, seed)?;
            r.merge(verify_semicircle(rademacher_wigner(), size(1000), trials, seed)?);
            Ok(r)
        }
        "bai_yin" => match n {
            Some(n) => verify_bai_yin(&[n / 4, n / 2, n], trials, seed),
            None => verify_bai_yin(&[200, 400, 800], trials, seed),
        },
        "tracy_widom" | "tw" => verify_tw(size(200), trials, seed),
        "mp" | "marchenko_pastur" => verify_mp(param.unwrap_or(0.25), size(500), trials, seed),
        "hard_edge" => verify_hard_edge(param.unwrap_or(0.25), size(500), trials, seed),
        "quarter_circle" => verify_quarter_circle(size(1000), trials, seed),
        "circular" => {
            let mut r = verify_circular(EnsembleSpec::Ginibre { field: Field::Complex }, size(1000), trials, seed)?;
            r.merge(verify_circular(rademacher_iid(), size(1000), trials, seed)?);
            Ok(r)
        }
        "elliptical" => verify_elliptical(param.unwrap_or(0.5), size(1000), trials, seed),
        "single_ring" => verify_single_ring(linear_profile(), size(1000), trials, seed),
        "single_ring_gapped" => verify_single_ring(gapped_profile(), size(1000), trials, seed),
        "rigidity" => match n {
            Some(n) => verify_rigidity(&[n], n, trials, seed),
            None => verify_rigidity(&[100, 200, 400, 800], 400, trials, seed),
        },
        "gumbel" => verify_gumbel(size(500), trials, seed),
        "counting_local" => counting_local(size(1600), param.unwrap_or(0.25), trials, seed),
        other => Err(RmtError::InvalidInput(format!("unknown law '{other}'"))),
    }
}

pub const VERIFY_NAMES: &[&str] = &[
    "semicircle",
    "bai_yin",
    "tracy_widom",
    "mp",
    "hard_edge",
    "quarter_circle",
    "circular",
    "elliptical",
    "single_ring",
    "single_ring_gapped",
    "rigidity",
    "gumbel",
    "counting_local",
];
