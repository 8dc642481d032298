use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EnsembleSpec, ExperimentConfig, LineMetric, ProfileSpec, SpectrumKind, Statistic};
use crate::ensembles::{
    sample_elliptical, sample_ginibre, sample_goe, sample_gue, sample_haar_unitary, sample_iid,
    sample_prescribed_singular, sample_wigner, sample_wishart, weyl_horn_check, DenseMatrix, EntryDistribution, Field,
    RngStream,
};
use crate::error::{Result, RmtError};
use crate::laws::{
    gumbel, rider_y, single_ring_radii, tracy_widom_law, uniform, uniform_disc, Law1D, Law2D, RingMeasure, RingRadii,
};
use crate::metrics::{ks_distance, wasserstein1_circle, wasserstein1_line};
use crate::spectra::{
    eigvals_general, eigvals_hermitian, eigvec_delocalization, singular_values, EmpiricalMeasure, Region,
};

pub const REPORT_SCHEMA: &str = "rmt-report/1";

pub const PREAMBLE: &str = "Every figure in this report is a finite-n Monte Carlo measurement of distance \
to a limiting law. Simulation at fixed sizes cannot tell modes of convergence apart, so verdicts only \
state whether the observed proximity is within the recorded tolerance.";

/// Probe scalings of the support used for planar laws.
const PLANAR_PROBES: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
/// Relative eigenvalue threshold below which a Wishart eigenvalue counts as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-8;
/// Expected local counts below this are reported without a verdict.
const MICROSCOPIC_COUNT: f64 = 5.0;
const RING_BANDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub size: usize,
    pub trial: usize,
    /// RNG stream id under the master seed.
    pub stream: u64,
    pub value: f64,
    #[serde(default)]
    pub extras: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// 5%, 25%, 50%, 75% and 95% empirical quantiles.
    pub quantiles: [f64; 5],
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let i = ((v.len() - 1) as f64 * p).round() as usize;
            v[i]
        };
        let median = if v.len() % 2 == 1 {
            v[v.len() / 2]
        } else {
            0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
        };
        Summary {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median,
            min: v[0],
            max: v[v.len() - 1],
            quantiles: [q(0.05), q(0.25), q(0.5), q(0.75), q(0.95)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeAggregate {
    pub size: usize,
    pub trials: usize,
    pub value: Summary,
    pub extras: BTreeMap<String, Summary>,
    /// KS and W₁ of the per-trial values against the reference law, for
    /// fluctuation statistics.
    #[serde(default)]
    pub distances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

impl Relation {
    pub fn holds(self, observed: f64, threshold: f64) -> bool {
        match self {
            Relation::AtMost => observed <= threshold,
            Relation::AtLeast => observed >= threshold,
            Relation::Equal => observed == threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Equal => "==",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        match s {
            "<=" => Some(Relation::AtMost),
            ">=" => Some(Relation::AtLeast),
            "==" => Some(Relation::Equal),
            _ => None,
        }
    }
}

/// One pass/fail check: `observed relation threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub observed: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(criterion: impl Into<String>, observed: f64, relation: Relation, threshold: f64) -> Verdict {
        Verdict {
            criterion: criterion.into(),
            observed,
            relation,
            threshold,
            pass: relation.holds(observed, threshold),
        }
    }

    pub fn at_most(criterion: impl Into<String>, observed: f64, threshold: f64) -> Verdict {
        Verdict::new(criterion, observed, Relation::AtMost, threshold)
    }

    pub fn at_least(criterion: impl Into<String>, observed: f64, threshold: f64) -> Verdict {
        Verdict::new(criterion, observed, Relation::AtLeast, threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub preamble: String,
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<SizeAggregate>,
    pub verdicts: Vec<Verdict>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub passed: bool,
    pub wall_time_s: f64,
}

impl ExperimentReport {
    pub fn push_verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
        self.refresh();
    }

    /// Recomputes every `pass` flag and the overall verdict from the
    /// observed values and thresholds alone.
    pub fn refresh(&mut self) {
        for v in &mut self.verdicts {
            v.pass = v.relation.holds(v.observed, v.threshold);
        }
        self.passed = self.verdicts.iter().all(|v| v.pass);
    }

    /// Everything except the wall-clock time, which is the only field that
    /// depends on the machine.
    pub fn without_timing(&self) -> ExperimentReport {
        ExperimentReport {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }

    pub fn aggregate(&self, size: usize) -> Option<&SizeAggregate> {
        self.aggregates.iter().find(|a| a.size == size)
    }

    pub fn records_for(&self, size: usize) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(move |r| r.size == size)
    }

    pub fn merge(&mut self, other: ExperimentReport) {
        self.records.extend(other.records);
        self.aggregates.extend(other.aggregates);
        self.verdicts.extend(other.verdicts);
        self.notes.extend(other.notes);
        self.wall_time_s += other.wall_time_s;
        self.refresh();
    }
}

/// Stream id of `trial` at the `size_index`-th size.
pub fn stream_id(size_index: usize, trial: usize) -> u64 {
    ((size_index as u64) << 32) | trial as u64
}

pub fn sample_ensemble(ensemble: &EnsembleSpec, n: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    match ensemble {
        EnsembleSpec::Goe => sample_goe(n, rng),
        EnsembleSpec::Gue => sample_gue(n, rng),
        EnsembleSpec::Wigner { offdiag, diag } => {
            sample_wigner(n, offdiag, diag.as_ref().unwrap_or(offdiag), Field::Real, rng)
        }
        EnsembleSpec::Wishart { ratio } => {
            let (p, cols) = EnsembleSpec::Wishart { ratio: *ratio }.data_shape(n)?;
            sample_wishart(p, cols, None, rng)
        }
        EnsembleSpec::Ginibre { field } => sample_ginibre(n, *field, rng),
        EnsembleSpec::Iid { entry } => sample_iid(n, n, entry, rng),
        EnsembleSpec::Elliptical { rho } => sample_elliptical(n, *rho, &EntryDistribution::standard_gaussian(), rng),
        EnsembleSpec::HaarUnitary => sample_haar_unitary(n, rng),
        EnsembleSpec::UniformPhases => {
            let mut m = DenseMatrix::zeros(n, n, Field::Complex);
            for k in 0..n {
                m.set(k, k, Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.uniform()));
            }
            Ok(m)
        }
        EnsembleSpec::PrescribedSingular { profile } => sample_prescribed_singular(&profile.build(n)?, rng),
    }
}

/// Scale that brings the spectrum of the sampled matrix to the scale of its limit law.
fn spectral_scale(ensemble: &EnsembleSpec, kind: SpectrumKind, n: usize) -> f64 {
    let root = 1.0 / (n as f64).sqrt();
    match (ensemble, kind) {
        (EnsembleSpec::Wishart { .. }, SpectrumKind::Eigen) => 1.0,
        (EnsembleSpec::HaarUnitary | EnsembleSpec::UniformPhases | EnsembleSpec::PrescribedSingular { .. }, _) => 1.0,
        _ => root,
    }
}

/// Normalized spectrum as an empirical measure.
pub(crate) fn normalized_measure(
    ensemble: &EnsembleSpec,
    kind: SpectrumKind,
    n: usize,
    m: &DenseMatrix,
) -> Result<EmpiricalMeasure> {
    let s = spectral_scale(ensemble, kind, n);
    match kind {
        SpectrumKind::Singular => {
            EmpiricalMeasure::from_real(singular_values(m)?.real_values().unwrap().iter().map(|x| x * s).collect())
        }
        SpectrumKind::Eigen if ensemble.is_hermitian() => {
            EmpiricalMeasure::from_real(eigvals_hermitian(m)?.real_values().unwrap().iter().map(|x| x * s).collect())
        }
        SpectrumKind::Eigen => {
            let values = match ensemble {
                // diagonal: the eigenvalues are the entries
                EnsembleSpec::UniformPhases => (0..n).map(|k| m.get(k, k)).collect(),
                _ => eigvals_general(m)?.complex_values().unwrap().to_vec(),
            };
            EmpiricalMeasure::from_complex(values.into_iter().map(|z| z * s).collect())
        }
    }
}

/// Objects shared by every trial of one size.
struct Context {
    law1d: Option<Law1D>,
    law2d: Option<Law2D>,
    ring: Option<RingRadii>,
    profile: Option<crate::ensembles::SingularProfile>,
}

fn build_context(cfg: &ExperimentConfig, n: usize) -> Result<Context> {
    let mut ctx = Context {
        law1d: None,
        law2d: None,
        ring: None,
        profile: None,
    };
    match &cfg.law {
        Some(spec) if spec.is_planar() => ctx.law2d = Some(spec.build_2d()?),
        Some(spec) => ctx.law1d = Some(spec.build_1d()?),
        None => {}
    }
    match cfg.statistic {
        Statistic::TwFluctuation => ctx.law1d = Some(tracy_widom_law()?),
        Statistic::GumbelFluctuation => ctx.law1d = Some(gumbel()),
        Statistic::CountingLocal { .. } if ctx.law2d.is_none() => ctx.law2d = Some(uniform_disc()),
        _ => {}
    }
    if let EnsembleSpec::PrescribedSingular { profile } = &cfg.ensemble {
        let p = profile.build(n)?;
        let measure = match profile {
            // limit of the evenly spaced profile
            ProfileSpec::Linear { start, span } => RingMeasure::Continuous(uniform(*start, start + span)?),
            _ => RingMeasure::from_profile(&p),
        };
        ctx.ring = Some(single_ring_radii(&measure)?);
        ctx.profile = Some(p);
    }
    if matches!(cfg.statistic, Statistic::RingContainment { .. }) && ctx.ring.is_none() {
        return Err(RmtError::InvalidInput(
            "ring containment needs a prescribed-singular-value ensemble".into(),
        ));
    }
    if matches!(cfg.statistic, Statistic::EsmVsLaw { .. }) && ctx.law1d.is_none() && ctx.law2d.is_none() {
        return Err(RmtError::InvalidInput("esm_vs_law needs a law".into()));
    }
    Ok(ctx)
}

fn fraction(points: &[Complex64], pred: impl Fn(Complex64) -> bool) -> f64 {
    points.iter().filter(|z| pred(**z)).count() as f64 / points.len() as f64
}

fn run_trial(cfg: &ExperimentConfig, ctx: &Context, n: usize, size_index: usize, trial: usize) -> Result<TrialRecord> {
    let stream = stream_id(size_index, trial);
    let mut rng = RngStream::new(cfg.master_seed, stream);
    let m = sample_ensemble(&cfg.ensemble, n, &mut rng)?;
    let mut extras = BTreeMap::new();
    let value = match &cfg.statistic {
        Statistic::Delocalization => {
            // needs eigenvectors rather than the spectrum
            let nf = n as f64;
            eigvec_delocalization(&m)? * (nf / nf.ln()).sqrt()
        }
        stat => {
            let mu = normalized_measure(&cfg.ensemble, cfg.spectrum, n, &m)?;
            trial_value(stat, ctx, &cfg.ensemble, n, &mu, &mut extras)?
        }
    };
    Ok(TrialRecord {
        size: n,
        trial,
        stream,
        value,
        extras,
    })
}

fn trial_value(
    stat: &Statistic,
    ctx: &Context,
    ensemble: &EnsembleSpec,
    n: usize,
    mu: &EmpiricalMeasure,
    extras: &mut BTreeMap<String, f64>,
) -> Result<f64> {
    let nf = n as f64;
    match (stat, mu) {
        (Statistic::EsmVsLaw { metric }, EmpiricalMeasure::Real(v)) => {
            let law = ctx
                .law1d
                .as_ref()
                .ok_or_else(|| RmtError::InvalidInput("a real spectrum needs a law on the line".into()))?;
            let top = v[v.len() - 1].abs().max(v[0].abs());
            extras.insert("min".into(), v[0]);
            extras.insert("max".into(), v[v.len() - 1]);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            extras.insert("moment1".into(), mean);
            extras.insert("moment2".into(), v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64);
            let (measure, target) = match law.atom() {
                Some(atom) if law.continuous_support().0 > atom.location => {
                    // split off the eigenvalues that belong to the atom
                    let cut = ZERO_EIGENVALUE_TOL * top.max(f64::MIN_POSITIVE);
                    let near = v.iter().filter(|x| (*x - atom.location).abs() <= cut).count();
                    extras.insert("atom_count".into(), near as f64);
                    let rest: Vec<f64> = v.iter().copied().filter(|x| (*x - atom.location).abs() > cut).collect();
                    if let Some(first) = rest.first() {
                        extras.insert("min_nonzero".into(), *first);
                    }
                    if rest.is_empty() {
                        return Err(RmtError::InvalidInput("spectrum is entirely at the atom".into()));
                    }
                    (EmpiricalMeasure::from_real(rest)?, law.continuous_part()?)
                }
                _ => (mu.clone(), law.clone()),
            };
            let ks = ks_distance(&measure, &target)?.value;
            let w1 = wasserstein1_line(&measure, &target)?.value;
            extras.insert("ks".into(), ks);
            extras.insert("w1".into(), w1);
            Ok(match metric {
                LineMetric::Ks => ks,
                LineMetric::W1 => w1,
            })
        }
        (Statistic::EsmVsLaw { .. }, EmpiricalMeasure::Complex(z)) => {
            let law = ctx
                .law2d
                .as_ref()
                .ok_or_else(|| RmtError::InvalidInput("a complex spectrum needs a planar law".into()))?;
            let (ax, ay) = law.semi_axes();
            let inside = |s: f64| move |w: Complex64| (w.re / (s * ax)).powi(2) + (w.im / (s * ay)).powi(2) <= 1.0;
            let mut worst = 0.0f64;
            for s in PLANAR_PROBES {
                let f = fraction(z, inside(s));
                extras.insert(format!("mass_{s}"), f);
                worst = worst.max((f - s * s).abs());
            }
            extras.insert("inside_1.05".into(), fraction(z, inside(1.05)));
            extras.insert("inside_0.6".into(), fraction(z, inside(0.6)));
            extras.insert("max_modulus".into(), z.iter().map(|w| w.norm()).fold(0.0, f64::max));
            Ok(worst)
        }
        (Statistic::Edge, EmpiricalMeasure::Real(v)) => {
            extras.insert("min".into(), v[0]);
            Ok(v[v.len() - 1])
        }
        (Statistic::Edge, EmpiricalMeasure::Complex(z)) => Ok(z.iter().map(|w| w.norm()).fold(0.0, f64::max)),
        (Statistic::TwFluctuation, EmpiricalMeasure::Real(v)) => {
            let top = v[v.len() - 1];
            extras.insert("lambda_max".into(), top);
            Ok(nf.powf(2.0 / 3.0) * (top - 2.0))
        }
        (Statistic::GumbelFluctuation, EmpiricalMeasure::Complex(z)) => {
            // measure is G/√n; the centering uses the radius of G itself
            let r = z.iter().map(|w| w.norm()).fold(0.0, f64::max) / spectral_scale(ensemble, SpectrumKind::Eigen, n);
            extras.insert("spectral_radius".into(), r);
            rider_y(r, n)
        }
        (Statistic::RingContainment { slack }, EmpiricalMeasure::Complex(z)) => {
            let ring = ctx.ring.expect("checked when the context was built");
            let lo = (1.0 - slack) * ring.a;
            let hi = (1.0 + slack) * ring.b;
            let ok = ctx.profile.as_ref().map_or(Ok(true), |p| weyl_horn_check(p, z))?;
            extras.insert("weyl_horn".into(), if ok { 1.0 } else { 0.0 });
            extras.insert("ring_a".into(), ring.a);
            extras.insert("ring_b".into(), ring.b);
            let width = (ring.b - ring.a) / RING_BANDS as f64;
            let mut least = 1.0f64;
            for k in 0..RING_BANDS {
                let (r0, r1) = (ring.a + k as f64 * width, ring.a + (k + 1) as f64 * width);
                least = least.min(fraction(z, |w| r0 <= w.norm() && w.norm() < r1));
            }
            extras.insert("band_min_fraction".into(), least);
            Ok(fraction(z, |w| lo <= w.norm() && w.norm() <= hi))
        }
        (Statistic::CountingLocal { epsilon }, EmpiricalMeasure::Complex(z)) => {
            let r = nf.powf(-0.5 + epsilon);
            let law = ctx.law2d.as_ref().expect("disc law in context");
            let expected = nf
                * law.region_mass(&Region::Disc {
                    center: Complex64::new(0.0, 0.0),
                    radius: r,
                })?;
            let count = z.iter().filter(|w| w.norm() <= r).count() as f64;
            extras.insert("expected".into(), expected);
            extras.insert("ratio".into(), count / expected);
            Ok(count)
        }
        (Statistic::RigidityW1, EmpiricalMeasure::Complex(_)) => {
            let w1 = wasserstein1_circle(mu)?.value;
            extras.insert("w1".into(), w1);
            Ok(w1 * nf / nf.ln().sqrt())
        }
        (stat, mu) => Err(RmtError::InvalidInput(format!(
            "statistic {} does not apply to a {} spectrum of {}",
            stat.name(),
            if mu.real_support().is_some() { "real" } else { "complex" },
            ensemble.label()
        ))),
    }
}

fn aggregate(cfg: &ExperimentConfig, ctx: &Context, n: usize, records: &[TrialRecord]) -> Result<SizeAggregate> {
    let values: Vec<f64> = records.iter().map(|r| r.value).collect();
    let mut keys: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in records {
        for (k, v) in &r.extras {
            keys.entry(k.clone()).or_default().push(*v);
        }
    }
    let mut distances = BTreeMap::new();
    if matches!(cfg.statistic, Statistic::TwFluctuation | Statistic::GumbelFluctuation) {
        let law = ctx.law1d.as_ref().expect("fluctuation law in context");
        let mu = EmpiricalMeasure::from_real(values.clone())?;
        distances.insert("ks".into(), ks_distance(&mu, law)?.value);
        distances.insert("w1".into(), wasserstein1_line(&mu, law)?.value);
    }
    Ok(SizeAggregate {
        size: n,
        trials: records.len(),
        value: Summary::of(&values),
        extras: keys.into_iter().map(|(k, v)| (k, Summary::of(&v))).collect(),
        distances,
    })
}

fn default_verdicts(cfg: &ExperimentConfig, ctx: &Context, agg: &SizeAggregate, records: &[TrialRecord], notes: &mut Vec<String>) -> Vec<Verdict> {
    let n = agg.size;
    let tol = cfg.tolerance;
    match cfg.statistic {
        Statistic::EsmVsLaw { .. } => vec![Verdict::at_most(format!("n={n}: max distance to law"), agg.value.max, tol)],
        Statistic::Edge => match &ctx.law1d {
            Some(law) => vec![Verdict::at_most(
                format!("n={n}: |median edge - {}|", law.support().1),
                (agg.value.median - law.support().1).abs(),
                tol,
            )],
            None => Vec::new(),
        },
        Statistic::TwFluctuation | Statistic::GumbelFluctuation => {
            vec![Verdict::at_most(format!("n={n}: KS of fluctuations to limit law"), agg.distances["ks"], tol)]
        }
        Statistic::RingContainment { .. } => {
            vec![Verdict::at_least(format!("n={n}: min fraction inside the ring"), agg.value.min, 1.0 - tol)]
        }
        Statistic::CountingLocal { .. } => {
            let expected = records[0].extras["expected"];
            if expected < MICROSCOPIC_COUNT {
                notes.push(format!(
                    "n={n}: expected local count {expected:.3} is microscopic; reported without a verdict"
                ));
                return Vec::new();
            }
            let (lo, hi) = (expected * (1.0 - tol), expected / (1.0 - tol));
            let hits = records.iter().filter(|r| lo <= r.value && r.value <= hi).count();
            vec![Verdict::at_least(
                format!("n={n}: fraction of trials with count in [{lo:.2}, {hi:.2}]"),
                hits as f64 / records.len() as f64,
                0.9,
            )]
        }
        Statistic::RigidityW1 | Statistic::Delocalization => {
            vec![Verdict::at_most(format!("n={n}: median {}", cfg.statistic.name()), agg.value.median, tol)]
        }
    }
}

/// Runs every trial at every size, aggregates, and applies the default
/// verdict for the statistic.
///
/// Trial `t` at the `i`-th size draws from stream `(i << 32) | t` under the
/// master seed, and records are collected in trial order, so the report does
/// not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut records = Vec::with_capacity(cfg.trials * cfg.sizes.len());
    let mut aggregates = Vec::new();
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for (si, &n) in cfg.sizes.iter().enumerate() {
        let ctx = build_context(cfg, n)?;
        let batch: Vec<TrialRecord> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                run_trial(cfg, &ctx, n, si, t).map_err(|e| RmtError::Trial {
                    trial: t as u64,
                    source: Box::new(e),
                })
            })
            .collect::<Result<_>>()?;
        let agg = aggregate(cfg, &ctx, n, &batch)?;
        verdicts.extend(default_verdicts(cfg, &ctx, &agg, &batch, &mut notes));
        aggregates.push(agg);
        records.extend(batch);
    }
    let mut report = ExperimentReport {
        schema: REPORT_SCHEMA.into(),
        preamble: PREAMBLE.into(),
        config: cfg.clone(),
        records,
        aggregates,
        verdicts,
        notes,
        passed: false,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    report.refresh();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{LawSpec, RadiusMode};

    fn cfg(ensemble: EnsembleSpec, sizes: Vec<usize>, trials: usize, statistic: Statistic) -> ExperimentConfig {
        ExperimentConfig {
            ensemble,
            sizes,
            trials,
            statistic,
            spectrum: SpectrumKind::Eigen,
            law: None,
            tolerance: 0.05,
            master_seed: 20240601,
        }
    }

    #[test]
    fn gue_edge_mean() {
        let mut c = cfg(EnsembleSpec::Gue, vec![400], 50, Statistic::Edge);
        c.law = Some(LawSpec::Semicircle {
            radius_mode: RadiusMode::Wigner2,
        });
        let r = run_experiment(&c).unwrap();
        let mean = r.aggregates[0].value.mean;
        assert!((1.9..=2.05).contains(&mean), "{mean}");
    }

    #[test]
    fn wishart_quarter_ratio_against_mp() {
        let mut c = cfg(
            EnsembleSpec::Wishart { ratio: 0.25 },
            vec![500],
            1,
            Statistic::EsmVsLaw { metric: LineMetric::Ks },
        );
        c.law = Some(LawSpec::MarchenkoPastur { alpha: 0.25 });
        let r = run_experiment(&c).unwrap();
        assert!(r.records[0].value <= 0.05, "{}", r.records[0].value);
        assert!(r.passed);
    }

    #[test]
    fn same_seed_same_report() {
        let mut c = cfg(EnsembleSpec::Goe, vec![30, 40], 1, Statistic::EsmVsLaw { metric: LineMetric::W1 });
        c.law = Some(LawSpec::Semicircle {
            radius_mode: RadiusMode::Wigner2,
        });
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
        c.master_seed += 1;
        assert_ne!(run_experiment(&c).unwrap().records, a.records);
    }

    #[test]
    fn report_is_independent_of_thread_count() {
        let mut c = cfg(EnsembleSpec::Gue, vec![60], 12, Statistic::TwFluctuation);
        c.tolerance = 1.0;
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| run_experiment(&c)).unwrap();
        let b = three.install(|| run_experiment(&c)).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn refuses_before_allocating() {
        let c = cfg(EnsembleSpec::Gue, vec![2001], 1, Statistic::Edge);
        assert!(matches!(run_experiment(&c), Err(RmtError::ResourceLimit { limit: "matrix size n", .. })));
        let c = cfg(EnsembleSpec::Gue, vec![10], 10_001, Statistic::Edge);
        assert!(matches!(run_experiment(&c), Err(RmtError::ResourceLimit { limit: "trials", .. })));
        let c = cfg(EnsembleSpec::Wishart { ratio: 0.05 }, vec![2000], 1, Statistic::Edge);
        assert!(matches!(run_experiment(&c), Err(RmtError::ResourceLimit { limit: "p*n", .. })));
    }

    #[test]
    fn invalid_configs() {
        let mut c = cfg(EnsembleSpec::Gue, vec![10], 0, Statistic::Edge);
        assert!(run_experiment(&c).is_err());
        c.trials = 1;
        c.sizes.clear();
        assert!(run_experiment(&c).is_err());
        let c = cfg(EnsembleSpec::Gue, vec![10], 1, Statistic::EsmVsLaw { metric: LineMetric::Ks });
        assert!(run_experiment(&c).is_err(), "missing law");
        let c = cfg(EnsembleSpec::Gue, vec![10], 1, Statistic::RigidityW1);
        assert!(matches!(run_experiment(&c), Err(RmtError::Trial { trial: 0, .. })));
    }

    #[test]
    fn verdicts_rederive_from_observations() {
        let mut c = cfg(EnsembleSpec::Goe, vec![50], 2, Statistic::EsmVsLaw { metric: LineMetric::Ks });
        c.law = Some(LawSpec::Semicircle {
            radius_mode: RadiusMode::Wigner2,
        });
        c.tolerance = 1e-6;
        let mut r = run_experiment(&c).unwrap();
        assert!(!r.passed);
        r.verdicts[0].threshold = 1.0;
        r.refresh();
        assert!(r.passed);
    }

    #[test]
    fn summary_quantiles() {
        let s = Summary::of(&[5.0, 1.0, 3.0, 2.0, 4.0]);
        assert_eq!((s.median, s.min, s.max, s.mean), (3.0, 1.0, 5.0, 3.0));
        assert_eq!(Summary::of(&[1.0, 2.0]).median, 1.5);
    }
}
