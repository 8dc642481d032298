use serde::{Deserialize, Serialize};

use crate::ensembles::{EntryDistribution, Field, SingularProfile};
use crate::error::{Result, RmtError};
use crate::laws::LawSpec;

/// Largest matrix side the harness will allocate.
pub const MAX_N: usize = 2000;
pub const MAX_TRIALS: usize = 10_000;
/// Largest `p·n` for rectangular (Wishart) data.
pub const MAX_PN: f64 = 4e7;
/// Per-experiment working-set ceiling, in bytes.
pub const MAX_BYTES: f64 = 1e9;

/// Singular-value profile of `n` entries, generated per size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileSpec {
    /// `σ_k = start + span·k/n`, `k = 1..=n`.
    Linear { start: f64, span: f64 },
    /// The first `⌈fraction·n⌉` entries equal `high`, the rest `low`.
    Gapped { low: f64, high: f64, fraction: f64 },
    /// Fixed list; only valid for the matching size.
    Explicit { sigmas: Vec<f64> },
}

impl ProfileSpec {
    pub fn build(&self, n: usize) -> Result<SingularProfile> {
        match self {
            ProfileSpec::Linear { start, span } => {
                SingularProfile::from_unsorted((1..=n).map(|k| start + span * k as f64 / n as f64).collect())
            }
            ProfileSpec::Gapped { low, high, fraction } => {
                if !(0.0..=1.0).contains(fraction) {
                    return Err(RmtError::param("fraction", *fraction, "must lie in [0, 1]"));
                }
                let top = (fraction * n as f64).ceil() as usize;
                SingularProfile::from_unsorted((0..n).map(|k| if k < top { *high } else { *low }).collect())
            }
            ProfileSpec::Explicit { sigmas } => {
                if sigmas.len() != n {
                    return Err(RmtError::InvalidProfile(format!(
                        "explicit profile has {} entries but the experiment size is {n}",
                        sigmas.len()
                    )));
                }
                SingularProfile::from_unsorted(sigmas.clone())
            }
        }
    }
}

/// Which random matrix a trial draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleSpec {
    Goe,
    Gue,
    /// Real symmetric Wigner matrix; the diagonal law defaults to the
    /// off-diagonal one.
    Wigner {
        offdiag: EntryDistribution,
        #[serde(default)]
        diag: Option<EntryDistribution>,
    },
    /// `(1/n)XXᵀ` with `X` of size `p × n`, where `p` is the experiment size
    /// and `n = round(p/ratio)`.
    Wishart { ratio: f64 },
    Ginibre { field: Field },
    /// Square matrix with i.i.d. entries of the given law.
    Iid { entry: EntryDistribution },
    Elliptical { rho: f64 },
    HaarUnitary,
    /// `diag(e^{iθₖ})` with i.i.d. uniform angles.
    UniformPhases,
    PrescribedSingular { profile: ProfileSpec },
}

impl EnsembleSpec {
    /// `(rows, cols)` of the data matrix at size `n`.
    pub fn data_shape(&self, n: usize) -> Result<(usize, usize)> {
        match self {
            EnsembleSpec::Wishart { ratio } => {
                if !(*ratio > 0.0 && ratio.is_finite()) {
                    return Err(RmtError::param("ratio", *ratio, "aspect ratio p/n must be positive"));
                }
                let cols = (n as f64 / ratio).round().max(1.0) as usize;
                Ok((n, cols))
            }
            _ => Ok((n, n)),
        }
    }

    pub fn is_complex(&self) -> bool {
        match self {
            EnsembleSpec::Gue | EnsembleSpec::HaarUnitary | EnsembleSpec::UniformPhases => true,
            EnsembleSpec::PrescribedSingular { .. } => true,
            EnsembleSpec::Ginibre { field } => *field == Field::Complex,
            EnsembleSpec::Iid { entry } => entry.is_complex(),
            _ => false,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(
            self,
            EnsembleSpec::Goe | EnsembleSpec::Gue | EnsembleSpec::Wigner { .. } | EnsembleSpec::Wishart { .. }
        )
    }

    pub fn label(&self) -> String {
        match self {
            EnsembleSpec::Goe => "goe".into(),
            EnsembleSpec::Gue => "gue".into(),
            EnsembleSpec::Wigner { .. } => "wigner".into(),
            EnsembleSpec::Wishart { ratio } => format!("wishart(ratio={ratio})"),
            EnsembleSpec::Ginibre { field } => format!("ginibre({})", field.as_str()),
            EnsembleSpec::Iid { .. } => "iid".into(),
            EnsembleSpec::Elliptical { rho } => format!("elliptical(rho={rho})"),
            EnsembleSpec::HaarUnitary => "haar_unitary".into(),
            EnsembleSpec::UniformPhases => "uniform_phases".into(),
            EnsembleSpec::PrescribedSingular { .. } => "prescribed_singular".into(),
        }
    }
}

/// Which spectrum of the sampled matrix the statistic looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    #[default]
    Eigen,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineMetric {
    Ks,
    W1,
}

/// Per-trial statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    /// Distance between the normalized empirical spectral measure and the
    /// law (KS or W₁ on the line; worst disc-mass error in the plane).
    EsmVsLaw { metric: LineMetric },
    /// Largest normalized eigenvalue (real spectra) or modulus.
    Edge,
    /// `n^{2/3}(λ_max/√n − 2)`, compared to `F₂` across trials.
    TwFluctuation,
    /// Centered and scaled spectral radius, compared to the Gumbel law.
    GumbelFluctuation,
    /// Fraction of eigenvalue moduli in `[(1−slack)a, (1+slack)b]`.
    RingContainment { slack: f64 },
    /// Eigenvalues of `G/√n` in the disc of radius `n^{−1/2+ε}`.
    CountingLocal { epsilon: f64 },
    /// `W₁(ESM, uniform circle) · n / √(log n)`.
    RigidityW1,
    /// Largest eigenvector component times `√(n / log n)`.
    Delocalization,
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::EsmVsLaw { .. } => "esm_vs_law",
            Statistic::Edge => "edge",
            Statistic::TwFluctuation => "tw_fluctuation",
            Statistic::GumbelFluctuation => "gumbel_fluctuation",
            Statistic::RingContainment { .. } => "ring_containment",
            Statistic::CountingLocal { .. } => "counting_local",
            Statistic::RigidityW1 => "rigidity_w1",
            Statistic::Delocalization => "delocalization",
        }
    }
}

/// A complete, serializable description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSpec,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub statistic: Statistic,
    #[serde(default)]
    pub spectrum: SpectrumKind,
    #[serde(default)]
    pub law: Option<LawSpec>,
    pub tolerance: f64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(RmtError::InvalidInput("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(RmtError::InvalidInput("sizes must not be empty".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(RmtError::param("tolerance", self.tolerance, "must be positive"));
        }
        if self.sizes.contains(&0) {
            return Err(RmtError::InvalidDimension("sizes must be at least 1".into()));
        }
        if let Statistic::CountingLocal { epsilon } = self.statistic {
            if !(epsilon > 0.0 && epsilon < 0.5) {
                return Err(RmtError::param("epsilon", epsilon, "must lie in (0, 1/2)"));
            }
        }
        if let Statistic::RingContainment { slack } = self.statistic {
            if !(0.0..1.0).contains(&slack) {
                return Err(RmtError::param("slack", slack, "must lie in [0, 1)"));
            }
        }
        if self.spectrum == SpectrumKind::Singular && self.statistic.name() != "esm_vs_law" {
            return Err(RmtError::InvalidInput("singular spectra are only compared against laws".into()));
        }
        self.check_resources()
    }

    /// Refuses experiments beyond desk scale before anything is allocated.
    pub fn check_resources(&self) -> Result<()> {
        if self.trials > MAX_TRIALS {
            return Err(RmtError::ResourceLimit {
                limit: "trials",
                requested: self.trials as f64,
                max: MAX_TRIALS as f64,
            });
        }
        for &n in &self.sizes {
            let (rows, cols) = self.ensemble.data_shape(n)?;
            if rows.max(cols) > MAX_N && !matches!(self.ensemble, EnsembleSpec::Wishart { .. }) || rows > MAX_N {
                return Err(RmtError::ResourceLimit {
                    limit: "matrix size n",
                    requested: rows.max(cols) as f64,
                    max: MAX_N as f64,
                });
            }
            let pn = rows as f64 * cols as f64;
            if pn > MAX_PN {
                return Err(RmtError::ResourceLimit {
                    limit: "p*n",
                    requested: pn,
                    max: MAX_PN,
                });
            }
            // a few complex copies of the data plus LAPACK workspace, per worker
            let workers = rayon::current_num_threads().min(self.trials) as f64;
            let bytes = workers * 16.0 * (4.0 * pn + 4.0 * (rows * rows) as f64);
            if bytes > MAX_BYTES {
                return Err(RmtError::ResourceLimit {
                    limit: "memory bytes",
                    requested: bytes,
                    max: MAX_BYTES,
                });
            }
        }
        Ok(())
    }
}
