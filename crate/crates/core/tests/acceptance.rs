//! End-to-end acceptance criteria. Each test prints one `PASS`/`FAIL` line
//! (written straight to stderr so it shows without `--nocapture`) and then
//! asserts the same outcome.
//!
//! Criteria run one at a time under a lock so that the wall-clock limits are
//! measured without other tests competing for the cores.

use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rmt_core::ensembles::Field;
use rmt_core::harness::*;
use rmt_core::laws::*;
use rmt_core::Complex64;

static SERIAL: Mutex<()> = Mutex::new(());

struct Outcome {
    checks: Vec<Verdict>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn absorb(&mut self, r: &ExperimentReport) {
        self.checks.extend(r.verdicts.iter().cloned());
        self.notes.extend(r.notes.iter().cloned());
    }

    fn check(&mut self, v: Verdict) {
        self.checks.push(v);
    }
}

fn criterion(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut out = body();
    let elapsed = start.elapsed();
    out.check(Verdict::at_most("runtime seconds", elapsed.as_secs_f64(), limit.as_secs_f64()));
    let pass = out.checks.iter().all(|v| v.pass);
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "acceptance {id:>2} {name}: {} ({:.1} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    for v in &out.checks {
        let _ = writeln!(
            err,
            "    [{}] {}: {:.6e} {} {:e}",
            if v.pass { "ok" } else { "FAILED" },
            v.criterion,
            v.observed,
            v.relation.symbol(),
            v.threshold
        );
    }
    for n in &out.notes {
        let _ = writeln!(err, "    note: {n}");
    }
    drop(err);
    let failed: Vec<&str> = out.checks.iter().filter(|v| !v.pass).map(|v| v.criterion.as_str()).collect();
    assert!(failed.is_empty(), "criterion {id} ({name}) failed: {failed:?}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

// ---------------------------------------------------------------------------
// Runners shared with the seed sweep. Each returns every check of the criterion
// except the runtime.

fn semicircle_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_semicircle(EnsembleSpec::Gue, 1000, 5, seed).unwrap());
    o.absorb(&verify_semicircle(rademacher_wigner(), 1000, 5, seed).unwrap());
    o
}

fn bai_yin_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_bai_yin(&[200, 400, 800], 20, seed).unwrap());
    o
}

fn tw_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_tw(200, 5000, seed).unwrap());
    o
}

fn mp_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    for alpha in [0.25, 1.0, 2.0] {
        o.absorb(&verify_mp(alpha, 500, 5, seed).unwrap());
    }
    o
}

fn hard_edge_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_hard_edge(0.25, 500, 20, seed).unwrap());
    o
}

fn quarter_circle_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_quarter_circle(1000, 5, seed).unwrap());
    o
}

fn circular_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_circular(EnsembleSpec::Ginibre { field: Field::Complex }, 1000, 5, seed).unwrap());
    o.absorb(&verify_circular(rademacher_iid(), 1000, 5, seed).unwrap());
    o
}

fn gumbel_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_gumbel(500, 2000, seed).unwrap());
    o
}

fn elliptical_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    for rho in [-0.5, 0.0, 0.5] {
        let r = verify_elliptical(rho, 1000, 5, seed).unwrap();
        // the inner-ellipse mass is required at rho = 0.5 only
        let keep: Vec<Verdict> = r
            .verdicts
            .iter()
            .filter(|v| rho == 0.5 || !v.criterion.contains("0.6"))
            .cloned()
            .collect();
        o.checks.extend(keep);
    }
    o
}

fn rigidity_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    o.absorb(&verify_rigidity(&[100, 200, 400, 800], 400, 20, seed).unwrap());
    o
}

fn single_ring_checks(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    let linear = verify_single_ring(linear_profile(), 1000, 5, seed).unwrap();
    let ring = &linear.records[0].extras;
    o.check(Verdict::at_most(
        "ring radii equal sqrt(6) and sqrt(43/3)",
        (ring["ring_a"] - 6f64.sqrt()).abs().max((ring["ring_b"] - (43.0f64 / 3.0).sqrt()).abs()),
        1e-10,
    ));
    o.checks.extend(linear.verdicts.iter().filter(|v| !v.criterion.contains("band")).cloned());
    let gapped = verify_single_ring(gapped_profile(), 1000, 5, seed).unwrap();
    o.absorb(&gapped);
    o
}

// ---------------------------------------------------------------------------

#[test]
fn c01_semicircle() {
    criterion(1, "semicircle law (GUE, Rademacher Wigner)", secs(60), || semicircle_checks(DEFAULT_SEED));
}

#[test]
fn c02_bai_yin_edge() {
    criterion(2, "largest eigenvalue edge", secs(90), || bai_yin_checks(DEFAULT_SEED));
}

#[test]
fn c03_tracy_widom() {
    criterion(3, "Tracy-Widom fluctuations and F2 internals", secs(600), || {
        let mut o = tw_checks(DEFAULT_SEED);
        let grid: Vec<f64> = (0..1024)
            .map(|i| TW_MIN + (TW_MAX - TW_MIN) * i as f64 / 1023.0)
            .map(|t| tracy_widom_f2(t).unwrap())
            .collect();
        let drops = grid.windows(2).filter(|w| w[1] < w[0]).count();
        o.check(Verdict::at_most("F2 decreases on the 1024-point grid (steps)", drops as f64, 0.0));
        o.check(Verdict::at_least("F2(8)", tracy_widom_f2(8.0).unwrap(), 1.0 - 1e-8));
        let tw = tracy_widom().unwrap();
        o.check(Verdict::at_most("Painleve residual", tw.solution().residual(), 1e-8));
        let x0 = tw.solution().x0_start();
        let ai = airy(x0).unwrap();
        o.check(Verdict::at_most("|q(x0)/Ai(x0) - 1|", (tw.solution().q(x0) / ai - 1.0).abs(), 1e-6));
        o
    });
}

#[test]
fn c04_marchenko_pastur() {
    criterion(4, "Marchenko-Pastur law and zero block", secs(120), || mp_checks(DEFAULT_SEED));
}

#[test]
fn c05_hard_edge() {
    criterion(5, "Wishart extreme eigenvalues", secs(120), || hard_edge_checks(DEFAULT_SEED));
}

#[test]
fn c06_quarter_circle() {
    criterion(6, "quarter-circle law of singular values", secs(30), || quarter_circle_checks(DEFAULT_SEED));
}

#[test]
fn c07_circular() {
    criterion(7, "circular law disc masses", secs(60), || circular_checks(DEFAULT_SEED));
}

#[test]
fn c08_gumbel() {
    criterion(8, "Gumbel fluctuations of the spectral radius", secs(600), || gumbel_checks(DEFAULT_SEED));
}

#[test]
fn c09_elliptical() {
    criterion(9, "elliptical law", secs(120), || elliptical_checks(DEFAULT_SEED));
}

#[test]
fn c10_haar_rigidity() {
    criterion(10, "Haar unitary rigidity", secs(180), || rigidity_checks(DEFAULT_SEED));
}

#[test]
fn c11_single_ring() {
    criterion(11, "single ring", secs(120), || single_ring_checks(DEFAULT_SEED));
}

#[test]
fn c12_numerical_core() {
    criterion(12, "deterministic numerical core", secs(10), || {
        let mut o = Outcome::new();
        let laws = vec![
            semicircle(RadiusMode::Wigner2),
            semicircle(RadiusMode::BaiYin1),
            marchenko_pastur(0.25).unwrap(),
            marchenko_pastur(1.0).unwrap(),
            marchenko_pastur(2.0).unwrap(),
            quarter_circle(),
            uniform(-1.0, 3.0).unwrap(),
            point_mass(0.5).unwrap(),
            gumbel(),
            tracy_widom_law().unwrap(),
        ];
        let worst = laws
            .iter()
            .map(|l| {
                let mass = l.atom().map_or(0.0, |a| a.mass) + l.continuous_mass_by_quadrature();
                (mass - 1.0).abs()
            })
            .fold(0.0, f64::max);
        o.check(Verdict::at_most("worst |total mass - 1| over all laws", worst, 1e-8));

        o.check(Verdict::at_most("|Ai(0) - 0.3550280539|", (airy(0.0).unwrap() - 0.3550280539).abs(), 1e-10));
        o.check(Verdict::at_most("Ai(10)", airy(10.0).unwrap(), 1e-9));
        let h = 1e-3;
        let residual = |x: f64| {
            let d2 = (airy(x + h).unwrap() - 2.0 * airy(x).unwrap() + airy(x - h).unwrap()) / (h * h);
            (d2 - x * airy(x).unwrap()).abs()
        };
        o.check(Verdict::at_most("Airy ODE residual at x = 1", residual(1.0), 1e-5));
        let probes = (0..32).map(|i| -10.0 + 20.0 * i as f64 / 31.0).map(residual).fold(0.0, f64::max);
        o.check(Verdict::at_most("Airy ODE residual, 32 probes on [-10, 10]", probes, 1e-5));
        let hm = painleve_hm(DEFAULT_X_MIN, DEFAULT_X0).unwrap();
        o.check(Verdict::at_most("Painleve collocation residual", hm.residual(), 1e-8));

        let s = semicircle(RadiusMode::Wigner2).stieltjes(Complex64::new(0.0, 1.0)).unwrap();
        let want = Complex64::new(0.0, (5f64.sqrt() - 1.0) / 2.0);
        o.check(Verdict::at_most("|S_semicircle(i) - i(sqrt5 - 1)/2|", (s - want).norm(), 1e-6));

        let point = single_ring_radii(&RingMeasure::Continuous(point_mass(1.0).unwrap())).unwrap();
        let flat = single_ring_radii(&RingMeasure::Continuous(uniform(1.0, 6.0).unwrap())).unwrap();
        let ring_err = [
            (point.a - 1.0).abs(),
            (point.b - 1.0).abs(),
            (flat.a - 6f64.sqrt()).abs(),
            (flat.b - (43.0f64 / 3.0).sqrt()).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        o.check(Verdict::at_most("single-ring radii closed forms", ring_err, 1e-10));
        o
    });
}

/// Every random criterion must pass for at least 18 out of 20 fresh seeds.
/// Takes several hours on one core.
#[test]
#[ignore]
fn twenty_seed_sweep() {
    type Runner = fn(u64) -> Outcome;
    let runners: [(u32, Runner); 11] = [
        (1, semicircle_checks),
        (2, bai_yin_checks),
        (3, tw_checks),
        (4, mp_checks),
        (5, hard_edge_checks),
        (6, quarter_circle_checks),
        (7, circular_checks),
        (8, gumbel_checks),
        (9, elliptical_checks),
        (10, rigidity_checks),
        (11, single_ring_checks),
    ];
    let mut short = Vec::new();
    for (id, run) in runners {
        let passes = (1..=20u64).filter(|s| run(1_000 + s).checks.iter().all(|v| v.pass)).count();
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "sweep {id:>2}: {passes}/20 seeds pass");
        if passes < 18 {
            short.push(id);
        }
    }
    assert!(short.is_empty(), "criteria below 18/20 seeds: {short:?}");
}
