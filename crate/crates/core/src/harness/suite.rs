use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{CheckRecord, CheckReport, Params, Status, Summary, Timing, REPORT_FORMAT};
use crate::analysis::{
    classify_with, cr_frame_with, nullity_with, perp_multiplication_check_with, xi_vector_with,
    ClassTag, Tolerances,
};
use crate::clifford::{
    apply_generator, apply_real_vector, dense_generator_matrix, inner, volume_element, Chirality,
    DenseOperator, Spinor, SpinorSpace, C64, I,
};
use crate::constructors::{
    construct_with_nullity, psi_pure, psi_totally_impure, random_chiral_spinor, random_spinor,
    tensor_spinor, SeededSampler, SAMPLER_ALGORITHM,
};
use crate::error::{Result, SpinorError};
use crate::kahler::{
    alpha_operator, binomial, kaehler_spectrum, lowering_defect, raising_defect,
    ComplexStructureMatrix, KaehlerSpectrum,
};

/// Default master seed when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// Largest ambient dimension a suite may request.
pub const MAX_SUITE_DIMENSION: usize = 14;

/// Largest complex dimension for which the Kaehler suite runs.
const MAX_KAEHLER_M: usize = 5;
/// Largest complex dimension for the randomized ladder checks.
const MAX_LADDER_M: usize = 4;

/// Tolerances of the Clifford-engine checks, relative to `|psi|`.
const CLIFFORD_TOL: f64 = 1e-12;
const ISOMETRY_TOL: f64 = 1e-13;
const ORACLE_TOL: f64 = 1e-13;
/// Tolerance of the frame, `xi` and ladder checks.
const FRAME_TOL: f64 = 1e-10;
const MIN_RANK_GAP: f64 = 1e3;

/// A verification suite. Serialized under its command-line name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SuiteName {
    /// Nullities of the canonical spinors; no totally impure spinors in dimensions 3 to 5.
    #[serde(rename = "lemma22")]
    CanonicalNullities,
    /// Chiral spinors in dimensions 4 and 6 are pure.
    #[serde(rename = "prop36")]
    ChiralPurity,
    /// Rank and characteristic vector in dimensions 3 and 5.
    #[serde(rename = "prop37")]
    LowDimensionCr,
    /// `dim D = 2 N` together with the algebraic properties of `J`, `D^perp` and `xi`.
    #[serde(rename = "strictness")]
    Strictness,
    /// Kaehler-form spectrum and ladder operators.
    #[serde(rename = "kaehler")]
    Kaehler,
    /// Clifford relations and agreement with the dense Kronecker oracle.
    #[serde(rename = "clifford")]
    Clifford,
    /// Prescribed-nullity constructions and tensor additivity.
    #[serde(rename = "constructors")]
    Constructors,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::CanonicalNullities,
        SuiteName::ChiralPurity,
        SuiteName::LowDimensionCr,
        SuiteName::Strictness,
        SuiteName::Kaehler,
        SuiteName::Clifford,
        SuiteName::Constructors,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::CanonicalNullities => "lemma22",
            SuiteName::ChiralPurity => "prop36",
            SuiteName::LowDimensionCr => "prop37",
            SuiteName::Strictness => "strictness",
            SuiteName::Kaehler => "kaehler",
            SuiteName::Clifford => "clifford",
            SuiteName::Constructors => "constructors",
        }
    }

    fn id(self) -> u64 {
        self as u64 + 1
    }
}

impl std::str::FromStr for SuiteName {
    type Err = SpinorError;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| SpinorError::Config(format!("unknown suite {s:?}")))
    }
}

impl std::fmt::Display for SuiteName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n_min: usize,
    pub n_max: usize,
    /// Random trials per (suite, n).
    pub trials: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub suites: Vec<SuiteName>,
    /// Pinned sample generator, recorded for reproducibility.
    pub sampler: String,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_min: 2,
            n_max: 12,
            trials: 100,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
            suites: SuiteName::ALL.to_vec(),
            sampler: SAMPLER_ALGORITHM.to_string(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max || self.n_max > MAX_SUITE_DIMENSION {
            return Err(SpinorError::Config(format!(
                "need 2 <= n_min <= n_max <= {MAX_SUITE_DIMENSION}, got n_min = {}, n_max = {}",
                self.n_min, self.n_max
            )));
        }
        if self.trials == 0 {
            return Err(SpinorError::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn dims(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }
}

type Metrics = BTreeMap<String, f64>;

/// Outcome of a single check: pass/fail plus the measured quantities.
struct Outcome {
    pass: bool,
    metrics: Metrics,
    message: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            metrics: Metrics::new(),
            message: None,
        }
    }

    fn metric(&mut self, key: &str, value: f64) -> &mut Self {
        self.metrics.insert(key.to_string(), value);
        self
    }

    /// Records `value` and fails the check when it exceeds `limit`.
    fn at_most(&mut self, key: &str, value: f64, limit: f64) -> &mut Self {
        self.metric(key, value);
        if value.is_nan() || value > limit {
            self.fail(format!("{key} = {value:.3e} exceeds {limit:.1e}"));
        }
        self
    }

    /// Records `value` and fails the check when it is below `limit`.
    fn at_least(&mut self, key: &str, value: f64, limit: f64) -> &mut Self {
        self.metric(key, value);
        if value.is_nan() || value < limit {
            self.fail(format!("{key} = {value:.3e} is below {limit:.1e}"));
        }
        self
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) -> &mut Self {
        if !ok {
            self.fail(what());
        }
        self
    }

    fn fail(&mut self, msg: String) {
        if self.pass {
            self.message = Some(msg);
        }
        self.pass = false;
    }
}

type CheckFn<'a> = Box<dyn Fn(&mut SeededSampler) -> Result<Outcome> + Send + Sync + 'a>;

/// A unit of work: everything needed to run and record one check.
struct Job<'a> {
    suite: SuiteName,
    params: Params,
    seed: u64,
    run: CheckFn<'a>,
}

impl Job<'_> {
    fn execute(&self) -> CheckRecord {
        let mut sampler = SeededSampler::new(self.seed);
        let (status, metrics, message) = match (self.run)(&mut sampler) {
            Ok(o) if o.pass => (Status::Pass, o.metrics, o.message),
            Ok(o) => (Status::Fail, o.metrics, o.message),
            Err(e) => (Status::Error, Metrics::new(), Some(e.to_string())),
        };
        CheckRecord {
            suite: self.suite,
            params: self.params.clone(),
            status,
            metrics,
            seed: self.seed,
            message,
        }
    }
}

fn trial_seed(master: u64, suite: SuiteName, n: usize, variant: u64, trial: usize) -> u64 {
    let stream = suite.id() << 56 | (n as u64) << 48 | variant << 32 | trial as u64;
    SeededSampler::derive(master, stream).seed()
}

struct Planner<'a> {
    config: &'a SuiteConfig,
    jobs: Vec<Job<'a>>,
}

impl<'a> Planner<'a> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        suite: SuiteName,
        n: usize,
        case: &str,
        r: Option<usize>,
        trial: Option<usize>,
        variant: u64,
        run: impl Fn(&mut SeededSampler) -> Result<Outcome> + Send + Sync + 'a,
    ) {
        let seed = trial_seed(
            self.config.seed,
            suite,
            n,
            variant,
            trial.unwrap_or(usize::MAX >> 32),
        );
        self.jobs.push(Job {
            suite,
            params: Params {
                n,
                case: case.to_string(),
                r,
                trial,
            },
            seed,
            run: Box::new(run),
        });
    }
}

/// Runs the selected suites. Check failures are recorded, never raised;
/// only an invalid configuration is an error.
pub fn run_suite(config: &SuiteConfig) -> Result<CheckReport> {
    config.validate()?;
    let start = Instant::now();
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();

    let mut planner = Planner {
        config,
        jobs: Vec::new(),
    };
    for suite in suites {
        match suite {
            SuiteName::CanonicalNullities => plan_canonical(&mut planner),
            SuiteName::ChiralPurity => plan_chiral(&mut planner),
            SuiteName::LowDimensionCr => plan_low_dimension(&mut planner),
            SuiteName::Strictness => plan_strictness(&mut planner),
            SuiteName::Kaehler => plan_kaehler(&mut planner)?,
            SuiteName::Clifford => plan_clifford(&mut planner)?,
            SuiteName::Constructors => plan_constructors(&mut planner),
        }
    }
    let records: Vec<CheckRecord> = planner.jobs.par_iter().map(Job::execute).collect();
    let report = CheckReport {
        format: REPORT_FORMAT.to_string(),
        config: config.clone(),
        summary: Summary::from_records(&records),
        records,
        timing: Timing {
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    };
    report.audit()?;
    Ok(report)
}

fn plan_canonical(p: &mut Planner<'_>) {
    let tol = p.config.tolerances;
    let suite = SuiteName::CanonicalNullities;
    for n in p.config.dims() {
        p.push(suite, n, "psi1", None, None, 0, move |_| {
            let report = nullity_with(&psi_pure(n)?, &tol)?;
            let mut o = Outcome::new();
            o.metric("nullity", report.nullity as f64)
                .metric("rank_gap", report.rank_gap)
                .require(report.nullity == n / 2, || {
                    format!("nullity {} != {}", report.nullity, n / 2)
                })
                .require(report.rank_gap >= MIN_RANK_GAP, || {
                    "rank gap too small".into()
                });
            Ok(o)
        });
        if (3..=5).contains(&n) {
            for trial in 0..p.config.trials {
                p.push(suite, n, "random", None, Some(trial), 1, move |s| {
                    let psi = random_spinor(SpinorSpace::new(n)?, s);
                    let report = nullity_with(&psi, &tol)?;
                    let expected_ok = match n {
                        3 => report.nullity == 1,
                        5 => report.nullity == 2,
                        _ => report.nullity >= 1,
                    };
                    let mut o = Outcome::new();
                    o.metric("nullity", report.nullity as f64)
                        .metric("rank_gap", report.rank_gap)
                        .require(expected_ok, || {
                            format!("nullity {} in dimension {n}", report.nullity)
                        });
                    Ok(o)
                });
            }
        } else {
            p.push(suite, n, "psi2", None, None, 2, move |_| {
                let report = nullity_with(&psi_totally_impure(n)?, &tol)?;
                let mut o = Outcome::new();
                o.metric("nullity", report.nullity as f64)
                    .metric("rank_gap", report.rank_gap)
                    .require(report.nullity == 0, || {
                        format!("nullity {} != 0", report.nullity)
                    })
                    .require(report.rank_gap >= MIN_RANK_GAP, || {
                        "rank gap too small".into()
                    });
                Ok(o)
            });
        }
    }
}

fn plan_chiral(p: &mut Planner<'_>) {
    let tol = p.config.tolerances;
    for n in p.config.dims().filter(|n| [4, 6].contains(n)) {
        for (variant, chirality, case) in [
            (0, Chirality::Positive, "positive"),
            (1, Chirality::Negative, "negative"),
        ] {
            for trial in 0..p.config.trials {
                p.push(
                    SuiteName::ChiralPurity,
                    n,
                    case,
                    None,
                    Some(trial),
                    variant,
                    move |s| {
                        let psi = random_chiral_spinor(SpinorSpace::new(n)?, s, chirality)?;
                        let report = nullity_with(&psi, &tol)?;
                        let mut o = Outcome::new();
                        o.metric("nullity", report.nullity as f64)
                            .metric("rank_gap", report.rank_gap)
                            .require(report.nullity == n / 2, || {
                                format!("chiral spinor has nullity {}", report.nullity)
                            });
                        Ok(o)
                    },
                );
            }
        }
    }
}

fn plan_low_dimension(p: &mut Planner<'_>) {
    let tol = p.config.tolerances;
    for n in p.config.dims().filter(|n| [3, 5].contains(n)) {
        for trial in 0..p.config.trials {
            p.push(
                SuiteName::LowDimensionCr,
                n,
                "random",
                None,
                Some(trial),
                0,
                move |s| {
                    let psi = random_spinor(SpinorSpace::new(n)?, s);
                    let class = classify_with(&psi, &tol)?;
                    let xi = xi_vector_with(&psi, &tol)?;
                    let xi_psi = apply_real_vector(xi.as_slice(), &psi)?;
                    let eigen_defect = xi_psi.add_scaled(I, &psi)?.norm();
                    let mut o = Outcome::new();
                    o.metric("rank", class.rank as f64)
                        .require(
                            class.tag == ClassTag::StrictlyPartiallyPure
                                && class.rank == (n - 1) / 2,
                            || format!("classified as {class}"),
                        )
                        .at_most("xi_norm_defect", (xi.norm() - 1.0).abs(), FRAME_TOL)
                        .at_most("xi_eigen_defect", eigen_defect, FRAME_TOL);
                    Ok(o)
                },
            );
        }
    }
}

/// Random unit combination of real basis vectors.
fn random_combination(
    basis: &[nalgebra::DVector<f64>],
    s: &mut SeededSampler,
) -> nalgebra::DVector<f64> {
    let w = s.unit_real_vector(basis.len());
    basis
        .iter()
        .zip(&w)
        .fold(nalgebra::DVector::zeros(basis[0].len()), |acc, (b, &c)| {
            acc + b * c
        })
}

/// Sample families for the strictness suite, cycled by trial index.
fn strictness_sample(
    n: usize,
    trial: usize,
    s: &mut SeededSampler,
) -> Result<(Spinor, &'static str)> {
    let space = SpinorSpace::new(n)?;
    Ok(match trial % 3 {
        1 if space.is_even() => {
            let chirality = if trial.is_multiple_of(2) {
                Chirality::Positive
            } else {
                Chirality::Negative
            };
            (random_chiral_spinor(space, s, chirality)?, "chiral")
        }
        2 if n >= 4 => {
            let tail = random_spinor(SpinorSpace::new(n - 2)?, s);
            (tensor_spinor(&psi_pure(2)?, &tail)?, "pure_plane_tensor")
        }
        _ => (random_spinor(space, s), "random"),
    })
}

fn plan_strictness(p: &mut Planner<'_>) {
    let tol = p.config.tolerances;
    for n in p.config.dims() {
        for trial in 0..p.config.trials {
            p.push(
                SuiteName::Strictness,
                n,
                "sample",
                None,
                Some(trial),
                0,
                move |s| {
                    let (psi, family) = strictness_sample(n, trial, s)?;
                    let report = nullity_with(&psi, &tol)?;
                    let mut o = Outcome::new();
                    o.metric("nullity", report.nullity as f64);
                    o.metrics.insert(format!("family_{family}"), 1.0);
                    if report.nullity == 0 {
                        let empty = matches!(
                            cr_frame_with(&psi, &tol),
                            Err(SpinorError::EmptyDistribution)
                        );
                        o.metric("dim_d", 0.0).require(empty, || {
                            "rank-0 spinor did not report an empty distribution".into()
                        });
                        return Ok(o);
                    }
                    let frame = cr_frame_with(&psi, &tol)?;
                    let dim = frame.dim_d();
                    let id = DMatrix::<f64>::identity(dim, dim);
                    let j = &frame.j_matrix;
                    let mut compat = 0.0f64;
                    let mut isometry = 0.0f64;
                    for x in &frame.d_basis {
                        let jx = frame.apply_j(x);
                        compat = compat.max(x.dot(&jx).abs());
                        isometry = isometry.max((jx.norm() - x.norm()).abs());
                    }
                    let mut d_perp = 0.0f64;
                    let mut d_xi = 0.0f64;
                    for d in &frame.d_basis {
                        for q in &frame.dperp_basis {
                            d_perp = d_perp.max(d.dot(q).abs());
                        }
                        d_xi = d_xi.max(d.dot(&frame.xi).abs());
                    }
                    if !frame.dperp_basis.is_empty() {
                        let u = random_combination(&frame.dperp_basis, s);
                        let check = perp_multiplication_check_with(&psi, u.as_slice(), &tol)?;
                        o.at_most("perp_defect", check.max_defect, FRAME_TOL);
                    }
                    let u = random_combination(&frame.d_basis, s);
                    let check = perp_multiplication_check_with(&psi, u.as_slice(), &tol)?;
                    o.at_least("d_vector_defect", check.max_defect, 1e-3);
                    o.metric("dim_d", dim as f64)
                        .metric("real_sigma_min", frame.real_sigma_min)
                        .require(dim == 2 * report.nullity, || {
                            format!("dim D = {dim} but nullity is {}", report.nullity)
                        })
                        .require(frame.dperp_basis.len() == n - dim, || {
                            "D^perp has wrong dimension".into()
                        })
                        .at_most("j_square_defect", (j * j + &id).amax(), FRAME_TOL)
                        .at_most(
                            "j_orthogonality_defect",
                            (j.transpose() * j - &id).amax(),
                            FRAME_TOL,
                        )
                        .at_most("j_compatibility_defect", compat, FRAME_TOL)
                        .at_most("j_isometry_defect", isometry, FRAME_TOL)
                        .at_most("d_dperp_overlap", d_perp, FRAME_TOL)
                        .at_most("d_xi_overlap", d_xi, FRAME_TOL)
                        .at_most("j_residual", frame.j_residual, FRAME_TOL);
                    Ok(o)
                },
            );
        }
    }
}

fn plan_kaehler(p: &mut Planner<'_>) -> Result<()> {
    let ms: Vec<usize> = p
        .config
        .dims()
        .filter(|n| n % 2 == 0 && n / 2 <= MAX_KAEHLER_M)
        .map(|n| n / 2)
        .collect();
    for m in ms {
        let j = ComplexStructureMatrix::standard(m)?;
        let spectrum = std::sync::Arc::new(kaehler_spectrum(&j));
        let n = 2 * m;
        {
            let j = j.clone();
            let spectrum = spectrum.clone();
            p.push(
                SuiteName::Kaehler,
                n,
                "spectrum",
                None,
                None,
                0,
                move |_| {
                    let spec = spectrum.as_ref().clone()?;
                    let alpha = alpha_operator(&j)?;
                    let skew = (alpha.matrix() + alpha.matrix().adjoint()).camax();
                    let mut o = Outcome::new();
                    for level in &spec.levels {
                        o.require(level.multiplicity == binomial(m, level.r), || {
                            format!("level {} has multiplicity {}", level.r, level.multiplicity)
                        });
                    }
                    o.at_most("eigenvalue_residual", spec.max_eigenvalue_residual, 1e-9)
                        .at_most("eigenvector_residual", spec.max_eigenvector_residual, 1e-9)
                        .at_most("skew_hermitian_defect", skew, CLIFFORD_TOL);
                    Ok(o)
                },
            );
        }
        if m > MAX_LADDER_M {
            continue;
        }
        for trial in 0..p.config.trials {
            let j = j.clone();
            let spectrum = spectrum.clone();
            let tol = p.config.tolerances;
            p.push(
                SuiteName::Kaehler,
                n,
                "ladder",
                None,
                Some(trial),
                1,
                move |s| {
                    let spec: &KaehlerSpectrum =
                        spectrum.as_ref().as_ref().map_err(Clone::clone)?;
                    let r = s.uniform_index(m + 1);
                    let psi_r = random_level_spinor(spec, r, s)?;
                    let x = s.unit_real_vector(n);
                    let raise = raising_defect(spec, &j, &x, &psi_r)?;
                    let lower = lowering_defect(spec, &j, &x, &psi_r)?;
                    // (X - iJX) is isotropic, so it squares to zero in the Clifford algebra
                    let jx = j.apply(&x);
                    let z: Vec<C64> = x.iter().zip(&jx).map(|(&a, &b)| C64::new(a, -b)).collect();
                    let z = crate::clifford::ComplexVector::new(z)?;
                    let twice = crate::clifford::apply_vector(
                        &z,
                        &crate::clifford::apply_vector(&z, &psi_r)?,
                    )?;
                    let mut o = Outcome::new();
                    o.metric("level", r as f64)
                        .at_most("raising_defect", raise, FRAME_TOL)
                        .at_most("lowering_defect", lower, FRAME_TOL)
                        .at_most("isotropy_defect", twice.norm(), FRAME_TOL);
                    if r == 0 || r == m {
                        let nullity = nullity_with(&psi_r, &tol)?.nullity;
                        o.metric("extreme_level_nullity", nullity as f64)
                            .require(nullity == m, || {
                                format!("extreme-level spinor has nullity {nullity}")
                            });
                    }
                    Ok(o)
                },
            );
        }
    }
    Ok(())
}

fn random_level_spinor(spec: &KaehlerSpectrum, r: usize, s: &mut SeededSampler) -> Result<Spinor> {
    let level = spec
        .level(r)
        .ok_or_else(|| SpinorError::Range(format!("no level {r}")))?;
    loop {
        let combo = level
            .basis
            .iter()
            .try_fold(Spinor::zeros(spec.space()), |acc, b| {
                acc.add_scaled(s.complex_gaussian(), b)
            })?;
        if combo.norm() > 1e-8 {
            return combo.normalized();
        }
    }
}

fn plan_clifford(p: &mut Planner<'_>) -> Result<()> {
    for n in p.config.dims() {
        let space = SpinorSpace::new(n)?;
        let dense: std::sync::Arc<Vec<DenseOperator>> = std::sync::Arc::new(
            (1..=n)
                .map(|j| dense_generator_matrix(space, j).map(|d| d.to_spinor_basis()))
                .collect::<Result<_>>()?,
        );
        for trial in 0..p.config.trials {
            let dense = dense.clone();
            p.push(
                SuiteName::Clifford,
                n,
                "random",
                None,
                Some(trial),
                0,
                move |s| clifford_trial(space, &dense, s),
            );
        }
    }
    Ok(())
}

fn clifford_trial(
    space: SpinorSpace,
    dense: &[DenseOperator],
    s: &mut SeededSampler,
) -> Result<Outcome> {
    let n = space.n();
    let psi = random_spinor(space, s);
    let phi = random_spinor(space, s);
    let v = s.unit_real_vector(n);

    let images: Vec<Spinor> = (1..=n)
        .map(|j| apply_generator(j, &psi))
        .collect::<Result<_>>()?;
    let mut anticommutation = 0.0f64;
    for j in 1..=n {
        for l in j..=n {
            let jl = apply_generator(j, &images[l - 1])?;
            let lj = apply_generator(l, &images[j - 1])?;
            let mut sum = jl.add_scaled(C64::new(1.0, 0.0), &lj)?;
            if j == l {
                sum = sum.add_scaled(C64::new(2.0, 0.0), &psi)?;
            }
            anticommutation = anticommutation.max(sum.norm());
        }
    }
    let isometry = images
        .iter()
        .map(|im| (im.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    let oracle = images
        .iter()
        .zip(dense)
        .map(|(im, d)| d.apply(&psi).and_then(|x| x.distance(im)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    let skew = (inner(&apply_real_vector(&v, &phi)?, &psi)?
        + inner(&phi, &apply_real_vector(&v, &psi)?)?)
    .norm();

    let omega = volume_element(&psi);
    let involution = volume_element(&omega).distance(&psi)?;
    let sign = if space.is_even() { -1.0 } else { 1.0 };
    let mut commutation = 0.0f64;
    for (j, image) in images.iter().enumerate() {
        // omega e_j = sign * e_j omega
        let left = volume_element(image);
        let right = apply_generator(j + 1, &omega)?;
        commutation = commutation.max(left.add_scaled(C64::new(-sign, 0.0), &right)?.norm());
    }
    let mut o = Outcome::new();
    o.at_most("anticommutation_defect", anticommutation, CLIFFORD_TOL)
        .at_most("isometry_defect", isometry, ISOMETRY_TOL)
        .at_most("oracle_defect", oracle, ORACLE_TOL)
        .at_most("skew_adjoint_defect", skew, CLIFFORD_TOL)
        .at_most("volume_involution_defect", involution, CLIFFORD_TOL)
        .at_most("volume_commutation_defect", commutation, CLIFFORD_TOL);
    if !space.is_even() {
        o.at_most(
            "volume_identity_defect",
            omega.distance(&psi)?,
            CLIFFORD_TOL,
        );
    }
    Ok(o)
}

fn plan_constructors(p: &mut Planner<'_>) {
    let tol = p.config.tolerances;
    for n in p.config.dims() {
        for target in 0..=n / 2 {
            p.push(
                SuiteName::Constructors,
                n,
                "prescribed_nullity",
                Some(target),
                None,
                target as u64,
                move |_| {
                    let residual = n - 2 * target;
                    let unreachable = (3..=5).contains(&residual);
                    let mut o = Outcome::new();
                    match construct_with_nullity(n, target) {
                        Ok(psi) => {
                            let measured = nullity_with(&psi, &tol)?.nullity;
                            o.metric("nullity", measured as f64)
                                .require(!unreachable, || {
                                    "construction should have been refused".into()
                                })
                                .require(measured == target, || {
                                    format!("measured nullity {measured}")
                                });
                        }
                        Err(SpinorError::UnreachableNullity { .. }) => {
                            o.metric("unreachable", 1.0)
                                .require(unreachable, || "admissible nullity was refused".into());
                        }
                        Err(e) => return Err(e),
                    }
                    Ok(o)
                },
            );
        }
        if n < 4 {
            continue;
        }
        for trial in 0..p.config.trials {
            p.push(
                SuiteName::Constructors,
                n,
                "pure_tensor_additivity",
                None,
                Some(trial),
                1000,
                move |s| {
                    let half = s.uniform_index((n - 2) / 2) + 1;
                    let rest = SpinorSpace::new(n - 2 * half)?;
                    let phi = random_spinor(rest, s);
                    let pure = psi_pure(2 * half)?;
                    let product = tensor_spinor(&pure, &phi)?;
                    let expected = half + nullity_with(&phi, &tol)?.nullity;
                    let measured = nullity_with(&product, &tol)?.nullity;
                    let mut o = Outcome::new();
                    o.metric("pure_half_dimension", half as f64)
                        .metric("nullity", measured as f64)
                        .require(measured == expected, || {
                            format!("nullity {measured} != {expected}")
                        })
                        .at_most("norm_defect", (product.norm() - phi.norm()).abs(), 1e-13);
                    Ok(o)
                },
            );
        }
    }
}
