//! Verification suites: a TOML description of which identities to check on
//! which parameter grids, and a runner that evaluates them in parallel.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::accuracy::AccuracySpec;
use crate::error::{Error, Result};
use crate::identities::{self, params, IdentityCheck, MellinKernel, Param, Params};
use crate::phi::PhiEvaluator;
use crate::special::Constants;
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccuracyOverride {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_evals: Option<usize>,
}

/// Replacement values for the stored constants, used to test that the
/// suite notices a wrong constant.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsOverride {
    pub euler_gamma: Option<f64>,
    pub log_two_pi: Option<f64>,
    pub pi: Option<f64>,
}

/// One `[[check]]` table. Every grid field is expanded as a Cartesian product.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    FractionalMellin {
        #[serde(default)]
        s: Vec<[f64; 2]>,
        #[serde(default)]
        random_s: usize,
        tolerance: Option<f64>,
    },
    PhiMellin {
        n: Vec<u32>,
        #[serde(default)]
        s: Vec<[f64; 2]>,
        #[serde(default)]
        random_s: usize,
        tolerance: Option<f64>,
    },
    PhiParseval {
        n: Vec<u32>,
        sigma: Vec<f64>,
        tolerance: Option<f64>,
    },
    LaplaceAsymptotic {
        #[serde(rename = "T")]
        t: Vec<f64>,
        #[serde(rename = "M")]
        m: Vec<u32>,
        tolerance: Option<f64>,
    },
    MuntzGaussian {
        #[serde(default)]
        s: Vec<[f64; 2]>,
        #[serde(default)]
        random_s: usize,
        tolerance: Option<f64>,
    },
    GaussianParseval {
        sigma: Vec<f64>,
        tolerance: Option<f64>,
    },
    GaussianParsevalSymmetry {
        sigma: Vec<f64>,
        tolerance: Option<f64>,
    },
    ThetaParseval {
        sigma: Vec<f64>,
        tolerance: Option<f64>,
    },
    ThetaFunctional {
        t: Vec<f64>,
        tolerance: Option<f64>,
    },
    MellinConvolution {
        kernels: Vec<[String; 2]>,
        s: Vec<[f64; 2]>,
        tolerance: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    pub out: Option<String>,
    #[serde(default)]
    pub accuracy: AccuracyOverride,
    #[serde(default)]
    pub constants: ConstantsOverride,
    #[serde(rename = "check")]
    pub checks: Vec<CheckSpec>,
}

/// A single evaluation produced by expanding the grids.
#[derive(Debug, Clone)]
pub enum Job {
    FractionalMellin(Complex64),
    PhiMellin(u32, Complex64),
    PhiParseval(u32, f64),
    LaplaceAsymptotic(f64, u32),
    MuntzGaussian(Complex64),
    GaussianParseval(f64),
    GaussianParsevalSymmetry(f64),
    ThetaParseval(f64),
    ThetaFunctional(f64),
    MellinConvolution(MellinKernel, MellinKernel, Complex64),
}

fn s_pair(s: Complex64) -> [(&'static str, Param); 2] {
    [("s_re", s.re.into()), ("s_im", s.im.into())]
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::FractionalMellin(_) => "fractional_mellin",
            Job::PhiMellin(..) => "phi_mellin",
            Job::PhiParseval(..) => "phi_parseval",
            Job::LaplaceAsymptotic(..) => "laplace_asymptotic",
            Job::MuntzGaussian(_) => "muntz_gaussian",
            Job::GaussianParseval(_) => "gaussian_parseval",
            Job::GaussianParsevalSymmetry(_) => "gaussian_parseval_symmetry",
            Job::ThetaParseval(_) => "theta_parseval",
            Job::ThetaFunctional(_) => "theta_functional",
            Job::MellinConvolution(..) => "mellin_convolution",
        }
    }

    /// The parameters the check itself records, for reporting a check
    /// that could not be evaluated.
    pub fn params(&self) -> Params {
        match *self {
            Job::FractionalMellin(s) | Job::MuntzGaussian(s) => params(s_pair(s)),
            Job::PhiMellin(n, s) => {
                let [a, b] = s_pair(s);
                params([("n", n.into()), a, b])
            }
            Job::PhiParseval(n, sigma) => params([("n", n.into()), ("sigma", sigma.into())]),
            Job::LaplaceAsymptotic(t, m) => params([("T", t.into()), ("M", m.into())]),
            Job::GaussianParseval(sigma) | Job::GaussianParsevalSymmetry(sigma) | Job::ThetaParseval(sigma) => {
                params([("sigma", sigma.into())])
            }
            Job::ThetaFunctional(t) => params([("t", t.into())]),
            Job::MellinConvolution(f, g, s) => {
                let [a, b] = s_pair(s);
                params([("f", f.name.into()), ("g", g.name.into()), a, b])
            }
        }
    }

    fn phi_order(&self) -> Option<u32> {
        match *self {
            Job::PhiMellin(n, _) | Job::PhiParseval(n, _) => Some(n),
            _ => None,
        }
    }

    fn run(&self, ev: Option<&PhiEvaluator>, constants: &Constants, acc: &AccuracySpec) -> Result<IdentityCheck> {
        let phi =
            |n: u32| ev.and_then(|e| evaluator_of_order(e, n)).ok_or(Error::OrderMismatch { expected: n, found: 0 });
        match *self {
            Job::FractionalMellin(s) => identities::check_fractional_mellin(s, acc),
            Job::PhiMellin(n, s) => identities::check_phi_mellin(n, s, phi(n)?, acc),
            Job::PhiParseval(n, sigma) => identities::check_phi_parseval(n, sigma, phi(n)?, acc),
            Job::LaplaceAsymptotic(t, m) => identities::check_laplace_asymptotic(t, m, constants, acc),
            Job::MuntzGaussian(s) => identities::check_muntz_gaussian(s, constants, acc),
            Job::GaussianParseval(sigma) => identities::check_gaussian_parseval(sigma, constants, acc),
            Job::GaussianParsevalSymmetry(sigma) => identities::check_gaussian_parseval_symmetry(sigma, constants, acc),
            Job::ThetaParseval(sigma) => identities::check_theta_parseval(sigma, constants, acc),
            Job::ThetaFunctional(t) => identities::check_theta_functional(t, constants, acc),
            Job::MellinConvolution(f, g, s) => identities::check_mellin_convolution(&f, &g, s, acc),
        }
    }
}

fn evaluator_of_order(ev: &PhiEvaluator, n: u32) -> Option<&PhiEvaluator> {
    let mut cur = ev;
    while cur.order() > n {
        cur = cur.child()?;
    }
    (cur.order() == n).then_some(cur)
}

fn complex(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn non_empty<T>(v: &[T], what: &str, check: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Config(format!("check {check}: `{what}` must not be empty")));
    }
    Ok(())
}

/// Strip points followed by `random` draws with `Re s ∈ (0.05, 0.95)` and
/// `Im s ∈ (−10, 10)`.
fn strip_points(fixed: &[[f64; 2]], random: usize, rng: &mut ChaCha8Rng, check: &str) -> Result<Vec<Complex64>> {
    if fixed.is_empty() && random == 0 {
        return Err(Error::Config(format!("check {check}: give `s` or `random_s`")));
    }
    let mut out: Vec<Complex64> = fixed.iter().map(complex).collect();
    for _ in 0..random {
        out.push(Complex64::new(rng.random_range(0.05..0.95), rng.random_range(-10.0..10.0)));
    }
    Ok(out)
}

impl CheckSpec {
    fn tolerance(&self) -> Option<f64> {
        match *self {
            CheckSpec::FractionalMellin { tolerance, .. }
            | CheckSpec::PhiMellin { tolerance, .. }
            | CheckSpec::PhiParseval { tolerance, .. }
            | CheckSpec::LaplaceAsymptotic { tolerance, .. }
            | CheckSpec::MuntzGaussian { tolerance, .. }
            | CheckSpec::GaussianParseval { tolerance, .. }
            | CheckSpec::GaussianParsevalSymmetry { tolerance, .. }
            | CheckSpec::ThetaParseval { tolerance, .. }
            | CheckSpec::ThetaFunctional { tolerance, .. }
            | CheckSpec::MellinConvolution { tolerance, .. } => tolerance,
        }
    }

    fn expand(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Job>> {
        let jobs = match self {
            CheckSpec::FractionalMellin { s, random_s, .. } => {
                strip_points(s, *random_s, rng, "fractional_mellin")?.into_iter().map(Job::FractionalMellin).collect()
            }
            CheckSpec::PhiMellin { n, s, random_s, .. } => {
                non_empty(n, "n", "phi_mellin")?;
                let points = strip_points(s, *random_s, rng, "phi_mellin")?;
                n.iter().flat_map(|&n| points.iter().map(move |&s| Job::PhiMellin(n, s))).collect()
            }
            CheckSpec::PhiParseval { n, sigma, .. } => {
                non_empty(n, "n", "phi_parseval")?;
                non_empty(sigma, "sigma", "phi_parseval")?;
                n.iter().flat_map(|&n| sigma.iter().map(move |&x| Job::PhiParseval(n, x))).collect()
            }
            CheckSpec::LaplaceAsymptotic { t, m, .. } => {
                non_empty(t, "T", "laplace_asymptotic")?;
                non_empty(m, "M", "laplace_asymptotic")?;
                t.iter().flat_map(|&t| m.iter().map(move |&m| Job::LaplaceAsymptotic(t, m))).collect()
            }
            CheckSpec::MuntzGaussian { s, random_s, .. } => {
                strip_points(s, *random_s, rng, "muntz_gaussian")?.into_iter().map(Job::MuntzGaussian).collect()
            }
            CheckSpec::GaussianParseval { sigma, .. } => {
                non_empty(sigma, "sigma", "gaussian_parseval")?;
                sigma.iter().map(|&x| Job::GaussianParseval(x)).collect()
            }
            CheckSpec::GaussianParsevalSymmetry { sigma, .. } => {
                non_empty(sigma, "sigma", "gaussian_parseval_symmetry")?;
                sigma.iter().map(|&x| Job::GaussianParsevalSymmetry(x)).collect()
            }
            CheckSpec::ThetaParseval { sigma, .. } => {
                non_empty(sigma, "sigma", "theta_parseval")?;
                sigma.iter().map(|&x| Job::ThetaParseval(x)).collect()
            }
            CheckSpec::ThetaFunctional { t, .. } => {
                non_empty(t, "t", "theta_functional")?;
                t.iter().map(|&t| Job::ThetaFunctional(t)).collect()
            }
            CheckSpec::MellinConvolution { kernels, s, .. } => {
                non_empty(kernels, "kernels", "mellin_convolution")?;
                non_empty(s, "s", "mellin_convolution")?;
                let mut jobs = Vec::new();
                for [f, g] in kernels {
                    let kernel = |name: &str| {
                        MellinKernel::from_name(name).ok_or_else(|| Error::Config(format!("unknown kernel `{name}`")))
                    };
                    let (kf, kg) = (kernel(f)?, kernel(g)?);
                    jobs.extend(s.iter().map(|p| Job::MellinConvolution(kf, kg, complex(p))));
                }
                jobs
            }
        };
        Ok(jobs)
    }
}

/// A job together with its optional tolerance override.
#[derive(Debug, Clone)]
pub struct PlannedCheck {
    pub job: Job,
    pub tolerance: Option<f64>,
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: SuiteConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        if config.checks.is_empty() {
            return Err(Error::Config("the suite lists no checks".into()));
        }
        Ok(config)
    }

    /// Accuracy for the run. `env_max_evals` replaces the default budget but
    /// never a budget written in the config.
    pub fn accuracy(&self, env_max_evals: Option<usize>) -> Result<AccuracySpec> {
        let d = AccuracySpec::default();
        let a = &self.accuracy;
        let max_evals = a.max_evals.or(env_max_evals).unwrap_or(d.max_evals);
        AccuracySpec::new(a.abs_tol.unwrap_or(d.abs_tol), a.rel_tol.unwrap_or(d.rel_tol), max_evals)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn constants(&self) -> Constants {
        let d = Constants::default();
        let c = &self.constants;
        Constants {
            euler_gamma: c.euler_gamma.unwrap_or(d.euler_gamma),
            log_two_pi: c.log_two_pi.unwrap_or(d.log_two_pi),
            pi: c.pi.unwrap_or(d.pi),
        }
    }

    /// Every check in config order, with random strip points drawn from the seed.
    pub fn plan(&self) -> Result<Vec<PlannedCheck>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::new();
        for spec in &self.checks {
            if let Some(t) = spec.tolerance() {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::Config(format!("tolerance must be positive, got {t}")));
                }
            }
            out.extend(spec.expand(&mut rng)?.into_iter().map(|job| PlannedCheck { job, tolerance: spec.tolerance() }));
        }
        Ok(out)
    }
}

/// Runs the planned checks on `threads` workers. Results follow plan order.
///
/// A precondition error in any check aborts the run; numerical failures
/// become failed checks.
pub fn run_checks(
    plan: &[PlannedCheck],
    constants: &Constants,
    acc: &AccuracySpec,
    threads: usize,
) -> Result<Vec<IdentityCheck>> {
    acc.validate()?;
    let max_order = plan.iter().filter_map(|p| p.job.phi_order()).max();
    let evaluator = match max_order {
        Some(0) => return Err(Error::Domain("phi order must be at least 1".into())),
        Some(n) => match PhiEvaluator::build(n, acc) {
            Ok(ev) => Ok(Some(ev)),
            Err(e) if e.is_precondition() => return Err(e),
            Err(e) => Err(e),
        },
        None => Ok(None),
    };

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<IdentityCheck>>>> = Mutex::new(vec![None; plan.len()]);
    let workers = threads.clamp(1, plan.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(p) = plan.get(i) else { break };
                let r = match (&evaluator, p.job.phi_order()) {
                    (Err(e), Some(_)) => Err(e.clone()),
                    (ev, _) => p.job.run(ev.as_ref().ok().and_then(Option::as_ref), constants, acc),
                };
                results.lock().expect("result slot poisoned")[i] = Some(r);
            });
        }
    });

    let mut out = Vec::with_capacity(plan.len());
    for (p, r) in plan.iter().zip(results.into_inner().expect("result slot poisoned")) {
        let check = match r.expect("every job ran") {
            Ok(c) => match p.tolerance {
                Some(t) => c.with_tolerance(t),
                None => c,
            },
            Err(e) if e.is_precondition() => return Err(e),
            Err(e) => IdentityCheck::failed(p.job.name(), p.job.params(), p.tolerance.unwrap_or(f64::NAN), &e),
        };
        out.push(check);
    }
    Ok(out)
}

/// Default number of workers.
pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
