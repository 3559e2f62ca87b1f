//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/corpus.rs"]
mod corpus;

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use zid_core::identities::{
    check_fractional_mellin, check_gaussian_parseval_symmetry, check_laplace_asymptotic, check_mellin_convolution,
    check_phi_mellin, check_phi_parseval, check_theta_functional, check_theta_parseval, laplace_expansion_coefficient,
    IdentityCheck, MellinKernel,
};
use zid_core::phi::PhiEvaluator;
use zid_core::report::Report;
use zid_core::special::{gamma, zeta};
use zid_core::{AccuracySpec, Complex64, Constants};

/// mpmath: largest φ₂(x)/ln(x + 1) over the grid `x = 10^{3i/60}`, attained at `x = 10^{0.05}`.
const GROWTH_RATIO_MAX: f64 = 1.242_338_969_248_654_4;
/// Remainder constant for M = 2: twice |ζ(−5)/(5!·(−5))| = 1/75600.
const LAPLACE_C_M2: f64 = 1.0 / 75_600.0;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn acc() -> AccuracySpec {
    AccuracySpec::default()
}

fn fractional_mellin() -> Outcome {
    let mut worst: (f64, Duration) = (0.0, Duration::ZERO);
    for s in [c(0.5, 0.0), c(0.25, 3.0), c(0.75, -2.0)] {
        let t = Instant::now();
        let Ok(r) = check_fractional_mellin(s, &acc()) else {
            return outcome(false, format!("s = {s}: evaluation failed"));
        };
        let dt = t.elapsed();
        worst = (worst.0.max(r.rel_err), worst.1.max(dt));
        if !(r.rel_err <= 1e-8 && r.converged && dt < Duration::from_secs(5)) {
            return outcome(false, format!("s = {s}: rel_err {:.2e}, {:.2?}", r.rel_err, dt));
        }
    }
    outcome(true, format!("max rel_err {:.2e}, slowest {:.2?}", worst.0, worst.1))
}

fn phi_mellin(ev3: &PhiEvaluator, build: Duration) -> Outcome {
    let t = Instant::now();
    let ev2 = ev3.child().expect("order 2");
    let ev1 = ev2.child().expect("order 1");
    let s = c(0.5, 0.0);
    let (Ok(a), Ok(b)) = (check_fractional_mellin(s, &acc()), check_phi_mellin(1, s, ev1, &acc())) else {
        return outcome(false, "first order evaluation failed");
    };
    // the n = 1 transform is −ζ(s)/s while the fractional-part transform is ζ(s)/s
    let lhs_gap = (a.lhs() + b.lhs()).norm() / a.lhs().norm();
    let rhs_gap = (a.rhs() + b.rhs()).norm() / a.rhs().norm();
    if !(lhs_gap <= 1e-10 && rhs_gap <= 1e-10 && (a.rel_err - b.rel_err).abs() <= 1e-10) {
        return outcome(
            false,
            format!("n = 1 differs from the fractional check: lhs {lhs_gap:.2e}, rhs {rhs_gap:.2e}"),
        );
    }
    let cases = [(2, c(0.5, 0.0), ev2, 1e-5), (2, c(0.3, 2.0), ev2, 1e-5), (3, c(0.5, 0.0), ev3, 1e-4)];
    let mut rels = Vec::new();
    for (n, s, ev, tol) in cases {
        match check_phi_mellin(n, s, ev, &acc()) {
            Ok(r) if r.rel_err <= tol && r.converged => rels.push(format!("n={n} s={s}: {:.2e}", r.rel_err)),
            Ok(r) => return outcome(false, format!("n = {n}, s = {s}: rel_err {:.2e} > {tol:e}", r.rel_err)),
            Err(e) => return outcome(false, format!("n = {n}, s = {s}: {e}")),
        }
    }
    let total = build + t.elapsed();
    outcome(total < Duration::from_secs(600), format!("{}; total {:.1?} with builds", rels.join(", "), total))
}

fn small_x(ev3: &PhiEvaluator) -> Outcome {
    let ev2 = ev3.child().expect("order 2");
    let mut worst = 0.0f64;
    for (n, ev) in [(2u32, ev2), (3, ev3)] {
        let fact: f64 = (1..n).map(f64::from).product();
        for x in [1e-3f64, 1e-4, 1e-5] {
            let l = (1.0 / x).ln();
            let Ok(phi) = ev.phi(x) else {
                return outcome(false, format!("phi_{n}({x}) failed"));
            };
            let dev = (phi * fact / (x * l.powi(n as i32 - 1)) - 1.0).abs();
            worst = worst.max(dev * l / 5.0);
            if dev > 5.0 / l {
                return outcome(false, format!("n = {n}, x = {x}: deviation {dev:.3} > {:.3}", 5.0 / l));
            }
        }
    }
    outcome(true, format!("largest deviation is {:.2} of the allowed bound", worst))
}

fn growth(ev3: &PhiEvaluator) -> Outcome {
    let ev2 = ev3.child().expect("order 2");
    let mut max = 0.0f64;
    for i in 0..=60 {
        let x = 10f64.powf(3.0 * f64::from(i) / 60.0);
        match ev2.phi_growth_ratio(x) {
            Ok(r) => max = max.max(r),
            Err(e) => return outcome(false, format!("x = {x}: {e}")),
        }
    }
    outcome(max <= 1.5 * GROWTH_RATIO_MAX, format!("max ratio {max:.6} vs fixture {GROWTH_RATIO_MAX:.6}"))
}

fn phi_parseval(ev3: &PhiEvaluator) -> Outcome {
    let ev1 = ev3.child().and_then(PhiEvaluator::child).expect("order 1");
    let t = Instant::now();
    let mut notes = Vec::new();
    for sigma in [0.5, 0.75] {
        let r = match check_phi_parseval(1, sigma, ev1, &acc()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("sigma = {sigma}: {e}")),
        };
        let honest = r.err_estimate() >= r.abs_err / 10.0;
        if !(r.rel_err <= 1e-3 && r.converged && honest) {
            return outcome(
                false,
                format!(
                    "sigma = {sigma}: rel_err {:.2e}, estimate {:.2e}, abs_err {:.2e}",
                    r.rel_err,
                    r.err_estimate(),
                    r.abs_err
                ),
            );
        }
        notes.push(format!(
            "sigma={sigma}: rel {:.1e}, est {:.1e} vs err {:.1e}",
            r.rel_err,
            r.err_estimate(),
            r.abs_err
        ));
    }
    let dt = t.elapsed();
    outcome(dt < Duration::from_secs(600), format!("{}; {:.1?}", notes.join(", "), dt))
}

fn laplace() -> Outcome {
    let t = Instant::now();
    let k = Constants::default();
    let c2 = laplace_expansion_coefficient(2).expect("c2").abs();
    let (Ok(a), Ok(b)) =
        (check_laplace_asymptotic(100.0, 1, &k, &acc()), check_laplace_asymptotic(50.0, 2, &k, &acc()))
    else {
        return outcome(false, "evaluation failed");
    };
    let bound_a = c2 * 100f64.powi(-3);
    let bound_b = LAPLACE_C_M2 * 50f64.powi(-5);
    let dt = t.elapsed();
    outcome(
        a.abs_err < bound_a && b.abs_err <= bound_b && a.converged && b.converged && dt < Duration::from_secs(60),
        format!(
            "T=100 M=1: {:.6e} < {bound_a:.6e}; T=50 M=2: {:.3e} <= {bound_b:.3e}; {:.1?}",
            a.abs_err, b.abs_err, dt
        ),
    )
}

fn theta_parseval() -> Outcome {
    let k = Constants::default();
    let mut notes = Vec::new();
    for sigma in [0.3, 0.5, 0.7] {
        let t = Instant::now();
        let r = match check_theta_parseval(sigma, &k, &acc()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("sigma = {sigma}: {e}")),
        };
        let dt = t.elapsed();
        if !(r.rel_err <= 1e-6 && r.converged && dt < Duration::from_secs(300)) {
            return outcome(false, format!("sigma = {sigma}: rel_err {:.2e}, {:.1?}", r.rel_err, dt));
        }
        notes.push(format!("{sigma}: {:.1e}", r.rel_err));
    }
    for sigma in [0.3, 0.7] {
        let r = match check_gaussian_parseval_symmetry(sigma, &k, &acc()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("symmetry at sigma = {sigma}: {e}")),
        };
        // invariance holds to the combined quadrature error of both sides
        let allowed = r.err_estimate().max(1e-12 * r.lhs().norm());
        if !(r.abs_err <= allowed && r.converged) {
            return outcome(false, format!("symmetry at sigma = {sigma}: {:.2e} > {allowed:.2e}", r.abs_err));
        }
        notes.push(format!("sym {sigma}: {:.1e} <= {allowed:.1e}", r.abs_err));
    }
    outcome(true, notes.join(", "))
}

fn theta_functional() -> Outcome {
    let k = Constants::default();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let t = 10f64.powf(-1.0 + 2.0 * f64::from(i) / 19.0);
        match check_theta_functional(t, &k, &acc()) {
            Ok(r) => worst = worst.max(r.abs_err),
            Err(e) => return outcome(false, format!("t = {t}: {e}")),
        }
    }
    outcome(worst <= 1e-12, format!("max |difference| {worst:.2e} over 20 points"))
}

fn convolutions() -> Outcome {
    let (g, i) = (MellinKernel::gaussian(), MellinKernel::indicator());
    let s = c(0.5, 0.0);
    let mut notes = Vec::new();
    for (f, h, tol) in [(g, g, 1e-6), (i, g, 1e-5), (i, i, 1e-8)] {
        let r: IdentityCheck = match check_mellin_convolution(&f, &h, s, &acc()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("{}*{}: {e}", f.name, h.name)),
        };
        let ok = r.passed && r.tolerance_used <= tol;
        if !ok {
            return outcome(false, format!("{}*{}: rel_err {:.2e} > {tol:e}", f.name, h.name, r.rel_err));
        }
        notes.push(format!("{}*{}: {:.1e}", f.name, h.name, r.rel_err));
    }
    outcome(true, notes.join(", "))
}

fn spot_checks() -> Outcome {
    let sacc = AccuracySpec::special();
    let z2 = zeta(c(2.0, 0.0), &sacc).map(|z| (z.re - std::f64::consts::PI.powi(2) / 6.0).abs());
    let z0 = zeta(c(0.0, 0.0), &sacc).map(|z| (z.re + 0.5).abs());
    let g5 = gamma(c(5.0, 0.0)).map(|g| (g.re - 24.0).abs());
    let (Ok(z2), Ok(z0), Ok(g5)) = (z2, z0, g5) else {
        return outcome(false, "special function evaluation failed");
    };
    let cases = corpus::run();
    let dishonest: Vec<&str> = cases.iter().filter(|c| !c.honest()).map(|c| c.name).collect();
    outcome(
        z2 <= 1e-12 && z0 <= 1e-12 && g5 <= 1e-12 * 24.0 && cases.len() == 20 && dishonest.is_empty(),
        format!(
            "zeta(2) {z2:.1e}, zeta(0) {z0:.1e}, gamma(5) {g5:.1e}; corpus {}/{} honest {:?}",
            cases.len() - dishonest.len(),
            cases.len(),
            dishonest
        ),
    )
}

fn suite_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../suites/default.toml")
}

/// Runs `zid verify` and returns its exit code and parsed report.
fn run_suite(config: &std::path::Path, out: &std::path::Path) -> Option<(i32, Report)> {
    let status = Command::new(env!("CARGO_BIN_EXE_zid"))
        .args(["verify", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("ZID_MAX_EVALS")
        .stderr(std::process::Stdio::null())
        .status()
        .ok()?;
    let report = Report::from_json(&fs::read_to_string(out).ok()?).ok()?;
    Some((status.code()?, report))
}

fn cli_contract() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).expect("temp dir");
    let Some((code, report)) = run_suite(&suite_path(), &dir.join("default.json")) else {
        return outcome(false, "default suite did not produce a report");
    };
    if code != 0 || report.total < 25 || !report.all_passed() {
        return outcome(false, format!("default suite: exit {code}, {}/{} passed", report.passed, report.total));
    }
    let base = fs::read_to_string(suite_path()).expect("default suite");
    let d = Constants::default();
    let mut notes = vec![format!("default: exit 0, {} checks", report.total)];
    for (key, value) in [("euler_gamma", d.euler_gamma), ("log_two_pi", d.log_two_pi), ("pi", d.pi)] {
        let path = dir.join(format!("{key}.toml"));
        fs::write(&path, format!("{base}\n[constants]\n{key} = {:?}\n", value + 1e-6)).expect("write config");
        let Some((code, report)) = run_suite(&path, &dir.join(format!("{key}.json"))) else {
            return outcome(false, format!("{key} mutation produced no report"));
        };
        if code != 1 || report.failed == 0 {
            return outcome(false, format!("{key} + 1e-6 went unnoticed (exit {code})"));
        }
        notes.push(format!("{key}+1e-6: {} failures", report.failed));
    }
    outcome(true, notes.join(", "))
}

fn main() {
    let t = Instant::now();
    let built = PhiEvaluator::build(3, &acc());
    let build = t.elapsed();
    let ev3 = match &built {
        Ok(ev) => Some(ev),
        Err(e) => {
            println!("phi evaluator build failed: {e}");
            None
        }
    };
    let needs_phi = |f: &dyn Fn(&PhiEvaluator) -> Outcome| match ev3 {
        Some(ev) => f(ev),
        None => outcome(false, "no phi evaluator"),
    };

    let criteria: Vec<Criterion<'_>> = vec![
        ("fractional-part Mellin transform", Box::new(fractional_mellin)),
        ("phi_n Mellin transform", Box::new(|| needs_phi(&|ev| phi_mellin(ev, build)))),
        ("small-x asymptotics of phi_n", Box::new(|| needs_phi(&small_x))),
        ("growth of phi_2 over [1, 1000]", Box::new(|| needs_phi(&growth))),
        ("phi_1 Parseval identity", Box::new(|| needs_phi(&phi_parseval))),
        ("Laplace transform expansion", Box::new(laplace)),
        ("theta Parseval identity and symmetry", Box::new(theta_parseval)),
        ("theta functional equation", Box::new(theta_functional)),
        ("Mellin convolution of kernels", Box::new(convolutions)),
        ("special-function spot checks and quadrature honesty", Box::new(spot_checks)),
        ("command-line suite and mutation sensitivity", Box::new(cli_contract)),
    ];

    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}  {title}: {} [{:.1?}]", i + 1, o.detail, t.elapsed());
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
