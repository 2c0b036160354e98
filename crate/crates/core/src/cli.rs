//! Command-line front end. `run` is the whole program; the binary only
//! forwards process arguments and streams.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::classification::{classify, smallest_factor_2, weyl_complexity_2};
use crate::config::{seed_from_env, RunConfig};
use crate::congruence::{intersective_verdict, joint_verdict, DEFAULT_EXPONENT_CAP};
use crate::dynamics::boxes::RestrictedOutcome;
use crate::dynamics::{analytic_multiple_limit, empirical_multiple_average, restricted_average, weighted_average, SymbolicReal};
use crate::error::{Error, Result};
use crate::extremal::search::EXACT_LIMIT;
use crate::extremal::{
    behrend_set, max_solution_free, run_counterexample, type_estimate, Construction, EstimateMode, LinearEquation,
    SearchMode,
};
use crate::gallery::gallery;
use crate::report::{self, complex, real, Provenance, SeriesRow};
use crate::PolyFamily;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "polyerg", version, about = "Characteristic factors, congruences and torus simulations for polynomial multiple averages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall time in the provenance block (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// CSV time series output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weyl complexity, family type and smallest characteristic factor.
    Classify {
        #[arg(required = true, num_args = 2..=3)]
        polynomials: Vec<String>,
    },
    /// Solvability of p(n) = 0 mod m for every m.
    Congruence {
        #[arg(required = true)]
        polynomials: Vec<String>,
        #[arg(long, default_value_t = 100)]
        prime_bound: u64,
        #[arg(long, default_value_t = DEFAULT_EXPONENT_CAP)]
        exp_cap: u32,
        /// Ask for common roots of all polynomials.
        #[arg(long)]
        joint: bool,
    },
    /// Empirical multiple averages next to the analytic limit.
    Simulate(SeriesArgs),
    /// As simulate, failing when the last N misses the limit.
    VerifyLimit(SeriesArgs),
    /// Correlations averaged over a Bohr-type set of times.
    Restricted(ConfigArgs),
    /// Averages weighted by a step function of n*beta.
    Weighted(ConfigArgs),
    /// Largest subsets of {1..N} free of distinct-entry solutions.
    Extremal {
        /// Coefficient list, e.g. "1,8,-6,-3"; repeat for several equations.
        #[arg(long = "equation", required = true, allow_hyphen_values = true)]
        equations: Vec<String>,
        #[arg(long = "N")]
        n: u64,
        /// exact, greedy or behrend.
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Comma-separated N values for a growth-exponent fit.
        #[arg(long, value_delimiter = ',')]
        type_estimate: Vec<u64>,
    },
    /// Finite-N correlation bounds for the skew-product constructions.
    Counterexample {
        /// i (shifts 2n, 3n, 4n) or ii (shifts n, 2n, n^2).
        #[arg(long, default_value = "i")]
        construction: String,
        /// Defaults to 32 for i and 24 for ii.
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value = "sqrt2")]
        alpha: String,
        /// Exponent for the mu(A)^c comparison; fitted from |Λ| when absent.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Worked examples against embedded goldens.
    Gallery,
}

struct Outcome {
    command: &'static str,
    config: Value,
    body: Map<String, Value>,
    csv: Option<(PathBuf, String)>,
    failure: Option<String>,
}

impl Outcome {
    fn new(command: &'static str, config: Value, body: Map<String, Value>) -> Self {
        Outcome { command, config, body, csv: None, failure: None }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let start = Instant::now();
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let wall = cli.timing.then(|| start.elapsed().as_secs_f64());
    let report = report::envelope(outcome.command, outcome.config, outcome.body, wall);
    let text = report::to_text(&report);
    if let Err(e) = emit(&text, cli.out.as_deref(), stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if let Some((path, body)) = &outcome.csv {
        if let Err(e) = std::fs::write(path, body) {
            let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    match outcome.failure {
        Some(msg) => {
            let _ = writeln!(stderr, "verification failed: {msg}");
            EXIT_VERIFY
        }
        None => EXIT_OK,
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Classify { polynomials } => cmd_classify(polynomials),
        Command::Congruence { polynomials, prime_bound, exp_cap, joint } => {
            cmd_congruence(polynomials, *prime_bound, *exp_cap, *joint)
        }
        Command::Simulate(a) => cmd_series("simulate", a, false),
        Command::VerifyLimit(a) => cmd_series("verify-limit", a, true),
        Command::Restricted(a) => cmd_restricted(&a.config),
        Command::Weighted(a) => cmd_weighted(&a.config),
        Command::Extremal { equations, n, mode, type_estimate } => cmd_extremal(equations, *n, mode, type_estimate),
        Command::Counterexample { construction, n, n_max, alpha, delta } => {
            cmd_counterexample(construction, *n, *n_max, alpha, *delta)
        }
        Command::Gallery => cmd_gallery(),
    }
}

fn exact_note(body: &mut Map<String, Value>) {
    body.insert("numeric_provenance".into(), json!(Provenance::Exact.label()));
}

fn cmd_classify(polys: &[String]) -> Result<Outcome> {
    let f = PolyFamily::parse(polys)?;
    let config = json!({ "polynomials": polys });
    let mut body = Map::new();
    body.insert("family".into(), json!(f.members().iter().map(ToString::to_string).collect::<Vec<_>>()));
    if f.len() == 3 {
        body.extend(report::classification_json(&classify(&f)?));
    } else {
        body.insert("weyl_complexity".into(), json!(weyl_complexity_2(&f)?.value()));
        body.insert("smallest_factor".into(), json!(smallest_factor_2(&f)?.to_string()));
    }
    exact_note(&mut body);
    Ok(Outcome::new("classify", config, body))
}

fn cmd_congruence(polys: &[String], prime_bound: u64, exp_cap: u32, joint: bool) -> Result<Outcome> {
    let f = PolyFamily::parse(polys)?;
    let config = json!({ "polynomials": polys, "prime_bound": prime_bound, "exp_cap": exp_cap, "joint": joint });
    let verdicts: Vec<Value> = if joint {
        let mut v = report::verdict_json(&joint_verdict(&f, prime_bound, exp_cap)?);
        v["polynomials"] = json!(polys);
        vec![v]
    } else {
        f.members()
            .iter()
            .zip(polys)
            .map(|(p, src)| {
                let mut v = report::verdict_json(&intersective_verdict(p, prime_bound, exp_cap)?);
                v["polynomials"] = json!([src]);
                Ok(v)
            })
            .collect::<Result<_>>()?
    };
    let mut body = Map::new();
    body.insert("verdicts".into(), json!(verdicts));
    exact_note(&mut body);
    Ok(Outcome::new("congruence", config, body))
}

fn load(path: &Path) -> Result<(RunConfig, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    Ok((RunConfig::parse(&text)?, text))
}

fn echo(cfg: &RunConfig, seed: u64) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v["seed"] = json!(seed);
    v
}

fn cmd_series(command: &'static str, args: &SeriesArgs, verify: bool) -> Result<Outcome> {
    let (cfg, _) = load(&args.config.config)?;
    let r = cfg.resolve(seed_from_env()?)?;
    let sim = &cfg.simulate;
    if sim.n_values.is_empty() || sim.n_values.iter().any(|&n| n <= sim.m) {
        return Err(Error::Config("simulate.n_values must be nonempty and exceed simulate.m".into()));
    }
    let analytic = if r.map.is_rotation() || r.map.is_quasi_standard() {
        let x = r.x0.iter().map(|&v| SymbolicReal::from_f64(v)).collect::<Result<Vec<_>>>()?;
        Some(analytic_multiple_limit(&r.map, &r.family, &r.characters, &x, &r.basis)?)
    } else if verify {
        return Err(Error::Config("verify-limit needs a rotation or a quasi-standard map".into()));
    } else {
        None
    };
    let rows = sim
        .n_values
        .iter()
        .map(|&n| {
            let empirical = empirical_multiple_average(&r.map, &r.family, &r.characters, &r.x0, sim.m, n, &r.basis)?;
            Ok(SeriesRow { n, empirical, analytic })
        })
        .collect::<Result<Vec<_>>>()?;
    let series: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "N": row.n,
                "empirical": complex(row.empirical, Provenance::Empirical { n: row.n, seed: r.seed }),
                "abs_error": row.abs_error(),
            })
        })
        .collect();
    let mut body = Map::new();
    body.insert("analytic".into(), analytic.map(|a| complex(a, Provenance::Analytic)).unwrap_or(Value::Null));
    body.insert("series".into(), json!(series));
    let mut failure = None;
    if verify {
        let last = rows.last().and_then(SeriesRow::abs_error).expect("analytic present");
        let ok = last <= sim.tolerance;
        body.insert("tolerance".into(), json!(sim.tolerance));
        body.insert("verified".into(), json!(ok));
        if !ok {
            failure = Some(format!("|empirical - analytic| = {last} > {} at N = {}", sim.tolerance, rows.last().unwrap().n));
        }
    }
    let mut o = Outcome::new(command, echo(&cfg, r.seed), body);
    o.csv = args.csv.clone().map(|p| (p, report::csv(&rows)));
    o.failure = failure;
    Ok(o)
}

fn cmd_restricted(path: &Path) -> Result<Outcome> {
    let (cfg, _) = load(path)?;
    let r = cfg.resolve(seed_from_env()?)?;
    let rc = cfg.restricted.as_ref().ok_or_else(|| Error::Config("missing [restricted] section".into()))?;
    let a = rc.set(r.map.dim())?;
    let (q1, q2) = rc.gates()?;
    let outcome = restricted_average(&r.map, &a, &r.family, &q1, &q2, rc.delta, rc.n, &r.basis)?;
    let mu = a.measure();
    let power = mu.powi(r.family.len() as i32 + 1);
    let mut body = Map::new();
    body.insert("mu_a".into(), real(mu, Provenance::Exact));
    body.insert("mu_a_power".into(), real(power, Provenance::Exact));
    let average = match outcome {
        RestrictedOutcome::Average { value, samples, range } => {
            body.insert("average".into(), real(value, Provenance::Empirical { n: range, seed: r.seed }));
            body.insert("samples".into(), json!(samples));
            Some(value)
        }
        RestrictedOutcome::NoSamples { range } => {
            body.insert("average".into(), Value::Null);
            body.insert("samples".into(), json!(0));
            body.insert("note".into(), json!(format!("no admissible times below {range}")));
            None
        }
    };
    let mut failure = None;
    if let Some(min) = rc.min_value {
        let ok = average.is_some_and(|v| v >= min);
        body.insert("min_value".into(), json!(min));
        body.insert("verified".into(), json!(ok));
        if !ok {
            failure = Some(format!("restricted average {average:?} below {min}"));
        }
    }
    let mut o = Outcome::new("restricted", echo(&cfg, r.seed), body);
    o.failure = failure;
    Ok(o)
}

fn cmd_weighted(path: &Path) -> Result<Outcome> {
    let (cfg, _) = load(path)?;
    let r = cfg.resolve(seed_from_env()?)?;
    let wc = cfg.weighted.as_ref().ok_or_else(|| Error::Config("missing [weighted] section".into()))?;
    let h = wc.h.step_function()?;
    let beta = SymbolicReal::parse(&wc.beta, &r.basis)?;
    let w = weighted_average(&r.map, &r.family, &r.characters, &r.x0, &h, &beta, wc.n, &r.basis)?;
    let emp = Provenance::Empirical { n: wc.n, seed: r.seed };
    let gap = (w.weighted - w.predicted).norm();
    let mut body = Map::new();
    body.insert("weighted".into(), complex(w.weighted, emp));
    body.insert("unweighted".into(), complex(w.unweighted, emp));
    body.insert("integral_h".into(), complex(w.integral_h, Provenance::Exact));
    body.insert("predicted".into(), complex(w.predicted, emp));
    body.insert("abs_difference".into(), real(gap, emp));
    body.insert("warnings".into(), json!(w.warnings));
    let mut failure = None;
    if let Some(tol) = wc.tolerance {
        let ok = gap <= tol;
        body.insert("tolerance".into(), json!(tol));
        body.insert("verified".into(), json!(ok));
        if !ok {
            failure = Some(format!("|weighted - predicted| = {gap} > {tol}"));
        }
    }
    let mut o = Outcome::new("weighted", echo(&cfg, r.seed), body);
    o.failure = failure;
    Ok(o)
}

fn cmd_extremal(equations: &[String], n: u64, mode: &str, ns: &[u64]) -> Result<Outcome> {
    let eqs = equations.iter().map(|s| LinearEquation::parse(s)).collect::<Result<Vec<_>>>()?;
    let est_mode: EstimateMode = mode.parse()?;
    let config = json!({ "equations": equations, "N": n, "mode": mode, "type_estimate": ns });
    let set = match est_mode {
        EstimateMode::Behrend => {
            if eqs.len() != 1 || !eqs[0].equivalent(&LinearEquation::three_ap()) {
                return Err(Error::InvalidArgument("behrend mode only applies to the single equation 1,1,-2".into()));
            }
            behrend_set(n)?
        }
        EstimateMode::Exact => max_solution_free(&eqs, n, SearchMode::Exact)?,
        EstimateMode::Greedy => max_solution_free(&eqs, n, SearchMode::Greedy)?,
    };
    let mut body = Map::new();
    body.insert("set".into(), report::set_json(&set));
    if !ns.is_empty() {
        if eqs.len() != 1 {
            return Err(Error::InvalidArgument("type estimates take a single equation".into()));
        }
        let est = type_estimate(&eqs[0], ns, est_mode)?;
        body.insert("type_estimate".into(), serde_json::to_value(&est).expect("estimate serializes"));
    }
    exact_note(&mut body);
    Ok(Outcome::new("extremal", config, body))
}

fn cmd_counterexample(which: &str, n: Option<u64>, n_max: u64, alpha: &str, delta: Option<f64>) -> Result<Outcome> {
    let construction = match which {
        "i" | "1" | "first" => Construction::First,
        "ii" | "2" | "second" => Construction::Second,
        _ => return Err(Error::InvalidArgument(format!("unknown construction {which:?}; use i or ii"))),
    };
    let big_n = n.unwrap_or(match construction {
        Construction::First => 32,
        Construction::Second => 24,
    });
    let basis = crate::dynamics::Basis::default();
    let alpha_v = SymbolicReal::parse(alpha, &basis)?;
    let mode = if big_n <= EXACT_LIMIT { SearchMode::Exact } else { SearchMode::Greedy };
    let lambda = max_solution_free(&construction.required_equations(), big_n, mode)?;
    let rep = run_counterexample(construction, &lambda, &alpha_v, delta, 1..=n_max, &basis)?;
    let config = json!({ "construction": which, "N": big_n, "n_max": n_max, "alpha": alpha, "delta": delta });
    let mut body = Map::new();
    body.insert("construction".into(), json!(rep.construction));
    body.insert("equations".into(), json!(rep.equations));
    body.insert("lambda".into(), json!(rep.lambda));
    body.insert("lambda_is_maximum".into(), json!(lambda.maximum));
    body.insert("mu_a".into(), real(rep.mu_a, Provenance::Exact));
    body.insert("bound".into(), real(rep.bound, Provenance::Exact));
    body.insert("delta".into(), json!({ "value": rep.delta, "source": rep.delta_source }));
    body.insert("c_or_d".into(), json!(rep.exponent));
    body.insert("mu_a_power".into(), json!(rep.mu_a_power));
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "correlation": real(r.correlation, Provenance::Exact),
                "within_bound": r.within_bound,
                "below_mu_power": r.below_mu_power,
            })
        })
        .collect();
    body.insert("per_n_correlations".into(), json!(rows));
    body.insert("bound_satisfied".into(), json!(rep.bound_satisfied));
    let mut o = Outcome::new("counterexample", config, body);
    if !rep.bound_satisfied {
        o.failure = Some(format!("some correlation exceeds |Λ|/N^2 = {}", rep.bound));
    }
    Ok(o)
}

fn cmd_gallery() -> Result<Outcome> {
    let seed = seed_from_env()?.unwrap_or(crate::dynamics::boxes::DEFAULT_SEED);
    let rows = gallery(seed)?;
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{}: {}", r.section, r.name)).collect();
    let mut body = Map::new();
    body.insert("rows".into(), json!(rows.iter().map(|r| r.to_json()).collect::<Vec<_>>()));
    body.insert("all_passed".into(), json!(failed.is_empty()));
    let mut o = Outcome::new("gallery", json!({ "seed": seed }), body);
    if !failed.is_empty() {
        o.failure = Some(failed.join("; "));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("polyerg").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_json() {
        let (code, out, _) = call(&["classify", "n", "2*n", "n^2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["weyl_complexity"], 3);
        assert_eq!(v["family_type"], "E2");
        assert_eq!(v["smallest_factor"], "Affine2");
        assert_eq!(v["lower_bound_exceptional"], true);
        assert_eq!(v["provenance"]["tool"], "polyerg");
    }

    #[test]
    fn argument_errors() {
        let (code, _, err) = call(&["classify", "n", "n+1", "n^2"]);
        assert_eq!(code, 2);
        assert!(err.contains("not essentially distinct"), "{err}");
        let (code, out, _) = call(&["classify", "--", "-n", "n^2", "n^3"]);
        assert_eq!(code, 0, "{out}");
        let (code, _, err) = call(&["classify", "n", "n^2", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"), "{err}");
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["extremal", "--equation", "1,1,-2", "--N", "41"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn congruence_witness() {
        let (code, out, _) = call(&["congruence", "n^2-2", "--prime-bound", "20"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdicts"][0]["status"], "UnsolvableWitness");
        assert_eq!(v["verdicts"][0]["witness_modulus"], "4");
    }

    #[test]
    fn extremal_is_deterministic() {
        let a = call(&["extremal", "--equation", "1,8,-6,-3", "--N", "16"]);
        let b = call(&["extremal", "--equation", "1,8,-6,-3", "--N", "16"]);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(v["set"]["size"], 8);
        assert_eq!(v["set"]["maximum"], true);
    }
}
