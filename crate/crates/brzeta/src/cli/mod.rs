//! The `brzeta` command line.
//!
//! Exit codes: 0 on success, 1 on a computation or input error, 2 when a
//! check failed.

mod config;
mod parse;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::RunConfig;
pub use parse::parse_forest;

use crate::algebra::{flatten, EsAlgebra, EsLetter, Forest};
use crate::checks::{run_suite, Suite};
use crate::numerics::parse_rational;
use crate::zeta::{
    numeric_forest_value, regularised_germ, renormalised_bzv, BzvRequest, BzvResult, Check, Mode, Route,
};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "brzeta", version, about = "Regularised and renormalised branched zeta values")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for numeric evaluation.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON file with run settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// -1 for strict sums, 1 for weak sums (for `flatten`: the quasi-shuffle parameter).
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<i32>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Largest Bernoulli index used by the exact engine.
    #[arg(long, global = true)]
    em_truncation: Option<u32>,
    /// Pole order assumed by numeric fitting.
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    #[arg(long, global = true)]
    denominator_bound: Option<u64>,
    /// Inner product file: {"entries": [[i, j, "p/q"], ...]}.
    #[arg(long, global = true)]
    q_file: Option<PathBuf>,
    /// Result cache; BRZETA_CACHE_DIR takes precedence.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Branched,
    Words,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Algebra,
    Germ,
    Symbol,
    Zeta,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    List,
    Clear,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a forest into a combination of words.
    Flatten { forest: String },
    /// Regularised germ, renormalised value, or value at a point.
    Zeta {
        forest: String,
        #[arg(long, value_enum, default_value = "branched")]
        route: RouteArg,
        /// Compute the renormalised value.
        #[arg(long)]
        renormalise: bool,
        /// Evaluate the regularised germ at a point, e.g. "1=1/10,2=-1/7".
        #[arg(long)]
        at: Option<String>,
    },
    /// Run invariant suites.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
    /// Inspect or empty the result cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.lambda {
            c.lambda = v;
        }
        if let Some(m) = self.mode {
            c.mode = match m {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Numeric => Mode::Numeric,
                ModeArg::Auto => Mode::Auto,
            };
        }
        if let Some(v) = self.precision_bits {
            c.precision_bits = v;
        }
        if let Some(v) = self.em_truncation {
            c.em_truncation = v;
        }
        if self.degree_bound.is_some() {
            c.degree_bound = self.degree_bound;
        }
        if let Some(v) = self.denominator_bound {
            c.denominator_bound = v;
        }
        if self.q_file.is_some() {
            c.q_file = self.q_file.clone();
        }
        if self.cache_dir.is_some() {
            c.cache_dir = self.cache_dir.clone();
        }
        if let Some(cache) = c.cache() {
            c.cache_dir = Some(cache.dir().to_path_buf());
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => 1,
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(n) = cli.threads {
        // fails only if a pool already exists, e.g. when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = cli.run_config()?;
    match &cli.command {
        Command::Flatten { forest } => flatten_command(cli.json, &cfg, forest, out),
        Command::Zeta { forest, route, renormalise, at } => {
            let route = match route {
                RouteArg::Branched => Route::Branched,
                RouteArg::Words => Route::Words,
                RouteArg::Both => Route::Both,
            };
            zeta_command(cli.json, &cfg, forest, route, *renormalise, at.as_deref(), out)
        }
        Command::Check { suite } => {
            let suite = match suite {
                SuiteArg::Algebra => Suite::Algebra,
                SuiteArg::Germ => Suite::Germ,
                SuiteArg::Symbol => Suite::Symbol,
                SuiteArg::Zeta => Suite::Zeta,
                SuiteArg::All => Suite::All,
            };
            check_command(cli.json, suite, out)
        }
        Command::Cache { action } => cache_command(cli.json, &cfg, *action, out),
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

const MERGE_POLICY: &str = "merged letters join labels with '+' and add weights";

fn flatten_command(json: bool, cfg: &RunConfig, text: &str, out: &mut dyn Write) -> Result<i32> {
    let f = parse_forest(text)?;
    f.check_proper(&EsAlgebra)?;
    let lambda = Rational::from(cfg.lambda);
    let words = flatten(&lambda, &f, &EsAlgebra)?;
    if json {
        let terms: Vec<Value> = words
            .iter()
            .map(|(w, c)| {
                let letters: Vec<Value> = w
                    .letters()
                    .iter()
                    .map(|l| json!({ "labels": l.labels.iter().collect::<Vec<_>>(), "weight": l.weight.to_string() }))
                    .collect();
                json!({ "coefficient": c.to_string(), "word": w.to_string(), "letters": letters })
            })
            .collect();
        emit(
            out,
            &json!({ "forest": f.to_string(), "lambda": cfg.lambda, "words": terms, "merge_policy": MERGE_POLICY }),
        )?;
    } else {
        writeln!(out, "forest: {f}")?;
        writeln!(out, "quasi-shuffle parameter: {}", cfg.lambda)?;
        for (w, c) in words.iter() {
            writeln!(out, "{c:>8}  {w}")?;
        }
        writeln!(out, "{} word(s); {MERGE_POLICY}", words.len())?;
    }
    Ok(0)
}

fn parse_point(text: &str) -> Result<BTreeMap<u32, Rational>> {
    let mut z = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) =
            part.split_once('=').ok_or_else(|| Error::Invalid(format!("expected label=value, got {part:?}")))?;
        let k: u32 = k.trim().parse().map_err(|_| Error::Invalid(format!("bad label {k:?}")))?;
        if z.insert(k, parse_rational(v)?).is_some() {
            return Err(Error::DuplicateLabel(k));
        }
    }
    Ok(z)
}

#[derive(Serialize)]
struct PointValue {
    point: BTreeMap<u32, String>,
    mode: Mode,
    /// Exact value, when the exact germ is available.
    exact: Option<String>,
    decimal: String,
}

fn value_at(cfg: &RunConfig, f: &Forest<EsLetter>, route: Route, z: &BTreeMap<u32, Rational>) -> Result<PointValue> {
    let op = cfg.operator()?;
    let engine = cfg.engine(route);
    let point = z.iter().map(|(k, v)| (*k, v.to_string())).collect();
    if engine.mode != Mode::Numeric {
        match regularised_germ(f, op, route, &engine.exact).and_then(|(g, _)| g.evaluate_point(z)) {
            Ok(v) => {
                let d = v.numeric_value(cfg.precision_bits)?.to_string_radix(10, Some(20));
                return Ok(PointValue { point, mode: Mode::Exact, exact: Some(v.to_string()), decimal: d });
            }
            Err(e) if engine.mode == Mode::Exact => return Err(e),
            Err(_) => {}
        }
    }
    let v = numeric_forest_value(f, op, z, &engine.fit.numeric)?;
    Ok(PointValue { point, mode: Mode::Numeric, exact: None, decimal: v.to_string_radix(10, Some(20)) })
}

fn zeta_command(
    json: bool,
    cfg: &RunConfig,
    text: &str,
    route: Route,
    renormalise: bool,
    at: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32> {
    let f = parse_forest(text)?;
    f.check_proper(&EsAlgebra)?;
    let op = cfg.operator()?;
    let engine = cfg.engine(route);

    let mut germ = None;
    let mut checks: Vec<Check> = Vec::new();
    if !renormalise && at.is_none() {
        if engine.mode == Mode::Numeric {
            return Err(Error::Invalid("the regularised germ needs exact mode; use --renormalise or --at".into()));
        }
        let (g, c) = regularised_germ(&f, op, route, &engine.exact)?;
        germ = Some(g);
        checks.extend(c);
    }
    let point = match at {
        Some(t) => Some(value_at(cfg, &f, route, &parse_point(t)?)?),
        None => None,
    };
    let renormalised: Option<BzvResult> = if renormalise {
        let req = BzvRequest { forest: f.clone(), op, q: cfg.inner_product()?, config: engine };
        Some(match cfg.cache() {
            Some(cache) => cache.renormalised_bzv(&req)?,
            None => renormalised_bzv(&req)?,
        })
    } else {
        None
    };
    let failed = checks.iter().chain(renormalised.iter().flat_map(|r| r.checks.iter())).any(|c| !c.passed);

    if json {
        emit(
            out,
            &json!({
                "config": cfg,
                "forest": f.to_string(),
                "lambda": cfg.lambda,
                "route": route,
                "germ": germ,
                "checks": checks,
                "at": point,
                "renormalised": renormalised,
            }),
        )?;
    } else {
        writeln!(out, "forest:    {f}")?;
        writeln!(out, "lambda:    {} ({} sums)", cfg.lambda, if cfg.lambda < 0 { "strict" } else { "weak" })?;
        if let Some(g) = &germ {
            writeln!(out, "germ:      {g}")?;
        }
        if let Some(p) = &point {
            let at: Vec<String> = p.point.iter().map(|(k, v)| format!("z{k}={v}")).collect();
            match &p.exact {
                Some(e) => writeln!(out, "at {}: {e} ≈ {}", at.join(", "), p.decimal)?,
                None => writeln!(out, "at {}: {} (numeric)", at.join(", "), p.decimal)?,
            }
        }
        if let Some(r) = &renormalised {
            writeln!(out, "mode:      {}", if r.mode == Mode::Exact { "exact" } else { "numeric" })?;
            match r.exact_value() {
                Some(v) => writeln!(out, "value:     {v} ≈ {}", r.decimal())?,
                None => writeln!(out, "value:     {}", r.decimal())?,
            }
            let rational = match &r.rational {
                crate::zeta::RationalOutcome::Exact { value } => format!("{value} (exact)"),
                crate::zeta::RationalOutcome::Reconstructed { value } => format!("{value} (reconstructed)"),
                crate::zeta::RationalOutcome::Transcendental { constants } => {
                    format!("no; constants {}", constants.join(", "))
                }
                crate::zeta::RationalOutcome::NotFound => "no fraction found".to_string(),
            };
            writeln!(out, "rational:  {rational}")?;
            for (k, v) in &r.residuals {
                writeln!(out, "residual:  {k} {v:e}")?;
            }
            for d in &r.diagnostics {
                writeln!(out, "note:      {d}")?;
            }
        }
        for c in checks.iter().chain(renormalised.iter().flat_map(|r| r.checks.iter())) {
            writeln!(out, "check:     {} {} ({})", c.name, if c.passed { "passed" } else { "FAILED" }, c.detail)?;
        }
    }
    Ok(if failed { 2 } else { 0 })
}

fn check_command(json: bool, suite: Suite, out: &mut dyn Write) -> Result<i32> {
    let reports = run_suite(suite);
    if json {
        emit(out, &serde_json::to_value(&reports)?)?;
    } else {
        for r in &reports {
            writeln!(out, "{}", r.line())?;
        }
    }
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { 2 })
}

fn cache_command(json: bool, cfg: &RunConfig, action: CacheAction, out: &mut dyn Write) -> Result<i32> {
    let cache = cfg
        .cache()
        .ok_or_else(|| Error::Invalid("no cache directory: pass --cache-dir or set BRZETA_CACHE_DIR".into()))?;
    match action {
        CacheAction::List => {
            let keys = cache.list()?;
            if json {
                let entries: Vec<Value> = keys
                    .iter()
                    .map(|k| {
                        let r: Option<BzvResult> = cache.get(k).ok().flatten();
                        json!({ "key": k, "forest": r.as_ref().map(|r| r.forest.clone()), "lambda": r.as_ref().map(|r| r.lambda) })
                    })
                    .collect();
                emit(out, &json!({ "dir": cache.dir(), "entries": entries }))?;
            } else {
                for k in &keys {
                    match cache.get::<BzvResult>(k) {
                        Ok(Some(r)) => writeln!(out, "{k}  λ={:<2} {}  {}", r.lambda, r.forest, r.decimal())?,
                        _ => writeln!(out, "{k}  (unreadable)")?,
                    }
                }
                writeln!(
                    out,
                    "{} entr{} in {}",
                    keys.len(),
                    if keys.len() == 1 { "y" } else { "ies" },
                    cache.dir().display()
                )?;
            }
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            if json {
                emit(out, &json!({ "dir": cache.dir(), "removed": n }))?;
            } else {
                writeln!(out, "removed {n} entr{} from {}", if n == 1 { "y" } else { "ies" }, cache.dir().display())?;
            }
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["brzeta"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn zeta_depth_one() {
        let (code, out, _) = run_str(&["zeta", "--lambda", "-1", "--renormalise", "T(s=-1)"]);
        assert_eq!(code, 0);
        assert!(out.contains("-1/12 (exact)"), "{out}");
    }

    #[test]
    fn flatten_corolla() {
        let (code, out, _) = run_str(&["flatten", "--lambda", "1", "T(s=1)[T(s=2),T(s=3)]"]);
        assert_eq!(code, 0);
        assert!(out.contains("(l=1,s=1; l=2,s=2; l=3,s=3)"), "{out}");
        assert!(out.contains("(l=1,s=1; l=3,s=3; l=2,s=2)"), "{out}");
        assert!(out.contains("(l=1,s=1; l=2+3,s=5)"), "{out}");
    }

    #[test]
    fn bad_input_is_error() {
        let (code, _, err) = run_str(&["zeta", "T(s=2)[T(s=2)"]);
        assert_eq!(code, 1);
        assert!(err.contains("position 13"), "{err}");
        assert_eq!(run_str(&["zeta", "--lambda", "0", "T(s=1)"]).0, 1);
        assert_eq!(run_str(&["nonsense"]).0, 1);
    }

    #[test]
    fn point_syntax() {
        let z = parse_point("1=1/10, 2=-0.5").unwrap();
        assert_eq!(z[&2], Rational::from((-1, 2)));
        assert!(parse_point("1=1,1=2").is_err());
        assert!(parse_point("x").is_err());
    }
}
