//! Requests and results for renormalised branched zeta values.

use std::collections::BTreeMap;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::exact::{exact_forest_germ, exact_words_germ, flatten_for, ExactConfig};
use super::fit::{numeric_renormalised, FitConfig, NumericRoute};
use super::numeric::{numeric_forest_value, numeric_words_value};
use super::poles::candidate_poles;
use crate::algebra::{EsAlgebra, EsLetter, Forest};
use crate::germ::{renormalised_value, Germ};
use crate::linear::InnerProduct;
use crate::numerics::{rational_reconstruct_float, CoeffPoly};
use crate::symbol::SumOperator;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Numeric,
    /// Exact, falling back to numeric when the exact engine cannot certify.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    #[default]
    Branched,
    Words,
    /// Both, compared.
    Both,
}

/// Everything that influences a result besides the forest, the operator and `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub mode: Mode,
    pub route: Route,
    pub exact: ExactConfig,
    pub fit: FitConfig,
    pub denominator_bound: u64,
    pub rational_tolerance: f64,
    /// Pointwise tolerance when comparing numeric routes.
    pub route_tolerance: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Mode::Auto,
            route: Route::Branched,
            exact: ExactConfig::default(),
            fit: FitConfig::default(),
            denominator_bound: 1_000_000,
            rational_tolerance: 1e-9,
            route_tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BzvRequest {
    pub forest: Forest<EsLetter>,
    pub op: SumOperator,
    pub q: InnerProduct,
    pub config: EngineConfig,
}

impl BzvRequest {
    pub fn new(forest: Forest<EsLetter>, op: SumOperator) -> Self {
        BzvRequest { forest, op, q: InnerProduct::identity(), config: EngineConfig::default() }
    }
}

/// An invariant check that ran, and how it went.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// The renormalised value, symbolic when the exact engine produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BzvValue {
    Exact { value: CoeffPoly, decimal: String },
    Numeric { decimal: String },
}

/// What is known about rationality of the value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RationalOutcome {
    /// The exact value has no formal constants left.
    Exact {
        #[serde(with = "crate::numerics::serde_rational")]
        value: Rational,
    },
    /// Formal constants survive in the exact value.
    Transcendental {
        constants: Vec<String>,
    },
    /// A numeric value matched a small-denominator fraction.
    Reconstructed {
        #[serde(with = "crate::numerics::serde_rational")]
        value: Rational,
    },
    NotFound,
}

impl RationalOutcome {
    pub fn rational(&self) -> Option<&Rational> {
        match self {
            RationalOutcome::Exact { value } | RationalOutcome::Reconstructed { value } => Some(value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BzvResult {
    pub forest: String,
    pub lambda: i32,
    /// The mode that produced the value.
    pub mode: Mode,
    pub germ: Option<Germ>,
    pub value: BzvValue,
    pub rational: RationalOutcome,
    pub residuals: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub diagnostics: Vec<String>,
}

impl BzvResult {
    pub fn decimal(&self) -> &str {
        match &self.value {
            BzvValue::Exact { decimal, .. } | BzvValue::Numeric { decimal } => decimal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.decimal().parse().unwrap_or(f64::NAN)
    }

    pub fn exact_value(&self) -> Option<&CoeffPoly> {
        match &self.value {
            BzvValue::Exact { value, .. } => Some(value),
            BzvValue::Numeric { .. } => None,
        }
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn decimal(x: &Float) -> String {
    let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).floor() as usize - 2;
    x.to_string_radix(10, Some(digits.max(6)))
}

/// The regularised germ by the requested route, exact mode.
pub fn regularised_germ(
    f: &Forest<EsLetter>,
    op: SumOperator,
    route: Route,
    cfg: &ExactConfig,
) -> Result<(Germ, Vec<Check>)> {
    f.check_proper(&EsAlgebra)?;
    match route {
        Route::Branched => Ok((exact_forest_germ(f, op, cfg)?, Vec::new())),
        Route::Words => Ok((exact_words_germ(&flatten_for(f, op)?, op, cfg)?, Vec::new())),
        Route::Both => {
            let a = exact_forest_germ(f, op, cfg)?;
            let b = exact_words_germ(&flatten_for(f, op)?, op, cfg)?;
            let same = a.equals(&b)?;
            let detail = if same { "germs equal".to_string() } else { format!("branched {a} vs words {b}") };
            Ok((a, vec![Check::new("route_agreement", same, detail)]))
        }
    }
}

/// Points along which the numeric routes are compared.
fn comparison_points(f: &Forest<EsLetter>, op: SumOperator) -> Result<Vec<BTreeMap<u32, Rational>>> {
    let poles = candidate_poles(f, op)?;
    let vars = super::decorate::forest_vars(f);
    let mut out = Vec::new();
    for k in 1..=3i64 {
        let z: BTreeMap<u32, Rational> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, Rational::from((((i as i64 * 7 + k * 3) % 11) - 5, 97 + 10 * k))))
            .collect();
        if poles.iter().all(|l| l.eval(&z) != 0) {
            out.push(z);
        }
    }
    Ok(out)
}

fn is_fallback(e: &Error) -> bool {
    matches!(e, Error::Unsupported(_) | Error::InsufficientDepth(_) | Error::InsufficientTruncation(_))
}

/// `ev₀ ∘ π₊` of the regularised germ, with whatever checks apply.
pub fn renormalised_bzv(req: &BzvRequest) -> Result<BzvResult> {
    let f = &req.forest;
    f.check_proper(&EsAlgebra)?;
    if req.op == SumOperator::Integral {
        return Err(Error::Invalid("λ must be -1 or +1".into()));
    }
    let cfg = &req.config;
    let mut diagnostics = Vec::new();
    let weights: Vec<Rational> = f.decorations().iter().map(|d| d.weight.clone()).collect();
    let all_integer = weights.iter().all(|w| *w.denom() == 1);
    let theorem_range = !weights.is_empty() && all_integer && weights.iter().all(|w| *w <= -1);
    let extrapolated = !theorem_range && !weights.is_empty() && all_integer && weights.iter().all(|w| *w <= 0);

    let exact = match cfg.mode {
        Mode::Numeric => None,
        Mode::Exact => Some(exact_result(req)?),
        Mode::Auto => match exact_result(req) {
            Ok(r) => Some(r),
            Err(e) if is_fallback(&e) => {
                diagnostics.push(format!("exact mode unavailable ({e}); using numeric mode"));
                None
            }
            Err(e) => return Err(e),
        },
    };
    let mut result = match exact {
        Some(r) => r,
        None => numeric_result(req)?,
    };
    result.diagnostics.splice(0..0, diagnostics);

    let rational_found = result.rational.rational().is_some();
    if theorem_range {
        let detail = match &result.rational {
            RationalOutcome::Transcendental { constants } => format!("surviving constants: {}", constants.join(", ")),
            RationalOutcome::NotFound => "no fraction within the denominator bound".to_string(),
            r => format!("{}", r.rational().expect("rational")),
        };
        result.checks.push(Check::new("rationality", rational_found, detail));
    } else if extrapolated {
        result.diagnostics.push(format!(
            "weight 0 present: rationality {} but outside the range of the rationality theorem",
            if rational_found { "observed" } else { "not observed" }
        ));
    }
    Ok(result)
}

fn exact_result(req: &BzvRequest) -> Result<BzvResult> {
    let cfg = &req.config;
    let (germ, checks) = regularised_germ(&req.forest, req.op, cfg.route, &cfg.exact)?;
    let value = renormalised_value(&req.q, &germ)?;
    let num = value.numeric_value(cfg.fit.numeric.precision_bits)?;
    let rational = match value.as_rational() {
        Some(r) => RationalOutcome::Exact { value: r },
        None => {
            RationalOutcome::Transcendental { constants: value.constants().iter().map(|c| c.to_string()).collect() }
        }
    };
    Ok(BzvResult {
        forest: req.forest.to_string(),
        lambda: req.op.lambda(),
        mode: Mode::Exact,
        germ: Some(germ),
        value: BzvValue::Exact { value, decimal: decimal(&num) },
        rational,
        residuals: BTreeMap::new(),
        checks,
        diagnostics: Vec::new(),
    })
}

fn numeric_result(req: &BzvRequest) -> Result<BzvResult> {
    let cfg = &req.config;
    let f = &req.forest;
    let mut residuals = BTreeMap::new();
    let mut checks = Vec::new();
    let route = match cfg.route {
        Route::Words => NumericRoute::Words,
        _ => NumericRoute::Branched,
    };
    let r = numeric_renormalised(f, req.op, &req.q, route, &cfg.fit)?;
    residuals.insert("fit".to_string(), r.residual);
    if cfg.route == Route::Both {
        let words = flatten_for(f, req.op)?;
        let mut worst = 0f64;
        for z in comparison_points(f, req.op)? {
            let a = numeric_forest_value(f, req.op, &z, &cfg.fit.numeric)?;
            let b = numeric_words_value(&words, req.op, &z, &cfg.fit.numeric)?;
            let scale = a.to_f64().abs().max(1.0);
            worst = worst.max(Float::with_val(a.prec(), &a - &b).abs().to_f64() / scale);
        }
        residuals.insert("route".to_string(), worst);
        checks.push(Check::new(
            "route_agreement",
            worst <= cfg.route_tolerance,
            format!("max relative difference {worst:e}"),
        ));
    }
    let rational = match rational_reconstruct_float(&r.value, cfg.denominator_bound, cfg.rational_tolerance) {
        Some(value) => RationalOutcome::Reconstructed { value },
        None => RationalOutcome::NotFound,
    };
    let mut diagnostics = vec![format!("{} block(s), {} rays, {} unknowns", r.blocks, r.rays, r.unknowns)];
    if let RationalOutcome::Reconstructed { value } = &rational {
        // every real has a fraction this close with denominator about 1/sqrt(tolerance)
        let q = value.denom().to_f64();
        if q * q * cfg.rational_tolerance > 1.0 {
            diagnostics.push(format!(
                "reconstruction not significant: denominator {} exceeds 1/sqrt(tolerance)",
                value.denom()
            ));
        }
    }
    Ok(BzvResult {
        forest: f.to_string(),
        lambda: req.op.lambda(),
        mode: Mode::Numeric,
        germ: None,
        value: BzvValue::Numeric { decimal: decimal(&r.value) },
        rational,
        residuals,
        checks,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tree;

    fn leaf(s: i64) -> Forest<EsLetter> {
        Tree::leaf(EsLetter::int(1, s)).into()
    }

    #[test]
    fn depth_one() {
        let r = renormalised_bzv(&BzvRequest::new(leaf(-1), SumOperator::Strict)).unwrap();
        assert_eq!(r.mode, Mode::Exact);
        assert_eq!(r.rational.rational(), Some(&Rational::from((-1, 12))));
        assert!(r.all_checks_passed());
        let r = renormalised_bzv(&BzvRequest::new(leaf(0), SumOperator::Strict)).unwrap();
        assert_eq!(r.rational.rational(), Some(&Rational::from((-1, 2))));
        assert!(r.diagnostics.iter().any(|d| d.contains("outside")));
        let r = renormalised_bzv(&BzvRequest::new(leaf(1), SumOperator::Strict)).unwrap();
        assert!(matches!(r.rational, RationalOutcome::Transcendental { .. }));
        assert!((r.to_f64() - 0.5772156649015329).abs() < 1e-12);
    }

    #[test]
    fn fractional_weight_falls_back() {
        let f: Forest<EsLetter> = Tree::leaf(EsLetter::new(1, Rational::from((1, 2)))).into();
        let r = renormalised_bzv(&BzvRequest::new(f, SumOperator::Strict)).unwrap();
        assert_eq!(r.mode, Mode::Numeric);
        assert!(r.diagnostics.iter().any(|d| d.contains("not significant")), "{:?}", r.diagnostics);
        // ζ(1/2)
        assert!((r.to_f64() + 1.4603545088095868).abs() < 1e-12, "{}", r.decimal());
    }

    #[test]
    fn both_routes() {
        let t =
            Tree::new(EsLetter::int(1, -1), vec![Tree::leaf(EsLetter::int(2, 0)), Tree::leaf(EsLetter::int(3, -2))]);
        let mut req = BzvRequest::new(t.into(), SumOperator::Weak);
        req.config.route = Route::Both;
        let r = renormalised_bzv(&req).unwrap();
        assert!(r.checks.iter().any(|c| c.name == "route_agreement" && c.passed));
        let json = serde_json::to_string(&r).unwrap();
        let back: BzvResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
