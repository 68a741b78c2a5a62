//! Renormalised branched zeta values: exact where the Euler–Maclaurin tails
//! are finite, numeric otherwise, with rationality reported.

use brzeta::cli::parse_forest;
use brzeta::symbol::SumOperator;
use brzeta::zeta::{renormalised_bzv, BzvRequest, Mode, RationalOutcome, Route};

fn main() -> brzeta::Result<()> {
    let forests =
        ["T(s=-1)", "T(s=0)", "T(s=1)", "T(s=-1)[T(s=-2)]", "T(s=-1)[T(s=-1),T(s=-2)]", "T(s=0)[T(s=-1)]", "T(s=1/2)"];
    for text in forests {
        let f = parse_forest(text)?;
        for op in [SumOperator::Strict, SumOperator::Weak] {
            let mut req = BzvRequest::new(f.clone(), op);
            req.config.route = Route::Both;
            let r = renormalised_bzv(&req)?;
            let rational = match &r.rational {
                RationalOutcome::Exact { value } => value.to_string(),
                RationalOutcome::Reconstructed { value } => format!("{value}?"),
                RationalOutcome::Transcendental { constants } => constants.join(" "),
                RationalOutcome::NotFound => "-".into(),
            };
            let mode = if r.mode == Mode::Exact { "exact" } else { "numeric" };
            println!("{text:<28} {:<7} {mode:<8} {:<+23.15e} {rational}", format!("{op:?}"), r.to_f64());
            for d in &r.diagnostics {
                println!("    {d}");
            }
        }
    }
    Ok(())
}
