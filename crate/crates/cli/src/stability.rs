use std::fmt::Write as _;
use std::path::PathBuf;

use higgspair::stability::{
    check_higgs_stability, is_tau_stable_split, mu_plus, validate_params, SPlacement, SplitHiggsPairModel, Witness,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::betti::ModuliArgs;
use crate::report::{invalid, parse_rational, rational, Failure, Output};

/// Model file schema.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    g: i64,
    k: i64,
    #[serde(rename = "dL")]
    d_l: i64,
    psi_nonzero: bool,
    theta_zero: bool,
    s_placement: String,
    tau_bar: String,
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "subbundle": w.subbundle.name(),
        "condition": w.condition.number(),
        "slope": rational(&w.slope),
        "tau_bar": rational(&w.tau_bar),
        "description": w.to_string(),
    })
}

pub fn check(model: &PathBuf) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(model).map_err(|e| invalid(format!("reading {}: {e}", model.display())))?;
    let f: ModelFile = serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", model.display())))?;
    let placement = SPlacement::from_name(&f.s_placement)
        .ok_or_else(|| invalid(format!("unknown s_placement {:?}", f.s_placement)))?;
    let tau = parse_rational(&f.tau_bar)?;
    let m = SplitHiggsPairModel::new(f.g, f.k, f.d_l, f.psi_nonzero, f.theta_zero, placement).map_err(invalid)?;
    let v = is_tau_stable_split(&m, &tau);
    let higgs = check_higgs_stability(&m);
    let json = json!({
        "model": {
            "g": f.g, "k": f.k, "dL": f.d_l, "psi_nonzero": f.psi_nonzero,
            "theta_zero": f.theta_zero, "s_placement": placement.name(), "tau_bar": rational(&tau),
        },
        "stable": v.stable,
        "witness": v.witness.as_ref().map(witness_json),
        "violations": v.violations.iter().map(witness_json).collect::<Vec<_>>(),
        "s_zero_advisory": v.s_zero_advisory,
        "higgs_stable": higgs,
    });
    let mut pretty = String::new();
    writeln!(pretty, "{}", if v.stable { "stable" } else { "unstable" }).unwrap();
    for w in &v.violations {
        writeln!(pretty, "  {w}").unwrap();
    }
    if v.s_zero_advisory {
        writeln!(pretty, "  note: s = 0 is excluded from the moduli space regardless of slopes").unwrap();
    }
    writeln!(pretty, "underlying Higgs bundle {}", if higgs { "stable" } else { "not stable" }).unwrap();
    Ok(Output { json, pretty, csv: None })
}

/// Checks the standing assumptions on `(g, k, τ̄)`. Invalid parameters are
/// reported in full and then surface as a validation failure.
pub fn validate(args: &ModuliArgs) -> Result<(Output, bool), Failure> {
    let p = args.params()?;
    let violations = match validate_params(&p) {
        Ok(()) => Vec::new(),
        Err(v) => v,
    };
    let mu = mu_plus(p.degree).ok().map(|m| rational(&m));
    let json = json!({
        "genus": p.genus,
        "degree": p.degree,
        "tau_bar": rational(&p.tau_bar),
        "mu_plus": mu,
        "valid": violations.is_empty(),
        "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    let mut pretty = String::new();
    if violations.is_empty() {
        writeln!(pretty, "valid").unwrap();
    }
    for v in &violations {
        writeln!(pretty, "violated: {v}").unwrap();
    }
    Ok((Output { json, pretty, csv: None }, violations.is_empty()))
}
