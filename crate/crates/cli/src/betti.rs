use std::fmt::Write as _;
use std::path::PathBuf;

use higgspair::betti::{morse_sum, theorem_extraction, BettiError, YConvention};
use higgspair::strata::{descriptors, StratumDescriptor};
use higgspair::ModuliParams;
use serde_json::{json, Value};

use crate::report::{invalid, parse_rational, poly, rational, Failure, Output};

#[derive(Clone, Debug, clap::Args)]
pub struct ModuliArgs {
    /// Genus g of the surface, at least 2.
    #[arg(long)]
    pub genus: i64,
    /// Degree k of the rank-2 bundle, odd and above 4g - 4.
    #[arg(long)]
    pub degree: i64,
    /// Stability parameter as an exact rational "p/q", strictly between k/2 and (k+1)/2.
    #[arg(long, value_name = "P/Q")]
    pub tau_bar: String,
}

impl ModuliArgs {
    pub fn params(&self) -> Result<ModuliParams, Failure> {
        let tau = parse_rational(&self.tau_bar)?;
        Ok(ModuliParams::new(self.genus, self.degree, tau))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Convention {
    Corrected,
    AsPrinted,
}

#[derive(Clone, Debug, clap::Args)]
pub struct BettiArgs {
    #[command(flatten)]
    pub moduli: ModuliArgs,
    /// Strata y-prefactor used for the generating-function cross-check.
    #[arg(long, value_enum, default_value = "corrected")]
    pub convention: Convention,
    /// Compare the rendered report against this file.
    #[arg(long, value_name = "PATH")]
    pub golden: Option<PathBuf>,
    /// Overwrite the golden file instead of comparing.
    #[arg(long, requires = "golden")]
    pub update_golden: bool,
}

fn lift(e: BettiError) -> Failure {
    match e {
        BettiError::Integrity(_) | BettiError::Series(_) => Failure::Integrity(e.to_string()),
        _ => invalid(e),
    }
}

fn params_json(p: &ModuliParams) -> Value {
    json!({ "genus": p.genus, "degree": p.degree, "rank": ModuliParams::RANK, "tau_bar": rational(&p.tau_bar) })
}

pub fn betti(args: &BettiArgs) -> Result<Output, Failure> {
    let p = args.moduli.params()?.validated().map_err(lift)?;
    let sum = morse_sum(&p).map_err(lift)?;
    let convention = match args.convention {
        Convention::Corrected => YConvention::Corrected,
        Convention::AsPrinted => YConvention::AsPrinted,
    };
    let ex = theorem_extraction(&p, convention).map_err(lift)?;
    if convention == YConvention::Corrected && !ex.matches() {
        return Err(Failure::Integrity(format!("closed-form extraction disagrees with the Morse sum by {}", ex.diff)));
    }
    let diff: Vec<Value> = ex.diff.t_coefficients().iter().map(|(e, c)| json!([e, rational(c)])).collect();
    let json = json!({
        "params": params_json(&p),
        "strata": sum.strata.iter().map(|(d, q)| json!({
            "d": d.d, "index": d.index, "dim": d.dim, "poly": poly(q),
        })).collect::<Vec<_>>(),
        "n0_poly": poly(&sum.n0),
        "total_poly": poly(&sum.total),
        "extraction_check": { "convention": convention.name(), "matches": ex.matches(), "diff": diff },
    });

    let mut pretty = String::new();
    writeln!(pretty, "g = {}, k = {}, tau_bar = {}", p.genus, p.degree, p.tau_bar).unwrap();
    writeln!(pretty, "N0      {}", sum.n0).unwrap();
    for (d, q) in &sum.strata {
        writeln!(pretty, "N_{:<5} {}  (index {}, dim {})", d.d, q, d.index, d.dim).unwrap();
    }
    writeln!(pretty, "total   {}", sum.total).unwrap();
    let verdict = if ex.matches() { "matches".to_string() } else { format!("differs by {}", ex.diff) };
    writeln!(pretty, "extraction ({}) {}", convention.name(), verdict).unwrap();

    let mut csv = String::from("part,d,exponent,coefficient\n");
    let mut rows = |part: &str, d: Option<i64>, q: &higgspair::PoincarePolynomial| {
        for (e, c) in q.nonzero_terms() {
            let d = d.map(|d| d.to_string()).unwrap_or_default();
            writeln!(csv, "{part},{d},{e},{c}").unwrap();
        }
    };
    rows("n0", None, &sum.n0);
    for (d, q) in &sum.strata {
        rows("stratum", Some(d.d), q);
    }
    rows("total", None, &sum.total);

    Ok(Output { json, pretty, csv: Some(csv) })
}

/// Compares or rewrites the golden file for an already rendered report.
pub fn golden(args: &BettiArgs, rendered: &str) -> Result<Option<String>, Failure> {
    let Some(path) = &args.golden else { return Ok(None) };
    if args.update_golden {
        std::fs::write(path, rendered).map_err(|e| invalid(format!("writing {}: {e}", path.display())))?;
        return Ok(Some(format!("golden file {} updated", path.display())));
    }
    let expected = std::fs::read_to_string(path).map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
    if expected != rendered {
        return Err(Failure::Integrity(format!("output differs from golden file {}", path.display())));
    }
    Ok(Some(format!("golden file {} matches", path.display())))
}

fn descriptor_json(d: &StratumDescriptor) -> Value {
    json!({ "d": d.d, "n1": d.n1, "n2": d.n2, "index": d.index, "dim": d.dim })
}

pub fn strata(args: &ModuliArgs) -> Result<Output, Failure> {
    let p = args.params()?.validated().map_err(lift)?;
    let descs = descriptors(&p).map_err(invalid)?;
    let json = json!({
        "params": params_json(&p),
        "strata": descs.iter().map(descriptor_json).collect::<Vec<_>>(),
    });
    let mut pretty = String::new();
    let mut csv = String::from("d,n1,n2,index,dim\n");
    for d in &descs {
        writeln!(pretty, "d = {:<3} Sym^{} x Sym^{}, index {}, dim {}", d.d, d.n1, d.n2, d.index, d.dim).unwrap();
        writeln!(csv, "{},{},{},{},{}", d.d, d.n1, d.n2, d.index, d.dim).unwrap();
    }
    Ok(Output { json, pretty, csv: Some(csv) })
}
