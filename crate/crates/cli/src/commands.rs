use std::fmt::Write as _;
use std::process::ExitCode;

use dayenu_core::families::{dayenu, Family};
use dayenu_core::normal_form::{
    full_dnf, verify_dayenu_theorem, verify_induction_step, InductionReport, TheoremReport,
};
use dayenu_core::probability::{dayenu_fail_closed_form, monte_carlo_sat, sat_probability, ProductMeasure};
use dayenu_core::table::{check_arity, set_max_arity};
use dayenu_core::{parse, Assignment, Error, Rational, TruthTable};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Cli, Command, Format, MeasureArgs, Source, Theorem};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

/// A command's result: the plain rendering plus the structured payload.
struct Report {
    plain: String,
    structured: Value,
    code: u8,
}

impl Report {
    fn ok(plain: String, structured: Value) -> Self {
        Report {
            plain,
            structured,
            code: 0,
        }
    }
}

/// Runs the command and returns what to print on stdout with the exit code.
/// Errors go to stderr directly.
pub fn run(cli: &Cli) -> (String, ExitCode) {
    match execute(cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Plain => report.plain,
                Format::Structured => format!("{}\n", report.structured),
            };
            (out, ExitCode::from(report.code))
        }
        Err(err) => {
            eprintln!("error: {err}");
            let code = if err.is_resource_cap() {
                EXIT_CAP
            } else {
                EXIT_USAGE
            };
            (String::new(), ExitCode::from(code))
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    if let Some(cap) = cli.max_n {
        set_max_arity(cap)?;
    }
    match &cli.command {
        Command::Eval { source, assign } => eval(source, assign),
        Command::Dnf { source, negate } => dnf(source, *negate),
        Command::Truthset { source, negate } => truthset(source, *negate),
        Command::Prob {
            source,
            measure,
            digits,
        } => prob(source, measure, *digits),
        Command::Verify { theorem, from, to } => verify(*theorem, *from, *to),
        Command::Mc {
            source,
            measure,
            samples,
            seed,
        } => mc(source, measure, *samples, *seed),
    }
}

fn load(source: &Source) -> Result<TruthTable, Error> {
    match (&source.expr, source.family) {
        (Some(text), _) => {
            let e = parse(text)?;
            e.compile(source.n.unwrap_or_else(|| e.arity()))
        }
        (None, Some(family)) => {
            let n = source.n.expect("clap requires -n with --family");
            Family::from(family).table(n)
        }
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn maybe_negate(t: TruthTable, negate: bool) -> TruthTable {
    if negate {
        t.negate()
    } else {
        t
    }
}

fn measure(args: &MeasureArgs, n: usize) -> Result<ProductMeasure, Error> {
    match (&args.p, &args.probs) {
        (Some(p), _) => ProductMeasure::uniform(n, p.parse()?),
        (None, Some(list)) => {
            let probs = list
                .split(',')
                .map(str::parse)
                .collect::<Result<Vec<Rational>, _>>()?;
            if probs.len() != n {
                return Err(Error::ArityMismatch {
                    left: n,
                    right: probs.len(),
                });
            }
            ProductMeasure::new(probs)
        }
        (None, None) => unreachable!("clap requires a measure"),
    }
}

fn eval(source: &Source, assign: &str) -> Result<Report, Error> {
    let t = load(source)?;
    let a: Assignment = assign.parse()?;
    let value = t.eval(&a)?;
    Ok(Report::ok(
        format!("{}\n", if value { "T" } else { "F" }),
        json!({ "command": "eval", "n": t.arity(), "assignment": a.to_string(), "value": value }),
    ))
}

fn dnf(source: &Source, negate: bool) -> Result<Report, Error> {
    let t = maybe_negate(load(source)?, negate);
    let d = full_dnf(&t);
    let minterms: Vec<String> = d.minterms().iter().map(|m| m.to_string()).collect();
    let mut plain = String::new();
    for m in &minterms {
        writeln!(plain, "{m}").unwrap();
    }
    writeln!(plain, "count: {}", minterms.len()).unwrap();
    Ok(Report::ok(
        plain,
        json!({
            "command": "dnf", "n": t.arity(), "negate": negate,
            "minterms": minterms, "count": d.len(),
        }),
    ))
}

fn truthset(source: &Source, negate: bool) -> Result<Report, Error> {
    let t = maybe_negate(load(source)?, negate);
    let rows: Vec<String> = t.truth_set().iter().map(Assignment::to_string).collect();
    let mut plain = String::new();
    for row in &rows {
        writeln!(plain, "{row}").unwrap();
    }
    writeln!(plain, "count: {}", rows.len()).unwrap();
    Ok(Report::ok(
        plain,
        json!({
            "command": "truthset", "n": t.arity(), "negate": negate,
            "assignments": rows, "count": rows.len(),
        }),
    ))
}

fn prob(source: &Source, args: &MeasureArgs, digits: usize) -> Result<Report, Error> {
    let t = load(source)?;
    let m = measure(args, t.arity())?;
    let p = sat_probability(&t, &m)?;
    let decimal = (digits > 0).then(|| p.to_decimal(digits));
    let plain = match &decimal {
        Some(d) => format!("{p} ≈ {d}\n"),
        None => format!("{p}\n"),
    };
    Ok(Report::ok(
        plain,
        json!({
            "command": "prob", "n": t.arity(), "measure": m.probs(),
            "probability": p, "decimal": decimal,
        }),
    ))
}

#[derive(Debug, Serialize)]
struct ClosedFormCheck {
    closed_form: Rational,
    enumerated: Rational,
    expected: Rational,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct VerifyEntry {
    n: usize,
    theorem: TheoremReport,
    /// Absent at n = 2, the induction base.
    induction: Option<InductionReport>,
    closed_form: ClosedFormCheck,
    pass: bool,
}

fn verify_one(n: usize) -> Result<VerifyEntry, Error> {
    let theorem = verify_dayenu_theorem(n)?;
    let induction = if n >= 3 {
        Some(verify_induction_step(n)?)
    } else {
        None
    };
    let half = Rational::new(1, 2)?;
    let closed_form = dayenu_fail_closed_form(n, &half)?;
    let enumerated = sat_probability(&dayenu(n)?.negate(), &ProductMeasure::uniform(n, half)?)?;
    let expected = Rational::new(n as u64 + 1, 1u64 << n)?;
    let closed = ClosedFormCheck {
        pass: closed_form == enumerated && enumerated == expected,
        closed_form,
        enumerated,
        expected,
    };
    let pass = theorem.pass && induction.as_ref().is_none_or(|r| r.pass) && closed.pass;
    Ok(VerifyEntry {
        n,
        theorem,
        induction,
        closed_form: closed,
        pass,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn verify(theorem: Theorem, from: usize, to: usize) -> Result<Report, Error> {
    check_arity(from, 2)?;
    check_arity(to, 2)?;
    if to < from {
        return Err(Error::ArityTooSmall { n: to, min: from });
    }
    let entries = (from..=to)
        .into_par_iter()
        .map(verify_one)
        .collect::<Result<Vec<_>, _>>()?;
    let all_pass = entries.iter().all(|e| e.pass);

    let mut plain = String::new();
    for e in &entries {
        write!(
            plain,
            "n={} theorem={} minterms={}/{} induction={} closed_form={} ({})",
            e.n,
            verdict(e.theorem.pass),
            e.theorem.minterm_count,
            e.theorem.expected_count,
            e.induction.as_ref().map_or("n/a", |r| verdict(r.pass)),
            verdict(e.closed_form.pass),
            e.closed_form.enumerated,
        )
        .unwrap();
        writeln!(plain, " {}", verdict(e.pass)).unwrap();
    }
    let counterexample = entries.iter().find(|e| !e.pass).map(|e| {
        let cx = e
            .theorem
            .counterexample
            .clone()
            .or_else(|| e.induction.as_ref().and_then(|r| r.counterexample.clone()));
        (e.n, cx)
    });
    match &counterexample {
        None => writeln!(plain, "all {} checks passed", entries.len()).unwrap(),
        Some((n, cx)) => writeln!(
            plain,
            "first failure at n={n}, counterexample: {}",
            cx.as_deref().unwrap_or("none")
        )
        .unwrap(),
    }
    let theorem_name = match theorem {
        Theorem::Dayenu => "dayenu",
    };
    Ok(Report {
        plain,
        structured: json!({
            "command": "verify", "theorem": theorem_name, "from": from, "to": to,
            "pass": all_pass, "results": entries,
        }),
        code: if all_pass { 0 } else { EXIT_VERIFY },
    })
}

fn mc(source: &Source, args: &MeasureArgs, samples: u64, seed: u64) -> Result<Report, Error> {
    let t = load(source)?;
    let m = measure(args, t.arity())?;
    let est = monte_carlo_sat(&t, &m, samples, seed)?;
    let plain = format!(
        "estimate: {:.7}\nstd_error: {:.7}\nhits: {}\nsamples: {}\nseed: {}\n",
        est.estimate, est.std_error, est.hits, est.samples, est.seed
    );
    let mut structured = serde_json::to_value(est).expect("estimates serialize");
    structured["command"] = json!("mc");
    structured["n"] = json!(t.arity());
    Ok(Report::ok(plain, structured))
}
