use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use cuboid_cas::cuboid::{self, CuboidSystem, FactorId};
use cuboid_cas::groebner::{self, GroebnerError, Ideal};
use cuboid_cas::multisym::MultisymError;
use cuboid_cas::poly::{Monomial, MonomialOrder, Polynomial, VarTable};
use serde::Serialize;

use crate::input::{identifiers, read_expressions};
use crate::report::{RunReport, Status};
use crate::{Cli, CliError, Format, OrderKind, Outcome, EXIT_SYMMETRY};

fn clock(cli: &Cli) -> Option<Instant> {
    cli.timing.then(Instant::now)
}

fn only(cli: &Cli) -> Result<Option<FactorId>, CliError> {
    cli.only
        .as_deref()
        .map(|s| {
            s.parse::<FactorId>()
                .map_err(|e| CliError::parse(e.to_string()))
        })
        .transpose()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn lines(v: impl IntoIterator<Item = String>) -> String {
    v.into_iter().map(|l| l + "\n").collect()
}

/// First monomial, in display order, where `a` and `b` disagree.
fn first_difference(sys: &CuboidSystem, a: &Polynomial, b: &Polynomial) -> Option<String> {
    let order = sys.display_order();
    let mut monos: Vec<&Monomial> = a.terms().chain(b.terms()).map(|(m, _)| m).collect();
    monos.sort_by(|x, y| order.cmp(y, x));
    monos.dedup();
    monos
        .into_iter()
        .find(|m| a.coeff(m) != b.coeff(m))
        .map(|m| {
            let unit = Polynomial::term(sys.var_table(), m.clone(), 1.into());
            format!(
                "coefficient of {} is {}, expected {}",
                sys.format(&unit),
                a.coeff(m),
                b.coeff(m)
            )
        })
}

pub fn derive(cli: &Cli, trace_out: Option<&Path>) -> Result<Outcome, CliError> {
    let sys = CuboidSystem::shared();
    let only = only(cli)?;
    let started = clock(cli);
    let traces = cuboid::derive_factor_equations().map_err(|e| CliError {
        code: crate::EXIT_MISMATCH,
        message: e.to_string(),
    })?;
    let catalog = cuboid::factor_catalog();
    let mut report = RunReport::new("derive");
    let mut derived = Vec::new();
    for (t, golden) in traces.iter().zip(&catalog) {
        if only.is_some_and(|o| o != t.result.id) {
            continue;
        }
        match first_difference(sys, &t.result.lhs, &golden.lhs) {
            None => report.push(t.result.id.to_string(), true, "matches catalog", started),
            Some(d) => report.push(t.result.id.to_string(), false, d, started),
        }
        derived.push(t.result.clone());
    }
    if let Some(path) = trace_out {
        let exports: Vec<_> = traces
            .iter()
            .filter(|t| only.is_none_or(|o| o == t.result.id))
            .map(|t| t.export(sys))
            .collect();
        fs::write(path, to_json(&exports))
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    }
    let payload = match cli.format {
        Format::Text => lines(derived.iter().map(|f| f.display(sys))),
        Format::Json => cuboid::catalog_to_json(sys, &derived) + "\n",
    };
    Ok(Outcome { payload, report })
}

#[derive(Serialize)]
struct Verdict {
    input: String,
    member: bool,
    remainder: String,
    certificate_checked: bool,
}

fn gather(inputs: &[String], file: Option<&Path>) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = inputs.iter().map(|s| (s.clone(), s.clone())).collect();
    if let Some(path) = file {
        for (line, e) in read_expressions(path).map_err(CliError::parse)? {
            out.push((format!("{}:{line}", path.display()), e));
        }
    }
    if out.is_empty() {
        return Err(CliError::parse("no input given"));
    }
    Ok(out)
}

pub fn verify(
    cli: &Cli,
    inputs: &[String],
    file: Option<&Path>,
    catalog: Option<&Path>,
) -> Result<Outcome, CliError> {
    let sys = CuboidSystem::shared();
    let mut items: Vec<(String, Polynomial)> = Vec::new();
    if let Some(path) = catalog {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        let eqs =
            cuboid::catalog_from_json(sys, &text).map_err(|e| CliError::parse(e.to_string()))?;
        items.extend(eqs.into_iter().map(|f| (f.id.to_string(), f.lhs)));
    }
    if catalog.is_none() || !inputs.is_empty() || file.is_some() {
        let known = cuboid::factor_catalog();
        for (label, text) in gather(inputs, file)? {
            let p = match text.parse::<FactorId>() {
                Ok(id) => known
                    .iter()
                    .find(|f| f.id == id)
                    .expect("catalog is complete")
                    .lhs
                    .clone(),
                Err(_) => sys
                    .parse(&text)
                    .map_err(|e| CliError::parse(format!("{label}: {e}")))?,
            };
            items.push((text, p));
        }
    }
    let mut report = RunReport::new("verify");
    let mut verdicts = Vec::new();
    for (label, p) in items {
        let started = clock(cli);
        let v = sys.verify(&p);
        let checked = v.certificate.check(sys, &v.expanded, &v.remainder);
        let remainder = sys.format(&v.remainder);
        let detail = if v.member {
            "member".to_string()
        } else {
            format!("non-member, remainder {remainder}")
        };
        report.push(label.clone(), v.member && checked, detail, started);
        verdicts.push(Verdict {
            input: label,
            member: v.member,
            remainder,
            certificate_checked: checked,
        });
    }
    let payload = match cli.format {
        Format::Text => lines(verdicts.iter().map(|v| {
            if v.member {
                format!("{}: member", v.input)
            } else {
                format!("{}: non-member, remainder {}", v.input, v.remainder)
            }
        })),
        Format::Json => to_json(&verdicts),
    };
    Ok(Outcome { payload, report })
}

#[derive(Serialize)]
struct Decomposition {
    input: String,
    decomposition: String,
    round_trip: bool,
}

pub fn decompose(cli: &Cli, inputs: &[String], file: Option<&Path>) -> Result<Outcome, CliError> {
    let sys = CuboidSystem::shared();
    let ms = sys.multisym();
    let mut report = RunReport::new("decompose");
    let mut results = Vec::new();
    for (label, text) in gather(inputs, file)? {
        let p = sys
            .parse(&text)
            .map_err(|e| CliError::parse(format!("{label}: {e}")))?;
        let started = clock(cli);
        let d = match ms.decompose(&p) {
            Ok(d) => d,
            Err(e @ MultisymError::NotMultisymmetric { .. }) => {
                return Err(CliError {
                    code: EXIT_SYMMETRY,
                    message: format!("{label}: {e}"),
                })
            }
            Err(e) => return Err(CliError::parse(format!("{label}: {e}"))),
        };
        let round_trip = ms.expand_in_matrix_vars(&d).ok() == Some(ms.substitute_elementaries(&p));
        let detail = if round_trip {
            "round trip exact"
        } else {
            "round trip failed"
        };
        report.push(label.clone(), round_trip, detail, started);
        results.push(Decomposition {
            input: label,
            decomposition: sys.format(&d),
            round_trip,
        });
    }
    let payload = match cli.format {
        Format::Text => lines(results.iter().map(|r| r.decomposition.clone())),
        Format::Json => to_json(&results),
    };
    Ok(Outcome { payload, report })
}

#[derive(Serialize)]
struct Residual {
    id: FactorId,
    max_relative_residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct NumericPayload {
    samples: usize,
    seed: u64,
    tolerance: f64,
    residuals: Vec<Residual>,
}

pub fn check_numeric(cli: &Cli) -> Result<Outcome, CliError> {
    let only = only(cli)?;
    let started = clock(cli);
    let r = cuboid::numeric_residual(cli.samples as usize, cli.seed);
    let mut report = RunReport::new("check-numeric");
    let mut residuals = Vec::new();
    for (id, res) in r.residuals {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let pass = res < cli.tolerance;
        report.push(
            id.to_string(),
            pass,
            format!("max relative residual {res:.3e}"),
            started,
        );
        residuals.push(Residual {
            id,
            max_relative_residual: res,
            pass,
        });
    }
    let payload = match cli.format {
        Format::Text => lines(residuals.iter().map(|r| {
            format!(
                "{}  {:.3e}  {}",
                r.id,
                r.max_relative_residual,
                if r.pass { "ok" } else { "FAIL" }
            )
        })),
        Format::Json => to_json(&NumericPayload {
            samples: r.samples,
            seed: r.seed,
            tolerance: cli.tolerance,
            residuals,
        }),
    };
    Ok(Outcome { payload, report })
}

#[derive(Serialize)]
struct BasisPayload {
    order: String,
    elements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eliminated: Option<Vec<String>>,
    stats: groebner::RunStats,
}

pub fn groebner(
    cli: &Cli,
    file: &Path,
    vars: &[String],
    order: OrderKind,
    eliminate: &[String],
) -> Result<Outcome, CliError> {
    let exprs = read_expressions(file).map_err(CliError::parse)?;
    let mut names: Vec<String> = if vars.is_empty() {
        identifiers(exprs.iter().map(|(_, e)| e.as_str()))
    } else {
        vars.to_vec()
    };
    for e in eliminate {
        if !names.contains(e) {
            return Err(CliError::parse(format!(
                "--eliminate names unknown variable `{e}`"
            )));
        }
    }
    // eliminated variables lead the ranking
    names.sort_by_key(|n| !eliminate.contains(n));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let vt = Arc::new(VarTable::plain(&refs).map_err(|e| CliError::parse(e.to_string()))?);
    let mut gens = Vec::new();
    for (line, e) in &exprs {
        let p = Polynomial::parse(e, &vt)
            .map_err(|err| CliError::parse(format!("{}:{line}: {err}", file.display())))?;
        if !p.is_zero() {
            gens.push(p);
        }
    }
    let elim: Vec<&str> = eliminate.iter().map(String::as_str).collect();
    let mo = match order {
        OrderKind::Lex => MonomialOrder::lex(&vt),
        OrderKind::Grevlex if elim.is_empty() => MonomialOrder::grevlex(&vt),
        OrderKind::Grevlex => MonomialOrder::elimination(&vt, &elim).expect("known names"),
    };
    let ideal = Ideal::new(&vt, gens, mo.clone()).map_err(|e| CliError::parse(e.to_string()))?;
    let started = clock(cli);
    let mut report = RunReport::new("groebner");
    let gb = match groebner::buchberger_bounded(&ideal, cli.budget) {
        Ok(gb) => gb,
        Err(GroebnerError::BudgetExceeded { pairs, basis_size }) => {
            report.push(
                file.display().to_string(),
                false,
                format!("budget exceeded after {pairs} pair reductions, partial basis size {basis_size}"),
                started,
            );
            report.status = Status::BudgetExceeded;
            return Ok(Outcome {
                payload: String::new(),
                report,
            });
        }
        Err(e) => return Err(CliError::parse(e.to_string())),
    };
    let keep: BTreeSet<usize> = (0..vt.len())
        .filter(|&i| !eliminate.iter().any(|e| e == vt.name(i)))
        .collect();
    let elements: Vec<&Polynomial> = gb
        .elements
        .iter()
        .filter(|g| g.variables().iter().all(|v| keep.contains(v)))
        .collect();
    let ok = gb.satisfies_criterion();
    report.push(
        file.display().to_string(),
        ok,
        format!(
            "{} of {} basis elements shown; {} pairs reduced, {} pruned",
            elements.len(),
            gb.elements.len(),
            gb.stats.pairs_reduced,
            gb.stats.pairs_pruned
        ),
        started,
    );
    let formatted: Vec<String> = elements.iter().map(|g| g.format(&mo)).collect();
    let payload = match cli.format {
        Format::Text => lines(formatted),
        Format::Json => to_json(&BasisPayload {
            order: mo.describe(&vt),
            elements: formatted,
            eliminated: (!eliminate.is_empty()).then(|| eliminate.to_vec()),
            stats: gb.stats,
        }),
    };
    Ok(Outcome { payload, report })
}
