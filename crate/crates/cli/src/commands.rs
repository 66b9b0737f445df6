use std::path::PathBuf;

use serde_json::{json, Value};
use twochild_core::inference::{build_pitfall_table, check_symmetry, PitfallTable, SymmetryReport};
use twochild_core::montecarlo::{estimate_conditional, SamplingMode, SimConfig};
use twochild_core::querylang::{evaluate, parse, Evaluation, Query, QueryKind, Trace};
use twochild_core::ratfunc::{parse_rational, to_decimal, Rational};
use twochild_core::samplespace::{
    build_distribution, format_grid, AliasLabel, CellTable, CountTable, NumericTable, Regime,
    TableExport,
};
use twochild_core::{Descriptor, EventExpr, RationalFunction, RegimeKind, Slot};

use crate::{CliError, Csv, RArg, Report};

/// Prevalences of the reference r-sweep, as printed.
pub const SWEEP_RS: [&str; 7] = ["0.3", "0.2", "0.1", "0.02", "0.01", "0.001", "0.0001"];

pub const SWEEP_QUERY: &str = "@regime(i1) P(E.f & Y.f | E.fN + Y.fN)";

const NUMERIC_TABLE_DIGITS: usize = 4;

const WRONG_BANNER: &str =
    "!!! WRONG REASONING: this table is NOT a valid distribution; shown only as a counterexample !!!";

pub(crate) fn parse_query(text: &str) -> Result<Query, CliError> {
    let text = text.trim();
    parse(text).map_err(|e| CliError::Domain(format!("{}\n{}", e, e.annotate(text))))
}

fn labels(regime: &Regime) -> Vec<String> {
    regime.children().iter().map(|c| c.label(regime.alias)).collect()
}

pub(crate) fn eval(text: &str, digits: usize) -> Result<Report, CliError> {
    let q = parse_query(text)?;
    let ev = evaluate(&q, digits).map_err(CliError::domain)?;
    Ok(Report {
        text: eval_text(&ev, &q),
        json: serde_json::to_value(&ev).expect("evaluation serializes"),
        csv: None,
    })
}

pub(crate) fn eval_text(ev: &Evaluation, q: &Query) -> String {
    let mut rows = vec![("query", ev.query.clone()), ("exact", ev.exact.to_string())];
    if let Some(r) = &ev.r {
        rows.push(("r", r.clone()));
    }
    if let Some(d) = &ev.decimal {
        rows.push(("decimal", d.clone()));
    }
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<8} {v}\n"));
    }
    match &ev.trace {
        Some(Trace::Odds(rep)) => {
            out.push_str(&format!("initial odds  {}\n", rep.initial_odds));
            out.push_str(&format!("bayes factor  {}\n", rep.bayes_factor));
            out.push_str(&format!("updated odds  {}\n", rep.updated_odds));
        }
        Some(Trace::Chain { steps }) => {
            for s in steps {
                let given: Vec<String> = s.given.iter().map(ToString::to_string).collect();
                if given.is_empty() {
                    out.push_str(&format!("  P({}) = {}\n", s.conditioned, s.value));
                } else {
                    out.push_str(&format!(
                        "  P({} | {}) = {}\n",
                        s.conditioned,
                        given.join(", "),
                        s.value
                    ));
                }
            }
        }
        Some(Trace::Table(t)) => {
            out.push('\n');
            out.push_str(&t.render(&labels(&q.regime())));
        }
        None => {}
    }
    out
}

fn table_regime(id: u8) -> Regime {
    match id {
        1 => Regime::gender_only(),
        2 => Regime::shared_names(),
        4 => Regime::unique_names(),
        5 => Regime::unique_names().with_alias(AliasLabel::Identification),
        6 => Regime::shared_names().with_alias(AliasLabel::Identification),
        _ => Regime::unique_names(),
    }
}

pub(crate) fn table(
    id: u8,
    r: Option<RArg>,
    scale: Option<u64>,
    csv: Option<PathBuf>,
    digits: Option<usize>,
) -> Result<Report, CliError> {
    if id == 3 {
        if r.is_some() || scale.is_some() {
            return Err(CliError::Usage(
                "table 3 is a sweep over r; --r and --scale do not apply (use `sweep` instead)".into(),
            ));
        }
        let rs: Vec<RArg> = SWEEP_RS
            .iter()
            .map(|t| RArg {
                text: t.to_string(),
                value: parse_rational(t).expect("literal prevalence"),
            })
            .collect();
        let mut report = sweep(SWEEP_QUERY, &rs, csv, digits.unwrap_or(5))?;
        report.text = format!("Table 3  i1, as a function of the prevalence r\n{}", report.text);
        if let Value::Object(map) = &mut report.json {
            map.insert("table".into(), json!(3));
        }
        return Ok(report);
    }
    if id == 7 {
        render_table(id, &build_pitfall_table(), false, r, scale, csv, digits)
    } else {
        render_table(id, &build_distribution(table_regime(id)), true, r, scale, csv, digits)
    }
}

fn render_table<T: CellTable>(
    id: u8,
    t: &T,
    valid: bool,
    r: Option<RArg>,
    scale: Option<u64>,
    csv: Option<PathBuf>,
    digits: Option<usize>,
) -> Result<Report, CliError> {
    let regime = *t.regime();
    let digits = digits.unwrap_or(NUMERIC_TABLE_DIGITS);
    let r = match (r, scale) {
        (Some(r), _) => Some(r.value),
        (None, Some(_)) if regime.kind == RegimeKind::GenderOnly => Some(Rational::from_integer(0.into())),
        (None, Some(_)) => return Err(CliError::Usage("--scale needs --r for this table".into())),
        (None, None) => None,
    };
    let labels = labels(&regime);

    let mut text = String::new();
    if !valid {
        text.push_str(WRONG_BANNER);
        text.push('\n');
    }
    text.push_str(&format!("Table {id}  {}\n", t.title()));
    let export = TableExport::new(t, valid, r.as_ref().map(|r| (r, digits))).map_err(CliError::domain)?;
    let mut counts: Option<CountTable> = None;
    match &r {
        None => text.push_str(&export.render(&labels)),
        Some(r) => {
            let numeric = NumericTable::evaluate(t, r).map_err(CliError::domain)?;
            text.push_str(&format!("r = {r}\n"));
            text.push_str(&numeric.render(digits));
            if let Some(n) = scale {
                let c = numeric.counts(n);
                text.push_str(&format!("\nexpected counts in {n} families\n"));
                text.push_str(&c.render());
                counts = Some(c);
            }
        }
    }

    let csv = csv.map(|path| {
        let mut header: Vec<String> = ["eldest", "youngest", "exact", "decimal"].map(String::from).to_vec();
        let mut rows: Vec<Vec<String>> = export.records().into_iter().map(|r| r.to_vec()).collect();
        if let Some(c) = &counts {
            header.push("count".into());
            let k = regime.children().len();
            let mut order: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
            order.extend((0..k).map(|i| (i, k)));
            order.extend((0..k).map(|j| (k, j)));
            order.push((k, k));
            for (row, (i, j)) in rows.iter_mut().zip(order) {
                row.push(c.grid[i][j].map_or(String::new(), |v| v.to_string()));
            }
        }
        Csv { path, header, rows }
    });

    let json = json!({
        "table": id,
        "banner": if valid { Value::Null } else { json!(WRONG_BANNER) },
        "export": export,
        "counts": counts,
    });
    Ok(Report { text, json, csv })
}

/// `START END STEPS`: STEPS evenly spaced values, both ends included.
pub(crate) fn parse_range(range: &[String]) -> Result<Vec<RArg>, CliError> {
    let [start, end, steps] = range else {
        return Err(CliError::Usage("--range takes START END STEPS".into()));
    };
    let bound = |s: &str| {
        parse_rational(s.trim()).map_err(|e| CliError::Usage(format!("invalid --range bound `{s}`: {e}")))
    };
    let (start, end) = (bound(start)?, bound(end)?);
    let steps: u32 = steps
        .trim()
        .parse()
        .ok()
        .filter(|&n| (1..=100_000).contains(&n))
        .ok_or_else(|| CliError::Usage(format!("--range STEPS must be an integer in 1..=100000, got `{steps}`")))?;
    let span = &end - &start;
    Ok((0..steps)
        .map(|k| {
            let value = if steps == 1 {
                start.clone()
            } else {
                &start + &span * Rational::new(k.into(), (steps - 1).into())
            };
            RArg {
                text: value.to_string(),
                value,
            }
        })
        .collect())
}

pub(crate) fn sweep(query: &str, rs: &[RArg], csv: Option<PathBuf>, digits: usize) -> Result<Report, CliError> {
    let mut q = parse_query(query)?;
    q.r = None;
    let symbolic = evaluate(&q, digits).map_err(CliError::domain)?;
    let mut rows = Vec::new();
    for r in rs {
        q.r = Some(r.value.clone());
        let ev = evaluate(&q, digits).map_err(CliError::domain)?;
        let value = ev.exact.eval_at(&r.value).map_err(CliError::domain)?;
        rows.push((r.text.clone(), r.value.to_string(), value.to_string(), to_decimal(&value, digits)));
    }
    q.r = None;

    let grid: Vec<Vec<String>> = rows.iter().map(|(t, _, _, d)| vec![t.clone(), d.clone()]).collect();
    let text = format!(
        "{}\n  = {}\n{}",
        q,
        symbolic.exact,
        format_grid(&["r".to_string(), "value".to_string()], &grid)
    );
    let json = json!({
        "query": q.to_string(),
        "exact": symbolic.exact,
        "rows": rows.iter().map(|(t, r, v, d)| json!({"r": t, "r_exact": r, "exact": v, "decimal": d})).collect::<Vec<_>>(),
    });
    let csv = csv.map(|path| Csv {
        path,
        header: ["r", "exact", "decimal"].map(String::from).to_vec(),
        rows: rows.iter().map(|(t, _, v, d)| vec![t.clone(), v.clone(), d.clone()]).collect(),
    });
    Ok(Report { text, json, csv })
}

fn value_json(p: &RationalFunction, r: Option<&Rational>, digits: usize) -> Result<Value, CliError> {
    Ok(match r {
        None => json!({ "exact": p }),
        Some(r) => {
            let v = p.eval_at(r).map_err(CliError::domain)?;
            json!({ "exact": v.to_string(), "decimal": to_decimal(&v, digits) })
        }
    })
}

fn value_text(p: &RationalFunction, r: Option<&Rational>, digits: usize) -> Result<String, CliError> {
    Ok(match r {
        None => p.to_string(),
        Some(r) => {
            let v = p.eval_at(r).map_err(CliError::domain)?;
            format!("{v} ({})", to_decimal(&v, digits))
        }
    })
}

pub(crate) fn pitfall(r: Option<RArg>, digits: usize) -> Result<Report, CliError> {
    let correct = build_distribution(Regime::unique_names());
    let wrong: PitfallTable = build_pitfall_table();
    let r = r.map(|r| r.value);
    if let Some(r) = &r {
        correct.regime().check_admissible(r).map_err(CliError::domain)?;
    }
    let rv = r.as_ref();

    let mut text = format!("{WRONG_BANNER}\n");
    text.push_str(&format!("{}\n", wrong.title()));
    match &r {
        Some(r) => text.push_str(&format!("r = {r}\n\n")),
        None => text.push('\n'),
    }

    let mut grid = Vec::new();
    let mut cells = Vec::new();
    for o in correct.regime().outcome_grid() {
        let (Some(good), Some(bad)) = (correct.cells().get(&o), wrong.cell(&o)) else {
            continue;
        };
        let differs = !good.equals(bad);
        grid.push(vec![
            o.eldest.to_string(),
            o.youngest.to_string(),
            value_text(good, rv, digits)?,
            value_text(bad, rv, digits)?,
            if differs { "*".into() } else { String::new() },
        ]);
        cells.push(json!({
            "eldest": o.eldest.to_string(),
            "youngest": o.youngest.to_string(),
            "correct": value_json(good, rv, digits)?,
            "wrong": value_json(bad, rv, digits)?,
            "differs": differs,
        }));
    }
    let header = ["E", "Y", "correct", "wrong", ""].map(String::from);
    text.push_str(&format_grid(&header, &grid));

    let sym_wrong = check_symmetry(&wrong);
    let sym_good = check_symmetry(&correct);
    text.push('\n');
    text.push_str(&symmetry_text("correct", &sym_good, rv, digits)?);
    text.push_str(&symmetry_text("wrong", &sym_wrong, rv, digits)?);

    let a = EventExpr::atom(Slot::Eldest, Descriptor::Female)
        .and(EventExpr::atom(Slot::Youngest, Descriptor::Female));
    let b = EventExpr::atom(Slot::Eldest, Descriptor::FemaleTheName)
        .or(EventExpr::atom(Slot::Youngest, Descriptor::FemaleTheName));
    let good_c = twochild_core::inference::conditional(&correct, &a, &b).map_err(CliError::domain)?;
    let bad_c = wrong.conditional(&a, &b).map_err(CliError::domain)?;
    text.push_str(&format!("\nP({a} | {b})\n"));
    text.push_str(&format!("  correct  {}\n", value_text(&good_c, rv, digits)?));
    text.push_str(&format!("  wrong    {}\n", value_text(&bad_c, rv, digits)?));

    let json = json!({
        "banner": WRONG_BANNER,
        "r": r.as_ref().map(ToString::to_string),
        "cells": cells,
        "symmetry": { "correct": sym_good, "wrong": sym_wrong },
        "max_defect": value_json(&sym_wrong.max_defect, rv, digits)?,
        "conditional": {
            "event": a.to_string(),
            "given": b.to_string(),
            "correct": value_json(&good_c, rv, digits)?,
            "wrong": value_json(&bad_c, rv, digits)?,
        },
    });
    Ok(Report { text, json, csv: None })
}

fn symmetry_text(name: &str, rep: &SymmetryReport, r: Option<&Rational>, digits: usize) -> Result<String, CliError> {
    if rep.passed {
        return Ok(format!("{name}: symmetric under swapping eldest and youngest, marginals preserved\n"));
    }
    let mut out = format!("{name}: FAILS the symmetry check\n");
    for d in &rep.defects {
        out.push_str(&format!(
            "  cell({}, {}) - cell({}, {}) = {}\n",
            d.eldest,
            d.youngest,
            d.youngest,
            d.eldest,
            value_text(&d.defect, r, digits)?
        ));
    }
    for v in &rep.marginal_violations {
        out.push_str(&format!(
            "  {:?} marginal of {}: {} instead of {} (short by {})\n",
            v.slot,
            v.child,
            value_text(&v.actual, r, digits)?,
            value_text(&v.expected, r, digits)?,
            value_text(&v.shortfall, r, digits)?
        ));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn verify(
    query: &str,
    seed: u64,
    n: u64,
    r: Option<RArg>,
    regime_kind: Option<RegimeKind>,
    mode: SamplingMode,
    workers: usize,
    digits: usize,
) -> Result<Report, CliError> {
    let q = parse_query(query)?;
    let (a, b) = match &q.kind {
        QueryKind::Prob(a) => (a.resolve(&q.bindings), EventExpr::True),
        QueryKind::Cond(a, b) => (a.resolve(&q.bindings), b.resolve(&q.bindings)),
        _ => {
            return Err(CliError::Domain(
                "verify takes a probability query, P(a) or P(a | b)".into(),
            ))
        }
    };
    let mut regime = q.regime();
    if let Some(k) = regime_kind {
        regime.kind = k;
    }
    let r = match (r, &q.r) {
        (Some(r), _) => r.value,
        (None, Some(r)) => r.clone(),
        (None, None) if regime.kind == RegimeKind::GenderOnly => Rational::from_integer(0.into()),
        (None, None) => {
            return Err(CliError::Domain(
                "simulation needs a numeric r: pass --r or add @r(...) to the query".into(),
            ))
        }
    };
    let cfg = SimConfig::new(regime, r, n, seed).map_err(CliError::domain)?.with_mode(mode);
    let est = estimate_conditional(&cfg, &a, &b, workers).map_err(CliError::domain)?;
    let sigmas = 4.0;
    let pass = est.within_sigmas(sigmas);
    let analytic_decimal = to_decimal(&est.analytic, digits);
    let verdict = if pass { "PASS" } else { "FAIL" };

    let mode_name = match mode {
        SamplingMode::Direct => "direct",
        SamplingMode::Reject => "reject",
    };
    let text = format!(
        "query     P({a} | {b})\n\
         config    regime {}, r {}, n {}, seed {}, mode {mode_name}\n\
         analytic  {} ({analytic_decimal})\n\
         estimate  {}/{} = {:.digits$} +/- {:.digits$}\n\
         z         {:.2}\n\
         result    {verdict} (|z| <= {sigmas})\n",
        cfg.regime.kind.code(),
        cfg.r,
        cfg.n_families,
        cfg.seed,
        est.analytic,
        est.successes,
        est.trials,
        est.p_hat,
        est.stderr,
        est.z_score,
    );
    let json = json!({
        "query": format!("P({a} | {b})"),
        "config": cfg,
        "analytic": est.analytic.to_string(),
        "analytic_decimal": analytic_decimal,
        "successes": est.successes,
        "trials": est.trials,
        "p_hat": est.p_hat,
        "stderr": est.stderr,
        "z": est.z_score,
        "sigmas": sigmas,
        "pass": pass,
    });
    Ok(Report { text, json, csv: None })
}
