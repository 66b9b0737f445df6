use serde_json::json;
use twochild_core::querylang::evaluate;

use crate::commands::parse_query;
use crate::{CliError, Report};

struct Step {
    label: &'static str,
    prose: &'static str,
    query: &'static str,
}

const STEPS: [Step; 6] = [
    Step {
        label: "Q1",
        prose: "A family has two children. What is the chance that both are girls?",
        query: "@regime(i0) P(E.f & Y.f)",
    },
    Step {
        label: "Q2",
        prose: "The eldest child is a girl. What is the chance that both are girls?",
        query: "@regime(i0) P(E.f & Y.f | E.f)",
    },
    Step {
        label: "Q3",
        prose: "At least one child is a boy. What is the chance that both are boys?",
        query: "@regime(i0) P(E.m & Y.m | E.m + Y.m)",
    },
    Step {
        label: "Q4",
        prose: "At least one child is a girl with a given name N, carried by a fraction r \
                of girls. If sisters may share a name, the answer depends on r:",
        query: "@regime(i1) P(E.f & Y.f | E.fN + Y.fN)",
    },
    Step {
        label: "Q4",
        prose: "For a rare name, say r = 1/50, that is already close to one half:",
        query: "@regime(i1) @r(1/50) P(E.f & Y.f | E.fN + Y.fN)",
    },
    Step {
        label: "Q4",
        prose: "Parents do not give two daughters the same name. Once that is part of the \
                model, r drops out entirely:",
        query: "@regime(i2) P(E.f & Y.f | E.fN + Y.fN)",
    },
];

pub(crate) fn demo(digits: usize) -> Result<Report, CliError> {
    let mut text = String::new();
    let mut steps = Vec::new();
    for step in &STEPS {
        let q = parse_query(step.query)?;
        let ev = evaluate(&q, digits).map_err(CliError::domain)?;
        let value = match &ev.decimal {
            Some(d) if ev.exact.as_constant().is_some() || ev.r.is_none() => format!("{} ({d})", ev.exact),
            Some(d) => format!("{} = {d} at r = {}", ev.exact, ev.r.as_deref().unwrap_or("")),
            None => ev.exact.to_string(),
        };
        text.push_str(&format!("{}. {}\n    {}\n    = {}\n\n", step.label, step.prose, ev.query, value));
        steps.push(json!({
            "label": step.label,
            "question": step.prose,
            "evaluation": ev,
        }));
    }
    text.push_str(
        "Knowing which child is a girl (Q2) and knowing a girl by a name no sister \
         shares (Q4) carry the same information, so both give one half.\n",
    );
    Ok(Report {
        text,
        json: json!({ "steps": steps }),
        csv: None,
    })
}
