use serde_json::{Map, Value};

use super::{Derivation, Rule, SequentError};
use crate::formula::{Dialect, Formula};
use crate::parse::{parse_formula, parse_sequent};

pub fn derivation_to_json(d: &Derivation) -> Value {
    let mut obj = Map::new();
    obj.insert("rule".into(), Value::String(d.rule.id()));
    match &d.rule {
        Rule::ImplLeft { principal }
        | Rule::ImplRight { principal }
        | Rule::FuseLeft { principal }
        | Rule::FuseRight { principal }
        | Rule::NegLeft { principal }
        | Rule::NegRight { principal } => {
            obj.insert("principal".into(), Value::String(principal.to_string()));
        }
        Rule::Cut { formula } | Rule::Can { formula } => {
            obj.insert("formula".into(), Value::String(formula.to_string()));
        }
        Rule::BoxKN { context, .. } => {
            obj.insert("context".into(), Value::Array(context.iter().map(|f| Value::String(f.to_string())).collect()));
        }
        _ => {}
    }
    obj.insert("conclusion".into(), Value::String(d.conclusion.to_string()));
    obj.insert("premises".into(), Value::Array(d.premises.iter().map(derivation_to_json).collect()));
    Value::Object(obj)
}

pub fn derivation_to_string(d: &Derivation) -> String {
    let mut s = serde_json::to_string_pretty(&derivation_to_json(d)).expect("derivation serializes");
    s.push('\n');
    s
}

fn bad<T>(msg: impl Into<String>) -> Result<T, SequentError> {
    Err(SequentError::Format(msg.into()))
}

fn formula_field(obj: &Map<String, Value>, key: &str) -> Result<Formula, SequentError> {
    let Some(text) = obj.get(key).and_then(Value::as_str) else {
        return bad(format!("missing string field `{key}`"));
    };
    parse_formula(text, Dialect::KA).map_err(|e| SequentError::Format(format!("`{key}`: {e}")))
}

/// Numeric arguments of ids such as `sc(2)` or `box_kn(2,1)`.
fn args(id: &str) -> Result<(&str, Vec<usize>), SequentError> {
    match id.split_once('(') {
        None => Ok((id, vec![])),
        Some((name, rest)) => {
            let Some(inner) = rest.strip_suffix(')') else {
                return bad(format!("bad rule id `{id}`"));
            };
            let nums = inner
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| SequentError::Format(format!("bad rule id `{id}`")))?;
            Ok((name, nums))
        }
    }
}

pub fn derivation_from_json(v: &Value) -> Result<Derivation, SequentError> {
    let Some(obj) = v.as_object() else {
        return bad("derivation nodes are objects");
    };
    let Some(id) = obj.get("rule").and_then(Value::as_str) else {
        return bad("missing `rule`");
    };
    let Some(text) = obj.get("conclusion").and_then(Value::as_str) else {
        return bad("missing `conclusion`");
    };
    let conclusion = parse_sequent(text, Dialect::KA).map_err(|e| SequentError::Format(format!("conclusion: {e}")))?;
    let premises = match obj.get("premises") {
        None => vec![],
        Some(Value::Array(ps)) => ps.iter().map(derivation_from_json).collect::<Result<Vec<_>, _>>()?,
        Some(_) => return bad("`premises` must be an array"),
    };
    let (name, nums) = args(id)?;
    let principal = || formula_field(obj, "principal");
    let formula = || formula_field(obj, "formula");
    let rule = match (name, nums.as_slice()) {
        ("id", []) => Rule::Id,
        ("cut", []) => Rule::Cut { formula: formula()? },
        ("mix", []) => Rule::Mix,
        ("sc", [n]) => Rule::Sc { n: *n },
        ("impl_left", []) => Rule::ImplLeft { principal: principal()? },
        ("impl_right", []) => Rule::ImplRight { principal: principal()? },
        ("box", [n]) => Rule::BoxN { n: *n },
        ("fuse_left", []) => Rule::FuseLeft { principal: principal()? },
        ("fuse_right", []) => Rule::FuseRight { principal: principal()? },
        ("zero_left", []) => Rule::ZeroLeft,
        ("zero_right", []) => Rule::ZeroRight,
        ("neg_left", []) => Rule::NegLeft { principal: principal()? },
        ("neg_right", []) => Rule::NegRight { principal: principal()? },
        ("box_kn", [k, n]) => {
            let context = match obj.get("context") {
                None => vec![],
                Some(Value::Array(xs)) => xs
                    .iter()
                    .map(|x| {
                        let t = x.as_str().ok_or_else(|| SequentError::Format("context entries are strings".into()))?;
                        parse_formula(t, Dialect::KA).map_err(|e| SequentError::Format(format!("context: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                Some(_) => return bad("`context` must be an array"),
            };
            Rule::BoxKN { k: *k, n: *n, context }
        }
        ("can", []) => Rule::Can { formula: formula()? },
        _ => return bad(format!("unknown rule `{id}`")),
    };
    Ok(Derivation { conclusion, rule, premises })
}

pub fn derivation_from_str(text: &str) -> Result<Derivation, SequentError> {
    let v: Value = serde_json::from_str(text).map_err(|e| SequentError::Format(e.to_string()))?;
    derivation_from_json(&v)
}
