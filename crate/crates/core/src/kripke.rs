//! Finite crisp Kripke models with rational valuations.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::formula::{DialectError, Formula};
use crate::rat::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error("model file: {0}")]
    Format(String),
}

/// Worlds keep their declared order; unset valuation entries read as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    succ: Vec<Vec<usize>>,
    val: Vec<BTreeMap<String, Q>>,
    cvalue: Option<Q>,
}

impl Model {
    pub fn new<S: AsRef<str>>(worlds: &[S]) -> Model {
        let mut m = Model { worlds: Vec::new(), index: HashMap::new(), succ: Vec::new(), val: Vec::new(), cvalue: None };
        for w in worlds {
            m.add_world(w.as_ref());
        }
        m
    }

    /// Returns the index of the world, adding it if new.
    pub fn add_world(&mut self, w: &str) -> usize {
        if let Some(&i) = self.index.get(w) {
            return i;
        }
        let i = self.worlds.len();
        self.worlds.push(w.to_string());
        self.index.insert(w.to_string(), i);
        self.succ.push(Vec::new());
        self.val.push(BTreeMap::new());
        i
    }

    fn idx(&self, w: &str) -> Result<usize, ModelError> {
        self.index.get(w).copied().ok_or_else(|| ModelError::UnknownWorld(w.to_string()))
    }

    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<(), ModelError> {
        let (a, b) = (self.idx(from)?, self.idx(to)?);
        if !self.succ[a].contains(&b) {
            self.succ[a].push(b);
        }
        Ok(())
    }

    pub fn set(&mut self, var: &str, world: &str, value: Q) -> Result<(), ModelError> {
        let i = self.idx(world)?;
        self.val[i].insert(var.to_string(), value);
        Ok(())
    }

    pub fn set_c(&mut self, value: Option<Q>) {
        self.cvalue = value;
    }

    pub fn cvalue(&self) -> Option<&Q> {
        self.cvalue.as_ref()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn relation(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (a, succ) in self.succ.iter().enumerate() {
            for &b in succ {
                out.push((self.worlds[a].clone(), self.worlds[b].clone()));
            }
        }
        out
    }

    pub fn successors(&self, w: &str) -> Result<Vec<&str>, ModelError> {
        let i = self.idx(w)?;
        Ok(self.succ[i].iter().map(|&j| self.worlds[j].as_str()).collect())
    }

    pub fn value(&self, var: &str, world: &str) -> Result<Q, ModelError> {
        let i = self.idx(world)?;
        Ok(self.val[i].get(var).cloned().unwrap_or_else(Q::zero))
    }

    /// Variables with an explicit value at some world.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        self.val.iter().flat_map(|row| row.keys().cloned()).collect()
    }

    pub fn is_serial(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }

    /// Multiply every valuation entry and the constant by `lambda`.
    pub fn scaled(&self, lambda: &Q) -> Model {
        let mut m = self.clone();
        for row in &mut m.val {
            for v in row.values_mut() {
                *v = &*v * lambda;
            }
        }
        m.cvalue = m.cvalue.map(|c| c * lambda);
        m
    }

    /// Values of `f` at every world, in declared order.
    pub fn eval_all(&self, f: &Formula) -> Result<Vec<Q>, ModelError> {
        let n = self.worlds.len();
        Ok(match f {
            Formula::Var(p) => self.val.iter().map(|row| row.get(p).cloned().unwrap_or_else(Q::zero)).collect(),
            Formula::Zero => vec![Q::zero(); n],
            Formula::ConstC => {
                let c = self
                    .cvalue
                    .clone()
                    .ok_or_else(|| DialectError("the constant c needs a model with a c value".into()))?;
                vec![c; n]
            }
            Formula::Impl(a, b) => {
                let (a, b) = (self.eval_all(a)?, self.eval_all(b)?);
                a.iter().zip(b).map(|(x, y)| y - x).collect()
            }
            Formula::Fuse(a, b) => {
                let (a, b) = (self.eval_all(a)?, self.eval_all(b)?);
                a.into_iter().zip(b).map(|(x, y)| x + y).collect()
            }
            Formula::Meet(a, b) => {
                let (a, b) = (self.eval_all(a)?, self.eval_all(b)?);
                a.into_iter().zip(b).map(|(x, y)| x.min(y)).collect()
            }
            Formula::Join(a, b) => {
                let (a, b) = (self.eval_all(a)?, self.eval_all(b)?);
                a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect()
            }
            Formula::Box(a) => {
                let a = self.eval_all(a)?;
                self.succ
                    .iter()
                    .map(|s| s.iter().map(|&j| a[j].clone()).min().unwrap_or_else(Q::zero))
                    .collect()
            }
        })
    }

    pub fn eval(&self, f: &Formula, w: &str) -> Result<Q, ModelError> {
        let i = self.idx(w)?;
        Ok(self.eval_all(f)?.swap_remove(i))
    }

    pub fn is_valid_in(&self, f: &Formula) -> Result<bool, ModelError> {
        Ok(self.eval_all(f)?.iter().all(|v| !v.is_negative()))
    }

    pub fn to_json(&self) -> Value {
        let relation: Vec<Value> = self.relation().into_iter().map(|(a, b)| json!([a, b])).collect();
        let mut valuation = Map::new();
        for (w, row) in self.worlds.iter().zip(&self.val) {
            let vars: Map<String, Value> = row.iter().map(|(p, v)| (p.clone(), Value::String(rat::to_text(v)))).collect();
            valuation.insert(w.clone(), Value::Object(vars));
        }
        let mut obj = Map::new();
        obj.insert("worlds".into(), json!(self.worlds));
        obj.insert("relation".into(), Value::Array(relation));
        obj.insert("valuation".into(), Value::Object(valuation));
        if let Some(c) = &self.cvalue {
            obj.insert("c".into(), Value::String(rat::to_text(c)));
        }
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(v: &Value) -> Result<Model, ModelError> {
        let bad = |m: &str| ModelError::Format(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let worlds = obj.get("worlds").and_then(Value::as_array).ok_or_else(|| bad("missing `worlds` array"))?;
        let mut m = Model::new::<&str>(&[]);
        for w in worlds {
            m.add_world(w.as_str().ok_or_else(|| bad("world ids must be strings"))?);
        }
        if let Some(rel) = obj.get("relation") {
            for pair in rel.as_array().ok_or_else(|| bad("`relation` must be an array"))? {
                let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("relation entries are pairs"))?;
                let a = pair[0].as_str().ok_or_else(|| bad("relation entries are strings"))?;
                let b = pair[1].as_str().ok_or_else(|| bad("relation entries are strings"))?;
                m.add_edge(a, b)?;
            }
        }
        if let Some(val) = obj.get("valuation") {
            for (w, vars) in val.as_object().ok_or_else(|| bad("`valuation` must be an object"))? {
                for (p, x) in vars.as_object().ok_or_else(|| bad("valuation rows must be objects"))? {
                    let x = value_of(x).ok_or_else(|| bad(&format!("bad rational for {p} at {w}")))?;
                    m.set(p, w, x)?;
                }
            }
        }
        if let Some(c) = obj.get("c") {
            m.cvalue = Some(value_of(c).ok_or_else(|| bad("bad rational for c"))?);
        }
        Ok(m)
    }

    pub fn from_json_str(text: &str) -> Result<Model, ModelError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        Model::from_json(&v)
    }
}

fn value_of(v: &Value) -> Option<Q> {
    match v {
        Value::String(s) => rat::from_text(s),
        Value::Number(n) => n.as_i64().map(rat::q),
        _ => None,
    }
}

/// Seeded random model on worlds `w1..wn`. Values are multiples of 1, 1/2 or
/// 1/3 in `[-value_range, value_range]`; `density` is the edge probability.
pub fn random_model(n_worlds: usize, vars: &[String], density: f64, value_range: u32, seed: u64, serial: bool) -> Model {
    assert!(n_worlds >= 1, "a model needs a world");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=n_worlds).map(|i| format!("w{i}")).collect();
    let mut m = Model::new(&names);
    for a in 0..n_worlds {
        for b in 0..n_worlds {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                m.succ[a].push(b);
            }
        }
        if serial && m.succ[a].is_empty() {
            m.succ[a].push(rng.gen_range(0..n_worlds));
        }
    }
    for i in 0..n_worlds {
        for p in vars {
            let x = random_value(&mut rng, value_range);
            m.val[i].insert(p.clone(), x);
        }
    }
    m
}

pub fn random_value<R: Rng>(rng: &mut R, value_range: u32) -> Q {
    let d: i64 = [1, 1, 2, 3][rng.gen_range(0..4)];
    let r = i64::from(value_range) * d;
    rat::q2(rng.gen_range(-r..=r), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Dialect;
    use crate::parse::parse_formula;
    use crate::rat::q;

    fn f(s: &str) -> Formula {
        parse_formula(s, Dialect::KA).unwrap()
    }

    /// Root with two children a and b, each with two leaves; (p, q) per world.
    pub(crate) fn game_model() -> Model {
        let mut m = Model::new(&["r", "a", "b", "a1", "a2", "b1", "b2"]);
        for (x, y) in [("r", "a"), ("r", "b"), ("a", "a1"), ("a", "a2"), ("b", "b1"), ("b", "b2")] {
            m.add_edge(x, y).unwrap();
        }
        let vals = [("r", 0, 0), ("a", 1, 0), ("b", 0, 1), ("a1", 2, 0), ("a2", 4, 1), ("b1", 1, 1), ("b2", 1, 3)];
        for (w, p, qv) in vals {
            m.set("p", w, q(p)).unwrap();
            m.set("q", w, q(qv)).unwrap();
        }
        m
    }

    #[test]
    fn game_values() {
        let m = game_model();
        assert_eq!(m.eval(&f("<>[](q -> p)"), "r").unwrap(), q(2));
        assert_eq!(m.eval(&f("<>[]p"), "r").unwrap(), q(2));
        assert_eq!(m.eval(&f("[]<>q"), "r").unwrap(), q(1));
        assert_eq!(m.eval(&f("<>((q -> p) & [](q -> p))"), "r").unwrap(), q(3));
        assert!(!m.is_valid_in(&f("<>[](q -> p) -> ([]<>q -> <>[]p)")).unwrap());
        assert!(!m.is_serial());
    }

    #[test]
    fn empty_box_is_zero() {
        let m = Model::new(&["x"]);
        assert_eq!(m.eval(&f("[]p"), "x").unwrap(), q(0));
        assert_eq!(m.eval(&f("[](p -> 0)"), "x").unwrap(), q(0));
        assert!(!m.is_serial());
        let mut r = Model::new(&["x"]);
        r.add_edge("x", "x").unwrap();
        assert!(r.is_serial());
    }

    #[test]
    fn box_or_countermodel() {
        let mut m = Model::new(&["w1", "w2", "w3", "w4"]);
        for w in ["w2", "w3", "w4"] {
            m.add_edge("w1", w).unwrap();
        }
        for (w, p, qv) in [("w2", 3, 0), ("w3", 0, 3), ("w4", 3, 0)] {
            m.set("p", w, q(p)).unwrap();
            m.set("q", w, q(qv)).unwrap();
        }
        let g = f("[](p \\/ q) -> ([]p \\/ []q)");
        assert_eq!(m.eval(&g, "w1").unwrap(), q(-3));
        assert!(!m.is_valid_in(&g).unwrap());
    }

    #[test]
    fn errors() {
        let m = Model::new(&["x"]);
        assert_eq!(m.eval(&f("p"), "y"), Err(ModelError::UnknownWorld("y".into())));
        let c = parse_formula("c", Dialect::KAc).unwrap();
        assert!(matches!(m.eval(&c, "x"), Err(ModelError::Dialect(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut m = game_model();
        m.set_c(Some(rat::q2(-1, 2)));
        let text = m.to_json_string();
        let back = Model::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert_eq!(back.eval(&f("<>[](q -> p)"), "r").unwrap(), q(2));
        assert!(text.starts_with("{\n  \"worlds\""));
    }

    #[test]
    fn random_models() {
        let vars = vec!["p".to_string(), "q".to_string()];
        let a = random_model(4, &vars, 0.3, 5, 7, true);
        assert_eq!(a, random_model(4, &vars, 0.3, 5, 7, true));
        assert!(a.is_serial());
        let lone = random_model(1, &vars, 0.0, 5, 1, false);
        assert!(lone.relation().is_empty());
    }
}
