//! Scenario documents.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "model": "single",
//!   "label": "metcalfe, three members",
//!   "method": "all",
//!   "sample": { "permutations": 20000, "seed": 7 },
//!   "params": { "n": 3, "k": 2, "rho": 1.0 }
//! }
//! ```
//!
//! `params` depends on `model`; see README for every block. Validation walks
//! the whole document and reports every violation with its path.

use std::collections::{BTreeMap, BTreeSet};

use fairshare_core::geo::{region_census, DiskCensus, GeoModel};
use fairshare_core::models::{CssModel, ProfitCssParams, SingleCssParams, WeightedCssParams};
use fairshare_core::oligopoly::OligopolyGraph;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Violation};

pub const DEFAULT_PERMUTATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Single,
    Weighted,
    Profit,
    OligopolyCoarse,
    OligopolyFine,
    Geo,
    GeoFounder,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Single,
        ModelKind::Weighted,
        ModelKind::Profit,
        ModelKind::OligopolyCoarse,
        ModelKind::OligopolyFine,
        ModelKind::Geo,
        ModelKind::GeoFounder,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Single => "single",
            ModelKind::Weighted => "weighted",
            ModelKind::Profit => "profit",
            ModelKind::OligopolyCoarse => "oligopoly_coarse",
            ModelKind::OligopolyFine => "oligopoly_fine",
            ModelKind::Geo => "geo",
            ModelKind::GeoFounder => "geo_founder",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Closed,
    Exact,
    Sample,
    All,
}

impl MethodChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodChoice::Closed => "closed",
            MethodChoice::Exact => "exact",
            MethodChoice::Sample => "sample",
            MethodChoice::All => "all",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Closed, Self::Exact, Self::Sample, Self::All]
            .into_iter()
            .find(|m| m.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub permutations: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            permutations: DEFAULT_PERMUTATIONS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpec {
    pub id: String,
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphParams {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<(String, String)>,
    pub rho: f64,
}

impl GraphParams {
    pub fn build(&self) -> fairshare_core::Result<OligopolyGraph> {
        let vertices = self.vertices.iter().map(|v| (v.id.clone(), v.size)).collect();
        OligopolyGraph::new(vertices, &self.edges, self.rho)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CensusSpec {
    /// Disk ids (1-based) covering each user.
    Placements(Vec<Vec<usize>>),
    /// `d_S` keyed by sorted 1-based disk ids.
    Table(BTreeMap<Vec<usize>, u64>),
}

impl CensusSpec {
    fn max_disk(&self) -> usize {
        match self {
            CensusSpec::Placements(p) => p.iter().flatten().copied().max().unwrap_or(0),
            CensusSpec::Table(t) => t.keys().flatten().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoParams {
    pub census: CensusSpec,
    pub m: usize,
    pub rho: f64,
    pub value: GeoModel,
}

impl GeoParams {
    pub fn build(&self) -> fairshare_core::Result<DiskCensus> {
        match &self.census {
            CensusSpec::Placements(p) => region_census(p, self.m),
            CensusSpec::Table(t) => DiskCensus::from_table(self.m, t.iter().map(|(k, &d)| (k.clone(), d))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Single(SingleCssParams),
    Weighted(WeightedCssParams),
    Profit(ProfitCssParams),
    OligopolyCoarse(GraphParams),
    OligopolyFine(GraphParams),
    Geo(GeoParams),
    GeoFounder(GeoParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Single(_) => ModelKind::Single,
            ModelParams::Weighted(_) => ModelKind::Weighted,
            ModelParams::Profit(_) => ModelKind::Profit,
            ModelParams::OligopolyCoarse(_) => ModelKind::OligopolyCoarse,
            ModelParams::OligopolyFine(_) => ModelKind::OligopolyFine,
            ModelParams::Geo(_) => ModelKind::Geo,
            ModelParams::GeoFounder(_) => ModelKind::GeoFounder,
        }
    }

    pub fn css_model(&self) -> Option<CssModel> {
        match self {
            ModelParams::Single(p) => Some(CssModel::Single(*p)),
            ModelParams::Weighted(p) => Some(CssModel::Weighted(p.clone())),
            ModelParams::Profit(p) => Some(CssModel::Profit(*p)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: Option<String>,
    pub method: MethodChoice,
    pub sample: Option<SampleConfig>,
    pub params: ModelParams,
}

impl Scenario {
    pub fn new(params: ModelParams) -> Self {
        Scenario {
            label: None,
            method: MethodChoice::Closed,
            sample: None,
            params,
        }
    }

    pub fn model(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn display_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.model().as_str().to_string())
    }

    /// Canonical JSON form; `parse_scenario` accepts everything this writes.
    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("model".into(), json!(self.model().as_str()));
        if let Some(label) = &self.label {
            root.insert("label".into(), json!(label));
        }
        root.insert("method".into(), json!(self.method.as_str()));
        if let Some(s) = &self.sample {
            root.insert(
                "sample".into(),
                json!({ "permutations": s.permutations, "seed": s.seed }),
            );
        }
        let params = match &self.params {
            ModelParams::Single(p) => json!({ "n": p.n, "k": p.k, "rho": p.rho }),
            ModelParams::Weighted(p) => json!({ "weights": p.weights, "alpha": p.alpha, "rho": p.rho, "k": p.k }),
            ModelParams::Profit(p) => json!({
                "n": p.n, "k": p.k, "rho": p.rho,
                "founder_cost": p.founder_cost, "participant_cost": p.participant_cost,
            }),
            ModelParams::OligopolyCoarse(g) | ModelParams::OligopolyFine(g) => json!({
                "vertices": g.vertices.iter().map(|v| json!({ "id": v.id, "size": v.size })).collect::<Vec<_>>(),
                "edges": g.edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "rho": g.rho,
            }),
            ModelParams::Geo(g) | ModelParams::GeoFounder(g) => {
                let census = match &g.census {
                    CensusSpec::Placements(p) => json!({ "placements": p }),
                    CensusSpec::Table(t) => {
                        let d: Map<String, Value> = t.iter().map(|(k, v)| (join_ids(k), json!(v))).collect();
                        json!({ "d": d })
                    }
                };
                json!({ "census": census, "m": g.m, "rho": g.rho, "value": g.value.to_string() })
            }
        };
        root.insert("params".into(), params);
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("scenario values are always serializable")
    }
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// Collects violations while walking a document.
struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn fail(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(o) => Some(o),
            None => {
                self.fail(path, "expected an object");
                None
            }
        }
    }

    fn unknown_keys(&mut self, obj: &Map<String, Value>, path: &str, allowed: &[&str]) {
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                self.fail(
                    format!("{path}.{key}"),
                    format!("unknown field; expected one of {allowed:?}"),
                );
            }
        }
    }

    fn number(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: Option<f64>) -> Option<f64> {
        match obj.get(key) {
            None => {
                if default.is_none() {
                    self.fail(format!("{path}.{key}"), "missing required field");
                }
                default
            }
            Some(v) => match v.as_f64() {
                Some(x) if x.is_finite() => Some(x),
                _ => {
                    self.fail(format!("{path}.{key}"), "expected a finite number");
                    None
                }
            },
        }
    }

    fn positive(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: Option<f64>) -> Option<f64> {
        let x = self.number(obj, path, key, default)?;
        if x > 0.0 {
            Some(x)
        } else {
            self.fail(format!("{path}.{key}"), format!("must be > 0, got {x}"));
            None
        }
    }

    fn nonnegative(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: Option<f64>) -> Option<f64> {
        let x = self.number(obj, path, key, default)?;
        if x >= 0.0 {
            Some(x)
        } else {
            self.fail(format!("{path}.{key}"), format!("must be >= 0, got {x}"));
            None
        }
    }

    fn integer(&mut self, v: &Value, path: &str) -> Option<u64> {
        match v.as_u64() {
            Some(x) => Some(x),
            None => {
                self.fail(path, "expected a nonnegative integer");
                None
            }
        }
    }

    fn field_integer(&mut self, obj: &Map<String, Value>, path: &str, key: &str, default: Option<u64>) -> Option<u64> {
        match obj.get(key) {
            None => {
                if default.is_none() {
                    self.fail(format!("{path}.{key}"), "missing required field");
                }
                default
            }
            Some(v) => self.integer(v, &format!("{path}.{key}")),
        }
    }

    fn array<'a>(&mut self, obj: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a Vec<Value>> {
        match obj.get(key) {
            None => {
                self.fail(format!("{path}.{key}"), "missing required field");
                None
            }
            Some(Value::Array(a)) => Some(a),
            Some(_) => {
                self.fail(format!("{path}.{key}"), "expected an array");
                None
            }
        }
    }

    fn string<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a str> {
        match v.as_str() {
            Some(s) => Some(s),
            None => {
                self.fail(path, "expected a string");
                None
            }
        }
    }
}

/// Parses and fully validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    scenario_from_value(&value)
}

pub fn scenario_from_value(value: &Value) -> Result<Scenario, CliError> {
    let mut c = Checker { violations: Vec::new() };
    let scenario = check_scenario(&mut c, value);
    match scenario {
        Some(s) if c.violations.is_empty() => Ok(s),
        _ => {
            if c.violations.is_empty() {
                c.fail("$", "invalid scenario");
            }
            Err(CliError::Validation(c.violations))
        }
    }
}

fn check_scenario(c: &mut Checker, value: &Value) -> Option<Scenario> {
    let root = c.object(value, "$")?;
    c.unknown_keys(root, "$", &["model", "label", "method", "sample", "params"]);

    let model = match root.get("model") {
        None => {
            c.fail("$.model", "missing required field");
            None
        }
        Some(v) => c.string(v, "$.model").and_then(|s| {
            let m = ModelKind::parse(s);
            if m.is_none() {
                let names: Vec<_> = ModelKind::ALL.iter().map(|m| m.as_str()).collect();
                c.fail("$.model", format!("unknown model `{s}`; expected one of {names:?}"));
            }
            m
        }),
    };

    let label = root
        .get("label")
        .and_then(|v| c.string(v, "$.label").map(str::to_string));

    let method = match root.get("method") {
        None => Some(MethodChoice::Closed),
        Some(v) => c.string(v, "$.method").and_then(|s| {
            let m = MethodChoice::parse(s);
            if m.is_none() {
                c.fail(
                    "$.method",
                    format!("unknown method `{s}`; expected closed, exact, sample or all"),
                );
            }
            m
        }),
    };

    let sample = match root.get("sample") {
        None => Some(None),
        Some(v) => c.object(v, "$.sample").and_then(|o| {
            c.unknown_keys(o, "$.sample", &["permutations", "seed"]);
            let perms = c.field_integer(o, "$.sample", "permutations", Some(DEFAULT_PERMUTATIONS as u64));
            let seed = c.field_integer(o, "$.sample", "seed", Some(0));
            if perms == Some(0) {
                c.fail("$.sample.permutations", "must be at least 1");
            }
            Some(Some(SampleConfig {
                permutations: perms? as usize,
                seed: seed?,
            }))
        }),
    };

    let params = match (model, root.get("params")) {
        (_, None) => {
            c.fail("$.params", "missing required field");
            None
        }
        (None, Some(_)) => None,
        (Some(m), Some(p)) => check_params(c, m, p, method),
    };

    Some(Scenario {
        label,
        method: method?,
        sample: sample?,
        params: params?,
    })
}

fn check_params(c: &mut Checker, model: ModelKind, value: &Value, method: Option<MethodChoice>) -> Option<ModelParams> {
    const P: &str = "$.params";
    let obj = c.object(value, P)?;
    match model {
        ModelKind::Single => {
            c.unknown_keys(obj, P, &["n", "k", "rho"]);
            let n = check_crowd_size(c, obj);
            let k = c.positive(obj, P, "k", None);
            let rho = c.positive(obj, P, "rho", Some(1.0));
            Some(ModelParams::Single(SingleCssParams {
                n: n?,
                k: k?,
                rho: rho?,
            }))
        }
        ModelKind::Profit => {
            c.unknown_keys(obj, P, &["n", "k", "rho", "founder_cost", "participant_cost"]);
            let n = check_crowd_size(c, obj);
            let k = c.positive(obj, P, "k", None);
            let rho = c.positive(obj, P, "rho", Some(1.0));
            let kg = c.nonnegative(obj, P, "founder_cost", Some(0.0));
            let ku = c.nonnegative(obj, P, "participant_cost", Some(0.0));
            Some(ModelParams::Profit(ProfitCssParams {
                n: n?,
                k: k?,
                rho: rho?,
                founder_cost: kg?,
                participant_cost: ku?,
            }))
        }
        ModelKind::Weighted => {
            c.unknown_keys(obj, P, &["weights", "alpha", "rho", "k"]);
            let weights = c.array(obj, P, "weights").and_then(|arr| {
                let mut out = Vec::with_capacity(arr.len());
                let mut ok = true;
                for (i, w) in arr.iter().enumerate() {
                    match w.as_f64() {
                        Some(x) if x.is_finite() && x >= 0.0 => out.push(x),
                        _ => {
                            c.fail(format!("{P}.weights[{i}]"), "expected a finite number >= 0");
                            ok = false;
                        }
                    }
                }
                if arr.is_empty() {
                    c.fail(format!("{P}.weights"), "need at least one crowd member");
                    ok = false;
                } else if ok && out.iter().all(|&w| w == 0.0) {
                    c.fail(format!("{P}.weights"), "at least one weight must be positive");
                    ok = false;
                }
                ok.then_some(out)
            });
            let alpha = c.positive(obj, P, "alpha", Some(1.0));
            let rho = c.positive(obj, P, "rho", Some(1.0));
            let k = c.positive(obj, P, "k", Some(2.0));
            if let (Some(k), Some(MethodChoice::Closed)) = (k, method) {
                if k != 2.0 {
                    c.fail(
                        format!("{P}.k"),
                        "the closed form needs k = 2; use method exact or sample",
                    );
                }
            }
            Some(ModelParams::Weighted(WeightedCssParams {
                weights: weights?,
                alpha: alpha?,
                rho: rho?,
                k: k?,
            }))
        }
        ModelKind::OligopolyCoarse | ModelKind::OligopolyFine => {
            let fine = model == ModelKind::OligopolyFine;
            let g = check_graph(c, obj, fine, method)?;
            Some(if fine {
                ModelParams::OligopolyFine(g)
            } else {
                ModelParams::OligopolyCoarse(g)
            })
        }
        ModelKind::Geo | ModelKind::GeoFounder => {
            let g = check_geo(c, obj)?;
            Some(if model == ModelKind::Geo {
                ModelParams::Geo(g)
            } else {
                ModelParams::GeoFounder(g)
            })
        }
    }
}

fn check_crowd_size(c: &mut Checker, obj: &Map<String, Value>) -> Option<usize> {
    let n = c.field_integer(obj, "$.params", "n", None)?;
    if n == 0 {
        c.fail("$.params.n", "crowd size must be at least 1");
        return None;
    }
    Some(n as usize)
}

fn check_graph(
    c: &mut Checker,
    obj: &Map<String, Value>,
    fine: bool,
    method: Option<MethodChoice>,
) -> Option<GraphParams> {
    const P: &str = "$.params";
    c.unknown_keys(obj, P, &["vertices", "edges", "rho"]);
    let rho = c.positive(obj, P, "rho", Some(1.0));

    let mut vertices = Vec::new();
    let mut ids = BTreeSet::new();
    let mut vertices_ok = true;
    if let Some(arr) = c.array(obj, P, "vertices") {
        if arr.is_empty() {
            c.fail(format!("{P}.vertices"), "graph needs at least one vertex");
            vertices_ok = false;
        }
        for (i, v) in arr.iter().enumerate() {
            let path = format!("{P}.vertices[{i}]");
            let Some(o) = c.object(v, &path) else {
                vertices_ok = false;
                continue;
            };
            c.unknown_keys(o, &path, &["id", "size"]);
            let id = match o.get("id") {
                Some(v) => c.string(v, &format!("{path}.id")).map(str::to_string),
                None => {
                    c.fail(format!("{path}.id"), "missing required field");
                    None
                }
            };
            let size = c.nonnegative(o, &path, "size", None);
            if let Some(size) = size {
                if fine && size.fract() != 0.0 {
                    c.fail(format!("{path}.size"), "fine-grain crowd sizes must be whole numbers");
                }
                if fine && size == 0.0 && method == Some(MethodChoice::Closed) {
                    c.fail(
                        format!("{path}.size"),
                        "the fine-grain closed form needs a nonempty crowd; use method exact",
                    );
                }
            }
            match (id, size) {
                (Some(id), Some(size)) => {
                    if !ids.insert(id.clone()) {
                        c.fail(format!("{path}.id"), format!("duplicate vertex id `{id}`"));
                        vertices_ok = false;
                    }
                    vertices.push(VertexSpec { id, size });
                }
                _ => vertices_ok = false,
            }
        }
    } else {
        vertices_ok = false;
    }

    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut edges_ok = true;
    match obj.get("edges") {
        None => {}
        Some(Value::Array(arr)) => {
            for (i, e) in arr.iter().enumerate() {
                let path = format!("{P}.edges[{i}]");
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .and_then(|p| Some((p[0].as_str()?.to_string(), p[1].as_str()?.to_string())));
                let Some((a, b)) = pair else {
                    c.fail(path, "expected a pair of vertex ids");
                    edges_ok = false;
                    continue;
                };
                for end in [&a, &b] {
                    if vertices_ok && !ids.contains(end) {
                        c.fail(
                            path.clone(),
                            format!("edge ({a}, {b}) references unknown vertex `{end}`"),
                        );
                        edges_ok = false;
                    }
                }
                if a == b {
                    c.fail(path.clone(), format!("self-loop on vertex `{a}`"));
                    edges_ok = false;
                }
                let key = if a <= b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                };
                if !seen.insert(key) {
                    c.fail(path.clone(), format!("duplicate edge ({a}, {b})"));
                    edges_ok = false;
                }
                edges.push((a, b));
            }
        }
        Some(_) => {
            c.fail(format!("{P}.edges"), "expected an array");
            edges_ok = false;
        }
    }

    (vertices_ok && edges_ok).then_some(())?;
    Some(GraphParams {
        vertices,
        edges,
        rho: rho?,
    })
}

fn parse_region_key(key: &str) -> Option<Vec<usize>> {
    let mut ids = key
        .split(',')
        .map(|p| p.trim().parse::<usize>().ok().filter(|&d| d >= 1))
        .collect::<Option<Vec<_>>>()?;
    ids.sort_unstable();
    ids.dedup();
    Some(ids)
}

fn check_geo(c: &mut Checker, obj: &Map<String, Value>) -> Option<GeoParams> {
    const P: &str = "$.params";
    c.unknown_keys(obj, P, &["census", "m", "rho", "value"]);
    let rho = c.positive(obj, P, "rho", Some(1.0));
    let value = match obj.get("value") {
        None => Some(GeoModel::Metcalfe),
        Some(v) => c.string(v, &format!("{P}.value")).and_then(|s| match s {
            "lin" => Some(GeoModel::Linear),
            "met" => Some(GeoModel::Metcalfe),
            other => {
                c.fail(
                    format!("{P}.value"),
                    format!("unknown value model `{other}`; expected lin or met"),
                );
                None
            }
        }),
    };

    let census_path = format!("{P}.census");
    let census = match obj.get("census") {
        None => {
            c.fail(&census_path, "missing required field");
            None
        }
        Some(v) => c.object(v, &census_path).and_then(|o| {
            c.unknown_keys(o, &census_path, &["placements", "d"]);
            match (o.get("placements"), o.get("d")) {
                (Some(_), Some(_)) | (None, None) => {
                    c.fail(&census_path, "give exactly one of `placements` or `d`");
                    None
                }
                (Some(p), None) => check_placements(c, p, &format!("{census_path}.placements")),
                (None, Some(d)) => check_table(c, d, &format!("{census_path}.d")),
            }
        }),
    };

    let max_disk = census.as_ref().map_or(0, CensusSpec::max_disk);
    let m = match obj.get("m") {
        None => {
            if census.is_some() && max_disk == 0 {
                c.fail(
                    format!("{P}.m"),
                    "cannot infer the number of agents from an empty census",
                );
            }
            Some(max_disk)
        }
        Some(v) => c.integer(v, &format!("{P}.m")).map(|m| m as usize),
    };
    if let Some(m) = m {
        if m > fairshare_core::MAX_PLAYERS - 1 {
            c.fail(
                format!("{P}.m"),
                format!("at most {} agents are supported", fairshare_core::MAX_PLAYERS - 1),
            );
        }
        if obj.contains_key("m") && m == 0 {
            c.fail(format!("{P}.m"), "need at least one agent");
        }
        if m < max_disk {
            c.fail(
                format!("{P}.m"),
                format!("census references disk {max_disk} but m = {m}"),
            );
        }
    }

    Some(GeoParams {
        census: census?,
        m: m?,
        rho: rho?,
        value: value?,
    })
}

fn check_placements(c: &mut Checker, v: &Value, path: &str) -> Option<CensusSpec> {
    let Some(arr) = v.as_array() else {
        c.fail(path, "expected an array of disk-id lists");
        return None;
    };
    let mut ok = true;
    let mut out = Vec::with_capacity(arr.len());
    for (i, user) in arr.iter().enumerate() {
        let ids = user.as_array().and_then(|a| {
            a.iter()
                .map(|d| d.as_u64().filter(|&d| d >= 1).map(|d| d as usize))
                .collect::<Option<Vec<_>>>()
        });
        match ids {
            Some(ids) => out.push(ids),
            None => {
                c.fail(format!("{path}[{i}]"), "expected a list of disk ids >= 1");
                ok = false;
            }
        }
    }
    ok.then_some(CensusSpec::Placements(out))
}

fn check_table(c: &mut Checker, v: &Value, path: &str) -> Option<CensusSpec> {
    let Some(obj) = v.as_object() else {
        c.fail(path, "expected an object mapping \"1,2\"-style keys to counts");
        return None;
    };
    let mut ok = true;
    let mut table = BTreeMap::new();
    for (key, count) in obj {
        let entry = format!("{path}.\"{key}\"");
        let Some(ids) = parse_region_key(key) else {
            c.fail(&entry, "region keys are comma-joined disk ids >= 1");
            ok = false;
            continue;
        };
        let Some(d) = c.integer(count, &entry) else {
            ok = false;
            continue;
        };
        if table.insert(ids.clone(), d).is_some() {
            c.fail(&entry, format!("region {} listed more than once", join_ids(&ids)));
            ok = false;
        }
    }
    ok.then_some(CensusSpec::Table(table))
}
