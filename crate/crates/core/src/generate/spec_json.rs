use serde_json::{Map, Value};

use super::{generate, Family, GenError, GeneratorSpec, ProfileSpec};
use crate::graph::{OpinionGraph, OpinionProfile};

/// Parses a JSON spec document and generates its graph and profile.
pub fn load_spec(text: &str) -> Result<(OpinionGraph, OpinionProfile), GenError> {
    generate(&parse_spec(text)?)
}

pub fn parse_spec(text: &str) -> Result<GeneratorSpec, GenError> {
    let value: Value = serde_json::from_str(text).map_err(|e| GenError::Parse(e.to_string()))?;
    from_value(&value)
}

fn schema(msg: impl Into<String>) -> GenError {
    GenError::Schema(msg.into())
}

struct Fields<'a> {
    context: &'static str,
    map: &'a Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn new(context: &'static str, value: &'a Value) -> Result<Self, GenError> {
        let map = value.as_object().ok_or_else(|| schema(format!("{context} must be an object")))?;
        Ok(Fields { context, map })
    }

    fn only(&self, allowed: &[&str]) -> Result<(), GenError> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(schema(format!("unknown key {k:?} in {}", self.context))),
            None => Ok(()),
        }
    }

    fn opt_uint(&self, key: &str) -> Result<Option<u64>, GenError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| schema(format!("{key:?} in {} must be a non-negative integer", self.context))),
        }
    }

    fn uint(&self, key: &str) -> Result<u64, GenError> {
        self.opt_uint(key)?.ok_or_else(|| schema(format!("missing {key:?} in {}", self.context)))
    }

    fn usize(&self, key: &str) -> Result<usize, GenError> {
        Ok(self.uint(key)? as usize)
    }
}

fn from_value(value: &Value) -> Result<GeneratorSpec, GenError> {
    let top = Fields::new("spec", value)?;
    let family_name = top
        .map
        .get("family")
        .ok_or_else(|| schema("missing \"family\""))?
        .as_str()
        .ok_or_else(|| schema("\"family\" must be a string"))?;

    let family = match family_name {
        "path" => {
            top.only(&["family", "profile", "length"])?;
            Family::Path { length: top.usize("length")? }
        }
        "grid" => {
            top.only(&["family", "profile", "rows", "cols", "side", "dims", "sides"])?;
            grid_sides(&top)?
        }
        "tree" => {
            top.only(&["family", "profile", "height", "branching"])?;
            Family::Tree { branching: top.opt_uint("branching")?.unwrap_or(2) as usize, height: top.usize("height")? }
        }
        "star" => {
            top.only(&["family", "profile", "leaves"])?;
            Family::Star { leaves: top.usize("leaves")? }
        }
        "hypercube" => {
            top.only(&["family", "profile", "dim"])?;
            Family::Hypercube { dim: top.usize("dim")? }
        }
        "cycle" => {
            top.only(&["family", "profile", "length"])?;
            Family::Cycle { length: top.usize("length")? }
        }
        "complete" => {
            top.only(&["family", "profile", "nodes"])?;
            Family::Complete { nodes: top.usize("nodes")? }
        }
        "explicit" => {
            top.only(&["family", "profile", "nodes", "edges"])?;
            let edges = top
                .map
                .get("edges")
                .and_then(Value::as_array)
                .ok_or_else(|| schema("explicit family needs an \"edges\" array"))?
                .iter()
                .map(|e| match e.as_array().map(Vec::as_slice) {
                    Some([u, v]) => match (u.as_u64(), v.as_u64()) {
                        (Some(u), Some(v)) => Ok((u as usize, v as usize)),
                        _ => Err(schema("edge endpoints must be non-negative integers")),
                    },
                    _ => Err(schema("each edge must be a pair [u, v]")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Family::Explicit { nodes: top.usize("nodes")?, edges }
        }
        other => return Err(schema(format!("unknown family {other:?}"))),
    };

    let profile_value = top.map.get("profile").ok_or_else(|| schema("missing \"profile\""))?;
    let profile = parse_profile(profile_value)?;
    Ok(GeneratorSpec { family, profile })
}

fn grid_sides(top: &Fields<'_>) -> Result<Family, GenError> {
    let has = |k: &str| top.map.contains_key(k);
    let sides = if has("sides") {
        if has("rows") || has("cols") || has("side") || has("dims") {
            return Err(schema("\"sides\" excludes rows/cols/side/dims"));
        }
        top.map["sides"]
            .as_array()
            .ok_or_else(|| schema("\"sides\" must be an array"))?
            .iter()
            .map(|v| v.as_u64().map(|s| s as usize).ok_or_else(|| schema("grid sides must be integers")))
            .collect::<Result<Vec<_>, _>>()?
    } else if has("rows") || has("cols") {
        if has("side") || has("dims") {
            return Err(schema("rows/cols exclude side/dims"));
        }
        vec![top.usize("rows")?, top.usize("cols")?]
    } else {
        let side = top.usize("side")?;
        let dims = top.opt_uint("dims")?.unwrap_or(2) as usize;
        vec![side; dims]
    };
    Ok(Family::Grid { sides })
}

fn parse_profile(value: &Value) -> Result<ProfileSpec, GenError> {
    let fields = Fields::new("profile", value)?;
    if fields.map.len() != 1 {
        return Err(schema("profile must have exactly one key"));
    }
    let (key, inner) = fields.map.iter().next().expect("one key");
    match key.as_str() {
        "uniform_k" => {
            inner.as_u64().map(ProfileSpec::UniformK).ok_or_else(|| schema("uniform_k must be a non-negative integer"))
        }
        "counts" => {
            let map = inner.as_object().ok_or_else(|| schema("counts must be an object"))?;
            let mut entries = map
                .iter()
                .map(|(node, count)| {
                    let node =
                        node.parse::<usize>().map_err(|_| schema(format!("counts key {node:?} is not a node id")))?;
                    let count = count.as_u64().ok_or_else(|| schema("counts values must be non-negative integers"))?;
                    Ok((node, count))
                })
                .collect::<Result<Vec<_>, GenError>>()?;
            entries.sort_unstable();
            Ok(ProfileSpec::Counts(entries))
        }
        "dyadic_counterexample" => {
            let f = Fields::new("dyadic_counterexample", inner)?;
            f.only(&["k"])?;
            Ok(ProfileSpec::DyadicCounterexample { k: f.usize("k")? })
        }
        "grid_nine" => {
            let f = Fields::new("grid_nine", inner)?;
            f.only(&["k"])?;
            Ok(ProfileSpec::GridNine { k: f.usize("k")? })
        }
        "star_root" => {
            let f = Fields::new("star_root", inner)?;
            f.only(&["leaves", "j", "n"])?;
            Ok(ProfileSpec::StarRoot { leaves: f.usize("leaves")?, j: f.uint("j")?, n: f.uint("n")? })
        }
        other => Err(schema(format!("unknown profile kind {other:?}"))),
    }
}

pub(super) fn to_value(spec: &GeneratorSpec) -> Value {
    let mut map = Map::new();
    map.insert("family".into(), spec.family.name().into());
    match &spec.family {
        Family::Path { length } | Family::Cycle { length } => {
            map.insert("length".into(), (*length).into());
        }
        Family::Grid { sides } => {
            if let [rows, cols] = sides.as_slice() {
                map.insert("rows".into(), (*rows).into());
                map.insert("cols".into(), (*cols).into());
            } else {
                map.insert("sides".into(), sides.clone().into());
            }
        }
        Family::Tree { branching, height } => {
            map.insert("branching".into(), (*branching).into());
            map.insert("height".into(), (*height).into());
        }
        Family::Star { leaves } => {
            map.insert("leaves".into(), (*leaves).into());
        }
        Family::Hypercube { dim } => {
            map.insert("dim".into(), (*dim).into());
        }
        Family::Complete { nodes } => {
            map.insert("nodes".into(), (*nodes).into());
        }
        Family::Explicit { nodes, edges } => {
            map.insert("nodes".into(), (*nodes).into());
            let edges: Vec<Value> = edges.iter().map(|&(u, v)| Value::from(vec![u, v])).collect();
            map.insert("edges".into(), edges.into());
        }
    }
    let profile = match &spec.profile {
        ProfileSpec::UniformK(k) => serde_json::json!({ "uniform_k": k }),
        ProfileSpec::Counts(entries) => {
            let counts: Map<String, Value> = entries.iter().map(|(v, c)| (v.to_string(), Value::from(*c))).collect();
            serde_json::json!({ "counts": counts })
        }
        ProfileSpec::DyadicCounterexample { k } => serde_json::json!({ "dyadic_counterexample": { "k": k } }),
        ProfileSpec::GridNine { k } => serde_json::json!({ "grid_nine": { "k": k } }),
        ProfileSpec::StarRoot { leaves, j, n } => {
            serde_json::json!({ "star_root": { "leaves": leaves, "j": j, "n": n } })
        }
    };
    map.insert("profile".into(), profile);
    Value::Object(map)
}
