//! JSON documents: model files, standalone relations and frame maps.
//!
//! Reading collects every schema problem it can find before giving up.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::fragment::{LexEntry, Lexicon};
use crate::kripke::{Frame, FrameMap};
use crate::relalg::{FinSet, Relation};
use crate::semmodel::{Index, Model, SemType, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema errors:\n  {}", .0.join("\n  "))]
    Schema(Vec<String>),
}

/// A model together with its lexicon and named example terms.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub model: Model,
    pub lexicon: Lexicon,
    pub terms: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum Document {
    Model(Box<ModelFile>),
    Relation { name: String, relation: Relation },
    Map(Box<FrameMap>),
}

pub fn read_text(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_model(path: &Path) -> Result<ModelFile, LoadError> {
    parse_model(&read_text(path)?)
}

pub fn load_document(path: &Path) -> Result<Document, LoadError> {
    parse_document(&read_text(path)?)
}

fn parse_json(text: &str) -> Result<Json, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Json(e.to_string()))
}

/// Dispatches on the top-level keys: `entities` for a model, `map` for a
/// frame map, otherwise `pairs` for a relation.
pub fn parse_document(text: &str) -> Result<Document, LoadError> {
    let root = parse_json(text)?;
    let mut errs = Errors::default();
    let doc = match root.as_object() {
        Some(obj) if obj.contains_key("entities") => {
            read_model(&root, &mut errs).map(|m| Document::Model(Box::new(m)))
        }
        Some(obj) if obj.contains_key("map") => read_map(&root, &mut errs).map(|m| Document::Map(Box::new(m))),
        Some(obj) if obj.contains_key("pairs") => {
            read_relation(&root, &mut errs).map(|(name, relation)| Document::Relation { name, relation })
        }
        _ => {
            errs.push("$", "expected a model, relation or frame-map object");
            None
        }
    };
    errs.finish(doc)
}

pub fn parse_model(text: &str) -> Result<ModelFile, LoadError> {
    let root = parse_json(text)?;
    let mut errs = Errors::default();
    let m = read_model(&root, &mut errs);
    errs.finish(m)
}

#[derive(Default)]
struct Errors(Vec<String>);

impl Errors {
    fn push(&mut self, path: &str, msg: impl AsRef<str>) {
        self.0.push(format!("{path}: {}", msg.as_ref()));
    }

    fn finish<T>(self, value: Option<T>) -> Result<T, LoadError> {
        match value {
            Some(v) if self.0.is_empty() => Ok(v),
            _ if self.0.is_empty() => Err(LoadError::Schema(vec!["$: unreadable document".into()])),
            _ => Err(LoadError::Schema(self.0)),
        }
    }
}

fn string_list(v: Option<&Json>, path: &str, errs: &mut Errors) -> Option<Vec<String>> {
    let Some(arr) = v.and_then(Json::as_array) else {
        errs.push(path, "expected an array of strings");
        return None;
    };
    let mut out = Vec::new();
    let mut ok = true;
    for (i, item) in arr.iter().enumerate() {
        match item.as_str() {
            Some(s) => out.push(s.to_string()),
            None => {
                errs.push(&format!("{path}[{i}]"), "expected a string");
                ok = false;
            }
        }
    }
    ok.then_some(out)
}

fn pair_list(v: Option<&Json>, path: &str, errs: &mut Errors) -> Option<Vec<(String, String)>> {
    let Some(arr) = v.and_then(Json::as_array) else {
        errs.push(path, "expected an array of pairs");
        return None;
    };
    let mut out = Vec::new();
    let mut ok = true;
    for (i, item) in arr.iter().enumerate() {
        match item.as_array().map(Vec::as_slice) {
            Some([Json::String(a), Json::String(b)]) => out.push((a.clone(), b.clone())),
            _ => {
                errs.push(&format!("{path}[{i}]"), "expected a pair of strings");
                ok = false;
            }
        }
    }
    ok.then_some(out)
}

fn check_keys(obj: &Map<String, Json>, allowed: &[&str], path: &str, errs: &mut Errors) {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            errs.push(path, format!("unknown key `{k}`"));
        }
    }
}

fn read_frame(v: &Json, path: &str, errs: &mut Errors) -> Option<(Frame, Option<String>)> {
    let Some(obj) = v.as_object() else {
        errs.push(path, "expected a frame object");
        return None;
    };
    check_keys(obj, &["label", "elements", "pairs", "designated"], path, errs);
    let label = obj.get("label").and_then(Json::as_str);
    if label.is_none() {
        errs.push(&format!("{path}.label"), "expected a string");
    }
    let elements = string_list(obj.get("elements"), &format!("{path}.elements"), errs);
    let pairs = pair_list(obj.get("pairs"), &format!("{path}.pairs"), errs);
    let designated = match obj.get("designated") {
        None => None,
        Some(Json::String(d)) => Some(d.clone()),
        Some(_) => {
            errs.push(&format!("{path}.designated"), "expected a string");
            None
        }
    };
    let (label, elements, pairs) = (label?, elements?, pairs?);
    let frame = Frame::from_parts(
        label,
        elements.iter().map(String::as_str),
        pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    );
    match frame {
        Ok(f) => {
            if let Some(d) = &designated {
                if !f.domain().contains(d) {
                    errs.push(&format!("{path}.designated"), format!("`{d}` is not an element"));
                }
            }
            Some((f, designated))
        }
        Err(e) => {
            errs.push(path, e.to_string());
            None
        }
    }
}

fn read_model(root: &Json, errs: &mut Errors) -> Option<ModelFile> {
    let Some(obj) = root.as_object() else {
        errs.push("$", "expected an object");
        return None;
    };
    check_keys(obj, &["entities", "frames", "constants", "lexicon", "terms"], "$", errs);
    let entities = string_list(obj.get("entities"), "$.entities", errs);

    let mut frames = Vec::new();
    let mut designations = Vec::new();
    match obj.get("frames") {
        None => {}
        Some(Json::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                if let Some((f, d)) = read_frame(item, &format!("$.frames[{i}]"), errs) {
                    if let Some(d) = d {
                        designations.push((f.label().to_string(), d));
                    }
                    frames.push(f);
                }
            }
        }
        Some(_) => errs.push("$.frames", "expected an array"),
    }

    let lexicon = match obj.get("lexicon") {
        None => Lexicon::default(),
        Some(v) => read_lexicon(v, errs).unwrap_or_default(),
    };
    let terms = match obj.get("terms") {
        None => BTreeMap::new(),
        Some(Json::Object(t)) => t
            .iter()
            .filter_map(|(k, v)| match v.as_str() {
                Some(s) => Some((k.clone(), s.to_string())),
                None => {
                    errs.push(&format!("$.terms.{k}"), "expected an s-expression string");
                    None
                }
            })
            .collect(),
        Some(_) => {
            errs.push("$.terms", "expected an object");
            BTreeMap::new()
        }
    };

    let entities = entities?;
    let mut model = match Model::new(entities, frames) {
        Ok(m) => m,
        Err(e) => {
            errs.push("$", e.to_string());
            return None;
        }
    };
    for (label, d) in designations {
        model.set_designated(label, d);
    }
    match obj.get("constants") {
        None => {}
        Some(Json::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                read_constant(item, &format!("$.constants[{i}]"), &mut model, errs);
            }
        }
        Some(_) => errs.push("$.constants", "expected an array"),
    }
    Some(ModelFile { model, lexicon, terms })
}

fn read_lexicon(v: &Json, errs: &mut Errors) -> Option<Lexicon> {
    let Some(obj) = v.as_object() else {
        errs.push("$.lexicon", "expected an object");
        return None;
    };
    let mut entries = BTreeMap::new();
    for (word, entry) in obj {
        let path = format!("$.lexicon.{word}");
        let Some(e) = entry.as_object() else {
            errs.push(&path, "expected an entry object");
            continue;
        };
        check_keys(e, &["cat", "pred", "frame"], &path, errs);
        let pred = e.get("pred").and_then(Json::as_str).unwrap_or(word).to_string();
        let parsed = match e.get("cat").and_then(Json::as_str) {
            Some("D") => LexEntry::Det,
            Some("N") => LexEntry::Noun { pred },
            Some("V") => LexEntry::Verb { pred },
            Some("Mod") => match e.get("frame").and_then(Json::as_str) {
                Some(f) => LexEntry::Modal { frame: f.to_string() },
                None => {
                    errs.push(&path, "a Mod entry needs a `frame`");
                    continue;
                }
            },
            _ => {
                errs.push(&format!("{path}.cat"), "expected one of D, N, V, Mod");
                continue;
            }
        };
        entries.insert(word.clone(), parsed);
    }
    Some(Lexicon::new(entries))
}

fn read_constant(v: &Json, path: &str, model: &mut Model, errs: &mut Errors) {
    let Some(obj) = v.as_object() else {
        errs.push(path, "expected a constant object");
        return;
    };
    check_keys(obj, &["name", "type", "table", "value"], path, errs);
    let Some(name) = obj.get("name").and_then(Json::as_str) else {
        errs.push(&format!("{path}.name"), "expected a string");
        return;
    };
    let path = format!("{path}({name})");
    let ty = match obj.get("type").and_then(Json::as_str).map(str::parse::<SemType>) {
        Some(Ok(ty)) => ty,
        Some(Err(e)) => {
            errs.push(&format!("{path}.type"), e.to_string());
            return;
        }
        None => {
            errs.push(&format!("{path}.type"), "expected a type string");
            return;
        }
    };
    match (obj.get("table"), obj.get("value")) {
        (Some(_), Some(_)) => errs.push(&path, "give either `table` or `value`, not both"),
        (None, None) => errs.push(&path, "missing `table` or `value`"),
        (None, Some(v)) => {
            if let Some(val) = decode_value(v, &ty, &format!("{path}.value"), errs) {
                model.add_rigid_constant(name, ty, val);
            }
        }
        (Some(Json::Array(rows)), None) => {
            let mut table = BTreeMap::new();
            for (i, row) in rows.iter().enumerate() {
                let rp = format!("{path}.table[{i}]");
                let Some(r) = row.as_object() else {
                    errs.push(&rp, "expected {index, value}");
                    continue;
                };
                check_keys(r, &["index", "value"], &rp, errs);
                let index = string_list(r.get("index"), &format!("{rp}.index"), errs);
                let value = match r.get("value") {
                    Some(v) => decode_value(v, &ty, &format!("{rp}.value"), errs),
                    None => {
                        errs.push(&rp, "missing `value`");
                        None
                    }
                };
                let (Some(index), Some(value)) = (index, value) else { continue };
                if index.len() != model.frames().len() {
                    errs.push(
                        &format!("{rp}.index"),
                        format!("expected {} components, found {}", model.frames().len(), index.len()),
                    );
                    continue;
                }
                let comps = model
                    .frames()
                    .iter()
                    .zip(index)
                    .map(|(f, e)| (f.label().to_string(), e))
                    .collect();
                let index = Index::new(comps);
                if table.insert(index.clone(), value).is_some() {
                    errs.push(&rp, format!("duplicate entry for index {index}"));
                }
            }
            model.add_constant(name, ty, table);
        }
        (Some(_), None) => errs.push(&format!("{path}.table"), "expected an array"),
    }
}

/// Reads a value by its type. Membership in the model's domains is left to validation.
fn decode_value(v: &Json, ty: &SemType, path: &str, errs: &mut Errors) -> Option<Value> {
    let fail = |errs: &mut Errors, what: &str| {
        errs.push(path, format!("expected {what} for type {ty}"));
        None
    };
    match ty {
        SemType::E => match v.as_str() {
            Some(s) => Some(Value::Entity(s.to_string())),
            None => fail(errs, "an entity id"),
        },
        SemType::T => match v {
            Json::Bool(b) => Some(Value::Truth(*b)),
            Json::Number(n) if n.as_u64() == Some(0) => Some(Value::Truth(false)),
            Json::Number(n) if n.as_u64() == Some(1) => Some(Value::Truth(true)),
            _ => fail(errs, "0 or 1"),
        },
        SemType::S(label) => match v.as_str() {
            Some(s) => Some(Value::IndexElem { frame: label.clone(), elem: s.to_string() }),
            None => fail(errs, "an element id"),
        },
        SemType::Pair(a, b) => match v.as_array().map(Vec::as_slice) {
            Some([x, y]) => {
                let x = decode_value(x, a, &format!("{path}[0]"), errs);
                let y = decode_value(y, b, &format!("{path}[1]"), errs);
                Some(Value::Tuple(vec![x?, y?]))
            }
            _ => fail(errs, "a 2-element array"),
        },
        SemType::SetOf(a) => {
            let Some(items) = v.as_array() else { return fail(errs, "an array") };
            let vals: Vec<Option<Value>> = items
                .iter()
                .enumerate()
                .map(|(i, x)| decode_value(x, a, &format!("{path}[{i}]"), errs))
                .collect();
            Some(Value::Set(vals.into_iter().collect::<Option<_>>()?))
        }
        SemType::RelOf(ts) => {
            let Some(items) = v.as_array() else { return fail(errs, "an array of tuples") };
            let mut out = Some(std::collections::BTreeSet::new());
            for (i, item) in items.iter().enumerate() {
                let ip = format!("{path}[{i}]");
                let tuple = match (item.as_array(), ts.as_slice()) {
                    (Some(parts), _) if parts.len() == ts.len() => parts
                        .iter()
                        .zip(ts)
                        .enumerate()
                        .map(|(j, (p, t))| decode_value(p, t, &format!("{ip}[{j}]"), errs))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .collect::<Option<Vec<_>>>(),
                    (None, [only]) => decode_value(item, only, &ip, errs).map(|x| vec![x]),
                    _ => {
                        errs.push(&ip, format!("expected a {}-tuple", ts.len()));
                        None
                    }
                };
                match (tuple, out.as_mut()) {
                    (Some(t), Some(set)) => {
                        set.insert(Value::Tuple(t));
                    }
                    _ => out = None,
                }
            }
            out.map(Value::Set)
        }
        SemType::Fn(a, b) => {
            let Some(items) = v.as_array() else { return fail(errs, "an array of [argument, result]") };
            let mut out = Some(BTreeMap::new());
            for (i, item) in items.iter().enumerate() {
                let ip = format!("{path}[{i}]");
                let entry = match item.as_array().map(Vec::as_slice) {
                    Some([k, x]) => {
                        let k = decode_value(k, a, &format!("{ip}[0]"), errs);
                        let x = decode_value(x, b, &format!("{ip}[1]"), errs);
                        k.zip(x)
                    }
                    _ => {
                        errs.push(&ip, "expected [argument, result]");
                        None
                    }
                };
                match (entry, out.as_mut()) {
                    (Some((k, x)), Some(map)) => {
                        if map.insert(k.clone(), x).is_some() {
                            errs.push(&ip, format!("argument {k} listed twice"));
                        }
                    }
                    _ => out = None,
                }
            }
            out.map(Value::Func)
        }
    }
}

fn read_relation(root: &Json, errs: &mut Errors) -> Option<(String, Relation)> {
    let obj = root.as_object()?;
    check_keys(obj, &["name", "source", "target", "pairs"], "$", errs);
    let name = obj.get("name").and_then(Json::as_str).unwrap_or("R").to_string();
    let source = string_list(obj.get("source"), "$.source", errs);
    let target = match obj.get("target") {
        None => None,
        Some(t) => Some(string_list(Some(t), "$.target", errs)?),
    };
    let pairs = pair_list(obj.get("pairs"), "$.pairs", errs)?;
    let source = source?;
    let result = (|| {
        let src = Arc::new(FinSet::new("X", source)?);
        let tgt = match target {
            None => src.clone(),
            Some(t) => Arc::new(FinSet::new("Y", t)?),
        };
        Relation::new(src, tgt, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))
    })();
    match result {
        Ok(r) => Some((name, r)),
        Err(e) => {
            errs.push("$", e.to_string());
            None
        }
    }
}

fn read_map(root: &Json, errs: &mut Errors) -> Option<FrameMap> {
    let obj = root.as_object()?;
    check_keys(obj, &["from", "to", "map"], "$", errs);
    let from = obj.get("from").and_then(|v| read_frame(v, "$.from", errs));
    let to = obj.get("to").and_then(|v| read_frame(v, "$.to", errs));
    let pairs = pair_list(obj.get("map"), "$.map", errs);
    if obj.get("from").is_none() || obj.get("to").is_none() {
        errs.push("$", "a frame map needs `from` and `to`");
    }
    let ((from, _), (to, _), pairs) = (from?, to?, pairs?);
    match FrameMap::from_pairs(from, to, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))) {
        Ok(m) => Some(m),
        Err(e) => {
            errs.push("$.map", e.to_string());
            None
        }
    }
}

/// Writes a value by its type with set members in canonical order.
pub fn encode_value(m: &Model, v: &Value) -> Json {
    fn sorted<'a>(m: &Model, mut items: Vec<&'a Value>) -> Vec<&'a Value> {
        items.sort_by_key(|x| m.sort_key(x));
        items
    }
    match v {
        Value::Entity(e) => json!(e),
        Value::Truth(b) => json!(u8::from(*b)),
        Value::IndexElem { elem, .. } => json!(elem),
        Value::Tuple(vs) => Json::Array(vs.iter().map(|x| encode_value(m, x)).collect()),
        Value::Set(vs) => Json::Array(sorted(m, vs.iter().collect()).into_iter().map(|x| encode_value(m, x)).collect()),
        Value::Func(map) => {
            let keys = sorted(m, map.keys().collect());
            Json::Array(keys.into_iter().map(|k| json!([encode_value(m, k), encode_value(m, &map[k])])).collect())
        }
    }
}

pub fn to_json(file: &ModelFile) -> Json {
    let m = &file.model;
    let frames: Vec<Json> = m
        .frames()
        .iter()
        .map(|f| {
            let mut obj = Map::new();
            obj.insert("label".into(), json!(f.label()));
            obj.insert("elements".into(), json!(f.domain().elements()));
            let pairs: Vec<Json> = f.rel().pairs().map(|(a, b)| json!([a, b])).collect();
            obj.insert("pairs".into(), Json::Array(pairs));
            if let Some(d) = m.designations().get(f.label()) {
                obj.insert("designated".into(), json!(d));
            }
            Json::Object(obj)
        })
        .collect();
    let space = m.index_space();
    let constants: Vec<Json> = m
        .constants()
        .iter()
        .map(|c| {
            let rows: Vec<Json> = space
                .iter()
                .filter_map(|s| {
                    let v = c.table.get(s)?;
                    let index: Vec<&str> = s.elements().collect();
                    Some(json!({ "index": index, "value": encode_value(m, v) }))
                })
                .collect();
            json!({ "name": c.name, "type": c.ty.to_string(), "table": rows })
        })
        .collect();
    let lexicon: Map<String, Json> = file
        .lexicon
        .entries()
        .iter()
        .map(|(w, e)| {
            let entry = match e {
                LexEntry::Det => json!({ "cat": "D" }),
                LexEntry::Noun { pred } => json!({ "cat": "N", "pred": pred }),
                LexEntry::Verb { pred } => json!({ "cat": "V", "pred": pred }),
                LexEntry::Modal { frame } => json!({ "cat": "Mod", "frame": frame }),
            };
            (w.clone(), entry)
        })
        .collect();
    json!({
        "entities": m.entities().elements(),
        "frames": frames,
        "constants": constants,
        "lexicon": lexicon,
        "terms": file.terms,
    })
}

pub fn to_string(file: &ModelFile) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(file)).expect("JSON values serialize");
    s.push('\n');
    s
}
