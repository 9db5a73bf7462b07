//! WebAssembly bindings for the static demo page in `www/`.

use modint::cli;
use modint::modelfile::{self, ModelFile};
use modint::modint::diagram_export;
use wasm_bindgen::prelude::*;

const BUNDLED: &[(&str, &str)] = &[
    ("extensional.model", include_str!("../../../corpus/extensional.model")),
    ("modal.model", include_str!("../../../corpus/modal.model")),
    ("modal_tense.model", include_str!("../../../corpus/modal_tense.model")),
    ("location.model", include_str!("../../../corpus/location.model")),
    ("relations/leq3.json", include_str!("../../../corpus/relations/leq3.json")),
    ("relations/parity.json", include_str!("../../../corpus/relations/parity.json")),
    ("relations/author.json", include_str!("../../../corpus/relations/author.json")),
];

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn load(json: &str) -> Result<ModelFile, String> {
    modelfile::parse_model(json).map_err(|e| e.to_string())
}

/// Evaluates a fragment sentence; an empty `index` means none was given.
pub fn sentence_text(model_json: &str, text: &str, index: &str) -> Result<String, String> {
    let file = load(model_json)?;
    let index = Some(index.trim()).filter(|s| !s.is_empty());
    cli::sentence_report(&file, text, index)
}

/// Checks that every order of trivializing `frames` gives the same model,
/// followed by the trivialization diagram over those frames.
pub fn square_text(model_json: &str, frames: &str) -> Result<String, String> {
    let file = load(model_json)?;
    let frames: Vec<String> = frames.split(',').map(|f| f.trim().to_string()).filter(|f| !f.is_empty()).collect();
    if frames.is_empty() {
        return Err("name at least one frame".into());
    }
    let (_, report) = cli::square_report(&file, &frames)?;
    let diagram = diagram_export(&file.model, &frames).map_err(|e| e.to_string())?;
    Ok(format!("{report}\n{diagram}"))
}

pub fn relation_text(json: &str, prop: &str) -> Result<String, String> {
    cli::relation_check_report(json, prop)
}

#[wasm_bindgen]
pub fn bundled(name: &str) -> Option<String> {
    bundled_text(name).map(str::to_string)
}

#[wasm_bindgen]
pub fn sentence(model_json: &str, text: &str, index: &str) -> Result<String, JsValue> {
    sentence_text(model_json, text, index).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn square(model_json: &str, frames: &str) -> Result<String, JsValue> {
    square_text(model_json, frames).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn relation(json: &str, prop: &str) -> Result<String, JsValue> {
    relation_text(json, prop).map_err(|e| JsValue::from_str(&e))
}
