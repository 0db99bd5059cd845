//! Browser bindings for the demo page in `www/`. Each exported function
//! takes WAFA documents in the JSON file format and returns text for
//! display; errors come back as strings so the page can show them.

use alterweight::format::Document;
use alterweight::pa::{Budget, EquivalenceVerdict};
use alterweight::wafa::words_up_to;
use alterweight::{Semiring, Wafa};
use wasm_bindgen::prelude::*;

/// Longest words tabulated by [`eval_table`]; the table grows as |Σ|^len.
const MAX_TABLE_LEN: usize = 8;

fn load_wafa(text: &str) -> Result<Wafa, String> {
    match Document::parse(text).map_err(|e| e.to_string())? {
        Document::Wafa(a) => Ok(a),
        other => Err(format!("expected a wafa document, got {}", other.kind())),
    }
}

fn show_word(w: &[char]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.iter().collect()
    }
}

/// One line `word<TAB>value` per word of length at most `max_len`, shortest
/// first.
pub fn eval_table(text: &str, max_len: usize) -> Result<String, String> {
    let a = load_wafa(text)?;
    if max_len > MAX_TABLE_LEN {
        return Err(format!("word length is limited to {MAX_TABLE_LEN}"));
    }
    let mut out = String::new();
    for w in words_up_to(a.alphabet(), max_len) {
        let v = a.behavior(&w).map_err(|e| e.to_string())?;
        out.push_str(&format!("{}\t{v}\n", show_word(&w)));
    }
    Ok(out)
}

/// The fully normalized automaton, as a wafa document.
pub fn normal_form(text: &str) -> Result<String, String> {
    let a = load_wafa(text)?;
    let b = a
        .make_nice()
        .and_then(|a| a.make_pure())
        .and_then(|a| a.equalize())
        .map_err(|e| e.to_string())?;
    Document::Wafa(b).render().map_err(|e| e.to_string())
}

/// The equivalence verdict with either the certificate or a minimal
/// separating word. ℕ-weighted inputs are read over ℚ.
pub fn equivalence(left: &str, right: &str) -> Result<String, String> {
    let rat = |a: Wafa| match a.semiring() {
        Semiring::Nat => a.to_rationals().map_err(|e| e.to_string()),
        _ => Ok(a),
    };
    let l = rat(load_wafa(left)?)?;
    let r = rat(load_wafa(right)?)?;
    let verdict = l
        .equivalence(&r, &Budget::default())
        .map_err(|e| e.to_string())?;
    Ok(match verdict {
        EquivalenceVerdict::Equal { certificate } => {
            let mut out = format!("EQUAL\ncertificate ({} generators):\n", certificate.len());
            for g in certificate.generators() {
                out.push_str(&format!("  {g}\n"));
            }
            out
        }
        EquivalenceVerdict::NotEqual {
            witness,
            left,
            right,
        } => format!(
            "NOT EQUAL, witness: {}\nleft: {left}\nright: {right}\n",
            show_word(&witness)
        ),
    })
}

#[wasm_bindgen(js_name = evalTable)]
pub fn eval_table_js(text: &str, max_len: usize) -> Result<String, JsError> {
    eval_table(text, max_len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = normalForm)]
pub fn normal_form_js(text: &str) -> Result<String, JsError> {
    normal_form(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = equivalence)]
pub fn equivalence_js(left: &str, right: &str) -> Result<String, JsError> {
    equivalence(left, right).map_err(|e| JsError::new(&e))
}

/// The running example, for the page's "load example" button.
#[wasm_bindgen(js_name = exampleWafa)]
pub fn example_wafa() -> String {
    Document::Wafa(alterweight::fixtures::running())
        .render()
        .expect("fixture renders")
}
