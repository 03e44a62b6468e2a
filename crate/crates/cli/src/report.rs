//! JSON encodings. Objects are `serde_json::Map`, which keeps keys sorted,
//! so reports are byte-identical across runs.

use phl_core::semantics::{Homomorphism, PartialStructure};
use serde_json::{json, Map, Value};

pub fn model(m: &PartialStructure) -> Value {
    let sig = m.signature();
    let mut carriers = Map::new();
    for s in 0..sig.sort_count() {
        carriers.insert(sig.sort_name(s).to_owned(), json!(m.carrier(s)));
    }
    let mut functions = Map::new();
    for f in 0..sig.function_count() {
        let args = m.function_arg_sorts(f);
        let rs = m.function_result_sort(f);
        let rows: Vec<Value> = m
            .function_table(f)
            .iter()
            .map(|(xs, &v)| {
                let names: Vec<&str> = xs.iter().zip(&args).map(|(&x, &s)| m.element_name(s, x)).collect();
                json!({ "args": names, "value": m.element_name(rs, v) })
            })
            .collect();
        functions.insert(sig.function_at(f).name.clone(), Value::Array(rows));
    }
    let mut relations = Map::new();
    for r in 0..sig.relation_count() {
        let args = m.relation_arg_sorts(r);
        let rows: Vec<Value> = m
            .relation_table(r)
            .iter()
            .map(|xs| json!(xs.iter().zip(&args).map(|(&x, &s)| m.element_name(s, x)).collect::<Vec<_>>()))
            .collect();
        relations.insert(sig.relation_at(r).name.clone(), Value::Array(rows));
    }
    json!({ "name": m.name, "carriers": carriers, "functions": functions, "relations": relations })
}

pub fn hom(src: &PartialStructure, tgt: &PartialStructure, h: &Homomorphism) -> Value {
    let sig = src.signature();
    let mut maps = Map::new();
    for s in 0..sig.sort_count() {
        let pairs: Vec<Value> = h.maps[s]
            .iter()
            .enumerate()
            .map(|(a, &b)| json!([src.element_name(s, a), tgt.element_name(s, b)]))
            .collect();
        maps.insert(sig.sort_name(s).to_owned(), Value::Array(pairs));
    }
    json!({ "source": src.name, "target": tgt.name, "maps": maps })
}

pub fn emit(value: &Value) {
    write_stdout(&format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")));
}

/// Writes to standard output, ignoring a closed pipe.
pub fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}
