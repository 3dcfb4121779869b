//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function returns a JSON string; the `*_json` functions hold
//! the logic and are tested natively.

use cstree::asymptotics::{constant_c, expected_age_asym, limiting_age_probability, ConstantSpec};
use cstree::stats::{age_distribution as exact_age_distribution, to_f64};
use cstree::{PlaneTree, Sampler, SamplerConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest size offered by the demo; the exact formulas stay fast well beyond it.
pub const MAX_SIZE: u64 = 2000;
/// Largest tree the demo samples and reduces step by step.
pub const MAX_SAMPLE: usize = 400;

pub fn age_distribution_json(n: u64) -> Result<Value, String> {
    if !(2..=MAX_SIZE).contains(&n) {
        return Err(format!("size must be between 2 and {MAX_SIZE}"));
    }
    let table = exact_age_distribution(n).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = table
        .iter()
        .map(|(age, p)| {
            json!({
                "age": age,
                "exact": p.to_string(),
                "probability": to_f64(p),
                "limit": limiting_age_probability(age),
            })
        })
        .collect();
    Ok(json!({
        "size": n,
        "mean": table.mean().to_string(),
        "mean_approx": to_f64(&table.mean()),
        "mean_asymptotic": expected_age_asym(n).map_err(|e| e.to_string())?.value,
        "variance_approx": to_f64(&table.variance()),
        "rows": rows,
    }))
}

/// A uniformly random tree and its ancestors down to the single node.
pub fn grow_and_reduce_json(size: usize, seed: u64) -> Result<Value, String> {
    if !(1..=MAX_SAMPLE).contains(&size) {
        return Err(format!("size must be between 1 and {MAX_SAMPLE}"));
    }
    let mut sampler = Sampler::new(SamplerConfig::new(size, seed)).map_err(|e| e.to_string())?;
    let tree = sampler.sample().map_err(|e| e.to_string())?;
    let mut chain: Vec<PlaneTree> = vec![tree];
    while let Some(last) = chain.last().filter(|t| !t.is_leaf()) {
        let next = last.reduce().map_err(|e| e.to_string())?;
        chain.push(next);
    }
    let steps: Vec<Value> = chain
        .iter()
        .map(|t| json!({ "tree": t.as_str(), "size": t.size(), "branches": t.num_children() }))
        .collect();
    Ok(json!({ "seed": seed, "age": chain.len() - 1, "chain": steps }))
}

pub fn constants_json(precision: u32) -> Result<Value, String> {
    let mut out = serde_json::Map::new();
    for i in 0..4 {
        let spec = ConstantSpec::new(i, precision).map_err(|e| e.to_string())?;
        out.insert(format!("c{i}"), Value::String(constant_c(spec)));
    }
    Ok(Value::Object(out))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result
        .map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn age_distribution(n: u32) -> Result<String, JsValue> {
    to_js(age_distribution_json(n as u64))
}

#[wasm_bindgen]
pub fn grow_and_reduce(size: u32, seed: u32) -> Result<String, JsValue> {
    to_js(grow_and_reduce_json(size as usize, seed as u64))
}

#[wasm_bindgen]
pub fn constants(precision: u32) -> Result<String, JsValue> {
    to_js(constants_json(precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_rows() {
        let v = age_distribution_json(5).unwrap();
        assert_eq!(v["mean"], "9/5");
        assert_eq!(v["rows"][0]["exact"], "1/5");
        assert_eq!(v["rows"][1]["age"], 2);
        assert!(age_distribution_json(1).is_err());
        assert!(age_distribution_json(MAX_SIZE + 1).is_err());
    }

    #[test]
    fn reduction_chain_ends_at_single_node() {
        let v = grow_and_reduce_json(60, 3).unwrap();
        let chain = v["chain"].as_array().unwrap();
        assert_eq!(chain[0]["size"], 60);
        assert_eq!(chain.last().unwrap()["tree"], "()");
        assert_eq!(v["age"].as_u64().unwrap() as usize, chain.len() - 1);
        let sizes: Vec<u64> = chain.iter().map(|s| s["size"].as_u64().unwrap()).collect();
        assert!(sizes.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(grow_and_reduce_json(60, 3).unwrap(), v);
        assert!(grow_and_reduce_json(0, 1).is_err());
    }

    #[test]
    fn constant_strings() {
        let v = constants_json(12).unwrap();
        assert_eq!(v["c0"], "2.71825364287");
        assert!(constants_json(61).is_err());
    }
}
