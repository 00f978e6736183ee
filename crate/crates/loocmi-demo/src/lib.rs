//! Browser bindings: three interactive entry points over the measure
//! engine. Build with `wasm-pack build --target web crates/loocmi-demo`;
//! the static page in `www/` loads the generated module.

use loocmi::config::parse_config_named;
use loocmi::num::parse_rat;
use wasm_bindgen::prelude::*;

fn err_to_js(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Run one experiment config (TOML text) and return the full run report as
/// JSON: measures, chain, and every verification check.
#[wasm_bindgen]
pub fn run_experiment(config_toml: &str) -> Result<String, JsValue> {
    let config = parse_config_named(config_toml, "playground").map_err(err_to_js)?;
    let report = loocmi::experiment::run(&config).map_err(err_to_js)?;
    Ok(report.to_json())
}

/// Build and orient the one-inclusion graph of the config's class on the
/// given comma-separated point coordinates; returns vertices, oriented
/// edges, the out-degree histogram, exact max subgraph density, and the
/// true vertex's leave-one-out error.
#[wasm_bindgen]
pub fn oig_graph(config_toml: &str, points_csv: &str) -> Result<String, JsValue> {
    let config = parse_config_named(config_toml, "playground").map_err(err_to_js)?;
    let coords: Vec<_> = points_csv
        .split(',')
        .map(|p| parse_rat(p.trim()))
        .collect::<Result<_, _>>()
        .map_err(err_to_js)?;
    let doc = loocmi::experiment::oig_dump(&config, &coords, None).map_err(err_to_js)?;
    serde_json::to_string(&doc).map_err(err_to_js)
}

/// Expand the config's sweep grid and return the plot-ready CSV.
#[wasm_bindgen]
pub fn sweep_csv(config_toml: &str) -> Result<String, JsValue> {
    let config = parse_config_named(config_toml, "playground").map_err(err_to_js)?;
    let (csv, _) = loocmi::experiment::sweep(&config).map_err(err_to_js)?;
    Ok(csv)
}

/// Names and texts of the bundled corpus configs, for preset pickers.
#[wasm_bindgen]
pub fn bundled_configs() -> String {
    let entries: Vec<serde_json::Value> = loocmi::corpus::bundled()
        .into_iter()
        .map(|e| serde_json::json!({ "name": e.name, "text": e.text }))
        .collect();
    serde_json::to_string(&entries).expect("corpus serializes")
}

#[cfg(test)]
mod tests {
    #[test]
    fn bindings_run_on_native_target() {
        let entry = loocmi::corpus::by_name("maxpos-m3-n2").unwrap();
        let report = super::run_experiment(entry.text).unwrap();
        assert!(report.contains("loo_ecmi"));
        let graph = super::oig_graph(entry.text, "1,2,3").unwrap();
        assert!(graph.contains("out_degree_histogram"));
        let presets = super::bundled_configs();
        assert!(presets.contains("maxpos-m3-n2"));
        let sweep_entry = loocmi::corpus::by_name("sweep-oig-m5").unwrap();
        let csv = super::sweep_csv(sweep_entry.text).unwrap();
        assert!(csv.lines().count() >= 6);
    }
}
