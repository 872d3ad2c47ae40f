//! Browser bindings: cohomology profile, metric check and family sweep on pasted JSON.

use nilcohom::cohomology::CohomologyProfile;
use nilcohom::exterior::FormJson;
use nilcohom::metrics::check_metric;
use nilcohom::report::{self, Format, Report};
use nilcohom::{FamilySpec, Form, Operators, StructureEquations, GR};
use wasm_bindgen::prelude::*;

fn fmt(name: &str) -> Result<Format, String> {
    name.parse().map_err(|e: nilcohom::Error| e.to_string())
}

/// Families are read at `t = 0`.
fn structure_of(text: &str) -> Result<StructureEquations, String> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if v.get("frame").is_some() {
        FamilySpec::parse_json(text).and_then(|f| f.base()).map_err(|e| e.to_string())
    } else {
        StructureEquations::parse_json(text).map_err(|e| e.to_string())
    }
}

pub fn profile_text(structure: &str, format: &str) -> Result<String, String> {
    let s = structure_of(structure)?;
    let profile = CohomologyProfile::compute(&s).map_err(|e| e.to_string())?;
    let r = Report { profile, metrics: Default::default(), notes: None };
    Ok(report::render_report(&r, fmt(format)?))
}

pub fn metric_text(structure: &str, metric: &str, format: &str) -> Result<String, String> {
    let s = structure_of(structure)?;
    let j: FormJson = serde_json::from_str(metric).map_err(|e| e.to_string())?;
    let w = Form::try_from(&j).map_err(|e| e.to_string())?;
    let flags = check_metric(&Operators::new(&s), &w).map_err(|e| e.to_string())?;
    Ok(report::render_flat(&flags, fmt(format)?))
}

/// `ts` is a comma-separated list of exact values such as `0, 1/4, 1/2+1/2*i`.
pub fn sweep_text(family: &str, ts: &str, format: &str) -> Result<String, String> {
    let f = FamilySpec::parse_json(family).map_err(|e| e.to_string())?;
    let ts: Vec<GR> = ts
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e: nilcohom::Error| format!("`{s}`: {e}")))
        .collect::<Result<_, _>>()?;
    Ok(report::render_sweep(&report::sweep_family(&f, &ts), fmt(format)?))
}

#[wasm_bindgen]
pub fn profile(structure: &str, format: &str) -> Result<String, JsError> {
    profile_text(structure, format).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check(structure: &str, metric: &str, format: &str) -> Result<String, JsError> {
    metric_text(structure, metric, format).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(family: &str, ts: &str, format: &str) -> Result<String, JsError> {
    sweep_text(family, ts, format).map_err(|e| JsError::new(&e))
}

/// Built-in examples as `[{name, json}]` for the page's picker.
#[wasm_bindgen]
pub fn examples() -> String {
    use nilcohom::corpus::{corpus, Source};
    let list: Vec<serde_json::Value> = corpus()
        .into_iter()
        .filter_map(|e| {
            let json = match &e.source {
                Source::Structure(s) => s.to_json(),
                Source::Family { spec, .. } => spec.to_json(),
                Source::AbelianGrid => return None,
            };
            Some(serde_json::json!({"name": e.name, "family": matches!(e.source, Source::Family { .. }), "json": json}))
        })
        .collect();
    serde_json::to_string(&list).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    const IWASAWA: &str = r#"{"n":3,"name":"iwasawa","d":{"3":{"12":"1"}}}"#;

    #[test]
    fn profile_renders() {
        let s = profile_text(IWASAWA, "json").unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["bc"][0][1], 2);
        assert!(profile_text(r#"{"n":3,"d":{"3":{"~1~2":"1"}}}"#, "table").unwrap_err().contains("non-integrable"));
    }

    #[test]
    fn metric_and_sweep() {
        let m = r#"{"n":3,"terms":{"1~1":"i","2~2":"i","3~3":"i"}}"#;
        assert!(profile_text(nilcohom::corpus::ABELIAN_LIMIT_JSON, "json").unwrap().contains("betti"));
        assert!(metric_text(IWASAWA, m, "table").unwrap().contains("balanced"));
        let fam = nilcohom::corpus::H11_JUMP_JSON;
        let csv = sweep_text(fam, "0, 1/4", "csv").unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(sweep_text(fam, "0, x", "csv").is_err());
        let list: serde_json::Value = serde_json::from_str(&examples()).unwrap();
        assert!(list.as_array().unwrap().len() >= 8);
    }
}
