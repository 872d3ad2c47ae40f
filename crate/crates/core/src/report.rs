//! Text, JSON and CSV renderings of profiles, sweeps and verdicts. Output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::CohomologyProfile;
use crate::corpus::{abelian_grid_structure, grid_values, GRID_D, GRID_LAMBDA, GRID_RHO};
use crate::error::{Error, Result};
use crate::exact::GR;
use crate::metrics::MetricFlags;
use crate::structure::{FamilySpec, StructureEquations};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Malformed(format!("unknown format `{s}` (table, json, csv)"))),
        }
    }
}

/// Profile plus flags for each declared metric.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    #[serde(flatten)]
    pub profile: CohomologyProfile,
    pub metrics: BTreeMap<String, MetricFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn grid(title: &str, m: &[Vec<usize>], out: &mut String) {
    let _ = writeln!(out, "{title}");
    let w = m.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1).max(2);
    let _ = write!(out, "  p\\q");
    for q in 0..m.first().map_or(0, |r| r.len()) {
        let _ = write!(out, " {q:>w$}");
    }
    out.push('\n');
    for (p, row) in m.iter().enumerate() {
        let _ = write!(out, "  {p:>3}");
        for v in row {
            let _ = write!(out, " {v:>w$}");
        }
        out.push('\n');
    }
}

fn kv(out: &mut String, k: &str, v: impl std::fmt::Display) {
    let _ = writeln!(out, "{k:<22}{v}");
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn report_table(r: &Report) -> String {
    let p = &r.profile;
    let mut out = String::new();
    kv(&mut out, "name", &p.name);
    kv(&mut out, "n", p.n);
    kv(&mut out, "nilpotent", p.nilpotent);
    kv(&mut out, "unimodular", p.unimodular);
    kv(&mut out, "b_k", join(&p.betti));
    kv(&mut out, "h^{0,1}", p.hodge[0][1]);
    kv(&mut out, "h^{0,1}_BC", p.bc[0][1]);
    kv(&mut out, "b_1", p.betti[1]);
    kv(&mut out, "sgg", p.sgg.sgg);
    kv(&mut out, "  rank T", p.sgg.t_rank);
    kv(&mut out, "  h01_BC <= h01", p.sgg.crit_bc);
    kv(&mut out, "  b1 = 2 h01", p.sgg.crit_betti);
    kv(&mut out, "degeneration_step", p.degeneration_step);
    let m = &p.map_ranks;
    kv(&mut out, "map ranks", format!("T {} S {} S* {} T* {} F {} P {}", m.t, m.s, m.s_star, m.t_star, m.f, m.p));
    out.push('\n');
    grid("Dolbeault h^{p,q}", &p.hodge, &mut out);
    grid("Bott-Chern h^{p,q}_BC", &p.bc, &mut out);
    grid("Aeppli h^{p,q}_A", &p.aeppli, &mut out);
    grid("E_infinity", &p.e_infinity, &mut out);
    for (name, f) in &r.metrics {
        out.push('\n');
        let _ = writeln!(out, "metric {name}");
        metric_lines(f, &mut out);
    }
    for w in &p.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if let Some(n) = &r.notes {
        let _ = writeln!(out, "notes: {n}");
    }
    out
}

fn metric_lines(f: &MetricFlags, out: &mut String) {
    kv(out, "  positive", f.positive);
    kv(out, "  gauduchon", f.gauduchon);
    kv(out, "  strongly gauduchon", f.strongly_gauduchon);
    kv(out, "  superstrong", f.superstrong);
    kv(out, "  balanced", f.balanced);
}

pub fn metric_table(f: &MetricFlags) -> String {
    let mut out = String::new();
    metric_lines(f, &mut out);
    out
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

/// Long format: `quantity,p,q,value`; scalar quantities leave `p` and `q` empty.
pub fn report_csv(r: &Report) -> String {
    let p = &r.profile;
    let mut w = csv_writer();
    w.write_record(["quantity", "p", "q", "value"]).expect("csv row");
    let mut put = |qty: &str, a: Option<usize>, b: Option<usize>, v: String| {
        let s = |x: Option<usize>| x.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([qty.to_string(), s(a), s(b), v]).expect("csv row");
    };
    put("name", None, None, p.name.clone());
    put("n", None, None, p.n.to_string());
    put("nilpotent", None, None, p.nilpotent.to_string());
    put("unimodular", None, None, p.unimodular.to_string());
    put("sgg", None, None, p.sgg.sgg.to_string());
    put("rank_t", None, None, p.sgg.t_rank.to_string());
    put("degeneration_step", None, None, p.degeneration_step.to_string());
    for (k, b) in p.betti.iter().enumerate() {
        put("betti", Some(k), None, b.to_string());
    }
    for (name, m) in [("hodge", &p.hodge), ("bc", &p.bc), ("aeppli", &p.aeppli), ("e_infinity", &p.e_infinity)] {
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                put(name, Some(i), Some(j), v.to_string());
            }
        }
    }
    for (name, f) in &r.metrics {
        for (flag, v) in [
            ("positive", f.positive),
            ("gauduchon", f.gauduchon),
            ("strongly_gauduchon", f.strongly_gauduchon),
            ("superstrong", f.superstrong),
            ("balanced", f.balanced),
        ] {
            put(&format!("metric:{name}:{flag}"), None, None, v.to_string());
        }
    }
    csv_finish(w)
}

pub fn render_report(r: &Report, f: Format) -> String {
    match f {
        Format::Table => report_table(r),
        Format::Json => to_json(r),
        Format::Csv => report_csv(r),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepRow {
    /// `t` for families, `rho=..,lambda=..,D=..` for the parametric grid.
    pub t: String,
    pub sgg: Option<bool>,
    pub h11_bc: Option<usize>,
    pub h01: Option<usize>,
    pub b1: Option<usize>,
    pub degeneration_step: Option<usize>,
    pub on_jump_locus: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepResult {
    pub family: String,
    pub rows: Vec<SweepRow>,
    pub summary: String,
}

fn row_from(label: String, s: Result<StructureEquations>, on: Result<Option<bool>>) -> SweepRow {
    let mut row = SweepRow {
        t: label,
        sgg: None,
        h11_bc: None,
        h01: None,
        b1: None,
        degeneration_step: None,
        on_jump_locus: None,
        error: None,
    };
    let res = s.and_then(|s| CohomologyProfile::compute(&s)).and_then(|p| on.map(|o| (p, o)));
    match res {
        Ok((p, on)) => {
            row.sgg = Some(p.sgg.sgg);
            row.h11_bc = Some(p.bc[1][1]);
            row.h01 = Some(p.hodge[0][1]);
            row.b1 = Some(p.betti[1]);
            row.degeneration_step = Some(p.degeneration_step);
            row.on_jump_locus = on;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Jump set = rows whose `h^{1,1}_BC` differs from the most frequent value (ties: the smaller).
fn summarize(rows: &[SweepRow], has_locus: bool) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for r in rows {
        if let Some(h) = r.h11_bc {
            *counts.entry(h).or_default() += 1;
        }
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let Some((&generic, _)) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) else {
        return format!("no rows computed ({failed} failed)");
    };
    let jumps: Vec<&str> = rows.iter().filter(|r| r.h11_bc.is_some_and(|h| h != generic)).map(|r| r.t.as_str()).collect();
    let mut s = format!("generic h11_bc = {generic}; jumps at {{{}}}", jumps.join(", "));
    if has_locus {
        let locus: Vec<&str> = rows.iter().filter(|r| r.on_jump_locus == Some(true)).map(|r| r.t.as_str()).collect();
        let _ = write!(s, "; declared locus hits {{{}}}; agree: {}", locus.join(", "), jumps == locus);
    }
    let sgg: Vec<&str> = rows.iter().filter(|r| r.sgg == Some(true)).map(|r| r.t.as_str()).collect();
    let _ = write!(s, "; sgg at {}/{} rows", sgg.len(), rows.len());
    if failed > 0 {
        let _ = write!(s, "; {failed} rows failed");
    }
    s
}

pub fn sweep_family(f: &FamilySpec, ts: &[GR]) -> SweepResult {
    let rows = crate::par_map(ts, |t| row_from(t.to_string(), f.instantiate(t), f.on_locus(t)));
    let summary = summarize(&rows, f.locus.is_some());
    SweepResult { family: f.name.clone(), rows, summary }
}

/// `dη³ = ρη^{12} + η^{11̄} + λη^{12̄} + Dη^{22̄}` over the product of the three lists.
pub fn sweep_abelian_grid(rho: &[GR], lambda: &[GR], d: &[GR]) -> SweepResult {
    let mut cells = Vec::new();
    for r in rho {
        for l in lambda {
            for dd in d {
                cells.push((r.clone(), l.clone(), dd.clone()));
            }
        }
    }
    let rows = crate::par_map(&cells, |(r, l, dd)| {
        row_from(format!("rho={r},lambda={l},D={dd}"), abelian_grid_structure(r, l, dd), Ok(None))
    });
    let mut summary = summarize(&rows, false);
    let iff = cells.iter().zip(&rows).all(|((r, _, _), row)| row.sgg == Some(r.is_one()));
    let _ = write!(summary, "; sgg iff rho = 1: {iff}");
    SweepResult { family: "abelian-grid".into(), rows, summary }
}

pub fn default_grid() -> (Vec<GR>, Vec<GR>, Vec<GR>) {
    (grid_values(&GRID_RHO), grid_values(&GRID_LAMBDA), grid_values(&GRID_D))
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

pub fn render_sweep(s: &SweepResult, f: Format) -> String {
    match f {
        Format::Json => to_json(s),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["t", "sgg", "h11_bc", "h01", "b1", "degeneration_step", "on_jump_locus", "error"])
                .expect("csv row");
            for r in &s.rows {
                w.write_record([
                    r.t.clone(),
                    opt(&r.sgg),
                    opt(&r.h11_bc),
                    opt(&r.h01),
                    opt(&r.b1),
                    opt(&r.degeneration_step),
                    opt(&r.on_jump_locus),
                    r.error.clone().unwrap_or_default(),
                ])
                .expect("csv row");
            }
            csv_finish(w)
        }
        Format::Table => {
            let tw = s.rows.iter().map(|r| r.t.chars().count()).max().unwrap_or(1).max(1);
            let mut out = format!("{:<tw$}  sgg    h11_bc  h01  b1  step  locus\n", "t");
            for r in &s.rows {
                let _ = write!(
                    out,
                    "{:<tw$}  {:<5}  {:>6}  {:>3}  {:>2}  {:>4}  {:<5}",
                    r.t,
                    opt(&r.sgg),
                    opt(&r.h11_bc),
                    opt(&r.h01),
                    opt(&r.b1),
                    opt(&r.degeneration_step),
                    opt(&r.on_jump_locus)
                );
                if let Some(e) = &r.error {
                    let _ = write!(out, "  error: {e}");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "summary: {}", s.summary);
            out
        }
    }
}

/// Table and CSV list one line per `t`; JSON carries the components too.
pub fn render_transport(r: &crate::hodge::TransportReport, f: Format) -> String {
    match f {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["t", "pd", "gauduchon", "error"]).expect("csv row");
            for row in &r.rows {
                w.write_record([row.t.to_string(), row.pd.to_string(), row.gauduchon.to_string(), row.error.clone().unwrap_or_default()])
                    .expect("csv row");
            }
            csv_finish(w)
        }
        Format::Table => {
            let tw = r.rows.iter().map(|x| x.t.to_string().len()).max().unwrap_or(1).max(1);
            let mut out = format!("family {}\n{:<tw$}  pd     gauduchon\n", r.family, "t");
            for row in &r.rows {
                let _ = write!(out, "{:<tw$}  {:<5}  {:<5}", row.t.to_string(), row.pd, row.gauduchon);
                if let Some(e) = &row.error {
                    let _ = write!(out, "  error: {e}");
                }
                out.push('\n');
            }
            out
        }
    }
}

/// Renders any serializable record as JSON, or as `key,value` / aligned `key value` lines
/// after flattening nested objects with `/`-joined keys.
pub fn render_flat<T: Serialize>(v: &T, f: Format) -> String {
    if f == Format::Json {
        return to_json(v);
    }
    let value = serde_json::to_value(v).expect("serializes");
    let mut pairs = Vec::new();
    flatten("", &value, &mut pairs);
    match f {
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["key", "value"]).expect("csv row");
            for (k, v) in &pairs {
                w.write_record([k, v]).expect("csv row");
            }
            csv_finish(w)
        }
        _ => {
            let kw = pairs.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            pairs.iter().map(|(k, v)| format!("{k:<kw$}  {v}\n")).collect()
        }
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    use serde_json::Value;
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}/{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" ")))
        }
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Null => "-".into(),
        _ => v.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::H11_JUMP_JSON;

    fn iwasawa_report() -> Report {
        let s = StructureEquations::from_keys(3, "iwasawa", &[(3, &[("12", "1")])]).unwrap();
        Report { profile: CohomologyProfile::compute(&s).unwrap(), metrics: BTreeMap::new(), notes: None }
    }

    #[test]
    fn renderings_are_stable_and_parse() {
        let r = iwasawa_report();
        for f in [Format::Table, Format::Json, Format::Csv] {
            assert_eq!(render_report(&r, f), render_report(&iwasawa_report(), f));
        }
        let v: serde_json::Value = serde_json::from_str(&render_report(&r, Format::Json)).unwrap();
        for field in ["betti", "hodge", "bc", "aeppli", "e_pages", "degeneration_step", "sgg"] {
            assert!(v.get(field).is_some(), "{field}");
        }
        let csv = render_report(&r, Format::Csv);
        assert!(csv.starts_with("quantity,p,q,value\n"));
        assert!(csv.contains("bc,0,1,2\n"));
        assert!(report_table(&r).contains("h^{0,1}_BC            2"));
    }

    #[test]
    fn h11_sweep_summary() {
        let f = FamilySpec::parse_json(H11_JUMP_JSON).unwrap();
        let ts: Vec<GR> = ["0", "1/4", "1/4*i", "-1/4", "1/2+1/2*i"].iter().map(|s| s.parse().unwrap()).collect();
        let s = sweep_family(&f, &ts);
        let h: Vec<_> = s.rows.iter().map(|r| r.h11_bc.unwrap()).collect();
        assert_eq!(h, [5, 4, 4, 4, 5]);
        assert!(s.summary.contains("agree: true"), "{}", s.summary);
    }

    #[test]
    fn sweep_records_poles_in_row() {
        let f = FamilySpec::parse_json(H11_JUMP_JSON).unwrap();
        let s = sweep_family(&f, &["1".parse().unwrap(), "0".parse().unwrap()]);
        assert!(s.rows[0].error.is_some());
        assert_eq!(s.rows[1].h11_bc, Some(5));
    }

    #[test]
    fn flat_rendering() {
        #[derive(Serialize)]
        struct X {
            a: Vec<usize>,
            b: Option<bool>,
        }
        let x = X { a: vec![1, 2], b: None };
        assert_eq!(render_flat(&x, Format::Csv), "key,value\na,1 2\nb,-\n");
        assert_eq!(render_flat(&x, Format::Table), "a  1 2\nb  -\n");
    }
}
