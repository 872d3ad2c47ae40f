//! Built-in examples with expected values, and the fact sheet expectations are checked against.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::CohomologyProfile;
use crate::error::{Error, Result};
use crate::exact::GR;
use crate::exterior::{Form, FormJson};
use crate::metrics::{check_metric, ddbar_vanishing, positive_feasibility, Kind};
use crate::structure::{FamilySpec, Operators, StructureEquations};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the source literature; a mismatch fails `run-all`.
    Published,
    /// Immediate from the definitions.
    Trivial,
    /// Worked out independently by hand or by a second computation.
    Derived,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Eq,
    Ne,
    Ge,
    Le,
}

/// `value(fact at path) op expected`, with `path` a JSON pointer into the fact sheet.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Expectation {
    pub path: String,
    #[serde(default = "default_op")]
    pub op: Op,
    pub value: Value,
    pub provenance: Provenance,
}

fn default_op() -> Op {
    Op::Eq
}

impl Expectation {
    fn new(path: &str, op: Op, value: Value, provenance: Provenance) -> Self {
        Self { path: path.into(), op, value, provenance }
    }

    pub fn check(&self, facts: &Value) -> std::result::Result<(), String> {
        let Some(actual) = facts.pointer(&self.path) else {
            return Err(format!("{}: no such fact", self.path));
        };
        let ok = match self.op {
            Op::Eq => actual == &self.value,
            Op::Ne => actual != &self.value,
            Op::Ge | Op::Le => match (actual.as_i64(), self.value.as_i64()) {
                (Some(a), Some(b)) => {
                    if self.op == Op::Ge {
                        a >= b
                    } else {
                        a <= b
                    }
                }
                _ => false,
            },
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{}: expected {:?} {}, got {}", self.path, self.op, self.value, actual))
        }
    }
}

fn published(path: &str, v: Value) -> Expectation {
    Expectation::new(path, Op::Eq, v, Provenance::Published)
}

fn trivial(path: &str, v: Value) -> Expectation {
    Expectation::new(path, Op::Eq, v, Provenance::Trivial)
}

fn derived(path: &str, v: Value) -> Expectation {
    Expectation::new(path, Op::Eq, v, Provenance::Derived)
}

/// Expected values at one parameter value of a family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sample {
    pub t: GR,
    pub expect: Vec<Expectation>,
}

#[derive(Clone, Debug)]
pub enum Source {
    Structure(StructureEquations),
    Family { spec: FamilySpec, samples: Vec<Sample> },
    /// `dη³ = ρη^{12} + η^{11̄} + λη^{12̄} + Dη^{22̄}` over a parameter grid.
    AbelianGrid,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Invariant-level versus manifold-level remarks.
    pub notes: &'static str,
    pub source: Source,
    pub metrics: Vec<(&'static str, Form)>,
    pub expect: Vec<Expectation>,
}

/// Facts to compute beyond the cohomology profile.
#[derive(Clone, Copy, Debug, Default)]
pub struct Extras {
    pub feasibility: bool,
}

/// Profile plus `∂∂̄` vanishing table, metric flags and (optionally) feasibility statuses.
pub fn fact_sheet(s: &StructureEquations, metrics: &[(&str, Form)], extras: Extras) -> Result<Value> {
    let ops = Operators::new(s);
    let profile = CohomologyProfile::compute_with(s, &ops)?;
    let mut v = serde_json::to_value(&profile).expect("profile serializes");
    let n = s.n;
    let dd: Vec<Vec<bool>> = (0..=n).map(|p| (0..=n).map(|q| ddbar_vanishing(&ops, p, q)).collect()).collect();
    v["ddbar_vanishing"] = json!(dd);
    let mut m = serde_json::Map::new();
    for (name, w) in metrics {
        m.insert((*name).to_string(), serde_json::to_value(check_metric(&ops, w)?).expect("flags serialize"));
    }
    v["metrics"] = Value::Object(m);
    if extras.feasibility {
        let mut f = serde_json::Map::new();
        for kind in Kind::ALL {
            let ans = positive_feasibility(&ops, kind)?;
            f.insert(kind.to_string(), serde_json::to_value(ans.status).expect("status serializes"));
        }
        v["feasible"] = Value::Object(f);
    }
    Ok(v)
}

fn needs_feasibility(exps: &[Expectation]) -> bool {
    exps.iter().any(|e| e.path.starts_with("/feasible"))
}

fn structure(n: usize, name: &str, eqs: &[(usize, &[(&str, &str)])]) -> StructureEquations {
    StructureEquations::from_keys(n, name, eqs).expect("built-in structure is valid")
}

fn metric(n: usize, keys: &[(&str, &str)]) -> Form {
    Form::from_keys(n, keys).expect("built-in metric parses")
}

pub const H11_JUMP_JSON: &str = r#"{
  "n": 3,
  "name": "h11-jump",
  "d": {"3": {"12": "1", "1~1": "1", "1~2": "1", "2~2": "-2*(1-t*conj(t))/((1-t)*(1-conj(t)))"}},
  "frame": {"2": {"2": "(1-conj(t))/(1-t*conj(t))", "~2": "t*(1-conj(t))/(1-t*conj(t))"}},
  "locus": "t*conj(t)+(1-t)*(1-conj(t))-1",
  "domain": "|t| < 1"
}"#;

pub const ABELIAN_LIMIT_JSON: &str = r#"{
  "n": 3,
  "name": "abelian-limit",
  "d": {"3": {"12": "-conj(t)/(1-t*conj(t))", "1~1": "1", "1~2": "1/(1-t*conj(t))"}},
  "frame": {"2": {"2": "1", "~2": "t"}},
  "domain": "|t| < 1"
}"#;

/// The five derivatives of `ν^{13̄}, ν^{23̄}, ν^{31̄}, ν^{32̄}, ν^{33̄}` on the `h11-jump` fibre at `t`,
/// written out with `c = 2(1-|t|²)/|1-t|²`.
pub fn h11_jump_displayed_derivatives(t: &GR) -> Result<Vec<(&'static str, Form)>> {
    let one = GR::one();
    let tc = t.conj();
    let num = &GR::from_int(2) * &(&one - &(t * &tc));
    let den = &(&one - t) * &(&one - &tc);
    let c = num.checked_div(&den)?;
    let f = |terms: &[(&str, GR)]| -> Result<Form> {
        let mut out = Form::zero(3);
        for (k, v) in terms {
            out.add_term(crate::exterior::MultiIndex::parse_key(k, 3)?, v.clone());
        }
        Ok(out)
    };
    let m = -GR::one();
    Ok(vec![
        ("1~3", f(&[("12~1", one.clone()), ("12~2", -c.clone()), ("1~1~2", m.clone())])?),
        ("2~3", f(&[("12~1", m.clone()), ("2~1~2", m.clone())])?),
        ("3~1", f(&[("12~1", one.clone()), ("1~1~2", m.clone()), ("2~1~2", c.clone())])?),
        ("3~2", f(&[("12~2", one.clone()), ("1~1~2", one.clone())])?),
        (
            "3~3",
            f(&[
                ("12~3", one.clone()),
                ("13~1", m.clone()),
                ("23~1", m.clone()),
                ("23~2", c.clone()),
                ("1~1~3", one.clone()),
                ("1~2~3", one.clone()),
                ("2~2~3", -c.clone()),
                ("3~1~2", m.clone()),
            ])?,
        ),
    ])
}

/// `dη³ = ρη^{12} + η^{11̄} + λη^{12̄} + Dη^{22̄}`.
pub fn abelian_grid_structure(rho: &GR, lambda: &GR, d: &GR) -> Result<StructureEquations> {
    let mut f = Form::from_keys(3, &[("1~1", "1")])?;
    let key = |k: &str| crate::exterior::MultiIndex::parse_key(k, 3);
    f.add_term(key("12")?, rho.clone());
    f.add_term(key("1~2")?, lambda.clone());
    f.add_term(key("2~2")?, d.clone());
    let name = format!("grid[rho={rho},lambda={lambda},D={d}]");
    StructureEquations::new(3, name, vec![Form::zero(3), Form::zero(3), f])
}

pub fn grid_values(list: &[&str]) -> Vec<GR> {
    list.iter().map(|s| s.parse().expect("grid value parses")).collect()
}

pub const GRID_RHO: [&str; 2] = ["0", "1"];
pub const GRID_LAMBDA: [&str; 3] = ["0", "1", "2"];
pub const GRID_D: [&str; 5] = ["0", "1", "i", "-2", "1/2+1/2*i"];

fn t(s: &str) -> GR {
    s.parse().expect("sample parses")
}

pub fn corpus() -> Vec<CorpusEntry> {
    let half_std = metric(3, &[("1~1", "1/2*i"), ("2~2", "1/2*i"), ("3~3", "1/2*i")]);
    let std = metric(3, &[("1~1", "i"), ("2~2", "i"), ("3~3", "i")]);
    vec![
        CorpusEntry {
            name: "iwasawa",
            summary: "Iwasawa manifold, dη³ = η^{12} (holomorphically parallelizable)",
            notes: "nilmanifold: invariant cohomology equals manifold cohomology",
            source: Source::Structure(structure(3, "iwasawa", &[(3, &[("12", "1")])])),
            metrics: vec![("standard", std.clone())],
            expect: vec![
                published("/hodge/0/1", json!(2)),
                published("/bc/0/1", json!(2)),
                published("/betti/1", json!(4)),
                published("/sgg/sgg", json!(true)),
                published("/map_ranks/t", json!(0)),
                published("/map_ranks/s_star", json!(2)),
                published("/map_ranks/f", json!(4)),
                derived("/metrics/standard/balanced", json!(true)),
            ],
        },
        CorpusEntry {
            name: "torus3",
            summary: "complex 3-torus, all dη^k = 0",
            notes: "abelian Lie algebra",
            source: Source::Structure(structure(3, "torus3", &[])),
            metrics: vec![("half-standard", half_std.clone())],
            expect: vec![
                trivial("/betti/1", json!(6)),
                trivial("/hodge/0/1", json!(3)),
                trivial("/hodge", json!([[1, 3, 3, 1], [3, 9, 9, 3], [3, 9, 9, 3], [1, 3, 3, 1]])),
                trivial("/bc/1/1", json!(9)),
                trivial("/aeppli/1/1", json!(9)),
                trivial("/degeneration_step", json!(1)),
                trivial("/map_ranks/t", json!(0)),
                trivial("/map_ranks/f", json!(6)),
                trivial("/metrics/half-standard/balanced", json!(true)),
                trivial("/feasible/balanced", json!("witness")),
            ],
        },
        CorpusEntry {
            name: "balanced-odd-b1",
            summary: "dη³ = η^{11̄} - η^{22̄} on (0⁵,12+34): balanced, E₁ = E_∞, b₁ odd",
            notes: "nilmanifold: invariant cohomology equals manifold cohomology",
            source: Source::Structure(structure(3, "balanced-odd-b1", &[(3, &[("1~1", "1"), ("2~2", "-1")])])),
            metrics: vec![("half-standard", half_std.clone())],
            expect: vec![
                published("/betti/1", json!(5)),
                published("/sgg/sgg", json!(false)),
                published("/degeneration_step", json!(1)),
                published("/metrics/half-standard/balanced", json!(true)),
                published("/metrics/half-standard/positive", json!(true)),
                published("/feasible/balanced", json!("witness")),
                derived("/hodge/0/1", json!(3)),
                derived("/map_ranks/f", json!(5)),
            ],
        },
        CorpusEntry {
            name: "iwasawa-nonabelian",
            summary: "dη³ = η^{12} + η^{11̄} on the Iwasawa Lie algebra: sGG, not balanced, E₁ ≠ E₂ = E_∞",
            notes: "nilmanifold: invariant cohomology equals manifold cohomology",
            source: Source::Structure(structure(3, "iwasawa-nonabelian", &[(3, &[("12", "1"), ("1~1", "1")])])),
            metrics: vec![("standard", std.clone())],
            expect: vec![
                published("/sgg/sgg", json!(true)),
                published("/degeneration_step", json!(2)),
                published("/ddbar_vanishing/2/1", json!(true)),
                Expectation::new("/feasible/balanced", Op::Ne, json!("witness"), Provenance::Published),
                derived("/feasible/balanced", json!("infeasible")),
                derived("/metrics/standard/balanced", json!(false)),
                derived("/metrics/standard/gauduchon", json!(true)),
            ],
        },
        CorpusEntry {
            name: "abelian-sample",
            summary: "dη³ = η^{11̄} + η^{12̄} + iη^{22̄}: one abelian member of the ρ,λ,D family",
            notes: "abelian complex structure on a nilmanifold",
            source: Source::Structure(structure(3, "abelian-sample", &[(3, &[("1~1", "1"), ("1~2", "1"), ("2~2", "i")])])),
            metrics: vec![],
            expect: vec![
                published("/hodge/0/1", json!(3)),
                published("/sgg/sgg", json!(false)),
                Expectation::new("/map_ranks/t", Op::Ge, json!(1), Provenance::Derived),
                Expectation::new("/map_ranks/t_star", Op::Ge, json!(1), Provenance::Derived),
            ],
        },
        CorpusEntry {
            name: "abelian-grid",
            summary: "dη³ = ρη^{12} + η^{11̄} + λη^{12̄} + Dη^{22̄} over ρ∈{0,1}, λ∈{0,1,2}, D∈{0,1,i,-2,(1+i)/2}",
            notes: "every cell is a nilmanifold; sGG exactly when ρ = 1",
            source: Source::AbelianGrid,
            metrics: vec![],
            expect: vec![],
        },
        CorpusEntry {
            name: "h11-jump",
            summary: "deformation of dη³ = η^{12} + η^{11̄} + η^{12̄} - 2η^{22̄} along ν² = (1-t̄)/(1-|t|²)(η² + tη^{2̄})",
            notes: "h^{1,1}_BC jumps from 4 to 5 on the circle |t|² + |1-t|² = 1",
            source: Source::Family {
                spec: FamilySpec::parse_json(H11_JUMP_JSON).expect("built-in family parses"),
                samples: vec![
                    Sample {
                        t: t("0"),
                        expect: vec![
                            published("/bc/1/1", json!(5)),
                            derived("/aeppli/2/2", json!(5)),
                            published("/sgg/sgg", json!(true)),
                            trivial("/on_locus", json!(true)),
                        ],
                    },
                    Sample { t: t("1/4"), expect: vec![published("/bc/1/1", json!(4)), trivial("/on_locus", json!(false))] },
                    Sample { t: t("1/4*i"), expect: vec![published("/bc/1/1", json!(4))] },
                    Sample { t: t("-1/4"), expect: vec![published("/bc/1/1", json!(4))] },
                    Sample {
                        t: t("1/2+1/2*i"),
                        expect: vec![published("/bc/1/1", json!(5)), trivial("/on_locus", json!(true))],
                    },
                    Sample { t: t("1/2"), expect: vec![derived("/bc/1/1", json!(4))] },
                ],
            },
            metrics: vec![],
            expect: vec![],
        },
        CorpusEntry {
            name: "abelian-limit",
            summary: "deformation of the abelian dη³ = η^{11̄} + η^{12̄} along τ² = η² + tη^{2̄}",
            notes: "the central fibre is not sGG while every nearby fibre is",
            source: Source::Family {
                spec: FamilySpec::parse_json(ABELIAN_LIMIT_JSON).expect("built-in family parses"),
                samples: vec![
                    Sample {
                        t: t("0"),
                        expect: vec![published("/sgg/sgg", json!(false)), published("/hodge/0/1", json!(3))],
                    },
                    Sample { t: t("1/2"), expect: vec![published("/sgg/sgg", json!(true))] },
                    Sample { t: t("1/3*i"), expect: vec![published("/sgg/sgg", json!(true))] },
                ],
            },
            metrics: vec![("standard", std.clone())],
            expect: vec![],
        },
        CorpusEntry {
            name: "solvable-limit",
            summary: "dη¹ = 2iη^{13} + η^{33̄}, dη² = -2iη^{23} on a solvable Lie algebra",
            notes: "solvable, not nilpotent: the numbers reported are those of invariant forms and may differ \
                    from the cohomology of a compact quotient",
            source: Source::Structure(structure(
                3,
                "solvable-limit",
                &[(1, &[("13", "2*i"), ("3~3", "1")]), (2, &[("23", "-2*i")])],
            )),
            metrics: vec![],
            expect: vec![
                published("/ddbar_vanishing/2/1", json!(true)),
                published("/betti/1", json!(2)),
                trivial("/nilpotent", json!(false)),
                trivial("/unimodular", json!(true)),
                Expectation::new("/feasible/supersg", Op::Ne, json!("witness"), Provenance::Published),
            ],
        },
    ]
}

pub fn find(name: &str) -> Result<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.into()))
}

/// Outcome of one expectation.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub entry: String,
    pub at: Option<String>,
    pub path: String,
    pub provenance: Provenance,
    pub ok: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunAll {
    pub lines: Vec<CheckLine>,
    pub published_failures: usize,
    pub other_failures: usize,
}

/// Expectations supplied from a file, replacing the built-in ones for the named entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectationOverride {
    pub entry: String,
    #[serde(default)]
    pub t: Option<GR>,
    pub expect: Vec<Expectation>,
}

fn check_all(entry: &str, at: Option<String>, facts: &Value, exps: &[Expectation], out: &mut Vec<CheckLine>) {
    for e in exps {
        let r = e.check(facts);
        out.push(CheckLine {
            entry: entry.into(),
            at: at.clone(),
            path: format!("{} {:?} {}", e.path, e.op, e.value).to_lowercase(),
            provenance: e.provenance,
            ok: r.is_ok(),
            detail: r.err(),
        });
    }
}

pub fn family_facts(spec: &FamilySpec, t: &GR, metrics: &[(&str, Form)], extras: Extras) -> Result<Value> {
    let s = spec.instantiate(t)?;
    let mut v = fact_sheet(&s, metrics, extras)?;
    v["t"] = json!(t);
    if let Some(on) = spec.on_locus(t)? {
        v["on_locus"] = json!(on);
    }
    Ok(v)
}

/// Expected sGG verdict and `h^{0,1}` for every abelian-grid cell.
pub fn abelian_grid_checks(out: &mut Vec<CheckLine>) -> Result<()> {
    let cells: Vec<(GR, GR, GR)> = grid_values(&GRID_RHO)
        .into_iter()
        .flat_map(|r| {
            grid_values(&GRID_LAMBDA)
                .into_iter()
                .flat_map(move |l| {
                    let r = r.clone();
                    grid_values(&GRID_D).into_iter().map(move |d| (r.clone(), l.clone(), d))
                })
        })
        .collect();
    let results = crate::par_map(&cells, |(r, l, d)| -> Result<(String, Value, bool)> {
        let s = abelian_grid_structure(r, l, d)?;
        Ok((s.name.clone(), fact_sheet(&s, &[], Extras::default())?, r.is_one()))
    });
    for res in results {
        let (name, facts, rho_one) = res?;
        let exps = [
            published("/sgg/sgg", json!(rho_one)),
            published("/hodge/0/1", json!(if rho_one { 2 } else { 3 })),
        ];
        check_all("abelian-grid", Some(name), &facts, &exps, out);
    }
    Ok(())
}

pub fn run_all(overrides: &[ExpectationOverride]) -> Result<RunAll> {
    let mut lines = Vec::new();
    for entry in corpus() {
        let ov: Vec<&ExpectationOverride> = overrides.iter().filter(|o| o.entry == entry.name).collect();
        match &entry.source {
            Source::Structure(s) => {
                let exps = ov.iter().find(|o| o.t.is_none()).map(|o| o.expect.clone()).unwrap_or(entry.expect.clone());
                let facts = fact_sheet(s, &entry.metrics, Extras { feasibility: needs_feasibility(&exps) })?;
                check_all(entry.name, None, &facts, &exps, &mut lines);
            }
            Source::Family { spec, samples } => {
                for sample in samples {
                    let exps = ov
                        .iter()
                        .find(|o| o.t.as_ref() == Some(&sample.t))
                        .map(|o| o.expect.clone())
                        .unwrap_or(sample.expect.clone());
                    let facts = family_facts(spec, &sample.t, &[], Extras { feasibility: needs_feasibility(&exps) })?;
                    check_all(entry.name, Some(format!("t={}", sample.t)), &facts, &exps, &mut lines);
                }
                let derivs = ov.is_empty() && entry.name == "h11-jump";
                if derivs {
                    for sample in samples {
                        let s = spec.instantiate(&sample.t)?;
                        for (key, expected) in h11_jump_displayed_derivatives(&sample.t)? {
                            let got = s.d_form(&Form::from_keys(3, &[(key, "1")])?);
                            lines.push(CheckLine {
                                entry: entry.name.into(),
                                at: Some(format!("t={}", sample.t)),
                                path: format!("d ν^{key}"),
                                provenance: Provenance::Published,
                                ok: got == expected,
                                detail: (got != expected).then(|| format!("got {got}, expected {expected}")),
                            });
                        }
                    }
                }
            }
            Source::AbelianGrid => {
                if ov.is_empty() {
                    abelian_grid_checks(&mut lines)?;
                } else {
                    for o in ov {
                        let t = o.t.clone().unwrap_or_else(GR::zero);
                        let s = abelian_grid_structure(&GR::zero(), &GR::one(), &t)?;
                        let facts = fact_sheet(&s, &[], Extras { feasibility: needs_feasibility(&o.expect) })?;
                        check_all(entry.name, Some(s.name.clone()), &facts, &o.expect, &mut lines);
                    }
                }
            }
        }
    }
    let published_failures = lines.iter().filter(|l| !l.ok && l.provenance == Provenance::Published).count();
    let other_failures = lines.iter().filter(|l| !l.ok && l.provenance != Provenance::Published).count();
    Ok(RunAll { lines, published_failures, other_failures })
}

/// Serialized metric file content for a built-in metric.
pub fn metric_json(f: &Form) -> String {
    serde_json::to_string(&FormJson::from(f)).expect("form serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_has_entries_with_notes() {
        let c = corpus();
        assert!(c.len() >= 8);
        assert!(c.iter().all(|e| !e.notes.is_empty() && !e.summary.is_empty()));
        assert!(find("nope").is_err());
    }

    #[test]
    fn displayed_derivatives_match() {
        let spec = FamilySpec::parse_json(H11_JUMP_JSON).unwrap();
        for ts in ["0", "1/4", "1/4*i", "-1/3+1/5*i", "1/2+1/2*i"] {
            let t: GR = ts.parse().unwrap();
            spec.check_consistency(&t).unwrap();
            let s = spec.instantiate(&t).unwrap();
            for (key, expected) in h11_jump_displayed_derivatives(&t).unwrap() {
                assert_eq!(s.d_form(&Form::from_keys(3, &[(key, "1")]).unwrap()), expected, "{key} at {ts}");
            }
        }
    }

    #[test]
    fn expectation_ops() {
        let facts = json!({"a": [1, 2], "b": "witness"});
        assert!(published("/a/1", json!(2)).check(&facts).is_ok());
        assert!(published("/a/1", json!(3)).check(&facts).is_err());
        assert!(Expectation::new("/b", Op::Ne, json!("infeasible"), Provenance::Derived).check(&facts).is_ok());
        assert!(Expectation::new("/a/0", Op::Ge, json!(1), Provenance::Derived).check(&facts).is_ok());
        assert!(published("/missing", json!(1)).check(&facts).is_err());
    }

    #[test]
    fn run_all_passes() {
        let r = run_all(&[]).unwrap();
        for l in r.lines.iter().filter(|l| !l.ok) {
            eprintln!("{} {:?} {}: {:?}", l.entry, l.at, l.path, l.detail);
        }
        assert_eq!(r.published_failures + r.other_failures, 0);
    }
}
