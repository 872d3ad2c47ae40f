use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use nilcohom::cohomology::maps::{map_f, map_p, map_s_exactness, map_sstar_tstar, map_t};
use nilcohom::cohomology::{sgg_verdict, CohomologyProfile};
use nilcohom::corpus::{self, ExpectationOverride, Source};
use nilcohom::exterior::{standard_metric, FormJson};
use nilcohom::hodge::transport_gauduchon;
use nilcohom::metrics::{check_metric, positive_feasibility, Kind};
use nilcohom::report::{self, Format, Report};
use nilcohom::{Error, FamilySpec, Form, Operators, StructureEquations, GR};

#[derive(Parser)]
#[command(name = "nilcohom", version, about = "Exact cohomology of invariant complex structures on nilmanifolds")]
struct Cli {
    /// table, json or csv
    #[arg(long, global = true, default_value = "table")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a structure or family file (or corpus entry).
    Validate { input: String },
    /// Full cohomology profile plus flags of the declared metrics.
    Report {
        input: String,
        #[arg(long)]
        metric: Option<String>,
        /// Parameter value for family inputs (default 0).
        #[arg(long)]
        t: Option<GR>,
    },
    /// Ranks and exactness of T, S, S*, T*, F and P.
    Maps {
        input: String,
        #[arg(long)]
        t: Option<GR>,
    },
    /// Positivity, Gauduchon, strongly Gauduchon, superstrong and balanced flags.
    CheckMetric {
        input: String,
        #[arg(long)]
        metric: Option<String>,
        #[arg(long)]
        t: Option<GR>,
    },
    /// Search for a positive metric of the given kind (default: every kind).
    Feasible {
        input: String,
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long)]
        t: Option<GR>,
    },
    /// One row per parameter value; the parametric grid takes --rho, --lambda and --D instead of --t.
    Sweep {
        input: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<GR>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rho: Vec<GR>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<GR>,
        #[arg(long = "D", value_delimiter = ',', allow_hyphen_values = true)]
        d: Vec<GR>,
    },
    /// Carry a Gauduchon class of the base fibre to nearby fibres.
    Transport {
        input: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        t: Vec<GR>,
        /// Gauduchon metric γ0 on the base fibre (default: standard).
        #[arg(long)]
        metric: Option<String>,
        /// Hermitian metric ω0 used for the harmonic splitting (default: γ0).
        #[arg(long)]
        omega: Option<String>,
    },
    /// Built-in examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    RunAll {
        /// JSON list of `{entry, t?, expect}` replacing the built-in expectations of those entries.
        #[arg(long)]
        expectations: Option<String>,
    },
}

enum Loaded {
    Structure(StructureEquations),
    Family(FamilySpec),
    Grid,
}

struct Input {
    loaded: Loaded,
    metrics: Vec<(String, Form)>,
    notes: Option<String>,
}

fn read(path: &str) -> nilcohom::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn load(arg: &str) -> nilcohom::Result<Input> {
    if !Path::new(arg).exists() {
        let e = corpus::find(arg)?;
        let loaded = match e.source {
            Source::Structure(s) => Loaded::Structure(s),
            Source::Family { spec, .. } => Loaded::Family(spec),
            Source::AbelianGrid => Loaded::Grid,
        };
        let metrics = e.metrics.into_iter().map(|(k, f)| (k.to_string(), f)).collect();
        return Ok(Input { loaded, metrics, notes: Some(e.notes.to_string()) });
    }
    let text = read(arg)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{arg}: {e}")))?;
    let loaded = if v.get("frame").is_some() || v.get("locus").is_some() {
        Loaded::Family(FamilySpec::parse_json(&text)?)
    } else {
        Loaded::Structure(StructureEquations::parse_json(&text)?)
    };
    Ok(Input { loaded, metrics: Vec::new(), notes: None })
}

fn structure_at(input: &Input, t: Option<&GR>) -> nilcohom::Result<StructureEquations> {
    match &input.loaded {
        Loaded::Structure(s) => {
            if t.is_some() {
                return Err(Error::Malformed("--t applies to family inputs only".into()));
            }
            Ok(s.clone())
        }
        Loaded::Family(f) => {
            let t = t.cloned().unwrap_or_else(GR::zero);
            f.check_consistency(&t)?;
            f.instantiate(&t)
        }
        Loaded::Grid => Err(Error::Malformed("the parametric grid entry is only available through `sweep`".into())),
    }
}

fn load_metric(path: &str) -> nilcohom::Result<Form> {
    let j: FormJson = serde_json::from_str(&read(path)?).map_err(|e| Error::Malformed(format!("{path}: {e}")))?;
    Form::try_from(&j)
}

fn metrics_for(input: &Input, file: Option<&String>, n: usize) -> nilcohom::Result<Vec<(String, Form)>> {
    match file {
        Some(p) => Ok(vec![(p.clone(), load_metric(p)?)]),
        None if input.metrics.is_empty() => Ok(vec![("standard".into(), standard_metric(n))]),
        None => Ok(input.metrics.clone()),
    }
}

#[derive(Serialize)]
struct MapsReport {
    t_rank: usize,
    t_matrix: nilcohom::Matrix,
    s: nilcohom::cohomology::maps::SExactness,
    sstar_tstar: nilcohom::cohomology::maps::SstarTstar,
    f_rank: usize,
    f_injective: bool,
    p_rank: usize,
    p_surjective: bool,
}

#[derive(Serialize)]
struct ListEntry {
    name: &'static str,
    kind: &'static str,
    expectations: usize,
    summary: &'static str,
    notes: &'static str,
}

/// Ok(true) = success, Ok(false) = expectation failure.
fn run(cli: Cli) -> nilcohom::Result<bool> {
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Validate { input } => {
            let inp = load(&input)?;
            let s = match &inp.loaded {
                Loaded::Family(f) => {
                    f.check_consistency(&GR::zero())?;
                    f.base()?
                }
                _ => structure_at(&inp, None)?,
            };
            print!("{}", report::render_flat(&s.validate(), fmt));
        }
        Cmd::Report { input, metric, t } => {
            let inp = load(&input)?;
            let s = structure_at(&inp, t.as_ref())?;
            let ops = Operators::new(&s);
            let profile = CohomologyProfile::compute_with(&s, &ops)?;
            let mut metrics = BTreeMap::new();
            let declared = match &metric {
                Some(p) => vec![(p.clone(), load_metric(p)?)],
                None => inp.metrics.clone(),
            };
            for (name, w) in &declared {
                metrics.insert(name.clone(), check_metric(&ops, w)?);
            }
            print!("{}", report::render_report(&Report { profile, metrics, notes: inp.notes }, fmt));
        }
        Cmd::Maps { input, t } => {
            let s = structure_at(&load(&input)?, t.as_ref())?;
            let ops = Operators::new(&s);
            let tm = map_t(&ops)?;
            let f = map_f(&ops)?;
            let p = map_p(&ops, Some(sgg_verdict(&ops)?.sgg))?;
            let r = MapsReport {
                t_rank: tm.rank,
                t_matrix: tm.matrix,
                s: map_s_exactness(&ops)?,
                sstar_tstar: map_sstar_tstar(&ops)?,
                f_rank: f.rank,
                f_injective: f.injective,
                p_rank: p.rank,
                p_surjective: p.surjective,
            };
            print!("{}", report::render_flat(&r, fmt));
        }
        Cmd::CheckMetric { input, metric, t } => {
            let inp = load(&input)?;
            let s = structure_at(&inp, t.as_ref())?;
            let ops = Operators::new(&s);
            let mut out = BTreeMap::new();
            for (name, w) in metrics_for(&inp, metric.as_ref(), s.n)? {
                out.insert(name, check_metric(&ops, &w)?);
            }
            print!("{}", report::render_flat(&out, fmt));
        }
        Cmd::Feasible { input, kind, t } => {
            let s = structure_at(&load(&input)?, t.as_ref())?;
            let ops = Operators::new(&s);
            let kinds = kind.map(|k| vec![k]).unwrap_or_else(|| Kind::ALL.to_vec());
            let answers: BTreeMap<String, _> = kinds
                .into_iter()
                .map(|k| positive_feasibility(&ops, k).map(|a| (k.to_string(), a)))
                .collect::<nilcohom::Result<_>>()?;
            print!("{}", report::render_flat(&answers, fmt));
        }
        Cmd::Sweep { input, t, rho, lambda, d } => {
            let inp = load(&input)?;
            let res = match &inp.loaded {
                Loaded::Grid => {
                    let (r0, l0, d0) = report::default_grid();
                    let pick = |v: Vec<GR>, dflt: Vec<GR>| if v.is_empty() { dflt } else { v };
                    report::sweep_abelian_grid(&pick(rho, r0), &pick(lambda, l0), &pick(d, d0))
                }
                Loaded::Family(f) => {
                    if t.is_empty() {
                        return Err(Error::Malformed("sweep over a family needs --t".into()));
                    }
                    report::sweep_family(f, &t)
                }
                Loaded::Structure(_) => return Err(Error::Malformed("sweep needs a family or the parametric grid".into())),
            };
            print!("{}", report::render_sweep(&res, fmt));
        }
        Cmd::Transport { input, t, metric, omega } => {
            let inp = load(&input)?;
            let Loaded::Family(f) = &inp.loaded else {
                return Err(Error::Malformed("transport needs a family".into()));
            };
            let gamma0 = match &metric {
                Some(p) => load_metric(p)?,
                None => standard_metric(f.n),
            };
            let omega0 = match &omega {
                Some(p) => load_metric(p)?,
                None => gamma0.clone(),
            };
            let r = transport_gauduchon(f, &gamma0, &omega0, &t)?;
            print!("{}", report::render_transport(&r, fmt));
        }
        Cmd::Examples { action: ExamplesAction::List } => {
            let list: Vec<ListEntry> = corpus::corpus()
                .into_iter()
                .map(|e| ListEntry {
                    name: e.name,
                    kind: match e.source {
                        Source::Structure(_) => "structure",
                        Source::Family { .. } => "family",
                        Source::AbelianGrid => "grid",
                    },
                    expectations: match &e.source {
                        Source::Family { samples, .. } => samples.iter().map(|s| s.expect.len()).sum(),
                        Source::AbelianGrid => 60,
                        Source::Structure(_) => e.expect.len(),
                    },
                    summary: e.summary,
                    notes: e.notes,
                })
                .collect();
            match fmt {
                Format::Table => {
                    for e in &list {
                        println!("{:<20} {:<9} {:>3}  {}", e.name, e.kind, e.expectations, e.summary);
                        println!("{:<20} notes: {}", "", e.notes);
                    }
                }
                _ => print!("{}", report::render_flat(&list, fmt)),
            }
        }
        Cmd::Examples { action: ExamplesAction::RunAll { expectations } } => {
            let overrides: Vec<ExpectationOverride> = match &expectations {
                Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Error::Malformed(format!("{p}: {e}")))?,
                None => Vec::new(),
            };
            let r = corpus::run_all(&overrides)?;
            match fmt {
                Format::Table => {
                    for l in &r.lines {
                        let at = l.at.as_deref().map(|a| format!(" [{a}]")).unwrap_or_default();
                        let status = if l.ok { "PASS" } else { "FAIL" };
                        let prov = format!("{:?}", l.provenance).to_lowercase();
                        println!("{status} {}{at} {} ({prov})", l.entry, l.path);
                        if let Some(d) = &l.detail {
                            println!("     {d}");
                        }
                    }
                    println!(
                        "{} checks, {} published failures, {} other failures",
                        r.lines.len(),
                        r.published_failures,
                        r.other_failures
                    );
                }
                _ => print!("{}", report::render_flat(&r, fmt)),
            }
            return Ok(r.published_failures == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Inconsistent(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
