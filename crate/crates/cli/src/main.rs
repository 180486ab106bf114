mod kappa;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use trigon::document::{load_document, Document, Mode};
use trigon::exoticity::{build_probe, exotic_certificate, theomain_bounds};
use trigon::ffield::prime_power;
use trigon::grouptools::{abelianization, export_presentation, exponent_sums_divisible_by_three, todd_coxeter, Enumeration, Format};
use trigon::linkgraph::{FSet, LinkGraph};
use trigon::oppmodel::{check_coset_incidence, opp_datum, opp_properties, theoopp_presentation};
use trigon::singer::{quad_datum, singer_datum, singer_t_kappa, r_of_q};
use trigon::tables::golden;
use trigon::tripres::{classify_list, enumerate_all, table_text, verify, TrianglePresentation};

use crate::kappa::{coset_kappa_json, orbit_kappa_json, parse_coset_kappa, parse_orbit_kappa};

#[derive(Parser)]
#[command(name = "trigon", version, about = "Triangle presentations, their link graphs and the groups they present")]
struct Cli {
    /// Worker threads for batch runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Repair non-canonical or non-closed input documents instead of rejecting them.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fmt {
    Json,
    Table,
    Gap,
    Magma,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Presentation document (JSON).
    #[arg(long, value_name = "PATH")]
    from_json: Option<PathBuf>,
    /// One of the stored tables 1-5.
    #[arg(long, value_name = "K")]
    table: Option<u8>,
}

#[derive(Args)]
struct KappaArgs {
    /// `+`, `-`, or a list such as `1=-1,17=+1` (quad: `2/9=-1`); unlisted orbits are +1.
    #[arg(long, conflicts_with = "all_kappa")]
    kappa: Option<String>,
    /// Every choice of kappa.
    #[arg(long)]
    all_kappa: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Singer difference set over GF(q) and its presentations T_kappa.
    Singer {
        #[arg(long)]
        q: u64,
        /// Modulus of GF(q^3) over the prime field, coefficients low to high (e.g. 1,1,0,1).
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        kappa: KappaArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Fmt,
    },
    /// The plane over GF(q^2) with the subgroup H of order q^2+q+1.
    Quad {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        kappa: KappaArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Fmt,
    },
    /// Coset model of the opposition graph and its presentations (q = 1 mod 3).
    Opp {
        #[arg(long)]
        q: u64,
        /// Field index of the order-3 element.
        #[arg(long)]
        alpha3: Option<usize>,
        /// Check the listed graph properties; exit 1 on failure.
        #[arg(long)]
        properties: bool,
        /// Compare the three incidence descriptions over all pairs; exit 1 on disagreement.
        #[arg(long)]
        incidence: bool,
        #[command(flatten)]
        kappa: KappaArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Fmt,
    },
    /// Every presentation compatible with F, counted up to isomorphism.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Also print every presentation.
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Fmt,
    },
    /// Isomorphism classes of the presentations compatible with F.
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "json")]
        format: Fmt,
    },
    /// Check the three axioms of T against F; exit 1 on violation.
    Verify {
        #[command(flatten)]
        source: Source,
    },
    /// Exoticness certificates for the Singer family, and the counting bounds.
    Exotic {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        kappa: KappaArgs,
        /// Print the lower bounds on exotic presentations and classes.
        #[arg(long)]
        bounds: bool,
    },
    /// Reproduce one of the stored tables.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        which: u8,
        #[arg(long, value_enum, default_value = "table")]
        format: Fmt,
    },
    /// Export the presented group.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "gap")]
        format: Fmt,
        /// Append the abelianization.
        #[arg(long)]
        invariants: bool,
        /// Append the order found by coset enumeration, giving up past this many cosets.
        #[arg(long, value_name = "MAX_COSETS")]
        order: Option<usize>,
    },
    /// Link graph metrics, spectrum, edges and automorphisms.
    Graph {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        metrics: bool,
        #[arg(long)]
        spectrum: bool,
        /// Edge list, one "i j+n" pair per line (1-based).
        #[arg(long)]
        edges: bool,
        #[arg(long)]
        automorphisms: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    #[arg(long, value_name = "PATH")]
    from_json: Option<PathBuf>,
    #[arg(long, value_name = "K")]
    table: Option<u8>,
    /// Singer link over GF(Q).
    #[arg(long, value_name = "Q")]
    singer: Option<u64>,
    /// Opposition coset graph over GF(Q).
    #[arg(long, value_name = "Q")]
    opp: Option<u64>,
}

enum CliError {
    /// Bad arguments or input; exit 2.
    Usage(String),
    /// A check or certificate failed; exit 1.
    Check(String),
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn parse_modulus(m: &Option<String>) -> Result<Option<Vec<u64>>, CliError> {
    m.as_ref()
        .map(|s| {
            s.split(',')
                .map(|c| c.trim().parse::<u64>().map_err(|_| usage(format!("bad modulus coefficient `{c}`"))))
                .collect()
        })
        .transpose()
}

fn load(source: &Source, lenient: bool) -> Result<Document, CliError> {
    match (&source.from_json, source.table) {
        (Some(path), _) => {
            let mode = if lenient { Mode::Lenient } else { Mode::Strict };
            let loaded = load_document(path, mode).map_err(usage)?;
            for w in &loaded.warnings {
                eprintln!("warning: {w}");
            }
            Ok(loaded.doc)
        }
        (None, Some(k)) => golden(k).and_then(|g| g.document()).map_err(usage),
        (None, None) => Err(usage("no input given")),
    }
}

fn need_t(doc: &Document) -> Result<&TrianglePresentation, CliError> {
    doc.t.as_ref().ok_or_else(|| usage("the document has no T"))
}

fn need_f(doc: &Document) -> Result<FSet, CliError> {
    doc.f_set().ok_or_else(|| usage("the document has no F"))
}

/// Renders a list of (label, presentation) pairs.
fn render_presentations(items: &[(Value, TrianglePresentation)], base: usize, format: Fmt) -> String {
    let mut out = String::new();
    let single = items.len() == 1;
    for (kappa, t) in items {
        match format {
            Fmt::Table => {
                if !single {
                    writeln!(out, "# kappa {kappa}").unwrap();
                }
                out.push_str(&table_text(t, base));
            }
            Fmt::Gap | Fmt::Magma => {
                if !single {
                    let c = if format == Fmt::Gap { "#" } else { "//" };
                    writeln!(out, "{c} kappa {kappa}").unwrap();
                }
                let f = if format == Fmt::Gap { Format::Gap } else { Format::Magma };
                out.push_str(&export_presentation(t, f));
            }
            Fmt::Json => unreachable!("json is rendered by the caller"),
        }
    }
    out
}

fn presentations_json(items: &[(Value, TrianglePresentation)], base: usize) -> Value {
    items
        .iter()
        .map(|(k, t)| {
            let mut doc = Document::from_t(t.clone(), base).to_json();
            doc["meta"] = json!({ "kappa": k });
            doc
        })
        .collect()
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)?;
    }
    let lenient = cli.lenient;
    match cli.cmd {
        Cmd::Singer { q, modulus, kappa, format } => {
            let modulus = parse_modulus(&modulus)?;
            let d = singer_datum(q, modulus.as_deref()).map_err(usage)?;
            let mins: Vec<usize> = d.three_orbits().iter().map(|o| o[0]).collect();
            let kappas = if kappa.all_kappa {
                d.all_kappas()
            } else {
                vec![parse_orbit_kappa(kappa.kappa.as_deref().unwrap_or("+"), &mins).map_err(usage)?]
            };
            let items: Vec<(Value, TrianglePresentation)> = kappas
                .par_iter()
                .map(|k| singer_t_kappa(&d, k).map(|t| (orbit_kappa_json(k), t)))
                .collect::<Result<_, _>>()
                .map_err(usage)?;
            if format != Fmt::Json {
                return Ok(Outcome::ok(render_presentations(&items, 0, format)));
            }
            let v = json!({
                "q": q,
                "m": d.m,
                "S": d.s,
                "orbits": d.orbits,
                "fixed_points": d.fixed_points(),
                "R": r_of_q(q),
                "presentations": presentations_json(&items, 0),
            });
            Ok(Outcome::ok(pretty(&v)))
        }
        Cmd::Quad { q, modulus, kappa, format } => {
            let modulus = parse_modulus(&modulus)?;
            let qd = quad_datum(q, modulus.as_deref()).map_err(usage)?;
            let keys: Vec<(usize, usize)> =
                qd.h.coset_reps().iter().flat_map(|&r| qd.orbits_in_h.iter().map(move |o| (r, o[0]))).collect();
            let kappas = if kappa.all_kappa {
                qd.all_kappas()
            } else {
                vec![parse_coset_kappa(kappa.kappa.as_deref().unwrap_or("+"), &keys).map_err(usage)?]
            };
            let items: Vec<(Value, TrianglePresentation)> = kappas
                .par_iter()
                .map(|k| qd.t_kappa(k).map(|t| (coset_kappa_json(k), t)))
                .collect::<Result<_, _>>()
                .map_err(usage)?;
            if format != Fmt::Json {
                return Ok(Outcome::ok(render_presentations(&items, 0, format)));
            }
            let mut v = serde_json::to_value(qd.summary()).expect("json");
            v["presentations"] = presentations_json(&items, 0);
            Ok(Outcome::ok(pretty(&v)))
        }
        Cmd::Opp { q, alpha3, properties, incidence, kappa, format } => {
            let d = opp_datum(q, alpha3).map_err(usage)?;
            let mut code = 0;
            let mut v = json!({
                "q": q,
                "group_order": d.group.order(),
                "S": d.s,
                "orbits": d.orbits(),
            });
            if properties {
                let r = opp_properties(q).map_err(usage)?;
                if !r.all_pass() {
                    code = 1;
                }
                v["properties"] = serde_json::to_value(&r).expect("json");
            }
            if incidence {
                let c = check_coset_incidence(&d);
                if c.disagreements > 0 {
                    code = 1;
                }
                v["incidence"] = serde_json::to_value(c).expect("json");
            }
            if kappa.all_kappa || kappa.kappa.is_some() {
                if d.lambda.is_none() {
                    return Err(usage(format!("q = {q} is not 1 mod 3: no presentations")));
                }
                let kappas = if kappa.all_kappa {
                    d.all_kappas()
                } else {
                    vec![parse_orbit_kappa(kappa.kappa.as_deref().unwrap_or("+"), &d.three_orbit_mins()).map_err(usage)?]
                };
                let items: Vec<(Value, TrianglePresentation)> = kappas
                    .par_iter()
                    .map(|k| theoopp_presentation(&d, k).map(|t| (orbit_kappa_json(k), t)))
                    .collect::<Result<_, _>>()
                    .map_err(usage)?;
                if format != Fmt::Json {
                    return Ok(Outcome { text: render_presentations(&items, 0, format), code });
                }
                v["presentations"] = presentations_json(&items, 0);
            } else if format != Fmt::Json {
                return Err(usage("table and gap output need --kappa or --all-kappa"));
            }
            Ok(Outcome { text: pretty(&v), code })
        }
        Cmd::Enumerate { source, list, format } => {
            let doc = load(&source, lenient)?;
            let f = need_f(&doc)?;
            let all = enumerate_all(&f);
            let listed: Vec<(Value, TrianglePresentation)> =
                if list { all.iter().map(|t| (Value::Null, t.clone())).collect() } else { Vec::new() };
            let c = classify_list(&f, all).map_err(|e| CliError::Check(e.to_string()))?;
            match format {
                Fmt::Json => {
                    let mut v = json!({ "presentations": c.total, "classes": c.classes.len() });
                    if list {
                        v["list"] = presentations_json(&listed, doc.base);
                    }
                    Ok(Outcome::ok(pretty(&v)))
                }
                _ => {
                    let mut out = format!("{} presentations, {} isomorphism classes\n", c.total, c.classes.len());
                    for (i, (_, t)) in listed.iter().enumerate() {
                        writeln!(out, "# presentation {}", i + 1).unwrap();
                        out.push_str(&table_text(t, doc.base));
                    }
                    Ok(Outcome::ok(out))
                }
            }
        }
        Cmd::Classify { source, format } => {
            let doc = load(&source, lenient)?;
            let f = need_f(&doc)?;
            let c = classify_list(&f, enumerate_all(&f)).map_err(|e| CliError::Check(e.to_string()))?;
            let b = doc.base;
            if format != Fmt::Json {
                let mut out = format!(
                    "|Aut(F)| = {}, {} presentations, {} isomorphism classes\n",
                    c.aut_f.order(),
                    c.total,
                    c.classes.len()
                );
                for (i, cl) in c.classes.iter().enumerate() {
                    writeln!(out, "# class {}: orbit size {}, |Aut(T)| = {}", i + 1, cl.orbit_size, cl.aut_order).unwrap();
                    out.push_str(&table_text(&cl.representative, b));
                }
                return Ok(Outcome::ok(out));
            }
            let classes: Vec<Value> = c
                .classes
                .iter()
                .map(|cl| {
                    json!({
                        "orbit_size": cl.orbit_size,
                        "aut_order": cl.aut_order.to_string(),
                        "representative": Document::from_t(cl.representative.clone(), b).to_json()["T"],
                    })
                })
                .collect();
            let v = json!({
                "aut_plus_order": c.aut_f.plus.order().to_string(),
                "aut_order": c.aut_f.order().to_string(),
                "presentations": c.total,
                "classes": classes,
            });
            Ok(Outcome::ok(pretty(&v)))
        }
        Cmd::Verify { source } => {
            let doc = load(&source, lenient)?;
            let t = need_t(&doc)?;
            let f = need_f(&doc)?;
            let violations = verify(&f, t).map_err(usage)?;
            if violations.is_empty() {
                return Ok(Outcome::ok(format!("ok: {} triples compatible with {} pairs\n", t.len(), f.len())));
            }
            let b = doc.base;
            let shift = |(i, j, k): (usize, usize, usize)| (i + b, j + b, k + b);
            let mut out = String::new();
            for v in &violations {
                use trigon::tripres::Violation::*;
                let line = match v {
                    NotInF { triple } => {
                        let (i, j, k) = shift(*triple);
                        format!("axiom 1: ({i},{j},{k}) in T but ({i},{j}) not in F")
                    }
                    NotUnique { pair: (i, j), thirds } => {
                        let th: Vec<usize> = thirds.iter().map(|x| x + b).collect();
                        format!("axiom 2: pair ({},{}) has thirds {:?}", i + b, j + b, th)
                    }
                    NotRotationClosed { triple } => {
                        let (i, j, k) = shift(*triple);
                        format!("axiom 3: ({i},{j},{k}) in T but ({j},{k},{i}) not")
                    }
                };
                writeln!(out, "{line}").unwrap();
            }
            Ok(Outcome { text: out, code: 1 })
        }
        Cmd::Exotic { q, modulus, kappa, bounds } => {
            let (_, e) = prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
            let mut v = json!({ "q": q });
            if bounds {
                v["bounds"] = theomain_bounds(q, e).to_json();
            }
            if kappa.all_kappa || kappa.kappa.is_some() || !bounds {
                let modulus = parse_modulus(&modulus)?;
                let d = singer_datum(q, modulus.as_deref()).map_err(usage)?;
                let mins: Vec<usize> = d.three_orbits().iter().map(|o| o[0]).collect();
                let kappas = if kappa.all_kappa {
                    d.all_kappas()
                } else {
                    vec![parse_orbit_kappa(kappa.kappa.as_deref().unwrap_or("+"), &mins).map_err(usage)?]
                };
                let probe = build_probe(&d).map_err(|e| CliError::Check(e.to_string()))?;
                let certs = kappas
                    .par_iter()
                    .map(|k| exotic_certificate(&probe, k))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Check(e.to_string()))?;
                v["aut_order"] = json!(probe.aut_order.to_string());
                v["certificates"] = serde_json::to_value(certs).expect("json");
            }
            Ok(Outcome::ok(pretty(&v)))
        }
        Cmd::Tables { which, format } => {
            let g = golden(which).map_err(usage)?;
            let text = match format {
                Fmt::Table => g.render().map_err(usage)?,
                Fmt::Json => g.document().map_err(usage)?.to_string_pretty(),
                Fmt::Gap => export_presentation(&g.presentation().map_err(usage)?, Format::Gap),
                Fmt::Magma => export_presentation(&g.presentation().map_err(usage)?, Format::Magma),
            };
            Ok(Outcome::ok(text))
        }
        Cmd::Export { source, format, invariants, order } => {
            let doc = load(&source, lenient)?;
            let t = need_t(&doc)?;
            let ab = invariants.then(|| abelianization(t));
            let ord = order.map(|cap| (cap, todd_coxeter(t, &[], cap)));
            let ord_text = |(cap, e): (usize, Enumeration)| match e {
                Enumeration::Index(n) => n.to_string(),
                Enumeration::Exceeded => format!("unknown (more than {cap} cosets)"),
            };
            let mut out = match format {
                Fmt::Gap => export_presentation(t, Format::Gap),
                Fmt::Magma => export_presentation(t, Format::Magma),
                Fmt::Json => {
                    let mut v: Value = serde_json::from_str(&export_presentation(t, Format::Json)).expect("json");
                    if let Some(ab) = &ab {
                        v["abelianization"] = json!({
                            "torsion": ab.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                            "free_rank": ab.free_rank,
                        });
                    }
                    if let Some((cap, e)) = ord {
                        v["order"] = match e {
                            Enumeration::Index(n) => json!(n),
                            Enumeration::Exceeded => json!({ "exceeded": cap }),
                        };
                    }
                    v["exponent_sums_divisible_by_3"] = json!(exponent_sums_divisible_by_three(t));
                    return Ok(Outcome::ok(format!("{}\n", serde_json::to_string(&v).expect("json"))));
                }
                Fmt::Table => return Err(usage("export formats are gap, magma and json")),
            };
            let c = if format == Fmt::Gap { "#" } else { "//" };
            if let Some(ab) = ab {
                writeln!(out, "{c} abelianization: {ab}").unwrap();
            }
            if let Some(o) = ord {
                writeln!(out, "{c} order: {}", ord_text(o)).unwrap();
            }
            Ok(Outcome::ok(out))
        }
        Cmd::Graph { source, metrics, spectrum, edges, automorphisms } => {
            let graph = if let Some(q) = source.singer {
                LinkGraph::from_f(&singer_datum(q, None).map_err(usage)?.f_set())
            } else if let Some(q) = source.opp {
                opp_datum(q, None).map_err(usage)?.graph()
            } else {
                let doc = load(&Source { from_json: source.from_json, table: source.table }, lenient)?;
                LinkGraph::from_f(&need_f(&doc)?)
            };
            if edges && !(metrics || spectrum || automorphisms) {
                return Ok(Outcome::ok(graph.edge_list()));
            }
            let mut v = json!({ "n": graph.n() });
            if metrics || !(spectrum || edges || automorphisms) {
                v["metrics"] = serde_json::to_value(graph.metrics()).expect("json");
            }
            if spectrum {
                let spec: Vec<String> = graph.laplacian_spectrum().iter().map(|&x| format!("{:.9}", if x.abs() < 1e-12 { 0.0 } else { x })).collect();
                v["spectrum"] = json!(spec);
                v["spectral_gap"] = match graph.spectral_gap() {
                    Ok(g) => json!(format!("{g:.9}")),
                    Err(_) => Value::Null,
                };
                v["zuk"] = json!(graph.zuk_predicate().unwrap_or(false));
            }
            if automorphisms {
                let aut = graph.automorphisms();
                v["automorphism_group_order"] = json!(aut.order().to_string());
            }
            if edges {
                v["edges"] = json!(graph.edge_list().lines().collect::<Vec<_>>());
            }
            Ok(Outcome::ok(pretty(&v)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(Outcome { text, code }) => {
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
    }
}
