//! `mcr`: build, certify and audit edge-colored constructions from the
//! command line.
//!
//! Exit status is 0 on success, 2 when the input or a precondition is at
//! fault, and 1 when an internal consistency check fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mcr_core::blowup::{build_perturbed_graph_with_cap, columnless_plane_blowup_with_cap, ColoredGraph};
use mcr_core::colorgraph::{self, analyze, mc_oracle, ComponentReport, EdgeColoredGraph, Graph};
use mcr_core::designs::{kirkman_15, rbibd_coloring_params, AffinePlane, RbibdDesign};
use mcr_core::galois::DEFAULT_ORDER_CAP;
use mcr_core::hypergraph::{build_h3_prime, build_hr_with_cap, Hypergraph, WeightAssignment};
use mcr_core::lp::{self, PfmOutcome};
use mcr_core::rational;
use mcr_core::search::{self, SearchConfig, SymmetryGroup};
use mcr_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "mcr",
    version,
    about = "Exact edge-colored constructions with small monochromatic components"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Standard,
    H3prime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Group {
    Affine,
    Semilinear,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Affine plane AG(2, q) as a resolvable design.
    Plane {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The hypergraph H_r, or the order-3 variant without row 3.
    Hr {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, value_enum, default_value = "standard")]
        variant: Variant,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide whether the top level of a weighted hypergraph is perturbable.
    Perturb {
        #[arg(long)]
        input: PathBuf,
        /// `uniform`, or a file with one rational weight per vertex.
        #[arg(long, default_value = "uniform")]
        weights: String,
        /// Step size as `num/den`; defaults to half the admissible bound.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Perturbed blow-up of H_r on n vertices.
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
        /// Where to write the materialized graph.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Uniform blow-up of the plane of order r with its columns removed.
    Columnless {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Minimum degree and monochromatic components of a graph file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exhaustive mc_r for a small graph.
    Oracle {
        /// Use K_n instead of an input file.
        #[arg(long, conflicts_with = "input")]
        complete: Option<usize>,
        /// Graph file; colors in it are ignored.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = colorgraph::DEFAULT_ORACLE_CAP)]
        cap: u64,
    },
    /// Known bounds on mc_r(K_n).
    Bounds {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Block size of an additional resolvable design to assume.
        #[arg(long, requires = "t")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        t: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify a resolvable design and optionally blow its coloring up to n vertices.
    Rbibd {
        /// Design file; the built-in 15-point Kirkman system when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Where to write the blown-up graph.
        #[arg(long, requires = "n")]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exhaustive search over deletion sets of AG(2, r).
    SearchS {
        #[arg(long)]
        r: usize,
        /// Parallel class to delete; the columns when omitted.
        #[arg(long)]
        class: Option<usize>,
        #[arg(long, value_enum, default_value = "affine")]
        group: Group,
        /// Largest r accepted.
        #[arg(long, default_value_t = search::DEFAULT_MAX_R)]
        cap: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_internal() { 1 } else { 2 },
            msg: e.to_string(),
        }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 1,
            msg: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn audit_text(report: &ComponentReport) -> String {
    let mut out = format!(
        "n = {}\ncolors = {}\ndelta = {}\nmax_component = {}\n",
        report.n, report.r, report.min_degree, report.max_component
    );
    for (c, comps) in report.per_color.iter().enumerate() {
        let orders: Vec<String> = comps.iter().map(usize::to_string).collect();
        out.push_str(&format!("color {c}: {}\n", orders.join(" ")));
    }
    out
}

fn audit_json(report: &ComponentReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn hypergraph_json(h: &Hypergraph) -> Value {
    json!({
        "properties": h.properties(),
        "chromatic": h.chromatic_certificate(),
        "labels": h.labels(),
        "edges": h.edges(),
        "colors": h.colors(),
    })
}

/// Materializes, audits and cross-checks a blow-up, writing the graph if asked.
fn finish_graph(g: &ColoredGraph, output: Option<&Path>, extra: Value, format: Format) -> Result<(), Failure> {
    let explicit = g.materialize();
    let report = analyze(&explicit);
    if report != g.quotient_report() {
        return Err(Error::InvariantViolation("explicit audit disagrees with the quotient".into()).into());
    }
    if let Some(path) = output {
        emit(Some(path), &explicit.to_text())?;
    }
    match format {
        Format::Json => {
            let mut v = audit_json(&report);
            if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
                map.extend(more);
            }
            emit(None, &pretty(&v))
        }
        Format::Text => emit(None, &audit_text(&report)),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Plane { q, cap, format, output } => {
            let plane = AffinePlane::with_cap(q, cap)?;
            let design = plane.to_design();
            let text = match format {
                Format::Text => design.to_text(),
                Format::Json => pretty(&json!({
                    "order": plane.order(),
                    "characteristic": plane.field().characteristic(),
                    "modulus": plane.field().modulus(),
                    "points": plane.num_points(),
                    "lines": plane.lines(),
                    "parallel_classes": plane.parallel_classes(),
                    "verification": plane.verify(),
                })),
            };
            emit(output.as_deref(), &text)
        }
        Command::Hr {
            r,
            variant,
            cap,
            format,
            output,
        } => {
            let h = match variant {
                Variant::Standard => build_hr_with_cap(r, cap)?,
                Variant::H3prime => build_h3_prime(),
            };
            let text = match format {
                Format::Text => h.to_text(),
                Format::Json => pretty(&hypergraph_json(&h)),
            };
            emit(output.as_deref(), &text)
        }
        Command::Perturb {
            input,
            weights,
            eps,
            output,
        } => {
            let h = Hypergraph::parse_text(&read(&input)?)?;
            let w = if weights == "uniform" {
                WeightAssignment::uniform(h.num_vertices())
            } else {
                WeightAssignment::parse_text(&read(Path::new(&weights))?)?
            };
            let eps = eps.as_deref().map(rational::parse).transpose()?;
            let top_edges = h.top_level_edges(&w);
            let top = h.top_level(&w)?;
            let (nu, _) = lp::nu_star(&top)?;
            let (tau, _) = lp::tau_star(&top)?;
            let mut out = json!({
                "num_vertices": h.num_vertices(),
                "top_level_edges": top_edges,
                "nu_star": rational::to_string(&nu),
                "tau_star": rational::to_string(&tau),
            });
            match lp::perfect_fractional_matching(&top)? {
                PfmOutcome::Perfect(m) => {
                    out["outcome"] = json!("perfect_fractional_matching");
                    out["certificate"] = serde_json::to_value(m.certificate()).expect("serializes");
                }
                PfmOutcome::Infeasible(witness) => {
                    let p = lp::Perturbation::from_witness(&witness);
                    p.validate(&top)?;
                    let bound = lp::epsilon_bound(&w, &p);
                    let moved = lp::apply_perturbation(&w, &p, eps)?;
                    out["outcome"] = json!("perturbable");
                    out["certificate"] = serde_json::to_value(p.certificate()).expect("serializes");
                    out["farkas"] = serde_json::to_value(witness.certificate()).expect("serializes");
                    out["epsilon_bound"] = json!(bound.as_ref().map(rational::to_string));
                    out["perturbed_weights"] =
                        json!(moved.weights().iter().map(rational::to_string).collect::<Vec<_>>());
                }
            }
            emit(output.as_deref(), &pretty(&out))
        }
        Command::Construct {
            r,
            c,
            n,
            cap,
            output,
            format,
        } => {
            let g = build_perturbed_graph_with_cap(r, c, n, cap)?;
            let extra = json!({
                "r": r,
                "c": c,
                "class_sizes": g.plan().class_sizes(),
            });
            finish_graph(&g, output.as_deref(), extra, format)
        }
        Command::Columnless {
            r,
            n,
            cap,
            output,
            format,
        } => {
            let g = columnless_plane_blowup_with_cap(r, n, cap)?;
            finish_graph(&g, output.as_deref(), json!({ "r": r }), format)
        }
        Command::Analyze { input, format } => {
            let g = EdgeColoredGraph::parse_text(&read(&input)?)?;
            let report = analyze(&g);
            match format {
                Format::Json => emit(None, &pretty(&audit_json(&report))),
                Format::Text => emit(None, &audit_text(&report)),
            }
        }
        Command::Oracle {
            complete,
            input,
            colors,
            cap,
        } => {
            let graph = match (complete, input) {
                (Some(n), None) => Graph::complete(n),
                (None, Some(path)) => EdgeColoredGraph::parse_text(&read(&path)?)?.uncolored(),
                _ => return Err(input_error("give exactly one of --complete or --input")),
            };
            let value = mc_oracle(&graph, colors, cap)?;
            emit(None, &format!("{value}\n"))
        }
        Command::Bounds { r, n, k, t, format } => {
            let mut designs = vec![kirkman_15().params()];
            if let (Some(k), Some(t)) = (k, t) {
                if k < 2 {
                    return Err(input_error("--k must be at least 2"));
                }
                designs.push(rbibd_coloring_params(k, t));
            }
            let b = colorgraph::known_bounds(r, n, &designs)?;
            let text = match format {
                Format::Json => pretty(&serde_json::to_value(&b).expect("serializes")),
                Format::Text => {
                    let mut s = format!(
                        "lower {}\nupper {}\nbasic_lower {}\n",
                        rational::to_string(&b.lower),
                        rational::to_string(&b.upper),
                        rational::to_string(&b.basic_lower)
                    );
                    if let Some(l) = &b.improved_lower {
                        s.push_str(&format!("improved_lower {}\n", rational::to_string(l)));
                    }
                    if let Some(u) = b.plane_upper {
                        s.push_str(&format!("plane_upper {u}\n"));
                    }
                    if let Some(d) = &b.design_upper {
                        s.push_str(&format!("design_upper {}\n", rational::to_string(&d.upper)));
                    }
                    s
                }
            };
            emit(None, &text)
        }
        Command::Rbibd {
            input,
            n,
            output,
            format,
        } => {
            let design = match &input {
                Some(path) => RbibdDesign::parse_text(&read(path)?)?,
                None => kirkman_15(),
            };
            let report = design.verify();
            let mut out = json!({
                "verification": report,
                "num_classes": design.num_classes(),
                "all_pass": report.all_pass(),
            });
            if report.all_pass() {
                out["params"] = serde_json::to_value(design.params()).expect("serializes");
            }
            if let Some(n) = n {
                let g = colorgraph::design_coloring(&design, n)?;
                let explicit = g.materialize();
                let audit = analyze(&explicit);
                out["complete"] = json!(explicit.is_complete());
                out["audit"] = audit_json(&audit);
                if let Some(path) = output.as_deref() {
                    emit(Some(path), &explicit.to_text())?;
                }
            }
            let text = match format {
                Format::Json => pretty(&out),
                Format::Text => format!("{}\n", report.summary()),
            };
            emit(None, &text)?;
            if !report.all_pass() {
                return Err(input_error("design verification failed"));
            }
            Ok(())
        }
        Command::SearchS {
            r,
            class,
            group,
            cap,
            output,
        } => {
            let config = SearchConfig {
                r,
                deleted_class: class,
                max_r: cap,
                group: match group {
                    Group::Affine => SymmetryGroup::Affine,
                    Group::Semilinear => SymmetryGroup::Semilinear,
                },
            };
            let survey = search::survey(&config)?;
            let mut text = survey.to_json();
            text.push('\n');
            emit(output.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
