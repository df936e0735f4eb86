use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use landokh::homotopy::{reduce_with, ReduceOptions};
use landokh::khovanov::{complex_at_j, j_min_formula};
use landokh::lando::{extreme_kh_via_lando, lando_graph_of};
use landokh::linkdiag::parse_pd;
use landokh::pretzel::{expected_homotopy, grading_metadata, standard_pd, tilde_pd_pq_negr, Family};
use landokh::simplicial::{complex_summary_json, independence_complex};
use landokh::verify::{run_suite, Caps, SUITES};
use landokh::{Error, Graph, HomologyProfile, LinkDiagram, PretzelSpec};

const OK: u8 = 0;
const USAGE: u8 = 1;
const MISMATCH: u8 = 2;
const CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "landokh", version, about = "Extreme Khovanov homology via Lando graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest diagram handled by brute force.
    #[arg(long, default_value_t = landokh::DEFAULT_CROSSING_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    cap_crossings: usize,
    /// Largest graph whose independence complex is enumerated.
    #[arg(long, default_value_t = landokh::DEFAULT_VERTEX_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    cap_vertices: usize,
    /// Accept an empty PD code as the unknot.
    #[arg(long)]
    allow_empty: bool,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps { crossings: self.cap_crossings, vertices: self.cap_vertices }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extreme Khovanov homology of a diagram (PD code, file, or P(p,q,r)).
    Kh {
        input: String,
        /// Use the Reidemeister-deformed diagram of P(p,q,-r).
        #[arg(long)]
        deformed: bool,
        /// Also print the boundary matrices of the extreme complex.
        #[arg(long)]
        matrices: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Lando graph of the all-A state of a diagram.
    Lando {
        input: String,
        #[arg(long)]
        deformed: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Certify the homotopy type of an independence complex.
    Reduce {
        /// Graph file (DOT subset or edge list), or C9 / L6 / K4 / R3.
        graph: String,
        #[arg(long)]
        no_memo: bool,
        #[command(flatten)]
        common: Common,
    },
    /// f-vector and reduced homology of an independence complex.
    Complex {
        graph: String,
        #[command(flatten)]
        common: Common,
    },
    /// Predicted gradings and homotopy type for a pretzel link.
    Pretzel {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a regression suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run newline-delimited jobs (one subcommand per line), in parallel.
    Batch {
        file: String,
        #[command(flatten)]
        common: Common,
    },
}

struct Outcome {
    code: u8,
    text: String,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { code: OK, text }
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let code = match e {
        Error::CapExceeded { .. } => CAP,
        _ => USAGE,
    };
    Outcome { code, text: format!("error: {e}") }
}

fn read_input(input: &str) -> Result<String, Error> {
    if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("{input}: {e}")))
    } else {
        Ok(input.to_string())
    }
}

fn load_diagram(input: &str, deformed: bool, c: &Common) -> Result<(String, LinkDiagram), Error> {
    let text = read_input(input)?;
    let text = text.trim();
    if text.starts_with('P') && text.contains('(') && !text.starts_with("PD") {
        let spec: PretzelSpec = text.parse()?;
        if deformed {
            let (family, canon) = spec.canonical();
            if family != Family::TwoPositive {
                return Err(Error::Unsupported(format!("no deformed diagram for {spec}; only P(p,q,-r)")));
            }
            return Ok((format!("deformed {canon}"), tilde_pd_pq_negr(canon.p, canon.q, canon.r)?));
        }
        return Ok((spec.to_string(), standard_pd(&spec)));
    }
    if deformed {
        return Err(Error::Unsupported("--deformed needs a pretzel spec".into()));
    }
    Ok((text.to_string(), parse_pd(text, c.allow_empty)?))
}

fn load_graph(input: &str) -> Result<Graph, Error> {
    let t = input.trim();
    let mut chars = t.chars();
    if let (Some(kind @ ('C' | 'L' | 'K' | 'R')), Ok(n)) = (chars.next(), chars.as_str().parse::<usize>()) {
        if !Path::new(t).exists() {
            return match kind {
                'C' => Graph::cycle(n),
                'L' => Ok(Graph::path(n)),
                'K' => Ok(Graph::complete(n)),
                _ => Ok(Graph::star_rays(n)),
            };
        }
    }
    Graph::parse(&read_input(t)?)
}

fn profile_table(h: &HomologyProfile, j: Option<i64>) -> String {
    let mut s = String::new();
    if h.is_zero() {
        s.push_str("0\n");
    }
    for e in &h.entries {
        let torsion: Vec<String> = e.torsion.iter().map(|t| format!("Z/{t}")).collect();
        let mut parts = Vec::new();
        if e.betti > 0 {
            parts.push(if e.betti == 1 { "Z".to_string() } else { format!("Z^{}", e.betti) });
        }
        parts.extend(torsion);
        match j {
            Some(j) => writeln!(s, "i={} j={}: {}", e.degree, j, parts.join(" + ")).unwrap(),
            None => writeln!(s, "{}: {}", e.degree, parts.join(" + ")).unwrap(),
        }
    }
    s
}

fn cmd_kh(input: &str, deformed: bool, matrices: bool, c: &Common) -> Result<Outcome, Error> {
    let (name, d) = load_diagram(input, deformed, c)?;
    let j = j_min_formula(&d);
    let lando = extreme_kh_via_lando(&d, c.cap_vertices)?;
    let brute = if d.crossing_count() <= c.cap_crossings {
        let cx = complex_at_j(&d, j, c.cap_crossings)?;
        Some((cx.homology()?, cx))
    } else {
        None
    };
    let agree = brute.as_ref().map(|(h, _)| h == &lando);
    let code = if agree == Some(false) { MISMATCH } else { OK };
    let text = match c.format {
        Format::Table | Format::Dot => {
            let mut s = format!("{name}\ncrossings {} negative {} j_min {j}\n", d.crossing_count(), d.negative_count());
            s.push_str("lando:\n");
            s.push_str(&profile_table(&lando, Some(j)));
            match &brute {
                Some((h, _)) => {
                    s.push_str("brute force:\n");
                    s.push_str(&profile_table(h, Some(j)));
                    s.push_str(if agree == Some(true) { "agree\n" } else { "MISMATCH\n" });
                }
                None => s.push_str("brute force skipped (crossing cap)\n"),
            }
            s.trim_end().to_string()
        }
        Format::Json => {
            let mut v = json!({
                "input": name,
                "crossings": d.crossing_count(),
                "negative": d.negative_count(),
                "j_min": j,
                "lando": lando,
                "bruteforce": brute.as_ref().map(|(h, _)| h),
                "agree": agree,
            });
            if matrices {
                if let Some((_, cx)) = &brute {
                    let m: Vec<Value> = cx.dump().into_iter().map(|(i, t)| json!({"from": i, "matrix": t})).collect();
                    v["matrices"] = Value::Array(m);
                }
            }
            v.to_string()
        }
    };
    Ok(Outcome { code, text })
}

fn cmd_lando(input: &str, deformed: bool, c: &Common) -> Result<Outcome, Error> {
    let (_, d) = load_diagram(input, deformed, c)?;
    let g = lando_graph_of(&d);
    Ok(Outcome::ok(match c.format {
        Format::Dot => g.to_dot().trim_end().to_string(),
        Format::Json => g.to_json(),
        Format::Table => {
            let mut s = String::new();
            for v in 0..g.graph.vertex_count() {
                let nb: Vec<String> = g.graph.neighbors(v).iter().map(|w| w.to_string()).collect();
                writeln!(s, "{v} (crossing {}): {}", g.provenance[v], nb.join(" ")).unwrap();
            }
            s.trim_end().to_string()
        }
    }))
}

fn cmd_reduce(graph: &str, no_memo: bool, c: &Common) -> Result<Outcome, Error> {
    let g = load_graph(graph)?;
    let res = reduce_with(&g, &ReduceOptions { vertex_cap: c.cap_vertices, memoize: !no_memo });
    Ok(Outcome::ok(match c.format {
        Format::Json => res.to_json(),
        Format::Dot => match &res.residual {
            Some(r) => r.to_dot().trim_end().to_string(),
            None => g.to_dot(None).trim_end().to_string(),
        },
        Format::Table => match res.certified() {
            Some(t) => format!("{t}\n{} steps", res.trace.len()),
            None => {
                let mut s = String::from("unresolved\n");
                if let Some(h) = &res.homology_of_residual {
                    s.push_str("residual homology:\n");
                    s.push_str(&profile_table(h, None));
                }
                s.trim_end().to_string()
            }
        },
    }))
}

fn cmd_complex(graph: &str, c: &Common) -> Result<Outcome, Error> {
    let g = load_graph(graph)?;
    let k = independence_complex(&g, c.cap_vertices)?;
    let h = k.reduced_homology();
    Ok(Outcome::ok(match c.format {
        Format::Table => {
            let f: Vec<String> = k.f_vector().iter().map(|x| x.to_string()).collect();
            format!("f-vector {}\n{}", f.join(" "), profile_table(&h, None).trim_end())
        }
        _ => complex_summary_json(&k, &h),
    }))
}

fn cmd_pretzel(spec: &str, c: &Common) -> Result<Outcome, Error> {
    let spec: PretzelSpec = spec.trim().parse()?;
    let meta = grading_metadata(&spec)?;
    let ht = expected_homotopy(&spec)?;
    Ok(Outcome::ok(match c.format {
        Format::Table => format!(
            "{} ({:?})\nc~ {} n~ {} n {} j_min {}\nexpected Z^{} at (i, j) = ({}, {})\nindependence complex {}",
            meta.spec,
            meta.family,
            meta.c_tilde,
            meta.n_tilde,
            meta.n,
            meta.j_min,
            meta.expected_rank,
            meta.expected_i,
            meta.expected_j_underline,
            ht
        ),
        _ => json!({ "grading": meta, "homotopy": ht }).to_string(),
    }))
}

fn cmd_verify(suite: &str, seed: u64, c: &Common) -> Result<Outcome, Error> {
    let report = run_suite(suite, seed, c.caps())?;
    let code = if report.all_pass() { OK } else { MISMATCH };
    let text = match c.format {
        Format::Json => report.to_json(),
        _ => {
            let mut s = String::new();
            for r in &report.rows {
                writeln!(s, "{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail).unwrap();
            }
            write!(s, "{}/{} passed", report.passed(), report.rows.len()).unwrap();
            s
        }
    };
    Ok(Outcome { code, text })
}

fn run(cmd: &Command) -> Outcome {
    let r = match cmd {
        Command::Kh { input, deformed, matrices, common } => cmd_kh(input, *deformed, *matrices, common),
        Command::Lando { input, deformed, common } => cmd_lando(input, *deformed, common),
        Command::Reduce { graph, no_memo, common } => cmd_reduce(graph, *no_memo, common),
        Command::Complex { graph, common } => cmd_complex(graph, common),
        Command::Pretzel { spec, common } => cmd_pretzel(spec, common),
        Command::Verify { suite, seed, common } => cmd_verify(suite, *seed, common),
        Command::Batch { file, common } => cmd_batch(file, common),
    };
    r.unwrap_or_else(|e| error_outcome(&e))
}

fn cmd_batch(file: &str, c: &Common) -> Result<Outcome, Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{file}: {e}")))?;
    let jobs: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let results: Vec<Outcome> = jobs
        .par_iter()
        .map(|line| {
            let mut args = vec!["landokh".to_string()];
            args.extend(line.split_whitespace().map(String::from));
            if !args.iter().any(|a| a == "--format") {
                args.push("--format".into());
                args.push(match c.format {
                    Format::Json => "json",
                    Format::Dot => "dot",
                    Format::Table => "table",
                }
                .into());
            }
            match Cli::try_parse_from(&args) {
                Ok(Cli { command: Command::Batch { .. } }) => {
                    Outcome { code: USAGE, text: "error: nested batch jobs are not allowed".into() }
                }
                Ok(cli) => run(&cli.command),
                Err(e) => Outcome { code: USAGE, text: format!("error: {}", e.to_string().lines().next().unwrap_or("")) },
            }
        })
        .collect();
    let code = results.iter().map(|r| r.code).max().unwrap_or(OK);
    let text = match c.format {
        Format::Json => {
            let rows: Vec<Value> = jobs
                .iter()
                .zip(&results)
                .map(|(job, r)| {
                    let out = serde_json::from_str::<Value>(&r.text).unwrap_or_else(|_| Value::String(r.text.clone()));
                    json!({"job": job, "exit": r.code, "output": out})
                })
                .collect();
            Value::Array(rows).to_string()
        }
        _ => {
            let blocks: Vec<String> = jobs.iter().zip(&results).map(|(j, r)| format!("> {j}\n{}", r.text)).collect();
            blocks.join("\n")
        }
    };
    Ok(Outcome { code, text })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let out = run(&cli.command);
    if !out.text.starts_with("error: ") {
        println!("{}", out.text);
    } else {
        eprintln!("{}", out.text);
    }
    ExitCode::from(out.code)
}
