//! `folkman` command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success: ARROWS, GOOD certificate, campaign PASS, encoding written |
//! | 2    | usage, parse, I/O or solver-launch error |
//! | 10   | `arrows`: NOT-ARROWS; `solve`: SATISFIABLE |
//! | 20   | `arrows`: UNKNOWN; `verify`: INCONCLUSIVE; `solve`: UNSATISFIABLE |
//! | 30   | `check-certificate`: the coloring has a monochromatic target clique |
//! | 40   | `verify`: FAIL |

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use folkman::arrowing::{
    arrows, check_coloring, parse_certificate, write_certificate, ArrowingProblem, ArrowsVerdict,
    Budget, Method,
};
use folkman::campaign::{run_campaign, Campaign, CampaignOptions, CampaignStatus};
use folkman::cnf::{
    encode_arrowing, encode_lemma1, encode_lemma3, parse_dimacs, write_dimacs, write_var_map,
};
use folkman::constructions::{resolve, StructuredGraph};
use folkman::graph::write_edge_list;
use folkman::sat::{solve, Limits, SolverResult};

use report::{GraphStats, RunReport};

const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "folkman",
    version,
    about = "Edge-arrowing and Folkman-number verification toolkit"
)]
struct Cli {
    /// Append the run report as a JSON line to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a named graph (H, S, T, L, Q, Graham) or a Zykov-sum expression.
    Graph {
        expr: String,
        /// Also compute the clique number and list the blocks.
        #[arg(long)]
        stats: bool,
        /// Write the graph in edge-list format.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Decide G ->e (a1,...,ar).
    Arrows {
        expr: String,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<usize>,
        #[arg(long, default_value = "auto")]
        method: Method,
        /// Time ("1s", "500ms", "10m") or a node/conflict count.
        #[arg(long, value_parser = parse_budget)]
        budget: Option<Budget>,
        /// Where to write the good coloring on NOT-ARROWS.
        #[arg(long, value_name = "PATH")]
        cert_out: Option<PathBuf>,
    },
    /// Emit a DIMACS encoding and its variable map.
    Encode {
        target: EncodeTarget,
        /// Graph for the arrowing encoding; not accepted by the lemma encoders.
        expr: Option<String>,
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<usize>>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// Defaults to the output path with a `.map` extension.
        #[arg(long, value_name = "PATH")]
        map: Option<PathBuf>,
    },
    /// Validate a coloring file against a graph and targets.
    CheckCertificate {
        expr: String,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<usize>,
        #[arg(long, value_name = "PATH")]
        coloring: PathBuf,
    },
    /// Run a named verification campaign.
    Verify {
        campaign: String,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<Budget>,
        /// Solver command line; the CNF path is appended as the last argument.
        #[arg(long, env = "FOLKMAN_SOLVER", value_name = "CMDLINE")]
        external_solver: Option<String>,
        /// Directory for emitted encodings and certificates.
        #[arg(long, default_value = ".", value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Solve a DIMACS file with the built-in solver (competition output format).
    Solve {
        cnf: PathBuf,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<Budget>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeTarget {
    Arrowing,
    Lemma1,
    Lemma3,
}

/// A duration such as `1s` bounds time; a bare integer bounds search nodes
/// and solver conflicts.
fn parse_budget(s: &str) -> Result<Budget, String> {
    if let Ok(count) = s.parse::<u64>() {
        return Ok(Budget {
            nodes: Some(count),
            conflicts: Some(count),
            time: None,
        });
    }
    humantime::parse_duration(s)
        .map(Budget::time)
        .map_err(|e| format!("invalid budget {s:?}: {e} (use e.g. 1s, 500ms, 10m or a count)"))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli, args: Vec<String>) -> Result<u8> {
    if let Cmd::Solve { cnf, budget } = &cli.command {
        return cmd_solve(cnf, *budget);
    }
    let (report, code) = match cli.command {
        Cmd::Graph {
            expr,
            stats,
            export,
        } => cmd_graph(args, &expr, stats, export.as_deref())?,
        Cmd::Arrows {
            expr,
            targets,
            method,
            budget,
            cert_out,
        } => cmd_arrows(args, &expr, targets, method, budget, cert_out.as_deref())?,
        Cmd::Encode {
            target,
            expr,
            targets,
            out,
            map,
        } => cmd_encode(args, target, expr, targets, &out, map)?,
        Cmd::CheckCertificate {
            expr,
            targets,
            coloring,
        } => cmd_check_certificate(args, &expr, targets, &coloring)?,
        Cmd::Verify {
            campaign,
            budget,
            external_solver,
            out_dir,
        } => cmd_verify(args, &campaign, budget, external_solver, out_dir)?,
        Cmd::Solve { .. } => unreachable!(),
    };
    print!("{}", report.to_text());
    if let Some(path) = &cli.report {
        report.append_json(path)?;
    }
    Ok(code)
}

fn load(expr: &str) -> Result<StructuredGraph> {
    resolve(expr).with_context(|| format!("cannot build graph from {expr:?}"))
}

fn budget_text(b: Option<Budget>) -> String {
    match b {
        None => "unlimited".into(),
        Some(Budget { time: Some(t), .. }) => humantime::format_duration(t).to_string(),
        Some(Budget { nodes, .. }) => nodes.map_or("unlimited".into(), |n| n.to_string()),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_graph(
    args: Vec<String>,
    expr: &str,
    stats: bool,
    export: Option<&Path>,
) -> Result<(RunReport, u8)> {
    let sg = load(expr)?;
    let g = &sg.graph;
    let mut r = RunReport::new(args, "OK");
    r.graph = Some(GraphStats {
        n: g.n(),
        m: g.m(),
        clique_number: stats.then(|| g.clique_number()),
    });
    if stats {
        let blocks: Vec<String> = sg.blocks.iter().map(|b| b.kind.to_string()).collect();
        r.stat("blocks", blocks.join("+"));
    }
    if let Some(path) = export {
        write(path, &write_edge_list(g))?;
        r.stat("export", path.display());
    }
    Ok((r, 0))
}

fn cmd_arrows(
    args: Vec<String>,
    expr: &str,
    targets: Vec<usize>,
    method: Method,
    budget: Option<Budget>,
    cert_out: Option<&Path>,
) -> Result<(RunReport, u8)> {
    let sg = load(expr)?;
    let p = ArrowingProblem::new(sg.graph, targets)?;
    let out = arrows(&p, method, budget.unwrap_or(Budget::UNLIMITED))?;
    let g = p.graph();
    let (verdict, code) = match &out.verdict {
        ArrowsVerdict::Arrows => ("ARROWS", 0),
        ArrowsVerdict::NotArrows(_) => ("NOT-ARROWS", 10),
        ArrowsVerdict::Unknown(_) => ("UNKNOWN", 20),
    };
    let mut r = RunReport::new(args, verdict);
    r.graph = Some(GraphStats {
        n: g.n(),
        m: g.m(),
        clique_number: Some(g.clique_number()),
    });
    r.flag("targets", format!("{:?}", p.targets()))
        .flag("method", format!("{method:?}"))
        .flag("budget", budget_text(budget));
    r.stat("method_used", format!("{:?}", out.method));
    match &out.verdict {
        ArrowsVerdict::NotArrows(c) => match cert_out {
            Some(path) => {
                write(path, &write_certificate(g, c))?;
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("re-reading {}", path.display()))?;
                let reread = parse_certificate(g, &text)?;
                if let Some(w) = check_coloring(&p, &reread)? {
                    bail!(
                        "certificate {} failed re-validation: color {} clique {}",
                        path.display(),
                        w.color,
                        w.vertices
                    );
                }
                r.certificate = Some(path.to_path_buf());
            }
            None => {
                let inline: Vec<String> = g
                    .edges()
                    .iter()
                    .zip(c.colors())
                    .map(|((u, v), c)| format!("{u}-{v}:{c}"))
                    .collect();
                r.stat("coloring", inline.join(" "));
            }
        },
        ArrowsVerdict::Unknown(why) => {
            r.stat("reason", why);
        }
        ArrowsVerdict::Arrows => {}
    }
    if let Some(n) = out.stats.nodes {
        r.stat("nodes", n);
    }
    if let Some(c) = out.stats.conflicts {
        r.stat("conflicts", c);
    }
    r.stat("elapsed_ms", out.stats.elapsed.as_millis());
    Ok((r, code))
}

fn cmd_encode(
    args: Vec<String>,
    target: EncodeTarget,
    expr: Option<String>,
    targets: Option<Vec<usize>>,
    out: &Path,
    map: Option<PathBuf>,
) -> Result<(RunReport, u8)> {
    let enc = match target {
        EncodeTarget::Arrowing => {
            let (Some(expr), Some(targets)) = (expr, targets) else {
                bail!("encode arrowing needs a graph expression and --targets");
            };
            encode_arrowing(&ArrowingProblem::new(load(&expr)?.graph, targets)?)
        }
        EncodeTarget::Lemma1 | EncodeTarget::Lemma3 => {
            if expr.is_some() || targets.is_some() {
                bail!("lemma encoders take no graph expression or --targets");
            }
            if matches!(target, EncodeTarget::Lemma1) {
                encode_lemma1()
            } else {
                encode_lemma3()
            }
        }
    };
    let map = map.unwrap_or_else(|| out.with_extension("map"));
    write(out, &write_dimacs(&enc.cnf, true))?;
    write(&map, &write_var_map(&enc.cnf))?;
    let mut r = RunReport::new(args, "WRITTEN");
    r.graph = Some(GraphStats {
        n: enc.graph.n(),
        m: enc.graph.m(),
        clique_number: None,
    });
    r.stat(
        "header",
        format!("p cnf {} {}", enc.cnf.num_vars(), enc.cnf.num_clauses()),
    )
    .stat("vars", enc.cnf.num_vars())
    .stat("clauses", enc.cnf.num_clauses())
    .stat("cnf", out.display())
    .stat("map", map.display());
    Ok((r, 0))
}

fn cmd_check_certificate(
    args: Vec<String>,
    expr: &str,
    targets: Vec<usize>,
    coloring: &Path,
) -> Result<(RunReport, u8)> {
    let p = ArrowingProblem::new(load(expr)?.graph, targets)?;
    let text = std::fs::read_to_string(coloring)
        .with_context(|| format!("reading {}", coloring.display()))?;
    let c = parse_certificate(p.graph(), &text)
        .with_context(|| format!("malformed certificate {}", coloring.display()))?;
    let g = p.graph();
    let witness = check_coloring(&p, &c)?;
    let mut r = RunReport::new(args, if witness.is_some() { "WITNESS" } else { "GOOD" });
    r.graph = Some(GraphStats {
        n: g.n(),
        m: g.m(),
        clique_number: None,
    });
    r.flag("targets", format!("{:?}", p.targets()));
    r.certificate = Some(coloring.to_path_buf());
    Ok(match witness {
        None => (r, 0),
        Some(w) => {
            r.stat("witness_color", w.color)
                .stat("witness_clique", w.vertices);
            (r, 30)
        }
    })
}

fn cmd_verify(
    args: Vec<String>,
    campaign: &str,
    budget: Option<Budget>,
    external_solver: Option<String>,
    out_dir: PathBuf,
) -> Result<(RunReport, u8)> {
    let campaign: Campaign = campaign.parse()?;
    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let opts = CampaignOptions {
        budget: budget.unwrap_or(Budget::UNLIMITED),
        external_solver: external_solver.filter(|s| !s.trim().is_empty()),
        out_dir,
    };
    let out = run_campaign(campaign, &opts)?;
    let code = match out.status {
        CampaignStatus::Pass => 0,
        CampaignStatus::Inconclusive => 20,
        CampaignStatus::Fail => 40,
    };
    let mut r = RunReport::new(args, out.status.to_string());
    r.flag("campaign", format!("{} v{}", campaign, out.version))
        .flag("budget", budget_text(budget))
        .flag(
            "external_solver",
            opts.external_solver.as_deref().unwrap_or("none"),
        )
        .flag("out_dir", opts.out_dir.display());
    for (i, c) in out.checks.iter().enumerate() {
        r.stat(
            &format!("check.{}", i + 1),
            format!("{} {}: {}", c.status, c.name, c.detail),
        );
    }
    for f in &out.files {
        r.stat("file", f.display());
    }
    if let Some(t) = &out.solver {
        r.stat("solver.command", t.command.join(" "))
            .stat(
                "solver.exit_code",
                t.exit_code.map_or("none".into(), |c| c.to_string()),
            )
            .stat("solver.status", &t.status_line)
            .stat("solver.elapsed_ms", t.elapsed.as_millis());
    }
    if out.status == CampaignStatus::Fail {
        eprintln!(
            "FAIL: campaign {campaign} found a counterexample or a wrong result; see the report"
        );
    }
    r.stat("elapsed_ms", out.elapsed.as_millis());
    Ok((r, code))
}

fn cmd_solve(path: &Path, budget: Option<Budget>) -> Result<u8> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cnf = parse_dimacs(&text)?;
    let b = budget.unwrap_or(Budget::UNLIMITED);
    let out = solve(
        &cnf,
        Limits {
            time: b.time,
            conflicts: b.conflicts,
        },
    )?;
    println!(
        "c conflicts {} elapsed {:?}",
        out.stats.conflicts, out.elapsed
    );
    print!("{}", out.to_competition_output());
    Ok(match out.result {
        SolverResult::Sat(_) => 10,
        SolverResult::Unsat => 20,
        SolverResult::Timeout { .. } => 0,
    })
}
