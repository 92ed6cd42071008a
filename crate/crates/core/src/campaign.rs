//! Named end-to-end verification runs.
//!
//! The desk-scale campaigns (`r33`, `graham`, `r333-lower`,
//! `folkman-13-clique`) run entirely in-process. The full-scale ones
//! (`lemma1`, `lemma3`, `theorem`) write DIMACS files and, when an external
//! solver is configured, run it: UNSAT is a pass, a model is decoded,
//! re-validated and reported as a counterexample, anything else is
//! inconclusive.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::arrowing::{
    arrows, check_coloring, folkman_witness_check, parse_certificate, write_certificate,
    ArrowingError, ArrowingProblem, ArrowsVerdict, Budget, Method, WitnessVerdict,
};
use crate::cnf::{
    decode_model, encode_arrowing, encode_lemma1, encode_lemma3, parse_solver_output, write_dimacs,
    write_var_map, Assignment, CnfError, DecodedCertificate, Encoding, SolverStatus,
};
use crate::constructions::NamedGraph;
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("unknown campaign {0:?}")]
    UnknownCampaign(String),
    #[error("external solver command is empty")]
    EmptySolverCommand,
    #[error("failed to launch external solver {command:?}: {source}")]
    SolverLaunch {
        command: String,
        source: std::io::Error,
    },
    #[error("external solver returned an unusable model: {0}")]
    BadSolverModel(CnfError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Arrowing(#[from] ArrowingError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Campaign {
    R33,
    Graham,
    R333Lower,
    Folkman13Clique,
    Lemma1,
    Lemma3,
    Theorem,
}

impl Campaign {
    pub const ALL: [Campaign; 7] = [
        Campaign::R33,
        Campaign::Graham,
        Campaign::R333Lower,
        Campaign::Folkman13Clique,
        Campaign::Lemma1,
        Campaign::Lemma3,
        Campaign::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::R33 => "r33",
            Campaign::Graham => "graham",
            Campaign::R333Lower => "r333-lower",
            Campaign::Folkman13Clique => "folkman-13-clique",
            Campaign::Lemma1 => "lemma1",
            Campaign::Lemma3 => "lemma3",
            Campaign::Theorem => "theorem",
        }
    }

    /// Bumped whenever a campaign's procedure changes.
    pub fn version(self) -> u32 {
        1
    }
}

impl FromStr for Campaign {
    type Err = CampaignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Campaign::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CampaignError::UnknownCampaign(s.to_string()))
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CampaignStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CampaignStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CampaignStatus::Pass => "PASS",
            CampaignStatus::Fail => "FAIL",
            CampaignStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One sub-check inside a campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CampaignStatus,
    pub detail: String,
}

/// What an external solver did, kept so a pass can be audited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverTrace {
    pub command: Vec<String>,
    pub exit_code: Option<i32>,
    pub status_line: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub campaign: Campaign,
    pub version: u32,
    pub status: CampaignStatus,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
    pub solver: Option<SolverTrace>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct CampaignOptions {
    pub budget: Budget,
    /// Whitespace-separated command line; the CNF path is appended.
    pub external_solver: Option<String>,
    pub out_dir: PathBuf,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            budget: Budget::UNLIMITED,
            external_solver: None,
            out_dir: PathBuf::from("."),
        }
    }
}

pub fn run_campaign(
    campaign: Campaign,
    opts: &CampaignOptions,
) -> Result<CampaignReport, CampaignError> {
    let start = Instant::now();
    let mut files = Vec::new();
    let mut solver = None;
    let checks = match campaign {
        Campaign::R33 => r33(opts, &mut files)?,
        Campaign::Graham => graham(opts)?,
        Campaign::R333Lower => r333_lower(opts, &mut files)?,
        Campaign::Folkman13Clique => folkman_13_clique(),
        Campaign::Lemma1 => {
            let check = run_unsat_check(
                "lemma1",
                &encode_lemma1(),
                "lemma1",
                opts,
                &mut files,
                &mut solver,
            )?;
            vec![check]
        }
        Campaign::Lemma3 => {
            let check = run_unsat_check(
                "lemma3",
                &encode_lemma3(),
                "lemma3",
                opts,
                &mut files,
                &mut solver,
            )?;
            vec![check]
        }
        Campaign::Theorem => {
            let h = NamedGraph::H.build().graph;
            let p = ArrowingProblem::new(h, vec![3, 3, 3])?;
            let check = run_unsat_check(
                "H arrows (3,3,3)",
                &encode_arrowing(&p),
                "h",
                opts,
                &mut files,
                &mut solver,
            )?;
            let clique = clique_check("cl(H) < 13", &NamedGraph::H.build().graph, 12, 13);
            vec![clique, check]
        }
    };
    Ok(CampaignReport {
        campaign,
        version: campaign.version(),
        status: combine(&checks),
        checks,
        files,
        solver,
        elapsed: start.elapsed(),
    })
}

/// Any failure fails the campaign; otherwise any inconclusive check makes it
/// inconclusive.
fn combine(checks: &[Check]) -> CampaignStatus {
    if checks.iter().any(|c| c.status == CampaignStatus::Fail) {
        CampaignStatus::Fail
    } else if checks
        .iter()
        .any(|c| c.status == CampaignStatus::Inconclusive)
    {
        CampaignStatus::Inconclusive
    } else {
        CampaignStatus::Pass
    }
}

fn check(name: &str, status: CampaignStatus, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        status,
        detail: detail.into(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CampaignError> {
    std::fs::write(path, contents).map_err(|source| CampaignError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String, CampaignError> {
    std::fs::read_to_string(path).map_err(|source| CampaignError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn expect_arrows(
    name: &str,
    p: &ArrowingProblem,
    method: Method,
    budget: Budget,
) -> Result<Check, CampaignError> {
    let report = arrows(p, method, budget)?;
    let detail = format!(
        "method={:?} elapsed={:?}",
        report.method, report.stats.elapsed
    );
    Ok(match report.verdict {
        ArrowsVerdict::Arrows => check(name, CampaignStatus::Pass, format!("ARROWS {detail}")),
        ArrowsVerdict::NotArrows(_) => {
            check(name, CampaignStatus::Fail, format!("NOT-ARROWS {detail}"))
        }
        ArrowsVerdict::Unknown(why) => check(
            name,
            CampaignStatus::Inconclusive,
            format!("UNKNOWN ({why}) {detail}"),
        ),
    })
}

/// Expects a good coloring; writes it to `cert_path`, reads it back and
/// re-validates it.
fn expect_good_coloring(
    name: &str,
    p: &ArrowingProblem,
    method: Method,
    budget: Budget,
    cert_path: &Path,
    files: &mut Vec<PathBuf>,
) -> Result<Check, CampaignError> {
    let report = arrows(p, method, budget)?;
    Ok(match report.verdict {
        ArrowsVerdict::NotArrows(c) => {
            write_file(cert_path, &write_certificate(p.graph(), &c))?;
            files.push(cert_path.to_path_buf());
            let reread = parse_certificate(p.graph(), &read_file(cert_path)?)?;
            match check_coloring(p, &reread)? {
                None => check(
                    name,
                    CampaignStatus::Pass,
                    format!(
                        "NOT-ARROWS certificate {} re-validated, elapsed={:?}",
                        cert_path.display(),
                        report.stats.elapsed
                    ),
                ),
                Some(w) => check(
                    name,
                    CampaignStatus::Fail,
                    format!("certificate has color {} clique {}", w.color, w.vertices),
                ),
            }
        }
        ArrowsVerdict::Arrows => check(
            name,
            CampaignStatus::Fail,
            "ARROWS, expected a good coloring",
        ),
        ArrowsVerdict::Unknown(why) => check(
            name,
            CampaignStatus::Inconclusive,
            format!("UNKNOWN ({why})"),
        ),
    })
}

fn clique_check(name: &str, g: &Graph, expected: usize, q: usize) -> Check {
    let cl = g.clique_number();
    let status = if cl == expected && cl < q {
        CampaignStatus::Pass
    } else {
        CampaignStatus::Fail
    };
    check(
        name,
        status,
        format!("clique number {cl} (expected {expected}, bound {q})"),
    )
}

fn r33(opts: &CampaignOptions, files: &mut Vec<PathBuf>) -> Result<Vec<Check>, CampaignError> {
    let k6 = ArrowingProblem::new(Graph::complete(6)?, vec![3, 3])?;
    let k5 = ArrowingProblem::new(Graph::complete(5)?, vec![3, 3])?;
    Ok(vec![
        expect_arrows("K6 arrows (3,3)", &k6, Method::Auto, opts.budget)?,
        expect_good_coloring(
            "K5 does not arrow (3,3)",
            &k5,
            Method::Auto,
            opts.budget,
            &opts.out_dir.join("k5.coloring"),
            files,
        )?,
    ])
}

fn graham(opts: &CampaignOptions) -> Result<Vec<Check>, CampaignError> {
    let g = NamedGraph::Graham.build().graph;
    let p = ArrowingProblem::new(g.clone(), vec![3, 3])?;
    let mut checks = vec![
        expect_arrows(
            "K3+C5 arrows (3,3) [search]",
            &p,
            Method::Search,
            opts.budget,
        )?,
        expect_arrows("K3+C5 arrows (3,3) [sat]", &p, Method::Sat, opts.budget)?,
        clique_check("cl(K3+C5) < 6", &g, 5, 6),
    ];
    let w = folkman_witness_check(&g, &[3, 3], 6, Method::Auto, opts.budget)?;
    let status = match w.verdict {
        WitnessVerdict::Holds => CampaignStatus::Pass,
        WitnessVerdict::Fails => CampaignStatus::Fail,
        WitnessVerdict::Inconclusive => CampaignStatus::Inconclusive,
    };
    checks.push(check(
        "F_e(3,3;6) <= 8 witness",
        status,
        format!("{:?}", w.verdict),
    ));
    Ok(checks)
}

fn r333_lower(
    opts: &CampaignOptions,
    files: &mut Vec<PathBuf>,
) -> Result<Vec<Check>, CampaignError> {
    let k16 = ArrowingProblem::new(Graph::complete(16)?, vec![3, 3, 3])?;
    Ok(vec![expect_good_coloring(
        "K16 does not arrow (3,3,3)",
        &k16,
        Method::Sat,
        opts.budget,
        &opts.out_dir.join("k16.coloring"),
        files,
    )?])
}

fn folkman_13_clique() -> Vec<Check> {
    vec![clique_check(
        "cl(H) < 13",
        &NamedGraph::H.build().graph,
        12,
        13,
    )]
}

/// Writes `<stem>.cnf` and `<stem>.map`, then hands the CNF to the external
/// solver if one is configured. The statement holds iff the CNF is UNSAT.
pub fn run_unsat_check(
    name: &str,
    enc: &Encoding,
    stem: &str,
    opts: &CampaignOptions,
    files: &mut Vec<PathBuf>,
    trace: &mut Option<SolverTrace>,
) -> Result<Check, CampaignError> {
    let cnf_path = opts.out_dir.join(format!("{stem}.cnf"));
    let map_path = opts.out_dir.join(format!("{stem}.map"));
    write_file(&cnf_path, &write_dimacs(&enc.cnf, true))?;
    write_file(&map_path, &write_var_map(&enc.cnf))?;
    files.push(cnf_path.clone());
    files.push(map_path);
    let header = format!("p cnf {} {}", enc.cnf.num_vars(), enc.cnf.num_clauses());

    let Some(command) = opts.external_solver.as_deref() else {
        return Ok(check(
            name,
            CampaignStatus::Inconclusive,
            format!(
                "{header} written to {}; no external solver configured",
                cnf_path.display()
            ),
        ));
    };
    let run = run_external_solver(command, &cnf_path, opts.budget.time)?;
    *trace = Some(run.trace.clone());
    Ok(match run.status {
        SolverStatus::Unsatisfiable => check(
            name,
            CampaignStatus::Pass,
            format!("{header}: UNSAT ({})", run.trace.status_line),
        ),
        SolverStatus::Unknown => check(
            name,
            CampaignStatus::Inconclusive,
            format!(
                "{header}: solver gave no verdict ({})",
                run.trace.status_line
            ),
        ),
        SolverStatus::Satisfiable => {
            let model = Assignment::from_literals(enc.cnf.num_vars(), &run.literals)
                .map_err(CampaignError::BadSolverModel)?;
            let cert = decode_model(enc, &model).map_err(CampaignError::BadSolverModel)?;
            let written = write_counterexample(&opts.out_dir, stem, &enc.graph, &cert)?;
            let detail = format!(
                "{header}: SATISFIABLE; decoded counterexample re-validated and written to {}",
                written
                    .iter()
                    .map(|p| p.display().to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            files.extend(written);
            check(name, CampaignStatus::Fail, detail)
        }
    })
}

fn write_counterexample(
    dir: &Path,
    stem: &str,
    g: &Graph,
    cert: &DecodedCertificate,
) -> Result<Vec<PathBuf>, CampaignError> {
    let coloring_path = dir.join(format!("{stem}.counterexample.coloring"));
    match cert {
        DecodedCertificate::Coloring(c) => {
            write_file(&coloring_path, &write_certificate(g, c))?;
            Ok(vec![coloring_path])
        }
        DecodedCertificate::PartitionAndColoring {
            partition,
            coloring,
        } => {
            let partition_path = dir.join(format!("{stem}.counterexample.partition"));
            let text: String = partition
                .iter()
                .enumerate()
                .map(|(v, p)| format!("{v} {p}\n"))
                .collect();
            write_file(&partition_path, &text)?;
            write_file(&coloring_path, &write_certificate(g, coloring))?;
            Ok(vec![partition_path, coloring_path])
        }
    }
}

pub struct ExternalRun {
    pub status: SolverStatus,
    pub literals: Vec<i32>,
    pub trace: SolverTrace,
}

/// Runs `command <cnf_path>` and parses its standard output.
///
/// The time limit is not enforced here; solvers take their own limit flags.
pub fn run_external_solver(
    command: &str,
    cnf_path: &Path,
    _time_hint: Option<Duration>,
) -> Result<ExternalRun, CampaignError> {
    let mut argv: Vec<String> = command.split_whitespace().map(str::to_string).collect();
    if argv.is_empty() {
        return Err(CampaignError::EmptySolverCommand);
    }
    argv.push(cnf_path.display().to_string());
    let start = Instant::now();
    let output = Command::new(&argv[0])
        .args(&argv[1..])
        .output()
        .map_err(|source| CampaignError::SolverLaunch {
            command: argv.join(" "),
            source,
        })?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    let parsed = parse_solver_output(&stdout).map_err(CampaignError::BadSolverModel)?;
    let status_line = stdout
        .lines()
        .find(|l| l.starts_with("s "))
        .map(str::to_string)
        .unwrap_or_else(|| format!("exit status {:?}, no status line", output.status.code()));
    Ok(ExternalRun {
        status: parsed.status,
        literals: parsed.literals,
        trace: SolverTrace {
            command: argv,
            exit_code: output.status.code(),
            status_line,
            elapsed: start.elapsed(),
        },
    })
}
