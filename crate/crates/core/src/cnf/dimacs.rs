use std::fmt::Write as _;

use super::{Cnf, CnfError, VarMeaning};

const VAR_COMMENT: &str = "c var ";

/// DIMACS CNF text. With `with_comments`, `c var <index> <meaning>` lines
/// ahead of the header record the variable map.
pub fn write_dimacs(cnf: &Cnf, with_comments: bool) -> String {
    let mut out = String::new();
    if with_comments {
        for (var, meaning) in cnf.var_map() {
            writeln!(out, "{VAR_COMMENT}{var} {meaning}").unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.num_clauses()).unwrap();
    for clause in cnf.clauses() {
        for lit in clause {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF. Clauses may span lines; `c var` comments written by
/// [`write_dimacs`] restore the variable map.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let err = |line: usize, message: String| CnfError::Dimacs { line, message };
    let mut cnf: Option<Cnf> = None;
    let mut declared = 0usize;
    let mut meanings = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(VAR_COMMENT) {
            let (idx, meaning) = rest
                .split_once(' ')
                .ok_or_else(|| err(lineno, "malformed var comment".into()))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| err(lineno, format!("bad variable index {idx:?}")))?;
            let meaning: VarMeaning = meaning.parse().map_err(|m| err(lineno, m))?;
            meanings.push((lineno, idx, meaning));
            continue;
        }
        if line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(header) = line.strip_prefix("p ") {
            if cnf.is_some() {
                return Err(err(lineno, "second header".into()));
            }
            let fields: Vec<&str> = header.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(err(
                    lineno,
                    format!("expected \"p cnf <vars> <clauses>\", found {line:?}"),
                ));
            }
            let vars = fields[1]
                .parse()
                .map_err(|_| err(lineno, format!("bad variable count {:?}", fields[1])))?;
            declared = fields[2]
                .parse()
                .map_err(|_| err(lineno, format!("bad clause count {:?}", fields[2])))?;
            cnf = Some(Cnf::new(vars));
            continue;
        }
        let Some(cnf) = cnf.as_mut() else {
            return Err(err(lineno, "clause before the \"p cnf\" header".into()));
        };
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| err(lineno, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                cnf.add_clause(std::mem::take(&mut current))
                    .map_err(|e| err(lineno, e.to_string()))?;
            } else {
                current.push(lit);
            }
        }
    }
    let mut cnf = cnf.ok_or_else(|| err(last_line, "missing \"p cnf\" header".into()))?;
    if !current.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0".into()));
    }
    if cnf.num_clauses() != declared {
        return Err(err(
            last_line,
            format!(
                "header declares {declared} clauses, found {}",
                cnf.num_clauses()
            ),
        ));
    }
    for (lineno, idx, meaning) in meanings {
        if idx == 0 || idx > cnf.num_vars() {
            return Err(err(
                lineno,
                format!(
                    "var comment for variable {idx} outside 1..={}",
                    cnf.num_vars()
                ),
            ));
        }
        cnf.set_meaning(idx, meaning);
    }
    Ok(cnf)
}

/// Sidecar text: one `<index> <meaning>` line per mapped variable.
pub fn write_var_map(cnf: &Cnf) -> String {
    let mut out = String::new();
    for (var, meaning) in cnf.var_map() {
        writeln!(out, "{var} {meaning}").unwrap();
    }
    out
}

pub fn parse_var_map(text: &str) -> Result<Vec<(usize, VarMeaning)>, CnfError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CnfError::VarMap {
            line: i + 1,
            message,
        };
        let (idx, meaning) = line
            .split_once(' ')
            .ok_or_else(|| err(format!("malformed line {line:?}")))?;
        let idx = idx
            .parse()
            .map_err(|_| err(format!("bad variable index {idx:?}")))?;
        out.push((idx, meaning.parse().map_err(err)?));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Satisfiable,
    Unsatisfiable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOutput {
    pub status: SolverStatus,
    /// Signed literals from `v` lines (or bare integer lines), zeros dropped.
    pub literals: Vec<i32>,
}

/// Reads the usual solver output convention: `s SATISFIABLE` /
/// `s UNSATISFIABLE` / `s UNKNOWN`, model literals on `v` lines terminated by
/// 0, `c` comments. Bare `SAT`/`UNSAT` and unprefixed literal lines (as in
/// MiniSat result files) are accepted too.
pub fn parse_solver_output(text: &str) -> Result<SolverOutput, CnfError> {
    let mut status = None;
    let mut literals = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| CnfError::SolverOutput {
            line: i + 1,
            message,
        };
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let body = line.strip_prefix("s ").map(str::trim);
        let word = body.unwrap_or(line);
        let parsed_status = match word {
            "SATISFIABLE" | "SAT" => Some(SolverStatus::Satisfiable),
            "UNSATISFIABLE" | "UNSAT" => Some(SolverStatus::Unsatisfiable),
            "UNKNOWN" | "INDETERMINATE" => Some(SolverStatus::Unknown),
            _ => None,
        };
        if let Some(s) = parsed_status {
            if status.is_some_and(|prev| prev != s) {
                return Err(err("conflicting status lines".into()));
            }
            status = Some(s);
            continue;
        }
        if body.is_some() {
            return Err(err(format!("unrecognised status {line:?}")));
        }
        let values = line.strip_prefix("v ").unwrap_or(line);
        for tok in values.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| err(format!("bad literal {tok:?}")))?;
            if lit != 0 {
                literals.push(lit);
            }
        }
    }
    let status = match status {
        Some(s) => s,
        None if !literals.is_empty() => SolverStatus::Satisfiable,
        None => SolverStatus::Unknown,
    };
    Ok(SolverOutput { status, literals })
}
