//! Propositional encodings of arrowing questions.
//!
//! Variables are 1-based and literals are signed `i32`s, as in DIMACS. Each
//! variable an encoder creates carries a [`VarMeaning`] so that a model can be
//! turned back into a coloring, or a partition plus coloring, and checked
//! combinatorially.

mod decode;
mod dimacs;
mod encode;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use decode::{decode_model, DecodedCertificate};
pub use dimacs::{
    parse_dimacs, parse_solver_output, parse_var_map, write_dimacs, write_var_map, SolverOutput,
    SolverStatus,
};
pub use encode::{
    edge_color_var, encode_apex_lemma, encode_arrowing, encode_arrowing_with, encode_lemma1,
    encode_lemma3, encode_partition_lemma, ArrowingEncodingOptions, Encoding, EncodingKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal {lit} refers to a variable beyond {num_vars}")]
    VarOutOfRange { lit: i32, num_vars: usize },
    #[error("literal 0 inside a clause")]
    ZeroLiteral,
    #[error("variable {0} appears in a clause but has no meaning recorded")]
    UnmappedVar(usize),
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("var-map line {line}: {message}")]
    VarMap { line: usize, message: String },
    #[error("solver output line {line}: {message}")]
    SolverOutput { line: usize, message: String },
    #[error("model assigns {found} variables, expected {expected}")]
    IncompleteModel { expected: usize, found: usize },
    #[error("model leaves clause {0} unsatisfied")]
    UnsatisfiedClause(usize),
    #[error("encoding not applicable: {0}")]
    NotApplicable(String),
    #[error("decoded certificate failed re-validation (encoder bug): {0}")]
    CertificateRejected(String),
}

/// What a variable stands for. Vertices are 0-based; colors and parts 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VarMeaning {
    /// Edge `{u, v}` has (at least) color `color`.
    EdgeColor { u: usize, v: usize, color: u8 },
    /// Vertex belongs to part `part`.
    VertexPart { vertex: usize, part: u8 },
    /// Edge `{u, v}` has color 1 when true and color 2 when false.
    EdgeBinary { u: usize, v: usize },
}

impl fmt::Display for VarMeaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarMeaning::EdgeColor { u, v, color } => write!(f, "edge-color {u} {v} {color}"),
            VarMeaning::VertexPart { vertex, part } => write!(f, "vertex-part {vertex} {part}"),
            VarMeaning::EdgeBinary { u, v } => write!(f, "edge-binary {u} {v}"),
        }
    }
}

impl std::str::FromStr for VarMeaning {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        let num = |i: usize| -> Result<usize, String> {
            fields
                .get(i)
                .ok_or_else(|| format!("missing field {i} in {s:?}"))?
                .parse()
                .map_err(|_| format!("bad integer in {s:?}"))
        };
        let small = |i: usize| -> Result<u8, String> {
            u8::try_from(num(i)?).map_err(|_| format!("color or part out of range in {s:?}"))
        };
        let (meaning, arity) = match fields.first().copied() {
            Some("edge-color") => (
                VarMeaning::EdgeColor {
                    u: num(1)?,
                    v: num(2)?,
                    color: small(3)?,
                },
                4,
            ),
            Some("vertex-part") => (
                VarMeaning::VertexPart {
                    vertex: num(1)?,
                    part: small(2)?,
                },
                3,
            ),
            Some("edge-binary") => (
                VarMeaning::EdgeBinary {
                    u: num(1)?,
                    v: num(2)?,
                },
                3,
            ),
            _ => return Err(format!("unknown variable meaning {s:?}")),
        };
        if fields.len() != arity {
            return Err(format!("trailing fields in {s:?}"));
        }
        Ok(meaning)
    }
}

/// A clause set over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
    var_map: Vec<Option<VarMeaning>>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
            var_map: vec![None; num_vars],
        }
    }

    /// Builds a clause set without meanings, checking every literal.
    pub fn from_clauses(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Cnf, CnfError> {
        let mut cnf = Cnf::new(num_vars);
        for c in clauses {
            cnf.add_clause(c)?;
        }
        Ok(cnf)
    }

    /// Allocates a fresh variable with the given meaning.
    pub fn new_var(&mut self, meaning: VarMeaning) -> i32 {
        self.num_vars += 1;
        self.var_map.push(Some(meaning));
        self.num_vars as i32
    }

    pub fn set_meaning(&mut self, var: usize, meaning: VarMeaning) {
        assert!(
            var >= 1 && var <= self.num_vars,
            "variable {var} out of range"
        );
        self.var_map[var - 1] = Some(meaning);
    }

    pub fn add_clause(&mut self, clause: Vec<i32>) -> Result<(), CnfError> {
        if clause.is_empty() {
            return Err(CnfError::EmptyClause(self.clauses.len()));
        }
        for &lit in &clause {
            if lit == 0 {
                return Err(CnfError::ZeroLiteral);
            }
            if lit.unsigned_abs() as usize > self.num_vars {
                return Err(CnfError::VarOutOfRange {
                    lit,
                    num_vars: self.num_vars,
                });
            }
        }
        self.clauses.push(clause);
        Ok(())
    }

    /// For encoder-built clauses, which are valid by construction.
    pub(crate) fn push(&mut self, clause: Vec<i32>) {
        debug_assert!(!clause.is_empty());
        debug_assert!(clause
            .iter()
            .all(|&l| l != 0 && l.unsigned_abs() as usize <= self.num_vars));
        self.clauses.push(clause);
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn meaning(&self, var: usize) -> Option<VarMeaning> {
        self.var_map.get(var.wrapping_sub(1)).copied().flatten()
    }

    /// `(variable, meaning)` for every mapped variable, ascending.
    pub fn var_map(&self) -> impl Iterator<Item = (usize, VarMeaning)> + '_ {
        self.var_map
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|m| (i + 1, m)))
    }

    /// Checks literal ranges, non-empty clauses, and that every variable used
    /// in a clause has a recorded meaning.
    pub fn validate(&self) -> Result<(), CnfError> {
        for (i, c) in self.clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause(i));
            }
            for &lit in c {
                if lit == 0 {
                    return Err(CnfError::ZeroLiteral);
                }
                let var = lit.unsigned_abs() as usize;
                if var > self.num_vars {
                    return Err(CnfError::VarOutOfRange {
                        lit,
                        num_vars: self.num_vars,
                    });
                }
                if self.var_map[var - 1].is_none() {
                    return Err(CnfError::UnmappedVar(var));
                }
            }
        }
        Ok(())
    }

    /// Indices of clauses whose literals are all assigned and all false.
    pub fn violated_clauses(&self, assignment: &PartialAssignment) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().all(|&l| assignment.lit_value(l) == Some(false)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// A total assignment; index `var - 1` holds the value of `var`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn lit_value(&self, lit: i32) -> bool {
        self.value(lit.unsigned_abs() as usize) == (lit > 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds an assignment from signed literals, as printed on solver `v`
    /// lines. Every variable `1..=num_vars` must appear.
    pub fn from_literals(num_vars: usize, lits: &[i32]) -> Result<Assignment, CnfError> {
        let mut values: Vec<Option<bool>> = vec![None; num_vars];
        for &l in lits {
            let var = l.unsigned_abs() as usize;
            if l == 0 {
                continue;
            }
            if var > num_vars {
                return Err(CnfError::VarOutOfRange { lit: l, num_vars });
            }
            values[var - 1] = Some(l > 0);
        }
        let found = values.iter().filter(|v| v.is_some()).count();
        if found != num_vars {
            return Err(CnfError::IncompleteModel {
                expected: num_vars,
                found,
            });
        }
        Ok(Assignment(values.into_iter().map(|v| v.unwrap()).collect()))
    }

    pub fn to_literals(&self) -> Vec<i32> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { i as i32 + 1 } else { -(i as i32 + 1) })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment(Vec<Option<bool>>);

impl PartialAssignment {
    pub fn new(num_vars: usize) -> PartialAssignment {
        PartialAssignment(vec![None; num_vars])
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.0[var - 1] = Some(value);
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.0.get(var.wrapping_sub(1)).copied().flatten()
    }

    pub fn lit_value(&self, lit: i32) -> Option<bool> {
        self.get(lit.unsigned_abs() as usize)
            .map(|v| v == (lit > 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_clauses() {
        assert_eq!(
            Cnf::from_clauses(2, vec![vec![]]),
            Err(CnfError::EmptyClause(0))
        );
        assert_eq!(
            Cnf::from_clauses(2, vec![vec![1, 0]]),
            Err(CnfError::ZeroLiteral)
        );
        assert_eq!(
            Cnf::from_clauses(2, vec![vec![3]]),
            Err(CnfError::VarOutOfRange {
                lit: 3,
                num_vars: 2
            })
        );
    }

    #[test]
    fn validate_requires_meanings() {
        let mut cnf = Cnf::from_clauses(2, vec![vec![1, -2]]).unwrap();
        assert_eq!(cnf.validate(), Err(CnfError::UnmappedVar(1)));
        cnf.set_meaning(1, VarMeaning::EdgeBinary { u: 0, v: 1 });
        cnf.set_meaning(2, VarMeaning::VertexPart { vertex: 0, part: 1 });
        assert_eq!(cnf.validate(), Ok(()));
    }

    #[test]
    fn meanings_parse_back() {
        for m in [
            VarMeaning::EdgeColor {
                u: 3,
                v: 7,
                color: 2,
            },
            VarMeaning::VertexPart {
                vertex: 11,
                part: 3,
            },
            VarMeaning::EdgeBinary { u: 0, v: 20 },
        ] {
            assert_eq!(m.to_string().parse::<VarMeaning>(), Ok(m));
        }
        assert!("edge-color 1 2".parse::<VarMeaning>().is_err());
        assert!("edge-binary 1 2 3".parse::<VarMeaning>().is_err());
        assert!("colour 1".parse::<VarMeaning>().is_err());
    }

    #[test]
    fn partial_assignment_violations() {
        let cnf = Cnf::from_clauses(3, vec![vec![1, 2], vec![-1], vec![3]]).unwrap();
        let mut pa = PartialAssignment::new(3);
        pa.set(1, true);
        assert_eq!(cnf.violated_clauses(&pa), vec![1]);
        pa.set(2, false);
        pa.set(1, false);
        assert_eq!(cnf.violated_clauses(&pa), vec![0]);
    }

    #[test]
    fn assignment_from_literals() {
        let a = Assignment::from_literals(3, &[1, -2, 3, 0]).unwrap();
        assert_eq!(a.0, vec![true, false, true]);
        assert_eq!(a.to_literals(), vec![1, -2, 3]);
        assert_eq!(
            Assignment::from_literals(3, &[1, -2]),
            Err(CnfError::IncompleteModel {
                expected: 3,
                found: 2
            })
        );
        assert!(Assignment::from_literals(2, &[1, 2, 3]).is_err());
    }
}
