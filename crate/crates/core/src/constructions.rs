//! Named Zykov-sum graphs and a small expression language for building them.
//!
//! Every constructed graph remembers its summands as *blocks*, in the order
//! they were added, so encoders can find the `K_4`, the `K̂_4` pair `(a, b)`
//! or the apex `w` without searching.
//!
//! Grammar for [`parse_expression`]:
//!
//! ```text
//! expr := item ("+" item)*
//! item := [int "*"] term
//! term := "K4-e" | "K" int | "C" int
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet, MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("integer out of range at position {position}: {message}")]
    OutOfRange { position: usize, message: String },
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Shape of one Zykov summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    K1,
    K4,
    /// `K_4` without the edge between its first two vertices.
    K4Minus,
    C5,
    /// A complete block whose size is neither 1 nor 4.
    Clique(usize),
    /// A cycle block whose length is not 5.
    Cycle(usize),
}

impl BlockKind {
    pub fn clique(n: usize) -> BlockKind {
        match n {
            1 => BlockKind::K1,
            4 => BlockKind::K4,
            n => BlockKind::Clique(n),
        }
    }

    pub fn cycle(n: usize) -> BlockKind {
        if n == 5 {
            BlockKind::C5
        } else {
            BlockKind::Cycle(n)
        }
    }

    pub fn graph(self) -> Result<Graph, GraphError> {
        match self {
            BlockKind::K1 => Graph::complete(1),
            BlockKind::K4 => Graph::complete(4),
            BlockKind::K4Minus => Ok(Graph::k4_minus_edge()),
            BlockKind::C5 => Graph::cycle(5),
            BlockKind::Clique(n) => Graph::complete(n),
            BlockKind::Cycle(n) => Graph::cycle(n),
        }
    }

    pub fn order(self) -> usize {
        match self {
            BlockKind::K1 => 1,
            BlockKind::K4 | BlockKind::K4Minus => 4,
            BlockKind::C5 => 5,
            BlockKind::Clique(n) | BlockKind::Cycle(n) => n,
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKind::K1 => write!(f, "K1"),
            BlockKind::K4 => write!(f, "K4"),
            BlockKind::K4Minus => write!(f, "K4-e"),
            BlockKind::C5 => write!(f, "C5"),
            BlockKind::Clique(n) => write!(f, "K{n}"),
            BlockKind::Cycle(n) => write!(f, "C{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub vertices: VertexSet,
}

/// A graph together with its decomposition into Zykov summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredGraph {
    pub graph: Graph,
    pub blocks: Vec<Block>,
}

impl StructuredGraph {
    pub fn single(kind: BlockKind) -> Result<StructuredGraph, GraphError> {
        let graph = kind.graph()?;
        let vertices = graph.vertices();
        Ok(StructuredGraph {
            graph,
            blocks: vec![Block { kind, vertices }],
        })
    }

    /// Zykov sum keeping both block lists; `other`'s blocks are shifted.
    pub fn join(&self, other: &StructuredGraph) -> Result<StructuredGraph, GraphError> {
        let shift = self.graph.n();
        let graph = self.graph.zykov_sum(&other.graph)?;
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().map(|b| Block {
            kind: b.kind,
            vertices: b.vertices.iter().map(|v| v + shift).collect(),
        }));
        Ok(StructuredGraph { graph, blocks })
    }

    pub fn blocks_of(&self, kind: BlockKind) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.kind == kind)
    }

    /// Checks that blocks partition the vertices, each block has its
    /// labelled shape, and every cross-block pair is adjacent.
    pub fn check_invariants(&self) -> bool {
        let mut seen = VertexSet::new();
        for b in &self.blocks {
            if b.vertices.intersects(&seen) {
                return false;
            }
            seen = seen.union(&b.vertices);
            let Ok((inner, _)) = self.graph.induced(&b.vertices) else {
                return false;
            };
            if Ok(inner) != b.kind.graph() {
                return false;
            }
            let outside = self.graph.vertices().difference(&b.vertices);
            if b.vertices
                .iter()
                .any(|v| !outside.is_subset(&self.graph.adjacency()[v]))
            {
                return false;
            }
        }
        seen == self.graph.vertices() && self.graph.check_invariants()
    }
}

/// The graphs with names of their own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NamedGraph {
    /// Six `C_5` summands.
    H,
    /// Five `C_5` summands.
    S,
    /// `K_4` plus four `C_5`.
    T,
    /// `K̂_4` plus four `C_5`.
    L,
    /// `K_1` plus `L`.
    Q,
    /// `K_3 + C_5`.
    Graham,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 6] = [
        NamedGraph::H,
        NamedGraph::S,
        NamedGraph::T,
        NamedGraph::L,
        NamedGraph::Q,
        NamedGraph::Graham,
    ];

    pub fn blocks(self) -> Vec<BlockKind> {
        use BlockKind::*;
        match self {
            NamedGraph::H => vec![C5; 6],
            NamedGraph::S => vec![C5; 5],
            NamedGraph::T => vec![K4, C5, C5, C5, C5],
            NamedGraph::L => vec![K4Minus, C5, C5, C5, C5],
            NamedGraph::Q => vec![K1, K4Minus, C5, C5, C5, C5],
            NamedGraph::Graham => vec![Clique(3), C5],
        }
    }

    pub fn build(self) -> StructuredGraph {
        sum_of(&self.blocks()).expect("named graphs are far below the vertex cap")
    }
}

impl FromStr for NamedGraph {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "H" => Ok(NamedGraph::H),
            "S" => Ok(NamedGraph::S),
            "T" => Ok(NamedGraph::T),
            "L" => Ok(NamedGraph::L),
            "Q" => Ok(NamedGraph::Q),
            "GRAHAM" | "Graham" | "graham" => Ok(NamedGraph::Graham),
            other => Err(ConstructionError::UnknownName(other.to_string())),
        }
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NamedGraph::H => "H",
            NamedGraph::S => "S",
            NamedGraph::T => "T",
            NamedGraph::L => "L",
            NamedGraph::Q => "Q",
            NamedGraph::Graham => "GRAHAM",
        };
        f.write_str(s)
    }
}

pub fn build_named(name: &str) -> Result<StructuredGraph, ConstructionError> {
    Ok(name.parse::<NamedGraph>()?.build())
}

/// Left-associated Zykov sum of the given blocks.
pub fn sum_of(kinds: &[BlockKind]) -> Result<StructuredGraph, GraphError> {
    let total: usize = kinds.iter().map(|k| k.order()).sum();
    if total > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(total));
    }
    let mut iter = kinds.iter();
    let Some(&first) = iter.next() else {
        return Ok(StructuredGraph {
            graph: Graph::empty(0)?,
            blocks: Vec::new(),
        });
    };
    let mut acc = StructuredGraph::single(first)?;
    for &k in iter {
        acc = acc.join(&StructuredGraph::single(k)?)?;
    }
    Ok(acc)
}

/// Accepts a graph name (`H`, `GRAHAM`, ...) or a sum expression.
pub fn resolve(input: &str) -> Result<StructuredGraph, ConstructionError> {
    match input.parse::<NamedGraph>() {
        Ok(name) => Ok(name.build()),
        Err(_) => parse_expression(input),
    }
}

pub fn parse_expression(expr: &str) -> Result<StructuredGraph, ConstructionError> {
    let mut p = Parser {
        src: expr.as_bytes(),
        pos: 0,
    };
    let kinds = p.expr()?;
    Ok(sum_of(&kinds)?)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> ConstructionError {
        ConstructionError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Vec<BlockKind>, ConstructionError> {
        let mut kinds = self.item()?;
        while let Some(c) = self.peek() {
            if c != b'+' {
                return Err(self.syntax(format!("expected '+', found {:?}", c as char)));
            }
            self.pos += 1;
            kinds.extend(self.item()?);
        }
        Ok(kinds)
    }

    fn item(&mut self) -> Result<Vec<BlockKind>, ConstructionError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let count = self.int()?;
                if self.peek() != Some(b'*') {
                    return Err(self.syntax("expected '*' after repetition count"));
                }
                self.pos += 1;
                if count == 0 || count > MAX_VERTICES {
                    return Err(ConstructionError::OutOfRange {
                        position: start,
                        message: format!("repetition count {count} must be in 1..={MAX_VERTICES}"),
                    });
                }
                let term = self.term()?;
                Ok(vec![term; count])
            }
            _ => Ok(vec![self.term()?]),
        }
    }

    fn term(&mut self) -> Result<BlockKind, ConstructionError> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return Err(self.syntax("unexpected end of expression")),
        };
        let letter = self.src[self.pos];
        if letter != b'K' && letter != b'C' {
            return Err(self.syntax(format!("expected 'K' or 'C', found {:?}", letter as char)));
        }
        self.pos += 1;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return Err(self.syntax("expected an integer size"));
        }
        let size = self.int()?;
        let out_of_range = |message: String| ConstructionError::OutOfRange {
            position: start,
            message,
        };
        if size > MAX_VERTICES {
            return Err(out_of_range(format!("size {size} exceeds {MAX_VERTICES}")));
        }
        if letter == b'K' {
            if self.src[self.pos..].starts_with(b"-e") {
                if size != 4 {
                    return Err(self.syntax("only K4-e is supported"));
                }
                self.pos += 2;
                return Ok(BlockKind::K4Minus);
            }
            if size == 0 {
                return Err(out_of_range(
                    "complete graph needs at least one vertex".into(),
                ));
            }
            Ok(BlockKind::clique(size))
        } else {
            if size < 3 {
                return Err(out_of_range(format!(
                    "cycle C{size} needs at least three vertices"
                )));
            }
            Ok(BlockKind::cycle(size))
        }
    }

    fn int(&mut self) -> Result<usize, ConstructionError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| ConstructionError::OutOfRange {
            position: start,
            message: format!("integer {digits} is too large"),
        })
    }
}
