//! Edge-arrowing checks for small graphs.
//!
//! [`graph`] and [`constructions`] build the graphs, [`arrowing`] decides
//! `G ->e (a1, ..., ar)` by search or SAT, [`cnf`] and [`sat`] hold the
//! encoders and the built-in solver, and [`campaign`] strings them together
//! into named end-to-end checks.

pub mod arrowing;
pub mod campaign;
pub mod cnf;
pub mod constructions;
pub mod graph;
pub mod sat;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/arrowing.md")]
    mod arrowing {}
    #[doc = include_str!("../../../book/src/encodings.md")]
    mod encodings {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/campaigns.md")]
    mod campaigns {}
}
