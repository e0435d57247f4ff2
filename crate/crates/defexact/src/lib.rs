//! Workbench for finite deflation-exact categories modeled as quiver
//! representations over a prime field: axiom checking at a size bound,
//! localization at a percolating subcategory via a calculus of right
//! fractions, and Grothendieck groups.

pub mod exactla;
pub mod quiverrep;
pub mod confcat;
pub mod specio;
pub mod axioms;
pub mod localize;
pub mod k0;
pub mod cli;

/// CLI entry point.
pub fn run() -> i32 {
    cli::run()
}
