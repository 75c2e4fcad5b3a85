pub mod bound;
pub mod check;
pub mod cli;
pub mod cost;
pub mod eval;
pub mod frontend;
pub mod harness;
pub mod lattice;
pub mod normalize;
pub mod syntax;
