//! Library surface of the command-line front end: the expression grammar
//! and its evaluator, shared by the binary and its tests.

pub mod parser;
