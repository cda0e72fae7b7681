//! Library surface of the command-line crate: the acceptance suite, shared
//! by the `self-test` subcommand and the `acceptance` test target.

pub mod selftest;
