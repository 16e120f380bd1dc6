//! Library side of the `crformal` command-line tool: the input grammar and
//! the task runner that produces JSON reports.

pub mod grammar;
pub mod run;
