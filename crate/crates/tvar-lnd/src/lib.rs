//! File formats, derivation specs, action printing and report rendering for the
//! `tvar-lnd` command-line tool.

pub mod action;
pub mod format;
pub mod report;
pub mod spec;
