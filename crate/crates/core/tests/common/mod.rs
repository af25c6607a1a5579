//! Shared test support: dense operator assembly and step oracles.
#![allow(dead_code)]

pub mod dense;
pub mod laws;
pub mod mac_checks;
pub mod oracle;
