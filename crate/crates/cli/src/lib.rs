//! Command-line runner and HTTP game service for `percduel`.

pub mod config;
pub mod run;
pub mod service;
