//! Std companion to `screwxfer-core`: JSON file formats, report writers,
//! SVG plots, the parallel benchmark runner and the command-line front end.

pub mod cli;
pub mod io;
pub mod report;
pub mod runner;
pub mod svg;
