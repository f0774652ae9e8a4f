//! JSON formats and the `galimage` command-line front end for
//! [`galimage_core`].
//!
//! - [`formats`]: strict parsing of descriptors, matrix generators and
//!   campaign ranges;
//! - [`report`]: JSON encodings of library results;
//! - [`cli`]: argument parsing, command dispatch and exit codes.

pub mod cli;
pub mod formats;
pub mod report;
