//! Command-line front end: JSON document formats and subcommand dispatch.

pub mod run;
pub mod schema;

pub use run::{dispatch, Outcome};
pub use schema::{parse_document, serialize_document, Document};
