pub mod commands;
pub mod document;
pub mod error;
pub mod report;

pub use commands::{run, Command, Output};
pub use document::FrescoDocument;
pub use error::CliError;
