//! Document formats and rendering behind the `plankcheck` binary.

pub mod doc;
pub mod svg;
