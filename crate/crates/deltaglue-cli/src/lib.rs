//! Text formats and the object store backing the `deltaglue` binary. The
//! formats are line-oriented with explicit counts so that fixtures are
//! bit-exact under version control; the grammar lives in FORMATS.md next
//! to this crate.

pub mod formats;
pub mod workspace;
