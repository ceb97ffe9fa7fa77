//! File formats, the corpus runner and the command-line front end for
//! `fsing-core`.

pub mod cert;
pub mod corpus;
pub mod input;

pub use cert::{CertificateJson, OutcomeJson};
pub use corpus::{run_corpus, Corpus, CorpusReport};
pub use input::{InputFile, Overrides};
