//! The program library: reference oracles, the corpus, generators, pairing
//! and the eventual-majorant check.

pub mod corpus;
pub mod generators;
pub mod majorant;
pub mod oracles;
pub mod pairing;

pub use corpus::{builtin_corpus, load_corpus, parse_corpus, verify_corpus, Corpus, CorpusEntry, Status};
pub use generators::{gen_hicg, gen_hxpg};
pub use majorant::{majorant_check, MajorantReport};
pub use oracles::OracleId;
pub use pairing::{pair_decode, pair_encode};
