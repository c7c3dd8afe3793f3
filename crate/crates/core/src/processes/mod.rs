//! Data sources: synthetic generators, exact finite-alphabet laws and CSV
//! ingestion.
//!
//! Gaussian draws use the ziggurat sampler of `rand_distr::StandardNormal`
//! over a seeded ChaCha8 stream, and geometric draws use
//! `rand_distr::Geometric`; both are deterministic across platforms.

mod csv;
mod finite;
mod synthetic;

pub use self::csv::{chunk_count, chunk_series, ingest_csv, read_column, ChunkProblem};
pub(crate) use finite::guarded_pow;
pub use finite::{gen_binary_ma, gen_finite_chain, FiniteProcess, MarkovChain, SIZE_GUARD};
pub use synthetic::{gen_iid_linear, gen_ma1, gen_sticky_chain, gen_sticky_chain_with_state, StickyState};
