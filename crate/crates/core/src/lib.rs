//! Metaphoric verb substitution guided by conceptual mappings between
//! semantic frames.
//!
//! The crate covers the whole offline pipeline:
//!
//! * [`inventory`]: frames, lexical units and frame relations (FIV1);
//! * [`corpus`]: frame-tagged sentences (FTC1), training windows, paired
//!   literal/metaphoric data (PFC1), control records and mapping counts;
//! * [`embedding`]: a joint word/frame skip-gram space (EMB1);
//! * [`metrics`]: the `lex` and `str` frame-embedding scores;
//! * [`mapper`]: frame-offset mappings, verb substitution and rare/unseen
//!   source selection;
//! * [`inflect`]: rule-based English verb inflection;
//! * [`evaluation`]: `dis`/`rel`/exact-match, Krippendorff's alpha and the
//!   paired t-test.

pub mod corpus;
pub mod embedding;
mod error;
pub mod evaluation;
pub mod inflect;
pub mod inventory;
pub mod mapper;
pub mod metrics;
pub mod seed;

pub use corpus::{MorphTag, TaggedSentence, TrainingWindow};
pub use embedding::{EmbeddingSpace, TrainerConfig, Vocabulary};
pub use error::{Error, Result};
pub use inventory::FrameInventory;
pub use mapper::{ConceptualMapping, GenerationRequest, GenerationResult};
pub use metrics::{MetricConfig, MetricReport};
