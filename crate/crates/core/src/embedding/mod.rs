//! Joint word/frame embedding space: vocabulary, training, queries and the
//! EMB1 text format.
//!
//! EMB1 starts with a `<vocab_size> <dim>` header followed by one
//! `token v1 ... vdim` row per token, values printed with six decimals.

mod space;
mod trainer;
mod vocab;

pub use space::{cosine_of, dot, load_embeddings, norm, save_embeddings, EmbeddingSpace};
pub use trainer::{initialize_space, sgns_step, train, train_with_vocab, TrainerConfig};
pub use vocab::{build_vocab, Vocabulary};
