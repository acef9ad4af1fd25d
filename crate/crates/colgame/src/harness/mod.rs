//! Match simulation: adversary models, tree generators, the match loop,
//! transcripts, and the post-hoc verifier.

pub mod adversary;
pub mod gen;
pub mod runmatch;
pub mod transcript;
pub mod verify;
