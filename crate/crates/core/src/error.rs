use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A character in a word literal is not a letter of the alphabet.
    #[error("unknown letter {found:?} (alphabet rank {rank})")]
    UnknownLetter { found: char, rank: u32 },
    /// Two graphs over different alphabets were combined.
    #[error("alphabet mismatch: rank {0} vs rank {1}")]
    AlphabetMismatch(u32, u32),
    /// An operation that needs a connected graph got a disconnected one.
    #[error("graph is not connected")]
    Disconnected,
    /// An operation that needs a folded graph got an unfolded one.
    #[error("graph is not folded")]
    NotFolded,
    /// `hall_witness` was asked to separate a word that lies in the subgroup.
    #[error("word already belongs to the subgroup")]
    MemberAlready,
    /// `separability_witness` was asked to certify a member of the double coset.
    #[error("word belongs to the double coset")]
    IsMember,
    /// A word expected to lie in a subgroup reads as a non-closed path.
    #[error("word does not belong to the subgroup")]
    NotInSubgroup,
    /// A graph failed structural validation.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    /// A certificate failed decoding or structural validation.
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
