//! Subgroup graphs for free groups: Stallings folding, finite-cover
//! completion, exact double-coset membership `f ∈ HgK`, and verified
//! finite-index separability certificates for non-members.
//!
//! The pieces fit together as follows. A finitely generated subgroup is
//! represented by its folded core graph ([`Subgroup`]); folding, fiber
//! products, spanning trees and coset orbits live in [`graph`]. Completion
//! ([`completion::complete`]) embeds any finite folded graph in a cover on
//! the same vertices, which yields finite-index witnesses separating a word
//! from a subgroup ([`completion::hall_witness`]) and powers the
//! double-coset pipeline in [`double_coset`]. Certificates and their
//! independent verifier live in [`certify`].
//!
//! ```
//! use stallings::{member, separability_witness, verify_certificate, Alphabet, Subgroup, Word};
//!
//! let alphabet = Alphabet::new(2);
//! let h = Subgroup::new(alphabet, vec![Word::parse("a", alphabet)?]);
//! let k = Subgroup::new(alphabet, vec![Word::parse("b", alphabet)?]);
//! let f = Word::parse("ba", alphabet)?;
//!
//! assert!(!member(&h, &Word::identity(), &k, &f));
//! let certificate = separability_witness(&h, &Word::identity(), &k, &f)?;
//! assert!(verify_certificate(&certificate)?);
//! assert_eq!(certificate.cover().vertex_count(), 3);
//! # Ok::<(), stallings::Error>(())
//! ```

pub mod certify;
pub mod completion;
pub mod dot;
pub mod double_coset;
pub mod error;
pub mod graph;
pub mod word;

pub use certify::{brute_member, brute_member_witness, verify_certificate, Certificate};
pub use completion::{complete, hall_witness, CompletionReport};
pub use double_coset::{
    conjugation_reduce, coset_decomposition, free_factor_embed, member, member_free_factor_case,
    separability_witness, CosetDecomposition, FreeFactorContext, ReducedInstance,
};
pub use error::{Error, Result};
pub use graph::{CoverGraph, Edge, LabeledGraph, Subgroup};
pub use word::{parse_word_list, Alphabet, Letter, LetterSet, Word};

#[cfg(test)]
mod tests {
    fn shareable<T: Send + Sync>() {}

    #[test]
    fn values_move_freely_between_threads() {
        shareable::<crate::Word>();
        shareable::<crate::LabeledGraph>();
        shareable::<crate::Subgroup>();
        shareable::<crate::CoverGraph>();
        shareable::<crate::Certificate>();
        shareable::<crate::FreeFactorContext>();
        shareable::<crate::CompletionReport>();
        shareable::<crate::CosetDecomposition>();
    }
}
