//! Self-contained separability certificates, their independent verifier,
//! and a bounded brute-force membership oracle.
//!
//! A certificate packages an instance `(H, K, g, f)` with a finite cover
//! `M` and claims `Mf ∩ HgK = ∅`. The verifier trusts nothing: it
//! revalidates the cover and decides the claim exactly by a finite orbit
//! computation in the coset space of `M`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoverGraph, LabeledGraph, Subgroup};
use crate::word::{Alphabet, Letter, Word};

pub const CLAIM: &str = "f_not_in_HgK";

/// Claim that `f ∉ HgK`, witnessed by the finite cover `M` with
/// `Mf ∩ HgK = ∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    alphabet: Alphabet,
    h_generators: Vec<Word>,
    k_generators: Vec<Word>,
    g: Word,
    f: Word,
    cover: LabeledGraph,
}

impl Certificate {
    pub fn new(
        alphabet: Alphabet,
        h_generators: Vec<Word>,
        k_generators: Vec<Word>,
        g: Word,
        f: Word,
        cover: LabeledGraph,
    ) -> Certificate {
        Certificate {
            alphabet,
            h_generators,
            k_generators,
            g,
            f,
            cover,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn h_generators(&self) -> &[Word] {
        &self.h_generators
    }

    pub fn k_generators(&self) -> &[Word] {
        &self.k_generators
    }

    pub fn g(&self) -> &Word {
        &self.g
    }

    pub fn f(&self) -> &Word {
        &self.f
    }

    pub fn cover(&self) -> &LabeledGraph {
        &self.cover
    }

    /// Canonical JSON bytes.
    pub fn encode(&self) -> Vec<u8> {
        let wire = CertificateWire {
            rank: self.alphabet.rank(),
            h: self.h_generators.iter().map(Word::to_string).collect(),
            k: self.k_generators.iter().map(Word::to_string).collect(),
            g: self.g.to_string(),
            f: self.f.to_string(),
            claim: CLAIM.to_string(),
            cover: self.cover.clone(),
        };
        serde_json::to_vec(&wire).expect("certificate serialization cannot fail")
    }

    /// Decodes and fully validates a certificate; edge order in the input is
    /// normalized, so permuted encodings decode to the same value.
    pub fn decode(bytes: &[u8]) -> Result<Certificate> {
        let wire: CertificateWire = serde_json::from_slice(bytes)
            .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
        if wire.claim != CLAIM {
            return Err(Error::MalformedCertificate(format!(
                "unknown claim {:?}",
                wire.claim
            )));
        }
        if !(1..=26).contains(&wire.rank) {
            return Err(Error::MalformedCertificate(format!(
                "rank {} outside 1..=26",
                wire.rank
            )));
        }
        let alphabet = Alphabet::new(wire.rank);
        let parse = |text: &String| {
            Word::parse(text, alphabet).map_err(|e| Error::MalformedCertificate(e.to_string()))
        };
        let h_generators = wire.h.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let k_generators = wire.k.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let g = parse(&wire.g)?;
        let f = parse(&wire.f)?;
        if wire.cover.alphabet().rank() != wire.rank {
            return Err(Error::MalformedCertificate(format!(
                "cover rank {} does not match instance rank {}",
                wire.cover.alphabet().rank(),
                wire.rank
            )));
        }
        let certificate = Certificate {
            alphabet,
            h_generators,
            k_generators,
            g,
            f,
            cover: wire.cover,
        };
        validate_cover(&certificate.cover)?;
        Ok(certificate)
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    rank: u32,
    #[serde(rename = "H")]
    h: Vec<String>,
    #[serde(rename = "K")]
    k: Vec<String>,
    g: String,
    f: String,
    claim: String,
    cover: LabeledGraph,
}

fn validate_cover(cover: &LabeledGraph) -> Result<CoverGraph> {
    CoverGraph::try_from(cover.clone())
        .map_err(|e| Error::MalformedCertificate(format!("cover rejected: {e}")))
}

/// Decides the certified claim exactly: computes the orbit set
/// `{M·h·g·k}` of the basepoint coset and checks that the coset of `f`
/// stays outside. `true` proves `f ∉ HgK`; `false` means this cover does
/// not separate (in particular whenever `f ∈ HgK`).
///
/// The verifier revalidates the cover and the words; it shares only the
/// low-level reading code with the construction side.
pub fn verify_certificate(certificate: &Certificate) -> Result<bool> {
    let rank = certificate.alphabet().rank();
    let words = certificate
        .h_generators
        .iter()
        .chain(certificate.k_generators.iter())
        .chain([&certificate.g, &certificate.f]);
    for w in words {
        if w.max_index() > rank {
            return Err(Error::MalformedCertificate(format!(
                "word {w} uses letters beyond rank {rank}"
            )));
        }
    }
    let cover = validate_cover(&certificate.cover)?;
    let base = cover.basepoint();
    let after_h = cover.orbit([base], &certificate.h_generators);
    let after_g = after_h.iter().map(|&v| cover.read_total(v, &certificate.g));
    let reachable = cover.orbit(after_g, &certificate.k_generators);
    Ok(!reachable.contains(&cover.read_total(base, &certificate.f)))
}

/// Bounded search for an explicit product decomposition `f = h·g·k`:
/// enumerates the elements `k` of `K` of reduced length at most `bound`
/// (closed paths in the core, by length) and tests `f·k⁻¹·g⁻¹ ∈ H`.
///
/// Sound for any bound; complete only in the limit.
pub fn brute_member_witness(
    h: &Subgroup,
    g: &Word,
    k: &Subgroup,
    f: &Word,
    bound: usize,
) -> Option<(Word, Word)> {
    let core = k.core();
    let idx = core.try_folded_index().expect("cores are folded");
    let base = core.basepoint();
    let g_inverse = g.inverse();
    let mut level: VecDeque<(usize, Vec<Letter>)> = VecDeque::from([(base, Vec::new())]);
    let mut depth = 0;
    loop {
        for (v, letters) in &level {
            if *v == base {
                let k_word = Word::from_letters(letters.iter().copied());
                let h_word = f.concat(&k_word.inverse()).concat(&g_inverse);
                if h.contains(&h_word) {
                    return Some((h_word, k_word));
                }
            }
        }
        if depth == bound {
            return None;
        }
        depth += 1;
        let mut next = VecDeque::new();
        for (v, letters) in level {
            for l in signed_letters(core.alphabet()) {
                if letters.last().is_some_and(|last| last.inverse() == l) {
                    continue; // stay freely reduced
                }
                if let Some(u) = idx.step(v, l) {
                    let mut extended = letters.clone();
                    extended.push(l);
                    next.push_back((u, extended));
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        level = next;
    }
}

/// True when the bounded search finds a decomposition `f = h·g·k` with
/// `|k| ≤ bound`.
pub fn brute_member(h: &Subgroup, g: &Word, k: &Subgroup, f: &Word, bound: usize) -> bool {
    brute_member_witness(h, g, k, f, bound).is_some()
}

fn signed_letters(alphabet: Alphabet) -> impl Iterator<Item = Letter> {
    alphabet
        .letters()
        .flat_map(|i| [Letter::positive(i), Letter::negative(i)])
}
