//! Freely reduced words over a ranked alphabet.
//!
//! A [`Word`] is the canonical (freely reduced) form of a product of signed
//! letters and represents an element of the free group on `rank` generators.

use std::fmt;
use std::num::NonZeroI32;

use crate::error::{Error, Result};

/// A ranked alphabet; positive letters are indexed `1..=rank`.
///
/// Words in the compact text format (`a`/`A` .. `z`/`Z`) are limited to rank
/// 26. Alphabets of larger rank are used internally (free-factor bases) and
/// never cross the text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: u32,
}

impl Alphabet {
    pub fn new(rank: u32) -> Alphabet {
        assert!(rank >= 1, "alphabet rank must be at least 1");
        Alphabet { rank }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// True if `index` names a positive letter of this alphabet.
    pub fn contains(&self, index: u32) -> bool {
        1 <= index && index <= self.rank
    }

    /// All positive letter indices, in order.
    pub fn letters(&self) -> impl Iterator<Item = u32> {
        1..=self.rank
    }
}

/// A signed letter: a generator (positive) or its inverse (negative).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(NonZeroI32);

impl Letter {
    /// The positive letter with the given 1-based index.
    pub fn positive(index: u32) -> Letter {
        Letter(NonZeroI32::new(index as i32).expect("letter index must be nonzero"))
    }

    /// The inverse of the positive letter with the given 1-based index.
    pub fn negative(index: u32) -> Letter {
        Letter(NonZeroI32::new(-(index as i32)).expect("letter index must be nonzero"))
    }

    /// 1-based index of the underlying positive letter.
    pub fn index(&self) -> u32 {
        self.0.get().unsigned_abs()
    }

    pub fn is_positive(&self) -> bool {
        self.0.get() > 0
    }

    pub fn inverse(&self) -> Letter {
        Letter(NonZeroI32::new(-self.0.get()).unwrap())
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.0.get() == -other.0.get()
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.index();
        if idx <= 26 {
            let c = (b'a' + (idx - 1) as u8) as char;
            if self.is_positive() {
                write!(f, "{c}")
            } else {
                write!(f, "{}", c.to_ascii_uppercase())
            }
        } else if self.is_positive() {
            write!(f, "#{idx}")
        } else {
            write!(f, "#-{idx}")
        }
    }
}

/// A freely reduced word; the empty word is the group identity.
#[allow(clippy::len_without_is_empty)] // emptiness is spelled is_identity
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Free reduction of an arbitrary letter sequence. Idempotent.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut reduced: Vec<Letter> = Vec::new();
        for l in letters {
            match reduced.last() {
                Some(last) if last.cancels(&l) => {
                    reduced.pop();
                }
                _ => reduced.push(l),
            }
        }
        Word { letters: reduced }
    }

    /// Parses the compact text format: lowercase = positive letter,
    /// uppercase = its inverse, whitespace ignored, `"1"` or `""` = identity.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Word> {
        let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if stripped.is_empty() || stripped == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(stripped.len());
        for c in stripped.chars() {
            let letter = if c.is_ascii_lowercase() {
                Letter::positive(c as u32 - 'a' as u32 + 1)
            } else if c.is_ascii_uppercase() {
                Letter::negative(c as u32 - 'A' as u32 + 1)
            } else {
                return Err(Error::UnknownLetter {
                    found: c,
                    rank: alphabet.rank(),
                });
            };
            if !alphabet.contains(letter.index()) {
                return Err(Error::UnknownLetter {
                    found: c,
                    rank: alphabet.rank(),
                });
            }
            letters.push(letter);
        }
        Ok(Word::from_letters(letters))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Largest letter index used, or 0 for the identity.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// Reduced conjugate `g · self · g⁻¹`.
    pub fn conjugated_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A subset of the positive letters of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LetterSet {
    members: std::collections::BTreeSet<u32>,
}

impl LetterSet {
    pub fn empty() -> LetterSet {
        LetterSet::default()
    }

    pub fn full(alphabet: Alphabet) -> LetterSet {
        alphabet.letters().collect()
    }

    pub fn contains(&self, index: u32) -> bool {
        self.members.contains(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl FromIterator<u32> for LetterSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        LetterSet {
            members: iter.into_iter().collect(),
        }
    }
}

/// Parses a comma-separated list of words; `"1"` entries and empty entries
/// denote the identity and are dropped.
pub fn parse_word_list(text: &str, alphabet: Alphabet) -> Result<Vec<Word>> {
    let mut words = Vec::new();
    for part in text.split(',') {
        let w = Word::parse(part, alphabet)?;
        if !w.is_identity() {
            words.push(w);
        }
    }
    Ok(words)
}
