//! Reduced words in a free group `F_n` and tuples of words.
//!
//! Letters are encoded as nonzero signed integers: `i` stands for the basis
//! element `v_i` and `-i` for its inverse. All values are immutable and all
//! operations are pure, so everything here is safe to share across threads.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A single letter `v_i` or `v_i^{-1}`, stored as a nonzero signed index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(signed_index: i32) -> Letter {
        assert!(signed_index != 0, "letter index must be nonzero");
        Letter(signed_index)
    }

    /// Basis index in 1..=n.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Canonical position in the letter list `v_1 < v_1^{-1} < v_2 < ...`,
    /// also the bit position used by letter sets.
    pub fn bit(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.0 < 0)
    }

    pub fn from_bit(bit: usize) -> Letter {
        let index = (bit / 2 + 1) as i32;
        Letter(if bit.is_multiple_of(2) { index } else { -index })
    }

    pub fn check_rank(self, rank: usize) -> Result<()> {
        if self.index() > rank {
            Err(Error::LetterOutOfRange {
                index: self.0,
                rank,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > 0 {
            write!(f, "v{}", self.0)
        } else {
            write!(f, "v{}^-1", -self.0)
        }
    }
}

/// A freely reduced word in `F_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    rank: usize,
    letters: Vec<Letter>,
}

/// Free reduction of a raw letter sequence.
fn reduce_letters(raw: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for x in raw {
        if out.last().is_some_and(|y| *y == x.inverse()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl ReducedWord {
    /// Freely reduce a raw sequence. Idempotent.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>, rank: usize) -> Result<ReducedWord> {
        let raw: Vec<Letter> = raw.into_iter().collect();
        for l in &raw {
            l.check_rank(rank)?;
        }
        Ok(ReducedWord {
            rank,
            letters: reduce_letters(raw),
        })
    }

    /// Convenience constructor from signed indices; panics on zero entries,
    /// errors on out-of-rank letters.
    pub fn from_signed(raw: &[i32], rank: usize) -> Result<ReducedWord> {
        ReducedWord::reduce(raw.iter().map(|&x| Letter::new(x)), rank)
    }

    pub fn identity(rank: usize) -> ReducedWord {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn single(letter: Letter, rank: usize) -> Result<ReducedWord> {
        letter.check_rank(rank)?;
        Ok(ReducedWord {
            rank,
            letters: vec![letter],
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length |u|.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_single_letter(&self) -> Option<Letter> {
        match self.letters[..] {
            [l] => Some(l),
            _ => None,
        }
    }

    pub fn multiply(&self, other: &ReducedWord) -> Result<ReducedWord> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(ReducedWord {
            rank: self.rank,
            letters: reduce_letters(self.letters.iter().chain(&other.letters).copied()),
        })
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Signed-index view, the JSON form.
    pub fn to_signed(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.signed()).collect()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// An ordered tuple of reduced words of a common rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordTuple {
    rank: usize,
    entries: Vec<ReducedWord>,
}

impl WordTuple {
    pub fn new(entries: Vec<ReducedWord>, rank: usize) -> Result<WordTuple> {
        for w in &entries {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: w.rank(),
                });
            }
        }
        Ok(WordTuple { rank, entries })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[ReducedWord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of entry lengths.
    pub fn total_length(&self) -> usize {
        self.entries.iter().map(|w| w.len()).sum()
    }

    /// Entrywise image under `f`.
    pub fn map(&self, f: impl FnMut(&ReducedWord) -> ReducedWord) -> WordTuple {
        WordTuple {
            rank: self.rank,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// The canonical BFS key: entries sorted under the fixed letter order.
    pub fn sorted(&self) -> WordTuple {
        let mut entries = self.entries.clone();
        entries.sort();
        WordTuple {
            rank: self.rank,
            entries,
        }
    }
}

impl fmt::Display for WordTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", w)?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Text syntax: whitespace-separated tokens `v<i>` / `v<i>^-1`, with letters
// `a`..`z` accepted as aliases for v1..v26 (`a^-1` etc.), empty word `e`.
// ---------------------------------------------------------------------------

fn parse_token(tok: &str, pos: usize, rank: usize) -> Result<Option<Letter>> {
    if tok == "e" {
        return Ok(None);
    }
    let (base, inverted) = match tok.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (tok, false),
    };
    let index: usize = if let Some(rest) = base.strip_prefix('v') {
        rest.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("bad generator token `{tok}`"),
        })?
    } else if base.len() == 1 && base.chars().all(|c| c.is_ascii_lowercase()) {
        (base.as_bytes()[0] - b'a') as usize + 1
    } else {
        return Err(Error::Parse {
            pos,
            msg: format!("bad generator token `{tok}`"),
        });
    };
    if index == 0 || index > rank {
        return Err(Error::Parse {
            pos,
            msg: format!("generator index {index} out of range 1..={rank}"),
        });
    }
    let signed = if inverted {
        -(index as i32)
    } else {
        index as i32
    };
    Ok(Some(Letter::new(signed)))
}

/// Parse a word from the human text syntax.
pub fn parse_word(text: &str, rank: usize) -> Result<ReducedWord> {
    let mut letters = Vec::new();
    for (pos, tok) in text.split_whitespace().enumerate() {
        if let Some(l) = parse_token(tok, pos, rank)? {
            letters.push(l);
        }
    }
    ReducedWord::reduce(letters, rank)
}

/// Parse a comma-separated tuple of words.
pub fn parse_tuple(text: &str, rank: usize) -> Result<WordTuple> {
    let entries = text
        .split(',')
        .map(|part| parse_word(part, rank))
        .collect::<Result<Vec<_>>>()?;
    WordTuple::new(entries, rank)
}

// ---------------------------------------------------------------------------
// JSON encoding: a word is an array of signed integers; a tuple is an array
// of words together with a top-level rank.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct WordJson {
    pub rank: usize,
    pub word: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
pub struct TupleJson {
    pub rank: usize,
    pub words: Vec<Vec<i32>>,
}

impl ReducedWord {
    pub fn to_json(&self) -> WordJson {
        WordJson {
            rank: self.rank,
            word: self.to_signed(),
        }
    }

    pub fn from_json(j: &WordJson) -> Result<ReducedWord> {
        ReducedWord::from_signed(&j.word, j.rank)
    }
}

impl WordTuple {
    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            rank: self.rank,
            words: self.entries.iter().map(|w| w.to_signed()).collect(),
        }
    }

    pub fn from_json(j: &TupleJson) -> Result<WordTuple> {
        let entries = j
            .words
            .iter()
            .map(|w| ReducedWord::from_signed(w, j.rank))
            .collect::<Result<Vec<_>>>()?;
        WordTuple::new(entries, j.rank)
    }
}

/// All reduced words of length exactly `len` (canonical letter order).
pub fn words_of_length(rank: usize, len: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut current: Vec<Letter> = Vec::new();
    fn go(rank: usize, len: usize, current: &mut Vec<Letter>, out: &mut Vec<ReducedWord>) {
        if current.len() == len {
            out.push(ReducedWord {
                rank,
                letters: current.clone(),
            });
            return;
        }
        for bit in 0..2 * rank {
            let l = Letter::from_bit(bit);
            if current.last().is_some_and(|y| *y == l.inverse()) {
                continue;
            }
            current.push(l);
            go(rank, len, current, out);
            current.pop();
        }
    }
    go(rank, len, &mut current, &mut out);
    out
}

/// All reduced words of length 1..=max_len.
pub fn words_up_to_length(rank: usize, max_len: usize) -> Vec<ReducedWord> {
    (1..=max_len)
        .flat_map(|len| words_of_length(rank, len))
        .collect()
}
