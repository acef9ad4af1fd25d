//! Finite bitstrings.
//!
//! Bitstrings name replication threads: a node of the thread tree is the
//! (possibly empty) sequence of branch choices taken from the root.  The
//! derived ordering is lexicographic with a proper prefix sorting before
//! its extensions, so `BTreeSet<Bits>` iterates `ε, 0, 00, 01, 1, ...`.

use std::fmt;
use std::str::FromStr;

/// A finite, possibly empty string over {0, 1}.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn empty() -> Self {
        Bits(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The child address obtained by appending one bit.
    pub fn child(&self, bit: bool) -> Bits {
        let mut v = self.0.clone();
        v.push(bit);
        Bits(v)
    }

    pub fn is_prefix_of(&self, other: &Bits) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn is_proper_prefix_of(&self, other: &Bits) -> bool {
        other.0.len() > self.0.len() && self.is_prefix_of(other)
    }

    /// Two addresses lie on a common branch when one is a prefix of the other.
    pub fn comparable(&self, other: &Bits) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Every prefix from the empty string up to and including `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = Bits> + '_ {
        (0..=self.0.len()).map(move |n| Bits(self.0[..n].to_vec()))
    }

    pub fn bit(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn parse(s: &str) -> Option<Bits> {
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => v.push(false),
                '1' => v.push(true),
                _ => return None,
            }
        }
        Some(Bits(v))
    }
}

impl FromStr for Bits {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Bits::parse(s).ok_or(())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}
