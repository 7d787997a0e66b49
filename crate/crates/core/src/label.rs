//! Labels and label sets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A label. Labels are positive; `0` is never a valid label.
pub type Label = u32;

/// Largest label a [`LabelSet`] can hold.
pub const MAX_LABEL: Label = 128;

/// A set of labels in `1..=MAX_LABEL`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelSet(u128);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn singleton(l: Label) -> Self {
        let mut s = Self::EMPTY;
        s.insert(l);
        s
    }

    /// All labels `1..=k`.
    pub fn full(k: Label) -> Self {
        assert!(k <= MAX_LABEL, "label {k} exceeds {MAX_LABEL}");
        if k == 0 {
            Self::EMPTY
        } else if k == 128 {
            LabelSet(u128::MAX)
        } else {
            LabelSet((1u128 << k) - 1)
        }
    }

    pub fn from_bits(bits: u128) -> Self {
        LabelSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    fn bit(l: Label) -> u128 {
        assert!((1..=MAX_LABEL).contains(&l), "label {l} out of range 1..={MAX_LABEL}");
        1u128 << (l - 1)
    }

    pub fn contains(self, l: Label) -> bool {
        (1..=MAX_LABEL).contains(&l) && self.0 & Self::bit(l) != 0
    }

    pub fn insert(&mut self, l: Label) {
        self.0 |= Self::bit(l);
    }

    pub fn remove(&mut self, l: Label) {
        self.0 &= !Self::bit(l);
    }

    pub fn with(mut self, l: Label) -> Self {
        self.insert(l);
        self
    }

    pub fn without(mut self, l: Label) -> Self {
        self.remove(l);
        self
    }

    pub fn union(self, other: Self) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        LabelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member.
    pub fn first(self) -> Option<Label> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Largest member.
    pub fn last(self) -> Option<Label> {
        (self.0 != 0).then(|| 128 - self.0.leading_zeros())
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Label> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let l = bits.trailing_zeros() + 1;
            bits &= bits - 1;
            Some(l)
        })
    }

    /// Relabel semantics: a set containing `i` becomes `(self \ {i}) ∪ to`.
    pub fn relabeled(self, i: Label, to: LabelSet) -> Self {
        if self.contains(i) {
            self.without(i).union(to)
        } else {
            self
        }
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        let mut s = LabelSet::EMPTY;
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, l) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}
