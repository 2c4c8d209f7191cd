//! Exact group arithmetic.
//!
//! Every group in this crate implements [`Group`]: elements are immutable
//! values in a normal form, so structural equality is group equality and
//! elements can key hash maps (exact convolution relies on this).

mod basic;
mod delta;
mod metric;
mod symz;
mod table;
mod wreath;

pub use basic::{Cyclic, InfiniteDihedral, Integers, Lattice, DihedralElem};
pub use delta::{relative_abelianization, shadow_support, DeltaElement, DeltaGroup, MarkedLamp, RelativeAbelianization};
pub use metric::{ball, word_length_bfs, word_length_lamplighter_line, BfsOutcome};
pub use symz::{SymZ, SymZElement};
pub use table::{FiniteGroupTable, Perm, DEFAULT_CLOSURE_CAP};
pub use wreath::{LampConfig, Wreath, WreathElement};

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded cap {cap} (reached {reached} elements)")]
    ClosureOverflow { cap: usize, reached: usize },
    #[error("element does not belong to this group: {0}")]
    GroupMismatch(String),
    #[error("group has no projection to Z")]
    NoProjection,
    #[error("ball exceeded memory cap of {0} elements")]
    MemoryCap(usize),
    #[error("invalid group data: {0}")]
    Invalid(String),
}

/// A group with elements in canonical normal form.
pub trait Group {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Printable canonical key; equal keys iff equal elements.
    fn key(&self, a: &Self::Elem) -> String;

    /// Membership check used by the `try_*` operations.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `g a g^-1`.
    fn conj(&self, a: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, a), &self.inv(g))
    }

    fn try_mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn try_conj(&self, a: &Self::Elem, g: &Self::Elem) -> Result<Self::Elem, GroupError> {
        self.check(a)?;
        self.check(g)?;
        Ok(self.conj(a, g))
    }

    fn check(&self, a: &Self::Elem) -> Result<(), GroupError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch(format!("{a:?}")))
        }
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            k >>= 1;
        }
        acc
    }

    /// Product of a word, left to right.
    fn product<'a, I>(&self, word: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        word.into_iter()
            .fold(self.identity(), |acc, g| self.mul(&acc, g))
    }

    /// Order of `a`, if at most `cap`.
    fn order(&self, a: &Self::Elem, cap: usize) -> Option<usize> {
        let mut x = a.clone();
        for k in 1..=cap {
            if self.is_identity(&x) {
                return Some(k);
            }
            x = self.mul(&x, a);
        }
        None
    }
}

/// Groups with a surjection onto the integers.
pub trait ZProjection: Group {
    fn phi(&self, a: &Self::Elem) -> i64;

    /// A canonical element with `phi(lift(x)) == x`.
    fn lift(&self, x: i64) -> Self::Elem;
}

/// Returns `Err(NoProjection)` for groups that are not declared as extensions of Z.
pub fn try_phi<G: Group + MaybeProjection>(group: &G, a: &G::Elem) -> Result<i64, GroupError> {
    group.maybe_phi(a).ok_or(GroupError::NoProjection)
}

/// Runtime view of the Z-projection, for code paths that handle any preset.
pub trait MaybeProjection: Group {
    fn maybe_phi(&self, a: &Self::Elem) -> Option<i64>;
}

impl MaybeProjection for FiniteGroupTable {
    fn maybe_phi(&self, _a: &u32) -> Option<i64> {
        None
    }
}

impl<L: Group> MaybeProjection for Wreath<L, Integers> {
    fn maybe_phi(&self, a: &Self::Elem) -> Option<i64> {
        Some(self.phi(a))
    }
}

impl MaybeProjection for SymZ {
    fn maybe_phi(&self, a: &SymZElement) -> Option<i64> {
        Some(self.phi(a))
    }
}
