//! Branch-free exhaustive search over compositions of the two step maps.
//!
//! A composition is a fixed-length word over `{F, G}` applied to an input in
//! exact dyadic arithmetic. Unlike the branching iteration, nothing here
//! inspects parity: every candidate word is simply evaluated, and a search
//! stops at the first one whose final value is a whole number. The
//! branch-following word always qualifies, so the search terminates within
//! `2^r` attempts.
//!
//! Application order: `steps[0]` is applied FIRST. A word reads left to
//! right in the order the maps hit the input, so `[F, G]` on 3 means
//! `G(F(3)) = 11/4`. This inverts the usual right-to-left composition
//! convention; the worked values pin it.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::numerics::{Dyadic, Natural};
use crate::trajectory::{PathRecord, StepKind};

/// Full enumeration ([`integral_compositions`]) refuses rounds above this.
pub const MAX_ORACLE_ROUNDS: u32 = 20;

/// Largest word length whose index space fits the enumeration machinery.
const MAX_ENUMERABLE_ROUNDS: u32 = 62;

/// Enumeration orders for the `2^r` words of length `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumOrder {
    /// Ascending r-bit index with `F = 0`, `G = 1`, first step most
    /// significant: FF, FG, GF, GG.
    Lexicographic,
    /// Reflected at the leading step: the F-half ascending, then the G-half
    /// mirrored, giving FF, FG, GG, GF.
    Reflected,
}

impl EnumOrder {
    pub fn name(self) -> &'static str {
        match self {
            EnumOrder::Lexicographic => "lexicographic",
            EnumOrder::Reflected => "reflected",
        }
    }

    /// Index of the word at `position` (0-based) in this order.
    fn index_at(self, position: u64, rounds: u32) -> u64 {
        match self {
            EnumOrder::Lexicographic => position,
            EnumOrder::Reflected => {
                let half = 1u64 << (rounds - 1);
                if position < half {
                    position
                } else {
                    // Mirror the back half: last index first.
                    (1u64 << rounds) - 1 - (position - half)
                }
            }
        }
    }
}

impl fmt::Display for EnumOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered word over `{F, G}`; `steps[0]` is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    steps: Vec<StepKind>,
}

impl Composition {
    pub fn from_steps(steps: Vec<StepKind>) -> Self {
        Composition { steps }
    }

    /// Decode an r-bit index, first step in the most significant bit.
    pub fn from_index(rounds: u32, index: u64) -> Self {
        let steps = (0..rounds)
            .rev()
            .map(|bit| StepKind::from_bit(index >> bit & 1 == 1))
            .collect();
        Composition { steps }
    }

    /// The r-bit index this word encodes (inverse of [`from_index`]).
    pub fn index(&self) -> u64 {
        self.steps
            .iter()
            .fold(0, |acc, s| acc << 1 | u64::from(s.bit()))
    }

    /// The word matching a branch record: `F` for even decisions, `G` for
    /// odd ones.
    pub fn from_path(path: &PathRecord) -> Self {
        Composition {
            steps: path.bits().iter().map(|&b| StepKind::from_bit(b)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[StepKind] {
        &self.steps
    }

    /// Evaluate the word on `x` in exact dyadic arithmetic, leftmost step
    /// first.
    pub fn apply(&self, x: &Natural) -> Dyadic {
        let mut value = Dyadic::from(x.clone());
        for step in &self.steps {
            value = match step {
                StepKind::F => value.halve(),
                StepKind::G => value.three_x_plus_one_half(),
            };
        }
        value
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Outcome of an exhaustive search: the first word (in the requested order)
/// that lands on a whole number, the number it lands on, and how many words
/// were evaluated to get there (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub found: Composition,
    pub result: Natural,
    pub tries: u64,
    pub order: EnumOrder,
}

/// Lazily yield all `2^r` words of length `r` in the given order, each
/// exactly once. The table is never materialized.
pub fn enumerate(
    rounds: u32,
    order: EnumOrder,
) -> Result<impl Iterator<Item = Composition>, Error> {
    if rounds == 0 {
        return Err(Error::ZeroIterations);
    }
    if rounds > MAX_ENUMERABLE_ROUNDS {
        return Err(Error::IterationOverflow {
            rounds,
            max: MAX_ENUMERABLE_ROUNDS,
        });
    }
    let total = 1u64 << rounds;
    Ok((0..total)
        .map(move |position| Composition::from_index(rounds, order.index_at(position, rounds))))
}

/// Try every word on `x` in order and stop at the first whole-number result.
pub fn search(x: &Natural, rounds: u32, order: EnumOrder) -> Result<SearchReport, Error> {
    if x.is_zero() {
        return Err(Error::ZeroIterate);
    }
    for (position, candidate) in enumerate(rounds, order)?.enumerate() {
        let value = candidate.apply(x);
        if let Some(result) = value.as_integer() {
            return Ok(SearchReport {
                result: result.clone(),
                found: candidate,
                tries: position as u64 + 1,
                order,
            });
        }
    }
    unreachable!("the branch-following composition always yields an integer")
}

/// Every word (out of `2^r`) whose final value is whole, by full
/// enumeration. This is the uniqueness oracle the rest of the suite leans
/// on, so it evaluates each word completely and independently.
pub fn integral_compositions(x: &Natural, rounds: u32) -> Result<Vec<Composition>, Error> {
    if x.is_zero() {
        return Err(Error::ZeroIterate);
    }
    if rounds > MAX_ORACLE_ROUNDS {
        return Err(Error::OracleBound {
            rounds,
            max: MAX_ORACLE_ROUNDS,
        });
    }
    Ok(enumerate(rounds, EnumOrder::Lexicographic)?
        .filter(|candidate| candidate.apply(x).is_integer())
        .collect())
}

/// Mean 1-based tries over every residue class `x` in `[1, 2^r]`, the
/// deterministic cost of the search under a uniform input. The residue/word
/// bijection makes this exactly `(2^r + 1) / 2` attempts for any order.
pub fn exhaustive_mean_tries(rounds: u32, order: EnumOrder) -> Result<f64, Error> {
    if rounds == 0 {
        return Err(Error::ZeroIterations);
    }
    let total = 1u64 << rounds;
    let mut tries_sum = 0u64;
    let mut x = Natural::one();
    for _ in 0..total {
        tries_sum += search(&x, rounds, order)?.tries;
        x += 1u32;
    }
    Ok(tries_sum as f64 / total as f64)
}
