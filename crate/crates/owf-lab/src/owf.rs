//! The one-way-function candidate: run the branching iteration for `r`
//! rounds, then XOR-fold the input, the final iterate and the path record
//! into an `r`-bit digest.
//!
//! The canonical profile takes a 512-bit input through 256 rounds to a
//! 256-bit digest. For inputs of at most `2r` bits the fold is literally the
//! XOR of the value's high and low halves; wider values (the final iterate
//! can outgrow `2r` bits when odd branches dominate) contribute their excess
//! chunk to the XOR instead of losing it.

use num_traits::Zero;

use crate::error::Error;
use crate::numerics::{bit_length, Natural};
use crate::trajectory::{self, PathRecord};

/// Parameter profile: `n`-bit input domain, `r` rounds, `r`-bit digest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OwfParams {
    n: u32,
    r: u32,
}

impl OwfParams {
    pub fn new(n: u32, r: u32) -> Result<Self, Error> {
        if n == 0 || r == 0 {
            return Err(Error::InvalidParams { n, r });
        }
        Ok(OwfParams { n, r })
    }

    /// The canonical "paper512" profile: 512-bit inputs, 256 rounds.
    pub fn paper512() -> Self {
        OwfParams { n: 512, r: 256 }
    }

    pub fn input_bits(&self) -> u32 {
        self.n
    }

    pub fn rounds(&self) -> u32 {
        self.r
    }

    /// Accepts any positive `x` below `2^n`. With `strict_width` the input
    /// must occupy exactly `n` significant bits.
    pub fn check_input(&self, x: &Natural, strict_width: bool) -> Result<(), Error> {
        let bits = bit_length(x);
        if x.is_zero() || bits > self.n as u64 {
            return Err(Error::InputOutOfDomain {
                bit_length: bits,
                n: self.n,
            });
        }
        if strict_width && bits != self.n as u64 {
            return Err(Error::StrictWidth {
                bit_length: bits,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// An `r`-bit digest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwfOutput {
    digest: Natural,
    width: u32,
}

impl OwfOutput {
    pub fn new(digest: Natural, width: u32) -> Result<Self, Error> {
        if bit_length(&digest) > width as u64 {
            return Err(Error::DigestTooWide {
                digest: digest.to_str_radix(16),
                r: width,
            });
        }
        Ok(OwfOutput { digest, width })
    }

    pub fn digest(&self) -> &Natural {
        &self.digest
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Lowercase hex, zero-padded to `ceil(r/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = (self.width as usize).div_ceil(4);
        format!("{:0>digits$}", self.digest.to_str_radix(16))
    }
}

/// Full intermediate record of one evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwfTrace {
    pub input: Natural,
    pub final_value: Natural,
    pub path: PathRecord,
    pub folded_input: Natural,
    pub folded_final: Natural,
    pub digest: Natural,
}

/// XOR of consecutive `width`-bit chunks of `value`, least significant chunk
/// first, top chunk zero-padded. `fold(0, w) = 0`; the result is always
/// below `2^width`.
pub fn fold(value: &Natural, width: u32) -> Natural {
    let mask = (Natural::from(1u32) << width) - 1u32;
    let mut acc = Natural::zero();
    let mut rest = value.clone();
    while !rest.is_zero() {
        acc ^= &rest & &mask;
        rest >>= width;
    }
    acc
}

/// Digest `x` under `params`: run the branching iteration, fold the input
/// and the final iterate to `r` bits, and XOR in the path record.
pub fn evaluate(x: &Natural, params: &OwfParams) -> Result<OwfOutput, Error> {
    Ok(trace(x, params)?.into_output(params))
}

/// Like [`evaluate`] but keeps every intermediate value.
pub fn trace(x: &Natural, params: &OwfParams) -> Result<OwfTrace, Error> {
    params.check_input(x, false)?;
    let run = trajectory::run(x, params.rounds())?;
    let folded_input = fold(x, params.rounds());
    let folded_final = fold(&run.final_value, params.rounds());
    let digest = &folded_input ^ &folded_final ^ run.path.to_natural();
    Ok(OwfTrace {
        input: x.clone(),
        final_value: run.final_value,
        path: run.path,
        folded_input,
        folded_final,
        digest,
    })
}

impl OwfTrace {
    pub fn into_output(self, params: &OwfParams) -> OwfOutput {
        OwfOutput {
            digest: self.digest,
            width: params.rounds(),
        }
    }
}

/// Recompute and compare. Width disagreement is an error, not `false`: a
/// digest of the wrong width is a contract violation rather than a mismatch.
pub fn verify(x: &Natural, claimed: &OwfOutput, params: &OwfParams) -> Result<bool, Error> {
    if claimed.width() != params.rounds() {
        return Err(Error::WidthMismatch {
            expected: params.rounds(),
            actual: claimed.width(),
        });
    }
    Ok(evaluate(x, params)?.digest() == claimed.digest())
}
