//! Laboratory for a Collatz-based one-way-function candidate.
//!
//! The subject is the modified 3x+1 iteration — `x/2` on even values,
//! `(3x+1)/2` on odd values — and the digest built from it: run `r` rounds,
//! then XOR together the folded input, the folded final iterate and the
//! record of branch decisions. The crate carries both reference ways of
//! computing the iteration and the instruments to compare them:
//!
//! - [`numerics`]: arbitrary-precision naturals and exact dyadic rationals.
//! - [`trajectory`]: the branching iteration with path recording.
//! - [`composition`]: the branch-free variant — exhaustive search over all
//!   `2^r` words of the two step maps — plus the uniqueness oracle showing
//!   each input admits exactly one integral word.
//! - [`owf`]: the digest construction, parameterized by input width and
//!   round count (canonically 512 bits through 256 rounds).
//! - [`analysis`]: preimage scans, digest census, avalanche statistics and
//!   the linear-versus-exponential cost profile, all reproducible and
//!   reported as JSON.

pub mod analysis;
pub mod composition;
pub mod error;
pub mod numerics;
pub mod owf;
pub mod trajectory;

pub use composition::{Composition, EnumOrder, SearchReport};
pub use error::{Error, ErrorKind};
pub use numerics::{bit_length, format_natural, parse_natural, Base, Dyadic, Natural};
pub use owf::{OwfOutput, OwfParams, OwfTrace};
pub use trajectory::{PathRecord, StepKind, TrajectoryResult};
