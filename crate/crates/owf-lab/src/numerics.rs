//! Exact arithmetic substrate: arbitrary-precision naturals and dyadic
//! rationals (power-of-two denominators only).
//!
//! The iteration maps only ever introduce factors of two in denominators, so
//! a general rational type is unnecessary; [`Dyadic`] keeps reduction down to
//! stripping trailing zeros.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;

/// Arbitrary-precision unsigned integer. Inputs, iterates, digests and path
/// values all live here; there is no fixed upper bound because the final
/// iterate can outgrow the input width.
pub type Natural = BigUint;

/// Text bases accepted and produced by the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Decimal,
    Hex,
}

impl Base {
    pub fn radix(self) -> u32 {
        match self {
            Base::Decimal => 10,
            Base::Hex => 16,
        }
    }
}

/// Parse a natural from a digit string. Hex digits may be either case; no
/// prefix is accepted. Errors name the offending position (0-based).
pub fn parse_natural(text: &str, base: Base) -> Result<Natural, Error> {
    if text.is_empty() {
        return Err(Error::EmptyDigits);
    }
    let radix = base.radix();
    let mut value = Natural::zero();
    for (position, digit) in text.chars().enumerate() {
        let d = digit.to_digit(radix).ok_or(Error::InvalidDigit {
            digit,
            position,
            base: radix,
        })?;
        value = value * radix + d;
    }
    Ok(value)
}

/// Render a natural in the given base: decimal digits or lowercase hex,
/// no prefix either way.
pub fn format_natural(value: &Natural, base: Base) -> String {
    value.to_str_radix(base.radix())
}

/// Number of bits in the binary expansion: 0 for 0, otherwise
/// `2^(len-1) <= v < 2^len`.
pub fn bit_length(value: &Natural) -> u64 {
    value.bits()
}

/// Exact rational with a power-of-two denominator: `numerator / 2^k`.
///
/// Canonical form keeps the numerator odd unless `k` is zero, so two values
/// are equal exactly when their fields are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: Natural,
    denominator_exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: Natural, denominator_exponent: u32) -> Self {
        let mut d = Dyadic {
            numerator,
            denominator_exponent,
        };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.denominator_exponent = 0;
            return;
        }
        while self.denominator_exponent > 0 && !self.numerator.bit(0) {
            self.numerator >>= 1u32;
            self.denominator_exponent -= 1;
        }
    }

    pub fn numerator(&self) -> &Natural {
        &self.numerator
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.denominator_exponent
    }

    pub fn is_integer(&self) -> bool {
        self.denominator_exponent == 0
    }

    /// The value as a natural, when it is one.
    pub fn as_integer(&self) -> Option<&Natural> {
        self.is_integer().then_some(&self.numerator)
    }

    /// `x/2`, the even-branch map.
    pub fn halve(&self) -> Dyadic {
        Dyadic::new(self.numerator.clone(), self.denominator_exponent + 1)
    }

    /// `(3x+1)/2`, the odd-branch map. On `p/2^k` this is
    /// `(3p + 2^k) / 2^(k+1)`.
    pub fn three_x_plus_one_half(&self) -> Dyadic {
        let scaled_one = Natural::one() << self.denominator_exponent;
        Dyadic::new(
            &self.numerator * 3u32 + scaled_one,
            self.denominator_exponent + 1,
        )
    }
}

impl From<Natural> for Dyadic {
    fn from(value: Natural) -> Self {
        Dyadic {
            numerator: value,
            denominator_exponent: 0,
        }
    }
}

impl From<u64> for Dyadic {
    fn from(value: u64) -> Self {
        Dyadic::from(Natural::from(value))
    }
}

impl fmt::Display for Dyadic {
    /// Renders as `p/2^k`, with the denominator omitted for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator_exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.denominator_exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn parse_single_digit() {
        assert_eq!(parse_natural("9", Base::Decimal).unwrap(), nat(9));
    }

    #[test]
    fn parse_zero() {
        assert_eq!(parse_natural("0", Base::Decimal).unwrap(), nat(0));
    }

    #[test]
    fn parse_hex_cross_checked() {
        // Independent base-conversion oracle: sum of digit * 16^i.
        let digits = [2u64, 14];
        let expected: u64 = digits.iter().fold(0, |acc, d| acc * 16 + d);
        assert_eq!(expected, 46);
        assert_eq!(parse_natural("2e", Base::Hex).unwrap(), nat(expected));
        assert_eq!(parse_natural("2E", Base::Hex).unwrap(), nat(46));
    }

    #[test]
    fn parse_reports_offending_position() {
        let err = parse_natural("12x3", Base::Decimal).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidDigit {
                digit: 'x',
                position: 2,
                base: 10
            }
        );
        let err = parse_natural("", Base::Hex).unwrap_err();
        assert_eq!(err, Error::EmptyDigits);
        // 'e' is a digit in hex but not decimal.
        assert!(parse_natural("2e", Base::Decimal).is_err());
    }

    #[test]
    fn format_is_lowercase_unprefixed() {
        assert_eq!(format_natural(&nat(255), Base::Hex), "ff");
        assert_eq!(format_natural(&nat(255), Base::Decimal), "255");
        assert_eq!(format_natural(&nat(0), Base::Hex), "0");
    }

    #[test]
    fn xor_golden() {
        // 1001 ^ 1101 = 0100, checked bit by bit.
        let a = nat(9);
        let b = nat(13);
        let mut expected = Natural::zero();
        for i in 0..4u64 {
            if a.bit(i) != b.bit(i) {
                expected.set_bit(i, true);
            }
        }
        assert_eq!(expected, nat(4));
        assert_eq!(&a ^ &b, expected);
    }

    #[test]
    fn dyadic_step_goldens() {
        let three = Dyadic::from(3u64);
        let half3 = three.halve();
        assert_eq!(half3, Dyadic::new(nat(3), 1));

        // (3 * 3/2 + 1) / 2 = 11/4
        assert_eq!(half3.three_x_plus_one_half(), Dyadic::new(nat(11), 2));

        // (3/2) / 2 = 3/4
        assert_eq!(half3.halve(), Dyadic::new(nat(3), 2));
    }

    #[test]
    fn dyadic_reduces_to_integers() {
        // (3*3+1)/2 = 5: the odd branch of an odd integer lands on an integer.
        let g3 = Dyadic::from(3u64).three_x_plus_one_half();
        assert_eq!(g3.as_integer(), Some(&nat(5)));
        assert_eq!(g3.three_x_plus_one_half().as_integer(), Some(&nat(8)));
        // 8/2 = 4, exponent fully reduced.
        assert_eq!(Dyadic::from(8u64).halve(), Dyadic::from(4u64));
    }

    #[test]
    fn dyadic_display() {
        assert_eq!(Dyadic::new(nat(11), 2).to_string(), "11/2^2");
        assert_eq!(Dyadic::from(8u64).to_string(), "8");
        assert_eq!(Dyadic::new(nat(0), 7).to_string(), "0");
    }

    /// Unreduced fraction oracle: numerator and denominator tracked as full
    /// naturals, no reduction at all. Agreement is checked by
    /// cross-multiplication, so it is independent of `Dyadic`'s
    /// normalization logic.
    struct FractionOracle {
        num: Natural,
        den: Natural,
    }

    impl FractionOracle {
        fn from_integer(v: &Natural) -> Self {
            FractionOracle {
                num: v.clone(),
                den: Natural::one(),
            }
        }
        fn halve(&mut self) {
            self.den *= 2u32;
        }
        fn three_x_plus_one_half(&mut self) {
            self.num = &self.num * 3u32 + &self.den;
            self.den *= 2u32;
        }
        fn equals(&self, d: &Dyadic) -> bool {
            d.numerator() * &self.den == &self.num * (Natural::one() << d.denominator_exponent())
        }
    }

    #[test]
    fn dyadic_chains_match_fraction_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0dd0);
        for _ in 0..10_000 {
            let start = nat(rng.gen::<u64>().max(1));
            let len = rng.gen_range(1..=32);
            let mut value = Dyadic::from(start.clone());
            let mut oracle = FractionOracle::from_integer(&start);
            for _ in 0..len {
                if rng.gen::<bool>() {
                    value = value.halve();
                    oracle.halve();
                } else {
                    value = value.three_x_plus_one_half();
                    oracle.three_x_plus_one_half();
                }
                // Reduced form invariant holds after every step.
                assert!(value.denominator_exponent() == 0 || value.numerator().bit(0));
            }
            assert!(oracle.equals(&value));
        }
    }

    proptest! {
        #[test]
        fn xor_involution(a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = (nat(a), nat(b));
            prop_assert_eq!(&(&(&a ^ &b) ^ &b), &a);
            prop_assert_eq!(&a ^ &Natural::zero(), a.clone());
            prop_assert_eq!(&a ^ &a, Natural::zero());
        }

        #[test]
        fn bit_length_doubles(v in 1u64..=u64::MAX / 2) {
            let v = nat(v);
            prop_assert_eq!(bit_length(&(&v * 2u32)), bit_length(&v) + 1);
        }

        #[test]
        fn parse_format_round_trip(v in any::<u64>()) {
            let v = nat(v);
            for base in [Base::Decimal, Base::Hex] {
                let text = format_natural(&v, base);
                prop_assert_eq!(parse_natural(&text, base).unwrap(), v.clone());
            }
        }
    }

    #[test]
    fn bit_length_zero() {
        assert_eq!(bit_length(&Natural::zero()), 0);
        assert_eq!(bit_length(&nat(1)), 1);
        assert_eq!(bit_length(&nat(8)), 4);
    }
}
