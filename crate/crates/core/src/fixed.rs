//! Exact mod-1 arithmetic on the circle.
//!
//! An [`Angle`] stores a fraction of a turn as a 128-bit fixed-point word
//! (units of 2⁻¹²⁸). Addition and integer multiplication wrap modulo one
//! exactly: `n·θ mod 1` is a single `wrapping_mul`, because reducing the
//! integer factor modulo 2¹²⁸ first does not change the product modulo 2¹²⁸.
//! Double precision cannot do this — for lacunary indices like 2ᵏ+k the
//! fractional part of `n·θ` is lost entirely once `k ≳ 40`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A point of the circle 𝕋, stored as a fraction of a turn in [0, 1)
/// with 128 fractional bits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Angle(pub u128);

#[derive(Debug, Clone, Error)]
pub enum AngleParseError {
    #[error("cannot parse angle from {0:?}")]
    Unparseable(String),
    #[error("zero denominator in rational angle {0:?}")]
    ZeroDenominator(String),
}

impl Angle {
    pub const ZERO: Angle = Angle(0);
    pub const HALF: Angle = Angle(1u128 << 127);

    /// Raw fixed-point word (numerator of 2⁻¹²⁸ units).
    pub fn raw(self) -> u128 {
        self.0
    }

    /// The fraction p/q of a turn, rounded down to 2⁻¹²⁸ resolution.
    /// Dyadic rationals (q a power of two up to 2¹²⁸) are exact.
    pub fn from_rational(p: i128, q: i128) -> Result<Angle, AngleParseError> {
        if q == 0 {
            return Err(AngleParseError::ZeroDenominator(format!("{p}/{q}")));
        }
        let negative = (p < 0) != (q < 0);
        let p = BigUint::from(p.unsigned_abs());
        let q = BigUint::from(q.unsigned_abs());
        let num = (p << 128u32) / q;
        let word = biguint_low_128(&num);
        Ok(if negative {
            Angle(word.wrapping_neg())
        } else {
            Angle(word)
        })
    }

    /// Exact dyadic fraction 2⁻ʲ of a turn, j ∈ [0, 128].
    pub fn dyadic(j: u32) -> Angle {
        assert!(j <= 128, "dyadic angle 2^-{j} below fixed-point resolution");
        if j == 0 {
            Angle::ZERO
        } else {
            Angle(1u128 << (128 - j))
        }
    }

    /// Nearest representable angle to an f64 number of turns.
    pub fn from_f64(turns: f64) -> Angle {
        let frac = turns.rem_euclid(1.0);
        // 2^128 as f64; frac * 2^128 fits in the u128 range since frac < 1.
        let scaled = frac * 340282366920938463463374607431768211456.0;
        if scaled >= 340282366920938463463374607431768211456.0 {
            Angle(0)
        } else {
            Angle(scaled as u128)
        }
    }

    /// Fractional part of √2, to 128 bits.
    pub fn sqrt2() -> Angle {
        static CACHE: OnceLock<u128> = OnceLock::new();
        Angle(*CACHE.get_or_init(|| {
            let two = BigUint::from(2u8) << 256u32;
            let root = two.sqrt(); // floor(sqrt(2) * 2^128)
            biguint_low_128(&(root - (BigUint::from(1u8) << 128u32)))
        }))
    }

    /// Fractional part of the golden ratio, (√5 − 1)/2, to 128 bits.
    pub fn golden() -> Angle {
        static CACHE: OnceLock<u128> = OnceLock::new();
        Angle(*CACHE.get_or_init(|| {
            let five = BigUint::from(5u8) << 256u32;
            let root = five.sqrt(); // floor(sqrt(5) * 2^128)
            biguint_low_128(&((root - (BigUint::from(1u8) << 128u32)) >> 1u32))
        }))
    }

    pub fn wrapping_add(self, other: Angle) -> Angle {
        Angle(self.0.wrapping_add(other.0))
    }

    pub fn wrapping_neg(self) -> Angle {
        Angle(self.0.wrapping_neg())
    }

    /// Exact `n · θ mod 1` for a signed integer factor.
    pub fn mul_int(self, n: i64) -> Angle {
        if n >= 0 {
            Angle(self.0.wrapping_mul(n as u128))
        } else {
            Angle(self.0.wrapping_mul(n.unsigned_abs() as u128)).wrapping_neg()
        }
    }

    /// Exact `n · θ mod 1` where only `n mod 2¹²⁸` is supplied.
    pub fn mul_wrapped(self, n_mod: u128) -> Angle {
        Angle(self.0.wrapping_mul(n_mod))
    }

    /// Exact `n · θ mod 1` for an arbitrary big integer.
    pub fn mul_bigint(self, n: &BigInt) -> Angle {
        let mag = biguint_low_128(n.magnitude());
        let scaled = self.mul_wrapped(mag);
        if n.is_negative() {
            scaled.wrapping_neg()
        } else {
            scaled
        }
    }

    /// Turns as a double (top 53 bits of the word).
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 340282366920938463463374607431768211456.0
    }

    /// The character value e^{2iπθ}.
    pub fn unit(self) -> Complex64 {
        let (s, c) = (std::f64::consts::TAU * self.to_f64()).sin_cos();
        Complex64::new(c, s)
    }

    /// Distance to 0 on the circle, in turns.
    pub fn dist_to_zero(self) -> f64 {
        let t = self.to_f64();
        t.min(1.0 - t)
    }

    /// Circle distance to another angle, in turns.
    pub fn dist(self, other: Angle) -> f64 {
        self.wrapping_add(other.wrapping_neg()).dist_to_zero()
    }
}

/// Low 128 bits of a big unsigned integer.
pub fn biguint_low_128(n: &BigUint) -> u128 {
    let mask = (BigUint::from(1u8) << 128u32) - BigUint::from(1u8);
    (n & &mask).to_u128().expect("masked to 128 bits")
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({:.12} turns, 0x{:032x})", self.to_f64(), self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:032x}", self.0)
    }
}

impl FromStr for Angle {
    type Err = AngleParseError;

    /// Accepted forms: `sqrt2`, `golden`, exact rationals `p/q`, decimal
    /// turns `0.125`, and raw fixed-point words `0x...` (32 hex digits max).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "sqrt2" => return Ok(Angle::sqrt2()),
            "golden" => return Ok(Angle::golden()),
            _ => {}
        }
        if let Some(hex) = s.strip_prefix("0x") {
            let word = u128::from_str_radix(hex, 16)
                .map_err(|_| AngleParseError::Unparseable(s.to_owned()))?;
            return Ok(Angle(word));
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p
                .trim()
                .parse()
                .map_err(|_| AngleParseError::Unparseable(s.to_owned()))?;
            let q: i128 = q
                .trim()
                .parse()
                .map_err(|_| AngleParseError::Unparseable(s.to_owned()))?;
            return Angle::from_rational(p, q);
        }
        let turns: f64 = s
            .parse()
            .map_err(|_| AngleParseError::Unparseable(s.to_owned()))?;
        Ok(Angle::from_f64(turns))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("0x{:032x}", self.0))
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn addition_wraps_exactly() {
        let third = Angle::from_rational(1, 3).unwrap();
        let sum = third.wrapping_add(third).wrapping_add(third);
        // 3 * floor(2^128/3) = 2^128 - 1, one ulp below zero.
        assert_eq!(sum.0, u128::MAX);
        let q = Angle::from_rational(1, 4).unwrap();
        assert_eq!(q.wrapping_add(q), Angle::HALF);
        assert_eq!(Angle::HALF.wrapping_add(Angle::HALF), Angle::ZERO);
    }

    #[test]
    fn dyadic_multiples_wrap_to_zero() {
        // 2^k * 2^-j is an integer for k >= j: the wrapped product must be 0.
        for j in 1..=40u32 {
            let pos = Angle::dyadic(j);
            for k in j..=60 {
                assert_eq!(pos.mul_int(1i64 << k), Angle::ZERO, "j={j} k={k}");
            }
            assert_eq!(pos.mul_int(1i64 << (j - 1)), Angle::HALF);
        }
    }

    #[test]
    fn wrapping_mul_matches_bigint_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let theta = Angle(rng.gen::<u128>());
            let n: u128 = rng.gen();
            let exact = BigUint::from(theta.0) * BigUint::from(n);
            let expected = biguint_low_128(&exact);
            assert_eq!(theta.mul_wrapped(n).0, expected);
        }
    }

    #[test]
    fn negative_multiplier_is_reflection() {
        let theta = Angle::sqrt2();
        let a = theta.mul_int(-17);
        let b = theta.mul_int(17).wrapping_neg();
        assert_eq!(a, b);
    }

    #[test]
    fn sqrt2_and_golden_words() {
        assert!((Angle::sqrt2().to_f64() - (2.0f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((Angle::golden().to_f64() - (5.0f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        // Golden ratio identity: phi^2 = phi + 1, i.e. frac(phi^2) = frac(phi).
        let g = Angle::golden();
        let g2 = g.mul_int(1).wrapping_add(g); // 2g = g + g
        let _ = g2;
        // frac((sqrt2)^2) = frac(2 + ... ) : (1+s)^2 = 3 + 2s with s = sqrt2-1,
        // so 2*s wraps to frac(2*sqrt2) = 2 s mod 1.
        let two_s = Angle::sqrt2().mul_int(2);
        assert!((two_s.to_f64() - (2.0 * 2.0f64.sqrt()).rem_euclid(1.0)).abs() < 1e-12);
    }

    #[test]
    fn parse_round_trips() {
        for text in ["1/3", "sqrt2", "golden", "0.125", "-1/4"] {
            let angle: Angle = text.parse().unwrap();
            let hex = angle.to_string();
            let back: Angle = hex.parse().unwrap();
            assert_eq!(angle, back, "{text}");
        }
        assert_eq!("0.5".parse::<Angle>().unwrap(), Angle::HALF);
        assert!("1/0".parse::<Angle>().is_err());
        assert!("abc".parse::<Angle>().is_err());
    }

    #[test]
    fn doubles_lose_lacunary_fractional_parts() {
        // n = 2^60: theta in f64 has 53 significant bits, so n*theta mod 1
        // computed in doubles carries no information, while the fixed-point
        // route keeps all 128 bits.
        let theta = Angle::sqrt2();
        let n = 1i64 << 60;
        let exact = theta.mul_int(n);
        let naive = ((n as f64) * theta.to_f64()).rem_euclid(1.0);
        assert!((exact.to_f64() - naive).abs() > 1e-6);
    }
}
