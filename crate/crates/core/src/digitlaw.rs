//! First significant digits and the Newcomb–Benford probabilities in an
//! arbitrary radix.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positional radix used for digit extraction, `2..=36`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub const MIN: u32 = 2;
    pub const MAX: u32 = 36;
    pub const BINARY: Base = Base(2);
    pub const DECIMAL: Base = Base(10);

    pub fn new(value: u32) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&value) {
            Ok(Base(value))
        } else {
            Err(Error::domain(format!(
                "base {value} outside {}..={}",
                Self::MIN,
                Self::MAX
            )))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Number of possible leading digits, `base - 1`.
    pub fn digit_count(self) -> usize {
        (self.0 - 1) as usize
    }

    /// All leading digits `1..base` in ascending order.
    pub fn digits(self) -> impl Iterator<Item = Digit> {
        (1..self.0).map(move |value| Digit { value, base: self })
    }

    /// `log_base(x)`.
    pub fn log(self, x: f64) -> f64 {
        match self.0 {
            2 => x.log2(),
            10 => x.log10(),
            b => x.ln() / f64::from(b).ln(),
        }
    }

    /// Width of the leading-one window on the log axis, `log_base(2)`.
    pub fn ones_window(self) -> f64 {
        self.log(2.0)
    }
}

impl Default for Base {
    fn default() -> Self {
        Base::DECIMAL
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;

    fn try_from(value: u32) -> Result<Self> {
        Base::new(value)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A first significant digit: never zero, always below its base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digit {
    value: u32,
    base: Base,
}

impl Digit {
    pub fn new(value: u32, base: Base) -> Result<Self> {
        if value >= 1 && value < base.get() {
            Ok(Digit { value, base })
        } else {
            Err(Error::domain(format!(
                "digit {value} is not a leading digit in base {base}"
            )))
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn base(self) -> Base {
        self.base
    }

    /// Zero-based slot in per-digit arrays.
    pub fn index(self) -> usize {
        (self.value - 1) as usize
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `log_base(1 + 1/d)`.
pub fn benford_prob(d: Digit, base: Base) -> Result<f64> {
    if d.base != base {
        return Err(Error::domain(format!(
            "digit {} belongs to base {}, not base {base}",
            d.value, d.base
        )));
    }
    let d = f64::from(d.value);
    Ok(((d + 1.0) / d).ln() / base.as_f64().ln())
}

/// Benford probabilities for every leading digit of `base`, indexed by
/// `digit - 1`.
pub fn benford_distribution(base: Base) -> Vec<f64> {
    base.digits()
        .map(|d| benford_prob(d, base).expect("digit drawn from its own base"))
        .collect()
}

/// A positive value split as `mantissa × base^exponent` with
/// `1 <= mantissa < base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Significand {
    pub mantissa: f64,
    pub exponent: i32,
}

fn check_positive(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "digit extraction needs a positive finite value, got {x}"
        )))
    }
}

/// Splits `x` into mantissa and exponent.
///
/// In base 10 the mantissa is read from the shortest round-trip decimal
/// representation, so `0.3` leads with 3 even though the nearest double
/// lies just below it. Other bases scale by powers of the base and then
/// correct the exponent by direct comparison.
pub fn significand(x: f64, base: Base) -> Result<Significand> {
    check_positive(x)?;
    if base == Base::DECIMAL {
        let repr = format!("{x:e}");
        let (mant, exp) = repr.split_once('e').expect("`{:e}` always has an exponent");
        let mantissa: f64 = mant.parse().expect("formatted mantissa parses");
        let exponent: i32 = exp.parse().expect("formatted exponent parses");
        return Ok(Significand { mantissa, exponent });
    }
    let b = base.as_f64();
    let mut exponent = base.log(x).floor() as i32;
    let mut mantissa = scale_by_power(x, b, -exponent);
    // The log estimate can be off by one near exact powers.
    while mantissa >= b {
        exponent += 1;
        mantissa = scale_by_power(x, b, -exponent);
    }
    while mantissa < 1.0 {
        exponent -= 1;
        mantissa = scale_by_power(x, b, -exponent);
    }
    Ok(Significand { mantissa, exponent })
}

// x * b^k, split in two factors so subnormal inputs do not overflow.
fn scale_by_power(x: f64, b: f64, k: i32) -> f64 {
    let half = k / 2;
    x * b.powi(half) * b.powi(k - half)
}

/// The leading significant digit of `x` in `base`.
pub fn first_digit(x: f64, base: Base) -> Result<Digit> {
    let s = significand(x, base)?;
    let value = (s.mantissa.floor() as u32).clamp(1, base.get() - 1);
    Ok(Digit { value, base })
}

/// Fractional part of `log_base(x)` in `[0, 1)`, adjusted by at most a few
/// ulps so that `floor(base^r)` reproduces [`first_digit`].
pub fn log_fraction(x: f64, base: Base) -> Result<f64> {
    let s = significand(x, base)?;
    let digit = (s.mantissa.floor() as u32).clamp(1, base.get() - 1);
    Ok(fraction_for(s.mantissa, digit, base))
}

fn fraction_for(mantissa: f64, digit: u32, base: Base) -> f64 {
    let b = base.as_f64();
    let target = f64::from(digit);
    let below_one = 1.0f64.next_down();
    let mut r = base.log(mantissa).clamp(0.0, below_one);
    for _ in 0..64 {
        let d = b.powf(r).floor();
        if d < target {
            r = r.next_up().min(below_one);
        } else if d > target && r > 0.0 {
            r = r.next_down().max(0.0);
        } else {
            break;
        }
    }
    r
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn digit(x: f64, base: u32) -> u32 {
        first_digit(x, Base::new(base).unwrap()).unwrap().value()
    }

    #[test]
    fn base_bounds() {
        assert!(Base::new(1).is_err());
        assert!(Base::new(37).is_err());
        assert_eq!(Base::new(36).unwrap().digit_count(), 35);
        assert!(Digit::new(0, Base::DECIMAL).is_err());
        assert!(Digit::new(10, Base::DECIMAL).is_err());
    }

    #[test]
    fn benford_examples() {
        let one = Digit::new(1, Base::DECIMAL).unwrap();
        assert!((benford_prob(one, Base::DECIMAL).unwrap() - 0.30103).abs() < 5e-6);
        let bin_one = Digit::new(1, Base::BINARY).unwrap();
        assert_eq!(benford_prob(bin_one, Base::BINARY).unwrap(), 1.0);
        assert!(benford_prob(one, Base::BINARY).is_err());
        for b in 2..=36 {
            let total: f64 = benford_distribution(Base::new(b).unwrap()).iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "base {b}: {total}");
        }
    }

    #[test]
    fn benford_strictly_decreasing() {
        for b in 3..=36 {
            let p = benford_distribution(Base::new(b).unwrap());
            assert!(p.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn first_digit_examples() {
        assert_eq!(digit(3.14, 10), 3);
        assert_eq!(digit(0.00345, 10), 3);
        assert_eq!(digit(9.999e-10, 10), 9);
        assert_eq!(digit(0.75, 2), 1);
        assert_eq!(digit(0.3, 10), 3);
        assert_eq!(digit(1000.0, 10), 1);
        assert_eq!(digit(999.9999999999999, 10), 9);
        assert_eq!(digit(f64::MIN_POSITIVE / 8.0, 2), 1);
        assert_eq!(digit(f64::MAX, 10), 1);
        assert_eq!(digit(26.0, 5), 1); // 101_5
        assert_eq!(digit(24.0, 5), 4); // 44_5
        assert_eq!(digit(35.0, 36), 35);
    }

    #[test]
    fn first_digit_rejects_bad_input() {
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(first_digit(x, Base::DECIMAL).is_err());
            assert!(log_fraction(x, Base::DECIMAL).is_err());
        }
    }

    #[test]
    fn log_fraction_examples() {
        assert_eq!(log_fraction(100.0, Base::DECIMAL).unwrap(), 0.0);
        assert!((log_fraction(2.0, Base::DECIMAL).unwrap() - 0.30103).abs() < 5e-6);
        assert!((log_fraction(0.2, Base::DECIMAL).unwrap() - 0.30103).abs() < 5e-6);
    }

    #[test]
    fn log_fraction_matches_digit_for_a_million_values() {
        // xorshift keeps this test independent of the crate's own generator.
        let mut state = 0x9E37_79B9_7F4A_7C15u64;
        for _ in 0..1_000_000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = f64::from_bits((state >> 2) | 0x0010_0000_0000_0000);
            if !x.is_finite() || x <= 0.0 {
                continue;
            }
            let r = log_fraction(x, Base::DECIMAL).unwrap();
            assert!((0.0..1.0).contains(&r));
            assert_eq!(10f64.powf(r).floor() as u32, digit(x, 10), "x = {x:e}");
        }
    }

    proptest! {
        #[test]
        fn digit_in_range(x in 1e-300f64..1e300, b in 2u32..=36) {
            let d = digit(x, b);
            prop_assert!(d >= 1 && d < b);
            let base = Base::new(b).unwrap();
            let r = log_fraction(x, base).unwrap();
            prop_assert!((0.0..1.0).contains(&r));
            prop_assert_eq!(base.as_f64().powf(r).floor() as u32, d);
        }

        #[test]
        fn decimal_shift_invariance(m in 1.0f64..10.0, k in -200i32..200) {
            let x: f64 = format!("{m}e{k}").parse().unwrap();
            prop_assert_eq!(digit(x, 10), digit(m, 10));
        }

        #[test]
        fn binary_shift_invariance(x in 1e-100f64..1e100, k in -100i32..100) {
            let y = x * 2f64.powi(k);
            prop_assert_eq!(digit(y, 2), 1);
            prop_assert_eq!(
                log_fraction(y, Base::BINARY).unwrap(),
                log_fraction(x, Base::BINARY).unwrap()
            );
        }

        #[test]
        fn scale_shift_any_base(x in 1e-50f64..1e50, b in 3u32..=36, k in -20i32..20) {
            let base = Base::new(b).unwrap();
            let y = x * base.as_f64().powi(k);
            // Multiplication by a non-dyadic power rounds; skip values that
            // sit within rounding distance of a digit boundary.
            let m = significand(x, base).unwrap().mantissa;
            prop_assume!((m - m.round()).abs() > 1e-9);
            prop_assert_eq!(digit(y, b), digit(x, b));
        }
    }
}
