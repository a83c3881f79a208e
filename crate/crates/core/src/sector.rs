//! Momentum sectors of the periodic transverse-field Ising chain.
//!
//! After the Jordan-Wigner mapping the allowed quasimomenta depend on the
//! chain length parity and on the fermion-parity sector:
//!
//! | family | N    | parity | interior momenta `0 < k < pi`   | edge modes |
//! |--------|------|--------|---------------------------------|------------|
//! | KA     | 2n   | +      | (2j+1) pi / 2n,    j = 0..n-1   | none       |
//! | KB     | 2n   | -      | j pi / n,          j = 1..n-1   | 0 and pi   |
//! | KC     | 2n+1 | +      | (2j+1) pi / (2n+1), j = 0..n-1  | pi         |
//! | KD     | 2n+1 | -      | 2j pi / (2n+1),    j = 1..n     | 0          |
//!
//! Momenta are kept as exact rationals `num/den` of pi so that `cos(m k)`
//! and `sin(m k)` can be range-reduced in integer arithmetic.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Positive,
    Negative,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Positive => 1,
            Parity::Negative => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Self {
        if sign >= 0 {
            Parity::Positive
        } else {
            Parity::Negative
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Positive => Parity::Negative,
            Parity::Negative => Parity::Positive,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Positive => "+",
            Parity::Negative => "-",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "+" | "+1" | "1" | "pos" | "positive" => Ok(Parity::Positive),
            "-" | "-1" | "neg" | "negative" => Ok(Parity::Negative),
            other => Err(Error::Domain(format!("unknown parity {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    /// KA: even N, positive parity.
    EvenPos,
    /// KB: even N, negative parity.
    EvenNeg,
    /// KC: odd N, positive parity.
    OddPos,
    /// KD: odd N, negative parity.
    OddNeg,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [FamilyTag::EvenPos, FamilyTag::EvenNeg, FamilyTag::OddPos, FamilyTag::OddNeg];

    pub fn is_even(self) -> bool {
        matches!(self, FamilyTag::EvenPos | FamilyTag::EvenNeg)
    }

    pub fn parity(self) -> Parity {
        match self {
            FamilyTag::EvenPos | FamilyTag::OddPos => Parity::Positive,
            FamilyTag::EvenNeg | FamilyTag::OddNeg => Parity::Negative,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            FamilyTag::EvenPos => "ka",
            FamilyTag::EvenNeg => "kb",
            FamilyTag::OddPos => "kc",
            FamilyTag::OddNeg => "kd",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ka" | "a" | "even_pos" | "even-pos" => Ok(FamilyTag::EvenPos),
            "kb" | "b" | "even_neg" | "even-neg" => Ok(FamilyTag::EvenNeg),
            "kc" | "c" | "odd_pos" | "odd-pos" => Ok(FamilyTag::OddPos),
            "kd" | "d" | "odd_neg" | "odd-neg" => Ok(FamilyTag::OddNeg),
            other => Err(Error::Domain(format!("unknown momentum family {other:?}"))),
        }
    }
}

/// Which of the two sum families an identity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SumKind {
    /// `sum sinh(x) cos(m k) / (sin^2(k/2) + sinh^2(x/2))`
    F,
    /// `sum sin(k) sin(m k) / (sin^2(k/2) + sinh^2(x/2))`
    H,
}

impl SumKind {
    pub const ALL: [SumKind; 2] = [SumKind::F, SumKind::H];
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::F => "f",
            SumKind::H => "h",
        })
    }
}

impl FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" => Ok(SumKind::F),
            "h" => Ok(SumKind::H),
            other => Err(Error::Domain(format!("unknown sum kind {other:?}"))),
        }
    }
}

/// `cos(pi a / b)` with the argument reduced in integer arithmetic.
pub fn cos_pi_ratio<T: Real>(a: u128, b: u128) -> T {
    debug_assert!(b > 0);
    let mut r = a % (2 * b);
    if r > b {
        r = 2 * b - r;
    }
    let pi = T::PI();
    let frac = |num: u128, den: u128| pi * T::from_u128(num).unwrap() / T::from_u128(den).unwrap();
    if 4 * r <= b {
        frac(r, b).cos()
    } else if 4 * r <= 3 * b {
        // pi/2 - pi r/b = pi (b - 2r) / 2b, possibly negative
        if 2 * r <= b {
            frac(b - 2 * r, 2 * b).sin()
        } else {
            -frac(2 * r - b, 2 * b).sin()
        }
    } else {
        -frac(b - r, b).cos()
    }
}

/// `sin(pi a / b)` with the argument reduced in integer arithmetic.
pub fn sin_pi_ratio<T: Real>(a: u128, b: u128) -> T {
    debug_assert!(b > 0);
    let mut r = a % (2 * b);
    let mut sign = T::one();
    if r >= b {
        r -= b;
        sign = -sign;
    }
    if 2 * r > b {
        r = b - r;
    }
    let pi = T::PI();
    let frac = |num: u128, den: u128| pi * T::from_u128(num).unwrap() / T::from_u128(den).unwrap();
    let v = if 4 * r <= b { frac(r, b).sin() } else { frac(b - 2 * r, 2 * b).cos() };
    sign * v
}

/// Quasimomentum `k = pi * num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Momentum {
    pub num: u64,
    pub den: u64,
}

impl Momentum {
    pub fn radians<T: Real>(self) -> T {
        T::PI() * T::from_count(self.num) / T::from_count(self.den)
    }

    /// `cos(m k)`.
    pub fn cos_times<T: Real>(self, m: u64) -> T {
        cos_pi_ratio(m as u128 * self.num as u128, self.den as u128)
    }

    /// `sin(m k)`.
    pub fn sin_times<T: Real>(self, m: u64) -> T {
        sin_pi_ratio(m as u128 * self.num as u128, self.den as u128)
    }

    /// `sin(k / 2)`.
    pub fn half_sin<T: Real>(self) -> T {
        sin_pi_ratio(self.num as u128, 2 * self.den as u128)
    }

    /// `cos(k / 2)`.
    pub fn half_cos<T: Real>(self) -> T {
        cos_pi_ratio(self.num as u128, 2 * self.den as u128)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    pub interior: Vec<Momentum>,
    pub has_zero_mode: bool,
    pub has_pi_mode: bool,
}

impl MomentumGrid {
    pub fn radians<T: Real>(&self) -> Vec<T> {
        self.interior.iter().map(|k| k.radians()).collect()
    }
}

/// A momentum family with its half-size parameter `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorFamily {
    pub tag: FamilyTag,
    pub n: u64,
}

impl SectorFamily {
    pub fn new(tag: FamilyTag, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyFamily);
        }
        Ok(Self { tag, n })
    }

    /// Family of a periodic chain of `n_spins >= 2` spins in a parity sector.
    pub fn for_chain(n_spins: u64, parity: Parity) -> Result<Self> {
        if n_spins < 2 {
            return Err(Error::ChainSize(n_spins as usize, 2, usize::MAX));
        }
        let tag = match (n_spins % 2 == 0, parity) {
            (true, Parity::Positive) => FamilyTag::EvenPos,
            (true, Parity::Negative) => FamilyTag::EvenNeg,
            (false, Parity::Positive) => FamilyTag::OddPos,
            (false, Parity::Negative) => FamilyTag::OddNeg,
        };
        Self::new(tag, n_spins / 2)
    }

    pub fn spin_count(&self) -> u64 {
        if self.tag.is_even() {
            2 * self.n
        } else {
            2 * self.n + 1
        }
    }

    pub fn parity(&self) -> Parity {
        self.tag.parity()
    }

    pub fn interior_count(&self) -> u64 {
        match self.tag {
            FamilyTag::EvenNeg => self.n - 1,
            _ => self.n,
        }
    }

    /// Interior momenta in increasing order.
    pub fn interior(&self) -> impl Iterator<Item = Momentum> + Clone {
        let n = self.n;
        let (start, count, step, offset, den) = match self.tag {
            FamilyTag::EvenPos => (0, n, 2, 1, 2 * n),
            FamilyTag::EvenNeg => (1, n - 1, 1, 0, n),
            FamilyTag::OddPos => (0, n, 2, 1, 2 * n + 1),
            FamilyTag::OddNeg => (1, n, 2, 0, 2 * n + 1),
        };
        (start..start + count).map(move |j| Momentum { num: step * j + offset, den })
    }

    pub fn momenta(&self) -> MomentumGrid {
        MomentumGrid {
            interior: self.interior().collect(),
            has_zero_mode: matches!(self.tag, FamilyTag::EvenNeg | FamilyTag::OddNeg),
            has_pi_mode: matches!(self.tag, FamilyTag::EvenNeg | FamilyTag::OddPos),
        }
    }

    /// Orders `m` for which the closed form of the given kind holds.
    pub fn order_range(&self, kind: SumKind) -> RangeInclusive<u64> {
        let n = self.n;
        match (kind, self.tag.is_even()) {
            (SumKind::F, true) => 0..=2 * n,
            (SumKind::F, false) => 0..=2 * n + 1,
            (SumKind::H, true) => 1..=2 * n - 1,
            (SumKind::H, false) => 1..=2 * n,
        }
    }

    /// Orders for which the auxiliary sum has its tabulated integer value.
    pub fn delta_range(&self) -> RangeInclusive<u64> {
        if self.tag.is_even() {
            1..=2 * self.n - 1
        } else {
            1..=2 * self.n
        }
    }

    pub fn check_order(&self, kind: SumKind, m: u64) -> Result<()> {
        let range = self.order_range(kind);
        if range.contains(&m) {
            Ok(())
        } else {
            Err(Error::OrderOutOfRange { m, lo: *range.start(), hi: *range.end() })
        }
    }
}

impl fmt::Display for SectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.tag, self.n)
    }
}
