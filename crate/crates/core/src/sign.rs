//! The two-element multiplicative group {+1, -1}.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

/// An element of {+1, -1}.
///
/// Internally `true` encodes -1, so multiplication is XOR. This matches the
/// additive picture used by the packed cochains, where a set bit is a -1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sign(bool);

impl Sign {
    pub const PLUS: Sign = Sign(false);
    pub const MINUS: Sign = Sign(true);

    #[inline]
    pub const fn from_bit(minus: bool) -> Self {
        Sign(minus)
    }

    /// `true` iff this is -1.
    #[inline]
    pub const fn is_minus(self) -> bool {
        self.0
    }

    #[inline]
    pub const fn is_plus(self) -> bool {
        !self.0
    }

    #[inline]
    pub const fn to_i8(self) -> i8 {
        if self.0 {
            -1
        } else {
            1
        }
    }

    /// Accepts only `1` and `-1`.
    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::PLUS),
            -1 => Some(Sign::MINUS),
            _ => None,
        }
    }

    pub fn product<I: IntoIterator<Item = Sign>>(it: I) -> Sign {
        it.into_iter().fold(Sign::PLUS, |a, b| a * b)
    }
}

impl Mul for Sign {
    type Output = Sign;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Sign) -> Sign {
        Sign(self.0 ^ rhs.0)
    }
}

impl MulAssign for Sign {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn mul_assign(&mut self, rhs: Sign) {
        self.0 ^= rhs.0;
    }
}

impl Neg for Sign {
    type Output = Sign;
    #[inline]
    fn neg(self) -> Sign {
        Sign(!self.0)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "-1" } else { "+1" })
    }
}

impl std::str::FromStr for Sign {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "+1" | "1" => Ok(Sign::PLUS),
            "-1" => Ok(Sign::MINUS),
            _ => Err(()),
        }
    }
}
