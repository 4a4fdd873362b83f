//! Exact half-integers, stored as a count of halves.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(pub i64);

impl Half {
    pub const ZERO: Half = Half(0);

    pub fn from_int(n: i64) -> Half {
        Half(2 * n)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if there is one.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn scale(self, k: i64) -> Half {
        Half(self.0 * k)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl AddAssign for Half {
    fn add_assign(&mut self, o: Half) {
        self.0 += o.0;
    }
}

impl SubAssign for Half {
    fn sub_assign(&mut self, o: Half) {
        self.0 -= o.0;
    }
}

impl std::iter::Sum for Half {
    fn sum<I: Iterator<Item = Half>>(it: I) -> Half {
        it.fold(Half::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_arith() {
        assert_eq!(Half(3).to_string(), "3/2");
        assert_eq!(Half(-1).to_string(), "-1/2");
        assert_eq!(Half(4).to_string(), "2");
        assert_eq!(Half(1) + Half(1), Half::from_int(1));
        assert_eq!((Half(3) - Half(5)).to_int(), Some(-1));
    }
}
