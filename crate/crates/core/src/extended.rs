use core::fmt;
use core::iter::Sum;
use core::ops::Add;

/// A real number or `+∞`.
///
/// Relative entropies and the information built from them can be infinite when a
/// support condition fails. Any sum involving `+∞` is `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtReal {
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::PosInfinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInfinity => None,
        }
    }

    /// `f64` view, with `+∞` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInfinity => f64::INFINITY,
        }
    }

    /// Multiply by a nonnegative scalar, using `0·∞ = 0`.
    pub fn scale(self, c: f64) -> ExtReal {
        debug_assert!(c >= 0.0);
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(c * v),
            ExtReal::PosInfinity if c == 0.0 => ExtReal::ZERO,
            ExtReal::PosInfinity => ExtReal::PosInfinity,
        }
    }

    /// `self - rhs` when it is defined; `∞ - ∞` yields `None`.
    pub fn checked_sub(self, rhs: ExtReal) -> Option<ExtReal> {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Some(ExtReal::Finite(a - b)),
            (ExtReal::PosInfinity, ExtReal::Finite(_)) => Some(ExtReal::PosInfinity),
            _ => None,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtReal::PosInfinity
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInfinity,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: f64) -> ExtReal {
        self + ExtReal::Finite(rhs)
    }
}

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, Add::add)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtReal::PosInfinity => f.write_str("+inf"),
        }
    }
}
