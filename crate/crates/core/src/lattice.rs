//! Integer lattice modes of the Fourier side of the torus.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg};

/// A Fourier mode `n = (n1, n2)` in `Z^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mode {
    pub n1: i64,
    pub n2: i64,
}

impl Mode {
    pub const ZERO: Mode = Mode { n1: 0, n2: 0 };

    pub const fn new(n1: i64, n2: i64) -> Self {
        Mode { n1, n2 }
    }

    /// `|n|^2 = n1^2 + n2^2`, exact.
    pub fn norm_sq(self) -> i64 {
        self.n1 * self.n1 + self.n2 * self.n2
    }

    /// `<n>^2 = 1 + |n|^2`, exact.
    pub fn bracket_sq(self) -> i64 {
        1 + self.norm_sq()
    }

    /// `n^perp = (-n2, n1)`.
    pub fn perp(self) -> Mode {
        Mode::new(-self.n2, self.n1)
    }

    pub fn dot(self, other: Mode) -> i64 {
        self.n1 * other.n1 + self.n2 * other.n2
    }

    /// `self . other^perp`, the signed area form used throughout the
    /// nonlinearity. Zero iff the modes are collinear.
    pub fn perp_dot(self, other: Mode) -> i64 {
        self.dot(other.perp())
    }

    pub fn is_zero(self) -> bool {
        self.n1 == 0 && self.n2 == 0
    }

    /// Max coordinate magnitude; a field truncated at `N` stores `sup_norm <= N`.
    pub fn sup_norm(self) -> i64 {
        self.n1.abs().max(self.n2.abs())
    }

    /// Membership in the positive half-lattice `Z^2_+` used by the sampler:
    /// `n1 > 0, or n1 = 0 and n2 >= 0`.
    pub fn in_positive_half(self) -> bool {
        self.n1 > 0 || (self.n1 == 0 && self.n2 >= 0)
    }

    /// Primitive direction of the line through the origin and `self`,
    /// normalized to lie in the positive half-lattice.
    pub fn primitive_direction(self) -> Option<Mode> {
        if self.is_zero() {
            return None;
        }
        let g = gcd(self.n1.unsigned_abs(), self.n2.unsigned_abs()) as i64;
        let dir = Mode::new(self.n1 / g, self.n2 / g);
        Some(if dir.in_positive_half() { dir } else { -dir })
    }
}

impl Add for Mode {
    type Output = Mode;
    fn add(self, rhs: Mode) -> Mode {
        Mode::new(self.n1 + rhs.n1, self.n2 + rhs.n2)
    }
}

impl Neg for Mode {
    type Output = Mode;
    fn neg(self) -> Mode {
        Mode::new(-self.n1, -self.n2)
    }
}

impl fmt::Debug for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n1, self.n2)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
