// SPDX-License-Identifier: Apache-2.0

//! Split-complex (hyperbolic) numbers `x + j·y` with `j² = +1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicNumber {
    pub x: f64,
    pub y: f64,
}

impl HyperbolicNumber {
    pub const ZERO: Self = Self::new(0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0);
    pub const J: Self = Self::new(0.0, 1.0);

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub const fn real(x: f64) -> Self {
        Self { x, y: 0.0 }
    }

    /// `e^{jθ} = cosh θ + j·sinh θ`.
    pub fn exp_j(theta: f64) -> Self {
        Self::new(theta.cosh(), theta.sinh())
    }

    pub fn conj(self) -> Self {
        Self::new(self.x, -self.y)
    }

    /// `z·conj(z) = x² − y²`; negative off the light cone.
    pub fn squared_modulus(self) -> f64 {
        self.x * self.x - self.y * self.y
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Add for HyperbolicNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for HyperbolicNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for HyperbolicNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul for HyperbolicNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.x * rhs.x + self.y * rhs.y,
            self.x * rhs.y + self.y * rhs.x,
        )
    }
}

impl Mul<f64> for HyperbolicNumber {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl fmt::Display for HyperbolicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y < 0.0 {
            write!(f, "{} - j{}", self.x, -self.y)
        } else {
            write!(f, "{} + j{}", self.x, self.y)
        }
    }
}
