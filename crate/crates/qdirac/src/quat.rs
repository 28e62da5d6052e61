//! Complex and quaternion arithmetic in the symplectic decomposition.
//!
//! A quaternion `q = w + x*e1 + y*e2 + z*e3` is stored as a pair of complex
//! numbers `(za, zb)` with `q = za + zb*j` (so `za = w + x*i`, `zb = y + z*i`).
//! Because `j` does not commute with complex scalars (`j*z = conj(z)*j`),
//! this is equivalent to `q = za + j*conj(zb)`. The wavefunction channels,
//! written `phi_a + j*phi_b`, therefore map onto `(za, zb) = (phi_a, conj(phi_b))`.

use std::ops::{Add, Mul, Neg, Sub};

/// Base complex scalar for all amplitudes.
pub type Complex = num_complex::Complex64;

/// Quaternion in symplectic form: `q = za + zb*j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub za: Complex,
    pub zb: Complex,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    pub const ONE: Self = Self::new(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    pub const I: Self = Self::new(Complex::new(0.0, 1.0), Complex::new(0.0, 0.0));
    pub const J: Self = Self::new(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
    pub const K: Self = Self::new(Complex::new(0.0, 0.0), Complex::new(0.0, 1.0));

    pub const fn new(za: Complex, zb: Complex) -> Self {
        Self { za, zb }
    }

    /// Embeds a complex number as a quaternion with no j-part.
    pub fn from_complex(z: Complex) -> Self {
        Self::new(z, Complex::new(0.0, 0.0))
    }

    /// The product `j * z` for complex `z`, equal to `conj(z) * j`.
    ///
    /// This is the non-commutation rule that makes the ordering of complex
    /// coefficients and `j` significant everywhere else in the crate.
    pub fn j_times(z: Complex) -> Self {
        Self::new(Complex::new(0.0, 0.0), z.conj())
    }

    /// Quaternionic conjugate: negates all three imaginary parts.
    pub fn conj(self) -> Self {
        Self::new(self.za.conj(), -self.zb)
    }

    /// Squared norm `|q|^2 = |za|^2 + |zb|^2`.
    pub fn norm_sqr(self) -> f64 {
        self.za.norm_sqr() + self.zb.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// View as the four real components `(w, x, y, z)` of `w + x*e1 + y*e2 + z*e3`.
    #[cfg(test)]
    pub(crate) fn to_components(self) -> [f64; 4] {
        [self.za.re, self.za.im, self.zb.re, self.zb.im]
    }

    #[cfg(test)]
    pub(crate) fn from_components(c: [f64; 4]) -> Self {
        Self::new(Complex::new(c[0], c[1]), Complex::new(c[2], c[3]))
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.za + rhs.za, self.zb + rhs.zb)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.za - rhs.za, self.zb - rhs.zb)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.za, -self.zb)
    }
}

/// Hamilton product in symplectic form:
/// `(a + b*j)(c + d*j) = (a*c - b*conj(d)) + (a*d + b*conj(c))*j`.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.za * rhs.za - self.zb * rhs.zb.conj(),
            self.za * rhs.zb + self.zb * rhs.za.conj(),
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.za * rhs, self.zb * rhs)
    }
}
