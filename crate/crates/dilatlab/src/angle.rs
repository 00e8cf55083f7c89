use num_complex::Complex64;
use std::ops::{Add, Neg};

/// Purely imaginary dilation parameter theta = i*phi, stored by its imaginary part.
///
/// Composition of two dilations is additive in phi.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComplexAngle {
    phi: f64,
}

impl ComplexAngle {
    pub fn new(phi: f64) -> Self {
        assert!(phi.is_finite(), "dilation angle must be finite");
        ComplexAngle { phi }
    }

    pub fn zero() -> Self {
        ComplexAngle { phi: 0.0 }
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn is_zero(self) -> bool {
        self.phi == 0.0
    }

    /// e^(theta) = e^(i phi).
    pub fn scale_factor(self) -> Complex64 {
        Complex64::from_polar(1.0, self.phi)
    }

    /// e^(2 theta) = e^(2 i phi), the factor multiplying the potential sample.
    pub fn squared_factor(self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * self.phi)
    }

    /// e^(-2 theta), the factor taking the Tilde form to the Full form.
    pub fn inverse_squared_factor(self) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * self.phi)
    }
}

impl Add for ComplexAngle {
    type Output = ComplexAngle;
    fn add(self, rhs: ComplexAngle) -> ComplexAngle {
        ComplexAngle::new(self.phi + rhs.phi)
    }
}

impl Neg for ComplexAngle {
    type Output = ComplexAngle;
    fn neg(self) -> ComplexAngle {
        ComplexAngle::new(-self.phi)
    }
}
