use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A point `z = u + iv` of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperPoint(Complex64);

impl UpperPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return invalid(format!("Stieltjes argument needs Im z > 0, got {re} + {im}i"));
        }
        Ok(Self(Complex64::new(re, im)))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// `i`, the default evaluation point of most diagnostics.
    pub fn i() -> Self {
        Self(Complex64::new(0.0, 1.0))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    /// Principal square root; stays in the upper half-plane.
    pub fn sqrt(&self) -> Self {
        Self(self.0.sqrt())
    }
}
