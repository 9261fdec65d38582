use crate::error::{Error, Result};
use crate::scalar::Real;

/// Field direction (θ, φ), rescaled coupling g and decay rate κ.
///
/// Energies and rates are in units of half the driving-field energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub theta: T,
    pub phi: T,
    pub g: T,
    pub kappa: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(theta: T, phi: T, g: T, kappa: T) -> Result<Self> {
        let p = Self { theta, phi, g, kappa };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.theta, self.phi, self.g, self.kappa];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("model parameters must be finite".into()));
        }
        if self.theta < T::zero() || self.theta > T::PI() {
            return Err(Error::InvalidParameter(format!("theta = {} outside [0, pi]", self.theta)));
        }
        if self.kappa < T::zero() {
            return Err(Error::InvalidParameter(format!("kappa = {} is negative", self.kappa)));
        }
        if self.g < T::zero() {
            return Err(Error::InvalidParameter(format!("g = {} is negative", self.g)));
        }
        Ok(())
    }

    pub fn with_phi(self, phi: T) -> Self {
        Self { phi, ..self }
    }

    pub fn with_theta(self, theta: T) -> Self {
        Self { theta, ..self }
    }

    pub fn with_kappa(self, kappa: T) -> Self {
        Self { kappa, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_values() {
        assert!(ModelParams::new(-0.1, 0.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(4.0, 0.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, -1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1.0, -0.5).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 1.0, 0.5).is_err());
        assert!(ModelParams::new(std::f64::consts::PI, 7.0, 0.0, 0.0).is_ok());
    }
}
