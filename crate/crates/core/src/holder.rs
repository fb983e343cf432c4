//! Hölder arithmetic on `(constant, exponent)` descriptors.
//!
//! Each combinator returns a descriptor that is valid for the combined
//! function whenever the inputs are valid for theirs. Some rules need side
//! information: products need bounds on `sup |f|`, reciprocals a positive
//! lower bound on `inf |f|`. These are carried as optional fields and the
//! combinators fail when they are missing.
//!
//! Exponents are never changed implicitly; align them with
//! [`HolderDescriptor::weaken`] before adding or multiplying.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolderError {
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("exponent mismatch: {0} vs {1}")]
    ExponentMismatch(f64, f64),
    #[error("missing side information: {0}")]
    MissingBound(&'static str),
    #[error("empty family")]
    Empty,
}

const EXPONENT_TOL: f64 = 1e-12;

/// Hölder descriptor: `|f(x) - f(x')| <= constant * d(x, x')^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderDescriptor {
    pub constant: f64,
    pub exponent: f64,
    /// Upper bound on `sup |f|`.
    pub sup_abs: Option<f64>,
    /// Strictly positive lower bound on `inf |f|`.
    pub inf_abs: Option<f64>,
}

impl HolderDescriptor {
    pub fn new(constant: f64, exponent: f64) -> Result<Self, HolderError> {
        if !(constant.is_finite() && constant >= 0.0) {
            return Err(HolderError::Invalid(format!("constant must be finite and >= 0, got {constant}")));
        }
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(HolderError::Invalid(format!("exponent must lie in (0, 1], got {exponent}")));
        }
        Ok(Self {
            constant,
            exponent,
            sup_abs: None,
            inf_abs: None,
        })
    }

    /// Lipschitz descriptor (exponent 1).
    pub fn lipschitz(constant: f64) -> Result<Self, HolderError> {
        Self::new(constant, 1.0)
    }

    /// A constant function `x -> value`: zero constant at any exponent.
    pub fn constant_fn(value: f64, exponent: f64) -> Result<Self, HolderError> {
        let mut h = Self::new(0.0, exponent)?;
        h.sup_abs = Some(value.abs());
        if value != 0.0 {
            h.inf_abs = Some(value.abs());
        }
        Ok(h)
    }

    pub fn with_sup_abs(mut self, sup_abs: f64) -> Result<Self, HolderError> {
        if !(sup_abs.is_finite() && sup_abs >= 0.0) {
            return Err(HolderError::Invalid(format!("sup_abs must be finite and >= 0, got {sup_abs}")));
        }
        self.sup_abs = Some(sup_abs);
        Ok(self)
    }

    pub fn with_inf_abs(mut self, inf_abs: f64) -> Result<Self, HolderError> {
        if !(inf_abs.is_finite() && inf_abs > 0.0) {
            return Err(HolderError::Invalid(format!("inf_abs must be finite and > 0, got {inf_abs}")));
        }
        self.inf_abs = Some(inf_abs);
        Ok(self)
    }

    fn same_exponent(&self, other: &Self) -> Result<(), HolderError> {
        if (self.exponent - other.exponent).abs() > EXPONENT_TOL {
            return Err(HolderError::ExponentMismatch(self.exponent, other.exponent));
        }
        Ok(())
    }

    /// `x -> r f(x)`.
    pub fn scale(&self, r: f64) -> Self {
        let a = r.abs();
        Self {
            constant: a * self.constant,
            exponent: self.exponent,
            sup_abs: self.sup_abs.map(|s| a * s),
            inf_abs: self.inf_abs.map(|s| a * s).filter(|s| *s > 0.0),
        }
    }

    /// `x -> f(x) + g(x)`.
    pub fn add(&self, g: &Self) -> Result<Self, HolderError> {
        self.same_exponent(g)?;
        Ok(Self {
            constant: self.constant + g.constant,
            exponent: self.exponent,
            sup_abs: self.sup_abs.zip(g.sup_abs).map(|(a, b)| a + b),
            inf_abs: None,
        })
    }

    /// `x -> f(x) g(x)`; needs `sup_abs` on both factors.
    pub fn multiply(&self, g: &Self) -> Result<Self, HolderError> {
        self.same_exponent(g)?;
        let mf = self.sup_abs.ok_or(HolderError::MissingBound("sup_abs of the first factor"))?;
        let mg = g.sup_abs.ok_or(HolderError::MissingBound("sup_abs of the second factor"))?;
        Ok(Self {
            constant: mf * g.constant + mg * self.constant,
            exponent: self.exponent,
            sup_abs: Some(mf * mg),
            inf_abs: self.inf_abs.zip(g.inf_abs).map(|(a, b)| a * b),
        })
    }

    /// `x -> f(x)^2`, the `multiply(f, f)` special case.
    pub fn square(&self) -> Result<Self, HolderError> {
        self.multiply(self)
    }

    /// `x -> f(g(x))`: constant `L_f * L_g^{p_f}`, exponent `p_f * p_g`.
    pub fn compose(&self, g: &Self) -> Self {
        Self {
            constant: self.constant * g.constant.powf(self.exponent),
            exponent: self.exponent * g.exponent,
            sup_abs: self.sup_abs,
            inf_abs: self.inf_abs,
        }
    }

    /// Pointwise supremum or infimum of a family with a common exponent.
    pub fn envelope(hs: &[Self]) -> Result<Self, HolderError> {
        let first = hs.first().ok_or(HolderError::Empty)?;
        for h in &hs[1..] {
            first.same_exponent(h)?;
        }
        let constant = hs.iter().map(|h| h.constant).fold(0.0, f64::max);
        let sup_abs = hs
            .iter()
            .map(|h| h.sup_abs)
            .try_fold(0.0_f64, |acc, s| s.map(|s| acc.max(s)));
        Ok(Self {
            constant,
            exponent: first.exponent,
            sup_abs,
            // min_i inf|f_i| does not bound inf|sup_i f_i| for mixed-sign families
            inf_abs: None,
        })
    }

    /// `x -> 1 / f(x)`; needs a positive `inf_abs`.
    pub fn reciprocal(&self) -> Result<Self, HolderError> {
        let b = self.inf_abs.ok_or(HolderError::MissingBound("inf_abs"))?;
        if !(b > 0.0) {
            return Err(HolderError::MissingBound("inf_abs must be positive"));
        }
        Ok(Self {
            constant: self.constant / (b * b),
            exponent: self.exponent,
            sup_abs: Some(1.0 / b),
            inf_abs: self.sup_abs.filter(|s| *s > 0.0).map(|s| 1.0 / s),
        })
    }

    /// `x -> |f(x)|` keeps constant and exponent.
    pub fn abs_of(&self) -> Self {
        *self
    }

    /// Lowers the exponent to `q`, given `oscillation_bound >= sup |f(x) - f(x')|`.
    pub fn weaken(&self, q: f64, oscillation_bound: f64) -> Result<Self, HolderError> {
        if !(q > 0.0 && q <= self.exponent + EXPONENT_TOL) {
            return Err(HolderError::Invalid(format!(
                "target exponent {q} must lie in (0, {}]",
                self.exponent
            )));
        }
        if !(oscillation_bound.is_finite() && oscillation_bound >= 0.0) {
            return Err(HolderError::Invalid(format!(
                "oscillation bound must be finite and >= 0, got {oscillation_bound}"
            )));
        }
        Ok(Self {
            constant: self.constant.max(oscillation_bound),
            exponent: q,
            ..*self
        })
    }
}
