use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LackiError, Result};

/// Ordered collection of `(input, observation)` pairs with fixed dimensions.
///
/// Storage is row-major and contiguous so the prediction scan stays cache
/// friendly; use [`Dataset::input`] / [`Dataset::observation`] for row views.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    d: usize,
    m: usize,
    inputs: Vec<f64>,
    observations: Vec<f64>,
}

impl Dataset {
    /// Empty dataset with input dimension `d` and output dimension `m`.
    pub fn new(d: usize, m: usize) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(LackiError::InvalidConfig(
                "input and output dimensions must be at least 1".into(),
            ));
        }
        Ok(Self {
            d,
            m,
            inputs: Vec::new(),
            observations: Vec::new(),
        })
    }

    /// Builds a dataset from row vectors, validating shapes and finiteness.
    pub fn from_rows(d: usize, m: usize, inputs: &[Vec<f64>], observations: &[Vec<f64>]) -> Result<Self> {
        if inputs.len() != observations.len() {
            return Err(LackiError::DimensionMismatch {
                context: "observation count",
                expected: inputs.len(),
                actual: observations.len(),
            });
        }
        let mut data = Self::new(d, m)?;
        data.inputs.reserve(inputs.len() * d);
        data.observations.reserve(inputs.len() * m);
        for (x, y) in inputs.iter().zip(observations) {
            data.push(x, y)?;
        }
        Ok(data)
    }

    /// Scalar-to-scalar convenience constructor.
    pub fn from_scalar_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let mut data = Self::new(1, 1)?;
        for &(x, y) in pairs {
            data.push(&[x], &[y])?;
        }
        Ok(data)
    }

    pub fn input_dim(&self) -> usize {
        self.d
    }

    pub fn output_dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.inputs.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    #[inline]
    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.d..(i + 1) * self.d]
    }

    #[inline]
    pub fn observation(&self, i: usize) -> &[f64] {
        &self.observations[i * self.m..(i + 1) * self.m]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], &[f64])> + '_ {
        self.inputs
            .chunks_exact(self.d)
            .zip(self.observations.chunks_exact(self.m))
    }

    /// Checks a candidate pair without inserting it.
    pub fn check_pair(&self, x: &[f64], y: &[f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(LackiError::DimensionMismatch {
                context: "input",
                expected: self.d,
                actual: x.len(),
            });
        }
        if y.len() != self.m {
            return Err(LackiError::DimensionMismatch {
                context: "observation",
                expected: self.m,
                actual: y.len(),
            });
        }
        let row = self.len();
        if let Some(column) = x.iter().position(|v| !v.is_finite()) {
            return Err(LackiError::NonFinite {
                context: "input",
                row,
                column,
            });
        }
        if let Some(column) = y.iter().position(|v| !v.is_finite()) {
            return Err(LackiError::NonFinite {
                context: "observation",
                row,
                column,
            });
        }
        Ok(())
    }

    /// Appends one pair.
    pub fn push(&mut self, x: &[f64], y: &[f64]) -> Result<()> {
        self.check_pair(x, y)?;
        self.inputs.extend_from_slice(x);
        self.observations.extend_from_slice(y);
        Ok(())
    }

    /// Appends all rows of `other`, which must have the same dimensions.
    pub fn append(&mut self, other: &Dataset) -> Result<()> {
        self.check_dims(other.d, other.m)?;
        self.inputs.extend_from_slice(&other.inputs);
        self.observations.extend_from_slice(&other.observations);
        Ok(())
    }

    pub(crate) fn check_dims(&self, d: usize, m: usize) -> Result<()> {
        if d != self.d {
            return Err(LackiError::DimensionMismatch {
                context: "input dimension",
                expected: self.d,
                actual: d,
            });
        }
        if m != self.m {
            return Err(LackiError::DimensionMismatch {
                context: "output dimension",
                expected: self.m,
                actual: m,
            });
        }
        Ok(())
    }

    /// Copy with rows reordered by `order` (a permutation of `0..len`).
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut out = Self {
            d: self.d,
            m: self.m,
            inputs: Vec::with_capacity(self.inputs.len()),
            observations: Vec::with_capacity(self.observations.len()),
        };
        for &i in order {
            out.inputs.extend_from_slice(self.input(i));
            out.observations.extend_from_slice(self.observation(i));
        }
        out
    }

    /// Rows `range` as a new dataset.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            d: self.d,
            m: self.m,
            inputs: self.inputs[range.start * self.d..range.end * self.d].to_vec(),
            observations: self.observations[range.start * self.m..range.end * self.m].to_vec(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetRepr {
    d: usize,
    m: usize,
    inputs: Vec<Vec<f64>>,
    observations: Vec<Vec<f64>>,
}

impl Serialize for Dataset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DatasetRepr {
            d: self.d,
            m: self.m,
            inputs: self.inputs.chunks_exact(self.d).map(<[f64]>::to_vec).collect(),
            observations: self
                .observations
                .chunks_exact(self.m)
                .map(<[f64]>::to_vec)
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dataset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DatasetRepr::deserialize(deserializer)?;
        Dataset::from_rows(repr.d, repr.m, &repr.inputs, &repr.observations)
            .map_err(serde::de::Error::custom)
    }
}
