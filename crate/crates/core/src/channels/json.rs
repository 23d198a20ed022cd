//! Text form `{label, dim, kraus: [[[re, im], ...], ...]}`.
//!
//! Each Kraus operator is a flat row-major list of `dim²` complex entries.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{KrausMap, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub label: String,
    pub dim: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl ChannelRecord {
    pub fn from_map<T: Real>(map: &KrausMap<T>) -> Self {
        Self {
            label: map.label().to_string(),
            dim: map.dim(),
            kraus: map
                .kraus()
                .iter()
                .map(|k| {
                    k.as_slice()
                        .iter()
                        .map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_map<T: Real>(self) -> Result<KrausMap<T>> {
        let dim = self.dim;
        let kraus = self
            .kraus
            .into_iter()
            .map(|entries| {
                ComplexMatrix::new(
                    dim,
                    entries
                        .into_iter()
                        .map(|[re, im]| Complex::new(T::lit(re), T::lit(im)))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        KrausMap::new(self.label, kraus)
    }
}

impl<T: Real> QuantumChannel<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChannelRecord::from_map(self.as_map()))
            .expect("channel record serializes")
    }

    /// Parses and validates trace preservation.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: ChannelRecord =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        QuantumChannel::from_map(record.into_map()?)
    }
}
