//! On-disk fiducial format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Fiducial;
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::weyl::{BasisTag, Dimension};
use num_complex::Complex64 as C64;

pub const FORMAT_VERSION: u32 = 1;

/// A fiducial as written to disk: amplitudes as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FiducialFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub basis: String,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub provenance: BTreeMap<String, Value>,
    pub format_version: u32,
}

impl FiducialFile {
    pub fn from_fiducial(f: &Fiducial) -> Self {
        Self {
            n: f.dim.n(),
            basis: f.basis.as_str().to_string(),
            amplitudes: f.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
            provenance: f.provenance.clone(),
            format_version: FORMAT_VERSION,
        }
    }

    /// Validate and convert; the stored vector must already be normalised to within `1e-6`.
    pub fn into_fiducial(self) -> Result<Fiducial> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {}", self.format_version)));
        }
        let basis: BasisTag = self.basis.parse().map_err(|_| Error::Parse(format!("unknown basis {:?}", self.basis)))?;
        let dim = Dimension::new(self.n).map_err(|e| Error::Parse(e.to_string()))?;
        if self.amplitudes.len() != self.n {
            return Err(Error::Parse(format!("expected {} amplitudes, found {}", self.n, self.amplitudes.len())));
        }
        if self.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("amplitudes must be finite".into()));
        }
        let v = CVector::from_iterator(self.n, self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)));
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Parse(format!("amplitudes are not unit norm (norm {norm})")));
        }
        if basis == BasisTag::Monomial && dim.root().is_none() {
            return Err(Error::Parse(format!("monomial basis needs a square dimension, got {}", self.n)));
        }
        if basis == BasisTag::Adapted16 && self.n != 16 {
            return Err(Error::Parse("adapted16 basis needs N = 16".into()));
        }
        Ok(Fiducial { dim, basis, amplitudes: v, provenance: self.provenance })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fiducial files always serialise")
    }

    pub fn parse(text: &str) -> Result<Fiducial> {
        let f: FiducialFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        f.into_fiducial()
    }
}
