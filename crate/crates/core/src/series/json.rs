use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Basis, SeriesApprox};
use crate::error::{invalid, Result};

/// On-disk coefficient file. `coeffs` is row-major in shifted-index order.
/// `index_range` is present only for Fourier axes that are not [−d, d].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesFile {
    pub basis: Basis,
    #[serde(rename = "D")]
    pub dims: usize,
    pub degrees: Vec<usize>,
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_range: Option<Vec<[i64; 2]>>,
}

impl From<&SeriesApprox> for SeriesFile {
    fn from(s: &SeriesApprox) -> Self {
        let index_range = s.is_asymmetric().then(|| {
            s.lower()
                .iter()
                .zip(s.shape())
                .map(|(&lo, &len)| [lo, lo + len as i64 - 1])
                .collect()
        });
        SeriesFile {
            basis: s.basis(),
            dims: s.dims(),
            degrees: s.degrees(),
            coeffs: s.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            index_range,
        }
    }
}

impl TryFrom<SeriesFile> for SeriesApprox {
    type Error = crate::Error;

    fn try_from(f: SeriesFile) -> Result<Self> {
        if f.degrees.len() != f.dims {
            return invalid(format!("D = {} but {} degrees given", f.dims, f.degrees.len()));
        }
        let coeffs: Vec<Complex64> = f.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        match (f.basis, f.index_range) {
            (Basis::Fourier, Some(ranges)) => {
                if ranges.len() != f.dims {
                    return invalid("index_range length differs from D");
                }
                let mut lower = Vec::with_capacity(ranges.len());
                let mut lens = Vec::with_capacity(ranges.len());
                for [lo, hi] in ranges {
                    if hi < lo {
                        return invalid(format!("empty index range [{lo}, {hi}]"));
                    }
                    lower.push(lo);
                    lens.push((hi - lo + 1) as usize);
                }
                let s = SeriesApprox::fourier_range(lower, lens, coeffs)?;
                if s.degrees() != f.degrees {
                    return invalid("degrees inconsistent with index_range");
                }
                Ok(s)
            }
            (Basis::Chebyshev, Some(_)) => invalid("index_range is only meaningful for Fourier series"),
            (basis, None) => SeriesApprox::new(basis, &f.degrees, coeffs),
        }
    }
}

impl SeriesApprox {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SeriesFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SeriesFile = serde_json::from_str(text)?;
        f.try_into()
    }
}
