//! On-disk formats: JSON objects carrying complex matrices as separate
//! real/imaginary 2-D arrays, so the files stay diff-friendly and trivially
//! parseable.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use skewcorr_core::channels::KrausMap;
use skewcorr_core::linalg::density::{BipartiteState, DensityMatrix};
use skewcorr_core::scalar::C;
use skewcorr_core::{F64Bipartite, F64Channel, F64KrausMap, F64Matrix};

use crate::error::{usage, CliError, Result};

/// A complex matrix split into its real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixParts {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A density matrix together with its bipartite split `dims = [d_A, d_B]`
/// (use `d_B = 1` for a single system).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    #[serde(flatten)]
    pub matrix: MatrixParts,
}

/// A Kraus family; trace preservation is checked on load unless explicitly
/// waived.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub kraus: Vec<MatrixParts>,
}

impl MatrixParts {
    pub fn of(m: &F64Matrix) -> Self {
        let grab = |f: fn(&C<f64>) -> f64| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixParts {
            re: grab(|z| z.re),
            im: grab(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<F64Matrix> {
        let rows = self.re.len();
        if rows == 0 || self.im.len() != rows {
            return Err(usage("matrix parts are empty or of mismatched height"));
        }
        let cols = self.re[0].len();
        for part in [&self.re, &self.im] {
            if part.iter().any(|r| r.len() != cols) {
                return Err(usage("matrix parts are ragged"));
            }
        }
        let mut m = F64Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = C::new(self.re[i][j], self.im[i][j]);
            }
        }
        Ok(m)
    }
}

impl StateFile {
    pub fn of(state: &F64Bipartite) -> Self {
        StateFile {
            dims: [state.dim_a(), state.dim_b()],
            matrix: MatrixParts::of(state.state().matrix()),
        }
    }

    /// Parses and validates: the matrix must be a density matrix of
    /// dimension `dims[0] * dims[1]`.
    pub fn to_state(&self) -> Result<F64Bipartite> {
        let m = self.matrix.to_matrix()?;
        let rho = DensityMatrix::new(m)?;
        Ok(BipartiteState::new(self.dims[0], self.dims[1], rho)?)
    }
}

impl ChannelFile {
    pub fn of(map: &F64KrausMap) -> Self {
        ChannelFile {
            kraus: map.ops().iter().map(MatrixParts::of).collect(),
        }
    }

    /// Parses into a Kraus family; `allow_nontp` waives the
    /// trace-preservation check but never the shape checks.
    pub fn to_map(&self, allow_nontp: bool) -> Result<LoadedMap> {
        let ops = self
            .kraus
            .iter()
            .map(|p| p.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        let map = KrausMap::new(ops)?;
        if allow_nontp {
            return Ok(LoadedMap::Raw(map));
        }
        Ok(LoadedMap::Channel(F64Channel::from_map(map)?))
    }
}

/// A loaded Kraus family, either validated as trace preserving or accepted
/// raw under `--allow-nontp`.
pub enum LoadedMap {
    Channel(F64Channel),
    Raw(F64KrausMap),
}

impl LoadedMap {
    pub fn as_map(&self) -> &F64KrausMap {
        match self {
            LoadedMap::Channel(c) => c.as_map(),
            LoadedMap::Raw(m) => m,
        }
    }

    pub fn as_channel(&self) -> Option<&F64Channel> {
        match self {
            LoadedMap::Channel(c) => Some(c),
            LoadedMap::Raw(_) => None,
        }
    }
}

pub fn read_json<D: for<'a> Deserialize<'a>>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::Parse)?;
    text.push('\n');
    Ok(fs::write(path, text)?)
}
