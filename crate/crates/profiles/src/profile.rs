use crate::{BandDensity, ProfileError, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Tolerance used by every structural check on a profile.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Defects up to this size are repaired by one row renormalization.
pub const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Square,
    Bipartite,
}

/// Geometry of a circulant profile on the discrete torus `(Z/LZ)^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Torus {
    pub dimension: usize,
    pub side: usize,
    pub bandwidth: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<BandDensity>,
}

impl Torus {
    pub fn sites(&self) -> usize {
        self.side.pow(self.dimension as u32)
    }

    /// Flattened index of `x - y` on the torus, last coordinate fastest.
    pub fn difference(&self, x: usize, y: usize) -> usize {
        let l = self.side;
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.dimension {
            let dx = (x % l + l - y % l) % l;
            out += dx * scale;
            scale *= l;
            x /= l;
            y /= l;
        }
        out
    }

    /// Coordinates of a flattened site, folded into `[-L/2, L/2)`.
    pub fn centered_coords(&self, mut x: usize) -> Vec<i64> {
        let l = self.side as i64;
        let mut c = vec![0i64; self.dimension];
        for k in (0..self.dimension).rev() {
            let v = (x % self.side) as i64;
            c[k] = if v >= (l + 1) / 2 { v - l } else { v };
            x /= self.side;
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Dense(DMatrix<f64>),
    Circulant { torus: Torus, row: Vec<f64> },
}

/// Matrix of entry variances `σ²_ij`.
///
/// Square profiles are Markov kernels (unit row sums). Bipartite `M×N`
/// profiles have unit row sums and column sums `α = M/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfile {
    kind: ProfileKind,
    n_rows: usize,
    n_cols: usize,
    storage: Storage,
    builder: String,
}

fn row_defect(m: &DMatrix<f64>, target: f64) -> (usize, f64, f64) {
    let mut worst = (0, target, 0.0);
    for i in 0..m.nrows() {
        let s: f64 = m.row(i).iter().sum();
        if (s - target).abs() > worst.2 {
            worst = (i, s, (s - target).abs());
        }
    }
    worst
}

fn col_defect(m: &DMatrix<f64>, target: f64) -> (usize, f64, f64) {
    let mut worst = (0, target, 0.0);
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().sum();
        if (s - target).abs() > worst.2 {
            worst = (j, s, (s - target).abs());
        }
    }
    worst
}

impl VarianceProfile {
    /// Validates a dense square profile, renormalizing rows once if the
    /// row-sum defect is small.
    pub fn square(m: DMatrix<f64>, builder: &str) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(ProfileError::Domain(format!(
                "square profile needs a nonempty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let m = Self::check_entries_and_rows(m)?;
        Ok(Self {
            kind: ProfileKind::Square,
            n_rows: m.nrows(),
            n_cols: m.ncols(),
            storage: Storage::Dense(m),
            builder: builder.to_string(),
        })
    }

    /// Validates a dense bipartite `M×N` profile with `M ≤ N`.
    pub fn bipartite(m: DMatrix<f64>, builder: &str) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 || rows > cols {
            return Err(ProfileError::Domain(format!(
                "bipartite profile needs 0 < M <= N, got {rows}x{cols}"
            )));
        }
        let m = Self::check_entries_and_rows(m)?;
        let alpha = rows as f64 / cols as f64;
        let (col, sum, d) = col_defect(&m, alpha);
        if d > VALIDATION_TOL {
            return Err(ProfileError::ColSum { col, sum, target: alpha });
        }
        Ok(Self {
            kind: ProfileKind::Bipartite,
            n_rows: rows,
            n_cols: cols,
            storage: Storage::Dense(m),
            builder: builder.to_string(),
        })
    }

    fn check_entries_and_rows(mut m: DMatrix<f64>) -> Result<DMatrix<f64>> {
        if let Some(v) = m.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(ProfileError::Validation(format!("entry {v} is not a finite nonnegative number")));
        }
        let (row, sum, d) = row_defect(&m, 1.0);
        if d > VALIDATION_TOL {
            if d > RENORMALIZE_TOL {
                return Err(ProfileError::RowSum { row, sum, target: 1.0 });
            }
            for i in 0..m.nrows() {
                let s: f64 = m.row(i).iter().sum();
                m.row_mut(i).iter_mut().for_each(|v| *v /= s);
            }
        }
        Ok(m)
    }

    /// Circulant profile on a torus given its first row.
    pub(crate) fn circulant(torus: Torus, row: Vec<f64>, builder: &str) -> Result<Self> {
        let n = torus.sites();
        debug_assert_eq!(row.len(), n);
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > VALIDATION_TOL {
            return Err(ProfileError::RowSum { row: 0, sum: s, target: 1.0 });
        }
        Ok(Self {
            kind: ProfileKind::Square,
            n_rows: n,
            n_cols: n,
            storage: Storage::Circulant { torus, row },
            builder: builder.to_string(),
        })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Dimension of a square profile (number of rows).
    pub fn n(&self) -> usize {
        self.n_rows
    }

    pub fn builder(&self) -> &str {
        &self.builder
    }

    /// Aspect ratio `M/N`; equals one for square profiles.
    pub fn alpha(&self) -> f64 {
        self.n_rows as f64 / self.n_cols as f64
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m[(i, j)],
            Storage::Circulant { torus, row } => row[torus.difference(j, i)],
        }
    }

    /// Torus geometry and first row when stored in circulant form.
    pub fn circulant_row(&self) -> Option<(&Torus, &[f64])> {
        match &self.storage {
            Storage::Circulant { torus, row } => Some((torus, row)),
            Storage::Dense(_) => None,
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Circulant { .. } => DMatrix::from_fn(self.n_rows, self.n_cols, |i, j| self.entry(i, j)),
        }
    }

    pub fn max_row_defect(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => row_defect(m, 1.0).2,
            Storage::Circulant { row, .. } => (row.iter().sum::<f64>() - 1.0).abs(),
        }
    }

    /// Largest column-sum deviation from the nominal target (1 or α).
    pub fn max_col_defect(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => col_defect(m, self.alpha()).2,
            Storage::Circulant { row, .. } => (row.iter().sum::<f64>() - 1.0).abs(),
        }
    }

    pub fn symmetry_defect(&self) -> f64 {
        if self.kind == ProfileKind::Bipartite {
            return f64::INFINITY;
        }
        match &self.storage {
            Storage::Dense(m) => {
                let mut d: f64 = 0.0;
                for i in 0..self.n_rows {
                    for j in 0..i {
                        d = d.max((m[(i, j)] - m[(j, i)]).abs());
                    }
                }
                d
            }
            Storage::Circulant { torus, row } => {
                let mut d: f64 = 0.0;
                for x in 0..row.len() {
                    d = d.max((row[x] - row[torus.difference(0, x)]).abs());
                }
                d
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect() <= VALIDATION_TOL
    }

    /// Markov transition matrix of the profile chain.
    ///
    /// For bipartite profiles this is the `(M+N)`-state kernel
    /// `[[0, σ²], [α⁻¹ σ²ᵀ, 0]]`.
    pub fn transition_matrix(&self) -> DMatrix<f64> {
        match self.kind {
            ProfileKind::Square => self.dense(),
            ProfileKind::Bipartite => {
                let (m, n) = (self.n_rows, self.n_cols);
                let s = self.dense();
                let a = self.alpha();
                let mut p = DMatrix::zeros(m + n, m + n);
                p.view_mut((0, m), (m, n)).copy_from(&s);
                p.view_mut((m, 0), (n, m)).copy_from(&(s.transpose() / a));
                p
            }
        }
    }

    pub fn to_document(&self) -> ProfileDocument {
        let (storage, data, torus) = match &self.storage {
            Storage::Dense(m) => {
                let mut data = Vec::with_capacity(m.len());
                for i in 0..m.nrows() {
                    data.extend(m.row(i).iter());
                }
                (StorageTag::Dense, data, None)
            }
            Storage::Circulant { torus, row } => (StorageTag::Circulant, row.clone(), Some(torus.clone())),
        };
        ProfileDocument {
            kind: self.kind,
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            storage,
            data,
            metadata: ProfileMetadata { builder: self.builder.clone(), torus },
        }
    }

    pub fn from_document(doc: ProfileDocument) -> Result<Self> {
        let builder = doc.metadata.builder.as_str();
        match doc.storage {
            StorageTag::Dense => {
                if doc.data.len() != doc.n_rows * doc.n_cols {
                    return Err(ProfileError::Validation(format!(
                        "dense data holds {} values, expected {}",
                        doc.data.len(),
                        doc.n_rows * doc.n_cols
                    )));
                }
                let m = DMatrix::from_row_slice(doc.n_rows, doc.n_cols, &doc.data);
                match doc.kind {
                    ProfileKind::Square => Self::square(m, builder),
                    ProfileKind::Bipartite => Self::bipartite(m, builder),
                }
            }
            StorageTag::Circulant => {
                let torus = doc
                    .metadata
                    .torus
                    .ok_or_else(|| ProfileError::Validation("circulant storage requires torus metadata".into()))?;
                if doc.kind != ProfileKind::Square || doc.n_rows != torus.sites() || doc.n_cols != doc.n_rows {
                    return Err(ProfileError::Validation("circulant dimensions disagree with the torus".into()));
                }
                if doc.data.len() != torus.sites() || doc.data.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(ProfileError::Validation("circulant row is malformed".into()));
                }
                Self::circulant(torus, doc.data, builder)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("profile documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StorageTag {
    Dense,
    Circulant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileMetadata {
    pub builder: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<Torus>,
}

/// On-disk JSON form. Dense data is row-major; circulant data is the first row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub kind: ProfileKind,
    pub n_rows: usize,
    pub n_cols: usize,
    pub storage: StorageTag,
    pub data: Vec<f64>,
    pub metadata: ProfileMetadata,
}
