//! Vectors of the two carrier spaces: fixed-dimension real tuples and
//! finitely-supported sequences (the c00 model), with the classical
//! norms used downstream.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{PnError, Result};

/// Which classical norm a space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        }
    }
}

/// A point of the carrier space. `Dense` is a fixed-dimension tuple;
/// `Sparse` is a finitely-supported sequence with zero entries elided,
/// so structural equality is function equality.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Dense(Vec<f64>),
    Sparse(BTreeMap<usize, f64>),
}

impl Vector {
    /// Fixed-dimension vector; rejects non-finite coordinates.
    pub fn dense(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(PnError::Domain("dense vector needs dimension >= 1".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(PnError::Domain(format!("non-finite coordinate {bad}")));
        }
        Ok(Vector::Dense(coords))
    }

    /// Finitely-supported sequence; zero entries are dropped.
    pub fn sparse(entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, v) in entries {
            if !v.is_finite() {
                return Err(PnError::Domain(format!("non-finite coordinate {v}")));
            }
            if v != 0.0 {
                map.insert(idx, v);
            }
        }
        Ok(Vector::Sparse(map))
    }

    pub fn zero_dense(dim: usize) -> Self {
        Vector::Dense(vec![0.0; dim])
    }

    pub fn zero_sparse() -> Self {
        Vector::Sparse(BTreeMap::new())
    }

    /// The standard basis vector `e_k` (0-indexed) in dimension `dim`.
    pub fn basis_dense(dim: usize, k: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[k] = 1.0;
        Vector::Dense(coords)
    }

    pub fn basis_sparse(k: usize) -> Self {
        Vector::Sparse(BTreeMap::from([(k, 1.0)]))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Dense(c) => c.iter().all(|&x| x == 0.0),
            Vector::Sparse(m) => m.is_empty(),
        }
    }

    /// Dimension of a dense vector; `None` for sequences.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Vector::Dense(c) => Some(c.len()),
            Vector::Sparse(_) => None,
        }
    }

    /// Errors unless both vectors live in the same carrier space.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        match (self, other) {
            (Vector::Dense(a), Vector::Dense(b)) if a.len() == b.len() => Ok(()),
            (Vector::Sparse(_), Vector::Sparse(_)) => Ok(()),
            _ => Err(PnError::DimensionMismatch(format!(
                "incompatible vectors: {self} and {other}"
            ))),
        }
    }

    /// Coordinatewise sum. Panics on incompatible carriers; boundary
    /// APIs run [`Vector::check_compatible`] first.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Vector::Dense(a), Vector::Dense(b)) => {
                assert_eq!(a.len(), b.len(), "dimension mismatch");
                Vector::Dense(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Vector::Sparse(a), Vector::Sparse(b)) => {
                let mut out = a.clone();
                for (&k, &v) in b {
                    let entry = out.entry(k).or_insert(0.0);
                    *entry += v;
                    if *entry == 0.0 {
                        out.remove(&k);
                    }
                }
                Vector::Sparse(out)
            }
            _ => panic!("cannot mix dense and sparse vectors"),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        match self {
            Vector::Dense(c) => Vector::Dense(c.iter().map(|x| x * k).collect()),
            Vector::Sparse(m) => {
                if k == 0.0 {
                    Vector::zero_sparse()
                } else {
                    Vector::Sparse(m.iter().map(|(&i, &v)| (i, v * k)).collect())
                }
            }
        }
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let acc = |iter: &mut dyn Iterator<Item = f64>| -> f64 {
            match kind {
                NormKind::L1 => iter.map(f64::abs).sum(),
                NormKind::L2 => iter.map(|x| x * x).sum::<f64>().sqrt(),
                NormKind::Linf => iter.map(f64::abs).fold(0.0, f64::max),
            }
        };
        match self {
            Vector::Dense(c) => acc(&mut c.iter().copied()),
            Vector::Sparse(m) => acc(&mut m.values().copied()),
        }
    }

    /// Dense coordinates; errors for sequences. Subspace solvers are
    /// coordinate-based and only exist in the finite-dim model.
    pub fn coords(&self) -> Result<&[f64]> {
        match self {
            Vector::Dense(c) => Ok(c),
            Vector::Sparse(_) => Err(PnError::Domain(
                "operation needs a fixed-dimension vector".into(),
            )),
        }
    }

    /// Entries of a sequence; errors for dense vectors.
    pub fn support(&self) -> Result<&BTreeMap<usize, f64>> {
        match self {
            Vector::Sparse(m) => Ok(m),
            Vector::Dense(_) => Err(PnError::Domain(
                "operation needs a finitely-supported sequence".into(),
            )),
        }
    }

    /// Euclidean inner product for same-carrier vectors.
    pub fn dot(&self, other: &Self) -> f64 {
        match (self, other) {
            (Vector::Dense(a), Vector::Dense(b)) => {
                assert_eq!(a.len(), b.len(), "dimension mismatch");
                a.iter().zip(b).map(|(x, y)| x * y).sum()
            }
            (Vector::Sparse(a), Vector::Sparse(b)) => a
                .iter()
                .filter_map(|(k, &v)| b.get(k).map(|&w| v * w))
                .sum(),
            _ => panic!("cannot mix dense and sparse vectors"),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vector::Dense(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Vector::Sparse(m) => {
                write!(f, "{{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "e{k}: {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// A linear self-map of the carrier space, used by the strong-boundedness
/// checks.
#[derive(Debug, Clone)]
pub enum LinearMap {
    /// Row-major square matrix acting on dense vectors.
    Matrix(Vec<Vec<f64>>),
    /// `p ↦ k p`, applicable to both carriers.
    Scale(f64),
}

impl LinearMap {
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        match self {
            LinearMap::Scale(k) => Ok(v.scale(*k)),
            LinearMap::Matrix(rows) => {
                let coords = v.coords()?;
                if rows.iter().any(|r| r.len() != coords.len()) {
                    return Err(PnError::DimensionMismatch(format!(
                        "matrix columns do not match vector dimension {}",
                        coords.len()
                    )));
                }
                Ok(Vector::Dense(
                    rows.iter()
                        .map(|r| r.iter().zip(coords).map(|(a, x)| a * x).sum())
                        .collect(),
                ))
            }
        }
    }
}
