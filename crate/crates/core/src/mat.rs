//! Dense symmetric matrix storage and small vector helpers.
//!
//! A [`SymmetricMatrix`] stores only the upper triangle (row-major) together
//! with an optional declared bandwidth. The bandwidth is a structural claim:
//! constructing a matrix with a declared bandwidth `d` requires every entry
//! with `|i - j| > d` to be exactly zero.

use crate::error::{Error, Result};

/// Real symmetric matrix of order `n`, upper triangle stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    /// Upper-triangle entries: row i holds A[i][i..n], rows concatenated.
    upper: Vec<f64>,
    /// Declared bandwidth: `Some(d)` asserts A[i][j] == 0 for |i-j| > d.
    bandwidth: Option<usize>,
}

impl SymmetricMatrix {
    /// Zero matrix of order `n` with no declared bandwidth.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix order must be positive");
        SymmetricMatrix {
            n,
            upper: vec![0.0; n * (n + 1) / 2],
            bandwidth: None,
        }
    }

    /// Builds a matrix from a full row-major dense buffer, symmetrizing
    /// nothing: the strict lower triangle must match the upper triangle to
    /// the last bit, otherwise the input was not symmetric.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                got: dense.len(),
            });
        }
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let a = dense[i * n + j];
                let b = dense[j * n + i];
                if a != b {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                m.set(i, j, a);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from explicit rows (used mostly by tests).
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut dense = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: r.len(),
                });
            }
            dense.extend_from_slice(r);
        }
        SymmetricMatrix::from_dense(n, &dense)
    }

    /// Declares a bandwidth, verifying that all out-of-band entries are
    /// exactly zero.
    pub fn with_bandwidth(mut self, d: usize) -> Result<Self> {
        for i in 0..self.n {
            for j in (i + d + 1)..self.n {
                let v = self.get(i, j);
                if v != 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) = {v} violates declared bandwidth {d}"
                    )));
                }
            }
        }
        self.bandwidth = Some(d);
        Ok(self)
    }

    /// Smallest `d` such that all entries with `|i-j| > d` are exactly zero.
    pub fn detect_bandwidth(&self) -> usize {
        let mut d = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != 0.0 {
                    d = d.max(j - i);
                }
            }
        }
        d
    }

    /// Matrix order.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared bandwidth, if any.
    pub fn bandwidth(&self) -> Option<usize> {
        self.bandwidth
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.n);
        // Row i starts after rows 0..i, which hold n, n-1, ..., n-i+1 entries.
        i * self.n - i * (i + 1) / 2 + j
    }

    /// Entry A[i][j] (symmetric indexing, either triangle).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i <= j {
            self.upper[self.idx(i, j)]
        } else {
            self.upper[self.idx(j, i)]
        }
    }

    /// Sets A[i][j] (and implicitly A[j][i]).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = if i <= j { self.idx(i, j) } else { self.idx(j, i) };
        self.upper[k] = v;
    }

    /// Full dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.upper[self.idx(i, j)];
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }

    /// Leading principal minor of order `k` (top-left k-by-k block).
    pub fn leading_minor(&self, k: usize) -> SymmetricMatrix {
        assert!(k >= 1 && k <= self.n);
        let mut m = SymmetricMatrix::zeros(k);
        for i in 0..k {
            for j in i..k {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// Contiguous principal window A[start..start+k][start..start+k].
    pub fn window(&self, start: usize, k: usize) -> SymmetricMatrix {
        assert!(k >= 1 && start + k <= self.n);
        let mut m = SymmetricMatrix::zeros(k);
        for i in 0..k {
            for j in i..k {
                m.set(i, j, self.get(start + i, start + j));
            }
        }
        m
    }

    /// Off-diagonal part of column `col`: entries A[0..col][col].
    /// This is the vector that a reconstruction step has to recover.
    pub fn column_head(&self, col: usize) -> Vec<f64> {
        assert!(col >= 1 && col < self.n);
        (0..col).map(|i| self.get(i, col)).collect()
    }

    /// Trace.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                s += v * v;
            }
        }
        s.sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut s = 0.0;
            for j in 0..self.n {
                s += self.get(i, j) * x[j];
            }
            y[i] = s;
        }
        y
    }

    /// Largest absolute entry of the difference with `other`.
    pub fn max_abs_diff(&self, other: &SymmetricMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                m = m.max((self.get(i, j) - other.get(i, j)).abs());
            }
        }
        m
    }

    /// Solves A x = b by Gaussian elimination with partial pivoting.
    /// Used for the handful of inverse entries the conic method needs.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        let mut a = self.to_dense();
        let mut x = b.to_vec();
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col].abs() < 1e-300 {
                return Err(Error::ZeroSpectrum {
                    min_abs: a[piv * n + col].abs(),
                });
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                }
                x.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in (col + 1)..n {
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                x[r] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            let mut s = x[col];
            for c in (col + 1)..n {
                s -= a[col * n + c] * x[c];
            }
            x[col] = s / a[col * n + col];
        }
        Ok(x)
    }
}

/// Dot product of equal-length slices.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Largest absolute component difference between two vectors.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
