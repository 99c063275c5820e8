use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which side of the retrieval problem a feature matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Probe,
    Gallery,
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                context: "matrix payload",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape {
                    context: "matrix row length",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        // chunks_exact on an empty row width would panic
        let cols = self.cols.max(1);
        self.data.chunks_exact(cols).take(self.rows)
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
}

/// Features of a set of entities, one row per entity.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T> {
    values: Matrix<T>,
    role: Role,
}

impl<T: Scalar> FeatureMatrix<T> {
    /// Wraps a matrix after checking it is non-empty and finite.
    pub fn new(values: Matrix<T>, role: Role) -> Result<Self> {
        if values.rows() == 0 || values.cols() == 0 {
            return Err(Error::InvalidData(format!(
                "feature matrix must be non-empty, got {}x{}",
                values.rows(),
                values.cols()
            )));
        }
        if let Some(pos) = values.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite feature value at row {}, column {}",
                pos / values.cols(),
                pos % values.cols()
            )));
        }
        Ok(Self { values, role })
    }

    pub fn from_rows(rows: &[Vec<T>], role: Role) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, role)
    }

    pub fn count(&self) -> usize {
        self.values.rows()
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn row(&self, i: usize) -> &[T] {
        self.values.row(i)
    }

    pub fn values(&self) -> &Matrix<T> {
        &self.values
    }

    /// Gathers the given columns, in order, into a new matrix with the same role.
    pub fn select_columns(&self, columns: &[usize]) -> FeatureMatrix<T> {
        let mut out = Matrix::zeros(self.count(), columns.len());
        for r in 0..self.count() {
            let src = self.values.row(r);
            for (dst, &c) in out.row_mut(r).iter_mut().zip(columns) {
                *dst = src[c];
            }
        }
        FeatureMatrix {
            values: out,
            role: self.role,
        }
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: T) -> FeatureMatrix<T> {
        let mut out = self.clone();
        out.values.data_mut().iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> FeatureMatrix<U> {
        let data = self
            .values
            .as_slice()
            .iter()
            .map(|v| U::of(v.to_f64_lossy()))
            .collect();
        FeatureMatrix {
            values: Matrix {
                rows: self.values.rows,
                cols: self.values.cols,
                data,
            },
            role: self.role,
        }
    }
}

/// Query-to-gallery and gallery-to-gallery distances for one sub-feature.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField<T> {
    pub query_gallery: Matrix<T>,
    pub gallery_gallery: Matrix<T>,
}

impl<T: Scalar> DistanceField<T> {
    pub fn probe_count(&self) -> usize {
        self.query_gallery.rows()
    }

    pub fn gallery_count(&self) -> usize {
        self.gallery_gallery.rows()
    }

    /// Checks shapes, finiteness, non-negativity, symmetry and the zero diagonal.
    pub fn validate(&self) -> Result<()> {
        let n = self.gallery_gallery.rows();
        if self.gallery_gallery.cols() != n {
            return Err(Error::Shape {
                context: "gallery-gallery distances (columns)",
                expected: n,
                found: self.gallery_gallery.cols(),
            });
        }
        if self.query_gallery.cols() != n {
            return Err(Error::Shape {
                context: "query-gallery distances (columns)",
                expected: n,
                found: self.query_gallery.cols(),
            });
        }
        let bad = |v: &T| !v.is_finite() || *v < T::zero();
        if self.query_gallery.as_slice().iter().any(bad)
            || self.gallery_gallery.as_slice().iter().any(bad)
        {
            return Err(Error::InvalidData(
                "distances must be finite and nonnegative".into(),
            ));
        }
        for i in 0..n {
            if self.gallery_gallery.get(i, i) != T::zero() {
                return Err(Error::InvalidData(format!(
                    "gallery self-distance at {i} is not zero"
                )));
            }
            for j in 0..i {
                if self.gallery_gallery.get(i, j) != self.gallery_gallery.get(j, i) {
                    return Err(Error::InvalidData(format!(
                        "gallery distances are not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }
}
