use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{DistanceField, FeatureMatrix, Matrix};
use crate::scalar::Scalar;

/// Scales `row` to unit Euclidean norm; all-zero rows stay zero.
pub fn unit_normalize<T: Scalar>(row: &[T]) -> Vec<T> {
    let norm = row.iter().map(|&v| v * v).sum::<T>().sqrt();
    if norm > T::zero() {
        row.iter().map(|&v| v / norm).collect()
    } else {
        row.to_vec()
    }
}

pub(crate) fn normalized_rows<T: Scalar>(m: &FeatureMatrix<T>) -> Matrix<T> {
    let mut out = Matrix::zeros(m.count(), m.dim());
    for i in 0..m.count() {
        out.row_mut(i).copy_from_slice(&unit_normalize(m.row(i)));
    }
    out
}

#[inline]
pub(crate) fn half_euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    let sq: T = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x - y;
            d * d
        })
        .sum();
    let d = sq.sqrt() / T::of(2.0);
    // rounding can push antipodal pairs a hair above 1
    d.min(T::one())
}

/// Initial distances for one sub-feature.
///
/// Rows are unit-normalized and the Euclidean distance is halved, so every
/// entry lies in `[0, 1]`. The gallery block is computed on its upper
/// triangle and mirrored, which keeps it exactly symmetric with a zero
/// diagonal.
pub fn compute_initial_distances<T: Scalar>(
    probes: &FeatureMatrix<T>,
    galleries: &FeatureMatrix<T>,
) -> Result<DistanceField<T>> {
    if probes.dim() != galleries.dim() {
        return Err(Error::Shape {
            context: "probe/gallery feature dimension",
            expected: galleries.dim(),
            found: probes.dim(),
        });
    }
    let p = normalized_rows(probes);
    let g = normalized_rows(galleries);
    let n_p = p.rows();
    let n_g = g.rows();

    let mut query_gallery = Matrix::zeros(n_p, n_g);
    query_gallery
        .data_mut()
        .par_chunks_mut(n_g)
        .enumerate()
        .for_each(|(i, out)| {
            let a = p.row(i);
            for (j, o) in out.iter_mut().enumerate() {
                *o = half_euclidean(a, g.row(j));
            }
        });

    let mut gallery_gallery = Matrix::zeros(n_g, n_g);
    gallery_gallery
        .data_mut()
        .par_chunks_mut(n_g)
        .enumerate()
        .for_each(|(i, out)| {
            let a = g.row(i);
            for (j, o) in out.iter_mut().enumerate().skip(i + 1) {
                *o = half_euclidean(a, g.row(j));
            }
        });
    for i in 0..n_g {
        for j in 0..i {
            let v = gallery_gallery.get(j, i);
            gallery_gallery.set(i, j, v);
        }
    }

    Ok(DistanceField {
        query_gallery,
        gallery_gallery,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Role;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fm(rows: &[Vec<f64>], role: Role) -> FeatureMatrix<f64> {
        FeatureMatrix::from_rows(rows, role).unwrap()
    }

    #[test]
    fn analytic_cases() {
        let probes = fm(&[vec![3.0, 0.0]], Role::Probe);
        let galleries = fm(
            &[vec![1.5, 0.0], vec![0.0, 2.0], vec![-4.0, 0.0]],
            Role::Gallery,
        );
        let d = compute_initial_distances(&probes, &galleries).unwrap();
        assert_eq!(d.query_gallery.get(0, 0), 0.0);
        assert_abs_diff_eq!(d.query_gallery.get(0, 1), 0.70710678, epsilon = 1e-8);
        assert_eq!(d.query_gallery.get(0, 2), 1.0);
        d.validate().unwrap();
    }

    #[test]
    fn zero_rows_sit_at_half() {
        let probes = fm(&[vec![0.0, 0.0]], Role::Probe);
        let galleries = fm(&[vec![1.0, 0.0], vec![0.0, 5.0]], Role::Gallery);
        let d = compute_initial_distances(&probes, &galleries).unwrap();
        assert_eq!(d.query_gallery.row(0), &[0.5, 0.5]);
    }

    #[test]
    fn dimension_mismatch() {
        let probes = fm(&[vec![1.0, 0.0, 1.0]], Role::Probe);
        let galleries = fm(&[vec![1.0, 0.0]], Role::Gallery);
        assert!(matches!(
            compute_initial_distances(&probes, &galleries),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn works_in_f32() {
        let probes = FeatureMatrix::from_rows(&[vec![1.0_f32, 0.0]], Role::Probe).unwrap();
        let galleries =
            FeatureMatrix::from_rows(&[vec![0.0_f32, 1.0], vec![1.0, 0.0]], Role::Gallery).unwrap();
        let d = compute_initial_distances(&probes, &galleries).unwrap();
        assert!((d.query_gallery.get(0, 0) - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn field_invariants(
            rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 3..12),
            scale in 0.1f64..10.0,
        ) {
            let (p, g) = rows.split_at(1);
            let probes = fm(p, Role::Probe);
            let galleries = fm(g, Role::Gallery);
            let d = compute_initial_distances(&probes, &galleries).unwrap();
            d.validate().unwrap();
            for &v in d.query_gallery.as_slice().iter().chain(d.gallery_gallery.as_slice()) {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            let scaled = compute_initial_distances(&probes.scaled(scale), &galleries.scaled(scale)).unwrap();
            for (a, b) in d.query_gallery.as_slice().iter().zip(scaled.query_gallery.as_slice()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
