use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{EncodedVector, FusedVector, SparseVector};

/// Coordinate-wise power mean of `L` encodings:
/// `V[j] = ((1/L) * sum_l V_l[j]^alpha)^(1/alpha)`.
///
/// Coordinates absent from every input stay absent. `L = 1` returns the
/// input unchanged and `alpha = 1` is evaluated as a plain arithmetic mean.
pub fn fuse<T: Scalar>(vectors: &[EncodedVector<T>], alpha: f64) -> Result<FusedVector<T>> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param(
            "alpha",
            format!("must be a positive finite number, got {alpha}"),
        ));
    }
    let Some(first) = vectors.first() else {
        return Err(Error::param("L", "fusion needs at least one vector"));
    };
    let dim = first.dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::Shape {
            context: "fused vector dimension",
            expected: dim,
            found: v.dim(),
        });
    }
    if vectors.len() == 1 {
        return Ok(first.clone());
    }

    let count = T::of(vectors.len() as f64);
    let arithmetic = alpha == 1.0;
    let a = T::of(alpha);
    let inv_a = T::of(1.0 / alpha);

    let mut pairs: Vec<(u32, T)> = vectors.iter().flat_map(|v| v.iter()).collect();
    pairs.sort_by_key(|&(i, _)| i);

    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut iter = pairs.into_iter().peekable();
    while let Some((i, v)) = iter.next() {
        let lift = |x: T| if arithmetic { x } else { x.powf(a) };
        let mut acc = lift(v);
        while let Some(&(_, w)) = iter.peek().filter(|(n, _)| *n == i) {
            acc += lift(w);
            iter.next();
        }
        let mean = acc / count;
        let out = if arithmetic { mean } else { mean.powf(inv_a) };
        if out > T::zero() {
            indices.push(i);
            values.push(out);
        }
    }
    Ok(SparseVector::from_sorted_unchecked(dim, indices, values))
}
