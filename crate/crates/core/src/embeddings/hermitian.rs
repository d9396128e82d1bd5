//! The idempotent model: trace-one Hermitian projections of rank one.

use nalgebra::DMatrix;

use super::algebra::{AlgebraElement, Field, Ring};
use crate::error::KernelError;
use crate::linalg;
use crate::symbolic::Rational;

/// A 3×3 matrix over a Cayley-Dickson algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPoint<T: Ring> {
    k: usize,
    entries: [[AlgebraElement<T>; 3]; 3],
}

impl<T: Ring> HermitianPoint<T> {
    pub fn from_entries(entries: [[AlgebraElement<T>; 3]; 3]) -> Result<Self, KernelError> {
        let k = entries[0][0].dim();
        if entries.iter().flatten().any(|e| e.dim() != k) {
            return Err(KernelError::DimensionMismatch("mixed algebra dimensions".into()));
        }
        Ok(HermitianPoint { k, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement<T> {
        &self.entries[i][j]
    }

    pub fn trace(&self) -> T {
        (0..3).fold(T::zero(), |acc, i| acc.add(self.entries[i][i].re()))
    }

    /// `A - Āᵀ`.
    pub fn hermitian_defect(&self) -> [[AlgebraElement<T>; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].sub(&self.entries[j][i].conj())))
    }

    /// `A·A`; for octonions this is also the Jordan square.
    pub fn square(&self) -> [[AlgebraElement<T>; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(AlgebraElement::zero(self.k), |acc, m| acc.add(&self.entries[i][m].mul(&self.entries[m][j])))
            })
        })
    }

    /// `A² - A`.
    pub fn idempotency_defect(&self) -> [[AlgebraElement<T>; 3]; 3] {
        let sq = self.square();
        std::array::from_fn(|i| std::array::from_fn(|j| sq[i][j].sub(&self.entries[i][j])))
    }

    /// Real coordinates: the three diagonal entries, then the components of
    /// the entries above the diagonal in the order (0,1), (0,2), (1,2).
    pub fn real_coordinates(&self) -> Vec<T> {
        let mut out: Vec<T> = (0..3).map(|i| self.entries[i][i].re().clone()).collect();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            out.extend(self.entries[i][j].coords().iter().cloned());
        }
        out
    }
}

impl HermitianPoint<f64> {
    fn max_entry(m: &[[AlgebraElement<f64>; 3]; 3]) -> f64 {
        m.iter().flatten().map(|e| e.abs()).fold(0.0, f64::max)
    }

    /// Largest norm among the entries of `A² - A`, `A - Āᵀ`, and `|tr A - 1|`.
    pub fn invariant_defect(&self) -> f64 {
        Self::max_entry(&self.idempotency_defect())
            .max(Self::max_entry(&self.hermitian_defect()))
            .max((self.trace() - 1.0).abs())
    }
}

impl HermitianPoint<Rational> {
    pub fn satisfies_invariants(&self) -> bool {
        self.idempotency_defect().iter().flatten().all(|e| e.is_zero())
            && self.hermitian_defect().iter().flatten().all(|e| e.is_zero())
            && self.trace() == Rational::from_integer(1.into())
    }
}

/// The projection onto the line through `X`, computed in the chart where
/// `X_chart` is made real by right multiplication with its conjugate.
pub fn veronese_point<T: Field>(x: &[AlgebraElement<T>; 3], chart: usize) -> Result<HermitianPoint<T>, KernelError> {
    if chart > 2 {
        return Err(KernelError::IndexOutOfRange { row: chart, col: 0, dim: 3 });
    }
    let k = x[0].dim();
    if x.iter().any(|e| e.dim() != k) {
        return Err(KernelError::DimensionMismatch("mixed algebra dimensions".into()));
    }
    if x.iter().all(AlgebraElement::is_zero) {
        return Err(KernelError::Degenerate("zero vector".into()));
    }
    let y: [AlgebraElement<T>; 3] = if k == 8 {
        if x[chart].is_zero() {
            return Err(KernelError::Degenerate(format!("chart coordinate {chart} vanishes")));
        }
        let u = x[chart].conj();
        std::array::from_fn(|i| x[i].mul(&u))
    } else {
        x.clone()
    };
    let norm = y.iter().fold(T::zero(), |acc, e| acc.add(&e.norm()));
    let inv = norm.recip().ok_or_else(|| KernelError::Degenerate("zero vector".into()))?;
    let entries = std::array::from_fn(|i| std::array::from_fn(|j| y[i].mul(&y[j].conj()).scale(&inv)));
    HermitianPoint::from_entries(entries)
}

/// Uniform coordinates in `[-1, 1]`.
pub fn random_vector(k: usize, rng: &mut impl rand::Rng) -> [AlgebraElement<f64>; 3] {
    std::array::from_fn(|_| AlgebraElement::new((0..k).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("valid k"))
}

/// Small random integers, with a nonzero real part on coordinate 0.
pub fn random_exact_vector(k: usize, rng: &mut impl rand::Rng) -> [AlgebraElement<Rational>; 3] {
    std::array::from_fn(|i| {
        let coords = (0..k)
            .map(|c| {
                let v: i64 = if i == 0 && c == 0 { rng.gen_range(1..=5) } else { rng.gen_range(-5..=5) };
                Rational::from_integer(v.into())
            })
            .collect();
        AlgebraElement::new(coords).expect("valid k")
    })
}

fn check_samples<T: Ring>(k: usize, samples: &[HermitianPoint<T>]) -> Result<(), KernelError> {
    if samples.len() < 3 * k + 4 {
        return Err(KernelError::Degenerate(format!("{} samples, at least {} needed", samples.len(), 3 * k + 4)));
    }
    if samples.iter().any(|s| s.k() != k) {
        return Err(KernelError::DimensionMismatch("sample of the wrong algebra".into()));
    }
    Ok(())
}

/// Rank of the centered sample matrix, singular values below `1e-8` times
/// the largest counting as zero.
pub fn affine_span_dimension(k: usize, samples: &[HermitianPoint<f64>]) -> Result<usize, KernelError> {
    check_samples(k, samples)?;
    let rows: Vec<Vec<f64>> = samples.iter().map(HermitianPoint::real_coordinates).collect();
    let cols = rows[0].len();
    let mut mean = vec![0.0; cols];
    for r in &rows {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x / rows.len() as f64;
        }
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j] - mean[j]);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > 1e-8 * top).count())
}

/// Exact rank of the sample differences.
pub fn affine_span_dimension_exact(k: usize, samples: &[HermitianPoint<Rational>]) -> Result<usize, KernelError> {
    check_samples(k, samples)?;
    let base = samples[0].real_coordinates();
    let rows: Vec<Vec<Rational>> = samples[1..]
        .iter()
        .map(|s| s.real_coordinates().iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    Ok(linalg::rank(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::algebra::Exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_vector_projects_to_corner() {
        for k in [1, 2, 4, 8] {
            let x = [Exact::one(k), Exact::zero(k), Exact::zero(k)];
            let p = veronese_point(&x, 0).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == 0 && j == 0 { Exact::one(k) } else { Exact::zero(k) };
                    assert_eq!(p.get(i, j), &expect);
                }
            }
        }
    }

    #[test]
    fn zero_vector_rejected() {
        let x = [Exact::zero(2), Exact::zero(2), Exact::zero(2)];
        assert!(veronese_point(&x, 0).is_err());
        let y = [Exact::zero(8), Exact::one(8), Exact::zero(8)];
        assert!(veronese_point(&y, 0).is_err());
        assert!(veronese_point(&y, 1).is_ok());
    }

    #[test]
    fn exact_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in [1, 2, 4, 8] {
            for _ in 0..5 {
                let p = veronese_point(&random_exact_vector(k, &mut rng), 0).unwrap();
                assert!(p.satisfies_invariants(), "k = {k}");
            }
        }
    }

    #[test]
    fn equal_samples_span_nothing() {
        let x = [Exact::one(1), Exact::one(1), Exact::zero(1)];
        let p = veronese_point(&x, 0).unwrap();
        assert_eq!(affine_span_dimension_exact(1, &vec![p; 8]).unwrap(), 0);
    }

    #[test]
    fn too_few_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s: Vec<_> = (0..5).map(|_| veronese_point(&random_vector(2, &mut rng), 0).unwrap()).collect();
        assert!(affine_span_dimension(2, &s).is_err());
    }
}
