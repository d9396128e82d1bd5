//! Maurer-Cartan matrices of the quadratic coordinate model.
//!
//! With homogeneous coordinates `X_0, X_1, X_2` over the algebra and
//! `dX_j = Σ_k θ_jk X_k`, the frame vectors are the real quadratic functions
//! `A = (|X_0|², X_0 X̄_1, X_0 X̄_2, |X_1|², X_1 X̄_2, |X_2|²)` taken
//! componentwise. Each `dA_i` is a quadratic in the coordinates with
//! coefficients linear in the components of `θ`, and is rewritten as
//! `Σ_j c_ij A_j` by an exact linear solve.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::algebra::{AlgebraElement, Real};
use super::FormMatrix;
use crate::error::KernelError;
use crate::linalg;
use crate::symbolic::{Monomial, Polynomial, Rational, ScalarSymbol, SymbolKind};

/// Symbolic coordinates and connection forms of the standard embedding.
#[derive(Clone, Debug)]
pub struct EmbeddingCoordinates {
    pub k: usize,
    pub x: [AlgebraElement<Polynomial>; 3],
    pub theta: [[AlgebraElement<Polynomial>; 3]; 3],
}

impl EmbeddingCoordinates {
    pub fn new(k: usize) -> Result<Self, KernelError> {
        super::algebra::check_dimension(k)?;
        let elem = |f: &dyn Fn(usize) -> ScalarSymbol| {
            AlgebraElement::new((0..k).map(|c| Polynomial::symbol(f(c))).collect()).expect("valid k")
        };
        let x = std::array::from_fn(|j| elem(&|c| ScalarSymbol::coordinate(j, c)));
        let theta = std::array::from_fn(|j| std::array::from_fn(|m| elem(&|c| ScalarSymbol::form_component(j, m, c))));
        Ok(EmbeddingCoordinates { k, x, theta })
    }

    /// `dX_j = Σ_m θ_jm X_m`.
    pub fn dx(&self, j: usize) -> AlgebraElement<Polynomial> {
        (0..3).fold(AlgebraElement::zero(self.k), |acc, m| acc.add(&self.theta[j][m].mul(&self.x[m])))
    }

    /// The `3k + 3` quadratic frame functions.
    pub fn frame_functions(&self) -> Vec<Polynomial> {
        frame_functions(&self.x)
    }

    /// `dA_i` as a polynomial in coordinates and form components.
    pub fn differentials(&self) -> Vec<Polynomial> {
        let mut dcoord = BTreeMap::new();
        for j in 0..3 {
            for (c, p) in self.dx(j).coords().iter().enumerate() {
                dcoord.insert(ScalarSymbol::coordinate(j, c), p.clone());
            }
        }
        self.frame_functions()
            .iter()
            .map(|a| {
                let mut out = Polynomial::zero();
                for (s, dp) in &dcoord {
                    let partial = a.derivative(s);
                    if !partial.is_zero() {
                        out += &(&partial * dp);
                    }
                }
                out
            })
            .collect()
    }
}

/// Componentwise `|X_0|², X_0 X̄_1, X_0 X̄_2, |X_1|², X_1 X̄_2, |X_2|²`.
pub fn frame_functions<T: super::algebra::Ring>(x: &[AlgebraElement<T>; 3]) -> Vec<T> {
    let mut out = Vec::new();
    for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
        if i == j {
            out.push(x[i].norm());
        } else {
            out.extend(x[i].mul(&x[j].conj()).coords().iter().cloned());
        }
    }
    out
}

/// The Maurer-Cartan matrix `dA_i = Σ_j c_ij A_j` of the standard embedding.
pub fn derive_maurer_cartan(k: usize) -> Result<FormMatrix, KernelError> {
    if !matches!(k, 1 | 2 | 4) {
        return Err(KernelError::InvalidK(k));
    }
    let coords = EmbeddingCoordinates::new(k)?;
    let frame = coords.frame_functions();
    let diffs = coords.differentials();

    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut index = |m: &Monomial| {
        let next = monomials.len();
        *monomials.entry(m.clone()).or_insert(next)
    };
    let frame_cols: Vec<Vec<(usize, Rational)>> =
        frame.iter().map(|a| a.terms().map(|(m, c)| (index(m), c.clone())).collect()).collect();

    // dA_i = Σ_s s · q_is with q_is quadratic in the coordinates
    let mut rhs_keys: Vec<(usize, ScalarSymbol)> = Vec::new();
    let mut rhs_cols: Vec<Vec<(usize, Rational)>> = Vec::new();
    for (i, d) in diffs.iter().enumerate() {
        let (lin, rest) = d
            .linear_split(|s| s.kind == SymbolKind::EmbeddingFormComponent)
            .ok_or_else(|| KernelError::Degenerate("differential not linear in the forms".into()))?;
        if !rest.is_zero() {
            return Err(KernelError::Degenerate("differential has a form-free part".into()));
        }
        for (s, q) in lin {
            rhs_keys.push((i, s));
            rhs_cols.push(q.terms().map(|(m, c)| (index(m), c.clone())).collect());
        }
    }

    let rows = monomials.len();
    let n = frame.len();
    let mut aug = vec![vec![Rational::zero(); n + rhs_cols.len()]; rows];
    for (j, col) in frame_cols.iter().chain(rhs_cols.iter()).enumerate() {
        for (r, c) in col {
            aug[*r][j] = c.clone();
        }
    }
    let pivots = linalg::rref(&mut aug);
    if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return Err(KernelError::Degenerate("frame functions are linearly dependent".into()));
    }
    if pivots.len() > n {
        return Err(KernelError::Degenerate("a differential is not a combination of the frame functions".into()));
    }
    let mut entries = vec![vec![Polynomial::zero(); n]; n];
    for (col, (i, s)) in rhs_keys.iter().enumerate() {
        for (j, row) in aug.iter().take(n).enumerate() {
            let c = &row[n + col];
            if !c.is_zero() {
                entries[*i][j] += &Polynomial::symbol(*s).scale(c);
            }
        }
    }
    Ok(FormMatrix::new(entries))
}

/// Largest componentwise gap between the rows of `matrix` evaluated at the
/// connection `theta` and the central difference of the frame functions
/// along `X(t) = X_0 + tΘX_0`. Each `A_i` is quadratic in `t`, so the
/// difference carries only rounding error.
pub fn differential_oracle_error(matrix: &FormMatrix, x0: &[Real; 3], theta: &[[Real; 3]; 3]) -> f64 {
    let k = x0[0].dim();
    let step = 1e-5;
    let direction: [Real; 3] =
        std::array::from_fn(|j| (0..3).fold(Real::zero(k), |acc, m| acc.add(&theta[j][m].mul(&x0[m]))));
    let at = |t: f64| -> Vec<f64> {
        let x: [Real; 3] = std::array::from_fn(|j| x0[j].add(&direction[j].scale(&t)));
        frame_functions(&x)
    };
    let (plus, minus) = (at(step), at(-step));
    let a0 = frame_functions(x0);
    let value = |s: &ScalarSymbol| {
        let i = s.indices();
        theta[i[0] as usize][i[1] as usize].coords()[i[2] as usize]
    };
    let mut worst: f64 = 0.0;
    for i in 0..matrix.dim() {
        let numeric = (plus[i] - minus[i]) / (2.0 * step);
        let symbolic: f64 = (0..matrix.dim()).map(|j| matrix.get(i, j).eval_f64(value) * a0[j]).sum();
        worst = worst.max((numeric - symbolic).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_polynomial;

    #[test]
    fn complex_coordinates() {
        let c = EmbeddingCoordinates::new(2).unwrap();
        let a = c.frame_functions();
        assert_eq!(a.len(), 9);
        assert_eq!(a[1], parse_polynomial("C0*C1 + D0*D1").unwrap());
        assert_eq!(a[2], parse_polynomial("C1*D0 - C0*D1").unwrap());
        assert_eq!(a[7], parse_polynomial("C2*D1 - C1*D2").unwrap());
    }

    #[test]
    fn complex_coordinate_differentials() {
        let c = EmbeddingCoordinates::new(2).unwrap();
        let dx0 = c.dx(0);
        let expect_dc =
            parse_polynomial("alpha_00*C0 - beta_00*D0 + alpha_01*C1 - beta_01*D1 + alpha_02*C2 - beta_02*D2").unwrap();
        assert_eq!(dx0.coords()[0], expect_dc);
    }

    #[test]
    fn real_plane_entries() {
        let m = derive_maurer_cartan(1).unwrap();
        assert_eq!(m.dim(), 6);
        assert_eq!(m.get(0, 0), &parse_polynomial("2*alpha_00").unwrap());
        assert_eq!(m.get(0, 1), &parse_polynomial("2*alpha_01").unwrap());
        assert!(m.get(0, 3).is_zero() && m.get(0, 4).is_zero() && m.get(0, 5).is_zero());
    }

    #[test]
    fn complex_plane_matches_transcription() {
        let derived = derive_maurer_cartan(2).unwrap();
        let golden = crate::embeddings::golden::complex_plane();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(derived.get(i, j), golden.get(i, j), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn quaternion_plane_matches_transcription() {
        use crate::embeddings::golden::{pattern_mismatches, quaternion_plane_pattern};
        let derived = derive_maurer_cartan(4).unwrap();
        assert_eq!(derived.dim(), 15);
        let mut pattern = quaternion_plane_pattern();
        assert_eq!(pattern_mismatches(&pattern, &derived), vec![]);
        // (2,11) printed as -ω_{0,5}/2
        pattern[2][11][0].0 = -pattern[2][11][0].0.clone();
        assert_eq!(pattern_mismatches(&pattern, &derived), vec![(2, 11)]);
    }

    // The printed block uses the opposite quaternion product: entries pairing
    // two distinct imaginary units carry the other sign.
    #[test]
    fn quaternion_normal_form_block() {
        use crate::embeddings::golden::quaternion_plane_pattern;
        use crate::normal_form::{qmu_from_normal_form, relations_from_qmu};
        use crate::symbolic::{FormGenerator, OneForm};
        let pattern = quaternion_plane_pattern();
        let rules = relations_from_qmu(&qmu_from_normal_form(4).unwrap());
        assert_eq!(rules.len(), 48);
        let cross = |a: usize, m: usize| {
            let (ca, cm) = ((a - 1) % 4, m.wrapping_sub(10));
            (10..=13).contains(&m) && ca != 0 && cm != 0 && ca != cm
        };
        let mut flipped = 0;
        for (g, f) in &rules {
            let mut printed = OneForm::zero();
            for (c, (r, s)) in &pattern[g.row()][g.col()] {
                printed.add_term(FormGenerator::new(*r, *s), &Polynomial::constant(c.clone()));
            }
            if cross(g.row(), g.col()) {
                flipped += 1;
                assert_eq!(printed.scale_rational(&crate::symbolic::rat(-1, 1)), *f, "({}, {})", g.row(), g.col());
            } else {
                assert_eq!(&printed, f, "({}, {})", g.row(), g.col());
            }
        }
        assert_eq!(flipped, 12);
    }

    #[test]
    fn finite_difference_rows() {
        use crate::embeddings::hermitian::random_vector;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for k in [1, 2, 4] {
            let m = derive_maurer_cartan(k).unwrap();
            for _ in 0..10 {
                let x0 = random_vector(k, &mut rng);
                let theta = std::array::from_fn(|_| random_vector(k, &mut rng));
                assert!(differential_oracle_error(&m, &x0, &theta) < 1e-8);
            }
        }
        // a corrupted entry is caught
        let mut entries = derive_maurer_cartan(2).unwrap().entries().to_vec();
        entries[5][1] = entries[5][1].scale(&crate::symbolic::rat(1, 2));
        let bad = FormMatrix::new(entries);
        let x0 = random_vector(2, &mut rng);
        let theta = std::array::from_fn(|_| random_vector(2, &mut rng));
        assert!(differential_oracle_error(&bad, &x0, &theta) > 1e-3);
    }

    #[test]
    fn top_row_vanishes_off_the_tangent_space() {
        for k in [1, 2, 4] {
            let m = derive_maurer_cartan(k).unwrap();
            assert!((2 * k + 1..m.dim()).all(|c| m.get(0, c).is_zero()), "k = {k}");
            assert!((1..=2 * k).all(|c| !m.get(0, c).is_zero()), "k = {k}");
        }
    }

    #[test]
    fn octonions_out_of_scope() {
        assert!(derive_maurer_cartan(8).is_err());
        assert!(derive_maurer_cartan(3).is_err());
    }
}
