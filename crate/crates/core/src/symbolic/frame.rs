use std::collections::BTreeSet;

use super::connection::ConnectionMatrix;
use super::form::{FormGenerator, OneForm};
use super::poly::Polynomial;
use super::symbol::{ScalarSymbol, SymbolKind};
use crate::error::KernelError;

/// A unipotent change of frame `Ã = T A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameChange {
    t: Vec<Vec<Polynomial>>,
    /// Index order under which `T` is upper unit-triangular.
    witness: Vec<usize>,
}

impl FrameChange {
    pub fn identity(dim: usize) -> Self {
        let mut t = vec![vec![Polynomial::zero(); dim]; dim];
        for (i, row) in t.iter_mut().enumerate() {
            row[i] = Polynomial::one();
        }
        FrameChange { t, witness: (0..dim).collect() }
    }

    /// Validates unipotency and finds a witness ordering by topological sort
    /// of the off-diagonal support.
    pub fn new(t: Vec<Vec<Polynomial>>) -> Result<Self, KernelError> {
        let dim = t.len();
        if t.iter().any(|r| r.len() != dim) {
            return Err(KernelError::DimensionMismatch("frame change is not square".into()));
        }
        for (r, row) in t.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                if let Some(s) = p.symbols().into_iter().find(|s| s.kind != SymbolKind::ChangeParameter) {
                    return Err(KernelError::NonParameterEntry(format!("{s} at ({r}, {c})")));
                }
                if r == c && *p != Polynomial::one() {
                    return Err(KernelError::NotUnipotent(format!("diagonal entry ({r}, {r}) is {p}")));
                }
            }
        }
        // Kahn's algorithm on edges r -> c for T[r][c] != 0, r != c
        let mut indegree = vec![0usize; dim];
        for (r, row) in t.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                if r != c && !p.is_zero() {
                    indegree[c] += 1;
                }
            }
        }
        let mut ready: BTreeSet<usize> = (0..dim).filter(|&i| indegree[i] == 0).collect();
        let mut witness = Vec::with_capacity(dim);
        while let Some(r) = ready.pop_first() {
            witness.push(r);
            for c in 0..dim {
                if r != c && !t[r][c].is_zero() {
                    indegree[c] -= 1;
                    if indegree[c] == 0 {
                        ready.insert(c);
                    }
                }
            }
        }
        if witness.len() != dim {
            return Err(KernelError::NotUnipotent("off-diagonal support has a cycle".into()));
        }
        Ok(FrameChange { t, witness })
    }

    /// `Ã_j = A_j + Σ_k coeffs[(j, k)] A_k`.
    pub fn from_shifts(dim: usize, shifts: impl IntoIterator<Item = ((usize, usize), Polynomial)>) -> Result<Self, KernelError> {
        let mut t = Self::identity(dim).t;
        for ((j, k), p) in shifts {
            if j >= dim || k >= dim {
                return Err(KernelError::IndexOutOfRange { row: j, col: k, dim });
            }
            t[j][k] += &p;
        }
        Self::new(t)
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn matrix(&self) -> &[Vec<Polynomial>] {
        &self.t
    }

    pub fn witness(&self) -> &[usize] {
        &self.witness
    }

    /// Change parameters appearing in `T`.
    pub fn parameters(&self) -> BTreeSet<ScalarSymbol> {
        self.t.iter().flatten().flat_map(|p| p.symbols()).collect()
    }

    /// `T⁻¹ = Σ_j (-N)^j` with `N = T - I` nilpotent.
    pub fn inverse(&self) -> Vec<Vec<Polynomial>> {
        let dim = self.dim();
        let mut neg_n = self.t.clone();
        for (i, row) in neg_n.iter_mut().enumerate() {
            row[i] = &row[i] - &Polynomial::one();
            for p in row.iter_mut() {
                *p = -&*p;
            }
        }
        let mut acc = Self::identity(dim).t;
        let mut power = Self::identity(dim).t;
        for _ in 1..dim {
            power = mat_mul(&power, &neg_n);
            if power.iter().flatten().all(Polynomial::is_zero) {
                break;
            }
            for (a, p) in acc.iter_mut().flatten().zip(power.iter().flatten()) {
                *a += p;
            }
        }
        acc
    }

    /// `T₂ · T₁`: applying `self` and then `later`.
    pub fn then(&self, later: &FrameChange) -> Result<FrameChange, KernelError> {
        FrameChange::new(mat_mul(&later.t, &self.t))
    }

    /// `dT` with `d(a) = Σ_i da_i ω_i` for every change parameter `a`.
    pub fn differential(&self, n: usize) -> Vec<Vec<OneForm>> {
        self.t
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        let mut f = OneForm::zero();
                        for s in p.symbols() {
                            let dp = p.derivative(&s);
                            let [r, c] = [s.index(0), s.index(1)];
                            for i in 1..=n {
                                let coeff = &dp * &Polynomial::symbol(ScalarSymbol::param_derivative(r, c, i));
                                f.add_term(FormGenerator::basis(i), &coeff);
                            }
                        }
                        f
                    })
                    .collect()
            })
            .collect()
    }
}

fn mat_mul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let dim = a.len();
    let mut out = vec![vec![Polynomial::zero(); dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..dim {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

/// `Ω̃ = (dT + T Ω) T⁻¹` for `dA = Ω A`.
pub fn apply_frame_change(omega: &ConnectionMatrix, fc: &FrameChange) -> Result<ConnectionMatrix, KernelError> {
    let dim = omega.dim();
    if fc.dim() != dim {
        return Err(KernelError::DimensionMismatch(format!("frame change of size {} on {dim} vectors", fc.dim())));
    }
    let n = omega.darboux_context().map_or(0, |c| c.n);
    let t = fc.matrix();
    let mut left = fc.differential(n);
    for (r, row) in left.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            for (k, tk) in t[r].iter().enumerate() {
                if !tk.is_zero() {
                    slot.add_scaled(omega.get(k, c), tk);
                }
            }
        }
    }
    let inv = fc.inverse();
    let entries = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    let mut f = OneForm::zero();
                    for (k, row) in inv.iter().enumerate() {
                        if !row[c].is_zero() {
                            f.add_scaled(&left[r][k], &row[c]);
                        }
                    }
                    f
                })
                .collect()
        })
        .collect();
    ConnectionMatrix::from_entries(entries, omega.darboux_context())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::DarbouxContext;

    fn a(j: usize) -> Polynomial {
        Polynomial::symbol(ScalarSymbol::param(j, 0))
    }

    #[test]
    fn identity_is_neutral() {
        let m = ConnectionMatrix::darboux(DarbouxContext::for_k(2));
        assert_eq!(apply_frame_change(&m, &FrameChange::identity(9)).unwrap(), m);
    }

    #[test]
    fn tangent_shift_block_formula() {
        let ctx = DarbouxContext::for_k(2);
        let m = ConnectionMatrix::darboux(ctx);
        let fc = FrameChange::from_shifts(9, (1..=4).map(|j| ((j, 0), a(j)))).unwrap();
        let out = apply_frame_change(&m, &fc).unwrap();
        for j in 1..=4 {
            for k in 1..=4 {
                let mut expect = OneForm::generator(FormGenerator::new(j, k));
                expect.add_term(FormGenerator::basis(k), &a(j));
                assert_eq!(out.get(j, k), &expect, "({j}, {k})");
            }
        }
        assert!(out.darboux_row_holds());
    }

    #[test]
    fn rejects_non_unipotent() {
        let mut t = FrameChange::identity(3).matrix().to_vec();
        t[0][1] = a(1);
        t[1][0] = a(2);
        assert!(matches!(FrameChange::new(t.clone()), Err(KernelError::NotUnipotent(_))));
        t[1][0] = Polynomial::zero();
        t[2][2] = Polynomial::int(2);
        assert!(matches!(FrameChange::new(t), Err(KernelError::NotUnipotent(_))));
    }

    #[test]
    fn rejects_non_parameter_entries() {
        let mut t = FrameChange::identity(3).matrix().to_vec();
        t[1][0] = Polynomial::symbol(ScalarSymbol::b(1, 1, 1));
        assert!(matches!(FrameChange::new(t), Err(KernelError::NonParameterEntry(_))));
    }

    #[test]
    fn inverse_is_inverse() {
        let fc = FrameChange::from_shifts(4, [((1, 0), a(1)), ((2, 1), a(2)), ((3, 2), a(3))]).unwrap();
        let prod = mat_mul(fc.matrix(), &fc.inverse());
        assert_eq!(prod, FrameChange::identity(4).matrix());
    }
}
