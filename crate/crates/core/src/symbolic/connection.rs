use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::form::{wedge, FormGenerator, OneForm, TwoForm};
use super::poly::Polynomial;
use crate::error::KernelError;

/// Index ranges of a Darboux frame `{A_0; A_1..A_n; A_{n+1}..A_N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DarbouxContext {
    /// Dimension of the submanifold (number of basis forms).
    pub n: usize,
    /// Dimension of the ambient projective space; the frame has `N + 1` vectors.
    pub big_n: usize,
}

impl DarbouxContext {
    pub fn new(n: usize, big_n: usize) -> Self {
        assert!(n >= 1 && n <= big_n, "bad Darboux context n={n}, N={big_n}");
        DarbouxContext { n, big_n }
    }

    /// The context of a `2k`-manifold in `P^{3k+2}`.
    pub fn for_k(k: usize) -> Self {
        Self::new(2 * k, 3 * k + 2)
    }

    pub fn dim(&self) -> usize {
        self.big_n + 1
    }

    pub fn tangent(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn normal(&self) -> std::ops::RangeInclusive<usize> {
        self.n + 1..=self.big_n
    }

    /// `ω_{0,μ}` with `μ > n` vanishes on a Darboux frame.
    pub fn is_darboux_zero(&self, g: FormGenerator) -> bool {
        g.row == 0 && g.col() > self.n
    }

    pub fn check(&self, g: FormGenerator) -> Result<(), KernelError> {
        if g.row() >= self.dim() || g.col() >= self.dim() {
            return Err(KernelError::IndexOutOfRange { row: g.row(), col: g.col(), dim: self.dim() });
        }
        Ok(())
    }
}

/// Square matrix of 1-forms with `dA_j = Σ_k Ω[j][k] A_k`.
///
/// Entry `(j, k)` is the `A_k`-component of `dA_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMatrix {
    dim: usize,
    darboux: Option<DarbouxContext>,
    entries: Vec<Vec<OneForm>>,
}

impl ConnectionMatrix {
    /// Every entry is its own generator; no Darboux zeros.
    pub fn generic(dim: usize) -> Self {
        let entries = (0..dim)
            .map(|r| (0..dim).map(|c| OneForm::generator(FormGenerator::new(r, c))).collect())
            .collect();
        ConnectionMatrix { dim, darboux: None, entries }
    }

    /// Generic matrix on a Darboux frame: row 0 is `(ω_00, ω_1..ω_n, 0..0)`.
    pub fn darboux(ctx: DarbouxContext) -> Self {
        let mut m = Self::generic(ctx.dim());
        for mu in ctx.normal() {
            m.entries[0][mu] = OneForm::zero();
        }
        m.darboux = Some(ctx);
        m
    }

    pub fn from_entries(entries: Vec<Vec<OneForm>>, darboux: Option<DarbouxContext>) -> Result<Self, KernelError> {
        let dim = entries.len();
        if entries.iter().any(|row| row.len() != dim) {
            return Err(KernelError::DimensionMismatch("connection matrix is not square".into()));
        }
        if let Some(ctx) = darboux {
            if ctx.dim() != dim {
                return Err(KernelError::DimensionMismatch(format!(
                    "Darboux context expects {} rows, got {dim}",
                    ctx.dim()
                )));
            }
        }
        Ok(ConnectionMatrix { dim, darboux, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn darboux_context(&self) -> Option<DarbouxContext> {
        self.darboux
    }

    pub fn get(&self, row: usize, col: usize) -> &OneForm {
        &self.entries[row][col]
    }

    pub fn set(&mut self, row: usize, col: usize, f: OneForm) {
        self.entries[row][col] = f;
    }

    pub fn entries(&self) -> &[Vec<OneForm>] {
        &self.entries
    }

    pub fn map_entries(&self, f: impl Fn(usize, usize, &OneForm) -> OneForm) -> ConnectionMatrix {
        let entries = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| f(r, c, &self.entries[r][c])).collect())
            .collect();
        ConnectionMatrix { dim: self.dim, darboux: self.darboux, entries }
    }

    /// Checks the Darboux top-row invariant.
    pub fn darboux_row_holds(&self) -> bool {
        let Some(ctx) = self.darboux else { return true };
        ctx.tangent().all(|a| self.entries[0][a] == OneForm::basis(a))
            && ctx.normal().all(|m| self.entries[0][m].is_zero())
    }

    /// `dω_{ij} = Σ_k Ω[i][k] ∧ Ω[k][j]`, with the entries as currently loaded.
    pub fn structure_differential(&self, g: FormGenerator) -> Result<TwoForm, KernelError> {
        let (i, j) = (g.row(), g.col());
        if i >= self.dim || j >= self.dim {
            return Err(KernelError::IndexOutOfRange { row: i, col: j, dim: self.dim });
        }
        let mut out = TwoForm::zero();
        for k in 0..self.dim {
            let (a, b) = (&self.entries[i][k], &self.entries[k][j]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            out.add(&wedge(a, b));
        }
        Ok(out)
    }

    /// Exterior derivative of a 1-form whose coefficients are constants.
    pub fn differential(&self, f: &OneForm) -> Result<TwoForm, KernelError> {
        let mut out = TwoForm::zero();
        for (g, p) in f.terms() {
            if !p.is_constant() {
                return Err(KernelError::UnsupportedRelation(g.to_string()));
            }
            if let Some(ctx) = self.darboux {
                if ctx.is_darboux_zero(*g) {
                    continue;
                }
            }
            out.add_scaled(&self.structure_differential(*g)?, p);
        }
        Ok(out)
    }
}

impl fmt::Display for ConnectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.entries.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{r:>2}: [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Constant-coefficient 3-form over canonical triples `g < h < l`.
///
/// Only used to check `d² = 0` on the structure equations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThreeForm {
    terms: BTreeMap<[FormGenerator; 3], Polynomial>,
}

impl ThreeForm {
    pub fn add_triple(&mut self, mut t: [FormGenerator; 3], p: &Polynomial) {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || p.is_zero() {
            return;
        }
        // sort with sign of the permutation
        let mut sign = false;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        let coeff = if sign { -p } else { p.clone() };
        let slot = self.terms.entry(t).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `d(dω_g)` on a matrix whose entries are single generators with unit
/// coefficients (the generic matrix, or one with some entries zeroed).
pub fn second_differential(m: &ConnectionMatrix, g: FormGenerator) -> Result<ThreeForm, KernelError> {
    let first = m.structure_differential(g)?;
    let mut out = ThreeForm::default();
    for (pair, p) in first.terms() {
        if !p.is_constant() {
            return Err(KernelError::UnsupportedRelation(pair.to_string()));
        }
        // d(a ∧ b) = da ∧ b - a ∧ db
        let da = m.structure_differential(pair.0)?;
        for (q, c) in da.terms() {
            out.add_triple([q.0, q.1, pair.1], &(p * c));
        }
        let db = m.structure_differential(pair.1)?;
        for (q, c) in db.terms() {
            out.add_triple([pair.0, q.0, q.1], &-(p * c));
        }
    }
    Ok(out)
}
