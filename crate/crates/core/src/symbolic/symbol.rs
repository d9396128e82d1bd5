use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::KernelError;

/// What a scalar symbol stands for.
///
/// The declaration order is the symbol order: all b-coefficients sort before
/// all change parameters, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolKind {
    /// `b^i_{jk}`: coefficient of the basis form `ω_i` in the expansion of `ω_{jk}`.
    BCoefficient,
    /// Entry `(row, col)` of a frame-change matrix (`a_j` is `(j, 0)`).
    ChangeParameter,
    /// Coefficient of `ω_i` in the differential of a change parameter.
    ParameterDerivative,
    /// `w1`, `s1..s8`, `w2` of the shape-operator family.
    NormalFormParameter,
    /// A real component of a homogeneous coordinate `X_j`.
    EmbeddingCoordinate,
    /// A real component of the form `θ_{jk}` in `dX_j = Σ θ_{jk} X_k`.
    EmbeddingFormComponent,
    /// Scratch unknowns (renaming solves, tests).
    Auxiliary,
}

impl SymbolKind {
    fn arity(self) -> usize {
        match self {
            SymbolKind::BCoefficient => 3,
            SymbolKind::ChangeParameter => 2,
            SymbolKind::ParameterDerivative => 3,
            SymbolKind::NormalFormParameter => 1,
            SymbolKind::EmbeddingCoordinate => 2,
            SymbolKind::EmbeddingFormComponent => 3,
            SymbolKind::Auxiliary => 1,
        }
    }
}

/// Index of `w1` among the normal-form parameters; `s_i` is `i`, `w2` is [`W2`].
pub const W1: u16 = 0;
pub const W2: u16 = 9;

/// A named scalar. Two symbols with the same kind and indices are the same symbol.
///
/// Unused index slots are always zero so that derived equality and ordering
/// are structural.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarSymbol {
    pub kind: SymbolKind,
    indices: [u16; 3],
}

impl ScalarSymbol {
    fn raw(kind: SymbolKind, idx: &[u16]) -> Self {
        debug_assert_eq!(idx.len(), kind.arity());
        let mut indices = [0u16; 3];
        indices[..idx.len()].copy_from_slice(idx);
        ScalarSymbol { kind, indices }
    }

    /// `b^basis_{row,col}`.
    pub fn b(row: usize, col: usize, basis: usize) -> Self {
        Self::raw(SymbolKind::BCoefficient, &[row as u16, col as u16, basis as u16])
    }

    /// Like [`ScalarSymbol::b`] but validated against a frame of `dim` vectors
    /// with `n` basis forms.
    pub fn b_checked(row: usize, col: usize, basis: usize, dim: usize, n: usize) -> Result<Self, KernelError> {
        if row >= dim || col >= dim {
            return Err(KernelError::IndexOutOfRange { row, col, dim });
        }
        if basis == 0 || basis > n {
            return Err(KernelError::BasisOutOfRange { basis, n });
        }
        Ok(Self::b(row, col, basis))
    }

    pub fn param(row: usize, col: usize) -> Self {
        Self::raw(SymbolKind::ChangeParameter, &[row as u16, col as u16])
    }

    pub fn param_derivative(row: usize, col: usize, basis: usize) -> Self {
        Self::raw(SymbolKind::ParameterDerivative, &[row as u16, col as u16, basis as u16])
    }

    pub fn w1() -> Self {
        Self::raw(SymbolKind::NormalFormParameter, &[W1])
    }

    pub fn w2() -> Self {
        Self::raw(SymbolKind::NormalFormParameter, &[W2])
    }

    /// `s_i`, `1 <= i <= 8`.
    pub fn s(i: usize) -> Self {
        assert!((1..=8).contains(&i), "s index {i} out of range");
        Self::raw(SymbolKind::NormalFormParameter, &[i as u16])
    }

    pub fn coordinate(point: usize, comp: usize) -> Self {
        Self::raw(SymbolKind::EmbeddingCoordinate, &[point as u16, comp as u16])
    }

    pub fn form_component(row: usize, col: usize, comp: usize) -> Self {
        Self::raw(SymbolKind::EmbeddingFormComponent, &[row as u16, col as u16, comp as u16])
    }

    pub fn aux(i: usize) -> Self {
        Self::raw(SymbolKind::Auxiliary, &[i as u16])
    }

    pub fn indices(&self) -> &[u16] {
        &self.indices[..self.kind.arity()]
    }

    pub fn index(&self, slot: usize) -> usize {
        self.indices()[slot] as usize
    }

    /// Parses the textual name produced by `Display`.
    pub fn parse(name: &str) -> Option<Self> {
        let nums = |s: &str| -> Option<Vec<usize>> {
            s.split('_').map(|p| p.parse::<usize>().ok()).collect()
        };
        if let Some(rest) = name.strip_prefix("da_") {
            let v = nums(rest)?;
            return (v.len() == 3).then(|| Self::param_derivative(v[0], v[1], v[2]));
        }
        if let Some(rest) = name.strip_prefix("b_") {
            let v = nums(rest)?;
            return (v.len() == 3).then(|| Self::b(v[0], v[1], v[2]));
        }
        if let Some(rest) = name.strip_prefix("a_") {
            let v = nums(rest)?;
            return (v.len() == 2).then(|| Self::param(v[0], v[1]));
        }
        if let Some(rest) = name.strip_prefix("x_") {
            return rest.parse().ok().map(Self::aux);
        }
        match name {
            "w1" => return Some(Self::w1()),
            "w2" => return Some(Self::w2()),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix('s') {
            let i: usize = rest.parse().ok()?;
            return (1..=8).contains(&i).then(|| Self::s(i));
        }
        for (comp, prefix) in FORM_PREFIXES.iter().enumerate() {
            if let Some(rest) = name.strip_prefix(prefix).and_then(|r| r.strip_prefix('_')) {
                let (row, col) = split_pair(rest)?;
                return Some(Self::form_component(row, col, comp));
            }
        }
        let mut chars = name.chars();
        let head = chars.next()?;
        let comp = COORD_PREFIXES.iter().position(|&c| c == head)?;
        let point: usize = chars.as_str().parse().ok()?;
        Some(Self::coordinate(point, comp))
    }
}

const FORM_PREFIXES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
const COORD_PREFIXES: [char; 4] = ['C', 'D', 'E', 'F'];

fn split_pair(s: &str) -> Option<(usize, usize)> {
    if let Some((a, b)) = s.split_once('_') {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    // two single digits, the layout used for 3x3 coordinate forms
    let bytes = s.as_bytes();
    if bytes.len() == 2 && bytes.iter().all(u8::is_ascii_digit) {
        return Some(((bytes[0] - b'0') as usize, (bytes[1] - b'0') as usize));
    }
    None
}

impl fmt::Display for ScalarSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.indices;
        match self.kind {
            SymbolKind::BCoefficient => write!(f, "b_{}_{}_{}", i[0], i[1], i[2]),
            SymbolKind::ChangeParameter => write!(f, "a_{}_{}", i[0], i[1]),
            SymbolKind::ParameterDerivative => write!(f, "da_{}_{}_{}", i[0], i[1], i[2]),
            SymbolKind::NormalFormParameter => match i[0] {
                W1 => write!(f, "w1"),
                W2 => write!(f, "w2"),
                s => write!(f, "s{s}"),
            },
            SymbolKind::EmbeddingCoordinate => {
                write!(f, "{}{}", COORD_PREFIXES[i[1] as usize], i[0])
            }
            SymbolKind::EmbeddingFormComponent => {
                let prefix = FORM_PREFIXES[i[2] as usize];
                if i[0] < 10 && i[1] < 10 {
                    write!(f, "{prefix}_{}{}", i[0], i[1])
                } else {
                    write!(f, "{prefix}_{}_{}", i[0], i[1])
                }
            }
            SymbolKind::Auxiliary => write!(f, "x_{}", i[0]),
        }
    }
}
