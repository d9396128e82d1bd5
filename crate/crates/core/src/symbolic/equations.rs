use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::connection::ConnectionMatrix;
use super::form::{FormGenerator, OneForm, TwoForm};
use super::poly::Polynomial;
use super::rewrite::RewriteSystem;
use crate::error::KernelError;

/// A linear relation `Σ c_g ω_g = 0` with rational constants `c_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    form: OneForm,
}

impl Relation {
    /// `lhs = rhs`; rejects symbolic coefficients.
    pub fn new(lhs: FormGenerator, rhs: &OneForm) -> Result<Self, KernelError> {
        let form = &OneForm::generator(lhs) - rhs;
        let label = format!("{lhs} = {}", if rhs.is_zero() { "0".to_string() } else { rhs.to_string() });
        Self::from_form(label, form)
    }

    /// `form = 0`.
    pub fn from_form(label: impl Into<String>, form: OneForm) -> Result<Self, KernelError> {
        if let Some((g, _)) = form.terms().find(|(_, p)| !p.is_constant()) {
            return Err(KernelError::UnsupportedRelation(g.to_string()));
        }
        Ok(Relation { label: label.into(), form })
    }

    /// `form = 0` labelled by the form itself.
    pub fn zero(form: OneForm) -> Result<Self, KernelError> {
        let label = format!("{form} = 0");
        Self::from_form(label, form)
    }

    pub fn form(&self) -> &OneForm {
        &self.form
    }

    /// The relation scaled to a primitive integer form with positive leading
    /// coefficient; two relations spanning the same line compare equal here.
    pub fn canonical_form(&self) -> OneForm {
        let Some((_, lead)) = self.form.terms().next() else { return OneForm::zero() };
        let lead = lead.as_constant().expect("constant coefficients");
        self.form.scale_rational(&lead.recip())
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A polynomial asserted to vanish, with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub poly: Polynomial,
    pub provenance: String,
}

/// Deduplicated list of canonicalized equations.
///
/// Counts of everything pushed (including zero and duplicate equations) are
/// kept so both the raw and the deduplicated sizes can be reported.
#[derive(Clone, Debug, Default)]
pub struct EquationSystem {
    equations: Vec<Equation>,
    seen: HashSet<Polynomial>,
    generated: usize,
    zeros: usize,
}

impl EquationSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true if the equation was new.
    pub fn push(&mut self, poly: Polynomial, provenance: impl Into<String>) -> bool {
        self.generated += 1;
        if poly.is_zero() {
            self.zeros += 1;
            return false;
        }
        let poly = poly.normalized();
        if !self.seen.insert(poly.clone()) {
            return false;
        }
        self.equations.push(Equation { poly, provenance: provenance.into() });
        true
    }

    pub fn extend(&mut self, other: EquationSystem) {
        self.generated += other.generated;
        self.zeros += other.zeros;
        for eq in other.equations {
            if self.seen.insert(eq.poly.clone()) {
                self.equations.push(eq);
            }
        }
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn into_equations(self) -> Vec<Equation> {
        self.equations
    }

    /// Distinct nonzero equations.
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Everything pushed, identically-zero equations included.
    pub fn generated_count(&self) -> usize {
        self.generated
    }

    /// Everything pushed except identically-zero equations; duplicates counted.
    pub fn nonzero_count(&self) -> usize {
        self.generated - self.zeros
    }

    pub fn polys(&self) -> impl Iterator<Item = &Polynomial> {
        self.equations.iter().map(|e| &e.poly)
    }
}

impl FromIterator<Equation> for EquationSystem {
    fn from_iter<I: IntoIterator<Item = Equation>>(iter: I) -> Self {
        let mut sys = EquationSystem::new();
        for eq in iter {
            sys.push(eq.poly, eq.provenance);
        }
        sys
    }
}

/// Coefficient of each basis wedge `ω_j ∧ ω_k`, `j < k`.
pub fn collect(tf: &TwoForm, n: usize) -> Result<BTreeMap<(usize, usize), Polynomial>, KernelError> {
    let mut out = BTreeMap::new();
    for (pair, p) in tf.terms() {
        for g in [pair.0, pair.1] {
            if !g.is_basis(n) {
                return Err(KernelError::NotBasisSpan(g.to_string()));
            }
        }
        out.insert((pair.0.col(), pair.1.col()), p.clone());
    }
    Ok(out)
}

/// One equation per basis form: the relation expanded to first order.
pub fn expand_relation(rel: &Relation, rs: &RewriteSystem) -> Result<EquationSystem, KernelError> {
    let expanded = rs.expand_one(rel.form())?;
    let mut sys = EquationSystem::new();
    for i in rs.context().tangent() {
        let p = expanded.coefficient(&FormGenerator::basis(i));
        sys.push(p, format!("{} [omega_{i}]", rel.label));
    }
    Ok(sys)
}

/// `d` of the relation via the structure equations, expanded and collected:
/// one equation per basis wedge.
pub fn differentiate_relation(rel: &Relation, m: &ConnectionMatrix, rs: &RewriteSystem) -> Result<EquationSystem, KernelError> {
    let n = rs.context().n;
    let d = m.differential(rel.form())?;
    let expanded = rs.expand_two(&d)?;
    let coeffs = collect(&expanded, n)?;
    let mut sys = EquationSystem::new();
    for j in 1..=n {
        for k in j + 1..=n {
            let p = coeffs.get(&(j, k)).cloned().unwrap_or_default();
            sys.push(p, format!("d({}) [omega_{j}^omega_{k}]", rel.label));
        }
    }
    Ok(sys)
}
