use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::{fmt_sum, Polynomial, Rational};
use super::symbol::ScalarSymbol;

/// The abstract connection form `ω_{row,col}`.
///
/// Ordered lexicographically on `(row, col)`; basis forms `ω_{0,α}` therefore
/// sort first and in index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FormGenerator {
    pub row: u16,
    pub col: u16,
}

impl FormGenerator {
    pub fn new(row: usize, col: usize) -> Self {
        FormGenerator { row: row as u16, col: col as u16 }
    }

    /// The basis form `ω_α = ω_{0,α}`.
    pub fn basis(alpha: usize) -> Self {
        Self::new(0, alpha)
    }

    pub fn row(&self) -> usize {
        self.row as usize
    }

    pub fn col(&self) -> usize {
        self.col as usize
    }

    pub fn is_basis(&self, n: usize) -> bool {
        self.row == 0 && self.col >= 1 && self.col() <= n
    }

    pub fn parse(name: &str) -> Option<Self> {
        let rest = name.strip_prefix("omega_")?;
        let (r, c) = rest.split_once('_')?;
        Some(Self::new(r.parse().ok()?, c.parse().ok()?))
    }
}

impl fmt::Display for FormGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega_{}_{}", self.row, self.col)
    }
}

/// A finite combination `Σ p_g ω_g` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OneForm {
    terms: BTreeMap<FormGenerator, Polynomial>,
}

impl OneForm {
    pub fn zero() -> Self {
        OneForm::default()
    }

    pub fn generator(g: FormGenerator) -> Self {
        Self::term(g, Polynomial::one())
    }

    pub fn basis(alpha: usize) -> Self {
        Self::generator(FormGenerator::basis(alpha))
    }

    pub fn term(g: FormGenerator, p: Polynomial) -> Self {
        let mut f = OneForm::zero();
        f.add_term(g, &p);
        f
    }

    /// `Σ c_α ω_α` from rational coefficients on basis forms.
    pub fn basis_combination(coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut f = OneForm::zero();
        for (alpha, c) in coeffs {
            f.add_term(FormGenerator::basis(alpha), &Polynomial::constant(c));
        }
        f
    }

    pub fn add_term(&mut self, g: FormGenerator, p: &Polynomial) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &OneForm, factor: &Polynomial) {
        for (g, p) in &other.terms {
            self.add_term(*g, &(p * factor));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormGenerator, &Polynomial)> {
        self.terms.iter()
    }

    pub fn generators(&self) -> impl Iterator<Item = &FormGenerator> {
        self.terms.keys()
    }

    pub fn coefficient(&self, g: &FormGenerator) -> Polynomial {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every generator present is a basis form `ω_{0,α}`, `α <= n`.
    pub fn is_basis_span(&self, n: usize) -> bool {
        self.terms.keys().all(|g| g.is_basis(n))
    }

    pub fn scale(&self, p: &Polynomial) -> OneForm {
        let mut out = OneForm::zero();
        out.add_scaled(self, p);
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> OneForm {
        self.scale(&Polynomial::constant(c.clone()))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> OneForm {
        let mut out = OneForm::zero();
        for (g, p) in &self.terms {
            out.add_term(*g, &f(p));
        }
        out
    }

    pub fn substitute(&self, map: &BTreeMap<ScalarSymbol, Polynomial>) -> OneForm {
        self.map_coefficients(|p| p.substitute(map))
    }

    /// True if every coefficient is a rational constant.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(Polynomial::is_constant)
    }
}

impl Add for &OneForm {
    type Output = OneForm;
    fn add(self, rhs: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (g, p) in &rhs.terms {
            out.add_term(*g, p);
        }
        out
    }
}

impl Sub for &OneForm {
    type Output = OneForm;
    fn sub(self, rhs: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (g, p) in &rhs.terms {
            out.add_term(*g, &-p);
        }
        out
    }
}

impl Neg for &OneForm {
    type Output = OneForm;
    fn neg(self) -> OneForm {
        self.map_coefficients(|p| -p)
    }
}

fn fmt_form_terms<'a, K: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (K, &'a Polynomial)>,
) -> fmt::Result {
    // single-term coefficients print inline, longer ones in parentheses
    let items: Vec<(Rational, Option<String>)> = terms
        .map(|(g, p)| match (p.len(), p.terms().next()) {
            (1, Some((m, c))) if m.is_one() => (c.clone(), Some(g.to_string())),
            (1, Some((m, c))) => (c.clone(), Some(format!("{m}*{g}"))),
            _ => (num_traits::One::one(), Some(format!("({p})*{g}"))),
        })
        .collect();
    fmt_sum(f, items.into_iter())
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_form_terms(f, self.terms.iter().map(|(g, p)| (*g, p)))
    }
}

/// Canonical wedge pair `g ∧ h` with `g < h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgePair(pub FormGenerator, pub FormGenerator);

impl fmt::Display for WedgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0, self.1)
    }
}

/// A 2-form `Σ p_{gh} ω_g ∧ ω_h` stored over canonical pairs `g < h`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoForm {
    terms: BTreeMap<WedgePair, Polynomial>,
}

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm::default()
    }

    /// Adds `p · g ∧ h`, reordering to the canonical pair.
    pub fn add_wedge(&mut self, g: FormGenerator, h: FormGenerator, p: &Polynomial) {
        if g == h || p.is_zero() {
            return;
        }
        let (key, coeff) = if g < h { (WedgePair(g, h), p.clone()) } else { (WedgePair(h, g), -p) };
        let slot = self.terms.entry(key).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &TwoForm) {
        for (k, p) in &other.terms {
            self.add_wedge(k.0, k.1, p);
        }
    }

    pub fn add_scaled(&mut self, other: &TwoForm, factor: &Polynomial) {
        for (k, p) in &other.terms {
            self.add_wedge(k.0, k.1, &(p * factor));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgePair, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: FormGenerator, h: FormGenerator) -> Polynomial {
        if g < h {
            self.terms.get(&WedgePair(g, h)).cloned().unwrap_or_default()
        } else {
            -self.terms.get(&WedgePair(h, g)).cloned().unwrap_or_default()
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_basis_span(&self, n: usize) -> bool {
        self.terms.keys().all(|k| k.0.is_basis(n) && k.1.is_basis(n))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> TwoForm {
        let mut out = TwoForm::zero();
        for (k, p) in &self.terms {
            out.add_wedge(k.0, k.1, &f(p));
        }
        out
    }

    pub fn negated(&self) -> TwoForm {
        self.map_coefficients(|p| -p)
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_form_terms(f, self.terms.iter().map(|(k, p)| (*k, p)))
    }
}

/// Exterior product of two 1-forms.
pub fn wedge(f: &OneForm, g: &OneForm) -> TwoForm {
    let mut out = TwoForm::zero();
    for (a, p) in f.terms() {
        for (b, q) in g.terms() {
            if a != b {
                out.add_wedge(*a, *b, &(p * q));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::int;

    fn w(a: usize) -> OneForm {
        OneForm::basis(a)
    }

    #[test]
    fn wedge_with_itself_vanishes() {
        assert!(wedge(&w(1), &w(1)).is_zero());
    }

    #[test]
    fn wedge_is_bilinear() {
        let lhs = wedge(&(&w(1) + &w(2)), &w(3));
        let mut rhs = wedge(&w(1), &w(3));
        rhs.add(&wedge(&w(2), &w(3)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_sign_follows_generator_order() {
        let b = Polynomial::symbol(ScalarSymbol::b(1, 1, 2));
        let lhs = wedge(&w(2).scale(&b), &w(1));
        // expand the other order by hand: b ω2∧ω1 = -b ω1∧ω2
        let mut expect = TwoForm::zero();
        expect.add_wedge(FormGenerator::basis(1), FormGenerator::basis(2), &-&b);
        assert_eq!(lhs, expect);
        assert_eq!(lhs.coefficient(FormGenerator::basis(2), FormGenerator::basis(1)), b);
    }

    #[test]
    fn diagonal_pairs_are_dropped() {
        let mut t = TwoForm::zero();
        t.add_wedge(FormGenerator::basis(1), FormGenerator::basis(1), &Polynomial::int(3));
        assert!(t.is_zero());
        t.add_wedge(FormGenerator::basis(2), FormGenerator::basis(1), &Polynomial::int(3));
        assert_eq!(
            t.coefficient(FormGenerator::basis(1), FormGenerator::basis(2)),
            Polynomial::constant(int(-3))
        );
    }

    #[test]
    fn basis_span_predicate() {
        assert!(w(2).is_basis_span(4));
        assert!(!w(5).is_basis_span(4));
        assert!(!OneForm::generator(FormGenerator::new(1, 1)).is_basis_span(4));
    }
}
