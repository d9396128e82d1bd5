use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::symbol::ScalarSymbol;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A product of symbol powers, kept sorted by symbol with positive exponents.
///
/// Ordered by total degree first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(ScalarSymbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: ScalarSymbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_powers(mut powers: Vec<(ScalarSymbol, u32)>) -> Self {
        powers.retain(|(_, e)| *e > 0);
        powers.sort_by_key(|p| p.0);
        let mut out: Vec<(ScalarSymbol, u32)> = Vec::with_capacity(powers.len());
        for (s, e) in powers {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> &[(ScalarSymbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, s: &ScalarSymbol) -> u32 {
        self.0
            .binary_search_by(|(t, _)| t.cmp(s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes one factor of `s`; `None` if `s` does not divide the monomial.
    fn without_one(&self, s: &ScalarSymbol) -> Option<(u32, Monomial)> {
        let i = self.0.binary_search_by(|(t, _)| t.cmp(s)).ok()?;
        let e = self.0[i].1;
        let mut v = self.0.clone();
        if e == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some((e, Monomial(v)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact multivariate polynomial over the rationals.
///
/// Zero coefficients are never stored, so derived equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn symbol(s: ScalarSymbol) -> Self {
        Self::term(Monomial::var(s), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// `Σ c_i s_i` from (symbol, coefficient) pairs.
    pub fn linear(terms: impl IntoIterator<Item = (ScalarSymbol, Rational)>) -> Self {
        Self::from_terms(terms.into_iter().map(|(s, c)| (Monomial::var(s), c)))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    /// The value if the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> BTreeSet<ScalarSymbol> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|(s, _)| *s))
            .collect()
    }

    pub fn contains(&self, s: &ScalarSymbol) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Replaces every symbol in `map` by its polynomial.
    pub fn substitute(&self, map: &BTreeMap<ScalarSymbol, Polynomial>) -> Polynomial {
        if map.is_empty() {
            return self.clone();
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if !m.powers().iter().any(|(s, _)| map.contains_key(s)) {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let mut kept = Vec::new();
            let mut factor = Polynomial::constant(c.clone());
            for (s, e) in m.powers() {
                match map.get(s) {
                    Some(p) => factor = &factor * &p.pow(*e),
                    None => kept.push((*s, *e)),
                }
            }
            let kept = Monomial(kept);
            for (fm, fc) in factor.terms {
                out.add_term(fm.mul(&kept), fc);
            }
        }
        out
    }

    pub fn substitute_one(&self, s: &ScalarSymbol, value: &Polynomial) -> Polynomial {
        if !self.contains(s) {
            return self.clone();
        }
        let mut map = BTreeMap::new();
        map.insert(*s, value.clone());
        self.substitute(&map)
    }

    pub fn derivative(&self, s: &ScalarSymbol) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.without_one(s) {
                out.add_term(rest, c * int(e as i64));
            }
        }
        out
    }

    /// Splits `self = Σ coeff_x · x + rest` over the symbols selected by
    /// `is_unknown`, or returns `None` if some monomial has degree > 1 in them.
    pub fn linear_split(
        &self,
        is_unknown: impl Fn(&ScalarSymbol) -> bool,
    ) -> Option<(BTreeMap<ScalarSymbol, Polynomial>, Polynomial)> {
        let mut coeffs: BTreeMap<ScalarSymbol, Polynomial> = BTreeMap::new();
        let mut rest = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut unknown = None;
            for (s, e) in m.powers() {
                if is_unknown(s) {
                    if unknown.is_some() || *e > 1 {
                        return None;
                    }
                    unknown = Some(*s);
                }
            }
            match unknown {
                None => rest.add_term(m.clone(), c.clone()),
                Some(u) => {
                    let (_, rem) = m.without_one(&u).expect("divides");
                    coeffs.entry(u).or_default().add_term(rem, c.clone());
                }
            }
        }
        coeffs.retain(|_, p| !p.is_zero());
        Some((coeffs, rest))
    }

    /// Scales to a primitive integer polynomial whose leading coefficient is
    /// positive. Two polynomials with the same zero set up to a nonzero
    /// rational factor normalize to the same value.
    pub fn normalized(&self) -> Polynomial {
        let Some((_, lead)) = self.leading_term() else {
            return Polynomial::zero();
        };
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&den / c.denom())));
        }
        let sign = if lead.is_negative() { -BigInt::one() } else { BigInt::one() };
        let factor = Rational::new(den * sign, g);
        self.scale(&factor)
    }

    pub fn eval_f64(&self, value: impl Fn(&ScalarSymbol) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (s, e) in m.powers() {
                    v *= value(s).powi(*e as i32);
                }
                v
            })
            .sum()
    }

    pub fn eval_rational(&self, value: impl Fn(&ScalarSymbol) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (s, e) in m.powers() {
                let x = value(s);
                for _ in 0..*e {
                    v *= &x;
                }
            }
            acc += v;
        }
        acc
    }
}

impl From<ScalarSymbol> for Polynomial {
    fn from(s: ScalarSymbol) -> Self {
        Polynomial::symbol(s)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Writes `Σ c·m` highest monomial first, in the `2*alpha_01 - 1/2*b_1_1_2` style.
pub(crate) fn fmt_sum<'a, T: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Rational, Option<T>)>,
) -> fmt::Result {
    let mut first = true;
    for (c, m) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        match m {
            None => write!(f, "{}", fmt_rational(&a))?,
            Some(m) if a.is_one() => write!(f, "{m}")?,
            Some(m) => write!(f, "{}*{m}", fmt_rational(&a))?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(
            f,
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| (c.clone(), (!m.is_one()).then_some(m))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::symbol(ScalarSymbol::aux(0))
    }
    fn y() -> Polynomial {
        Polynomial::symbol(ScalarSymbol::aux(1))
    }

    #[test]
    fn arithmetic_cancels_to_structural_zero() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let q = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        assert_eq!((&p - &q).len(), 0);
    }

    #[test]
    fn normalized_clears_denominators_and_sign() {
        let p = &x().scale(&rat(-1, 2)) + &y().scale(&rat(1, 3));
        let n = p.normalized();
        // leading monomial is y (aux(1) > aux(0))
        assert_eq!(n, &y().scale(&int(2)) - &x().scale(&int(3)));
        assert_eq!(n.normalized(), n);
        assert_eq!((-&p).normalized(), n);
    }

    #[test]
    fn linear_split_rejects_products_of_unknowns() {
        let s = ScalarSymbol::w1();
        let p = &(&x() * &Polynomial::symbol(s)) + &y();
        let (coeffs, rest) = p.linear_split(|t| t.kind == crate::symbolic::SymbolKind::Auxiliary).unwrap();
        assert_eq!(coeffs[&ScalarSymbol::aux(0)], Polynomial::symbol(s));
        assert!(rest.is_zero());
        let q = &x() * &y();
        assert!(q.linear_split(|t| t.kind == crate::symbolic::SymbolKind::Auxiliary).is_none());
    }

    #[test]
    fn substitution_and_derivative() {
        let p = &(&x() * &x()) + &y();
        let mut map = BTreeMap::new();
        map.insert(ScalarSymbol::aux(0), &y() + &Polynomial::one());
        let q = p.substitute(&map);
        let expect = &(&(&y() * &y()) + &y().scale(&int(3))) + &Polynomial::one();
        assert_eq!(q, expect);
        assert_eq!(p.derivative(&ScalarSymbol::aux(0)), x().scale(&int(2)));
    }

    #[test]
    fn display() {
        let p = &x().scale(&rat(1, 2)) - &Polynomial::int(3);
        assert_eq!(p.to_string(), "1/2*x_0 - 3");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
