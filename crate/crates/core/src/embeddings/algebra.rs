//! Cayley-Dickson algebras of dimension 1, 2, 4, 8 over a coefficient ring.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::KernelError;
use crate::symbolic::{Polynomial, Rational};

/// Coefficient ring for algebra elements: floats, exact rationals, or
/// polynomials.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
}

/// A ring with division by nonzero elements.
pub trait Field: Ring {
    fn recip(&self) -> Option<Self>;
}

impl Field for f64 {
    fn recip(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

impl Field for Rational {
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| Rational::recip(self))
    }
}

pub fn check_dimension(k: usize) -> Result<(), KernelError> {
    match k {
        1 | 2 | 4 | 8 => Ok(()),
        _ => Err(KernelError::InvalidK(k)),
    }
}

/// An element of the real, complex, quaternion or octonion algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T: Ring> {
    coords: Vec<T>,
}

pub type Real = AlgebraElement<f64>;
pub type Exact = AlgebraElement<Rational>;

impl<T: Ring> AlgebraElement<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, KernelError> {
        check_dimension(coords.len())?;
        Ok(AlgebraElement { coords })
    }

    pub fn zero(k: usize) -> Self {
        AlgebraElement { coords: vec![T::zero(); k] }
    }

    pub fn one(k: usize) -> Self {
        Self::real(k, T::one())
    }

    pub fn real(k: usize, x: T) -> Self {
        let mut e = Self::zero(k);
        e.coords[0] = x;
        e
    }

    /// The `i`-th unit.
    pub fn unit(k: usize, i: usize) -> Self {
        let mut e = Self::zero(k);
        e.coords[i] = T::one();
        e
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn re(&self) -> &T {
        &self.coords[0]
    }

    pub fn conj(&self) -> Self {
        let coords = self.coords.iter().enumerate().map(|(i, x)| if i == 0 { x.clone() } else { x.neg() }).collect();
        AlgebraElement { coords }
    }

    pub fn norm(&self) -> T {
        self.coords.iter().fold(T::zero(), |acc, x| acc.add(&x.mul(x)))
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgebraElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AlgebraElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { coords: self.coords.iter().map(T::neg).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        AlgebraElement { coords: self.coords.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(T::is_zero)
    }

    /// `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.
    pub fn mul(&self, o: &Self) -> Self {
        AlgebraElement { coords: cd_mul(&self.coords, &o.coords) }
    }
}

fn cd_conj<T: Ring>(x: &[T]) -> Vec<T> {
    x.iter().enumerate().map(|(i, v)| if i == 0 { v.clone() } else { v.neg() }).collect()
}

fn cd_mul<T: Ring>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    if n == 1 {
        return vec![x[0].mul(&y[0])];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let dbar_b = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let b_cbar = cd_mul(b, &cd_conj(c));
    let mut out: Vec<T> = ac.iter().zip(&dbar_b).map(|(p, q)| p.sub(q)).collect();
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p.add(q)));
    out
}

impl Real {
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        (n != 0.0).then(|| self.conj().scale(&(1.0 / n)))
    }

    pub fn abs(&self) -> f64 {
        self.norm().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl<T: Ring + fmt::Display> fmt::Display for AlgebraElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
