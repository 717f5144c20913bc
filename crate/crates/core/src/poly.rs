//! Sparse multivariate polynomials with rational coefficients.
//!
//! `Poly<N>` is shared by [`QuasiModular`](crate::QuasiModular) (`N = 3`,
//! variables `P, Q, R`) and
//! [`TwoVarQuasiModular`](crate::TwoVarQuasiModular) (`N = 6`, one copy of
//! `P, Q, R` per torus). Zero coefficients are never stored, so the empty map
//! is the zero polynomial and structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::{to_f64, Rational};

pub type Exponents<const N: usize> = [u32; N];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<const N: usize> {
    terms: BTreeMap<Exponents<N>, Rational>,
}

impl<const N: usize> Default for Poly<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> Poly<N> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn monomial(exps: Exponents<N>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { terms }
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(e, Rational::one())
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents<N>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &Exponents<N>) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Exponents<N>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Weighted degree of each monomial under `weights`; `None` for zero or
    /// mixed-weight polynomials.
    pub fn homogeneous_weight(&self, weights: &[u32; N]) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| weighted(e, weights));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Partial derivative in variable `i` (formal, exponent lowering).
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Applies a derivation determined by its values on the generators.
    pub fn derive(&self, images: &[Self; N]) -> Self {
        let mut out = Self::zero();
        for (i, img) in images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let p = self.partial(i);
            if !p.is_zero() {
                out = out + &p * img;
            }
        }
        out
    }

    pub fn eval_complex(&self, values: &[Complex64; N]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = Complex64::new(to_f64(c), 0.0);
                for (v, k) in values.iter().zip(e) {
                    m *= v.powu(*k);
                }
                m
            })
            .sum()
    }

    pub fn map_exponents<const M: usize>(&self, f: impl Fn(&Exponents<N>) -> Exponents<M>) -> Poly<M> {
        let mut out = Poly::<M>::zero();
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    pub fn filter_terms(&self, keep: impl Fn(&Exponents<N>) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }
}

pub fn weighted<const N: usize>(e: &Exponents<N>, weights: &[u32; N]) -> u32 {
    e.iter().zip(weights).map(|(a, w)| a * w).sum()
}

impl<const N: usize> AddAssign<&Poly<N>> for Poly<N> {
    fn add_assign(&mut self, rhs: &Poly<N>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<const N: usize> Add<&Poly<N>> for Poly<N> {
    type Output = Poly<N>;
    fn add(mut self, rhs: &Poly<N>) -> Poly<N> {
        self += rhs;
        self
    }
}

impl<const N: usize> Add<Poly<N>> for Poly<N> {
    type Output = Poly<N>;
    fn add(self, rhs: Poly<N>) -> Poly<N> {
        self + &rhs
    }
}

impl<const N: usize> Add<&Poly<N>> for &Poly<N> {
    type Output = Poly<N>;
    fn add(self, rhs: &Poly<N>) -> Poly<N> {
        self.clone() + rhs
    }
}

impl<const N: usize> Neg for &Poly<N> {
    type Output = Poly<N>;
    fn neg(self) -> Poly<N> {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<const N: usize> Neg for Poly<N> {
    type Output = Poly<N>;
    fn neg(self) -> Poly<N> {
        -&self
    }
}

impl<const N: usize> Sub<&Poly<N>> for &Poly<N> {
    type Output = Poly<N>;
    fn sub(self, rhs: &Poly<N>) -> Poly<N> {
        self.clone() + &(-rhs)
    }
}

impl<const N: usize> Sub<Poly<N>> for Poly<N> {
    type Output = Poly<N>;
    fn sub(self, rhs: Poly<N>) -> Poly<N> {
        &self - &rhs
    }
}

impl<const N: usize> Mul<&Poly<N>> for &Poly<N> {
    type Output = Poly<N>;
    fn mul(self, rhs: &Poly<N>) -> Poly<N> {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl<const N: usize> Mul<Poly<N>> for Poly<N> {
    type Output = Poly<N>;
    fn mul(self, rhs: Poly<N>) -> Poly<N> {
        &self * &rhs
    }
}
