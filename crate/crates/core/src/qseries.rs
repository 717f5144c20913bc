//! Truncated q-expansions `q^offset * (a_0 + a_1 q + ... + a_N q^N) + O(q^(offset+N+1))`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, is_integer, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    #[serde(with = "crate::rational::serde_str")]
    offset: Rational,
    #[serde(with = "crate::rational::serde_str_vec")]
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds `q^offset * sum coeffs[n] q^n`; the truncation order is
    /// `coeffs.len() - 1`. An empty coefficient list is read as the order-0 zero.
    pub fn new(offset: Rational, mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { offset, coeffs }
    }

    pub fn from_integers(offset: Rational, coeffs: &[i64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Rational::zero(), vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = c;
        Self::new(Rational::zero(), coeffs)
    }

    /// `q^offset` alone, truncated at relative order `order`.
    pub fn q_power(offset: Rational, order: usize) -> Self {
        let mut s = Self::one(order);
        s.offset = offset;
        s
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^(offset + n)`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the absolute power `q^e`, if `e` lies on this series' grid
    /// and inside the retained range.
    pub fn coeff_at(&self, e: &Rational) -> Option<Rational> {
        let rel = e - &self.offset;
        if !is_integer(&rel) || rel.is_negative() {
            return None;
        }
        let n: usize = rel.to_integer().try_into().ok()?;
        self.coeffs.get(n).cloned()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn with_offset(mut self, offset: Rational) -> Self {
        self.offset = offset;
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self::new(self.offset.clone(), self.coeffs[..=n].to_vec())
    }

    /// Moves leading zero coefficients into the offset; the absolute truncation
    /// point is unchanged. A zero series is returned as is.
    pub fn strip_leading_zeros(&self) -> Self {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None | Some(0) => self.clone(),
            Some(k) => Self::new(&self.offset + int(k as i64), self.coeffs[k..].to_vec()),
        }
    }

    pub fn neg(&self) -> Self {
        Self::new(self.offset.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.offset.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let gap = &other.offset - &self.offset;
        if !is_integer(&gap) {
            return Err(Error::IncompatibleOffset(Box::new((self.offset.clone(), other.offset.clone()))));
        }
        let (low, high) = if gap.is_negative() { (other, self) } else { (self, other) };
        let shift: usize = (&high.offset - &low.offset)
            .to_integer()
            .try_into()
            .expect("offset gap fits in usize");
        let top = (low.order()).min(shift + high.order());
        let mut coeffs = low.coeffs[..=top].to_vec();
        for (i, c) in high.coeffs.iter().enumerate() {
            let j = i + shift;
            if j > top {
                break;
            }
            coeffs[j] += c;
        }
        Ok(Self::new(low.offset.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::new(&self.offset + &other.offset, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroLeadingTerm);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
        b.push(inv0.clone());
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    s += a * &b[k - j];
                }
            }
            b.push(-(s * &inv0));
        }
        Ok(Self::new(-&self.offset, b))
    }

    /// `theta = q d/dq`, acting as `a_n -> (offset + n) a_n`.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * (&self.offset + int(n as i64)))
            .collect();
        Self::new(self.offset.clone(), coeffs)
    }

    /// Evaluates the truncated expansion at `q = exp(2 pi i tau)`.
    pub fn eval_at_tau(&self, tau: Complex64) -> Complex64 {
        let two_pi_i_tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau;
        let mu = to_f64(&self.offset);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (two_pi_i_tau * (mu + n as f64)).exp() * to_f64(c))
            .sum()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.offset.is_zero() {
            write!(f, "q^({})*(", self.offset)?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)?;
        if !self.offset.is_zero() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Number of unrestricted partitions of `n`, by Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> BigInt {
    partition_numbers(n).pop().expect("non-empty")
}

/// `p(0), ..., p(n)`.
pub fn partition_numbers(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let k = k as i64;
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign_pos = k % 2 == 1;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            let term = if g2 <= m { &p[m - g1] + &p[m - g2] } else { p[m - g1].clone() };
            if sign_pos {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[m] = acc;
    }
    p
}

/// `prod_{n>=1} (1 - q^n)` to order `order`, i.e. the series part of eta.
pub fn euler_product(order: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    // pentagonal number theorem
    coeffs[0] = Rational::one();
    for k in 1.. {
        let k = k as i64;
        let g1 = (k * (3 * k - 1) / 2) as usize;
        if g1 > order {
            break;
        }
        let s = if k % 2 == 0 { int(1) } else { int(-1) };
        coeffs[g1] += &s;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g2 <= order {
            coeffs[g2] += &s;
        }
    }
    QSeries::new(Rational::zero(), coeffs)
}

/// `eta = q^(1/24) prod (1 - q^n)`.
pub fn eta(order: usize) -> QSeries {
    euler_product(order).with_offset(Rational::new(1.into(), 24.into()))
}

/// `eta^(-1) = q^(-1/24) sum p(n) q^n`.
pub fn eta_inverse(order: usize) -> QSeries {
    let coeffs = partition_numbers(order).into_iter().map(Rational::from_integer).collect();
    QSeries::new(Rational::new((-1).into(), 24.into()), coeffs)
}
