//! Polynomials and rational functions in the central charge `c`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational};

/// Dense coefficients, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyC {
    coeffs: Vec<Rational>,
}

impl PolyC {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The variable `c`.
    pub fn c() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `c - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    /// Euclidean division, `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] * &inv;
            if !f.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &f * dc;
                }
            }
            q[i] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Quotient of an exact division; panics if there is a remainder.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Positive rational `k` with `k * self` primitive in `Z[c]` and positive
    /// leading coefficient.
    fn primitive_scale(&self) -> Rational {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let g = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        let mut k = Rational::new(lcm, g);
        if self.lead().is_negative() {
            k = -k;
        }
        k
    }

    /// Square-free decomposition (Yun): `self = lead * prod f_i^i`, returned as
    /// `(i, f_i)` with monic non-constant `f_i`.
    pub fn squarefree_parts(&self) -> Vec<(u32, PolyC)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0);
        let mut c = df.div_exact(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = &c - &b.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a));
            }
            i += 1;
        }
        out
    }

    /// Rational roots with multiplicity, ascending. Found numerically on each
    /// square-free part and certified by exact evaluation.
    pub fn rational_roots(&self) -> Vec<(Rational, u32)> {
        let mut out = Vec::new();
        for (mult, part) in self.squarefree_parts() {
            let prim = part.scale(&part.primitive_scale());
            let lead = prim.lead().to_integer();
            let lead_divs = small_divisors(&lead);
            let mut rest = part.clone();
            for z in numeric_roots(&part) {
                if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                    continue;
                }
                for b in &lead_divs {
                    let bf = to_f64(&Rational::from_integer(b.clone()));
                    let a = (z.re * bf).round();
                    if !a.is_finite() {
                        continue;
                    }
                    let cand = Rational::new(BigInt::from(a as i128), b.clone());
                    if rest.eval(&cand).is_zero() {
                        rest = rest.div_exact(&PolyC::linear_root(&cand));
                        out.push((cand, mult));
                        break;
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn factor(&self) -> Factored {
        if self.is_zero() {
            return Factored { unit: Rational::zero(), linear: Vec::new(), rest: PolyC::one() };
        }
        let roots = self.rational_roots();
        let mut rest = self.clone();
        let mut linear = Vec::new();
        for (r, m) in roots {
            let lin = PolyC::linear_root(&r);
            let k = lin.primitive_scale();
            let prim = lin.scale(&k);
            for _ in 0..m {
                rest = rest.div_exact(&prim);
            }
            linear.push((prim, m));
        }
        // the bare factor c leads
        linear.sort_by_key(|(f, _)| f != &PolyC::c());
        let unit;
        if rest.degree() == Some(0) {
            unit = rest.lead();
            rest = PolyC::one();
        } else {
            let k = rest.primitive_scale();
            unit = k.recip();
            rest = rest.scale(&k);
        }
        Factored { unit, linear, rest }
    }
}

/// Divisors of `|n|` when `n` is small enough to trial-divide; otherwise just `1`.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Ok(m) = u64::try_from(&n) else {
        return vec![BigInt::one()];
    };
    if m > 1_000_000_000_000 {
        return vec![BigInt::one()];
    }
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            ds.push(d);
            if d * d != m {
                ds.push(m / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds.into_iter().map(BigInt::from).collect()
}

/// All complex roots by Durand-Kerner iteration on the monic polynomial.
fn numeric_roots(p: &PolyC) -> Vec<Complex64> {
    let n = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let m = p.monic();
    let bound = 1.0 + m.coeffs[..n].iter().map(|c| to_f64(c).abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(1e6)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let num = m.eval_complex(z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = num / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// `unit * prod linear_i^m_i * rest`, linear factors primitive in `Z[c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factored {
    pub unit: Rational,
    pub linear: Vec<(PolyC, u32)>,
    pub rest: PolyC,
}

impl Factored {
    pub fn expand(&self) -> PolyC {
        let mut p = PolyC::constant(self.unit.clone());
        for (f, m) in &self.linear {
            p = &p * &f.pow(*m);
        }
        &p * &self.rest
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        for (lin, m) in &self.linear {
            let base = if lin == &PolyC::c() { "c".to_string() } else { format!("({lin})") };
            parts.push(if *m == 1 { base } else { format!("{base}^{m}") });
        }
        if self.rest.degree().unwrap_or(0) > 0 {
            parts.push(format!("({})", self.rest));
        }
        let unit = if self.unit.is_one() && !parts.is_empty() {
            None
        } else if (-&self.unit).is_one() && !parts.is_empty() {
            Some("-".to_string())
        } else {
            Some(self.unit.to_string())
        };
        match unit {
            None => write!(f, "{}", parts.join("·")),
            Some(u) if u == "-" => write!(f, "-{}", parts.join("·")),
            Some(u) if parts.is_empty() => write!(f, "{u}"),
            Some(u) => write!(f, "{u}·{}", parts.join("·")),
        }
    }
}

impl fmt::Display for PolyC {
    /// Highest degree first, e.g. `5c^2+22c-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let coef = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
            let sep = if !coef.is_empty() && !mag.is_integer() && i > 0 { "·" } else { "" };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}{sep}c")?,
                _ => write!(f, "{coef}{sep}c^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add<&PolyC> for &PolyC {
    type Output = PolyC;
    fn add(self, rhs: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyC::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&PolyC> for &PolyC {
    type Output = PolyC;
    fn sub(self, rhs: &PolyC) -> PolyC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyC::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&PolyC> for &PolyC {
    type Output = PolyC;
    fn mul(self, rhs: &PolyC) -> PolyC {
        if self.is_zero() || rhs.is_zero() {
            return PolyC::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyC::new(out)
    }
}

impl Neg for &PolyC {
    type Output = PolyC;
    fn neg(self) -> PolyC {
        PolyC::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(PolyC, Add add, Sub sub, Mul mul);

/// A reduced rational function with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFnC {
    num: PolyC,
    den: PolyC,
}

impl RatFnC {
    pub fn new(num: PolyC, den: PolyC) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self { num, den: PolyC::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_exact(&g), den.div_exact(&g));
        let l = den.lead().recip();
        Self { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn from_poly(p: PolyC) -> Self {
        Self { num: p, den: PolyC::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(PolyC::constant(c))
    }

    pub fn num(&self) -> &PolyC {
        &self.num
    }

    pub fn den(&self) -> &PolyC {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, c: &Rational) -> Result<Rational> {
        let d = self.den.eval(c);
        if d.is_zero() {
            return Err(Error::PoleAtC(c.clone()));
        }
        Ok(self.num.eval(c) / d)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::PoleAtC(Rational::zero()));
        }
        Ok(Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.num.scale(s), self.den.clone())
    }

    /// Rational poles, i.e. rational roots of the denominator.
    pub fn poles(&self) -> Vec<Rational> {
        self.den.rational_roots().into_iter().map(|(r, _)| r).collect()
    }
}

impl fmt::Display for RatFnC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == PolyC::one() {
            write!(f, "{}", self.num.factor())
        } else {
            write!(f, "{} / ({})", self.num.factor(), self.den.factor())
        }
    }
}

impl Add<&RatFnC> for &RatFnC {
    type Output = RatFnC;
    fn add(self, rhs: &RatFnC) -> RatFnC {
        RatFnC::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub<&RatFnC> for &RatFnC {
    type Output = RatFnC;
    fn sub(self, rhs: &RatFnC) -> RatFnC {
        RatFnC::new(&(&self.num * &rhs.den) - &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Mul<&RatFnC> for &RatFnC {
    type Output = RatFnC;
    fn mul(self, rhs: &RatFnC) -> RatFnC {
        RatFnC::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&RatFnC> for &RatFnC {
    type Output = RatFnC;
    fn div(self, rhs: &RatFnC) -> RatFnC {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFnC::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFnC {
    type Output = RatFnC;
    fn neg(self) -> RatFnC {
        RatFnC { num: -&self.num, den: self.den.clone() }
    }
}

forward_owned!(RatFnC, Add add, Sub sub, Mul mul, Div div);
