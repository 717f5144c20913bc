//! The ring `Q[P, Q, R]` of quasimodular forms.
//!
//! `P = -12 E2`, `Q = 720 E4`, `R = -30240 E6`, where `E_k` is normalised as
//! `-B_k/k! + 2/(k-1)! sum sigma_{k-1}(n) q^n`. Monomials `P^i Q^j R^k` have
//! weight `2i + 4j + 6k`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exponents, Poly};
use crate::qseries::QSeries;
use crate::rational::{binomial, binomial_rational, factorial, int, sigma, Rational};

pub type QuasiModular = Poly<3>;

pub const WEIGHTS: [u32; 3] = [2, 4, 6];

/// `P = P_PER_E2 * E2`, and likewise for `Q`, `R`.
pub const P_PER_E2: i64 = -12;
pub const Q_PER_E4: i64 = 720;
pub const R_PER_E6: i64 = -30240;

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Rational {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut b = cache.lock().expect("bernoulli cache poisoned");
    while b.len() <= k {
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        let m = b.len();
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(m as i64 + 1, j as i64)) * bj;
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b[k].clone()
}

/// q-expansion of `E_k` to order `order`. Odd `k` gives the zero series.
pub fn eisenstein_qexp(k: i64, order: usize) -> Result<QSeries> {
    if k < 2 {
        return Err(Error::InvalidWeight(k));
    }
    if k % 2 == 1 {
        return Ok(QSeries::zero(order));
    }
    let ku = k as usize;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(-bernoulli(ku) / Rational::from_integer(factorial(ku as u64)));
    let scale = Rational::new(BigInt::from(2), factorial(ku as u64 - 1));
    for n in 1..=order {
        coeffs.push(&scale * Rational::from_integer(sigma(k as u32 - 1, n as u64)));
    }
    Ok(QSeries::new(Rational::zero(), coeffs))
}

/// `[P, Q, R]` as q-series.
pub fn pqr_series(order: usize) -> [QSeries; 3] {
    let e = |k, c| eisenstein_qexp(k, order).expect("even weight").scale(&int(c));
    [e(2, P_PER_E2), e(4, Q_PER_E4), e(6, R_PER_E6)]
}

pub fn p() -> QuasiModular {
    QuasiModular::var(0)
}

pub fn q() -> QuasiModular {
    QuasiModular::var(1)
}

pub fn r() -> QuasiModular {
    QuasiModular::var(2)
}

pub fn constant(c: Rational) -> QuasiModular {
    QuasiModular::constant(c)
}

/// `E_k` inside the ring. Weight 2 is `-P/12`, odd weights are zero, and
/// `E_k` for even `k >= 4` is found by an exact linear solve in the basis
/// `Q^a R^b`, `4a + 6b = k`.
pub fn eisenstein(k: i64) -> Result<QuasiModular> {
    if k < 2 {
        return Err(Error::InvalidWeight(k));
    }
    if k % 2 == 1 {
        return Ok(QuasiModular::zero());
    }
    if k == 2 {
        return Ok(p().scale(&Rational::new(1.into(), P_PER_E2.into())));
    }
    static CACHE: OnceLock<Mutex<HashMap<i64, QuasiModular>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("eisenstein cache poisoned").get(&k) {
        return Ok(hit.clone());
    }
    let basis = modular_basis(k as u32);
    let rows = basis.len() + 4;
    let order = rows - 1;
    let series: Vec<QSeries> = basis.iter().map(|b| to_qseries(b, order)).collect();
    let target = eisenstein_qexp(k, order)?;
    let matrix: Vec<Vec<Rational>> =
        (0..rows).map(|n| series.iter().map(|s| s.coeff(n)).collect()).collect();
    let rhs: Vec<Rational> = (0..rows).map(|n| target.coeff(n)).collect();
    let x = solve_exact(&matrix, &rhs).expect("E_k lies in the span of Q^a R^b");
    let mut out = QuasiModular::zero();
    for (b, c) in basis.iter().zip(&x) {
        out += &b.scale(c);
    }
    cache.lock().expect("eisenstein cache poisoned").insert(k, out.clone());
    Ok(out)
}

/// Monomials `Q^a R^b` of weight `k`.
pub fn modular_basis(k: u32) -> Vec<QuasiModular> {
    let mut out = Vec::new();
    let mut b = 0;
    while 6 * b <= k {
        let rest = k - 6 * b;
        if rest.is_multiple_of(4) {
            out.push(QuasiModular::monomial([0, rest / 4, b], Rational::one()));
        }
        b += 1;
    }
    out
}

/// Dimension of the space of holomorphic modular forms of weight `k`.
pub fn dim_mk(k: i64) -> u64 {
    if k < 0 || k % 2 == 1 {
        return 0;
    }
    let base = (k / 12) as u64;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// Solves `A x = b` for a full-column-rank overdetermined consistent system.
fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let piv = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero())?;
        m.swap(pivot_row, piv);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != pivot_row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let src = m[pivot_row].clone();
                for (x, s) in m[i].iter_mut().zip(&src) {
                    *x -= &f * s;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

pub fn weight(f: &QuasiModular) -> Option<u32> {
    f.homogeneous_weight(&WEIGHTS)
}

/// `q d/dq` on the generators.
pub fn theta_images() -> [QuasiModular; 3] {
    let (p, q, r) = (p(), q(), r());
    [
        (&p * &p - q.clone()).scale(&Rational::new(1.into(), 12.into())),
        (&p * &q - r.clone()).scale(&Rational::new(1.into(), 3.into())),
        (&p * &r - &q * &q).scale(&Rational::new(1.into(), 2.into())),
    ]
}

pub fn theta(f: &QuasiModular) -> QuasiModular {
    f.derive(&theta_images())
}

/// `D f = theta f + k E2 f` for `f` homogeneous of weight `k`. The zero form
/// is accepted and maps to zero.
pub fn modular_derivative(f: &QuasiModular) -> Result<QuasiModular> {
    if f.is_zero() {
        return Ok(QuasiModular::zero());
    }
    let k = weight(f).ok_or(Error::InhomogeneousInput)?;
    let e2 = eisenstein(2)?;
    Ok(theta(f) + &(&e2 * f).scale(&int(k as i64)))
}

/// `(Q^3 - R^2) / 1728`, i.e. the discriminant inside the ring.
pub fn delta() -> QuasiModular {
    (q().pow(3) - r().pow(2)).scale(&Rational::new(1.into(), 1728.into()))
}

/// `Delta` from the ring, normalised to offset 1 and relative order `order`.
pub fn delta_series(order: usize) -> QSeries {
    to_qseries(&delta(), order + 1).strip_leading_zeros().truncate(order)
}

/// `q prod (1 - q^n)^24`, relative order `order`.
pub fn delta_product(order: usize) -> QSeries {
    crate::qseries::euler_product(order).pow(24).with_offset(int(1))
}

/// `j = Q^3 / Delta` with offset -1, relative order `order`.
pub fn j_function(order: usize) -> QSeries {
    let q3 = to_qseries(&q().pow(3), order);
    let inv = delta_series(order).invert().expect("Delta has leading coefficient 1");
    q3.mul(&inv)
}

/// `C(k, l) = (-1)^(l+1) (k+l-1)! / ((k-1)! (l-1)!) E_{k+l}`.
pub fn coeff_c(k: u32, l: u32) -> QuasiModular {
    assert!(k >= 1 && l >= 1, "C(k,l) needs k, l >= 1");
    if (k + l) % 2 == 1 {
        return QuasiModular::zero();
    }
    let num = factorial((k + l - 1) as u64);
    let den = factorial((k - 1) as u64) * factorial((l - 1) as u64);
    let mut c = Rational::new(num, den);
    if l.is_multiple_of(2) {
        c = -c;
    }
    eisenstein((k + l) as i64).expect("k + l >= 2").scale(&c)
}

/// A Laurent polynomial in `z` with quasimodular coefficients,
/// `sum coeffs[i] z^(lowest + i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentZ {
    pub lowest: i64,
    pub coeffs: Vec<QuasiModular>,
}

impl LaurentZ {
    pub fn coeff(&self, power: i64) -> QuasiModular {
        usize::try_from(power - self.lowest)
            .ok()
            .and_then(|i| self.coeffs.get(i).cloned())
            .unwrap_or_default()
    }
}

/// `P_1^{(m)}(z)` expanded through `z^z_order`; the `E_1` slot (only present
/// for `m = 0`) is zero.
pub fn weierstrass_p1m(m: u32, z_order: i64) -> LaurentZ {
    let lowest = -(m as i64) - 1;
    let mfact = Rational::from_integer(factorial(m as u64));
    let len = usize::try_from(z_order - lowest + 1).unwrap_or(0);
    let mut coeffs = vec![QuasiModular::zero(); len];
    if len > 0 {
        let sign = if m.is_multiple_of(2) { -int(1) } else { int(1) };
        coeffs[0] = constant(&mfact * sign);
    }
    // E_k z^(k-m-1) sits at index k
    for (k, slot) in coeffs.iter_mut().enumerate().skip(m as usize + 1) {
        if k < 2 {
            continue;
        }
        let b = Rational::from_integer(binomial(k as i64 - 1, m as i64));
        *slot = eisenstein(k as i64).expect("k >= 2").scale(&(b * &mfact));
    }
    LaurentZ { lowest, coeffs }
}

/// `c(k, i, m)`: coefficient of `x^m` in `binom(k - 1 + x, i)`.
pub fn square_bracket_coeff(k: i64, i: u32, m: u32) -> Rational {
    // prod_{j<i} (k - 1 - j + x) / i!
    let mut poly = vec![Rational::one()];
    for j in 0..i as i64 {
        let a = int(k - 1 - j);
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d] += c * &a;
            next[d + 1] += c;
        }
        poly = next;
    }
    let c = poly.get(m as usize).cloned().unwrap_or_else(Rational::zero);
    c / Rational::from_integer(factorial(i as u64))
}

/// The same coefficient read off `ln(1+w)^m (1+w)^(k-1) / m!` at `w^i`.
pub fn square_bracket_coeff_log(k: i64, i: u32, m: u32) -> Rational {
    let n = i as usize;
    let mut ln = vec![Rational::zero(); n + 1];
    for (d, slot) in ln.iter_mut().enumerate().skip(1) {
        let s = if d % 2 == 1 { int(1) } else { int(-1) };
        *slot = s / int(d as i64);
    }
    let mul = |a: &[Rational], b: &[Rational]| {
        let mut out = vec![Rational::zero(); n + 1];
        for (x, ca) in a.iter().enumerate() {
            for (y, cb) in b.iter().enumerate().take(n + 1 - x) {
                out[x + y] += ca * cb;
            }
        }
        out
    };
    let mut acc = vec![Rational::zero(); n + 1];
    acc[0] = Rational::one();
    for _ in 0..m {
        acc = mul(&acc, &ln);
    }
    let kk = int(k - 1);
    let binom_series: Vec<Rational> = (0..=n).map(|d| binomial_rational(&kk, d as u64)).collect();
    acc = mul(&acc, &binom_series);
    acc[n].clone() / Rational::from_integer(factorial(m as u64))
}

/// q-expansion of `f` to order `order`.
pub fn to_qseries(f: &QuasiModular, order: usize) -> QSeries {
    let gens = pqr_series(order);
    let mut powers: [Vec<QSeries>; 3] = Default::default();
    let mut out = QSeries::zero(order);
    for (e, c) in f.terms() {
        let mut term = QSeries::constant(c.clone(), order);
        for v in 0..3 {
            let pw = &mut powers[v];
            if pw.is_empty() {
                pw.push(QSeries::one(order));
            }
            while pw.len() <= e[v] as usize {
                let next = pw.last().expect("non-empty").mul(&gens[v]);
                pw.push(next);
            }
            if e[v] > 0 {
                term = term.mul(&pw[e[v] as usize]);
            }
        }
        out = out.add(&term).expect("integral offsets");
    }
    out
}

/// Values of `P, Q, R` at `tau` from their order-`order` q-expansions.
pub fn pqr_numeric(tau: Complex64, order: usize) -> Result<[Complex64; 3]> {
    if tau.im <= 0.0 {
        return Err(Error::NonPositiveImaginaryPart);
    }
    let s = pqr_series(order);
    Ok([s[0].eval_at_tau(tau), s[1].eval_at_tau(tau), s[2].eval_at_tau(tau)])
}

pub fn eval_numeric(f: &QuasiModular, tau: Complex64, order: usize) -> Result<Complex64> {
    Ok(f.eval_complex(&pqr_numeric(tau, order)?))
}

/// `|E2(g tau)(c tau + d)^-2 - E2(tau) + c / (2 pi i (c tau + d))|` for
/// `g = [[a, b], [c, d]]`.
pub fn e2_transformation_residual(g: [[i64; 2]; 2], tau: Complex64, order: usize) -> Result<f64> {
    let [[a, b], [c, d]] = g;
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    let ctd = tau * c + d;
    let gtau = (tau * a + b) / ctd;
    let e2 = eisenstein(2)?;
    let lhs = eval_numeric(&e2, gtau, order)? / (ctd * ctd) - eval_numeric(&e2, tau, order)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let rhs = -Complex64::new(c, 0.0) / (two_pi_i * ctd);
    Ok((lhs - rhs).norm())
}

/// One `{"P":i,"Q":j,"R":k,"coeff":"p/q"}` entry of the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmTerm {
    #[serde(rename = "P")]
    pub p: u32,
    #[serde(rename = "Q")]
    pub q: u32,
    #[serde(rename = "R")]
    pub r: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub coeff: Rational,
}

pub fn to_terms(f: &QuasiModular) -> Vec<QmTerm> {
    f.terms()
        .map(|(e, c)| QmTerm { p: e[0], q: e[1], r: e[2], coeff: c.clone() })
        .collect()
}

pub fn from_terms(terms: &[QmTerm]) -> QuasiModular {
    let mut f = QuasiModular::zero();
    for t in terms {
        f.add_term([t.p, t.q, t.r], t.coeff.clone());
    }
    f
}

/// Joins `(coefficient, factor list)` pairs into `a·X·Y + b·Z - ...`.
pub(crate) fn render_terms(terms: impl IntoIterator<Item = (Rational, Vec<String>)>) -> String {
    let mut out = String::new();
    for (c, factors) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || factors.is_empty() {
            parts.push(mag.to_string());
        }
        parts.extend(factors);
        out.push_str(&parts.join("·"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn power_factor(name: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// Factors `c P^i Q^j R^k` as a rational multiple of `E2^i E4^j E6^k`.
pub(crate) fn e_coefficient(e: &Exponents<3>, c: &Rational) -> Rational {
    let f = |base: i64, k: u32| Rational::from_integer(BigInt::from(base).pow(k));
    c * f(P_PER_E2, e[0]) * f(Q_PER_E4, e[1]) * f(R_PER_E6, e[2])
}

pub(crate) fn e_factors(e: &Exponents<3>, suffix: &str) -> Vec<String> {
    ["E2", "E4", "E6"]
        .iter()
        .zip(e)
        .filter_map(|(n, &k)| power_factor(&format!("{n}{suffix}"), k))
        .collect()
}

/// Renders `f` in the Eisenstein basis, e.g. `-90·E2·E4·E6`.
pub fn render_e(f: &QuasiModular) -> String {
    render_terms(f.terms().rev().map(|(e, c)| (e_coefficient(e, c), e_factors(e, ""))))
}

/// Renders `f` as a polynomial in `P, Q, R`.
pub fn render_pqr(f: &QuasiModular) -> String {
    render_terms(f.terms().rev().map(|(e, c)| {
        let fs = ["P", "Q", "R"].iter().zip(e).filter_map(|(n, &k)| power_factor(n, k)).collect();
        (c.clone(), fs)
    }))
}

/// Displays in the Eisenstein basis.
pub struct EForm<'a>(pub &'a QuasiModular);

impl fmt::Display for EForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_e(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_generating_function() {
        // z / (e^z - 1) by inverting (e^z - 1)/z = sum z^n / (n+1)!
        let n = 14;
        let s = QSeries::new(
            Rational::zero(),
            (0..=n).map(|k| Rational::new(1.into(), factorial(k as u64 + 1))).collect(),
        );
        let inv = s.invert().unwrap();
        for k in 0..=n {
            assert_eq!(inv.coeff(k), bernoulli(k) / Rational::from_integer(factorial(k as u64)));
        }
    }

    #[test]
    fn eisenstein_expansions() {
        let e2 = eisenstein_qexp(2, 5).unwrap();
        assert_eq!(e2.coeff(0), rat(-1, 12));
        let q = eisenstein_qexp(4, 3).unwrap().scale(&int(720));
        assert_eq!(q.coeffs(), &[1, 240, 2160, 6720].map(int));
        assert!(eisenstein_qexp(5, 10).unwrap().is_zero());
        assert_eq!(eisenstein_qexp(1, 3), Err(Error::InvalidWeight(1)));
    }

    #[test]
    fn generator_expansions() {
        let [ps, qs, rs] = pqr_series(4);
        assert_eq!(ps.coeffs(), &[1, -24, -72, -96, -168].map(int));
        assert_eq!(qs.coeff(1), int(240));
        assert_eq!(rs.coeffs()[..3], [1, -504, -16632].map(int));
        let d = qs.pow(3).sub(&rs.pow(2)).unwrap();
        assert_eq!(d.coeff(0), int(0));
        assert_eq!(d.coeff(1), int(1728));
        assert!(to_qseries(&QuasiModular::zero(), 5).is_zero());
    }

    #[test]
    fn eisenstein_identities() {
        let e4 = eisenstein(4).unwrap();
        let e6 = eisenstein(6).unwrap();
        assert_eq!(e4, q().scale(&rat(1, 720)));
        assert_eq!(eisenstein(8).unwrap(), (&e4 * &e4).scale(&rat(3, 7)));
        assert_eq!(eisenstein(10).unwrap(), (&e4 * &e6).scale(&rat(5, 11)));
        assert_eq!(weight(&(p() * q() * r())), Some(12));
        assert!(eisenstein(7).unwrap().is_zero());
    }

    #[test]
    fn modular_derivatives() {
        let e4 = eisenstein(4).unwrap();
        let e6 = eisenstein(6).unwrap();
        assert_eq!(modular_derivative(&e4).unwrap(), e6.scale(&int(14)));
        assert_eq!(modular_derivative(&e6).unwrap(), (&e4 * &e4).scale(&rat(60, 7)));
        assert!(modular_derivative(&delta()).unwrap().is_zero());
        assert_eq!(modular_derivative(&(p() + q())), Err(Error::InhomogeneousInput));
    }

    #[test]
    fn delta_and_j() {
        assert_eq!(delta_series(50), delta_product(50));
        let d = delta_series(3);
        assert_eq!(d.offset(), &int(1));
        assert_eq!(d.coeffs(), &[1, -24, 252, -1472].map(int));
        let j = j_function(5);
        assert_eq!(j.offset(), &int(-1));
        assert_eq!(j.coeffs()[..4], [1, 744, 196884, 21493760].map(int));
        assert_eq!(d.invert().unwrap().offset(), &int(-1));
    }

    #[test]
    fn hilbert_series_dimensions() {
        let expect = [1, 0, 1, 1, 1, 1, 2, 1, 2];
        for (i, &d) in expect.iter().enumerate() {
            assert_eq!(dim_mk(2 * i as i64), d, "k = {}", 2 * i);
            assert_eq!(modular_basis(2 * i as u32).len() as u64, d);
        }
        assert_eq!(dim_mk(12), 2);
        assert_eq!(dim_mk(3), 0);
    }

    #[test]
    fn c_coefficients() {
        assert_eq!(coeff_c(1, 1), eisenstein(2).unwrap());
        assert_eq!(coeff_c(2, 2), eisenstein(4).unwrap().scale(&int(-6)));
        assert!(coeff_c(1, 2).is_zero());
        for k in 1..=12 {
            for l in 1..=12 {
                assert_eq!(coeff_c(k, l), coeff_c(l, k));
            }
        }
    }

    #[test]
    fn p2_positive_part_is_c() {
        // P2(z1 - z2): coefficient of z1^(k-1) z2^(l-1) in (n-1) E_n (z1 - z2)^(n-2)
        let p2 = weierstrass_p1m(1, 12);
        assert_eq!(p2.coeff(-2), constant(int(1)));
        for k in 1..=6u32 {
            for l in 1..=6u32 {
                let n = (k + l) as i64;
                let a = p2.coeff(n - 2);
                let b = Rational::from_integer(binomial(n - 2, k as i64 - 1));
                let s = if (l - 1) % 2 == 0 { int(1) } else { int(-1) };
                assert_eq!(a.scale(&(b * s)), coeff_c(k, l), "k={k} l={l}");
            }
        }
        let p1 = weierstrass_p1m(0, 4);
        assert_eq!(p1.coeff(-1), constant(int(-1)));
        assert!(p1.coeff(0).is_zero());
        assert_eq!(p1.coeff(1), eisenstein(2).unwrap());
    }

    #[test]
    fn square_bracket() {
        for k in -3..=5 {
            for i in 0..=8 {
                assert_eq!(square_bracket_coeff(k, i, 0), binomial_rational(&int(k - 1), i as u64));
                for m in 0..=i {
                    assert_eq!(square_bracket_coeff(k, i, m), square_bracket_coeff_log(k, i, m));
                }
            }
        }
        for k in 1..=6i64 {
            for n in 0..=6i64 {
                for i in 0..=n as u32 {
                    let s: Rational = (0..=i)
                        .map(|m| {
                            square_bracket_coeff(k, i, m) * int(n + 1 - k).pow(m as i32)
                        })
                        .sum();
                    assert_eq!(s, Rational::from_integer(binomial(n, i as i64)));
                }
            }
        }
    }

    #[test]
    fn numeric_evaluation() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(eval_numeric(&QuasiModular::zero(), i, 10).unwrap(), Complex64::new(0.0, 0.0));
        assert!(eval_numeric(&delta(), i, 30).unwrap().norm() > 1e-4);
        assert_eq!(eval_numeric(&p(), Complex64::new(0.0, -1.0), 5), Err(Error::NonPositiveImaginaryPart));
        let res = e2_transformation_residual([[0, -1], [1, 0]], Complex64::new(0.0, 2.0), 40).unwrap();
        assert!(res < 1e-8, "{res}");
    }

    #[test]
    fn renderings_and_json() {
        let f = (p() * q() * r()).scale(&rat(-90, -12 * 720 * -30240));
        assert_eq!(render_e(&f), "-90·E2·E4·E6");
        assert_eq!(render_pqr(&(p().pow(2) - q())), "P^2 - Q");
        let js = serde_json::to_string(&to_terms(&r().scale(&rat(1, 2)))).unwrap();
        assert_eq!(js, r#"[{"P":0,"Q":0,"R":1,"coeff":"1/2"}]"#);
        let back: Vec<QmTerm> = serde_json::from_str(&js).unwrap();
        assert_eq!(from_terms(&back), r().scale(&rat(1, 2)));
    }

    #[test]
    fn theta_eta_identity() {
        let n = 30;
        let eta = crate::qseries::eta(n);
        let rhs = eta.mul(&eisenstein_qexp(2, n).unwrap()).scale(&rat(-1, 2));
        assert_eq!(eta.theta(), rhs);
    }

    fn arb_homogeneous(k: u32) -> impl Strategy<Value = QuasiModular> {
        let monos: Vec<[u32; 3]> = (0..=k / 2)
            .flat_map(|i| (0..=k / 4).flat_map(move |j| (0..=k / 6).map(move |l| [i, j, l])))
            .filter(|e| 2 * e[0] + 4 * e[1] + 6 * e[2] == k)
            .collect();
        proptest::collection::vec(-9i64..9, monos.len()).prop_map(move |cs| {
            let mut f = QuasiModular::zero();
            for (e, c) in monos.iter().zip(cs) {
                f.add_term(*e, int(c));
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn derivation_matches_qexpansion(f in (1u32..6).prop_flat_map(|k| arb_homogeneous(2 * k))) {
            prop_assume!(!f.is_zero());
            let w = weight(&f).unwrap();
            let n = 30;
            let lhs = to_qseries(&modular_derivative(&f).unwrap(), n);
            let fs = to_qseries(&f, n);
            let e2f = to_qseries(&(&eisenstein(2).unwrap() * &f), n).scale(&int(w as i64));
            prop_assert_eq!(lhs, fs.theta().add(&e2f).unwrap());
        }

        #[test]
        fn d_is_a_derivation(f in arb_homogeneous(6), g in arb_homogeneous(8)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let lhs = modular_derivative(&(&f * &g)).unwrap();
            let rhs = &modular_derivative(&f).unwrap() * &g + &(&f * &modular_derivative(&g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
