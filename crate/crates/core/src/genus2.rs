//! Sewing two tori with parameter `eps`: the rescaled A-matrices,
//! `det(I - A1 A2)`, the period matrix and the genus two Heisenberg partition
//! function, plus a brute force sum over Fock states.
//!
//! `A_a(k, l) = eps^((k+l)/2) C(k, l, tau_a) / sqrt(k l)` is replaced by its
//! conjugate `M_a(k, l) = eps^((k+l)/2) C(k, l, tau_a) / l` under
//! `diag(sqrt k)`. Traces and `(1, 1)` entries are unchanged, so everything
//! stays rational.

use std::fmt;

use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{enumerate_partitions, liz_norm, qv_involution_sum};
use crate::par;
use crate::poly::Poly;
use crate::qseries::eta;
use crate::quasimodular::{coeff_c, e_coefficient, e_factors, pqr_numeric, render_terms, QuasiModular};
use crate::rational::{int, Rational};

/// Polynomial in `P1, Q1, R1, P2, Q2, R2`.
pub type TwoVarQuasiModular = Poly<6>;

pub const TWO_VAR_WEIGHTS: [u32; 6] = [2, 4, 6, 2, 4, 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    One,
    Two,
}

impl Side {
    fn shift(self) -> usize {
        match self {
            Side::One => 0,
            Side::Two => 3,
        }
    }
}

/// Embeds a form in `tau_1` or `tau_2`.
pub fn lift(f: &QuasiModular, side: Side) -> TwoVarQuasiModular {
    let s = side.shift();
    f.map_exponents(|e| {
        let mut out = [0; 6];
        out[s..s + 3].copy_from_slice(e);
        out
    })
}

/// Exchanges `tau_1` and `tau_2`.
pub fn swap_sides(f: &TwoVarQuasiModular) -> TwoVarQuasiModular {
    f.map_exponents(|e| [e[3], e[4], e[5], e[0], e[1], e[2]])
}

/// `(tau_1 weight, tau_2 weight)` if every monomial agrees.
pub fn bi_weight(f: &TwoVarQuasiModular) -> Option<(u32, u32)> {
    let mut it = f.terms().map(|(e, _)| {
        (2 * e[0] + 4 * e[1] + 6 * e[2], 2 * e[3] + 4 * e[4] + 6 * e[5])
    });
    let first = it.next()?;
    it.all(|w| w == first).then_some(first)
}

pub fn eval_two_var(f: &TwoVarQuasiModular, tau1: Complex64, tau2: Complex64, q_order: usize) -> Result<Complex64> {
    let a = pqr_numeric(tau1, q_order)?;
    let b = pqr_numeric(tau2, q_order)?;
    Ok(f.eval_complex(&[a[0], a[1], a[2], b[0], b[1], b[2]]))
}

/// Renders a two-variable form in the Eisenstein basis, `E2(t1)·E2(t2)`.
pub fn render_two_var(f: &TwoVarQuasiModular) -> String {
    render_terms(f.terms().rev().map(|(e, c)| {
        let (e1, e2) = ([e[0], e[1], e[2]], [e[3], e[4], e[5]]);
        let coeff = e_coefficient(&e2, &e_coefficient(&e1, c));
        let mut fs = e_factors(&e1, "(t1)");
        fs.extend(e_factors(&e2, "(t2)"));
        (coeff, fs)
    }))
}

/// `sum_{n <= N} coeffs[n] eps^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeries {
    coeffs: Vec<TwoVarQuasiModular>,
}

impl EpsSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![TwoVarQuasiModular::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, TwoVarQuasiModular::one(), order)
    }

    /// `f eps^power`, dropped entirely if `power > order`.
    pub fn monomial(power: usize, f: TwoVarQuasiModular, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = f;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<TwoVarQuasiModular>) -> Self {
        assert!(!coeffs.is_empty(), "an eps-series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TwoVarQuasiModular] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> TwoVarQuasiModular {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() }
    }

    /// Multiplies by `eps^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }

    /// `exp(self)` for a series without constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a vanishing constant term");
        let n = self.order();
        let mut e = vec![TwoVarQuasiModular::zero(); n + 1];
        e[0] = TwoVarQuasiModular::one();
        // n e_n = sum_{k=1}^n k s_k e_{n-k}
        for m in 1..=n {
            let mut acc = TwoVarQuasiModular::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() && !e[m - k].is_zero() {
                    acc += &(&self.coeffs[k] * &e[m - k]).scale(&int(k as i64));
                }
            }
            e[m] = acc.scale(&Rational::new(1.into(), (m as i64).into()));
        }
        Self { coeffs: e }
    }

    pub fn swap_sides(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(swap_sides).collect() }
    }

    pub fn eval(&self, tau1: Complex64, tau2: Complex64, eps: Complex64, q_order: usize) -> Result<Complex64> {
        let a = pqr_numeric(tau1, q_order)?;
        let b = pqr_numeric(tau2, q_order)?;
        let vals = [a[0], a[1], a[2], b[0], b[1], b[2]];
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.eval_complex(&vals) * eps.powu(n as u32))
            .sum())
    }

    /// `(eps power, E-monomial, coefficient)` rows.
    pub fn table(&self) -> Vec<(usize, String, Rational)> {
        let mut rows = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            for (e, v) in c.terms().rev() {
                let (e1, e2) = ([e[0], e[1], e[2]], [e[3], e[4], e[5]]);
                let coeff = e_coefficient(&e2, &e_coefficient(&e1, v));
                let mut fs = e_factors(&e1, "(t1)");
                fs.extend(e_factors(&e2, "(t2)"));
                let mono = if fs.is_empty() { "1".to_string() } else { fs.join("·") };
                rows.push((n, mono, coeff));
            }
        }
        rows
    }

    pub fn to_json_terms(&self) -> Vec<EpsTerm> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| EpsTerm {
                eps: n,
                terms: c
                    .terms()
                    .map(|(e, v)| TwoVarTerm {
                        p1: e[0],
                        q1: e[1],
                        r1: e[2],
                        p2: e[3],
                        q2: e[4],
                        r2: e[5],
                        coeff: v.clone(),
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[EpsTerm]) -> Self {
        let order = terms.iter().map(|t| t.eps).max().unwrap_or(0);
        let mut s = Self::zero(order);
        for t in terms {
            for m in &t.terms {
                s.coeffs[t.eps].add_term([m.p1, m.q1, m.r1, m.p2, m.q2, m.r2], m.coeff.clone());
            }
        }
        s
    }
}

impl fmt::Display for EpsSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = render_two_var(c);
            parts.push(match n {
                0 => body,
                1 => format!("({body})·eps"),
                _ => format!("({body})·eps^{n}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(eps^{})", parts.join(" + "), self.order() + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoVarTerm {
    #[serde(rename = "P1")]
    pub p1: u32,
    #[serde(rename = "Q1")]
    pub q1: u32,
    #[serde(rename = "R1")]
    pub r1: u32,
    #[serde(rename = "P2")]
    pub p2: u32,
    #[serde(rename = "Q2")]
    pub q2: u32,
    #[serde(rename = "R2")]
    pub r2: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsTerm {
    pub eps: usize,
    pub terms: Vec<TwoVarTerm>,
}

/// Where the `1/sqrt(kl)` of the A-matrix is moved to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Rescale {
    /// `M(k, l) = ... / l`
    #[default]
    Column,
    /// `M(k, l) = ... / k`
    Row,
}

/// `K x K` matrix of eps-series.
pub type EpsMatrix = Vec<Vec<EpsSeries>>;

/// The rescaled A-matrix of torus `side`, indices `1..=cutoff` stored at
/// `0..cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RescaledAMatrix {
    pub side: Side,
    pub cutoff: usize,
    pub order: usize,
    pub entries: EpsMatrix,
}

pub fn build_a_matrix(side: Side, cutoff: usize, order: usize, rescale: Rescale) -> RescaledAMatrix {
    let entries = (1..=cutoff as u32)
        .map(|k| {
            (1..=cutoff as u32)
                .map(|l| {
                    let power = ((k + l) / 2) as usize;
                    if (k + l) % 2 == 1 || power > order {
                        return EpsSeries::zero(order);
                    }
                    let div = match rescale {
                        Rescale::Column => l,
                        Rescale::Row => k,
                    };
                    let c = coeff_c(k, l).scale(&Rational::new(1.into(), (div as i64).into()));
                    EpsSeries::monomial(power, lift(&c, side), order)
                })
                .collect()
        })
        .collect();
    RescaledAMatrix { side, cutoff, order, entries }
}

fn mat_mul(a: &EpsMatrix, b: &EpsMatrix, order: usize) -> EpsMatrix {
    let n = a.len();
    par::map_range(0..n, |i| {
        (0..n)
            .map(|j| {
                let mut acc = EpsSeries::zero(order);
                for (k, aik) in a[i].iter().enumerate() {
                    if aik.is_zero() || b[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&aik.mul(&b[k][j]));
                }
                acc
            })
            .collect()
    })
}

fn mat_vec(a: &EpsMatrix, v: &[EpsSeries], order: usize) -> Vec<EpsSeries> {
    a.iter()
        .map(|row| {
            let mut acc = EpsSeries::zero(order);
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        })
        .collect()
}

fn trace(a: &EpsMatrix, order: usize) -> EpsSeries {
    a.iter().enumerate().fold(EpsSeries::zero(order), |acc, (i, row)| acc.add(&row[i]))
}

fn check_cutoff(cutoff: usize, order: usize) -> Result<()> {
    if cutoff < order.max(1) {
        return Err(Error::CutoffTooSmall { cutoff, order });
    }
    Ok(())
}

/// Default cutoff `2N`: indices above `2N - 1` only reach `eps^(N+1)` and beyond.
pub fn default_cutoff(order: usize) -> usize {
    (2 * order).max(1)
}

/// `Tr((M1 M2)^n)` for `n = 1..` as long as it can contribute below `eps^N`.
pub fn trace_powers(cutoff: usize, order: usize, rescale: Rescale) -> Result<Vec<EpsSeries>> {
    check_cutoff(cutoff, order)?;
    let m1 = build_a_matrix(Side::One, cutoff, order, rescale);
    let m2 = build_a_matrix(Side::Two, cutoff, order, rescale);
    let b = mat_mul(&m1.entries, &m2.entries, order);
    let mut out = Vec::new();
    let mut pow = b.clone();
    // each factor of B carries at least eps^2
    for n in 1..=order / 2 {
        if n > 1 {
            pow = mat_mul(&pow, &b, order);
        }
        out.push(trace(&pow, order));
    }
    Ok(out)
}

/// `log det(I - A1 A2) = -sum Tr((A1 A2)^n) / n`.
pub fn logdet_series(cutoff: usize, order: usize) -> Result<EpsSeries> {
    logdet_series_with(cutoff, order, Rescale::Column)
}

pub fn logdet_series_with(cutoff: usize, order: usize, rescale: Rescale) -> Result<EpsSeries> {
    let traces = trace_powers(cutoff, order, rescale)?;
    let mut acc = EpsSeries::zero(order);
    for (i, t) in traces.iter().enumerate() {
        acc = acc.sub(&t.scale(&Rational::new(1.into(), ((i + 1) as i64).into())));
    }
    Ok(acc)
}

pub fn det_series(cutoff: usize, order: usize) -> Result<EpsSeries> {
    Ok(logdet_series(cutoff, order)?.exp())
}

/// `det(I - A1 A2)^(-1/2)`.
pub fn det_inv_sqrt(cutoff: usize, order: usize) -> Result<EpsSeries> {
    Ok(logdet_series(cutoff, order)?.scale(&Rational::new((-1).into(), 2.into())).exp())
}

/// The period matrix with its `2 pi i tau_a` atoms kept apart:
/// `2 pi i Omega_aa = 2 pi i tau_a + omega_aa`, `2 pi i Omega_12 = omega_12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodMatrix {
    pub omega11: EpsSeries,
    pub omega22: EpsSeries,
    pub omega12: EpsSeries,
}

impl PeriodMatrix {
    /// `Omega` itself at a numeric point.
    pub fn eval(&self, tau1: Complex64, tau2: Complex64, eps: Complex64, q_order: usize) -> Result<[[Complex64; 2]; 2]> {
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let o11 = tau1 + self.omega11.eval(tau1, tau2, eps, q_order)? / two_pi_i;
        let o22 = tau2 + self.omega22.eval(tau1, tau2, eps, q_order)? / two_pi_i;
        let o12 = self.omega12.eval(tau1, tau2, eps, q_order)? / two_pi_i;
        Ok([[o11, o12], [o12, o22]])
    }
}

impl fmt::Display for PeriodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "2*pi*i*Omega11 = 2*pi*i*t1 + {}", self.omega11)?;
        writeln!(f, "2*pi*i*Omega22 = 2*pi*i*t2 + {}", self.omega22)?;
        write!(f, "2*pi*i*Omega12 = {}", self.omega12)
    }
}

/// Column 1 of `(I - X Y)^-1` and row 1 of `Y (I - X Y)^-1`, as
/// `(R(1,1), (Y R)(1,1))`.
fn resolvent_entries(x: &EpsMatrix, y: &EpsMatrix, order: usize) -> (EpsSeries, EpsSeries) {
    let k = x.len();
    let b = mat_mul(x, y, order);
    let mut w: Vec<EpsSeries> = (0..k)
        .map(|i| if i == 0 { EpsSeries::one(order) } else { EpsSeries::zero(order) })
        .collect();
    let mut col = w.clone();
    for _ in 0..order / 2 {
        w = mat_vec(&b, &w, order);
        col = col.iter().zip(&w).map(|(a, b)| a.add(b)).collect();
    }
    let mut yr = EpsSeries::zero(order);
    for (yj, rj) in y[0].iter().zip(&col) {
        if !yj.is_zero() && !rj.is_zero() {
            yr = yr.add(&yj.mul(rj));
        }
    }
    (col[0].clone(), yr)
}

pub fn period_matrix(cutoff: usize, order: usize) -> Result<PeriodMatrix> {
    check_cutoff(cutoff, order)?;
    let m1 = build_a_matrix(Side::One, cutoff, order, Rescale::Column).entries;
    let m2 = build_a_matrix(Side::Two, cutoff, order, Rescale::Column).entries;
    let (r11, m2r) = resolvent_entries(&m1, &m2, order);
    let (_, m1r) = resolvent_entries(&m2, &m1, order);
    Ok(PeriodMatrix {
        omega11: m2r.shift(1),
        omega22: m1r.shift(1),
        omega12: r11.shift(1).neg(),
    })
}

/// `Z^(2)` for rank `r`: the prefactor `eta(t1)^-r eta(t2)^-r` and the series
/// `det(I - A1 A2)^(-r/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2 {
    pub rank: u32,
    pub series: EpsSeries,
}

impl Z2 {
    pub fn prefactor(&self) -> String {
        format!("eta(t1)^-{r}·eta(t2)^-{r}", r = self.rank)
    }
}

pub fn z2_heisenberg(rank: u32, cutoff: usize, order: usize) -> Result<Z2> {
    if rank == 0 {
        return Err(Error::RangeError("rank must be >= 1".into()));
    }
    let ld = logdet_series(cutoff, order)?;
    let series = ld.scale(&Rational::new((-(rank as i64)).into(), 2.into())).exp();
    Ok(Z2 { rank, series })
}

/// `sum_{lambda |- n} Q_lambda(tau_1) Q_lambda(tau_2) / <v_lambda, v_lambda>`,
/// the `eps^n` coefficient of the rank one series, summed over Fock states.
pub fn chequered_oracle(n: u32) -> TwoVarQuasiModular {
    let parts = enumerate_partitions(n);
    par::map_reduce(
        &parts,
        TwoVarQuasiModular::zero,
        |p| {
            let q = qv_involution_sum(p);
            if q.is_zero() {
                return TwoVarQuasiModular::zero();
            }
            (&lift(&q, Side::One) * &lift(&q, Side::Two)).scale(&liz_norm(p).recip())
        },
        |a, b| a + b,
    )
}

/// An element of `G = (SL2 x SL2) x| Z2` acting on `(tau_1, tau_2, eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GElement {
    Identity,
    Gamma1([[i64; 2]; 2]),
    Gamma2([[i64; 2]; 2]),
    Beta,
}

pub const T: [[i64; 2]; 2] = [[1, 1], [0, 1]];
pub const S: [[i64; 2]; 2] = [[0, -1], [1, 0]];

fn mobius(g: [[i64; 2]; 2], tau: Complex64) -> (Complex64, Complex64) {
    let [[a, b], [c, d]] = g;
    let ctd = tau * c as f64 + d as f64;
    ((tau * a as f64 + b as f64) / ctd, ctd)
}

fn eta_numeric(tau: Complex64, q_order: usize) -> Complex64 {
    eta(q_order).eval_at_tau(tau)
}

/// The character of `eta^-2` under weight `-1` slash action:
/// `chi(g) = (c tau + d) eta(tau)^2 / eta(g tau)^2`. Closed forms for `S`, `T`.
pub fn chi(g: [[i64; 2]; 2], tau: Complex64, q_order: usize) -> Complex64 {
    if g == T {
        return Complex64::from_polar(1.0, -std::f64::consts::PI / 6.0);
    }
    if g == S {
        return Complex64::new(0.0, 1.0);
    }
    let (gt, ctd) = mobius(g, tau);
    ctd * (eta_numeric(tau, q_order) / eta_numeric(gt, q_order)).powu(2)
}

/// `2 pi min |m + n tau|` over nonzero lattice points.
fn lattice_min(tau: Complex64) -> f64 {
    let mut best = f64::INFINITY;
    for m in -20i32..=20 {
        for n in -20i32..=20 {
            if m != 0 || n != 0 {
                best = best.min((tau * n as f64 + m as f64).norm());
            }
        }
    }
    2.0 * std::f64::consts::PI * best
}

/// The numeric genus two equivariance residual for the rank two partition
/// function `Z = eta(t1)^-2 eta(t2)^-2 det(I - A1 A2)^-1` (weight `-1`):
/// `|Z(g.x) det(C Omega + D) - chi2(g) Z(x)|`.
pub fn numeric_equivariance_check(
    g: GElement,
    tau1: Complex64,
    tau2: Complex64,
    eps: Complex64,
    order: usize,
    q_order: usize,
) -> Result<f64> {
    if tau1.im <= 0.0 || tau2.im <= 0.0 {
        return Err(Error::NonPositiveImaginaryPart);
    }
    let bound = lattice_min(tau1) * lattice_min(tau2) / 4.0;
    if eps.norm() >= bound {
        return Err(Error::OutsideDomain(format!("|eps| = {} >= {bound}", eps.norm())));
    }
    let cutoff = default_cutoff(order);
    let series = z2_heisenberg(2, cutoff, order)?.series;
    let z = |t1: Complex64, t2: Complex64, e: Complex64| -> Result<Complex64> {
        let pre = (eta_numeric(t1, q_order) * eta_numeric(t2, q_order)).powi(-2);
        Ok(pre * series.eval(t1, t2, e, q_order)?)
    };
    let z0 = z(tau1, tau2, eps)?;
    let (lhs, chi2) = match g {
        GElement::Identity => (z0, Complex64::one()),
        GElement::Beta => (z(tau2, tau1, eps)? * -1.0, -Complex64::one()),
        GElement::Gamma1(m) | GElement::Gamma2(m) => {
            let omega = period_matrix(cutoff, order)?.eval(tau1, tau2, eps, q_order)?;
            let [[_, _], [c, d]] = m;
            let (c, d) = (c as f64, d as f64);
            let (moved, det, ch) = if let GElement::Gamma1(_) = g {
                let (t, ctd) = mobius(m, tau1);
                ((t, tau2, eps / ctd), omega[0][0] * c + d, chi(m, tau1, q_order))
            } else {
                let (t, ctd) = mobius(m, tau2);
                ((tau1, t, eps / ctd), omega[1][1] * c + d, chi(m, tau2, q_order))
            };
            (z(moved.0, moved.1, moved.2)? * det, ch)
        }
    };
    Ok((lhs - chi2 * z0).norm())
}
