//! The second order MLDE `[D^2 - (5/4) c (c+4) E4] Z = 0`, its Frobenius
//! solution, and the exceptional dimension formulas in the central charge.

use num_integer::Roots;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::polyc::{PolyC, RatFnC};
use crate::qseries::QSeries;
use crate::quasimodular::eisenstein_qexp;
use crate::rational::{int, is_positive_integer, rat, Rational};

/// The eight charges of the Deligne series with their Lie algebra dimensions.
pub const DELIGNE: [((i64, i64), i64, &str); 8] = [
    ((1, 1), 3, "A1"),
    ((2, 1), 8, "A2"),
    ((14, 5), 14, "G2"),
    ((4, 1), 28, "D4"),
    ((26, 5), 52, "F4"),
    ((6, 1), 78, "E6"),
    ((7, 1), 133, "E7"),
    ((8, 1), 248, "E8"),
];

pub fn deligne_charges() -> Vec<(Rational, i64, &'static str)> {
    DELIGNE.iter().map(|&((n, d), dim, name)| (rat(n, d), dim, name)).collect()
}

/// `(-c/24, (c+4)/24)`.
pub fn indicial_roots(c: &Rational) -> (Rational, Rational) {
    (-c / int(24), (c + int(4)) / int(24))
}

/// `mu^2 - mu/6 - c(c+4)/576`, the indicial polynomial, at `mu` given as a
/// polynomial in `c`.
pub fn indicial_at(mu: &PolyC) -> PolyC {
    let c = PolyC::c();
    let k = (&c * &(&c + &PolyC::constant(int(4)))).scale(&rat(1, 576));
    &(&(mu * mu) - &mu.scale(&rat(1, 6))) - &k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MldeSolution {
    #[serde(with = "crate::rational::serde_str")]
    pub c: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub mu: Rational,
    pub coeffs: QSeries,
}

fn check_resonance(c: &Rational) -> Result<()> {
    let gap = (c + int(2)) / int(12);
    if is_positive_integer(&gap) {
        return Err(Error::ResonantIndicialRoots(c.clone()));
    }
    Ok(())
}

/// Frobenius solution at `mu = -c/24` with `a_0 = 1`:
/// `a_n n (n - (c+2)/12) = -sum_j [2 e_j (mu+n-j) - (5/4) c (c+4) f_j] a_{n-j}`.
pub fn solve_mlde2(c: &Rational, order: usize) -> Result<MldeSolution> {
    check_resonance(c)?;
    let mu = -c / int(24);
    let e2 = eisenstein_qexp(2, order)?;
    let e4 = eisenstein_qexp(4, order)?;
    let k = c * (c + int(4)) * rat(5, 4);
    let gap = (c + int(2)) / int(12);
    let mut a: Vec<Rational> = vec![int(1)];
    for n in 1..=order {
        let mut s = Rational::zero();
        for j in 1..=n {
            let nj = int((n - j) as i64);
            let w = (e2.coeff(j) * (&mu + &nj)) * int(2) - &k * e4.coeff(j);
            s += w * &a[n - j];
        }
        let nn = int(n as i64);
        a.push(-s / (&nn * (&nn - &gap)));
    }
    Ok(MldeSolution { c: c.clone(), mu: mu.clone(), coeffs: QSeries::new(mu, a) })
}

/// `theta^2 Z + 2 E2 theta Z - (5/4) c (c+4) E4 Z`, exact.
pub fn mlde_residual(sol: &MldeSolution) -> QSeries {
    let n = sol.coeffs.order();
    let z = &sol.coeffs;
    let tz = z.theta();
    let e2 = eisenstein_qexp(2, n).expect("weight 2");
    let e4 = eisenstein_qexp(4, n).expect("weight 4");
    let k = &sol.c * (&sol.c + int(4)) * rat(5, 4);
    tz.theta()
        .add(&e2.mul(&tz).scale(&int(2)))
        .and_then(|s| s.sub(&e4.mul(z).scale(&k)))
        .expect("same offset")
}

/// The same recursion over `Q(c)`: `a_1, ..., a_order` as rational functions.
pub fn symbolic_coefficients(order: usize) -> Vec<RatFnC> {
    let e2 = eisenstein_qexp(2, order).expect("weight 2");
    let e4 = eisenstein_qexp(4, order).expect("weight 4");
    let c = PolyC::c();
    let mu = c.scale(&rat(-1, 24));
    let k = (&c * &(&c + &PolyC::constant(int(4)))).scale(&rat(5, 4));
    let gap = (&c + &PolyC::constant(int(2))).scale(&rat(1, 12));
    let mut a = vec![RatFnC::constant(int(1))];
    for n in 1..=order {
        let mut s = RatFnC::constant(Rational::zero());
        for j in 1..=n {
            let shift = &mu + &PolyC::constant(int((n - j) as i64));
            let w = &shift.scale(&(e2.coeff(j) * int(2))) - &k.scale(&e4.coeff(j));
            s = &s + &(&RatFnC::from_poly(w) * &a[n - j]);
        }
        let nn = int(n as i64);
        let den = (&PolyC::constant(nn.clone()) - &gap).scale(&nn);
        a.push(&(-&s) / &RatFnC::from_poly(den));
    }
    a
}

fn poly(c: &[i64]) -> PolyC {
    PolyC::from_ints(c)
}

fn ratfn(num: PolyC, den: PolyC) -> RatFnC {
    RatFnC::new(num, den)
}

fn prod(fs: &[PolyC]) -> PolyC {
    fs.iter().fold(PolyC::one(), |acc, f| &acc * f)
}

/// `d(c) = c (5c + 22) / (10 - c)`.
pub fn d_fn() -> RatFnC {
    ratfn(poly(&[0, 22, 5]), poly(&[10, -1]))
}

/// `h_dual(c) = (12 + 6c) / (10 - c)`.
pub fn h_dual_fn() -> RatFnC {
    ratfn(poly(&[12, 6]), poly(&[10, -1]))
}

pub fn d_of_c(c: &Rational) -> Result<Rational> {
    d_fn().eval(c)
}

pub fn h_dual(c: &Rational) -> Result<Rational> {
    h_dual_fn().eval(c)
}

/// `c (804 + 508c + 175c^2 + 25c^3) / (2 (22 - c)(10 - c))`.
pub fn dim_v2_fn() -> RatFnC {
    ratfn(poly(&[0, 804, 508, 175, 25]), prod(&[poly(&[2]), poly(&[22, -1]), poly(&[10, -1])]))
}

/// `c (33344 + 148872c + 68308c^2 + 10330c^3 + 975c^4 + 125c^5) / (6 (34-c)(22-c)(10-c))`.
pub fn dim_v3_fn() -> RatFnC {
    ratfn(
        poly(&[0, 33344, 148872, 68308, 10330, 975, 125]),
        prod(&[poly(&[6]), poly(&[34, -1]), poly(&[22, -1]), poly(&[10, -1])]),
    )
}

/// `5 (5c + 22)(c + 2)^2 (c - 1) / (2 (22 - c)(10 - c))`.
pub fn p2_fn() -> RatFnC {
    ratfn(
        prod(&[poly(&[5]), poly(&[22, 5]), poly(&[2, 1]), poly(&[2, 1]), poly(&[-1, 1])]),
        prod(&[poly(&[2]), poly(&[22, -1]), poly(&[10, -1])]),
    )
}

/// `5c (5c + 22)(c - 1)(c + 5)(5c^2 + 268) / (6 (34 - c)(22 - c)(10 - c))`.
pub fn p3_fn() -> RatFnC {
    ratfn(
        prod(&[poly(&[0, 5]), poly(&[22, 5]), poly(&[-1, 1]), poly(&[5, 1]), poly(&[268, 0, 5])]),
        prod(&[poly(&[6]), poly(&[34, -1]), poly(&[22, -1]), poly(&[10, -1])]),
    )
}

/// `5c (5c + 22)(c + 6)(c - 1) / (2 (10 - c)^2)`.
pub fn dim_x2_fn() -> RatFnC {
    ratfn(
        prod(&[poly(&[0, 5]), poly(&[22, 5]), poly(&[6, 1]), poly(&[-1, 1])]),
        prod(&[poly(&[2]), poly(&[10, -1]), poly(&[10, -1])]),
    )
}

/// `5c (5c + 22)(c + 2)^2 (c - 8)(5c - 2)(c - 1) / (6 (10 - c)^2 (22 - c)(34 - c))`.
pub fn dim_y3star_fn() -> RatFnC {
    ratfn(
        prod(&[
            poly(&[0, 5]),
            poly(&[22, 5]),
            poly(&[2, 1]),
            poly(&[2, 1]),
            poly(&[-8, 1]),
            poly(&[-2, 5]),
            poly(&[-1, 1]),
        ]),
        prod(&[poly(&[6]), poly(&[10, -1]), poly(&[10, -1]), poly(&[22, -1]), poly(&[34, -1])]),
    )
}

/// `(5c + 22)(2c - 1)(7c + 68) / (2 (c^2 - 55c + 748))`.
pub fn griess_fn() -> RatFnC {
    ratfn(
        prod(&[poly(&[22, 5]), poly(&[-1, 2]), poly(&[68, 7])]),
        prod(&[poly(&[2]), poly(&[748, -55, 1])]),
    )
}

/// `(5c + 22)(2c - 1)(7c + 68)(5c + 3)(3c + 46) / (-5c^4 + 703c^3 - 32992c^2 + 517172c - 3984)`.
pub fn k3_p3_fn() -> RatFnC {
    ratfn(
        prod(&[poly(&[22, 5]), poly(&[-1, 2]), poly(&[68, 7]), poly(&[3, 5]), poly(&[46, 3])]),
        poly(&[-3984, 517172, -32992, 703, -5]),
    )
}

pub fn dim_v2(c: &Rational) -> Result<Rational> {
    dim_v2_fn().eval(c)
}

pub fn dim_v3(c: &Rational) -> Result<Rational> {
    dim_v3_fn().eval(c)
}

pub fn p2(c: &Rational) -> Result<Rational> {
    p2_fn().eval(c)
}

pub fn p3(c: &Rational) -> Result<Rational> {
    p3_fn().eval(c)
}

pub fn dim_x2(c: &Rational) -> Result<Rational> {
    dim_x2_fn().eval(c)
}

pub fn dim_y3star(c: &Rational) -> Result<Rational> {
    dim_y3star_fn().eval(c)
}

pub fn griess_p2(c: &Rational) -> Result<Rational> {
    griess_fn().eval(c)
}

pub fn k3_p3(c: &Rational) -> Result<Rational> {
    k3_p3_fn().eval(c)
}

/// All rational `c` with `d(c) = d` for integer `1 <= d <= d_max`, i.e. the
/// rational roots of `5c^2 + (22 + d) c - 10 d`.
pub fn deligne_scan(d_max: u64) -> Vec<(Rational, i64)> {
    let mut out = Vec::new();
    for d in 1..=d_max as i64 {
        let b = 22 + d;
        let disc = b * b + 200 * d;
        let s = disc.sqrt();
        if s * s != disc {
            continue;
        }
        for root in [rat(-b + s, 10), rat(-b - s, 10)] {
            if !out.contains(&(root.clone(), d)) {
                out.push((root, d));
            }
        }
    }
    out
}

pub const K2_TABLE: [((i64, i64), i64); 9] = [
    ((-44, 5), 1),
    ((8, 1), 155),
    ((16, 1), 2295),
    ((47, 2), 96255),
    ((24, 1), 196883),
    ((32, 1), 139503),
    ((164, 5), 90117),
    ((236, 7), 63365),
    ((40, 1), 20619),
];

pub const K3_TABLE: [((i64, i64), i64); 3] = [((-114, 7), 1), ((4, 5), 1), ((48, 1), 42987519)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    #[serde(with = "crate::rational::serde_str")]
    pub c: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub expected: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub computed: Rational,
    pub matches: bool,
}

fn check_table(rows: &[((i64, i64), i64)], f: fn(&Rational) -> Result<Rational>) -> Result<Vec<TableRow>> {
    par::map_collect(rows, |&((n, d), v)| {
        let c = rat(n, d);
        let computed = f(&c)?;
        let expected = int(v);
        Ok(TableRow { matches: computed == expected, c, expected, computed })
    })
    .into_iter()
    .collect()
}

pub fn verify_k2_table() -> Result<Vec<TableRow>> {
    check_table(&K2_TABLE, griess_p2)
}

pub fn verify_k3_table() -> Result<Vec<TableRow>> {
    check_table(&K3_TABLE, k3_p3)
}

/// `1 + griess_p2(24)` against the `q^1` coefficient of `j - 744`.
pub fn moonshine_check() -> (Rational, Rational) {
    let lhs = int(1) + griess_p2(&int(24)).expect("no pole at 24");
    let j = crate::quasimodular::j_function(3);
    (lhs, j.coeff(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::virasoro::c_pq;
    use proptest::prelude::*;

    #[test]
    fn indicial() {
        let c = PolyC::c();
        assert!(indicial_at(&c.scale(&rat(-1, 24))).is_zero());
        assert!(indicial_at(&(&c + &PolyC::constant(int(4))).scale(&rat(1, 24))).is_zero());
        assert_eq!(indicial_roots(&int(8)), (rat(-1, 3), rat(1, 2)));
    }

    #[test]
    fn e8_solution() {
        let sol = solve_mlde2(&int(8), 10).unwrap();
        assert_eq!(sol.mu, rat(-1, 3));
        assert_eq!(sol.coeffs.coeff(1), int(248));
        assert_eq!(sol.coeffs.coeff(2), int(4124));
        assert!(mlde_residual(&sol).is_zero());
        assert!(matches!(solve_mlde2(&int(10), 5), Err(Error::ResonantIndicialRoots(_))));
        assert!(matches!(solve_mlde2(&int(22), 5), Err(Error::ResonantIndicialRoots(_))));
    }

    #[test]
    fn deligne_series_dimensions() {
        for (c, dim, name) in deligne_charges() {
            let sol = solve_mlde2(&c, 20).unwrap();
            assert_eq!(sol.coeffs.coeff(1), int(dim), "{name}");
            assert_eq!(d_of_c(&c).unwrap(), int(dim), "{name}");
            assert_eq!(sol.coeffs.coeff(2), dim_v2(&c).unwrap(), "{name}");
            assert_eq!(sol.coeffs.coeff(3), dim_v3(&c).unwrap(), "{name}");
            assert!(mlde_residual(&sol).is_zero(), "{name}");
        }
        assert_eq!(h_dual(&int(8)).unwrap(), int(30));
        assert_eq!(d_of_c(&rat(14, 5)).unwrap(), int(14));
        assert_eq!(d_of_c(&int(10)), Err(Error::PoleAtC(int(10))));
    }

    #[test]
    fn closed_forms_match_symbolic_recursion() {
        let a = symbolic_coefficients(3);
        assert_eq!(a[1], d_fn());
        assert_eq!(a[2], dim_v2_fn());
        assert_eq!(a[3], dim_v3_fn());
        let one = RatFnC::constant(int(1));
        assert_eq!(dim_v2_fn(), &(&one + &d_fn()) + &p2_fn());
        assert_eq!(dim_v3_fn(), &(&(&one + &d_fn().scale(&int(2))) + &p2_fn()) + &p3_fn());
    }

    #[test]
    fn point_values() {
        assert_eq!(p2(&int(8)).unwrap(), int(3875));
        assert_eq!(dim_v2(&int(8)).unwrap(), int(4124));
        assert_eq!(p2(&int(1)).unwrap(), int(0));
        assert_eq!(griess_p2(&int(24)).unwrap(), int(196883));
        assert_eq!(griess_p2(&rat(-44, 5)).unwrap(), int(1));
        assert_eq!(k3_p3(&int(48)).unwrap(), int(42987519));
        assert_eq!(dim_v2(&int(22)), Err(Error::PoleAtC(int(22))));
        assert!(dim_x2(&int(8)).is_ok() && dim_y3star(&int(8)).unwrap() == int(0));
    }

    #[test]
    fn deligne_scan_roots() {
        let hits = deligne_scan(300);
        assert!(hits.contains(&(int(8), 248)));
        assert!(hits.contains(&(int(1), 3)));
        for (c, d) in &hits {
            assert_eq!(d_of_c(c).unwrap(), int(*d));
        }
        let all = deligne_scan(5000);
        let mut cs: Vec<Rational> = all.iter().map(|(c, _)| c.clone()).collect();
        cs.sort();
        cs.dedup();
        assert_eq!(cs.len(), 42);
    }

    #[test]
    fn tables() {
        let k2 = verify_k2_table().unwrap();
        assert_eq!(k2.len(), 9);
        assert!(k2.iter().all(|r| r.matches));
        assert!(verify_k3_table().unwrap().iter().all(|r| r.matches));
        let (a, b) = moonshine_check();
        assert_eq!(a, int(196884));
        assert_eq!(a, b);
    }

    #[test]
    fn numerator_roots_are_minimal_model_charges() {
        let charges = |bound: u64| -> Vec<Rational> {
            let mut v = Vec::new();
            for p in 2..=bound + 1 {
                for q in p + 1..=bound + 1 {
                    if (p - 1) * (q - 1) <= bound {
                        if let Ok(c) = c_pq(p, q) {
                            v.push(c);
                        }
                    }
                }
            }
            v
        };
        let k2 = charges(6);
        for (r, _) in griess_fn().num().rational_roots() {
            assert!(k2.contains(&r), "{r}");
        }
        let k3 = charges(8);
        let roots = k3_p3_fn().num().rational_roots();
        assert_eq!(roots.len(), 5);
        for (r, _) in roots {
            assert!(k3.contains(&r), "{r}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn root_gap(n in -200i64..200, d in 1i64..30) {
            let c = rat(n, d);
            let (a, b) = indicial_roots(&c);
            prop_assert_eq!(b - a, (&c + int(2)) / int(12));
        }

        #[test]
        fn residual_vanishes(n in -60i64..60, d in 1i64..7) {
            let c = rat(n, d);
            prop_assume!(solve_mlde2(&c, 0).is_ok());
            let sol = solve_mlde2(&c, 12).unwrap();
            prop_assert!(mlde_residual(&sol).is_zero());
        }
    }
}
