//! The acceptance checks, runnable from the library, the CLI and the tests.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::genus2::{
    chequered_oracle, default_cutoff, det_inv_sqrt, det_series, lift, numeric_equivariance_check,
    period_matrix, z2_heisenberg, GElement, Side, TwoVarQuasiModular, S, T,
};
use crate::heisenberg::{
    enumerate_partitions, eval_g_n_recursive, g_n_genus0, qv_involution_sum, qv_vanishes_by_parity, qv_zhu_recursion,
    Partition,
};
use crate::lattice::{e8_lattice, lattice_voa_partition, theta_series};
use crate::mlde::{
    deligne_charges, dim_v2, dim_v3, d_of_c, indicial_at, mlde_residual, moonshine_check, solve_mlde2, verify_k2_table,
    verify_k3_table,
};
use crate::polyc::PolyC;
use crate::quasimodular::{
    delta, delta_product, delta_series, dim_mk, e2_transformation_residual, eisenstein, j_function, modular_derivative,
    p, q, r, square_bracket_coeff, theta, to_qseries, QuasiModular,
};
use crate::qseries::{partition_numbers, QSeries};
use crate::rational::{binomial, int, rat, Rational};
use crate::virasoro::{c_pq, determinant, discrete_series_weights, gram_matrix, kac_det};
use crate::{lattice, par};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub title: &'static str,
    pub numeric: bool,
    pub passed: bool,
    pub detail: String,
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn e(k: i64) -> std::result::Result<QuasiModular, String> {
    lib(eisenstein(k))
}

struct Check {
    id: u32,
    title: &'static str,
    numeric: bool,
    run: fn() -> Outcome,
}

const CHECKS: [Check; 15] = [
    Check { id: 1, title: "Eisenstein identities E8, E10", numeric: false, run: eisenstein_identities },
    Check { id: 2, title: "modular derivatives", numeric: false, run: modular_derivatives },
    Check { id: 3, title: "Delta product and j", numeric: false, run: delta_and_j },
    Check { id: 4, title: "partitions and Hilbert series", numeric: false, run: partitions_and_dims },
    Check { id: 5, title: "Heisenberg 1-point functions", numeric: false, run: heisenberg_one_point },
    Check { id: 6, title: "genus zero n-point functions", numeric: false, run: genus_zero },
    Check { id: 7, title: "Virasoro Gram matrices and Kac determinant", numeric: false, run: virasoro },
    Check { id: 8, title: "genus two determinant", numeric: false, run: genus_two_det },
    Check { id: 9, title: "genus two partition function", numeric: false, run: genus_two_z },
    Check { id: 10, title: "genus two period matrix", numeric: false, run: genus_two_omega },
    Check { id: 11, title: "second order MLDE", numeric: false, run: mlde_checks },
    Check { id: 12, title: "E8 lattice and MLDE", numeric: false, run: e8_cross_check },
    Check { id: 13, title: "Griess and K=3 tables", numeric: false, run: tables },
    Check { id: 14, title: "invariant spot checks", numeric: false, run: properties },
    Check { id: 15, title: "numeric transformation laws", numeric: true, run: numeric },
];

/// Runs every check (optionally skipping the tolerance-based one), in id order.
pub fn run_all(include_numeric: bool) -> Vec<CheckResult> {
    let selected: Vec<&Check> = CHECKS.iter().filter(|c| include_numeric || !c.numeric).collect();
    par::map_collect(&selected, |c| {
        let out = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let (passed, detail) = match out {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CheckResult { id: c.id, title: c.title, numeric: c.numeric, passed, detail }
    })
}

pub fn run_one(id: u32) -> Option<CheckResult> {
    let c = CHECKS.iter().find(|c| c.id == id)?;
    let (passed, detail) = match (c.run)() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CheckResult { id, title: c.title, numeric: c.numeric, passed, detail })
}

fn eisenstein_identities() -> Outcome {
    let (e4, e6, e8, e10) = (e(4)?, e(6)?, e(8)?, e(10)?);
    let want8 = e4.pow(2).scale(&rat(3, 7));
    let want10 = (&e4 * &e6).scale(&rat(5, 11));
    ensure(e8 == want8, || "E8 != 3/7 E4^2".into())?;
    ensure(e10 == want10, || "E10 != 5/11 E4 E6".into())?;
    ensure(to_qseries(&e8, 20) == to_qseries(&want8, 20), || "E8 q-series mismatch".into())?;
    ensure(to_qseries(&e10, 20) == to_qseries(&want10, 20), || "E10 q-series mismatch".into())?;
    Ok("exact and to q^20".into())
}

fn modular_derivatives() -> Outcome {
    let (e4, e6) = (e(4)?, e(6)?);
    ensure(lib(modular_derivative(&e4))? == e6.scale(&int(14)), || "D E4 != 14 E6".into())?;
    ensure(lib(modular_derivative(&e6))? == e4.pow(2).scale(&rat(60, 7)), || "D E6 != 60/7 E4^2".into())?;
    ensure(lib(modular_derivative(&delta()))?.is_zero(), || "D Delta != 0".into())?;
    Ok("D E4 = 14 E6, D E6 = 60/7 E4^2, D Delta = 0".into())
}

fn delta_and_j() -> Outcome {
    let d = (&q().pow(3) - &r().pow(2)).scale(&rat(1, 1728));
    ensure(d == delta(), || "(Q^3 - R^2)/1728 != Delta".into())?;
    ensure(delta_series(50) == delta_product(50), || "Delta q-series != q prod (1-q^n)^24".into())?;
    let j = j_function(6);
    let want = [1i64, 744, 196884, 21493760, 864299970, 20245856256, 333202640600];
    let got: Vec<Rational> = (0..=6).map(|n| j.coeff(n)).collect();
    ensure(j.offset() == &int(-1) && got == want.map(int), || format!("j coefficients {got:?}"))?;
    Ok("Delta to q^50, j to q^5".into())
}

fn partitions_and_dims() -> Outcome {
    let pn = partition_numbers(4);
    ensure(pn == [1, 1, 2, 3, 5].map(Into::into), || format!("p(0..4) = {pn:?}"))?;
    // 1/((1-t^4)(1-t^6))
    for k in 0..=16i64 {
        let hs = (0..=k / 4).filter(|a| (k - 4 * a) % 6 == 0).count() as u64;
        ensure(dim_mk(k) == hs, || format!("dim M_{k} = {} != {hs}", dim_mk(k)))?;
    }
    Ok("p(0..4) and dim M_k for k <= 16".into())
}

fn heisenberg_one_point() -> Outcome {
    let lam: Partition = lib("1^3 2^2 5".parse())?;
    let want = (&(&e(2)? * &e(4)?) * &e(6)?).scale(&int(-90));
    ensure(qv_involution_sum(&lam) == want, || "Q_v != -90 E2 E4 E6".into())?;
    let mut count = 0;
    for n in 0..=12 {
        for pt in enumerate_partitions(n) {
            let a = qv_involution_sum(&pt);
            ensure(a == qv_zhu_recursion(&pt), || format!("involution sum != recursion for {pt}"))?;
            ensure(!qv_vanishes_by_parity(&pt) || a.is_zero(), || format!("{pt} should vanish"))?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions of weight <= 12"))
}

fn genus_zero() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(4);
    let g4 = g_n_genus0(4);
    let pair = |a: &Rational, b: &Rational| {
        let d = a - b;
        (&d * &d).recip()
    };
    let mut tuples = 0;
    while tuples < 10 {
        let z: Vec<Rational> = (0..4).map(|_| rat(rng.gen_range(-40..=40), rng.gen_range(1..=9))).collect();
        if (0..4).any(|i| z[i + 1..].contains(&z[i])) {
            continue;
        }
        let want = pair(&z[0], &z[1]) * pair(&z[2], &z[3])
            + pair(&z[0], &z[2]) * pair(&z[1], &z[3])
            + pair(&z[0], &z[3]) * pair(&z[1], &z[2]);
        ensure(lib(g4.eval(&z))? == want, || format!("G4 mismatch at {z:?}"))?;
        tuples += 1;
    }
    for n in 0..=8 {
        let z: Vec<Rational> = (0..n).map(|i| rat(i as i64 * i as i64 + 1, i as i64 + 2)).collect();
        ensure(lib(eval_g_n_recursive(&z))? == lib(g_n_genus0(n).eval(&z))?, || format!("recursion mismatch n={n}"))?;
    }
    Ok("10 random 4-tuples; recursion for n <= 8".into())
}

fn virasoro() -> Outcome {
    let c = PolyC::c();
    ensure(determinant(&gram_matrix(2)) == c.scale(&rat(1, 2)), || "det M2 != c/2".into())?;
    let m4 = gram_matrix(4);
    let want = [
        vec![&c.scale(&int(4)) + &c.pow(2).scale(&rat(1, 2)), c.scale(&int(3))],
        vec![c.scale(&int(3)), c.scale(&int(5))],
    ];
    ensure(m4 == want, || "M4 entries".into())?;
    let d4 = (&c.pow(2) * &PolyC::from_ints(&[22, 5])).scale(&rat(1, 2));
    ensure(kac_det(4) == d4, || format!("det M4 = {}", kac_det(4)))?;
    let k6 = kac_det(6);
    let mut zeros = 0;
    for p in 2..=8u64 {
        for qq in 2..=8u64 {
            if (p - 1) * (qq - 1) > 6 {
                continue;
            }
            if let Ok(cv) = c_pq(p, qq) {
                ensure(k6.eval(&cv).is_zero(), || format!("kac_det(6) nonzero at c_{{{p},{qq}}}"))?;
                zeros += 1;
            }
        }
    }
    let ds25: Vec<Rational> = lib(discrete_series_weights(2, 5))?.into_iter().collect();
    let ds34: Vec<Rational> = lib(discrete_series_weights(3, 4))?.into_iter().collect();
    ensure(lib(c_pq(2, 5))? == rat(-22, 5) && ds25 == [rat(-1, 5), int(0)], || "(2,5) data".into())?;
    ensure(lib(c_pq(3, 4))? == rat(1, 2) && ds34 == [int(0), rat(1, 16), rat(1, 2)], || "(3,4) data".into())?;
    Ok(format!("det M4 = {}; {zeros} Kac zeros", d4.factor()))
}

fn e2e2_and_e4e4() -> std::result::Result<(TwoVarQuasiModular, TwoVarQuasiModular), String> {
    let (e2, e4) = (e(2)?, e(4)?);
    Ok((&lift(&e2, Side::One) * &lift(&e2, Side::Two), &lift(&e4, Side::One) * &lift(&e4, Side::Two)))
}

fn genus_two_det() -> Outcome {
    let (e2e2, e4e4) = e2e2_and_e4e4()?;
    let det = lib(det_series(default_cutoff(5), 5))?;
    let want = [TwoVarQuasiModular::one(), TwoVarQuasiModular::zero(), -e2e2, TwoVarQuasiModular::zero(), e4e4.scale(&int(-15)), TwoVarQuasiModular::zero()];
    for (n, w) in want.iter().enumerate() {
        ensure(&det.coeff(n) == w, || format!("eps^{n} coefficient"))?;
    }
    Ok("1 - E2 E2' eps^2 - 15 E4 E4' eps^4 + O(eps^6)".into())
}

fn genus_two_z() -> Outcome {
    let (e2e2, e4e4) = e2e2_and_e4e4()?;
    let z = lib(z2_heisenberg(1, default_cutoff(4), 4))?.series;
    let want = [
        TwoVarQuasiModular::one(),
        TwoVarQuasiModular::zero(),
        e2e2.scale(&rat(1, 2)),
        TwoVarQuasiModular::zero(),
        e2e2.pow(2).scale(&rat(3, 8)) + e4e4.scale(&rat(15, 2)),
    ];
    for (n, w) in want.iter().enumerate() {
        ensure(&z.coeff(n) == w, || format!("Z eps^{n} coefficient"))?;
    }
    let n = 8;
    let closed = lib(det_inv_sqrt(default_cutoff(n), n))?;
    for k in 0..=n {
        ensure(chequered_oracle(k as u32) == closed.coeff(k), || format!("oracle mismatch at eps^{k}"))?;
    }
    Ok("through eps^4; oracle through eps^8".into())
}

fn genus_two_omega() -> Outcome {
    let pm = lib(period_matrix(default_cutoff(5), 5))?;
    let (e2a, e2b) = (lift(&e(2)?, Side::One), lift(&e(2)?, Side::Two));
    let z = TwoVarQuasiModular::zero;
    let w11 = [z(), z(), e2b.clone(), z(), &e2a * &e2b.pow(2)];
    let w22 = [z(), z(), e2a.clone(), z(), &e2a.pow(2) * &e2b];
    let w12 = [z(), -TwoVarQuasiModular::one(), z(), -(&e2a * &e2b), z()];
    for k in 0..=4 {
        ensure(pm.omega11.coeff(k) == w11[k], || format!("Omega11 eps^{k}"))?;
        ensure(pm.omega22.coeff(k) == w22[k], || format!("Omega22 eps^{k}"))?;
        ensure(pm.omega12.coeff(k) == w12[k], || format!("Omega12 eps^{k}"))?;
    }
    for n in [2usize, 4, 6, 8] {
        let k = default_cutoff(n);
        let (a, b) = (lib(period_matrix(k, n))?, lib(period_matrix(k + 3, n))?);
        ensure(a == b, || format!("cutoff dependence at order {n}"))?;
        for i in (1..=n).step_by(2) {
            ensure(a.omega11.coeff(i).is_zero() && a.omega12.coeff(i - 1).is_zero(), || format!("parity at eps^{i}"))?;
        }
    }
    Ok("through eps^4; parity and cutoff stability for N <= 8".into())
}

fn mlde_checks() -> Outcome {
    let c = PolyC::c();
    ensure(indicial_at(&c.scale(&rat(-1, 24))).is_zero(), || "-c/24 is not a root".into())?;
    ensure(indicial_at(&(&c + &PolyC::constant(int(4))).scale(&rat(1, 24))).is_zero(), || "(c+4)/24 is not a root".into())?;
    let mut dims = Vec::new();
    for (cv, dim, name) in deligne_charges() {
        let sol = lib(solve_mlde2(&cv, 20))?;
        let a = sol.coeffs.coeffs();
        ensure(a[1] == int(dim) && lib(d_of_c(&cv))? == int(dim), || format!("{name}: a1 = {}", a[1]))?;
        ensure(a[2] == lib(dim_v2(&cv))?, || format!("{name}: a2"))?;
        ensure(a[3] == lib(dim_v3(&cv))?, || format!("{name}: a3"))?;
        ensure(mlde_residual(&sol).is_zero(), || format!("{name}: residual"))?;
        dims.push(dim.to_string());
    }
    Ok(format!("dims {}", dims.join(", ")))
}

fn e8_cross_check() -> Outcome {
    let e8 = e8_lattice();
    let z = lib(lattice_voa_partition(&e8, 10))?;
    let sol = lib(solve_mlde2(&int(8), 10))?;
    ensure(&sol.mu == z.offset() && sol.coeffs.coeffs() == z.coeffs(), || "MLDE(c=8) != theta/eta^8".into())?;
    let th = lib(theta_series(&e8, 10))?;
    ensure(th == to_qseries(&q(), 10), || "theta_E8 != Q".into())?;
    let brute = lib(lattice::shell_counts_brute(&lib(crate::lattice::EvenLattice::new(vec![vec![2, -1], vec![-1, 2]]))?, 6))?;
    ensure(brute == [1, 6, 0, 6, 6, 0, 0], || "A2 box scan".into())?;
    Ok(format!("|L_1| = {}", th.coeff(1)))
}

fn tables() -> Outcome {
    let k2 = lib(verify_k2_table())?;
    let k3 = lib(verify_k3_table())?;
    for row in k2.iter().chain(&k3) {
        ensure(row.matches, || format!("c = {}: {} != {}", row.c, row.computed, row.expected))?;
    }
    let (lhs, jq) = moonshine_check();
    ensure(lhs == jq, || format!("1 + griess(24) = {lhs} != {jq}"))?;
    Ok(format!("{} + {} rows; 1 + 196883 = {jq}", k2.len(), k3.len()))
}

fn properties() -> Outcome {
    // D is a derivation and theta commutes with the q-expansion
    let samples = [p(), q(), r(), &p() * &q(), delta()];
    for f in &samples {
        for g in &samples {
            let lhs = theta(&(f * g));
            let rhs = &(&theta(f) * g) + &(f * &theta(g));
            ensure(lhs == rhs, || "theta is not a derivation".into())?;
        }
        ensure(to_qseries(&theta(f), 12) == to_qseries(f, 12).theta(), || "theta vs q-expansion".into())?;
    }
    let a = to_qseries(&p(), 10);
    let b = to_qseries(&r(), 10);
    let inv = lib(b.invert())?;
    ensure(b.mul(&inv) == QSeries::one(10), || "series inverse".into())?;
    ensure(a.mul(&b) == b.mul(&a), || "commutativity".into())?;
    for k in 1..=6i64 {
        for n in 0..=6i64 {
            for i in 0..=n as u32 {
                let s: Rational = (0..=i).map(|m| square_bracket_coeff(k, i, m) * int(n + 1 - k).pow(m as i32)).sum();
                ensure(s == Rational::from_integer(binomial(n, i as i64)), || format!("square bracket k={k} n={n} i={i}"))?;
            }
        }
    }
    Ok("derivation, inverses, square bracket identity for k, n <= 6".into())
}

fn numeric() -> Outcome {
    let i2 = Complex64::new(0.0, 2.0);
    let res = lib(e2_transformation_residual(S, i2, 40))?;
    ensure(res < 1e-8, || format!("E2 residual {res:e}"))?;
    let (t1, t2, eps) = (i2, Complex64::new(0.0, 3.0), Complex64::new(0.05, 0.0));
    let mut worst: f64 = 0.0;
    for g in [GElement::Gamma1(S), GElement::Gamma1(T), GElement::Gamma2(S), GElement::Beta] {
        let r = lib(numeric_equivariance_check(g, t1, t2, eps, 8, 60))?;
        ensure(r < 1e-6, || format!("{g:?} residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("E2 residual {res:.1e}; genus two residual {worst:.1e}"))
}
