//! The Virasoro vacuum module: vacuum expectations of words in `L_n`, Gram
//! matrices over `Q[c]`, Kac determinants and discrete series data.
//!
//! Two independent evaluators are provided. [`vacuum_expectation`] rewrites a
//! word by commuting its rightmost positive mode to the right, memoising on
//! the word. [`Strategy::Pbw`] instead acts mode by mode on the PBW basis
//! `L_{-n_1}...L_{-n_k} 1` (`n_1 >= ... >= n_k >= 2`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::par;
use crate::polyc::PolyC;
use crate::qseries::{partition_numbers, QSeries};
use crate::rational::{int, Rational};

/// `(m^3 - m)/12 * c`, the central term of `[L_m, L_{-m}]`.
fn central(m: i64) -> PolyC {
    PolyC::c().scale(&Rational::new((m * m * m - m).into(), 12.into()))
}

/// A product `coeff * L_{modes[0]} L_{modes[1]} ...` acting on the vacuum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroWord {
    pub modes: Vec<i64>,
    pub coeff: PolyC,
}

impl fmt::Display for VirasoroWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff != PolyC::one() {
            write!(f, "({})·", self.coeff)?;
        }
        let mut i = 0;
        while i < self.modes.len() {
            let m = self.modes[i];
            let run = self.modes[i..].iter().take_while(|&&x| x == m).count();
            if run == 1 {
                write!(f, "L({m})")?;
            } else {
                write!(f, "L({m})^{run}")?;
            }
            i += run;
        }
        write!(f, "1")
    }
}

/// Memo table for [`vacuum_expectation_with`].
pub type WordMemo = HashMap<Vec<i64>, PolyC>;

/// `<1, L_{w_0} L_{w_1} ... L_{w_k} 1>`.
pub fn vacuum_expectation(word: &[i64]) -> PolyC {
    vacuum_expectation_with(word, &mut WordMemo::new())
}

pub fn vacuum_expectation_with(word: &[i64], memo: &mut WordMemo) -> PolyC {
    if word.is_empty() {
        return PolyC::one();
    }
    if word.iter().sum::<i64>() != 0 || *word.last().unwrap() >= -1 || word[0] <= 1 {
        return PolyC::zero();
    }
    if let Some(hit) = memo.get(word) {
        return hit.clone();
    }
    // rightmost positive mode; some exists since word[0] >= 2
    let i = word.iter().rposition(|&m| m > 0).expect("positive mode");
    let (a, b) = (word[i], word[i + 1]);
    let mut swapped = word.to_vec();
    swapped.swap(i, i + 1);
    let mut acc = vacuum_expectation_with(&swapped, memo);
    if a != b {
        let mut merged = word[..i].to_vec();
        merged.push(a + b);
        merged.extend_from_slice(&word[i + 2..]);
        acc = &acc + &vacuum_expectation_with(&merged, memo).scale(&int(a - b));
    }
    if a + b == 0 {
        let mut dropped = word[..i].to_vec();
        dropped.extend_from_slice(&word[i + 2..]);
        acc = &acc + &(&central(a) * &vacuum_expectation_with(&dropped, memo));
    }
    memo.insert(word.to_vec(), acc.clone());
    acc
}

/// Partitions of `n` into parts `>= 2`, each descending, listed in increasing
/// lexicographic order: `n = 4` gives `[2, 2], [4]`.
pub fn vir_basis_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 2..=max.min(n) {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn vir_basis(n: u32) -> Vec<VirasoroWord> {
    vir_basis_partitions(n)
        .into_iter()
        .map(|p| VirasoroWord { modes: p.iter().map(|&k| -(k as i64)).collect(), coeff: PolyC::one() })
        .collect()
}

/// A vector of the vacuum module in the PBW basis.
type State = HashMap<Vec<u32>, PolyC>;
type PbwMemo = HashMap<(i64, Vec<u32>), State>;

fn add_into(acc: &mut State, mono: Vec<u32>, c: PolyC) {
    if c.is_zero() {
        return;
    }
    let sum = match acc.get(&mono) {
        Some(e) => e + &c,
        None => c,
    };
    if sum.is_zero() {
        acc.remove(&mono);
    } else {
        acc.insert(mono, sum);
    }
}

fn add_scaled(acc: &mut State, s: &State, c: &PolyC) {
    for (m, v) in s {
        add_into(acc, m.clone(), v * c);
    }
}

/// `L_j` applied to the PBW monomial `L_{-mono[0]} L_{-mono[1]} ... 1`.
fn apply(j: i64, mono: &[u32], memo: &mut PbwMemo) -> State {
    let mut out = State::new();
    let Some((&n1, rest)) = mono.split_first() else {
        if j <= -2 {
            out.insert(vec![(-j) as u32], PolyC::one());
        }
        return out;
    };
    if -j >= n1 as i64 {
        let mut m = vec![(-j) as u32];
        m.extend_from_slice(mono);
        out.insert(m, PolyC::one());
        return out;
    }
    let key = (j, mono.to_vec());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let n1i = n1 as i64;
    // L_j L_{-n1} R = L_{-n1} L_j R + (j + n1) L_{j - n1} R + delta_{j,n1} c (j^3 - j)/12 R
    for (m, c) in apply(j, rest, memo) {
        add_scaled(&mut out, &apply(-n1i, &m, memo), &c);
    }
    if j + n1i != 0 {
        add_scaled(&mut out, &apply(j - n1i, rest, memo), &PolyC::constant(int(j + n1i)));
    }
    if j == n1i {
        add_into(&mut out, rest.to_vec(), central(j));
    }
    memo.insert(key, out.clone());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Memoised word rewriting.
    Rewrite,
    /// Mode-by-mode action on the PBW basis.
    Pbw,
}

fn gram_entry_pbw(lambda: &[u32], mu: &[u32], memo: &mut PbwMemo) -> PolyC {
    // <L_{-lambda} 1, L_{-mu} 1> = <1, L_{lambda_k} ... L_{lambda_1} L_{-mu} 1>
    let mut state = State::new();
    state.insert(mu.to_vec(), PolyC::one());
    for &l in lambda {
        let mut next = State::new();
        for (m, c) in &state {
            add_scaled(&mut next, &apply(l as i64, m, memo), c);
        }
        state = next;
    }
    state.get(&Vec::new()).cloned().unwrap_or_else(PolyC::zero)
}

fn gram_entry_rewrite(lambda: &[u32], mu: &[u32], memo: &mut WordMemo) -> PolyC {
    let word: Vec<i64> =
        lambda.iter().rev().map(|&k| k as i64).chain(mu.iter().map(|&k| -(k as i64))).collect();
    vacuum_expectation_with(&word, memo)
}

/// Gram matrix of [`vir_basis`]`(n)` under the invariant form with
/// `L_n^dagger = L_{-n}`. Rows are computed in parallel.
pub fn gram_matrix_with(n: u32, strategy: Strategy) -> Vec<Vec<PolyC>> {
    let basis = vir_basis_partitions(n);
    par::map_range(0..basis.len(), |i| {
        let mut wm = WordMemo::new();
        let mut pm = PbwMemo::new();
        basis
            .iter()
            .map(|mu| match strategy {
                Strategy::Rewrite => gram_entry_rewrite(&basis[i], mu, &mut wm),
                Strategy::Pbw => gram_entry_pbw(&basis[i], mu, &mut pm),
            })
            .collect()
    })
}

pub fn gram_matrix(n: u32) -> Vec<Vec<PolyC>> {
    gram_matrix_with(n, Strategy::Rewrite)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<PolyC>]) -> PolyC {
    let n = m.len();
    if n == 0 {
        return PolyC::one();
    }
    let mut a: Vec<Vec<PolyC>> = m.to_vec();
    let mut sign = int(1);
    let mut prev = PolyC::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return PolyC::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].scale(&sign)
}

pub fn kac_det(n: u32) -> PolyC {
    determinant(&gram_matrix(n))
}

/// `c_{p,q} = 1 - 6 (p - q)^2 / (p q)`.
pub fn c_pq(p: u64, q: u64) -> Result<Rational> {
    if p < 2 || q < 2 {
        return Err(Error::RangeError(format!("p, q must be >= 2 (got {p}, {q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    let (p, q) = (p as i64, q as i64);
    Ok(int(1) - Rational::new((6 * (p - q) * (p - q)).into(), (p * q).into()))
}

/// `h_{r,s} = ((p r - q s)^2 - (p - q)^2) / (4 p q)`.
pub fn h_rs(p: u64, q: u64, r: u64, s: u64) -> Result<Rational> {
    c_pq(p, q)?;
    if !(1..q).contains(&r) || !(1..p).contains(&s) {
        return Err(Error::RangeError(format!("need 1 <= r < {q}, 1 <= s < {p} (got r={r}, s={s})")));
    }
    let (p, q, r, s) = (p as i64, q as i64, r as i64, s as i64);
    let num = (p * r - q * s).pow(2) - (p - q).pow(2);
    Ok(Rational::new(num.into(), (4 * p * q).into()))
}

/// The distinct conformal weights of the `(p, q)` minimal model.
pub fn discrete_series_weights(p: u64, q: u64) -> Result<BTreeSet<Rational>> {
    c_pq(p, q)?;
    let mut out = BTreeSet::new();
    for r in 1..q {
        for s in 1..p {
            out.insert(h_rs(p, q, r, s)?);
        }
    }
    Ok(out)
}

/// `prod_{n >= 2} (1 - q^n)^-1`, the graded dimension of `Vir_c` without its
/// `q^{-c/24}` prefactor.
pub fn vir_graded_dim(order: usize) -> QSeries {
    let p = partition_numbers(order);
    let coeffs = (0..=order)
        .map(|n| {
            let prev = if n == 0 { Zero::zero() } else { p[n - 1].clone() };
            Rational::from_integer(&p[n] - prev)
        })
        .collect();
    QSeries::new(Rational::zero(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn poly(c: &[i64]) -> PolyC {
        PolyC::from_ints(c)
    }

    #[test]
    fn vacuum_expectations() {
        assert_eq!(vacuum_expectation(&[2, -2]), PolyC::new(vec![int(0), rat(1, 2)]));
        assert_eq!(vacuum_expectation(&[4, -4]), poly(&[0, 5]));
        // c (4 + c/2)
        assert_eq!(vacuum_expectation(&[2, 2, -2, -2]), PolyC::new(vec![int(0), int(4), rat(1, 2)]));
        assert!(vacuum_expectation(&[3, -2]).is_zero());
        assert!(vacuum_expectation(&[2, -1, -1]).is_zero());
        assert_eq!(vacuum_expectation(&[]), PolyC::one());
    }

    #[test]
    fn bases() {
        let b4: Vec<String> = vir_basis(4).iter().map(ToString::to_string).collect();
        assert_eq!(b4, ["L(-2)^21", "L(-4)1"]);
        assert_eq!(vir_basis_partitions(2), vec![vec![2]]);
        assert!(vir_basis(1).is_empty());
        assert_eq!(vir_basis_partitions(6), vec![vec![2, 2, 2], vec![3, 3], vec![4, 2], vec![6]]);
    }

    #[test]
    fn small_gram_matrices() {
        let m4 = gram_matrix(4);
        assert_eq!(m4[0][0], PolyC::new(vec![int(0), int(4), rat(1, 2)]));
        assert_eq!(m4[0][1], poly(&[0, 3]));
        assert_eq!(m4[1][0], poly(&[0, 3]));
        assert_eq!(m4[1][1], poly(&[0, 5]));
        assert_eq!(kac_det(2), PolyC::new(vec![int(0), rat(1, 2)]));
        assert_eq!(kac_det(4), PolyC::new(vec![int(0), int(0), int(11), rat(5, 2)]));
        assert_eq!(kac_det(4).factor().to_string(), "1/2·c^2·(5c+22)");
        assert_eq!(kac_det(0), PolyC::one());
        assert_eq!(kac_det(1), PolyC::one());
    }

    #[test]
    fn strategies_agree_and_matrices_are_symmetric() {
        for n in 0..=6 {
            let a = gram_matrix_with(n, Strategy::Rewrite);
            let b = gram_matrix_with(n, Strategy::Pbw);
            assert_eq!(a, b, "n = {n}");
            for i in 0..a.len() {
                for j in 0..a.len() {
                    assert_eq!(a[i][j], a[j][i]);
                }
            }
        }
    }

    #[test]
    fn kac_zeros_at_minimal_models() {
        for n in 0..=6u64 {
            let det = kac_det(n as u32);
            for p in 2..=8u64 {
                for q in p + 1..=8 {
                    let Ok(c) = c_pq(p, q) else { continue };
                    let vanishes = det.eval(&c).is_zero();
                    assert_eq!(vanishes, (p - 1) * (q - 1) <= n, "n={n} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn discrete_series() {
        assert_eq!(c_pq(2, 5).unwrap(), rat(-22, 5));
        assert_eq!(discrete_series_weights(2, 5).unwrap().into_iter().collect::<Vec<_>>(), vec![rat(-1, 5), int(0)]);
        assert_eq!(c_pq(3, 4).unwrap(), rat(1, 2));
        assert_eq!(
            discrete_series_weights(3, 4).unwrap().into_iter().collect::<Vec<_>>(),
            vec![int(0), rat(1, 16), rat(1, 2)]
        );
        for (p, q) in [(2u64, 5u64), (3, 4), (4, 5), (2, 7), (5, 6)] {
            assert_eq!(discrete_series_weights(p, q).unwrap().len() as u64, (p - 1) * (q - 1) / 2);
        }
        assert_eq!(c_pq(2, 4), Err(Error::NotCoprime(2, 4)));
        assert!(matches!(h_rs(2, 5, 5, 1), Err(Error::RangeError(_))));
    }

    #[test]
    fn graded_dimension() {
        assert_eq!(vir_graded_dim(4).coeffs(), &[1, 0, 1, 1, 2].map(int));
        assert_eq!(vir_graded_dim(0), QSeries::one(0));
        for n in 0..=20u32 {
            assert_eq!(vir_graded_dim(20).coeff(n as usize), int(vir_basis_partitions(n).len() as i64));
        }
    }
}
