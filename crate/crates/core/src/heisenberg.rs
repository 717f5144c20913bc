//! Rank one Heisenberg correlators: genus one `Q_v(tau)` for Fock vectors
//! `v = a[-k_1]...a[-k_n] 1`, genus zero pairing sums, and LiZ norms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::qseries::{eta_inverse, QSeries};
use crate::quasimodular::{coeff_c, to_qseries, QuasiModular};
use crate::rational::{factorial, int, Rational};

/// A partition, stored with non-increasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// From `(part, multiplicity)` pairs.
    pub fn from_exponents(exps: &[(u32, u32)]) -> Result<Self> {
        Self::new(exps.iter().flat_map(|&(k, e)| std::iter::repeat_n(k, e as usize)).collect())
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `part -> multiplicity`, i.e. `lambda = {1^e1 2^e2 ...}`.
    pub fn exponents(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &k in &self.parts {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    pub fn odd_part_count(&self) -> usize {
        self.parts.iter().filter(|&&k| k % 2 == 1).count()
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"1,1,1,2,2,5"` or `"1^3 2^2 5"` (separators may be mixed).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot read partition {s:?}"));
        let mut parts = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (k, e) = match tok.split_once('^') {
                Some((k, e)) => (k, e.parse::<u32>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let k: u32 = k.parse().map_err(|_| bad())?;
            parts.extend(std::iter::repeat_n(k, e as usize));
        }
        Self::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|(k, e)| if e == 1 { k.to_string() } else { format!("{k}^{e}") })
            .collect();
        write!(f, "{{{}}}", items.join(" "))
    }
}

/// All partitions of `n`, parts non-increasing, in reverse lexicographic order.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A perfect matching of positions `0..n`, each pair stored as `(i, j)`, `i < j`.
pub type Pairing = Vec<(usize, usize)>;

/// All `(n-1)!!` fixed-point-free involutions on `n` labelled positions; empty
/// for odd `n`.
pub fn enumerate_pairings(n: usize) -> Vec<Pairing> {
    fn go(free: &mut Vec<usize>, cur: &mut Pairing, out: &mut Vec<Pairing>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for idx in 0..free.len() {
            let partner = free.remove(idx);
            cur.push((first, partner));
            go(free, cur, out);
            cur.pop();
            free.insert(idx, partner);
        }
        free.insert(0, first);
    }
    if n % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// `Q_v = sum over pairings of prod C(k_i, k_j)`.
pub fn qv_involution_sum(p: &Partition) -> QuasiModular {
    let ks = p.parts();
    let pairings = enumerate_pairings(ks.len());
    let mut cache: HashMap<(u32, u32), QuasiModular> = HashMap::new();
    for &a in ks {
        for &b in ks {
            cache.entry((a, b)).or_insert_with(|| coeff_c(a, b));
        }
    }
    par::map_reduce(
        &pairings,
        QuasiModular::zero,
        |pairing| {
            pairing
                .iter()
                .fold(QuasiModular::one(), |acc, &(i, j)| &acc * &cache[&(ks[i], ks[j])])
        },
        |a, b| a + b,
    )
}

/// The same `Q_v` by peeling off the first mode:
/// `Z(a[-k1] w) = sum_j C(k1, k_j) Z(w without a[-k_j])`.
pub fn qv_zhu_recursion(p: &Partition) -> QuasiModular {
    fn go(parts: &[u32], memo: &mut HashMap<Vec<u32>, QuasiModular>) -> QuasiModular {
        if parts.is_empty() {
            return QuasiModular::one();
        }
        if parts.len() % 2 == 1 {
            return QuasiModular::zero();
        }
        if let Some(hit) = memo.get(parts) {
            return hit.clone();
        }
        let k1 = parts[0];
        let rest = &parts[1..];
        let mut acc = QuasiModular::zero();
        for j in 0..rest.len() {
            let c = coeff_c(k1, rest[j]);
            if c.is_zero() {
                continue;
            }
            let mut sub = rest.to_vec();
            sub.remove(j);
            acc += &(&c * &go(&sub, memo));
        }
        memo.insert(parts.to_vec(), acc.clone());
        acc
    }
    go(p.parts(), &mut HashMap::new())
}

/// Vanishing rule: an odd number of parts or an odd number of odd parts.
pub fn qv_vanishes_by_parity(p: &Partition) -> bool {
    p.len() % 2 == 1 || p.odd_part_count() % 2 == 1
}

/// The full 1-point function `Z(v) = Q_v / eta`.
pub fn z1_heisenberg(p: &Partition, order: usize) -> QSeries {
    to_qseries(&qv_involution_sum(p), order).mul(&eta_inverse(order))
}

/// `<v, v> = prod (-i)^{e_i} e_i!` for `lambda = {1^e1 2^e2 ...}`.
pub fn liz_norm(p: &Partition) -> Rational {
    p.exponents().into_iter().fold(Rational::one(), |acc, (k, e)| {
        acc * int(-(k as i64)).pow(e as i32) * Rational::from_integer(factorial(e as u64))
    })
}

/// Genus zero `n`-point function kept as its list of pairings; each pairing
/// contributes `prod 1/(z_i - z_j)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingSumFn {
    pub n: usize,
    pub pairings: Vec<Pairing>,
}

pub fn g_n_genus0(n: usize) -> PairingSumFn {
    PairingSumFn { n, pairings: enumerate_pairings(n) }
}

fn check_points(points: &[Rational]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].contains(a) {
            return Err(Error::CoincidentPoints);
        }
    }
    Ok(())
}

fn inv_sq(a: &Rational, b: &Rational) -> Rational {
    let d = a - b;
    (&d * &d).recip()
}

impl PairingSumFn {
    pub fn eval(&self, points: &[Rational]) -> Result<Rational> {
        if points.len() != self.n {
            return Err(Error::RangeError(format!("expected {} points, got {}", self.n, points.len())));
        }
        check_points(points)?;
        Ok(self
            .pairings
            .iter()
            .map(|pr| pr.iter().map(|&(i, j)| inv_sq(&points[i], &points[j])).product::<Rational>())
            .sum())
    }
}

/// `G_n(z_1, ..., z_n) = sum_{i >= 2} (z_1 - z_i)^-2 G_{n-2}(rest)`.
pub fn eval_g_n_recursive(points: &[Rational]) -> Result<Rational> {
    check_points(points)?;
    fn go(points: &[Rational]) -> Rational {
        match points.len() {
            0 => Rational::one(),
            n if n % 2 == 1 => Rational::zero(),
            _ => {
                let mut acc = Rational::zero();
                for i in 1..points.len() {
                    let rest: Vec<Rational> = points[1..]
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j + 1 != i)
                        .map(|(_, z)| z.clone())
                        .collect();
                    acc += inv_sq(&points[0], &points[i]) * go(&rest);
                }
                acc
            }
        }
    }
    Ok(go(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasimodular::{eisenstein, render_e};
    use crate::rational::rat;
    use proptest::prelude::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn double_factorial(n: usize) -> usize {
        (1..=n).rev().step_by(2).product()
    }

    /// Brute force: involutions without fixed points among all permutations.
    fn pairings_by_permutation(n: usize) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(n)
            .into_iter()
            .filter(|s| (0..n).all(|i| s[i] != i && s[s[i]] == i))
            .count()
    }

    #[test]
    fn parsing_and_exponents() {
        assert_eq!(part("1,1,1,2,2,5"), part("1^3 2^2 5"));
        assert_eq!(part("5 1^3, 2^2").parts(), &[5, 2, 2, 1, 1, 1]);
        assert_eq!(part("1^3 2^2 5").to_string(), "{1^3 2^2 5}");
        assert_eq!(part("").weight(), 0);
        assert!("1,x".parse::<Partition>().is_err());
        assert!("0".parse::<Partition>().is_err());
    }

    #[test]
    fn partition_enumeration() {
        let counts: Vec<usize> = (0..=10).map(|n| enumerate_partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(enumerate_partitions(3), vec![part("3"), part("2,1"), part("1,1,1")]);
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(enumerate_pairings(4).len(), 3);
        assert_eq!(enumerate_pairings(6).len(), 15);
        assert!(enumerate_pairings(3).is_empty());
        assert_eq!(enumerate_pairings(0), vec![vec![]]);
        for n in 0..=7usize {
            let expect = if n % 2 == 0 { double_factorial(n.saturating_sub(1)) } else { 0 };
            assert_eq!(enumerate_pairings(n).len(), expect);
            assert_eq!(enumerate_pairings(n).len(), pairings_by_permutation(n));
        }
    }

    #[test]
    fn qv_examples() {
        let v = qv_involution_sum(&part("1^3 2^2 5"));
        assert_eq!(render_e(&v), "-90·E2·E4·E6");
        let e2 = eisenstein(2).unwrap();
        assert_eq!(qv_involution_sum(&part("1,1")), e2);
        assert!(qv_involution_sum(&part("1,2")).is_zero());
        assert_eq!(qv_zhu_recursion(&part("1,1")), e2);
        assert_eq!(qv_zhu_recursion(&Partition::default()), QuasiModular::one());
        assert_eq!(qv_zhu_recursion(&part("1^4")), (&e2 * &e2).scale(&int(3)));
    }

    #[test]
    fn z1_examples() {
        let z = z1_heisenberg(&Partition::default(), 10);
        assert_eq!(z, eta_inverse(10));
        let z = z1_heisenberg(&part("1,1"), 4);
        assert_eq!(z.offset(), &rat(-1, 24));
        assert_eq!(z.coeff(0), rat(-1, 12));
        assert!(z1_heisenberg(&part("1,2,3"), 5).is_zero());
    }

    #[test]
    fn genus_zero_examples() {
        let g2 = g_n_genus0(2);
        assert_eq!(g2.eval(&[int(2), int(0)]).unwrap(), rat(1, 4));
        assert_eq!(g_n_genus0(1).eval(&[int(3)]).unwrap(), int(0));
        assert_eq!(g_n_genus0(4).pairings, vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]]);
        assert_eq!(g2.eval(&[int(1), int(1)]), Err(Error::CoincidentPoints));
    }

    #[test]
    fn liz_norms() {
        assert_eq!(liz_norm(&part("1")), int(-1));
        assert_eq!(liz_norm(&Partition::default()), int(1));
        assert_eq!(liz_norm(&part("1^3 2^2 5")), int(240));
    }

    #[test]
    fn involution_sum_equals_recursion_and_parity_rules() {
        for n in 0..=12 {
            for p in enumerate_partitions(n) {
                let a = qv_involution_sum(&p);
                assert_eq!(a, qv_zhu_recursion(&p), "{p}");
                if qv_vanishes_by_parity(&p) {
                    assert!(a.is_zero(), "{p}");
                } else {
                    assert!(!to_qseries(&a, 0).coeff(0).is_zero(), "{p}");
                    assert_eq!(crate::quasimodular::weight(&a), Some(n), "{p}");
                }
            }
        }
    }

    fn distinct_points(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::btree_set((-50i64..50, 1i64..7), n).prop_filter_map("distinct", move |set| {
            let mut pts: Vec<Rational> = set.into_iter().map(|(a, b)| rat(a, b)).collect();
            pts.sort();
            pts.dedup();
            (pts.len() == n).then_some(pts)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn recursion_equals_pairing_sum(pts in (0usize..=8).prop_flat_map(distinct_points)) {
            let n = pts.len();
            prop_assert_eq!(eval_g_n_recursive(&pts).unwrap(), g_n_genus0(n).eval(&pts).unwrap());
        }
    }
}
