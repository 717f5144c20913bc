//! Theta series of positive definite even lattices by exact enumeration.
//!
//! The Gram matrix is split as `G = U^T D U` over the rationals; the partial
//! norms are then rescaled to integers so that every pruning bound is an
//! exact integer comparison.

use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::qseries::{eta_inverse, QSeries};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Vec<Vec<i64>>,
}

impl EvenLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let d = gram.len();
        if gram.iter().any(|r| r.len() != d) {
            return Err(Error::NotEvenLattice("Gram matrix is not square".into()));
        }
        for i in 0..d {
            if gram[i][i] % 2 != 0 {
                return Err(Error::NotEvenLattice(format!("diagonal entry {i} is odd")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotEvenLattice("Gram matrix is not symmetric".into()));
                }
            }
        }
        let l = Self { gram };
        l.ldl()?;
        Ok(l)
    }

    /// Reads a JSON array of integer rows.
    pub fn from_json(s: &str) -> Result<Self> {
        let gram: Vec<Vec<i64>> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// `(D, U)` with `x^T G x = sum_i D_i (x_i + sum_{j>i} U_ij x_j)^2`.
    fn ldl(&self) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
        let d = self.rank();
        let mut dd = vec![Rational::zero(); d];
        let mut u = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            let mut di = int(self.gram[i][i]);
            for k in 0..i {
                di -= &u[k][i] * &u[k][i] * &dd[k];
            }
            if !di.is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for j in i + 1..d {
                let mut s = int(self.gram[i][j]);
                for k in 0..i {
                    s -= &u[k][i] * &u[k][j] * &dd[k];
                }
                u[i][j] = s / &di;
            }
            u[i][i] = int(1);
            dd[i] = di;
        }
        Ok((dd, u))
    }

    /// `x^T G x / 2`.
    pub fn norm(&self, x: &[i64]) -> i64 {
        let mut s = 0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                s += x[i] * g * x[j];
            }
        }
        s / 2
    }

    /// `A^T G A` for an integer change of basis `A`.
    pub fn transform(&self, a: &[Vec<i64>]) -> Result<Self> {
        let d = self.rank();
        let mut out = vec![vec![0i64; d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0;
                for k in 0..d {
                    for l in 0..d {
                        s += a[k][i] * self.gram[k][l] * a[l][j];
                    }
                }
                out[i][j] = s;
            }
        }
        Self::new(out)
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut g = vec![vec![0i64; a + b]; a + b];
        for i in 0..a {
            g[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            g[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        Self { gram: g }
    }
}

/// The E8 root lattice (Cartan matrix, Bourbaki labelling).
pub fn e8_lattice() -> EvenLattice {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    EvenLattice::new(g).expect("E8 Cartan matrix is positive definite")
}

/// Integer form of the decomposition: `x^T G x * scale = sum_i w_i t_i^2` with
/// `t_i = den_i x_i + sum_{j>i} num_ij x_j`.
struct Enumerator {
    d: usize,
    w: Vec<i128>,
    den: Vec<i128>,
    num: Vec<Vec<i128>>,
    scale: i128,
}

fn to_i128(r: &Rational) -> Result<i128> {
    r.to_integer()
        .to_i128()
        .ok_or_else(|| Error::RangeError("lattice too large for exact enumeration".into()))
}

impl Enumerator {
    fn new(l: &EvenLattice) -> Result<Self> {
        let (dd, u) = l.ldl()?;
        let d = l.rank();
        let mut den = Vec::with_capacity(d);
        let mut num = Vec::with_capacity(d);
        for i in 0..d {
            let di = u[i][i + 1..].iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let dr = Rational::from_integer(di);
            num.push(
                (0..d)
                    .map(|j| if j > i { to_i128(&(&u[i][j] * &dr)) } else { Ok(0) })
                    .collect::<Result<Vec<_>>>()?,
            );
            den.push(dr);
        }
        // weight D_i / den_i^2, cleared by a common multiple
        let raw: Vec<Rational> = (0..d).map(|i| &dd[i] / (&den[i] * &den[i])).collect();
        let scale = raw.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let sr = Rational::from_integer(scale.clone());
        let w = raw.iter().map(|x| to_i128(&(x * &sr))).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d,
            w,
            den: den.iter().map(to_i128).collect::<Result<Vec<_>>>()?,
            num,
            scale: to_i128(&sr)?,
        })
    }

    fn t_offset(&self, i: usize, x: &[i64]) -> i128 {
        (i + 1..self.d).map(|j| self.num[i][j] * x[j] as i128).sum()
    }

    /// Admissible `x_i` given the tail and the remaining scaled budget.
    fn range(&self, i: usize, x: &[i64], budget: i128) -> (i64, i64) {
        let tmax = (budget / self.w[i]).sqrt();
        let s = self.t_offset(i, x);
        let lo = Integer::div_ceil(&(-tmax - s), &self.den[i]);
        let hi = Integer::div_floor(&(tmax - s), &self.den[i]);
        (lo as i64, hi as i64)
    }

    fn term(&self, i: usize, x: &[i64]) -> i128 {
        let t = self.den[i] * x[i] as i128 + self.t_offset(i, x);
        self.w[i] * t * t
    }

    fn walk(&self, i: usize, x: &mut Vec<i64>, budget: i128, total: i128, counts: &mut [u64]) {
        let (lo, hi) = self.range(i, x, budget);
        for v in lo..=hi {
            x[i] = v;
            let t = self.term(i, x);
            if t > budget {
                continue;
            }
            if i == 0 {
                // scaled x^T G x = 2 n * scale
                let n = ((total + t) / (2 * self.scale)) as usize;
                counts[n] += 1;
            } else {
                self.walk(i - 1, x, budget - t, total + t, counts);
            }
        }
        x[i] = 0;
    }
}

/// `|L_n|` for `n = 0..=order`, where `L_n = {x : x^T G x / 2 = n}`.
pub fn shell_counts(l: &EvenLattice, order: usize) -> Result<Vec<u64>> {
    let d = l.rank();
    let mut counts = vec![0u64; order + 1];
    if d == 0 {
        counts[0] = 1;
        return Ok(counts);
    }
    let e = Enumerator::new(l)?;
    let budget = 2 * order as i128 * e.scale;
    let (lo, hi) = e.range(d - 1, &vec![0; d], budget);
    let top: Vec<i64> = (lo..=hi).collect();
    let partial = par::map_collect(&top, |&v| {
        let mut x = vec![0i64; d];
        x[d - 1] = v;
        let mut c = vec![0u64; order + 1];
        let t = e.term(d - 1, &x);
        if t <= budget {
            if d == 1 {
                c[(t / (2 * e.scale)) as usize] += 1;
            } else {
                e.walk(d - 2, &mut x, budget - t, t, &mut c);
            }
        }
        c
    });
    for c in partial {
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
    }
    Ok(counts)
}

/// Box scan over `|x_i| <= sqrt(2 N (G^-1)_ii)`; exponential, for checking.
pub fn shell_counts_brute(l: &EvenLattice, order: usize) -> Result<Vec<u64>> {
    let d = l.rank();
    let mut counts = vec![0u64; order + 1];
    if d == 0 {
        counts[0] = 1;
        return Ok(counts);
    }
    let inv = inverse(l)?;
    let bounds: Vec<i64> = (0..d)
        .map(|i| to_i128(&(&inv[i][i] * int(2 * order as i64))).map(|b| (b.sqrt() + 1) as i64))
        .collect::<Result<_>>()?;
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let n = l.norm(&x);
        if n >= 0 && n as usize <= order {
            counts[n as usize] += 1;
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(counts);
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

fn inverse(l: &EvenLattice) -> Result<Vec<Vec<Rational>>> {
    let d = l.rank();
    let mut m: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational> = l.gram[i].iter().map(|&g| int(g)).collect();
            row.extend((0..d).map(|j| int(i64::from(i == j))));
            row
        })
        .collect();
    for col in 0..d {
        let p = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::NotPositiveDefinite)?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let src = m[col].clone();
                for (v, s) in m[r].iter_mut().zip(&src) {
                    *v -= &f * s;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[d..].to_vec()).collect())
}

pub fn theta_series(l: &EvenLattice, order: usize) -> Result<QSeries> {
    let counts = shell_counts(l, order)?;
    Ok(QSeries::new(Rational::zero(), counts.into_iter().map(|c| int(c as i64)).collect()))
}

/// `Z_{V_L} = theta_L / eta^d`, offset `-d/24`.
pub fn lattice_voa_partition(l: &EvenLattice, order: usize) -> Result<QSeries> {
    let theta = theta_series(l, order)?;
    Ok(theta.mul(&eta_inverse(order).pow(l.rank() as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasimodular::{q, to_qseries};
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_lattices() {
        let a1 = EvenLattice::new(vec![vec![2]]).unwrap();
        assert_eq!(shell_counts(&a1, 9).unwrap(), [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
        let a2 = EvenLattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(shell_counts(&a2, 4).unwrap(), [1, 6, 0, 6, 6]);
        assert_eq!(shell_counts(&EvenLattice::new(vec![]).unwrap(), 3).unwrap(), [1, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_gram() {
        assert_eq!(EvenLattice::new(vec![vec![2, 3], vec![3, 2]]), Err(Error::NotPositiveDefinite));
        assert!(matches!(EvenLattice::new(vec![vec![3]]), Err(Error::NotEvenLattice(_))));
        assert!(matches!(EvenLattice::new(vec![vec![2, 1], vec![0, 2]]), Err(Error::NotEvenLattice(_))));
        assert!(matches!(EvenLattice::from_json("[[2,1]"), Err(Error::Parse(_))));
    }

    #[test]
    fn e8_theta_is_q() {
        let e8 = e8_lattice();
        let th = theta_series(&e8, 6).unwrap();
        assert_eq!(th.coeff(1), int(240));
        assert_eq!(th, to_qseries(&q(), 6));
        let z = lattice_voa_partition(&e8, 4).unwrap();
        assert_eq!(z.offset(), &rat(-1, 3));
        assert_eq!(z.coeff(1), int(248));
    }

    #[test]
    fn e8_character_solves_mlde() {
        let z = lattice_voa_partition(&e8_lattice(), 10).unwrap();
        let sol = crate::mlde::solve_mlde2(&int(8), 10).unwrap();
        assert_eq!(&sol.mu, z.offset());
        assert_eq!(sol.coeffs.coeffs(), z.coeffs());
    }

    #[test]
    fn orthogonal_sums_multiply() {
        let a2 = EvenLattice::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let a1 = EvenLattice::new(vec![vec![2]]).unwrap();
        let s = a2.orthogonal_sum(&a1);
        assert_eq!(theta_series(&s, 8).unwrap(), theta_series(&a2, 8).unwrap().mul(&theta_series(&a1, 8).unwrap()));
        assert_eq!(lattice_voa_partition(&EvenLattice::new(vec![]).unwrap(), 3).unwrap(), QSeries::one(3));
    }

    #[test]
    fn enumeration_agrees_with_box_scan() {
        let lattices = vec![
            vec![vec![2, -1], vec![-1, 2]],
            vec![vec![4, 1, 0], vec![1, 2, -1], vec![0, -1, 6]],
            vec![vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]],
            vec![vec![2, 0, -1, 0], vec![0, 2, -1, 0], vec![-1, -1, 2, -1], vec![0, 0, -1, 2]],
        ];
        for g in lattices {
            let l = EvenLattice::new(g).unwrap();
            assert_eq!(shell_counts(&l, 6).unwrap(), shell_counts_brute(&l, 6).unwrap());
        }
    }

    fn random_unimodular(d: usize, rng: &mut impl Rng) -> Vec<Vec<i64>> {
        let mut a: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
            if i == j {
                continue;
            }
            let k = rng.gen_range(-1..=1);
            for row in a.iter_mut() {
                row[j] += k * row[i];
            }
        }
        a
    }

    #[test]
    fn theta_is_basis_invariant() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let e8 = e8_lattice();
        let reference = shell_counts(&e8, 3).unwrap();
        for _ in 0..5 {
            let a = random_unimodular(8, &mut rng);
            assert_eq!(shell_counts(&e8.transform(&a).unwrap(), 3).unwrap(), reference);
        }
        let d4 = EvenLattice::new(vec![vec![2, 0, -1, 0], vec![0, 2, -1, 0], vec![-1, -1, 2, -1], vec![0, 0, -1, 2]]).unwrap();
        let r4 = shell_counts(&d4, 5).unwrap();
        for _ in 0..10 {
            let a = random_unimodular(4, &mut rng);
            assert_eq!(shell_counts(&d4.transform(&a).unwrap(), 5).unwrap(), r4);
        }
    }

    #[test]
    fn shell_growth_is_polynomial() {
        let counts = shell_counts(&e8_lattice(), 10).unwrap();
        let ratio = |n: usize| counts[n] as f64 / (n as f64).powi(4);
        let c = (1..=5).map(ratio).fold(0.0, f64::max);
        for n in 6..=10 {
            assert!(ratio(n) <= 2.0 * c);
        }
    }
}
