//! A deliberately naive reference implementation: dense matrices over the
//! rationals, tuple enumeration by recursion, and textbook row reduction.
//! It shares no code with the library beyond reading an algebra's
//! structure constants.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use superhom::superalgebra::SuperAlgebra;

pub type Dense = Vec<Vec<BigRational>>;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rank by Gaussian elimination with partial pivoting on the first nonzero.
pub fn dense_rank(mut m: Dense) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let delta = &f * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank modulo a prime, on integer matrices.
pub fn dense_rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let inv = |a: i64| -> i64 {
        let (mut r, mut e, mut b) = (1i64, p - 2, a);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * iv % p;
                for k in c..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub struct Oracle {
    d: usize,
    odd: Vec<bool>,
    mul: Vec<Vec<Vec<BigRational>>>,
}

fn all_tuples(d: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for head in 0..d {
        for mut rest in all_tuples(d, len - 1) {
            rest.insert(0, head);
            out.push(rest);
        }
    }
    out
}

impl Oracle {
    pub fn new(a: &SuperAlgebra) -> Self {
        let d = a.dim();
        let mut mul = vec![vec![vec![BigRational::zero(); d]; d]; d];
        for (i, j, k, c) in a.structure_constants() {
            mul[i][j][k] += c;
        }
        Oracle {
            d,
            odd: a.parities().iter().map(|p| p.is_odd()).collect(),
            mul,
        }
    }

    fn tuples(&self, n: isize) -> Vec<Vec<usize>> {
        if n < 0 {
            Vec::new()
        } else {
            all_tuples(self.d, n as usize + 1)
        }
    }

    fn position(&self, t: &[usize]) -> usize {
        self.tuples(t.len() as isize - 1)
            .iter()
            .position(|u| u == t)
            .unwrap()
    }

    fn odd_count(&self, t: &[usize]) -> usize {
        t.iter().filter(|&&k| self.odd[k]).count()
    }

    /// Matrix of `Σ_{i<=top} (-1)^i d_i` on `C_n`.
    fn faces(&self, n: usize, last: bool) -> Dense {
        let src = self.tuples(n as isize);
        let dst = self.tuples(n as isize - 1);
        let index = |t: &Vec<usize>| dst.iter().position(|u| u == t).unwrap();
        let mut m = vec![vec![BigRational::zero(); src.len()]; dst.len()];
        for (col, t) in src.iter().enumerate() {
            for i in 0..n {
                for k in 0..self.d {
                    let c = &self.mul[t[i]][t[i + 1]][k];
                    if c.is_zero() {
                        continue;
                    }
                    let mut u = t.clone();
                    u[i] = k;
                    u.remove(i + 1);
                    let s = if i % 2 == 0 { c.clone() } else { -c.clone() };
                    m[index(&u)][col] += s;
                }
            }
            if last && n >= 1 {
                let sign_odd = (self.odd[t[n]] && self.odd_count(&t[..n]) % 2 == 1) ^ (n % 2 == 1);
                for k in 0..self.d {
                    let c = &self.mul[t[n]][t[0]][k];
                    if c.is_zero() {
                        continue;
                    }
                    let mut u = t[..n].to_vec();
                    u[0] = k;
                    let s = if sign_odd { -c.clone() } else { c.clone() };
                    m[index(&u)][col] += s;
                }
            }
        }
        m
    }

    pub fn b(&self, n: usize) -> Dense {
        self.faces(n, true)
    }

    pub fn b_prime(&self, n: usize) -> Dense {
        self.faces(n, false)
    }

    /// Cyclic operator with sign `(-1)^n` times the Koszul sign.
    pub fn t(&self, n: usize) -> Dense {
        let src = self.tuples(n as isize);
        let mut m = vec![vec![BigRational::zero(); src.len()]; src.len()];
        for (col, t) in src.iter().enumerate() {
            let mut u = vec![t[n]];
            u.extend_from_slice(&t[..n]);
            let neg = (self.odd[t[n]] && self.odd_count(&t[..n]) % 2 == 1) ^ (n % 2 == 1);
            m[self.position(&u)][col] = if neg { q(-1) } else { q(1) };
        }
        m
    }

    pub fn hh_bettis(&self, n_max: usize) -> Vec<usize> {
        (0..=n_max)
            .map(|n| {
                let dim = self.tuples(n as isize).len();
                let r_out = if n == 0 { 0 } else { dense_rank(self.b(n)) };
                let r_in = dense_rank(self.b(n + 1));
                dim - r_out - r_in
            })
            .collect()
    }

    /// `D_m: Tot_m -> Tot_{m-1}` with `Tot_m = ⊕_i C_{m-i}` in column order.
    pub fn total_d(&self, m: usize) -> Dense {
        let size = |deg: isize| -> usize { (0..=deg).map(|j| self.tuples(j).len()).sum() };
        let offset = |deg: usize, col: usize| -> usize {
            (0..col)
                .map(|i| self.tuples((deg - i) as isize).len())
                .sum()
        };
        let rows = size(m as isize - 1);
        let cols = size(m as isize);
        let mut out = vec![vec![BigRational::zero(); cols]; rows];
        let mut place = |block: &Dense, r0: usize, c0: usize, sign: i64| {
            for (r, row) in block.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        out[r0 + r][c0 + c] += x * q(sign);
                    }
                }
            }
        };
        for i in 0..=m {
            let j = m - i;
            let c0 = offset(m, i);
            if j >= 1 {
                let v = if i % 2 == 0 {
                    self.b(j)
                } else {
                    self.b_prime(j)
                };
                place(&v, offset(m - 1, i), c0, if i % 2 == 0 { 1 } else { -1 });
            }
            if i >= 1 {
                let t = self.t(j);
                let size_j = t.len();
                let h: Dense = if i % 2 == 1 {
                    (0..size_j)
                        .map(|r| {
                            (0..size_j)
                                .map(|c| {
                                    if r == c {
                                        q(1) - &t[r][c]
                                    } else {
                                        -t[r][c].clone()
                                    }
                                })
                                .collect()
                        })
                        .collect()
                } else {
                    let mut acc: Dense = (0..size_j)
                        .map(|r| {
                            (0..size_j)
                                .map(|c| if r == c { q(1) } else { q(0) })
                                .collect()
                        })
                        .collect();
                    let mut power = acc.clone();
                    for _ in 0..j {
                        power = matmul(&t, &power);
                        for r in 0..size_j {
                            for c in 0..size_j {
                                acc[r][c] += &power[r][c];
                            }
                        }
                    }
                    acc
                };
                place(&h, offset(m - 1, i - 1), c0, 1);
            }
        }
        out
    }

    pub fn hc_bettis(&self, n_max: usize) -> Vec<usize> {
        (0..=n_max)
            .map(|m| {
                let d_out = self.total_d(m);
                let d_in = self.total_d(m + 1);
                let dim = d_in.len();
                let r_out = if m == 0 { 0 } else { dense_rank(d_out) };
                dim - r_out - dense_rank(d_in)
            })
            .collect()
    }
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}
