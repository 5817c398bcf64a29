//! Incremental sparse echelon forms.
//!
//! Rational input is scaled to integer vectors and eliminated fraction-free:
//! a step replaces `w` by `alpha * w - beta * e` with `alpha, beta` the
//! cofactors of the two leading entries, then divides out the content.
//! Prime-field input uses ordinary elimination against monic pivot rows.
//! Pivots are always the first nonzero index of a vector, so the result is a
//! deterministic function of the insertion order.
//!
//! Each vector may carry a tracker `t` with the invariant
//! `w = s * v + M * t`, where `M` is the matrix whose columns were inserted
//! and `v` is an optional right-hand side. Kernels and solutions are read off
//! the trackers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{inv_mod, mul_mod};
use super::{Scalar, SparseEntries};

pub(crate) type Entries<E> = Vec<(usize, E)>;

pub(crate) trait Domain: Clone + Send + Sync {
    type E: Clone + Send + Sync + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// `(alpha, beta)` with `alpha * target == beta * pivot`.
    fn cofactors(&self, target: &Self::E, pivot: &Self::E) -> (Self::E, Self::E);
    /// Rescales a working triple after an elimination step.
    fn tidy(&self, w: &mut Entries<Self::E>, t: &mut Entries<Self::E>, s: &mut Self::E);
    /// Rescales a new pivot row into its stored form.
    fn make_pivot(&self, w: &mut Entries<Self::E>, t: &mut Entries<Self::E>);
    /// Converts field entries into domain entries, returning `lambda` with
    /// `imported = lambda * entries`.
    fn import(&self, entries: &[(usize, Scalar)]) -> (Entries<Self::E>, Self::E);
    /// `entries / divisor` as field scalars.
    fn export(&self, entries: &[(usize, Self::E)], divisor: &Self::E) -> SparseEntries;
}

#[derive(Clone, Debug)]
pub(crate) struct Integers;

impl Domain for Integers {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn cofactors(&self, target: &BigInt, pivot: &BigInt) -> (BigInt, BigInt) {
        let g = target.gcd(pivot);
        (pivot / &g, target / &g)
    }

    fn tidy(&self, w: &mut Entries<BigInt>, t: &mut Entries<BigInt>, s: &mut BigInt) {
        let mut g = s.abs();
        for (_, x) in w.iter().chain(t.iter()) {
            if g.is_one() {
                return;
            }
            g = g.gcd(x);
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for (_, x) in w.iter_mut().chain(t.iter_mut()) {
            *x = &*x / &g;
        }
        *s = &*s / &g;
    }

    fn make_pivot(&self, w: &mut Entries<BigInt>, t: &mut Entries<BigInt>) {
        let mut s = BigInt::zero();
        self.tidy(w, t, &mut s);
        if w.first().is_some_and(|(_, x)| x.is_negative()) {
            for (_, x) in w.iter_mut().chain(t.iter_mut()) {
                *x = -&*x;
            }
        }
    }

    fn import(&self, entries: &[(usize, Scalar)]) -> (Entries<BigInt>, BigInt) {
        let mut lcm = BigInt::one();
        for (_, c) in entries {
            let q = rational(c);
            lcm = lcm.lcm(q.denom());
        }
        let out = entries
            .iter()
            .map(|(i, c)| {
                let q = rational(c);
                (*i, q.numer() * (&lcm / q.denom()))
            })
            .collect();
        (out, lcm)
    }

    fn export(&self, entries: &[(usize, BigInt)], divisor: &BigInt) -> SparseEntries {
        entries
            .iter()
            .map(|(i, x)| {
                (
                    *i,
                    Scalar::Rational(BigRational::new(x.clone(), divisor.clone())),
                )
            })
            .collect()
    }
}

fn rational(c: &Scalar) -> &BigRational {
    c.as_rational()
        .expect("rational engine fed a modular scalar")
}

#[derive(Clone, Debug)]
pub(crate) struct Zp {
    pub p: u64,
}

impl Domain for Zp {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn cofactors(&self, target: &u64, pivot: &u64) -> (u64, u64) {
        // pivot rows are monic
        debug_assert_eq!(*pivot, 1);
        (1, *target)
    }

    fn tidy(&self, _w: &mut Entries<u64>, _t: &mut Entries<u64>, _s: &mut u64) {}

    fn make_pivot(&self, w: &mut Entries<u64>, t: &mut Entries<u64>) {
        let lead = w[0].1;
        if lead == 1 {
            return;
        }
        let inv = inv_mod(lead, self.p);
        for (_, x) in w.iter_mut().chain(t.iter_mut()) {
            *x = mul_mod(*x, inv, self.p);
        }
    }

    fn import(&self, entries: &[(usize, Scalar)]) -> (Entries<u64>, u64) {
        let out = entries
            .iter()
            .map(|(i, c)| match c {
                Scalar::Prime { value, .. } => (*i, *value),
                Scalar::Rational(_) => panic!("modular engine fed a rational scalar"),
            })
            .collect();
        (out, 1)
    }

    fn export(&self, entries: &[(usize, u64)], divisor: &u64) -> SparseEntries {
        let inv = inv_mod(*divisor, self.p);
        entries
            .iter()
            .map(|(i, x)| {
                (
                    *i,
                    Scalar::Prime {
                        value: mul_mod(*x, inv, self.p),
                        modulus: self.p,
                    },
                )
            })
            .collect()
    }
}

/// `alpha * a - beta * b`, skipping zero results.
fn combine<D: Domain>(
    dom: &D,
    alpha: &D::E,
    a: &[(usize, D::E)],
    beta: &D::E,
    b: &[(usize, D::E)],
) -> Entries<D::E> {
    let alpha_is_one = *alpha == dom.one();
    let scale_a = |x: &D::E| {
        if alpha_is_one {
            x.clone()
        } else {
            dom.mul(alpha, x)
        }
    };
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, scale_a(&a[i].1)));
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, dom.neg(&dom.mul(beta, &b[j].1))));
            j += 1;
        } else {
            let x = dom.sub(&scale_a(&a[i].1), &dom.mul(beta, &b[j].1));
            if !dom.is_zero(&x) {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub(crate) struct PivotRow<E> {
    pub vec: Entries<E>,
    pub tracker: Entries<E>,
}

/// Outcome of reducing a vector against the echelon.
#[derive(Clone, Debug)]
pub(crate) struct Reduced<E> {
    pub residual: Entries<E>,
    pub tracker: Entries<E>,
    pub scale: E,
}

pub(crate) enum Inserted<E> {
    Pivot,
    Dependent { tracker: Entries<E> },
}

#[derive(Clone, Debug)]
pub(crate) struct Echelon<D: Domain> {
    pub dom: D,
    track: bool,
    rows: Vec<PivotRow<D::E>>,
    by_pivot: HashMap<usize, usize>,
}

impl<D: Domain> Echelon<D> {
    pub fn new(dom: D, track: bool) -> Self {
        Echelon {
            dom,
            track,
            rows: Vec::new(),
            by_pivot: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates leading entries while they hit a pivot.
    pub fn reduce(&self, mut w: Entries<D::E>, mut t: Entries<D::E>, mut s: D::E) -> Reduced<D::E> {
        while let Some((lead, _)) = w.first() {
            let Some(&pos) = self.by_pivot.get(lead) else {
                break;
            };
            let row = &self.rows[pos];
            let (alpha, beta) = self.dom.cofactors(&w[0].1, &row.vec[0].1);
            w = combine(&self.dom, &alpha, &w, &beta, &row.vec);
            if self.track {
                t = combine(&self.dom, &alpha, &t, &beta, &row.tracker);
            }
            s = self.dom.mul(&alpha, &s);
            self.dom.tidy(&mut w, &mut t, &mut s);
        }
        Reduced {
            residual: w,
            tracker: t,
            scale: s,
        }
    }

    /// Inserts a vector known to equal `M * tracker`.
    pub fn insert(&mut self, w: Entries<D::E>, t: Entries<D::E>) -> Inserted<D::E> {
        let zero = self.dom.zero();
        let Reduced {
            residual, tracker, ..
        } = self.reduce(w, t, zero);
        if residual.is_empty() {
            return Inserted::Dependent { tracker };
        }
        let mut row = PivotRow {
            vec: residual,
            tracker,
        };
        self.dom.make_pivot(&mut row.vec, &mut row.tracker);
        self.by_pivot.insert(row.vec[0].0, self.rows.len());
        self.rows.push(row);
        Inserted::Pivot
    }

    /// Fully reduced rows sorted by pivot, each divided by its leading entry.
    pub fn into_rref(self) -> Vec<SparseEntries> {
        let dom = self.dom;
        let mut rows: Vec<Entries<D::E>> = self.rows.into_iter().map(|r| r.vec).collect();
        rows.sort_by_key(|r| r[0].0);
        let pivot_pos: HashMap<usize, usize> =
            rows.iter().enumerate().map(|(k, r)| (r[0].0, k)).collect();
        let mut empty_t = Vec::new();
        for k in (0..rows.len()).rev() {
            loop {
                let hit = rows[k][1..]
                    .iter()
                    .find_map(|(c, _)| pivot_pos.get(c).copied());
                let Some(other) = hit else { break };
                let col = rows[other][0].0;
                let target = rows[k]
                    .iter()
                    .find(|(c, _)| *c == col)
                    .expect("hit")
                    .1
                    .clone();
                let (alpha, beta) = dom.cofactors(&target, &rows[other][0].1);
                let mut next = combine(&dom, &alpha, &rows[k], &beta, &rows[other]);
                let mut s = dom.zero();
                dom.tidy(&mut next, &mut empty_t, &mut s);
                rows[k] = next;
            }
        }
        rows.into_iter()
            .map(|r| {
                let lead = r[0].1.clone();
                dom.export(&r, &lead)
            })
            .collect()
    }
}

/// Runs `body` with the elimination domain matching `field`.
macro_rules! with_domain {
    ($field:expr, $dom:ident => $body:expr) => {
        match $field {
            $crate::linalg::Field::Rational => {
                let $dom = $crate::linalg::elim::Integers;
                $body
            }
            $crate::linalg::Field::Prime(p) => {
                let $dom = $crate::linalg::elim::Zp { p };
                $body
            }
        }
    };
}
pub(crate) use with_domain;
