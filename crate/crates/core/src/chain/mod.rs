//! The Hochschild chain spaces `C_n(A) = A^{⊗(n+1)}`, the simplicial and
//! cyclic operators on them, the cyclic bicomplex and its total complex.
//!
//! A basis tuple `(k_0, .., k_n)` of `C_n` is stored as the mixed-radix
//! integer `Σ k_i d^{n-i}`, so indices enumerate tuples lexicographically.
//! Operators can be materialized as matrices (bounded by the chain-space cap)
//! or applied to sparse chains, which never enumerates the target space.

mod homology;
mod total;

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{
    normalize_entries, Field, LinalgError, Scalar, SparseEntries, SparseLinearMap,
};
use crate::superalgebra::{koszul_negative, AlgebraError, Parity, StructureTable, SuperAlgebra};

pub use homology::{
    bprime_acyclicity_check, connes_sequence_check, cyclic_homology, hochschild_homology,
    ConnesOutcome, DegreeStats, HomologyReport, HomologyResult, Theory,
};
pub use total::TotalComplex;

/// Default refusal threshold for enumerated chain-space dimensions.
pub const DEFAULT_CHAIN_CAP: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("C_{degree} has dimension {dim}, above the cap {cap}")]
    CapExceeded {
        degree: usize,
        dim: usize,
        cap: usize,
    },
    #[error("C_{degree} is too large to index")]
    Overflow { degree: usize },
    #[error("{op} is not defined on C_{degree}")]
    BadOperator { op: String, degree: usize },
    #[error("D∘D is nonzero at total degree {degree}: {witness}")]
    NotAComplex { degree: usize, witness: String },
    #[error("chain maps require both complexes over the same field")]
    FieldMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A structural operator on the Hochschild chain spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// Face `d_i: C_n -> C_{n-1}`.
    Face(usize),
    /// Degeneracy `s_i: C_n -> C_{n+1}`, inserting the unit after slot `i`.
    Degeneracy(usize),
    /// Hochschild boundary `b = Σ_{i≤n} (-1)^i d_i`.
    B,
    /// `b' = Σ_{i<n} (-1)^i d_i`.
    BPrime,
    /// Cyclic operator `t_n`.
    T,
    OneMinusT,
    /// Norm `N = Σ_k t^k`.
    N,
    /// Connes operator `C_n -> C_{n+1}`.
    ConnesB,
    /// Contracting homotopy of `b'`: `x -> 1 ⊗ x`.
    Homotopy,
}

impl Op {
    /// Change in degree.
    pub fn shift(self) -> isize {
        match self {
            Op::Face(_) | Op::B | Op::BPrime => -1,
            Op::T | Op::OneMinusT | Op::N => 0,
            Op::Degeneracy(_) | Op::ConnesB | Op::Homotopy => 1,
        }
    }

    pub fn name(self) -> String {
        match self {
            Op::Face(i) => format!("d{i}"),
            Op::Degeneracy(i) => format!("s{i}"),
            Op::B => "b".into(),
            Op::BPrime => "b'".into(),
            Op::T => "t".into(),
            Op::OneMinusT => "1-t".into(),
            Op::N => "N".into(),
            Op::ConnesB => "B".into(),
            Op::Homotopy => "h".into(),
        }
    }

    fn check(self, n: usize) -> Result<(), ChainError> {
        let ok = match self {
            Op::Face(i) => n >= 1 && i <= n,
            Op::Degeneracy(i) => i <= n,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(ChainError::BadOperator {
                op: self.name(),
                degree: n,
            })
        }
    }
}

/// The Hochschild chain spaces of one algebra over one coefficient field.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    algebra: Arc<SuperAlgebra>,
    table: Arc<StructureTable>,
    cap: usize,
}

impl HochschildComplex {
    pub fn new(algebra: Arc<SuperAlgebra>, field: Field, cap: usize) -> Result<Self, ChainError> {
        let table = Arc::new(StructureTable::new(&algebra, field)?);
        Ok(HochschildComplex {
            algebra,
            table,
            cap,
        })
    }

    pub fn algebra(&self) -> &Arc<SuperAlgebra> {
        &self.algebra
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn field(&self) -> Field {
        self.table.field()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `d^{n+1}`, or an overflow error.
    pub fn dim(&self, n: usize) -> Result<usize, ChainError> {
        u32::try_from(n + 1)
            .ok()
            .and_then(|e| self.table.dim().checked_pow(e))
            .ok_or(ChainError::Overflow { degree: n })
    }

    /// Dimension of `C_n` for degrees that may be enumerated, i.e. at most
    /// the cap.
    pub fn enumerable_dim(&self, n: usize) -> Result<usize, ChainError> {
        let dim = self.dim(n)?;
        if dim > self.cap {
            return Err(ChainError::CapExceeded {
                degree: n,
                dim,
                cap: self.cap,
            });
        }
        Ok(dim)
    }

    /// Dimension of `C_n` for a possibly negative degree.
    pub fn dim_signed(&self, n: isize) -> Result<usize, ChainError> {
        if n < 0 {
            Ok(0)
        } else {
            self.dim(n as usize)
        }
    }

    pub fn decode(&self, n: usize, mut index: usize) -> Vec<usize> {
        let d = self.table.dim();
        let mut t = vec![0; n + 1];
        for slot in t.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        t
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        let d = self.table.dim();
        tuple.iter().fold(0, |acc, &k| acc * d + k)
    }

    /// Basis tuple rendered with the algebra's labels.
    pub fn tuple_label(&self, n: usize, index: usize) -> String {
        let labels = self.algebra.basis_labels();
        self.decode(n, index)
            .iter()
            .map(|&k| labels[k].as_str())
            .collect::<Vec<_>>()
            .join("⊗")
    }

    fn tuple_parity(&self, tuple: &[usize]) -> Parity {
        tuple.iter().map(|&k| self.table.parity(k)).sum()
    }

    fn signed(&self, negative: bool, c: Scalar) -> Scalar {
        if negative {
            -c
        } else {
            c
        }
    }

    fn face_into(&self, i: usize, tuple: &[usize], coeff: &Scalar, out: &mut SparseEntries) {
        let n = tuple.len() - 1;
        if i < n {
            let mut t: Vec<usize> = Vec::with_capacity(n);
            t.extend_from_slice(&tuple[..i]);
            t.push(0);
            t.extend_from_slice(&tuple[i + 2..]);
            for (k, c) in self.table.product(tuple[i], tuple[i + 1]) {
                t[i] = *k;
                out.push((self.encode(&t), coeff * c));
            }
        } else {
            let last = self.table.parity(tuple[n]);
            let negative = koszul_negative(last, self.tuple_parity(&tuple[..n]));
            let mut t: Vec<usize> = tuple[..n].to_vec();
            for (k, c) in self.table.product(tuple[n], tuple[0]) {
                t[0] = *k;
                out.push((self.encode(&t), self.signed(negative, coeff * c)));
            }
        }
    }

    /// Inserts the unit after slot `i`, or in front for `None`.
    fn insert_unit_into(
        &self,
        i: Option<usize>,
        tuple: &[usize],
        coeff: &Scalar,
        out: &mut SparseEntries,
    ) {
        let at = i.map_or(0, |i| i + 1);
        let mut t = Vec::with_capacity(tuple.len() + 1);
        t.extend_from_slice(&tuple[..at]);
        t.push(0);
        t.extend_from_slice(&tuple[at..]);
        for (u, c) in self.table.unit() {
            t[at] = *u;
            out.push((self.encode(&t), coeff * c));
        }
    }

    /// `t_n` on a tuple: the rotated tuple and whether the sign is negative.
    fn rotate(&self, tuple: &[usize]) -> (Vec<usize>, bool) {
        let n = tuple.len() - 1;
        let last = self.table.parity(tuple[n]);
        let koszul = koszul_negative(last, self.tuple_parity(&tuple[..n]));
        let mut t = Vec::with_capacity(n + 1);
        t.push(tuple[n]);
        t.extend_from_slice(&tuple[..n]);
        (t, koszul ^ (n % 2 == 1))
    }

    fn norm_into(&self, tuple: &[usize], coeff: &Scalar, out: &mut SparseEntries) {
        let mut t = tuple.to_vec();
        let mut negative = false;
        for _ in 0..tuple.len() {
            out.push((self.encode(&t), self.signed(negative, coeff.clone())));
            let (next, flip) = self.rotate(&t);
            t = next;
            negative ^= flip;
        }
    }

    /// Image of one basis tuple of `C_n`, unnormalized.
    fn basis_into(&self, op: Op, tuple: &[usize], coeff: &Scalar, out: &mut SparseEntries) {
        let n = tuple.len() - 1;
        match op {
            Op::Face(i) => self.face_into(i, tuple, coeff, out),
            Op::Degeneracy(i) => self.insert_unit_into(Some(i), tuple, coeff, out),
            Op::Homotopy => self.insert_unit_into(None, tuple, coeff, out),
            Op::B | Op::BPrime => {
                let top = if op == Op::B { n } else { n.saturating_sub(1) };
                if n == 0 {
                    return;
                }
                for i in 0..=top {
                    let c = self.signed(i % 2 == 1, coeff.clone());
                    self.face_into(i, tuple, &c, out);
                }
            }
            Op::T => {
                let (t, negative) = self.rotate(tuple);
                out.push((self.encode(&t), self.signed(negative, coeff.clone())));
            }
            Op::OneMinusT => {
                out.push((self.encode(tuple), coeff.clone()));
                let (t, negative) = self.rotate(tuple);
                out.push((self.encode(&t), self.signed(!negative, coeff.clone())));
            }
            Op::N => self.norm_into(tuple, coeff, out),
            Op::ConnesB => {
                // (-1)^{n+1} (1 - t_{n+1}) s_n N_n
                let c = self.signed(n % 2 == 0, coeff.clone());
                let mut normed = Vec::new();
                self.norm_into(tuple, &c, &mut normed);
                let mut lifted = Vec::new();
                for (idx, c) in normalize_entries(normed) {
                    let t = self.decode(n, idx);
                    self.insert_unit_into(Some(n), &t, &c, &mut lifted);
                }
                for (idx, c) in normalize_entries(lifted) {
                    let t = self.decode(n + 1, idx);
                    self.basis_into(Op::OneMinusT, &t, &c, out);
                }
            }
        }
    }

    /// Image of basis tuple `index` of `C_n` under `op`.
    pub fn apply_basis(&self, op: Op, n: usize, index: usize) -> SparseEntries {
        let mut out = Vec::new();
        let one = Scalar::one(self.field());
        self.basis_into(op, &self.decode(n, index), &one, &mut out);
        normalize_entries(out)
    }

    /// Image of a sparse chain of `C_n` under `op`.
    pub fn apply(
        &self,
        op: Op,
        n: usize,
        x: &[(usize, Scalar)],
    ) -> Result<SparseEntries, ChainError> {
        op.check(n)?;
        let mut out = Vec::new();
        for (index, c) in x {
            self.basis_into(op, &self.decode(n, *index), c, &mut out);
        }
        Ok(normalize_entries(out))
    }

    /// `op` on `C_n` as a matrix. Both spaces must be within the cap.
    pub fn matrix(&self, op: Op, n: usize) -> Result<SparseLinearMap, ChainError> {
        op.check(n)?;
        let src = self.enumerable_dim(n)?;
        let dst = match n as isize + op.shift() {
            m if m < 0 => 0,
            m => self.enumerable_dim(m as usize)?,
        };
        Ok(SparseLinearMap::from_column_fn(
            self.field(),
            dst,
            src,
            |j| self.apply_basis(op, n, j),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::{builtin, matrix_algebra, Builtin, MatrixShape, DEFAULT_ALGEBRA_CAP};

    fn complex(kind: Builtin) -> HochschildComplex {
        HochschildComplex::new(
            Arc::new(builtin(kind).unwrap()),
            Field::Rational,
            DEFAULT_CHAIN_CAP,
        )
        .unwrap()
    }

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, v)
    }

    const ONE: usize = 0;
    const THETA: usize = 1;

    fn basis(c: &HochschildComplex, op: Op, tuple: &[usize]) -> SparseEntries {
        c.apply_basis(op, tuple.len() - 1, c.encode(tuple))
    }

    #[test]
    fn tuple_coding_is_lexicographic() {
        let c = complex(Builtin::Grassmann(1));
        assert_eq!(c.encode(&[1, 0, 1]), 5);
        assert_eq!(c.decode(2, 5), vec![1, 0, 1]);
        assert_eq!(c.dim(3).unwrap(), 16);
        assert_eq!(c.tuple_label(1, 2), "t1⊗1");
    }

    #[test]
    fn face_examples() {
        let g = complex(Builtin::Ground);
        assert_eq!(basis(&g, Op::Face(0), &[ONE, ONE]), vec![(0, q(1))]);
        let l = complex(Builtin::Grassmann(1));
        assert!(basis(&l, Op::Face(1), &[THETA, THETA]).is_empty());
        assert_eq!(basis(&l, Op::Face(1), &[ONE, THETA]), vec![(THETA, q(1))]);
        // 1⊗θ⊗θ: the last θ passes the odd 1⊗θ on its way to the front
        assert_eq!(
            basis(&l, Op::Face(2), &[ONE, THETA, THETA]),
            vec![(l.encode(&[THETA, THETA]), q(-1))]
        );
    }

    #[test]
    fn degeneracy_examples() {
        let g = complex(Builtin::Ground);
        assert_eq!(basis(&g, Op::Degeneracy(0), &[ONE]), vec![(0, q(1))]);
        let l = complex(Builtin::Grassmann(1));
        assert_eq!(
            basis(&l, Op::Degeneracy(0), &[THETA, THETA]),
            vec![(l.encode(&[THETA, ONE, THETA]), q(1))]
        );
        assert_eq!(
            basis(&l, Op::Degeneracy(1), &[THETA, THETA]),
            vec![(l.encode(&[THETA, THETA, ONE]), q(1))]
        );
        let s0 = basis(&l, Op::Degeneracy(0), &[THETA]);
        assert_eq!(l.apply(Op::Face(0), 1, &s0).unwrap(), vec![(THETA, q(1))]);
    }

    #[test]
    fn boundary_is_the_supercommutator_in_degree_one() {
        let l = complex(Builtin::Grassmann(1));
        assert!(basis(&l, Op::B, &[THETA, THETA]).is_empty());
        assert_eq!(basis(&l, Op::BPrime, &[ONE, THETA]), vec![(THETA, q(1))]);
        let c = complex(Builtin::Clifford1);
        // [x, x] = x² + x² = 2
        assert_eq!(basis(&c, Op::B, &[1, 1]), vec![(0, q(2))]);
        assert!(c.matrix(Op::B, 0).unwrap().n_rows() == 0);
    }

    #[test]
    fn cyclic_operator_examples() {
        let l = complex(Builtin::Grassmann(1));
        assert_eq!(basis(&l, Op::T, &[THETA]), vec![(THETA, q(1))]);
        assert_eq!(
            basis(&l, Op::T, &[THETA, THETA]),
            vec![(l.encode(&[THETA, THETA]), q(1))]
        );
        assert_eq!(
            basis(&l, Op::N, &[THETA, THETA]),
            vec![(l.encode(&[THETA, THETA]), q(2))]
        );
        assert_eq!(
            basis(&l, Op::T, &[ONE, THETA, THETA]),
            vec![(l.encode(&[THETA, ONE, THETA]), q(-1))]
        );
        assert_eq!(
            basis(&l, Op::T, &[ONE, ONE]),
            vec![(l.encode(&[ONE, ONE]), q(-1))]
        );
        assert!(basis(&l, Op::OneMinusT, &[ONE]).is_empty());
    }

    #[test]
    fn connes_operator_in_degree_zero() {
        let g = complex(Builtin::Ground);
        assert_eq!(basis(&g, Op::ConnesB, &[ONE]), vec![(0, q(-2))]);
    }

    #[test]
    fn operator_domain_errors() {
        let g = complex(Builtin::Ground);
        assert!(g.matrix(Op::Face(0), 0).is_err());
        assert!(g.matrix(Op::Face(3), 2).is_err());
        assert!(g.matrix(Op::Degeneracy(2), 1).is_err());
    }

    #[test]
    fn cap_refuses_enumeration_but_not_application() {
        let m = matrix_algebra(
            &builtin(Builtin::Ground).unwrap(),
            MatrixShape::new(1, 1).unwrap(),
            DEFAULT_ALGEBRA_CAP,
        )
        .unwrap();
        let c = HochschildComplex::new(m.algebra().clone(), Field::Rational, 100).unwrap();
        assert!(matches!(
            c.matrix(Op::B, 3),
            Err(ChainError::CapExceeded {
                degree: 3,
                dim: 256,
                cap: 100
            })
        ));
        assert!(c.apply(Op::B, 3, &[(7, q(1))]).is_ok());
    }

    #[test]
    fn modular_complex() {
        let a = Arc::new(builtin(Builtin::Clifford1).unwrap());
        let c = HochschildComplex::new(a, Field::Prime(3), DEFAULT_CHAIN_CAP).unwrap();
        let f = Field::Prime(3);
        assert_eq!(
            c.apply_basis(Op::B, 1, 3),
            vec![(0, Scalar::from_i64(f, 2))]
        );
    }
}
