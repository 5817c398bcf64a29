use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{validate, AlgebraElement, AlgebraError, Parity, SuperAlgebra};

/// Default refusal threshold for the dimension of a constructed algebra.
pub const DEFAULT_ALGEBRA_CAP: usize = 4096;

/// Square supermatrices of type `(p|q) x (p|q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixShape {
    p: usize,
    q: usize,
}

impl MatrixShape {
    pub fn new(p: usize, q: usize) -> Result<Self, AlgebraError> {
        if p + q == 0 {
            return Err(AlgebraError::EmptyShape);
        }
        Ok(MatrixShape { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Matrix size `p + q`.
    pub fn size(&self) -> usize {
        self.p + self.q
    }

    /// Whether the 1-based row or column index lies in the first block.
    pub fn in_first_block(&self, r: usize) -> bool {
        r <= self.p
    }

    /// Parity shift of position `(r, s)`: odd off the diagonal blocks.
    pub fn block_offset(&self, r: usize, s: usize) -> Parity {
        if self.in_first_block(r) == self.in_first_block(s) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for MatrixShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.p, self.q)
    }
}

/// The elementary matrix `E^{rs}(e_k)`: rows and columns are 1-based, the
/// base-algebra index `k` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryIndex {
    pub row: usize,
    pub col: usize,
    pub k: usize,
}

/// `M_{p,q}(A)` together with the data needed to go back and forth between
/// its basis and elementary matrices.
///
/// Basis order is lexicographic in `(row, col, k)`.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    shape: MatrixShape,
    base: Arc<SuperAlgebra>,
    algebra: Arc<SuperAlgebra>,
}

/// Builds `M_{p,q}(A)`, refusing invalid `A` and results above `cap`.
pub fn matrix_algebra(
    base: &SuperAlgebra,
    shape: MatrixShape,
    cap: usize,
) -> Result<MatrixAlgebra, AlgebraError> {
    let report = validate(base);
    if !report.is_valid() {
        return Err(AlgebraError::InvalidBase(report.summary()));
    }
    let n = shape.size();
    let d = base.dim();
    let dim = n
        .checked_mul(n)
        .and_then(|nn| nn.checked_mul(d))
        .ok_or(AlgebraError::TooLarge {
            dim: usize::MAX,
            cap,
        })?;
    if dim > cap {
        return Err(AlgebraError::TooLarge { dim, cap });
    }
    let index = |r: usize, s: usize, k: usize| ((r - 1) * n + (s - 1)) * d + k;

    let mut labels = Vec::with_capacity(dim);
    let mut parity = Vec::with_capacity(dim);
    for r in 1..=n {
        for s in 1..=n {
            for k in 0..d {
                labels.push(format!("E{r},{s}({})", base.basis_labels()[k]));
                parity.push(base.parity(k) + shape.block_offset(r, s));
            }
        }
    }
    let mut unit = vec![BigRational::zero(); dim];
    for r in 1..=n {
        for (k, c) in base.unit().iter().enumerate() {
            unit[index(r, r, k)] = c.clone();
        }
    }
    let mut constants = Vec::new();
    for r in 1..=n {
        for s in 1..=n {
            for v in 1..=n {
                for (i, j, k, c) in base.structure_constants() {
                    constants.push((index(r, s, i), index(s, v, j), index(r, v, k), c.clone()));
                }
            }
        }
    }
    let name = format!("M_{{{},{}}}({})", shape.p, shape.q, base.name());
    let algebra = SuperAlgebra::new(name, labels, parity, unit, constants)?;
    Ok(MatrixAlgebra {
        shape,
        base: Arc::new(base.clone()),
        algebra: Arc::new(algebra),
    })
}

impl MatrixAlgebra {
    pub fn shape(&self) -> MatrixShape {
        self.shape
    }

    pub fn base(&self) -> &Arc<SuperAlgebra> {
        &self.base
    }

    pub fn algebra(&self) -> &Arc<SuperAlgebra> {
        &self.algebra
    }

    pub fn index(&self, e: ElementaryIndex) -> Result<usize, AlgebraError> {
        let n = self.shape.size();
        let d = self.base.dim();
        if !(1..=n).contains(&e.row) || !(1..=n).contains(&e.col) || e.k >= d {
            return Err(AlgebraError::Malformed(format!(
                "elementary index ({}, {}, {}) outside size {n} over dimension {d}",
                e.row,
                e.col,
                e.k + 1
            )));
        }
        Ok(((e.row - 1) * n + (e.col - 1)) * d + e.k)
    }

    pub fn elementary(&self, index: usize) -> ElementaryIndex {
        let n = self.shape.size();
        let d = self.base.dim();
        let k = index % d;
        let rs = index / d;
        ElementaryIndex {
            row: rs / n + 1,
            col: rs % n + 1,
            k,
        }
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement::unit(self.algebra.clone())
    }

    /// `str M = tr M_11 + (-1)^{1+|M|} tr M_22`, applied separately to the
    /// even and odd parts of `M`.
    pub fn supertrace(&self, m: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !Arc::ptr_eq(m.algebra(), &self.algebra) && **m.algebra() != *self.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let d = self.base.dim();
        let mut out = vec![BigRational::zero(); d];
        for (idx, c) in m.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.elementary(idx);
            if e.row != e.col {
                continue;
            }
            if self.shape.in_first_block(e.row) || self.base.parity(e.k).is_odd() {
                out[e.k] += c;
            } else {
                out[e.k] -= c;
            }
        }
        AlgebraElement::new(self.base.clone(), out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_rational;
    use crate::superalgebra::{builtin, Builtin};

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn mat(base: Builtin, p: usize, q: usize) -> MatrixAlgebra {
        matrix_algebra(
            &builtin(base).unwrap(),
            MatrixShape::new(p, q).unwrap(),
            DEFAULT_ALGEBRA_CAP,
        )
        .unwrap()
    }

    fn elem(m: &MatrixAlgebra, row: usize, col: usize, k: usize) -> AlgebraElement {
        AlgebraElement::basis(
            m.algebra().clone(),
            m.index(ElementaryIndex { row, col, k }).unwrap(),
        )
    }

    #[test]
    fn parities_follow_block_rule() {
        let m = mat(Builtin::Ground, 1, 1);
        assert_eq!(m.algebra().dim(), 4);
        assert_eq!(
            m.algebra().parities(),
            &[Parity::Even, Parity::Odd, Parity::Odd, Parity::Even]
        );
        let m = mat(Builtin::Grassmann(1), 1, 1);
        assert_eq!(m.algebra().dim(), 8);
        let e12_theta = m
            .index(ElementaryIndex {
                row: 1,
                col: 2,
                k: 1,
            })
            .unwrap();
        assert_eq!(m.algebra().parity(e12_theta), Parity::Even);
        assert_eq!(m.algebra().basis_labels()[e12_theta], "E1,2(t1)");
        let m = mat(Builtin::Grassmann(1), 2, 0);
        for i in 0..m.algebra().dim() {
            assert_eq!(m.algebra().parity(i), m.base().parity(m.elementary(i).k));
        }
    }

    #[test]
    fn products_of_elementary_matrices() {
        let m = mat(Builtin::Ground, 1, 1);
        let e12 = elem(&m, 1, 2, 0);
        let e21 = elem(&m, 2, 1, 0);
        assert_eq!(e12.multiply(&e21).unwrap(), elem(&m, 1, 1, 0));
        assert!(e21.multiply(&e21).unwrap().is_zero());
    }

    #[test]
    fn shipped_matrix_algebras_validate() {
        for (b, p, q) in [
            (Builtin::Ground, 1, 1),
            (Builtin::Ground, 2, 1),
            (Builtin::Grassmann(1), 1, 1),
            (Builtin::Clifford1, 1, 1),
            (Builtin::Grassmann(1), 2, 0),
        ] {
            let m = mat(b, p, q);
            assert_eq!(m.algebra().dim(), (p + q) * (p + q) * m.base().dim());
            assert!(validate(m.algebra()).is_valid());
        }
    }

    #[test]
    fn index_round_trip() {
        let m = mat(Builtin::Grassmann(1), 2, 1);
        for i in 0..m.algebra().dim() {
            assert_eq!(m.index(m.elementary(i)).unwrap(), i);
        }
        assert!(m
            .index(ElementaryIndex {
                row: 4,
                col: 1,
                k: 0
            })
            .is_err());
    }

    #[test]
    fn supertrace_examples() {
        for (p, q) in [(1, 1), (2, 1), (2, 0)] {
            let m = mat(Builtin::Grassmann(1), p, q);
            let s = m.supertrace(&m.identity()).unwrap();
            let expect = r(&format!("{}", p as i64 - q as i64));
            assert_eq!(s.coords(), &[expect, r("0")]);
        }
        let m = mat(Builtin::Ground, 1, 1);
        assert_eq!(
            m.supertrace(&elem(&m, 2, 2, 0)).unwrap().coords(),
            &[r("-1")]
        );
        let m = mat(Builtin::Grassmann(1), 1, 1);
        let x = elem(&m, 1, 1, 1).add(&elem(&m, 2, 2, 1)).unwrap();
        assert_eq!(m.supertrace(&x).unwrap().coords(), &[r("0"), r("2")]);
    }

    #[test]
    fn supercyclicity_on_basis_pairs() {
        let m = mat(Builtin::Grassmann(1), 1, 1);
        let a = m.algebra();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let x = AlgebraElement::basis(a.clone(), i);
                let y = AlgebraElement::basis(a.clone(), j);
                let lhs = m.supertrace(&x.multiply(&y).unwrap()).unwrap();
                let mut rhs = m.supertrace(&y.multiply(&x).unwrap()).unwrap();
                if a.parity(i).is_odd() && a.parity(j).is_odd() {
                    rhs = rhs.scale(&r("-1"));
                }
                assert_eq!(lhs, rhs, "pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn refusals() {
        let g = builtin(Builtin::Ground).unwrap();
        assert_eq!(MatrixShape::new(0, 0), Err(AlgebraError::EmptyShape));
        let err = matrix_algebra(&g, MatrixShape::new(3, 3).unwrap(), 10).unwrap_err();
        assert_eq!(err, AlgebraError::TooLarge { dim: 36, cap: 10 });
        let bad = SuperAlgebra::new(
            "bad",
            vec!["x".into()],
            vec![Parity::Even],
            vec![r("1")],
            [(0, 0, 0, r("2"))],
        )
        .unwrap();
        assert!(matches!(
            matrix_algebra(&bad, MatrixShape::new(1, 0).unwrap(), 10),
            Err(AlgebraError::InvalidBase(_))
        ));
    }
}
