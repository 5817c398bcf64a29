//! The generalized supertrace `Str: C_*(M_{p,q}(A)) -> C_*(A)`, the corner
//! inclusion going back, verification that `Str` commutes with every
//! structural operator of the cyclic bicomplex, and the maps it induces on
//! Hochschild and cyclic homology.

use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chain::{
    cyclic_homology, hochschild_homology, ChainError, HochschildComplex, Op, Theory,
};
use crate::linalg::{
    induced_on_homology, normalize_entries, rank, Field, Scalar, SparseEntries, SparseLinearMap,
};
use crate::par;
use crate::report::{to_canonical_json, AlgebraRef};
use crate::superalgebra::{MatrixAlgebra, Parity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("the corner inclusion needs p >= 1")]
    NoEvenCorner,
    #[error("induced maps need a passing commutation report for this algebra, shape and field through degree {needed}")]
    CommutationNotVerified { needed: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

impl From<crate::linalg::LinalgError> for MorphismError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        MorphismError::Chain(e.into())
    }
}

/// `Str` and `inc` between the Hochschild complexes of `M_{p,q}(A)` and `A`.
#[derive(Clone, Debug)]
pub struct SupertraceMap {
    matrix: MatrixAlgebra,
    source: Arc<HochschildComplex>,
    target: Arc<HochschildComplex>,
}

impl SupertraceMap {
    pub fn new(matrix: MatrixAlgebra, field: Field, cap: usize) -> Result<Self, MorphismError> {
        let source = Arc::new(HochschildComplex::new(
            matrix.algebra().clone(),
            field,
            cap,
        )?);
        let target = Arc::new(HochschildComplex::new(matrix.base().clone(), field, cap)?);
        Ok(SupertraceMap {
            matrix,
            source,
            target,
        })
    }

    pub fn matrix(&self) -> &MatrixAlgebra {
        &self.matrix
    }

    /// Complex of `M_{p,q}(A)`.
    pub fn source(&self) -> &Arc<HochschildComplex> {
        &self.source
    }

    /// Complex of `A`.
    pub fn target(&self) -> &Arc<HochschildComplex> {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    /// `Str` on basis tuple `index` of `C_n(M_{p,q}(A))`.
    ///
    /// Zero unless the row/column indices close up into a cycle
    /// `E^{r_0 r_1}(a_0) ⊗ E^{r_1 r_2}(a_1) ⊗ .. ⊗ E^{r_n r_0}(a_n)`; then
    /// `a_0 ⊗ .. ⊗ a_n`, negated when `r_0 > p` and `1 + Σ|a_i|` is odd.
    pub fn str_basis(&self, n: usize, index: usize) -> Option<(usize, Scalar)> {
        let tuple = self.source.decode(n, index);
        let elems: Vec<_> = tuple.iter().map(|&i| self.matrix.elementary(i)).collect();
        for j in 0..=n {
            if elems[j].col != elems[(j + 1) % (n + 1)].row {
                return None;
            }
        }
        let base = self.matrix.base();
        let ks: Vec<usize> = elems.iter().map(|e| e.k).collect();
        let one = Scalar::one(self.field());
        let coeff = if self.matrix.shape().in_first_block(elems[0].row) {
            one
        } else {
            let parity: Parity = ks.iter().map(|&k| base.parity(k)).sum();
            if parity.is_odd() {
                one
            } else {
                -one
            }
        };
        Some((self.target.encode(&ks), coeff))
    }

    pub fn str_apply(&self, n: usize, x: &[(usize, Scalar)]) -> SparseEntries {
        let out = x
            .iter()
            .filter_map(|(i, c)| self.str_basis(n, *i).map(|(j, s)| (j, &s * c)))
            .collect();
        normalize_entries(out)
    }

    pub fn str_matrix(&self, n: usize) -> Result<SparseLinearMap, MorphismError> {
        let src = self.source.enumerable_dim(n)?;
        let dst = self.target.enumerable_dim(n)?;
        Ok(SparseLinearMap::from_column_fn(
            self.field(),
            dst,
            src,
            |j| self.str_basis(n, j).into_iter().collect(),
        ))
    }

    /// `Str` cell by cell on a chain of the total complex.
    pub fn str_total_apply(
        &self,
        m: usize,
        x: &[(usize, Scalar)],
    ) -> Result<SparseEntries, MorphismError> {
        let parts = self
            .source
            .total_split(m, x)?
            .into_iter()
            .map(|(i, local)| (i, self.str_apply(m - i, &local)))
            .collect();
        Ok(self.target.total_join(m, parts)?)
    }

    pub fn str_total_matrix(&self, m: usize) -> Result<SparseLinearMap, MorphismError> {
        for j in 0..=m {
            self.source.enumerable_dim(j)?;
        }
        let src = self.source.total_dim(m as isize)?;
        let dst = self.target.total_dim(m as isize)?;
        let field = self.field();
        Ok(SparseLinearMap::from_column_fn(field, dst, src, |j| {
            self.str_total_apply(m, &[(j, Scalar::one(field))])
                .expect("degree checked")
        }))
    }

    /// `a_0 ⊗ .. ⊗ a_n -> E^{11}(a_0) ⊗ .. ⊗ E^{11}(a_n)`.
    pub fn inc_matrix(&self, n: usize) -> Result<SparseLinearMap, MorphismError> {
        if self.matrix.shape().p() == 0 {
            return Err(MorphismError::NoEvenCorner);
        }
        let src = self.target.enumerable_dim(n)?;
        let dst = self.source.dim(n)?;
        let field = self.field();
        Ok(SparseLinearMap::from_column_fn(field, dst, src, |j| {
            let corner: Vec<usize> = self
                .target
                .decode(n, j)
                .iter()
                .map(|&k| {
                    self.matrix
                        .index(crate::superalgebra::ElementaryIndex { row: 1, col: 1, k })
                        .expect("corner in range")
                })
                .collect();
            vec![(self.source.encode(&corner), Scalar::one(field))]
        }))
    }

    /// Checks `Str ∘ op = op ∘ Str` column by column on the full source
    /// basis, for every operator and degree `n <= n_max` (total degree for
    /// `D`). Target spaces are only addressed, never enumerated.
    pub fn verify_bicomplex_morphism(
        &self,
        n_max: usize,
    ) -> Result<CommutationReport, MorphismError> {
        let mut entries = Vec::new();
        let ops = [Op::B, Op::BPrime, Op::T, Op::N, Op::ConnesB];
        for op in ops {
            for n in 0..=n_max {
                if matches!(op, Op::B | Op::BPrime) && n == 0 {
                    continue;
                }
                let target_n = (n as isize + op.shift()) as usize;
                let dim = self.source.enumerable_dim(n)?;
                let entry = self.commutation_entry(
                    &op.name(),
                    n,
                    dim,
                    |j| {
                        let e = [(j, Scalar::one(self.field()))];
                        let lhs = self.str_apply(target_n, &self.source.apply(op, n, &e)?);
                        let rhs = self.target.apply(op, n, &self.str_apply(n, &e))?;
                        Ok(difference(lhs, rhs))
                    },
                    |j| self.source.tuple_label(n, j),
                    self.target.dim(target_n)?,
                )?;
                entries.push(entry);
            }
        }
        for m in 1..=n_max {
            self.source.enumerable_dim(m)?;
            let dim = self.source.total_dim(m as isize)?;
            let entry = self.commutation_entry(
                "D",
                m,
                dim,
                |j| {
                    let e = [(j, Scalar::one(self.field()))];
                    let lhs = self.str_total_apply(m - 1, &self.source.total_apply(m, &e)?)?;
                    let rhs = self.target.total_apply(m, &self.str_total_apply(m, &e)?)?;
                    Ok(difference(lhs, rhs))
                },
                |j| self.total_label(m, j),
                self.target.total_dim(m as isize - 1)?,
            )?;
            entries.push(entry);
        }
        Ok(CommutationReport::new(self, n_max, entries))
    }

    fn total_label(&self, m: usize, j: usize) -> String {
        let cells = self.source.total_cells(m).expect("checked");
        let pos = cells.partition_point(|c| c.offset <= j) - 1;
        let cell = cells[pos];
        format!(
            "cell ({}, {}) {}",
            cell.column,
            cell.row,
            self.source.tuple_label(cell.row, j - cell.offset)
        )
    }

    fn commutation_entry<F, L>(
        &self,
        op: &str,
        n: usize,
        dim: usize,
        defect: F,
        label: L,
        target_dim: usize,
    ) -> Result<CommutationEntry, MorphismError>
    where
        F: Fn(usize) -> Result<SparseEntries, MorphismError> + Sync + Send,
        L: Fn(usize) -> String,
    {
        let cols = par::map_range(dim, &defect);
        let cols = cols.into_iter().collect::<Result<Vec<_>, _>>()?;
        let witness = cols.iter().position(|c| !c.is_empty()).map(label);
        let defect_rank = if witness.is_some() {
            rank(&SparseLinearMap::from_column_fn(
                self.field(),
                target_dim,
                dim,
                |j| cols[j].clone(),
            ))
        } else {
            0
        };
        Ok(CommutationEntry {
            op: op.to_string(),
            n,
            pass: defect_rank == 0,
            defect_rank,
            witness,
        })
    }
}

fn difference(lhs: SparseEntries, rhs: SparseEntries) -> SparseEntries {
    let mut out = lhs;
    out.extend(rhs.into_iter().map(|(i, c)| (i, -c)));
    normalize_entries(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationEntry {
    pub op: String,
    pub n: usize,
    pub pass: bool,
    pub defect_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of checking `Str ∘ op = op ∘ Str` for every operator and degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationReport {
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    pub shape: [usize; 2],
    pub field: String,
    pub max_degree: usize,
    pub entries: Vec<CommutationEntry>,
    pub pass: bool,
}

impl CommutationReport {
    fn new(map: &SupertraceMap, max_degree: usize, entries: Vec<CommutationEntry>) -> Self {
        let shape = map.matrix.shape();
        CommutationReport {
            source: AlgebraRef::from(&**map.matrix.algebra()),
            target: AlgebraRef::from(&**map.matrix.base()),
            shape: [shape.p(), shape.q()],
            field: map.field().to_string(),
            max_degree,
            pass: entries.iter().all(|e| e.pass),
            entries,
        }
    }

    /// Hex SHA-256 of the canonical JSON of this report.
    pub fn hash(&self) -> String {
        Sha256::digest(to_canonical_json(self).as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn covers(&self, map: &SupertraceMap, needed: usize) -> bool {
        let shape = map.matrix.shape();
        self.pass
            && self.max_degree >= needed
            && self.shape == [shape.p(), shape.q()]
            && self.field == map.field().to_string()
            && self.source.hash == map.matrix.algebra().canonical_hash()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoDegree {
    pub n: usize,
    pub betti_matrix_algebra: usize,
    pub betti_base: usize,
    pub induced_rank: usize,
    pub iso: bool,
}

/// Maps induced by `Str` on homology, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub shape: [usize; 2],
    pub theory: Theory,
    pub field: String,
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    /// The even corner used by the quasi-inverse inclusion.
    pub corner: [usize; 2],
    pub degrees: Vec<IsoDegree>,
    pub commutation: CommutationReport,
    pub commutation_hash: String,
    pub iso: bool,
}

impl SupertraceMap {
    /// Homology of both sides through `n_max` and the matrices `Str` induces
    /// between them. Refuses unless `commutation` is a passing report for
    /// this map through degree `n_max`.
    pub fn induced_iso_report(
        &self,
        commutation: &CommutationReport,
        n_max: usize,
        theory: Theory,
    ) -> Result<IsoReport, MorphismError> {
        if !self.covers(commutation, n_max) {
            return Err(MorphismError::CommutationNotVerified { needed: n_max });
        }
        let (src, dst, maps) = match theory {
            Theory::Hc => {
                let (src, _) = cyclic_homology(self.source.clone(), n_max)?;
                let (dst, _) = cyclic_homology(self.target.clone(), n_max)?;
                let maps = (0..=n_max)
                    .map(|m| self.str_total_matrix(m))
                    .collect::<Result<Vec<_>, _>>()?;
                (src, dst, maps)
            }
            _ => {
                let src = hochschild_homology(&self.source, n_max)?;
                let dst = hochschild_homology(&self.target, n_max)?;
                let maps = (0..=n_max)
                    .map(|n| self.str_matrix(n))
                    .collect::<Result<Vec<_>, _>>()?;
                (src, dst, maps)
            }
        };
        let mut degrees = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let induced = induced_on_homology(&maps[n], &src.data[n], &dst.data[n])?;
            let r = rank(&induced);
            degrees.push(IsoDegree {
                n,
                betti_matrix_algebra: src.data[n].betti(),
                betti_base: dst.data[n].betti(),
                induced_rank: r,
                iso: induced.n_rows() == induced.n_cols() && r == induced.n_cols(),
            });
        }
        let shape = self.matrix.shape();
        Ok(IsoReport {
            shape: [shape.p(), shape.q()],
            theory: if theory == Theory::Hc {
                Theory::Hc
            } else {
                Theory::Hh
            },
            field: self.field().to_string(),
            source: AlgebraRef::from(&**self.matrix.algebra()),
            target: AlgebraRef::from(&**self.matrix.base()),
            corner: [1, 1],
            iso: degrees.iter().all(|d| d.iso),
            degrees,
            commutation_hash: commutation.hash(),
            commutation: commutation.clone(),
        })
    }

    fn covers(&self, commutation: &CommutationReport, n_max: usize) -> bool {
        commutation.covers(self, n_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::DEFAULT_CHAIN_CAP;
    use crate::superalgebra::{
        builtin, matrix_algebra, Builtin, ElementaryIndex, MatrixShape, DEFAULT_ALGEBRA_CAP,
    };

    fn map(kind: Builtin, p: usize, q: usize) -> SupertraceMap {
        let m = matrix_algebra(
            &builtin(kind).unwrap(),
            MatrixShape::new(p, q).unwrap(),
            DEFAULT_ALGEBRA_CAP,
        )
        .unwrap();
        SupertraceMap::new(m, Field::Rational, DEFAULT_CHAIN_CAP).unwrap()
    }

    fn tuple(s: &SupertraceMap, elems: &[(usize, usize, usize)]) -> usize {
        let idx: Vec<usize> = elems
            .iter()
            .map(|&(row, col, k)| s.matrix().index(ElementaryIndex { row, col, k }).unwrap())
            .collect();
        s.source().encode(&idx)
    }

    #[test]
    fn str_on_elementary_tuples() {
        let s = map(Builtin::Grassmann(1), 1, 1);
        let theta2 = s.target().encode(&[1, 1]);
        let one = Scalar::one(Field::Rational);
        assert_eq!(
            s.str_basis(1, tuple(&s, &[(1, 2, 1), (2, 1, 1)])),
            Some((theta2, one.clone()))
        );
        assert_eq!(
            s.str_basis(1, tuple(&s, &[(2, 1, 1), (1, 2, 1)])),
            Some((theta2, -one))
        );
        assert_eq!(s.str_basis(1, tuple(&s, &[(1, 1, 0), (1, 2, 0)])), None);
    }

    #[test]
    fn degree_zero_is_the_supertrace() {
        let s = map(Builtin::Grassmann(1), 2, 1);
        let a = s.matrix().algebra();
        for i in 0..a.dim() {
            let x = crate::superalgebra::AlgebraElement::basis(a.clone(), i);
            let st = s.matrix().supertrace(&x).unwrap();
            let expect: SparseEntries = st
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| (k, Scalar::Rational(c.clone())))
                .collect();
            assert_eq!(s.str_apply(0, &[(i, Scalar::one(Field::Rational))]), expect);
        }
    }

    #[test]
    fn str_after_inc_is_identity() {
        for (p, q) in [(1, 1), (2, 1)] {
            let s = map(Builtin::Grassmann(1), p, q);
            for n in 0..=2 {
                let composite = s
                    .str_matrix(n)
                    .unwrap()
                    .compose(&s.inc_matrix(n).unwrap())
                    .unwrap();
                assert_eq!(
                    composite,
                    SparseLinearMap::identity(Field::Rational, s.target().dim(n).unwrap())
                );
            }
        }
        let s = map(Builtin::Ground, 0, 2);
        assert_eq!(s.inc_matrix(0).unwrap_err(), MorphismError::NoEvenCorner);
    }

    #[test]
    fn commutes_with_everything_on_small_cases() {
        for (kind, p, q) in [
            (Builtin::Ground, 1, 1),
            (Builtin::Grassmann(1), 1, 1),
            (Builtin::Clifford1, 1, 1),
        ] {
            let report = map(kind, p, q).verify_bicomplex_morphism(2).unwrap();
            assert!(report.pass, "{:?}", report.entries.iter().find(|e| !e.pass));
        }
    }

    #[test]
    fn block_offsets_cancel_around_cycles() {
        let s = map(Builtin::Grassmann(1), 1, 1);
        let a = s.matrix().algebra().clone();
        let base = s.matrix().base().clone();
        for n in 0..=2 {
            for j in 0..s.source().dim(n).unwrap() {
                if s.str_basis(n, j).is_none() {
                    continue;
                }
                let t = s.source().decode(n, j);
                let whole: Parity = t.iter().map(|&i| a.parity(i)).sum();
                let entries: Parity = t
                    .iter()
                    .map(|&i| base.parity(s.matrix().elementary(i).k))
                    .sum();
                assert_eq!(whole, entries);
            }
        }
    }

    #[test]
    fn induced_maps_need_verification_first() {
        let s = map(Builtin::Ground, 1, 1);
        let report = s.verify_bicomplex_morphism(1).unwrap();
        assert!(matches!(
            s.induced_iso_report(&report, 3, Theory::Hh),
            Err(MorphismError::CommutationNotVerified { needed: 3 })
        ));
        let mut broken = s.verify_bicomplex_morphism(3).unwrap();
        broken.pass = false;
        assert!(s.induced_iso_report(&broken, 3, Theory::Hh).is_err());
        let good = s.verify_bicomplex_morphism(3).unwrap();
        let iso = s.induced_iso_report(&good, 3, Theory::Hc).unwrap();
        assert!(iso.iso);
        assert_eq!(
            iso.degrees.iter().map(|d| d.betti_base).collect::<Vec<_>>(),
            vec![1, 0, 1, 0]
        );
    }
}
