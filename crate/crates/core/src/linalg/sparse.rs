use crate::par;

use super::{Field, LinalgError, Scalar};

/// Sorted list of `(index, coefficient)` pairs with no zero coefficients.
pub type SparseEntries = Vec<(usize, Scalar)>;

/// Sorts by index, sums duplicates and drops zeros.
pub fn normalize_entries(mut entries: SparseEntries) -> SparseEntries {
    if entries.len() <= 1 {
        entries.retain(|(_, c)| !c.is_zero());
        return entries;
    }
    entries.sort_by_key(|(i, _)| *i);
    let mut out: SparseEntries = Vec::with_capacity(entries.len());
    for (i, c) in entries {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = &*acc + &c,
            _ => {
                if let Some((_, acc)) = out.last() {
                    if acc.is_zero() {
                        out.pop();
                    }
                }
                out.push((i, c));
            }
        }
    }
    if let Some((_, acc)) = out.last() {
        if acc.is_zero() {
            out.pop();
        }
    }
    out
}

/// `a + factor * b` on normalized entry lists.
pub fn axpy(a: &[(usize, Scalar)], factor: &Scalar, b: &[(usize, Scalar)]) -> SparseEntries {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let c = factor * &b[j].1;
            if !c.is_zero() {
                out.push((b[j].0, c));
            }
            j += 1;
        } else {
            let c = &a[i].1 + &(factor * &b[j].1);
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A sparse vector of fixed length over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector {
    dim: usize,
    field: Field,
    entries: SparseEntries,
}

impl SparseVector {
    pub fn zero(field: Field, dim: usize) -> Self {
        SparseVector {
            dim,
            field,
            entries: Vec::new(),
        }
    }

    pub fn new(field: Field, dim: usize, entries: SparseEntries) -> Result<Self, LinalgError> {
        for (i, c) in &entries {
            if *i >= dim {
                return Err(LinalgError::IndexOutOfRange {
                    index: *i,
                    bound: dim,
                });
            }
            if c.field() != field {
                return Err(LinalgError::MixedField(field, c.field()));
            }
        }
        Ok(SparseVector {
            dim,
            field,
            entries: normalize_entries(entries),
        })
    }

    pub(crate) fn from_normalized(field: Field, dim: usize, entries: SparseEntries) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector {
            dim,
            field,
            entries,
        }
    }

    pub fn from_dense(field: Field, values: &[Scalar]) -> Result<Self, LinalgError> {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        SparseVector::new(field, values.len(), entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> SparseEntries {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::zero(self.field),
        }
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(self.field); self.dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }
}

/// Sparse matrix stored column by column.
///
/// Every stored entry is nonzero and in range, so structural equality is
/// entry-map equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseLinearMap {
    n_rows: usize,
    n_cols: usize,
    field: Field,
    cols: Vec<SparseEntries>,
}

impl SparseLinearMap {
    pub fn zero(field: Field, n_rows: usize, n_cols: usize) -> Self {
        SparseLinearMap {
            n_rows,
            n_cols,
            field,
            cols: vec![Vec::new(); n_cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let cols = (0..n).map(|i| vec![(i, Scalar::one(field))]).collect();
        SparseLinearMap {
            n_rows: n,
            n_cols: n,
            field,
            cols,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        field: Field,
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, LinalgError> {
        let mut cols: Vec<SparseEntries> = vec![Vec::new(); n_cols];
        for (r, c, v) in triplets {
            if r >= n_rows {
                return Err(LinalgError::IndexOutOfRange {
                    index: r,
                    bound: n_rows,
                });
            }
            if c >= n_cols {
                return Err(LinalgError::IndexOutOfRange {
                    index: c,
                    bound: n_cols,
                });
            }
            if v.field() != field {
                return Err(LinalgError::MixedField(field, v.field()));
            }
            cols[c].push((r, v));
        }
        let cols = cols.into_iter().map(normalize_entries).collect();
        Ok(SparseLinearMap {
            n_rows,
            n_cols,
            field,
            cols,
        })
    }

    pub fn from_dense(field: Field, rows: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                triplets.push((r, c, v.clone()));
            }
        }
        SparseLinearMap::from_triplets(field, n_rows, n_cols, triplets)
    }

    /// Builds a matrix whose column `j` is `column(j)`. Columns are generated
    /// in parallel when the `parallel` feature is on; the result does not
    /// depend on scheduling.
    pub fn from_column_fn<F>(field: Field, n_rows: usize, n_cols: usize, column: F) -> Self
    where
        F: Fn(usize) -> SparseEntries + Sync + Send,
    {
        let cols = par::map_range(n_cols, |j| {
            let col = normalize_entries(column(j));
            debug_assert!(col.iter().all(|(r, c)| *r < n_rows && c.field() == field));
            col
        });
        SparseLinearMap {
            n_rows,
            n_cols,
            field,
            cols,
        }
    }

    pub(crate) fn from_columns_unchecked(
        field: Field,
        n_rows: usize,
        cols: Vec<SparseEntries>,
    ) -> Self {
        SparseLinearMap {
            n_rows,
            n_cols: cols.len(),
            field,
            cols,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseEntries] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.cols[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(pos) => self.cols[c][pos].1.clone(),
            Err(_) => Scalar::zero(self.field),
        }
    }

    /// All stored entries as `(row, col, value)`, column-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Image of a sparse coordinate list.
    pub fn apply_entries(&self, x: &[(usize, Scalar)]) -> SparseEntries {
        let mut acc = Vec::new();
        for (j, xj) in x {
            for (i, v) in &self.cols[*j] {
                acc.push((*i, v * xj));
            }
        }
        normalize_entries(acc)
    }

    pub fn apply(&self, x: &SparseVector) -> Result<SparseVector, LinalgError> {
        if x.dim() != self.n_cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n_cols,
                found: x.dim(),
            });
        }
        if x.field() != self.field {
            return Err(LinalgError::MixedField(self.field, x.field()));
        }
        Ok(SparseVector::from_normalized(
            self.field,
            self.n_rows,
            self.apply_entries(x.entries()),
        ))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &SparseLinearMap) -> Result<SparseLinearMap, LinalgError> {
        if self.n_cols != rhs.n_rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n_cols,
                found: rhs.n_rows,
            });
        }
        if self.field != rhs.field {
            return Err(LinalgError::MixedField(self.field, rhs.field));
        }
        let cols = par::map_range(rhs.n_cols, |j| self.apply_entries(&rhs.cols[j]));
        Ok(SparseLinearMap::from_columns_unchecked(
            self.field,
            self.n_rows,
            cols,
        ))
    }

    fn check_same_shape(&self, rhs: &SparseLinearMap) -> Result<(), LinalgError> {
        if (self.n_rows, self.n_cols) != (rhs.n_rows, rhs.n_cols) {
            return Err(LinalgError::ShapeMismatch {
                left: (self.n_rows, self.n_cols),
                right: (rhs.n_rows, rhs.n_cols),
            });
        }
        if self.field != rhs.field {
            return Err(LinalgError::MixedField(self.field, rhs.field));
        }
        Ok(())
    }

    /// `self + factor * rhs`.
    pub fn add_scaled(
        &self,
        factor: &Scalar,
        rhs: &SparseLinearMap,
    ) -> Result<SparseLinearMap, LinalgError> {
        self.check_same_shape(rhs)?;
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| axpy(a, factor, b))
            .collect();
        Ok(SparseLinearMap::from_columns_unchecked(
            self.field,
            self.n_rows,
            cols,
        ))
    }

    pub fn add(&self, rhs: &SparseLinearMap) -> Result<SparseLinearMap, LinalgError> {
        self.add_scaled(&Scalar::one(self.field), rhs)
    }

    pub fn sub(&self, rhs: &SparseLinearMap) -> Result<SparseLinearMap, LinalgError> {
        self.add_scaled(&Scalar::from_i64(self.field, -1), rhs)
    }

    pub fn scale(&self, factor: &Scalar) -> SparseLinearMap {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| (*r, v * factor))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseLinearMap::from_columns_unchecked(self.field, self.n_rows, cols)
    }

    pub fn transpose(&self) -> SparseLinearMap {
        let mut cols: Vec<SparseEntries> = vec![Vec::new(); self.n_rows];
        for (r, c, v) in self.triplets() {
            cols[r].push((c, v.clone()));
        }
        SparseLinearMap::from_columns_unchecked(self.field, self.n_cols, cols)
    }

    /// Reinterprets a rational matrix over another field.
    pub fn to_field(&self, field: Field) -> Result<SparseLinearMap, LinalgError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let mut cols = Vec::with_capacity(self.n_cols);
        for col in &self.cols {
            let mut out = Vec::with_capacity(col.len());
            for (r, v) in col {
                let q = v
                    .as_rational()
                    .ok_or(LinalgError::MixedField(Field::Rational, v.field()))?;
                let s = Scalar::from_rational(field, q)?;
                if !s.is_zero() {
                    out.push((*r, s));
                }
            }
            cols.push(out);
        }
        Ok(SparseLinearMap::from_columns_unchecked(
            field,
            self.n_rows,
            cols,
        ))
    }

    /// First `(row, col)` where the two matrices disagree.
    pub fn first_difference(
        &self,
        rhs: &SparseLinearMap,
    ) -> Result<Option<(usize, usize)>, LinalgError> {
        self.check_same_shape(rhs)?;
        let minus_one = Scalar::from_i64(self.field, -1);
        Ok(self
            .cols
            .iter()
            .zip(&rhs.cols)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(j, (a, b))| (axpy(a, &minus_one, b)[0].0, j)))
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&SparseLinearMap]) -> Result<SparseLinearMap, LinalgError> {
        let first = blocks.first().ok_or(LinalgError::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        let mut cols: Vec<SparseEntries> = vec![Vec::new(); first.n_cols];
        let mut offset = 0;
        for b in blocks {
            if b.n_cols != first.n_cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: first.n_cols,
                    found: b.n_cols,
                });
            }
            if b.field != first.field {
                return Err(LinalgError::MixedField(first.field, b.field));
            }
            for (j, col) in b.cols.iter().enumerate() {
                cols[j].extend(col.iter().map(|(r, v)| (r + offset, v.clone())));
            }
            offset += b.n_rows;
        }
        Ok(SparseLinearMap::from_columns_unchecked(
            first.field,
            offset,
            cols,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, v)
    }

    #[test]
    fn triplets_are_merged_and_pruned() {
        let m = SparseLinearMap::from_triplets(
            Field::Rational,
            2,
            2,
            vec![(0, 0, q(1)), (0, 0, q(-1)), (1, 0, q(2)), (1, 1, q(0))],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), q(2));
        assert!(m.get(0, 0).is_zero());
    }

    #[test]
    fn out_of_range_and_mixed_field_are_errors() {
        let err = SparseLinearMap::from_triplets(Field::Rational, 1, 1, vec![(1, 0, q(1))]);
        assert!(matches!(err, Err(LinalgError::IndexOutOfRange { .. })));
        let err = SparseLinearMap::from_triplets(
            Field::Rational,
            1,
            1,
            vec![(0, 0, Scalar::one(Field::Prime(3)))],
        );
        assert!(matches!(err, Err(LinalgError::MixedField(..))));
    }

    #[test]
    fn composition_checks_inner_dimension() {
        let a = SparseLinearMap::identity(Field::Rational, 2);
        let b = SparseLinearMap::zero(Field::Rational, 3, 3);
        assert!(a.compose(&b).is_err());
        let c = SparseLinearMap::from_dense(Field::Rational, &[vec![q(1), q(2)], vec![q(3), q(4)]])
            .unwrap();
        let sq = c.compose(&c).unwrap();
        assert_eq!(sq.get(0, 0), q(7));
        assert_eq!(sq.get(1, 1), q(22));
        assert_eq!(c.transpose().get(0, 1), q(3));
        assert!(c.sub(&c).unwrap().is_zero());
    }

    #[test]
    fn field_conversion_reduces_entries() {
        let c = SparseLinearMap::from_dense(Field::Rational, &[vec![q(3), q(4)]]).unwrap();
        let m = c.to_field(Field::Prime(3)).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), Scalar::from_i64(Field::Prime(3), 1));
    }
}
