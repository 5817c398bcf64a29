use std::sync::Arc;

use super::{ChainError, HochschildComplex, Op};
use crate::linalg::{normalize_entries, Scalar, SparseEntries, SparseLinearMap};
use crate::par;

/// Cell `(i, m - i)` of total degree `m`: its column and coordinate range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub column: usize,
    pub row: usize,
    pub offset: usize,
    pub dim: usize,
}

impl HochschildComplex {
    /// Cells of `Tot_m` in column order. Column `i` holds `C_{m-i}`.
    pub fn total_cells(&self, m: usize) -> Result<Vec<Cell>, ChainError> {
        let mut offset = 0usize;
        let mut cells = Vec::with_capacity(m + 1);
        for column in 0..=m {
            let row = m - column;
            let dim = self.dim(row)?;
            cells.push(Cell {
                column,
                row,
                offset,
                dim,
            });
            offset = offset
                .checked_add(dim)
                .ok_or(ChainError::Overflow { degree: m })?;
        }
        Ok(cells)
    }

    pub fn total_dim(&self, m: isize) -> Result<usize, ChainError> {
        if m < 0 {
            return Ok(0);
        }
        Ok(self.total_cells(m as usize)?.iter().map(|c| c.dim).sum())
    }

    /// Splits a chain of `Tot_m` into per-column pieces in local coordinates.
    pub fn total_split(
        &self,
        m: usize,
        x: &[(usize, Scalar)],
    ) -> Result<Vec<(usize, SparseEntries)>, ChainError> {
        let cells = self.total_cells(m)?;
        let mut parts: Vec<(usize, SparseEntries)> = Vec::new();
        for (index, c) in x {
            let pos = cells.partition_point(|cell| cell.offset <= *index) - 1;
            let cell = &cells[pos];
            match parts.last_mut() {
                Some((col, entries)) if *col == cell.column => {
                    entries.push((index - cell.offset, c.clone()))
                }
                _ => parts.push((cell.column, vec![(index - cell.offset, c.clone())])),
            }
        }
        Ok(parts)
    }

    /// Inverse of [`total_split`](Self::total_split), summing repeated columns.
    pub fn total_join(
        &self,
        m: usize,
        parts: Vec<(usize, SparseEntries)>,
    ) -> Result<SparseEntries, ChainError> {
        let cells = self.total_cells(m)?;
        let mut out = Vec::new();
        for (column, entries) in parts {
            let offset = cells[column].offset;
            out.extend(entries.into_iter().map(|(i, c)| (i + offset, c)));
        }
        Ok(normalize_entries(out))
    }

    /// The total differential on a chain of `Tot_m`.
    ///
    /// On column `i` it is the horizontal map into column `i - 1` (`1 - t`
    /// from odd columns, `N` from even ones) plus `(-1)^i` times the vertical
    /// map (`b` on even columns, `b'` on odd ones).
    pub fn total_apply(
        &self,
        m: usize,
        x: &[(usize, Scalar)],
    ) -> Result<SparseEntries, ChainError> {
        if m == 0 {
            return Ok(Vec::new());
        }
        let mut parts = Vec::new();
        for (i, local) in self.total_split(m, x)? {
            let j = m - i;
            if j >= 1 {
                let vertical = if i % 2 == 0 { Op::B } else { Op::BPrime };
                let mut v = self.apply(vertical, j, &local)?;
                if i % 2 == 1 {
                    v.iter_mut().for_each(|(_, c)| *c = -&*c);
                }
                parts.push((i, v));
            }
            if i >= 1 {
                let horizontal = if i % 2 == 1 { Op::OneMinusT } else { Op::N };
                parts.push((i - 1, self.apply(horizontal, j, &local)?));
            }
        }
        self.total_join(m - 1, parts)
    }
}

/// The total complex of the cyclic bicomplex through a top degree, with
/// every differential materialized and `D∘D = 0` verified.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    complex: Arc<HochschildComplex>,
    diffs: Vec<SparseLinearMap>,
}

impl TotalComplex {
    /// Builds `D_m: Tot_m -> Tot_{m-1}` for `m <= top`.
    pub fn new(complex: Arc<HochschildComplex>, top: usize) -> Result<Self, ChainError> {
        for j in 0..=top {
            complex.enumerable_dim(j)?;
        }
        let mut diffs = Vec::with_capacity(top + 1);
        for m in 0..=top {
            let src = complex.total_dim(m as isize)?;
            let dst = complex.total_dim(m as isize - 1)?;
            let d = SparseLinearMap::from_column_fn(complex.field(), dst, src, |col| {
                let one = Scalar::one(complex.field());
                complex
                    .total_apply(m, &[(col, one)])
                    .expect("degree checked")
            });
            diffs.push(d);
        }
        let total = TotalComplex { complex, diffs };
        for m in 2..=top {
            total.check_square(m)?;
        }
        Ok(total)
    }

    fn check_square(&self, m: usize) -> Result<(), ChainError> {
        let square = self.diffs[m - 1].compose(&self.diffs[m])?;
        let bad = par::map_range(square.n_cols(), |col| !square.column(col).is_empty());
        if let Some(col) = bad.iter().position(|&b| b) {
            let cells = self.complex.total_cells(m)?;
            let pos = cells.partition_point(|c| c.offset <= col) - 1;
            let cell = cells[pos];
            let witness = format!(
                "cell ({}, {}) tuple {}",
                cell.column,
                cell.row,
                self.complex.tuple_label(cell.row, col - cell.offset)
            );
            return Err(ChainError::NotAComplex { degree: m, witness });
        }
        Ok(())
    }

    pub fn complex(&self) -> &Arc<HochschildComplex> {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.diffs.len() - 1
    }

    pub fn dim(&self, m: usize) -> usize {
        self.diffs[m].n_cols()
    }

    /// `D_m: Tot_m -> Tot_{m-1}`.
    pub fn differential(&self, m: usize) -> &SparseLinearMap {
        &self.diffs[m]
    }
}
