use std::sync::Arc;

use super::elim::{with_domain, Domain, Echelon, Inserted};
use super::{
    image_basis, kernel_basis, Field, LinalgError, LinearSolver, Scalar, SparseEntries,
    SparseLinearMap, SparseVector, SubspaceBasis,
};

/// Cycles, boundaries and chosen homology representatives at one degree.
///
/// Representatives are the cycle-basis vectors that are independent modulo
/// the boundaries, taken greedily in basis order. Any cycle decomposes
/// uniquely as a boundary plus a combination of representatives; the
/// coefficients of that combination are its homology class.
#[derive(Clone)]
pub struct HomologyBasisData {
    field: Field,
    cycles: SubspaceBasis,
    boundaries: SubspaceBasis,
    representatives: Vec<SparseVector>,
    classifier: Arc<LinearSolver>,
}

impl std::fmt::Debug for HomologyBasisData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomologyBasisData")
            .field("field", &self.field)
            .field("cycles", &self.cycles.dim())
            .field("boundaries", &self.boundaries.dim())
            .field("betti", &self.betti())
            .finish()
    }
}

impl HomologyBasisData {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.cycles.ambient_dim()
    }

    pub fn cycle_basis(&self) -> &SubspaceBasis {
        &self.cycles
    }

    pub fn boundary_basis(&self) -> &SubspaceBasis {
        &self.boundaries
    }

    pub fn betti(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[SparseVector] {
        &self.representatives
    }

    /// Coordinates of the homology class of `z` in the representative basis.
    pub fn class_of(&self, z: &[(usize, Scalar)]) -> Result<Vec<Scalar>, LinalgError> {
        let x = self
            .classifier
            .solve_entries(z)
            .ok_or(LinalgError::NotACycle)?;
        let nb = self.boundaries.dim();
        let mut coords = vec![Scalar::zero(self.field); self.betti()];
        for (i, c) in x {
            if i >= nb {
                coords[i - nb] = c;
            }
        }
        Ok(coords)
    }
}

fn pick_representatives<D: Domain>(
    dom: D,
    boundaries: &SubspaceBasis,
    cycles: &SubspaceBasis,
) -> Vec<usize> {
    let mut ech = Echelon::new(dom.clone(), false);
    for b in boundaries.vectors() {
        let (w, _) = dom.import(b.entries());
        ech.insert(w, Vec::new());
    }
    let mut picked = Vec::new();
    for (k, z) in cycles.vectors().iter().enumerate() {
        let (w, _) = dom.import(z.entries());
        if let Inserted::Pivot = ech.insert(w, Vec::new()) {
            picked.push(k);
        }
    }
    picked
}

/// Homology at `X` of `X_{n+1} --d_in--> X_n --d_out--> X_{n-1}`.
pub fn homology_data(
    d_out: &SparseLinearMap,
    d_in: &SparseLinearMap,
) -> Result<HomologyBasisData, LinalgError> {
    if d_out.n_cols() != d_in.n_rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: d_out.n_cols(),
            found: d_in.n_rows(),
        });
    }
    let composite = d_out.compose(d_in)?;
    if let Some(column) = composite.columns().iter().position(|c| !c.is_empty()) {
        return Err(LinalgError::NotAComplex { column });
    }
    let field = d_out.field();
    let cycles = kernel_basis(d_out);
    let boundaries = image_basis(d_in);
    let picked = with_domain!(field, dom => pick_representatives(dom, &boundaries, &cycles));
    let representatives: Vec<SparseVector> = picked
        .iter()
        .map(|&k| cycles.vectors()[k].clone())
        .collect();

    let generators: Vec<SparseEntries> = boundaries
        .vectors()
        .iter()
        .chain(&representatives)
        .map(|v| v.entries().to_vec())
        .collect();
    let gen_matrix =
        SparseLinearMap::from_columns_unchecked(field, cycles.ambient_dim(), generators);
    let classifier = Arc::new(LinearSolver::new(&gen_matrix));

    Ok(HomologyBasisData {
        field,
        cycles,
        boundaries,
        representatives,
        classifier,
    })
}

/// Matrix of the map `H(src) -> H(dst)` induced by `f` in the representative
/// bases, shaped `betti(dst) × betti(src)`.
///
/// Fails unless `f` sends every source cycle to a target cycle and every
/// source boundary to a target boundary.
pub fn induced_on_homology(
    f: &SparseLinearMap,
    src: &HomologyBasisData,
    dst: &HomologyBasisData,
) -> Result<SparseLinearMap, LinalgError> {
    if f.n_cols() != src.ambient_dim() || f.n_rows() != dst.ambient_dim() {
        return Err(LinalgError::ShapeMismatch {
            left: (f.n_rows(), f.n_cols()),
            right: (dst.ambient_dim(), src.ambient_dim()),
        });
    }
    if f.field() != src.field() || f.field() != dst.field() {
        return Err(LinalgError::MixedField(f.field(), dst.field()));
    }
    for (index, z) in src.cycle_basis().vectors().iter().enumerate() {
        if dst.class_of(&f.apply_entries(z.entries())).is_err() {
            return Err(LinalgError::NotAChainMap {
                kind: "cycles",
                index,
            });
        }
    }
    for (index, b) in src.boundary_basis().vectors().iter().enumerate() {
        match dst.class_of(&f.apply_entries(b.entries())) {
            Ok(c) if c.iter().all(Scalar::is_zero) => {}
            _ => {
                return Err(LinalgError::NotAChainMap {
                    kind: "boundaries",
                    index,
                })
            }
        }
    }
    let mut triplets = Vec::new();
    for (j, z) in src.representatives().iter().enumerate() {
        let class = dst.class_of(&f.apply_entries(z.entries()))?;
        for (i, c) in class.into_iter().enumerate() {
            triplets.push((i, j, c));
        }
    }
    SparseLinearMap::from_triplets(f.field(), dst.betti(), src.betti(), triplets)
}
