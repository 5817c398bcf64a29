//! Exact scalars and sparse linear algebra: rank, kernels, images, solving
//! and maps induced on homology.

pub(crate) mod elim;
mod homology;
mod scalar;
mod sparse;

use thiserror::Error;

use elim::{with_domain, Domain, Echelon, Inserted};

pub use homology::{homology_data, induced_on_homology, HomologyBasisData};
pub use scalar::{format_rational, parse_rational, Field, Scalar, DEFAULT_PRIME, MAX_PRIME};
pub use sparse::{axpy, normalize_entries, SparseEntries, SparseLinearMap, SparseVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{value} has no image modulo {modulus}")]
    NotRepresentable { value: String, modulus: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: {0} and {1}")]
    MixedField(Field, Field),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("composite of differentials is nonzero on column {column}")]
    NotAComplex { column: usize },
    #[error("map does not respect {kind} (basis vector {index})")]
    NotAChainMap { kind: &'static str, index: usize },
    #[error("vector is not a cycle")]
    NotACycle,
}

/// Rank over the matrix's own field.
pub fn rank(m: &SparseLinearMap) -> usize {
    with_domain!(m.field(), dom => {
        let mut ech = Echelon::new(dom.clone(), false);
        for col in m.columns() {
            let (v, _) = dom.import(col);
            ech.insert(v, Vec::new());
        }
        ech.rank()
    })
}

/// A subspace given by a basis in reduced row-echelon form: pivots (first
/// nonzero index) strictly increase, pivot entries are one, and every other
/// basis vector vanishes at each pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    field: Field,
    vectors: Vec<SparseVector>,
}

impl SubspaceBasis {
    pub fn from_vectors(
        field: Field,
        ambient_dim: usize,
        vectors: &[SparseVector],
    ) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.dim() != ambient_dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.dim(),
                });
            }
            if v.field() != field {
                return Err(LinalgError::MixedField(field, v.field()));
            }
        }
        let cols: Vec<&[(usize, Scalar)]> = vectors.iter().map(|v| v.entries()).collect();
        Ok(Self::from_entries(field, ambient_dim, &cols))
    }

    pub(crate) fn from_entries(
        field: Field,
        ambient_dim: usize,
        vectors: &[&[(usize, Scalar)]],
    ) -> Self {
        let rows = with_domain!(field, dom => {
            let mut ech = Echelon::new(dom.clone(), false);
            for v in vectors {
                let (w, _) = dom.import(v);
                ech.insert(w, Vec::new());
            }
            ech.into_rref()
        });
        let vectors = rows
            .into_iter()
            .map(|r| SparseVector::from_normalized(field, ambient_dim, r))
            .collect();
        SubspaceBasis {
            ambient_dim,
            field,
            vectors,
        }
    }

    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            field,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.entries()[0].0).collect()
    }

    /// Coordinates of `v` in this basis, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<Vec<Scalar>> {
        let mut rest: SparseEntries = v.to_vec();
        let mut coords = Vec::with_capacity(self.vectors.len());
        for b in &self.vectors {
            let pivot = b.entries()[0].0;
            let c = match rest.binary_search_by_key(&pivot, |(i, _)| *i) {
                Ok(pos) => rest[pos].1.clone(),
                Err(_) => Scalar::zero(self.field),
            };
            if !c.is_zero() {
                rest = axpy(&rest, &-&c, b.entries());
            }
            coords.push(c);
        }
        rest.is_empty().then_some(coords)
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether every basis vector of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.vectors.iter().all(|v| other.contains(v.entries()))
    }
}

/// Basis of the null space, in reduced row-echelon form.
pub fn kernel_basis(m: &SparseLinearMap) -> SubspaceBasis {
    let field = m.field();
    let raw: Vec<SparseEntries> = with_domain!(field, dom => {
        let mut ech = Echelon::new(dom.clone(), true);
        let mut out = Vec::new();
        for (j, col) in m.columns().iter().enumerate() {
            let (v, lambda) = dom.import(col);
            if let Inserted::Dependent { tracker } = ech.insert(v, vec![(j, lambda)]) {
                out.push(dom.export(&tracker, &dom.one()));
            }
        }
        out
    });
    let refs: Vec<&[(usize, Scalar)]> = raw.iter().map(Vec::as_slice).collect();
    SubspaceBasis::from_entries(field, m.n_cols(), &refs)
}

/// Basis of the column space, in reduced row-echelon form.
pub fn image_basis(m: &SparseLinearMap) -> SubspaceBasis {
    let refs: Vec<&[(usize, Scalar)]> = m.columns().iter().map(Vec::as_slice).collect();
    SubspaceBasis::from_entries(m.field(), m.n_rows(), &refs)
}

enum SolverEngine {
    Rational(Echelon<elim::Integers>),
    Prime(Echelon<elim::Zp>),
}

/// Reusable solver for `m · x = v`. The echelon of `m`'s columns is built once;
/// every call returns the same solution for the same right-hand side.
pub struct LinearSolver {
    n_rows: usize,
    n_cols: usize,
    field: Field,
    engine: SolverEngine,
}

fn build_echelon<D: Domain>(dom: D, m: &SparseLinearMap) -> Echelon<D> {
    let mut ech = Echelon::new(dom.clone(), true);
    for (j, col) in m.columns().iter().enumerate() {
        let (v, lambda) = dom.import(col);
        ech.insert(v, vec![(j, lambda)]);
    }
    ech
}

fn solve_with<D: Domain>(ech: &Echelon<D>, v: &[(usize, Scalar)]) -> Option<SparseEntries> {
    let dom = &ech.dom;
    let (w, mu) = dom.import(v);
    let red = ech.reduce(w, Vec::new(), dom.one());
    if !red.residual.is_empty() {
        return None;
    }
    // mu * s * v = -M t
    let divisor = dom.neg(&dom.mul(&mu, &red.scale));
    let mut x = dom.export(&red.tracker, &divisor);
    x.retain(|(_, c)| !c.is_zero());
    Some(x)
}

impl LinearSolver {
    pub fn new(m: &SparseLinearMap) -> Self {
        let engine = match m.field() {
            Field::Rational => SolverEngine::Rational(build_echelon(elim::Integers, m)),
            Field::Prime(p) => SolverEngine::Prime(build_echelon(elim::Zp { p }, m)),
        };
        LinearSolver {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            field: m.field(),
            engine,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.engine {
            SolverEngine::Rational(e) => e.rank(),
            SolverEngine::Prime(e) => e.rank(),
        }
    }

    /// Some `x` with `m · x = v`, or `None` when `v` is not in the image.
    pub fn solve(&self, v: &SparseVector) -> Result<Option<SparseVector>, LinalgError> {
        if v.dim() != self.n_rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n_rows,
                found: v.dim(),
            });
        }
        if v.field() != self.field {
            return Err(LinalgError::MixedField(self.field, v.field()));
        }
        Ok(self
            .solve_entries(v.entries())
            .map(|x| SparseVector::from_normalized(self.field, self.n_cols, x)))
    }

    pub(crate) fn solve_entries(&self, v: &[(usize, Scalar)]) -> Option<SparseEntries> {
        match &self.engine {
            SolverEngine::Rational(e) => solve_with(e, v),
            SolverEngine::Prime(e) => solve_with(e, v),
        }
    }
}

/// One-shot [`LinearSolver::solve`].
pub fn solve(m: &SparseLinearMap, v: &SparseVector) -> Result<Option<SparseVector>, LinalgError> {
    LinearSolver::new(m).solve(v)
}
