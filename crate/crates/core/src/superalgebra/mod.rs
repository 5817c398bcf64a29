//! Finite-dimensional superalgebras presented by a homogeneous basis and
//! structure constants, the supermatrix superalgebra `M_{p,q}(A)`, and the
//! supertrace.

mod builtin;
mod json;
mod matrix;
mod table;

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::par;

pub use builtin::{builtin, Builtin};
pub use json::AlgebraFile;
pub use matrix::{
    matrix_algebra, ElementaryIndex, MatrixAlgebra, MatrixShape, DEFAULT_ALGEBRA_CAP,
};
pub use table::StructureTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("algebra of dimension {dim} exceeds the cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("unknown algebra kind `{0}`")]
    UnknownBuiltin(String),
    #[error("base algebra is not a valid superalgebra: {0}")]
    InvalidBase(String),
    #[error("supermatrix shape must have p + q >= 1")]
    EmptyShape,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The Z/2 degree of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::iter::Sum for Parity {
    fn sum<I: Iterator<Item = Parity>>(iter: I) -> Parity {
        iter.fold(Parity::Even, |a, b| a + b)
    }
}

/// Whether moving an element of parity `a` past one of parity `b` costs a sign.
pub fn koszul_negative(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

pub(crate) type RationalEntries = Vec<(usize, BigRational)>;

/// A unital associative superalgebra over the rationals, given by a
/// homogeneous basis `e_1..e_d` and constants `e_i e_j = Σ_k c_ij^k e_k`.
///
/// Construction only checks the presentation is well formed; the algebra
/// axioms are checked by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    name: String,
    basis: Vec<String>,
    parity: Vec<Parity>,
    unit: Vec<BigRational>,
    // products[i] is sorted by j; each product is sorted by k
    products: Vec<Vec<(usize, RationalEntries)>>,
}

impl SuperAlgebra {
    /// Builds an algebra from 0-based structure constants `(i, j, k, c)`.
    /// Repeated triples are summed and zero constants dropped.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        parity: Vec<Parity>,
        unit: Vec<BigRational>,
        constants: impl IntoIterator<Item = (usize, usize, usize, BigRational)>,
    ) -> Result<Self, AlgebraError> {
        let d = basis.len();
        if d == 0 {
            return Err(AlgebraError::Malformed("dimension must be positive".into()));
        }
        if parity.len() != d || unit.len() != d {
            return Err(AlgebraError::Malformed(format!(
                "basis has {d} labels but {} parities and {} unit coordinates",
                parity.len(),
                unit.len()
            )));
        }
        let mut table: Vec<Vec<(usize, RationalEntries)>> = vec![Vec::new(); d];
        let mut triples: Vec<(usize, usize, usize, BigRational)> = constants.into_iter().collect();
        for (i, j, k, _) in &triples {
            if *i >= d || *j >= d || *k >= d {
                return Err(AlgebraError::Malformed(format!(
                    "structure constant index ({}, {}, {}) out of range 1..={d}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
        }
        triples.sort_by_key(|t| (t.0, t.1, t.2));
        for (i, j, k, c) in triples {
            let row = &mut table[i];
            if row.last().map(|(jj, _)| *jj) != Some(j) {
                row.push((j, Vec::new()));
            }
            let entries = &mut row.last_mut().expect("pushed").1;
            match entries.last_mut() {
                Some((kk, acc)) if *kk == k => *acc = &*acc + &c,
                _ => entries.push((k, c)),
            }
        }
        for row in &mut table {
            for (_, entries) in row.iter_mut() {
                entries.retain(|(_, c)| !c.is_zero());
            }
            row.retain(|(_, entries)| !entries.is_empty());
        }
        Ok(SuperAlgebra {
            name: name.into(),
            basis,
            parity,
            unit,
            products: table,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn unit(&self) -> &[BigRational] {
        &self.unit
    }

    /// `e_i e_j` as sorted `(k, c)` pairs.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, BigRational)] {
        let row = &self.products[i];
        match row.binary_search_by_key(&j, |(jj, _)| *jj) {
            Ok(pos) => &row[pos].1,
            Err(_) => &[],
        }
    }

    /// All nonzero constants `(i, j, k, c)`, 0-based, in lexicographic order.
    pub fn structure_constants(
        &self,
    ) -> impl Iterator<Item = (usize, usize, usize, &BigRational)> + '_ {
        self.products.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .flat_map(move |(j, entries)| entries.iter().map(move |(k, c)| (i, *j, *k, c)))
        })
    }

    /// The same algebra with basis vector `i` renamed to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<SuperAlgebra, AlgebraError> {
        let d = self.dim();
        let mut seen = vec![false; d];
        if perm.len() != d
            || perm
                .iter()
                .any(|&p| p >= d || std::mem::replace(&mut seen[p], true))
        {
            return Err(AlgebraError::Malformed(
                "not a permutation of the basis".into(),
            ));
        }
        let mut basis = vec![String::new(); d];
        let mut parity = vec![Parity::Even; d];
        let mut unit = vec![BigRational::zero(); d];
        for i in 0..d {
            basis[perm[i]] = self.basis[i].clone();
            parity[perm[i]] = self.parity[i];
            unit[perm[i]] = self.unit[i].clone();
        }
        let constants = self
            .structure_constants()
            .map(|(i, j, k, c)| (perm[i], perm[j], perm[k], c.clone()));
        SuperAlgebra::new(self.name.clone(), basis, parity, unit, constants)
    }

    fn mul_coords(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, entries) in &self.products[i] {
                if y[*j].is_zero() {
                    continue;
                }
                let f = xi * &y[*j];
                for (k, c) in entries {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }
}

/// One failed axiom in a presentation (indices 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ParityInhomogeneous { i: usize, j: usize, k: usize },
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
    OddUnit { k: usize },
}

impl fmt::Display for Violation {
    /// Indices print 1-based, matching the file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ParityInhomogeneous { i, j, k } => write!(
                f,
                "parity: e{} * e{} has a component along e{} of the wrong parity",
                i + 1,
                j + 1,
                k + 1
            ),
            Violation::Associativity { i, j, k } => {
                write!(
                    f,
                    "associativity fails on (e{}, e{}, e{})",
                    i + 1,
                    j + 1,
                    k + 1
                )
            }
            Violation::LeftUnit { i } => write!(f, "1 * e{} != e{}", i + 1, i + 1),
            Violation::RightUnit { i } => write!(f, "e{} * 1 != e{}", i + 1, i + 1),
            Violation::OddUnit { k } => write!(f, "unit has a component along odd e{}", k + 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        match self.violations.as_slice() {
            [] => "valid".into(),
            [first, rest @ ..] => format!("{first} (+{} more)", rest.len()),
        }
    }
}

/// Checks parity homogeneity, associativity and the two-sided even unit.
pub fn validate(a: &SuperAlgebra) -> ValidationReport {
    let d = a.dim();
    let mut violations = Vec::new();
    for (i, j, k, _) in a.structure_constants() {
        if a.parity(k) != a.parity(i) + a.parity(j) {
            violations.push(Violation::ParityInhomogeneous { i, j, k });
        }
    }
    for k in 0..d {
        if !a.unit[k].is_zero() && a.parity(k).is_odd() {
            violations.push(Violation::OddUnit { k });
        }
    }
    for i in 0..d {
        let e = basis_coords(d, i);
        if a.mul_coords(&a.unit, &e) != e {
            violations.push(Violation::LeftUnit { i });
        }
        if a.mul_coords(&e, &a.unit) != e {
            violations.push(Violation::RightUnit { i });
        }
    }
    let assoc = par::map_range(d, |i| {
        let ei = basis_coords(d, i);
        let mut bad = Vec::new();
        for j in 0..d {
            let ej = basis_coords(d, j);
            let ij = a.mul_coords(&ei, &ej);
            for k in 0..d {
                let ek = basis_coords(d, k);
                let left = a.mul_coords(&ij, &ek);
                let right = a.mul_coords(&ei, &a.mul_coords(&ej, &ek));
                if left != right {
                    bad.push(Violation::Associativity { i, j, k });
                }
            }
        }
        bad
    });
    violations.extend(assoc.into_iter().flatten());
    ValidationReport { violations }
}

fn basis_coords(d: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); d];
    v[i] = BigRational::one();
    v
}

/// An element of a superalgebra, in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra: Arc<SuperAlgebra>,
    coords: Vec<BigRational>,
}

impl AlgebraElement {
    pub fn new(algebra: Arc<SuperAlgebra>, coords: Vec<BigRational>) -> Result<Self, AlgebraError> {
        if coords.len() != algebra.dim() {
            return Err(AlgebraError::Malformed(format!(
                "element has {} coordinates, algebra has dimension {}",
                coords.len(),
                algebra.dim()
            )));
        }
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn zero(algebra: Arc<SuperAlgebra>) -> Self {
        let d = algebra.dim();
        AlgebraElement {
            algebra,
            coords: vec![BigRational::zero(); d],
        }
    }

    pub fn basis(algebra: Arc<SuperAlgebra>, i: usize) -> Self {
        let d = algebra.dim();
        AlgebraElement {
            algebra,
            coords: basis_coords(d, i),
        }
    }

    pub fn unit(algebra: Arc<SuperAlgebra>) -> Self {
        let coords = algebra.unit.clone();
        AlgebraElement { algebra, coords }
    }

    pub fn algebra(&self) -> &Arc<SuperAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn multiply(&self, rhs: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(rhs)?;
        let coords = self.algebra.mul_coords(&self.coords, &rhs.coords);
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        })
    }

    pub fn add(&self, rhs: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(rhs)?;
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        })
    }

    pub fn scale(&self, c: &BigRational) -> AlgebraElement {
        let coords = self.coords.iter().map(|a| a * c).collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        }
    }

    /// Component of the given parity.
    pub fn part(&self, parity: Parity) -> AlgebraElement {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.algebra.parity(i) == parity {
                    c.clone()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        }
    }

    /// Parity of a nonzero homogeneous element.
    pub fn parity(&self) -> Option<Parity> {
        let mut found = None;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.algebra.parity(i);
            if found.is_some_and(|f| f != p) {
                return None;
            }
            found = Some(p);
        }
        found
    }
}
