use crate::linalg::{Field, Scalar, SparseEntries};

use super::{AlgebraError, Parity, SuperAlgebra};

/// Structure constants of an algebra mapped into a coefficient field, laid
/// out for the inner loops of the chain-level operators.
#[derive(Clone, Debug)]
pub struct StructureTable {
    field: Field,
    parity: Vec<Parity>,
    unit: SparseEntries,
    // dense d x d grid of sparse products
    products: Vec<SparseEntries>,
}

impl StructureTable {
    /// Fails over `GF(p)` when `p` divides a denominator of the presentation.
    pub fn new(algebra: &SuperAlgebra, field: Field) -> Result<Self, AlgebraError> {
        let d = algebra.dim();
        let mut products = vec![SparseEntries::new(); d * d];
        for (i, j, k, c) in algebra.structure_constants() {
            let c = Scalar::from_rational(field, c)?;
            if !c.is_zero() {
                products[i * d + j].push((k, c));
            }
        }
        let mut unit = SparseEntries::new();
        for (k, c) in algebra.unit().iter().enumerate() {
            let c = Scalar::from_rational(field, c)?;
            if !c.is_zero() {
                unit.push((k, c));
            }
        }
        Ok(StructureTable {
            field,
            parity: algebra.parities().to_vec(),
            unit,
            products,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn unit(&self) -> &[(usize, Scalar)] {
        &self.unit
    }

    /// `e_i e_j` as sorted `(k, c)` pairs.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim() + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_rational;
    use crate::superalgebra::{builtin, Builtin};

    #[test]
    fn reduces_modulo_p() {
        let a = builtin(Builtin::Clifford1).unwrap();
        let t = StructureTable::new(&a, Field::Prime(7)).unwrap();
        assert_eq!(t.product(1, 1), &[(0, Scalar::one(Field::Prime(7)))]);
        assert_eq!(t.unit(), &[(0, Scalar::one(Field::Prime(7)))]);
    }

    #[test]
    fn unrepresentable_constant() {
        let half = parse_rational("1/2").unwrap();
        let a = SuperAlgebra::new(
            "half",
            vec!["1".into()],
            vec![Parity::Even],
            vec![parse_rational("2").unwrap()],
            [(0, 0, 0, half)],
        )
        .unwrap();
        assert!(StructureTable::new(&a, Field::Prime(2)).is_err());
        assert!(StructureTable::new(&a, Field::Prime(3)).is_ok());
    }
}
