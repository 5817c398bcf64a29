//! The operator identity suite: every structural identity of the cyclic
//! bicomplex checked exhaustively on basis tuples, supplemented by seeded
//! random chains at the top degree, plus the Connes sequence verdicts.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{connes_sequence_check, ChainError, HochschildComplex, Op};
use crate::linalg::{normalize_entries, Scalar, SparseEntries};
use crate::par;
use crate::report::Check;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;

/// Random chains drawn per identity at the top degree.
pub const RANDOM_CHAINS: usize = 8;

type Defect =
    fn(&HochschildComplex, usize, &[(usize, Scalar)]) -> Result<SparseEntries, ChainError>;

struct Identity {
    name: &'static str,
    min_degree: usize,
    /// Whether the identity lives on the total complex rather than `C_n`.
    total: bool,
    defect: Defect,
}

fn neg(x: &[(usize, Scalar)]) -> SparseEntries {
    x.iter().map(|(i, c)| (*i, -c)).collect()
}

fn sum(mut a: SparseEntries, b: SparseEntries) -> SparseEntries {
    a.extend(b);
    normalize_entries(a)
}

const IDENTITIES: &[Identity] = &[
    Identity {
        name: "b∘b = 0",
        min_degree: 2,
        total: false,
        defect: |c, n, x| c.apply(Op::B, n - 1, &c.apply(Op::B, n, x)?),
    },
    Identity {
        name: "b'∘b' = 0",
        min_degree: 2,
        total: false,
        defect: |c, n, x| c.apply(Op::BPrime, n - 1, &c.apply(Op::BPrime, n, x)?),
    },
    Identity {
        name: "t^(n+1) = id",
        min_degree: 0,
        total: false,
        defect: |c, n, x| {
            let mut y = x.to_vec();
            for _ in 0..=n {
                y = c.apply(Op::T, n, &y)?;
            }
            Ok(sum(y, neg(x)))
        },
    },
    Identity {
        name: "b(1-t) = (1-t)b'",
        min_degree: 1,
        total: false,
        defect: |c, n, x| {
            let lhs = c.apply(Op::B, n, &c.apply(Op::OneMinusT, n, x)?)?;
            let rhs = c.apply(Op::OneMinusT, n - 1, &c.apply(Op::BPrime, n, x)?)?;
            Ok(sum(lhs, neg(&rhs)))
        },
    },
    Identity {
        name: "b'N = Nb",
        min_degree: 1,
        total: false,
        defect: |c, n, x| {
            let lhs = c.apply(Op::BPrime, n, &c.apply(Op::N, n, x)?)?;
            let rhs = c.apply(Op::N, n - 1, &c.apply(Op::B, n, x)?)?;
            Ok(sum(lhs, neg(&rhs)))
        },
    },
    Identity {
        name: "B∘B = 0",
        min_degree: 0,
        total: false,
        defect: |c, n, x| c.apply(Op::ConnesB, n + 1, &c.apply(Op::ConnesB, n, x)?),
    },
    Identity {
        name: "bB + Bb = 0",
        min_degree: 0,
        total: false,
        defect: |c, n, x| {
            let lhs = c.apply(Op::B, n + 1, &c.apply(Op::ConnesB, n, x)?)?;
            let rhs = if n == 0 {
                Vec::new()
            } else {
                c.apply(Op::ConnesB, n - 1, &c.apply(Op::B, n, x)?)?
            };
            Ok(sum(lhs, rhs))
        },
    },
    Identity {
        name: "b'h + hb' = id",
        min_degree: 0,
        total: false,
        defect: |c, n, x| {
            let mut out = c.apply(Op::BPrime, n + 1, &c.apply(Op::Homotopy, n, x)?)?;
            if n >= 1 {
                out.extend(c.apply(Op::Homotopy, n - 1, &c.apply(Op::BPrime, n, x)?)?);
            }
            Ok(sum(out, neg(x)))
        },
    },
    Identity {
        name: "D∘D = 0",
        min_degree: 2,
        total: true,
        defect: |c, m, x| c.total_apply(m - 1, &c.total_apply(m, x)?),
    },
];

fn space_dim(c: &HochschildComplex, id: &Identity, n: usize) -> Result<usize, ChainError> {
    if id.total {
        for j in 0..=n {
            c.enumerable_dim(j)?;
        }
        c.total_dim(n as isize)
    } else {
        c.enumerable_dim(n)
    }
}

fn label(c: &HochschildComplex, id: &Identity, n: usize, j: usize) -> String {
    if !id.total {
        return c.tuple_label(n, j);
    }
    let cells = c.total_cells(n).expect("checked");
    let cell = cells[cells.partition_point(|cell| cell.offset <= j) - 1];
    format!(
        "cell ({}, {}) {}",
        cell.column,
        cell.row,
        c.tuple_label(cell.row, j - cell.offset)
    )
}

/// A random chain with a few small integer coefficients.
fn random_chain(rng: &mut ChaCha8Rng, dim: usize, field: crate::linalg::Field) -> SparseEntries {
    let terms = rng.gen_range(1..=6usize);
    let mut x = Vec::with_capacity(terms);
    for _ in 0..terms {
        let i = rng.gen_range(0..dim);
        let num: i64 = rng.gen_range(-5..=5);
        let den: i64 = rng.gen_range(1..=4);
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        x.push((
            i,
            Scalar::from_rational(field, &q).unwrap_or_else(|_| Scalar::from_i64(field, num)),
        ));
    }
    normalize_entries(x)
}

/// Checks every identity on `C_n` (and `Tot_n`) for `n <= n_max` over the
/// full basis, then on seeded random chains at `n_max`.
pub fn identity_suite(
    c: &HochschildComplex,
    n_max: usize,
    seed: u64,
) -> Result<Vec<Check>, ChainError> {
    let mut checks = Vec::new();
    for id in IDENTITIES {
        for n in id.min_degree..=n_max {
            let dim = space_dim(c, id, n)?;
            let field = c.field();
            let cols = par::map_range(dim, |j| (id.defect)(c, n, &[(j, Scalar::one(field))]));
            let cols = cols.into_iter().collect::<Result<Vec<_>, _>>()?;
            let space = if id.total { "Tot" } else { "C" };
            let name = format!("{} on {space}_{n}", id.name);
            checks.push(match cols.iter().position(|col| !col.is_empty()) {
                None => Check::passed(name),
                Some(j) => Check::failed(name, label(c, id, n, j)),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for id in IDENTITIES {
        if n_max < id.min_degree {
            continue;
        }
        let dim = space_dim(c, id, n_max)?;
        let space = if id.total { "Tot" } else { "C" };
        let name = format!(
            "{} on {RANDOM_CHAINS} seeded random chains of {space}_{n_max}",
            id.name
        );
        let mut failure = None;
        for k in 0..RANDOM_CHAINS {
            let x = random_chain(&mut rng, dim, c.field());
            if failure.is_none() && !(id.defect)(c, n_max, &x)?.is_empty() {
                failure = Some(format!("random chain #{k}"));
            }
        }
        checks.push(match failure {
            None => Check::passed(name),
            Some(w) => Check::failed(name, w),
        });
    }

    Ok(checks)
}

/// [`identity_suite`] followed by the Connes sequence verdicts.
pub fn operator_suite(
    c: &Arc<HochschildComplex>,
    n_max: usize,
    seed: u64,
) -> Result<Vec<Check>, ChainError> {
    let mut checks = identity_suite(c, n_max, seed)?;
    checks.extend(connes_sequence_check(c.clone(), n_max)?.checks);
    Ok(checks)
}
