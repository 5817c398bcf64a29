use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{ChainError, HochschildComplex, Op, TotalComplex};
use crate::linalg::{
    homology_data, induced_on_homology, rank, Field, HomologyBasisData, Scalar, SparseEntries,
    SparseLinearMap,
};
use crate::par;
use crate::report::{AlgebraRef, Check};
use crate::superalgebra::SuperAlgebra;

/// Which complex a homology computation is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    /// `(C_*, b)`.
    Hh,
    /// The total complex of the cyclic bicomplex.
    Hc,
    /// `(C_*, b')`.
    Bprime,
}

impl Theory {
    pub fn as_str(self) -> &'static str {
        match self {
            Theory::Hh => "hh",
            Theory::Hc => "hc",
            Theory::Bprime => "bprime",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub n: usize,
    pub chain_dim: usize,
    pub cycles: usize,
    pub boundaries: usize,
    pub betti: usize,
}

/// Homology of a complex in degrees `0..=n_max`, with the cycle, boundary and
/// representative data kept for induced maps.
#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub theory: Theory,
    pub field: Field,
    pub stats: Vec<DegreeStats>,
    pub data: Vec<HomologyBasisData>,
    /// Wall-clock time; never serialized.
    pub elapsed: Duration,
}

impl HomologyResult {
    pub fn bettis(&self) -> Vec<usize> {
        self.stats.iter().map(|s| s.betti).collect()
    }

    /// The serializable view of this result, tagged with its algebra.
    pub fn report(&self, algebra: &SuperAlgebra, checks: Vec<Check>) -> HomologyReport {
        HomologyReport {
            theory: self.theory.as_str().to_string(),
            algebra: AlgebraRef::from(algebra),
            field: self.field.to_string(),
            degrees: self.stats.clone(),
            checks,
        }
    }
}

/// Homology report as written to disk. `theory` is `hh`, `hc`, `bprime` or
/// `connes`; a `connes` report lists the cyclic degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub theory: String,
    pub algebra: AlgebraRef,
    pub field: String,
    pub degrees: Vec<DegreeStats>,
    pub checks: Vec<Check>,
}

/// Homology at each degree `n <= n_max` of the complex whose differentials
/// out of degree `m` are `diffs[m]` (`diffs` runs through `n_max + 1`).
fn homology_of(
    theory: Theory,
    field: Field,
    diffs: &[SparseLinearMap],
    started: Instant,
) -> Result<HomologyResult, ChainError> {
    let n_max = diffs.len() - 2;
    let data = par::map_range(n_max + 1, |n| homology_data(&diffs[n], &diffs[n + 1]));
    let data = data.into_iter().collect::<Result<Vec<_>, _>>()?;
    let stats = data
        .iter()
        .enumerate()
        .map(|(n, h)| DegreeStats {
            n,
            chain_dim: h.ambient_dim(),
            cycles: h.cycle_basis().dim(),
            boundaries: h.boundary_basis().dim(),
            betti: h.betti(),
        })
        .collect();
    Ok(HomologyResult {
        theory,
        field,
        stats,
        data,
        elapsed: started.elapsed(),
    })
}

fn vertical_diffs(
    c: &HochschildComplex,
    op: Op,
    top: usize,
) -> Result<Vec<SparseLinearMap>, ChainError> {
    (0..=top).map(|n| c.matrix(op, n)).collect()
}

/// `HH_n(A)` for `n <= n_max`.
pub fn hochschild_homology(
    c: &HochschildComplex,
    n_max: usize,
) -> Result<HomologyResult, ChainError> {
    let started = Instant::now();
    let diffs = vertical_diffs(c, Op::B, n_max + 1)?;
    homology_of(Theory::Hh, c.field(), &diffs, started)
}

/// `HC_n(A)` for `n <= n_max`, with the total complex it was computed from.
pub fn cyclic_homology(
    c: Arc<HochschildComplex>,
    n_max: usize,
) -> Result<(HomologyResult, TotalComplex), ChainError> {
    let started = Instant::now();
    let field = c.field();
    let total = TotalComplex::new(c, n_max + 1)?;
    let diffs: Vec<SparseLinearMap> = (0..=n_max + 1)
        .map(|m| total.differential(m).clone())
        .collect();
    Ok((homology_of(Theory::Hc, field, &diffs, started)?, total))
}

fn first_nonzero_column(m: &SparseLinearMap) -> Option<usize> {
    let bad = par::map_range(m.n_cols(), |j| !m.column(j).is_empty());
    bad.iter().position(|&b| b)
}

/// Verifies `b'h + hb' = id` on `C_n` for `n <= n_max`, where `h` inserts
/// the unit in front, and that `(C_*, b')` has no homology there.
pub fn bprime_acyclicity_check(
    c: &HochschildComplex,
    n_max: usize,
) -> Result<(HomologyResult, Vec<Check>), ChainError> {
    let started = Instant::now();
    let field = c.field();
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let dim = c.enumerable_dim(n)?;
        let defect = SparseLinearMap::from_column_fn(field, dim, dim, |j| {
            let e = [(j, Scalar::one(field))];
            let mut out = c
                .apply(
                    Op::BPrime,
                    n + 1,
                    &c.apply(Op::Homotopy, n, &e).expect("valid"),
                )
                .expect("valid");
            if n >= 1 {
                let back = c.apply(Op::BPrime, n, &e).expect("valid");
                out.extend(c.apply(Op::Homotopy, n - 1, &back).expect("valid"));
            }
            out.push((j, -Scalar::one(field)));
            out
        });
        let name = format!("b'h + hb' = id on C_{n}");
        checks.push(match first_nonzero_column(&defect) {
            None => Check::passed(name),
            Some(j) => Check::failed(name, c.tuple_label(n, j)),
        });
    }
    let diffs = vertical_diffs(c, Op::BPrime, n_max + 1)?;
    let result = homology_of(Theory::Bprime, field, &diffs, started)?;
    for s in &result.stats {
        let name = format!("H_{}(C, b') = 0", s.n);
        checks.push(if s.betti == 0 {
            Check::passed(name)
        } else {
            Check::failed(name, format!("dimension {}", s.betti))
        });
    }
    Ok((result, checks))
}

/// Hochschild and cyclic homology together with the verdicts on the
/// long exact sequence relating them.
#[derive(Clone, Debug)]
pub struct ConnesOutcome {
    pub hh: HomologyResult,
    pub hc: HomologyResult,
    pub checks: Vec<Check>,
}

fn betti(data: &[HomologyBasisData], n: isize) -> usize {
    if n < 0 {
        0
    } else {
        data[n as usize].betti()
    }
}

/// Exactness of `U --f--> X --g--> Y` at `X`.
fn exactness(
    name: String,
    f: &SparseLinearMap,
    g: &SparseLinearMap,
    dim_x: usize,
) -> Result<Check, ChainError> {
    if !g.compose(f)?.is_zero() {
        return Ok(Check::failed(
            name,
            "composite of consecutive maps is nonzero",
        ));
    }
    let (rf, rg) = (rank(f), rank(g));
    Ok(if rf + rg == dim_x {
        Check::passed(name)
    } else {
        Check::failed(name, format!("rank in {rf} + rank out {rg} != dim {dim_x}"))
    })
}

/// Checks the long exact sequence
/// `.. -> HC_{n-1} -B-> HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1} -> ..`
/// at every node through degree `n_max`.
///
/// The sequence comes from `0 -> K -> Tot -> Tot[-2] -> 0`, where `K` is the
/// subcomplex of the first two columns. In the coordinates used here each
/// `Tot_m` is literally `K_m ⊕ Tot_{m-2}`, so `I` is the inclusion of the
/// leading coordinates, `S` drops them, and the zig-zag defining `B` lifts
/// a cycle by placing it in the trailing block. `H(K)` is compared with
/// `HH` through the inclusion of column 0.
///
/// Surjectivity of `I` is reported as an advisory check: it is not implied
/// by exactness and fails whenever `S` is nonzero.
pub fn connes_sequence_check(
    c: Arc<HochschildComplex>,
    n_max: usize,
) -> Result<ConnesOutcome, ChainError> {
    let field = c.field();
    let hh = hochschild_homology(&c, n_max)?;
    let (hc, total) = cyclic_homology(c.clone(), n_max)?;

    let k_dim =
        |m: isize| -> Result<usize, ChainError> { Ok(c.dim_signed(m)? + c.dim_signed(m - 1)?) };
    let mut k_diffs = Vec::with_capacity(n_max + 2);
    for m in 0..=n_max + 1 {
        let d = total.differential(m);
        let rows = k_dim(m as isize - 1)?;
        let cols: Vec<SparseEntries> = (0..k_dim(m as isize)?)
            .map(|j| d.column(j).to_vec())
            .collect();
        if let Some(j) = cols
            .iter()
            .position(|col| col.iter().any(|(r, _)| *r >= rows))
        {
            return Err(ChainError::NotAComplex {
                degree: m,
                witness: format!("first two columns are not a subcomplex (column {j})"),
            });
        }
        k_diffs.push(SparseLinearMap::from_column_fn(
            field,
            rows,
            cols.len(),
            |j| cols[j].clone(),
        ));
    }
    let hk = homology_of(Theory::Hh, field, &k_diffs, Instant::now())?.data;

    let inclusion = |rows: usize, cols: usize, shift: usize| {
        SparseLinearMap::from_column_fn(field, rows, cols, move |j| {
            vec![(j + shift, Scalar::one(field))]
        })
    };
    let mut checks = Vec::new();

    // HH ≅ H(K) via column 0
    for n in 0..=n_max {
        let j = inclusion(k_dim(n as isize)?, c.dim(n)?, 0);
        let name = format!("column 0 induces HH_{n} ≅ H_{n}(K)");
        checks.push(match induced_on_homology(&j, &hh.data[n], &hk[n]) {
            Ok(m) if m.n_rows() == m.n_cols() && rank(&m) == m.n_cols() => Check::passed(name),
            Ok(m) => Check::failed(
                name,
                format!("{}x{} of rank {}", m.n_rows(), m.n_cols(), rank(&m)),
            ),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }

    let zero = |rows: usize, cols: usize| SparseLinearMap::zero(field, rows, cols);
    let mut i_maps = Vec::new();
    let mut s_maps = Vec::new();
    for n in 0..=n_max {
        let iota = inclusion(total.dim(n), k_dim(n as isize)?, 0);
        i_maps.push(induced_on_homology(&iota, &hk[n], &hc.data[n])?);
        if n >= 2 {
            let kn = k_dim(n as isize)?;
            let proj =
                SparseLinearMap::from_column_fn(field, total.dim(n - 2), total.dim(n), |j| {
                    if j >= kn {
                        vec![(j - kn, Scalar::one(field))]
                    } else {
                        Vec::new()
                    }
                });
            s_maps.push(induced_on_homology(&proj, &hc.data[n], &hc.data[n - 2])?);
        } else {
            s_maps.push(zero(0, betti(&hc.data, n as isize)));
        }
    }

    // connecting maps HC_m -> H_{m+1}(K) for m + 1 <= n_max
    let mut b_maps = Vec::new();
    for m in 0..n_max {
        let shift = k_dim(m as isize + 2)?;
        let k_next = k_dim(m as isize + 1)?;
        let mut triplets = Vec::new();
        for (col, z) in hc.data[m].representatives().iter().enumerate() {
            let lifted: SparseEntries = z
                .entries()
                .iter()
                .map(|(i, c)| (i + shift, c.clone()))
                .collect();
            let image = total.differential(m + 2).apply_entries(&lifted);
            if image.iter().any(|(r, _)| *r >= k_next) {
                return Err(ChainError::NotAComplex {
                    degree: m + 2,
                    witness: "boundary of a lifted cycle leaves the first two columns".into(),
                });
            }
            for (row, c) in hk[m + 1].class_of(&image)?.into_iter().enumerate() {
                triplets.push((row, col, c));
            }
        }
        b_maps.push(SparseLinearMap::from_triplets(
            field,
            hk[m + 1].betti(),
            hc.data[m].betti(),
            triplets,
        )?);
    }
    let b_into = |n: usize| -> &SparseLinearMap { &b_maps[n - 1] };

    for n in 0..=n_max {
        let ni = n as isize;
        let into_hh = if n == 0 {
            zero(hk[0].betti(), 0)
        } else {
            b_into(n).clone()
        };
        checks.push(exactness(
            format!("exact at HH_{n} between B and I"),
            &into_hh,
            &i_maps[n],
            hk[n].betti(),
        )?);
        checks.push(exactness(
            format!("exact at HC_{n} between I and S"),
            &i_maps[n],
            &s_maps[n],
            hc.data[n].betti(),
        )?);
        if n >= 2 {
            checks.push(exactness(
                format!("exact at HC_{} between S and B", n - 2),
                &s_maps[n],
                b_into(n - 1),
                betti(&hc.data, ni - 2),
            )?);
        }
    }

    let i0 = &i_maps[0];
    let name = "I is an isomorphism at degree 0";
    checks.push(if i0.n_rows() == i0.n_cols() && rank(i0) == i0.n_cols() {
        Check::passed(name)
    } else {
        Check::failed(
            name,
            format!("{}x{} of rank {}", i0.n_rows(), i0.n_cols(), rank(i0)),
        )
    });
    for (n, i) in i_maps.iter().enumerate() {
        let r = rank(i);
        let name = format!("I surjective onto HC_{n}");
        checks.push(
            if r == i.n_rows() {
                Check::passed(name)
            } else {
                Check::failed(name, format!("rank {r} < dim HC_{n} = {}", i.n_rows()))
            }
            .advisory(),
        );
    }
    Ok(ConnesOutcome { hh, hc, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::DEFAULT_CHAIN_CAP;
    use crate::report::gating_pass;
    use crate::superalgebra::{builtin, matrix_algebra, Builtin, MatrixShape, DEFAULT_ALGEBRA_CAP};

    fn complex(kind: Builtin, field: Field) -> Arc<HochschildComplex> {
        Arc::new(
            HochschildComplex::new(Arc::new(builtin(kind).unwrap()), field, DEFAULT_CHAIN_CAP)
                .unwrap(),
        )
    }

    #[test]
    fn hochschild_bettis() {
        let cases = [
            (Builtin::Ground, vec![1, 0, 0, 0]),
            (Builtin::Grassmann(1), vec![2, 2, 2, 2]),
            (Builtin::DualNumbers, vec![2, 1, 1, 1]),
            (Builtin::Clifford1, vec![1, 0, 0, 0]),
        ];
        for (kind, expect) in cases {
            let h = hochschild_homology(&complex(kind, Field::Rational), 3).unwrap();
            assert_eq!(h.bettis(), expect, "{kind}");
        }
    }

    #[test]
    fn cyclic_bettis() {
        let cases = [
            (Builtin::Ground, vec![1, 0, 1, 0]),
            (Builtin::Grassmann(1), vec![2, 1, 2, 1]),
            (Builtin::DualNumbers, vec![2, 0, 2, 0]),
            (Builtin::Clifford1, vec![1, 0, 1, 0]),
        ];
        for (kind, expect) in cases {
            let (h, _) = cyclic_homology(complex(kind, Field::Rational), 3).unwrap();
            assert_eq!(h.bettis(), expect, "{kind}");
            let (hp, _) = cyclic_homology(complex(kind, Field::default_prime()), 3).unwrap();
            assert_eq!(hp.bettis(), expect, "{kind} mod p");
        }
    }

    #[test]
    fn matrix_algebra_degree_zero() {
        let m = matrix_algebra(
            &builtin(Builtin::Ground).unwrap(),
            MatrixShape::new(1, 1).unwrap(),
            DEFAULT_ALGEBRA_CAP,
        )
        .unwrap();
        let c = HochschildComplex::new(m.algebra().clone(), Field::Rational, DEFAULT_CHAIN_CAP)
            .unwrap();
        assert_eq!(hochschild_homology(&c, 0).unwrap().bettis(), vec![1]);
    }

    #[test]
    fn bprime_is_acyclic() {
        for kind in [Builtin::Ground, Builtin::Grassmann(1)] {
            let (h, checks) = bprime_acyclicity_check(&complex(kind, Field::Rational), 3).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{checks:?}");
            assert!(h.bettis().iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn connes_sequence_is_exact() {
        for (kind, n_max) in [(Builtin::Ground, 3), (Builtin::Grassmann(1), 2)] {
            let out = connes_sequence_check(complex(kind, Field::Rational), n_max).unwrap();
            assert!(
                gating_pass(&out.checks),
                "{kind}: {:?}",
                out.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
            );
            let surjective_2 = out
                .checks
                .iter()
                .find(|c| c.name == "I surjective onto HC_2")
                .unwrap();
            assert!(!surjective_2.pass && surjective_2.advisory);
        }
    }
}
