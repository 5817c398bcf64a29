//! Parallel versus sequential timings of the main kernels. Each group runs
//! the same input twice: once on the rayon pool and once under a
//! `SequentialGuard`. Without the `parallel` feature both rows are
//! sequential.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use superhom::chain::{
    cyclic_homology, hochschild_homology, HochschildComplex, Op, DEFAULT_CHAIN_CAP,
};
use superhom::linalg::{rank, Field};
use superhom::morphism::SupertraceMap;
use superhom::par::SequentialGuard;
use superhom::suite::{identity_suite, DEFAULT_SEED};
use superhom::superalgebra::{
    builtin, matrix_algebra, validate, Builtin, MatrixShape, DEFAULT_ALGEBRA_CAP,
};

fn m11_lambda() -> Arc<HochschildComplex> {
    let m = matrix_algebra(
        &builtin(Builtin::Grassmann(1)).unwrap(),
        MatrixShape::new(1, 1).unwrap(),
        DEFAULT_ALGEBRA_CAP,
    )
    .unwrap();
    Arc::new(
        HochschildComplex::new(m.algebra().clone(), Field::Rational, DEFAULT_CHAIN_CAP).unwrap(),
    )
}

fn both<F: FnMut()>(c: &mut Criterion, group: &str, input: &str, mut f: F) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", input), |b| b.iter(&mut f));
    g.bench_function(BenchmarkId::new("sequential", input), |b| {
        let _guard = SequentialGuard::new();
        b.iter(&mut f)
    });
    g.finish();
}

fn operator_matrix(c: &mut Criterion) {
    let cx = m11_lambda();
    both(c, "b matrix", "M11(grassmann:1) C_3", || {
        cx.matrix(Op::B, 3).unwrap();
    });
}

fn rank_of_b(c: &mut Criterion) {
    for field in [Field::Rational, Field::default_prime()] {
        let cx = HochschildComplex::new(m11_lambda().algebra().clone(), field, DEFAULT_CHAIN_CAP)
            .unwrap();
        let b = cx.matrix(Op::B, 3).unwrap();
        both(
            c,
            "rank",
            &format!("b_3 of M11(grassmann:1) over {field}"),
            || {
                rank(&b);
            },
        );
    }
}

fn homology(c: &mut Criterion) {
    let cx = m11_lambda();
    both(c, "hochschild homology", "M11(grassmann:1) n<=2", || {
        hochschild_homology(&cx, 2).unwrap();
    });
    both(c, "cyclic homology", "M11(grassmann:1) n<=2", || {
        cyclic_homology(cx.clone(), 2).unwrap();
    });
}

fn checks(c: &mut Criterion) {
    let a = builtin(Builtin::Grassmann(2)).unwrap();
    both(c, "validate", "grassmann:2", || {
        validate(&a);
    });
    let cx = HochschildComplex::new(
        Arc::new(builtin(Builtin::Grassmann(1)).unwrap()),
        Field::Rational,
        DEFAULT_CHAIN_CAP,
    )
    .unwrap();
    both(c, "identity suite", "grassmann:1 n<=4", || {
        identity_suite(&cx, 4, DEFAULT_SEED).unwrap();
    });
    let m = matrix_algebra(
        &builtin(Builtin::Grassmann(1)).unwrap(),
        MatrixShape::new(2, 1).unwrap(),
        DEFAULT_ALGEBRA_CAP,
    )
    .unwrap();
    let s = SupertraceMap::new(m, Field::Rational, DEFAULT_CHAIN_CAP).unwrap();
    both(c, "commutation", "M21(grassmann:1) n<=2", || {
        s.verify_bicomplex_morphism(2).unwrap();
    });
}

criterion_group!(kernels, operator_matrix, rank_of_b, homology, checks);
criterion_main!(kernels);
