use criterion::{criterion_group, criterion_main, Criterion};
use psigma_core::worldsheet::{integrate, worldsheet_vars, DeRhamSuperfield, Superchain};
use psigma_core::{build_operation_context, gallery, parse_expression, Bivector, Polynomial};

fn bench_cartan(c: &mut Criterion) {
    let b = gallery::r2_gravity();
    let ctx = build_operation_context(&b.model, &b.liealg, &b.action, false).unwrap();
    c.bench_function("cartan relations r2gravity", |bch| {
        bch.iter(|| ctx.cartan_check().unwrap().passed())
    });
    c.bench_function("bv relations r2gravity", |bch| {
        bch.iter(|| ctx.auxiliary_relations_check().unwrap().passed())
    });
}

fn bench_casimir_search(c: &mut Criterion) {
    let b = gallery::sklyanin();
    c.bench_function("casimir search sklyanin deg 2", |bch| {
        bch.iter(|| b.model.casimir_search(Bivector::Pi, 2).unwrap().len())
    });
}

fn bench_integration(c: &mut Criterion) {
    let vars = worldsheet_vars();
    let psi = DeRhamSuperfield::from_components(
        2,
        Polynomial::zero(&vars),
        [Polynomial::zero(&vars), Polynomial::zero(&vars)],
        parse_expression("z1^4*z2^3 - 2*z1*z2 + 7", &vars).unwrap(),
    );
    let chain = Superchain::unit_square();
    c.bench_function("surface integral degree 7", |bch| {
        bch.iter(|| integrate(&psi, &chain).unwrap())
    });
}

criterion_group!(benches, bench_cartan, bench_casimir_search, bench_integration);
criterion_main!(benches);
