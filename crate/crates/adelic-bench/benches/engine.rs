use adelic_core::complex::BoundedComplex;
use adelic_core::cube::build_adelic_cube;
use adelic_core::expr::RingExpr;
use adelic_core::functors;
use adelic_core::groebner::{buchberger, DEFAULT_DEGREE_CAP};
use adelic_core::linalg::smith_normal_form;
use adelic_core::ring::{int_prime, parse_elem, AlgPrime, BaseRing, CoreRing, Elem, FieldSpec};
use adelic_core::spectrum::{Ambient, SpectrumPoset};
use adelic_core::verifier::verify_pullback;
use adelic_core::Mat;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn seeded_matrix(core: &CoreRing, n: usize, seed: u64) -> Mat {
    let mut state = seed;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let rows: Vec<Vec<Elem>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| core.from_i64((next() % 41) as i64 - 20))
                .collect()
        })
        .collect();
    Mat::from_rows(core, rows)
}

fn bench_snf(c: &mut Criterion) {
    let core = CoreRing::Integers;
    let m = seeded_matrix(&core, 6, 0x9e3779b97f4a7c15);
    c.bench_function("snf 6x6 integers", |b| {
        b.iter(|| smith_normal_form(black_box(&m)).unwrap())
    });
}

fn bench_hasse(c: &mut Criterion) {
    let base = BaseRing::Integers;
    let poset = SpectrumPoset::new(
        base.clone(),
        vec![
            AlgPrime::zero_ideal(base.clone()),
            int_prime(2),
            int_prime(3),
            int_prime(5),
        ],
        vec![1, 0, 0, 0],
        Ambient::Full,
    )
    .unwrap();
    let unit = BoundedComplex::unit(RingExpr::base(base), CoreRing::Integers);
    c.bench_function("verify hasse square", |b| {
        b.iter(|| {
            let cube = build_adelic_cube(black_box(&unit), &poset).unwrap();
            verify_pullback(&cube).unwrap()
        })
    });
}

fn bench_groebner(c: &mut Criterion) {
    let core = CoreRing::BiPoly {
        coeff: FieldSpec::Rationals,
    };
    let gens = vec![
        match parse_elem("x^3 - 2*x*y", &core).unwrap() {
            Elem::Bi(p) => p,
            _ => unreachable!(),
        },
        match parse_elem("x^2*y - 2*y^2 + x", &core).unwrap() {
            Elem::Bi(p) => p,
            _ => unreachable!(),
        },
    ];
    c.bench_function("buchberger classic pair", |b| {
        b.iter(|| buchberger(black_box(&gens), DEFAULT_DEGREE_CAP).unwrap())
    });
}

fn bench_tower(c: &mut Criterion) {
    let core = CoreRing::Integers;
    let m = BoundedComplex::cyclic(
        RingExpr::base(BaseRing::Integers),
        core.clone(),
        &core.from_i64(12),
    );
    c.bench_function("completion tower window 4", |b| {
        b.iter(|| functors::complete_report(black_box(&int_prime(2)), &m, 4).unwrap())
    });
}

criterion_group!(benches, bench_snf, bench_hasse, bench_groebner, bench_tower);
criterion_main!(benches);
