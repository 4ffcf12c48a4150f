use criterion::{black_box, criterion_group, criterion_main, Criterion};

use freequot_core::autos::builtin_group;
use freequot_core::cyclo::CycloNum;
use freequot_core::geometry::{group_fixed_locus, lefschetz_sum};
use freequot_core::group::{closure, identify_isomorphism_type, DEFAULT_CAP};
use freequot_core::les::{les_chase, LesDescription};
use freequot_core::multihomog::{action_matrix, f1, LiftedAuto};

fn cyclotomic(c: &mut Criterion) {
    let a = CycloNum::from_int(3) + CycloNum::zeta_pow(3);
    let b = CycloNum::from_int(-2) + CycloNum::zeta_pow(5);
    c.bench_function("cyclo_mul", |bench| bench.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("cyclo_inv", |bench| bench.iter(|| black_box(&a).inv()));
}

fn groups(c: &mut Criterion) {
    let gens = builtin_group("z4sz4").unwrap();
    c.bench_function("closure_z4sz4", |bench| {
        bench.iter(|| closure(black_box(&gens), DEFAULT_CAP).unwrap())
    });
    c.bench_function("identify_z4sz4", |bench| {
        bench.iter(|| identify_isomorphism_type(&closure(&gens, DEFAULT_CAP).unwrap()).unwrap())
    });
    let g = closure(&gens, DEFAULT_CAP).unwrap();
    c.bench_function("fixed_locus_z4sz4", |bench| {
        bench.iter(|| group_fixed_locus(black_box(&g)).unwrap())
    });
    c.bench_function("lefschetz_element", |bench| {
        bench.iter(|| lefschetz_sum(black_box(g.element(3))).unwrap())
    });
}

fn sections(c: &mut Criterion) {
    let lift = LiftedAuto::canonical(&builtin_group("z4sz4").unwrap()[0]);
    c.bench_function("action_matrix_1111", |bench| {
        bench.iter(|| action_matrix(black_box(&lift), [1; 4]).unwrap())
    });
    c.bench_function("action_matrix_2222", |bench| {
        bench.iter(|| action_matrix(black_box(&lift), [2; 4]).unwrap())
    });
    let p = f1();
    c.bench_function("f1_squared", |bench| bench.iter(|| black_box(&p) * black_box(&p)));
}

fn cohomology(c: &mut Criterion) {
    let desc = LesDescription::deformation_default();
    c.bench_function("les_chase", |bench| bench.iter(|| les_chase(black_box(&desc)).unwrap()));
}

criterion_group!(benches, cyclotomic, groups, sections, cohomology);
criterion_main!(benches);
