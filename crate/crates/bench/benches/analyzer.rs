use std::collections::BTreeSet;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use carpetcut_core::decider::{decide_cut_points, essential_exists_at_depth, is_cut_point};
use carpetcut_core::gsc::RationalPoint;
use carpetcut_core::hata::{build_hata, chi, essential_cut_vertices};
use carpetcut_core::presets::{resolve, PresetId};
use carpetcut_core::radix::intersect_class;
use carpetcut_core::window::{window_initial, window_step};
use carpetcut_core::{adjacency, Digit};

fn bench_radix(c: &mut Criterion) {
    let subsets: Vec<BTreeSet<u32>> = (1u32..8)
        .map(|mask| (0..3).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    c.bench_function("radix_all_49_pairs_base3", |b| {
        b.iter(|| {
            for x in &subsets {
                for y in &subsets {
                    black_box(intersect_class(x, y, 3).unwrap());
                }
            }
        })
    });
}

fn bench_neighbor_table(c: &mut Criterion) {
    let spec = resolve(&PresetId::OddCuts(3)).unwrap();
    c.bench_function("neighbor_table_oddcuts3", |b| {
        b.iter(|| black_box(adjacency::neighbor_table(&spec)))
    });
}

fn bench_hata(c: &mut Criterion) {
    let spec = resolve(&PresetId::Goodcp).unwrap();
    c.bench_function("hata_build_goodcp_level4", |b| {
        b.iter(|| black_box(build_hata(&spec, 4).unwrap().edge_count()))
    });
    c.bench_function("hata_chi_goodcp_level4", |b| {
        let graph = build_hata(&spec, 4).unwrap();
        b.iter(|| black_box(chi(&graph).unwrap()))
    });
    c.bench_function("essential_goodcp_level4", |b| {
        b.iter(|| black_box(essential_cut_vertices(&spec, 4).unwrap().len()))
    });
}

fn bench_window(c: &mut Criterion) {
    let spec = resolve(&PresetId::Goodcp).unwrap();
    let bridge = Digit::new(1, 0);
    c.bench_function("window_step_goodcp_bridge", |b| {
        let state = window_initial(&spec, bridge).unwrap();
        b.iter(|| black_box(window_step(&spec, &state, bridge).unwrap()))
    });
    c.bench_function("essential_bits_goodcp", |b| {
        b.iter(|| black_box(essential_exists_at_depth(&spec).unwrap()))
    });
}

fn bench_decide(c: &mut Criterion) {
    let goodcp = resolve(&PresetId::Goodcp).unwrap();
    let sierpinski = resolve(&PresetId::Sierpinski).unwrap();
    c.bench_function("decide_goodcp", |b| {
        b.iter(|| black_box(decide_cut_points(&goodcp).unwrap()))
    });
    c.bench_function("decide_sierpinski", |b| {
        b.iter(|| black_box(decide_cut_points(&sierpinski).unwrap()))
    });
}

fn bench_point_test(c: &mut Criterion) {
    let spec = resolve(&PresetId::OddCuts(3)).unwrap();
    let point = RationalPoint::from_ints(1, 3, 1, 2).unwrap();
    c.bench_function("is_cut_point_oddcuts3_pinch", |b| {
        b.iter(|| black_box(is_cut_point(&spec, &point).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_radix,
    bench_neighbor_table,
    bench_hata,
    bench_window,
    bench_decide,
    bench_point_test
);
criterion_main!(benches);
