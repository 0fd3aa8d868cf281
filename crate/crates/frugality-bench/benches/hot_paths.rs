//! Benchmarks for the exact-arithmetic hot paths: the four-bound solver on
//! curated instances, the tightness-cover sweep behind the no-transfer
//! minimum, the rational max-flow and simplex kernels, and the local-ratio
//! auction with its threshold payments.

use criterion::{criterion_group, criterion_main, Criterion};

use frugality::ratlp::{max_flow, solve_lp, Capacity, FlowNetwork, LinearProgram, Relation, Sense};
use frugality::{
    all_bounds, allocate, paper_instance, payment_bound, random_instance, threshold_payment,
    x3c_reduce, BoundKind, Caps, Rat, RandomKind, Rule, X3CInstance,
};

fn bench_all_bounds(c: &mut Criterion) {
    let caps = Caps::default();
    let (diamond, diamond_costs) = paper_instance("diamond-example3").unwrap();
    c.bench_function("all_bounds/diamond-example3", |b| {
        b.iter(|| all_bounds(&diamond, &diamond_costs, &caps).unwrap())
    });

    let (tail, tail_costs) = paper_instance("clique-tail:8").unwrap();
    c.bench_function("all_bounds/clique-tail:8", |b| {
        b.iter(|| all_bounds(&tail, &tail_costs, &caps).unwrap())
    });
}

fn bench_x3c_ntumin(c: &mut Criterion) {
    let caps = Caps { cover_constraints: 64, ..Caps::default() };
    let inst = X3CInstance::new(6, vec![[0, 1, 2], [2, 3, 4]]).unwrap();
    let (system, costs, _) = x3c_reduce(&inst);
    let mut group = c.benchmark_group("ntumin");
    group.sample_size(20);
    group.bench_function("x3c-two-triples", |b| {
        b.iter(|| payment_bound(&system, &costs, BoundKind::NtuMin, &caps).unwrap())
    });
    group.finish();
}

/// A layered lattice: `width` parallel chains with rung arcs between
/// adjacent chains, rational capacities cycling through small fractions.
fn lattice_network(width: usize, depth: usize) -> (FlowNetwork, usize, usize) {
    let nodes = width * depth + 2;
    let (s, t) = (nodes - 2, nodes - 1);
    let mut net = FlowNetwork::new(nodes);
    let id = |layer: usize, lane: usize| layer * width + lane;
    let cap = |k: usize| Capacity::Finite(Rat::frac(3 + k as i64 % 5, 1 + k as i64 % 3));
    let mut k = 0;
    for lane in 0..width {
        net.add_arc(s, id(0, lane), cap(k));
        k += 1;
        net.add_arc(id(depth - 1, lane), t, cap(k));
        k += 1;
    }
    for layer in 0..depth - 1 {
        for lane in 0..width {
            net.add_arc(id(layer, lane), id(layer + 1, lane), cap(k));
            k += 1;
            if lane + 1 < width {
                net.add_arc(id(layer, lane), id(layer + 1, lane + 1), cap(k));
                k += 1;
            }
        }
    }
    (net, s, t)
}

fn bench_ratlp(c: &mut Criterion) {
    let (net, s, t) = lattice_network(4, 6);
    c.bench_function("ratlp/max_flow-lattice-4x6", |b| {
        b.iter(|| max_flow(&net, s, t).unwrap())
    });

    // A dense feasibility-heavy program: maximize the sum of 18 variables
    // under band constraints with fractional coefficients.
    let n = 18;
    let mut lp = LinearProgram::new(n, Sense::Maximize, vec![Rat::one(); n]);
    for i in 0..24 {
        let coeffs: Vec<Rat> = (0..n)
            .map(|j| Rat::frac(1 + ((i * 7 + j * 3) % 5) as i64, 1 + ((i + j) % 4) as i64))
            .collect();
        lp.push_row(coeffs, Relation::Le, Rat::int(10 + (i % 6) as i64));
    }
    for j in 0..n {
        let mut coeffs = vec![Rat::zero(); n];
        coeffs[j] = Rat::one();
        lp.push_row(coeffs, Relation::Le, Rat::frac(9, 2));
    }
    c.bench_function("ratlp/solve_lp-18x42", |b| b.iter(|| solve_lp(&lp).unwrap()));
}

fn bench_local_ratio(c: &mut Criterion) {
    let caps = Caps::default();
    let (system, costs) =
        random_instance(&RandomKind::VertexCover { max_degree: Some(5) }, 9, 11, 1..=9).unwrap();
    c.bench_function("local-ratio/allocate-n9", |b| {
        b.iter(|| allocate(&Rule::LocalRatioVc, &system, &costs, &caps).unwrap())
    });

    let winner = *allocate(&Rule::LocalRatioVc, &system, &costs, &caps)
        .unwrap()
        .iter()
        .next()
        .unwrap();
    c.bench_function("local-ratio/threshold-n9", |b| {
        b.iter(|| threshold_payment(&Rule::LocalRatioVc, &system, &costs, winner, &caps).unwrap())
    });
}

criterion_group!(
    benches,
    bench_all_bounds,
    bench_x3c_ntumin,
    bench_ratlp,
    bench_local_ratio
);
criterion_main!(benches);
