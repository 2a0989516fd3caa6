use colorfact::asymptotics::average_order_report;
use colorfact::counting::sequence;
use colorfact::enumeration::{enum_colored, Flags, DEFAULT_GUARD};
use colorfact::{
    colored_atmost, factorize, ordered_colored, CountFamily, FamilyKind, Method, Unordered,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn unordered_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("A_3");
    for n in [720_720u64, 1 << 40, 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19] {
        for (name, method) in [
            ("dirichlet", Method::Dirichlet),
            ("recursion", Method::Recursion),
        ] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| colored_atmost(black_box(n), 3, Unordered::Plain, method).unwrap())
            });
        }
    }
    group.finish();
}

fn ordered_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("At_2");
    let n = 720_720u64;
    for (name, method) in [
        ("dirichlet", Method::Dirichlet),
        ("recursion", Method::Recursion),
        ("closed", Method::Closed),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| ordered_colored(black_box(n), 2, method).unwrap())
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let family = CountFamily::new(FamilyKind::B, 2, None).unwrap();
    c.bench_function("table B_2 n<=2000", |b| {
        b.iter(|| sequence(&family, None, black_box(2000)).unwrap())
    });
    c.bench_function("factorize 1..10000", |b| {
        b.iter(|| {
            (1..=10_000u64)
                .map(|n| factorize(n).unwrap().big_omega())
                .sum::<u32>()
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let flags = Flags {
        ordered: true,
        distinct: false,
        exact: false,
    };
    c.bench_function("enumerate ordered 720 l=2", |b| {
        b.iter(|| {
            enum_colored(black_box(720), 2, flags, DEFAULT_GUARD)
                .unwrap()
                .len()
        })
    });
}

fn asymptotics(c: &mut Criterion) {
    let mut group = c.benchmark_group("average order");
    group.sample_size(10);
    group.bench_function("l=2 x=1e5", |b| {
        b.iter(|| average_order_report(2, black_box(100_000)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    unordered_methods,
    ordered_methods,
    tables,
    enumeration,
    asymptotics
);
criterion_main!(benches);
