use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use k2modsym::harness::{run_check, CheckKind, CheckSpec, Workspace};
use k2modsym::modsym::{hecke_t_matrix, HomologyPresentation};
use k2modsym::par;

fn modes(c: &mut Criterion, name: &str, f: impl Fn()) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    for (label, on) in [("parallel", true), ("sequential", false)] {
        group.bench_function(label, |b| {
            par::set_parallel(on);
            b.iter(&f);
        });
    }
    group.finish();
    par::set_parallel(true);
}

fn benches(c: &mut Criterion) {
    modes(c, "theorem1_9_3", || {
        let ws = Workspace::new(None);
        black_box(run_check(&ws, &CheckSpec::new(CheckKind::Theorem1Divides, 9).with_p(3)));
    });
    modes(c, "welldefined_16", || {
        let ws = Workspace::new(None);
        black_box(run_check(&ws, &CheckSpec::new(CheckKind::Welldefined, 16)));
    });
    let pres = HomologyPresentation::new(40).unwrap();
    modes(c, "hecke_t7_level40", || {
        black_box(hecke_t_matrix(&pres, 7).unwrap());
    });
    modes(c, "lemma41_200", || {
        black_box(k2modsym::gm2k1::lemma41_trials(6, 5, 200, 1).unwrap());
    });
}

criterion_group!(parallel_vs_sequential, benches);
criterion_main!(parallel_vs_sequential);
