use erdos_core::enumerate::enumerate_sequential;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let fix = std::env::args().nth(2).as_deref() != Some("all");
    let t = std::time::Instant::now();
    let r = enumerate_sequential(n, fix).unwrap();
    println!(
        "n={n} erdos={} admissible={} shrink={} neg={} excess={} both={} simplicial={} simplicial_fail={} ({:?})",
        r.erdos_count, r.admissible_classes, r.shrink_count, r.negative_count, r.outer_excess_count,
        r.both_count, r.simplicial_admissible, r.simplicial_failures, t.elapsed()
    );
}
