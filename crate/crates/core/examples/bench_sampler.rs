// temporary benchmark
use geoquad_core::sampler::TreeSampler;
use rand_chacha::rand_core::SeedableRng;

fn main() {
    let n = 10_000;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut s = TreeSampler::new(n);
    let t0 = std::time::Instant::now();
    let count = 30u32;
    for _ in 0..count {
        let t = s.sample(&mut rng);
        std::hint::black_box(&t);
    }
    let dt = t0.elapsed();
    println!("{count} samples at n={n}: {dt:.2?} total, {:.1?}/sample, attempts/sample = {:.0}",
        dt / count, s.attempts as f64 / count as f64);
    let t0 = std::time::Instant::now();
    for _ in 0..5 {
        let t = s.sample(&mut rng);
        let tq = geoquad_core::bijection::tree_to_quad(&t);
        let origin = tq.quad.root_tail().unwrap();
        let labels = geoquad_core::map::bfs_labels(&tq.quad.map, origin);
        let g = geoquad_core::geodesic::count_geodesics_of_length(&tq.quad, &labels, 4);
        std::hint::black_box(g);
    }
    println!("with map+observable: {:.1?}/sample", t0.elapsed() / 5);
}
