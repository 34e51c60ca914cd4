use std::time::Instant;
use tautring::config::EngineConfig;
use tautring::k3::K3PowerRing;

#[test]
#[ignore = "best-effort scale probe; run explicitly"]
fn r5_injectivity_timing() {
    let t0 = Instant::now();
    let ring = K3PowerRing::build(5, 4);
    let model = ring.model(&EngineConfig::default());
    for k in 0..=10u32 {
        let t = Instant::now();
        let dim = ring.ring.graded_dimension(k);
        let t_dim = t.elapsed();
        let t = Instant::now();
        let rank = model.gram_rank(k);
        let t_rank = t.elapsed();
        println!("k={k}: dim={dim} ({t_dim:?}), rank={rank} ({t_rank:?})");
        assert_eq!(dim, rank, "mismatch at k={k}");
    }
    println!("total: {:?}", t0.elapsed());
}
