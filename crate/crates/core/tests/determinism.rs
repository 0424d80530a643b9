mod common;

use lightscope::apparatus::full_grid;
use lightscope::patterns::{QuadratureSettings, SlitField};
use lightscope::photon_modes::SincLens;

fn run(threads: usize, lambda: f64) -> Vec<Vec<u64>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let cfg = common::at_lambda(lambda);
        let f = SlitField::compute(&cfg, &full_grid(&cfg), &QuadratureSettings::default()).unwrap();
        let k = cfg.photon_wavenumber();
        let mut out = vec![
            f.no_photon().unwrap().coherent,
            f.decohered().unwrap(),
            f.farfield_partial(0.7 * k).unwrap().atom_pattern,
            f.imaging_partial(0.5).unwrap().atom_pattern,
        ];
        if lambda >= 1.0 {
            out.push(f.imaging_marginal(&SincLens::new(lambda), 2.0).unwrap());
        }
        out.iter()
            .map(|p| p.values().iter().map(|v| v.to_bits()).collect())
            .collect()
    })
}

#[test]
fn bit_identical_across_worker_counts() {
    for lambda in [0.1, 10.0] {
        let one = run(1, lambda);
        for threads in [2, 4, 7] {
            assert!(one == run(threads, lambda), "lambda {lambda}, {threads} threads");
        }
    }
}
