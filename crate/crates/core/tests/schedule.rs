#![cfg(feature = "parallel")]

use trilab_core::config::{delta_covering_profile, simplex_set, triangle_set, Guard};
use trilab_core::dims::energy_integral;
use trilab_core::generators::gen_random;
use trilab_core::grid::geometric_ladder;
use trilab_core::lab::bilinear_separation;

fn pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = Guard::default();
    let ps = gen_random(150, 2, 9).unwrap();
    let run = || {
        (
            triangle_set(&ps, 1.0 / 128.0, &g).unwrap(),
            simplex_set(&ps, 3, 0.0, &g).unwrap(),
            delta_covering_profile(&ps, &geometric_ladder(2.0, 1, 6), &g).unwrap(),
            bilinear_separation(&ps, &ps, &ps, 1e-3, &g).unwrap(),
            energy_integral(&ps, &[1.0 / 150.0; 150], 0.7).unwrap(),
        )
    };
    let one = pool(1, run);
    for t in [2, 3, 4, 7] {
        let other = pool(t, run);
        assert_eq!(one.0, other.0, "{t} threads");
        assert_eq!(one.1, other.1);
        assert_eq!(one.2, other.2);
        assert_eq!(one.3, other.3);
        assert_eq!(one.4.value().to_bits(), other.4.value().to_bits());
    }
}
