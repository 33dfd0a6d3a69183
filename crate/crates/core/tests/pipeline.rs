use trilab_core::config::{delta_covering_profile, triangle_set, Guard};
use trilab_core::dims::{box_dimension, verify_inequality};
use trilab_core::generators::{gen_grid, gen_ifs, gen_random, IfsSpec};
use trilab_core::grid::{covering_count, covering_profile, geometric_ladder};

#[test]
fn cantor_line_pipeline() {
    let ps = gen_ifs(&IfsSpec::cantor(6)).unwrap().embed(2).unwrap();
    let scales = geometric_ladder(3.0, 1, 4);
    let f = covering_profile(&ps, &scales).unwrap();
    assert_eq!(f.counts(), vec![2, 4, 8, 16]);
    let d = delta_covering_profile(&ps, &scales, &Guard::default()).unwrap();
    let r = verify_inequality(&f, &d, 1.5, 0.0, 0.0).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(box_dimension(&d).unwrap().slope > box_dimension(&f).unwrap().slope);
}

#[test]
fn random_clouds_fill_coarse_cells() {
    for seed in [1, 2, 3] {
        assert_eq!(
            covering_count(&gen_random(10_000, 2, seed).unwrap(), 0.25).unwrap(),
            16
        );
    }
}

#[test]
fn grid_triangles_grow_with_resolution() {
    let g = Guard::default();
    let coarse = triangle_set(&gen_grid(4, 2).unwrap(), 1.0 / 64.0, &g)
        .unwrap()
        .len();
    let fine = triangle_set(&gen_grid(4, 2).unwrap(), 1.0 / 256.0, &g)
        .unwrap()
        .len();
    assert!(fine >= coarse && coarse > 0);
}
