use super::*;
use crate::generators::{gen_grid, gen_ifs, gen_integer_grid, gen_random, IfsSpec};
use crate::grid::geometric_ladder;
use alloc::vec;
use proptest::prelude::*;

fn line(xs: &[f64]) -> PointSet {
    PointSet::from_flat(1, xs.to_vec()).unwrap()
}

fn dists(set: &SignatureSet) -> Vec<Vec<f64>> {
    set.signatures()
        .iter()
        .map(|s| s.dists().to_vec())
        .collect()
}

#[test]
fn distance_set_examples() {
    assert_eq!(
        dists(&distance_set(&line(&[0.0, 1.0, 3.0]), 0.0).unwrap()),
        vec![vec![1.0], vec![2.0], vec![3.0]]
    );
    assert_eq!(
        distance_set(&gen_grid(3, 2).unwrap(), 0.0).unwrap().len(),
        5
    );
    assert!(distance_set(&line(&[0.5]), 0.0).unwrap().is_empty());
    let q = distance_set(&line(&[0.0, 1.0, 3.0]), 0.5).unwrap();
    assert_eq!(
        q.sorted_cells()
            .unwrap()
            .iter()
            .map(|c| c[0])
            .collect::<Vec<_>>(),
        vec![2, 4, 6]
    );
}

#[test]
fn pinned_examples() {
    let circle = crate::generators::gen_circle(&[0.0, 0.0], 1.0, 12).unwrap();
    let p = pinned_distance_set(&circle, &[0.0, 0.0], 1e-6).unwrap();
    assert_eq!(p.sorted_cells().unwrap().len(), 1);
    assert_eq!(
        dists(&pinned_distance_set(&line(&[0.0, 1.0, 3.0]), &[0.0], 0.0).unwrap()),
        vec![vec![1.0], vec![3.0]]
    );
    assert!(
        pinned_distance_set(&PointSet::new(2).unwrap(), &[0.0, 0.0], 0.0)
            .unwrap()
            .is_empty()
    );
    assert!(pinned_distance_set(&line(&[0.0]), &[0.0, 0.0], 0.0).is_err());
}

#[test]
fn triangle_examples() {
    let g = Guard::default();
    let t = triangle_set(
        &PointSet::from_flat(2, vec![0.0, 0.0, 3.0, 0.0, 0.0, 4.0]).unwrap(),
        0.0,
        &g,
    )
    .unwrap();
    assert_eq!(dists(&t), vec![vec![3.0, 4.0, 5.0]]);
    assert_eq!(t.ordered_count(), Some(6));

    let h = libm::sqrt(3.0) / 2.0;
    let eq = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.5, h]).unwrap();
    assert_eq!(
        triangle_set(&eq, 1e-9, &g).unwrap().sorted_cells().unwrap()[0][..3],
        [1_000_000_000; 3]
    );

    let exact_eq =
        PointSet::from_flat(3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let t = triangle_set(&exact_eq, 0.0, &g).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.ordered_count(), Some(1));

    let t = triangle_set(&line(&[0.0, 1.0, 3.0]), 0.0, &g).unwrap();
    assert_eq!(dists(&t), vec![vec![1.0, 2.0, 3.0]]);
    assert_eq!(t.ordered_count(), Some(6));
}

#[test]
fn sorted_distances_do_not_determine_quadrilaterals() {
    let ps = PointSet::from_flat(
        2,
        vec![3.0, 7.0, 5.0, 0.0, 7.0, 0.0, 4.0, 9.0, 8.0, 2.0, 8.0, 7.0],
    )
    .unwrap();
    let four = simplex_set(&ps, 4, 0.0, &Guard::default()).unwrap();
    assert_eq!((four.len(), four.ordered_count()), (14, Some(348)));
}

#[test]
fn simplex_examples() {
    let g = Guard::default();
    let tet = PointSet::from_flat(
        3,
        vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0],
    )
    .unwrap();
    let s = simplex_set(&tet, 4, 0.0, &g).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s.squared_signatures().unwrap()[0].dists(), &[2.0; 6]);
    assert_eq!(s.ordered_count(), Some(1));

    // unit-edge tetrahedron from floats lands in the single cell of edge 1
    let r = libm::sqrt(2.0 / 3.0);
    let unit = PointSet::from_flat(
        3,
        vec![
            0.0,
            0.0,
            0.0,
            1.0,
            0.0,
            0.0,
            0.5,
            libm::sqrt(3.0) / 2.0,
            0.0,
            0.5,
            libm::sqrt(3.0) / 6.0,
            r,
        ],
    )
    .unwrap();
    let s = simplex_set(&unit, 4, 1e-6, &g).unwrap();
    assert_eq!(s.sorted_cells().unwrap(), vec![[1_000_000; 6]]);

    let ps = gen_random(30, 2, 4).unwrap();
    assert_eq!(
        simplex_set(&ps, 2, 0.01, &g).unwrap(),
        distance_set(&ps, 0.01).unwrap()
    );

    let square = gen_grid(2, 2).unwrap();
    let s = simplex_set(&square, 3, 0.0, &g).unwrap();
    assert_eq!(s.squared_signatures().unwrap()[0].dists(), &[1.0, 1.0, 2.0]);
    assert_eq!(s.len(), 1);
    assert!(simplex_set(&square, 5, 0.0, &g).is_err());
    assert!(simplex_set(&square, 3, -1.0, &g).is_err());
}

#[test]
fn coincident_points_are_skipped() {
    let ps = line(&[0.0, 0.0, 1.0]);
    assert!(triangle_set(&ps, 0.0, &Guard::default())
        .unwrap()
        .is_empty());
    assert!(triangle_set(&ps, 0.1, &Guard::default())
        .unwrap()
        .is_empty());
    assert_eq!(distance_set(&ps, 0.0).unwrap().len(), 1);
}

#[test]
fn guard_caps_point_count() {
    let ps = gen_random(5001, 2, 1).unwrap();
    assert!(matches!(
        triangle_set(&ps, 0.1, &Guard::default()),
        Err(Error::Guard { .. })
    ));
    assert!(matches!(
        delta_covering_profile(&ps, &[0.1], &Guard::default()),
        Err(Error::Guard { .. })
    ));
    let g = Guard::default();
    assert!(g.check_subsets(5000, 3).is_ok());
    assert!(g.check_subsets(1000, 4).is_err());
    assert!(g.check_subsets(300, 4).is_ok());
    assert!(Guard::off().check_subsets(1 << 20, 4).is_ok());
}

#[test]
fn profile_examples() {
    let g = Guard::default();
    let t = PointSet::from_flat(2, vec![0.0, 0.0, 3.0, 0.0, 0.0, 4.0]).unwrap();
    assert_eq!(
        delta_covering_profile(&t, &[0.9, 0.5, 0.1], &g)
            .unwrap()
            .counts(),
        vec![1, 1, 1]
    );
    assert_eq!(
        delta_covering_profile(&line(&[0.0, 1.0, 3.0]), &[0.5], &g)
            .unwrap()
            .counts(),
        vec![1]
    );

    let cantor = gen_ifs(&IfsSpec::cantor(5)).unwrap();
    let d = 1.0 / 27.0;
    let p = delta_covering_profile(&cantor, &[d], &g).unwrap();
    assert_eq!(p.counts(), vec![naive::delta_count(&cantor, d)]);
    assert!(delta_covering_profile(&cantor, &[0.1, 0.2], &g).is_err());
}

#[test]
fn cantor_line_delta_counts() {
    // Integer oracle: gaps |n_i - n_j| of the depth-8 numerators, floored by 3^(8-k).
    let cantor = gen_ifs(&IfsSpec::cantor(8)).unwrap().embed(2).unwrap();
    let p =
        delta_covering_profile(&cantor, &geometric_ladder(3.0, 1, 5), &Guard::default()).unwrap();
    assert_eq!(p.counts(), vec![4, 25, 172, 1201, 8404]);
}

#[test]
fn integer_grid_triangle_counts() {
    // m = 3..6 of the brute-force sequence 10, 33, 88, 185, ...
    let want = [10, 33, 88, 185];
    for (m, &w) in (3..=6).zip(&want) {
        let t = triangle_set(&gen_integer_grid(m, 2).unwrap(), 0.0, &Guard::default()).unwrap();
        assert_eq!(t.len(), w, "m = {m}");
    }
}

#[test]
fn ordered_tuples_match_enumeration() {
    let ps = gen_integer_grid(3, 2).unwrap();
    let t = triangle_set(&ps, 0.0, &Guard::default()).unwrap();
    let tuples = ordered_tuples(&ps, 3, &Guard::default()).unwrap();
    assert_eq!(t.ordered_count(), Some(tuples.len() as u64));
    assert_eq!(tuples.len(), naive::ordered_triangle_count(&ps));
    assert!(ordered_tuples(&line(&[0.0, 1.0]), 3, &Guard::default())
        .unwrap()
        .is_empty());
}

#[test]
fn line_split_on_cantor() {
    let cantor = gen_ifs(&IfsSpec::cantor(8)).unwrap();
    let pairs = [3, 15, 63, 255, 1023, 4095];
    for (k, &want) in (1..=6).zip(&pairs) {
        let s = line_split_pairs(&cantor, libm::pow(3.0, -(k as f64))).unwrap();
        let n = s.covering as f64;
        assert_eq!(s.covering, 1 << k);
        assert_eq!(s.pair_cells, want, "k = {k}");
        assert!(s.pair_cells as f64 >= 0.25 * n * n - n);
    }
    assert!(line_split_pairs(&PointSet::new(1).unwrap(), 0.1).is_err());
    assert!(line_split_pairs(&gen_grid(2, 2).unwrap(), 0.1).is_err());
    let one = line_split_pairs(&line(&[0.5]), 0.1).unwrap();
    assert_eq!((one.pair_cells, one.covering), (0, 1));
}

fn small_int_set(dim: usize, max_n: usize) -> impl Strategy<Value = PointSet> {
    proptest::collection::vec(0i32..12, 0..=dim * max_n).prop_map(move |mut v| {
        v.truncate(v.len() / dim * dim);
        PointSet::from_flat(dim, v.into_iter().map(f64::from).collect()).unwrap()
    })
}

fn as_keys(set: &SignatureSet) -> Vec<Vec<f64>> {
    set.squared_signatures()
        .unwrap()
        .iter()
        .map(|s| s.dists().to_vec())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn streaming_equals_naive(seed in 0u64..10_000, n in 0usize..40, dim in 1usize..=3, q in 0.01f64..0.4) {
        let ps = gen_random(n, dim, seed).unwrap();
        for k in 2..=4 {
            let fast = simplex_set(&ps, k, q, &Guard::default()).unwrap();
            prop_assert_eq!(fast.sorted_cells().unwrap(), naive::quantized_cells(&ps, k, q));
            let exact = simplex_set(&ps, k, 0.0, &Guard::default()).unwrap();
            prop_assert_eq!(as_keys(&exact), naive::exact_squared(&ps, k));
        }
    }

    #[test]
    fn ordered_count_brackets(ps in small_int_set(2, 9)) {
        let t = triangle_set(&ps, 0.0, &Guard::default()).unwrap();
        let oc = t.ordered_count().unwrap() as usize;
        prop_assert_eq!(oc, naive::ordered_triangle_count(&ps));
        prop_assert!(t.len() <= oc && oc <= 6 * t.len());
        let four = simplex_set(&ps, 4, 0.0, &Guard::default()).unwrap();
        let oc4 = four.ordered_count().unwrap() as usize;
        // no upper bound: six sorted distances do not fix a 4-point configuration
        prop_assert!(four.len() <= oc4);
    }

    #[test]
    fn signatures_are_sorted_triangles(seed in 0u64..10_000, n in 3usize..25) {
        let ps = gen_random(n, 2, seed).unwrap();
        for s in triangle_set(&ps, 0.0, &Guard::default()).unwrap().signatures() {
            let d = s.dists();
            prop_assert!(d[0] > 0.0 && d[0] <= d[1] && d[1] <= d[2]);
            prop_assert!(d[2] <= (d[0] + d[1]) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn scaling_covariance(ps in small_int_set(2, 10), lambda in 1i32..6) {
        let l = f64::from(lambda);
        let t = triangle_set(&ps, 0.0, &Guard::default()).unwrap();
        let ts = triangle_set(&ps.scaled(l), 0.0, &Guard::default()).unwrap();
        let scaled: Vec<Vec<f64>> = as_keys(&t).into_iter().map(|v| v.into_iter().map(|x| x * l * l).collect()).collect();
        prop_assert_eq!(as_keys(&ts), scaled);
    }

    #[test]
    fn isometry_invariance(ps in small_int_set(3, 10), tx in -5i32..5, ty in -5i32..5, tz in -5i32..5, perm in 0usize..6) {
        let axes = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
        let t = [f64::from(tx), f64::from(ty), f64::from(tz)];
        let moved = ps.map_points(|p, o| {
            for (i, &a) in axes.iter().enumerate() {
                o[i] = p[a] + t[i];
            }
        });
        for k in 2..=4 {
            prop_assert_eq!(
                simplex_set(&ps, k, 0.0, &Guard::default()).unwrap(),
                simplex_set(&moved, k, 0.0, &Guard::default()).unwrap()
            );
        }
    }

    #[test]
    fn monotone_under_inclusion(seed in 0u64..10_000, n in 0usize..30, keep in proptest::collection::vec(any::<bool>(), 30)) {
        let qs = gen_random(n, 2, seed).unwrap();
        let idx: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
        let ps = qs.select(&idx);
        for q in [0.0, 0.05] {
            let small = triangle_set(&ps, q, &Guard::default()).unwrap();
            let big = triangle_set(&qs, q, &Guard::default()).unwrap();
            prop_assert!(small.is_subset(&big));
        }
    }

    #[test]
    fn profile_matches_per_scale_sets(seed in 0u64..10_000, n in 0usize..40) {
        let ps = gen_random(n, 2, seed).unwrap();
        let scales = [0.5, 0.1, 0.02];
        let p = delta_covering_profile(&ps, &scales, &Guard::default()).unwrap();
        for (&(s, c), q) in p.entries().iter().zip(scales) {
            prop_assert_eq!(s, q);
            prop_assert_eq!(c, triangle_set(&ps, q, &Guard::default()).unwrap().len());
        }
    }

    #[test]
    fn line_split_product_bound(xs in proptest::collection::vec(0.0f64..1.0, 1..80), k in 1i32..6) {
        let delta = libm::pow(2.0, -f64::from(k));
        let s = line_split_pairs(&line(&xs), delta).unwrap();
        prop_assert!(s.pair_cells >= s.left_cells.div_ceil(2) * s.right_cells.div_ceil(2));
        prop_assert!(s.left_cells + s.right_cells + 1 >= s.covering);
    }
}
