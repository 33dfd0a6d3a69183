use proptest::prelude::*;
use trilab::formats::{
    format_ifs, parse_ifs, parse_points, read_points, read_profile, write_points, write_profile,
};
use trilab::incidence_file::{format_incidence, parse_incidence};
use trilab_core::generators::{gen_random, IfsSpec, SimilarityMap};
use trilab_core::grid::CoveringProfile;
use trilab_core::lab::{gen_incidence, IncidenceParams};
use trilab_core::point::PointSet;

#[test]
fn random_cloud_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let ps = gen_random(100, 2, 7).unwrap();
    let path = dir.path().join("r.csv");
    write_points(&ps, &path).unwrap();
    let back = read_points(&path).unwrap();
    assert_eq!(
        back.coords()
            .iter()
            .map(|x| x.to_bits())
            .collect::<Vec<_>>(),
        ps.coords().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
    );
    assert_eq!(parse_points("t", "0,0\n1,0\n").unwrap().len(), 2);
}

proptest! {
    #[test]
    fn points_round_trip(dim in 1usize..=3, coords in proptest::collection::vec(-1e300f64..1e300, 0..60)) {
        let n = coords.len() / dim;
        prop_assume!(n > 0);
        let ps = PointSet::from_flat(dim, coords[..n * dim].to_vec()).unwrap();
        let mut buf = Vec::new();
        trilab::formats::write_points_to(&ps, &mut buf).unwrap();
        let back = parse_points("p", std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back.coords(), ps.coords());
    }

    #[test]
    fn profiles_round_trip(counts in proptest::collection::vec(0usize..1_000_000, 1..8), base in 1.1f64..10.0) {
        let dir = tempfile::tempdir().unwrap();
        let entries = counts.iter().enumerate().map(|(i, &c)| (base.powi(-(i as i32)), c)).collect();
        let p = CoveringProfile::new(entries).unwrap();
        let path = dir.path().join("p.csv");
        write_profile(&p, &path).unwrap();
        prop_assert_eq!(read_profile(&path).unwrap(), p);
    }

    #[test]
    fn ifs_specs_round_trip(dim in 1usize..=3, maps in proptest::collection::vec((0.01f64..0.99, proptest::collection::vec(-5.0f64..5.0, 3)), 1..5), depth in 0u32..6) {
        let spec = IfsSpec {
            dim,
            maps: maps.into_iter().map(|(ratio, t)| SimilarityMap { ratio, translation: t[..dim].to_vec() }).collect(),
            depth,
            seed_point: vec![0.25; dim],
        };
        prop_assert_eq!(parse_ifs("s", &format_ifs(&spec)).unwrap(), spec);
    }

    #[test]
    fn incidence_files_round_trip(seed in 0u64..1000, alpha in 0.0f64..0.6, beta in 0.0f64..0.8) {
        let inst = gen_incidence(&IncidenceParams { r1: 20.0, r2: 30.0, gamma: 0.1, delta: 1.0 / 32.0, alpha, beta, seed }).unwrap();
        prop_assert_eq!(parse_incidence("i", &format_incidence(&inst)).unwrap(), inst);
    }
}
