use super::*;
use alloc::vec;

fn params(delta: f64, alpha: f64, beta: f64, seed: u64) -> IncidenceParams {
    IncidenceParams {
        r1: 20.0,
        r2: 30.0,
        gamma: 0.1,
        delta,
        alpha,
        beta,
        seed,
    }
}

fn single(points: usize, r: f64) -> IncidenceInstance {
    let c = [0.0, 0.0];
    IncidenceInstance {
        r1: r,
        r2: r,
        gamma: 0.1,
        delta: 1.0 / 16.0,
        alpha: 0.0,
        beta: libm::log(points as f64) / libm::log(16.0),
        centers: PointSet::from_flat(2, c.to_vec()).unwrap(),
        circles: vec![(
            circle_points(&c, r, points, 0.0).unwrap(),
            circle_points(&c, r, points, 0.1).unwrap(),
        )],
    }
}

#[test]
fn close_centres_are_reported() {
    let mut inst = gen_incidence(&params(1.0 / 16.0, 0.0, 0.5, 1)).unwrap();
    inst.centers = PointSet::from_flat(2, vec![0.0, 0.0, 50.0 / 16.0, 0.0]).unwrap();
    inst.circles.push(inst.circles[0].clone());
    let rep = check_incidence_hypotheses(&inst);
    let v: Vec<&Violation> = rep
        .violations
        .iter()
        .filter(|v| v.hypothesis == Hypothesis::Centers)
        .collect();
    assert!(
        v.iter()
            .any(|v| v.center == Some(0) && v.detail.contains("centres 0 and 1")),
        "{v:?}"
    );
}

#[test]
fn equally_spaced_circles_pass() {
    let inst = single(8, 24.0);
    let rep = check_incidence_hypotheses(&inst);
    assert!(rep.holds(), "{rep:?}");
    assert!(!rep.degenerate);
}

#[test]
fn empty_centres_are_degenerate() {
    let inst = IncidenceInstance {
        r1: 20.0,
        r2: 30.0,
        gamma: 0.1,
        delta: 0.5,
        alpha: 0.0,
        beta: 0.0,
        centers: PointSet::new(2).unwrap(),
        circles: vec![],
    };
    let rep = check_incidence_hypotheses(&inst);
    assert!(rep.holds() && rep.degenerate);
    let c = incidence_count(&inst, &Guard::default()).unwrap();
    assert_eq!((c.count, c.lower), (0, 0));
    let b = separated_points_bound(&inst).unwrap();
    assert_eq!((b.net_size, b.bound), (0, 1.0));
}

#[test]
fn parameter_violations() {
    let mut inst = single(8, 24.0);
    inst.gamma = 10.0;
    let rep = check_incidence_hypotheses(&inst);
    assert!(rep
        .violations
        .iter()
        .any(|v| v.hypothesis == Hypothesis::Parameters));
    let mut inst = single(8, 24.0);
    inst.circles[0].0 = inst.circles[0].0.scaled(1.01);
    let rep = check_incidence_hypotheses(&inst);
    assert!(rep
        .violations
        .iter()
        .any(|v| v.hypothesis == Hypothesis::CirclePoints));
}

#[test]
fn single_centre_matches_hand_count() {
    let inst = single(8, 24.0);
    let got = incidence_count(&inst, &Guard::default()).unwrap();
    // 8 × 8 pairs of circle points, each in its own cell
    let cells = inst.cells();
    assert_eq!(cells.len(), 16);
    let lo = inst.r2 - inst.r1 + inst.gamma;
    let hi = inst.r2 + inst.r1 - inst.gamma;
    let c = [0.0, 0.0];
    let mut want = 0;
    for &q1 in &cells {
        for &q2 in &cells {
            let (a, b) = (cell_center(q1, inst.delta), cell_center(q2, inst.delta));
            let d = dist(&a, &b);
            if in_annulus(&a, &c, inst.r1, inst.delta)
                && in_annulus(&b, &c, inst.r2, inst.delta)
                && d > lo
                && d < hi
            {
                want += 1;
            }
        }
    }
    assert_eq!(got.count, want);
    assert!(want > 0 && want <= 256);
    assert_eq!(got.bounds_hold, Some(true));
    assert_eq!(
        got,
        incidence_count_naive(&inst, &Guard::default()).unwrap()
    );
}

#[test]
fn far_apart_copies_double() {
    let one = single(8, 24.0);
    let mut two = one.clone();
    let shift = [1000.0, 0.0];
    two.centers = PointSet::from_flat(2, vec![0.0, 0.0, shift[0], shift[1]]).unwrap();
    let (a, b) = &one.circles[0];
    two.circles
        .push((a.translated(&shift).unwrap(), b.translated(&shift).unwrap()));
    let c1 = incidence_count(&one, &Guard::default()).unwrap().count;
    let c2 = incidence_count(&two, &Guard::default()).unwrap().count;
    assert_eq!(c2, 2 * c1);
}

#[test]
fn generated_instances_satisfy_the_lemma() {
    for (k, seed) in (4..=6).zip(10..) {
        let delta = libm::pow(2.0, -f64::from(k));
        let inst = gen_incidence(&params(delta, 0.5, 0.75, seed)).unwrap();
        assert!(check_incidence_hypotheses(&inst).holds());
        let fast = incidence_count(&inst, &Guard::default()).unwrap();
        assert_eq!(fast.bounds_hold, Some(true), "{fast:?}");
        assert_eq!(
            fast,
            incidence_count_naive(&inst, &Guard::default()).unwrap()
        );
    }
}

#[test]
fn generation_is_deterministic_and_guarded() {
    let p = params(1.0 / 32.0, 0.5, 0.5, 3);
    assert_eq!(gen_incidence(&p).unwrap(), gen_incidence(&p).unwrap());
    let too_many = params(1.0 / 4.0, 0.0, 3.0, 1);
    assert!(matches!(
        gen_incidence(&too_many),
        Err(Error::Generation(_))
    ));
    let mut bad = p;
    bad.gamma = 6.0;
    assert!(gen_incidence(&bad).is_err());
    let inst = gen_incidence(&params(1.0 / 256.0, 0.5, 0.9, 1)).unwrap();
    let tight = Guard {
        max_work: 1000,
        ..Guard::default()
    };
    assert!(matches!(
        incidence_count(&inst, &tight),
        Err(Error::Guard { .. })
    ));
}

#[test]
fn one_centre_sixteen_points_ratio() {
    let inst = gen_incidence(&params(1.0 / 16.0, 0.0, 1.0, 2)).unwrap();
    let b = separated_points_bound(&inst).unwrap();
    assert_eq!(b.bound, 16.0);
    assert!(b.net_size >= 16);
    assert!(b.ratio >= 1.0 && b.ratio <= 2.0);
}

// Sample the annulus about the origin near both circle crossings and check every point
// of T_{r1}(0) ∩ T_{r2}(x2) falls in one of the two squares of side Aδ.
#[test]
fn annulus_squares_cover_the_intersection() {
    let mut rng = Prng::new(11);
    for (r1, r2) in [(20.0, 30.0), (24.0, 24.0)] {
        let gamma = 0.1;
        let delta = 1.0 / 256.0;
        let a = annulus_constant(r1, r2, gamma).unwrap();
        let half = 0.5 * a * delta;
        let (lo, hi) = (r2 - r1 + gamma, r2 + r1 - gamma);
        for _ in 0..200 {
            let d = rng.uniform(lo, hi);
            let x2 = [d, 0.0];
            // crossing points of the two circles
            let px = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            let py = libm::sqrt((r1 * r1 - px * px).max(0.0));
            let mut hits = 0;
            for sign in [1.0, -1.0] {
                let theta = libm::atan2(sign * py, px);
                let cos_phi = (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2);
                let sin_phi = libm::sqrt(1.0 - cos_phi * cos_phi);
                let window = 2.0 * (6.0 * delta / sin_phi) / r1;
                for _ in 0..400 {
                    let rho = rng.uniform(r1 - 1.5 * delta, r1 + 1.5 * delta);
                    let t = theta + rng.uniform(-window, window);
                    let c = [rho * libm::cos(t), rho * libm::sin(t)];
                    if in_annulus(&c, &x2, r2, delta) {
                        hits += 1;
                        let near = [[px, py], [px, -py]].iter().any(|q| {
                            libm::fabs(c[0] - q[0]) <= half && libm::fabs(c[1] - q[1]) <= half
                        });
                        assert!(near, "r = ({r1}, {r2}), d = {d}, c = {c:?}");
                    }
                }
            }
            assert!(hits > 0);
        }
    }
}

#[test]
fn annulus_constant_errors() {
    assert!(annulus_constant(1.0, 2.0, 1.5).is_err());
    assert!(annulus_constant(20.0, 30.0, 0.1).unwrap() > 12.0);
}
