mod common;

use common::*;
use invq::geometry::{dynamic_dominates, entry_dominance, farthest_query, pruning_region, rect_point_bounds, region_prunes};
use invq::index::{AccessMeter, Child};
use invq::oracle::brute_inverse;
use invq::predicate::{dynamic_skyline, holds};
use invq::query::idsq::{idsq_fast_validate, partition_skyline};
use invq::query::iknn::HullCounter;
use invq::{InverseQuerySpec, Point, Predicate, QuerySet, Rect};
use proptest::prelude::*;
use rand::Rng;

fn coords(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, d)
}

fn points_strategy(d: usize, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(coords(d), n).prop_map(|cs| cs.iter().enumerate().map(|(i, c)| pt(i as u64, c)).collect())
}

fn rect_strategy(d: usize) -> impl Strategy<Value = Rect> {
    (coords(d), prop::collection::vec(0.0f64..5.0, d))
        .prop_map(|(lo, w)| Rect::new(lo.clone(), lo.iter().zip(&w).map(|(l, w)| l + w).collect()).unwrap())
}

fn inside(r: &Rect, u: &[f64]) -> Vec<f64> {
    (0..r.dim()).map(|i| r.lo()[i] + u[i] * (r.hi()[i] - r.lo()[i])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distance_bounds_bracket_contained_points(r in rect_strategy(3), p in coords(3), u in prop::collection::vec(0.0f64..=1.0, 3)) {
        let (lo, hi) = rect_point_bounds(&r, &pt(0, &p)).unwrap();
        let x = inside(&r, &u);
        let d = pt(1, &x).distance(&pt(0, &p));
        prop_assert!(lo <= d + 1e-12 && d <= hi + 1e-12);
        prop_assert_eq!(lo == 0.0, r.contains_point(&p));
    }

    #[test]
    fn farthest_bound_is_exact_for_points(o in coords(2), q in points_strategy(2, 1..8)) {
        let qs = QuerySet::new(q.clone()).unwrap();
        let (_, b) = farthest_query(&pt(99, &o), &qs);
        let max = q.iter().map(|m| m.distance(&pt(99, &o))).fold(0.0, f64::max);
        prop_assert_eq!(b, max);
    }

    #[test]
    fn farthest_query_is_a_hull_vertex(o in coords(2), q in points_strategy(2, 1..10)) {
        let qs = QuerySet::new(q).unwrap();
        let (f, _) = farthest_query(&pt(99, &o), &qs);
        let verts = qs.hull().vertices_2d().unwrap();
        prop_assert!(verts.iter().any(|v| v[..] == f.coords()[..]), "{:?} not in {:?}", f.coords(), verts);
    }

    #[test]
    fn pruning_region_interior_implies_dominance(q in coords(3), o in coords(3), u in prop::collection::vec(0.001f64..0.999, 3)) {
        let r = pruning_region(&pt(0, &q), &pt(1, &o));
        // Map u into the region's interior, using a finite stand-in for open sides.
        let p: Vec<f64> = (0..3).map(|i| {
            let (lo, hi) = (r.lo()[i], r.hi()[i]);
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => lo + u[i] * (hi - lo),
                (true, false) => lo + u[i] * 20.0,
                (false, true) => hi - u[i] * 20.0,
                (false, false) => -20.0 + 40.0 * u[i],
            }
        }).collect();
        if q != o {
            prop_assert!(dynamic_dominates(&pt(1, &o), &pt(0, &q), &pt(2, &p)));
        }
    }

    #[test]
    fn region_prunes_implies_dominance_at_every_sampled_point(q in coords(2), o in coords(2), x in rect_strategy(2), u in prop::collection::vec(0.0f64..=1.0, 2)) {
        let r = pruning_region(&pt(0, &q), &pt(1, &o));
        if region_prunes(&r, &x) {
            let c = inside(&x, &u);
            let (a, b) = (pt(1, &o), pt(0, &q));
            // Exact arithmetic would give strict dominance; allow rounding at the boundary.
            let ok = dynamic_dominates(&a, &b, &pt(2, &c))
                || (0..2).all(|i| ((o[i] - c[i]).abs() - (q[i] - c[i]).abs()) <= 1e-9);
            prop_assert!(ok);
        }
    }

    #[test]
    fn entry_dominance_is_sound(e in rect_strategy(2), e2 in rect_strategy(2), q in points_strategy(2, 1..5), u in prop::collection::vec(0.0f64..=1.0, 4)) {
        let qs = QuerySet::new(q).unwrap();
        if entry_dominance(&e, &e2, &qs) {
            let p = inside(&e, &u[..2]);
            let p2 = inside(&e2, &u[2..]);
            let (_, far) = farthest_query(&pt(0, &p), &qs);
            prop_assert!(pt(0, &p).distance(&pt(1, &p2)) < far);
        }
    }

    #[test]
    fn hull_matches_barycentric_sampling(s in points_strategy(3, 4..5), w in prop::collection::vec(-0.3f64..1.0, 4)) {
        // Point with barycentric weights w (renormalized); inside iff all weights ≥ 0.
        let sum: f64 = w.iter().sum();
        prop_assume!(sum.abs() > 0.1);
        let lam: Vec<f64> = w.iter().map(|x| x / sum).collect();
        prop_assume!(lam.iter().all(|l| l.abs() > 1e-3));
        // Skip near-flat simplices where the weights are ill-conditioned.
        let v = |i: usize| -> Vec<f64> { (0..3).map(|k| s[i].coords()[k] - s[0].coords()[k]).collect() };
        let (a, b, c) = (v(1), v(2), v(3));
        let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
        prop_assume!(det.abs() > 1.0);
        let p: Vec<f64> = (0..3).map(|k| (0..4).map(|i| lam[i] * s[i].coords()[k]).sum()).collect();
        let qs = QuerySet::new(s).unwrap();
        prop_assert_eq!(qs.point_in_hull(&p), lam.iter().all(|&l| l >= 0.0));
    }
}

#[test]
fn hull_matches_polygon_test_in_2d() {
    let mut r = rng(3);
    for _ in 0..1000 {
        let size = r.random_range(3..9);
        let q = uniform(&mut r, size, 2);
        let qs = QuerySet::new(q).unwrap();
        let v = qs.hull().vertices_2d().unwrap();
        let p = [r.random::<f64>() * 1.2 - 0.1, r.random::<f64>() * 1.2 - 0.1];
        if v.len() < 3 {
            continue;
        }
        // Winding test with exact crossings; skip points very close to an edge.
        let mut inside = true;
        let mut near = false;
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            let cr = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            near |= cr.abs() < 1e-9;
            inside &= cr >= 0.0;
        }
        if !near {
            assert_eq!(qs.point_in_hull(&p), inside, "{p:?} {v:?}");
        }
    }
}

/// For every non-query result `o` of an inverse kNN query and each `q`, `o`
/// is a reverse k′NN of `q` over the non-query objects plus `q`, with
/// `k′ = k − |Q| + 1`.
#[test]
fn inverse_knn_results_are_reverse_k_prime_nn() {
    let mut r = rng(11);
    let mut checked = 0;
    for _ in 0..1000 {
        let size = r.random_range(10..60);
        let data = uniform(&mut r, size, 2);
        let m = r.random_range(1..4);
        let k = r.random_range(m..12);
        let q = sample(&mut r, &data, m);
        let res = brute_inverse(&data, &q, Predicate::Knn(k));
        let rest: Vec<Point> = data.iter().filter(|p| !q.iter().any(|x| x.same_object(p))).cloned().collect();
        for o in res.iter().filter_map(|id| rest.iter().find(|p| p.id == *id)) {
            for qq in &q {
                let mut world = rest.clone();
                world.push(qq.clone());
                assert!(holds(&world, o, qq, Predicate::Knn(k - m + 1)), "o={o:?} q={qq:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn hull_points_are_no_farther_than_farthest_query() {
    let mut r = rng(12);
    for _ in 0..1000 {
        let d = r.random_range(2..4);
        let size = r.random_range(1..6);
        let q = uniform(&mut r, size, d);
        let w: Vec<f64> = (0..q.len()).map(|_| r.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = (0..d).map(|k| q.iter().zip(&w).map(|(m, x)| x / s * m.coords()[k]).sum()).collect();
        let o = pt(500, &(0..d).map(|_| r.random::<f64>() * 3.0 - 1.0).collect::<Vec<_>>());
        let qs = QuerySet::new(q).unwrap();
        assert!(qs.point_in_hull(&p));
        let (_, far) = farthest_query(&o, &qs);
        assert!(o.distance(&pt(501, &p)) <= far + 1e-12);
    }
}

/// Query sets where one query has another query in every open orthant around it.
#[test]
fn surrounded_query_means_empty_skyline_answer() {
    let mut r = rng(13);
    for t in 0..1000 {
        let d = r.random_range(2..4);
        let size = r.random_range(5..40);
        let mut data = uniform(&mut r, size, d);
        let base = data.len() as u64;
        let c: Vec<f64> = (0..d).map(|_| 0.3 + 0.4 * r.random::<f64>()).collect();
        let mut q = vec![pt(base, &c)];
        for mask in 0..1u32 << d {
            let x: Vec<f64> = (0..d)
                .map(|i| {
                    let off = 0.01 + 0.2 * r.random::<f64>();
                    if mask >> i & 1 == 1 { c[i] + off } else { c[i] - off }
                })
                .collect();
            q.push(pt(base + 1 + mask as u64, &x));
        }
        data.extend(q.iter().cloned());
        let qs = QuerySet::new(q.clone()).unwrap();
        assert!(!idsq_fast_validate(&qs), "trial {t}");
        assert!(brute_inverse(&data, &q, Predicate::DynamicSkyline).is_empty(), "trial {t}");
        let rep = invq::run_inverse_query(&InverseQuerySpec::new(Predicate::DynamicSkyline, qs), &tree(&data), None).unwrap();
        assert!(rep.results.is_empty() && rep.node_reads == 0);
    }
}

#[test]
fn hull_counter_never_exceeds_true_hull_population() {
    let mut r = rng(14);
    for _ in 0..300 {
        let d = r.random_range(2..4);
        let size = r.random_range(20..200);
        let data = uniform(&mut r, size, d);
        let size = r.random_range(3..7);
        let q = sample(&mut r, &data, size);
        let qs = QuerySet::new(q.clone()).unwrap();
        let truth = data.iter().filter(|p| !qs.has_location(p.coords()) && qs.point_in_hull(p.coords())).count() as u64;
        let t = small_tree(&data, 4);
        // Offer one disjoint cover of the data: every entry at one level.
        let mut frontier = vec![0usize];
        for _ in 0..r.random_range(0..t.height()) {
            frontier = frontier
                .iter()
                .flat_map(|&n| t.node(n).entries.iter().filter_map(|e| match e.child { Child::Node(c) => Some(c), _ => None }))
                .collect();
        }
        let mut hc = HullCounter::default();
        for &n in &frontier {
            for e in &t.node(n).entries {
                let point = match e.child { Child::Point(i) => Some(t.point(i)), _ => None };
                hc.offer(e, point, &qs);
            }
        }
        let covered: usize = frontier.iter().map(|&n| t.node(n).entries.iter().map(|e| e.count as usize).sum::<usize>()).sum();
        if covered == data.len() {
            assert!(hc.count() <= truth, "{} > {truth}", hc.count());
        }
    }
}

#[test]
fn single_query_partition_filter_is_a_superset() {
    let mut r = rng(15);
    for _ in 0..1000 {
        let d = r.random_range(1..4);
        let size = r.random_range(2..40);
        let data = grid(&mut r, size, d, 5, 0);
        let q = sample(&mut r, &data, 1);
        let expected = brute_inverse(&data, &q, Predicate::DynamicSkyline);
        let refs: Vec<&Point> = data.iter().collect();
        let cands: Vec<u64> = partition_skyline(&refs, &q[0]).iter().map(|p| p.id).collect();
        assert!(expected.iter().all(|id| cands.contains(id)), "{expected:?} ⊄ {cands:?}");
    }
}

#[test]
fn dynamic_skyline_has_no_dominated_members() {
    let mut r = rng(16);
    for _ in 0..1000 {
        let size = r.random_range(1..20);
        let data = grid(&mut r, size, 2, 6, 0);
        let c = pt(999, &[r.random::<f64>(), r.random::<f64>()]);
        let refs: Vec<&Point> = data.iter().collect();
        let sky = dynamic_skyline(&refs, &c);
        for p in &data {
            let dominated = data.iter().any(|o| dynamic_dominates(o, p, &c));
            assert_eq!(sky.iter().any(|s| s.same_object(p)), !dominated);
        }
    }
}

#[test]
fn query_points_never_in_skyline_answers() {
    let mut r = rng(17);
    let mut meter = AccessMeter::new();
    for _ in 0..300 {
        let size = r.random_range(3..40);
        let data = grid(&mut r, size, 2, 5, 0);
        let size = r.random_range(1..3);
        let q = sample(&mut r, &data, size);
        let t = tree(&data);
        let qs = QuerySet::new(q.clone()).unwrap();
        let res = invq::query::idsq::idsq_query(&t, &qs, &mut meter);
        assert!(res.iter().all(|p| !qs.contains_object(p)));
    }
}
