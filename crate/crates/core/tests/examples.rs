mod common;

use common::*;
use invq::baselines::{naive_inverse, reverse_query, sqf_inverse, Algorithm};
use invq::index::{best_first, AccessMeter, Boundary, Entry};
use invq::oracle::{brute_inverse, brute_membership};
use invq::query::idsq::{idsq_refine, qbox_prune_2d, region_unique_candidate, QBoxContext};
use invq::{run_inverse_query, AggRTree, InverseQuerySpec, Point, Predicate, QuerySet, Rect};

fn line(xs: &[f64]) -> Vec<Point> {
    xs.iter().enumerate().map(|(i, &x)| pt(i as u64, &[x])).collect()
}

fn answer(data: &[Point], q: &[u64], pred: Predicate) -> Vec<u64> {
    let t = tree(data);
    let spec = InverseQuerySpec::new(pred, qset(data, q));
    let got = run_inverse_query(&spec, &t, None).unwrap().results;
    assert_eq!(got, brute_inverse(data, spec.query.members(), pred), "engine disagrees with oracle");
    for algo in [Algorithm::Sqf, Algorithm::Naive] {
        assert_eq!(algo.run(&spec, &t, None, 1).unwrap().results, got, "{algo}");
    }
    got
}

#[test]
fn inverse_knn_on_a_line() {
    let d = line(&[0.0, 1.0, 2.0, 3.0, 10.0]);
    assert_eq!(answer(&d, &[1, 2], Predicate::Knn(2)), vec![0, 1, 2, 3]);
    // Everyone is everyone's kNN once k ≥ n − 1.
    assert_eq!(answer(&d, &[1, 4], Predicate::Knn(4)), vec![0, 1, 2, 3, 4]);
}

#[test]
fn inverse_knn_filter_one() {
    let d = line(&[0.0, 1.0, 2.0, 3.0, 10.0]);
    let rep = run_inverse_query(&InverseQuerySpec::new(Predicate::Knn(2), qset(&d, &[0, 1, 2])), &tree(&d), None).unwrap();
    assert!(rep.results.is_empty() && rep.validated_empty);
    assert_eq!(rep.node_reads, 0);
}

#[test]
fn inverse_eps_small_example() {
    let d = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[4.0, 0.0]]);
    assert_eq!(answer(&d, &[0, 1], Predicate::EpsRange(1.5)), vec![0, 1]);
}

#[test]
fn zero_radius_finds_the_point_and_its_duplicates() {
    let d = pts(&[&[0.5, 0.5], &[0.5, 0.5], &[0.5, 0.6]]);
    assert_eq!(answer(&d, &[0], Predicate::EpsRange(0.0)), vec![0, 1]);
}

#[test]
fn singleton_dataset_conventions() {
    let d = pts(&[&[0.3, 0.3]]);
    assert_eq!(answer(&d, &[0], Predicate::EpsRange(0.0)), vec![0]);
    assert_eq!(answer(&d, &[0], Predicate::EpsRange(5.0)), vec![0]);
    assert_eq!(answer(&d, &[0], Predicate::Knn(1)), vec![0]);
    assert!(answer(&d, &[0], Predicate::DynamicSkyline).is_empty());
}

#[test]
fn inverse_skyline_example() {
    let d = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[3.0, 3.0]]);
    assert_eq!(answer(&d, &[1, 2], Predicate::DynamicSkyline), vec![0, 3]);

    let t = tree(&d);
    let q = qset(&d, &[1, 2]);
    let mut m = AccessMeter::new();
    assert!(idsq_refine(&t, &d[0], &q, &mut m));
    assert!(idsq_refine(&t, &d[3], &q, &mut m));
    assert!(!idsq_refine(&t, &d[1], &q, &mut m));
    assert!(!idsq_refine(&t, &d[2], &q, &mut m));
}

#[test]
fn refinement_rejects_a_dominated_query() {
    let d = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.0]]);
    let mut m = AccessMeter::new();
    assert!(!idsq_refine(&tree(&d), &d[0], &qset(&d, &[1, 2]), &mut m));
}

#[test]
fn only_queries_means_no_skyline_answer() {
    let d = pts(&[&[0.0, 0.0], &[1.0, 1.0]]);
    assert!(answer(&d, &[0, 1], Predicate::DynamicSkyline).is_empty());
}

#[test]
fn membership_examples() {
    let eps = 0.25;
    let d = pts(&[&[0.0, 0.0], &[0.0, eps]]);
    assert!(brute_membership(&d, &d[0], &d[1], Predicate::EpsRange(eps)));

    let d = line(&[0.0, 1.0, 2.0, 3.0, 10.0]);
    assert!(!brute_membership(&d, &d[4], &d[1], Predicate::Knn(2)));

    let d = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.0]]);
    assert!(!brute_membership(&d, &d[0], &d[1], Predicate::DynamicSkyline));
}

#[test]
fn reverse_nearest_neighbours_on_a_line() {
    let d = line(&[0.0, 1.0, 3.0]);
    let t = tree(&d);
    let mut m = AccessMeter::new();
    let ids = |v: Vec<&Point>| v.iter().map(|p| p.id).collect::<Vec<_>>();
    assert_eq!(ids(reverse_query(&t, &d[0], Predicate::Knn(1), &mut m).unwrap()), vec![1]);
    assert_eq!(ids(reverse_query(&t, &d[1], Predicate::Knn(1), &mut m).unwrap()), vec![0, 2]);
}

#[test]
fn baselines_with_one_query_equal_the_reverse_query() {
    let d = line(&[0.0, 1.0, 3.0, 3.5, 7.0]);
    let t = tree(&d);
    for pred in [Predicate::EpsRange(1.0), Predicate::Knn(2), Predicate::DynamicSkyline] {
        let spec = InverseQuerySpec::new(pred, qset(&d, &[2]));
        let mq = run_inverse_query(&spec, &t, None).unwrap().results;
        let mut m = AccessMeter::new();
        assert_eq!(naive_inverse(&spec, &t, None, &mut m).unwrap().results, mq);
        assert_eq!(sqf_inverse(&spec, &t, None, &mut m, 3).unwrap().results, mq);
    }
}

#[test]
fn sqf_reads_are_deterministic_per_seed() {
    let mut r = rng(1);
    let d = uniform(&mut r, 500, 2);
    let t = tree(&d);
    let spec = InverseQuerySpec::new(Predicate::Knn(10), qset(&d, &[3, 8, 13]));
    let a = Algorithm::Sqf.run(&spec, &t, None, 77).unwrap();
    let b = Algorithm::Sqf.run(&spec, &t, None, 77).unwrap();
    assert_eq!((a.results, a.node_reads), (b.results, b.node_reads));
}

#[test]
fn index_access_examples() {
    let d = line(&[0.0, 1.0, 2.0, 3.0, 10.0]);
    let t = tree(&d);
    let mut m = AccessMeter::new();
    assert_eq!(t.range_count(&[0.0], 2.0, Boundary::Closed, None, &mut m), 3);
    assert_eq!(t.range_count(&[0.0], 2.0, Boundary::Strict, Some(&d[0]), &mut m), 1);
    assert_eq!(t.range_count(&[3.0], 0.0, Boundary::Closed, None, &mut m), 1);

    let w = Rect::new(vec![0.5], vec![2.5]).unwrap();
    let mut ids: Vec<u64> = t.window_query(&w, &mut m, None).iter().map(|p| p.id).collect();
    ids.sort();
    assert_eq!(ids, vec![1, 2]);

    let mut m = AccessMeter::new();
    assert!(t.window_query(&Rect::empty(1), &mut m, None).is_empty());
    assert!(m.reads() <= 1);

    let t = tree(&line(&[10.0, 0.0, 1.0]));
    let mut m = AccessMeter::new();
    let order: Vec<f64> = best_first(&t, |e: &Entry| e.mbr.min_dist2(&[0.0]), &mut m).map(|(_, p)| p.coords()[0]).collect();
    assert_eq!(order, vec![0.0, 1.0, 10.0]);
}

#[test]
fn fanout_and_leaves() {
    assert_eq!(invq::index::fanout_for(1024, 3), 16);
    let d = uniform(&mut rng(2), 100, 3);
    let t = AggRTree::bulk_load_with_fanout(d, 16).unwrap();
    assert_eq!(t.leaf_count(), 7);
    let t = tree(&[pt(0, &[0.1, 0.2])]);
    assert_eq!((t.leaf_count(), t.total()), (1, 1));
}

#[test]
fn qbox_conditions() {
    // Corner query at (1,0) of the box [0,1]².
    let q = QuerySet::new(pts(&[&[1.0, 0.0], &[0.0, 1.0], &[0.4, 0.3]])).unwrap();
    let ctx = QBoxContext::new(&q).unwrap();
    assert!(qbox_prune_2d(&Rect::from_point(&[2.0, 0.2]), &ctx));

    let q = QuerySet::new(pts(&[&[0.3, 0.0], &[0.0, 0.5], &[1.0, 0.7], &[0.6, 1.0]])).unwrap();
    let mut ctx = QBoxContext::new(&q).unwrap();
    assert!(qbox_prune_2d(&Rect::from_point(&[0.5, -1.0]), &ctx));

    // Band object above the box at y = 1.4 prunes y > 1.2.
    ctx.observe(&pt(9, &[0.5, 1.4]));
    assert!(qbox_prune_2d(&Rect::from_point(&[0.5, 1.3]), &ctx));
}

#[test]
fn unique_candidate_examples() {
    let (q1, q2) = (pt(100, &[0.0, 0.0]), pt(101, &[10.0, 10.0]));
    // The quadrant that holds neither query is the upper-left or lower-right one.
    let a = [pt(0, &[1.0, 9.0]), pt(1, &[2.0, 8.0])];
    let refs: Vec<&Point> = a.iter().collect();
    assert_eq!(region_unique_candidate(&refs, &q1, &q2).map(|p| p.id), Some(0));
    let b = [pt(0, &[1.0, 8.0]), pt(1, &[2.0, 9.0])];
    let refs: Vec<&Point> = b.iter().collect();
    assert_eq!(region_unique_candidate(&refs, &q1, &q2), None);
    let refs: Vec<&Point> = a[..1].iter().collect();
    assert_eq!(region_unique_candidate(&refs, &q1, &q2).map(|p| p.id), Some(0));
}

#[test]
fn surrounded_center_is_rejected_without_reads() {
    let d = pts(&[&[0.5, 0.5], &[0.4, 0.4], &[0.6, 0.4], &[0.4, 0.6], &[0.6, 0.6], &[0.9, 0.1]]);
    let rep = run_inverse_query(&InverseQuerySpec::new(Predicate::DynamicSkyline, qset(&d, &[0, 1, 2, 3, 4])), &tree(&d), None).unwrap();
    assert!(rep.results.is_empty() && rep.validated_empty);
    assert_eq!(rep.node_reads, 0);
    assert!(brute_inverse(&d, &d[..5], Predicate::DynamicSkyline).is_empty());
}
