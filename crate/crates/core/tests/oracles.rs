mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use sturmian::combinatorics::{
    extension_graph, multiplicity_records, summation_identity, path_positions, ExactSturmian,
    LanguageSource, WindowedPair,
};
use sturmian::lattice::{enumerate_connected_supports, for_each_in_box, Pattern, Support};
use sturmian::pairs::{
    scan_language, AsymptoticPair, ConstantConfig, Config, Configuration, DifferenceSetSource,
    Overridden,
};
use sturmian::sturmian::{language, language_by_intervals, language_with_occurrences, pattern_interval, WindowPartition};
use sturmian::{Side, SturmianConfig, SurdReal};

fn slopes_2d() -> Vec<QuadSlope> {
    vec![fig1(), fig4()]
}

#[test]
fn evaluation_matches_the_integer_oracle() {
    for q in slopes_2d() {
        let slope = q.slope();
        for side in [Side::Lower, Side::Upper] {
            let c = SturmianConfig::characteristic(slope.clone(), side);
            let oracle = OracleGrid::new(&q, side, 50);
            for x in -50..=50 {
                for y in -50..=50 {
                    let n = pt(&[x, y]);
                    assert_eq!(c.at(&n).unwrap(), oracle.get(&[x, y]), "{:?} {} at {}", q, side, n);
                }
            }
            for x in (-50..=50).step_by(7) {
                for y in (-50..=50).step_by(5) {
                    let n = pt(&[x, y]);
                    assert_eq!(c.eval_by_window(&n).unwrap(), oracle.get(&[x, y]));
                    assert_eq!(c.eval_exact(&n).unwrap(), oracle.get(&[x, y]));
                }
            }
        }
    }
}

#[test]
fn evaluation_in_one_and_three_dimensions() {
    let g = golden();
    let c = SturmianConfig::characteristic(g.slope(), Side::Lower);
    for n in -500..=500 {
        assert_eq!(c.at(&pt(&[n])).unwrap(), g.eval(Side::Lower, &[n]));
    }
    let t = three_dim();
    for side in [Side::Lower, Side::Upper] {
        let c = SturmianConfig::characteristic(t.slope(), side);
        for x in -6..=6 {
            for y in -6..=6 {
                for z in -6..=6 {
                    assert_eq!(c.at(&pt(&[x, y, z])).unwrap(), t.eval(side, &[x, y, z]));
                }
            }
        }
    }
}

#[test]
fn pair_law_outside_and_on_the_difference_set() {
    for q in slopes_2d().into_iter().chain([three_dim()]) {
        let d = q.dim();
        let f = Support::canonical_difference_set(d);
        let r = if d == 2 { 20 } else { 5 };
        let lower = OracleGrid::new(&q, Side::Lower, r);
        let upper = OracleGrid::new(&q, Side::Upper, r);
        for_each_in_box(&vec![-r; d], &vec![r; d], |n| {
            let (a, b) = (lower.get(n.coords()), upper.get(n.coords()));
            if f.contains(&n) {
                assert_eq!((a as usize + d) % (d + 1), b as usize);
            } else {
                assert_eq!(a, b, "{}", n);
            }
        });
    }
}

#[test]
fn language_size_is_the_minkowski_difference() {
    for q in slopes_2d() {
        let slope = q.slope();
        let f = Support::canonical_difference_set(2);
        for s in enumerate_connected_supports(2, 5, 6).unwrap() {
            let lang = language(&slope, &s).unwrap();
            assert_eq!(lang.len(), minkowski(&f, &s).len(), "{}", s);
        }
    }
    let g = golden().slope();
    for n in 1..=20 {
        assert_eq!(language(&g, &Support::rectangle(&[n])).unwrap().len(), n + 1);
    }
    let t = three_dim();
    let f3 = Support::canonical_difference_set(3);
    for s in enumerate_connected_supports(3, 3, 4).unwrap() {
        assert_eq!(language(&t.slope(), &s).unwrap().len(), minkowski(&f3, &s).len());
    }
}

#[test]
fn three_routes_to_the_language_agree() {
    for q in slopes_2d() {
        let slope = q.slope();
        let oracle = OracleGrid::new(&q, Side::Lower, 45);
        for s in enumerate_connected_supports(2, 4, 6).unwrap() {
            let exact: BTreeSet<Vec<u8>> = language(&slope, &s)
                .unwrap()
                .into_iter()
                .map(|p| p.values().to_vec())
                .collect();
            let circle: BTreeSet<Vec<u8>> = language_by_intervals(&slope, &s)
                .unwrap()
                .into_iter()
                .map(|p| p.values().to_vec())
                .collect();
            let brute = brute_language(&s, &[-40, -40], &[40, 40], |n| oracle.get(n));
            assert_eq!(exact, circle, "{}", s);
            assert_eq!(exact, brute, "{}", s);
        }
    }
}

#[test]
fn intervals_have_the_predicted_left_endpoints() {
    for q in slopes_2d() {
        let slope = q.slope();
        for s in [
            Support::rectangle(&[2, 2]),
            Support::rectangle(&[3, 1]),
            Support::new(2, [pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1])]).unwrap(),
        ] {
            for (p, u) in language_with_occurrences(&slope, &s).unwrap() {
                let iv = pattern_interval(&slope, &p, Side::Lower).unwrap();
                assert!(!iv.is_empty());
                let want = slope.dot(&u).fract().unwrap();
                assert_eq!(iv.left_endpoint(), Some(&want), "{} at {}", p, u);
            }
        }
        // the single-symbol intervals tile the circle
        let part = WindowPartition::new(&slope);
        let mut total = SurdReal::zero();
        let mut starts = Vec::new();
        for v in 0..=2u8 {
            let p = Pattern::new(Support::singleton(pt(&[0, 0])), vec![v]).unwrap();
            let iv = pattern_interval(&slope, &p, Side::Lower).unwrap();
            total = &total + &iv.length();
            starts.push(iv.left_endpoint().unwrap().clone());
        }
        assert_eq!(total, SurdReal::one());
        assert_eq!(starts, part.boundaries[..3].to_vec());
    }
}

#[test]
fn each_pattern_occurs_once_in_f_minus_s() {
    for q in slopes_2d() {
        let f = Support::canonical_difference_set(2);
        let grids = [OracleGrid::new(&q, Side::Lower, 6), OracleGrid::new(&q, Side::Upper, 6)];
        for s in enumerate_connected_supports(2, 4, 6).unwrap() {
            let fs: Vec<Vec<i64>> = minkowski(&f, &s).into_iter().collect();
            for g in &grids {
                let mut seen = BTreeSet::new();
                for u in &fs {
                    let vals: Vec<u8> = s
                        .iter()
                        .map(|p| {
                            let n: Vec<i64> = u.iter().zip(p.coords()).map(|(a, b)| a + b).collect();
                            g.get(&n)
                        })
                        .collect();
                    assert!(seen.insert(vals), "repeated pattern over {}", s);
                }
            }
        }
    }
}

/// `E^pos(w)` from a brute-force scan, with no library language code.
fn brute_extensions(q: &OracleGrid, w: &Pattern, pos: &[i64], r: i64) -> BTreeSet<u8> {
    let mut out = BTreeSet::new();
    for x in -r..=r {
        for y in -r..=r {
            let ok = w.iter().all(|(p, v)| q.get(&[x + p[0], y + p[1]]) == v);
            if ok {
                out.insert(q.get(&[x + pos[0], y + pos[1]]));
            }
        }
    }
    out
}

#[test]
fn extension_sets_match_a_brute_force_scan() {
    let q = fig1();
    let src = ExactSturmian::new(q.slope());
    let oracle = OracleGrid::new(&q, Side::Lower, 34);
    for s in [Support::rectangle(&[2, 1]), Support::rectangle(&[2, 2])] {
        for (l, r) in path_positions(&s).into_iter().take(12) {
            for w in src.language(&s).unwrap().iter() {
                let g = extension_graph(&src, w, &l, &r).unwrap();
                assert_eq!(g.left, brute_extensions(&oracle, w, l.coords(), 30));
                assert_eq!(g.right, brute_extensions(&oracle, w, r.coords(), 30));
            }
        }
    }
}

#[test]
fn empty_pattern_extensions() {
    for q in slopes_2d().into_iter().chain([three_dim()]) {
        let d = q.dim();
        let src = ExactSturmian::new(q.slope());
        let e = Pattern::empty(d);
        let g = extension_graph(&src, &e, &pt(&vec![0; d]), &sturmian::Point::unit(d, 1)).unwrap();
        assert_eq!(g.left.len(), d + 1);
        assert_eq!(g.right.len(), d + 1);
        assert_eq!(g.edges.len(), 2 * d + 1);
        assert_eq!(g.multiplicity(), 0);
    }
}

#[test]
fn summation_identity_on_exact_languages() {
    let src = ExactSturmian::new(fig4().slope());
    for s in enumerate_connected_supports(2, 3, 6).unwrap() {
        for (l, r) in path_positions(&s).into_iter().step_by(3) {
            let (lhs, rhs) = summation_identity(&src, &s, &l, &r).unwrap();
            assert_eq!(lhs, rhs, "{} {} {}", s, l, r);
        }
    }
}

#[test]
fn windowed_source_agrees_with_the_exact_one() {
    let q = fig1();
    let pair = AsymptoticPair::characteristic(q.slope()).unwrap();
    let win = WindowedPair::new(pair, vec![-60, -60], vec![60, 60]);
    let exact = ExactSturmian::new(q.slope());
    let s = Support::rectangle(&[2, 2]);
    let (l, r) = (pt(&[-1, 0]), pt(&[2, 1]));
    let a = multiplicity_records(&exact, &s, &l, &r, None).unwrap();
    let b = multiplicity_records(&win, &s, &l, &r, None).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.e_left, x.e_right, x.e_both), (y.e_left, y.e_right, y.e_both));
    }
}

#[test]
fn flip_pairs_have_at_least_f_minus_s_patterns() {
    // a flip pair that is far from indistinguishable
    let base: Config = Arc::new(ConstantConfig {
        dim: 2,
        alphabet: 3,
        symbol: 0,
    });
    let f = Support::canonical_difference_set(2);
    let px = Pattern::new(f.clone(), vec![2, 1, 0]).unwrap();
    let py = Pattern::new(f.clone(), vec![1, 0, 2]).unwrap();
    let x: Config = Arc::new(Overridden {
        base: base.clone(),
        patch: px,
    });
    let y: Config = Arc::new(Overridden { base, patch: py });
    let pair = AsymptoticPair::from_parts(x, y, f.clone(), DifferenceSetSource::Certified);
    assert!(sturmian::pairs::check_flip(&pair).unwrap().holds);
    for s in enumerate_connected_supports(2, 5, 6).unwrap() {
        let mut l = scan_language(pair.x.as_ref(), &s, &[-8, -8], &[8, 8]).unwrap();
        l.extend(scan_language(pair.y.as_ref(), &s, &[-8, -8], &[8, 8]).unwrap());
        assert!(l.len() >= minkowski(&f, &s).len(), "{}", s);
    }
}

#[test]
fn bispecial_records_are_trees() {
    let q = fig4();
    let src = ExactSturmian::new(q.slope());
    let c = SturmianConfig::characteristic(q.slope(), Side::Lower);
    let f = Support::canonical_difference_set(2);
    for s in enumerate_connected_supports(2, 3, 6).unwrap() {
        for (l, r) in path_positions(&s) {
            for rec in multiplicity_records(&src, &s, &l, &r, Some((&c, &f))).unwrap() {
                // a forest has exactly vertices - components edges
                let vertices = rec.e_left + rec.e_right;
                assert_eq!(rec.e_both + rec.components, vertices);
                assert!(rec.multiplicity == 0 || (rec.multiplicity == -1 && rec.evil));
                assert_eq!(rec.evil, rec.multiplicity == -1);
            }
        }
    }
}
