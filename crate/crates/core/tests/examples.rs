use meshdist::bijections::{self, keep_max_complement, verify_involution, verify_joint_swap};
use meshdist::catalog::{conjecture_check, Catalog, Seed};
use meshdist::distribution::{avoidance, distribution, joint_distribution, Scanner};
use meshdist::formulas::{eulerian_snk, formula_avoidance, formula_distribution, stirling_first};
use meshdist::series::{gf_expand, series_f, GfKey, Mode};
use meshdist::{
    box_occupancy, count_occurrences, format_pattern, is_occurrence, parse_pattern, rl_decomposition, Error, MeshBox,
    MeshPattern, ParseError, Permutation,
};
use num_bigint::BigInt;

fn pat(s: &str) -> MeshPattern {
    parse_pattern(s).unwrap()
}

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn trim(row: &[u64]) -> Vec<u64> {
    let mut v = row.to_vec();
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn map(f: fn(&[usize]) -> Vec<usize>, s: &str) -> String {
    Permutation::new(f(perm(s).entries())).unwrap().to_string()
}

#[test]
fn literals() {
    let p = pat("132:00,12,21,23,30,31");
    assert_eq!(p.tau(), &perm("132"));
    let boxes: Vec<(usize, usize)> = p.shading().iter().map(|b| (b.i, b.j)).collect();
    assert_eq!(boxes, vec![(0, 0), (1, 2), (2, 1), (2, 3), (3, 0), (3, 1)]);
    assert!(pat("231:").shading().is_empty());
    assert!(matches!(parse_pattern("12:33"), Err(ParseError::BoxOutOfRange { .. })));
    let q = MeshPattern::new(perm("12"), [MeshBox { i: 1, j: 1 }, MeshBox { i: 0, j: 0 }]).unwrap();
    assert_eq!(format_pattern(&q), "12:00,11");
    assert_eq!(format_pattern(&pat(":")), ":");
    assert_eq!(perm("1,2,3,4,5,6,7,8,9,10").to_string(), "1,2,3,4,5,6,7,8,9,10");
}

#[test]
fn occurrences() {
    assert!(is_occurrence(&pat("12:"), &perm("123"), &[1, 3]));
    assert!(!is_occurrence(&pat("1:01,10"), &perm("231"), &[1]));
    assert!(!is_occurrence(&pat("12:00,01,02,10,11,12,20,21,22"), &perm("123"), &[1, 2]));
    assert_eq!(count_occurrences(&pat("231:"), &perm("32154")), 0);
    assert_eq!(count_occurrences(&pat("12:"), &perm("123")), 3);
    assert_eq!(count_occurrences(&pat("1:01,10"), &perm("123")), 3);
    assert_eq!(count_occurrences(&pat("1:01,10"), &perm("231")), 0);
}

#[test]
fn occupancy() {
    assert_eq!(box_occupancy(&perm("12"), &[1, 2]), 0);
    assert_eq!(box_occupancy(&perm("123"), &[1, 2]), 1 << (2 * 3 + 2));
    // element 2 sits between positions 1 and 3 and between values 1 and 3
    assert_eq!(box_occupancy(&perm("321"), &[1, 3]), 1 << (3 + 1));
}

#[test]
fn symmetries() {
    assert_eq!(pat("12:01").complement().to_string(), "21:01");
    assert_eq!(pat("12:00").reverse().to_string(), "21:20");
    assert_eq!(pat("132:12").inverse().to_string(), "132:21");
}

#[test]
fn right_to_left_maxima() {
    let d = rl_decomposition(&perm("23471856")).unwrap();
    assert_eq!(d.values, vec![8, 6]);
    assert_eq!(d.positions, vec![6, 8]);
    assert_eq!(rl_decomposition(&perm("321")).unwrap().values, vec![3, 2, 1]);
    assert_eq!(rl_decomposition(&perm("123")).unwrap().values, vec![3]);
    assert!(matches!(rl_decomposition(&Permutation::empty()), Err(Error::EmptyPermutation)));
}

#[test]
fn distributions_and_avoidance() {
    assert_eq!(trim(distribution(&pat("12:00,01,10,11"), 3).unwrap().row(3)), [2, 3, 1]);
    assert_eq!(distribution(&pat("1:01,10"), 2).unwrap().row(2), &[1, 0, 1]);
    assert_eq!(trim(distribution(&pat("231:"), 4).unwrap().row(0)), [1]);
    assert_eq!(avoidance(&pat("12:02,12,22"), 4).unwrap().values[4], 6);
    assert!(avoidance(&pat("12:12,22"), 7).unwrap().values.iter().all(|&v| v == 1));
    assert_eq!(avoidance(&pat("12:11,12"), 5).unwrap().values[5], 1);
}

#[test]
fn joint_tables() {
    let p = pat("12:01,12,22");
    let j = joint_distribution(&p, &p, 5).unwrap();
    let d = distribution(&p, 5).unwrap();
    assert!(j.is_diagonal());
    for n in 0..=5 {
        for (k, &v) in d.row(n).iter().enumerate() {
            assert_eq!(j.mats[n][k][k], v);
        }
    }
    assert!(joint_distribution(&pat("12:01,11,22"), &pat("12:00,10,22"), 6).unwrap().is_diagonal());
    assert!(joint_distribution(&pat("12:01,10,11,12,22"), &pat("12:00,10,11,12,22"), 6).unwrap().is_symmetric());
}

#[test]
fn depth_guard() {
    let s = Scanner::with_max_depth(5);
    assert!(matches!(s.distribution(&pat("12:"), 6), Err(Error::ResourceGuard { requested: 6, max: 5 })));
    assert!(s.distribution(&pat("12:"), 5).is_ok());
}

#[test]
fn number_sequences() {
    assert_eq!((1..=4).map(|k| stirling_first(4, k)).collect::<Vec<_>>(), ints(&[6, 11, 6, 1]));
    assert_eq!(stirling_first(3, 5), BigInt::from(0));
    assert_eq!((0..3).map(|k| eulerian_snk(3, k)).collect::<Vec<_>>(), ints(&[1, 4, 1]));
    assert_eq!(eulerian_snk(4, 1), BigInt::from(11));
}

#[test]
fn registered_formulas() {
    assert_eq!(formula_distribution(25, 4).unwrap(), ints(&[12, 4, 2, 6]));
    assert_eq!(formula_distribution(68, 3).unwrap(), ints(&[2, 3, 1]));
    assert_eq!(formula_distribution(2, 3).unwrap(), ints(&[4, 2]));
    assert_eq!(formula_avoidance(62, 3).unwrap(), BigInt::from(3));
    assert_eq!(formula_avoidance(62, 4).unwrap(), BigInt::from(13));
    assert_eq!(formula_avoidance(48, 5).unwrap(), BigInt::from(33));
    assert_eq!(formula_avoidance(63, 4).unwrap(), BigInt::from(12));
    match formula_distribution(26, 3) {
        Err(Error::NoFormula { class_id: 26, status }) => assert_eq!(status, "?"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn series_expansions() {
    let f = series_f(4);
    assert_eq!(f.row(4), ints(&[24]));
    let want: [(u32, [i64; 5]); 4] =
        [(36, [1, 1, 1, 3, 15]), (47, [1, 1, 1, 2, 9]), (56, [1, 1, 1, 3, 13]), (77, [1, 1, 1, 5, 21])];
    for (id, seq) in want {
        let s = gf_expand(GfKey::Class(id), 4, Mode::Avoidance).unwrap();
        let got: Vec<BigInt> = (0..=4).map(|n| s.row(n)[0].clone()).collect();
        assert_eq!(got, ints(&seq), "class {id}");
    }
}

#[test]
fn maps_on_small_inputs() {
    assert_eq!(map(keep_max_complement, "132"), "231");
    assert_eq!(map(keep_max_complement, "312"), "321");
    assert_eq!(map(bijections::keep_max_reverse_left, "4123"), "4123");
    assert_eq!(map(bijections::class2_map, "3142"), "1324");
    assert_eq!(map(bijections::class2_map, "1324"), "3142");
    assert_eq!(map(bijections::class2_map, "2143"), "2143");
    assert_eq!(map(bijections::bij46, "54321"), "54321");
    assert_eq!(map(bijections::bij75, "1"), "1");
}

#[test]
fn bijection_harness() {
    assert!(verify_involution(bijections::bij73, 6).is_ok());
    let (a, b) = (pat("12:01,10,11,12,22"), pat("12:00,10,11,12,22"));
    assert!(verify_joint_swap(bijections::bij46, &a, &b, 6).is_ok());
    let err = verify_joint_swap(bijections::bij46, &pat("12:"), &pat("21:"), 4).unwrap_err();
    assert!(!err.input.is_empty());
}

#[test]
fn catalog_at_small_depths() {
    let seed = Seed::builtin();
    // no length-two pattern occurs in a permutation of length one
    assert_eq!(Catalog::build(1).unwrap().classify().distribution_classes, 1);
    for id in [54, 69, 71] {
        assert!(conjecture_check(&seed, id, 7).unwrap().equal);
    }
    let cat = Catalog::build(7).unwrap();
    let v = cat.verify_shading_coincidences(&seed, &[&[30, 60], &[29, 41, 88], &[30, 61]]).unwrap();
    assert_eq!(v.iter().map(|c| c.equal).collect::<Vec<_>>(), vec![true, true, false]);
}

#[test]
fn finer_depth_refines_classes() {
    let deep = Catalog::build(6).unwrap();
    let mut prev: Option<Vec<usize>> = None;
    for d in 1..=6 {
        let tables: Vec<_> = deep.tables().iter().map(|t| t.truncated(d)).collect();
        let cat = Catalog::from_tables(d, tables);
        let labels: Vec<usize> = {
            let mut keys: Vec<String> = cat.tables().iter().map(|t| t.signature().digest()).collect();
            let mut uniq = keys.clone();
            uniq.sort();
            uniq.dedup();
            keys.iter_mut().map(|k| uniq.binary_search(k).unwrap()).collect()
        };
        if let Some(p) = &prev {
            // same label now implies same label before
            for a in 0..labels.len() {
                for b in a + 1..labels.len() {
                    if labels[a] == labels[b] {
                        assert_eq!(p[a], p[b]);
                    }
                }
            }
        }
        prev = Some(labels);
    }
}
