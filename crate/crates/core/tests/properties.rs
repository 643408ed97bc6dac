use meshdist::distribution::distribution;
use meshdist::occurrence::box_occupancy;
use meshdist::perm::factorial;
use meshdist::{count_occurrences, format_pattern, is_occurrence, parse_pattern, MeshBox, MeshPattern, Permutation};
use proptest::prelude::*;

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn pattern(max_k: usize) -> impl Strategy<Value = MeshPattern> {
    (1..=max_k).prop_flat_map(|k| {
        let cells = (k + 1) * (k + 1);
        (Just((1..=k).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), cells)).prop_map(
            move |(tau, bits)| {
                let boxes = bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(t, _)| MeshBox { i: t / (k + 1), j: t % (k + 1) });
                MeshPattern::new(Permutation::new(tau).unwrap(), boxes).unwrap()
            },
        )
    })
}

/// Occurrences counted straight from the definition.
fn naive_count(p: &MeshPattern, pi: &Permutation) -> usize {
    let k = p.len();
    let n = pi.len();
    let e = pi.entries();
    let mut count = 0;
    for_each_subset(n, k, &mut |w| {
        let vals: Vec<usize> = w.iter().map(|&i| e[i]).collect();
        let iso = (0..k).all(|a| (0..k).all(|b| (vals[a] < vals[b]) == (p.tau().entries()[a] < p.tau().entries()[b])));
        if !iso {
            return;
        }
        let mut sorted = vals.clone();
        sorted.sort();
        for (x, &y) in e.iter().enumerate() {
            if w.contains(&x) {
                continue;
            }
            let col = w.iter().filter(|&&wi| wi < x).count();
            let row = sorted.iter().filter(|&&v| v < y).count();
            if p.is_shaded(col, row) {
                return;
            }
        }
        count += 1;
    });
    count
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn literal_round_trip(p in pattern(4)) {
        let text = format_pattern(&p);
        prop_assert_eq!(parse_pattern(&text).unwrap(), p.clone());
        prop_assert_eq!(format_pattern(&parse_pattern(&text).unwrap()), text);
    }

    #[test]
    fn count_matches_definition(p in pattern(3), pi in perm(7)) {
        prop_assert_eq!(count_occurrences(&p, &pi), naive_count(&p, &pi));
    }

    #[test]
    fn symmetries_transport_occurrences(p in pattern(3), pi in perm(6)) {
        let c = count_occurrences(&p, &pi);
        prop_assert_eq!(count_occurrences(&p.complement(), &pi.complement()), c);
        prop_assert_eq!(count_occurrences(&p.reverse(), &pi.reverse()), c);
        prop_assert_eq!(count_occurrences(&p.inverse(), &pi.inverse()), c);
    }

    #[test]
    fn symmetries_are_involutions(p in pattern(4)) {
        prop_assert_eq!(p.complement().complement(), p.clone());
        prop_assert_eq!(p.reverse().reverse(), p.clone());
        prop_assert_eq!(p.inverse().inverse(), p.clone());
        let orbit = p.symmetry_orbit();
        prop_assert!(orbit.len() <= 8 && 8 % orbit.len() == 0);
        prop_assert!(orbit.contains(&p));
    }

    #[test]
    fn shading_more_never_adds_occurrences(p in pattern(3), i in 0usize..4, j in 0usize..4, pi in perm(7)) {
        let k = p.len();
        let q = p.with_box(MeshBox { i: i % (k + 1), j: j % (k + 1) });
        prop_assert!(count_occurrences(&q, &pi) <= count_occurrences(&p, &pi));
    }

    #[test]
    fn classical_counts_subsequences(tau in perm(3), pi in perm(7)) {
        prop_assume!(!tau.is_empty());
        let p = MeshPattern::classical(tau.clone());
        let k = tau.len();
        let mut want = 0;
        for_each_subset(pi.len(), k, &mut |w| {
            let vals: Vec<usize> = w.iter().map(|&i| pi.entries()[i]).collect();
            if (0..k).all(|a| (0..k).all(|b| (vals[a] < vals[b]) == (tau.entries()[a] < tau.entries()[b]))) {
                want += 1;
            }
        });
        prop_assert_eq!(count_occurrences(&p, &pi), want);
    }

    #[test]
    fn occurrence_iff_no_shaded_box_occupied(p in pattern(3), pi in perm(6)) {
        let k = p.len();
        for_each_subset(pi.len(), k, &mut |w0| {
            let w: Vec<usize> = w0.iter().map(|&i| i + 1).collect();
            let vals: Vec<usize> = w.iter().map(|&i| pi.at(i)).collect();
            let iso = (0..k).all(|a| (0..k).all(|b| (vals[a] < vals[b]) == (p.tau().entries()[a] < p.tau().entries()[b])));
            let free = box_occupancy(&pi, &w) & p.mask() == 0;
            assert_eq!(is_occurrence(&p, &pi, &w), iso && free, "{p} in {pi} at {w:?}");
        });
    }

    #[test]
    fn rows_partition_the_symmetric_group(p in pattern(3)) {
        let t = distribution(&p, 5).unwrap();
        for n in 0..=5 {
            prop_assert_eq!(t.row(n).iter().sum::<u64>(), factorial(n));
        }
    }

    #[test]
    fn symmetries_preserve_distributions(p in pattern(3)) {
        let t = distribution(&p, 5).unwrap();
        for q in p.symmetry_orbit() {
            prop_assert_eq!(&distribution(&q, 5).unwrap().rows, &t.rows);
        }
    }
}

#[test]
fn occupancy_agrees_with_definition_on_s5() {
    for pi in Permutation::all(5) {
        for_each_subset(5, 2, &mut |w0| {
            let w = [w0[0] + 1, w0[1] + 1];
            let occ = box_occupancy(&pi, &w);
            let mut vals = [pi.at(w[0]), pi.at(w[1])];
            vals.sort();
            let mut want = 0u128;
            for x in 1..=5 {
                if w.contains(&x) {
                    continue;
                }
                let c = w.iter().filter(|&&a| a < x).count();
                let r = vals.iter().filter(|&&v| v < pi.at(x)).count();
                want |= 1 << (c * 3 + r);
            }
            assert_eq!(occ, want, "{pi} at {w:?}");
        });
    }
}
