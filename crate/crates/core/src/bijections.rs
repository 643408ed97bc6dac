//! The involutions that exchange occurrences of paired patterns, and the
//! exhaustive checks run against them.
//!
//! Maps work on 0-based value arrays. "Right-to-left maxima" are listed left
//! to right, `r_1 = n` first.

use serde::Serialize;

use crate::occurrence::{count2, occupancy2};
use crate::pattern::MeshPattern;
use crate::perm::{for_each_permutation, Permutation};
use crate::rl::rl_max_positions;

pub type Map = fn(&[usize]) -> Vec<usize>;

/// Keeps `n` in place and sends every other value `i` to `n - i`.
pub fn keep_max_complement(pi: &[usize]) -> Vec<usize> {
    let n = pi.len();
    pi.iter().map(|&v| if v == n { n } else { n - v }).collect()
}

/// Reverses the segment left of `n`.
pub fn keep_max_reverse_left(pi: &[usize]) -> Vec<usize> {
    let n = pi.len();
    let mut out = pi.to_vec();
    if let Some(p) = pi.iter().position(|&v| v == n) {
        out[..p].reverse();
    }
    out
}

/// Exchanges `(n-1) A n B` and `A (n-1) B n` when both `A` and `B` are
/// non-empty. When one of them is empty the literal rewriting lands on a
/// permutation of both shapes, so those cases pair up as
/// `(n-1) n B <-> B (n-1) n`. Permutations of both shapes, or neither, are fixed.
pub fn class2_map(pi: &[usize]) -> Vec<usize> {
    let n = pi.len();
    if n < 2 {
        return pi.to_vec();
    }
    let first = pi[0] == n - 1;
    let last = pi[n - 1] == n;
    let cat = |parts: &[&[usize]]| parts.concat();
    match (first, last) {
        (true, false) => {
            // (n-1) A n B with B non-empty
            let p = pi.iter().position(|&v| v == n).unwrap();
            let (a, b) = (&pi[1..p], &pi[p + 1..]);
            if a.is_empty() {
                cat(&[b, &[n - 1, n]])
            } else {
                cat(&[a, &[n - 1], b, &[n]])
            }
        }
        (false, true) => {
            // A (n-1) B n with A non-empty
            let p = pi.iter().position(|&v| v == n - 1).unwrap();
            let (a, b) = (&pi[..p], &pi[p + 1..n - 1]);
            if b.is_empty() {
                cat(&[&[n - 1, n], a])
            } else {
                cat(&[&[n - 1], a, &[n], b])
            }
        }
        _ => pi.to_vec(),
    }
}

/// Occurrence of a length-2 pattern at 0-based positions `a < b`.
fn occurs(pi: &[usize], p: &MeshPattern, a: usize, b: usize) -> bool {
    let inc = p.tau().entries()[0] == 1;
    (pi[a] < pi[b]) == inc && occupancy2(pi, a, b) & p.mask9().unwrap() == 0
}

fn pat(s: &str) -> MeshPattern {
    s.parse().expect("valid literal")
}

/// Rewrites values: each value `from[t]` becomes `to[t]`. `to` must be a
/// rearrangement of `from`.
fn relabel(pi: &mut [usize], from: &[usize], to: &[usize]) {
    debug_assert_eq!(
        {
            let mut a = from.to_vec();
            a.sort();
            a
        },
        {
            let mut b = to.to_vec();
            b.sort();
            b
        }
    );
    for v in pi.iter_mut() {
        if let Some(t) = from.iter().position(|x| x == v) {
            *v = to[t];
        }
    }
}

/// Cyclic value shifts on the smaller entries left of each maximum.
pub fn bij46(pi: &[usize]) -> Vec<usize> {
    let p1 = pat("12:01,10,11,12,22");
    let p2 = pat("12:00,10,11,12,22");
    let mut out = pi.to_vec();
    let maxima = rl_max_positions(pi);
    for &r in maxima.iter().rev() {
        if r == 0 || maxima.contains(&(r - 1)) {
            continue;
        }
        let x = r - 1;
        let (o1, o2) = (occurs(&out, &p1, x, r), occurs(&out, &p2, x, r));
        if o1 == o2 {
            continue;
        }
        let mut s: Vec<usize> = out[..r].iter().copied().filter(|&y| y < out[r]).collect();
        s.sort_unstable();
        let j = s.len();
        // o1: x is the largest, a_t -> a_{t+1}, a_j -> a_1; o2: the reverse.
        let to: Vec<usize> =
            if o1 { (0..j).map(|t| s[(t + 1) % j]).collect() } else { (0..j).map(|t| s[(t + j - 1) % j]).collect() };
        relabel(&mut out, &s, &to);
    }
    out
}

/// Cyclic shifts over `{a} ∪ M_i`, `M_i` = entries left of `r_{i-1}` below `r_i`.
pub fn bij49(pi: &[usize]) -> Vec<usize> {
    let p1 = pat("12:01,11,12,22");
    let p2 = pat("12:00,10,12,22");
    let mut out = pi.to_vec();
    let maxima = rl_max_positions(pi);
    for i in (1..maxima.len()).rev() {
        let r = maxima[i];
        let prev = maxima[i - 1];
        let find = |out: &[usize], p: &MeshPattern| (0..r).find(|&a| occurs(out, p, a, r));
        let (a1, a2) = (find(&out, &p1), find(&out, &p2));
        let a = match (a1, a2) {
            (Some(a), None) | (None, Some(a)) => a,
            _ => continue,
        };
        let mut m: Vec<usize> = out[..prev].iter().copied().filter(|&y| y < out[r]).collect();
        if m.is_empty() {
            continue;
        }
        m.sort_unstable();
        let av = out[a];
        // Cycle through a, a_1, ..., a_j (forward for the first pattern).
        let mut ring = vec![av];
        ring.extend(&m);
        let len = ring.len();
        let to: Vec<usize> = if a1.is_some() {
            (0..len).map(|t| ring[(t + 1) % len]).collect()
        } else {
            (0..len).map(|t| ring[(t + len - 1) % len]).collect()
        };
        relabel(&mut out, &ring, &to);
    }
    out
}

/// Reverses, in place, the entries left of each maximum whose values lie between it and the next maximum.
pub fn bij73(pi: &[usize]) -> Vec<usize> {
    let mut out = pi.to_vec();
    let maxima = rl_max_positions(pi);
    for (i, &r) in maxima.iter().enumerate() {
        let lo = maxima.get(i + 1).map_or(0, |&p| pi[p]);
        let pos: Vec<usize> = (0..r).filter(|&x| pi[x] > lo && pi[x] < pi[r]).collect();
        let vals: Vec<usize> = pos.iter().rev().map(|&x| pi[x]).collect();
        for (x, v) in pos.into_iter().zip(vals) {
            out[x] = v;
        }
    }
    out
}

/// Complements the values of a set of positions among themselves.
fn complement_values(out: &mut [usize], pos: &[usize]) {
    let mut vals: Vec<usize> = pos.iter().map(|&x| out[x]).collect();
    vals.sort_unstable();
    let k = vals.len();
    let new: Vec<usize> = pos.iter().map(|&x| vals[k - 1 - vals.binary_search(&out[x]).unwrap()]).collect();
    for (&x, v) in pos.iter().zip(new) {
        out[x] = v;
    }
}

/// For each maximum from the right: complement the smaller entries to its left,
/// then the smaller entries left of the previous maximum.
pub fn bij75(pi: &[usize]) -> Vec<usize> {
    let mut out = pi.to_vec();
    let maxima = rl_max_positions(pi);
    for i in (0..maxima.len()).rev() {
        let r = maxima[i];
        let rv = out[r];
        let a: Vec<usize> = (0..r).filter(|&x| out[x] < rv).collect();
        complement_values(&mut out, &a);
        if i > 0 {
            let m: Vec<usize> = (0..maxima[i - 1]).filter(|&x| out[x] < rv).collect();
            complement_values(&mut out, &m);
        }
    }
    out
}

/// A named map with the pattern pair whose occurrences it exchanges.
#[derive(Clone, Debug, Serialize)]
pub struct BijectionSpec {
    pub name: &'static str,
    pub first: MeshPattern,
    pub second: MeshPattern,
    pub class_id: u32,
    #[serde(skip)]
    pub map: Map,
}

pub fn catalog() -> Vec<BijectionSpec> {
    let spec =
        |name, a: &str, b: &str, class_id, map| BijectionSpec { name, first: pat(a), second: pat(b), class_id, map };
    vec![
        spec("bij46", "12:01,10,11,12,22", "12:00,10,11,12,22", 46, bij46 as Map),
        spec("bij49", "12:01,11,12,22", "12:00,10,12,22", 49, bij49),
        spec("bij73", "12:11,21,22", "12:01,21,22", 73, bij73),
        spec("bij75", "12:01,12,22", "12:00,12,22", 75, bij75),
        spec("class2", "12:00,01,02,11,12,21,22", "12:01,02,11,12,20,21,22", 2, class2_map),
    ]
}

pub fn by_name(name: &str) -> Option<BijectionSpec> {
    catalog().into_iter().find(|b| b.name == name)
}

/// First failure found by a check: the input and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub output: String,
    pub detail: String,
}

fn fmt(v: &[usize]) -> String {
    Permutation::from_vec_unchecked(v.to_vec()).to_string()
}

/// `f(f(pi)) = pi` on S_n for every `n <= depth`; the lexicographically first failure.
pub fn verify_involution(f: impl Fn(&[usize]) -> Vec<usize>, depth: usize) -> Result<(), Counterexample> {
    for n in 0..=depth {
        let mut bad = None;
        for_each_permutation(n, |pi| {
            if bad.is_some() {
                return;
            }
            let once = f(pi);
            let twice = f(&once);
            if twice != pi {
                bad = Some(Counterexample {
                    input: fmt(pi),
                    output: fmt(&once),
                    detail: format!("f(f(pi)) = {}", fmt(&twice)),
                });
            }
        });
        if let Some(c) = bad {
            return Err(c);
        }
    }
    Ok(())
}

/// `count(p1, pi) = count(p2, f(pi))` and `count(p2, pi) = count(p1, f(pi))`
/// for every permutation up to `depth`. `f` must be a permutation of each S_n.
pub fn verify_joint_swap(
    f: impl Fn(&[usize]) -> Vec<usize>,
    p1: &MeshPattern,
    p2: &MeshPattern,
    depth: usize,
) -> Result<(), Counterexample> {
    let count = |p: &MeshPattern, pi: &[usize]| count2(pi, p.tau().entries()[0] == 1, p.mask9().unwrap());
    for n in 0..=depth {
        let mut bad = None;
        for_each_permutation(n, |pi| {
            if bad.is_some() {
                return;
            }
            let img = f(pi);
            let (a1, a2) = (count(p1, pi), count(p2, pi));
            let (b1, b2) = (count(p1, &img), count(p2, &img));
            if a1 != b2 || a2 != b1 {
                bad = Some(Counterexample {
                    input: fmt(pi),
                    output: fmt(&img),
                    detail: format!("counts (p1, p2): before ({a1}, {a2}), after ({b1}, {b2})"),
                });
            }
        });
        if let Some(c) = bad {
            return Err(c);
        }
    }
    Ok(())
}

/// Pattern pair exchanged by [`keep_max_complement`]: top row shaded, the cells
/// of columns 0..2 in rows 1 and 0 given by `x`, and the same cells with rows
/// 0 and 1 swapped.
pub fn keep_max_complement_pair(x: [bool; 6]) -> (MeshPattern, MeshPattern) {
    let cols = [0, 0, 1, 1, 2, 2];
    let rows_p = [1, 0, 1, 0, 1, 0];
    build_pair(x, &cols, &rows_p, &cols, &rows_p.map(|r| 1 - r))
}

/// Pattern pair exchanged by [`keep_max_reverse_left`]: top row shaded, column 2
/// open, and the 2x2 block of columns 0..1, rows 0..1 mirrored left to right.
pub fn keep_max_reverse_pair(x: [bool; 4]) -> (MeshPattern, MeshPattern) {
    let x6 = [x[0], x[1], x[2], x[3], false, false];
    build_pair(x6, &[0, 0, 1, 1, 2, 2], &[1, 0, 1, 0, 1, 0], &[1, 1, 0, 0, 2, 2], &[1, 0, 1, 0, 1, 0])
}

fn build_pair(x: [bool; 6], cp: &[usize], rp: &[usize], cq: &[usize], rq: &[usize]) -> (MeshPattern, MeshPattern) {
    use crate::pattern::MeshBox;
    let top = [MeshBox::new(0, 2), MeshBox::new(1, 2), MeshBox::new(2, 2)];
    let tau = Permutation::identity(2);
    let pick = |c: &[usize], r: &[usize]| {
        let boxes = (0..6).filter(|&t| x[t]).map(|t| MeshBox::new(c[t], r[t])).chain(top);
        MeshPattern::new(tau.clone(), boxes).expect("boxes in range")
    };
    (pick(cp, rp), pick(cq, rq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(f: Map, s: &str) -> String {
        let p: Permutation = s.parse().unwrap();
        fmt(&f(p.entries()))
    }

    #[test]
    fn lemma_maps() {
        assert_eq!(apply(keep_max_complement, "132"), "231");
        assert_eq!(apply(keep_max_complement, "312"), "321");
        assert_eq!(apply(keep_max_reverse_left, "2314"), "1324");
        assert_eq!(apply(keep_max_reverse_left, "4123"), "4123");
        assert!(verify_involution(keep_max_complement, 5).is_ok());
        assert!(verify_involution(keep_max_reverse_left, 5).is_ok());
    }

    #[test]
    fn class2_examples() {
        assert_eq!(apply(class2_map, "3142"), "1324");
        assert_eq!(apply(class2_map, "1324"), "3142");
        assert_eq!(apply(class2_map, "4132"), "4132");
        assert!(verify_involution(class2_map, 6).is_ok());
    }

    #[test]
    fn figure_examples() {
        assert_eq!(apply(bij46, "23471856"), "23457816");
        assert_eq!(apply(bij49, "24867315"), "26817345");
        assert_eq!(apply(bij73, "8,2,9,7,10,6,4,3,1,5"), "7,1,9,8,10,6,3,4,2,5");
        assert_eq!(apply(bij75, "23784516"), "74382156");
        assert_eq!(apply(bij75, "1"), "1");
        assert_eq!(apply(bij46, "54321"), "54321");
        // one maximum, one block holding everything else
        assert_eq!(apply(bij73, "12345"), "43215");
        assert_eq!(apply(bij73, "54321"), "54321");
    }

    #[test]
    fn wrong_pair_fails() {
        let err = verify_joint_swap(bij46, &pat("12:"), &pat("21:"), 4).unwrap_err();
        assert!(!err.input.is_empty());
    }
}
