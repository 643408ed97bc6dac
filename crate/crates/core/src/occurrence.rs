//! The occurrence predicate. Witnesses are 1-based, strictly increasing positions.

use crate::pattern::MeshPattern;
use crate::perm::Permutation;

/// Whether the values at `w` are order-isomorphic to `tau`.
fn order_isomorphic(tau: &[usize], pi: &[usize], w: &[usize]) -> bool {
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if (pi[w[a] - 1] < pi[w[b] - 1]) != (tau[a] < tau[b]) {
                return false;
            }
        }
    }
    true
}

/// Box `(column, row)` holding the element at 0-based position `x`, relative to witness `w`.
fn locate(pi: &[usize], w: &[usize], x: usize) -> (usize, usize) {
    let v = pi[x];
    let col = w.iter().filter(|&&p| p - 1 < x).count();
    let row = w.iter().filter(|&&p| pi[p - 1] < v).count();
    (col, row)
}

pub fn is_occurrence(p: &MeshPattern, pi: &Permutation, w: &[usize]) -> bool {
    let e = pi.entries();
    debug_assert_eq!(w.len(), p.len());
    if !order_isomorphic(p.tau().entries(), e, w) {
        return false;
    }
    (0..e.len()).filter(|x| !w.contains(&(x + 1))).all(|x| {
        let (c, r) = locate(e, w, x);
        !p.is_shaded(c, r)
    })
}

/// Bit `i * (k+1) + j` is set iff a non-witness element lies in box `(i, j)`.
/// Defined for any increasing witness, order-isomorphic or not. Needs `k <= 10`.
pub fn box_occupancy(pi: &Permutation, w: &[usize]) -> u128 {
    let e = pi.entries();
    let side = w.len() + 1;
    let mut occ = 0u128;
    for x in 0..e.len() {
        if !w.contains(&(x + 1)) {
            let (c, r) = locate(e, w, x);
            occ |= 1u128 << (c * side + r);
        }
    }
    occ
}

/// 9-bit occupancy for a pair at 0-based positions `a < b` of a raw one-line slice.
#[inline]
pub fn occupancy2(pi: &[usize], a: usize, b: usize) -> u16 {
    let (lo, hi) = if pi[a] < pi[b] { (pi[a], pi[b]) } else { (pi[b], pi[a]) };
    let mut occ = 0u16;
    for (x, &v) in pi.iter().enumerate() {
        if x == a || x == b {
            continue;
        }
        let col = if x < a {
            0
        } else if x < b {
            1
        } else {
            2
        };
        let row = if v < lo {
            0
        } else if v < hi {
            1
        } else {
            2
        };
        occ |= 1 << (col * 3 + row);
    }
    occ
}

/// Occurrences of a length-2 pattern (given as orientation plus mask) in a raw slice.
#[inline]
pub fn count2(pi: &[usize], increasing: bool, mask: u16) -> usize {
    let n = pi.len();
    let mut c = 0;
    for a in 0..n {
        for b in a + 1..n {
            if (pi[a] < pi[b]) == increasing && occupancy2(pi, a, b) & mask == 0 {
                c += 1;
            }
        }
    }
    c
}

/// Calls `f` with every increasing k-subset of `1..=n`, lexicographically.
fn for_each_witness(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut w: Vec<usize> = (1..=k).collect();
    loop {
        if !f(&w) {
            return;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if w[i] < n - (k - 1 - i) {
                break;
            }
            if i == 0 {
                return;
            }
        }
        w[i] += 1;
        for t in i + 1..k {
            w[t] = w[t - 1] + 1;
        }
    }
}

pub fn count_occurrences(p: &MeshPattern, pi: &Permutation) -> usize {
    if let Some(mask) = p.mask9() {
        return count2(pi.entries(), p.tau().entries()[0] == 1, mask);
    }
    let mut c = 0;
    for_each_witness(pi.len(), p.len(), |w| {
        if is_occurrence(p, pi, w) {
            c += 1;
        }
        true
    });
    c
}

/// Whether `pi` contains at least one occurrence of `p`.
pub fn contains(p: &MeshPattern, pi: &Permutation) -> bool {
    let mut found = false;
    for_each_witness(pi.len(), p.len(), |w| {
        found = is_occurrence(p, pi, w);
        !found
    });
    found
}

/// All occurrences in lexicographic witness order.
pub fn list_occurrences(p: &MeshPattern, pi: &Permutation) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_witness(pi.len(), p.len(), |w| {
        if is_occurrence(p, pi, w) {
            out.push(w.to_vec());
        }
        true
    });
    out
}
