use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// A permutation of `1..=n` in one-line notation. `n = 0` is the empty permutation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Permutation {
    entries: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation, checking that `entries` is a bijection onto `1..=n`.
    pub fn new(entries: Vec<usize>) -> Result<Self, ParseError> {
        if !is_permutation(&entries) {
            let text = entries.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            return Err(ParseError::NotPermutation(text));
        }
        Ok(Permutation { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&entries));
        Permutation { entries }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { entries: (1..=n).collect() }
    }

    pub fn empty() -> Self {
        Permutation::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (pos, &v) in self.entries.iter().enumerate() {
            inv[v - 1] = pos + 1;
        }
        Permutation { entries: inv }
    }

    pub fn complement(&self) -> Self {
        let n = self.len();
        Permutation { entries: self.entries.iter().map(|&v| n + 1 - v).collect() }
    }

    pub fn reverse(&self) -> Self {
        let mut e = self.entries.clone();
        e.reverse();
        Permutation { entries: e }
    }

    /// All of S_n in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut cur: Option<Vec<usize>> = Some((1..=n).collect());
        std::iter::from_fn(move || {
            let out = cur.take()?;
            let mut next = out.clone();
            if next_permutation(&mut next) {
                cur = Some(next);
            }
            Some(Permutation { entries: out })
        })
    }
}

fn is_permutation(entries: &[usize]) -> bool {
    let n = entries.len();
    let mut seen = vec![false; n + 1];
    for &v in entries {
        if v == 0 || v > n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Rearranges `a` into the lexicographically next permutation. Returns false
/// (leaving `a` sorted descending) when `a` was already the last one.
pub fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Calls `f` on every permutation of `1..=n` (as a slice), lexicographically.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (1..=n).collect();
    loop {
        f(&a);
        if !next_permutation(&mut a) {
            break;
        }
    }
}

/// Splits S_n into disjoint work units: each unit fixes the first `min(n, 2)`
/// entries. Returns the first permutation of each unit and the prefix length.
pub fn prefix_units(n: usize) -> (Vec<Vec<usize>>, usize) {
    let fixed = n.min(2);
    let mut units = Vec::new();
    let mut a: Vec<usize> = (1..=n).collect();
    loop {
        units.push(a.clone());
        // Jump to the next prefix: sort the tail descending, then step once.
        a[fixed..].sort_unstable_by(|x, y| y.cmp(x));
        if !next_permutation(&mut a) {
            break;
        }
    }
    (units, fixed)
}

/// Iterates the permutations of one unit returned by [`prefix_units`].
pub fn for_each_in_unit(start: &[usize], fixed: usize, mut f: impl FnMut(&[usize])) {
    let mut a = start.to_vec();
    loop {
        f(&a);
        if !next_permutation(&mut a[fixed..]) {
            break;
        }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.entries {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = ParseError;

    /// Accepts a digit string (`2413`) or comma-separated integers (`8,2,9,7,10,...`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let entries: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| ParseError::MalformedDigits(t.to_string())))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| ParseError::MalformedDigits(c.to_string())))
                .collect::<Result<_, _>>()?
        };
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            if v >= 1 && v <= n {
                if seen[v] {
                    return Err(ParseError::RepeatedValue(v.to_string()));
                }
                seen[v] = true;
            }
        }
        Permutation::new(entries).map_err(|_| ParseError::NotPermutation(s.to_string()))
    }
}
