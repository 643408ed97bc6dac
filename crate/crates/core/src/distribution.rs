//! Exhaustive distribution tables, avoidance sequences and joint tables.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::occurrence::{contains, count_occurrences};
use crate::pattern::MeshPattern;
use crate::perm::{binomial, factorial, for_each_in_unit, prefix_units, Permutation};

pub const DEFAULT_MAX_DEPTH: usize = 9;

/// `rows[n][k]` = number of permutations of length `n` with exactly `k` occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub pattern: MeshPattern,
    pub rows: Vec<Vec<u64>>,
}

impl DistributionTable {
    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[u64] {
        &self.rows[n]
    }

    pub fn avoidance(&self) -> AvoidanceSequence {
        AvoidanceSequence { pattern: self.pattern.clone(), values: self.rows.iter().map(|r| r[0]).collect() }
    }

    /// Checks the partition law: every row sums to `n!`.
    pub fn sums_ok(&self) -> bool {
        self.rows.iter().enumerate().all(|(n, r)| r.iter().sum::<u64>() == factorial(n))
    }

    /// Table cut down to depth `n`.
    pub fn truncated(&self, n: usize) -> DistributionTable {
        DistributionTable { pattern: self.pattern.clone(), rows: self.rows[..=n].to_vec() }
    }

    pub fn signature(&self) -> Signature {
        Signature::of_rows(&self.rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceSequence {
    pub pattern: MeshPattern,
    /// `values[n] = s_{n,0}` for `n = 0..=N`.
    pub values: Vec<u64>,
}

/// `mats[n][k][l]` = permutations of length `n` with `k` occurrences of the
/// first pattern and `l` of the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointTable {
    pub patterns: (MeshPattern, MeshPattern),
    pub mats: Vec<Vec<Vec<u64>>>,
}

impl JointTable {
    pub fn is_symmetric(&self) -> bool {
        self.mats.iter().all(|m| (0..m.len()).all(|k| (0..m.len()).all(|l| m[k][l] == m[l][k])))
    }

    pub fn is_diagonal(&self) -> bool {
        self.mats.iter().all(|m| (0..m.len()).all(|k| (0..m[k].len()).all(|l| k == l || m[k][l] == 0)))
    }
}

/// Byte-stable serialization of rows `1..=N` plus its SHA-256 digest.
/// Rows are written as `n=<n>:<k>=<count>,...;` so equal bytes mean equal rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    bytes: Vec<u8>,
}

impl Signature {
    pub fn of_rows(rows: &[Vec<u64>]) -> Self {
        let mut s = String::new();
        for (n, row) in rows.iter().enumerate().skip(1) {
            s.push_str(&format!("n={n}:"));
            let cells: Vec<String> = row.iter().enumerate().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&cells.join(","));
            s.push(';');
        }
        Signature { bytes: s.into_bytes() }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

/// Exhaustive scans under a depth guard.
#[derive(Clone, Copy, Debug)]
pub struct Scanner {
    pub max_depth: usize,
}

impl Default for Scanner {
    fn default() -> Self {
        Scanner { max_depth: DEFAULT_MAX_DEPTH }
    }
}

impl Scanner {
    pub fn with_max_depth(max_depth: usize) -> Self {
        Scanner { max_depth }
    }

    pub fn check(&self, depth: usize) -> Result<(), Error> {
        if depth > self.max_depth {
            return Err(Error::ResourceGuard { requested: depth, max: self.max_depth });
        }
        Ok(())
    }

    pub fn distribution(&self, p: &MeshPattern, depth: usize) -> Result<DistributionTable, Error> {
        self.check(depth)?;
        let k = p.len();
        let rows = (0..=depth)
            .map(|n| {
                let width = binomial(n, k) + 1;
                fold_sn(n, width, |acc, pi| acc[count_occurrences(p, &pi)] += 1)
            })
            .collect();
        Ok(DistributionTable { pattern: p.clone(), rows })
    }

    pub fn avoidance(&self, p: &MeshPattern, depth: usize) -> Result<AvoidanceSequence, Error> {
        self.check(depth)?;
        let values = (0..=depth)
            .map(|n| {
                fold_sn(n, 1, |acc, pi| {
                    if !contains(p, &pi) {
                        acc[0] += 1
                    }
                })[0]
            })
            .collect();
        Ok(AvoidanceSequence { pattern: p.clone(), values })
    }

    pub fn joint(&self, p1: &MeshPattern, p2: &MeshPattern, depth: usize) -> Result<JointTable, Error> {
        self.check(depth)?;
        let mats = (0..=depth)
            .map(|n| {
                let w1 = binomial(n, p1.len()) + 1;
                let w2 = binomial(n, p2.len()) + 1;
                let flat = fold_sn(n, w1 * w2, |acc, pi| {
                    acc[count_occurrences(p1, &pi) * w2 + count_occurrences(p2, &pi)] += 1
                });
                flat.chunks(w2).map(|c| c.to_vec()).collect()
            })
            .collect();
        Ok(JointTable { patterns: (p1.clone(), p2.clone()), mats })
    }
}

/// Folds a counter vector of length `width` over S_n; parallel when enabled.
/// Integer addition makes the merged result independent of scheduling.
pub(crate) fn fold_sn<F>(n: usize, width: usize, f: F) -> Vec<u64>
where
    F: Fn(&mut Vec<u64>, Permutation) + Sync,
{
    let (units, fixed) = prefix_units(n);
    let run = |start: &Vec<usize>| {
        let mut acc = vec![0u64; width];
        for_each_in_unit(start, fixed, |e| f(&mut acc, Permutation::from_vec_unchecked(e.to_vec())));
        acc
    };
    let add = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        units.par_iter().map(run).reduce(|| vec![0u64; width], add)
    }
    #[cfg(not(feature = "parallel"))]
    {
        units.iter().map(run).fold(vec![0u64; width], add)
    }
}

pub fn distribution(p: &MeshPattern, depth: usize) -> Result<DistributionTable, Error> {
    Scanner::default().distribution(p, depth)
}

pub fn avoidance(p: &MeshPattern, depth: usize) -> Result<AvoidanceSequence, Error> {
    Scanner::default().avoidance(p, depth)
}

pub fn joint_distribution(p1: &MeshPattern, p2: &MeshPattern, depth: usize) -> Result<JointTable, Error> {
    Scanner::default().joint(p1, p2, depth)
}
