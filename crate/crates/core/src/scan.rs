//! Bulk distribution scan of all 1024 length-2 mesh patterns.
//!
//! For each permutation and each order-isomorphic pair the 9-bit box occupancy
//! `O` is computed once; every shading `R` with `R & O == 0` gains an
//! occurrence, so the counters of all submasks of `!O` are bumped.

use crate::distribution::{DistributionTable, Scanner};
use crate::error::Error;
use crate::occurrence::occupancy2;
use crate::pattern::MeshPattern;
use crate::perm::{binomial, for_each_in_unit, prefix_units};

/// Raw scan result: `counts[t][mask][n][k]`, `t = 0` for `12`, `1` for `21`.
pub struct Length2Scan {
    depth: usize,
    counts: Vec<Vec<Vec<Vec<u64>>>>,
}

impl Length2Scan {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn table(&self, increasing: bool, mask: u16) -> DistributionTable {
        let t = if increasing { 0 } else { 1 };
        DistributionTable {
            pattern: MeshPattern::from_mask9(increasing, mask),
            rows: self.counts[t][mask as usize].clone(),
        }
    }

    pub fn table_of(&self, p: &MeshPattern) -> Option<DistributionTable> {
        let mask = p.mask9()?;
        Some(self.table(p.tau().entries()[0] == 1, mask))
    }

    /// All 1024 tables in the order of [`crate::catalog::all_length2_patterns`].
    pub fn tables(&self) -> Vec<DistributionTable> {
        crate::catalog::all_length2_patterns().iter().map(|p| self.table_of(p).unwrap()).collect()
    }
}

/// Rows of one length `n`: `[t][mask][k]`.
fn scan_length(n: usize) -> Vec<Vec<Vec<u64>>> {
    let width = binomial(n, 2) + 1;
    let (units, fixed) = prefix_units(n);
    let run = |start: &Vec<usize>| {
        let mut dist = vec![vec![0u64; 512 * width]; 2];
        let mut occ = [[0u16; 512]; 2];
        for_each_in_unit(start, fixed, |pi| {
            for o in occ.iter_mut() {
                o.fill(0);
            }
            for a in 0..n {
                for b in a + 1..n {
                    let t = usize::from(pi[a] > pi[b]);
                    let free = !occupancy2(pi, a, b) & 0x1ff;
                    // submasks of `free`, including 0
                    let mut s = free;
                    loop {
                        occ[t][s as usize] += 1;
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & free;
                    }
                }
            }
            for t in 0..2 {
                for m in 0..512 {
                    dist[t][m * width + occ[t][m] as usize] += 1;
                }
            }
        });
        dist
    };
    let add = |mut a: Vec<Vec<u64>>, b: Vec<Vec<u64>>| {
        for (x, y) in a.iter_mut().zip(b) {
            for (u, v) in x.iter_mut().zip(y) {
                *u += v;
            }
        }
        a
    };
    let zero = || vec![vec![0u64; 512 * width]; 2];
    #[cfg(feature = "parallel")]
    let merged = {
        use rayon::prelude::*;
        units.par_iter().map(run).reduce(zero, add)
    };
    #[cfg(not(feature = "parallel"))]
    let merged = units.iter().map(run).fold(zero(), add);
    merged.into_iter().map(|flat| flat.chunks(width).map(|c| c.to_vec()).collect()).collect()
}

impl Scanner {
    pub fn bulk_length2(&self, depth: usize) -> Result<Length2Scan, Error> {
        self.check(depth)?;
        let mut counts = vec![vec![Vec::new(); 512]; 2];
        for n in 0..=depth {
            let rows = scan_length(n);
            for (t, per_mask) in rows.into_iter().enumerate() {
                for (m, row) in per_mask.into_iter().enumerate() {
                    counts[t][m].push(row);
                }
            }
        }
        Ok(Length2Scan { depth, counts })
    }
}

/// Distribution tables of all 1024 length-2 patterns up to `depth`.
pub fn bulk_scan_length2(depth: usize) -> Result<Vec<DistributionTable>, Error> {
    Ok(Scanner::default().bulk_length2(depth)?.tables())
}
