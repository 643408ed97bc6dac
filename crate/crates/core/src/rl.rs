use serde::Serialize;

use crate::error::Error;
use crate::perm::Permutation;

/// Right-to-left maxima `r_1 > r_2 > ... > r_l` and the regions between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RlDecomposition {
    /// Maxima values, left to right (so decreasing). `values[0] == n`.
    pub values: Vec<usize>,
    /// 1-based positions of the maxima, increasing.
    pub positions: Vec<usize>,
    /// `blocks[i]`: 1-based positions left of `r_i` whose value lies strictly
    /// between `r_{i+1}` and `r_i` (with `r_{l+1} = 0`).
    pub blocks: Vec<Vec<usize>>,
}

impl RlDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Positions (0-based) of right-to-left maxima of a raw slice, left to right.
pub(crate) fn rl_max_positions(pi: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut best = 0;
    for x in (0..pi.len()).rev() {
        if pi[x] > best {
            best = pi[x];
            out.push(x);
        }
    }
    out.reverse();
    out
}

pub fn rl_decomposition(pi: &Permutation) -> Result<RlDecomposition, Error> {
    if pi.is_empty() {
        return Err(Error::EmptyPermutation);
    }
    let e = pi.entries();
    let pos = rl_max_positions(e);
    let values: Vec<usize> = pos.iter().map(|&x| e[x]).collect();
    let blocks = (0..pos.len())
        .map(|i| {
            let lo = values.get(i + 1).copied().unwrap_or(0);
            (0..pos[i]).filter(|&x| e[x] > lo && e[x] < values[i]).map(|x| x + 1).collect()
        })
        .collect();
    Ok(RlDecomposition { values, positions: pos.iter().map(|x| x + 1).collect(), blocks })
}
