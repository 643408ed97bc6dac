use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::perm::Permutation;

/// Box `(i, j)` of the pattern grid: column `i`, row `j`, both in `0..=k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MeshBox {
    pub i: usize,
    pub j: usize,
}

impl MeshBox {
    pub const fn new(i: usize, j: usize) -> Self {
        MeshBox { i, j }
    }
}

/// A mesh pattern `(tau, R)`. The shading is kept sorted and duplicate-free,
/// so derived equality and ordering are those of the canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MeshPattern {
    tau: Permutation,
    shading: Vec<MeshBox>,
}

impl MeshPattern {
    /// Builds a pattern; boxes may come in any order and repeat.
    pub fn new(tau: Permutation, boxes: impl IntoIterator<Item = MeshBox>) -> Result<Self, ParseError> {
        let k = tau.len();
        let set: BTreeSet<MeshBox> = boxes.into_iter().collect();
        if let Some(b) = set.iter().find(|b| b.i > k || b.j > k) {
            return Err(ParseError::BoxOutOfRange { token: format!("{}{}", b.i, b.j), k });
        }
        Ok(MeshPattern { tau, shading: set.into_iter().collect() })
    }

    /// Classical pattern (no shading).
    pub fn classical(tau: Permutation) -> Self {
        MeshPattern { tau, shading: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn shading(&self) -> &[MeshBox] {
        &self.shading
    }

    pub fn is_shaded(&self, i: usize, j: usize) -> bool {
        self.shading.binary_search(&MeshBox::new(i, j)).is_ok()
    }

    /// Shading as a bitmask, bit `i * (k+1) + j` for box `(i, j)`. Needs `k <= 10`.
    pub fn mask(&self) -> u128 {
        let side = self.len() + 1;
        assert!(side * side <= 128, "mask needs k <= 10");
        self.shading.iter().fold(0u128, |m, b| m | 1u128 << (b.i * side + b.j))
    }

    /// The 9-bit shading mask of a length-2 pattern.
    pub fn mask9(&self) -> Option<u16> {
        (self.len() == 2).then(|| self.mask() as u16)
    }

    /// Length-2 pattern from its underlying permutation and 9-bit mask.
    pub fn from_mask9(increasing: bool, mask: u16) -> Self {
        let tau = if increasing { vec![1, 2] } else { vec![2, 1] };
        let shading = (0..9).filter(|b| mask >> b & 1 == 1).map(|b| MeshBox::new(b / 3, b % 3)).collect();
        MeshPattern { tau: Permutation::from_vec_unchecked(tau), shading }
    }

    /// Vertical reflection: values flipped.
    pub fn complement(&self) -> Self {
        let m = self.len();
        let shading = self.shading.iter().map(|b| MeshBox::new(b.i, m - b.j));
        MeshPattern::new(self.tau.complement(), shading).expect("reflection stays in range")
    }

    /// Horizontal reflection: positions flipped.
    pub fn reverse(&self) -> Self {
        let m = self.len();
        let shading = self.shading.iter().map(|b| MeshBox::new(m - b.i, b.j));
        MeshPattern::new(self.tau.reverse(), shading).expect("reflection stays in range")
    }

    /// Reflection in the diagonal.
    pub fn inverse(&self) -> Self {
        let shading = self.shading.iter().map(|b| MeshBox::new(b.j, b.i));
        MeshPattern::new(self.tau.inverse(), shading).expect("reflection stays in range")
    }

    /// Closure of `{self}` under complement, reverse and inverse, sorted by literal.
    pub fn symmetry_orbit(&self) -> Vec<MeshPattern> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        seen.insert(self.clone());
        while let Some(p) = stack.pop() {
            for q in [p.complement(), p.reverse(), p.inverse()] {
                if seen.insert(q.clone()) {
                    stack.push(q);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_by_key(|p| p.to_string());
        out
    }

    /// Same pattern with one more shaded box.
    pub fn with_box(&self, b: MeshBox) -> Self {
        MeshPattern::new(self.tau.clone(), self.shading.iter().copied().chain([b])).expect("box in range")
    }
}

pub fn parse_pattern(text: &str) -> Result<MeshPattern, ParseError> {
    text.parse()
}

pub fn format_pattern(p: &MeshPattern) -> String {
    p.to_string()
}

impl FromStr for MeshPattern {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        let (tau_s, boxes_s) = text.split_once(':').ok_or_else(|| ParseError::MissingColon(text.to_string()))?;
        let mut tau = Vec::with_capacity(tau_s.len());
        for c in tau_s.chars() {
            let d = c.to_digit(10).ok_or_else(|| ParseError::MalformedDigits(tau_s.to_string()))?;
            tau.push(d as usize);
        }
        let k = tau.len();
        if k > 9 {
            return Err(ParseError::TooLong(k));
        }
        let mut seen = [false; 10];
        for &v in &tau {
            if seen[v] {
                return Err(ParseError::RepeatedValue(tau_s.to_string()));
            }
            seen[v] = true;
        }
        let tau = Permutation::new(tau).map_err(|_| ParseError::NotPermutation(tau_s.to_string()))?;

        let mut boxes = Vec::new();
        for token in boxes_s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if token.chars().count() != 2 {
                return Err(ParseError::TokenLength(token.to_string()));
            }
            let digits: Vec<u32> = token
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| ParseError::MalformedDigits(token.to_string())))
                .collect::<Result<_, _>>()?;
            let (i, j) = (digits[0] as usize, digits[1] as usize);
            if i > k || j > k {
                return Err(ParseError::BoxOutOfRange { token: token.to_string(), k });
            }
            boxes.push(MeshBox::new(i, j));
        }
        MeshPattern::new(tau, boxes)
    }
}

impl fmt::Display for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.tau.entries() {
            write!(f, "{v}")?;
        }
        f.write_str(":")?;
        for (n, b) in self.shading.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}{}", b.i, b.j)?;
        }
        Ok(())
    }
}

impl serde::Serialize for MeshPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for MeshPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
