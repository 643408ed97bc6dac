//! Cross-checks of formulas, generating functions and bijections against the
//! brute-force tables.

use num_bigint::BigInt;
use serde::Serialize;

use crate::bijections::{self, BijectionSpec, Counterexample};
use crate::catalog::{Catalog, ClassRecord, Seed};
use crate::distribution::Scanner;
use crate::error::Error;
use crate::formulas::{self, FormulaRef};
use crate::occurrence::count2;
use crate::pattern::MeshPattern;
use crate::perm::for_each_permutation;
use crate::rl::rl_max_positions;
use crate::series::{self, GfKey, Mode, Series};

fn trimmed(row: &[u64]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
    while v.len() > 1 && v.last().is_some_and(|x| *x == BigInt::from(0)) {
        v.pop();
    }
    v
}

fn record(records: &[ClassRecord], id: u32) -> Result<&ClassRecord, Error> {
    records.iter().find(|r| r.class_id == id).ok_or_else(|| Error::Seed(format!("no class {id}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaVerdict {
    #[serde(flatten)]
    pub formula: FormulaRef,
    pub verified: bool,
    pub depth: usize,
    pub patterns_checked: usize,
    pub mismatch: Option<String>,
}

/// Compares every non-g.f. registry entry with the scan for all members of its class.
pub fn verify_formulas(cat: &Catalog, seed: &Seed) -> Result<Vec<FormulaVerdict>, Error> {
    let records = seed.records()?;
    let depth = cat.depth();
    let mut out = Vec::new();
    for f in formulas::registry().into_iter().filter(|f| f.is_distribution() || f.is_avoidance()) {
        let rec = record(&records, f.class_id)?;
        let mut mismatch = None;
        'outer: for p in &rec.members {
            let t = cat.table(p);
            for n in 0..=depth {
                if f.is_distribution() {
                    if n == 0 {
                        continue;
                    }
                    let want = trimmed(&t.rows[n]);
                    let got = f.distribution(n).unwrap();
                    if got != want {
                        mismatch = Some(format!("{p} n={n}: formula {got:?}, scan {want:?}"));
                        break 'outer;
                    }
                } else {
                    let want = BigInt::from(t.rows[n][0]);
                    let got = f.avoidance(n).unwrap();
                    if got != want {
                        mismatch = Some(format!("{p} n={n}: formula {got}, scan {want}"));
                        break 'outer;
                    }
                }
            }
        }
        out.push(FormulaVerdict {
            verified: mismatch.is_none(),
            depth,
            patterns_checked: rec.members.len(),
            formula: f,
            mismatch,
        });
    }
    Ok(out)
}

/// Checks the distribution formula of one class representative at a single depth
/// (used for the deeper spot checks).
pub fn spot_check_distribution(scanner: &Scanner, seed: &Seed, class_id: u32, n: usize) -> Result<bool, Error> {
    let rec = seed.records()?;
    let p = record(&rec, class_id)?.representative().clone();
    let t = scanner.distribution(&p, n)?;
    Ok(formulas::formula_distribution(class_id, n)? == trimmed(&t.rows[n]))
}

/// Brute-force `[k][l]` table: occurrences of `12:11,12,22` and right-to-left maxima.
pub fn class73_joint(n: usize) -> Vec<Vec<u64>> {
    let p: MeshPattern = "12:11,12,22".parse().unwrap();
    let mask = p.mask9().unwrap();
    let kmax = n.saturating_sub(1);
    let mut t = vec![vec![0u64; n + 1]; kmax + 1];
    for_each_permutation(n, |pi| {
        let k = count2(pi, true, mask);
        let l = rl_max_positions(pi).len();
        t[k][l] += 1;
    });
    t
}

/// Refined Class 73 recurrence against the brute-force joint statistic.
pub fn verify_class73_refined(depth: usize) -> Result<(), String> {
    for n in 0..=depth {
        let brute = class73_joint(n);
        let refined = formulas::class73_refined(n);
        for (k, row) in brute.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                if refined.get(k, l) != BigInt::from(v) {
                    return Err(format!("n={n} k={k} l={l}: recurrence {}, scan {v}", refined.get(k, l)));
                }
            }
        }
        if refined.total() != BigInt::from(brute.iter().flatten().sum::<u64>()) {
            return Err(format!("n={n}: recurrence has entries outside the scanned range"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct GfVerdict {
    pub key: String,
    pub mode: String,
    pub verified: bool,
    pub depth: usize,
    pub mismatch: Option<String>,
}

fn compare_series(
    s: &Series,
    pats: &[MeshPattern],
    cat: &Catalog,
    scanner: &Scanner,
    mode: Mode,
) -> Result<Option<String>, Error> {
    let depth = cat.depth();
    for p in pats {
        let t = if p.len() == 2 { cat.table(p).clone() } else { scanner.distribution(p, depth)? };
        for n in 0..=depth {
            let got = s.row(n);
            let want = match mode {
                Mode::Distribution => trimmed(&t.rows[n]),
                Mode::Avoidance => vec![BigInt::from(t.rows[n][0])],
            };
            let got = match mode {
                Mode::Distribution => got,
                Mode::Avoidance => vec![got[0].clone()],
            };
            if got != want {
                return Ok(Some(format!("{p} n={n}: series {got:?}, scan {want:?}")));
            }
        }
    }
    Ok(None)
}

/// Every registered g.f. against the scan, coefficient by coefficient.
pub fn verify_gfs(cat: &Catalog, seed: &Seed) -> Result<Vec<GfVerdict>, Error> {
    let records = seed.records()?;
    let scanner = Scanner::default();
    let depth = cat.depth();
    let members = |key: GfKey| -> Result<Vec<MeshPattern>, Error> {
        Ok(match key {
            GfKey::Point => vec!["1:01,10".parse().unwrap(), "1:00,11".parse().unwrap()],
            GfKey::Class(c) => record(&records, c)?.members.clone(),
        })
    };
    let mut out = Vec::new();
    let mut push = |key: GfKey, mode: Mode, mismatch: Option<String>| {
        out.push(GfVerdict {
            key: key.to_string(),
            mode: format!("{mode:?}").to_lowercase(),
            verified: mismatch.is_none(),
            depth,
            mismatch,
        })
    };
    for &key in series::DISTRIBUTION_GFS {
        let s = series::gf_expand(key, depth, Mode::Distribution)?;
        push(key, Mode::Distribution, compare_series(&s, &members(key)?, cat, &scanner, Mode::Distribution)?);
    }
    for key in series::avoidance_only_gfs() {
        let s = series::gf_expand(key, depth, Mode::Avoidance)?;
        push(key, Mode::Avoidance, compare_series(&s, &members(key)?, cat, &scanner, Mode::Avoidance)?);
    }
    Ok(out)
}

/// Forms kept as printed that the scan refutes; reported, never counted as verified.
pub fn verify_printed_gfs(cat: &Catalog, seed: &Seed) -> Result<Vec<GfVerdict>, Error> {
    let records = seed.records()?;
    let s = series::class54_as_printed(cat.depth())?;
    let mismatch = compare_series(&s, &record(&records, 54)?.members, cat, &Scanner::default(), Mode::Avoidance)?;
    Ok(vec![GfVerdict {
        key: "54-as-printed".into(),
        mode: "avoidance".into(),
        verified: mismatch.is_none(),
        depth: cat.depth(),
        mismatch,
    }])
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionVerdict {
    pub name: String,
    pub first: String,
    pub second: String,
    pub involution_depth: usize,
    pub swap_depth: usize,
    pub involution: Option<Counterexample>,
    pub swap: Option<Counterexample>,
}

impl BijectionVerdict {
    pub fn pass(&self) -> bool {
        self.involution.is_none() && self.swap.is_none()
    }
}

/// Involution up to `inv_depth` and per-permutation swap up to `swap_depth`.
pub fn verify_bijection_with(
    spec: &BijectionSpec,
    f: impl Fn(&[usize]) -> Vec<usize> + Copy,
    inv_depth: usize,
    swap_depth: usize,
) -> BijectionVerdict {
    BijectionVerdict {
        name: spec.name.to_string(),
        first: spec.first.to_string(),
        second: spec.second.to_string(),
        involution_depth: inv_depth,
        swap_depth,
        involution: bijections::verify_involution(f, inv_depth).err(),
        swap: bijections::verify_joint_swap(f, &spec.first, &spec.second, swap_depth).err(),
    }
}

pub fn verify_bijection(spec: &BijectionSpec, inv_depth: usize, swap_depth: usize) -> BijectionVerdict {
    verify_bijection_with(spec, spec.map, inv_depth, swap_depth)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaVerdict {
    pub map: String,
    pub instantiations: usize,
    pub failures: Vec<String>,
}

/// Both keep-the-maximum maps: involutions up to `inv_depth`, and occurrence
/// exchange for every choice of the free cells up to `swap_depth`.
pub fn verify_lemma_maps(inv_depth: usize, swap_depth: usize) -> Vec<LemmaVerdict> {
    let mut out = Vec::new();

    let mut failures = Vec::new();
    if let Err(c) = bijections::verify_involution(bijections::keep_max_complement, inv_depth) {
        failures.push(format!("not an involution at {}", c.input));
    }
    for bits in 0..64u32 {
        let x = std::array::from_fn(|t| bits >> t & 1 == 1);
        let (p, q) = bijections::keep_max_complement_pair(x);
        if let Err(c) = bijections::verify_joint_swap(bijections::keep_max_complement, &p, &q, swap_depth) {
            failures.push(format!("{p} / {q}: {} -> {} ({})", c.input, c.output, c.detail));
        }
    }
    out.push(LemmaVerdict { map: "keep-max-complement".into(), instantiations: 64, failures });

    let mut failures = Vec::new();
    if let Err(c) = bijections::verify_involution(bijections::keep_max_reverse_left, inv_depth) {
        failures.push(format!("not an involution at {}", c.input));
    }
    for bits in 0..16u32 {
        let x = std::array::from_fn(|t| bits >> t & 1 == 1);
        let (p, q) = bijections::keep_max_reverse_pair(x);
        if let Err(c) = bijections::verify_joint_swap(bijections::keep_max_reverse_left, &p, &q, swap_depth) {
            failures.push(format!("{p} / {q}: {} -> {} ({})", c.input, c.output, c.detail));
        }
    }
    out.push(LemmaVerdict { map: "keep-max-reverse-left".into(), instantiations: 16, failures });
    out
}

/// `12:01,11,22` and `12:00,10,22` occur equally often in every permutation up to `depth`.
pub fn verify_class75_counts(depth: usize) -> Result<(), String> {
    let a: MeshPattern = "12:01,11,22".parse().unwrap();
    let b: MeshPattern = "12:00,10,22".parse().unwrap();
    let (ma, mb) = (a.mask9().unwrap(), b.mask9().unwrap());
    for n in 0..=depth {
        let mut bad = None;
        for_each_permutation(n, |pi| {
            if bad.is_none() && count2(pi, true, ma) != count2(pi, true, mb) {
                bad = Some(crate::perm::Permutation::new(pi.to_vec()).unwrap().to_string());
            }
        });
        if let Some(pi) = bad {
            return Err(pi);
        }
    }
    Ok(())
}
