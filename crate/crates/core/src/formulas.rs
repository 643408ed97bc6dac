//! Closed forms and recurrences for distributions and avoidance counts,
//! keyed by class id. Everything is exact; recurrences are tabulated bottom-up
//! with out-of-range entries read as 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Error;

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn fact(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, b| a * b)
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    fact(n) / (fact(k) * fact(n - k))
}

/// Exact division; panics if the paper's claimed integrality fails.
fn exact_div(a: BigInt, b: BigInt) -> BigInt {
    let (q, r) = a.div_rem(&b);
    assert!(r.is_zero(), "inexact division {a} / {b}");
    q
}

/// Unsigned Stirling numbers of the first kind, rows `0..=n`.
fn stirling_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); n + 1]; n + 1];
    t[0][0] = BigInt::one();
    for m in 1..=n {
        for k in 1..=m {
            t[m][k] = &t[m - 1][k - 1] + big(m as u64 - 1) * &t[m - 1][k];
        }
    }
    t
}

/// c(n, k): permutations of `n` with `k` cycles. Zero when `k > n`.
pub fn stirling_first(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling_table(n)[n][k].clone()
}

/// H_n as an exact rational; H_0 = 0.
pub fn harmonic(n: usize) -> BigRational {
    (1..=n).fold(BigRational::zero(), |h, k| h + BigRational::new(BigInt::one(), big(k as u64)))
}

/// Eulerian number by the alternating sum; 0 outside `0..n`.
pub fn eulerian_snk(n: usize, k: usize) -> BigInt {
    if n == 0 || k >= n {
        return BigInt::zero();
    }
    let mut s = BigInt::zero();
    for j in 0..=k + 1 {
        let term = binom(n + 1, j) * BigInt::from(k + 1 - j).pow(n as u32);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn get(t: &[Vec<BigInt>], n: usize, k: isize) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    t.get(n).and_then(|r| r.get(k as usize)).cloned().unwrap_or_default()
}

/// Tabulates a two-level recurrence from the seeds `s_{1,0} = s_{2,0} = s_{2,1} = 1`.
fn recurrence_rows(n: usize, step: impl Fn(&[Vec<BigInt>], usize, isize) -> BigInt) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::one()], vec![BigInt::one()], vec![BigInt::one(), BigInt::one()]];
    for m in 3..=n {
        let width = m * (m - 1) / 2 + 1;
        let row = (0..width as isize).map(|k| step(&t, m, k)).collect();
        t.push(row);
    }
    t
}

fn class61(n: usize) -> Vec<BigInt> {
    let t = recurrence_rows(n, |t, n, k| {
        let (kb, nb) = (BigInt::from(k), BigInt::from(n as isize));
        get(t, n - 1, k - 1) + (&kb + 1) * get(t, n - 1, k + 1) + (&nb - &kb - 1) * get(t, n - 1, k)
    });
    t[n].clone()
}

fn class37(n: usize) -> Vec<BigInt> {
    let t = recurrence_rows(n, |t, n, k| {
        let (kb, nb) = (BigInt::from(k), BigInt::from(n as isize));
        (&kb + 1) * get(t, n - 1, k + 1) + (&nb - &kb) * get(t, n - 1, k) - get(t, n - 2, k) + get(t, n - 2, k - 1)
    });
    t[n].clone()
}

fn class81(n: usize) -> Vec<BigInt> {
    let t = recurrence_rows(n, |t, n, k| {
        let (kb, nb) = (BigInt::from(k), BigInt::from(n as isize));
        (&kb + 1) * get(t, n - 1, k + 1)
            + (&nb - &kb - 1) * get(t, n - 1, k)
            + get(t, n - 1, k - 1)
            + (&kb + 1) * get(t, n - 2, k + 1)
            + (&nb - 2 * &kb - 2) * get(t, n - 2, k)
            - (&nb - &kb - 1) * get(t, n - 2, k - 1)
    });
    t[n].clone()
}

/// `s_{n,k,l}`: permutations of length `n` with `k` occurrences of the Class 73
/// pattern `12:11,12,22` and `l` right-to-left maxima. Indexed `[k][l]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedTable {
    pub n: usize,
    pub counts: Vec<Vec<BigInt>>,
}

impl RefinedTable {
    pub fn get(&self, k: usize, l: usize) -> BigInt {
        self.counts.get(k).and_then(|r| r.get(l)).cloned().unwrap_or_default()
    }

    /// Σ_l s_{n,k,l}, trimmed.
    pub fn marginal(&self) -> Vec<BigInt> {
        trim(self.counts.iter().map(|r| r.iter().sum()).collect())
    }

    pub fn total(&self) -> BigInt {
        self.counts.iter().flatten().sum()
    }
}

/// Inserts 1 into a permutation of length `n-1`: at the end (new maximum on the
/// right), just left of one of its `l` maxima (new occurrence), or elsewhere.
pub fn class73_refined(n: usize) -> RefinedTable {
    let mut t = vec![vec![BigInt::one()]]; // s_{0,0,0}
    for m in 1..=n {
        let kmax = m.saturating_sub(1);
        let mut next = vec![vec![BigInt::zero(); m + 1]; kmax + 1];
        for (k, row) in next.iter_mut().enumerate() {
            for (l, cell) in row.iter_mut().enumerate() {
                let prev =
                    |k: usize, l: usize| t.get(k).and_then(|r: &Vec<BigInt>| r.get(l)).cloned().unwrap_or_default();
                let mut v = BigInt::zero();
                if l >= 1 {
                    v += prev(k, l - 1);
                }
                if k >= 1 {
                    v += big(l as u64) * prev(k - 1, l);
                }
                if m > l {
                    v += big((m - 1 - l) as u64) * prev(k, l);
                }
                *cell = v;
            }
        }
        t = next;
    }
    RefinedTable { n, counts: t }
}

/// Class 73 distribution by summing over the refined table of length `n-1`.
pub fn class73_distribution(n: usize) -> Vec<BigInt> {
    if n <= 1 {
        return vec![BigInt::one()];
    }
    let prev = class73_refined(n - 1);
    let kmax = n - 1;
    let row = (0..=kmax)
        .map(|k| {
            (1..n)
                .map(|i| {
                    let with = if k >= 1 { big(i as u64) * prev.get(k - 1, i) } else { BigInt::zero() };
                    with + big((n - i) as u64) * prev.get(k, i)
                })
                .sum()
        })
        .collect();
    trim(row)
}

/// Kinds of registered formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaKind {
    DistributionClosedForm,
    DistributionRecurrence,
    AvoidanceClosedForm,
    AvoidanceRecurrence,
    Gf,
}

/// One registered formula. `source` quotes the statement it implements.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaRef {
    pub class_id: u32,
    pub kind: FormulaKind,
    pub evaluator: &'static str,
    pub source: &'static str,
    /// Kept exactly as stated even though the scan refutes it; the corrected
    /// form is registered alongside.
    pub as_printed: bool,
}

impl FormulaRef {
    pub fn is_distribution(&self) -> bool {
        matches!(self.kind, FormulaKind::DistributionClosedForm | FormulaKind::DistributionRecurrence)
    }

    pub fn is_avoidance(&self) -> bool {
        matches!(self.kind, FormulaKind::AvoidanceClosedForm | FormulaKind::AvoidanceRecurrence)
    }

    /// Evaluates a distribution formula at `n` (trimmed vector).
    pub fn distribution(&self, n: usize) -> Option<Vec<BigInt>> {
        self.is_distribution().then(|| eval_distribution(self.evaluator, n))
    }

    /// Evaluates an avoidance formula at `n`.
    pub fn avoidance(&self, n: usize) -> Option<BigInt> {
        self.is_avoidance().then(|| eval_avoidance(self.evaluator, n))
    }
}

const ONE: &[u32] = &[15, 16, 17, 18, 38, 39, 49, 50, 51, 72, 73, 74, 75, 87, 94, 95, 102];
const FACT_PREV: &[u32] = &[4, 6, 7, 8, 9, 10, 11, 12, 42, 43, 45, 64, 65, 66, 68, 89, 90, 92, 93, 100, 101];
const HALF: &[u32] = &[25, 28, 33, 63, 85, 104];
const HARMONIC_SUM: &[u32] = &[32, 62, 84];
const ALT_SUM: &[u32] = &[24, 61, 86, 105];
const TWO_TERM: &[u32] = &[48, 67];
/// Classes with avoidance g.f. (1+x)F(x)/(1+xF(x)).
pub const GF_ONE_PLUS_X: &[u32] = &[19, 21, 80, 97, 103];

/// Groups of classes sharing one registered avoidance formula.
pub fn avoidance_families() -> Vec<Vec<u32>> {
    [ONE, FACT_PREV, HALF, HARMONIC_SUM, ALT_SUM, TWO_TERM, GF_ONE_PLUS_X].iter().map(|f| f.to_vec()).collect()
}

const DISTRIBUTIONS: &[(u32, FormulaKind, &str, &str)] = {
    use FormulaKind::*;
    &[
        (1, DistributionClosedForm, "class1", "n! - sum (i-1)!(n-i-1)! + q sum_{i=1}^{n-1} (i-1)!(n-i-1)!"),
        (2, DistributionClosedForm, "class2", "n! - (n-1)! + q(n-1)!"),
        (2, DistributionClosedForm, "class2-printed", "(n-1)! + q(n! - (n-1)!)"),
        (15, DistributionClosedForm, "class15", "s_{n,k} = c(n, n-k)"),
        (25, DistributionClosedForm, "class25", "s_{n,k} = n!/((k+1)(k+2)), s_{n,n-1} = (n-1)!"),
        (31, DistributionClosedForm, "class31", "n! - sum i!(n-i-1)! + q sum_{i=0}^{n-2} i!(n-i-1)!"),
        (32, DistributionClosedForm, "class32", "n! - sum (n-1)!/i + q sum_{i=1}^{n-1} (n-1)!/i"),
        (33, DistributionClosedForm, "class33", "s_{n,0} = s_{n,1} = n!/2"),
        (37, DistributionRecurrence, "class37", "(k+1)s_{n-1,k+1} + (n-k)s_{n-1,k} - s_{n-2,k} + s_{n-2,k-1}"),
        (45, DistributionClosedForm, "class45", "(n-1)! + q(n-1)(n-1)!"),
        (53, DistributionClosedForm, "class53", "s_{n,0} = n! - (n-2)!, s_{n,1} = (n-2)!"),
        (61, DistributionRecurrence, "class61", "s_{n-1,k-1} + (k+1)s_{n-1,k+1} + (n-k-1)s_{n-1,k}"),
        (68, DistributionClosedForm, "class68", "s_{n,k} = c(n, k+1)"),
        (73, DistributionRecurrence, "class73", "sum_i [i s_{n-1,k-1,i} + (n-i) s_{n-1,k,i}]"),
        (74, DistributionClosedForm, "eulerian", "sum_{j=0}^{k+1} (-1)^j binom(n+1,j)(k+1-j)^n"),
        (
            81,
            DistributionRecurrence,
            "class81",
            "(k+1)s_{n-1,k+1} + (n-k-1)s_{n-1,k} + s_{n-1,k-1} + (k+1)s_{n-2,k+1} + (n-2k-2)s_{n-2,k} - (n-k-1)s_{n-2,k-1}",
        ),
    ]
};

const GFS: &[(u32, &str, &str)] = &[
    (33, "gf-class33", "F(x,q) = (1-q)(1+x)/2 + (1+q)/2 F(x)"),
    (36, "gf-class36", "F(x,q) = F(x)/(1+(1-q)x(F(x)-1))"),
    (47, "gf-class47", "A(x) = F(x)/(1 + x sum n! H_n x^n)"),
    (54, "gf-class54", "A(x) = F(x) - 1 - x - xF(x)/(1+xF(x)) sum n! H_n x^n"),
    (56, "gf-class56", "F(x,q) = ((2-q)F(x) + q - 1)/((1-q)F(x) + q)"),
    (77, "gf-class77", "F(x,q) = (1-x)F(x) + xF(x)/(1+x(1-q)F(x))"),
    (78, "gf-class78", "F(x,q) = (1-x)F(x) + x + x sum prod_{i=0}^{n-1}(q+i) x^n"),
    (80, "gf-class80", "F(x,q) = (1+x(1-q))F(x)/(1+x(1-q)F(x))"),
];

/// Every registered formula, distribution forms first, then avoidance, then g.f.s.
pub fn registry() -> Vec<FormulaRef> {
    let mut out: Vec<FormulaRef> = DISTRIBUTIONS
        .iter()
        .map(|&(class_id, kind, evaluator, source)| FormulaRef {
            class_id,
            kind,
            evaluator,
            source,
            as_printed: evaluator.ends_with("-printed"),
        })
        .collect();
    let fam: [(&[u32], FormulaKind, &str, &str); 6] = [
        (ONE, FormulaKind::AvoidanceClosedForm, "avoid-one", "s_{n,0} = 1"),
        (FACT_PREV, FormulaKind::AvoidanceClosedForm, "avoid-factorial-prev", "s_{n,0} = (n-1)!"),
        (HALF, FormulaKind::AvoidanceClosedForm, "avoid-half", "s_{n,0} = n!/2"),
        (HARMONIC_SUM, FormulaKind::AvoidanceClosedForm, "avoid-harmonic-sum", "n! - sum_{i=1}^{n-1} (n-1)!/i"),
        (TWO_TERM, FormulaKind::AvoidanceRecurrence, "avoid-two-term", "s_n = n s_{n-1} - s_{n-2}"),
        (ALT_SUM, FormulaKind::AvoidanceClosedForm, "avoid-alt-sum-shifted", "sum_{k=0}^{n-1} (-1)^k (n-k)(n-1)!/k!"),
    ];
    for (classes, kind, evaluator, source) in fam {
        for &class_id in classes {
            out.push(FormulaRef { class_id, kind, evaluator, source, as_printed: false });
        }
    }
    for &class_id in ALT_SUM {
        out.push(FormulaRef {
            class_id,
            kind: FormulaKind::AvoidanceClosedForm,
            evaluator: "avoid-alt-sum-literal",
            source: "sum_{k=0}^{n} (-1)^k (n-k+1) n!/k!",
            as_printed: true,
        });
    }
    out.push(FormulaRef {
        class_id: 62,
        kind: FormulaKind::AvoidanceClosedForm,
        evaluator: "avoid-class62",
        source: "(n-1)!(n - H_{n-1})",
        as_printed: false,
    });
    out.push(FormulaRef {
        class_id: 63,
        kind: FormulaKind::AvoidanceClosedForm,
        evaluator: "avoid-half",
        source: "n!/2",
        as_printed: false,
    });
    for &(class_id, evaluator, source) in GFS {
        out.push(FormulaRef { class_id, kind: FormulaKind::Gf, evaluator, source, as_printed: false });
    }
    for &class_id in GF_ONE_PLUS_X {
        out.push(FormulaRef {
            class_id,
            kind: FormulaKind::Gf,
            evaluator: "gf-one-plus-x",
            source: "A(x) = (1+x)F(x)/(1+xF(x))",
            as_printed: false,
        });
    }
    out
}

/// Classes marked `D` or `A` in the status table that carry no formula here,
/// with the reason.
pub fn unregistered_notes() -> &'static [(u32, &'static str)] {
    &[
        (3, LITERATURE),
        (8, "distribution taken from the literature; the avoidance count is registered"),
        (20, LITERATURE),
        (34, LITERATURE),
        (35, LITERATURE),
        (44, LITERATURE),
        (46, "equidistribution proved by an involution; no enumeration stated"),
        (49, "equidistribution proved by an involution; the avoidance count is registered"),
        (52, LITERATURE),
        (63, "only the avoidance count n!/2 is stated"),
        (76, LITERATURE),
        (79, LITERATURE),
        (87, "distribution taken from the literature; the avoidance count is registered"),
        (96, LITERATURE),
        (103, "distribution taken from the literature; the avoidance g.f. is registered"),
    ]
}

const LITERATURE: &str = "distribution taken from the literature; checked by scan only";

fn eval_distribution(evaluator: &str, n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let f = fact;
    let row = match evaluator {
        "class1" => {
            let s: BigInt = (1..n).map(|i| f(i - 1) * f(n - i - 1)).sum();
            vec![f(n) - &s, s]
        }
        "class2" if n < 2 => vec![BigInt::one()],
        "class2" => vec![f(n) - f(n - 1), f(n - 1)],
        "class2-printed" => trim(vec![f(n - 1), f(n) - f(n - 1)]),
        "class15" => (0..n).map(|k| stirling_first(n, n - k)).collect(),
        "class25" => {
            let mut v: Vec<BigInt> =
                (0..n.saturating_sub(1)).map(|k| exact_div(f(n), big(((k + 1) * (k + 2)) as u64))).collect();
            v.push(f(n - 1));
            v
        }
        "class31" => {
            let s: BigInt = (0..=n.saturating_sub(2)).filter(|_| n >= 2).map(|i| f(i) * f(n - i - 1)).sum();
            vec![f(n) - &s, s]
        }
        "class32" => {
            let s: BigInt = (1..n).map(|i| exact_div(f(n - 1), big(i as u64))).sum::<BigInt>();
            vec![f(n) - &s, s]
        }
        "class33" => {
            if n < 2 {
                vec![BigInt::one()]
            } else {
                vec![exact_div(f(n), big(2)), exact_div(f(n), big(2))]
            }
        }
        "class37" => class37(n),
        "class45" => vec![f(n - 1), big(n as u64 - 1) * f(n - 1)],
        "class53" => {
            if n < 2 {
                vec![BigInt::one()]
            } else {
                vec![f(n) - f(n - 2), f(n - 2)]
            }
        }
        "class61" => class61(n),
        "class68" => (0..n).map(|k| stirling_first(n, k + 1)).collect(),
        "class73" => class73_distribution(n),
        "eulerian" => (0..n).map(|k| eulerian_snk(n, k)).collect(),
        "class81" => class81(n),
        other => panic!("unknown distribution evaluator {other}"),
    };
    trim(row)
}

fn eval_avoidance(evaluator: &str, n: usize) -> BigInt {
    let f = fact;
    match evaluator {
        "avoid-one" => BigInt::one(),
        "avoid-factorial-prev" => f(n.saturating_sub(1)),
        "avoid-half" => {
            if n < 2 {
                BigInt::one()
            } else {
                exact_div(f(n), big(2))
            }
        }
        "avoid-harmonic-sum" => f(n) - (1..n).map(|i| exact_div(f(n - 1), big(i as u64))).sum::<BigInt>(),
        "avoid-two-term" => {
            let (mut a, mut b) = (BigInt::zero(), BigInt::one()); // s_{-1}, s_0
            for m in 1..=n {
                let c = big(m as u64) * &b - &a;
                a = b;
                b = c;
            }
            b
        }
        "avoid-alt-sum-shifted" => {
            if n == 0 {
                return BigInt::one();
            }
            (0..n).map(|k| sign(k) * big((n - k) as u64) * exact_div(f(n - 1), f(k))).sum()
        }
        "avoid-alt-sum-literal" => (0..=n).map(|k| sign(k) * big((n - k + 1) as u64) * exact_div(f(n), f(k))).sum(),
        "avoid-class62" => {
            if n == 0 {
                return BigInt::one();
            }
            let v = BigRational::from_integer(f(n - 1)) * (BigRational::from_integer(big(n as u64)) - harmonic(n - 1));
            assert!(v.is_integer(), "non-integral value {v}");
            v.to_integer()
        }
        other => panic!("unknown avoidance evaluator {other}"),
    }
}

fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn no_formula(class_id: u32) -> Error {
    let status = crate::catalog::Seed::builtin()
        .class(class_id)
        .map(|c| c.status.clone())
        .unwrap_or_else(|| "unknown class".into());
    Error::NoFormula { class_id, status }
}

/// `s_{n,k}` for `k = 0..`, trimmed of trailing zeros.
pub fn formula_distribution(class_id: u32, n: usize) -> Result<Vec<BigInt>, Error> {
    let r = registry().into_iter().find(|r| r.class_id == class_id && r.is_distribution());
    r.and_then(|r| r.distribution(n)).ok_or_else(|| no_formula(class_id))
}

/// `s_{n,0}` from the first registered avoidance closed form or recurrence.
/// For the alternating-sum family this is the index-shifted form; the form as
/// printed stays in the registry under `avoid-alt-sum-literal`.
pub fn formula_avoidance(class_id: u32, n: usize) -> Result<BigInt, Error> {
    let r = registry().into_iter().find(|r| r.class_id == class_id && r.is_avoidance());
    r.and_then(|r| r.avoidance(n)).ok_or_else(|| no_formula(class_id))
}

/// Σ_k s_{n,k} x^k for Class 68 against ∏_{i=1}^{n-1}(x+i), coefficients low to high.
pub fn rising_product(n: usize, shift: usize) -> Vec<BigInt> {
    // ∏_{i=shift}^{shift+n-1} (x + i)
    let mut poly = vec![BigInt::one()];
    for i in shift..shift + n {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d] += c * big(i as u64);
            next[d + 1] += c;
        }
        poly = next;
    }
    poly
}

/// Coefficients of ∏_{i=0}^{n-1}(1 + i q), low to high.
pub fn product_one_plus_iq(n: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for i in 0..n {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d] += c;
            next[d + 1] += c * big(i as u64);
        }
        poly = next;
    }
    trim(poly)
}

/// Converts to `u64` for comparison with scan counts; `None` if negative or too large.
pub fn to_u64(v: &BigInt) -> Option<u64> {
    if v.is_negative() {
        None
    } else {
        v.to_u64()
    }
}
