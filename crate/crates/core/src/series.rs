//! Truncated power series in `x` whose coefficients are polynomials in `q`
//! over the rationals, and the generating functions built from them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::formulas::{harmonic, GF_ONE_PLUS_X};

pub const DEFAULT_ORDER: usize = 9;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Polynomial in `q`, coefficients low to high, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn int(c: i64) -> Self {
        QPoly::constant(rat(c))
    }

    /// `q`
    pub fn q() -> Self {
        QPoly::new(vec![rat(0), rat(1)])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * q + c)
    }

    fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|a| a * c).collect())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }
}

/// `Σ_{n=0}^{order} c_n(q) x^n`, exact modulo `x^{order+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    order: usize,
    coeffs: Vec<QPoly>,
}

impl Series {
    pub fn new(order: usize, mut coeffs: Vec<QPoly>) -> Self {
        coeffs.resize(order + 1, QPoly::zero());
        Series { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(order, Vec::new())
    }

    pub fn constant(order: usize, c: QPoly) -> Self {
        Series::new(order, vec![c])
    }

    pub fn one(order: usize) -> Self {
        Series::constant(order, QPoly::int(1))
    }

    /// `x`
    pub fn x(order: usize) -> Self {
        Series::new(order, vec![QPoly::zero(), QPoly::int(1)])
    }

    pub fn from_ints(order: usize, c: &[i64]) -> Self {
        Series::new(order, c.iter().map(|&v| QPoly::int(v)).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    fn check(&self, o: &Series) {
        assert_eq!(self.order, o.order, "series of different orders");
    }

    pub fn s_add(&self, o: &Series) -> Series {
        self.check(o);
        Series::new(self.order, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn s_sub(&self, o: &Series) -> Series {
        self.check(o);
        Series::new(self.order, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn s_mul(&self, o: &Series) -> Series {
        self.check(o);
        let mut c = vec![QPoly::zero(); self.order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(self.order + 1 - i) {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Series::new(self.order, c)
    }

    /// Multiplicative inverse; the constant term must be a nonzero constant in `q`.
    pub fn s_inv(&self) -> Result<Series, Error> {
        let c0 = &self.coeffs[0];
        if c0.degree() != Some(0) {
            return Err(Error::Series("inverse needs a nonzero constant term free of q".into()));
        }
        let inv0 = c0.coeff(0).recip();
        let mut b = vec![QPoly::constant(inv0.clone())];
        for n in 1..=self.order {
            let mut acc = QPoly::zero();
            for i in 1..=n {
                acc = &acc + &(&self.coeffs[i] * &b[n - i]);
            }
            b.push(acc.scale(&-inv0.clone()));
        }
        Ok(Series::new(self.order, b))
    }

    pub fn s_div(&self, o: &Series) -> Result<Series, Error> {
        Ok(self.s_mul(&o.s_inv()?))
    }

    /// Multiplies every coefficient by a polynomial in `q`.
    pub fn scale(&self, c: &QPoly) -> Series {
        Series::new(self.order, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Coefficient of `x^n q^k`.
    pub fn extract(&self, n: usize, k: usize) -> Result<BigRational, Error> {
        if n > self.order {
            return Err(Error::Series(format!("x^{n} is beyond the truncation order {}", self.order)));
        }
        Ok(self.coeffs[n].coeff(k))
    }

    /// Substitutes a value for `q`.
    pub fn at_q(&self, q: &BigRational) -> Series {
        Series::new(self.order, self.coeffs.iter().map(|c| QPoly::constant(c.eval(q))).collect())
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.coeffs().iter().all(|r| r.is_integer()))
    }

    /// Integer coefficients of `q^k` for `x^n`, trimmed. Panics if not integral.
    pub fn row(&self, n: usize) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.coeffs[n]
            .coeffs()
            .iter()
            .map(|r| {
                assert!(r.is_integer(), "non-integral coefficient {r}");
                r.to_integer()
            })
            .collect();
        if v.is_empty() {
            v.push(BigInt::zero());
        }
        v
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.coeffs().iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect())
                .collect(),
        }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::zero(self.order).s_sub(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesJson {
    pub order: usize,
    pub coeffs: Vec<Vec<String>>,
}

/// `F(x) = Σ n! x^n`.
pub fn series_f(order: usize) -> Series {
    let mut f = BigInt::one();
    let mut c = vec![QPoly::int(1)];
    for n in 1..=order {
        f *= n;
        c.push(QPoly::constant(BigRational::from_integer(f.clone())));
    }
    Series::new(order, c)
}

/// `Σ_{n≥1} n! H_n x^n`.
fn harmonic_series(order: usize) -> Series {
    let mut f = BigInt::one();
    let mut c = vec![QPoly::zero()];
    for n in 1..=order {
        f *= n;
        c.push(QPoly::constant(BigRational::from_integer(f.clone()) * harmonic(n)));
    }
    Series::new(order, c)
}

/// `Σ_{n≥1} ∏_{i=0}^{n-1}(q+i) x^n`, rising factorials in `q`.
fn rising_series(order: usize) -> Series {
    let mut p = QPoly::int(1);
    let mut c = vec![QPoly::zero()];
    for i in 0..order {
        p = &p * &QPoly::new(vec![rat(i as i64), rat(1)]);
        c.push(p.clone());
    }
    Series::new(order, c)
}

/// Which generating function: a numbered class, or the length-1 pattern `1:01,10`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfKey {
    Class(u32),
    Point,
}

impl fmt::Display for GfKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfKey::Class(c) => write!(f, "{c}"),
            GfKey::Point => f.write_str("point"),
        }
    }
}

impl FromStr for GfKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "point" {
            return Ok(GfKey::Point);
        }
        s.parse().map(GfKey::Class).map_err(|_| Error::NoGf(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Avoidance,
    Distribution,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "avoidance" => Ok(Mode::Avoidance),
            "distribution" => Ok(Mode::Distribution),
            _ => Err(Error::Series(format!("unknown mode `{s}`"))),
        }
    }
}

/// Keys with a distribution g.f. `F(x,q)`.
pub const DISTRIBUTION_GFS: &[GfKey] = &[
    GfKey::Point,
    GfKey::Class(33),
    GfKey::Class(36),
    GfKey::Class(56),
    GfKey::Class(77),
    GfKey::Class(78),
    GfKey::Class(80),
];

/// Keys with only an avoidance g.f. `A(x)`.
pub fn avoidance_only_gfs() -> Vec<GfKey> {
    let mut v = vec![GfKey::Class(47), GfKey::Class(54)];
    v.extend(GF_ONE_PLUS_X.iter().filter(|&&c| c != 80).map(|&c| GfKey::Class(c)));
    v
}

fn distribution_gf(key: GfKey, order: usize) -> Result<Option<Series>, Error> {
    let f = series_f(order);
    let one = Series::one(order);
    let x = Series::x(order);
    let q = QPoly::q();
    let one_minus_q = &QPoly::int(1) - &q;
    let s = match key {
        GfKey::Point => f.s_div(&one.s_add(&x.s_mul(&f).scale(&one_minus_q)))?,
        GfKey::Class(33) => {
            let half = QPoly::constant(BigRational::new(1.into(), 2.into()));
            let a = one.s_add(&x).scale(&(&one_minus_q * &half));
            let b = f.scale(&(&(&QPoly::int(1) + &q) * &half));
            a.s_add(&b)
        }
        GfKey::Class(36) => f.s_div(&one.s_add(&x.s_mul(&f.s_sub(&one)).scale(&one_minus_q)))?,
        GfKey::Class(56) => {
            let two_minus_q = &QPoly::int(2) - &q;
            let q_minus_one = &q - &QPoly::int(1);
            let num = f.scale(&two_minus_q).s_add(&Series::constant(order, q_minus_one));
            let den = f.scale(&one_minus_q).s_add(&Series::constant(order, q.clone()));
            num.s_div(&den)?
        }
        GfKey::Class(77) => {
            let left = one.s_sub(&x).s_mul(&f);
            let right = x.s_mul(&f).s_div(&one.s_add(&x.s_mul(&f).scale(&one_minus_q)))?;
            left.s_add(&right)
        }
        GfKey::Class(78) => one.s_sub(&x).s_mul(&f).s_add(&x).s_add(&x.s_mul(&rising_series(order))),
        GfKey::Class(80) => {
            let t = x.scale(&one_minus_q);
            one.s_add(&t).s_mul(&f).s_div(&one.s_add(&t.s_mul(&f)))?
        }
        _ => return Ok(None),
    };
    Ok(Some(s))
}

fn avoidance_gf(key: GfKey, order: usize) -> Result<Option<Series>, Error> {
    let f = series_f(order);
    let one = Series::one(order);
    let x = Series::x(order);
    let s = match key {
        GfKey::Class(47) => f.s_div(&one.s_add(&x.s_mul(&harmonic_series(order))))?,
        GfKey::Class(54) => {
            let xf = x.s_mul(&f);
            f.s_sub(&xf.s_div(&one.s_add(&xf))?.s_mul(&harmonic_series(order)))
        }
        GfKey::Class(c) if GF_ONE_PLUS_X.contains(&c) => {
            let xf = x.s_mul(&f);
            one.s_add(&x).s_mul(&f).s_div(&one.s_add(&xf))?
        }
        _ => return Ok(None),
    };
    Ok(Some(s))
}

/// Class 54's avoidance g.f. exactly as printed, `F - 1 - x - ...`. It agrees
/// with the brute-force counts from `x^2` on and is `1 + x` short below that;
/// [`gf_expand`] uses the form without the `- 1 - x`.
pub fn class54_as_printed(order: usize) -> Result<Series, Error> {
    let base = avoidance_gf(GfKey::Class(54), order)?.expect("class 54 registered");
    Ok(base.s_sub(&Series::one(order)).s_sub(&Series::x(order)))
}

/// Expands a registered generating function to order `order`. Avoidance mode
/// of a distribution g.f. substitutes `q = 0`. The result must be integral.
pub fn gf_expand(key: GfKey, order: usize, mode: Mode) -> Result<Series, Error> {
    let s = match mode {
        Mode::Distribution => distribution_gf(key, order)?,
        Mode::Avoidance => match avoidance_gf(key, order)? {
            Some(a) => Some(a),
            None => distribution_gf(key, order)?.map(|s| s.at_q(&BigRational::zero())),
        },
    };
    let s = s.ok_or_else(|| Error::NoGf(format!("{key} ({mode:?})")))?;
    if !s.is_integral() {
        return Err(Error::Series(format!("g.f. for {key} has non-integral coefficients")));
    }
    Ok(s)
}

pub fn extract(s: &Series, n: usize, k: usize) -> Result<BigRational, Error> {
    s.extract(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series) -> Vec<i64> {
        (0..=s.order()).map(|n| s.extract(n, 0).unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn ring_operations() {
        let a = Series::from_ints(4, &[1, 1]);
        let b = Series::from_ints(4, &[1, -1]);
        assert_eq!(a.s_mul(&b), Series::from_ints(4, &[1, 0, -1]));
        assert_eq!(ints(&a.s_inv().unwrap()), [1, -1, 1, -1, 1]);
        assert!(Series::x(4).s_inv().is_err());
        assert!(Series::constant(4, QPoly::q()).s_inv().is_err());
        let s = Series::from_ints(5, &[2, 3, 0, 7]);
        assert_eq!(s.s_mul(&s.s_inv().unwrap()), Series::one(5));
        assert_eq!((-&s).s_add(&s), Series::zero(5));
    }

    #[test]
    fn factorial_series() {
        assert_eq!(ints(&series_f(4)), [1, 1, 2, 6, 24]);
        assert_eq!(series_f(7).extract(7, 0).unwrap(), rat(5040));
        assert_eq!(extract(&series_f(4), 3, 0).unwrap(), rat(6));
        assert_eq!(series_f(4).extract(3, 5).unwrap(), rat(0));
        assert!(series_f(4).extract(5, 0).is_err());
    }

    #[test]
    fn avoidance_sequences() {
        let a = |c| ints(&gf_expand(GfKey::Class(c), 4, Mode::Avoidance).unwrap());
        assert_eq!(a(36), [1, 1, 1, 3, 15]);
        assert_eq!(a(47), [1, 1, 1, 2, 9]);
        assert_eq!(a(56), [1, 1, 1, 3, 13]);
        assert_eq!(a(77), [1, 1, 1, 5, 21]);
    }

    #[test]
    fn single_point_pattern() {
        let s = gf_expand(GfKey::Point, 4, Mode::Distribution).unwrap();
        assert_eq!(s.extract(2, 2).unwrap(), rat(1));
        assert_eq!(s.extract(2, 0).unwrap(), rat(1));
        assert_eq!(s.extract(2, 1).unwrap(), rat(0));
    }

    #[test]
    fn q_equals_one_gives_f() {
        for &key in DISTRIBUTION_GFS {
            let s = gf_expand(key, 7, Mode::Distribution).unwrap();
            assert_eq!(s.at_q(&rat(1)), series_f(7), "{key}");
        }
    }

    #[test]
    fn class54_forms() {
        let fixed = gf_expand(GfKey::Class(54), 6, Mode::Avoidance).unwrap();
        let printed = class54_as_printed(6).unwrap();
        assert_eq!(fixed.s_sub(&printed), Series::from_ints(6, &[1, 1]));
    }

    #[test]
    fn json_render() {
        let j = Series::from_ints(1, &[1, 2]).to_json();
        assert_eq!(j.coeffs, vec![vec!["1/1".to_string()], vec!["2/1".to_string()]]);
    }
}
