//! Exact sums of rational multiples of square roots.
//!
//! A [`RadicalSum`] is `sum c_i * sqrt(s_i)` with rational `c_i` and distinct
//! square-free `s_i >= 1`. Square roots of distinct square-free integers are
//! linearly independent over the rationals, so two values are equal exactly
//! when their term maps are equal.
//!
//! The text form renders terms by ascending radicand as `c*sqrt(s)`, the
//! rational part (`s = 1`) bare, rationals as `num/den` in lowest terms,
//! joined by `" + "`, with `0` for the empty sum:
//!
//! ```
//! use sombor_core::radical::RadicalSum;
//!
//! let v = RadicalSum::sqrt(8) + RadicalSum::sqrt(2) + RadicalSum::integer(5);
//! assert_eq!(v.to_string(), "5 + 3*sqrt(2)");
//! assert_eq!("5 + 3*sqrt(2)".parse::<RadicalSum>().unwrap(), v);
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rational = Ratio<i128>;

/// Splits `m` as `c^2 * s` with `s` square-free; returns `(c, s)`.
pub fn radical_normalize(m: u64) -> (u64, u64) {
    assert!(m >= 1, "radicand must be positive");
    let (mut rest, mut c, mut s) = (m, 1u64, 1u64);
    let mut d = 2u64;
    while d * d <= rest {
        let mut e = 0;
        while rest % d == 0 {
            rest /= d;
            e += 1;
        }
        c *= d.pow(e / 2);
        if e % 2 == 1 {
            s *= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    (c, s * rest)
}

pub fn is_square_free(s: u64) -> bool {
    s >= 1 && radical_normalize(s).0 == 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicalSum {
    terms: BTreeMap<u64, Rational>,
}

fn checked_add(a: &Rational, b: &Rational) -> Rational {
    a.checked_add(b).expect("radical coefficient overflow")
}

fn checked_mul(a: &Rational, b: &Rational) -> Rational {
    a.checked_mul(b).expect("radical coefficient overflow")
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: Rational) -> Self {
        Self::term(c, 1)
    }

    pub fn integer(c: i128) -> Self {
        Self::rational(Rational::from_integer(c))
    }

    /// `sqrt(m)` in canonical form.
    pub fn sqrt(m: u64) -> Self {
        Self::term(Rational::from_integer(1), m)
    }

    /// `c * sqrt(m)` in canonical form; `m = 0` gives zero.
    pub fn term(c: Rational, m: u64) -> Self {
        let mut out = Self::zero();
        out.add_term(c, m);
        out
    }

    /// `num/den * sqrt(m)`.
    pub fn frac_sqrt(num: i128, den: i128, m: u64) -> Self {
        Self::term(Rational::new(num, den), m)
    }

    /// Adds `c * sqrt(m)` in place, normalizing the radicand first.
    pub fn add_term(&mut self, c: Rational, m: u64) {
        if m == 0 || c.is_zero() {
            return;
        }
        let (outer, s) = radical_normalize(m);
        let c = checked_mul(&c, &Rational::from_integer(outer as i128));
        self.add_canonical(s, c);
    }

    fn add_canonical(&mut self, s: u64, c: Rational) {
        let entry = self.terms.entry(s).or_insert_with(Rational::zero);
        *entry = checked_add(entry, &c);
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(radicand, coefficient)`, radicands ascending.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, s: u64) -> Rational {
        self.terms.get(&s).copied().unwrap_or_else(Rational::zero)
    }

    /// The value when it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).copied(),
            _ => None,
        }
    }

    pub fn scale(&self, r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|(&s, c)| (s, checked_mul(c, &r)))
                .collect(),
        }
    }

    pub fn scale_int(&self, k: i128) -> Self {
        self.scale(Rational::from_integer(k))
    }

    /// Exact square root when the value is a non-negative rational `a/b`
    /// with `sqrt(a*b)` expressible (always, as `sqrt(a*b)/b`). Returns
    /// `None` for negative values and values with irrational parts.
    pub fn sqrt_of_rational(&self) -> Option<Self> {
        let r = self.as_rational()?;
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::zero());
        }
        let (num, den) = (*r.numer(), *r.denom());
        let prod = num.checked_mul(den)?;
        let prod = u64::try_from(prod).ok()?;
        Some(Self::term(Rational::new(1, den), prod))
    }

    /// Double-precision value. Each term contributes a rounding error of a
    /// few ulp, so the absolute error is within `4 * term_count` ulp of the
    /// largest term.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&s, c)| {
                let c = c.numer().to_f64().unwrap() / c.denom().to_f64().unwrap();
                c * (s as f64).sqrt()
            })
            .sum()
    }
}

impl Add for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(mut self, rhs: RadicalSum) -> RadicalSum {
        self += &rhs;
        self
    }
}

impl AddAssign<&RadicalSum> for RadicalSum {
    fn add_assign(&mut self, rhs: &RadicalSum) {
        for (&s, c) in &rhs.terms {
            self.add_canonical(s, *c);
        }
    }
}

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self.terms.into_iter().map(|(s, c)| (s, -c)).collect(),
        }
    }
}

impl Sub for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        self + &(-rhs.clone())
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: RadicalSum) -> RadicalSum {
        self + (-rhs)
    }
}

impl Mul for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (&s1, c1) in &self.terms {
            for (&s2, c2) in &rhs.terms {
                // s1, s2 square-free: s1*s2 = g^2 * (s1/g)(s2/g) with g = gcd
                let g = s1.gcd(&s2);
                let s = (s1 / g) * (s2 / g);
                let c = checked_mul(&checked_mul(c1, c2), &Rational::from_integer(g as i128));
                out.add_canonical(s, c);
            }
        }
        out
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}

impl std::iter::Sum for RadicalSum {
    fn sum<I: Iterator<Item = RadicalSum>>(iter: I) -> Self {
        iter.fold(RadicalSum::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if s == 1 {
                f.write_str(&fmt_rational(c))?;
            } else {
                write!(f, "{}*sqrt({s})", fmt_rational(c))?;
            }
        }
        Ok(())
    }
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: i128 = num.trim().parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let den: i128 = den.trim().parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if den == 0 {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

fn parse_term(text: &str) -> Result<(Rational, u64), String> {
    let text = text.trim();
    let Some(idx) = text.find("sqrt(") else {
        return Ok((parse_rational(text)?, 1));
    };
    let coeff = match text[..idx].trim_end() {
        "" => Rational::from_integer(1),
        head => parse_rational(
            head.strip_suffix('*')
                .ok_or_else(|| format!("expected '*' before sqrt in {text:?}"))?,
        )?,
    };
    let radicand = text[idx + 5..]
        .strip_suffix(')')
        .ok_or_else(|| format!("unclosed sqrt in {text:?}"))?;
    let radicand: u64 = radicand
        .trim()
        .parse()
        .map_err(|e| format!("bad radicand {radicand:?}: {e}"))?;
    Ok((coeff, radicand))
}

impl FromStr for RadicalSum {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let err = |reason: String| Error::RadicalParse {
            input: input.to_string(),
            reason,
        };
        if input.trim().is_empty() {
            return Err(err("empty input".into()));
        }
        let mut out = RadicalSum::zero();
        for part in input.split(" + ") {
            let (c, m) = parse_term(part).map_err(err)?;
            out.add_term(c, m);
        }
        Ok(out)
    }
}

impl Serialize for RadicalSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RadicalSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
