//! Number-theoretic helpers and the concrete finite commutative rings whose
//! elements become graph vertices.
//!
//! Elements of a [`FiniteRing`] are addressed by their index `0..order`. For
//! `Z_n` the index is the residue itself. For `F_p[x]/(x^k)` the index is the
//! base-`p` number whose most significant digit is the constant term, so the
//! enumeration order is lexicographic in `(a_0, a_1, ..., a_{k-1})`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A modulus `n >= 2` together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Modulus {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, a)] => Some((*p, *a)),
            _ => None,
        }
    }

    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, a)| (p - 1) * p.pow(a - 1))
            .product()
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.n)?;
        for (i, (p, a)) in self.factors.iter().enumerate() {
            let sep = if i == 0 { " " } else { " * " };
            if *a == 1 {
                write!(f, "{sep}{p}")?;
            } else {
                write!(f, "{sep}{p}^{a}")?;
            }
        }
        Ok(())
    }
}

/// Trial division up to `sqrt(n)`.
pub fn factorize(n: u64) -> Result<Modulus> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    Ok(Modulus {
        n,
        factors: prime_factors(n),
    })
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && matches!(prime_factors(n).as_slice(), [(_, 1)])
}

/// Euler's totient from the multiplicative formula. `euler_phi(1) == 1`.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    prime_factors(n)
        .iter()
        .map(|&(p, a)| (p - 1) * p.pow(a - 1))
        .product()
}

/// The modulus families that carry closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModulusFamily {
    Even,
    OddPrimePower { p: u64, alpha: u32 },
    OddPQ { p: u64, q: u64 },
    /// `n = p^2 q`; `p` is always the squared prime, so `p > q` is possible.
    OddPSquaredQ { p: u64, q: u64 },
    OtherOdd,
}

impl ModulusFamily {
    /// False only for `p^2 q` with `p > q`, which lies outside the hypothesis
    /// under which the `p^2 q` formulas were derived.
    pub fn in_hypothesis(&self) -> bool {
        match *self {
            ModulusFamily::OddPSquaredQ { p, q } => p < q,
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ModulusFamily::Even => "even".to_string(),
            ModulusFamily::OddPrimePower { p, alpha } => format!("prime_power(p={p} a={alpha})"),
            ModulusFamily::OddPQ { p, q } => format!("pq(p={p} q={q})"),
            ModulusFamily::OddPSquaredQ { p, q } if p < q => format!("p2q(p={p} q={q})"),
            ModulusFamily::OddPSquaredQ { p, q } => {
                format!("p2q(p={p} q={q} out_of_hypothesis)")
            }
            ModulusFamily::OtherOdd => "other_odd".to_string(),
        }
    }
}

pub fn classify(m: &Modulus) -> ModulusFamily {
    if m.n() % 2 == 0 {
        return ModulusFamily::Even;
    }
    match *m.factors() {
        [(p, alpha)] => ModulusFamily::OddPrimePower { p, alpha },
        [(p, 1), (q, 1)] => ModulusFamily::OddPQ { p, q },
        [(p, 2), (q, 1)] | [(q, 1), (p, 2)] => ModulusFamily::OddPSquaredQ { p, q },
        _ => ModulusFamily::OtherOdd,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RingKind {
    Zn(Modulus),
    ZPrimePower { p: u64, alpha: u32 },
    /// `F_p[x]/(x^k)`.
    TruncatedPoly { p: u64, k: u32 },
}

/// A finite commutative ring with unity whose elements can be enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteRing {
    kind: RingKind,
    order: usize,
}

// Orders beyond this are never enumerable here and keep index arithmetic in usize.
const MAX_ORDER: u64 = 1 << 40;

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&v| v <= MAX_ORDER)
        .ok_or_else(|| Error::InvalidRing(format!("{p}^{e} is too large")))
}

impl FiniteRing {
    pub fn zn(n: u64) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::InvalidRing(format!("Z_{n} is too large")));
        }
        let m = factorize(n)?;
        Ok(FiniteRing {
            order: n as usize,
            kind: RingKind::Zn(m),
        })
    }

    pub fn zp_pow(p: u64, alpha: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if alpha == 0 {
            return Err(Error::InvalidRing("exponent must be at least 1".into()));
        }
        let order = checked_pow(p, alpha)?;
        Ok(FiniteRing {
            kind: RingKind::ZPrimePower { p, alpha },
            order: order as usize,
        })
    }

    pub fn truncated_poly(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidRing("truncation degree must be at least 1".into()));
        }
        let order = checked_pow(p, k)?;
        Ok(FiniteRing {
            kind: RingKind::TruncatedPoly { p, k },
            order: order as usize,
        })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The modulus when the ring is `Z_n` (in either spelling).
    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            RingKind::Zn(ref m) => Some(m.n()),
            RingKind::ZPrimePower { .. } => Some(self.order as u64),
            RingKind::TruncatedPoly { .. } => None,
        }
    }

    pub fn family(&self) -> Option<ModulusFamily> {
        self.modulus()
            .map(|n| classify(&factorize(n).expect("order >= 2")))
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        match self.kind {
            RingKind::TruncatedPoly { p, k } => p.pow(k - 1) as usize,
            _ => 1 % self.order,
        }
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.order && y < self.order);
        match self.kind {
            RingKind::Zn(_) | RingKind::ZPrimePower { .. } => {
                let s = x + y;
                if s >= self.order {
                    s - self.order
                } else {
                    s
                }
            }
            RingKind::TruncatedPoly { p, k } => {
                let p = p as usize;
                let (mut x, mut y) = (x, y);
                let (mut out, mut place) = (0, 1);
                for _ in 0..k {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                out
            }
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.order && y < self.order);
        match self.kind {
            RingKind::Zn(_) | RingKind::ZPrimePower { .. } => {
                ((x as u128 * y as u128) % self.order as u128) as usize
            }
            RingKind::TruncatedPoly { p, k } => {
                let a = self.coefficients(x);
                let b = self.coefficients(y);
                let k = k as usize;
                let mut c = vec![0u64; k];
                for i in 0..k {
                    for j in 0..k - i {
                        c[i + j] = (c[i + j] + a[i] * b[j]) % p;
                    }
                }
                self.from_coefficients(&c)
            }
        }
    }

    /// Coefficients `(a_0, ..., a_{k-1})` of a truncated polynomial element.
    /// For `Z_n` this is the single residue.
    pub fn coefficients(&self, x: usize) -> Vec<u64> {
        match self.kind {
            RingKind::TruncatedPoly { p, k } => {
                let mut digits = Vec::with_capacity(k as usize);
                let mut x = x as u64;
                for _ in 0..k {
                    digits.push(x % p);
                    x /= p;
                }
                digits.reverse();
                digits
            }
            _ => vec![x as u64],
        }
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> usize {
        match self.kind {
            RingKind::TruncatedPoly { p, .. } => {
                coeffs.iter().fold(0u64, |acc, &c| acc * p + c % p) as usize
            }
            _ => (coeffs.first().copied().unwrap_or(0) % self.order as u64) as usize,
        }
    }

    pub fn is_unit(&self, x: usize) -> bool {
        debug_assert!(x < self.order);
        match self.kind {
            RingKind::Zn(_) => (x as u64).gcd(&(self.order as u64)) == 1,
            RingKind::ZPrimePower { p, .. } => x as u64 % p != 0,
            RingKind::TruncatedPoly { p, k } => x as u64 >= p.pow(k - 1),
        }
    }

    /// Per-element unit flags, indexed like the elements.
    pub fn unit_mask(&self) -> Vec<bool> {
        (0..self.order).map(|x| self.is_unit(x)).collect()
    }

    pub fn unit_count(&self) -> u64 {
        match self.kind {
            RingKind::Zn(ref m) => m.phi(),
            RingKind::ZPrimePower { p, alpha } => (p - 1) * p.pow(alpha - 1),
            RingKind::TruncatedPoly { p, k } => (p - 1) * p.pow(k - 1),
        }
    }

    pub fn two_is_unit(&self) -> bool {
        let one = self.one();
        self.is_unit(self.add(one, one))
    }

    pub fn is_local(&self) -> bool {
        match self.kind {
            RingKind::Zn(ref m) => m.prime_power().is_some(),
            _ => true,
        }
    }

    pub fn to_local_spec(&self) -> Result<LocalRingSpec> {
        if !self.is_local() {
            return Err(Error::NonLocalRing(self.to_string()));
        }
        LocalRingSpec::new(self.order as u64, self.unit_count(), self.two_is_unit())
    }

    pub fn element_label(&self, x: usize) -> String {
        match self.kind {
            RingKind::TruncatedPoly { .. } => {
                let terms: Vec<String> = self
                    .coefficients(x)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "x".to_string(),
                        (1, c) => format!("{c}x"),
                        (i, 1) => format!("x^{i}"),
                        (i, c) => format!("{c}x^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
            _ => x.to_string(),
        }
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Zn(ref m) => write!(f, "Z_{}", m.n()),
            RingKind::ZPrimePower { .. } => write!(f, "Z_{}", self.order),
            RingKind::TruncatedPoly { p, k } => write!(f, "F_{p}[x]/(x^{k})"),
        }
    }
}

/// The three numbers that determine the Sombor index of the total and unit
/// graphs of a finite local ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LocalRingSpec {
    order: u64,
    unit_count: u64,
    two_is_unit: bool,
}

impl LocalRingSpec {
    pub fn new(order: u64, unit_count: u64, two_is_unit: bool) -> Result<Self> {
        if unit_count == 0 || unit_count >= order {
            return Err(Error::InvalidRing(format!(
                "unit count {unit_count} must lie in 1..{order}"
            )));
        }
        let ideal = order - unit_count;
        if order % ideal != 0 {
            return Err(Error::InvalidRing(format!(
                "maximal ideal size {ideal} does not divide order {order}"
            )));
        }
        Ok(LocalRingSpec {
            order,
            unit_count,
            two_is_unit,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn unit_count(&self) -> u64 {
        self.unit_count
    }

    pub fn two_is_unit(&self) -> bool {
        self.two_is_unit
    }

    pub fn non_unit_count(&self) -> u64 {
        self.order - self.unit_count
    }
}
