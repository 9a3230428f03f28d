//! Constant-time Sombor formulas for total and unit graphs of `Z_n` and of
//! finite local rings, plus the regular-graph complement identity.
//!
//! The two-prime families share one assembly: with `alpha`, `beta`, `gamma`
//! counting zero-divisor/zero-divisor, zero-divisor/unit and unit/unit edges,
//!
//! ```text
//! SO = sqrt(2) * alpha * d_Z + beta * sqrt(d_Z^2 + d_U^2) + sqrt(2) * gamma * d_U
//! ```
//!
//! Three published statements disagree with their own derivations. Each of
//! them has an [`FormulaVariant::AsPrinted`] evaluator that reproduces the
//! published expression and a [`FormulaVariant::Corrected`] one rebuilt from
//! the degree formulas, the edge partition and the assembly above.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{predicted_degrees, DegreePair, GraphKind};
use crate::radical::{RadicalSum, Rational};
use crate::ring::{euler_phi, is_prime, FiniteRing, LocalRingSpec, ModulusFamily, RingKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgePartition {
    /// zero-divisor to zero-divisor
    pub alpha: u64,
    /// zero-divisor to unit
    pub beta: u64,
    /// unit to unit
    pub gamma: u64,
    pub total: u64,
}

impl EdgePartition {
    pub fn from_counts(alpha: u64, beta: u64, gamma: u64) -> Self {
        EdgePartition {
            alpha,
            beta,
            gamma,
            total: alpha + beta + gamma,
        }
    }

    /// `gamma = total - alpha - beta`; fails if that is negative.
    pub fn from_total(alpha: u64, beta: u64, total: u64) -> Result<Self> {
        let gamma = total
            .checked_sub(alpha + beta)
            .ok_or_else(|| Error::Precondition(format!(
                "edge count {total} is below alpha + beta = {}",
                alpha + beta
            )))?;
        Ok(EdgePartition {
            alpha,
            beta,
            gamma,
            total,
        })
    }

    pub fn is_consistent(&self) -> bool {
        self.alpha + self.beta + self.gamma == self.total
    }
}

impl fmt::Display for EdgePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} gamma={} edges={}",
            self.alpha, self.beta, self.gamma, self.total
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    AsPrinted,
    Corrected,
}

impl FormulaVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaVariant::AsPrinted => "printed",
            FormulaVariant::Corrected => "corrected",
        }
    }
}

/// Every closed form this module evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    TotalEven,
    TotalPrimePower,
    TotalPq,
    TotalP2q,
    UnitEven,
    UnitPrimePower,
    UnitPq,
    UnitP2q,
    TotalLocal,
    UnitLocal,
}

impl Formula {
    pub fn label(&self) -> &'static str {
        match self {
            Formula::TotalEven => "total_even",
            Formula::TotalPrimePower => "total_prime_power",
            Formula::TotalPq => "total_pq",
            Formula::TotalP2q => "total_p2q",
            Formula::UnitEven => "unit_even",
            Formula::UnitPrimePower => "unit_prime_power",
            Formula::UnitPq => "unit_pq",
            Formula::UnitP2q => "unit_p2q",
            Formula::TotalLocal => "total_local",
            Formula::UnitLocal => "unit_local",
        }
    }

    pub fn kind(&self) -> GraphKind {
        match self {
            Formula::TotalEven
            | Formula::TotalPrimePower
            | Formula::TotalPq
            | Formula::TotalP2q
            | Formula::TotalLocal => GraphKind::Total,
            _ => GraphKind::Unit,
        }
    }

    /// The published expression, for formulas that carry a printed/corrected pair.
    pub fn printed_expression(&self) -> Option<&'static str> {
        match self {
            Formula::UnitPrimePower => Some(
                "phi(n)(n-phi(n))*sqrt(phi(n)^2 + (phi(n)-1)^2) + [phi(n)(phi(n)-1) - (n-phi(n))](phi(n)-1)/sqrt(2)",
            ),
            Formula::UnitP2q => Some("|E| = p^2(p-1)(q-1)(p^2 q - 1)/2"),
            Formula::UnitLocal => Some("|U|(n-|U|)*sqrt(|U|^2 + (n-|U|)^2)  (case 2 in U(R))"),
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn int(x: i128) -> Rational {
    Rational::from_integer(x)
}

/// `x / sqrt(2)`, i.e. `(x/2) * sqrt(2)`.
fn over_root2(x: i128) -> RadicalSum {
    RadicalSum::term(Rational::new(x, 2), 2)
}

fn root(c: i128, m: i128) -> RadicalSum {
    let m = u64::try_from(m).expect("radicand is non-negative");
    RadicalSum::term(int(c), m)
}

/// `sqrt(2) alpha d_Z + beta sqrt(d_Z^2 + d_U^2) + sqrt(2) gamma d_U`.
pub fn assemble(partition: &EdgePartition, degrees: DegreePair) -> RadicalSum {
    let (dz, du) = (degrees.zero_divisor as i128, degrees.unit as i128);
    root(partition.alpha as i128 * dz, 2)
        + root(partition.beta as i128, dz * dz + du * du)
        + root(partition.gamma as i128 * du, 2)
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn require_even(n: u64) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Precondition(format!("{n} is not an even modulus")));
    }
    Ok(())
}

fn prime_power(p: u64, alpha: u32) -> Result<u64> {
    require_odd_prime(p)?;
    if alpha == 0 {
        return Err(Error::Precondition("exponent must be at least 1".into()));
    }
    p.checked_pow(alpha)
        .filter(|&n| n < 1 << 40)
        .ok_or(Error::Overflow("raising the prime power"))
}

fn require_pq(p: u64, q: u64) -> Result<()> {
    require_odd_prime(p)?;
    require_odd_prime(q)?;
    if p >= q {
        return Err(Error::Precondition(format!("need p < q, got p={p} q={q}")));
    }
    Ok(())
}

fn require_p2q(p: u64, q: u64) -> Result<()> {
    require_odd_prime(p)?;
    require_odd_prime(q)?;
    if p == q {
        return Err(Error::Precondition(format!("p and q must differ, got {p}")));
    }
    Ok(())
}

fn modulus_degrees(n: u64, kind: GraphKind) -> DegreePair {
    predicted_degrees(n, euler_phi(n), n % 2 == 1, kind)
}

/// Total graph of `Z_n`, `n` even: `n (n - phi - 1)^2 / sqrt(2)`.
pub fn so_total_even(n: u64) -> Result<RadicalSum> {
    require_even(n)?;
    let (n, phi) = (n as i128, euler_phi(n) as i128);
    Ok(over_root2(n * (n - phi - 1).pow(2)))
}

/// Total graph of `Z_{p^alpha}`, `p` odd:
/// `phi (n - phi)^2 / sqrt(2) + (n - phi - 1)^2 (n - phi) / sqrt(2)`.
pub fn so_total_prime_power(p: u64, alpha: u32) -> Result<RadicalSum> {
    let n = prime_power(p, alpha)?;
    let (n, phi) = (n as i128, euler_phi(n) as i128);
    Ok(over_root2(phi * (n - phi).pow(2)) + over_root2((n - phi - 1).pow(2) * (n - phi)))
}

pub fn total_pq_partition(p: u64, q: u64) -> Result<EdgePartition> {
    require_pq(p, q)?;
    let alpha = (p * (p - 1) + q * (q - 1)) / 2;
    let beta = 2 * (p - 1) * (q - 1);
    let total = (p * q - 1) * (p + q - 1) / 2;
    EdgePartition::from_total(alpha, beta, total)
}

pub fn so_total_pq(p: u64, q: u64) -> Result<RadicalSum> {
    let partition = total_pq_partition(p, q)?;
    Ok(assemble(&partition, modulus_degrees(p * q, GraphKind::Total)))
}

/// Accepts `p > q` (outside the derivation's hypothesis); callers decide how
/// to treat those instances.
pub fn total_p2q_partition(p: u64, q: u64) -> Result<EdgePartition> {
    require_p2q(p, q)?;
    let (a, b) = (p * (q - 1), p * (p - 1));
    let alpha = a * (a - 1) / 2 + b * (b - 1) / 2 + p * (p - 1) / 2 + p * p * (q - 1) + p * p * (p - 1);
    let beta = 2 * p * p * (p - 1) * (q - 1);
    let total = p * (p + q - 1) * (p * p * q - 1) / 2;
    EdgePartition::from_total(alpha, beta, total)
}

pub fn so_total_p2q(p: u64, q: u64) -> Result<RadicalSum> {
    let partition = total_p2q_partition(p, q)?;
    Ok(assemble(&partition, modulus_degrees(p * p * q, GraphKind::Total)))
}

/// Unit graph of `Z_n`, `n` even: `n phi^2 / sqrt(2)`.
pub fn so_unit_even(n: u64) -> Result<RadicalSum> {
    require_even(n)?;
    let (n, phi) = (n as i128, euler_phi(n) as i128);
    Ok(over_root2(n * phi * phi))
}

/// Unit graph of `Z_{p^alpha}`, `p` odd. The printed bracket subtracts
/// `n - phi` where the unit/unit edge count needs `(n - phi) phi`.
pub fn so_unit_prime_power(p: u64, alpha: u32, variant: FormulaVariant) -> Result<RadicalSum> {
    let n = prime_power(p, alpha)?;
    let (n, phi) = (n as i128, euler_phi(n) as i128);
    let mixed = root(phi * (n - phi), phi * phi + (phi - 1).pow(2));
    let bracket = match variant {
        FormulaVariant::AsPrinted => phi * (phi - 1) - (n - phi),
        FormulaVariant::Corrected => phi * (phi - 1) - (n - phi) * phi,
    };
    Ok(mixed + over_root2(bracket * (phi - 1)))
}

pub fn unit_pq_partition(p: u64, q: u64) -> Result<EdgePartition> {
    require_pq(p, q)?;
    let phi = (p - 1) * (q - 1);
    let alpha = phi;
    let beta = phi * (p + q - 3);
    let total = (p * q - 1) * phi / 2;
    EdgePartition::from_total(alpha, beta, total)
}

pub fn so_unit_pq(p: u64, q: u64) -> Result<RadicalSum> {
    let partition = unit_pq_partition(p, q)?;
    Ok(assemble(&partition, modulus_degrees(p * q, GraphKind::Unit)))
}

/// The printed edge count carries `p^2` where the handshake lemma gives
/// `phi(p^2 q) = p (p-1)(q-1)`; `alpha` and `beta` agree in both variants.
pub fn unit_p2q_partition(p: u64, q: u64, variant: FormulaVariant) -> Result<EdgePartition> {
    require_p2q(p, q)?;
    let alpha = p * p * (p - 1) * (q - 1);
    let beta = alpha * (p + q - 3);
    let n = p * p * q;
    let total = match variant {
        FormulaVariant::AsPrinted => p * p * (p - 1) * (q - 1) * (n - 1) / 2,
        FormulaVariant::Corrected => p * (p - 1) * (q - 1) * (n - 1) / 2,
    };
    EdgePartition::from_total(alpha, beta, total)
}

pub fn so_unit_p2q(p: u64, q: u64, variant: FormulaVariant) -> Result<RadicalSum> {
    let partition = unit_p2q_partition(p, q, variant)?;
    Ok(assemble(&partition, modulus_degrees(p * p * q, GraphKind::Unit)))
}

/// Total graph of a finite local ring.
pub fn so_total_local(spec: &LocalRingSpec) -> RadicalSum {
    let (n, u) = (spec.order() as i128, spec.unit_count() as i128);
    if spec.two_is_unit() {
        over_root2((n - u) * (n - u - 1).pow(2)) + over_root2(u * (n - u).pow(2))
    } else {
        over_root2(n * (n - u - 1).pow(2))
    }
}

/// Unit graph of a finite local ring. Only the case `2 in U(R)` has a
/// printed/corrected pair; otherwise the variant is ignored.
///
/// In the corrected case every non-unit is adjacent to every unit and to
/// nothing else, units have degree `|U| - 1`, and the remaining unit/unit
/// edges follow from the handshake lemma.
pub fn so_unit_local(spec: &LocalRingSpec, variant: FormulaVariant) -> RadicalSum {
    let (n, u) = (spec.order() as i128, spec.unit_count() as i128);
    if !spec.two_is_unit() {
        return over_root2(n * u * u);
    }
    match variant {
        FormulaVariant::AsPrinted => root(u * (n - u), u * u + (n - u).pow(2)),
        FormulaVariant::Corrected => {
            root(u * (n - u), u * u + (u - 1).pow(2))
                + over_root2((u * (u - 1) - (n - u) * u) * (u - 1))
        }
    }
}

/// Sombor index of any `k`-regular graph on `n` vertices: `n k^2 / sqrt(2)`.
pub fn so_regular(n: u64, k: u64) -> Result<RadicalSum> {
    if n > 0 && k >= n || n == 0 && k > 0 {
        return Err(Error::Precondition(format!("degree {k} impossible on {n} vertices")));
    }
    Ok(over_root2(n as i128 * (k as i128).pow(2)))
}

pub fn so_complete(n: u64) -> RadicalSum {
    so_regular(n, n.saturating_sub(1)).expect("complete graph degree is always feasible")
}

/// `SO(K_n) - (sqrt(SO(G)) + sqrt(SO(G')))^2` for a `k`-regular `G` on `n`
/// vertices and its complement `G'`, evaluated exactly. The cross term
/// `2 sqrt(SO(G) SO(G'))` is the exact square root of a rational, since both
/// indices are rational multiples of `sqrt(2)`.
pub fn complement_identity_residual(n: u64, k: u64) -> Result<RadicalSum> {
    if n == 0 || k >= n || (n * k) % 2 == 1 {
        return Err(Error::Precondition(format!("no {k}-regular graph on {n} vertices")));
    }
    let so_g = so_regular(n, k)?;
    let so_gc = so_regular(n, n - k - 1)?;
    let cross = (&so_g * &so_gc)
        .sqrt_of_rational()
        .ok_or(Error::Overflow("taking the cross-term square root"))?
        .scale_int(2);
    Ok(so_complete(n) - (so_g + so_gc + cross))
}

/// One closed-form evaluation for a concrete ring graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedEvaluation {
    pub formula: Formula,
    /// `None` for formulas with a single published form.
    pub variant: Option<FormulaVariant>,
    pub value: RadicalSum,
    pub partition: Option<EdgePartition>,
}

impl ClosedEvaluation {
    pub fn variant_label(&self) -> &'static str {
        self.variant.map_or("unique", |v| v.as_str())
    }
}

fn eval(formula: Formula, value: Result<RadicalSum>, partition: Option<EdgePartition>) -> Result<ClosedEvaluation> {
    Ok(ClosedEvaluation {
        formula,
        variant: None,
        value: value?,
        partition,
    })
}

fn pair(
    formula: Formula,
    mut f: impl FnMut(FormulaVariant) -> Result<(RadicalSum, Option<EdgePartition>)>,
) -> Result<Vec<ClosedEvaluation>> {
    [FormulaVariant::Corrected, FormulaVariant::AsPrinted]
        .into_iter()
        .map(|v| {
            let (value, partition) = f(v)?;
            Ok(ClosedEvaluation {
                formula,
                variant: Some(v),
                value,
                partition,
            })
        })
        .collect()
}

/// Closed forms indexed by the modulus family of `Z_n`.
pub fn family_closed_forms(n: u64, family: ModulusFamily, kind: GraphKind) -> Result<Vec<ClosedEvaluation>> {
    use ModulusFamily::*;
    let out = match (family, kind) {
        (Even, GraphKind::Total) => vec![eval(Formula::TotalEven, so_total_even(n), None)?],
        (Even, GraphKind::Unit) => vec![eval(Formula::UnitEven, so_unit_even(n), None)?],
        (OddPrimePower { p, alpha }, GraphKind::Total) => {
            vec![eval(Formula::TotalPrimePower, so_total_prime_power(p, alpha), None)?]
        }
        (OddPrimePower { p, alpha }, GraphKind::Unit) => pair(Formula::UnitPrimePower, |v| {
            Ok((so_unit_prime_power(p, alpha, v)?, None))
        })?,
        (OddPQ { p, q }, GraphKind::Total) => {
            vec![eval(Formula::TotalPq, so_total_pq(p, q), Some(total_pq_partition(p, q)?))?]
        }
        (OddPQ { p, q }, GraphKind::Unit) => {
            vec![eval(Formula::UnitPq, so_unit_pq(p, q), Some(unit_pq_partition(p, q)?))?]
        }
        (OddPSquaredQ { p, q }, GraphKind::Total) => {
            vec![eval(Formula::TotalP2q, so_total_p2q(p, q), Some(total_p2q_partition(p, q)?))?]
        }
        (OddPSquaredQ { p, q }, GraphKind::Unit) => pair(Formula::UnitP2q, |v| {
            Ok((so_unit_p2q(p, q, v)?, Some(unit_p2q_partition(p, q, v)?)))
        })?,
        (OtherOdd, _) => return Err(Error::OffFamily(format!("Z_{n}"))),
    };
    Ok(out)
}

pub fn local_closed_forms(spec: &LocalRingSpec, kind: GraphKind) -> Vec<ClosedEvaluation> {
    match kind {
        GraphKind::Total => vec![ClosedEvaluation {
            formula: Formula::TotalLocal,
            variant: None,
            value: so_total_local(spec),
            partition: None,
        }],
        GraphKind::Unit if spec.two_is_unit() => [FormulaVariant::Corrected, FormulaVariant::AsPrinted]
            .into_iter()
            .map(|v| ClosedEvaluation {
                formula: Formula::UnitLocal,
                variant: Some(v),
                value: so_unit_local(spec, v),
                partition: None,
            })
            .collect(),
        GraphKind::Unit => vec![ClosedEvaluation {
            formula: Formula::UnitLocal,
            variant: None,
            value: so_unit_local(spec, FormulaVariant::Corrected),
            partition: None,
        }],
    }
}

/// Which formulas to apply to a ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaSelection {
    /// Every applicable formula.
    #[default]
    All,
    /// Only the `Z_n` family formulas.
    Family,
    /// Only the local-ring formulas.
    Local,
}

/// All closed forms applicable to `ring`, family formulas first. Errors with
/// [`Error::OffFamily`] when nothing applies.
pub fn closed_forms_for(ring: &FiniteRing, kind: GraphKind, selection: FormulaSelection) -> Result<Vec<ClosedEvaluation>> {
    let mut out = Vec::new();
    if selection != FormulaSelection::Local {
        if let (Some(n), Some(family)) = (ring.modulus(), ring.family()) {
            if family != ModulusFamily::OtherOdd {
                out.extend(family_closed_forms(n, family, kind)?);
            }
        }
    }
    if selection != FormulaSelection::Family && ring.is_local() {
        out.extend(local_closed_forms(&ring.to_local_spec()?, kind));
    }
    if out.is_empty() {
        let what = match ring.kind() {
            RingKind::TruncatedPoly { .. } | RingKind::ZPrimePower { .. } => ring.to_string(),
            RingKind::Zn(_) => format!("{ring} ({})", ring.family().map(|f| f.label()).unwrap_or_default()),
        };
        return Err(Error::OffFamily(what));
    }
    Ok(out)
}
