//! Oracle cross-checks: build each ring graph explicitly, evaluate the Sombor
//! index edge by edge, and compare every applicable closed form against it.
//!
//! Mismatches are data, not failures. A sweep always runs to completion and
//! records which formula disagreed where; [`errata_report`] then picks the
//! smallest counterexample for each published expression that disagrees.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    closed_forms_for, complement_identity_residual, so_regular, EdgePartition, Formula,
    FormulaSelection, FormulaVariant,
};
use crate::error::{Error, Result};
use crate::graph::{
    circulant_graph, edge_partition_of, predicted_ring_degrees, regular_circulant_offsets,
    ring_graph_of_kind, total_graph, unit_graph, DegreePair, GraphKind, VertexClass,
};
use crate::indices::sombor_bruteforce;
use crate::radical::RadicalSum;
use crate::ring::{is_prime, FiniteRing, ModulusFamily};

pub const DEFAULT_CEILING: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest vertex count that will be built explicitly.
    pub ceiling: usize,
    pub selection: FormulaSelection,
    /// Record wall-clock time per case. Off by default so reports stay
    /// byte-reproducible.
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            ceiling: DEFAULT_CEILING,
            selection: FormulaSelection::All,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantResult {
    pub formula: Formula,
    /// `printed`, `corrected`, or `unique`.
    pub variant: &'static str,
    pub closed_value: RadicalSum,
    pub partition_closed: Option<EdgePartition>,
    #[serde(rename = "match")]
    pub value_match: bool,
    pub partition_match: Option<bool>,
}

impl VariantResult {
    /// Value and (when the formula provides one) partition both agree.
    pub fn matches(&self) -> bool {
        self.value_match && self.partition_match.unwrap_or(true)
    }

    /// Unique and corrected variants are expected to match; printed ones
    /// with a corrected sibling are findings either way.
    pub fn is_required(&self) -> bool {
        self.variant != FormulaVariant::AsPrinted.as_str()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub n: u64,
    pub ring: String,
    pub kind: GraphKind,
    pub family: String,
    /// False for `p^2 q` moduli with `p > q`.
    pub in_hypothesis: bool,
    pub degrees_predicted: DegreePair,
    pub oracle_value: RadicalSum,
    pub partition_oracle: EdgePartition,
    pub evaluations: Vec<VariantResult>,
    pub micros: u64,
}

impl CaseResult {
    /// Every unique/corrected evaluation matches the oracle.
    pub fn required_match(&self) -> bool {
        self.evaluations
            .iter()
            .filter(|e| e.is_required())
            .all(VariantResult::matches)
    }

    pub fn evaluation(&self, formula: Formula, variant: &str) -> Option<&VariantResult> {
        self.evaluations
            .iter()
            .find(|e| e.formula == formula && e.variant == variant)
    }
}

fn family_label(ring: &FiniteRing) -> (String, bool) {
    match ring.family() {
        Some(f) => (f.label(), f.in_hypothesis()),
        None => ("local".to_string(), true),
    }
}

/// Builds the graph, runs the oracle, and evaluates every applicable closed
/// form. Rings without a closed form yield an oracle-only result.
pub fn verify_case(ring: &FiniteRing, kind: GraphKind, config: &VerifyConfig) -> Result<CaseResult> {
    if ring.order() > config.ceiling {
        return Err(Error::CeilingExceeded {
            order: ring.order(),
            ceiling: config.ceiling,
        });
    }
    let start = Instant::now();
    let (graph, classes) = ring_graph_of_kind(ring, kind);
    let oracle_value = sombor_bruteforce(&graph);
    let partition_oracle = edge_partition_of(&graph, &classes);
    let closed = match closed_forms_for(ring, kind, config.selection) {
        Ok(c) => c,
        Err(Error::OffFamily(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let evaluations = closed
        .into_iter()
        .map(|e| VariantResult {
            formula: e.formula,
            variant: e.variant_label(),
            value_match: e.value == oracle_value,
            partition_match: e.partition.map(|p| p == partition_oracle),
            closed_value: e.value,
            partition_closed: e.partition,
        })
        .collect();
    let (family, in_hypothesis) = family_label(ring);
    let micros = if config.timings {
        start.elapsed().as_micros() as u64
    } else {
        0
    };
    Ok(CaseResult {
        n: ring.order() as u64,
        ring: ring.to_string(),
        kind,
        family,
        in_hypothesis,
        degrees_predicted: predicted_ring_degrees(ring, kind),
        oracle_value,
        partition_oracle,
        evaluations,
        micros,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    Even,
    PrimePower,
    Pq,
    /// `p^2 q` in either order of `p` and `q`.
    P2q,
    Other,
    /// `Z_{p^a}` for every prime `p`, and `F_p[x]/(x^k)` for `k >= 2`.
    Local,
    All,
}

fn truncated_polys(min_n: u64, max_n: u64) -> Vec<FiniteRing> {
    let mut out = Vec::new();
    for p in (2..=max_n).filter(|&p| is_prime(p)) {
        let mut k = 2;
        while let Some(order) = p.checked_pow(k).filter(|&o| o <= max_n) {
            if order >= min_n {
                out.push(FiniteRing::truncated_poly(p, k).expect("prime p, k >= 2"));
            }
            k += 1;
        }
    }
    out
}

/// Rings selected by a family filter, orders in `min_n..=max_n`.
pub fn sweep_rings(family: SweepFamily, min_n: u64, max_n: u64) -> Vec<FiniteRing> {
    let min_n = min_n.max(2);
    let zn = |keep: &dyn Fn(&FiniteRing) -> bool| -> Vec<FiniteRing> {
        (min_n..=max_n)
            .map(|n| FiniteRing::zn(n).expect("n >= 2"))
            .filter(|r| keep(r))
            .collect()
    };
    let fam = |r: &FiniteRing| r.family().expect("Z_n has a family");
    let mut rings = match family {
        SweepFamily::Even => zn(&|r| fam(r) == ModulusFamily::Even),
        SweepFamily::PrimePower => zn(&|r| matches!(fam(r), ModulusFamily::OddPrimePower { .. })),
        SweepFamily::Pq => zn(&|r| matches!(fam(r), ModulusFamily::OddPQ { .. })),
        SweepFamily::P2q => zn(&|r| matches!(fam(r), ModulusFamily::OddPSquaredQ { .. })),
        SweepFamily::Other => zn(&|r| fam(r) == ModulusFamily::OtherOdd),
        SweepFamily::Local => {
            let mut v = zn(&|r| r.is_local());
            v.extend(truncated_polys(min_n, max_n));
            v
        }
        SweepFamily::All => {
            let mut v = zn(&|_| true);
            v.extend(truncated_polys(min_n, max_n));
            v
        }
    };
    rings.sort_by_cached_key(|r| (r.order(), r.to_string()));
    rings
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub min_n: u64,
    pub max_n: u64,
    pub kinds: Vec<GraphKind>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub formula: Formula,
    pub variant: &'static str,
    pub cases: usize,
    pub matched: usize,
    pub mismatched: usize,
    /// Cases outside the derivation's hypothesis, counted separately.
    pub out_of_hypothesis_matched: usize,
    pub out_of_hypothesis_mismatched: usize,
}

/// Whether a formula holds on a `p^2 q` instance with `p > q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionOutcome {
    pub n: u64,
    pub family: String,
    pub kind: GraphKind,
    pub formula: Formula,
    pub variant: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrataEntry {
    pub formula: Formula,
    pub printed_expression: &'static str,
    /// Smallest ring (by order) on which the printed form disagrees.
    pub counterexample: String,
    pub kind: GraphKind,
    pub printed_value: RadicalSum,
    pub oracle_value: RadicalSum,
    pub corrected_value: Option<RadicalSum>,
    pub printed_partition: Option<EdgePartition>,
    pub oracle_partition: EdgePartition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub cases: Vec<CaseResult>,
    pub summary: Vec<SummaryRow>,
    pub errata: Vec<ErrataEntry>,
    pub extension: Vec<ExtensionOutcome>,
}

impl SweepReport {
    /// Every in-hypothesis unique/corrected evaluation matched.
    pub fn all_required_match(&self) -> bool {
        self.cases
            .iter()
            .filter(|c| c.in_hypothesis)
            .all(CaseResult::required_match)
    }

    pub fn from_cases(mut cases: Vec<CaseResult>) -> Self {
        cases.sort_by(|a, b| (a.n, &a.ring, a.kind).cmp(&(b.n, &b.ring, b.kind)));
        SweepReport {
            summary: summarize(&cases),
            errata: errata_report(&cases),
            extension: extension_outcomes(&cases),
            cases,
        }
    }
}

fn summarize(cases: &[CaseResult]) -> Vec<SummaryRow> {
    let mut rows: BTreeMap<(Formula, &'static str), SummaryRow> = BTreeMap::new();
    for case in cases {
        for e in &case.evaluations {
            let row = rows.entry((e.formula, e.variant)).or_insert(SummaryRow {
                formula: e.formula,
                variant: e.variant,
                cases: 0,
                matched: 0,
                mismatched: 0,
                out_of_hypothesis_matched: 0,
                out_of_hypothesis_mismatched: 0,
            });
            row.cases += 1;
            match (case.in_hypothesis, e.matches()) {
                (true, true) => row.matched += 1,
                (true, false) => row.mismatched += 1,
                (false, true) => row.out_of_hypothesis_matched += 1,
                (false, false) => row.out_of_hypothesis_mismatched += 1,
            }
        }
    }
    rows.into_values().collect()
}

fn extension_outcomes(cases: &[CaseResult]) -> Vec<ExtensionOutcome> {
    cases
        .iter()
        .filter(|c| !c.in_hypothesis)
        .flat_map(|c| {
            c.evaluations.iter().map(move |e| ExtensionOutcome {
                n: c.n,
                family: c.family.clone(),
                kind: c.kind,
                formula: e.formula,
                variant: e.variant,
                holds: e.matches(),
            })
        })
        .collect()
}

/// One entry per printed formula that disagrees with the oracle somewhere,
/// citing the smallest in-hypothesis counterexample. Empty when every
/// printed formula held on the cases given.
pub fn errata_report(results: &[CaseResult]) -> Vec<ErrataEntry> {
    let mut sorted: Vec<&CaseResult> = results.iter().filter(|c| c.in_hypothesis).collect();
    sorted.sort_by(|a, b| (a.n, &a.ring, a.kind).cmp(&(b.n, &b.ring, b.kind)));
    let mut found: BTreeMap<Formula, ErrataEntry> = BTreeMap::new();
    for case in sorted {
        for e in &case.evaluations {
            if e.variant != FormulaVariant::AsPrinted.as_str() || e.matches() || found.contains_key(&e.formula) {
                continue;
            }
            let corrected = case.evaluation(e.formula, FormulaVariant::Corrected.as_str());
            found.insert(
                e.formula,
                ErrataEntry {
                    formula: e.formula,
                    printed_expression: e.formula.printed_expression().unwrap_or(""),
                    counterexample: case.ring.clone(),
                    kind: case.kind,
                    printed_value: e.closed_value.clone(),
                    oracle_value: case.oracle_value.clone(),
                    corrected_value: corrected.map(|c| c.closed_value.clone()),
                    printed_partition: e.partition_closed,
                    oracle_partition: case.partition_oracle,
                },
            );
        }
    }
    found.into_values().collect()
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

/// Runs every selected case on `workers` threads. Results are sorted by
/// ascending order, ring and kind, so the report does not depend on the
/// worker count.
pub fn sweep(spec: &SweepSpec, config: &VerifyConfig, workers: usize) -> Result<SweepReport> {
    let rings = sweep_rings(spec.family, spec.min_n, spec.max_n);
    if rings.is_empty() || spec.kinds.is_empty() {
        return Err(Error::EmptySweep);
    }
    if let Some(big) = rings.iter().find(|r| r.order() > config.ceiling) {
        return Err(Error::CeilingExceeded {
            order: big.order(),
            ceiling: config.ceiling,
        });
    }
    let jobs: Vec<(&FiniteRing, GraphKind)> = rings
        .iter()
        .flat_map(|r| spec.kinds.iter().map(move |&k| (r, k)))
        .collect();
    let cases = pool(workers).install(|| {
        jobs.par_iter()
            .map(|&(r, k)| verify_case(r, k, config))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepReport::from_cases(cases))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub ring: String,
    pub n: u64,
    pub local: bool,
    /// Zero-divisors induce a complete subgraph of the total graph.
    pub zero_divisor_clique: bool,
    /// Every vertex of both graphs has its predicted degree.
    pub degrees_match: bool,
    /// The complement of the total graph is the unit graph.
    pub duality: bool,
}

impl StructureReport {
    /// The clique property holds exactly for local rings.
    pub fn consistent(&self) -> bool {
        self.degrees_match && self.duality && self.zero_divisor_clique == self.local
    }
}

pub fn check_structure(ring: &FiniteRing) -> StructureReport {
    let (total, classes) = total_graph(ring);
    let (unit, _) = unit_graph(ring);
    let degrees_match = [(GraphKind::Total, &total), (GraphKind::Unit, &unit)]
        .into_iter()
        .all(|(kind, g)| {
            let want = predicted_ring_degrees(ring, kind);
            (0..g.vertex_count()).all(|v| {
                let d = g.degree(v) as u64;
                match classes.get(v) {
                    VertexClass::ZeroDivisor => d == want.zero_divisor,
                    VertexClass::Unit => d == want.unit,
                }
            })
        });
    StructureReport {
        ring: ring.to_string(),
        n: ring.order() as u64,
        local: ring.is_local(),
        zero_divisor_clique: total.induces_complete(&classes.zero_divisors()),
        degrees_match,
        duality: total.complement() == unit,
    }
}

pub fn structure_sweep(rings: &[FiniteRing], workers: usize) -> Vec<StructureReport> {
    pool(workers).install(|| rings.par_iter().map(check_structure).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub n: u64,
    pub k: u64,
    pub residual: RadicalSum,
    /// Brute-force check on an explicit circulant, when `n` is small enough.
    pub circulant_match: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.residual.is_zero() && r.circulant_match != Some(false))
    }
}

/// For each `3 <= n <= n_max` and every feasible `k`, checks the complement
/// identity symbolically; for `n <= circulant_max` also compares the brute
/// force index of a `k`-regular circulant and its complement with `n k^2 / sqrt(2)`.
pub fn identity_sweep(n_max: u64, circulant_max: u64, workers: usize) -> Result<IdentityReport> {
    if n_max < 3 {
        return Err(Error::EmptySweep);
    }
    let pairs: Vec<(u64, u64)> = (3..=n_max)
        .flat_map(|n| (0..n).filter(move |k| n * k % 2 == 0).map(move |k| (n, k)))
        .collect();
    let rows = pool(workers).install(|| {
        pairs
            .par_iter()
            .map(|&(n, k)| {
                let residual = complement_identity_residual(n, k)?;
                let circulant_match = if n <= circulant_max {
                    let offsets = regular_circulant_offsets(n as usize, k as usize)
                        .expect("n k even admits a circulant");
                    let g = circulant_graph(n as usize, &offsets)?;
                    Some(
                        sombor_bruteforce(&g) == so_regular(n, k)?
                            && sombor_bruteforce(&g.complement()) == so_regular(n, n - k - 1)?,
                    )
                } else {
                    None
                };
                Ok(IdentityRow {
                    n,
                    k,
                    residual,
                    circulant_match,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(IdentityReport { rows })
}
