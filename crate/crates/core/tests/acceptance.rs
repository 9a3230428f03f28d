//! Acceptance suite. Runs every criterion at full scale, prints one
//! PASS/FAIL line each, and exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use sombor_core::closed_forms::{
    so_total_even, so_unit_even, so_unit_local, so_unit_prime_power, unit_p2q_partition, FormulaVariant,
};
use sombor_core::graph::GraphKind;
use sombor_core::radical::{RadicalSum, Rational};
use sombor_core::report::{report_body, sweep_csv, sweep_json};
use sombor_core::ring::{FiniteRing, ModulusFamily, RingKind};
use sombor_core::verify::{
    check_structure, identity_sweep, structure_sweep, sweep, sweep_rings, verify_case, CaseResult,
    SweepFamily, SweepSpec, VerifyConfig,
};
use sombor_core::{EdgePartition, Formula};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rs(text: &str) -> RadicalSum {
    text.parse().expect("valid radical text")
}

fn cfg() -> VerifyConfig {
    VerifyConfig::default()
}

fn run_sweep(family: SweepFamily, max_n: u64) -> Result<sombor_core::verify::SweepReport, String> {
    let spec = SweepSpec {
        family,
        min_n: 2,
        max_n,
        kinds: GraphKind::ALL.to_vec(),
    };
    sweep(&spec, &cfg(), rayon::current_num_threads()).map_err(|e| e.to_string())
}

fn eval_matches(case: &CaseResult, formula: Formula, variant: &str) -> Result<(), String> {
    let e = case
        .evaluation(formula, variant)
        .ok_or_else(|| format!("{} {}: no {formula}/{variant} evaluation", case.ring, case.kind))?;
    ensure(e.matches(), || {
        format!(
            "{} {}: {formula}/{variant} gave {} (partition {:?}), oracle {} (partition {})",
            case.ring, case.kind, e.closed_value, e.partition_closed, case.oracle_value, case.partition_oracle
        )
    })
}

fn criterion_1() -> Outcome {
    let report = run_sweep(SweepFamily::Even, 2000)?;
    for case in &report.cases {
        let formula = match case.kind {
            GraphKind::Total => Formula::TotalEven,
            GraphKind::Unit => Formula::UnitEven,
        };
        eval_matches(case, formula, "unique")?;
        let direct = match case.kind {
            GraphKind::Total => so_total_even(case.n),
            GraphKind::Unit => so_unit_even(case.n),
        }
        .map_err(|e| e.to_string())?;
        ensure(direct == case.oracle_value, || format!("Z_{} {}", case.n, case.kind))?;
    }
    ensure(report.cases.len() == 2 * 1000, || format!("{} cases", report.cases.len()))?;
    Ok(format!("{} even cases, 2 <= n <= 2000, exact", report.cases.len()))
}

fn criterion_2() -> Outcome {
    let report = run_sweep(SweepFamily::PrimePower, 2187)?;
    for case in &report.cases {
        match case.kind {
            GraphKind::Total => eval_matches(case, Formula::TotalPrimePower, "unique")?,
            GraphKind::Unit => eval_matches(case, Formula::UnitPrimePower, "corrected")?,
        }
    }
    ensure(report.cases.iter().any(|c| c.n == 2187), || "3^7 missing".into())?;
    let z5 = report
        .cases
        .iter()
        .find(|c| c.n == 5 && c.kind == GraphKind::Unit)
        .ok_or("Z_5 missing")?;
    let printed = z5.evaluation(Formula::UnitPrimePower, "printed").ok_or("no printed")?;
    ensure(z5.oracle_value == rs("20 + 12*sqrt(2)"), || format!("Z_5 oracle {}", z5.oracle_value))?;
    ensure(printed.closed_value == rs("20 + 33/2*sqrt(2)"), || format!("printed {}", printed.closed_value))?;
    ensure(!printed.matches(), || "printed unexpectedly matched at n=5".into())?;
    let direct = so_unit_prime_power(5, 1, FormulaVariant::AsPrinted).map_err(|e| e.to_string())?;
    ensure(direct == printed.closed_value, || "direct printed evaluation differs".into())?;
    Ok(format!(
        "{} prime-power cases up to 2187; printed unit form: {} vs oracle {} at n=5",
        report.cases.len(),
        printed.closed_value,
        z5.oracle_value
    ))
}

fn criterion_3() -> Outcome {
    let report = run_sweep(SweepFamily::Pq, 3000)?;
    for case in &report.cases {
        let f = match case.kind {
            GraphKind::Total => Formula::TotalPq,
            GraphKind::Unit => Formula::UnitPq,
        };
        eval_matches(case, f, "unique")?;
        let e = case.evaluation(f, "unique").unwrap();
        ensure(e.partition_match == Some(true), || format!("{} partition", case.ring))?;
    }
    let find = |kind| {
        report
            .cases
            .iter()
            .find(|c| c.n == 15 && c.kind == kind)
            .ok_or("Z_15 missing")
    };
    let t = find(GraphKind::Total)?;
    let u = find(GraphKind::Unit)?;
    ensure(t.partition_oracle == EdgePartition::from_counts(13, 16, 20), || format!("{}", t.partition_oracle))?;
    ensure(t.oracle_value == rs("218*sqrt(2) + 16*sqrt(85)"), || t.oracle_value.to_string())?;
    ensure(u.partition_oracle == EdgePartition::from_counts(8, 40, 8), || format!("{}", u.partition_oracle))?;
    ensure(u.oracle_value == rs("120*sqrt(2) + 40*sqrt(113)"), || u.oracle_value.to_string())?;
    Ok(format!("{} pq cases up to 3000, partitions and values exact", report.cases.len()))
}

fn criterion_4() -> Outcome {
    let report = run_sweep(SweepFamily::P2q, 5000)?;
    let mut in_hyp = 0;
    for case in report.cases.iter().filter(|c| c.in_hypothesis) {
        in_hyp += 1;
        match case.kind {
            GraphKind::Total => {
                eval_matches(case, Formula::TotalP2q, "unique")?;
                let e = case.evaluation(Formula::TotalP2q, "unique").unwrap();
                ensure(e.partition_match == Some(true), || format!("{} partition", case.ring))?;
            }
            GraphKind::Unit => eval_matches(case, Formula::UnitP2q, "corrected")?,
        }
    }
    let z45 = report
        .cases
        .iter()
        .find(|c| c.n == 45 && c.kind == GraphKind::Unit)
        .ok_or("Z_45 missing")?;
    ensure(z45.partition_oracle.total == 528, || format!("oracle edges {}", z45.partition_oracle.total))?;
    let printed = z45.evaluation(Formula::UnitP2q, "printed").ok_or("no printed")?;
    ensure(!printed.matches(), || "printed |E| unexpectedly matched".into())?;
    let printed_edges = unit_p2q_partition(3, 5, FormulaVariant::AsPrinted).map_err(|e| e.to_string())?.total;
    ensure(printed_edges != 528, || "printed |E| equals 528".into())?;

    let ext = &report.extension;
    let holds = ext.iter().filter(|e| e.holds).count();
    let mut detail: Vec<String> = ext
        .iter()
        .filter(|e| e.variant != "printed" && (e.n == 75 || e.n == 147))
        .map(|e| format!("{}:{}={}", e.n, e.formula, if e.holds { "holds" } else { "fails" }))
        .collect();
    detail.dedup();
    Ok(format!(
        "{in_hyp} in-hypothesis p2q cases exact; printed |E|={printed_edges} vs oracle 528 at Z_45; \
         p>q extension: {holds}/{} evaluations hold [{}]",
        ext.len(),
        detail.join(" ")
    ))
}

fn local_rings() -> Vec<FiniteRing> {
    let mut rings: Vec<FiniteRing> = sweep_rings(SweepFamily::Local, 2, 2048)
        .into_iter()
        .filter(|r| !matches!(r.kind(), RingKind::TruncatedPoly { .. }) || r.order() <= 729)
        .collect();
    rings.sort_by_key(|r| std::cmp::Reverse(r.order()));
    rings
}

fn criterion_5() -> Outcome {
    let rings = local_rings();
    let config = cfg();
    let cases: Vec<CaseResult> = rings
        .par_iter()
        .flat_map_iter(|r| GraphKind::ALL.map(|k| verify_case(r, k, &config)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let (mut two_unit, mut two_non_unit) = (0, 0);
    for case in &cases {
        match case.kind {
            GraphKind::Total => eval_matches(case, Formula::TotalLocal, "unique")?,
            GraphKind::Unit => {
                if case.evaluation(Formula::UnitLocal, "unique").is_some() {
                    two_non_unit += 1;
                    eval_matches(case, Formula::UnitLocal, "unique")?;
                } else {
                    two_unit += 1;
                    eval_matches(case, Formula::UnitLocal, "corrected")?;
                }
            }
        }
    }
    ensure(two_unit > 0 && two_non_unit > 0, || "both 2-cases must be exercised".into())?;
    let z9 = FiniteRing::zn(9).unwrap().to_local_spec().unwrap();
    let printed = so_unit_local(&z9, FormulaVariant::AsPrinted);
    let oracle = cases
        .iter()
        .find(|c| c.ring == "Z_9" && c.kind == GraphKind::Unit)
        .ok_or("Z_9 missing")?;
    ensure(printed == rs("54*sqrt(5)"), || printed.to_string())?;
    ensure(oracle.oracle_value == rs("18*sqrt(61) + 30*sqrt(2)"), || oracle.oracle_value.to_string())?;
    ensure(printed != oracle.oracle_value, || "printed matched at Z_9".into())?;
    Ok(format!(
        "{} local rings ({} unit graphs with 2 a unit, {} without); printed {} vs oracle {} at Z_9",
        rings.len(),
        two_unit,
        two_non_unit,
        printed,
        oracle.oracle_value
    ))
}

fn criterion_6() -> Outcome {
    let zn: Vec<FiniteRing> = (2..=500).map(|n| FiniteRing::zn(n).unwrap()).collect();
    let rows = structure_sweep(&zn, rayon::current_num_threads());
    for (ring, row) in zn.iter().zip(&rows) {
        ensure(row.degrees_match, || format!("{}: degree multiset", row.ring))?;
        ensure(row.duality, || format!("{}: complement duality", row.ring))?;
        let prime_power = matches!(
            ring.family(),
            Some(ModulusFamily::OddPrimePower { .. })
        ) || ring.order().is_power_of_two();
        ensure(row.zero_divisor_clique == prime_power, || {
            format!("{}: clique={} prime_power={prime_power}", row.ring, row.zero_divisor_clique)
        })?;
    }
    let locals = local_rings();
    let local_rows = structure_sweep(&locals, rayon::current_num_threads());
    for row in &local_rows {
        ensure(row.zero_divisor_clique && row.degrees_match && row.duality, || format!("{row:?}"))?;
    }
    ensure(check_structure(&FiniteRing::zn(15).unwrap()).consistent(), || "Z_15".into())?;
    Ok(format!("{} Z_n rings and {} local rings structurally consistent", rows.len(), local_rows.len()))
}

fn criterion_7() -> Outcome {
    let report = identity_sweep(200, 100, rayon::current_num_threads()).map_err(|e| e.to_string())?;
    let mut circulants = 0;
    for row in &report.rows {
        ensure(row.residual.is_zero(), || format!("n={} k={}: residual {}", row.n, row.k, row.residual))?;
        match (row.n <= 100, row.circulant_match) {
            (true, Some(true)) => circulants += 1,
            (false, None) => {}
            other => return Err(format!("n={} k={}: circulant check {other:?}", row.n, row.k)),
        }
    }
    Ok(format!(
        "{} (n, k) residuals exactly zero; {} circulant pairs match n k^2/sqrt(2)",
        report.rows.len(),
        circulants
    ))
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn criterion_8() -> Outcome {
    let spec = SweepSpec {
        family: SweepFamily::All,
        min_n: 2,
        max_n: 400,
        kinds: GraphKind::ALL.to_vec(),
    };
    let one = sweep(&spec, &cfg(), 1).map_err(|e| e.to_string())?;
    let eight = sweep(&spec, &cfg(), 8).map_err(|e| e.to_string())?;
    let stamp_a = Some("2026-01-01T00:00:00Z");
    let stamp_b = Some("2026-12-31T23:59:59Z");
    ensure(
        report_body(&sweep_csv(&one, stamp_a)) == report_body(&sweep_csv(&eight, stamp_b)),
        || "CSV bodies differ between 1 and 8 workers".into(),
    )?;
    ensure(
        report_body(&sweep_json(&one, stamp_a)) == report_body(&sweep_json(&eight, stamp_b)),
        || "JSON bodies differ between 1 and 8 workers".into(),
    )?;

    let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);
    let mut produced: Vec<RadicalSum> = one
        .cases
        .iter()
        .flat_map(|c| std::iter::once(c.oracle_value.clone()).chain(c.evaluations.iter().map(|e| e.closed_value.clone())))
        .collect();
    for _ in 0..10_000 {
        let mut v = RadicalSum::zero();
        for _ in 0..rng.below(6) {
            let num = rng.below(2_000_001) as i128 - 1_000_000;
            let den = rng.below(1000) as i128 + 1;
            v.add_term(Rational::new(num, den), rng.below(100_000) + 1);
        }
        produced.push(v);
    }
    for v in &produced {
        let text = v.to_string();
        let back: RadicalSum = text.parse().map_err(|e: sombor_core::Error| e.to_string())?;
        ensure(&back == v, || format!("round trip failed for {text}"))?;
        ensure(back.to_string() == text, || format!("render not unique for {text}"))?;
    }
    Ok(format!(
        "{} cases byte-identical with 1 and 8 workers; {} radical texts round-trip",
        one.cases.len(),
        produced.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 even family", criterion_1),
        ("2 odd prime powers", criterion_2),
        ("3 pq family", criterion_3),
        ("4 p^2 q family", criterion_4),
        ("5 local rings", criterion_5),
        ("6 structure", criterion_6),
        ("7 complement identity", criterion_7),
        ("8 determinism and round trip", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
