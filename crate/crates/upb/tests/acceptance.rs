//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line straight
//! to stdout, so the lines show up even when the harness captures output.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use upb::artifacts::{state_file, StateArgs};
use upb::sweep::{scan_report, theorem_report, ScanArgs, TheoremArgs};
use upb_core::catalog::{C_COLUMN_ROWS, PRINTED_SINGULAR_ARRAYS};
use upb_core::extendibility::{decide_upb, scan_singular_subsets};
use upb_core::fixtures;
use upb_core::gme::{
    alternating_maximize, alternating_maximize_seeded, bound_report, merge_product, overlap, DeltaParams, GmeOptions,
    TargetFunction, TARGET_MERGE,
};
use upb_core::linalg::DEFAULT_RANK_TOL;
use upb_core::merge::{merge, merged_party_matrix, MergePlan};
use upb_core::oracle::{grid_search_extendible, random_small_set};
use upb_core::ppt::build_state;
use upb_core::rng::{sample_assignment, stream_rng, SamplingParams};
use upb_core::symbolic::{apply_script, column_permutation, map_assignment, parse_grid, parse_script, realize_grid};

/// Criteria that cannot hold as stated. They still run at full strength
/// and print FAIL; the suite asserts that they keep failing, so a change
/// that makes one pass forces this list to be revisited.
///
/// 3: columns c4..c7 span a three-dimensional space for every choice of
/// angles, so (4,5,6,7) is a fourth singular array next to the three
/// expected ones.
const KNOWN_FAILURES: &[u32] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn theorem_criterion(number: u8, samples: usize, budget: Duration) -> Outcome {
    let start = Instant::now();
    let report = theorem_report(&TheoremArgs {
        number,
        samples: Some(samples),
        seed: 20_240_101 + number as u64,
        tol: DEFAULT_RANK_TOL,
        out: None,
        timings: false,
    })
    .expect("theorem sweep runs");
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for m in &report.merges {
        let claim_upb = m.claim == "UPB";
        let verdicts_ok = if claim_upb {
            m.upb_samples == samples
        } else {
            m.extendible_samples == samples
        };
        let templates_ok = claim_upb
            || m
                .verdicts
                .iter()
                .all(|v| v.template.as_ref().is_some_and(|t| t.orthogonal && t.max_overlap <= 1e-10));
        if !(verdicts_ok && templates_ok) {
            bad.push(format!("{} ({} UPB / {} extendible)", m.merge, m.upb_samples, m.extendible_samples));
        }
    }
    let worst_template = report
        .merges
        .iter()
        .flat_map(|m| m.verdicts.iter())
        .filter_map(|v| v.template.as_ref().map(|t| t.max_overlap))
        .fold(0.0, f64::max);
    let summary: Vec<String> = report.merges.iter().map(|m| format!("{}={}", m.merge, m.aggregate)).collect();
    outcome(
        bad.is_empty() && elapsed < budget,
        format!(
            "{samples} samples, {}; worst template overlap {worst_template:.1e}; {:.2} s (budget {} s){}",
            summary.join(" "),
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if bad.is_empty() { String::new() } else { format!("; off: {}", bad.join(", ")) }
        ),
    )
}

fn criterion_1() -> Outcome {
    theorem_criterion(1, 50, Duration::from_secs(10))
}

fn criterion_2() -> Outcome {
    theorem_criterion(2, 20, Duration::from_secs(60))
}

fn criterion_3() -> Outcome {
    let grid = parse_grid(fixtures::EQ01).unwrap();
    let plan = MergePlan::parse(4, "AC").unwrap();
    let order: Vec<usize> = C_COLUMN_ROWS.iter().map(|r| r - 1).collect();
    let expected: BTreeSet<Vec<usize>> = PRINTED_SINGULAR_ARRAYS.iter().map(|a| a.to_vec()).collect();
    let columns: Vec<usize> = (1..8).collect(); // c2..c8, 0-based
    let mut failing_samples = 0;
    let mut extra: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut worst_expected: f64 = 0.0;
    let mut best_other = f64::INFINITY;
    for s in 0..20 {
        let a = sample_assignment(&grid, &SamplingParams::default(), 303, s);
        let mat = merged_party_matrix(&realize_grid(&grid, &a).unwrap(), &plan)
            .unwrap()
            .select_columns(&order);
        let scan = scan_singular_subsets(&mat, &columns, 4, 1e-10).unwrap();
        let mut ok = scan.measures.len() == 35;
        for (subset, measure) in &scan.measures {
            let label: Vec<usize> = subset.iter().map(|c| c + 1).collect();
            if expected.contains(&label) {
                worst_expected = worst_expected.max(*measure);
                ok &= *measure <= 1e-10;
            } else {
                best_other = best_other.min(*measure);
                if *measure <= 1e-4 {
                    ok = false;
                    extra.insert(label);
                }
            }
        }
        failing_samples += usize::from(!ok);
    }
    outcome(
        failing_samples == 0,
        format!(
            "20 samples, expected arrays max |det| {worst_expected:.1e}, other subsets min |det| {best_other:.1e}; \
             {failing_samples} samples off; additional singular arrays {extra:?}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut found = Vec::new();
    for m in ["AC", "AD", "AE", "BC", "BD", "BE"] {
        let report = scan_report(&ScanArgs {
            grid: "eq04".into(),
            merge: m.into(),
            columns: None,
            rows: None,
            k: None,
            feasible: true,
            samples: 20,
            seed: 404,
            tol: 1e-10,
            angles: None,
            expect: Some("none".into()),
            out: None,
            timings: false,
        })
        .expect("scan runs");
        if !report.union.is_empty() {
            found.push(format!("{m}: {:?}", report.union));
        }
    }
    outcome(
        found.is_empty(),
        format!(
            "six merges x 20 samples, all subset sizes; feasible singular subsets: {}",
            if found.is_empty() { "none".to_string() } else { found.join("; ") }
        ),
    )
}

fn criterion_5() -> Outcome {
    let cases = [("eq01", Some("AB"), 8, 3), ("eq00", None, 8, 7), ("eq04", Some("AC"), 24, 7)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (grid, merge, rank, cuts) in cases {
        let f = state_file(&StateArgs {
            grid: grid.into(),
            merge: merge.map(Into::into),
            angles: None,
            seed: 505,
            tol: DEFAULT_RANK_TOL,
            out: None,
        })
        .expect("state builds");
        let c = &f.certifications;
        let trace = c.trace.unwrap();
        let min = c.min_eigenvalue.unwrap();
        let ppt = c.cuts.iter().filter(|k| k.ppt).count();
        let ok = (trace - 1.0).abs() <= 1e-10
            && min >= -1e-10
            && c.rank == Some(rank)
            && c.cuts.len() == cuts
            && ppt == cuts
            && c.entangled == Some(true);
        pass &= ok;
        parts.push(format!(
            "{grid}{}: trace-1 {:.1e}, min eig {min:.1e}, rank {}, PPT {ppt}/{}",
            merge.map_or(String::new(), |m| format!("/{m}")),
            trace - 1.0,
            c.rank.unwrap(),
            c.cuts.len()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let grid = parse_grid(fixtures::EQ01).unwrap();
    let draws: Vec<_> = (0..10)
        .map(|s| sample_assignment(&grid, &SamplingParams::default(), 606, s))
        .collect();

    // spot values against their closed forms
    let closed_dev = draws
        .iter()
        .map(|a| bound_report(a, None).unwrap().closed_form_deviation)
        .fold(0.0, f64::max);

    // overlap with the state against the target function on a π/20 grid;
    // ν₁, ν₂, ν₃ only flip a sign past π, so [0, π) covers them
    let t = TargetFunction::new(&draws[0]).unwrap();
    let dm = t.complement_dim() as f64;
    let h = PI / 20.0;
    let mut grid_dev: f64 = 0.0;
    let mut points = 0usize;
    for i1 in 0..20 {
        for i2 in 0..20 {
            for i3 in 0..20 {
                for j1 in 0..40 {
                    for j2 in 0..40 {
                        let p = DeltaParams::new([i1 as f64 * h, i2 as f64 * h, i3 as f64 * h, j1 as f64 * h, j2 as f64 * h]);
                        let lhs = overlap(&t.state, &p.product()).unwrap();
                        grid_dev = grid_dev.max((lhs - (1.0 - t.eval(&p)) / dm).abs());
                        points += 1;
                    }
                }
            }
        }
    }

    let plan = MergePlan::parse(4, TARGET_MERGE).unwrap();
    let opts = GmeOptions::default();
    let mut optimizer_gap = f64::INFINITY;
    let mut seeding_gap = f64::INFINITY;
    for a in &draws {
        let b = bound_report(a, None).unwrap();
        let t = TargetFunction::new(a).unwrap();
        let rho = &t.state;
        let est = alternating_maximize(rho, &opts).unwrap();
        optimizer_gap = optimizer_gap.min(est.best_overlap - (1.0 - b.m) / dm);

        let alpha = build_state(&realize_grid(&grid, a).unwrap(), DEFAULT_RANK_TOL).unwrap();
        let fine = alternating_maximize(&alpha, &opts).unwrap();
        let coarse = merge_product(&fine.best_product, &plan).unwrap();
        let direct = overlap(rho, &coarse).unwrap();
        let seeded = alternating_maximize_seeded(rho, &opts, &[coarse]).unwrap();
        seeding_gap = seeding_gap
            .min(direct - fine.best_overlap)
            .min(seeded.best_overlap - fine.best_overlap);
    }

    let pass = closed_dev <= 1e-12 && grid_dev <= 1e-12 && optimizer_gap >= -1e-9 && seeding_gap >= -1e-12;
    outcome(
        pass,
        format!(
            "closed-form deviation {closed_dev:.1e}; overlap vs (1-f)/{dm} on {points} grid points {grid_dev:.1e}; \
             min best_overlap-(1-M)/{dm} {optimizer_gap:.3e}; min merged-unmerged overlap {seeding_gap:.1e}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let before = parse_grid(fixtures::EQ01).unwrap();
    let script = parse_script(fixtures::CASE6_SCRIPT).unwrap();
    let after = apply_script(&before, &script).unwrap();
    let equal = after == parse_grid(fixtures::EQ03).unwrap();
    let pos = column_permutation(4, &script);
    let mut mismatches = Vec::new();
    for s in 0..10 {
        let a = sample_assignment(&before, &SamplingParams::default(), 707, s);
        let b = map_assignment(&a, &script).unwrap();
        let set_before = realize_grid(&before, &a).unwrap();
        let set_after = realize_grid(&after, &b).unwrap();
        for plan in MergePlan::all_pairs(4) {
            let (i, j) = plan.merged_pair().unwrap();
            let moved = MergePlan::pair(4, pos[i], pos[j]).unwrap();
            let v0 = decide_upb(&merge(&set_before, &plan).unwrap(), DEFAULT_RANK_TOL).unwrap().is_upb;
            let v1 = decide_upb(&merge(&set_after, &moved).unwrap(), DEFAULT_RANK_TOL).unwrap().is_upb;
            if v0 != v1 {
                mismatches.push(format!("sample {s} {plan}->{moved}"));
            }
        }
    }
    outcome(
        equal && mismatches.is_empty(),
        format!(
            "grid equality {equal}; 6 merges x 10 samples, verdict mismatches {}",
            if mismatches.is_empty() { "none".to_string() } else { mismatches.join(", ") }
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = stream_rng(808, 0);
    let mut disagreements = 0;
    let mut upb = 0;
    for _ in 0..200 {
        let set = random_small_set(&mut rng);
        let decided = decide_upb(&set, DEFAULT_RANK_TOL).unwrap().is_upb;
        let oracle = !grid_search_extendible(&set, 200, 0.05);
        upb += usize::from(decided);
        disagreements += usize::from(decided != oracle);
    }
    outcome(
        disagreements == 0,
        format!("200 sets ({upb} UPB), {disagreements} disagreements with the grid oracle"),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_upb");
    let runs: [&[&str]; 4] = [
        &["theorem", "1", "--samples", "4", "--seed", "99"],
        &["verify", "--grid", "eq04", "--merge", "CE", "--samples", "3", "--seed", "5"],
        &["scan", "--grid", "eq01", "--merge", "AC", "--rows", "4,2,5,6,3,1,7,8", "--columns", "2-8", "--samples", "3"],
        &["bound", "--seed", "8", "--grid-steps", "10"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let mut bodies = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{}-{k}.json", args[0]));
            let status = Command::new(bin).args(args).arg("--out").arg(&out).output().unwrap();
            assert!(status.status.code().is_some_and(|c| c <= 1), "{args:?} errored");
            bodies.push(std::fs::read(&out).unwrap());
        }
        if bodies[0] != bodies[1] {
            differing.push(args[0]);
        }
    }
    outcome(
        differing.is_empty(),
        format!("theorem, verify, scan, bound each run twice; differing reports: {differing:?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut stdout = std::io::stdout();
    let mut unexpected = Vec::new();
    for (n, run) in criteria {
        let o = run();
        let line = format!("{} criterion {n}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        stdout.write_all(line.as_bytes()).unwrap();
        if o.pass == KNOWN_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    stdout.flush().unwrap();
    assert!(
        unexpected.is_empty(),
        "criteria {unexpected:?} deviate from the recorded outcomes (known failures {KNOWN_FAILURES:?})"
    );
}
