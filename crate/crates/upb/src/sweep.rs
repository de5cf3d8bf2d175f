//! Seeded sampling sweeps: `verify`, `theorem` and `scan`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use upb_core::catalog::{self, Theorem};
use upb_core::extendibility::{
    decide_upb, scan_feasible_all_sizes, scan_feasible_singular, scan_singular_subsets, CounterexampleTemplate,
    SingularScan,
};
use upb_core::linalg::DEFAULT_RANK_TOL;
use upb_core::merge::{merge, merged_party_matrix, MergePlan};
use upb_core::rng::{sample_assignment, SamplingParams};
use upb_core::symbolic::{realize_grid, AngleAssignment, ProductSet, SymbolGrid};

use crate::formats::{load_grid, parse_merge, read_assignment, AssignmentFile, Pair};
use crate::report::{product_record, verdict_name, Header, Outcome, Stopwatch, Timings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Upb,
    Extendible,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Grid file or bundled fixture name (eq00, eq01, eq03, eq04).
    #[arg(long)]
    pub grid: String,
    /// Pair of parties to merge, e.g. `AC`; omit for the unmerged set.
    #[arg(long)]
    pub merge: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative singular-value tolerance of the rank decisions.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    /// Fixed angle assignment instead of sampling; implies one sample.
    #[arg(long)]
    pub angles: Option<PathBuf>,
    /// Verdict every sample must reach.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    #[serde(skip)]
    pub timings: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TheoremArgs {
    /// 1 (four qubits, eq01) or 2 (five qubits, eq04).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub number: u8,
    /// Defaults to 50 for theorem 1 and 20 for theorem 2.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub timings: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub merge: String,
    /// 1-based column labels to draw subsets from, e.g. `2-8` or `1,3,5-7`.
    /// Defaults to every column. Ignored with `--feasible`.
    #[arg(long)]
    pub columns: Option<String>,
    /// Grid rows (1-based) supplying columns 1, 2, ... of the merged-party
    /// matrix, e.g. `4,2,5,6,3,1,7,8`. Defaults to grid order.
    #[arg(long)]
    pub rows: Option<String>,
    /// Subset size. Defaults to the merged dimension, or to every size
    /// with `--feasible`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Only report subsets whose complement the singleton parties can
    /// annihilate, singular meaning rank below the merged dimension.
    #[arg(long)]
    pub feasible: bool,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Singularity threshold on the normalized measure.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub angles: Option<PathBuf>,
    /// Subsets every sample must report, e.g. `2,3,5,7;2,4,5,8`, or `none`.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub sample: Option<usize>,
    pub merge: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateRecord {
    pub orthogonal: bool,
    pub max_overlap: f64,
    /// Members (1-based) left for the merged party to annihilate.
    pub residual_members: Vec<usize>,
    pub residual_matches_template: bool,
    pub vector: Vec<Vec<Pair>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergeVerdict {
    pub verdict: String,
    pub assignments_checked: u64,
    pub distinct_groups: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<Pair>>>,
    /// Party through which the witness is orthogonal to each member.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_assignment: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_max_overlap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template: Option<TemplateRecord>,
}

impl MergeVerdict {
    pub fn is_upb(&self) -> bool {
        self.verdict == "UPB"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub index: usize,
    pub assignment: AssignmentFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySample {
    pub index: usize,
    pub assignment: AssignmentFile,
    #[serde(flatten)]
    pub result: MergeVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub config: VerifyArgs,
    pub grid_source: String,
    pub merge: String,
    pub samples: Vec<VerifySample>,
    /// `UPB` or `extendible` when all samples agree, otherwise `mixed`.
    pub aggregate: String,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MergeSummary {
    pub merge: String,
    pub claim: String,
    pub aggregate: String,
    pub upb_samples: usize,
    pub extendible_samples: usize,
    /// Samples whose counterexample template checked out.
    pub templates_verified: usize,
    pub verdicts: Vec<MergeVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    #[serde(flatten)]
    pub header: Header,
    pub config: TheoremArgs,
    pub grid: String,
    pub samples: Vec<Sample>,
    pub merges: Vec<MergeSummary>,
    /// `matches` when every merge reproduces its claim in every sample.
    pub aggregate: String,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub k: usize,
    pub singular_subsets: Vec<Vec<usize>>,
    pub examined: usize,
    pub largest_singular_measure: Option<f64>,
    pub smallest_regular_measure: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub index: usize,
    pub assignment: AssignmentFile,
    pub scans: Vec<ScanRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    #[serde(flatten)]
    pub header: Header,
    pub config: ScanArgs,
    pub grid_source: String,
    /// Labels the subsets are drawn from (1-based).
    pub columns: Vec<usize>,
    /// Grid row (1-based) behind each column label.
    pub rows: Vec<usize>,
    pub samples: Vec<ScanSample>,
    /// Subsets singular in every sample.
    pub intersection: Vec<Vec<usize>>,
    /// Subsets singular in at least one sample.
    pub union: Vec<Vec<usize>>,
    pub discrepancies: Vec<Discrepancy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// The catalog theorem whose grid equals `grid`, if any.
pub fn theorem_for(grid: &SymbolGrid) -> Option<&'static Theorem> {
    [&catalog::THEOREM_1, &catalog::THEOREM_2]
        .into_iter()
        .find(|t| t.grid() == *grid)
}

/// The assignments a sweep runs on: the fixed file, or one seeded draw per
/// sample on its own stream.
fn assignments(grid: &SymbolGrid, samples: usize, seed: u64, fixed: Option<&PathBuf>) -> Result<Vec<AngleAssignment>> {
    ensure!(samples >= 1, "--samples must be at least 1");
    match fixed {
        Some(path) => {
            let a = read_assignment(path)?;
            for key in grid.angle_keys() {
                ensure!(a.get(&key).is_some(), "assignment {} has no angle for {key}", path.display());
            }
            Ok(vec![a])
        }
        None => Ok((0..samples)
            .map(|i| sample_assignment(grid, &SamplingParams::default(), seed, i as u64))
            .collect()),
    }
}

fn check_tol(tol: f64) -> Result<()> {
    ensure!(tol > 0.0 && tol.is_finite(), "--tol must be positive");
    Ok(())
}

/// Runs the extendibility decision on `set` merged by `plan`, plus the
/// counterexample template when one is given and the set is extendible.
pub fn evaluate_merge(
    set: &ProductSet,
    angles: &AngleAssignment,
    plan: &MergePlan,
    tol: f64,
    template: Option<&CounterexampleTemplate>,
) -> Result<MergeVerdict> {
    let merged = merge(set, plan)?;
    let v = decide_upb(&merged, tol)?;
    let template = match (v.is_upb, template) {
        (false, Some(t)) => {
            let c = upb_core::extendibility::verify_counterexample(set, angles, t)
                .with_context(|| format!("template for merge {plan}"))?;
            Some(TemplateRecord {
                orthogonal: c.orthogonal,
                max_overlap: c.max_overlap,
                residual_members: c.residual_members.iter().map(|k| k + 1).collect(),
                residual_matches_template: c.residual_matches_template,
                vector: product_record(&c.vector),
            })
        }
        _ => None,
    };
    Ok(MergeVerdict {
        verdict: verdict_name(v.is_upb).into(),
        assignments_checked: v.assignments_checked,
        distinct_groups: v.distinct_groups,
        witness: v.witness.as_ref().map(product_record),
        witness_assignment: v.witness_assignment.map(|a| a.0),
        witness_max_overlap: v.witness_max_overlap,
        template,
    })
}

fn aggregate(verdicts: &[&MergeVerdict]) -> String {
    let upb = verdicts.iter().filter(|v| v.is_upb()).count();
    if upb == verdicts.len() {
        "UPB".into()
    } else if upb == 0 {
        "extendible".into()
    } else {
        "mixed".into()
    }
}

fn template_discrepancy(v: &MergeVerdict) -> Option<String> {
    let t = v.template.as_ref()?;
    if !t.orthogonal {
        Some(format!("counterexample template overlap {:.3e} exceeds tolerance", t.max_overlap))
    } else {
        None
    }
}

pub fn run_verify(args: &VerifyArgs) -> Result<Outcome> {
    let clock = Stopwatch::start(args.timings);
    check_tol(args.tol)?;
    let (grid, grid_source) = load_grid(&args.grid)?;
    let plan = parse_merge(grid.cols(), args.merge.as_deref())?;
    let merge_name = plan.to_string();
    let template = theorem_for(&grid).and_then(|t| t.template(&merge_name));
    let draws = assignments(&grid, args.samples, args.seed, args.angles.as_ref())?;

    let samples: Vec<VerifySample> = draws
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let set = realize_grid(&grid, a)?;
            Ok(VerifySample {
                index,
                assignment: a.into(),
                result: evaluate_merge(&set, a, &plan, args.tol, template.as_ref())?,
            })
        })
        .collect::<Result<_>>()?;

    let mut discrepancies = Vec::new();
    for s in &samples {
        if let Some(e) = args.expect {
            if s.result.is_upb() != (e == Expect::Upb) {
                discrepancies.push(Discrepancy {
                    sample: Some(s.index),
                    merge: Some(merge_name.clone()),
                    message: format!("expected {:?}, found {}", e, s.result.verdict).to_lowercase(),
                });
            }
        }
        if let Some(message) = template_discrepancy(&s.result) {
            discrepancies.push(Discrepancy {
                sample: Some(s.index),
                merge: Some(merge_name.clone()),
                message,
            });
        }
    }
    let aggregate = aggregate(&samples.iter().map(|s| &s.result).collect::<Vec<_>>());
    let summary = format!(
        "{} merged {}: {} over {} sample(s), {} discrepancies",
        grid_source,
        merge_name,
        aggregate,
        samples.len(),
        discrepancies.len()
    );
    let ok = discrepancies.is_empty();
    let report = VerifyReport {
        header: Header::new("verify"),
        config: args.clone(),
        grid_source,
        merge: merge_name,
        samples,
        aggregate,
        discrepancies,
        timings: clock.finish(),
    };
    Outcome::json(&report, summary, ok)
}

pub fn theorem_report(args: &TheoremArgs) -> Result<TheoremReport> {
    let clock = Stopwatch::start(args.timings);
    check_tol(args.tol)?;
    let theorem = catalog::theorem(args.number).context("unknown theorem")?;
    let samples = args.samples.unwrap_or(if args.number == 1 { 50 } else { 20 });
    let grid = theorem.grid();
    let plans = theorem.plans();
    let templates: Vec<Option<CounterexampleTemplate>> =
        plans.iter().map(|p| theorem.template(&p.to_string())).collect();
    let draws = assignments(&grid, samples, args.seed, None)?;

    let per_sample: Vec<Vec<MergeVerdict>> = draws
        .par_iter()
        .map(|a| {
            let set = realize_grid(&grid, a)?;
            plans
                .iter()
                .zip(&templates)
                .map(|(p, t)| evaluate_merge(&set, a, p, args.tol, t.as_ref()))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut discrepancies = Vec::new();
    let mut merges = Vec::new();
    for (m, plan) in plans.iter().enumerate() {
        let name = plan.to_string();
        let claim = theorem.claim(&name).expect("plans come from the claims");
        let verdicts: Vec<MergeVerdict> = per_sample.iter().map(|v| v[m].clone()).collect();
        for (index, v) in verdicts.iter().enumerate() {
            if v.is_upb() != claim {
                discrepancies.push(Discrepancy {
                    sample: Some(index),
                    merge: Some(name.clone()),
                    message: format!("claimed {}, found {}", verdict_name(claim), v.verdict),
                });
            }
            if let Some(message) = template_discrepancy(v) {
                discrepancies.push(Discrepancy {
                    sample: Some(index),
                    merge: Some(name.clone()),
                    message,
                });
            }
        }
        if !claim && templates[m].is_none() {
            discrepancies.push(Discrepancy {
                sample: None,
                merge: Some(name.clone()),
                message: "no counterexample template on record".into(),
            });
        }
        merges.push(MergeSummary {
            merge: name,
            claim: verdict_name(claim).into(),
            aggregate: aggregate(&verdicts.iter().collect::<Vec<_>>()),
            upb_samples: verdicts.iter().filter(|v| v.is_upb()).count(),
            extendible_samples: verdicts.iter().filter(|v| !v.is_upb()).count(),
            templates_verified: verdicts
                .iter()
                .filter(|v| v.template.as_ref().is_some_and(|t| t.orthogonal))
                .count(),
            verdicts,
        });
    }

    Ok(TheoremReport {
        header: Header::new("theorem"),
        config: args.clone(),
        grid: theorem.grid_name.into(),
        samples: draws
            .iter()
            .enumerate()
            .map(|(index, a)| Sample {
                index,
                assignment: a.into(),
            })
            .collect(),
        aggregate: if discrepancies.is_empty() { "matches" } else { "mismatch" }.into(),
        merges,
        discrepancies,
        timings: clock.finish(),
    })
}

pub fn run_theorem(args: &TheoremArgs) -> Result<Outcome> {
    let report = theorem_report(args)?;
    let mut summary = format!("theorem {} on {}, {} samples\n", args.number, report.grid, report.samples.len());
    for m in &report.merges {
        summary.push_str(&format!(
            "  {}: claim {:<10} found {:<10} templates verified {}/{}\n",
            m.merge, m.claim, m.aggregate, m.templates_verified, m.extendible_samples
        ));
    }
    summary.push_str(&format!("{} ({} discrepancies)", report.aggregate, report.discrepancies.len()));
    let ok = report.discrepancies.is_empty();
    Outcome::json(&report, summary, ok)
}

/// `2-8`, `1,3,5-7`: 1-based labels, kept in the given order.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| -> Result<usize> {
            let n: usize = s.trim().parse().with_context(|| format!("bad index `{s}`"))?;
            ensure!(n >= 1, "indices are 1-based, found 0");
            Ok(n)
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                ensure!(a <= b, "empty range `{part}`");
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    ensure!(!out.is_empty(), "empty index list");
    Ok(out)
}

/// `2,3,5,7;2,4,5,8` or `none`.
pub fn parse_subsets(text: &str) -> Result<BTreeSet<Vec<usize>>> {
    if text.trim().eq_ignore_ascii_case("none") {
        return Ok(BTreeSet::new());
    }
    text.split(';')
        .map(|s| {
            let mut v = parse_index_list(s)?;
            v.sort_unstable();
            Ok(v)
        })
        .collect()
}

fn scan_record(scan: &SingularScan, label: impl Fn(usize) -> usize) -> ScanRecord {
    let (largest_singular_measure, smallest_regular_measure) = scan.gap();
    ScanRecord {
        k: scan.subset_size,
        singular_subsets: scan
            .singular_subsets
            .iter()
            .map(|s| s.iter().map(|&c| label(c)).collect())
            .collect(),
        examined: scan.measures.len(),
        largest_singular_measure,
        smallest_regular_measure,
    }
}

pub fn scan_report(args: &ScanArgs) -> Result<ScanReport> {
    let clock = Stopwatch::start(args.timings);
    check_tol(args.tol)?;
    let (grid, grid_source) = load_grid(&args.grid)?;
    let plan = parse_merge(grid.cols(), Some(&args.merge))?;
    let (i, j) = plan.merged_pair().context("scan needs a merge of two parties")?;
    let m = grid.rows();
    let rows = match &args.rows {
        Some(r) => parse_index_list(r)?,
        None => (1..=m).collect(),
    };
    {
        let mut sorted = rows.clone();
        sorted.sort_unstable();
        ensure!(sorted == (1..=m).collect::<Vec<_>>(), "--rows must be a permutation of 1..={m}");
    }
    if args.feasible && (args.columns.is_some() || args.rows.is_some()) {
        bail!("--feasible scans all members; --columns and --rows do not apply");
    }
    let columns = match &args.columns {
        Some(c) => parse_index_list(c)?,
        None => (1..=m).collect(),
    };
    ensure!(columns.iter().all(|&c| c <= m), "column labels run from 1 to {m}");
    let expect = args.expect.as_deref().map(parse_subsets).transpose()?;
    let draws = assignments(&grid, args.samples, args.seed, args.angles.as_ref())?;
    let row_order: Vec<usize> = rows.iter().map(|r| r - 1).collect();

    let samples: Vec<ScanSample> = draws
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let set = realize_grid(&grid, a)?;
            let scans = if args.feasible {
                let raw = match args.k {
                    Some(k) => vec![scan_feasible_singular(&set, &plan, k, args.tol)?],
                    None => scan_feasible_all_sizes(&set, &plan, args.tol)?,
                };
                raw.iter().map(|s| scan_record(s, |c| c + 1)).collect()
            } else {
                let mat = merged_party_matrix(&set, &plan)?.select_columns(&row_order);
                let k = args.k.unwrap_or(set.dims()[i] * set.dims()[j]);
                let cols0: Vec<usize> = columns.iter().map(|c| c - 1).collect();
                let scan = scan_singular_subsets(&mat, &cols0, k, args.tol)?;
                vec![scan_record(&scan, |c| c + 1)]
            };
            Ok(ScanSample {
                index,
                assignment: a.into(),
                scans,
            })
        })
        .collect::<Result<_>>()?;

    let found: Vec<BTreeSet<Vec<usize>>> = samples
        .iter()
        .map(|s| s.scans.iter().flat_map(|r| r.singular_subsets.iter().cloned()).collect())
        .collect();
    let union: BTreeSet<Vec<usize>> = found.iter().flatten().cloned().collect();
    let intersection: BTreeSet<Vec<usize>> = union
        .iter()
        .filter(|s| found.iter().all(|f| f.contains(*s)))
        .cloned()
        .collect();

    let mut discrepancies = Vec::new();
    if let Some(expected) = &expect {
        for (index, f) in found.iter().enumerate() {
            if f != expected {
                let extra: Vec<_> = f.difference(expected).collect();
                let missing: Vec<_> = expected.difference(f).collect();
                discrepancies.push(Discrepancy {
                    sample: Some(index),
                    merge: Some(plan.to_string()),
                    message: format!("unexpected singular subsets {extra:?}, missing {missing:?}"),
                });
            }
        }
    }

    Ok(ScanReport {
        header: Header::new("scan"),
        config: args.clone(),
        grid_source,
        columns: if args.feasible { (1..=m).collect() } else { columns },
        rows,
        samples,
        intersection: intersection.into_iter().collect(),
        union: union.into_iter().collect(),
        discrepancies,
        timings: clock.finish(),
    })
}

pub fn run_scan(args: &ScanArgs) -> Result<Outcome> {
    let report = scan_report(args)?;
    let summary = format!(
        "{} merged {}: {} sample(s), singular in every sample {:?}, in some sample {:?}",
        report.grid_source,
        args.merge,
        report.samples.len(),
        report.intersection,
        report.union
    );
    let ok = report.discrepancies.is_empty();
    Outcome::json(&report, summary, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_list("2-8").unwrap(), (2..=8).collect::<Vec<_>>());
        assert_eq!(parse_index_list("1, 3,5-6").unwrap(), vec![1, 3, 5, 6]);
        assert!(parse_index_list("0").is_err());
        assert!(parse_index_list("5-3").is_err());
        let s = parse_subsets("7,5,3,2;2,4,5,8").unwrap();
        assert!(s.contains(&vec![2, 3, 5, 7]));
        assert!(parse_subsets("none").unwrap().is_empty());
    }

    #[test]
    fn catalog_grids_are_recognized() {
        let (g, _) = load_grid("eq04").unwrap();
        assert_eq!(theorem_for(&g).unwrap().number, 2);
        let (g, _) = load_grid("eq00").unwrap();
        assert!(theorem_for(&g).is_none());
    }

    #[test]
    fn verify_reports_expectation_failures() {
        let mut args = VerifyArgs {
            grid: "eq01".into(),
            merge: Some("CD".into()),
            samples: 2,
            seed: 1,
            tol: DEFAULT_RANK_TOL,
            angles: None,
            expect: Some(Expect::Extendible),
            out: None,
            timings: false,
        };
        let ok = run_verify(&args).unwrap();
        assert!(ok.ok, "{}", ok.summary);
        assert!(ok.body.contains("\"template\""));
        args.expect = Some(Expect::Upb);
        assert!(!run_verify(&args).unwrap().ok);
    }
}
