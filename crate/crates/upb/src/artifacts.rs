//! Single-shot artifact commands: `state`, `gme`, `bound` and `transform`.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use upb_core::gme::{alternating_maximize, bound_report, GmeOptions, TARGET_MERGE};
use upb_core::linalg::DEFAULT_RANK_TOL;
use upb_core::merge::merge;
use upb_core::ppt::{build_state, certify};
use upb_core::rng::{sample_assignment, SamplingParams};
use upb_core::symbolic::{apply_script, map_assignment, parse_grid, realize_grid, AngleAssignment, SymbolGrid};
use upb_core::fixtures;

use crate::formats::{
    load_grid, load_script, parse_merge, read_assignment, read_state, write_json, AssignmentFile, CertificationRecord,
    Pair, StateFile, StateProvenance,
};
use crate::report::{product_record, Header, Outcome, Stopwatch, Timings};

/// Slack allowed when comparing a closed form or a grid minimum against
/// the spot values.
const BOUND_TOL: f64 = 1e-12;

fn angles_for(grid: &SymbolGrid, angles: Option<&PathBuf>, seed: u64) -> Result<AngleAssignment> {
    let a = match angles {
        Some(p) => read_assignment(p)?,
        None => sample_assignment(grid, &SamplingParams::default(), seed, 0),
    };
    for key in grid.angle_keys() {
        ensure!(a.get(&key).is_some(), "assignment has no angle for {key}");
    }
    Ok(a)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct StateArgs {
    #[arg(long)]
    pub grid: String,
    /// Pair of parties to merge; omit for the unmerged set.
    #[arg(long)]
    pub merge: Option<String>,
    /// Angle assignment file; without it one is drawn from `--seed`.
    #[arg(long)]
    pub angles: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

pub fn state_file(args: &StateArgs) -> Result<StateFile> {
    let (grid, grid_source) = load_grid(&args.grid)?;
    let plan = parse_merge(grid.cols(), args.merge.as_deref())?;
    let angles = angles_for(&grid, args.angles.as_ref(), args.seed)?;
    let set = merge(&realize_grid(&grid, &angles)?, &plan)?;
    let rho = certify(build_state(&set, args.tol).context("building the complement state")?)?;
    Ok(StateFile::new(
        &rho,
        Some(StateProvenance {
            grid_source,
            grid: grid.to_string(),
            merge: plan.to_string(),
            assignment: AssignmentFile::from(&angles),
        }),
    ))
}

fn certified(c: &CertificationRecord) -> bool {
    c.unit_trace == Some(true) && c.psd == Some(true) && c.ppt_all_cuts == Some(true)
}

pub fn run_state(args: &StateArgs) -> Result<Outcome> {
    let file = state_file(args)?;
    let c = &file.certifications;
    let summary = format!(
        "state on {:?} ({}), trace {:.12}, min eigenvalue {:.3e}, rank {}, PPT on {}/{} cuts, entangled {}",
        file.dims,
        file.party_names.join(","),
        c.trace.unwrap_or(f64::NAN),
        c.min_eigenvalue.unwrap_or(f64::NAN),
        c.rank.map_or("?".into(), |r| r.to_string()),
        c.cuts.iter().filter(|k| k.ppt).count(),
        c.cuts.len(),
        c.entangled.map_or("unknown".into(), |e| e.to_string()),
    );
    let ok = certified(c);
    Outcome::json(&file, summary, ok)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GmeArgs {
    /// State file written by `state`.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_sweeps: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub conv_tol: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub timings: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GmeReport {
    #[serde(flatten)]
    pub header: Header,
    pub config: GmeArgs,
    pub dims: Vec<usize>,
    pub party_names: Vec<String>,
    pub state_provenance: Option<StateProvenance>,
    /// Largest `⟨δ|σ|δ⟩` found; a lower bound on the true maximum.
    pub best_overlap: f64,
    /// `−log₂(best_overlap)`; an upper bound on the geometric measure.
    pub gme_value: f64,
    pub best_restart: Option<usize>,
    pub sweeps: usize,
    pub max_decrease: f64,
    pub best_product: Vec<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Overlap drops per sweep above this are reported; roundoff stays below.
pub const SWEEP_DECREASE_TOL: f64 = 1e-13;

pub fn gme_report(args: &GmeArgs) -> Result<GmeReport> {
    let clock = Stopwatch::start(args.timings);
    ensure!(args.restarts >= 1, "--restarts must be at least 1");
    let file = read_state(&args.state)?;
    let rho = file.to_operator()?;
    let est = alternating_maximize(
        &rho,
        &GmeOptions {
            restarts: args.restarts,
            max_sweeps: args.max_sweeps,
            conv_tol: args.conv_tol,
            seed: args.seed,
        },
    )?;
    Ok(GmeReport {
        header: Header::new("gme"),
        config: args.clone(),
        dims: file.dims.clone(),
        party_names: file.party_names.clone(),
        state_provenance: file.provenance.clone(),
        best_overlap: est.best_overlap,
        gme_value: est.gme_value,
        best_restart: est.best_restart,
        sweeps: est.sweeps,
        max_decrease: est.max_decrease,
        best_product: product_record(&est.best_product),
        timings: clock.finish(),
    })
}

pub fn run_gme(args: &GmeArgs) -> Result<Outcome> {
    let report = gme_report(args)?;
    let summary = format!(
        "best overlap {:.12} over {} restarts, G <= {:.9}",
        report.best_overlap, args.restarts, report.gme_value
    );
    let ok = report.max_decrease <= SWEEP_DECREASE_TOL;
    Outcome::json(&report, summary, ok)
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BoundArgs {
    /// Must be the eq01 grid; the target function is defined for it only.
    #[arg(long, default_value = "eq01")]
    pub grid: String,
    #[arg(long, default_value = TARGET_MERGE)]
    pub merge: String,
    #[arg(long)]
    pub angles: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also minimize `f` over a grid with this many steps per angle.
    #[arg(long)]
    pub grid_steps: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpotRecord {
    pub name: String,
    pub params: [f64; 5],
    pub value: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundFile {
    #[serde(flatten)]
    pub header: Header,
    pub config: BoundArgs,
    pub assignment: AssignmentFile,
    pub spot_values: Vec<SpotRecord>,
    /// `(min, max)` of `f` along `(ν₁, 0, π/2, 0, 0)`.
    pub family_range: (f64, f64),
    pub family_closed_form: f64,
    /// Minimum of the three spot values.
    #[serde(rename = "M")]
    pub m: f64,
    /// `−log₂(1 − M)`.
    pub paper_bound: f64,
    /// `−log₂((1 − M)/(D − m))`.
    pub normalized_bound: f64,
    pub complement_dim: usize,
    pub closed_form_deviation: f64,
    pub grid_minimum: Option<f64>,
    pub grid_steps: Option<usize>,
    pub discrepancies: Vec<String>,
}

pub fn bound_file(args: &BoundArgs) -> Result<BoundFile> {
    let (grid, _) = load_grid(&args.grid)?;
    if grid != parse_grid(fixtures::EQ01)? || !args.merge.eq_ignore_ascii_case(TARGET_MERGE) {
        bail!("the bound pipeline is defined for the eq01 grid merged {TARGET_MERGE} only");
    }
    let angles = angles_for(&grid, args.angles.as_ref(), args.seed)?;
    let b = bound_report(&angles, args.grid_steps)?;
    let mut discrepancies = Vec::new();
    if b.closed_form_deviation > BOUND_TOL {
        discrepancies.push(format!(
            "spot values deviate from their closed forms by {:.3e}",
            b.closed_form_deviation
        ));
    }
    if let Some(g) = b.grid_minimum {
        if g > b.m + BOUND_TOL {
            discrepancies.push(format!("grid minimum {g:.12} exceeds M = {:.12}", b.m));
        }
    }
    Ok(BoundFile {
        header: Header::new("bound"),
        config: args.clone(),
        assignment: AssignmentFile::from(&angles),
        spot_values: b
            .spot_values
            .iter()
            .map(|s| SpotRecord {
                name: s.name.clone(),
                params: s.params,
                value: s.value,
                closed_form: s.closed_form,
            })
            .collect(),
        family_range: b.family_range,
        family_closed_form: b.family_closed_form,
        m: b.m,
        paper_bound: b.paper_bound,
        normalized_bound: b.normalized_bound,
        complement_dim: b.complement_dim,
        closed_form_deviation: b.closed_form_deviation,
        grid_minimum: b.grid_minimum,
        grid_steps: b.grid_steps,
        discrepancies,
    })
}

pub fn run_bound(args: &BoundArgs) -> Result<Outcome> {
    let b = bound_file(args)?;
    let summary = format!(
        "M = {:.12}, -log2(1-M) = {:.9}, -log2((1-M)/{}) = {:.9}",
        b.m, b.paper_bound, b.complement_dim, b.normalized_bound
    );
    let ok = b.discrepancies.is_empty();
    Outcome::json(&b, summary, ok)
}

#[derive(Clone, Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub grid: String,
    /// Transformation script file or bundled name (case6).
    #[arg(long)]
    pub script: String,
    /// Angle assignment to carry along; written to `--angles-out`.
    #[arg(long, requires = "angles_out")]
    pub angles: Option<PathBuf>,
    #[arg(long)]
    pub angles_out: Option<PathBuf>,
    /// Grid the result must equal symbol for symbol.
    #[arg(long)]
    pub compare: Option<String>,
    /// Where to write the transformed grid; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_transform(args: &TransformArgs) -> Result<Outcome> {
    let (grid, grid_source) = load_grid(&args.grid)?;
    let (script, script_source) = load_script(&args.script)?;
    let result = apply_script(&grid, &script)?;
    if let Some(path) = &args.angles {
        let mapped = map_assignment(&read_assignment(path)?, &script)?;
        let out = args.angles_out.as_ref().expect("clap enforces --angles-out");
        write_json(out, &AssignmentFile::from(&mapped))?;
    }
    let mut summary = format!("applied {} ({} steps) to {}", script_source, script.len(), grid_source);
    let mut ok = true;
    if let Some(other) = &args.compare {
        let (target, target_source) = load_grid(other)?;
        ok = result == target;
        if ok {
            summary.push_str(&format!("; result equals {target_source}"));
        } else {
            let row = (0..result.rows().min(target.rows()))
                .find(|&r| result.row(r) != target.row(r))
                .map_or("shape".to_string(), |r| format!("row {}", r + 1));
            summary.push_str(&format!("; result differs from {target_source} at {row}"));
        }
    }
    Ok(Outcome {
        body: result.to_string(),
        summary,
        ok,
    })
}
