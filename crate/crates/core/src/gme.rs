//! Geometric measure of entanglement.
//!
//! `G(σ) = −log₂ max ⟨δ|σ|δ⟩` over normalized product vectors `δ`. The
//! maximization is estimated by alternating local updates: with every other
//! party frozen, the best local is the top eigenvector of the reduced
//! "environment" matrix, so each update can only raise the overlap. Any
//! overlap found is a lower bound on the maximum and hence gives an upper
//! bound on `G`.
//!
//! The second half evaluates the closed-form bound for the tripartite state
//! built from the four-qubit UPB with `A` and `B` merged.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{cos, log2, sin};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::linalg::{hermitian_eig, CMat, CVec, C64, DEFAULT_RANK_TOL};
use crate::merge::{merge, MergePlan};
use crate::ppt::{build_state, DensityOperator};
use crate::rng::stream_rng;
use crate::symbolic::{parse_grid, realize_grid, AngleAssignment, ProductSet, ProductVector};

/// `⟨p|σ|p⟩`.
pub fn overlap(sigma: &DensityOperator, p: &ProductVector) -> Result<f64> {
    if p.dims() != sigma.dims {
        return Err(Error::DimensionMismatch {
            expected: sigma.total_dim(),
            found: p.dims().iter().product(),
        });
    }
    Ok(sigma.mat.expectation(&p.to_vector()).re)
}

/// Reduced operator on `party` with every other party contracted against
/// the current locals.
fn environment(sigma: &CMat, dims: &[usize], locals: &[CVec], party: usize) -> CMat {
    let d = dims[party];
    let frame: Vec<CVec> = (0..d)
        .map(|a| {
            let mut v = CVec::new(alloc::vec![C64::new(1.0, 0.0)]);
            for (k, local) in locals.iter().enumerate() {
                let f = if k == party { CVec::basis(d, a) } else { local.clone() };
                v = v.kron(&f);
            }
            v
        })
        .collect();
    let phi = CMat::from_columns(&frame.iter().collect::<Vec<_>>());
    let env = phi.adjoint().mul(sigma).mul(&phi);
    // remove roundoff asymmetry before the Hermitian solver sees it
    env.add(&env.adjoint()).scale(0.5)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmeOptions {
    pub restarts: usize,
    pub max_sweeps: usize,
    pub conv_tol: f64,
    pub seed: u64,
}

impl Default for GmeOptions {
    fn default() -> Self {
        GmeOptions {
            restarts: 64,
            max_sweeps: 1000,
            conv_tol: 1e-12,
            seed: 0,
        }
    }
}

/// One run of local updates from a fixed start.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalRun {
    pub overlap: f64,
    pub product: ProductVector,
    pub sweeps: usize,
    /// Largest drop of the overlap across a sweep; roundoff only.
    pub max_decrease: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmeEstimate {
    pub best_overlap: f64,
    pub best_product: ProductVector,
    pub best_restart: Option<usize>,
    pub restarts: usize,
    /// Sweeps summed over all restarts.
    pub sweeps: usize,
    pub gme_value: f64,
    pub max_decrease: f64,
}

/// Alternating local maximization from `start`.
pub fn maximize_from(sigma: &DensityOperator, start: &ProductVector, max_sweeps: usize, conv_tol: f64) -> Result<LocalRun> {
    let mut locals: Vec<CVec> = start.normalized().locals;
    let mut current = overlap(sigma, &ProductVector::new(locals.clone()))?;
    let mut max_decrease: f64 = 0.0;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        for party in 0..locals.len() {
            let env = environment(&sigma.mat, &sigma.dims, &locals, party);
            let eig = hermitian_eig(&env)?;
            let (_, top) = eig.top().expect("nonempty party");
            locals[party] = top.normalized();
        }
        let next = overlap(sigma, &ProductVector::new(locals.clone()))?;
        max_decrease = max_decrease.max(current - next);
        let gain = next - current;
        current = next;
        if gain < conv_tol {
            break;
        }
    }
    Ok(LocalRun {
        overlap: current,
        product: ProductVector::new(locals),
        sweeps,
        max_decrease,
    })
}

/// Product vector with independent complex Gaussian locals, normalized,
/// which is uniform on each local sphere.
pub fn random_product(dims: &[usize], seed: u64, stream: u64) -> ProductVector {
    let mut rng = stream_rng(seed, stream);
    ProductVector::new(
        dims.iter()
            .map(|&d| {
                let v: CVec = (0..d)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        C64::new(re, im)
                    })
                    .collect();
                v.normalized()
            })
            .collect(),
    )
}

fn estimate(runs: Vec<(Option<usize>, LocalRun)>, restarts: usize) -> GmeEstimate {
    let sweeps = runs.iter().map(|(_, r)| r.sweeps).sum();
    let max_decrease = runs.iter().map(|(_, r)| r.max_decrease).fold(0.0, f64::max);
    let (best_restart, best) = runs
        .into_iter()
        .reduce(|a, b| if b.1.overlap > a.1.overlap { b } else { a })
        .expect("at least one run");
    GmeEstimate {
        best_overlap: best.overlap,
        gme_value: -log2(best.overlap),
        best_product: best.product,
        best_restart,
        restarts,
        sweeps,
        max_decrease,
    }
}

/// Best of `opts.restarts` runs from random starts; restart `r` draws from
/// stream `r` of `opts.seed`.
pub fn alternating_maximize(sigma: &DensityOperator, opts: &GmeOptions) -> Result<GmeEstimate> {
    alternating_maximize_seeded(sigma, opts, &[])
}

/// As [`alternating_maximize`], with extra deterministic starting points
/// tried before the random ones.
pub fn alternating_maximize_seeded(sigma: &DensityOperator, opts: &GmeOptions, starts: &[ProductVector]) -> Result<GmeEstimate> {
    if opts.restarts == 0 && starts.is_empty() {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let mut runs = Vec::with_capacity(starts.len() + opts.restarts);
    for s in starts {
        runs.push((None, maximize_from(sigma, s, opts.max_sweeps, opts.conv_tol)?));
    }
    for r in 0..opts.restarts {
        let start = random_product(&sigma.dims, opts.seed, r as u64);
        runs.push((Some(r), maximize_from(sigma, &start, opts.max_sweeps, opts.conv_tol)?));
    }
    Ok(estimate(runs, opts.restarts))
}

/// Fuses a product vector over the unmerged parties into the party structure
/// of `plan`.
pub fn merge_product(p: &ProductVector, plan: &MergePlan) -> Result<ProductVector> {
    let single = ProductSet::new(p.dims(), alloc::vec![p.clone()])?;
    Ok(merge(&single, plan)?.members()[0].clone())
}

/// Angles `(ν₁, ν₂, ν₃)` and `(μ₁, μ₂)` of a real product vector in
/// `ℝ⁴⊗ℝ²⊗ℝ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaParams {
    pub nu: [f64; 3],
    pub mu: [f64; 2],
}

impl DeltaParams {
    /// From `(ν₁, ν₂, ν₃, μ₁, μ₂)`.
    pub fn new(p: [f64; 5]) -> Self {
        DeltaParams {
            nu: [p[0], p[1], p[2]],
            mu: [p[3], p[4]],
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.nu[0], self.nu[1], self.nu[2], self.mu[0], self.mu[1]]
    }

    /// `δ₁` on the merged pair.
    pub fn delta1(&self) -> CVec {
        let [n1, ..] = self.nu;
        let [m1, m2] = self.mu;
        CVec::from_real(&[cos(n1) * cos(m1), cos(n1) * sin(m1), sin(n1) * cos(m2), sin(n1) * sin(m2)])
    }

    /// Product vector in the party order of the merged set: the two qubits
    /// first, the merged pair last.
    pub fn product(&self) -> ProductVector {
        let q = |t: f64| CVec::from_real(&[cos(t), sin(t)]);
        ProductVector::new(alloc::vec![q(self.nu[1]), q(self.nu[2]), self.delta1()])
    }
}

/// The target `f(δ) = ⟨δ|P|δ⟩` for the tripartite state, with `P` the sum
/// of member projectors of the four-qubit UPB with `A` and `B` merged.
pub struct TargetFunction {
    pub set: ProductSet,
    pub state: DensityOperator,
    pub angles: AngleAssignment,
}

/// The merge whose state the target function describes.
pub const TARGET_MERGE: &str = "AB";

impl TargetFunction {
    /// `angles` must cover the labels of the eq01 grid.
    pub fn new(angles: &AngleAssignment) -> Result<Self> {
        let grid = parse_grid(fixtures::EQ01)?;
        let set = merge(&realize_grid(&grid, angles)?, &MergePlan::parse(4, TARGET_MERGE)?)?;
        let state = build_state(&set, DEFAULT_RANK_TOL)?;
        Ok(TargetFunction {
            set,
            state,
            angles: angles.clone(),
        })
    }

    pub fn projector(&self) -> &CMat {
        self.state.projector.as_ref().expect("built from a set")
    }

    pub fn eval(&self, p: &DeltaParams) -> f64 {
        self.projector().expectation(&p.product().to_vector()).re
    }

    /// `D − m`.
    pub fn complement_dim(&self) -> usize {
        self.set.total_dim() - self.set.len()
    }

    fn angle(&self, column: usize, base: &str) -> Result<f64> {
        self.angles.scoped(column, base).ok_or_else(|| Error::MissingAngle {
            column: column + 1,
            label: base.into(),
        })
    }

    /// Printed closed forms of the three spot values, in spot order.
    pub fn closed_forms(&self) -> Result<[f64; 3]> {
        let x1 = self.angle(0, "a1")?;
        let x2 = self.angle(1, "a2")?;
        let x3 = self.angle(2, "a3")?;
        let x4 = self.angle(3, "a4")?;
        let y4 = self.angle(3, "b4")?;
        let sq = |v: f64| v * v;
        let first = sq(cos(x2)) * sq(sin(x3));
        let second = sq(cos(x1)) * sq(cos(x3)) * sq(cos(x4)) + sq(cos(x3)) * sq(cos(y4)) * sq(sin(x1));
        Ok([first, second, first])
    }

    /// Minimum of `f` over real product vectors with `ν₂, ν₃` on a grid of
    /// `steps` points in `[0, π)`; the merged-pair factor is minimized
    /// exactly as the smallest eigenvalue of the reduced form.
    pub fn grid_minimum(&self, steps: usize) -> Result<f64> {
        let p = self.projector();
        let mut best = f64::INFINITY;
        for i in 0..steps {
            for j in 0..steps {
                let n2 = PI * i as f64 / steps as f64;
                let n3 = PI * j as f64 / steps as f64;
                let q = |t: f64| CVec::from_real(&[cos(t), sin(t)]);
                let locals = [q(n2), q(n3), CVec::zeros(4)];
                let env = environment(p, self.set.dims(), &locals, 2);
                // real part: the search is over real vectors
                let real = CMat::from_row_major(4, 4, env.data().iter().map(|z| C64::new(z.re, 0.0)).collect())?;
                best = best.min(hermitian_eig(&real)?.min());
            }
        }
        Ok(best)
    }
}

/// `f` evaluated from first principles at `params`.
pub fn f_paper(params: &DeltaParams, angles: &AngleAssignment) -> Result<f64> {
    Ok(TargetFunction::new(angles)?.eval(params))
}

/// The three printed evaluation points, in order.
pub const SPOT_POINTS: [(&str, [f64; 5]); 3] = [
    ("min1", [0.0, 0.0, FRAC_PI_2, 0.0, 0.0]),
    ("min2", [0.0, 0.0, 0.0, FRAC_PI_2, 0.0]),
    ("min3", [FRAC_PI_2, 0.0, FRAC_PI_2, FRAC_PI_2, 0.0]),
];

/// Points sampled along the family `(ν₁, 0, π/2, 0, 0)`.
pub const FAMILY_SAMPLES: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SpotValue {
    pub name: String,
    pub params: [f64; 5],
    pub value: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub spot_values: Vec<SpotValue>,
    /// `(min, max)` of `f` along the `ν₁` family.
    pub family_range: (f64, f64),
    /// Closed form claimed for the whole family.
    pub family_closed_form: f64,
    /// Minimum of the three spot values.
    pub m: f64,
    /// `−log₂(1 − M)`.
    pub paper_bound: f64,
    /// `−log₂((1 − M)/(D − m))`, the bound for the unit-trace state.
    pub normalized_bound: f64,
    pub complement_dim: usize,
    /// Grid minimum of `f`, if requested.
    pub grid_minimum: Option<f64>,
    pub grid_steps: Option<usize>,
    /// Largest deviation between spot values and their closed forms.
    pub closed_form_deviation: f64,
}

pub fn bound_report(angles: &AngleAssignment, grid_steps: Option<usize>) -> Result<BoundReport> {
    let t = TargetFunction::new(angles)?;
    let closed = t.closed_forms()?;
    let spot_values: Vec<SpotValue> = SPOT_POINTS
        .iter()
        .zip(closed)
        .map(|(&(name, params), closed_form)| SpotValue {
            name: name.into(),
            params,
            value: t.eval(&DeltaParams::new(params)),
            closed_form,
        })
        .collect();
    let family: Vec<f64> = (0..FAMILY_SAMPLES)
        .map(|k| {
            let nu1 = 2.0 * PI * k as f64 / FAMILY_SAMPLES as f64;
            t.eval(&DeltaParams::new([nu1, 0.0, FRAC_PI_2, 0.0, 0.0]))
        })
        .collect();
    let m = spot_values.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let dm = t.complement_dim();
    let paper_bound = -log2(1.0 - m);
    let closed_form_deviation = spot_values
        .iter()
        .map(|s| (s.value - s.closed_form).abs())
        .fold(0.0, f64::max);
    Ok(BoundReport {
        family_range: (
            family.iter().copied().fold(f64::INFINITY, f64::min),
            family.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        family_closed_form: closed[0],
        m,
        paper_bound,
        normalized_bound: -log2((1.0 - m) / dm as f64),
        complement_dim: dm,
        grid_minimum: grid_steps.map(|s| t.grid_minimum(s)).transpose()?,
        grid_steps,
        closed_form_deviation,
        spot_values,
    })
}
