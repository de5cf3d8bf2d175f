//! Deciding whether an orthonormal product set is unextendible.
//!
//! A product vector `|w₁⟩⊗…⊗|wₙ⟩` is orthogonal to a member `u` exactly when
//! at least one factor satisfies `⟨wᵢ|uᵢ⟩ = 0`. Choosing, for every member,
//! one party responsible for its orthogonality gives an assignment σ. Such a
//! σ can be realized iff for every party the locals assigned to it leave a
//! nonzero orthogonal complement, i.e. span fewer than `dᵢ` dimensions. The
//! set is a UPB iff no assignment is realizable, and the search below
//! explores all `n^m` assignments with pruning and memoized rank checks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{det, numerical_rank, svd, CMat, CVec};
use crate::merge::{merged_party_matrix, MergePlan};
use crate::symbolic::{realize_symbol, AngleAssignment, ProductSet, ProductVector, Symbol};

/// Orthonormality required of inputs to [`decide_upb`].
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// Orthogonality threshold for template vectors.
pub const TEMPLATE_TOL: f64 = 1e-10;

/// Member index → responsible party.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    /// Members handled by `party`, as a bit mask.
    pub fn mask(&self, party: usize) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == party)
            .fold(0, |acc, (j, _)| acc | (1 << j))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtendibilityVerdict {
    pub is_upb: bool,
    pub witness: Option<ProductVector>,
    pub witness_assignment: Option<Assignment>,
    /// Assignments ruled out or tried. A subtree pruned at depth `j` counts
    /// for all `n^(m−j−1)` completions, so an exhausted search reports `n^m`.
    pub assignments_checked: u64,
    /// Distinct (party, member group) rank evaluations actually performed.
    pub distinct_groups: usize,
    /// Largest `|⟨witness|uⱼ⟩|` over members, when a witness exists.
    pub witness_max_overlap: Option<f64>,
    pub tol: f64,
}

/// Locals of every member at `party`, as bra rows.
fn party_rows(set: &ProductSet, party: usize, mask: u64) -> CMat {
    let rows: Vec<&CVec> = set
        .members()
        .iter()
        .enumerate()
        .filter(|(j, _)| mask >> j & 1 == 1)
        .map(|(_, m)| &m.locals[party])
        .collect();
    CMat::from_bra_rows(&rows)
}

struct Search<'a> {
    set: &'a ProductSet,
    parties: Vec<usize>,
    tol: f64,
    memo: BTreeMap<(usize, u64), bool>,
    checked: u64,
}

impl Search<'_> {
    /// Whether the members in `mask` leave room at `party`.
    fn deficient(&mut self, party: usize, mask: u64) -> bool {
        if let Some(&d) = self.memo.get(&(party, mask)) {
            return d;
        }
        let rank = numerical_rank(&party_rows(self.set, party, mask), self.tol);
        let d = rank < self.set.dims()[party];
        self.memo.insert((party, mask), d);
        d
    }

    fn run(&mut self, member: usize, masks: &mut [u64], sigma: &mut Vec<usize>) -> bool {
        let m = self.set.len();
        if member == m {
            self.checked = self.checked.saturating_add(1);
            return true;
        }
        let n = self.parties.len() as u64;
        let subtree = n.saturating_pow((m - member - 1) as u32);
        for slot in 0..self.parties.len() {
            let party = self.parties[slot];
            let next = masks[slot] | (1 << member);
            if !self.deficient(party, next) {
                self.checked = self.checked.saturating_add(subtree);
                continue;
            }
            let saved = masks[slot];
            masks[slot] = next;
            sigma.push(party);
            if self.run(member + 1, masks, sigma) {
                return true;
            }
            sigma.pop();
            masks[slot] = saved;
        }
        false
    }
}

/// Searches for an assignment of members to `parties` that every party can
/// absorb. Members are only assigned to the listed parties.
fn search(set: &ProductSet, parties: &[usize], tol: f64) -> (Option<Assignment>, u64, usize) {
    let mut s = Search {
        set,
        parties: parties.to_vec(),
        tol,
        memo: BTreeMap::new(),
        checked: 0,
    };
    let mut masks = vec![0u64; parties.len()];
    let mut sigma = Vec::with_capacity(set.len());
    let found = s.run(0, &mut masks, &mut sigma);
    (found.then_some(Assignment(sigma)), s.checked, s.memo.len())
}

/// Local at `party` orthogonal to the members in `mask`: the right singular
/// vector of the smallest singular value, or `e₀` for an empty group.
fn witness_local(set: &ProductSet, party: usize, mask: u64) -> CVec {
    if mask == 0 {
        return CVec::basis(set.dims()[party], 0);
    }
    let d = svd(&party_rows(set, party, mask));
    d.right_vectors.last().expect("nonempty basis").normalized()
}

fn max_overlap(set: &ProductSet, w: &ProductVector) -> f64 {
    set.members()
        .iter()
        .map(|u| w.inner(u).norm())
        .fold(0.0, f64::max)
}

fn check_input(set: &ProductSet) -> Result<()> {
    if set.len() > 64 {
        return Err(Error::InvalidArgument(format!(
            "at most 64 members are supported, found {}",
            set.len()
        )));
    }
    let deviation = set.orthonormality_deviation();
    if deviation > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Exact UPB decision for an orthonormal product set. `tol` is the relative
/// rank tolerance.
pub fn decide_upb(set: &ProductSet, tol: f64) -> Result<ExtendibilityVerdict> {
    check_input(set)?;
    let parties: Vec<usize> = (0..set.parties()).collect();
    let (found, checked, groups) = search(set, &parties, tol);
    let (witness, overlap) = match &found {
        Some(sigma) => {
            let w = ProductVector::new(
                parties
                    .iter()
                    .map(|&p| witness_local(set, p, sigma.mask(p)))
                    .collect(),
            );
            let o = max_overlap(set, &w);
            (Some(w), Some(o))
        }
        None => (None, None),
    };
    Ok(ExtendibilityVerdict {
        is_upb: found.is_none(),
        witness,
        witness_assignment: found,
        assignments_checked: checked,
        distinct_groups: groups,
        witness_max_overlap: overlap,
        tol,
    })
}

/// A hand-built orthogonal product vector: fixed symbols on the singleton
/// parties, and on the merged party a vector annihilating whatever members
/// the singletons leave untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleTemplate {
    pub plan: MergePlan,
    /// `(original party index, symbol)` for every party outside the merged pair.
    pub singletons: Vec<(usize, Symbol)>,
    /// Merged-party vectors whose common orthogonal complement supplies the
    /// merged local, each as the symbols on the two merged columns.
    pub annihilate: Vec<(Symbol, Symbol)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleCheck {
    /// The vector over the merged party structure (singletons, then pair).
    pub vector: ProductVector,
    /// Members not annihilated by any singleton local (0-based).
    pub residual_members: Vec<usize>,
    /// Whether the residual members' merged locals and the recipe vectors
    /// agree as sets.
    pub residual_matches_template: bool,
    pub max_overlap: f64,
    pub orthogonal: bool,
}

/// Builds the template vector over the realized, unmerged `set`: singleton
/// locals from their symbols, the merged local from the kernel of the
/// recipe vectors. Then checks orthogonality to every member at
/// [`TEMPLATE_TOL`].
pub fn verify_counterexample(
    set: &ProductSet,
    angles: &AngleAssignment,
    template: &CounterexampleTemplate,
) -> Result<CounterexampleCheck> {
    let (i, j) = template.plan.merged_pair().ok_or(Error::NoMergedGroup)?;
    let groups = template.plan.output_groups();
    let mut locals = Vec::with_capacity(groups.len());
    let mut alive: Vec<usize> = (0..set.len()).collect();
    for g in &groups[..groups.len() - 1] {
        let party = g[0];
        let symbol = template
            .singletons
            .iter()
            .find(|(p, _)| *p == party)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::InvalidArgument(format!("template misses party {party}")))?;
        let v = realize_symbol(symbol, angles, Some(party))?;
        alive.retain(|&k| v.inner(&set.members()[k].locals[party]).norm() > TEMPLATE_TOL);
        locals.push(v);
    }

    let residual: Vec<CVec> = alive
        .iter()
        .map(|&k| set.members()[k].locals[i].kron(&set.members()[k].locals[j]))
        .collect();
    let recipe: Vec<CVec> = template
        .annihilate
        .iter()
        .map(|(x, y)| Ok(realize_symbol(x, angles, Some(i))?.kron(&realize_symbol(y, angles, Some(j))?)))
        .collect::<Result<_>>()?;
    let same = |x: &CVec, y: &CVec| x.max_abs_diff(y) < 1e-12;
    let residual_matches_template = recipe.iter().all(|e| residual.iter().any(|c| same(c, e)))
        && residual.iter().all(|c| recipe.iter().any(|e| same(c, e)));

    let d = set.dims()[i] * set.dims()[j];
    let merged = if recipe.is_empty() {
        CVec::basis(d, 0)
    } else {
        let s = svd(&CMat::from_bra_rows(&recipe.iter().collect::<Vec<_>>()));
        let smallest = *s.singular_values.last().expect("d > 0");
        if smallest > s.threshold(crate::linalg::DEFAULT_RANK_TOL) {
            return Err(Error::TemplateInfeasible);
        }
        s.right_vectors.last().expect("nonempty").normalized()
    };
    locals.push(merged);
    let vector = ProductVector::new(locals);

    let merged_set = crate::merge::merge(set, &template.plan)?;
    let overlap = max_overlap(&merged_set, &vector);
    Ok(CounterexampleCheck {
        vector,
        residual_members: alive,
        residual_matches_template,
        max_overlap: overlap,
        orthogonal: overlap <= TEMPLATE_TOL,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularScan {
    pub subset_size: usize,
    /// Singular subsets in lexicographic order, as the caller's column indices.
    pub singular_subsets: Vec<Vec<usize>>,
    pub tol: f64,
    pub feasibility_filtered: bool,
    /// Every examined subset with its singularity measure: normalized `|det|`
    /// for square subsets, otherwise `σ_r/σ_max` with `r` the full rank.
    pub measures: Vec<(Vec<usize>, f64)>,
}

impl SingularScan {
    /// Largest measure among singular subsets and smallest among the rest.
    pub fn gap(&self) -> (Option<f64>, Option<f64>) {
        let mut sing: Option<f64> = None;
        let mut rest: Option<f64> = None;
        for (s, v) in &self.measures {
            if self.singular_subsets.contains(s) {
                sing = Some(sing.map_or(*v, |x| x.max(*v)));
            } else {
                rest = Some(rest.map_or(*v, |x| x.min(*v)));
            }
        }
        (sing, rest)
    }
}

/// All `k`-subsets of `items` in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in start..items.len() {
            if items.len() - t < k - cur.len() {
                break;
            }
            cur.push(items[t]);
            go(items, k, t + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `|det|` divided by the product of column norms (Hadamard ratio), in [0, 1].
pub fn normalized_det(m: &CMat) -> Result<f64> {
    let d = det(m)?.norm();
    let norms: f64 = (0..m.cols()).map(|j| m.column(j).norm()).product();
    Ok(if norms == 0.0 { 0.0 } else { d / norms })
}

fn singularity_measure(sub: &CMat) -> f64 {
    if sub.is_square() {
        return normalized_det(sub).expect("square");
    }
    let r = sub.rows().min(sub.cols());
    let s = svd(sub);
    let smax = s.max_singular_value();
    if smax == 0.0 {
        0.0
    } else {
        s.singular_values.get(r - 1).copied().unwrap_or(0.0) / smax
    }
}

/// Every `k`-subset of `columns` (0-based column indices of `mat`) whose
/// submatrix is rank deficient, meaning its measure is at most `tol`.
pub fn scan_singular_subsets(mat: &CMat, columns: &[usize], k: usize, tol: f64) -> Result<SingularScan> {
    if k == 0 || k > columns.len() {
        return Err(Error::InvalidArgument(format!(
            "subset size {k} must lie in 1..={}",
            columns.len()
        )));
    }
    if let Some(&bad) = columns.iter().find(|&&c| c >= mat.cols()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: mat.cols(),
        });
    }
    let mut singular = Vec::new();
    let mut measures = Vec::new();
    for subset in combinations(columns, k) {
        let v = singularity_measure(&mat.select_columns(&subset));
        if v <= tol {
            singular.push(subset.clone());
        }
        measures.push((subset, v));
    }
    Ok(SingularScan {
        subset_size: k,
        singular_subsets: singular,
        tol,
        feasibility_filtered: false,
        measures,
    })
}

/// Subsets `S` of `k` members such that the remaining members can be made
/// orthogonal through the singleton parties alone and the merged-party locals
/// of `S` leave a nonzero orthogonal complement. Each such subset yields an
/// orthogonal product vector, so an empty result at every `k` certifies a UPB.
///
/// `set` is the unmerged set; `plan` names the merged pair.
pub fn scan_feasible_singular(set: &ProductSet, plan: &MergePlan, k: usize, tol: f64) -> Result<SingularScan> {
    let (i, j) = plan.merged_pair().ok_or(Error::NoMergedGroup)?;
    check_input(set)?;
    let m = set.len();
    if k > m {
        return Err(Error::InvalidArgument(format!("subset size {k} exceeds {m} members")));
    }
    let mat = merged_party_matrix(set, plan)?;
    let d = set.dims()[i] * set.dims()[j];
    let singles: Vec<usize> = (0..set.parties()).filter(|&p| p != i && p != j).collect();
    let all: Vec<usize> = (0..m).collect();
    let mut singular = Vec::new();
    let mut measures = Vec::new();
    for subset in combinations(&all, k) {
        let rest: Vec<usize> = all.iter().copied().filter(|x| !subset.contains(x)).collect();
        let covered = search(&set.select_members(&rest), &singles, tol).0.is_some();
        if !covered {
            continue;
        }
        let sub = mat.select_columns(&subset);
        let s = svd(&sub);
        let sigma = s.singular_values.get(d - 1).copied().unwrap_or(0.0);
        let smax = s.max_singular_value();
        let measure = if smax == 0.0 { 0.0 } else { sigma / smax };
        if sigma <= s.threshold(tol) {
            singular.push(subset.clone());
        }
        measures.push((subset, measure));
    }
    Ok(SingularScan {
        subset_size: k,
        singular_subsets: singular,
        tol,
        feasibility_filtered: true,
        measures,
    })
}

/// [`scan_feasible_singular`] at every subset size `0..=m`.
pub fn scan_feasible_all_sizes(set: &ProductSet, plan: &MergePlan, tol: f64) -> Result<Vec<SingularScan>> {
    (0..=set.len())
        .map(|k| scan_feasible_singular(set, plan, k, tol))
        .collect()
}
