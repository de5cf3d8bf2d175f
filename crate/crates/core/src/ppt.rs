//! Bound entangled states from unextendible product bases.
//!
//! For a UPB `{uⱼ}` of `m` vectors in a space of dimension `D`, the
//! normalized projector onto the complement of its span,
//! `ρ = (I − Σⱼ |uⱼ⟩⟨uⱼ|)/(D − m)`, has a positive partial transpose across
//! every cut and contains no product vector in its range, so it is entangled.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::extendibility::decide_upb;
use crate::linalg::{hermitian_eig, numerical_rank, CMat, C64, DEFAULT_RANK_TOL};
use crate::symbolic::{party_letter, ProductSet};

/// Slack for trace, Hermiticity and eigenvalue signs.
pub const STATE_TOL: f64 = 1e-10;

/// A split of the parties into two nonempty sides.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    pub fn new(parties: usize, left: Vec<usize>) -> Result<Self> {
        let mut left = left;
        left.sort_unstable();
        left.dedup();
        if let Some(&bad) = left.iter().find(|&&p| p >= parties) {
            return Err(Error::IndexOutOfRange { index: bad, len: parties });
        }
        let right: Vec<usize> = (0..parties).filter(|p| !left.contains(p)).collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidArgument("both sides of a cut must be nonempty".into()));
        }
        Ok(Bipartition { left, right })
    }

    /// All `2^(n−1) − 1` cuts, each listed once with the last party on the
    /// right, ordered by the bit mask of the left side.
    pub fn all(parties: usize) -> Vec<Bipartition> {
        if parties < 2 {
            return Vec::new();
        }
        (1u64..1 << (parties - 1))
            .map(|mask| {
                let left = (0..parties - 1).filter(|p| mask >> p & 1 == 1).collect();
                Bipartition::new(parties, left).expect("valid mask")
            })
            .collect()
    }

    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// `A|BC` style label using the given party names.
    pub fn label(&self, names: &[String]) -> String {
        let side = |s: &[usize]| s.iter().map(|&p| names[p].as_str()).collect::<Vec<_>>().join("");
        format!("{}|{}", side(&self.left), side(&self.right))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.left.len() + self.right.len()).map(party_letter).collect();
        f.write_str(&self.label(&names))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutCertificate {
    pub cut: Bipartition,
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

/// Results filled by [`certify`]; `None` means not evaluated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certifications {
    pub trace: Option<f64>,
    pub unit_trace: Option<bool>,
    pub hermitian_deviation: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub psd: Option<bool>,
    pub cuts: Vec<CutCertificate>,
    pub ppt_all_cuts: Option<bool>,
    pub rank: Option<usize>,
    pub entangled: Option<bool>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    pub dims: Vec<usize>,
    pub mat: CMat,
    pub party_names: Vec<String>,
    pub certifications: Certifications,
    /// The product set whose complement this state projects onto.
    pub source: Option<ProductSet>,
    /// `Σⱼ |uⱼ⟩⟨uⱼ|` over the source members.
    pub projector: Option<CMat>,
    /// Prefactor actually applied, `1/(D − m)`.
    pub prefactor: Option<f64>,
    /// The prefactor `1/n` (n = number of parties) of the general formula as
    /// printed, kept for traceability; it does not give unit trace.
    pub printed_prefactor: Option<f64>,
}

impl DensityOperator {
    pub fn new(dims: Vec<usize>, mat: CMat) -> Result<Self> {
        let d: usize = dims.iter().product();
        if mat.rows() != d || !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: mat.rows(),
            });
        }
        let party_names = (0..dims.len()).map(party_letter).collect();
        Ok(DensityOperator {
            dims,
            mat,
            party_names,
            certifications: Certifications::default(),
            source: None,
            projector: None,
            prefactor: None,
            printed_prefactor: None,
        })
    }

    pub fn total_dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }
}

/// `Σⱼ |uⱼ⟩⟨uⱼ|` for the members of `set`.
pub fn member_projector(set: &ProductSet) -> CMat {
    let d = set.total_dim();
    set.members()
        .iter()
        .fold(CMat::zeros(d, d), |acc, u| acc.add(&CMat::outer(&u.to_vector())))
}

/// `(I − P)/(D − m)` for a set certified unextendible by [`decide_upb`].
pub fn build_state(set: &ProductSet, tol: f64) -> Result<DensityOperator> {
    let d = set.total_dim();
    let m = set.len();
    if m >= d {
        return Err(Error::ZeroOperator);
    }
    if !decide_upb(set, tol)?.is_upb {
        return Err(Error::NotCertifiedUpb);
    }
    let p = member_projector(set);
    let prefactor = 1.0 / (d - m) as f64;
    let mat = CMat::identity(d).sub(&p).scale(prefactor);
    let mut rho = DensityOperator::new(set.dims().to_vec(), mat)?;
    rho.party_names = set.party_names().to_vec();
    rho.source = Some(set.clone());
    rho.projector = Some(p);
    rho.prefactor = Some(prefactor);
    rho.printed_prefactor = Some(1.0 / set.parties() as f64);
    Ok(rho)
}

/// `I/D`.
pub fn maximally_mixed(dims: Vec<usize>) -> DensityOperator {
    let d: usize = dims.iter().product();
    DensityOperator::new(dims, CMat::identity(d).scale(1.0 / d as f64)).expect("square")
}

/// Mixed-radix digits of `index`, most significant party first.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (k, &d) in dims.iter().enumerate().rev() {
        out[k] = index % d;
        index /= d;
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Transposes the tensor factors listed in `parties` of an operator on
/// `⊗ dims`.
pub fn partial_transpose_parties(mat: &CMat, dims: &[usize], parties: &[usize]) -> CMat {
    let d = mat.rows();
    let n = dims.len();
    let mut out = CMat::zeros(d, d);
    let mut ri = alloc::vec![0; n];
    let mut ci = alloc::vec![0; n];
    for r in 0..d {
        digits(r, dims, &mut ri);
        for c in 0..d {
            digits(c, dims, &mut ci);
            let (mut r2, mut c2) = (ri.clone(), ci.clone());
            for &p in parties {
                r2[p] = ci[p];
                c2[p] = ri[p];
            }
            out[(compose(&r2, dims), compose(&c2, dims))] = mat[(r, c)];
        }
    }
    out
}

/// Partial transpose on the left side of `cut`.
pub fn partial_transpose(rho: &DensityOperator, cut: &Bipartition) -> CMat {
    partial_transpose_parties(&rho.mat, &rho.dims, &cut.left)
}

/// Fills every certification flag of `rho`.
pub fn certify(mut rho: DensityOperator) -> Result<DensityOperator> {
    let mut c = Certifications::default();
    let trace = rho.mat.trace();
    c.trace = Some(trace.re);
    c.unit_trace = Some((trace - C64::new(1.0, 0.0)).norm() <= STATE_TOL);
    c.hermitian_deviation = Some(rho.mat.hermitian_deviation());

    let eig = hermitian_eig(&rho.mat)?;
    c.min_eigenvalue = Some(eig.min());
    c.psd = Some(eig.min() >= -STATE_TOL);
    c.rank = Some(numerical_rank(&rho.mat, DEFAULT_RANK_TOL));

    for cut in Bipartition::all(rho.parties()) {
        let pt = partial_transpose(&rho, &cut);
        let min = hermitian_eig(&pt)?.min();
        c.cuts.push(CutCertificate {
            cut,
            min_eigenvalue: min,
            ppt: min >= -STATE_TOL,
        });
    }
    c.ppt_all_cuts = Some(c.cuts.iter().all(|k| k.ppt));

    match &rho.source {
        Some(set) => {
            if decide_upb(set, DEFAULT_RANK_TOL)?.is_upb {
                c.entangled = Some(true);
            } else {
                c.warnings
                    .push("source set is extendible; the range criterion is inconclusive".into());
            }
        }
        None => c
            .warnings
            .push("no generating product set; entanglement not assessed".into()),
    }
    rho.certifications = c;
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use crate::fixtures;
    use crate::linalg::CVec;
    use crate::merge::{merge, MergePlan};
    use crate::rng::{sample_assignment, stream_rng, SamplingParams};
    use crate::symbolic::{parse_grid, realize_grid, ProductVector};
    use rand::Rng;

    fn realized(text: &str, stream: u64) -> ProductSet {
        let g = parse_grid(text).unwrap();
        realize_grid(&g, &sample_assignment(&g, &SamplingParams::default(), 17, stream)).unwrap()
    }

    fn random_mat(d: usize, rng: &mut impl Rng) -> CMat {
        let data = (0..d * d)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CMat::from_row_major(d, d, data).unwrap()
    }

    #[test]
    fn cut_enumeration() {
        assert_eq!(Bipartition::all(2).len(), 1);
        assert_eq!(Bipartition::all(3).len(), 3);
        assert_eq!(Bipartition::all(4).len(), 7);
        assert_eq!(Bipartition::all(5).len(), 15);
        let cuts: Vec<String> = Bipartition::all(3).iter().map(|c| c.to_string()).collect();
        assert_eq!(cuts, ["A|BC", "B|AC", "AB|C"]);
        assert!(Bipartition::new(3, vec![0, 1, 2]).is_err());
        assert!(Bipartition::new(3, vec![]).is_err());
    }

    #[test]
    fn partial_transpose_is_an_involution_and_acts_on_one_factor() {
        let mut rng = stream_rng(1, 0);
        let dims = [2, 3, 2];
        let m = random_mat(12, &mut rng);
        for cut in Bipartition::all(3) {
            let once = partial_transpose_parties(&m, &dims, &cut.left);
            let twice = partial_transpose_parties(&once, &dims, &cut.left);
            assert!(twice.max_abs_diff(&m) < 1e-14);
            assert!((once.trace() - m.trace()).norm() < 1e-12);
        }
        let a = random_mat(2, &mut rng);
        let b = random_mat(3, &mut rng);
        let pt = partial_transpose_parties(&a.kron(&b), &[2, 3], &[0]);
        assert!(pt.max_abs_diff(&a.transpose().kron(&b)) < 1e-14);
        let full = partial_transpose_parties(&a.kron(&b), &[2, 3], &[0, 1]);
        assert!(full.max_abs_diff(&a.kron(&b).transpose()) < 1e-14);
    }

    #[test]
    fn merged_ab_state_is_certified() {
        let s = realized(fixtures::EQ01, 0);
        let merged = merge(&s, &MergePlan::parse(4, "AB").unwrap()).unwrap();
        let rho = certify(build_state(&merged, DEFAULT_RANK_TOL).unwrap()).unwrap();
        let c = &rho.certifications;
        assert_eq!(rho.dims, [2, 2, 4]);
        assert_eq!(c.unit_trace, Some(true));
        assert_eq!(c.psd, Some(true));
        assert_eq!(c.rank, Some(8));
        assert_eq!(c.cuts.len(), 3);
        assert_eq!(c.ppt_all_cuts, Some(true));
        assert_eq!(c.entangled, Some(true));
        assert_eq!(rho.prefactor, Some(0.125));
        for u in merged.members() {
            assert!(rho.mat.mul_vec(&u.to_vector()).norm() < 1e-10);
        }
        let eig = hermitian_eig(&rho.mat).unwrap();
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            let target = if k < 8 { 0.0 } else { 0.125 };
            assert!((l - target).abs() < 1e-10);
        }
    }

    #[test]
    fn opposite_cuts_share_spectra() {
        let s = realized(fixtures::EQ00, 2);
        let rho = build_state(&s, DEFAULT_RANK_TOL).unwrap();
        for cut in Bipartition::all(4) {
            let a = hermitian_eig(&partial_transpose(&rho, &cut)).unwrap().eigenvalues;
            let b = hermitian_eig(&partial_transpose(&rho, &cut.swapped())).unwrap().eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unmerged_state_has_seven_ppt_cuts() {
        let s = realized(fixtures::EQ00, 3);
        let rho = certify(build_state(&s, DEFAULT_RANK_TOL).unwrap()).unwrap();
        assert_eq!(rho.certifications.cuts.len(), 7);
        assert_eq!(rho.certifications.ppt_all_cuts, Some(true));
        assert_eq!(rho.certifications.rank, Some(8));
        assert_eq!(rho.printed_prefactor, Some(0.25));
    }

    #[test]
    fn maximally_mixed_has_no_entanglement_verdict() {
        let rho = certify(maximally_mixed(vec![2, 2])).unwrap();
        let c = &rho.certifications;
        assert_eq!((c.psd, c.ppt_all_cuts, c.rank, c.entangled), (Some(true), Some(true), Some(4), None));
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn build_state_rejects_complete_and_extendible_sets() {
        let e = |i| CVec::basis(2, i);
        let basis: Vec<ProductVector> = (0..4).map(|k| ProductVector::new(vec![e(k / 2), e(k % 2)])).collect();
        let full = ProductSet::new(vec![2, 2], basis.clone()).unwrap();
        assert_eq!(build_state(&full, DEFAULT_RANK_TOL), Err(Error::ZeroOperator));
        let part = ProductSet::new(vec![2, 2], basis[..2].to_vec()).unwrap();
        assert_eq!(build_state(&part, DEFAULT_RANK_TOL), Err(Error::NotCertifiedUpb));
        let cd = merge(&realized(fixtures::EQ01, 0), &MergePlan::parse(4, "CD").unwrap()).unwrap();
        assert_eq!(build_state(&cd, DEFAULT_RANK_TOL), Err(Error::NotCertifiedUpb));
    }
}
