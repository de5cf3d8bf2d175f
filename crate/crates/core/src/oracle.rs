//! Brute-force cross-check for the extendibility decision on two qubits.
//!
//! Real product sets over `(2, 2)` are either extendible by a real product
//! vector or unextendible, so scanning a grid of real angles for a nearly
//! orthogonal product vector gives an independent answer.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{cos, sin};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::CVec;
use crate::symbolic::{ProductSet, ProductVector};

fn qubit(theta: f64) -> CVec {
    CVec::from_real(&[cos(theta), sin(theta)])
}

/// `min over the grid of max_j |⟨a,b|uⱼ⟩|`, with both angles stepping
/// through `[0, π)` in `steps` increments.
pub fn grid_min_max_overlap(set: &ProductSet, steps: usize) -> f64 {
    assert_eq!(set.dims(), [2, 2], "grid oracle covers two qubits only");
    let grid: Vec<CVec> = (0..steps).map(|k| qubit(PI * k as f64 / steps as f64)).collect();
    let mut best = f64::INFINITY;
    for a in &grid {
        let left: Vec<f64> = set.members().iter().map(|u| a.inner(&u.locals[0]).norm()).collect();
        for b in &grid {
            let worst = set
                .members()
                .iter()
                .zip(&left)
                .map(|(u, l)| l * b.inner(&u.locals[1]).norm())
                .fold(0.0, f64::max);
            best = best.min(worst);
        }
    }
    best
}

/// True iff some grid product vector has every overlap at most `eps`.
pub fn grid_search_extendible(set: &ProductSet, steps: usize, eps: f64) -> bool {
    grid_min_max_overlap(set, steps) <= eps
}

/// A random orthonormal real product set over `(2, 2)` with one to four
/// members. About a third are complete product bases; the rest are grown
/// member by member, drawing each local from the angles already in use,
/// their perpendiculars, or a fresh angle.
pub fn random_small_set(rng: &mut impl Rng) -> ProductSet {
    let angles = if rng.random_bool(1.0 / 3.0) {
        complete_basis(rng)
    } else {
        grown_set(rng)
    };
    let members = angles
        .iter()
        .map(|&(a, b)| ProductVector::new(vec![qubit(a), qubit(b)]))
        .collect();
    ProductSet::new(vec![2, 2], members).expect("qubit locals")
}

fn complete_basis(rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let a = rng.random_range(0.0..PI);
    let b = rng.random_range(0.0..PI);
    let c = rng.random_range(0.0..PI);
    let mut v = vec![(a, b), (a, b + FRAC_PI_2), (a + FRAC_PI_2, c), (a + FRAC_PI_2, c + FRAC_PI_2)];
    if rng.random_bool(0.5) {
        for p in &mut v {
            *p = (p.1, p.0);
        }
    }
    v.shuffle(rng);
    v
}

fn orthogonal(x: f64, y: f64) -> bool {
    cos(x - y).abs() < 1e-12
}

fn grown_set(rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let m = rng.random_range(1..=4);
    'restart: loop {
        let mut v: Vec<(f64, f64)> = Vec::with_capacity(m);
        while v.len() < m {
            let mut placed = false;
            for _ in 0..64 {
                let pick = |rng: &mut dyn rand::RngCore, used: Vec<f64>| -> f64 {
                    if used.is_empty() || rng.random_bool(0.25) {
                        rng.random_range(0.0..PI)
                    } else {
                        let base = used[rng.random_range(0..used.len())];
                        if rng.random_bool(0.5) {
                            base + FRAC_PI_2
                        } else {
                            base
                        }
                    }
                };
                let a = pick(rng, v.iter().map(|p| p.0).collect());
                let b = pick(rng, v.iter().map(|p| p.1).collect());
                if v.iter().all(|&(x, y)| orthogonal(a, x) || orthogonal(b, y)) {
                    v.push((a, b));
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'restart;
            }
        }
        return v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extendibility::decide_upb;
    use crate::linalg::DEFAULT_RANK_TOL;
    use crate::rng::stream_rng;

    #[test]
    fn generated_sets_are_orthonormal_and_varied() {
        let mut rng = stream_rng(12, 0);
        let mut upb = 0;
        for _ in 0..60 {
            let s = random_small_set(&mut rng);
            assert!(s.orthonormality_deviation() < 1e-12);
            upb += decide_upb(&s, DEFAULT_RANK_TOL).unwrap().is_upb as usize;
        }
        assert!(upb > 5 && upb < 55, "{upb}");
    }

    #[test]
    fn grid_sees_the_obvious_cases() {
        let e = |t| ProductVector::new(vec![qubit(t), qubit(t)]);
        let one = ProductSet::new(vec![2, 2], vec![e(0.3)]).unwrap();
        assert!(grid_search_extendible(&one, 200, 0.05));
        let mut rng = stream_rng(2, 0);
        let angles = complete_basis(&mut rng);
        let full = ProductSet::new(
            vec![2, 2],
            angles.iter().map(|&(a, b)| ProductVector::new(vec![qubit(a), qubit(b)])).collect(),
        )
        .unwrap();
        assert!(grid_min_max_overlap(&full, 200) >= 0.5 - 1e-12);
    }
}
