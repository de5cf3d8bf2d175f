//! Fusing two parties into one.
//!
//! Merging parties `i < j` replaces their locals `|x⟩, |y⟩` by `|x⟩⊗|y⟩` in a
//! party of dimension `dᵢ·dⱼ`. The untouched parties keep their original
//! order and the merged party goes last, so merging `AC` of a five-qubit set
//! yields parties `B, D, E, AC`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};
use crate::symbolic::{party_letter, ProductSet, ProductVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergePlan {
    parties: usize,
    pair: Option<(usize, usize)>,
}

impl MergePlan {
    /// Every party stays on its own.
    pub fn identity(parties: usize) -> Self {
        MergePlan { parties, pair: None }
    }

    /// Merges parties `i` and `j` (0-based, any order).
    pub fn pair(parties: usize, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidMerge(format!("party {} listed twice", party_letter(i))));
        }
        for k in [i, j] {
            if k >= parties {
                return Err(Error::InvalidMerge(format!(
                    "party index {k} out of range for {parties} parties"
                )));
            }
        }
        Ok(MergePlan {
            parties,
            pair: Some((i.min(j), i.max(j))),
        })
    }

    /// Builds a plan from a partition of `0..parties`. At most one group may
    /// have two members; larger groups and several pairs are rejected.
    pub fn from_groups(parties: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut seen = alloc::vec![false; parties];
        let mut pair = None;
        for g in groups {
            for &k in g {
                if k >= parties {
                    return Err(Error::InvalidMerge(format!("party index {k} out of range")));
                }
                if core::mem::replace(&mut seen[k], true) {
                    return Err(Error::InvalidMerge(format!(
                        "party {} appears in two groups",
                        party_letter(k)
                    )));
                }
            }
            match g.len() {
                0 => return Err(Error::InvalidMerge("empty group".into())),
                1 => {}
                2 if pair.is_none() => pair = Some((g[0], g[1])),
                2 => return Err(Error::InvalidMerge("only one merged pair is supported".into())),
                _ => return Err(Error::InvalidMerge("groups of three or more are not supported".into())),
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidMerge(format!("party {} not covered", party_letter(k))));
        }
        match pair {
            Some((i, j)) => MergePlan::pair(parties, i, j),
            None => Ok(MergePlan::identity(parties)),
        }
    }

    /// Parses two party letters such as `AC`.
    pub fn parse(parties: usize, text: &str) -> Result<Self> {
        let letters: Vec<char> = text.trim().chars().collect();
        if letters.len() != 2 {
            return Err(Error::InvalidMerge(format!("expected two party letters, found `{text}`")));
        }
        let index = |c: char| -> Result<usize> {
            let u = c.to_ascii_uppercase();
            if u.is_ascii_uppercase() {
                Ok((u as u8 - b'A') as usize)
            } else {
                Err(Error::InvalidMerge(format!("`{c}` is not a party letter")))
            }
        };
        MergePlan::pair(parties, index(letters[0])?, index(letters[1])?)
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn merged_pair(&self) -> Option<(usize, usize)> {
        self.pair
    }

    /// Every two-party merge of `parties` qubits in lexicographic order
    /// (`AB, AC, …`).
    pub fn all_pairs(parties: usize) -> Vec<MergePlan> {
        let mut out = Vec::new();
        for i in 0..parties {
            for j in i + 1..parties {
                out.push(MergePlan {
                    parties,
                    pair: Some((i, j)),
                });
            }
        }
        out
    }

    /// Output parties as groups of original indices: singletons first in
    /// original order, then the merged pair.
    pub fn output_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = (0..self.parties)
            .filter(|k| self.pair.is_none_or(|(i, j)| *k != i && *k != j))
            .map(|k| alloc::vec![k])
            .collect();
        if let Some((i, j)) = self.pair {
            groups.push(alloc::vec![i, j]);
        }
        groups
    }

    /// Position of original party `k` among the output parties.
    pub fn output_position(&self, k: usize) -> usize {
        self.output_groups()
            .iter()
            .position(|g| g.contains(&k))
            .expect("party index in range")
    }
}

impl fmt::Display for MergePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pair {
            Some((i, j)) => write!(f, "{}{}", party_letter(i), party_letter(j)),
            None => f.write_str("none"),
        }
    }
}

pub fn merge(set: &ProductSet, plan: &MergePlan) -> Result<ProductSet> {
    if plan.parties() != set.parties() {
        return Err(Error::InvalidMerge(format!(
            "plan is for {} parties, set has {}",
            plan.parties(),
            set.parties()
        )));
    }
    let groups = plan.output_groups();
    let names: Vec<String> = groups
        .iter()
        .map(|g| g.iter().map(|&k| set.party_names()[k].as_str()).collect())
        .collect();
    let dims = groups
        .iter()
        .map(|g| g.iter().map(|&k| set.dims()[k]).product())
        .collect();
    let members = set
        .members()
        .iter()
        .map(|m| {
            ProductVector::new(
                groups
                    .iter()
                    .map(|g| fuse(g.iter().map(|&k| &m.locals[k])))
                    .collect(),
            )
        })
        .collect();
    let mut out = ProductSet::new(dims, members)?.with_party_names(names);
    out.provenance = set.provenance.clone().map(|mut p| {
        p.merge = Some(plan.clone());
        p
    });
    debug_assert!(
        (out.orthonormality_deviation() - set.orthonormality_deviation()).abs() < 1e-12,
        "merge changed inner products"
    );
    Ok(out)
}

fn fuse<'a>(mut locals: impl Iterator<Item = &'a CVec>) -> CVec {
    let first = locals.next().expect("nonempty group").clone();
    locals.fold(first, |acc, v| acc.kron(v))
}

/// `dᵢdⱼ × m` matrix whose columns are the merged-party locals of the members.
pub fn merged_party_matrix(set: &ProductSet, plan: &MergePlan) -> Result<CMat> {
    let (i, j) = plan.merged_pair().ok_or(Error::NoMergedGroup)?;
    if plan.parties() != set.parties() {
        return Err(Error::InvalidMerge("plan does not match the set".into()));
    }
    let cols: Vec<CVec> = set
        .members()
        .iter()
        .map(|m| m.locals[i].kron(&m.locals[j]))
        .collect();
    Ok(CMat::from_columns(&cols.iter().collect::<Vec<_>>()))
}
