//! The two theorems as data: base grids, claimed verdicts for every merge,
//! and the explicit orthogonal vectors that witness each extendible merge.

use alloc::vec::Vec;

use crate::extendibility::CounterexampleTemplate;
use crate::fixtures;
use crate::merge::MergePlan;
use crate::symbolic::{parse_grid, Symbol, SymbolGrid};

/// Singleton locals `(party letter, symbol)` and the merged-party vectors
/// left to annihilate.
struct TemplateSpec {
    merge: &'static str,
    singletons: &'static [(char, &'static str)],
    annihilate: &'static [(&'static str, &'static str)],
}

pub struct Theorem {
    pub number: u8,
    pub grid_name: &'static str,
    pub grid_text: &'static str,
    pub parties: usize,
    /// `(merge, is_upb)` for every pair, in lexicographic order.
    pub claims: &'static [(&'static str, bool)],
    templates: &'static [TemplateSpec],
}

pub static THEOREM_1: Theorem = Theorem {
    number: 1,
    grid_name: "eq01",
    grid_text: fixtures::EQ01,
    parties: 4,
    claims: &[
        ("AB", true),
        ("AC", true),
        ("AD", false),
        ("BC", false),
        ("BD", false),
        ("CD", false),
    ],
    templates: &[
        TemplateSpec {
            merge: "AD",
            singletons: &[('B', "0"), ('C', "a3")],
            annihilate: &[("0", "0"), ("a1", "a4'"), ("a1'", "b4'")],
        },
        TemplateSpec {
            merge: "BC",
            singletons: &[('A', "1"), ('D', "a4")],
            annihilate: &[("a2", "a3'"), ("1", "a3"), ("a2'", "1")],
        },
        TemplateSpec {
            merge: "BD",
            singletons: &[('A', "a1'"), ('C', "a3")],
            annihilate: &[("0", "0"), ("1", "b4"), ("a2'", "b4'")],
        },
        TemplateSpec {
            merge: "CD",
            singletons: &[('A', "a1"), ('B', "a2'")],
            annihilate: &[("0", "0"), ("1", "a4'"), ("a3", "a4")],
        },
    ],
};

pub static THEOREM_2: Theorem = Theorem {
    number: 2,
    grid_name: "eq04",
    grid_text: fixtures::EQ04,
    parties: 5,
    claims: &[
        ("AB", false),
        ("AC", true),
        ("AD", true),
        ("AE", true),
        ("BC", true),
        ("BD", true),
        ("BE", true),
        ("CD", false),
        ("CE", false),
        ("DE", false),
    ],
    templates: &[
        TemplateSpec {
            merge: "AB",
            singletons: &[('C', "1"), ('D', "a4'"), ('E', "a5")],
            annihilate: &[("a1", "a2"), ("1", "a2'"), ("a1'", "1")],
        },
        TemplateSpec {
            merge: "CD",
            singletons: &[('A', "a1'"), ('B', "a2"), ('E', "c5")],
            annihilate: &[("0", "0"), ("1", "a4"), ("c3'", "c4'")],
        },
        TemplateSpec {
            merge: "CE",
            singletons: &[('A', "a1'"), ('B', "a2"), ('D', "b4")],
            annihilate: &[("0", "0"), ("1", "a5"), ("c3'", "b5'")],
        },
        TemplateSpec {
            merge: "DE",
            singletons: &[('A', "a1'"), ('B', "a2"), ('C', "c3'")],
            annihilate: &[("0", "0"), ("a4", "a5"), ("c4'", "b5'")],
        },
    ],
};

pub fn theorem(number: u8) -> Option<&'static Theorem> {
    match number {
        1 => Some(&THEOREM_1),
        2 => Some(&THEOREM_2),
        _ => None,
    }
}

fn sym(text: &str) -> Symbol {
    Symbol::parse(text).expect("catalog symbols are well formed")
}

impl Theorem {
    pub fn grid(&self) -> SymbolGrid {
        parse_grid(self.grid_text).expect("bundled grid parses")
    }

    pub fn claim(&self, merge: &str) -> Option<bool> {
        self.claims.iter().find(|(m, _)| *m == merge).map(|&(_, u)| u)
    }

    pub fn plans(&self) -> Vec<MergePlan> {
        self.claims
            .iter()
            .map(|(m, _)| MergePlan::parse(self.parties, m).expect("catalog merges are valid"))
            .collect()
    }

    /// The explicit orthogonal product vector for an extendible merge.
    pub fn template(&self, merge: &str) -> Option<CounterexampleTemplate> {
        let entry = self.templates.iter().find(|t| t.merge == merge)?;
        Some(CounterexampleTemplate {
            plan: MergePlan::parse(self.parties, entry.merge).ok()?,
            singletons: entry
                .singletons
                .iter()
                .map(|&(p, s)| ((p as u8 - b'A') as usize, sym(s)))
                .collect(),
            annihilate: entry.annihilate.iter().map(|&(x, y)| (sym(x), sym(y))).collect(),
        })
    }

    /// The template with the first primed symbol of its recipe unprimed. The
    /// resulting vector misses the member it was meant to annihilate.
    pub fn negative_control(&self, merge: &str) -> Option<CounterexampleTemplate> {
        let mut t = self.template(merge)?;
        let slot = t
            .annihilate
            .iter_mut()
            .flat_map(|(x, y)| [x, y])
            .find(|s| matches!(s, Symbol::Label { primed: true, .. }))?;
        if let Symbol::Label { primed, .. } = slot {
            *primed = false;
        }
        Some(t)
    }
}

/// The eight merged-party columns `c₁…c₈` used in the singular-array count
/// are the `AC` locals of these rows of the eq01 grid (1-based).
pub const C_COLUMN_ROWS: [usize; 8] = [4, 2, 5, 6, 3, 1, 7, 8];

/// Subsets of `c₂…c₈` printed as the only singular 4×4 arrays.
pub const PRINTED_SINGULAR_ARRAYS: [[usize; 4]; 3] = [[2, 3, 5, 7], [2, 4, 5, 8], [3, 5, 6, 8]];
