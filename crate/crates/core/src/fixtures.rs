//! Bundled grids and scripts.

/// Four-qubit UPB of size eight.
pub const EQ00: &str = include_str!("../fixtures/eq00.grid");
/// The same UPB with rows 3↔5 and 4↔6 exchanged; the base for the 2×2×4 merges.
pub const EQ01: &str = include_str!("../fixtures/eq01.grid");
/// Row-permuted form of [`EQ01`] reached by [`CASE6_SCRIPT`].
pub const EQ03: &str = include_str!("../fixtures/eq03.grid");
/// Five-qubit UPB of size eight; the base for the 2×2×2×4 merges.
pub const EQ04: &str = include_str!("../fixtures/eq04.grid");
/// Transformation script carrying [`EQ01`] onto [`EQ03`].
pub const CASE6_SCRIPT: &str = include_str!("../fixtures/case6.script");

/// `(name, contents)` for every bundled fixture, file names included.
pub const ALL: &[(&str, &str)] = &[
    ("eq00.grid", EQ00),
    ("eq01.grid", EQ01),
    ("eq03.grid", EQ03),
    ("eq04.grid", EQ04),
    ("case6.script", CASE6_SCRIPT),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find_map(|&(file, text)| {
        let stem = file.split('.').next().unwrap_or(file);
        (file == name || stem == name).then_some(text)
    })
}
