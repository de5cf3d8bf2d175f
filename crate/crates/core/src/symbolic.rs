//! Symbol grids and their realization as real qubit product sets.
//!
//! A grid row is one product vector, a column is one qubit party. Cells are
//! `0`, `1` or a label such as `a3` / `a3'`. With angle `θ` assigned to a
//! label, `x ↦ (cos θ, sin θ)` and `x' ↦ (sin θ, −cos θ)`, so a label and its
//! primed partner are always an orthonormal qubit basis.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64};
use crate::merge::MergePlan;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Label { base: String, primed: bool },
}

impl Symbol {
    pub fn label(base: &str, primed: bool) -> Symbol {
        Symbol::Label {
            base: base.to_string(),
            primed,
        }
    }

    pub fn base(&self) -> Option<&str> {
        match self {
            Symbol::Label { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn parse(token: &str) -> core::result::Result<Symbol, String> {
        match token {
            "0" => return Ok(Symbol::Zero),
            "1" => return Ok(Symbol::One),
            _ => {}
        }
        let (base, primed) = match token.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (token, false),
        };
        let mut chars = base.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(format!("malformed token `{token}`")),
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("malformed token `{token}`"));
        }
        Ok(Symbol::label(base, primed))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Zero => f.write_str("0"),
            Symbol::One => f.write_str("1"),
            Symbol::Label { base, primed } => {
                f.write_str(base)?;
                if *primed {
                    f.write_str("'")?;
                }
                Ok(())
            }
        }
    }
}

/// Identity of an angle: the label's base, scoped to a column unless the
/// grid shares labels across columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleKey {
    pub column: Option<usize>,
    pub base: String,
}

impl AngleKey {
    pub fn new(column: Option<usize>, base: &str) -> Self {
        AngleKey {
            column,
            base: base.to_string(),
        }
    }
}

/// Renders as `<col>:<base>` with a 1-based column, or `<base>` when global.
impl fmt::Display for AngleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(c) => write!(f, "{}:{}", c + 1, self.base),
            None => f.write_str(&self.base),
        }
    }
}

impl core::str::FromStr for AngleKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad angle key `{s}`"));
        match s.split_once(':') {
            Some((col, base)) => {
                let col: usize = col.trim().parse().map_err(|_| bad())?;
                if col == 0 || base.is_empty() {
                    return Err(bad());
                }
                Ok(AngleKey::new(Some(col - 1), base.trim()))
            }
            None if !s.is_empty() => Ok(AngleKey::new(None, s.trim())),
            None => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGrid {
    cells: Vec<Vec<Symbol>>,
    column_scoped: bool,
}

impl SymbolGrid {
    pub fn new(cells: Vec<Vec<Symbol>>) -> Result<Self> {
        let width = cells.first().map_or(0, |r| r.len());
        for (i, row) in cells.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Parse {
                    row: i + 1,
                    column: row.len().min(width) + 1,
                    message: format!("row has {} cells, expected {width}", row.len()),
                });
            }
        }
        Ok(SymbolGrid {
            cells,
            column_scoped: true,
        })
    }

    /// Shares label angles across columns instead of scoping them.
    pub fn with_global_labels(mut self) -> Self {
        self.column_scoped = false;
        self
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells.first().map_or(0, |r| r.len())
    }

    pub fn column_scoped(&self) -> bool {
        self.column_scoped
    }

    pub fn cell(&self, row: usize, col: usize) -> &Symbol {
        &self.cells[row][col]
    }

    pub fn row(&self, row: usize) -> &[Symbol] {
        &self.cells[row]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &Symbol> {
        self.cells.iter().map(move |r| &r[col])
    }

    pub fn angle_key(&self, col: usize, base: &str) -> AngleKey {
        AngleKey::new(self.column_scoped.then_some(col), base)
    }

    /// Every angle key the grid needs, sorted.
    pub fn angle_keys(&self) -> BTreeSet<AngleKey> {
        let mut keys = BTreeSet::new();
        for row in &self.cells {
            for (c, s) in row.iter().enumerate() {
                if let Some(base) = s.base() {
                    keys.insert(self.angle_key(c, base));
                }
            }
        }
        keys
    }

    fn column_bases(&self, col: usize) -> BTreeSet<&str> {
        self.column(col).filter_map(Symbol::base).collect()
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i >= self.rows() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.rows(),
            });
        }
        Ok(())
    }

    fn check_col(&self, j: usize) -> Result<()> {
        if j >= self.cols() {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.cols(),
            });
        }
        Ok(())
    }
}

/// Whitespace-separated tokens, one row per line, padded to align columns.
impl fmt::Display for SymbolGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let widths: Vec<usize> = (0..self.cols())
            .map(|c| {
                self.column(c)
                    .map(|s| s.to_string().len())
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        for row in &self.cells {
            let mut line = String::new();
            for (c, s) in row.iter().enumerate() {
                let tok = s.to_string();
                line.push_str(&tok);
                if c + 1 < row.len() {
                    for _ in tok.len()..=widths[c] {
                        line.push(' ');
                    }
                }
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Parses grid text: one row per line, whitespace-separated tokens, `#`
/// starts a comment, blank lines are ignored. Labels are column scoped.
pub fn parse_grid(text: &str) -> Result<SymbolGrid> {
    let mut cells: Vec<Vec<Symbol>> = Vec::new();
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let row_no = cells.len() + 1;
        let row = content
            .split_whitespace()
            .enumerate()
            .map(|(c, tok)| {
                Symbol::parse(tok).map_err(|message| Error::Parse {
                    row: row_no,
                    column: c + 1,
                    message,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(row);
    }
    if cells.is_empty() {
        return Err(Error::Parse {
            row: 1,
            column: 1,
            message: "empty grid".to_string(),
        });
    }
    SymbolGrid::new(cells)
}

/// Angles in radians, keyed by label.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AngleAssignment {
    pub angles: BTreeMap<AngleKey, f64>,
    /// Seed and stream of the generator that produced the angles, if sampled.
    pub seed: Option<u64>,
    pub stream: Option<u64>,
}

impl AngleAssignment {
    pub fn new(angles: BTreeMap<AngleKey, f64>) -> Self {
        AngleAssignment {
            angles,
            seed: None,
            stream: None,
        }
    }

    pub fn get(&self, key: &AngleKey) -> Option<f64> {
        self.angles.get(key).copied()
    }

    pub fn set(&mut self, key: AngleKey, angle: f64) {
        self.angles.insert(key, angle);
    }

    /// Angle for a column-scoped label, with a 0-based column.
    pub fn scoped(&self, column: usize, base: &str) -> Option<f64> {
        self.get(&AngleKey::new(Some(column), base))
    }

    /// Checks that every angle the grid needs is present, lies in
    /// `(margin, π/2 − margin)`, and that distinct labels of one column are
    /// more than `min_separation` apart.
    pub fn validate(&self, grid: &SymbolGrid, margin: f64, min_separation: f64) -> Result<()> {
        let keys = grid.angle_keys();
        for key in &keys {
            let theta = self.get(key).ok_or_else(|| Error::MissingAngle {
                column: key.column.map_or(0, |c| c + 1),
                label: key.base.clone(),
            })?;
            if !(theta > margin && theta < FRAC_PI_2 - margin) {
                return Err(Error::InvalidArgument(format!(
                    "angle {key} = {theta} outside ({margin}, π/2 − {margin})"
                )));
            }
        }
        for col in 0..grid.cols() {
            let thetas: Vec<(String, f64)> = grid
                .column_bases(col)
                .into_iter()
                .map(|b| {
                    let k = grid.angle_key(col, b);
                    (k.to_string(), self.get(&k).unwrap_or(f64::NAN))
                })
                .collect();
            for (i, (ka, ta)) in thetas.iter().enumerate() {
                for (kb, tb) in &thetas[i + 1..] {
                    if (ta - tb).abs() <= min_separation {
                        return Err(Error::InvalidArgument(format!(
                            "angles {ka} and {kb} closer than {min_separation}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Realizes one symbol as a real qubit vector.
pub fn realize_symbol(symbol: &Symbol, angles: &AngleAssignment, key_column: Option<usize>) -> Result<CVec> {
    match symbol {
        Symbol::Zero => Ok(CVec::from_real(&[1.0, 0.0])),
        Symbol::One => Ok(CVec::from_real(&[0.0, 1.0])),
        Symbol::Label { base, primed } => {
            let key = AngleKey::new(key_column, base);
            let theta = angles.get(&key).ok_or_else(|| Error::MissingAngle {
                column: key_column.map_or(0, |c| c + 1),
                label: base.clone(),
            })?;
            let (s, c) = (libm::sin(theta), libm::cos(theta));
            Ok(if *primed {
                CVec::from_real(&[s, -c])
            } else {
                CVec::from_real(&[c, s])
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductVector {
    pub locals: Vec<CVec>,
}

impl ProductVector {
    pub fn new(locals: Vec<CVec>) -> Self {
        ProductVector { locals }
    }

    pub fn parties(&self) -> usize {
        self.locals.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.locals.iter().map(CVec::dim).collect()
    }

    /// `⟨self|other⟩` computed factor by factor.
    pub fn inner(&self, other: &ProductVector) -> C64 {
        self.locals
            .iter()
            .zip(&other.locals)
            .map(|(a, b)| a.inner(b))
            .product()
    }

    /// The full vector in the tensor product space, parties in order.
    pub fn to_vector(&self) -> CVec {
        let mut it = self.locals.iter();
        let first = it.next().cloned().unwrap_or_else(|| CVec::from_real(&[1.0]));
        it.fold(first, |acc, v| acc.kron(v))
    }

    pub fn normalized(&self) -> ProductVector {
        ProductVector::new(self.locals.iter().map(CVec::normalized).collect())
    }
}

/// Where a product set came from, so reports can name parties and verdicts
/// can be re-derived.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub grid: SymbolGrid,
    pub assignment: AngleAssignment,
    pub merge: Option<MergePlan>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductSet {
    dims: Vec<usize>,
    members: Vec<ProductVector>,
    party_names: Vec<String>,
    pub provenance: Option<Provenance>,
}

impl ProductSet {
    pub fn new(dims: Vec<usize>, members: Vec<ProductVector>) -> Result<Self> {
        for m in &members {
            if m.parties() != dims.len() {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    found: m.parties(),
                });
            }
            for (v, &d) in m.locals.iter().zip(&dims) {
                if v.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: v.dim(),
                    });
                }
            }
        }
        let party_names = (0..dims.len()).map(party_letter).collect();
        Ok(ProductSet {
            dims,
            members,
            party_names,
            provenance: None,
        })
    }

    pub fn with_party_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dims.len());
        self.party_names = names;
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn members(&self) -> &[ProductVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn party_names(&self) -> &[String] {
        &self.party_names
    }

    /// Dimension of the full tensor product space.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// `max |⟨u_i|u_j⟩ − δ_ij|` over all member pairs.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, u) in self.members.iter().enumerate() {
            for (j, v) in self.members.iter().enumerate().skip(i) {
                let g = u.inner(v);
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev = dev.max((g - target).norm());
            }
        }
        dev
    }

    /// Applies `f` to every member's local at `party`.
    pub fn map_party(&self, party: usize, f: impl Fn(&CVec) -> CVec) -> ProductSet {
        let mut out = self.clone();
        for m in &mut out.members {
            m.locals[party] = f(&m.locals[party]);
        }
        out.provenance = None;
        out
    }

    pub fn select_members(&self, order: &[usize]) -> ProductSet {
        let mut out = self.clone();
        out.members = order.iter().map(|&i| self.members[i].clone()).collect();
        out.provenance = None;
        out
    }
}

/// `A`, `B`, … for party indices 0, 1, ….
pub fn party_letter(index: usize) -> String {
    let c = (b'A' + (index % 26) as u8) as char;
    if index < 26 {
        c.to_string()
    } else {
        format!("{c}{}", index / 26)
    }
}

/// True iff every member is unit-norm and all pairwise inner products are at
/// most `tol` in modulus.
pub fn check_orthonormal(set: &ProductSet, tol: f64) -> bool {
    set.orthonormality_deviation() <= tol
}

/// Realizes every row of the grid as a product vector over qubit parties.
pub fn realize_grid(grid: &SymbolGrid, angles: &AngleAssignment) -> Result<ProductSet> {
    let mut members = Vec::with_capacity(grid.rows());
    for r in 0..grid.rows() {
        let locals = grid
            .row(r)
            .iter()
            .enumerate()
            .map(|(c, s)| realize_symbol(s, angles, grid.column_scoped.then_some(c)))
            .collect::<Result<Vec<_>>>()?;
        members.push(ProductVector::new(locals));
    }
    let mut set = ProductSet::new(alloc::vec![2; grid.cols()], members)?;
    set.provenance = Some(Provenance {
        grid: grid.clone(),
        assignment: angles.clone(),
        merge: None,
    });
    Ok(set)
}

/// Grid rewrites. Indices are 0-based; the text form is 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    Relabel {
        column: usize,
        from: String,
        to: String,
    },
    SwapPrime {
        column: usize,
        base: String,
    },
}

impl Transform {
    pub fn apply(&self, grid: &SymbolGrid) -> Result<SymbolGrid> {
        let mut g = grid.clone();
        match self {
            Transform::SwapRows(i, j) => {
                g.check_row(*i)?;
                g.check_row(*j)?;
                g.cells.swap(*i, *j);
            }
            Transform::SwapCols(i, j) => {
                g.check_col(*i)?;
                g.check_col(*j)?;
                for row in &mut g.cells {
                    row.swap(*i, *j);
                }
            }
            Transform::Relabel { column, from, to } => {
                g.check_col(*column)?;
                if from != to && g.column_bases(*column).contains(to.as_str()) {
                    return Err(Error::RelabelCollision {
                        column: column + 1,
                        label: to.clone(),
                    });
                }
                for row in &mut g.cells {
                    if let Symbol::Label { base, .. } = &mut row[*column] {
                        if base == from {
                            *base = to.clone();
                        }
                    }
                }
            }
            Transform::SwapPrime { column, base } => {
                g.check_col(*column)?;
                for row in &mut g.cells {
                    if let Symbol::Label { base: b, primed } = &mut row[*column] {
                        if b == base {
                            *primed = !*primed;
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Rewrites angle keys so that realizing the transformed grid gives the
    /// same vectors (up to sign) as realizing the original. A prime swap
    /// shifts the angle by π/2, which may leave the sampling interval.
    pub fn map_assignment(&self, angles: &AngleAssignment) -> Result<AngleAssignment> {
        let mut out = angles.clone();
        match self {
            Transform::SwapRows(..) => {}
            Transform::SwapCols(i, j) => {
                out.angles = angles
                    .angles
                    .iter()
                    .map(|(k, &v)| {
                        let column = k.column.map(|c| {
                            if c == *i {
                                *j
                            } else if c == *j {
                                *i
                            } else {
                                c
                            }
                        });
                        (AngleKey::new(column, &k.base), v)
                    })
                    .collect();
            }
            Transform::Relabel { column, from, to } => {
                let key = AngleKey::new(Some(*column), from);
                if let Some(v) = out.angles.remove(&key) {
                    out.angles.insert(AngleKey::new(Some(*column), to), v);
                }
            }
            Transform::SwapPrime { column, base } => {
                if let Some(v) = out.angles.get_mut(&AngleKey::new(Some(*column), base)) {
                    *v += FRAC_PI_2;
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::SwapRows(i, j) => write!(f, "swap_rows {} {}", i + 1, j + 1),
            Transform::SwapCols(i, j) => write!(f, "swap_cols {} {}", i + 1, j + 1),
            Transform::Relabel { column, from, to } => {
                write!(f, "relabel {} {from} {to}", column + 1)
            }
            Transform::SwapPrime { column, base } => write!(f, "swap_prime {} {base}", column + 1),
        }
    }
}

/// Parses a transformation script: one transform per line, `#` comments,
/// 1-based indices.
///
/// ```text
/// swap_rows 3 5
/// swap_cols 2 3
/// relabel 2 a3 a2
/// swap_prime 2 a2
/// ```
pub fn parse_script(text: &str) -> Result<Vec<Transform>> {
    let mut script = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |column: usize, message: String| Error::Parse {
            row: line_no + 1,
            column,
            message,
        };
        let words: Vec<&str> = content.split_whitespace().collect();
        let index = |k: usize| -> Result<usize> {
            let w = words.get(k).ok_or_else(|| err(k + 1, "missing argument".to_string()))?;
            match w.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n - 1),
                _ => Err(err(k + 1, format!("expected a 1-based index, found `{w}`"))),
            }
        };
        let label = |k: usize| -> Result<String> {
            let w = words.get(k).ok_or_else(|| err(k + 1, "missing argument".to_string()))?;
            match Symbol::parse(w) {
                Ok(Symbol::Label { base, primed: false }) => Ok(base),
                _ => Err(err(k + 1, format!("expected an unprimed label, found `{w}`"))),
            }
        };
        let (t, arity) = match words[0] {
            "swap_rows" => (Transform::SwapRows(index(1)?, index(2)?), 3),
            "swap_cols" => (Transform::SwapCols(index(1)?, index(2)?), 3),
            "relabel" => (
                Transform::Relabel {
                    column: index(1)?,
                    from: label(2)?,
                    to: label(3)?,
                },
                4,
            ),
            "swap_prime" => (
                Transform::SwapPrime {
                    column: index(1)?,
                    base: label(2)?,
                },
                3,
            ),
            other => return Err(err(1, format!("unknown transform `{other}`"))),
        };
        if words.len() != arity {
            return Err(err(arity + 1, "too many arguments".to_string()));
        }
        script.push(t);
    }
    Ok(script)
}

pub fn apply_script(grid: &SymbolGrid, script: &[Transform]) -> Result<SymbolGrid> {
    script.iter().try_fold(grid.clone(), |g, t| t.apply(&g))
}

pub fn map_assignment(angles: &AngleAssignment, script: &[Transform]) -> Result<AngleAssignment> {
    script.iter().try_fold(angles.clone(), |a, t| t.map_assignment(&a))
}

/// Where each original column ends up after the script's column swaps.
pub fn column_permutation(cols: usize, script: &[Transform]) -> Vec<usize> {
    // position[c] = current column of original column c
    let mut position: Vec<usize> = (0..cols).collect();
    for t in script {
        if let Transform::SwapCols(i, j) = t {
            for p in &mut position {
                if *p == *i {
                    *p = *j;
                } else if *p == *j {
                    *p = *i;
                }
            }
        }
    }
    position
}

/// Where each original row ends up after the script's row swaps.
pub fn row_permutation(rows: usize, script: &[Transform]) -> Vec<usize> {
    let mut position: Vec<usize> = (0..rows).collect();
    for t in script {
        if let Transform::SwapRows(i, j) = t {
            for p in &mut position {
                if *p == *i {
                    *p = *j;
                } else if *p == *j {
                    *p = *i;
                }
            }
        }
    }
    position
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rng::{sample_assignment, SamplingParams};
    use alloc::vec;

    #[test]
    fn parse_small_grid() {
        let g = parse_grid("0 0\n1 a'").unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 2));
        assert_eq!(g.cell(0, 0), &Symbol::Zero);
        assert_eq!(g.cell(0, 1), &Symbol::Zero);
        assert_eq!(g.cell(1, 0), &Symbol::One);
        assert_eq!(g.cell(1, 1), &Symbol::label("a", true));
        assert!(g.column_scoped());
    }

    #[test]
    fn parse_errors_carry_location() {
        match parse_grid("0 0\n1 a''") {
            Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_grid("0 0\n1") {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_grid("0 2").is_err());
        assert!(parse_grid("0 '").is_err());
        assert!(parse_grid("# only a comment\n").is_err());
    }

    #[test]
    fn fixtures_parse() {
        let g = parse_grid(fixtures::EQ01).unwrap();
        assert_eq!((g.rows(), g.cols()), (8, 4));
        assert!(g.row(0).iter().all(|s| *s == Symbol::Zero));

        let g = parse_grid(fixtures::EQ04).unwrap();
        assert_eq!((g.rows(), g.cols()), (8, 5));
        let row2: Vec<String> = g.row(1).iter().map(|s| s.to_string()).collect();
        assert_eq!(row2, ["0", "0", "1", "a4", "a5"]);
    }

    #[test]
    fn display_round_trips() {
        for (_, text) in fixtures::ALL.iter().filter(|(n, _)| n.ends_with(".grid")) {
            let g = parse_grid(text).unwrap();
            assert_eq!(parse_grid(&g.to_string()).unwrap(), g);
        }
    }

    #[test]
    fn realize_symbols() {
        let mut a = AngleAssignment::default();
        let x3 = 0.7;
        a.set(AngleKey::new(Some(2), "a3"), x3);
        assert_eq!(
            realize_symbol(&Symbol::Zero, &a, Some(0)).unwrap(),
            CVec::from_real(&[1.0, 0.0])
        );
        let p = realize_symbol(&Symbol::label("a3", true), &a, Some(2)).unwrap();
        assert_eq!(p, CVec::from_real(&[libm::sin(x3), -libm::cos(x3)]));
        let u = realize_symbol(&Symbol::label("a3", false), &a, Some(2)).unwrap();
        assert!(u.inner(&p).norm() < 1e-15);
        assert!(matches!(
            realize_symbol(&Symbol::label("a3", false), &a, Some(1)),
            Err(Error::MissingAngle { .. })
        ));
    }

    #[test]
    fn realize_fixture_grids() {
        for (text, parties) in [(fixtures::EQ01, 4), (fixtures::EQ04, 5)] {
            let g = parse_grid(text).unwrap();
            let a = sample_assignment(&g, &SamplingParams::default(), 1, 0);
            let s = realize_grid(&g, &a).unwrap();
            assert_eq!(s.len(), 8);
            assert_eq!(s.dims(), vec![2; parties].as_slice());
        }
        let one = realize_grid(&parse_grid("0").unwrap(), &AngleAssignment::default()).unwrap();
        assert_eq!(one.members()[0].locals, vec![CVec::from_real(&[1.0, 0.0])]);
    }

    #[test]
    fn fixtures_are_orthonormal_at_sampled_angles() {
        for text in [fixtures::EQ00, fixtures::EQ01, fixtures::EQ03, fixtures::EQ04] {
            let g = parse_grid(text).unwrap();
            for stream in 0..20 {
                let a = sample_assignment(&g, &SamplingParams::default(), 42, stream);
                a.validate(&g, 0.05, 1e-3).unwrap();
                assert!(check_orthonormal(&realize_grid(&g, &a).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn non_orthogonal_pair_detected() {
        let g = parse_grid("0 0\n0 a").unwrap();
        let mut a = AngleAssignment::default();
        a.set(AngleKey::new(Some(1), "a"), 0.4);
        assert!(!check_orthonormal(&realize_grid(&g, &a).unwrap(), 1e-10));
    }

    #[test]
    fn row_swaps_turn_eq00_into_eq01() {
        let eq00 = parse_grid(fixtures::EQ00).unwrap();
        let eq01 = parse_grid(fixtures::EQ01).unwrap();
        let script = parse_script("swap_rows 3 5\nswap_rows 4 6").unwrap();
        assert_eq!(apply_script(&eq00, &script).unwrap(), eq01);
    }

    #[test]
    fn case6_script_reaches_eq03() {
        let eq01 = parse_grid(fixtures::EQ01).unwrap();
        let eq03 = parse_grid(fixtures::EQ03).unwrap();
        let script = parse_script(fixtures::CASE6_SCRIPT).unwrap();
        assert_eq!(apply_script(&eq01, &script).unwrap(), eq03);
    }

    #[test]
    fn double_swap_is_identity() {
        let g = parse_grid(fixtures::EQ01).unwrap();
        let twice = [Transform::SwapRows(0, 1), Transform::SwapRows(0, 1)];
        assert_eq!(apply_script(&g, &twice).unwrap(), g);
    }

    #[test]
    fn transform_errors() {
        let g = parse_grid(fixtures::EQ01).unwrap();
        assert!(matches!(
            Transform::SwapRows(0, 8).apply(&g),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            Transform::SwapCols(4, 0).apply(&g),
            Err(Error::IndexOutOfRange { .. })
        ));
        let collide = Transform::Relabel {
            column: 3,
            from: "a4".into(),
            to: "b4".into(),
        };
        assert!(matches!(collide.apply(&g), Err(Error::RelabelCollision { .. })));
        assert!(parse_script("swap_rows 0 1").is_err());
        assert!(parse_script("rotate 1 2").is_err());
        assert!(parse_script("swap_prime 1 a'").is_err());
        assert!(parse_script("swap_rows 1 2 3").is_err());
    }

    #[test]
    fn script_text_round_trips() {
        let script = parse_script(fixtures::CASE6_SCRIPT).unwrap();
        let text: String = script.iter().map(|t| format!("{t}\n")).collect();
        assert_eq!(parse_script(&text).unwrap(), script);
    }

    #[test]
    fn mapped_assignment_realizes_same_vectors() {
        let eq01 = parse_grid(fixtures::EQ01).unwrap();
        let script = parse_script(fixtures::CASE6_SCRIPT).unwrap();
        let target = apply_script(&eq01, &script).unwrap();
        let rows = row_permutation(8, &script);
        let cols = column_permutation(4, &script);
        for stream in 0..10 {
            let a = sample_assignment(&eq01, &SamplingParams::default(), 9, stream);
            let before = realize_grid(&eq01, &a).unwrap();
            let after = realize_grid(&target, &map_assignment(&a, &script).unwrap()).unwrap();
            assert!(check_orthonormal(&after, 1e-12));
            for (r, m) in before.members().iter().enumerate() {
                let moved = &after.members()[rows[r]];
                for (c, v) in m.locals.iter().enumerate() {
                    // equal up to sign
                    let w = &moved.locals[cols[c]];
                    assert!((v.inner(w).norm() - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn angle_key_text_form() {
        let k: AngleKey = "3:a3".parse().unwrap();
        assert_eq!(k, AngleKey::new(Some(2), "a3"));
        assert_eq!(k.to_string(), "3:a3");
        assert!("0:a".parse::<AngleKey>().is_err());
        assert_eq!("x".parse::<AngleKey>().unwrap(), AngleKey::new(None, "x"));
    }

    #[test]
    fn realization_is_deterministic() {
        let g = parse_grid(fixtures::EQ04).unwrap();
        let a = sample_assignment(&g, &SamplingParams::default(), 5, 3);
        let s1 = realize_grid(&parse_grid(fixtures::EQ04).unwrap(), &a).unwrap();
        let s2 = realize_grid(&g, &a).unwrap();
        assert_eq!(s1, s2);
    }
}
