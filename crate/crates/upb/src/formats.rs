//! On-disk formats: grids, scripts, angle assignments and density operators.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use upb_core::linalg::{CMat, CVec, C64};
use upb_core::merge::MergePlan;
use upb_core::ppt::{Certifications, DensityOperator};
use upb_core::symbolic::{parse_grid, parse_script, AngleAssignment, AngleKey, SymbolGrid, Transform};
use upb_core::{fixtures, Error};

/// Version tag written into every JSON artifact.
pub const SCHEMA_VERSION: &str = "1";

/// Environment variable naming a directory that overrides bundled fixtures.
pub const FIXTURE_ENV: &str = "UPB_FIXTURES";

/// Text of a grid or script given as a path, a bundled fixture name
/// (`eq01` or `eq01.grid`), or a file in the `UPB_FIXTURES` directory.
/// Returns the text and a label describing where it came from.
pub fn resolve_text(name: &str) -> Result<(String, String)> {
    let path = Path::new(name);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok((text, name.to_string()));
    }
    if let Ok(dir) = std::env::var(FIXTURE_ENV) {
        for candidate in fixture_candidates(name) {
            let p = PathBuf::from(&dir).join(&candidate);
            if p.is_file() {
                let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                return Ok((text, format!("{FIXTURE_ENV}:{candidate}")));
            }
        }
        bail!("fixture `{name}` not found in {FIXTURE_ENV}={dir}");
    }
    let text = fixtures::by_name(name).ok_or_else(|| anyhow!("no file or bundled fixture named `{name}`"))?;
    Ok((text.to_string(), format!("bundled:{}", canonical_fixture_name(name))))
}

fn fixture_candidates(name: &str) -> Vec<String> {
    if name.contains('.') {
        vec![name.to_string()]
    } else {
        vec![format!("{name}.grid"), format!("{name}.script"), name.to_string()]
    }
}

fn canonical_fixture_name(name: &str) -> String {
    fixtures::ALL
        .iter()
        .map(|(f, _)| *f)
        .find(|f| *f == name || f.split('.').next() == Some(name))
        .unwrap_or(name)
        .to_string()
}

pub fn load_grid(name: &str) -> Result<(SymbolGrid, String)> {
    let (text, source) = resolve_text(name)?;
    let grid = parse_grid(&text).with_context(|| format!("parsing grid {source}"))?;
    Ok((grid, source))
}

pub fn load_script(name: &str) -> Result<(Vec<Transform>, String)> {
    let (text, source) = resolve_text(name)?;
    let script = parse_script(&text).with_context(|| format!("parsing script {source}"))?;
    Ok((script, source))
}

/// `--merge` value: two party letters, or `none`/absent for no merge.
pub fn parse_merge(parties: usize, name: Option<&str>) -> Result<MergePlan> {
    match name {
        None => Ok(MergePlan::identity(parties)),
        Some(s) if s.eq_ignore_ascii_case("none") => Ok(MergePlan::identity(parties)),
        Some(s) => Ok(MergePlan::parse(parties, s)?),
    }
}

/// Angle assignment file: `{"labels": {"<col>:<base>": radians}, "seed": n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssignmentFile {
    pub labels: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stream: Option<u64>,
}

impl From<&AngleAssignment> for AssignmentFile {
    fn from(a: &AngleAssignment) -> Self {
        AssignmentFile {
            labels: a.angles.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            seed: a.seed,
            stream: a.stream,
        }
    }
}

impl AssignmentFile {
    pub fn to_assignment(&self) -> Result<AngleAssignment, Error> {
        let mut angles = BTreeMap::new();
        for (k, v) in &self.labels {
            angles.insert(k.parse::<AngleKey>()?, *v);
        }
        Ok(AngleAssignment {
            angles,
            seed: self.seed,
            stream: self.stream,
        })
    }
}

pub fn read_assignment(path: &Path) -> Result<AngleAssignment> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: AssignmentFile =
        serde_json::from_str(&text).with_context(|| format!("parsing assignment {}", path.display()))?;
    Ok(file.to_assignment()?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?).with_context(|| format!("writing {}", path.display()))
}

/// Complex number as `[re, im]`.
pub type Pair = [f64; 2];

pub fn pairs(v: &CVec) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutRecord {
    pub cut: String,
    pub left: Vec<usize>,
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CertificationRecord {
    pub trace: Option<f64>,
    pub unit_trace: Option<bool>,
    pub hermitian_deviation: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub psd: Option<bool>,
    pub ppt_all_cuts: Option<bool>,
    pub cuts: Vec<CutRecord>,
    pub rank: Option<usize>,
    pub entangled: Option<bool>,
    pub warnings: Vec<String>,
}

impl CertificationRecord {
    pub fn new(c: &Certifications, names: &[String]) -> Self {
        CertificationRecord {
            trace: c.trace,
            unit_trace: c.unit_trace,
            hermitian_deviation: c.hermitian_deviation,
            min_eigenvalue: c.min_eigenvalue,
            psd: c.psd,
            ppt_all_cuts: c.ppt_all_cuts,
            cuts: c
                .cuts
                .iter()
                .map(|k| CutRecord {
                    cut: k.cut.label(names),
                    left: k.cut.left.clone(),
                    min_eigenvalue: k.min_eigenvalue,
                    ppt: k.ppt,
                })
                .collect(),
            rank: c.rank,
            entangled: c.entangled,
            warnings: c.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateProvenance {
    pub grid_source: String,
    pub grid: String,
    pub merge: String,
    pub assignment: AssignmentFile,
}

/// State file: the operator row by row as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: String,
    pub dims: Vec<usize>,
    pub party_names: Vec<String>,
    pub matrix: Vec<Vec<Pair>>,
    pub members: usize,
    pub prefactor: Option<f64>,
    pub printed_prefactor: Option<f64>,
    pub provenance: Option<StateProvenance>,
    pub certifications: CertificationRecord,
}

impl StateFile {
    pub fn new(rho: &DensityOperator, provenance: Option<StateProvenance>) -> Self {
        let d = rho.total_dim();
        StateFile {
            schema_version: SCHEMA_VERSION.into(),
            dims: rho.dims.clone(),
            party_names: rho.party_names.clone(),
            matrix: (0..d)
                .map(|i| (0..d).map(|j| [rho.mat[(i, j)].re, rho.mat[(i, j)].im]).collect())
                .collect(),
            members: rho.source.as_ref().map_or(0, |s| s.len()),
            prefactor: rho.prefactor,
            printed_prefactor: rho.printed_prefactor,
            provenance,
            certifications: CertificationRecord::new(&rho.certifications, &rho.party_names),
        }
    }

    /// The operator only; certifications are recomputed by the consumer.
    pub fn to_operator(&self) -> Result<DensityOperator> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported state schema version `{}`", self.schema_version);
        }
        let d = self.matrix.len();
        if self.matrix.iter().any(|r| r.len() != d) {
            bail!("state matrix is not square");
        }
        let data = self.matrix.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
        let mut rho = DensityOperator::new(self.dims.clone(), CMat::from_row_major(d, d, data)?)?;
        if self.party_names.len() == self.dims.len() {
            rho.party_names = self.party_names.clone();
        }
        rho.prefactor = self.prefactor;
        rho.printed_prefactor = self.printed_prefactor;
        Ok(rho)
    }
}

pub fn read_state(path: &Path) -> Result<StateFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing state {}", path.display()))
}
