//! JSON file schemas: operad presentations, algebras, deformations,
//! base homomorphisms and Harrison cocycles, with conversion to and from
//! the core types. Rationals cross the text boundary as `p/q` strings
//! (plain JSON integers are accepted on input).

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use opdef_core::cohomology::CochainSpaces;
use opdef_core::deform::DeformationSeries;
use opdef_core::matrix::{Matrix, Vector};
use opdef_core::operad::{koszul_dual, preset, OperadPresentation};
use opdef_core::palgebra::PAlgebra;
use opdef_core::perm::Perm;
use opdef_core::scalar::{self, Scalar};
use opdef_core::smodule::RightSModule;

use crate::basespec::{self, ParsedBase};

/// A rational number on the wire: `"p/q"`, `"p"`, or a plain integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rat {
    Int(i64),
    Text(String),
}

impl Rat {
    pub fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Rat::Int(n) => Ok(scalar::int(*n)),
            Rat::Text(t) => {
                scalar::parse(t).ok_or_else(|| anyhow!("bad rational literal `{t}`"))
            }
        }
    }

    pub fn from_scalar(s: &Scalar) -> Rat {
        Rat::Text(scalar::display(s))
    }
}

pub fn rats_to_vector(rats: &[Rat]) -> Result<Vector> {
    rats.iter().map(Rat::to_scalar).collect()
}

pub fn vector_to_rats(v: &[Scalar]) -> Vec<Rat> {
    v.iter().map(Rat::from_scalar).collect()
}

/// Serialized operad presentation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperadFile {
    pub name: String,
    pub e: EModuleFile,
    /// Coordinate vectors in the arity-3 basis, ordered `(a, b, rho)`
    /// lexicographically with `rho` in the order id, (1 2 3), (1 3 2).
    pub relations: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EModuleFile {
    pub dim: usize,
    /// Action matrix of the transposition (1 2), row-major.
    pub swap_action: Vec<Vec<Rat>>,
}

impl OperadFile {
    pub fn to_presentation(&self) -> Result<OperadPresentation> {
        let d = self.e.dim;
        if self.e.swap_action.len() != d
            || self.e.swap_action.iter().any(|r| r.len() != d)
        {
            bail!("swap_action must be a {d} x {d} matrix");
        }
        let mut gen = Matrix::zero(d, d);
        for (i, row) in self.e.swap_action.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                *gen.at_mut(i, j) = r.to_scalar()?;
            }
        }
        let e = RightSModule::new(2, vec![gen])
            .map_err(|err| anyhow!("invalid generator module: {err}"))?;
        let spanning: Vec<Vector> = self
            .relations
            .iter()
            .map(|v| rats_to_vector(v))
            .collect::<Result<_>>()?;
        OperadPresentation::new(&self.name, &e, &spanning)
            .map_err(|err| anyhow!("invalid presentation: {err}"))
    }

    pub fn from_presentation(p: &OperadPresentation) -> OperadFile {
        let t = Perm::transposition(2, 1, 2);
        let gen = p.e().act(&t);
        let d = p.e().dim();
        OperadFile {
            name: p.name.clone(),
            e: EModuleFile {
                dim: d,
                swap_action: (0..d)
                    .map(|i| (0..d).map(|j| Rat::from_scalar(gen.at(i, j))).collect())
                    .collect(),
            },
            relations: p.relations().iter().map(|v| vector_to_rats(v)).collect(),
        }
    }
}

/// How an algebra file names its operad.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperadRef {
    Preset(String),
    File { file: String },
    Inline(OperadFile),
}

impl OperadRef {
    pub fn resolve(&self, relative_to: &Path) -> Result<OperadPresentation> {
        match self {
            OperadRef::Preset(name) => {
                preset(name).map_err(|e| anyhow!("unknown operad preset: {e}"))
            }
            OperadRef::File { file } => {
                let path = relative_to.join(file);
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading operad file {}", path.display()))?;
                let parsed: OperadFile =
                    serde_json::from_str(&text).context("parsing operad file")?;
                parsed.to_presentation()
            }
            OperadRef::Inline(inline) => inline.to_presentation(),
        }
    }
}

/// Serialized algebra: structure constants per generator basis element,
/// `c[k][i][j][l]` the `v_l`-coefficient of `a(e_k)(v_i, v_j)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub operad: OperadRef,
    pub dim: usize,
    pub structure_constants: Vec<Vec<Vec<Vec<Rat>>>>,
}

impl AlgebraFile {
    pub fn to_algebra(&self, relative_to: &Path) -> Result<PAlgebra> {
        let operad = self.operad.resolve(relative_to)?;
        let structure = constants_to_matrices(&self.structure_constants, self.dim)?;
        PAlgebra::new(operad, self.dim, structure)
            .map_err(|e| anyhow!("invalid algebra: {e}"))
    }

    pub fn from_algebra(alg: &PAlgebra, operad: OperadRef) -> AlgebraFile {
        AlgebraFile {
            operad,
            dim: alg.dim(),
            structure_constants: matrices_to_constants(alg.structure(), alg.dim()),
        }
    }
}

/// `[k][i][j][l]` nested lists to bilinear-map matrices.
pub fn constants_to_matrices(
    constants: &[Vec<Vec<Vec<Rat>>>],
    dim: usize,
) -> Result<Vec<Matrix>> {
    constants
        .iter()
        .enumerate()
        .map(|(k, grid)| {
            if grid.len() != dim
                || grid.iter().any(|row| {
                    row.len() != dim || row.iter().any(|cell| cell.len() != dim)
                })
            {
                bail!("structure constants for generator {k} must be {dim}^3 entries");
            }
            let mut m = Matrix::zero(dim, dim * dim);
            for (i, row) in grid.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    for (l, r) in cell.iter().enumerate() {
                        *m.at_mut(l, i * dim + j) = r.to_scalar()?;
                    }
                }
            }
            Ok(m)
        })
        .collect()
}

pub fn matrices_to_constants(matrices: &[Matrix], dim: usize) -> Vec<Vec<Vec<Vec<Rat>>>> {
    matrices
        .iter()
        .map(|m| {
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            (0..dim)
                                .map(|l| Rat::from_scalar(m.at(l, i * dim + j)))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// A deformation: an algebra, a base specification, and the table of
/// 2-cochain values per positive-degree monomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeformationFile {
    pub algebra: OperadAlgebraRef,
    pub base: String,
    /// Monomial expression -> cochain values `[k][i][j][l]`.
    pub table: BTreeMap<String, Vec<Vec<Vec<Vec<Rat>>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperadAlgebraRef {
    File { file: String },
    Inline(AlgebraFile),
}

impl OperadAlgebraRef {
    pub fn resolve(&self, relative_to: &Path) -> Result<PAlgebra> {
        match self {
            OperadAlgebraRef::File { file } => {
                let path = relative_to.join(file);
                load_algebra(&path)
            }
            OperadAlgebraRef::Inline(inline) => inline.to_algebra(relative_to),
        }
    }
}

/// The loaded form of a deformation file.
pub struct LoadedDeformation {
    pub algebra: PAlgebra,
    pub spaces: CochainSpaces,
    pub base: ParsedBase,
    pub series: DeformationSeries,
}

impl DeformationFile {
    pub fn load(&self, relative_to: &Path) -> Result<LoadedDeformation> {
        let algebra = self.algebra.resolve(relative_to)?;
        let spaces = CochainSpaces::new(&algebra);
        let base = basespec::parse_base(&self.base)?;
        let mut table = BTreeMap::new();
        for (key, values) in &self.table {
            let mono =
                basespec::parse_monomial(key, base.truncation.ctx(), &base.names)?;
            let pos = base
                .truncation
                .std_position(mono)
                .ok_or_else(|| anyhow!("monomial `{key}` is zero in the base"))?;
            if pos == base.truncation.unit_position() {
                bail!("table keys must have positive degree");
            }
            let matrices = constants_to_matrices(values, algebra.dim())?;
            // reject non-equivariant tables exactly like structure constants
            let coords = values_to_coords_checked(&spaces, &matrices)
                .with_context(|| format!("table entry `{key}`"))?;
            table.insert(pos, coords);
        }
        let series = DeformationSeries::new(base.truncation.as_comm_local(), table)
            .map_err(|e| anyhow!("invalid deformation table: {e}"))?;
        Ok(LoadedDeformation { algebra, spaces, base, series })
    }
}

/// Converts full cochain values to coordinates, verifying equivariance.
pub fn values_to_coords_checked(
    spaces: &CochainSpaces,
    values: &[Matrix],
) -> Result<Vector> {
    let coords = spaces.c2.values_to_coords(values);
    let back = spaces.c2.coords_to_values(&coords);
    if back.as_slice() != values {
        bail!("cochain values are not S2-equivariant for this operad");
    }
    Ok(coords)
}

/// Base homomorphism: a target base and one image polynomial per source
/// generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomFile {
    pub target: String,
    /// source generator name -> polynomial in the target variables
    pub images: BTreeMap<String, String>,
}

/// Harrison 2-cochain with values in `k^m`: `values[t][i][j]` over the
/// base's standard monomial basis (graded-lex order, as reported).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleFile {
    pub module_rank: usize,
    pub values: Vec<Vec<Vec<Rat>>>,
}

impl CocycleFile {
    pub fn to_matrices(&self, base_dim: usize) -> Result<Vec<Matrix>> {
        if self.values.len() != self.module_rank {
            bail!("expected {} cocycle components", self.module_rank);
        }
        self.values
            .iter()
            .map(|grid| {
                if grid.len() != base_dim || grid.iter().any(|r| r.len() != base_dim) {
                    bail!("cocycle components must be {base_dim} x {base_dim}");
                }
                let mut m = Matrix::zero(base_dim, base_dim);
                for (i, row) in grid.iter().enumerate() {
                    for (j, r) in row.iter().enumerate() {
                        *m.at_mut(i, j) = r.to_scalar()?;
                    }
                }
                Ok(m)
            })
            .collect()
    }
}

pub fn load_algebra(path: &Path) -> Result<PAlgebra> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading algebra file {}", path.display()))?;
    let parsed: AlgebraFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing algebra file {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parsed.to_algebra(dir)
}

pub fn load_algebra_file(path: &Path) -> Result<AlgebraFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading algebra file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_deformation(path: &Path) -> Result<LoadedDeformation> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading deformation file {}", path.display()))?;
    let parsed: DeformationFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing deformation file {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parsed.load(dir)
}

/// Round-trip check used by tests: presets serialize and re-parse to the
/// same presentation.
pub fn presentation_round_trips(p: &OperadPresentation) -> Result<bool> {
    let file = OperadFile::from_presentation(p);
    let back = file.to_presentation()?;
    let same_e = {
        let t = Perm::transposition(2, 1, 2);
        p.e().act(&t) == back.e().act(&t) && p.e().dim() == back.e().dim()
    };
    let same_r = p.relations() == back.relations();
    // the Koszul data is derived, but rebuild it to make sure nothing
    // panics on the round-tripped presentation
    let _ = koszul_dual(&back);
    Ok(same_e && same_r && p.name == back.name)
}
