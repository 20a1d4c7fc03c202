//! Command implementations. Each returns a report plus an exit code:
//! 0 when the computation succeeds and the checked property holds,
//! 1 when the mathematics fails (relations violated, not equivalent,
//! obstructed), and input problems surface as errors mapped to 2.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use opdef_core::cohomology::CochainSpaces;
use opdef_core::deform::{
    equivalence_check, equivalence_solve, infinitesimal_universal, mc_residual, obstruction,
    polynomial_structure, pushout, residual_is_zero, versal, BaseHom, DeformationSeries,
};
use opdef_core::localbase::harrison_h;
use opdef_core::matrix::{self, Matrix};
use opdef_core::palgebra::{structure_is_equivariant, PAlgebra};
use opdef_core::scalar;

use crate::basespec;
use crate::formats::{
    self, load_algebra_file, load_deformation, matrices_to_constants, CocycleFile,
    LoadedDeformation, Rat,
};
use crate::report::Report;

pub struct CmdOut {
    pub report: Report,
    pub exit: u8,
}

fn cochain_values_json(
    spaces: &CochainSpaces,
    coords: &[opdef_core::scalar::Scalar],
) -> Vec<Vec<Vec<Vec<Rat>>>> {
    let values = spaces.c2.coords_to_values(coords);
    matrices_to_constants(&values, spaces.algebra().dim())
}

fn trilinear_json(m: &Matrix, dim: usize) -> Vec<Vec<Vec<Vec<Rat>>>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    (0..dim)
                        .map(|k| {
                            (0..dim)
                                .map(|l| {
                                    Rat::from_scalar(m.at(l, (i * dim + j) * dim + k))
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct CheckResult {
    operad: String,
    dim: usize,
    equivariance_ok: bool,
    passed: bool,
    violated_relations: Vec<CheckViolation>,
}

#[derive(Serialize)]
struct CheckViolation {
    relation: usize,
    value: Vec<Vec<Vec<Vec<Rat>>>>,
}

pub fn cmd_check(path: &Path) -> Result<CmdOut> {
    let mut report = Report::new("check");
    report.digest_input(path)?;
    let file = load_algebra_file(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let operad = file.operad.resolve(dir)?;
    let structure = formats::constants_to_matrices(&file.structure_constants, file.dim)?;
    let equivariance_ok = structure_is_equivariant(&operad, file.dim, &structure);
    let (passed, violations) = if equivariance_ok {
        let alg = PAlgebra::new(operad.clone(), file.dim, structure)
            .map_err(|e| anyhow!("unexpected: {e}"))?;
        let check = alg.check_algebra();
        let violations: Vec<CheckViolation> = check
            .violated_relations
            .iter()
            .map(|(idx, value)| CheckViolation {
                relation: *idx,
                value: trilinear_json(value, file.dim),
            })
            .collect();
        (check.passed(), violations)
    } else {
        (false, Vec::new())
    };
    report.set_result(CheckResult {
        operad: operad.name.clone(),
        dim: file.dim,
        equivariance_ok,
        passed,
        violated_relations: violations,
    })?;
    Ok(CmdOut { report, exit: if passed { 0 } else { 1 } })
}

#[derive(Serialize)]
struct CohomologyResult {
    operad: String,
    dim: usize,
    dim_c1: usize,
    dim_c2: usize,
    dim_c3: usize,
    dim_z2: usize,
    dim_b2: usize,
    dim_h2: usize,
    dim_b3: usize,
    dim_coker3: usize,
    representatives: Vec<Vec<Vec<Vec<Vec<Rat>>>>>,
}

pub fn cmd_cohomology(path: &Path, degree: usize) -> Result<CmdOut> {
    if degree != 2 {
        bail!("only degree 2 is computed; higher degrees need arity-4 operad data");
    }
    let mut report = Report::new("cohomology");
    report.digest_input(path)?;
    let alg = formats::load_algebra(path)?;
    if !alg.is_valid() {
        report.set_result(serde_json::json!({
            "error": "algebra does not satisfy its operad relations; run `check`",
        }))?;
        return Ok(CmdOut { report, exit: 1 });
    }
    let spaces = CochainSpaces::new(&alg);
    let summary = spaces.report().map_err(|e| anyhow!("{e}"))?;
    report.set_result(CohomologyResult {
        operad: alg.operad().name.clone(),
        dim: alg.dim(),
        dim_c1: summary.dim_c1,
        dim_c2: summary.dim_c2,
        dim_c3: summary.dim_c3,
        dim_z2: summary.dim_z2,
        dim_b2: summary.dim_b2,
        dim_h2: summary.dim_h2,
        dim_b3: summary.dim_b3,
        dim_coker3: summary.dim_coker3,
        representatives: summary
            .representatives
            .iter()
            .map(|rep| cochain_values_json(&spaces, rep))
            .collect(),
    })?;
    Ok(CmdOut { report, exit: 0 })
}

#[derive(Serialize)]
struct InfinitesimalResult {
    dim_h2: usize,
    base: String,
    table: BTreeMap<String, Vec<Vec<Vec<Vec<Rat>>>>>,
    residual_zero: bool,
}

pub fn cmd_infinitesimal(path: &Path) -> Result<CmdOut> {
    let mut report = Report::new("infinitesimal");
    report.digest_input(path)?;
    let alg = formats::load_algebra(path)?;
    if !alg.is_valid() {
        report.set_result(serde_json::json!({
            "error": "algebra does not satisfy its operad relations; run `check`",
        }))?;
        return Ok(CmdOut { report, exit: 1 });
    }
    let spaces = CochainSpaces::new(&alg);
    let (base, eta1) = infinitesimal_universal(&spaces).map_err(|e| anyhow!("{e}"))?;
    let names = base.names();
    let mut table = BTreeMap::new();
    for (&pos, coords) in &eta1.table {
        let label = base.basis_label(pos);
        table.insert(label, cochain_values_json(&spaces, coords));
    }
    let residual_zero = residual_is_zero(&mc_residual(&spaces, &eta1));
    let base_desc = if spaces.dim_h2() == 0 {
        "k".to_string()
    } else {
        format!("k[{}] @ 1", names.join(","))
    };
    report.set_result(InfinitesimalResult {
        dim_h2: spaces.dim_h2(),
        base: base_desc,
        table,
        residual_zero,
    })?;
    Ok(CmdOut { report, exit: 0 })
}

#[derive(Serialize)]
struct VersalReport {
    dim_h2: usize,
    order: usize,
    base: VersalBase,
    certificate: VersalCertificate,
    table: BTreeMap<String, Vec<Vec<Vec<Vec<Rat>>>>>,
    /// Deformed structure constants as polynomials: entry `[k][i][j][l]`
    /// is the coefficient polynomial of `v_l` in `a(e_k)(v_i, v_j)`.
    polynomial_structure: Vec<Vec<Vec<Vec<String>>>>,
}

#[derive(Serialize)]
struct VersalBase {
    description: String,
    variables: Vec<String>,
    ideal_generators: Vec<String>,
    quotient_dim: usize,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct VersalCertificate {
    residual_zero_mod_ideal: bool,
    differential_is_identity: bool,
}

pub fn cmd_versal(path: &Path, order: usize) -> Result<CmdOut> {
    let mut report = Report::new("versal");
    report.digest_input(path)?;
    let alg = formats::load_algebra(path)?;
    if !alg.is_valid() {
        report.set_result(serde_json::json!({
            "error": "algebra does not satisfy its operad relations; run `check`",
        }))?;
        return Ok(CmdOut { report, exit: 1 });
    }
    let spaces = CochainSpaces::new(&alg);
    let result = versal(&spaces, order).map_err(|e| anyhow!("{e}"))?;
    let names = result.base.names();
    let ctx = result.base.ctx();
    let gens: Vec<String> =
        result.ideal_generators.iter().map(|g| g.to_string(ctx, &names)).collect();
    let description = if result.h2_dim == 0 {
        "k".to_string()
    } else if gens.is_empty() {
        format!("k[[{}]] (no relations through order {})", names.join(","), order)
    } else {
        format!("k[[{}]]/({})", names.join(","), gens.join(", "))
    };
    let mut table = BTreeMap::new();
    for (&pos, coords) in &result.series.table {
        table.insert(result.base.basis_label(pos), cochain_values_json(&spaces, coords));
    }
    let polys = polynomial_structure(&spaces, &result);
    let v = alg.dim();
    let poly_json: Vec<Vec<Vec<Vec<String>>>> = polys
        .iter()
        .map(|per_gen| {
            (0..v)
                .map(|i| {
                    (0..v)
                        .map(|j| {
                            (0..v)
                                .map(|l| per_gen[i * v + j][l].to_string(ctx, &names))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let certificate = VersalCertificate {
        residual_zero_mod_ideal: result.certificate_ok,
        differential_is_identity: result.differential_is_identity,
    };
    let exit = if result.certificate_ok && result.differential_is_identity { 0 } else { 1 };
    report.set_result(VersalReport {
        dim_h2: result.h2_dim,
        order,
        base: VersalBase {
            description,
            variables: names.clone(),
            ideal_generators: gens,
            quotient_dim: result.base.dim(),
            basis: (0..result.base.dim()).map(|p| result.base.basis_label(p)).collect(),
        },
        certificate,
        table,
        polynomial_structure: poly_json,
    })?;
    Ok(CmdOut { report, exit })
}

#[derive(Serialize)]
struct HarrisonResult {
    base: String,
    quotient_dim: usize,
    basis: Vec<String>,
    h1_dim: usize,
    h2_dim: usize,
    h1_representatives: Vec<Vec<Rat>>,
    h2_representatives: Vec<Vec<Vec<Rat>>>,
}

pub fn cmd_harrison(spec: &str) -> Result<CmdOut> {
    let mut report = Report::new("harrison");
    let base = basespec::parse_base(spec)?;
    let comm = base.truncation.as_comm_local();
    let h1 = harrison_h(&comm, 1).map_err(|e| anyhow!("{e}"))?;
    let h2 = harrison_h(&comm, 2).map_err(|e| anyhow!("{e}"))?;
    let dim = comm.dim();
    report.set_result(HarrisonResult {
        base: spec.to_string(),
        quotient_dim: dim,
        basis: comm.labels().to_vec(),
        h1_dim: h1.dim,
        h2_dim: h2.dim,
        h1_representatives: h1
            .representatives
            .iter()
            .map(|r| formats::vector_to_rats(r))
            .collect(),
        h2_representatives: h2
            .representatives
            .iter()
            .map(|r| {
                (0..dim)
                    .map(|i| {
                        (0..dim).map(|j| Rat::from_scalar(&r[i * dim + j])).collect()
                    })
                    .collect()
            })
            .collect(),
    })?;
    Ok(CmdOut { report, exit: 0 })
}

#[derive(Serialize)]
struct PushoutResult {
    target: String,
    table: BTreeMap<String, Vec<Vec<Vec<Vec<Rat>>>>>,
    residual_zero: bool,
}

pub fn cmd_pushout(def_path: &Path, hom_path: &Path) -> Result<CmdOut> {
    let mut report = Report::new("pushout");
    report.digest_input(def_path)?;
    report.digest_input(hom_path)?;
    let loaded = load_deformation(def_path)?;
    let hom_text = std::fs::read_to_string(hom_path)?;
    let hom_file: formats::HomFile = serde_json::from_str(&hom_text)?;
    let target = basespec::parse_base(&hom_file.target)?;
    let mut images = Vec::with_capacity(loaded.base.names.len());
    for name in &loaded.base.names {
        let text = hom_file
            .images
            .get(name)
            .ok_or_else(|| anyhow!("no image given for generator `{name}`"))?;
        images.push(basespec::parse_poly(text, target.truncation.ctx(), &target.names)?);
    }
    let hom = BaseHom::from_generator_images(&loaded.base.truncation, &target.truncation, &images)
        .map_err(|e| anyhow!("invalid homomorphism: {e}"))?;
    let pushed = pushout(&hom, &loaded.series).map_err(|e| anyhow!("{e}"))?;
    let mut table = BTreeMap::new();
    for (&pos, coords) in &pushed.table {
        let mono = target.truncation.std_mono(pos);
        let label = target.truncation.ctx().mono_string(mono, &target.names);
        table.insert(label, cochain_values_json(&loaded.spaces, coords));
    }
    let residual_zero = residual_is_zero(&mc_residual(&loaded.spaces, &pushed));
    report.set_result(PushoutResult {
        target: hom_file.target.clone(),
        table,
        residual_zero,
    })?;
    Ok(CmdOut { report, exit: 0 })
}

#[derive(Serialize)]
struct EquivResult {
    equivalent: bool,
    verified: bool,
    automorphism: BTreeMap<String, Vec<Vec<Rat>>>,
}

pub fn cmd_equiv(path1: &Path, path2: &Path) -> Result<CmdOut> {
    let mut report = Report::new("equiv");
    report.digest_input(path1)?;
    report.digest_input(path2)?;
    let l1 = load_deformation(path1)?;
    let l2 = load_deformation(path2)?;
    ensure_same_setting(&l1, &l2)?;
    let rho = equivalence_solve(&l1.spaces, &l1.series, &l2.series)
        .map_err(|e| anyhow!("{e}"))?;
    match rho {
        None => {
            report.set_result(EquivResult {
                equivalent: false,
                verified: true,
                automorphism: BTreeMap::new(),
            })?;
            Ok(CmdOut { report, exit: 1 })
        }
        Some(map) => {
            let verified = equivalence_check(&l1.spaces, &l1.series, &l2.series, &map);
            let dim = l1.algebra.dim();
            let mut automorphism = BTreeMap::new();
            for (&pos, m) in &map {
                let label = l1.base.truncation.ctx().mono_string(
                    l1.base.truncation.std_mono(pos),
                    &l1.base.names,
                );
                let rows: Vec<Vec<Rat>> = (0..dim)
                    .map(|i| (0..dim).map(|j| Rat::from_scalar(m.at(i, j))).collect())
                    .collect();
                automorphism.insert(label, rows);
            }
            report.set_result(EquivResult { equivalent: true, verified, automorphism })?;
            Ok(CmdOut { report, exit: if verified { 0 } else { 1 } })
        }
    }
}

fn ensure_same_setting(l1: &LoadedDeformation, l2: &LoadedDeformation) -> Result<()> {
    if l1.algebra.dim() != l2.algebra.dim()
        || l1.algebra.operad().name != l2.algebra.operad().name
        || l1.algebra.structure() != l2.algebra.structure()
    {
        bail!("the two deformations live over different algebras");
    }
    if l1.series.base != l2.series.base {
        bail!("the two deformations have different bases");
    }
    Ok(())
}

#[derive(Serialize)]
struct ObstructionReport {
    classes: Vec<Vec<Rat>>,
    extendable: bool,
    extension_table: BTreeMap<String, Vec<Vec<Vec<Vec<Rat>>>>>,
}

pub fn cmd_obstruction(def_path: &Path, cocycle_path: &Path) -> Result<CmdOut> {
    let mut report = Report::new("obstruction");
    report.digest_input(def_path)?;
    report.digest_input(cocycle_path)?;
    let loaded = load_deformation(def_path)?;
    let text = std::fs::read_to_string(cocycle_path)?;
    let cocycle: CocycleFile = serde_json::from_str(&text)?;
    let f = cocycle.to_matrices(loaded.series.base.dim())?;
    let result = obstruction(&loaded.spaces, &loaded.series, &f)
        .map_err(|e| anyhow!("invalid obstruction input: {e}"))?;
    let extendable = result.is_unobstructed();
    let mut extension_table = BTreeMap::new();
    if let Some((ext, extended)) = &result.extension {
        for (&pos, coords) in &extended.table {
            let label = ext.total.label(pos).to_string();
            extension_table.insert(label, cochain_values_json(&loaded.spaces, coords));
        }
    }
    report.set_result(ObstructionReport {
        classes: result.classes.iter().map(|c| formats::vector_to_rats(c)).collect(),
        extendable,
        extension_table,
    })?;
    Ok(CmdOut { report, exit: if extendable { 0 } else { 1 } })
}

/// Shared helper for tests: a deformation series from explicit table
/// values, bypassing files.
pub fn series_from_values(
    spaces: &CochainSpaces,
    base: &opdef_core::localbase::LocalTruncation,
    entries: &[(usize, Vec<Matrix>)],
) -> Result<DeformationSeries> {
    let mut table = BTreeMap::new();
    for (pos, values) in entries {
        let coords = formats::values_to_coords_checked(spaces, values)?;
        if !matrix::vec_is_zero(&coords) || !values.iter().all(|m| m.is_zero()) {
            table.insert(*pos, coords);
        }
    }
    DeformationSeries::new(base.as_comm_local(), table).map_err(|e| anyhow!("{e}"))
}

/// Used by fixtures and tests to write representative cochains.
pub fn representative_values(spaces: &CochainSpaces, index: usize) -> Vec<Matrix> {
    spaces.c2.coords_to_values(&spaces.representatives()[index])
}

/// Scalar pretty-printer re-exported for integration tests.
pub fn scalar_str(s: &opdef_core::scalar::Scalar) -> String {
    scalar::display(s)
}
