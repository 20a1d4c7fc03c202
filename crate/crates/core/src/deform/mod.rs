//! Deformations of an algebra over finite-dimensional commutative local
//! bases: normal-form tables, the Maurer-Cartan residual, push-outs, the
//! infinitesimal differential, the universal infinitesimal deformation,
//! obstruction classes, and the versal base construction.
//!
//! A deformation in normal form is `1 ⊗ pi + sum_m m ⊗ psi_m` over the
//! positive-degree part of the base; only the table `m -> psi_m` is
//! stored. With this crate's sign conventions the structure is a genuine
//! algebra over the base iff for every basis element `c` of the maximal
//! ideal
//!
//! ```text
//!   d2(psi_c) = sum_{a,b} [a b]_c  psi_a * psi_b
//! ```
//!
//! over ordered pairs; `mc_residual` reports the right side minus the
//! left and the whole module is built around making it vanish.

mod equivalence;
mod versal;

pub use equivalence::{equivalence_check, equivalence_solve, EquivalenceMap};
pub use versal::{polynomial_structure, versal, VersalResult};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cohomology::{star_22, Cochain2Values, CochainSpaces};
use crate::localbase::{
    extension_from_cocycle, is_harrison_2_cocycle, CommLocal, Extension, LocalTruncation,
};
use crate::matrix::{self, Matrix, Vector};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// A deformation table over a finite-dimensional local base: cochain
/// coordinates per positive-degree basis element. Missing entries are
/// zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationSeries {
    pub base: CommLocal,
    pub table: BTreeMap<usize, Vector>,
}

impl DeformationSeries {
    pub fn new(base: CommLocal, table: BTreeMap<usize, Vector>) -> Result<DeformationSeries> {
        for &pos in table.keys() {
            if pos == base.unit_position() || pos >= base.dim() {
                return Err(crate::invalid!(
                    "table entries must sit at maximal-ideal basis positions, got {pos}"
                ));
            }
        }
        Ok(DeformationSeries { base, table })
    }

    pub fn trivial(base: CommLocal) -> DeformationSeries {
        DeformationSeries { base, table: BTreeMap::new() }
    }

    pub fn entry(&self, pos: usize) -> Option<&Vector> {
        self.table.get(&pos)
    }

    /// Drops zero entries; the canonical form used for comparisons.
    pub fn pruned(mut self) -> DeformationSeries {
        self.table.retain(|_, v| !matrix::vec_is_zero(v));
        self
    }
}

/// Full cochain values for every table entry, computed once per pass.
fn table_values(
    spaces: &CochainSpaces,
    series: &DeformationSeries,
) -> BTreeMap<usize, Cochain2Values> {
    series
        .table
        .iter()
        .map(|(&pos, coords)| (pos, spaces.c2.coords_to_values(coords)))
        .collect()
}

/// The Maurer-Cartan residual: for each ideal basis element `c`,
/// `sum_{a,b} [a b]_c psi_a * psi_b  -  d2(psi_c)`, in C^3 coordinates.
/// The series is a deformation iff every component vanishes.
pub fn mc_residual(
    spaces: &CochainSpaces,
    series: &DeformationSeries,
) -> BTreeMap<usize, Vector> {
    let base = &series.base;
    let values = table_values(spaces, series);
    let c3dim = spaces.c3.dim();
    let mut residual: BTreeMap<usize, Vector> = BTreeMap::new();
    for &pos in &base.ideal_positions() {
        let mut acc = matrix::zero_vec(c3dim);
        if let Some(coords) = series.entry(pos) {
            let d2 = spaces.d2_coords(coords);
            matrix::vec_add_scaled(&mut acc, &scalar::int(-1), &d2);
        }
        residual.insert(pos, acc);
    }
    for (&a, va) in &values {
        for (&b, vb) in &values {
            let prod = base.mult(a, b);
            if matrix::vec_is_zero(prod) {
                continue;
            }
            let star = spaces.c3.values_to_coords(&star_22(spaces.algebra(), va, vb));
            for &pos in &base.ideal_positions() {
                let c = &prod[pos];
                if !scalar::is_zero(c) {
                    matrix::vec_add_scaled(
                        residual.get_mut(&pos).expect("initialized above"),
                        c,
                        &star,
                    );
                }
            }
        }
    }
    residual
}

pub fn residual_is_zero(residual: &BTreeMap<usize, Vector>) -> bool {
    residual.values().all(|v| matrix::vec_is_zero(v))
}

/// Independent validity check: expands the induced arity-3 structure on
/// every relation and basis triple over the base, the lifted form of the
/// "relations evaluate to zero" criterion. Quadratic in nothing clever;
/// used to cross-check `mc_residual` on small cases.
pub fn validity_by_expansion(spaces: &CochainSpaces, series: &DeformationSeries) -> bool {
    let alg = spaces.algebra();
    let base = &series.base;
    let bdim = base.dim();
    let v = alg.dim();
    let values = table_values(spaces, series);
    // lambda(2)(e_k) maps (base ⊗ V)^2 -> base ⊗ V; we evaluate on pure
    // tensors (1 ⊗ x) since everything is base-linear.
    let lam = |k: usize, x1: usize, x2: usize| -> Matrix {
        // result: bdim x v matrix of coordinates in base ⊗ V
        let mut out = Matrix::zero(bdim, v);
        for l in 0..v {
            *out.at_mut(base.unit_position(), l) =
                alg.structure()[k].at(l, x1 * v + x2).clone();
        }
        for (&pos, vals) in &values {
            for l in 0..v {
                *out.at_mut(pos, l) += vals[k].at(l, x1 * v + x2);
            }
        }
        out
    };
    // lambda(2)(e_k) applied to (w, 1 ⊗ x3) for w in base ⊗ V
    let lam_left = |k: usize, w: &Matrix, x3: usize| -> Matrix {
        let mut out = Matrix::zero(bdim, v);
        for b in 0..bdim {
            for m in 0..v {
                let c = w.at(b, m);
                if scalar::is_zero(c) {
                    continue;
                }
                // (b ⊗ v_m) * (1 ⊗ x3): base-bilinear
                let inner = lam(k, m, x3);
                for b2 in 0..bdim {
                    let prod = base.mult(b, b2);
                    for l in 0..v {
                        let iv = inner.at(b2, l);
                        if scalar::is_zero(iv) {
                            continue;
                        }
                        for (tpos, pc) in prod.iter().enumerate() {
                            if !scalar::is_zero(pc) {
                                *out.at_mut(tpos, l) += &(c * iv) * pc;
                            }
                        }
                    }
                }
            }
        }
        out
    };
    // evaluate lambda(3) on each free-basis element and contract with the
    // relation coefficients
    let free = alg.operad().free3();
    for r in alg.operad().relations() {
        for x1 in 0..v {
            for x2 in 0..v {
                for x3 in 0..v {
                    let mut total = Matrix::zero(bdim, v);
                    for (idx, &(a, b, rep)) in free.labels().iter().enumerate() {
                        if scalar::is_zero(&r[idx]) {
                            continue;
                        }
                        let rho_inv = crate::operad::rep_perm(rep).inverse();
                        let xs = [x1, x2, x3];
                        let (y1, y2, y3) =
                            (xs[rho_inv.apply(0)], xs[rho_inv.apply(1)], xs[rho_inv.apply(2)]);
                        let inner = lam(b, y1, y2);
                        let term = lam_left(a, &inner, y3);
                        total.add_scaled_assign(&r[idx], &term);
                    }
                    if !total.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A unital augmentation-preserving algebra homomorphism between two
/// finite-dimensional local bases, as a coordinate matrix.
#[derive(Debug, Clone)]
pub struct BaseHom {
    pub source: CommLocal,
    pub target: CommLocal,
    /// `target.dim() x source.dim()`; columns are images of source basis
    /// elements.
    pub matrix: Matrix,
}

impl BaseHom {
    pub fn new(source: CommLocal, target: CommLocal, matrix: Matrix) -> Result<BaseHom> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(crate::shape_err!(
                "homomorphism matrix must be {} x {}",
                target.dim(),
                source.dim()
            ));
        }
        let hom = BaseHom { source, target, matrix };
        hom.validate()?;
        Ok(hom)
    }

    fn validate(&self) -> Result<()> {
        let sdim = self.source.dim();
        let unit_img = self.matrix.col(self.source.unit_position());
        if unit_img != matrix::unit_vec(self.target.dim(), self.target.unit_position()) {
            return Err(Error::Invalid(alloc::string::String::from(
                "homomorphism must preserve the unit",
            )));
        }
        for a in 0..sdim {
            // augmentation-preserving
            let img = self.matrix.col(a);
            if self.target.augmentation(&img)
                != self.source.augmentation(&matrix::unit_vec(sdim, a))
            {
                return Err(Error::Invalid(alloc::string::String::from(
                    "homomorphism must preserve the augmentation",
                )));
            }
            for b in 0..sdim {
                let lhs = self.matrix.mul_vec(self.source.mult(a, b))?;
                let rhs = self.target.mul_vec(&self.matrix.col(a), &self.matrix.col(b));
                if lhs != rhs {
                    return Err(crate::invalid!(
                        "not an algebra homomorphism at basis pair ({a},{b})"
                    ));
                }
            }
        }
        Ok(())
    }

    /// From generator images for truncation bases: `g_i` of the source is
    /// sent to the window polynomial `images[i]` of the target (which
    /// must have zero constant term); monomials map multiplicatively.
    pub fn from_generator_images(
        source: &LocalTruncation,
        target: &LocalTruncation,
        images: &[crate::localbase::Poly],
    ) -> Result<BaseHom> {
        if images.len() != source.vars() {
            return Err(crate::shape_err!(
                "expected {} generator images",
                source.vars()
            ));
        }
        let tdim = target.dim();
        let image_coords: Vec<Vector> = images.iter().map(|p| target.reduce(p)).collect();
        for img in &image_coords {
            if !scalar::is_zero(&img[target.unit_position()]) {
                return Err(Error::Invalid(alloc::string::String::from(
                    "generator images must have zero constant term",
                )));
            }
        }
        let tgt = target.as_comm_local();
        let cols: Vec<Vector> = source
            .std_monos()
            .iter()
            .map(|&mono| {
                let expo = source.ctx().exponents(mono).clone();
                let mut acc = matrix::unit_vec(tdim, target.unit_position());
                for (v, &e) in expo.iter().enumerate() {
                    for _ in 0..e {
                        acc = tgt.mul_vec(&acc, &image_coords[v]);
                    }
                }
                acc
            })
            .collect();
        BaseHom::new(source.as_comm_local(), tgt, Matrix::from_cols(cols))
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &BaseHom) -> Result<BaseHom> {
        if other.target != self.source {
            return Err(Error::Invalid(alloc::string::String::from(
                "homomorphisms do not compose: middle bases differ",
            )));
        }
        BaseHom::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    /// The augmentation homomorphism onto the ground field.
    pub fn to_field(source: &CommLocal) -> BaseHom {
        let field = LocalTruncation::power_truncation(0, 0).as_comm_local();
        let m = Matrix::from_fn(1, source.dim(), |_, j| {
            source.augmentation(&matrix::unit_vec(source.dim(), j))
        });
        BaseHom { source: source.clone(), target: field, matrix: m }
    }
}

/// Push-out of a deformation along a base homomorphism: expand the image
/// of each table monomial and collect coefficients.
pub fn pushout(hom: &BaseHom, series: &DeformationSeries) -> Result<DeformationSeries> {
    if series.base != hom.source {
        return Err(Error::Invalid(alloc::string::String::from(
            "series base does not match the homomorphism source",
        )));
    }
    let mut table: BTreeMap<usize, Vector> = BTreeMap::new();
    for (&pos, coords) in &series.table {
        let img = hom.matrix.col(pos);
        for t in hom.target.ideal_positions() {
            if scalar::is_zero(&img[t]) {
                continue;
            }
            let slot = table
                .entry(t)
                .or_insert_with(|| matrix::zero_vec(coords.len()));
            matrix::vec_add_scaled(slot, &img[t], coords);
        }
    }
    Ok(DeformationSeries { base: hom.target.clone(), table }.pruned())
}

/// The differential of a deformation: the matrix of
/// `(M/M^2)' -> H^2` in the canonical complement coordinates of `M/M^2`
/// and the representative basis of `H^2`.
pub fn infinitesimal_differential(
    spaces: &CochainSpaces,
    series: &DeformationSeries,
) -> Result<Matrix> {
    let base = &series.base;
    let dim = base.dim();
    let ideal = base.ideal_positions();
    // span of M^2 inside the ideal coordinates
    let mut m2: Vec<Vector> = Vec::new();
    for &a in &ideal {
        for &b in &ideal {
            m2.push(base.mult(a, b).clone());
        }
    }
    let m2_matrix = Matrix::from_cols(m2);
    let proj = matrix::CokerProjection::of(&m2_matrix);
    // complement coordinates live on ambient base coordinates; the unit
    // coordinate never appears in M^2 nor in M, restrict to ideal slots
    let cotangent: Vec<usize> = proj
        .complement
        .iter()
        .copied()
        .filter(|&i| i != base.unit_position())
        .collect();
    let mut cols: Vec<Vector> = Vec::new();
    for &slot in &cotangent {
        // xi_slot applied to the table: sum over ideal basis elements of
        // the slot-coordinate of their cotangent projection
        let mut cochain = matrix::zero_vec(spaces.c2.dim());
        for (&pos, coords) in &series.table {
            let reduced = proj.project(&matrix::unit_vec(dim, pos));
            let idx = proj
                .complement
                .iter()
                .position(|&i| i == slot)
                .expect("slot is a complement coordinate");
            if !scalar::is_zero(&reduced[idx]) {
                matrix::vec_add_scaled(&mut cochain, &reduced[idx], coords);
            }
        }
        cols.push(spaces.class_of(&cochain)?);
    }
    Ok(Matrix::from_cols(cols))
}

/// The universal infinitesimal deformation: base `k ⊕ (H^2)'` (a pure
/// degree-1 truncation) with the canonical representatives as the table.
pub fn infinitesimal_universal(
    spaces: &CochainSpaces,
) -> Result<(LocalTruncation, DeformationSeries)> {
    if !spaces.algebra().is_valid() {
        return Err(Error::Invalid(alloc::string::String::from(
            "universal infinitesimal deformation requires a valid algebra",
        )));
    }
    let n = spaces.dim_h2();
    let base = LocalTruncation::power_truncation(n, 1);
    let comm = base.as_comm_local();
    let mut table = BTreeMap::new();
    for (i, rep) in spaces.representatives().iter().enumerate() {
        let pos = base
            .std_position(base.ctx().var_mono(i))
            .expect("degree-1 monomials survive in the power truncation");
        table.insert(pos, rep.clone());
    }
    let series = DeformationSeries::new(comm, table)?;
    Ok((base, series))
}

/// Result of the obstruction computation for extending a deformation
/// across a square-zero extension classified by the cocycle `f`.
#[derive(Debug, Clone)]
pub struct ObstructionResult {
    /// Cokernel coordinates of the obstruction class, one vector per
    /// module coordinate of the extension.
    pub classes: Vec<Vector>,
    /// When every class vanishes: the extension algebra and an extending
    /// deformation over it.
    pub extension: Option<(Extension, DeformationSeries)>,
}

impl ObstructionResult {
    pub fn is_unobstructed(&self) -> bool {
        self.classes.iter().all(|c| matrix::vec_is_zero(c))
    }
}

/// The obstruction `sum f(m_i, m_j) psi_i * psi_j` for a Harrison
/// 2-cocycle `f` with values in `k^m`, split through the cokernel of d2.
/// When the class vanishes the deformation is extended by deterministic
/// preimages.
///
/// The series must be a genuine deformation (zero residual); the class
/// is only invariant under coboundary changes of `f` because of the
/// Maurer-Cartan equation, so the precondition is enforced.
pub fn obstruction(
    spaces: &CochainSpaces,
    series: &DeformationSeries,
    f: &[Matrix],
) -> Result<ObstructionResult> {
    let base = &series.base;
    if !is_harrison_2_cocycle(base, f) {
        return Err(Error::Invalid(alloc::string::String::from(
            "f is not a Harrison 2-cocycle on the base",
        )));
    }
    if !residual_is_zero(&mc_residual(spaces, series)) {
        return Err(Error::Invalid(alloc::string::String::from(
            "obstructions are defined for deformations only: the series has a nonzero \
             Maurer-Cartan residual over its base",
        )));
    }
    let values = table_values(spaces, series);
    let c3dim = spaces.c3.dim();
    let mut phis: Vec<Vector> = alloc::vec![matrix::zero_vec(c3dim); f.len()];
    for (&a, va) in &values {
        for (&b, vb) in &values {
            let coeffs: Vec<&Scalar> = f.iter().map(|ft| ft.at(a, b)).collect();
            if coeffs.iter().all(|c| scalar::is_zero(c)) {
                continue;
            }
            let star = spaces.c3.values_to_coords(&star_22(spaces.algebra(), va, vb));
            for (t, c) in coeffs.into_iter().enumerate() {
                matrix::vec_add_scaled(&mut phis[t], c, &star);
            }
        }
    }
    let splits: Vec<crate::cohomology::Coker3Split> =
        phis.iter().map(|phi| spaces.coker3(phi)).collect();
    let classes: Vec<Vector> = splits.iter().map(|s| s.class.clone()).collect();
    let extension = if splits.iter().all(|s| s.is_exact()) {
        let ext = extension_from_cocycle(base, f.len(), f)?;
        let bdim = base.dim();
        let mut table = series.table.clone();
        for (t, split) in splits.iter().enumerate() {
            let psi = split.preimage.clone().expect("exact class has a preimage");
            if !matrix::vec_is_zero(&psi) {
                table.insert(bdim + t, psi);
            }
        }
        let extended = DeformationSeries::new(ext.total.clone(), table)?;
        Some((ext, extended))
    } else {
        None
    };
    Ok(ObstructionResult { classes, extension })
}

#[cfg(test)]
mod tests;
