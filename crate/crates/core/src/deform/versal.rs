//! Order-by-order construction of the versal deformation base
//! `k[[g_1..g_n]]/I`, `n = dim H^2`, truncated at a requested order.
//!
//! The table is first built over the free truncated polynomial ring: for
//! every monomial of degree `d >= 2` the accumulated star products of
//! lower-order entries split against `im d2`; the exact part determines
//! the new table entry (deterministic preimage), while the cokernel
//! coordinates accumulate, one obstruction power series per cokernel
//! direction, into the generators of the relation ideal. Pushing the
//! free table forward along `k[g] -> k[g]/I` then yields a deformation
//! whose residual vanishes identically over the reported base, which the
//! emitted certificate re-checks from scratch.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{mc_residual, residual_is_zero, DeformationSeries};
use crate::cohomology::{star_22, Cochain2Values, CochainSpaces};
use crate::localbase::{LocalTruncation, MonomialCtx, Poly};
use crate::matrix::{self, Vector};
use crate::scalar::{self};
use crate::{Error, Result};

/// The computed versal data at a fixed truncation order.
#[derive(Debug, Clone)]
pub struct VersalResult {
    pub h2_dim: usize,
    pub order: usize,
    /// The reported base `k[g_1..g_n]/(I + M^{order+1})`.
    pub base: LocalTruncation,
    /// Table over the base's standard monomials (positions).
    pub series: DeformationSeries,
    /// Monic generators of the relation ideal, graded-lex leading terms,
    /// lowest degree 2; empty when the deformation is unobstructed
    /// through the requested order.
    pub ideal_generators: Vec<Poly>,
    /// The re-checked Maurer-Cartan residual over the reported base; must
    /// be identically zero.
    pub certificate_ok: bool,
    /// The order-1 differential read back from the table equals the
    /// identity on H^2.
    pub differential_is_identity: bool,
}

/// Runs the construction to the given order (at least 1).
pub fn versal(spaces: &CochainSpaces, order: usize) -> Result<VersalResult> {
    if order < 1 {
        return Err(Error::Invalid(alloc::string::String::from(
            "versal truncation order must be at least 1",
        )));
    }
    if !spaces.algebra().is_valid() {
        return Err(Error::Invalid(alloc::string::String::from(
            "versal construction requires a valid algebra",
        )));
    }
    let n = spaces.dim_h2();
    if n == 0 {
        // rigid: the base is the ground field
        let base = LocalTruncation::power_truncation(0, 0);
        let series = DeformationSeries::trivial(base.as_comm_local());
        let certificate_ok = residual_is_zero(&mc_residual(spaces, &series));
        return Ok(VersalResult {
            h2_dim: 0,
            order,
            base,
            series,
            ideal_generators: Vec::new(),
            certificate_ok,
            differential_is_identity: true,
        });
    }

    let ctx = MonomialCtx::new(n, order);
    // free table over every positive-degree monomial, built by degree
    let mut psi: BTreeMap<usize, Vector> = BTreeMap::new();
    let mut psi_values: BTreeMap<usize, Cochain2Values> = BTreeMap::new();
    for (i, rep) in spaces.representatives().iter().enumerate() {
        let m = ctx.var_mono(i);
        psi_values.insert(m, spaces.c2.coords_to_values(rep));
        psi.insert(m, rep.clone());
    }
    // obstruction power series, one per cokernel coordinate
    let mut obstruction_series: Vec<Poly> =
        alloc::vec![Poly::zero(&ctx); spaces.dim_coker3()];

    for mono in 0..ctx.len() {
        let d = ctx.degree(mono);
        if d < 2 {
            continue;
        }
        // accumulated star products over ordered factorizations
        let mut obs = matrix::zero_vec(spaces.c3.dim());
        let mut nonzero = false;
        for (&m1, v1) in &psi_values {
            let e1 = ctx.exponents(m1);
            let e = ctx.exponents(mono);
            if e1.iter().zip(e).any(|(a, b)| a > b) {
                continue;
            }
            let e2: Vec<u16> = e.iter().zip(e1).map(|(a, b)| a - b).collect();
            let m2 = ctx.lookup(&e2).expect("difference stays in the window");
            if ctx.degree(m2) == 0 {
                continue;
            }
            let Some(v2) = psi_values.get(&m2) else { continue };
            let star = spaces.c3.values_to_coords(&star_22(spaces.algebra(), v1, v2));
            matrix::vec_add_scaled(&mut obs, &scalar::one(), &star);
            nonzero = true;
        }
        if !nonzero {
            continue;
        }
        let split = spaces.coker3(&obs);
        for (t, c) in split.class.iter().enumerate() {
            if !scalar::is_zero(c) {
                obstruction_series[t].coeffs[mono] = c.clone();
            }
        }
        // d2(psi_mono) = exact part of the obstruction
        let preimage = spaces
            .d2_preimage(&split.exact_part)
            .expect("exact part lies in the image by construction");
        if !matrix::vec_is_zero(&preimage) {
            psi_values.insert(mono, spaces.c2.coords_to_values(&preimage));
            psi.insert(mono, preimage);
        }
    }

    // ideal generators: an RREF-canonical basis of the span of the
    // nonzero obstruction series (same ideal, deduplicated and monic)
    let spanning: Vec<Vector> = obstruction_series
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.coeffs)
        .collect();
    let ideal_generators: Vec<Poly> = crate::operad::canonical_span(&spanning)
        .into_iter()
        .map(|coeffs| Poly { coeffs })
        .collect();

    let base = LocalTruncation::new(n, order, ideal_generators.clone())?;
    let comm = base.as_comm_local();
    // push the free table forward along k[g] -> k[g]/I
    let mut table: BTreeMap<usize, Vector> = BTreeMap::new();
    for (&mono, coords) in &psi {
        let reduced = base.reduce_mono(mono);
        for (pos, c) in reduced.iter().enumerate() {
            if pos == base.unit_position() || scalar::is_zero(c) {
                continue;
            }
            let slot = table
                .entry(pos)
                .or_insert_with(|| matrix::zero_vec(spaces.c2.dim()));
            matrix::vec_add_scaled(slot, c, coords);
        }
    }
    let series = DeformationSeries::new(comm, table)?.pruned();

    let certificate_ok = residual_is_zero(&mc_residual(spaces, &series));
    let differential_is_identity = (0..n).all(|i| {
        let pos = base.std_position(base.ctx().var_mono(i));
        let Some(pos) = pos else { return false };
        let Some(entry) = series.entry(pos) else { return false };
        match spaces.class_of(entry) {
            Ok(class) => class == matrix::unit_vec(n, i),
            Err(_) => false,
        }
    });

    Ok(VersalResult {
        h2_dim: n,
        order,
        base,
        series,
        ideal_generators,
        certificate_ok,
        differential_is_identity,
    })
}

/// Formats the deformed structure constants as polynomials: for each
/// generator `e_k` and pair `(i, j)`, the entry lists the coefficient
/// polynomial of each output basis vector.
pub fn polynomial_structure(
    spaces: &CochainSpaces,
    result: &VersalResult,
) -> Vec<Vec<Vec<Poly>>> {
    let alg = spaces.algebra();
    let v = alg.dim();
    let d = alg.operad().e().dim();
    let ctx = result.base.ctx();
    let mut out =
        alloc::vec![alloc::vec![alloc::vec![Poly::zero(ctx); v]; v * v]; d];
    for k in 0..d {
        for col in 0..v * v {
            for l in 0..v {
                let mut p = Poly::zero(ctx);
                let c = alg.structure()[k].at(l, col);
                if !scalar::is_zero(c) {
                    p.coeffs[ctx.unit()] = c.clone();
                }
                out[k][col][l] = p;
            }
        }
    }
    for (&pos, coords) in &result.series.table {
        let mono = result.base.std_mono(pos);
        let values = spaces.c2.coords_to_values(coords);
        for k in 0..d {
            for col in 0..v * v {
                for l in 0..v {
                    let c = values[k].at(l, col);
                    if !scalar::is_zero(c) {
                        out[k][col][l].coeffs[mono] += c;
                    }
                }
            }
        }
    }
    out
}
