//! Commutative local bases for deformations: truncated polynomial
//! quotients, generic multiplication-table algebras, Harrison cohomology
//! and square-zero extensions.

mod extension;
mod harrison;
mod poly;
mod trunc;

pub use extension::{extension_from_cocycle, Extension};
pub use harrison::{
    chain_boundary, chain_shuffle_span, cochain_differential, harrison_h,
    harrison_h_coefficients, is_harrison_2_cocycle, shuffle_span, HarrisonGroup,
};
pub use poly::{default_names, Exponents, MonomialCtx, Poly};
pub use trunc::{CommLocal, LocalTruncation};

use alloc::vec::Vec;

use crate::matrix::{self, Vector};
use crate::Result;

/// The tangent-space data of Prop-style `H^2(R/I; k) = (I/MI)'` for
/// `I = (gens) + M^{order+1}` inside the polynomial ring: a basis of
/// `I/MI` as window polynomials, together with the middle algebra
/// `R/MI` of the associated extension.
#[derive(Debug, Clone)]
pub struct AmiData {
    pub dim: usize,
    /// Window polynomials representing a basis of `I/MI`
    /// (window degree `order + 1`).
    pub representatives: Vec<Poly>,
    /// The algebra `R/(MI)`, source of the extension by `I/MI`.
    pub middle: LocalTruncation,
    /// The quotient `R/I` itself.
    pub quotient: LocalTruncation,
}

/// Computes `I/MI` for `I = (gens) + M^{order+1}`, degreewise in the
/// window of degree `order + 1` (beyond that everything lies in `MI`).
pub fn ami_h2(n: usize, order: usize, gens: &[Poly]) -> Result<AmiData> {
    let quotient = LocalTruncation::new(n, order, gens.to_vec())?;
    let window = MonomialCtx::new(n, order + 1);
    let lifted: Vec<Poly> = gens.iter().map(|g| g.lift(quotient.ctx(), &window)).collect();
    for g in &lifted {
        if g.has_low_degree_terms(&window) {
            return Err(crate::invalid!("ideal generators must lie in M^2"));
        }
    }

    // span of I = (gens) + M^{order+1} in the window
    let mut i_span: Vec<Vector> = Vec::new();
    let mut mi_span: Vec<Vector> = Vec::new();
    for g in &lifted {
        if g.is_zero() {
            continue;
        }
        let lead = g.lead_degree(&window).expect("nonzero");
        for m in 0..window.len() {
            let deg = window.degree(m);
            if deg + lead > order + 1 {
                continue;
            }
            let v = g.mul_mono(&window, m).coeffs;
            if deg >= 1 {
                mi_span.push(v.clone());
            }
            i_span.push(v);
        }
    }
    for m in 0..window.len() {
        if window.degree(m) == order + 1 {
            i_span.push(Poly::mono(&window, m).coeffs);
        }
    }

    let rank_mi = matrix::span_rank(&mi_span);
    let mut reps: Vec<Poly> = Vec::new();
    let mut span = mi_span.clone();
    let mut rank = rank_mi;
    for v in &i_span {
        let mut with_v = span.clone();
        with_v.push(v.clone());
        let r = matrix::span_rank(&with_v);
        if r > rank {
            reps.push(Poly { coeffs: v.clone() });
            span = with_v;
            rank = r;
        }
    }

    // middle algebra R/MI: generated by x_i * g_j, truncated one degree
    // higher (M^{order+2} sits inside MI automatically).
    let mut mgens: Vec<Poly> = Vec::new();
    for g in &lifted {
        for v in 0..n {
            mgens.push(g.mul_mono(&window, window.var_mono(v)));
        }
    }
    let middle = LocalTruncation::new(n, order + 1, mgens)?;

    Ok(AmiData { dim: rank - rank_mi, representatives: reps, middle, quotient })
}
