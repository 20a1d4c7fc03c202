//! Finite-dimensional truncations `k[g_1..g_n]/(I + M^{N+1})` with a
//! degreewise monomial quotient basis, and the generic multiplication
//! table form shared with other finite-dimensional local algebras.
//!
//! Ideal arithmetic is plain linear algebra on the truncated window: the
//! ideal's image is spanned by monomial multiples of the generators, an
//! echelon basis of that span fixes the standard (non-leading) monomials,
//! and reduction against the echelon rewrites any element over them.
//! Because every generator has its support at degrees at or above its
//! leading degree, reduction never lowers degree.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::poly::{default_names, MonomialCtx, Poly};
use crate::matrix::{self, Matrix, Vector};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LocalTruncation {
    ctx: MonomialCtx,
    gens: Vec<Poly>,
    /// Fully reduced echelon basis of the ideal window, leading monomial
    /// indices strictly increasing.
    echelon: Vec<Poly>,
    leads: Vec<usize>,
    /// Monomial indices of the quotient basis, ascending.
    std_monos: Vec<usize>,
    std_pos: BTreeMap<usize, usize>,
    /// Multiplication table over the quotient basis.
    mult: Vec<Vec<Vector>>,
}

impl LocalTruncation {
    /// Quotient of `k[g_1..g_n]` by the ideal generated by `gens`
    /// together with all monomials of degree `> order`.
    pub fn new(n: usize, order: usize, gens: Vec<Poly>) -> Result<LocalTruncation> {
        let ctx = MonomialCtx::new(n, order);
        for g in &gens {
            if g.coeffs.len() != ctx.len() {
                return Err(crate::shape_err!(
                    "generator polynomials must live in the degree-{order} window"
                ));
            }
            if g.has_low_degree_terms(&ctx) {
                return Err(Error::Invalid(String::from(
                    "ideal generators must have zero constant and linear parts",
                )));
            }
        }

        // Span of the ideal in the window: all monomial multiples of the
        // generators that still have content below the truncation.
        let mut spanning: Vec<Vector> = Vec::new();
        for g in &gens {
            if g.is_zero() {
                continue;
            }
            let lead_deg = g.lead_degree(&ctx).expect("nonzero");
            for m in 0..ctx.len() {
                if ctx.degree(m) + lead_deg <= order {
                    spanning.push(g.mul_mono(&ctx, m).coeffs);
                }
            }
        }
        let (echelon, leads) = echelon_polys(spanning);
        let mut is_lead = alloc::vec![false; ctx.len()];
        for &l in &leads {
            is_lead[l] = true;
        }
        let std_monos: Vec<usize> = (0..ctx.len()).filter(|&m| !is_lead[m]).collect();
        if std_monos.first() != Some(&ctx.unit()) {
            return Err(Error::Invalid(String::from(
                "the ideal contains a unit; quotient is not local",
            )));
        }
        let std_pos: BTreeMap<usize, usize> =
            std_monos.iter().enumerate().map(|(p, &m)| (m, p)).collect();

        let mut trunc = LocalTruncation {
            ctx,
            gens,
            echelon,
            leads,
            std_monos,
            std_pos,
            mult: Vec::new(),
        };
        let dim = trunc.dim();
        let mut mult: Vec<Vec<Vector>> = Vec::with_capacity(dim);
        for a in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for b in 0..dim {
                if b < a {
                    row.push(mult[b][a].clone());
                    continue;
                }
                let prod = trunc.ctx.mul_mono(trunc.std_monos[a], trunc.std_monos[b]);
                let coords = match prod {
                    None => matrix::zero_vec(dim),
                    Some(m) => trunc.reduce_mono(m),
                };
                row.push(coords);
            }
            mult.push(row);
        }
        trunc.mult = mult;
        // the table is commutative by construction; associativity is
        // re-checked rather than trusted
        trunc.as_comm_local().verify_associative()?;
        Ok(trunc)
    }

    /// Pure truncation `k[g_1..g_n]/M^{order+1}`.
    pub fn power_truncation(n: usize, order: usize) -> LocalTruncation {
        LocalTruncation::new(n, order, Vec::new()).expect("no generators to validate")
    }

    pub fn ctx(&self) -> &MonomialCtx {
        &self.ctx
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn vars(&self) -> usize {
        self.ctx.vars()
    }

    pub fn order(&self) -> usize {
        self.ctx.max_deg()
    }

    pub fn dim(&self) -> usize {
        self.std_monos.len()
    }

    /// Monomial index of the `p`-th quotient basis element.
    pub fn std_mono(&self, p: usize) -> usize {
        self.std_monos[p]
    }

    pub fn std_monos(&self) -> &[usize] {
        &self.std_monos
    }

    /// Position in the quotient basis of a standard monomial.
    pub fn std_position(&self, mono: usize) -> Option<usize> {
        self.std_pos.get(&mono).copied()
    }

    pub fn basis_degree(&self, p: usize) -> usize {
        self.ctx.degree(self.std_monos[p])
    }

    /// Reduces a window polynomial to quotient-basis coordinates.
    pub fn reduce(&self, poly: &Poly) -> Vector {
        let mut v = poly.coeffs.clone();
        for (e, &lead) in self.echelon.iter().zip(&self.leads) {
            let c = v[lead].clone();
            if !scalar::is_zero(&c) {
                let neg = -c;
                matrix::vec_add_scaled(&mut v, &neg, &e.coeffs);
            }
        }
        let coords: Vector = self.std_monos.iter().map(|&m| v[m].clone()).collect();
        debug_assert!(self.leads.iter().all(|&l| scalar::is_zero(&v[l])));
        coords
    }

    pub fn reduce_mono(&self, mono: usize) -> Vector {
        self.reduce(&Poly::mono(&self.ctx, mono))
    }

    /// Coordinates of the product of two basis elements.
    pub fn mult(&self, a: usize, b: usize) -> &Vector {
        &self.mult[a][b]
    }

    pub fn unit_position(&self) -> usize {
        0
    }

    pub fn augmentation(&self, coords: &[Scalar]) -> Scalar {
        coords[0].clone()
    }

    /// Positions of the positive-degree (maximal ideal) basis elements.
    pub fn ideal_positions(&self) -> Vec<usize> {
        (1..self.dim()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        default_names(self.vars())
    }

    pub fn basis_label(&self, p: usize) -> String {
        self.ctx.mono_string(self.std_monos[p], &self.names())
    }

    pub fn as_comm_local(&self) -> CommLocal {
        let dim = self.dim();
        let labels = (0..dim).map(|p| self.basis_label(p)).collect();
        CommLocal::new(labels, self.mult.clone()).expect("truncations are commutative local")
    }
}

/// Fully reduced echelon basis of a span of window polynomials, returned
/// with the leading monomial indices.
fn echelon_polys(spanning: Vec<Vector>) -> (Vec<Poly>, Vec<usize>) {
    if spanning.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let rref = matrix::Rref::of(&Matrix::from_rows(spanning));
    let mut polys = Vec::with_capacity(rref.rank());
    for i in 0..rref.rank() {
        polys.push(Poly { coeffs: rref.rref.row(i).to_vec() });
    }
    (polys, rref.pivots)
}

/// A finite-dimensional commutative local algebra presented by a
/// multiplication table over a basis adapted to the augmentation: basis
/// element 0 is the unit, all others lie in the maximal ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct CommLocal {
    labels: Vec<String>,
    mult: Vec<Vec<Vector>>,
}

impl CommLocal {
    pub fn new(labels: Vec<String>, mult: Vec<Vec<Vector>>) -> Result<CommLocal> {
        let dim = labels.len();
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(crate::shape_err!("multiplication table must be {dim}x{dim}x{dim}"));
        }
        let alg = CommLocal { labels, mult };
        // unit row/column
        for b in 0..dim {
            if alg.mult[0][b] != matrix::unit_vec(dim, b) || alg.mult[b][0] != matrix::unit_vec(dim, b) {
                return Err(Error::Invalid(String::from("basis element 0 must be the unit")));
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                if alg.mult[a][b] != alg.mult[b][a] {
                    return Err(Error::Invalid(String::from("multiplication is not commutative")));
                }
            }
        }
        // augmentation (project to coordinate 0) must be multiplicative:
        // products of ideal elements stay in the ideal
        for a in 1..dim {
            for b in 1..dim {
                if !scalar::is_zero(&alg.mult[a][b][0]) {
                    return Err(Error::Invalid(String::from(
                        "maximal ideal is not closed under multiplication",
                    )));
                }
            }
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn unit_position(&self) -> usize {
        0
    }

    pub fn ideal_positions(&self) -> Vec<usize> {
        (1..self.dim()).collect()
    }

    pub fn mult(&self, a: usize, b: usize) -> &Vector {
        &self.mult[a][b]
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let dim = self.dim();
        let mut out = matrix::zero_vec(dim);
        for a in 0..dim {
            if scalar::is_zero(&x[a]) {
                continue;
            }
            for b in 0..dim {
                if !scalar::is_zero(&y[b]) {
                    let c = &x[a] * &y[b];
                    matrix::vec_add_scaled(&mut out, &c, &self.mult[a][b]);
                }
            }
        }
        out
    }

    pub fn augmentation(&self, coords: &[Scalar]) -> Scalar {
        coords[0].clone()
    }

    /// Exhaustive associativity check over the basis.
    pub fn verify_associative(&self) -> Result<()> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let left = self.mul_vec(self.mult(a, b), &matrix::unit_vec(dim, c));
                    let right = self.mul_vec(&matrix::unit_vec(dim, a), self.mult(b, c));
                    if left != right {
                        return Err(crate::invalid!(
                            "associativity fails at basis triple ({a},{b},{c})"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Is the maximal ideal nilpotent of the expected class? Used by
    /// sanity tests only.
    pub fn ideal_is_nilpotent(&self) -> bool {
        let dim = self.dim();
        // iterate powers of the ideal span until they stabilize or die
        let mut current: Vec<Vector> =
            self.ideal_positions().iter().map(|&p| matrix::unit_vec(dim, p)).collect();
        for _ in 0..dim + 1 {
            if current.is_empty() {
                return true;
            }
            let mut next = Vec::new();
            for x in &current {
                for p in self.ideal_positions() {
                    next.push(self.mul_vec(x, &matrix::unit_vec(dim, p)));
                }
            }
            let rank_next = matrix::span_rank(&next);
            if rank_next == matrix::span_rank(&current) && rank_next > 0 {
                return false;
            }
            if rank_next == 0 {
                return true;
            }
            current = next;
        }
        false
    }
}
