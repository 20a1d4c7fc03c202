//! Order-by-order solving for an equivalence between two deformations
//! over the same base, and the direct expansion check that certifies a
//! candidate.
//!
//! An equivalence is sought in the form `rho(1 ⊗ v) = 1 ⊗ v +
//! sum_a a ⊗ rho_a(v)` with `rho ∘ lambda_2 = lambda_1 ∘ (rho ⊗ rho)`.
//! Expanding both sides and collecting the coefficient of an ideal basis
//! element `c` gives
//!
//! ```text
//!   d1(rho_c) = psi2_c - psi1_c
//!             + sum [a b]_c ( rho_a ∘ psi2_b
//!                             - psi1_b ∘ (rho_a ⊗ id)
//!                             - psi1_a ∘ (id ⊗ rho_b)
//!                             - pi ∘ (rho_a ⊗ rho_b) )
//!             - sum [a b e]_c  psi1_e ∘ (rho_a ⊗ rho_b)
//! ```
//!
//! which is triangular along the powers of the maximal ideal, so each
//! layer is one linear solve against `d1`. At first order this is the
//! classical statement: solvable iff the two tables' classes agree.
//! Beyond first order the layers are solved in the fixed
//! zero-free-variable gauge, so a `None` answer is conclusive only over
//! square-zero bases; every success is independently certified by
//! [`equivalence_check`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::DeformationSeries;
use crate::cohomology::{star_12, CochainSpaces};
use crate::localbase::CommLocal;
use crate::matrix::{self, Matrix, SolveKit, Vector};
use crate::palgebra::compose_at;
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// The correction table of an equivalence `rho = id + sum a ⊗ rho_a`.
pub type EquivalenceMap = BTreeMap<usize, Matrix>;

/// Filtration degree of each basis element along powers of the maximal
/// ideal; errors if the basis is not adapted to the filtration.
fn filtration_degrees(base: &CommLocal) -> Result<Vec<usize>> {
    let dim = base.dim();
    let mut degree = alloc::vec![0usize; dim];
    // successive power spans of the maximal ideal
    let mut power: Vec<Vector> =
        base.ideal_positions().iter().map(|&p| matrix::unit_vec(dim, p)).collect();
    let mut k = 1usize;
    while !power.is_empty() && k <= dim + 1 {
        let rank = matrix::span_rank(&power);
        if rank == 0 {
            break;
        }
        for &p in &base.ideal_positions() {
            let mut with_p = power.clone();
            with_p.push(matrix::unit_vec(dim, p));
            if matrix::span_rank(&with_p) == rank {
                degree[p] = k;
            }
        }
        // next power
        let mut next = Vec::new();
        for x in &power {
            for &p in &base.ideal_positions() {
                next.push(base.mul_vec(x, &matrix::unit_vec(dim, p)));
            }
        }
        power = next;
        k += 1;
    }
    // adapted basis: the span of basis elements of degree >= k must be
    // the k-th power span for each k; the degree assignment above
    // already guarantees membership, so only count dimensions.
    let mut power: Vec<Vector> =
        base.ideal_positions().iter().map(|&p| matrix::unit_vec(dim, p)).collect();
    let mut kk = 1usize;
    loop {
        let rank = matrix::span_rank(&power);
        let count = (0..dim).filter(|&p| degree[p] >= kk).count();
        if rank != count {
            return Err(Error::Invalid(alloc::string::String::from(
                "base basis is not adapted to the powers of the maximal ideal",
            )));
        }
        if rank == 0 {
            break;
        }
        let mut next = Vec::new();
        for x in &power {
            for &p in &base.ideal_positions() {
                next.push(base.mul_vec(x, &matrix::unit_vec(dim, p)));
            }
        }
        power = next;
        kk += 1;
        if kk > dim + 2 {
            return Err(Error::Invalid(alloc::string::String::from(
                "maximal ideal is not nilpotent",
            )));
        }
    }
    Ok(degree)
}

fn plug_slot(psi: &[Matrix], rho: &Matrix, slot: usize, v: usize) -> Vec<Matrix> {
    psi.iter().map(|m| compose_at(m, 2, rho, 1, slot, v)).collect()
}

fn plug_both(psi: &[Matrix], rho_a: &Matrix, rho_b: &Matrix, v: usize) -> Vec<Matrix> {
    psi.iter()
        .map(|m| compose_at(&compose_at(m, 2, rho_a, 1, 1, v), 2, rho_b, 1, 2, v))
        .collect()
}

/// Finds `rho` with `rho ∘ lambda_2 = lambda_1 ∘ (rho ⊗ rho)`, or `None`
/// when some order's linear system is inconsistent (the deformations are
/// not equivalent).
pub fn equivalence_solve(
    spaces: &CochainSpaces,
    lambda1: &DeformationSeries,
    lambda2: &DeformationSeries,
) -> Result<Option<EquivalenceMap>> {
    if lambda1.base != lambda2.base {
        return Err(Error::Invalid(alloc::string::String::from(
            "equivalence requires deformations over the same base",
        )));
    }
    let base = &lambda1.base;
    let degrees = filtration_degrees(base)?;
    let alg = spaces.algebra();
    let v = alg.dim();
    let pi = alg.structure().to_vec();
    let values1: BTreeMap<usize, Vec<Matrix>> = lambda1
        .table
        .iter()
        .map(|(&p, c)| (p, spaces.c2.coords_to_values(c)))
        .collect();
    let values2: BTreeMap<usize, Vec<Matrix>> = lambda2
        .table
        .iter()
        .map(|(&p, c)| (p, spaces.c2.coords_to_values(c)))
        .collect();
    let zero2 = || alloc::vec![Matrix::zero(v, v * v); alg.operad().e().dim()];

    let d1_kit = SolveKit::new(&spaces.mat_d1);
    let mut order: Vec<usize> = base.ideal_positions();
    order.sort_by_key(|&p| (degrees[p], p));

    let mut rho: EquivalenceMap = BTreeMap::new();
    for &c in &order {
        // right-hand side in C^2 coordinates
        let mut rhs = matrix::zero_vec(spaces.c2.dim());
        let psi1 = lambda1.entry(c);
        let psi2 = lambda2.entry(c);
        if let Some(p2) = psi2 {
            matrix::vec_add_scaled(&mut rhs, &scalar::one(), p2);
        }
        if let Some(p1) = psi1 {
            matrix::vec_add_scaled(&mut rhs, &scalar::int(-1), p1);
        }
        let mut corrections = zero2();
        for (&a, rho_a) in &rho {
            for (&b, rho_b) in &rho {
                let coeff = &base.mult(a, b)[c];
                if !scalar::is_zero(coeff) {
                    // - pi ∘ (rho_a ⊗ rho_b)
                    add_scaled_values(
                        &mut corrections,
                        &-coeff.clone(),
                        &plug_both(&pi, rho_a, rho_b, v),
                    );
                }
                // - [a b e]_c psi1_e ∘ (rho_a ⊗ rho_b)
                let ab = base.mult(a, b).clone();
                for (&e, v1e) in &values1 {
                    let abe = base.mul_vec(&ab, &matrix::unit_vec(base.dim(), e));
                    let coeff3 = &abe[c];
                    if !scalar::is_zero(coeff3) {
                        add_scaled_values(
                            &mut corrections,
                            &-coeff3.clone(),
                            &plug_both(v1e, rho_a, rho_b, v),
                        );
                    }
                }
            }
            // pair terms with a single rho
            for (&b, v2b) in &values2 {
                let coeff = &base.mult(a, b)[c];
                if !scalar::is_zero(coeff) {
                    // + rho_a ∘ psi2_b
                    add_scaled_values(&mut corrections, coeff, &star_12(alg, rho_a, v2b));
                }
            }
            for (&b, v1b) in &values1 {
                let coeff = &base.mult(a, b)[c];
                if !scalar::is_zero(coeff) {
                    // - psi1_b ∘ (rho_a ⊗ id) - psi1_b ∘ (id ⊗ rho_a)
                    add_scaled_values(
                        &mut corrections,
                        &-coeff.clone(),
                        &plug_slot(v1b, rho_a, 1, v),
                    );
                    add_scaled_values(
                        &mut corrections,
                        &-coeff.clone(),
                        &plug_slot(v1b, rho_a, 2, v),
                    );
                }
            }
        }
        let corr_coords = spaces.c2.values_to_coords(&corrections);
        matrix::vec_add_scaled(&mut rhs, &scalar::one(), &corr_coords);

        match d1_kit.solve(&rhs) {
            None => return Ok(None),
            Some(sol) => {
                let m = Matrix::from_fn(v, v, |i, j| sol[i * v + j].clone());
                if !m.is_zero() {
                    rho.insert(c, m);
                }
            }
        }
    }
    Ok(Some(rho))
}

fn add_scaled_values(dst: &mut [Matrix], c: &Scalar, src: &[Matrix]) {
    for (d, s) in dst.iter_mut().zip(src) {
        d.add_scaled_assign(c, s);
    }
}

/// Certifies an equivalence candidate by expanding
/// `rho(lambda_2(e_k)(1⊗x1, 1⊗x2))` and
/// `lambda_1(e_k)(rho(1⊗x1), rho(1⊗x2))` on every basis pair.
pub fn equivalence_check(
    spaces: &CochainSpaces,
    lambda1: &DeformationSeries,
    lambda2: &DeformationSeries,
    rho: &EquivalenceMap,
) -> bool {
    let base = &lambda1.base;
    let bdim = base.dim();
    let alg = spaces.algebra();
    let v = alg.dim();
    let values1: BTreeMap<usize, Vec<Matrix>> = lambda1
        .table
        .iter()
        .map(|(&p, c)| (p, spaces.c2.coords_to_values(c)))
        .collect();
    let values2: BTreeMap<usize, Vec<Matrix>> = lambda2
        .table
        .iter()
        .map(|(&p, c)| (p, spaces.c2.coords_to_values(c)))
        .collect();

    // rho applied to b ⊗ v_m as a (base, V)-matrix
    let apply_rho = |b: usize, m: usize| -> Matrix {
        let mut out = Matrix::zero(bdim, v);
        *out.at_mut(b, m) = scalar::one();
        for (&a, ra) in rho {
            let prod = base.mult(b, a);
            for l in 0..v {
                let rv = ra.at(l, m);
                if scalar::is_zero(rv) {
                    continue;
                }
                for (t, pc) in prod.iter().enumerate() {
                    if !scalar::is_zero(pc) {
                        *out.at_mut(t, l) += rv * pc;
                    }
                }
            }
        }
        out
    };
    // lambda(e_k)(1 ⊗ x1, 1 ⊗ x2) for a table
    let lam = |values: &BTreeMap<usize, Vec<Matrix>>, k: usize, x1: usize, x2: usize| -> Matrix {
        let mut out = Matrix::zero(bdim, v);
        for l in 0..v {
            *out.at_mut(base.unit_position(), l) =
                alg.structure()[k].at(l, x1 * v + x2).clone();
        }
        for (&pos, vals) in values {
            for l in 0..v {
                *out.at_mut(pos, l) += vals[k].at(l, x1 * v + x2);
            }
        }
        out
    };
    // lambda(e_k)(w1, w2) for general base ⊗ V arguments, by bilinearity:
    // (b1 ⊗ v_m1)(b2 ⊗ v_m2) = b1 b2 . lambda(e_k)(1 ⊗ v_m1, 1 ⊗ v_m2)
    let lam_general = |values: &BTreeMap<usize, Vec<Matrix>>,
                       k: usize,
                       w1: &Matrix,
                       w2: &Matrix|
     -> Matrix {
        let mut out = Matrix::zero(bdim, v);
        for b1 in 0..bdim {
            for m1 in 0..v {
                let c1 = w1.at(b1, m1);
                if scalar::is_zero(c1) {
                    continue;
                }
                for b2 in 0..bdim {
                    for m2 in 0..v {
                        let c2 = w2.at(b2, m2);
                        if scalar::is_zero(c2) {
                            continue;
                        }
                        let inner = lam(values, k, m1, m2);
                        let bb = base.mult(b1, b2);
                        let c12 = c1 * c2;
                        for bi in 0..bdim {
                            let bc = &bb[bi];
                            if scalar::is_zero(bc) {
                                continue;
                            }
                            for bj in 0..bdim {
                                for l in 0..v {
                                    let iv = inner.at(bj, l);
                                    if scalar::is_zero(iv) {
                                        continue;
                                    }
                                    let prod = base.mult(bi, bj);
                                    for (t, pc) in prod.iter().enumerate() {
                                        if !scalar::is_zero(pc) {
                                            *out.at_mut(t, l) += &(&c12 * bc) * &(iv * pc);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    };

    let d = alg.operad().e().dim();
    for k in 0..d {
        for x1 in 0..v {
            for x2 in 0..v {
                // rho(lambda2(...)): lambda2 value then rho, base-linearly
                let l2 = lam(&values2, k, x1, x2);
                let mut lhs = Matrix::zero(bdim, v);
                for b in 0..bdim {
                    for m in 0..v {
                        let c = l2.at(b, m);
                        if !scalar::is_zero(c) {
                            lhs.add_scaled_assign(c, &apply_rho(b, m));
                        }
                    }
                }
                let r1 = apply_rho(base.unit_position(), x1);
                let r2 = apply_rho(base.unit_position(), x2);
                let rhs = lam_general(&values1, k, &r1, &r2);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}
