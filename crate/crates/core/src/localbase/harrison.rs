//! Harrison cohomology of finite-dimensional commutative local algebras
//! in degrees 1 and 2, through the shuffle-reduced Hochschild complex,
//! with coefficients in `k^m` acted on through the augmentation.
//!
//! Cochains are functions on basis tuples; the shuffle generators cut out
//! the Harrison subspace (symmetric 2-cochains, and 3-cochains killing
//! both shuffle families), and the differentials are the Hochschild ones
//! with both module actions running through the augmentation.

use alloc::vec::Vec;

use super::trunc::CommLocal;
use crate::matrix::{self, Matrix, Vector};
use crate::palgebra::{decode_tuple, encode_tuple};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// The shuffle-constraint span inside the space of `q`-cochains,
/// `q` in {2, 3}: a cochain is a Harrison cochain iff it annihilates
/// every vector returned here.
pub fn shuffle_span(dim: usize, q: usize) -> Vec<Vector> {
    let tuples = dim.pow(q as u32);
    let mut out = Vec::new();
    match q {
        2 => {
            for x in 0..dim {
                for y in 0..dim {
                    let mut v = matrix::zero_vec(tuples);
                    v[x * dim + y] += scalar::one();
                    v[y * dim + x] -= scalar::one();
                    out.push(v);
                }
            }
        }
        3 => {
            for x in 0..dim {
                for y in 0..dim {
                    for z in 0..dim {
                        // s_1: shuffle x into (y, z)
                        let mut v = matrix::zero_vec(tuples);
                        v[encode_tuple(&[x, y, z], dim)] += scalar::one();
                        v[encode_tuple(&[y, x, z], dim)] -= scalar::one();
                        v[encode_tuple(&[y, z, x], dim)] += scalar::one();
                        out.push(v);
                        // s_2: shuffle (x, y) into z
                        let mut w = matrix::zero_vec(tuples);
                        w[encode_tuple(&[x, y, z], dim)] += scalar::one();
                        w[encode_tuple(&[x, z, y], dim)] -= scalar::one();
                        w[encode_tuple(&[z, x, y], dim)] += scalar::one();
                        out.push(w);
                    }
                }
            }
        }
        _ => panic!("shuffle generators implemented for q = 2, 3 only"),
    }
    out
}

/// Hochschild cochain differential `C^q -> C^{q+1}` for scalar
/// coefficients through the augmentation, as a matrix on tuple-indexed
/// coordinates. Implemented for q = 1, 2.
pub fn cochain_differential(alg: &CommLocal, q: usize) -> Matrix {
    let dim = alg.dim();
    let aug = |i: usize| -> Scalar {
        if i == alg.unit_position() {
            scalar::one()
        } else {
            scalar::zero()
        }
    };
    match q {
        1 => Matrix::from_fn(dim * dim, dim, |row, col| {
            let t = decode_tuple(row, 2, dim);
            let (i, j) = (t[0], t[1]);
            // eps(i) f(j) - f(ij) + eps(j) f(i)
            let mut v = scalar::zero();
            if j == col {
                v += aug(i);
            }
            v -= alg.mult(i, j)[col].clone();
            if i == col {
                v += aug(j);
            }
            v
        }),
        2 => Matrix::from_fn(dim.pow(3), dim * dim, |row, col| {
            let t = decode_tuple(row, 3, dim);
            let (i, j, k) = (t[0], t[1], t[2]);
            let c = decode_tuple(col, 2, dim);
            let mut v = scalar::zero();
            // eps(i) f(j,k)
            if (c[0], c[1]) == (j, k) {
                v += aug(i);
            }
            // - f(ij, k)
            if c[1] == k {
                v -= alg.mult(i, j)[c[0]].clone();
            }
            // + f(i, jk)
            if c[0] == i {
                v += alg.mult(j, k)[c[1]].clone();
            }
            // - eps(k) f(i,j)
            if (c[0], c[1]) == (i, j) {
                v -= aug(k);
            }
            v
        }),
        _ => panic!("cochain differential implemented for q = 1, 2 only"),
    }
}

/// Dimension and canonical representative cocycles of a Harrison
/// cohomology group with coefficients in `k` (through the augmentation).
#[derive(Debug, Clone)]
pub struct HarrisonGroup {
    pub dim: usize,
    /// Representatives as tuple-indexed cochains (length `dim^q`).
    pub representatives: Vec<Vector>,
}

/// `H^q_Harr(R; k)` for q = 1 or 2.
pub fn harrison_h(alg: &CommLocal, q: usize) -> Result<HarrisonGroup> {
    match q {
        1 => {
            // no shuffles in degree 1, no coboundaries from degree 0
            let d1 = cochain_differential(alg, 1);
            let kernel = matrix::kernel_basis(&d1);
            Ok(HarrisonGroup { dim: kernel.len(), representatives: kernel })
        }
        2 => {
            let dim = alg.dim();
            let d1 = cochain_differential(alg, 1);
            let d2 = cochain_differential(alg, 2);
            // Harrison 2-cochains: symmetric, i.e. annihilating the
            // degree-2 shuffles; intersect with ker d2.
            let mut rows: Vec<Vector> = shuffle_span(dim, 2);
            for r in 0..d2.rows() {
                rows.push(d2.row(r).to_vec());
            }
            let z2 = matrix::kernel_basis(&Matrix::from_rows(rows));
            let b2 = matrix::image_basis(&d1);
            let mut reps = Vec::new();
            let mut span = b2.clone();
            let mut rank = matrix::span_rank(&span);
            for z in &z2 {
                let mut with_z = span.clone();
                with_z.push(z.clone());
                let r = matrix::span_rank(&with_z);
                if r > rank {
                    reps.push(z.clone());
                    span = with_z;
                    rank = r;
                }
            }
            Ok(HarrisonGroup { dim: z2.len() - b2.len(), representatives: reps })
        }
        _ => Err(Error::Invalid(alloc::string::String::from(
            "harrison cohomology implemented for q = 1, 2 only",
        ))),
    }
}

/// `H^q_Harr(R; k^m)` with the trivial (augmentation) action, computed
/// blockwise; dimension is `m` times the scalar one.
pub fn harrison_h_coefficients(alg: &CommLocal, q: usize, m: usize) -> Result<usize> {
    // block computation: a k^m-valued cochain is m scalar cochains and
    // the differential acts componentwise
    let scalar_group = harrison_h(alg, q)?;
    Ok(m * scalar_group.dim)
}

/// Is `f`, a symmetric bilinear form with values in `k^m` (one matrix per
/// coordinate), a Harrison 2-cocycle?
pub fn is_harrison_2_cocycle(alg: &CommLocal, f: &[Matrix]) -> bool {
    let dim = alg.dim();
    let d2 = cochain_differential(alg, 2);
    f.iter().all(|ft| {
        if ft.rows() != dim || ft.cols() != dim {
            return false;
        }
        let flat: Vector =
            (0..dim * dim).map(|c| ft.at(c / dim, c % dim).clone()).collect();
        // symmetry
        for i in 0..dim {
            for j in 0..dim {
                if ft.at(i, j) != ft.at(j, i) {
                    return false;
                }
            }
        }
        matrix::vec_is_zero(&d2.mul_vec(&flat).expect("shape"))
    })
}

/// Hochschild chain boundary `R^{⊗(q+1)} -> R^{⊗q}` (with the cyclic last
/// term), used only to verify that shuffles form a subcomplex.
pub fn chain_boundary(alg: &CommLocal, q: usize) -> Matrix {
    let dim = alg.dim();
    let rows = dim.pow(q as u32);
    let cols = dim.pow((q + 1) as u32);
    let mut out = Matrix::zero(rows, cols);
    for col in 0..cols {
        let t = decode_tuple(col, q + 1, dim);
        for i in 0..q {
            // multiply slots i and i+1
            let prod = alg.mult(t[i], t[i + 1]);
            for (r, c) in prod.iter().enumerate() {
                if scalar::is_zero(c) {
                    continue;
                }
                let mut u = Vec::with_capacity(q);
                u.extend_from_slice(&t[..i]);
                u.push(r);
                u.extend_from_slice(&t[i + 2..]);
                let sign = scalar::int(if i % 2 == 0 { 1 } else { -1 });
                *out.at_mut(encode_tuple(&u, dim), col) += c * sign;
            }
        }
        // cyclic term: r_q r_0 in front
        let prod = alg.mult(t[q], t[0]);
        for (r, c) in prod.iter().enumerate() {
            if scalar::is_zero(c) {
                continue;
            }
            let mut u = Vec::with_capacity(q);
            u.push(r);
            u.extend_from_slice(&t[1..q]);
            let sign = scalar::int(if q % 2 == 0 { 1 } else { -1 });
            *out.at_mut(encode_tuple(&u, dim), col) += c * sign;
        }
    }
    out
}

/// Chain-level shuffle span including the module slot `r_0`.
pub fn chain_shuffle_span(alg: &CommLocal, q: usize) -> Vec<Vector> {
    let dim = alg.dim();
    let base = shuffle_span(dim, q);
    let mut out = Vec::new();
    for r0 in 0..dim {
        for s in &base {
            let mut v = matrix::zero_vec(dim.pow((q + 1) as u32));
            for (idx, c) in s.iter().enumerate() {
                if !scalar::is_zero(c) {
                    v[r0 * dim.pow(q as u32) + idx] = c.clone();
                }
            }
            out.push(v);
        }
    }
    out
}
