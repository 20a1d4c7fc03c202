//! Square-zero extensions of a commutative local algebra by a module
//! killed by the maximal ideal, built from symmetric 2-cocycles, plus
//! cocycle extraction from a chosen splitting.

use alloc::string::String;
use alloc::vec::Vec;

use super::harrison::is_harrison_2_cocycle;
use super::trunc::CommLocal;
use crate::matrix::{self, Matrix, Vector};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// An extension `0 -> k^m -> total -> base -> 0` with the module action
/// through the augmentation. The total algebra's basis is the base basis
/// followed by the module coordinates.
#[derive(Debug, Clone)]
pub struct Extension {
    pub base: CommLocal,
    pub module_rank: usize,
    /// The normalized cocycle actually used for the product (values on
    /// base basis pairs, one symmetric matrix per module coordinate).
    pub cocycle: Vec<Matrix>,
    pub total: CommLocal,
}

/// Builds the extension algebra with product
/// `(a, x) (b, y) = (ab, eps(a) y + eps(b) x + f(a, b))`.
///
/// `f` must be a symmetric Harrison 2-cocycle; the unit-direction part
/// `f(1,.)` is removed first by subtracting the coboundary of
/// `r -> eps(r) f(1,1)`, which is what makes `(1, 0)` the unit of the
/// total algebra. Associativity of the result is re-verified and a
/// failure is reported as a cocycle violation.
pub fn extension_from_cocycle(
    base: &CommLocal,
    module_rank: usize,
    f: &[Matrix],
) -> Result<Extension> {
    let dim = base.dim();
    if f.len() != module_rank {
        return Err(crate::shape_err!("expected {module_rank} cocycle components"));
    }
    for ft in f {
        if ft.rows() != dim || ft.cols() != dim {
            return Err(crate::shape_err!("cocycle components must be {dim} x {dim}"));
        }
        for i in 0..dim {
            for j in 0..dim {
                if ft.at(i, j) != ft.at(j, i) {
                    return Err(Error::Invalid(String::from(
                        "cocycle must be symmetric (it is killed by shuffles)",
                    )));
                }
            }
        }
    }
    if !is_harrison_2_cocycle(base, f) {
        return Err(Error::Invalid(String::from("not a Harrison 2-cocycle")));
    }
    let normalized: Vec<Matrix> = f.iter().map(|ft| normalize(base, ft)).collect();

    let unit = base.unit_position();
    let total_dim = dim + module_rank;
    let aug = |i: usize| -> Scalar {
        if i == unit {
            scalar::one()
        } else {
            scalar::zero()
        }
    };
    let mut mult = alloc::vec![alloc::vec![matrix::zero_vec(total_dim); total_dim]; total_dim];
    for a in 0..total_dim {
        for b in 0..total_dim {
            let v = &mut mult[a][b];
            match (a < dim, b < dim) {
                (true, true) => {
                    for (k, c) in base.mult(a, b).iter().enumerate() {
                        v[k] = c.clone();
                    }
                    for (t, ft) in normalized.iter().enumerate() {
                        v[dim + t] = ft.at(a, b).clone();
                    }
                }
                (true, false) => v[b] = aug(a),
                (false, true) => v[a] = aug(b),
                (false, false) => {}
            }
        }
    }
    let mut labels: Vec<String> = base.labels().to_vec();
    for t in 0..module_rank {
        labels.push(alloc::format!("n{}", t + 1));
    }
    let total = CommLocal::new(labels, mult)?;
    total.verify_associative().map_err(|_| {
        Error::Invalid(String::from("cocycle violation: extension product is not associative"))
    })?;
    Ok(Extension { base: base.clone(), module_rank, cocycle: normalized, total })
}

fn normalize(base: &CommLocal, ft: &Matrix) -> Matrix {
    let dim = base.dim();
    let unit = base.unit_position();
    let c = ft.at(unit, unit).clone();
    let aug = |i: usize| -> Scalar {
        if i == unit {
            scalar::one()
        } else {
            scalar::zero()
        }
    };
    Matrix::from_fn(dim, dim, |i, j| ft.at(i, j) - aug(i) * aug(j) * &c)
}

impl Extension {
    /// Recovers the cocycle from the product through the splitting
    /// `q(b) = (b, u(b))`; with `u = 0` this returns the stored
    /// normalized cocycle, and any other linear `u` shifts it by the
    /// coboundary of `u`.
    pub fn extract_cocycle(&self, u: Option<&Matrix>) -> Vec<Matrix> {
        let dim = self.base.dim();
        let m = self.module_rank;
        let total_dim = dim + m;
        let embed = |i: usize, u: Option<&Matrix>| -> Vector {
            let mut v = matrix::zero_vec(total_dim);
            v[i] = scalar::one();
            if let Some(u) = u {
                for t in 0..m {
                    v[dim + t] = u.at(t, i).clone();
                }
            }
            v
        };
        (0..m)
            .map(|t| {
                Matrix::from_fn(dim, dim, |i, j| {
                    let qi = embed(i, u);
                    let qj = embed(j, u);
                    let prod = self.total.mul_vec(&qi, &qj);
                    // q(b_i b_j)
                    let mut qij = matrix::zero_vec(total_dim);
                    for (k, c) in self.base.mult(i, j).iter().enumerate() {
                        if !scalar::is_zero(c) {
                            matrix::vec_add_scaled(&mut qij, c, &embed(k, u));
                        }
                    }
                    &prod[dim + t] - &qij[dim + t]
                })
            })
            .collect()
    }
}
