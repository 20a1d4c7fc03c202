//! Finite-dimensional algebras over a quadratic operad presentation,
//! stored as structure constants, plus evaluation of arity-3 free-operad
//! elements in the endomorphism operad.
//!
//! A bilinear map `V ⊗ V -> V` is a `dim x dim^2` matrix whose column
//! `i*dim + j` is the image of `(v_i, v_j)`; trilinear maps use
//! `dim x dim^3` with columns `(i*dim + j)*dim + k`. The permutation
//! action on such maps is by permuting input slots, matching the
//! endomorphism-operad convention `(f.s)(a_1,...,a_n) = f(a_{s^{-1}(1)},...)`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::{self, Matrix, Vector};
use crate::operad::OperadPresentation;
use crate::perm::Perm;
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// Decodes a column index into input indices, most significant first.
pub fn decode_tuple(mut index: usize, arity: usize, dim: usize) -> Vec<usize> {
    let mut t = alloc::vec![0usize; arity];
    for slot in (0..arity).rev() {
        t[slot] = index % dim;
        index /= dim;
    }
    t
}

pub fn encode_tuple(t: &[usize], dim: usize) -> usize {
    t.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Permutes the input slots of a multilinear map: `(f.rho)` evaluated on
/// `(x_1.., x_n)` is `f(x_{rho^{-1}(1)}, ..., x_{rho^{-1}(n)})`.
pub fn permute_inputs(f: &Matrix, arity: usize, dim: usize, rho: &Perm) -> Matrix {
    assert_eq!(rho.arity(), arity);
    let rho_inv = rho.inverse();
    let cols = f.cols();
    Matrix::from_fn(f.rows(), cols, |l, col| {
        let t = decode_tuple(col, arity, dim);
        let src: Vec<usize> = (0..arity).map(|q| t[rho_inv.apply(q)]).collect();
        f.at(l, encode_tuple(&src, dim)).clone()
    })
}

/// Operadic composition in `End(V)`: plugs `g` into slot `i` (1-based) of
/// `f`.
pub fn compose_at(
    f: &Matrix,
    f_arity: usize,
    g: &Matrix,
    g_arity: usize,
    i: usize,
    dim: usize,
) -> Matrix {
    assert!((1..=f_arity).contains(&i));
    let out_arity = f_arity + g_arity - 1;
    let mut out = Matrix::zero(dim, dim.pow(out_arity as u32));
    for col in 0..out.cols() {
        let t = decode_tuple(col, out_arity, dim);
        let g_col = encode_tuple(&t[i - 1..i - 1 + g_arity], dim);
        for m in 0..dim {
            let gv = g.at(m, g_col);
            if scalar::is_zero(gv) {
                continue;
            }
            let mut f_tuple = Vec::with_capacity(f_arity);
            f_tuple.extend_from_slice(&t[..i - 1]);
            f_tuple.push(m);
            f_tuple.extend_from_slice(&t[i - 1 + g_arity..]);
            let f_col = encode_tuple(&f_tuple, dim);
            for l in 0..dim {
                let fv = f.at(l, f_col);
                if !scalar::is_zero(fv) {
                    *out.at_mut(l, col) += fv * gv;
                }
            }
        }
    }
    out
}

/// Structure report of [`PAlgebra::check_algebra`].
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub equivariance_ok: bool,
    /// `(relation index, nonzero value of the evaluated relation)`.
    pub violated_relations: Vec<(usize, Matrix)>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.equivariance_ok && self.violated_relations.is_empty()
    }
}

/// A vector space with a structural morphism `E -> End(V)(2)`, one
/// bilinear map per `E`-basis element.
#[derive(Debug, Clone)]
pub struct PAlgebra {
    operad: OperadPresentation,
    dim: usize,
    structure: Vec<Matrix>,
}

impl PAlgebra {
    /// Builds the algebra, enforcing S_2-equivariance of the structural
    /// morphism. Relations are *not* enforced here; `check_algebra`
    /// reports them so a broken algebra can still be inspected.
    pub fn new(operad: OperadPresentation, dim: usize, structure: Vec<Matrix>) -> Result<PAlgebra> {
        if structure.len() != operad.e().dim() {
            return Err(crate::shape_err!(
                "expected {} structure matrices, got {}",
                operad.e().dim(),
                structure.len()
            ));
        }
        for m in &structure {
            if m.rows() != dim || m.cols() != dim * dim {
                return Err(crate::shape_err!(
                    "structure matrices must be {dim} x {}",
                    dim * dim
                ));
            }
        }
        let alg = PAlgebra { operad, dim, structure };
        if !alg.equivariance_holds() {
            return Err(Error::Invalid(String::from(
                "structure constants are not S2-equivariant for the operad's generator module",
            )));
        }
        Ok(alg)
    }

    pub fn operad(&self) -> &OperadPresentation {
        &self.operad
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The structural morphism as raw bilinear maps, one per `E` basis
    /// element.
    pub fn structure(&self) -> &[Matrix] {
        &self.structure
    }

    /// `a(mu)` for a coordinate vector `mu` in `E`.
    pub fn apply_e(&self, mu: &[Scalar]) -> Matrix {
        let mut out = Matrix::zero(self.dim, self.dim * self.dim);
        for (k, c) in mu.iter().enumerate() {
            out.add_scaled_assign(c, &self.structure[k]);
        }
        out
    }

    fn equivariance_holds(&self) -> bool {
        structure_is_equivariant(&self.operad, self.dim, &self.structure)
    }

    /// Evaluates an arity-3 free-operad element as a trilinear map.
    pub fn eval3(&self, x: &[Scalar]) -> Result<Matrix> {
        let free = self.operad.free3();
        if x.len() != free.dim() {
            return Err(crate::shape_err!(
                "expected coordinates of length {}, got {}",
                free.dim(),
                x.len()
            ));
        }
        let mut out = Matrix::zero(self.dim, self.dim.pow(3));
        for (idx, &(a, b, r)) in free.labels().iter().enumerate() {
            let c = &x[idx];
            if scalar::is_zero(c) {
                continue;
            }
            let composed =
                compose_at(&self.structure[a], 2, &self.structure[b], 2, 1, self.dim);
            let permuted = permute_inputs(&composed, 3, self.dim, &crate::operad::rep_perm(r));
            out.add_scaled_assign(c, &permuted);
        }
        Ok(out)
    }

    /// Verifies equivariance and evaluates every relation.
    pub fn check_algebra(&self) -> CheckReport {
        let mut violated = Vec::new();
        for (i, r) in self.operad.relations().iter().enumerate() {
            let value = self.eval3(r).expect("relation vectors have the right length");
            if !value.is_zero() {
                violated.push((i, value));
            }
        }
        CheckReport { equivariance_ok: self.equivariance_holds(), violated_relations: violated }
    }

    pub fn is_valid(&self) -> bool {
        self.check_algebra().passed()
    }
}

/// Standalone S_2-equivariance test for candidate structure constants,
/// usable before construction so a broken input can still be reported.
pub fn structure_is_equivariant(
    operad: &OperadPresentation,
    dim: usize,
    structure: &[Matrix],
) -> bool {
    if structure.len() != operad.e().dim() {
        return false;
    }
    let t2 = Perm::transposition(2, 1, 2);
    let t_mat = operad.e().act(&t2);
    for k in 0..structure.len() {
        // a(e_k . t) as a combination of structure matrices
        let mut lhs = Matrix::zero(dim, dim * dim);
        for c in 0..structure.len() {
            lhs.add_scaled_assign(t_mat.at(c, k), &structure[c]);
        }
        let rhs = permute_inputs(&structure[k], 2, dim, &t2);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Transport of structure along an invertible linear map `g`: the result
/// has multiplication `g^{-1} a(e_k)(g x, g y)`. Valid algebras stay
/// valid; used to generate families of examples from the catalog.
pub fn transport(alg: &PAlgebra, g: &Matrix) -> Result<PAlgebra> {
    let dim = alg.dim();
    if g.rows() != dim || g.cols() != dim {
        return Err(crate::shape_err!("transport matrix must be {dim} x {dim}"));
    }
    let kit = matrix::SolveKit::new(g);
    if kit.rank() != dim {
        return Err(Error::Invalid(String::from("transport matrix must be invertible")));
    }
    let ginv = Matrix::from_cols(
        (0..dim).map(|j| kit.solve(&matrix::unit_vec(dim, j)).expect("invertible")).collect(),
    );
    let gg = kron(g, g);
    let structure: Vec<Matrix> =
        alg.structure().iter().map(|m| ginv.mul(m).mul(&gg)).collect();
    PAlgebra::new(alg.operad().clone(), dim, structure)
}

/// Kronecker product acting on the tensor-square column indexing used by
/// bilinear maps.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    Matrix::from_fn(ra * rb, ca * cb, |i, j| {
        let (ia, ib) = (i / rb, i % rb);
        let (ja, jb) = (j / cb, j % cb);
        a.at(ia, ja) * b.at(ib, jb)
    })
}

/// A zero coordinate vector in the arity-3 free component, for tests and
/// callers assembling elements by hand.
pub fn zero3(p: &OperadPresentation) -> Vector {
    matrix::zero_vec(p.free3().dim())
}
