//! Right `k[S_n]`-modules given by the action matrices of the adjacent
//! transpositions.
//!
//! Matrices act on coordinate columns: if `x` has coordinates `v` then
//! `x . sigma` has coordinates `act(sigma) * v`. With the composition
//! convention of [`crate::perm`] this makes `act` contravariant:
//! `act(s ∘ t) = act(t) * act(s)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::perm::Perm;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RightSModule {
    arity: usize,
    dim: usize,
    /// One matrix per adjacent transposition (k, k+1), k = 1..arity-1.
    gen_action: Vec<Matrix>,
    /// All n! action matrices, keyed by permutation.
    cache: BTreeMap<Perm, Matrix>,
}

impl RightSModule {
    /// Builds and validates the module. The generator matrices must
    /// square to the identity and satisfy the S_n braid relations.
    pub fn new(arity: usize, gen_action: Vec<Matrix>) -> Result<RightSModule> {
        if arity < 1 || gen_action.len() + 1 != arity {
            return Err(Error::ArityMismatch { expected: arity.saturating_sub(1), got: gen_action.len() });
        }
        let dim = if let Some(m) = gen_action.first() { m.rows() } else { 0 };
        for m in &gen_action {
            if m.rows() != dim || m.cols() != dim {
                return Err(crate::shape_err!("action matrices must be square of equal size"));
            }
        }
        let id = Matrix::identity(dim);
        for (k, m) in gen_action.iter().enumerate() {
            if m.mul(m) != id {
                return Err(crate::invalid!("generator {} does not square to the identity", k + 1));
            }
        }
        for k in 0..gen_action.len().saturating_sub(1) {
            let a = &gen_action[k];
            let b = &gen_action[k + 1];
            let ab = a.mul(b);
            let ba = b.mul(a);
            // (t_k t_{k+1})^3 = 1, checked on either side product.
            if ab.mul(&ab).mul(&ab) != id || ba.mul(&ba).mul(&ba) != id {
                return Err(crate::invalid!("braid relation fails between generators {} and {}", k + 1, k + 2));
            }
            for j in k + 2..gen_action.len() {
                let c = &gen_action[j];
                if a.mul(c) != c.mul(a) {
                    return Err(crate::invalid!("distant generators {} and {} do not commute", k + 1, j + 1));
                }
            }
        }
        let mut module = RightSModule { arity, dim, gen_action, cache: BTreeMap::new() };
        let mut cache = BTreeMap::new();
        for sigma in Perm::all(arity) {
            let m = module.compute_action(&sigma);
            cache.insert(sigma, m);
        }
        module.cache = cache;
        Ok(module)
    }

    /// The one-dimensional trivial module.
    pub fn trivial(arity: usize) -> RightSModule {
        let gens = (1..arity).map(|_| Matrix::identity(1)).collect();
        RightSModule::new(arity, gens).expect("trivial module is valid")
    }

    /// The one-dimensional sign module.
    pub fn sign(arity: usize) -> RightSModule {
        let gens = (1..arity)
            .map(|_| Matrix::identity(1).scaled(&crate::scalar::int(-1)))
            .collect();
        RightSModule::new(arity, gens).expect("sign module is valid")
    }

    /// The regular representation of S_2 on the basis `{e, e.(1 2)}`.
    pub fn regular_s2() -> RightSModule {
        RightSModule::new(2, alloc::vec![Matrix::from_int_rows(&[&[0, 1], &[1, 0]])])
            .expect("regular S2 module is valid")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Action matrix of `sigma`; columns are images of basis vectors.
    pub fn act(&self, sigma: &Perm) -> &Matrix {
        assert_eq!(sigma.arity(), self.arity, "arity mismatch in action");
        self.cache.get(sigma).expect("all group elements cached")
    }

    fn compute_action(&self, sigma: &Perm) -> Matrix {
        let mut acc = Matrix::identity(self.dim);
        // act(t_{k1} ∘ ... ∘ t_{km}) = act(t_{km}) ... act(t_{k1})
        for k in sigma.adjacent_factors() {
            acc = self.gen_action[k - 1].mul(&acc);
        }
        acc
    }
}
