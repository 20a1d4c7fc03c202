//! Finitely generated quadratic operads: the arity-3 component of the free
//! operad on a binary generator module, its S_3 action, composition
//! rewriting, built-in presets and the Koszul dual pairing.
//!
//! Basis conventions, fixed once and relied on by the file formats:
//! the arity-3 space has basis `(e_a ∘_1 e_b) . rho` with `rho` running
//! through the coset representatives `id, (1 2 3), (1 3 2)` of the slot
//! {1,2} transposition, ordered lexicographically in `(a, b, rho)`.
//! The rewriting rules
//!   `(m ∘_1 n) . (1 2) = m ∘_1 (n . (1 2))` and
//!   `m ∘_2 n = ((m . (1 2)) ∘_1 n) . (1 3 2)`
//! reduce every expression to this basis; both are consequences of the
//! endomorphism-operad action and are pinned by evaluation tests in
//! [`crate::palgebra`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{self, Matrix, Vector};
use crate::perm::Perm;
use crate::scalar::{self, Scalar};
use crate::smodule::RightSModule;
use crate::{Error, Result};

/// Number of coset representatives: 0 = id, 1 = (1 2 3), 2 = (1 3 2).
pub const REP_COUNT: usize = 3;

pub fn rep_perm(r: usize) -> Perm {
    match r {
        0 => Perm::identity(3),
        1 => Perm::from_one_line(&[2, 3, 1]).unwrap(),
        2 => Perm::from_one_line(&[3, 1, 2]).unwrap(),
        _ => panic!("rep index out of range"),
    }
}

/// The arity-3 component of the free operad on `E`, with its S_3 action.
#[derive(Debug, Clone)]
pub struct FreeArity3 {
    e: RightSModule,
    dim: usize,
    /// `labels[i] = (a, b, r)` for the basis element `(e_a ∘_1 e_b).rho_r`.
    labels: Vec<(usize, usize, usize)>,
    /// Action matrices for all six permutations.
    action: Vec<(Perm, Matrix)>,
}

impl FreeArity3 {
    pub fn new(e: &RightSModule) -> Result<FreeArity3> {
        if e.arity() != 2 {
            return Err(Error::ArityMismatch { expected: 2, got: e.arity() });
        }
        let d = e.dim();
        let dim = 3 * d * d;
        let mut labels = Vec::with_capacity(dim);
        for a in 0..d {
            for b in 0..d {
                for r in 0..REP_COUNT {
                    labels.push((a, b, r));
                }
            }
        }
        let mut free = FreeArity3 { e: e.clone(), dim, labels, action: Vec::new() };
        let mut action = Vec::new();
        for sigma in Perm::all(3) {
            let m = free.compute_action(&sigma);
            action.push((sigma, m));
        }
        free.action = action;
        Ok(free)
    }

    pub fn e(&self) -> &RightSModule {
        &self.e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[(usize, usize, usize)] {
        &self.labels
    }

    pub fn index(&self, a: usize, b: usize, r: usize) -> usize {
        let d = self.e.dim();
        (a * d + b) * REP_COUNT + r
    }

    /// Action matrix of `sigma` on this basis (columns are images of basis
    /// vectors, contravariant like every right action in this crate).
    pub fn act(&self, sigma: &Perm) -> &Matrix {
        &self
            .action
            .iter()
            .find(|(p, _)| p == sigma)
            .expect("S3 action cached")
            .1
    }

    fn compute_action(&self, sigma: &Perm) -> Matrix {
        let d = self.e.dim();
        let swap = Perm::transposition(3, 1, 2);
        let t_on_e = self.e.act(&Perm::transposition(2, 1, 2));
        let mut m = Matrix::zero(self.dim, self.dim);
        for (col, &(a, b, r)) in self.labels.iter().enumerate() {
            // rho_r ∘ sigma = h ∘ rho_{r'} with h in {id, (1 2)}.
            let prod = rep_perm(r).compose(sigma).expect("arity 3");
            let (h_is_swap, r_new) = decompose_coset(&prod, &swap);
            if !h_is_swap {
                *m.at_mut(self.index(a, b, r_new), col) += scalar::one();
            } else {
                // (m ∘_1 n).(1 2) = m ∘_1 (n.(1 2))
                for c in 0..d {
                    let coeff = t_on_e.at(c, b);
                    if !scalar::is_zero(coeff) {
                        *m.at_mut(self.index(a, c, r_new), col) += coeff.clone();
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, sigma: &Perm, v: &[Scalar]) -> Vector {
        self.act(sigma).mul_vec(v).expect("dimension fixed")
    }

    /// `mu ∘_i nu` for coordinate vectors in `E`, expanded in this basis.
    pub fn compose2(&self, i: usize, mu: &[Scalar], nu: &[Scalar]) -> Result<Vector> {
        let d = self.e.dim();
        if mu.len() != d || nu.len() != d {
            return Err(crate::shape_err!("compose2 expects E-coordinates of length {d}"));
        }
        let (left, rep) = match i {
            1 => (mu.to_vec(), 0),
            2 => {
                // m ∘_2 n = ((m.(1 2)) ∘_1 n) . (1 3 2)
                let t = self.e.act(&Perm::transposition(2, 1, 2));
                (t.mul_vec(mu)?, 2)
            }
            _ => return Err(crate::invalid!("composition slot must be 1 or 2, got {i}")),
        };
        let mut out = matrix::zero_vec(self.dim);
        for (a, la) in left.iter().enumerate() {
            if scalar::is_zero(la) {
                continue;
            }
            for (b, nb) in nu.iter().enumerate() {
                if !scalar::is_zero(nb) {
                    out[self.index(a, b, rep)] += la * nb;
                }
            }
        }
        Ok(out)
    }
}

/// Writes `p` as `h ∘ rho_r` with `h` in `{id, swap}`; returns
/// `(h == swap, r)`.
fn decompose_coset(p: &Perm, swap: &Perm) -> (bool, usize) {
    for r in 0..REP_COUNT {
        if &rep_perm(r) == p {
            return (false, r);
        }
        if &swap.compose(&rep_perm(r)).expect("arity 3") == p {
            return (true, r);
        }
    }
    unreachable!("coset representatives cover S3")
}

/// A finitely generated quadratic operad presentation: binary generators
/// `E` and a basis of the arity-3 relation subspace.
#[derive(Debug, Clone)]
pub struct OperadPresentation {
    pub name: String,
    free3: FreeArity3,
    /// RREF-canonical basis vectors of span(R), each of length `3 d^2`.
    relations: Vec<Vector>,
}

impl OperadPresentation {
    pub fn new(name: &str, e: &RightSModule, spanning: &[Vector]) -> Result<OperadPresentation> {
        let free3 = FreeArity3::new(e)?;
        for v in spanning {
            if v.len() != free3.dim() {
                return Err(crate::shape_err!(
                    "relation vectors must have length {}",
                    free3.dim()
                ));
            }
        }
        let relations = canonical_span(spanning);
        let pres = OperadPresentation { name: String::from(name), free3, relations };
        pres.check_stability()?;
        Ok(pres)
    }

    pub fn e(&self) -> &RightSModule {
        self.free3.e()
    }

    pub fn free3(&self) -> &FreeArity3 {
        &self.free3
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    pub fn relation_matrix(&self) -> Matrix {
        Matrix::from_cols(self.relations.to_vec())
    }

    /// span(R) must be closed under the S_3 action.
    fn check_stability(&self) -> Result<()> {
        let base_rank = self.relations.len();
        for sigma in Perm::all(3) {
            let mut all = self.relations.to_vec();
            for r in &self.relations {
                all.push(self.free3.apply(&sigma, r));
            }
            if matrix::span_rank(&all) != base_rank {
                return Err(crate::invalid!(
                    "relation span of `{}` is not S3-stable",
                    self.name
                ));
            }
        }
        Ok(())
    }

    /// Expansion coefficients of `r_j . sigma` in the relation basis.
    pub fn relation_action(&self, sigma: &Perm) -> Matrix {
        let rmat = self.relation_matrix();
        let kit = matrix::SolveKit::new(&rmat);
        let cols: Vec<Vector> = self
            .relations
            .iter()
            .map(|r| {
                kit.solve(&self.free3.apply(sigma, r))
                    .expect("span(R) is stable, checked at construction")
            })
            .collect();
        Matrix::from_cols(cols)
    }
}

/// RREF-canonical basis of the span of the given vectors.
pub fn canonical_span(vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let rref = matrix::Rref::of(&Matrix::from_rows(vectors.to_vec()));
    (0..rref.rank()).map(|i| rref.rref.row(i).to_vec()).collect()
}

pub const PRESET_NAMES: [&str; 4] = ["Com", "Ass", "Lie", "Leib"];

/// Built-in presets. Relation spans are generated programmatically from
/// the defining identities through `compose2` and the S_3 action, never
/// hard-coded, so they track the basis conventions automatically.
pub fn preset(name: &str) -> Result<OperadPresentation> {
    let lower = name.to_lowercase();
    match lower.as_str() {
        "com" => {
            let e = RightSModule::trivial(2);
            let free = FreeArity3::new(&e)?;
            let gen = vec![scalar::one()];
            let assoc =
                matrix::vec_sub(&free.compose2(1, &gen, &gen)?, &free.compose2(2, &gen, &gen)?);
            OperadPresentation::new("Com", &e, &orbit(&free, &[assoc]))
        }
        "lie" => {
            let e = RightSModule::sign(2);
            let free = FreeArity3::new(&e)?;
            let gen = vec![scalar::one()];
            let base = free.compose2(1, &gen, &gen)?;
            let mut jacobi = base.clone();
            for r in 1..REP_COUNT {
                let term = free.apply(&rep_perm(r), &base);
                for (x, t) in jacobi.iter_mut().zip(term) {
                    *x += t;
                }
            }
            OperadPresentation::new("Lie", &e, &orbit(&free, &[jacobi]))
        }
        "ass" => {
            let e = RightSModule::regular_s2();
            let free = FreeArity3::new(&e)?;
            let gen = vec![scalar::one(), scalar::zero()];
            let assoc =
                matrix::vec_sub(&free.compose2(1, &gen, &gen)?, &free.compose2(2, &gen, &gen)?);
            OperadPresentation::new("Ass", &e, &orbit(&free, &[assoc]))
        }
        "leib" => {
            // Right Leibniz identity [[x,y],z] - [[x,z],y] - [x,[y,z]].
            let e = RightSModule::regular_s2();
            let free = FreeArity3::new(&e)?;
            let gen = vec![scalar::one(), scalar::zero()];
            let c11 = free.compose2(1, &gen, &gen)?;
            let swapped = free.apply(&Perm::transposition(3, 2, 3), &c11);
            let c2 = free.compose2(2, &gen, &gen)?;
            let mut r = c11;
            for (x, (s, c)) in r.iter_mut().zip(swapped.into_iter().zip(c2)) {
                *x -= s + c;
            }
            OperadPresentation::new("Leib", &e, &orbit(&free, &[r]))
        }
        _ => Err(Error::Unknown(String::from(name))),
    }
}

fn orbit(free: &FreeArity3, generators: &[Vector]) -> Vec<Vector> {
    let mut span = Vec::new();
    for g in generators {
        for sigma in Perm::all(3) {
            span.push(free.apply(&sigma, g));
        }
    }
    span
}

/// The Koszul-dual data of a presentation: the sign-twisted dual generator
/// module, the invariant pairing between the two arity-3 free components,
/// and the annihilator of the relations.
#[derive(Debug, Clone)]
pub struct KoszulData {
    pub edual: RightSModule,
    pub free3dual: FreeArity3,
    /// Pairing matrix, rows over the dual basis, columns over the primal
    /// one; `<x, y> = x^T . pairing . y`.
    pub pairing: Matrix,
    /// RREF-canonical basis of the annihilator of span(R).
    pub rperp: Vec<Vector>,
}

pub fn koszul_dual(p: &OperadPresentation) -> KoszulData {
    let e = p.e();
    let t = Perm::transposition(2, 1, 2);
    // (phi . sigma)(x) = sign(sigma) phi(x . sigma^{-1}); on the generator
    // transposition this is minus the transpose.
    let dual_gen = e.act(&t).transpose().scaled(&scalar::int(-1));
    let edual = RightSModule::new(2, vec![dual_gen]).expect("dual of a valid module is valid");
    let free3dual = FreeArity3::new(&edual).expect("same arity");

    // Invariant pairing by signed averaging of the seed that matches up
    // the id-slices of the two bases.
    let dim = p.free3().dim();
    let mut seed = Matrix::zero(dim, dim);
    let d = e.dim();
    for a in 0..d {
        for b in 0..d {
            let i = free3dual.index(a, b, 0);
            let j = p.free3().index(a, b, 0);
            *seed.at_mut(i, j) = scalar::one();
        }
    }
    let mut pairing = Matrix::zero(dim, dim);
    for sigma in Perm::all(3) {
        let term = free3dual
            .act(&sigma)
            .transpose()
            .mul(&seed)
            .mul(p.free3().act(&sigma));
        pairing.add_scaled_assign(&scalar::int(sigma.sign()), &term);
    }
    assert_eq!(pairing.rank(), dim, "canonical pairing must be perfect");

    // rperp = { x : <x, r> = 0 for all r in R }.
    let constraints = pairing.mul(&p.relation_matrix()).transpose();
    let rperp = matrix::kernel_basis(&constraints);
    assert_eq!(rperp.len(), dim - p.relations().len());
    KoszulData { edual, free3dual, pairing, rperp }
}

impl KoszulData {
    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let by = self.pairing.mul_vec(y).expect("shape");
        x.iter().zip(by).map(|(a, b)| a * b).fold(scalar::zero(), |acc, v| acc + v)
    }

    /// Annihilator inside the primal space of a span in the dual space.
    pub fn annihilator_of_dual_span(&self, dual_span: &[Vector]) -> Vec<Vector> {
        let rows: Vec<Vector> = dual_span
            .iter()
            .map(|x| {
                let xt = Matrix::from_rows(vec![x.clone()]);
                xt.mul(&self.pairing).row(0).to_vec()
            })
            .collect();
        matrix::kernel_basis(&Matrix::from_rows(rows))
    }
}
