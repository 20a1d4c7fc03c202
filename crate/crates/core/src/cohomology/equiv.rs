//! Coordinates on spaces of equivariant maps `W ⊗ V^{⊗n} -> V`, where `W`
//! is a right S_n-module given by action matrices on a chosen basis.
//!
//! Such a map is determined by its values on a generating subset of the
//! `W`-basis; the remaining freedom is cut out by the relations of the
//! generators over the group algebra. Because permutations act on input
//! tuples without signs, those constraints split into independent blocks,
//! one per S_n-orbit of index tuples, which keeps the kernel computations
//! tiny even when the ambient hom space is large.

use alloc::vec::Vec;

use crate::matrix::{self, Matrix, SolveKit, Vector};
use crate::palgebra::{decode_tuple, encode_tuple, permute_inputs};
use crate::perm::Perm;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone)]
struct OrbitBlock {
    /// Tuple indices in this orbit, increasing.
    tuples: Vec<usize>,
    /// RREF-canonical kernel basis over the unknowns `(generator, tuple)`,
    /// tuple-major within each generator.
    kernel: Vec<Vector>,
    /// Free-column positions of the kernel vectors (to read coordinates
    /// straight off generator values).
    free_cols: Vec<usize>,
}

/// The space of equivariant maps `W ⊗ V^{⊗n} -> V` with a canonical
/// coordinate system.
#[derive(Debug, Clone)]
pub struct EquivSpace {
    w_dim: usize,
    arity: usize,
    v_dim: usize,
    perms: Vec<Perm>,
    /// Indices into the W-basis of the chosen module generators.
    gens: Vec<usize>,
    /// Expansion of each W-basis element over `(generator, permutation)`.
    expansions: Vec<Vector>,
    blocks: Vec<OrbitBlock>,
    dim: usize,
}

impl EquivSpace {
    /// `w_action(sigma)` must give the action matrix of `sigma` on the
    /// W-basis (contravariant, columns are images).
    pub fn new(
        w_dim: usize,
        arity: usize,
        v_dim: usize,
        w_action: impl Fn(&Perm) -> Matrix,
    ) -> EquivSpace {
        let perms = Perm::all(arity);
        let actions: Vec<Matrix> = perms.iter().map(&w_action).collect();

        // Greedy generating subset of the basis under the group action.
        let mut gens: Vec<usize> = Vec::new();
        let mut span: Vec<Vector> = Vec::new();
        let mut rank = 0usize;
        for i in 0..w_dim {
            let mut with_i = span.clone();
            with_i.push(matrix::unit_vec(w_dim, i));
            if matrix::span_rank(&with_i) == rank {
                continue;
            }
            gens.push(i);
            for a in &actions {
                span.push(a.col(i));
            }
            rank = matrix::span_rank(&span);
            if rank == w_dim {
                break;
            }
        }
        assert_eq!(rank, w_dim, "generators must span W");

        // Theta: (generator j, permutation s) -> gen_j . s, as a matrix.
        let theta = Matrix::from_fn(w_dim, gens.len() * perms.len(), |r, c| {
            let j = c / perms.len();
            let s = c % perms.len();
            actions[s].at(r, gens[j]).clone()
        });
        let theta_kit = SolveKit::new(&theta);
        let expansions: Vec<Vector> = (0..w_dim)
            .map(|i| theta_kit.solve(&matrix::unit_vec(w_dim, i)).expect("generators span W"))
            .collect();
        let relations = matrix::kernel_basis(&theta);

        // Orbits of input tuples under the left S_n action.
        let tuple_count = v_dim.pow(arity as u32);
        let mut orbit_of = alloc::vec![usize::MAX; tuple_count];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for t in 0..tuple_count {
            if orbit_of[t] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = perms
                .iter()
                .map(|p| permute_tuple(t, arity, v_dim, p))
                .collect();
            members.sort_unstable();
            members.dedup();
            let id = orbits.len();
            for &m in &members {
                orbit_of[m] = id;
            }
            orbits.push(members);
        }

        // Constraint kernel per orbit. Unknowns are values F_j[tuple] for
        // tuples in the orbit; one constraint row per (relation, tuple).
        let mut blocks = Vec::with_capacity(orbits.len());
        let mut dim = 0usize;
        for tuples in orbits {
            let pos = |u: usize| tuples.iter().position(|&x| x == u).unwrap();
            let unknowns = gens.len() * tuples.len();
            let mut rows: Vec<Vector> = Vec::new();
            for kappa in &relations {
                for &t in &tuples {
                    let mut row = matrix::zero_vec(unknowns);
                    for j in 0..gens.len() {
                        for (s, p) in perms.iter().enumerate() {
                            let c = &kappa[j * perms.len() + s];
                            if scalar::is_zero(c) {
                                continue;
                            }
                            let u = permute_tuple(t, arity, v_dim, p);
                            row[j * tuples.len() + pos(u)] += c;
                        }
                    }
                    rows.push(row);
                }
            }
            let kernel = if rows.is_empty() {
                (0..unknowns).map(|i| matrix::unit_vec(unknowns, i)).collect()
            } else {
                matrix::kernel_basis(&Matrix::from_rows(rows))
            };
            let free_cols = kernel
                .iter()
                .enumerate()
                .map(|(i, v)| find_free_col(&kernel, i, v))
                .collect();
            dim += kernel.len() * v_dim;
            blocks.push(OrbitBlock { tuples, kernel, free_cols });
        }

        EquivSpace { w_dim, arity, v_dim, perms, gens, expansions, blocks, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn w_dim(&self) -> usize {
        self.w_dim
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    fn tuple_count(&self) -> usize {
        self.v_dim.pow(self.arity as u32)
    }

    /// Values on the generators from coordinates.
    pub fn coords_to_gen_values(&self, coords: &[Scalar]) -> Vec<Matrix> {
        assert_eq!(coords.len(), self.dim);
        let mut gv: Vec<Matrix> =
            (0..self.gens.len()).map(|_| Matrix::zero(self.v_dim, self.tuple_count())).collect();
        let mut c = 0usize;
        for block in &self.blocks {
            for kappa in &block.kernel {
                for l in 0..self.v_dim {
                    let coeff = &coords[c];
                    c += 1;
                    if scalar::is_zero(coeff) {
                        continue;
                    }
                    for (u_pos, &u) in block.tuples.iter().enumerate() {
                        for j in 0..self.gens.len() {
                            let k = &kappa[j * block.tuples.len() + u_pos];
                            if !scalar::is_zero(k) {
                                *gv[j].at_mut(l, u) += coeff * k;
                            }
                        }
                    }
                }
            }
        }
        gv
    }

    /// Reads coordinates off generator values (RREF free columns).
    pub fn gen_values_to_coords(&self, gv: &[Matrix]) -> Vector {
        assert_eq!(gv.len(), self.gens.len());
        let mut coords = Vec::with_capacity(self.dim);
        for block in &self.blocks {
            for &free in &block.free_cols {
                let j = free / block.tuples.len();
                let u = block.tuples[free % block.tuples.len()];
                for l in 0..self.v_dim {
                    coords.push(gv[j].at(l, u).clone());
                }
            }
        }
        coords
    }

    /// Values on every W-basis element from coordinates.
    pub fn coords_to_values(&self, coords: &[Scalar]) -> Vec<Matrix> {
        let gv = self.coords_to_gen_values(coords);
        self.gen_values_to_values(&gv)
    }

    /// Expands generator values to values on the whole W-basis through
    /// the stored group-algebra expansions.
    pub fn gen_values_to_values(&self, gv: &[Matrix]) -> Vec<Matrix> {
        (0..self.w_dim)
            .map(|i| {
                let mut out = Matrix::zero(self.v_dim, self.tuple_count());
                let exp = &self.expansions[i];
                for j in 0..self.gens.len() {
                    for (s, p) in self.perms.iter().enumerate() {
                        let c = &exp[j * self.perms.len() + s];
                        if !scalar::is_zero(c) {
                            // f(w_i ⊗ x) = sum c * F_j(s . x)
                            out.add_scaled_assign(
                                c,
                                &permute_inputs(&gv[j], self.arity, self.v_dim, p),
                            );
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Coordinates of a full value table (which must be equivariant;
    /// only the generator slices are consulted).
    pub fn values_to_coords(&self, values: &[Matrix]) -> Vector {
        assert_eq!(values.len(), self.w_dim);
        let gv: Vec<Matrix> = self.gens.iter().map(|&i| values[i].clone()).collect();
        self.gen_values_to_coords(&gv)
    }
}

fn permute_tuple(t: usize, arity: usize, v_dim: usize, p: &Perm) -> usize {
    let digits = decode_tuple(t, arity, v_dim);
    let p_inv = p.inverse();
    let moved: Vec<usize> = (0..arity).map(|q| digits[p_inv.apply(q)]).collect();
    encode_tuple(&moved, v_dim)
}

fn find_free_col(kernel: &[Vector], own: usize, v: &Vector) -> usize {
    // RREF kernel basis: each vector is 1 at its own free column and 0 at
    // the free columns of the others.
    (0..v.len())
        .find(|&c| {
            v[c] == scalar::one()
                && kernel
                    .iter()
                    .enumerate()
                    .all(|(i, w)| i == own || scalar::is_zero(&w[c]))
        })
        .expect("kernel basis is in RREF form")
}
