//! The operadic cochain complex of an algebra in degrees 1..3: the
//! differentials, the convolution star products, second cohomology with
//! canonical representatives, and the cokernel of the degree-2
//! differential used for obstruction classes.
//!
//! Degree-2 cochains are equivariant maps `E ⊗ V^2 -> V`; degree-3
//! cochains live directly on the relation span `R ⊗ V^3 -> V`. The
//! degree-2 differential is `d2(f) = -(f*pi + pi*f)` restricted to R; on
//! the associativity generator this reproduces the Hochschild
//! differential with no extra sign, and on the Jacobi generator the
//! Chevalley-Eilenberg one (both pinned by tests).

mod equiv;

pub use equiv::EquivSpace;

use alloc::vec::Vec;

use crate::matrix::{self, CokerProjection, Matrix, SolveKit, Vector};
use crate::palgebra::{compose_at, PAlgebra};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// Values of a degree-2 cochain on every `E`-basis element.
pub type Cochain2Values = Vec<Matrix>;
/// Values of a degree-3 cochain on every relation-basis element.
pub type Cochain3Values = Vec<Matrix>;

/// The star product `C^2 x C^2 -> C^3`: on a composition generator,
/// `(f*g)(m ∘_1 n; x1,x2,x3) = f(m; g(n; x1,x2), x3)`, extended to the
/// relation span through the basis rewriting.
pub fn star_22(alg: &PAlgebra, f: &Cochain2Values, g: &Cochain2Values) -> Cochain3Values {
    let v = alg.dim();
    let free = alg.operad().free3();
    let d = alg.operad().e().dim();
    // composed[(a,b)] = f_a( g_b(x1,x2), x3 )
    let mut composed = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            composed.push(compose_at(&f[a], 2, &g[b], 2, 1, v));
        }
    }
    alg.operad()
        .relations()
        .iter()
        .map(|r| {
            let mut out = Matrix::zero(v, v.pow(3));
            for (idx, &(a, b, rep)) in free.labels().iter().enumerate() {
                let c = &r[idx];
                if !scalar::is_zero(c) {
                    let term = crate::palgebra::permute_inputs(
                        &composed[a * d + b],
                        3,
                        v,
                        &crate::operad::rep_perm(rep),
                    );
                    out.add_scaled_assign(c, &term);
                }
            }
            out
        })
        .collect()
}

/// `C^1 * C^2 -> C^2`: post-composition, `(f*g)(m; x) = f(g(m; x))`.
pub fn star_12(alg: &PAlgebra, f: &Matrix, g: &Cochain2Values) -> Cochain2Values {
    g.iter().map(|gm| compose_at(f, 1, gm, 2, 1, alg.dim())).collect()
}

/// `C^2 * C^1 -> C^2`: sum of pluggings into each input slot.
pub fn star_21(alg: &PAlgebra, f: &Cochain2Values, g: &Matrix) -> Cochain2Values {
    let v = alg.dim();
    f.iter()
        .map(|fm| compose_at(fm, 2, g, 1, 1, v).add(&compose_at(fm, 2, g, 1, 2, v)))
        .collect()
}

/// `C^1 * C^3 -> C^3`.
pub fn star_13(alg: &PAlgebra, f: &Matrix, g: &Cochain3Values) -> Cochain3Values {
    g.iter().map(|gm| compose_at(f, 1, gm, 3, 1, alg.dim())).collect()
}

/// `C^3 * C^1 -> C^3`.
pub fn star_31(alg: &PAlgebra, f: &Cochain3Values, g: &Matrix) -> Cochain3Values {
    let v = alg.dim();
    f.iter()
        .map(|fm| {
            let mut out = compose_at(fm, 3, g, 1, 1, v);
            out.add_assign(&compose_at(fm, 3, g, 1, 2, v));
            out.add_assign(&compose_at(fm, 3, g, 1, 3, v));
            out
        })
        .collect()
}

/// Degree-1 differential: `d1(f)(m; x1, x2) = pi(m; f x1, x2) +
/// pi(m; x1, f x2) - f(pi(m; x1, x2))`.
pub fn d1_values(alg: &PAlgebra, f: &Matrix) -> Cochain2Values {
    let v = alg.dim();
    alg.structure()
        .iter()
        .map(|pk| {
            let mut out = compose_at(pk, 2, f, 1, 1, v);
            out.add_assign(&compose_at(pk, 2, f, 1, 2, v));
            out.add_scaled_assign(&scalar::int(-1), &compose_at(f, 1, pk, 2, 1, v));
            out
        })
        .collect()
}

/// Degree-2 differential: `d2(f) = -(f*pi + pi*f)` restricted to the
/// relation span.
pub fn d2_values(alg: &PAlgebra, f: &Cochain2Values) -> Cochain3Values {
    let pi = alg.structure().to_vec();
    let mut a = star_22(alg, f, &pi);
    let b = star_22(alg, &pi, f);
    for (x, y) in a.iter_mut().zip(b) {
        x.add_assign(&y);
        *x = x.scaled(&scalar::int(-1));
    }
    a
}

/// Summary dimensions plus canonical degree-2 representatives.
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub dim_c1: usize,
    pub dim_c2: usize,
    pub dim_c3: usize,
    pub dim_z2: usize,
    pub dim_b2: usize,
    pub dim_h2: usize,
    pub dim_b3: usize,
    pub dim_coker3: usize,
    /// Representative cocycles in C^2 coordinates, one per H^2 basis
    /// class, chosen by the RREF pivot rules.
    pub representatives: Vec<Vector>,
}

/// Everything the deformation machinery needs about one algebra's cochain
/// complex, built once: coordinate systems for C^2 and C^3, the two
/// differentials as matrices, a prefactored solver and cokernel data for
/// the degree-2 differential, and canonical H^2 representatives.
#[derive(Debug, Clone)]
pub struct CochainSpaces {
    algebra: PAlgebra,
    pub c2: EquivSpace,
    pub c3: EquivSpace,
    pub mat_d1: Matrix,
    pub mat_d2: Matrix,
    d2_kit: SolveKit,
    coker: CokerProjection,
    h2_reps: Vec<Vector>,
    dim_z2: usize,
    dim_b2: usize,
    /// Solver over `[B^2 basis | representatives]` used to read off
    /// cohomology classes of cocycles.
    class_kit: SolveKit,
}

impl CochainSpaces {
    pub fn new(algebra: &PAlgebra) -> CochainSpaces {
        let v = algebra.dim();
        let e = algebra.operad().e().clone();
        let c2 = EquivSpace::new(e.dim(), 2, v, |s| e.act(s).clone());
        let pres = algebra.operad().clone();
        let r_dim = pres.relations().len();
        let c3 = EquivSpace::new(r_dim, 3, v, |s| pres.relation_action(s));

        let mat_d1 = Matrix::from_cols(
            (0..v * v)
                .map(|col| {
                    let f = Matrix::from_fn(v, v, |i, j| {
                        if i * v + j == col {
                            scalar::one()
                        } else {
                            scalar::zero()
                        }
                    });
                    c2.values_to_coords(&d1_values(algebra, &f))
                })
                .collect(),
        );
        let mat_d2 = Matrix::from_cols(
            (0..c2.dim())
                .map(|col| {
                    let coords = matrix::unit_vec(c2.dim(), col);
                    let values = c2.coords_to_values(&coords);
                    c3.values_to_coords(&d2_values(algebra, &values))
                })
                .collect(),
        );
        let d2_kit = SolveKit::new(&mat_d2);
        let coker = CokerProjection::of(&mat_d2);

        // H^2: complete the image of d1 to ker(d2) by greedy rank growth
        // over the RREF kernel basis.
        let z2 = matrix::kernel_basis(&mat_d2);
        let b2 = matrix::image_basis(&mat_d1);
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
        let mut class_cols = b2.clone();
        class_cols.extend(reps.iter().cloned());
        let class_kit = SolveKit::new(&Matrix::from_cols(class_cols));

        CochainSpaces {
            algebra: algebra.clone(),
            c2,
            c3,
            mat_d1,
            mat_d2,
            d2_kit,
            coker,
            h2_reps: reps,
            dim_z2: z2.len(),
            dim_b2: b2.len(),
            class_kit,
        }
    }

    pub fn algebra(&self) -> &PAlgebra {
        &self.algebra
    }

    pub fn dim_h2(&self) -> usize {
        self.h2_reps.len()
    }

    pub fn dim_b2(&self) -> usize {
        self.dim_b2
    }

    pub fn dim_z2(&self) -> usize {
        self.dim_z2
    }

    pub fn dim_coker3(&self) -> usize {
        self.coker.coker_dim()
    }

    /// Canonical representative cocycles, one per H^2 class.
    pub fn representatives(&self) -> &[Vector] {
        &self.h2_reps
    }

    pub fn d1_coords(&self, f: &Matrix) -> Vector {
        self.c2.values_to_coords(&d1_values(&self.algebra, f))
    }

    pub fn d2_coords(&self, c2_coords: &[Scalar]) -> Vector {
        self.mat_d2.mul_vec(c2_coords).expect("c2 coordinates")
    }

    pub fn is_cocycle(&self, c2_coords: &[Scalar]) -> bool {
        matrix::vec_is_zero(&self.d2_coords(c2_coords))
    }

    /// H^2 coordinates of a cocycle in the representative basis.
    pub fn class_of(&self, cocycle: &[Scalar]) -> Result<Vector> {
        let sol = self
            .class_kit
            .solve(cocycle)
            .ok_or_else(|| Error::Invalid(alloc::string::String::from("not a 2-cocycle")))?;
        Ok(sol[self.dim_b2..].to_vec())
    }

    /// Splits a degree-3 element into its exact part and cokernel
    /// coordinates; returns the deterministic preimage when it is exact.
    pub fn coker3(&self, c3_coords: &[Scalar]) -> Coker3Split {
        let (image_part, class) = self.coker.split(c3_coords);
        let preimage = if matrix::vec_is_zero(&class) {
            Some(self.d2_kit.solve(&image_part).expect("image part is exact"))
        } else {
            None
        };
        Coker3Split { class, exact_part: image_part, preimage }
    }

    /// Deterministic solution of `d2(x) = y`; `None` if `y` is not exact.
    pub fn d2_preimage(&self, c3_coords: &[Scalar]) -> Option<Vector> {
        self.d2_kit.solve(c3_coords)
    }

    /// Embeds cokernel coordinates back into C^3 coordinates (the chosen
    /// complement basis of the image of d2).
    pub fn coker_embed(&self, class: &[Scalar]) -> Vector {
        self.coker.embed(class)
    }

    pub fn report(&self) -> Result<CohomologyReport> {
        if !self.algebra.is_valid() {
            return Err(Error::Invalid(alloc::string::String::from(
                "cohomology requires a valid algebra (check_algebra fails)",
            )));
        }
        Ok(CohomologyReport {
            dim_c1: self.algebra.dim() * self.algebra.dim(),
            dim_c2: self.c2.dim(),
            dim_c3: self.c3.dim(),
            dim_z2: self.dim_z2,
            dim_b2: self.dim_b2,
            dim_h2: self.h2_reps.len(),
            dim_b3: self.d2_kit.rank(),
            dim_coker3: self.coker.coker_dim(),
            representatives: self.h2_reps.clone(),
        })
    }
}

/// Result of the cokernel split in degree 3.
#[derive(Debug, Clone)]
pub struct Coker3Split {
    /// Coordinates in the chosen complement of `im d2`.
    pub class: Vector,
    /// Component inside `im d2` (in C^3 coordinates).
    pub exact_part: Vector,
    /// Deterministic solution of `d2(x) = exact part`, present iff the
    /// class vanishes.
    pub preimage: Option<Vector>,
}

impl Coker3Split {
    pub fn is_exact(&self) -> bool {
        matrix::vec_is_zero(&self.class)
    }
}
