//! Ready-made example algebras over the preset operads, plus small
//! deterministic generators used to produce families of valid algebras
//! (transport of structure along random invertible maps).

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::operad::preset;
use crate::palgebra::{permute_inputs, PAlgebra};
use crate::perm::Perm;
use crate::scalar::{self, Scalar};
use crate::Result;

/// Builds the structural morphism from a single multiplication table.
/// For a regular generator module the second generator acts as the
/// opposite multiplication; for the one-dimensional modules the table has
/// to have the right symmetry, which construction enforces.
pub fn from_bilinear(operad_name: &str, dim: usize, mult: Matrix) -> Result<PAlgebra> {
    let p = preset(operad_name)?;
    let structure = match p.e().dim() {
        1 => vec![mult],
        2 => {
            let opposite = permute_inputs(&mult, 2, dim, &Perm::transposition(2, 1, 2));
            vec![mult, opposite]
        }
        _ => unreachable!("presets have at most two generators"),
    };
    PAlgebra::new(p, dim, structure)
}

fn table(dim: usize, entries: &[(usize, usize, &[(usize, i64)])]) -> Matrix {
    let mut m = Matrix::zero(dim, dim * dim);
    for &(i, j, values) in entries {
        for &(out, c) in values {
            *m.at_mut(out, i * dim + j) = scalar::int(c);
        }
    }
    m
}

/// sl2 with basis (e, f, h): `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn lie_sl2() -> PAlgebra {
    let m = table(
        3,
        &[
            (0, 1, &[(2, 1)]),
            (1, 0, &[(2, -1)]),
            (2, 0, &[(0, 2)]),
            (0, 2, &[(0, -2)]),
            (2, 1, &[(1, -2)]),
            (1, 2, &[(1, 2)]),
        ],
    );
    from_bilinear("Lie", 3, m).expect("sl2 is a Lie algebra")
}

/// Three-dimensional Heisenberg algebra: `[e1,e2] = e3`.
pub fn lie_heisenberg3() -> PAlgebra {
    let m = table(3, &[(0, 1, &[(2, 1)]), (1, 0, &[(2, -1)])]);
    from_bilinear("Lie", 3, m).expect("heisenberg is a Lie algebra")
}

pub fn lie_abelian(dim: usize) -> PAlgebra {
    from_bilinear("Lie", dim, Matrix::zero(dim, dim * dim)).expect("abelian bracket")
}

/// Solvable 2-dimensional algebra `[e1,e2] = e2`.
pub fn lie_solvable2() -> PAlgebra {
    let m = table(2, &[(0, 1, &[(1, 1)]), (1, 0, &[(1, -1)])]);
    from_bilinear("Lie", 2, m).expect("solvable algebra")
}

/// Diagonal solvable 3-dimensional algebra `[e1,e2] = e2`, `[e1,e3] = a e3`.
pub fn lie_solvable3(a: i64) -> PAlgebra {
    let mut m = table(3, &[(0, 1, &[(1, 1)]), (1, 0, &[(1, -1)])]);
    *m.at_mut(2, 2) = scalar::int(a); // column (0, 2)
    *m.at_mut(2, 2 * 3) = scalar::int(-a); // column (2, 0)
    from_bilinear("Lie", 3, m).expect("diagonal action satisfies Jacobi")
}

/// sl2 plus a one-dimensional center.
pub fn lie_sl2_plus_center() -> PAlgebra {
    let inner = lie_sl2();
    let small = &inner.structure()[0];
    let m = Matrix::from_fn(4, 16, |l, col| {
        let i = col / 4;
        let j = col % 4;
        if l < 3 && i < 3 && j < 3 {
            small.at(l, i * 3 + j).clone()
        } else {
            scalar::zero()
        }
    });
    from_bilinear("Lie", 4, m).expect("direct sum with center")
}

/// Dual numbers `k[t]/(t^2)` as an associative algebra, basis (1, t).
pub fn ass_dual_numbers() -> PAlgebra {
    let m = table(2, &[(0, 0, &[(0, 1)]), (0, 1, &[(1, 1)]), (1, 0, &[(1, 1)])]);
    from_bilinear("Ass", 2, m).expect("dual numbers are associative")
}

/// `k[t]/(t^3)`, basis (1, t, t^2).
pub fn ass_truncated_poly3() -> PAlgebra {
    let mut m = Matrix::zero(3, 9);
    for i in 0..3 {
        for j in 0..3 {
            if i + j < 3 {
                *m.at_mut(i + j, i * 3 + j) = scalar::one();
            }
        }
    }
    from_bilinear("Ass", 3, m).expect("truncated polynomials are associative")
}

/// Upper triangular 2x2 matrices, basis (E11, E12, E22).
pub fn ass_upper_triangular2() -> PAlgebra {
    let m = table(
        3,
        &[
            (0, 0, &[(0, 1)]),
            (0, 1, &[(1, 1)]),
            (1, 2, &[(1, 1)]),
            (2, 2, &[(2, 1)]),
        ],
    );
    from_bilinear("Ass", 3, m).expect("matrix multiplication is associative")
}

/// Full 2x2 matrix algebra, basis (E11, E12, E21, E22).
pub fn ass_matrix2() -> PAlgebra {
    let idx = |r: usize, c: usize| r * 2 + c;
    let mut m = Matrix::zero(4, 16);
    for r in 0..2 {
        for c in 0..2 {
            for r2 in 0..2 {
                for c2 in 0..2 {
                    if c == r2 {
                        *m.at_mut(idx(r, c2), idx(r, c) * 4 + idx(r2, c2)) = scalar::one();
                    }
                }
            }
        }
    }
    from_bilinear("Ass", 4, m).expect("matrix multiplication is associative")
}

pub fn com_dual_numbers() -> PAlgebra {
    let m = table(2, &[(0, 0, &[(0, 1)]), (0, 1, &[(1, 1)]), (1, 0, &[(1, 1)])]);
    from_bilinear("Com", 2, m).expect("dual numbers are commutative")
}

/// k x k with its idempotent basis.
pub fn com_k_times_k() -> PAlgebra {
    let m = table(2, &[(0, 0, &[(0, 1)]), (1, 1, &[(1, 1)])]);
    from_bilinear("Com", 2, m).expect("product algebra")
}

/// `k[x,y]/(x^2, xy, y^2)`, basis (1, x, y).
pub fn com_square_zero3() -> PAlgebra {
    let m = table(
        3,
        &[
            (0, 0, &[(0, 1)]),
            (0, 1, &[(1, 1)]),
            (1, 0, &[(1, 1)]),
            (0, 2, &[(2, 1)]),
            (2, 0, &[(2, 1)]),
        ],
    );
    from_bilinear("Com", 3, m).expect("square-zero extension of k")
}

/// The nilpotent 2-dimensional Leibniz algebra `[e1,e1] = e2`.
pub fn leib_nilpotent2() -> PAlgebra {
    let m = table(2, &[(0, 0, &[(1, 1)])]);
    from_bilinear("Leib", 2, m).expect("square of the generator is central")
}

/// Any Lie bracket is in particular a right Leibniz product.
pub fn leib_from_lie(lie: &PAlgebra) -> PAlgebra {
    assert_eq!(lie.operad().name, "Lie");
    from_bilinear("Leib", lie.dim(), lie.structure()[0].clone())
        .expect("Lie algebras are Leibniz algebras")
}

/// Small deterministic pseudo-random source (splitmix64), so library
/// helpers that need randomness stay dependency-free and reproducible.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Lcg {
        Lcg { state: seed.wrapping_add(0x9e3779b97f4a7c15) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn scalar_in(&mut self, lo: i64, hi: i64) -> Scalar {
        scalar::int(self.int_in(lo, hi))
    }
}

/// A random invertible matrix with small integer entries.
pub fn random_invertible(rng: &mut Lcg, dim: usize) -> Matrix {
    loop {
        let g = Matrix::from_fn(dim, dim, |_, _| rng.scalar_in(-2, 2));
        if g.rank() == dim {
            return g;
        }
    }
}

/// A pool of valid algebras per preset, transported along random basis
/// changes; every member is re-verified by the caller's tests.
pub fn sample_valid_algebras(name: &str, count: usize, rng: &mut Lcg) -> Vec<PAlgebra> {
    let seeds: Vec<PAlgebra> = match name {
        "Lie" => vec![lie_abelian(2), lie_solvable2(), lie_heisenberg3(), lie_sl2(), lie_solvable3(2), lie_sl2_plus_center()],
        "Ass" => vec![ass_dual_numbers(), ass_truncated_poly3(), ass_upper_triangular2(), ass_matrix2()],
        "Com" => vec![com_dual_numbers(), com_k_times_k(), com_square_zero3()],
        "Leib" => vec![
            leib_nilpotent2(),
            leib_from_lie(&lie_solvable2()),
            leib_from_lie(&lie_heisenberg3()),
            leib_from_lie(&lie_sl2()),
        ],
        _ => panic!("unknown preset {name}"),
    };
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let base = &seeds[(rng.next_u64() as usize + i) % seeds.len()];
        let g = random_invertible(rng, base.dim());
        out.push(crate::palgebra::transport(base, &g).expect("transport keeps validity"));
    }
    out
}
