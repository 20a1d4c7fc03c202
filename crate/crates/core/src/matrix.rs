//! Dense exact-rational matrices with the echelon-form machinery used
//! everywhere else: deterministic solving, kernel/image bases and cokernel
//! projections.
//!
//! All canonical choices are made here once. A reduced row echelon form
//! with leftmost pivots is the single normal form; solvers zero out free
//! variables; kernel bases carry the standard RREF sign convention. Every
//! module downstream inherits its determinism from these choices.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::{self, Scalar};
use crate::{Error, Result};

pub type Vector = Vec<Scalar>;

pub fn zero_vec(len: usize) -> Vector {
    vec![scalar::zero(); len]
}

pub fn unit_vec(len: usize, pos: usize) -> Vector {
    let mut v = zero_vec(len);
    v[pos] = scalar::one();
    v
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(scalar::is_zero)
}

pub fn vec_add_scaled(dst: &mut [Scalar], c: &Scalar, src: &[Scalar]) {
    debug_assert_eq!(dst.len(), src.len());
    if scalar::is_zero(c) {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !scalar::is_zero(s) {
            *d += c * s;
        }
    }
}

pub fn vec_scale(v: &mut [Scalar], c: &Scalar) {
    for x in v.iter_mut() {
        *x *= c;
    }
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vector>) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Convenience constructor from integer literals, mostly for tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| scalar::int(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Scalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        let mut m = self.clone();
        vec_scale(&mut m.data, c);
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (d, s) in m.data.iter_mut().zip(&other.data) {
            *d += s;
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (d, s) in m.data.iter_mut().zip(&other.data) {
            *d -= s;
        }
        m
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (d, s) in self.data.iter_mut().zip(&other.data) {
            *d += s;
        }
    }

    pub fn add_scaled_assign(&mut self, c: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if scalar::is_zero(c) {
            return;
        }
        for (d, s) in self.data.iter_mut().zip(&other.data) {
            if !scalar::is_zero(s) {
                *d += c * s;
            }
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if scalar::is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !scalar::is_zero(b) {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Shape(alloc::format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = zero_vec(self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !scalar::is_zero(a) {
                    out[i] += a * &v[j];
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn rank(&self) -> usize {
        Rref::of(self).pivots.len()
    }
}

/// Reduced row echelon form together with the row transform that produced
/// it: `transform * original = rref`.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rref: Matrix,
    pub transform: Matrix,
    /// Pivot columns, one per leading row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn of(a: &Matrix) -> Rref {
        let mut m = a.clone();
        let mut t = Matrix::identity(a.rows());
        let mut pivots = Vec::new();
        let mut lead_row = 0;
        for col in 0..m.cols() {
            if lead_row == m.rows() {
                break;
            }
            // Leftmost pivot, first nonzero row below the current lead.
            let Some(piv) = (lead_row..m.rows()).find(|&r| !scalar::is_zero(m.at(r, col))) else {
                continue;
            };
            if piv != lead_row {
                m.data.swap_range(piv, lead_row, m.cols);
                t.data.swap_range(piv, lead_row, t.cols);
            }
            let inv = {
                let p = m.at(lead_row, col).clone();
                scalar::one() / p
            };
            vec_scale(m.row_mut(lead_row), &inv);
            vec_scale(t.row_mut(lead_row), &inv);
            for r in 0..m.rows() {
                if r == lead_row {
                    continue;
                }
                let c = m.at(r, col).clone();
                if scalar::is_zero(&c) {
                    continue;
                }
                let factor = -c;
                let (mr, lr) = row_pair(&mut m, r, lead_row);
                vec_add_scaled(mr, &factor, lr);
                let (tr, tl) = row_pair(&mut t, r, lead_row);
                vec_add_scaled(tr, &factor, tl);
            }
            pivots.push(col);
            lead_row += 1;
        }
        Rref { rref: m, transform: t, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

trait SwapRange {
    fn swap_range(&mut self, r1: usize, r2: usize, width: usize);
}

impl SwapRange for Vec<Scalar> {
    fn swap_range(&mut self, r1: usize, r2: usize, width: usize) {
        if r1 == r2 {
            return;
        }
        let (a, b) = (r1.min(r2), r1.max(r2));
        let (lo, hi) = self.split_at_mut(b * width);
        lo[a * width..(a + 1) * width].swap_with_slice(&mut hi[..width]);
    }
}

fn row_pair(m: &mut Matrix, r: usize, lead: usize) -> (&mut [Scalar], &[Scalar]) {
    assert_ne!(r, lead);
    let cols = m.cols;
    let data = &mut m.data;
    if r < lead {
        let (lo, hi) = data.split_at_mut(lead * cols);
        (&mut lo[r * cols..(r + 1) * cols], &hi[..cols])
    } else {
        let (lo, hi) = data.split_at_mut(r * cols);
        (&mut hi[..cols], &lo[lead * cols..(lead + 1) * cols])
    }
}

/// Prefactored solver for repeated systems `A x = b` with varying `b`.
///
/// Returns the unique solution whose free variables are all zero, or `None`
/// when the system is inconsistent. This is the gauge fix used everywhere:
/// preimages under differentials are reproducible across runs.
#[derive(Debug, Clone)]
pub struct SolveKit {
    rref: Rref,
    cols: usize,
}

impl SolveKit {
    pub fn new(a: &Matrix) -> SolveKit {
        SolveKit { rref: Rref::of(a), cols: a.cols() }
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rref.transform.cols());
        let y = self.rref.transform.mul_vec(b).expect("shape checked");
        let rank = self.rref.rank();
        // Rows beyond the rank must have zero right-hand side.
        if y[rank..].iter().any(|v| !scalar::is_zero(v)) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (row, &col) in self.rref.pivots.iter().enumerate() {
            x[col] = y[row].clone();
        }
        Some(x)
    }
}

/// Deterministic solution of `A x = b` (free variables zeroed).
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != a.rows() {
        return Err(Error::Shape(alloc::format!(
            "matrix has {} rows, rhs has length {}",
            a.rows(),
            b.len()
        )));
    }
    Ok(SolveKit::new(a).solve(b))
}

/// RREF-canonical basis of the null space of `a`.
pub fn kernel_basis(a: &Matrix) -> Vec<Vector> {
    let rref = Rref::of(a);
    let pivots = &rref.pivots;
    let mut is_pivot = vec![false; a.cols()];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in 0..a.cols() {
        if is_pivot[free] {
            continue;
        }
        let mut v = zero_vec(a.cols());
        v[free] = scalar::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -rref.rref.at(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// RREF-canonical basis of the column space of `a`.
pub fn image_basis(a: &Matrix) -> Vec<Vector> {
    let rref = Rref::of(&a.transpose());
    (0..rref.rank()).map(|i| rref.rref.row(i).to_vec()).collect()
}

/// A chosen complement of the column space of `a`, with the projection
/// onto its coordinates.
///
/// The complement is spanned by the coordinate vectors at the non-pivot
/// positions of the RREF image basis, so `project` of any vector is the
/// residue left after eliminating the image components; the vector lies in
/// the image iff its projection vanishes.
#[derive(Debug, Clone)]
pub struct CokerProjection {
    pub ambient_dim: usize,
    pub image: Vec<Vector>,
    /// Coordinate position of each image basis vector's leading one.
    pub image_leads: Vec<usize>,
    /// Ambient coordinates spanning the complement, increasing.
    pub complement: Vec<usize>,
}

impl CokerProjection {
    pub fn of(a: &Matrix) -> CokerProjection {
        let image = image_basis(a);
        let mut leads = Vec::with_capacity(image.len());
        for v in &image {
            let lead = v.iter().position(|x| !scalar::is_zero(x)).expect("nonzero basis vector");
            leads.push(lead);
        }
        let mut is_lead = vec![false; a.rows()];
        for &l in &leads {
            is_lead[l] = true;
        }
        let complement = (0..a.rows()).filter(|&i| !is_lead[i]).collect();
        CokerProjection { ambient_dim: a.rows(), image, image_leads: leads, complement }
    }

    pub fn coker_dim(&self) -> usize {
        self.complement.len()
    }

    /// Splits `v` into `(image part, complement coordinates)`.
    pub fn split(&self, v: &[Scalar]) -> (Vector, Vector) {
        assert_eq!(v.len(), self.ambient_dim);
        let mut rem = v.to_vec();
        for (b, &lead) in self.image.iter().zip(&self.image_leads) {
            let c = rem[lead].clone();
            if !scalar::is_zero(&c) {
                let neg = -c;
                vec_add_scaled(&mut rem, &neg, b);
            }
        }
        let coords: Vector = self.complement.iter().map(|&i| rem[i].clone()).collect();
        let image_part = vec_sub(v, &rem);
        (image_part, coords)
    }

    /// Coordinates of `v` in the chosen complement of the image.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.split(v).1
    }

    /// The matrix of `project`, rows indexed by complement coordinates.
    pub fn projection_matrix(&self) -> Matrix {
        let n = self.ambient_dim;
        let cols: Vec<Vector> = (0..n).map(|j| self.project(&unit_vec(n, j))).collect();
        Matrix::from_cols(cols)
    }

    /// Embeds complement coordinates back as an ambient vector.
    pub fn embed(&self, coords: &[Scalar]) -> Vector {
        assert_eq!(coords.len(), self.complement.len());
        let mut v = zero_vec(self.ambient_dim);
        for (&i, c) in self.complement.iter().zip(coords) {
            v[i] = c.clone();
        }
        v
    }
}

/// Rank of the column span of a list of vectors.
pub fn span_rank(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Do the two lists of vectors span the same subspace?
pub fn same_span(a: &[Vector], b: &[Vector]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    if ra != rb {
        return false;
    }
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    span_rank(&all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use rand::{Rng, SeedableRng};

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(2);
        let b = vec![int(3), rat(-1, 2)];
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_zero_matrix_zero_rhs() {
        let a = Matrix::zero(2, 2);
        let x = solve(&a, &[int(0), int(0)]).unwrap().unwrap();
        assert_eq!(x, vec![int(0), int(0)]);
    }

    #[test]
    fn solve_underdetermined_zeroes_free_vars() {
        // One equation x + y = 5; the RREF pivot convention puts the whole
        // value on the pivot variable.
        let a = Matrix::from_int_rows(&[&[1, 1]]);
        let x = solve(&a, &[int(5)]).unwrap().unwrap();
        assert_eq!(x, vec![int(5), int(0)]);
        let check = a.mul_vec(&x).unwrap();
        assert_eq!(check, vec![int(5)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(solve(&a, &[int(1), int(2)]).unwrap().is_none());
    }

    #[test]
    fn solve_shape_error() {
        let a = Matrix::identity(2);
        assert!(solve(&a, &[int(1)]).is_err());
    }

    #[test]
    fn kernel_and_image_small() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], vec![int(-2), int(1)]);
        assert_eq!(image_basis(&a).len(), 1);

        let zero = Matrix::zero(2, 2);
        assert_eq!(kernel_basis(&zero).len(), 2);
        assert_eq!(image_basis(&zero).len(), 0);
        assert_eq!(CokerProjection::of(&zero).coker_dim(), 2);

        let id3 = Matrix::identity(3);
        assert_eq!(kernel_basis(&id3).len(), 0);
        assert_eq!(CokerProjection::of(&id3).coker_dim(), 0);
    }

    #[test]
    fn rank_nullity_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..=12);
            let cols = rng.gen_range(1..=12);
            let a = Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-4..=4)));
            assert_eq!(a.rank() + kernel_basis(&a).len(), cols);
        }
    }

    #[test]
    fn solve_exact_on_constructed_systems() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let a = Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-3..=3)));
            let x0: Vector = (0..cols).map(|_| rat(rng.gen_range(-6..=6), 2)).collect();
            let b = a.mul_vec(&x0).unwrap();
            let x = solve(&a, &b).unwrap().expect("consistent by construction");
            assert_eq!(a.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn coker_split_reassembles() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = Matrix::from_fn(6, 3, |_, _| int(rng.gen_range(-3..=3)));
            let proj = CokerProjection::of(&a);
            let v: Vector = (0..6).map(|_| int(rng.gen_range(-5..=5))).collect();
            let (img, coords) = proj.split(&v);
            let rebuilt: Vector = img
                .iter()
                .zip(proj.embed(&coords))
                .map(|(x, y)| x + &y)
                .collect();
            assert_eq!(rebuilt, v);
            // image part really is in the image
            let kit = SolveKit::new(&a);
            assert!(kit.solve(&img).is_some());
        }
    }

    proptest::proptest! {
        #[test]
        fn transpose_involution(seed in 0u64..512) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = rng.gen_range(1..6);
            let c = rng.gen_range(1..6);
            let a = Matrix::from_fn(r, c, |_, _| int(rng.gen_range(-9..=9)));
            proptest::prop_assert_eq!(a.transpose().transpose(), a);
        }
    }
}
