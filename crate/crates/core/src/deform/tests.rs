use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::*;
use crate::catalog::{self, Lcg};
use crate::cohomology::CochainSpaces;
use crate::localbase::{harrison_h, LocalTruncation, Poly};
use crate::matrix::{self, Matrix, Vector};
use crate::scalar;

fn dual_number_base() -> LocalTruncation {
    LocalTruncation::power_truncation(1, 1)
}

fn random_cocycle(spaces: &CochainSpaces, rng: &mut Lcg) -> Vector {
    // random element of Z^2: combination of representatives and
    // coboundaries
    let mut v = matrix::zero_vec(spaces.c2.dim());
    for rep in spaces.representatives() {
        matrix::vec_add_scaled(&mut v, &rng.scalar_in(-2, 2), rep);
    }
    let vdim = spaces.algebra().dim();
    let f = Matrix::from_fn(vdim, vdim, |_, _| rng.scalar_in(-2, 2));
    matrix::vec_add_scaled(&mut v, &scalar::one(), &spaces.d1_coords(&f));
    v
}

fn random_c2(spaces: &CochainSpaces, rng: &mut Lcg) -> Vector {
    (0..spaces.c2.dim()).map(|_| rng.scalar_in(-2, 2)).collect()
}

#[test]
fn trivial_series_has_zero_residual() {
    let spaces = CochainSpaces::new(&catalog::lie_sl2());
    let base = dual_number_base().as_comm_local();
    let series = DeformationSeries::trivial(base);
    assert!(residual_is_zero(&mc_residual(&spaces, &series)));
}

#[test]
fn infinitesimal_residual_vanishes_iff_cocycle() {
    // over k[e]/(e^2) the residual at e is -d2(psi); zero iff psi is a
    // cocycle
    let mut rng = Lcg::new(101);
    for alg in [catalog::ass_dual_numbers(), catalog::leib_nilpotent2()] {
        let spaces = CochainSpaces::new(&alg);
        let base = dual_number_base().as_comm_local();
        for trial in 0..10 {
            let psi = if trial % 2 == 0 {
                random_cocycle(&spaces, &mut rng)
            } else {
                random_c2(&spaces, &mut rng)
            };
            let mut table = BTreeMap::new();
            table.insert(1usize, psi.clone());
            let series = DeformationSeries::new(base.clone(), table).unwrap();
            let ok = residual_is_zero(&mc_residual(&spaces, &series));
            assert_eq!(ok, spaces.is_cocycle(&psi));
        }
    }
}

#[test]
fn residual_matches_full_expansion() {
    // mc_residual == 0 iff the induced arity-3 structure kills every
    // relation over the base, checked by brute-force expansion
    let mut rng = Lcg::new(103);
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let base = LocalTruncation::power_truncation(1, 2).as_comm_local(); // k[t]/(t^3)
    for trial in 0..8 {
        let mut table = BTreeMap::new();
        let psi = if trial % 2 == 0 {
            random_cocycle(&spaces, &mut rng)
        } else {
            random_c2(&spaces, &mut rng)
        };
        table.insert(1usize, psi);
        if trial % 3 == 0 {
            table.insert(2usize, random_c2(&spaces, &mut rng));
        }
        let series = DeformationSeries::new(base.clone(), table).unwrap();
        let residual_zero = residual_is_zero(&mc_residual(&spaces, &series));
        assert_eq!(residual_zero, validity_by_expansion(&spaces, &series));
    }
}

#[test]
fn universal_infinitesimal_is_a_deformation() {
    for alg in [
        catalog::lie_sl2(),
        catalog::ass_dual_numbers(),
        catalog::leib_nilpotent2(),
        catalog::lie_heisenberg3(),
    ] {
        let spaces = CochainSpaces::new(&alg);
        let (_, eta1) = infinitesimal_universal(&spaces).unwrap();
        assert!(residual_is_zero(&mc_residual(&spaces, &eta1)));
        assert_eq!(eta1.table.len(), spaces.dim_h2());
    }
}

#[test]
fn sl2_universal_base_is_the_field() {
    let spaces = CochainSpaces::new(&catalog::lie_sl2());
    let (base, eta1) = infinitesimal_universal(&spaces).unwrap();
    assert_eq!(base.dim(), 1);
    assert!(eta1.table.is_empty());
}

#[test]
fn eta1_differential_is_the_identity() {
    for alg in [catalog::ass_dual_numbers(), catalog::leib_nilpotent2()] {
        let spaces = CochainSpaces::new(&alg);
        let (_, eta1) = infinitesimal_universal(&spaces).unwrap();
        let d = infinitesimal_differential(&spaces, &eta1).unwrap();
        assert_eq!(d, Matrix::identity(spaces.dim_h2()));
    }
}

#[test]
fn trivial_deformation_has_zero_differential() {
    let spaces = CochainSpaces::new(&catalog::ass_dual_numbers());
    let base = dual_number_base().as_comm_local();
    let series = DeformationSeries::trivial(base);
    let d = infinitesimal_differential(&spaces, &series).unwrap();
    assert!(d.is_zero());
}

#[test]
fn pushout_identity_and_augmentation() {
    let spaces = CochainSpaces::new(&catalog::ass_dual_numbers());
    let (base, eta1) = infinitesimal_universal(&spaces).unwrap();
    let comm = base.as_comm_local();
    let id = BaseHom::new(comm.clone(), comm.clone(), Matrix::identity(comm.dim())).unwrap();
    assert_eq!(pushout(&id, &eta1).unwrap(), eta1.clone().pruned());
    let to_k = BaseHom::to_field(&comm);
    let collapsed = pushout(&to_k, &eta1).unwrap();
    assert!(collapsed.table.is_empty());
}

#[test]
fn pushout_scales_generator_images() {
    // s -> 2t between one-variable bases scales the table entry
    let spaces = CochainSpaces::new(&catalog::ass_dual_numbers());
    let src = LocalTruncation::power_truncation(1, 2);
    let tgt = LocalTruncation::power_truncation(1, 2);
    let mut img = Poly::zero(tgt.ctx());
    img.coeffs[tgt.ctx().var_mono(0)] = scalar::int(2);
    let hom = BaseHom::from_generator_images(&src, &tgt, &[img]).unwrap();
    let mut rng = Lcg::new(107);
    let psi = random_cocycle(&spaces, &mut rng);
    let mut table = BTreeMap::new();
    let s_pos = src.std_position(src.ctx().var_mono(0)).unwrap();
    table.insert(s_pos, psi.clone());
    let series = DeformationSeries::new(src.as_comm_local(), table).unwrap();
    let pushed = pushout(&hom, &series).unwrap();
    let t_pos = tgt.std_position(tgt.ctx().var_mono(0)).unwrap();
    let mut expected_t = matrix::zero_vec(spaces.c2.dim());
    matrix::vec_add_scaled(&mut expected_t, &scalar::int(2), &psi);
    assert_eq!(pushed.entry(t_pos).unwrap(), &expected_t);
    // and s^2 -> 4 t^2
    let s2 = src.std_monos().iter().position(|&m| src.ctx().degree(m) == 2).unwrap();
    let _ = s2;
    let mut expected_t2 = matrix::zero_vec(spaces.c2.dim());
    matrix::vec_add_scaled(&mut expected_t2, &scalar::int(4), &psi);
    let mut table2 = BTreeMap::new();
    table2.insert(2usize, psi.clone());
    let series2 = DeformationSeries::new(src.as_comm_local(), table2).unwrap();
    let pushed2 = pushout(&hom, &series2).unwrap();
    assert_eq!(pushed2.entry(2).unwrap(), &expected_t2);
}

#[test]
fn pushout_is_functorial() {
    let spaces = CochainSpaces::new(&catalog::leib_nilpotent2());
    let mut rng = Lcg::new(109);
    let a = LocalTruncation::power_truncation(2, 2);
    let b = LocalTruncation::power_truncation(2, 2);
    let c = LocalTruncation::power_truncation(1, 2);
    // random homs via generator images with zero constant terms
    let mk_img = |tgt: &LocalTruncation, rng: &mut Lcg| -> Poly {
        let mut p = Poly::zero(tgt.ctx());
        for m in 0..tgt.ctx().len() {
            let deg = tgt.ctx().degree(m);
            if deg >= 1 {
                p.coeffs[m] = rng.scalar_in(-2, 2);
            }
        }
        p
    };
    let phi1 = BaseHom::from_generator_images(&a, &b, &[mk_img(&b, &mut rng), mk_img(&b, &mut rng)])
        .unwrap();
    let phi2 = BaseHom::from_generator_images(&b, &c, &[mk_img(&c, &mut rng), mk_img(&c, &mut rng)])
        .unwrap();
    let composed = phi2.compose(&phi1).unwrap();
    let mut table = BTreeMap::new();
    for pos in a.ideal_positions() {
        table.insert(pos, random_c2(&spaces, &mut rng));
    }
    let series = DeformationSeries::new(a.as_comm_local(), table).unwrap();
    let one_step = pushout(&composed, &series).unwrap();
    let two_step = pushout(&phi2, &pushout(&phi1, &series).unwrap()).unwrap();
    assert_eq!(one_step, two_step);
}

#[test]
fn non_homomorphism_rejected() {
    let src = LocalTruncation::power_truncation(1, 2).as_comm_local();
    let tgt = LocalTruncation::power_truncation(1, 1).as_comm_local();
    // g -> t but g^2 -> 0 while phi(g)^2 = t^2 = 0: fine; break the unit
    let mut m = Matrix::zero(2, 3);
    *m.at_mut(0, 0) = scalar::int(2); // phi(1) = 2
    assert!(BaseHom::new(src.clone(), tgt.clone(), m).is_err());
    // unit fine but multiplication broken: g -> t, g^2 -> t (nonzero)
    let mut m2 = Matrix::zero(2, 3);
    *m2.at_mut(0, 0) = scalar::one();
    *m2.at_mut(1, 1) = scalar::one();
    *m2.at_mut(1, 2) = scalar::one(); // g^2 -> t, but phi(g)^2 = t^2 = 0
    assert!(BaseHom::new(src, tgt, m2).is_err());
}

#[test]
fn equivalence_identity_and_coboundary_shift() {
    let mut rng = Lcg::new(113);
    for alg in [catalog::ass_dual_numbers(), catalog::leib_nilpotent2()] {
        let spaces = CochainSpaces::new(&alg);
        let (_, eta1) = infinitesimal_universal(&spaces).unwrap();
        // identity
        let rho = equivalence_solve(&spaces, &eta1, &eta1).unwrap().unwrap();
        assert!(rho.is_empty());
        assert!(equivalence_check(&spaces, &eta1, &eta1, &rho));
        // shift one entry by a coboundary
        if let Some((&pos, psi)) = eta1.table.iter().next() {
            let v = alg.dim();
            let phi = Matrix::from_fn(v, v, |_, _| rng.scalar_in(-2, 2));
            let mut shifted = psi.clone();
            matrix::vec_add_scaled(&mut shifted, &scalar::one(), &spaces.d1_coords(&phi));
            let mut table2 = eta1.table.clone();
            table2.insert(pos, shifted);
            let lambda2 =
                DeformationSeries::new(eta1.base.clone(), table2).unwrap();
            let rho =
                equivalence_solve(&spaces, &eta1, &lambda2).unwrap().expect("equivalent");
            assert!(equivalence_check(&spaces, &eta1, &lambda2, &rho));
            // first-order criterion: d1(rho_pos) = psi2 - psi1 = d1(phi)
            let solved = rho.get(&pos).expect("nontrivial correction");
            assert_eq!(spaces.d1_coords(solved), spaces.d1_coords(&phi));
        }
    }
}

#[test]
fn equivalence_fails_across_classes() {
    // two infinitesimal tables with different H^2 classes are never
    // equivalent
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    assert!(spaces.dim_h2() >= 1);
    let base = dual_number_base().as_comm_local();
    let rep = spaces.representatives()[0].clone();
    let mut t1 = BTreeMap::new();
    t1.insert(1usize, rep.clone());
    let lambda1 = DeformationSeries::new(base.clone(), t1).unwrap();
    let lambda2 = DeformationSeries::trivial(base);
    assert!(equivalence_solve(&spaces, &lambda1, &lambda2).unwrap().is_none());
}

#[test]
fn equivalence_iff_equal_differentials() {
    // over k[e]/(e^2): solvable exactly when the classes agree
    let mut rng = Lcg::new(127);
    let alg = catalog::leib_nilpotent2();
    let spaces = CochainSpaces::new(&alg);
    let base = dual_number_base().as_comm_local();
    for _ in 0..10 {
        let psi1 = random_cocycle(&spaces, &mut rng);
        let psi2 = random_cocycle(&spaces, &mut rng);
        let mut t1 = BTreeMap::new();
        t1.insert(1usize, psi1.clone());
        let mut t2 = BTreeMap::new();
        t2.insert(1usize, psi2.clone());
        let l1 = DeformationSeries::new(base.clone(), t1).unwrap();
        let l2 = DeformationSeries::new(base.clone(), t2).unwrap();
        let solvable = equivalence_solve(&spaces, &l1, &l2).unwrap().is_some();
        let d1m = infinitesimal_differential(&spaces, &l1).unwrap();
        let d2m = infinitesimal_differential(&spaces, &l2).unwrap();
        assert_eq!(solvable, d1m == d2m);
    }
}

#[test]
fn representative_choice_does_not_matter() {
    // eta1 built from shifted representatives is equivalent to eta1
    let mut rng = Lcg::new(131);
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let (base, eta1) = infinitesimal_universal(&spaces).unwrap();
    let v = alg.dim();
    let mut table = BTreeMap::new();
    for (&pos, psi) in &eta1.table {
        let gamma = Matrix::from_fn(v, v, |_, _| rng.scalar_in(-2, 2));
        let mut shifted = psi.clone();
        matrix::vec_add_scaled(&mut shifted, &scalar::one(), &spaces.d1_coords(&gamma));
        table.insert(pos, shifted);
    }
    let eta1_alt = DeformationSeries::new(base.as_comm_local(), table).unwrap();
    assert!(residual_is_zero(&mc_residual(&spaces, &eta1_alt)));
    let rho = equivalence_solve(&spaces, &eta1_alt, &eta1).unwrap().expect("equivalent");
    assert!(equivalence_check(&spaces, &eta1_alt, &eta1, &rho));
}

/// Every valid infinitesimal deformation is induced from eta1 by the
/// base map built from its differential, uniquely.
#[test]
fn couniversality_with_unique_base_map() {
    let mut rng = Lcg::new(137);
    let alg = catalog::leib_nilpotent2();
    let spaces = CochainSpaces::new(&alg);
    let (c1_base, eta1) = infinitesimal_universal(&spaces).unwrap();
    let h2 = spaces.dim_h2();
    assert!(h2 >= 1);
    for trial in 0..10 {
        let r_vars = 1 + (trial % 2);
        let base = LocalTruncation::power_truncation(r_vars, 1);
        let comm = base.as_comm_local();
        let mut table = BTreeMap::new();
        for pos in comm.ideal_positions() {
            table.insert(pos, random_cocycle(&spaces, &mut rng));
        }
        let lambda = DeformationSeries::new(comm.clone(), table).unwrap();
        assert!(residual_is_zero(&mc_residual(&spaces, &lambda)));
        // phi = Id ⊕ a'_lambda: g_j -> sum_i D[j, i] m_i
        let d = infinitesimal_differential(&spaces, &lambda).unwrap();
        let phi_matrix = Matrix::from_fn(comm.dim(), c1_base.dim(), |t, s| {
            if (t, s) == (0, 0) {
                scalar::one()
            } else if t >= 1 && s >= 1 {
                d.at(s - 1, t - 1).clone()
            } else {
                scalar::zero()
            }
        });
        let phi = BaseHom::new(c1_base.as_comm_local(), comm.clone(), phi_matrix).unwrap();
        let pushed = pushout(&phi, &eta1).unwrap();
        let rho = equivalence_solve(&spaces, &pushed, &lambda)
            .unwrap()
            .expect("couniversality");
        assert!(equivalence_check(&spaces, &pushed, &lambda, &rho));
        // uniqueness: the class matrix of the representatives is the
        // identity, so the linear system determining phi has full rank
        let classes = Matrix::from_cols(
            spaces
                .representatives()
                .iter()
                .map(|r| spaces.class_of(r).unwrap())
                .collect(),
        );
        assert_eq!(classes, Matrix::identity(h2));
        assert_eq!(matrix::kernel_basis(&classes).len(), 0);
    }
}

#[test]
fn differential_of_pushout_composes() {
    let mut rng = Lcg::new(139);
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let (c1_base, eta1) = infinitesimal_universal(&spaces).unwrap();
    // phi into a 2-variable infinitesimal base
    let tgt = LocalTruncation::power_truncation(2, 1);
    let h2 = spaces.dim_h2();
    let phi_matrix = Matrix::from_fn(tgt.dim(), c1_base.dim(), |t, s| {
        if (t, s) == (0, 0) {
            scalar::one()
        } else if t >= 1 && s >= 1 {
            rng.scalar_in(-2, 2)
        } else {
            scalar::zero()
        }
    });
    let phi =
        BaseHom::new(c1_base.as_comm_local(), tgt.as_comm_local(), phi_matrix.clone()).unwrap();
    let pushed = pushout(&phi, &eta1).unwrap();
    let d = infinitesimal_differential(&spaces, &pushed).unwrap();
    // expected: column t = sum_s phi[t, s] * e_s over the ideal block
    let expected = Matrix::from_fn(h2, tgt.dim() - 1, |row, col| {
        phi_matrix.at(col + 1, row + 1).clone()
    });
    assert_eq!(d, expected);
}

#[test]
fn obstruction_of_split_extension_vanishes() {
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let (_, eta1) = infinitesimal_universal(&spaces).unwrap();
    let bdim = eta1.base.dim();
    let f = alloc::vec![Matrix::zero(bdim, bdim)];
    let result = obstruction(&spaces, &eta1, &f).unwrap();
    assert!(result.is_unobstructed());
    let (_, extended) = result.extension.unwrap();
    assert!(residual_is_zero(&mc_residual(&spaces, &extended)));
}

#[test]
fn obstruction_matches_second_order_residual() {
    // S = k[e]/(e^2), f(e,e) = 1: extendable to k[t]/(t^3) iff psi*psi
    // is exact; cross-checked against the order-2 residual over k[t]/(t^3)
    let mut rng = Lcg::new(149);
    for alg in [catalog::ass_dual_numbers(), catalog::leib_nilpotent2()] {
        let spaces = CochainSpaces::new(&alg);
        let base = dual_number_base().as_comm_local();
        let mut f0 = Matrix::zero(2, 2);
        *f0.at_mut(1, 1) = scalar::one();
        let f = alloc::vec![f0];
        for _ in 0..4 {
            let psi = random_cocycle(&spaces, &mut rng);
            let mut table = BTreeMap::new();
            table.insert(1usize, psi.clone());
            let series = DeformationSeries::new(base.clone(), table).unwrap();
            let result = obstruction(&spaces, &series, &f).unwrap();
            // independent route: residual over k[t]/(t^3) with the exact
            // part solved at order 2 exists iff psi*psi is exact
            let vals = spaces.c2.coords_to_values(&psi);
            let star = spaces
                .c3
                .values_to_coords(&crate::cohomology::star_22(spaces.algebra(), &vals, &vals));
            let split = spaces.coker3(&star);
            assert_eq!(result.is_unobstructed(), split.is_exact());
            if let Some((ext, extended)) = result.extension {
                assert!(residual_is_zero(&mc_residual(&spaces, &extended)));
                ext.total.verify_associative().unwrap();
            }
        }
    }
}


/// A genuine deformation over a one-variable base of order 2: a random
/// cocycle at order one whose star square happens to be exact, with the
/// deterministic preimage at order two.
fn valid_series_to_order2(
    spaces: &CochainSpaces,
    comm: &crate::localbase::CommLocal,
    rng: &mut Lcg,
) -> DeformationSeries {
    loop {
        let psi = random_cocycle(spaces, rng);
        let vals = spaces.c2.coords_to_values(&psi);
        let sq = spaces
            .c3
            .values_to_coords(&crate::cohomology::star_22(spaces.algebra(), &vals, &vals));
        let split = spaces.coker3(&sq);
        let Some(pre) = split.preimage else { continue };
        let mut table = BTreeMap::new();
        table.insert(1usize, psi);
        if !matrix::vec_is_zero(&pre) {
            table.insert(2usize, pre);
        }
        let series = DeformationSeries::new(comm.clone(), table).unwrap();
        assert!(residual_is_zero(&mc_residual(spaces, &series)));
        return series;
    }
}

#[test]
fn obstruction_class_is_coboundary_invariant() {
    let mut rng = Lcg::new(151);
    let alg = catalog::leib_nilpotent2();
    let spaces = CochainSpaces::new(&alg);
    let base = LocalTruncation::power_truncation(1, 2); // k[t]/(t^3)
    let comm = base.as_comm_local();
    let bdim = comm.dim();
    let h2 = harrison_h(&comm, 2).unwrap();
    let series = valid_series_to_order2(&spaces, &comm, &mut rng);
    for _ in 0..10 {
        // f = representative + random coboundary vs plain representative
        let rep = &h2.representatives[0];
        let f_base = Matrix::from_fn(bdim, bdim, |i, j| rep[i * bdim + j].clone());
        let d1 = crate::localbase::cochain_differential(&comm, 1);
        let u: Vector = (0..bdim)
            .map(|i| if i == 0 { scalar::zero() } else { rng.scalar_in(-2, 2) })
            .collect();
        let du = d1.mul_vec(&u).unwrap();
        let f_shift = Matrix::from_fn(bdim, bdim, |i, j| {
            f_base.at(i, j) + &du[i * bdim + j]
        });
        let r1 = obstruction(&spaces, &series, &alloc::vec![f_base]).unwrap();
        let r2 = obstruction(&spaces, &series, &alloc::vec![f_shift]).unwrap();
        assert_eq!(r1.classes, r2.classes);
    }
}

#[test]
fn non_cocycle_obstruction_input_rejected() {
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let base = LocalTruncation::power_truncation(1, 2).as_comm_local();
    let series = DeformationSeries::trivial(base.clone());
    let mut f0 = Matrix::zero(3, 3);
    *f0.at_mut(2, 2) = scalar::one(); // f(t^2, t^2) = 1 is not a cocycle
    assert!(obstruction(&spaces, &series, &alloc::vec![f0]).is_err());
}

/// Naturality of the obstruction along a base change: the obstruction of
/// the pushed-forward deformation at `f` equals the obstruction of the
/// original at the pulled-back cocycle.
#[test]
fn obstruction_naturality_triangle() {
    let mut rng = Lcg::new(157);
    let alg = catalog::leib_nilpotent2();
    let spaces = CochainSpaces::new(&alg);
    // R2 = k[s]/(s^3) -> R1 = k[t]/(t^2), s -> t
    let r2 = LocalTruncation::power_truncation(1, 2);
    let r1 = LocalTruncation::power_truncation(1, 1);
    let mut img = Poly::zero(r1.ctx());
    img.coeffs[r1.ctx().var_mono(0)] = scalar::one();
    let phi = BaseHom::from_generator_images(&r2, &r1, &[img]).unwrap();
    let lambda2 = valid_series_to_order2(&spaces, &r2.as_comm_local(), &mut rng);
    let lambda1 = pushout(&phi, &lambda2).unwrap();
    // cocycle on R1 and its pull-back along phi
    let h2_r1 = harrison_h(&lambda1.base, 2).unwrap();
    let d1 = h2_r1.representatives[0].clone();
    let bdim1 = lambda1.base.dim();
    let f1 = Matrix::from_fn(bdim1, bdim1, |i, j| d1[i * bdim1 + j].clone());
    let bdim2 = lambda2.base.dim();
    let pulled = Matrix::from_fn(bdim2, bdim2, |i, j| {
        // f1(phi(b_i), phi(b_j))
        let mut acc = scalar::zero();
        for a in 0..bdim1 {
            for b in 0..bdim1 {
                let c = phi.matrix.at(a, i) * phi.matrix.at(b, j);
                if !scalar::is_zero(&c) {
                    acc += c * f1.at(a, b);
                }
            }
        }
        acc
    });
    let o1 = obstruction(&spaces, &lambda1, &alloc::vec![f1]).unwrap();
    let o2 = obstruction(&spaces, &lambda2, &alloc::vec![pulled]).unwrap();
    assert_eq!(o1.classes, o2.classes);
}

#[test]
fn versal_of_sl2_is_rigid() {
    let spaces = CochainSpaces::new(&catalog::lie_sl2());
    let result = versal(&spaces, 4).unwrap();
    assert_eq!(result.h2_dim, 0);
    assert_eq!(result.base.dim(), 1);
    assert!(result.series.table.is_empty());
    assert!(result.certificate_ok);
    assert!(result.differential_is_identity);
}

#[test]
fn versal_certificate_and_differential_for_small_fixtures() {
    for alg in [
        catalog::ass_dual_numbers(),
        catalog::leib_nilpotent2(),
        catalog::lie_heisenberg3(),
    ] {
        let spaces = CochainSpaces::new(&alg);
        let result = versal(&spaces, 3).unwrap();
        assert!(result.certificate_ok, "{}", alg.operad().name);
        assert!(result.differential_is_identity, "{}", alg.operad().name);
        for g in &result.ideal_generators {
            assert!(g.lead_degree(result.base.ctx()).unwrap_or(2) >= 2);
        }
        // order-1 part is exactly eta1's table
        let (eta_base, eta1) = infinitesimal_universal(&spaces).unwrap();
        for i in 0..spaces.dim_h2() {
            let pos_v = result.base.std_position(result.base.ctx().var_mono(i)).unwrap();
            let pos_e = eta_base.std_position(eta_base.ctx().var_mono(i)).unwrap();
            assert_eq!(result.series.entry(pos_v), eta1.entry(pos_e));
        }
    }
}

#[test]
fn versal_residual_cross_checked_by_expansion() {
    // small case where the full lambda(3) expansion is affordable
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let result = versal(&spaces, 2).unwrap();
    assert!(result.certificate_ok);
    assert!(validity_by_expansion(&spaces, &result.series));
}

/// The three shipped fixture behaviours: rigid, a genuine
/// one-parameter family, and an obstructed algebra whose versal base
/// acquires a quadratic relation.
#[test]
fn versal_fixture_trichotomy() {
    // rigid: covered by versal_of_sl2_is_rigid; unobstructed:
    let spaces = CochainSpaces::new(&catalog::ass_dual_numbers());
    let unobstructed = versal(&spaces, 4).unwrap();
    assert_eq!(unobstructed.h2_dim, 1);
    assert!(unobstructed.ideal_generators.is_empty());
    assert!(unobstructed.certificate_ok);
    assert_eq!(unobstructed.base.dim(), 5); // k[t]/(t^5)

    // obstructed: [e1,e2] = e2, [e1,e3] = -e3
    let spaces = CochainSpaces::new(&catalog::lie_solvable3(-1));
    let obstructed = versal(&spaces, 4).unwrap();
    assert_eq!(obstructed.h2_dim, 2);
    assert!(obstructed.certificate_ok);
    assert!(obstructed.differential_is_identity);
    assert_eq!(obstructed.ideal_generators.len(), 1);
    let gen = &obstructed.ideal_generators[0];
    assert_eq!(gen.lead_degree(obstructed.base.ctx()), Some(2));
    assert_eq!(
        gen.to_string(obstructed.base.ctx(), &obstructed.base.names()),
        "g1*g2"
    );
    // the finite-dimensional base k[[g1,g2]]/(g1 g2) truncated at 4
    assert_eq!(obstructed.base.dim(), 1 + 2 + 2 + 2 + 2);
    // independent evidence for the certificate: the induced arity-3
    // structure kills every relation over the quotient base
    assert!(validity_by_expansion(&spaces, &obstructed.series));
}

/// A cocycle whose star square has a nonzero cokernel class makes the
/// order-2 residual component nonzero when the table stops at order 1.
#[test]
fn residual_detects_obstructed_square()
{
    let spaces = CochainSpaces::new(&catalog::lie_solvable3(-1));
    let reps = spaces.representatives();
    assert_eq!(reps.len(), 2);
    let mut psi = reps[0].clone();
    matrix::vec_add_scaled(&mut psi, &scalar::one(), &reps[1]);
    assert!(spaces.is_cocycle(&psi));
    let vals = spaces.c2.coords_to_values(&psi);
    let sq = spaces
        .c3
        .values_to_coords(&crate::cohomology::star_22(spaces.algebra(), &vals, &vals));
    assert!(!spaces.coker3(&sq).is_exact(), "square must be obstructed");
    // base k[t]/(t^3), table {t -> psi, t^2 -> 0}
    let base = LocalTruncation::power_truncation(1, 2).as_comm_local();
    let mut table = BTreeMap::new();
    table.insert(1usize, psi);
    let series = DeformationSeries::new(base, table).unwrap();
    let residual = mc_residual(&spaces, &series);
    assert!(matrix::vec_is_zero(&residual[&1]));
    assert!(!matrix::vec_is_zero(&residual[&2]));
}

/// Conjugating a genuine deformation by a base-linear automorphism
/// `rho = id + t ⊗ gamma` produces an equivalent one; over k[t]/(t^4)
/// this drives the solver through its quadratic and cubic correction
/// terms, and the direct expansion check certifies the witness.
#[test]
fn equivalence_solver_handles_higher_order_corrections() {
    let mut rng = Lcg::new(163);
    let alg = catalog::ass_dual_numbers();
    let spaces = CochainSpaces::new(&alg);
    let lambda1 = versal(&spaces, 3).unwrap().series; // over k[t]/(t^4), valid
    let base = lambda1.base.clone();
    let bdim = base.dim();
    let v = alg.dim();
    let values1: BTreeMap<usize, Vec<Matrix>> = lambda1
        .table
        .iter()
        .map(|(&p, c)| (p, spaces.c2.coords_to_values(c)))
        .collect();
    // Conjugate by the canonical gauge representative: replace a random
    // gamma by the deterministic d1-preimage of its coboundary, so the
    // solver's zero-free-variable choice at order one reproduces the
    // witness exactly and the higher orders stay consistent. (The greedy
    // solver is allowed to miss equivalences under other gauges.)
    let gamma_raw = Matrix::from_fn(v, v, |_, _| rng.scalar_in(-2, 2));
    let d1_kit = matrix::SolveKit::new(&spaces.mat_d1);
    let sol = d1_kit
        .solve(&spaces.d1_coords(&gamma_raw))
        .expect("its own coboundary is solvable");
    let gamma = Matrix::from_fn(v, v, |i, j| sol[i * v + j].clone());
    assert!(!gamma.is_zero());

    // rho and its inverse on base ⊗ V, as maps of (bdim x v) coordinate
    // matrices; N(b ⊗ v_m) = (t b) ⊗ gamma(v_m) is nilpotent.
    let nmap = |w: &Matrix| -> Matrix {
        let mut out = Matrix::zero(bdim, v);
        for b in 0..bdim {
            for m in 0..v {
                let c = w.at(b, m);
                if scalar::is_zero(c) {
                    continue;
                }
                let tb = base.mult(b, 1); // multiply by t
                for l in 0..v {
                    let g = gamma.at(l, m);
                    if scalar::is_zero(g) {
                        continue;
                    }
                    for (pos, pc) in tb.iter().enumerate() {
                        if !scalar::is_zero(pc) {
                            *out.at_mut(pos, l) += &(c * g) * pc;
                        }
                    }
                }
            }
        }
        out
    };
    let rho_apply = |w: &Matrix| -> Matrix { w.add(&nmap(w)) };
    let rho_inv = |w: &Matrix| -> Matrix {
        // geometric series: (id + N)^{-1} = id - N + N^2 - N^3
        let n1 = nmap(w);
        let n2 = nmap(&n1);
        let n3 = nmap(&n2);
        w.sub(&n1).add(&n2).sub(&n3)
    };
    // lambda1 on pure tensors, then extended bilinearly over the base
    let lam1 = |x1: usize, x2: usize, k: usize| -> Matrix {
        let mut out = Matrix::zero(bdim, v);
        for l in 0..v {
            *out.at_mut(0, l) = alg.structure()[k].at(l, x1 * v + x2).clone();
        }
        for (&pos, vals) in &values1 {
            for l in 0..v {
                *out.at_mut(pos, l) += vals[k].at(l, x1 * v + x2);
            }
        }
        out
    };
    let lam1_general = |w1: &Matrix, w2: &Matrix, k: usize| -> Matrix {
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
                        let inner = lam1(m1, m2, k);
                        let bb = base.mult(b1, b2);
                        for bi in 0..bdim {
                            if scalar::is_zero(&bb[bi]) {
                                continue;
                            }
                            for bj in 0..bdim {
                                for l in 0..v {
                                    let iv = inner.at(bj, l);
                                    if scalar::is_zero(iv) {
                                        continue;
                                    }
                                    for (t, pc) in base.mult(bi, bj).iter().enumerate() {
                                        if !scalar::is_zero(pc) {
                                            *out.at_mut(t, l) +=
                                                &(&(c1 * c2) * &bb[bi]) * &(iv * pc);
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

    // lambda2 := rho^{-1} ∘ lambda1 ∘ (rho ⊗ rho), read off as a table
    let mut raw_tables: BTreeMap<usize, Vec<Matrix>> = BTreeMap::new();
    for pos in base.ideal_positions() {
        raw_tables.insert(pos, alloc::vec![Matrix::zero(v, v * v); alg.operad().e().dim()]);
    }
    for k in 0..alg.operad().e().dim() {
        for x1 in 0..v {
            for x2 in 0..v {
                let mut unit1 = Matrix::zero(bdim, v);
                *unit1.at_mut(0, x1) = scalar::one();
                let mut unit2 = Matrix::zero(bdim, v);
                *unit2.at_mut(0, x2) = scalar::one();
                let moved = rho_inv(&lam1_general(&rho_apply(&unit1), &rho_apply(&unit2), k));
                // unit row must reproduce pi, the rest is the new table
                for l in 0..v {
                    assert_eq!(moved.at(0, l), alg.structure()[k].at(l, x1 * v + x2));
                }
                for pos in base.ideal_positions() {
                    for l in 0..v {
                        *raw_tables.get_mut(&pos).unwrap()[k].at_mut(l, x1 * v + x2) =
                            moved.at(pos, l).clone();
                    }
                }
            }
        }
    }
    let mut table2 = BTreeMap::new();
    for (pos, vals) in raw_tables {
        let coords = spaces.c2.values_to_coords(&vals);
        assert_eq!(spaces.c2.coords_to_values(&coords), vals, "equivariant table");
        if !matrix::vec_is_zero(&coords) {
            table2.insert(pos, coords);
        }
    }
    let lambda2 = DeformationSeries::new(base.clone(), table2).unwrap();
    assert!(residual_is_zero(&mc_residual(&spaces, &lambda2)));
    assert_ne!(lambda1.table, lambda2.table, "conjugation must move the table");

    let rho = equivalence_solve(&spaces, &lambda1, &lambda2)
        .unwrap()
        .expect("conjugate deformations are equivalent");
    assert!(equivalence_check(&spaces, &lambda1, &lambda2, &rho));
}
