use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::group::{cyclic, dihedral, elementary_abelian, quaternion, PGroup, Subgroup};
use crate::linalg::{FpMatrix, FpSubquotient, Prime};
use crate::module::FpGModule;

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

fn grp(g: PGroup) -> Arc<PGroup> {
    Arc::new(g)
}

fn full(g: &Arc<PGroup>) -> Arc<MackeySystem> {
    MackeySystem::all(g.clone()).unwrap()
}

fn clean(x: &Cmf) {
    let r = check(x, DEFAULT_AXIOM_BUDGET, 0);
    assert!(
        r.passed(),
        "violations: {:?}",
        &r.violations[..r.violations.len().min(5)]
    );
    assert!(r.all_exhaustive());
}

fn non_normal_subgroup(g: &PGroup) -> Subgroup {
    (0..g.order())
        .map(|x| g.closure(&[x]))
        .find(|h| !g.is_normal(h))
        .unwrap()
}

#[test]
fn constant_functors_on_c4() {
    let g = grp(cyclic(pr(2), 2).unwrap());
    let s = full(&g);
    let t = constant(s.clone(), 1, ConstantKind::T);
    clean(&t);
    let u = constant(s.clone(), 1, ConstantKind::Upsilon);
    clean(&u);
    clean(&constant(s, 0, ConstantKind::T));
}

#[test]
fn constant_functor_maps_on_c2() {
    let g = grp(cyclic(pr(2), 1).unwrap());
    let s = full(&g);
    let t = constant(s.clone(), 1, ConstantKind::T);
    assert!(t.t(1, 0).is_zero());
    assert!(t.i(0, 1).is_identity());
    let u = constant(s, 1, ConstantKind::Upsilon);
    assert!(u.i(0, 1).is_zero());
    assert!(u.t(1, 0).is_identity());
}

#[test]
fn planted_mutation_is_caught() {
    let g = grp(cyclic(pr(2), 2).unwrap());
    let s = full(&g);
    let mut t = constant(s.clone(), 1, ConstantKind::T);
    // index-2 edge: T has t = 0 here; make it the identity
    t.set_t_edge(0, 1, FpMatrix::identity(g.prime(), 1))
        .unwrap();
    let r = check(&t, DEFAULT_AXIOM_BUDGET, 0);
    assert!(r.violated(Axiom::Cmf7));
}

#[test]
fn module_functors_pass_on_d8() {
    let g = grp(dihedral(3).unwrap());
    let s = full(&g);
    let reg = FpGModule::regular(g.clone());
    clean(&h0_lower(&reg, s.clone()).unwrap());
    clean(&h0_upper(&reg, s.clone()).unwrap());
    let triv = FpGModule::trivial(g.clone(), 1);
    clean(&h0_lower(&triv, s.clone()).unwrap());
    clean(&h0_upper(&triv, s.clone()).unwrap());
    clean(&h_lower(&triv, 1, s.clone(), 8).unwrap());
    let h = non_normal_subgroup(&g);
    let perm = FpGModule::permutation(g.clone(), &h);
    clean(&h_lower(&perm, 2, s.clone(), 8).unwrap());
    for kind in [ConstantKind::T, ConstantKind::Upsilon] {
        let x = induced(&h, kind, s.clone()).unwrap();
        clean(&x);
        clean(&x.dual());
    }
}

#[test]
fn module_functors_pass_at_p3() {
    let g = grp(elementary_abelian(pr(3), 2).unwrap());
    let s = full(&g);
    let reg = FpGModule::regular(g.clone());
    clean(&h0_lower(&reg, s.clone()).unwrap());
    clean(&h0_upper(&reg, s.clone()).unwrap());
    clean(&h_lower(&FpGModule::trivial(g.clone(), 1), 1, s, 8).unwrap());
}

#[test]
fn fixed_point_and_coinvariant_examples_on_c2() {
    let g = grp(cyclic(pr(2), 1).unwrap());
    let s = full(&g);
    let triv = FpGModule::trivial(g.clone(), 1);
    let up = h0_upper(&triv, s.clone()).unwrap();
    assert_eq!(up.dims(), &[1, 1]);
    assert!(up.i(0, 1).is_identity());
    assert!(up.t(1, 0).is_zero());
    let low = h0_lower(&triv, s.clone()).unwrap();
    assert!(low.t(1, 0).is_identity());
    assert!(low.i(0, 1).is_zero());
    let el = h_lower(&triv, 1, s, 8).unwrap();
    assert_eq!(el.dims(), &[1, 0]);
    assert!(el.j_map().unwrap().is_zero());
}

#[test]
fn first_homology_functor_has_frattini_ranks() {
    let g = grp(quaternion(3).unwrap());
    let s = full(&g);
    let el = h_lower(&FpGModule::trivial(g.clone(), 1), 1, s.clone(), 8).unwrap();
    for (u, sub) in s.members().iter().enumerate() {
        let (ug, _) = g.subgroup_as_group(sub);
        assert_eq!(el.dim(u), ug.elab().rank());
    }
}

#[test]
fn resolution_degree_zero_matches_coinvariants() {
    let g = grp(dihedral(3).unwrap());
    let s = full(&g);
    let h = non_normal_subgroup(&g);
    let m = FpGModule::permutation(g.clone(), &h);
    let a = h_lower(&m, 0, s.clone(), 8).unwrap();
    let b = h0_lower(&m, s).unwrap();
    assert_eq!(a.dims(), b.dims());
}

/// Orbit-sum isomorphism `ind T(H) -> h⁰(F_p[G/H])`: `HrU ↦ Σ_{xH ∈ U r⁻¹H} xH`.
fn orbit_sum_iso(g: &PGroup, h: &Subgroup, s: &MackeySystem) -> Vec<FpMatrix> {
    let cosets = g.left_cosets(h);
    let mut coset_of = vec![0; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let whole = g.whole();
    s.members()
        .iter()
        .map(|u| {
            let (reps, _) = g.double_coset_partition(h, &whole, u).unwrap();
            let perm = FpGModule::permutation(Arc::new(g.clone()), h);
            let space = FpSubquotient::subspace(&perm.fixed_space(u.gens()));
            let cols: Vec<Vec<u32>> = reps
                .iter()
                .map(|&r| {
                    let mut v = vec![0u32; cosets.len()];
                    for &y in u.elements() {
                        v[coset_of[g.mul(y, g.inv(r))]] = 1;
                    }
                    space.reduce(&v).unwrap()
                })
                .collect();
            FpMatrix::from_columns(g.prime(), space.dim(), &cols)
        })
        .collect()
}

/// `HrU ↦ [e_{r⁻¹K}]` from double cosets into coinvariants of `F_p[G/K]`.
fn coset_class_iso(g: &Arc<PGroup>, h: &Subgroup, k: &Subgroup, s: &MackeySystem) -> Vec<FpMatrix> {
    let cosets = g.left_cosets(k);
    let mut coset_of = vec![0; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let perm = FpGModule::permutation(g.clone(), k);
    let whole = g.whole();
    s.members()
        .iter()
        .map(|u| {
            let (reps, _) = g.double_coset_partition(h, &whole, u).unwrap();
            let space = FpSubquotient::quotient(&perm.augmentation_span(u.gens())).unwrap();
            let cols: Vec<Vec<u32>> = reps
                .iter()
                .map(|&r| {
                    let mut v = vec![0u32; cosets.len()];
                    v[coset_of[g.inv(r)]] = 1;
                    space.reduce(&v).unwrap()
                })
                .collect();
            FpMatrix::from_columns(g.prime(), space.dim(), &cols)
        })
        .collect()
}

#[test]
fn induced_t_is_fixed_points_of_permutation_module() {
    for g in [
        dihedral(3).unwrap(),
        quaternion(3).unwrap(),
        dihedral(4).unwrap(),
    ] {
        let g = grp(g);
        let s = full(&g);
        for h in s.members().to_vec() {
            let x = induced(&h, ConstantKind::T, s.clone()).unwrap();
            let y = h0_upper(&FpGModule::permutation(g.clone(), &h), s.clone()).unwrap();
            let phi = CmfMorphism::new(&x, &y, orbit_sum_iso(&g, &h, &s)).unwrap();
            assert!(phi.is_isomorphism());
        }
    }
}

#[test]
fn induced_upsilon_is_coinvariants_of_permutation_module() {
    for g in [dihedral(3).unwrap(), cyclic(pr(3), 2).unwrap()] {
        let g = grp(g);
        let s = full(&g);
        for h in s.members().to_vec() {
            let x = induced(&h, ConstantKind::Upsilon, s.clone()).unwrap();
            let y = h0_lower(&FpGModule::permutation(g.clone(), &h), s.clone()).unwrap();
            let phi = CmfMorphism::new(&x, &y, coset_class_iso(&g, &h, &h, &s)).unwrap();
            assert!(phi.is_isomorphism());
        }
    }
}

#[test]
fn induced_t_above_a_normal_subgroup_is_coinvariants() {
    let g = grp(dihedral(4).unwrap());
    let s = full(&g);
    for n in s.members().iter().filter(|n| g.is_normal(n)) {
        let above = s.above(n).unwrap();
        for h in s.members().iter().filter(|h| h.is_subset(n)) {
            let x = induced(h, ConstantKind::T, s.clone())
                .unwrap()
                .restrict(above.clone())
                .unwrap();
            let y = h0_lower(&FpGModule::permutation(g.clone(), n), above.clone()).unwrap();
            let phi = CmfMorphism::new(&x, &y, coset_class_iso(&g, h, n, &above)).unwrap();
            assert!(phi.is_isomorphism());
        }
    }
}

#[test]
fn induced_examples() {
    let g = grp(cyclic(pr(2), 2).unwrap());
    let s = full(&g);
    let whole = induced(&g.whole(), ConstantKind::T, s.clone()).unwrap();
    assert!(whole.dims().iter().all(|&d| d == 1));
    let c2 = s.member(1).clone();
    let x = induced(&c2, ConstantKind::T, s.clone()).unwrap();
    assert_eq!(x.dim(0), 1);
    assert!(!x.t(1, 0).is_zero());
}

#[test]
fn duality() {
    let g = grp(cyclic(pr(2), 2).unwrap());
    let s = full(&g);
    let t = constant(s.clone(), 1, ConstantKind::T);
    assert_eq!(
        t.dual().to_data(),
        constant(s.clone(), 1, ConstantKind::Upsilon).to_data()
    );
    let x = h0_lower(&FpGModule::regular(g.clone()), s.clone()).unwrap();
    assert_eq!(x.dual().dual().to_data(), x.to_data());
    assert!(Cmf::zero(s).dual().is_zero());
}

#[test]
fn ires_of_fixed_points_is_the_module() {
    let g = grp(dihedral(3).unwrap());
    let s = full(&g);
    let h = non_normal_subgroup(&g);
    let m = FpGModule::permutation(g.clone(), &h);
    let x = h0_upper(&m, s.clone()).unwrap();
    let r = x.ires().unwrap();
    assert_eq!(r.generator_actions(), m.generator_actions());
    assert_eq!(Cmf::zero(s).ires().unwrap().dim(), 0);
}

#[test]
fn double_coset_formula_is_representative_independent() {
    let g = grp(dihedral(4).unwrap());
    let s = full(&g);
    let x = h0_lower(&FpGModule::regular(g.clone()), s.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let u = rng.gen_range(0..s.len());
        let subs = s.subs(u);
        let v = subs[rng.gen_range(0..subs.len())];
        let w = subs[rng.gen_range(0..subs.len())];
        let (reps, class) = g
            .double_coset_partition(s.member(w), s.member(u), s.member(v))
            .unwrap();
        let random_reps: Vec<usize> = (0..reps.len())
            .map(|k| {
                let members: Vec<usize> = (0..g.order()).filter(|&y| class[y] == k).collect();
                members[rng.gen_range(0..members.len())]
            })
            .collect();
        assert_eq!(
            double_coset_sum(&x, u, v, w, None),
            double_coset_sum(&x, u, v, w, Some(&random_reps))
        );
    }
}

#[test]
fn morphism_examples() {
    let g = grp(cyclic(pr(2), 1).unwrap());
    let s = full(&g);
    let x = h0_lower(&FpGModule::regular(g.clone()), s.clone()).unwrap();
    let id = CmfMorphism::identity(&x);
    assert!(kernel(&x, &id).unwrap().0.is_zero());
    assert_eq!(image(&x, &id).unwrap().0.dims(), x.dims());
    let zero = CmfMorphism::zero(&x, &x).unwrap();
    assert_eq!(kernel(&x, &zero).unwrap().0.dims(), x.dims());

    let reg = FpGModule::regular(g.clone());
    let triv = FpGModule::trivial(g.clone(), 1);
    let eps = FpMatrix::from_rows(g.prime(), 2, &[vec![1, 1]]).unwrap();
    let y = h0_lower(&triv, s.clone()).unwrap();
    let comps = h0_lower_map(&reg, &triv, &eps, &s).unwrap();
    let phi = CmfMorphism::new(&x, &y, comps).unwrap();
    assert!(phi.is_surjective());
    assert_eq!(kernel(&x, &phi).unwrap().0.dims(), &[0, 1]);
    let ses = Ses::from_kernel(Arc::new(x), &y, &phi).unwrap();
    assert_eq!(ses.z.dims(), &[1, 1]);
}

#[test]
fn non_morphism_is_rejected() {
    let g = grp(cyclic(pr(2), 1).unwrap());
    let s = full(&g);
    let t = constant(s.clone(), 1, ConstantKind::T);
    let u = constant(s, 1, ConstantKind::Upsilon);
    let p = g.prime();
    let comps = vec![FpMatrix::identity(p, 1), FpMatrix::identity(p, 1)];
    assert!(CmfMorphism::new(&t, &u, comps).is_err());
}

#[test]
fn data_round_trip() {
    let g = grp(dihedral(3).unwrap());
    let s = full(&g);
    let x = h_lower(&FpGModule::trivial(g.clone(), 1), 1, s.clone(), 8).unwrap();
    let data = x.to_data();
    let y = Cmf::from_data(s, &data).unwrap();
    assert_eq!(y.to_data(), data);
}

#[test]
fn sampling_is_deterministic() {
    let g = grp(dihedral(4).unwrap());
    let s = full(&g);
    let x = h0_upper(&FpGModule::regular(g.clone()), s).unwrap();
    let a = check(&x, 50, 3);
    let b = check(&x, 50, 3);
    assert_eq!(a, b);
    assert!(a.passed());
    assert!(!a.all_exhaustive());
}
