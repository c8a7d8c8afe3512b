mod common;

use std::sync::Arc;

use common::{groups, prime, random_module, subgroups};
use mackey_core::group::{cyclic, PGroup};
use mackey_core::mackey::{
    check, h0_lower, h0_lower_map, h0_upper, h0_upper_map, CmfMorphism, MackeySystem,
};
use mackey_core::module::FpGModule;
use mackey_core::seco::{injectivity_criterion, predicates, six_term_check};
use mackey_core::tower::{d1_report, ends_classify, Tower};
use mackey_core::FpMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(
    seed: u64,
    max_order: usize,
    max_dim: usize,
) -> (Arc<PGroup>, Arc<MackeySystem>, FpGModule) {
    let gs = groups(max_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gs[(seed % gs.len() as u64) as usize].clone();
    let m = random_module(&mut rng, &g, &subgroups(&g), max_dim);
    let sys = MackeySystem::all(g.clone()).unwrap();
    (g, sys, m)
}

/// A proper nonzero submodule of `m`, if the first basis vector generates one.
fn some_submodule(m: &FpGModule) -> Option<(FpGModule, FpMatrix)> {
    let e0: Vec<u32> = (0..m.dim()).map(|k| (k == 0) as u32).collect();
    let basis = m.generated_submodule(&[e0]);
    (basis.rows() < m.dim()).then(|| m.submodule(&basis).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn module_functors_satisfy_the_axioms(seed in any::<u64>()) {
        let (_, sys, m) = setup(seed, 8, 6);
        for x in [h0_upper(&m, sys.clone()).unwrap(), h0_lower(&m, sys.clone()).unwrap()] {
            let r = check(&x, usize::MAX, seed);
            prop_assert!(r.passed(), "{:?}", r.violations.first());
            prop_assert!(check(&x.dual(), usize::MAX, seed).passed());
        }
    }

    #[test]
    fn duality_swaps_the_predicates(seed in any::<u64>()) {
        let (_, sys, m) = setup(seed, 16, 6);
        for x in [h0_upper(&m, sys.clone()).unwrap(), h0_lower(&m, sys.clone()).unwrap()] {
            let a = predicates(&x).unwrap();
            let d = predicates(&x.dual()).unwrap();
            prop_assert!(a.coherent && d.coherent);
            prop_assert_eq!(a.i_injective, d.t_surjective);
            prop_assert_eq!(a.t_surjective, d.i_injective);
            prop_assert_eq!(a.type_h0, d.type_h_0);
            prop_assert_eq!(a.type_h_0, d.type_h0);
        }
    }

    #[test]
    fn six_term_sequences_are_exact(seed in any::<u64>()) {
        let (_, sys, m) = setup(seed, 16, 6);
        let sections = sys.normal_sections();
        for x in [h0_upper(&m, sys.clone()).unwrap(), h0_lower(&m.contragredient(), sys.clone()).unwrap()] {
            for &(u, v) in &sections {
                let r = six_term_check(&x, u, v).unwrap();
                prop_assert!(r.exact, "section ({}, {}): {:?}", u, v, r.exact_at);
            }
        }
    }

    #[test]
    fn injectivity_criterion_is_consistent(seed in any::<u64>()) {
        let (_, sys, m) = setup(seed, 16, 8);
        let Some((n, incl)) = some_submodule(&m) else { return Ok(()); };
        let (xn, xm) = (h0_upper(&n, sys.clone()).unwrap(), h0_upper(&m, sys.clone()).unwrap());
        let phi = CmfMorphism::new(&xn, &xm, h0_upper_map(&n, &m, &incl, &sys).unwrap()).unwrap();
        let v = injectivity_criterion(&xn, &xm, &phi).unwrap();
        prop_assert!(v.consistent());
        // fixed points are left exact
        prop_assert!(v.all_components_injective);

        let (yn, ym) = (h0_lower(&n, sys.clone()).unwrap(), h0_lower(&m, sys.clone()).unwrap());
        let psi = CmfMorphism::new(&yn, &ym, h0_lower_map(&n, &m, &incl, &sys).unwrap()).unwrap();
        prop_assert!(injectivity_criterion(&yn, &ym, &psi).unwrap().consistent());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verlagerung_does_not_depend_on_the_transversal(seed in any::<u64>()) {
        let gs = groups(32);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gs.choose(&mut rng).unwrap();
        let subs = subgroups(g);
        let u = subs.choose(&mut rng).unwrap();
        let reps: Vec<usize> = g.left_cosets(u).iter().map(|c| *c.choose(&mut rng).unwrap()).collect();
        prop_assert_eq!(g.verlagerung_with(u, &reps).unwrap(), g.verlagerung(u).unwrap());
    }
}

fn towers() -> Vec<Tower> {
    let p2 = prime(2);
    let p3 = prime(3);
    let c2 = Arc::new(cyclic(p2, 1).unwrap());
    let mut out = vec![
        Tower::cyclic(p2, 5).unwrap(),
        Tower::cyclic(p3, 4).unwrap(),
        Tower::constant(c2.clone(), 4).unwrap(),
        Tower::product(
            &Tower::cyclic(p2, 4).unwrap(),
            &Tower::constant(c2, 4).unwrap(),
        )
        .unwrap(),
        Tower::product(
            &Tower::cyclic(p2, 3).unwrap(),
            &Tower::cyclic(p2, 3).unwrap(),
        )
        .unwrap(),
    ];
    for g in groups(16).into_iter().filter(|g| g.p() == 2).take(6) {
        out.push(Tower::constant(g, 3).unwrap());
    }
    // C2 <- C4 <- C4 <- C4
    let stages: Vec<Arc<PGroup>> = [1, 2, 2, 2]
        .iter()
        .map(|&k| Arc::new(cyclic(p2, k).unwrap()))
        .collect();
    let images: Vec<Vec<usize>> = stages[..3]
        .iter()
        .map(|g| g.generators().to_vec())
        .collect();
    out.push(Tower::new("stabilizing", stages, &images).unwrap());
    out
}

#[test]
fn d1_composites_are_non_increasing_and_match_direct_transfers() {
    for t in towers() {
        for m in 2..=t.depth() {
            let r = d1_report(&t, m).unwrap();
            assert!(
                r.composite_ranks.windows(2).all(|w| w[1] <= w[0]),
                "{}: {:?}",
                t.name(),
                r.composite_ranks
            );
            let g = t.stage(m);
            for (j, &rank) in r.composite_ranks.iter().enumerate() {
                let direct = g.verlagerung(&t.kernel(m, j + 1).unwrap()).unwrap();
                assert_eq!(
                    rank,
                    direct.rank(),
                    "{} stage {m}, K_{{m,{}}}",
                    t.name(),
                    j + 1
                );
            }
            assert_eq!(r.certificate, *r.composite_ranks.last().unwrap());
        }
    }
}

#[test]
fn ends_vanish_exactly_when_the_tower_stabilizes() {
    for t in towers() {
        for m in 2..=t.depth() {
            let r = ends_classify(&t, m).unwrap();
            let stable = t.stage(m).order() == t.stage(m - 1).order();
            assert_eq!(r.e == Some(0), stable, "{} at stage {m}", t.name());
            assert!(r.e.is_none_or(|e| e >= r.e_lower_bound));
        }
    }
}
