//! Shared corpora for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use mackey_core::group::{
    small_group_corpus, PGroup, Subgroup, SubgroupKind, DEFAULT_SUBGROUP_CAP,
};
use mackey_core::mackey::{
    constant, h0_lower, h0_upper, h_lower, induced, Cmf, ConstantKind, MackeySystem,
};
use mackey_core::module::FpGModule;
use mackey_core::{FpMatrix, Prime};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

pub fn groups(max_order: usize) -> Vec<Arc<PGroup>> {
    small_group_corpus(max_order)
        .into_iter()
        .map(Arc::new)
        .collect()
}

pub fn subgroups(g: &PGroup) -> Vec<Subgroup> {
    g.subgroups(SubgroupKind::All, DEFAULT_SUBGROUP_CAP)
        .unwrap()
}

/// A subgroup that is not normal if one exists, else a maximal one.
pub fn interesting_subgroup(g: &PGroup) -> Subgroup {
    let subs = subgroups(g);
    subs.iter()
        .find(|h| !g.is_normal(h))
        .or_else(|| subs.get(1))
        .cloned()
        .unwrap_or_else(|| g.whole())
}

fn random_matrix(rng: &mut ChaCha8Rng, p: Prime, rows: usize, cols: usize) -> FpMatrix {
    FpMatrix::from_fn(p, rows, cols, |_, _| rng.gen_range(0..p.get()))
}

fn random_invertible(rng: &mut ChaCha8Rng, p: Prime, n: usize) -> FpMatrix {
    loop {
        let m = random_matrix(rng, p, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// `x ↦ P x`: the same module in another basis.
pub fn twist(rng: &mut ChaCha8Rng, m: &FpGModule) -> FpGModule {
    let p = m.prime();
    let b = random_invertible(rng, p, m.dim());
    let bi = b.inverse().unwrap();
    let actions = m
        .generator_actions()
        .iter()
        .map(|a| b.mul(a).mul(&bi))
        .collect();
    FpGModule::new(m.group().clone(), m.dim(), actions).unwrap()
}

fn random_vectors(rng: &mut ChaCha8Rng, p: Prime, n: usize, k: usize) -> Vec<Vec<u32>> {
    (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(0..p.get())).collect())
        .collect()
}

/// A random module: trivial, permutation, cyclic submodules and quotients of
/// permutation modules, and direct sums of these, in a random basis.
pub fn random_module(
    rng: &mut ChaCha8Rng,
    g: &Arc<PGroup>,
    subs: &[Subgroup],
    max_dim: usize,
) -> FpGModule {
    loop {
        let h = &subs[rng.gen_range(0..subs.len())];
        let kinds = if max_dim >= 2 { 6 } else { 4 };
        let m = match rng.gen_range(0..kinds) {
            0 => FpGModule::trivial(g.clone(), rng.gen_range(1..=2)),
            1 => FpGModule::permutation(g.clone(), h),
            2 | 3 => {
                let perm = FpGModule::permutation(g.clone(), h);
                let k = rng.gen_range(1..=2);
                let vs = random_vectors(rng, g.prime(), perm.dim(), k);
                let basis = perm.generated_submodule(&vs);
                if basis.rows() == 0 || basis.rows() == perm.dim() {
                    continue;
                }
                if rng.gen_bool(0.5) {
                    perm.submodule(&basis).unwrap().0
                } else {
                    perm.quotient(&basis).unwrap().0
                }
            }
            _ => {
                let a = random_module(rng, g, subs, max_dim / 2);
                let b = random_module(rng, g, subs, max_dim - a.dim());
                a.direct_sum(&b)
            }
        };
        if m.dim() > 0 && m.dim() <= max_dim {
            return twist(rng, &m);
        }
    }
}

/// `n` random modules over the groups of order at most `max_order`, cycling
/// through the groups.
pub fn module_corpus(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_order: usize,
    max_dim: usize,
) -> Vec<FpGModule> {
    let gs = groups(max_order);
    let subs: Vec<Vec<Subgroup>> = gs.iter().map(|g| subgroups(g)).collect();
    (0..n)
        .map(|i| {
            let k = i % gs.len();
            random_module(rng, &gs[k], &subs[k], max_dim)
        })
        .collect()
}

/// Every built-in constructor on one group, with its full Mackey system.
pub fn constructor_functors(g: &Arc<PGroup>, sys: &Arc<MackeySystem>) -> Vec<(String, Cmf)> {
    let h = interesting_subgroup(g);
    let triv = FpGModule::trivial(g.clone(), 1);
    let perm = FpGModule::permutation(g.clone(), &h);
    let mut out = vec![
        ("T".to_string(), constant(sys.clone(), 1, ConstantKind::T)),
        (
            "Upsilon".to_string(),
            constant(sys.clone(), 1, ConstantKind::Upsilon),
        ),
        (
            "h0_upper(perm)".to_string(),
            h0_upper(&perm, sys.clone()).unwrap(),
        ),
        (
            "h0_lower(perm)".to_string(),
            h0_lower(&perm, sys.clone()).unwrap(),
        ),
        (
            "h1(triv)".to_string(),
            h_lower(&triv, 1, sys.clone(), 8).unwrap(),
        ),
        (
            "induced_T".to_string(),
            induced(&h, ConstantKind::T, sys.clone()).unwrap(),
        ),
        (
            "induced_Upsilon".to_string(),
            induced(&h, ConstantKind::Upsilon, sys.clone()).unwrap(),
        ),
    ];
    let duals: Vec<(String, Cmf)> = out
        .iter()
        .map(|(n, x)| (format!("dual({n})"), x.dual()))
        .collect();
    out.extend(duals);
    out
}
