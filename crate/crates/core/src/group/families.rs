//! Built-in families of p-groups and a fixed corpus of small groups.

use crate::error::{MackeyError, Result};
use crate::linalg::Prime;

use super::{PGroup, DEFAULT_ORDER_CAP};

fn prime(p: u32) -> Prime {
    Prime::new(p).expect("small prime")
}

/// Abelian group `Z/p^{e_1} × … × Z/p^{e_r}`.
pub fn abelian(p: Prime, exponents: &[u32]) -> Result<PGroup> {
    let moduli: Vec<u64> = exponents.iter().map(|&e| (p.get() as u64).pow(e)).collect();
    let gens: Vec<Vec<u64>> = (0..moduli.len())
        .filter(|&i| moduli[i] > 1)
        .map(|i| (0..moduli.len()).map(|j| u64::from(i == j)).collect())
        .collect();
    let name = exponents
        .iter()
        .map(|&e| format!("C{}", (p.get() as u64).pow(e)))
        .collect::<Vec<_>>()
        .join("x");
    PGroup::generate(
        p,
        vec![0u64; moduli.len()],
        &gens,
        |a, b| {
            a.iter()
                .zip(b)
                .zip(&moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect()
        },
        DEFAULT_ORDER_CAP,
        &name,
    )
}

/// Cyclic group of order `p^k`.
pub fn cyclic(p: Prime, k: u32) -> Result<PGroup> {
    if k == 0 {
        return Ok(PGroup::trivial(p));
    }
    abelian(p, &[k])
}

/// `(C_p)^rank`.
pub fn elementary_abelian(p: Prime, rank: usize) -> Result<PGroup> {
    if rank == 0 {
        return Ok(PGroup::trivial(p));
    }
    Ok(abelian(p, &vec![1; rank])?.with_name(&format!("C{}^{rank}", p)))
}

/// Metacyclic group `⟨a, b | a^m = 1, b^n = a^t, b a b⁻¹ = a^r⟩` of order `m·n`.
pub fn metacyclic(p: Prime, m: u64, n: u64, r: u64, t: u64, name: &str) -> Result<PGroup> {
    let mut rn = 1u64;
    for _ in 0..n {
        rn = rn * r % m;
    }
    if rn != 1 % m || (r * t) % m != t % m {
        return Err(MackeyError::InvalidGroup(format!(
            "inconsistent metacyclic parameters m={m} n={n} r={r} t={t}"
        )));
    }
    let rpow: Vec<u64> = (0..n)
        .scan(1u64, |acc, _| {
            let cur = *acc;
            *acc = *acc * r % m;
            Some(cur)
        })
        .collect();
    let mul = |x: &(u64, u64), y: &(u64, u64)| {
        let (i, j) = *x;
        let (k, l) = *y;
        let mut a = (i + k * rpow[j as usize]) % m;
        let mut b = j + l;
        if b >= n {
            b -= n;
            a = (a + t) % m;
        }
        (a, b)
    };
    PGroup::generate(
        p,
        (0, 0),
        &[(1 % m, 0), (0, 1 % n)],
        mul,
        DEFAULT_ORDER_CAP,
        name,
    )
}

/// Dihedral group of order `2^k` (`k ≥ 2`).
pub fn dihedral(k: u32) -> Result<PGroup> {
    let m = 1u64 << (k - 1);
    metacyclic(prime(2), m, 2, m - 1, 0, &format!("D{}", 1u64 << k))
}

/// Generalized quaternion group of order `2^k` (`k ≥ 3`).
pub fn quaternion(k: u32) -> Result<PGroup> {
    if k < 3 {
        return Err(MackeyError::InvalidGroup(
            "quaternion groups have order at least 8".into(),
        ));
    }
    let m = 1u64 << (k - 1);
    metacyclic(prime(2), m, 2, m - 1, m / 2, &format!("Q{}", 1u64 << k))
}

/// Semidihedral group of order `2^k` (`k ≥ 4`).
pub fn semidihedral(k: u32) -> Result<PGroup> {
    if k < 4 {
        return Err(MackeyError::InvalidGroup(
            "semidihedral groups have order at least 16".into(),
        ));
    }
    let m = 1u64 << (k - 1);
    metacyclic(prime(2), m, 2, m / 2 - 1, 0, &format!("SD{}", 1u64 << k))
}

/// Modular group `M_{p^k} = ⟨a, b | a^{p^{k-1}}, b^p, b a b⁻¹ = a^{1+p^{k-2}}⟩` (`k ≥ 3`).
pub fn modular(p: Prime, k: u32) -> Result<PGroup> {
    if k < 3 || (p.get() == 2 && k < 4) {
        return Err(MackeyError::InvalidGroup("modular group too small".into()));
    }
    let pp = p.get() as u64;
    let m = pp.pow(k - 1);
    metacyclic(p, m, pp, 1 + pp.pow(k - 2), 0, &format!("M{}", pp.pow(k)))
}

/// Heisenberg group of upper unitriangular 3×3 matrices over F_p.
pub fn heisenberg(p: Prime) -> Result<PGroup> {
    let q = p.get() as u64;
    PGroup::generate(
        p,
        (0u64, 0u64, 0u64),
        &[(1, 0, 0), (0, 1, 0)],
        |x, y| {
            (
                (x.0 + y.0) % q,
                (x.1 + y.1) % q,
                (x.2 + y.2 + x.0 * y.1) % q,
            )
        },
        DEFAULT_ORDER_CAP,
        &format!("He{q}"),
    )
}

pub fn direct_product(a: &PGroup, b: &PGroup) -> Result<PGroup> {
    if a.prime() != b.prime() {
        return Err(MackeyError::ModulusMismatch(a.p(), b.p()));
    }
    let mut gens: Vec<(usize, usize)> = a.generators().iter().map(|&g| (g, 0)).collect();
    gens.extend(b.generators().iter().map(|&g| (0, g)));
    PGroup::generate(
        a.prime(),
        (0usize, 0usize),
        &gens,
        |x, y| (a.mul(x.0, y.0), b.mul(x.1, y.1)),
        DEFAULT_ORDER_CAP,
        &format!("{}x{}", a.name(), b.name()),
    )
}

/// `N ⋊ C_n` where the generator of `C_n` acts by the automorphism sending
/// `N.generators()[i]` to `images[i]`.
pub fn semidirect_cyclic(base: &PGroup, images: &[usize], n: usize, name: &str) -> Result<PGroup> {
    let alpha = base.extend_map(base, images);
    if !base.is_homomorphism(base, &alpha) {
        return Err(MackeyError::InvalidGroup(
            "action is not an endomorphism".into(),
        ));
    }
    let mut powers = vec![(0..base.order()).collect::<Vec<_>>()];
    for j in 1..=n {
        let prev: &Vec<usize> = &powers[j - 1];
        powers.push(prev.iter().map(|&x| alpha[x]).collect());
    }
    if powers[n].iter().enumerate().any(|(i, &x)| i != x) {
        return Err(MackeyError::InvalidGroup(
            "automorphism order does not divide n".into(),
        ));
    }
    let mut gens: Vec<(usize, usize)> = base.generators().iter().map(|&g| (g, 0)).collect();
    gens.push((0, 1 % n));
    PGroup::generate(
        base.prime(),
        (0usize, 0usize),
        &gens,
        |x, y| (base.mul(x.0, powers[x.1][y.0]), (x.1 + y.1) % n),
        DEFAULT_ORDER_CAP,
        name,
    )
}

/// The central product `C_4 ∘ D_8` (order 16).
pub fn pauli() -> Result<PGroup> {
    let d8 = dihedral(3)?;
    let c4 = cyclic(prime(2), 2)?;
    let prod = direct_product(&d8, &c4)?;
    let z = d8.frattini().elements()[1];
    let c2 = c4.pow(c4.generators()[0], 2);
    // locate (z, c^2) in the product by its word
    let target = (0..prod.order())
        .find(|&x| {
            let w = prod.word(x);
            let mut pair = (0usize, 0usize);
            for s in w {
                let ng = d8.generators().len();
                if s < ng {
                    pair.0 = d8.mul(pair.0, d8.generators()[s]);
                } else {
                    pair.1 = c4.mul(pair.1, c4.generators()[s - ng]);
                }
            }
            pair == (z, c2)
        })
        .expect("central element");
    let n = prod.closure(&[target]);
    Ok(prod.quotient(&n)?.0.with_name("C4oD8"))
}

/// A fixed list of small p-groups used for exhaustive testing: every group
/// of order dividing 16, a selection of order 32, and several odd-prime groups.
pub fn small_group_corpus(max_order: usize) -> Vec<PGroup> {
    let two = prime(2);
    let three = prime(3);
    let five = prime(5);
    let mut out: Vec<PGroup> = Vec::new();
    let mut push = |order: usize, build: &dyn Fn() -> Result<PGroup>| {
        if order <= max_order {
            out.push(build().expect("corpus group"));
        }
    };
    push(2, &|| cyclic(two, 1));
    push(4, &|| cyclic(two, 2));
    push(4, &|| elementary_abelian(two, 2));
    push(8, &|| cyclic(two, 3));
    push(8, &|| abelian(two, &[2, 1]));
    push(8, &|| elementary_abelian(two, 3));
    push(8, &|| dihedral(3));
    push(8, &|| quaternion(3));
    push(16, &|| cyclic(two, 4));
    push(16, &|| abelian(two, &[2, 2]));
    push(16, &|| {
        let v4 = elementary_abelian(two, 2)?;
        // swap the two factors
        let g = v4.generators().to_vec();
        semidirect_cyclic(&v4, &[g[1], g[0]], 4, "C2^2:C4")
    });
    push(16, &|| metacyclic(two, 4, 4, 3, 0, "C4:C4"));
    push(16, &|| abelian(two, &[3, 1]));
    push(16, &|| modular(two, 4));
    push(16, &|| dihedral(4));
    push(16, &|| semidihedral(4));
    push(16, &|| quaternion(4));
    push(16, &|| abelian(two, &[2, 1, 1]));
    push(16, &|| direct_product(&cyclic(two, 1)?, &dihedral(3)?));
    push(16, &|| direct_product(&cyclic(two, 1)?, &quaternion(3)?));
    push(16, &pauli);
    push(16, &|| elementary_abelian(two, 4));
    push(32, &|| cyclic(two, 5));
    push(32, &|| abelian(two, &[4, 1]));
    push(32, &|| abelian(two, &[3, 2]));
    push(32, &|| elementary_abelian(two, 5));
    push(32, &|| dihedral(5));
    push(32, &|| quaternion(5));
    push(32, &|| semidihedral(5));
    push(32, &|| modular(two, 5));
    push(32, &|| direct_product(&cyclic(two, 2)?, &quaternion(3)?));
    push(32, &|| direct_product(&cyclic(two, 1)?, &dihedral(4)?));
    push(3, &|| cyclic(three, 1));
    push(9, &|| cyclic(three, 2));
    push(9, &|| elementary_abelian(three, 2));
    push(27, &|| cyclic(three, 3));
    push(27, &|| abelian(three, &[2, 1]));
    push(27, &|| elementary_abelian(three, 3));
    push(27, &|| heisenberg(three));
    push(27, &|| modular(three, 3));
    push(5, &|| cyclic(five, 1));
    push(25, &|| cyclic(five, 2));
    push(25, &|| elementary_abelian(five, 2));
    push(7, &|| cyclic(prime(7), 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SubgroupKind;

    #[test]
    fn corpus_groups_are_valid_and_distinct() {
        let corpus = small_group_corpus(32);
        assert_eq!(corpus.iter().filter(|g| g.order() == 16).count(), 14);
        let mut signatures = std::collections::BTreeSet::new();
        for g in &corpus {
            assert!(g.verify_axioms(), "{}", g.name());
            assert_eq!(g.order(), (g.p() as usize).pow(g.log_order()));
            // invariants that separate the groups of order 16
            let mut orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
            orders.sort();
            let subs = g.subgroups(SubgroupKind::All, 100_000).unwrap();
            let normal = subs.iter().filter(|h| g.is_normal(h)).count();
            let sig = (
                g.p(),
                g.order(),
                orders,
                subs.len(),
                normal,
                g.is_abelian(),
                g.elab().rank(),
            );
            assert!(signatures.insert(sig), "duplicate group {}", g.name());
        }
    }

    #[test]
    fn family_orders() {
        assert_eq!(dihedral(4).unwrap().order(), 16);
        assert_eq!(quaternion(3).unwrap().order(), 8);
        assert_eq!(heisenberg(prime(3)).unwrap().order(), 27);
        assert_eq!(pauli().unwrap().order(), 16);
        assert!(quaternion(2).is_err());
        assert!(metacyclic(prime(2), 4, 2, 2, 0, "bad").is_err());
    }
}
