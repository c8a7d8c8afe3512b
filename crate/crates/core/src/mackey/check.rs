use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::functor::Cmf;
use crate::linalg::FpMatrix;

/// Default number of instances checked exhaustively per axiom.
pub const DEFAULT_AXIOM_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    #[serde(rename = "cMF1")]
    Cmf1,
    #[serde(rename = "cMF2")]
    Cmf2,
    #[serde(rename = "cMF3")]
    Cmf3,
    #[serde(rename = "cMF4")]
    Cmf4,
    #[serde(rename = "cMF5")]
    Cmf5,
    #[serde(rename = "cMF6")]
    Cmf6,
    #[serde(rename = "cMF7")]
    Cmf7,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::Cmf1,
        Axiom::Cmf2,
        Axiom::Cmf3,
        Axiom::Cmf4,
        Axiom::Cmf5,
        Axiom::Cmf6,
        Axiom::Cmf7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Cmf1 => "cMF1",
            Axiom::Cmf2 => "cMF2",
            Axiom::Cmf3 => "cMF3",
            Axiom::Cmf4 => "cMF4",
            Axiom::Cmf5 => "cMF5",
            Axiom::Cmf6 => "cMF6",
            Axiom::Cmf7 => "cMF7",
        }
    }
}

/// One failed axiom instance. Subgroups are member indices, elements are
/// group element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCoverage {
    pub axiom: Axiom,
    pub total: usize,
    pub checked: usize,
    pub exhaustive: bool,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub budget: usize,
    pub seed: u64,
    pub coverage: Vec<AxiomCoverage>,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn all_exhaustive(&self) -> bool {
        self.coverage.iter().all(|c| c.exhaustive)
    }
}

/// Instance space of one axiom: a count and a decoder.
struct Space<'a> {
    total: usize,
    check: Box<dyn Fn(usize) -> Option<String> + 'a>,
}

/// Pairs `(U, V)` with `V ⊆ U`, in member order.
fn pairs(x: &Cmf) -> Vec<(usize, usize)> {
    let sys = x.system();
    (0..sys.len())
        .flat_map(|u| sys.subs(u).iter().map(move |&v| (u, v)))
        .collect()
}

fn prefix(counts: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for c in counts {
        let last = *out.last().unwrap();
        out.push(last + c);
    }
    out
}

/// Locates `idx` in the prefix-sum table: returns (block, offset).
fn locate(pre: &[usize], idx: usize) -> (usize, usize) {
    let b = pre.partition_point(|&s| s <= idx) - 1;
    (b, idx - pre[b])
}

fn spaces(x: &Cmf) -> Vec<(Axiom, Space<'_>)> {
    let sys = x.system().clone();
    let grp = sys.group().clone();
    let order = grp.order();
    let m = sys.len();
    let p = x.prime();
    let pairs = pairs(x);
    let mut out: Vec<(Axiom, Space<'_>)> = Vec::new();

    // cMF1: (U, u) with u ∈ U; u = 1 also covers i_{U,U} and t_{U,U}
    {
        let sys = sys.clone();
        let pre = prefix((0..m).map(|u| sys.member(u).order()));
        let total = *pre.last().unwrap();
        out.push((
            Axiom::Cmf1,
            Space {
                total,
                check: Box::new(move |idx| {
                    let (u, k) = locate(&pre, idx);
                    let g = sys.member(u).elements()[k];
                    let ok = if g == 0 {
                        x.i(u, u).is_identity()
                            && x.t(u, u).is_identity()
                            && x.c(0, u).is_identity()
                    } else {
                        x.c(g, u).is_identity()
                    };
                    (!ok).then(|| format!("U={u} u={g}"))
                }),
            },
        ));
    }

    // cMF2: W ⊆ V ⊆ U, both for i and t
    {
        let sys = sys.clone();
        let pairs = pairs.clone();
        let pre = prefix(pairs.iter().map(|&(_, v)| sys.subs(v).len()));
        let total = *pre.last().unwrap();
        out.push((
            Axiom::Cmf2,
            Space {
                total,
                check: Box::new(move |idx| {
                    let (k, off) = locate(&pre, idx);
                    let (u, v) = pairs[k];
                    let w = sys.subs(v)[off];
                    let i_ok = *x.i(u, w) == x.i(v, w).mul(&x.i(u, v));
                    let t_ok = *x.t(w, u) == x.t(v, u).mul(&x.t(w, v));
                    (!(i_ok && t_ok)).then(|| format!("U={u} V={v} W={w} i_ok={i_ok} t_ok={t_ok}"))
                }),
            },
        ));
    }

    // cMF3: c_{h,gUg⁻¹} ∘ c_{g,U} = c_{hg,U}
    {
        let sys = sys.clone();
        let grp = grp.clone();
        out.push((
            Axiom::Cmf3,
            Space {
                total: order * order * m,
                check: Box::new(move |idx| {
                    let u = idx % m;
                    let g = (idx / m) % order;
                    let h = idx / (m * order);
                    let gu = sys.conj(g, u);
                    let ok = x.c(h, gu).mul(&x.c(g, u)) == *x.c(grp.mul(h, g), u);
                    (!ok).then(|| format!("g={g} h={h} U={u}"))
                }),
            },
        ));
    }

    // cMF4 and cMF5: (g, U ⊇ V)
    for axiom in [Axiom::Cmf4, Axiom::Cmf5] {
        let sys = sys.clone();
        let pairs = pairs.clone();
        let np = pairs.len();
        out.push((
            axiom,
            Space {
                total: order * np,
                check: Box::new(move |idx| {
                    let (u, v) = pairs[idx % np];
                    let g = idx / np;
                    let (gu, gv) = (sys.conj(g, u), sys.conj(g, v));
                    let ok = if axiom == Axiom::Cmf4 {
                        x.i(gu, gv).mul(&x.c(g, u)) == x.c(g, v).mul(&x.i(u, v))
                    } else {
                        x.t(gv, gu).mul(&x.c(g, v)) == x.c(g, u).mul(&x.t(v, u))
                    };
                    (!ok).then(|| format!("g={g} U={u} V={v}"))
                }),
            },
        ));
    }

    // cMF6: V, W ⊆ U
    {
        let sys = sys.clone();
        let pre = prefix((0..m).map(|u| sys.subs(u).len().pow(2)));
        let total = *pre.last().unwrap();
        out.push((
            Axiom::Cmf6,
            Space {
                total,
                check: Box::new(move |idx| {
                    let (u, off) = locate(&pre, idx);
                    let s = sys.subs(u);
                    let (v, w) = (s[off / s.len()], s[off % s.len()]);
                    let lhs = x.i(u, w).mul(&x.t(v, u));
                    let rhs = double_coset_sum(x, u, v, w, None);
                    (lhs != rhs).then(|| format!("U={u} V={v} W={w}"))
                }),
            },
        ));
    }

    // cMF7: t_{V,U} ∘ i_{U,V} = |U:V|
    {
        let sys = sys.clone();
        let pairs = pairs.clone();
        out.push((
            Axiom::Cmf7,
            Space {
                total: pairs.len(),
                check: Box::new(move |idx| {
                    let (u, v) = pairs[idx];
                    let index = (sys.member(v).index_in(sys.member(u)) % p.get() as usize) as u32;
                    let ok = x.t(v, u).mul(&x.i(u, v)) == FpMatrix::scalar(p, x.dim(u), index);
                    (!ok).then(|| format!("U={u} V={v}"))
                }),
            },
        ));
    }
    out
}

/// The right-hand side of the double coset formula for `V, W ⊆ U`:
/// `Σ_{g ∈ W\U/V} t_{gVg⁻¹∩W, W} ∘ c_{g, V∩W^g} ∘ i_{V, V∩W^g}`, with `W^g = g⁻¹Wg`.
///
/// Representatives are the minimal elements of the double cosets unless
/// `reps` supplies others.
pub fn double_coset_sum(x: &Cmf, u: usize, v: usize, w: usize, reps: Option<&[usize]>) -> FpMatrix {
    let sys = x.system();
    let grp = sys.group();
    let owned;
    let reps = match reps {
        Some(r) => r,
        None => {
            owned = grp
                .double_cosets(sys.member(w), sys.member(u), sys.member(v))
                .expect("members of the system");
            &owned
        }
    };
    let mut acc = FpMatrix::zeros(x.prime(), x.dim(w), x.dim(v));
    for &g in reps {
        let wg = sys.conj(grp.inv(g), w);
        let a = sys.meet(v, wg);
        let b = sys.conj(g, a);
        let term = x.t(b, w).mul(&x.c(g, a)).mul(&x.i(v, a));
        acc = acc.add(&term);
    }
    acc
}

/// Verifies all seven axioms: exhaustively for axioms with at most `budget`
/// instances, otherwise on `budget` distinct instances drawn with a ChaCha8
/// generator seeded by `seed`.
pub fn check(x: &Cmf, budget: usize, seed: u64) -> CheckReport {
    let mut coverage = Vec::new();
    let mut violations = Vec::new();
    for (k, (axiom, space)) in spaces(x).into_iter().enumerate() {
        let exhaustive = space.total <= budget;
        let indices: Vec<usize> = if exhaustive {
            (0..space.total).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let mut v = rand::seq::index::sample(&mut rng, space.total, budget).into_vec();
            v.sort_unstable();
            v
        };
        let mut count = 0;
        for &idx in &indices {
            if let Some(instance) = (space.check)(idx) {
                count += 1;
                violations.push(Violation { axiom, instance });
            }
        }
        coverage.push(AxiomCoverage {
            axiom,
            total: space.total,
            checked: indices.len(),
            exhaustive,
            violations: count,
        });
    }
    CheckReport {
        budget,
        seed,
        coverage,
        violations,
    }
}
