//! Finite p-groups as indexed Cayley tables.
//!
//! Elements are numbered in breadth-first order over right multiplication by
//! the generators, so the identity is element `0` and every other element `g`
//! has a recorded parent `(h, s)` with `g = h·s`.

mod families;
mod subgroup;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{MackeyError, Result};
use crate::linalg::{FpMatrix, Prime};

pub use families::*;
pub use subgroup::{ElAb, Subgroup, SubgroupKind, DEFAULT_SUBGROUP_CAP};

/// Default bound on group orders accepted by the builders.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// A finite p-group given by its full multiplication table.
#[derive(Clone)]
pub struct PGroup {
    p: Prime,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
    parent: Vec<(u32, u32)>,
    name: String,
}

impl fmt::Debug for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PGroup({}, order {}, p = {})",
            self.name, self.order, self.p
        )
    }
}

impl PartialEq for PGroup {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.table == other.table && self.generators == other.generators
    }
}

impl Eq for PGroup {}

fn check_p_power(p: Prime, n: usize) -> Result<()> {
    let mut m = n;
    while m > 1 && m.is_multiple_of(p.get() as usize) {
        m /= p.get() as usize;
    }
    if m != 1 {
        return Err(MackeyError::NotAPGroup(n, p.get()));
    }
    Ok(())
}

impl PGroup {
    /// Generates a group from objects closed under an associative product.
    ///
    /// `gens` become the group generators in the given order. The identity is
    /// passed explicitly so the trivial group needs no generators.
    pub fn generate<T, F>(
        p: Prime,
        identity: T,
        gens: &[T],
        mul: F,
        cap: usize,
        name: &str,
    ) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut elems = vec![identity.clone()];
        index.insert(identity, 0);
        let mut parent = vec![(0u32, 0u32)];
        let mut rmul: Vec<u32> = Vec::new();
        let k = gens.len();
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            for (gi, s) in gens.iter().enumerate() {
                let y = mul(&x, s);
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        let i = elems.len();
                        if i >= cap {
                            return Err(MackeyError::CapExceeded {
                                what: "group order".into(),
                                cap,
                            });
                        }
                        index.insert(y.clone(), i);
                        elems.push(y);
                        parent.push((head as u32, gi as u32));
                        i
                    }
                };
                rmul.push(idx as u32);
            }
            head += 1;
        }
        let n = elems.len();
        check_p_power(p, n)?;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            table[a * n] = a as u32;
            for b in 1..n {
                let (prev, gi) = parent[b];
                let ab_prev = table[a * n + prev as usize] as usize;
                table[a * n + b] = rmul[ab_prev * k + gi as usize];
            }
        }
        let generators = (0..k).map(|gi| rmul[gi]).map(|x| x as usize).collect();
        Self::finish(p, n, table, generators, parent, name)
    }

    fn finish(
        p: Prime,
        n: usize,
        table: Vec<u32>,
        generators: Vec<usize>,
        parent: Vec<(u32, u32)>,
        name: &str,
    ) -> Result<Self> {
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n {
            if inverse[a] != u32::MAX {
                continue;
            }
            let b = (0..n)
                .find(|&b| table[a * n + b] == 0)
                .ok_or_else(|| MackeyError::InvalidGroup(format!("element {a} has no inverse")))?;
            inverse[a] = b as u32;
            inverse[b] = a as u32;
        }
        Ok(PGroup {
            p,
            order: n,
            table,
            inverse,
            generators,
            parent,
            name: name.to_string(),
        })
    }

    /// A group from an arbitrary multiplication table, validated and then
    /// relabelled into canonical breadth-first order over `gens`.
    pub fn from_cayley(p: Prime, table: &[Vec<usize>], gens: &[usize], name: &str) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(MackeyError::InvalidGroup(
                "table must be square and nonempty".into(),
            ));
        }
        if table.iter().flatten().any(|&x| x >= n) || gens.iter().any(|&g| g >= n) {
            return Err(MackeyError::InvalidGroup("entry out of range".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| MackeyError::InvalidGroup("no two-sided identity".into()))?;
        // latin square: every row and column a permutation
        for a in 0..n {
            let mut seen_r = vec![false; n];
            let mut seen_c = vec![false; n];
            for b in 0..n {
                seen_r[table[a][b]] = true;
                seen_c[table[b][a]] = true;
            }
            if seen_r.iter().chain(&seen_c).any(|s| !s) {
                return Err(MackeyError::InvalidGroup(
                    "table is not a latin square".into(),
                ));
            }
        }
        check_associative(n, |a, b| table[a][b], gens, n <= 256)?;
        let g = Self::generate(p, e, gens, |&a, &b| table[a][b], usize::MAX, name)?;
        if g.order != n {
            return Err(MackeyError::InvalidGroup(format!(
                "generators span {} of {n} elements",
                g.order
            )));
        }
        Ok(g)
    }

    /// A permutation group; `(a·b)[i] = a[b[i]]`.
    pub fn from_permutations(
        p: Prime,
        degree: usize,
        perms: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self> {
        for (k, perm) in perms.iter().enumerate() {
            let mut seen = vec![false; degree];
            if perm.len() != degree {
                return Err(MackeyError::InvalidGroup(format!(
                    "permutation {k} has length {} but degree is {degree}",
                    perm.len()
                )));
            }
            for &x in perm {
                if x >= degree || seen[x] {
                    return Err(MackeyError::InvalidGroup(format!(
                        "generator {k} is not a bijection"
                    )));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        Self::generate(
            p,
            id,
            perms,
            |a, b| b.iter().map(|&i| a[i]).collect(),
            cap,
            "perm",
        )
    }

    pub fn trivial(p: Prime) -> Self {
        Self::generate(p, 0u8, &[], |_, _| 0, 1, "1").expect("trivial group")
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p.get()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        let mut n = self.order;
        let mut k = 0;
        while n > 1 {
            n /= self.p() as usize;
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g·x·g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        self.mul(self.mul(self.inv(a), self.inv(b)), ab)
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut result = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Breadth-first parent of a non-identity element: `g = prev·generators[i]`.
    pub fn parent(&self, g: usize) -> Option<(usize, usize)> {
        (g != 0).then(|| (self.parent[g].0 as usize, self.parent[g].1 as usize))
    }

    /// The generator word of `g` (positions into `generators()`), read left to right.
    pub fn word(&self, mut g: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((prev, s)) = self.parent(g) {
            w.push(s);
            g = prev;
        }
        w.reverse();
        w
    }

    /// Evaluates a homomorphism on all elements from generator images.
    ///
    /// `images[i]` is the image of `generators()[i]` in `target`. The result is
    /// only a homomorphism if [`PGroup::is_homomorphism`] holds.
    pub fn extend_map(&self, target: &PGroup, images: &[usize]) -> Vec<usize> {
        assert_eq!(images.len(), self.generators.len());
        let mut map = vec![0usize; self.order];
        for g in 1..self.order {
            let (prev, s) = self.parent(g).unwrap();
            map[g] = target.mul(map[prev], images[s]);
        }
        map
    }

    /// Whether `map(x·s) = map(x)·map(s)` for every element `x` and generator `s`.
    pub fn is_homomorphism(&self, target: &PGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map[0] == 0
            && (0..self.order).all(|x| {
                self.generators
                    .iter()
                    .all(|&s| map[self.mul(x, s)] == target.mul(map[x], map[s]))
            })
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Verifies associativity, identity and inverses on the full table.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| self.mul(0, x) == x && self.mul(x, 0) == x && self.mul(x, self.inv(x)) == 0)
            && check_associative(n, |a, b| self.mul(a, b), &self.generators, true).is_ok()
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(
            self.order,
            (0..self.order).collect(),
            self.generators.clone(),
        )
    }

    /// The trivial subgroup.
    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, vec![0], vec![])
    }

    /// The subgroup generated by the given elements.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elems = vec![0usize];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                }
            }
            head += 1;
        }
        elems.sort_unstable();
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        Subgroup::from_sorted(self.order, elems, gens)
    }

    /// `⟨H, x⟩`.
    pub fn extend(&self, h: &Subgroup, x: usize) -> Subgroup {
        if h.contains(x) {
            return h.clone();
        }
        let mut gens = h.gens().to_vec();
        gens.push(x);
        self.closure(&gens)
    }

    /// Validates that an element set is a subgroup.
    pub fn subgroup_from_elements(&self, elems: &[usize]) -> Result<Subgroup> {
        let mut v: Vec<usize> = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.iter().any(|&x| x >= self.order) {
            return Err(MackeyError::NotSubgroup(
                "element index out of range".into(),
            ));
        }
        let h = self.closure(&v);
        if h.elements() != v.as_slice() {
            return Err(MackeyError::NotSubgroup(
                "element set is not closed under multiplication".into(),
            ));
        }
        Ok(h)
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut elems: Vec<usize> = h.elements().iter().map(|&x| self.conj(g, x)).collect();
        elems.sort_unstable();
        let gens = h.gens().iter().map(|&x| self.conj(g, x)).collect();
        Subgroup::from_sorted(self.order, elems, gens)
    }

    /// Whether `N` is normalized by every element of `U`.
    pub fn normalizes(&self, u: &Subgroup, n: &Subgroup) -> bool {
        u.gens()
            .iter()
            .all(|&g| n.gens().iter().all(|&x| n.contains(self.conj(g, x))))
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.generators
            .iter()
            .all(|&g| n.gens().iter().all(|&x| n.contains(self.conj(g, x))))
    }

    /// Smallest normal subgroup of `G` containing `h`.
    pub fn normal_closure(&self, h: &Subgroup) -> Subgroup {
        let mut n = h.clone();
        loop {
            let mut grew = false;
            let gens = n.gens().to_vec();
            for &g in &self.generators {
                for &x in &gens {
                    let y = self.conj(g, x);
                    if !n.contains(y) {
                        n = self.extend(&n, y);
                        grew = true;
                    }
                }
            }
            if !grew {
                return n;
            }
        }
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let elems: Vec<usize> = a
            .elements()
            .iter()
            .copied()
            .filter(|&x| b.contains(x))
            .collect();
        let gens = minimal_gens(self, &elems);
        Subgroup::from_sorted(self.order, elems, gens)
    }

    /// Left cosets `gU`, each as its sorted element list, ordered by minimal element.
    pub fn left_cosets(&self, u: &Subgroup) -> Vec<Vec<usize>> {
        self.cosets_of(&self.whole(), u, true)
    }

    /// Right cosets `Ug`, ordered by minimal element.
    pub fn right_cosets(&self, u: &Subgroup) -> Vec<Vec<usize>> {
        self.cosets_of(&self.whole(), u, false)
    }

    /// Cosets of `u` inside `within` (left: `xU`, right: `Ux`).
    pub fn cosets_of(&self, within: &Subgroup, u: &Subgroup, left: bool) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for &x in within.elements() {
            if seen[x] {
                continue;
            }
            let mut c: Vec<usize> = u
                .elements()
                .iter()
                .map(|&h| if left { self.mul(x, h) } else { self.mul(h, x) })
                .collect();
            c.sort_unstable();
            for &y in &c {
                seen[y] = true;
            }
            out.push(c);
        }
        out
    }

    /// Left transversal of `u` in `within`: the minimal element of each coset.
    pub fn left_transversal(&self, within: &Subgroup, u: &Subgroup) -> Vec<usize> {
        self.cosets_of(within, u, true)
            .iter()
            .map(|c| c[0])
            .collect()
    }

    pub fn right_transversal(&self, within: &Subgroup, u: &Subgroup) -> Vec<usize> {
        self.cosets_of(within, u, false)
            .iter()
            .map(|c| c[0])
            .collect()
    }

    /// Representatives of the double cosets `W x V` partitioning `U`, each the
    /// minimal element index of its double coset.
    pub fn double_cosets(&self, w: &Subgroup, u: &Subgroup, v: &Subgroup) -> Result<Vec<usize>> {
        Ok(self.double_coset_partition(w, u, v)?.0)
    }

    /// Double cosets `W x V` in `U`: the minimal representatives, and for each
    /// element of `G` the index of its double coset (`usize::MAX` outside `U`).
    pub fn double_coset_partition(
        &self,
        w: &Subgroup,
        u: &Subgroup,
        v: &Subgroup,
    ) -> Result<(Vec<usize>, Vec<usize>)> {
        if !w.is_subset(u) || !v.is_subset(u) {
            return Err(MackeyError::NotSubgroup(
                "double coset factors must lie in the ambient subgroup".into(),
            ));
        }
        let mut class = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        let mut stack = Vec::new();
        for &x in u.elements() {
            if class[x] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(x);
            class[x] = k;
            stack.push(x);
            while let Some(y) = stack.pop() {
                let left = w.gens().iter().map(|&a| self.mul(a, y));
                let right = v.gens().iter().map(|&b| self.mul(y, b));
                for z in left.chain(right).collect::<Vec<_>>() {
                    if class[z] == usize::MAX {
                        class[z] = k;
                        stack.push(z);
                    }
                }
            }
        }
        Ok((reps, class))
    }

    /// The subgroup `h` as a group in its own right, generated by `h.gens()`,
    /// with the embedding (own index -> parent index).
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (PGroup, Vec<usize>) {
        let g = PGroup::generate(
            self.p,
            0usize,
            h.gens(),
            |&a, &b| self.mul(a, b),
            usize::MAX,
            "subgroup",
        )
        .expect("subgroup of a p-group");
        let mut embed = vec![0usize; g.order];
        for x in 1..g.order {
            let (prev, s) = g.parent(x).unwrap();
            embed[x] = self.mul(embed[prev], h.gens()[s]);
        }
        (g, embed)
    }

    /// `G/N` with the projection `G -> G/N`.
    pub fn quotient(&self, n: &Subgroup) -> Result<(PGroup, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(MackeyError::NotNormal(
                "quotient by a non-normal subgroup".into(),
            ));
        }
        // label each element by the minimal element of its coset
        let mut rep = vec![usize::MAX; self.order];
        for x in 0..self.order {
            if rep[x] != usize::MAX {
                continue;
            }
            for &h in n.elements() {
                rep[self.mul(x, h)] = x;
            }
        }
        let mut gens: Vec<usize> = Vec::new();
        for &s in &self.generators {
            let r = rep[s];
            if r != 0 && !gens.contains(&r) {
                gens.push(r);
            }
        }
        let q = PGroup::generate(
            self.p,
            0usize,
            &gens,
            |&a, &b| rep[self.mul(a, b)],
            usize::MAX,
            &format!("{}/N", self.name),
        )?;
        // map coset label -> quotient index
        let mut label_to_q = HashMap::new();
        let mut cur = vec![0usize; q.order];
        label_to_q.insert(0usize, 0usize);
        for x in 1..q.order {
            let (prev, s) = q.parent(x).unwrap();
            cur[x] = rep[self.mul(cur[prev], gens[s])];
            label_to_q.insert(cur[x], x);
        }
        let proj = (0..self.order).map(|x| label_to_q[&rep[x]]).collect();
        Ok((q, proj))
    }

    /// Frattini subgroup `Φ = G^p [G, G]`.
    pub fn frattini(&self) -> Subgroup {
        let mut phi = self.trivial_subgroup();
        for x in 0..self.order {
            let y = self.pow(x, self.p() as u64);
            if !phi.contains(y) {
                phi = self.extend(&phi, y);
            }
        }
        for &a in &self.generators {
            for &b in &self.generators {
                let c = self.commutator(a, b);
                if !phi.contains(c) {
                    phi = self.extend(&phi, c);
                }
            }
        }
        self.normal_closure(&phi)
    }

    /// The elementary abelian quotient `G/Φ` with its logarithm.
    pub fn elab(&self) -> ElAb {
        ElAb::new(self)
    }

    /// Matrix of the transfer `G^{ab,el} -> U^{ab,el}` for `U ⊆ G`.
    pub fn verlagerung(&self, u: &Subgroup) -> Result<FpMatrix> {
        let reps = self.left_transversal(&self.whole(), u);
        self.verlagerung_with(u, &reps)
    }

    /// Transfer computed with a caller-chosen left transversal of `U` in `G`.
    pub fn verlagerung_with(&self, u: &Subgroup, reps: &[usize]) -> Result<FpMatrix> {
        let elab_g = self.elab();
        let (ug, embed) = self.subgroup_as_group(u);
        let elab_u = ug.elab();
        let mut to_u = vec![usize::MAX; self.order];
        for (i, &x) in embed.iter().enumerate() {
            to_u[x] = i;
        }
        if reps.len() * u.order() != self.order {
            return Err(MackeyError::NotSubgroup(
                "transversal has the wrong size".into(),
            ));
        }
        let coset_of = |x: usize| -> Option<usize> {
            reps.iter()
                .position(|&r| u.contains(self.mul(self.inv(r), x)))
        };
        let p = self.prime();
        let mut cols = Vec::with_capacity(elab_g.rank());
        for &g in elab_g.basis() {
            let mut acc = vec![0u32; elab_u.rank()];
            for &r in reps {
                let gr = self.mul(g, r);
                let j = coset_of(gr)
                    .ok_or_else(|| MackeyError::NotSubgroup("bad transversal".into()))?;
                let ui = self.mul(self.inv(reps[j]), gr);
                for (a, &b) in acc.iter_mut().zip(elab_u.log(to_u[ui])) {
                    *a = p.add(*a, b);
                }
            }
            cols.push(acc);
        }
        Ok(FpMatrix::from_columns(p, elab_u.rank(), &cols))
    }
}

/// Associativity on the table; with `full = false` uses Light's test on the
/// generators, which suffices when they generate.
fn check_associative(
    n: usize,
    m: impl Fn(usize, usize) -> usize,
    gens: &[usize],
    full: bool,
) -> Result<()> {
    let all: Vec<usize>;
    let mids: &[usize] = if full {
        all = (0..n).collect();
        &all
    } else {
        gens
    };
    for &s in mids {
        for x in 0..n {
            let xs = m(x, s);
            for y in 0..n {
                if m(xs, y) != m(x, m(s, y)) {
                    return Err(MackeyError::InvalidGroup(format!(
                        "associativity fails at ({x}, {s}, {y})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A short generating list for an element set that is known to be a subgroup.
fn minimal_gens(g: &PGroup, elems: &[usize]) -> Vec<usize> {
    let mut cur = g.trivial_subgroup();
    for &x in elems {
        if cur.order() == elems.len() {
            break;
        }
        if !cur.contains(x) {
            cur = g.extend(&cur, x);
        }
    }
    cur.gens().to_vec()
}

/// Shared handle used where many structures refer to one group.
pub type GroupRef = Arc<PGroup>;
