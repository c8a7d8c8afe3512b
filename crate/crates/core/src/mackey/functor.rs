use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::system::MackeySystem;
use crate::error::{MackeyError, Result};
use crate::linalg::{FpMatrix, Prime};
use crate::module::FpGModule;

#[derive(Debug, Default)]
struct Caches {
    i: Mutex<HashMap<(usize, usize), Arc<FpMatrix>>>,
    t: Mutex<HashMap<(usize, usize), Arc<FpMatrix>>>,
    c: Mutex<HashMap<(usize, usize), Arc<FpMatrix>>>,
}

/// A cohomological Mackey functor with values in finite-dimensional
/// F_p-spaces.
///
/// Only the maps on covering pairs `U ⊃ V` (no member strictly between) and
/// the conjugations by group generators are stored. `i_{U,V}` and `t_{V,U}`
/// for general pairs are composed along the chain that always steps to the
/// first covering member containing `V`; `c_{g,U}` is composed along the
/// word of `g`.
#[derive(Debug)]
pub struct Cmf {
    system: Arc<MackeySystem>,
    p: Prime,
    dims: Vec<usize>,
    i_edges: BTreeMap<(usize, usize), FpMatrix>,
    t_edges: BTreeMap<(usize, usize), FpMatrix>,
    c_gens: Vec<Vec<FpMatrix>>,
    caches: Caches,
}

impl Clone for Cmf {
    fn clone(&self) -> Self {
        Cmf {
            system: self.system.clone(),
            p: self.p,
            dims: self.dims.clone(),
            i_edges: self.i_edges.clone(),
            t_edges: self.t_edges.clone(),
            c_gens: self.c_gens.clone(),
            caches: Caches::default(),
        }
    }
}

fn check_shape(m: &FpMatrix, p: Prime, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.prime() != p {
        return Err(MackeyError::ModulusMismatch(m.p(), p.get()));
    }
    if m.rows() != rows || m.cols() != cols {
        return Err(MackeyError::Shape(format!(
            "{what}: expected {rows}x{cols}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl Cmf {
    /// Builds a functor from its covering-edge and generator data.
    ///
    /// `i_fn(u, v)` is `i_{U,V}: X_U -> X_V` and `t_fn(u, v)` is
    /// `t_{V,U}: X_V -> X_U` for each covering pair `V ⊂ U`; `c_fn(s, u)` is
    /// `c_{g_s,U}: X_U -> X_{g_s U g_s⁻¹}` for the `s`-th generator `g_s`.
    pub fn from_fn(
        system: Arc<MackeySystem>,
        p: Prime,
        dims: Vec<usize>,
        mut i_fn: impl FnMut(usize, usize) -> Result<FpMatrix>,
        mut t_fn: impl FnMut(usize, usize) -> Result<FpMatrix>,
        mut c_fn: impl FnMut(usize, usize) -> Result<FpMatrix>,
    ) -> Result<Self> {
        if dims.len() != system.len() {
            return Err(MackeyError::Shape(format!(
                "{} dimensions for {} members",
                dims.len(),
                system.len()
            )));
        }
        let mut i_edges = BTreeMap::new();
        let mut t_edges = BTreeMap::new();
        for u in 0..system.len() {
            for &v in system.covers(u) {
                let i = i_fn(u, v)?;
                check_shape(&i, p, dims[v], dims[u], &format!("i edge {u}->{v}"))?;
                let t = t_fn(u, v)?;
                check_shape(&t, p, dims[u], dims[v], &format!("t edge {v}->{u}"))?;
                i_edges.insert((u, v), i);
                t_edges.insert((u, v), t);
            }
        }
        let ngens = system.group().generators().len();
        let mut c_gens = Vec::with_capacity(ngens);
        for s in 0..ngens {
            let g = system.group().generators()[s];
            let mut row = Vec::with_capacity(system.len());
            for u in 0..system.len() {
                let c = c_fn(s, u)?;
                let w = system.conj(g, u);
                check_shape(
                    &c,
                    p,
                    dims[w],
                    dims[u],
                    &format!("c map for generator {s} at {u}"),
                )?;
                row.push(c);
            }
            c_gens.push(row);
        }
        Ok(Cmf {
            system,
            p,
            dims,
            i_edges,
            t_edges,
            c_gens,
            caches: Caches::default(),
        })
    }

    /// The zero functor.
    pub fn zero(system: Arc<MackeySystem>) -> Self {
        let p = system.group().prime();
        let dims = vec![0; system.len()];
        let z = |_: usize, _: usize| Ok(FpMatrix::zeros(p, 0, 0));
        Self::from_fn(system, p, dims, z, z, z).expect("zero data")
    }

    pub fn system(&self) -> &Arc<MackeySystem> {
        &self.system
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, u: usize) -> usize {
        self.dims[u]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Stored `i` on the covering pair `(u, v)`.
    pub fn i_edge(&self, u: usize, v: usize) -> Option<&FpMatrix> {
        self.i_edges.get(&(u, v))
    }

    /// Stored `t_{V,U}` on the covering pair `(u, v)`.
    pub fn t_edge(&self, u: usize, v: usize) -> Option<&FpMatrix> {
        self.t_edges.get(&(u, v))
    }

    /// Stored `c` for the `s`-th generator at member `u`.
    pub fn c_gen(&self, s: usize, u: usize) -> &FpMatrix {
        &self.c_gens[s][u]
    }

    fn clear_caches(&mut self) {
        self.caches = Caches::default();
    }

    /// Replaces a stored `i` edge.
    pub fn set_i_edge(&mut self, u: usize, v: usize, m: FpMatrix) -> Result<()> {
        check_shape(&m, self.p, self.dims[v], self.dims[u], "i edge")?;
        let slot = self
            .i_edges
            .get_mut(&(u, v))
            .ok_or_else(|| MackeyError::Containment("not a covering pair".into()))?;
        *slot = m;
        self.clear_caches();
        Ok(())
    }

    /// Replaces a stored `t` edge.
    pub fn set_t_edge(&mut self, u: usize, v: usize, m: FpMatrix) -> Result<()> {
        check_shape(&m, self.p, self.dims[u], self.dims[v], "t edge")?;
        let slot = self
            .t_edges
            .get_mut(&(u, v))
            .ok_or_else(|| MackeyError::Containment("not a covering pair".into()))?;
        *slot = m;
        self.clear_caches();
        Ok(())
    }

    /// Replaces a stored generator conjugation.
    pub fn set_c_gen(&mut self, s: usize, u: usize, m: FpMatrix) -> Result<()> {
        let old = &self.c_gens[s][u];
        check_shape(&m, self.p, old.rows(), old.cols(), "c map")?;
        self.c_gens[s][u] = m;
        self.clear_caches();
        Ok(())
    }

    /// The first covering member of `u` that contains `v`.
    fn step(&self, u: usize, v: usize) -> usize {
        *self
            .system
            .covers(u)
            .iter()
            .find(|&&w| self.system.contains(w, v))
            .expect("a proper submember lies below some cover")
    }

    /// `i_{U,V}: X_U -> X_V` for `V ⊆ U`.
    pub fn i(&self, u: usize, v: usize) -> Arc<FpMatrix> {
        assert!(self.system.contains(u, v), "i needs V ⊆ U");
        if u == v {
            return Arc::new(FpMatrix::identity(self.p, self.dims[u]));
        }
        if let Some(m) = self.caches.i.lock().unwrap().get(&(u, v)) {
            return m.clone();
        }
        let w = self.step(u, v);
        let edge = &self.i_edges[&(u, w)];
        let m = Arc::new(if w == v {
            edge.clone()
        } else {
            self.i(w, v).mul(edge)
        });
        self.caches.i.lock().unwrap().insert((u, v), m.clone());
        m
    }

    /// `t_{V,U}: X_V -> X_U` for `V ⊆ U`.
    pub fn t(&self, v: usize, u: usize) -> Arc<FpMatrix> {
        assert!(self.system.contains(u, v), "t needs V ⊆ U");
        if u == v {
            return Arc::new(FpMatrix::identity(self.p, self.dims[u]));
        }
        if let Some(m) = self.caches.t.lock().unwrap().get(&(u, v)) {
            return m.clone();
        }
        let w = self.step(u, v);
        let edge = &self.t_edges[&(u, w)];
        let m = Arc::new(if w == v {
            edge.clone()
        } else {
            edge.mul(&self.t(v, w))
        });
        self.caches.t.lock().unwrap().insert((u, v), m.clone());
        m
    }

    /// `c_{g,U}: X_U -> X_{gUg⁻¹}`.
    pub fn c(&self, g: usize, u: usize) -> Arc<FpMatrix> {
        if g == 0 {
            return Arc::new(FpMatrix::identity(self.p, self.dims[u]));
        }
        if let Some(m) = self.caches.c.lock().unwrap().get(&(g, u)) {
            return m.clone();
        }
        let grp = self.system.group();
        let (prev, s) = grp.parent(g).expect("non-identity element");
        let su = self.system.conj(grp.generators()[s], u);
        let first = &self.c_gens[s][u];
        let m = Arc::new(if prev == 0 {
            first.clone()
        } else {
            self.c(prev, su).mul(first)
        });
        self.caches.c.lock().unwrap().insert((g, u), m.clone());
        m
    }

    /// `X_min` with `G` acting through the conjugation maps; the minimal member
    /// is terminal for the `i`-maps, so this is the colimit `ires(X)`.
    pub fn ires(&self) -> Result<FpGModule> {
        let b = self.system.bottom();
        let grp = self.system.group().clone();
        let action = (0..grp.generators().len())
            .map(|s| self.c_gens[s][b].clone())
            .collect();
        FpGModule::new(grp, self.dims[b], action)
    }

    /// `X_min` with the same action; the minimal member is initial for the
    /// `t`-maps, so this is the limit along `t` (equal to `ires` for a finite group).
    pub fn prorst(&self) -> Result<FpGModule> {
        self.ires()
    }

    /// `j_X = i_{G,min}: X_G -> ires(X)`.
    pub fn j_map(&self) -> Result<FpMatrix> {
        let top = self.system.top().ok_or_else(|| {
            MackeyError::PreconditionFailed("the system does not contain G".into())
        })?;
        Ok((*self.i(top, self.system.bottom())).clone())
    }

    /// The same functor over a subsystem (members given as a system on the
    /// same group whose members all lie in `self`'s system).
    pub fn restrict(&self, sub: Arc<MackeySystem>) -> Result<Self> {
        if !Arc::ptr_eq(sub.group(), self.system.group()) {
            return Err(MackeyError::Shape(
                "subsystem is over a different group".into(),
            ));
        }
        let map: Vec<usize> = sub
            .members()
            .iter()
            .map(|u| {
                self.system.index_of(u).ok_or_else(|| {
                    MackeyError::Containment("subsystem member not in the system".into())
                })
            })
            .collect::<Result<_>>()?;
        let dims = map.iter().map(|&u| self.dims[u]).collect();
        let gens = self.system.group().generators().to_vec();
        Self::from_fn(
            sub,
            self.p,
            dims,
            |u, v| Ok((*self.i(map[u], map[v])).clone()),
            |u, v| Ok((*self.t(map[v], map[u])).clone()),
            |s, u| Ok((*self.c(gens[s], map[u])).clone()),
        )
    }

    /// The Pontryagin dual: `i^∨_{U,V} = (t_{V,U})ᵀ`, `t^∨_{V,U} = (i_{U,V})ᵀ`,
    /// `c^∨_{g,U} = (c_{g⁻¹,gUg⁻¹})ᵀ`.
    pub fn dual(&self) -> Self {
        let sys = self.system.clone();
        let grp = sys.group().clone();
        Self::from_fn(
            sys.clone(),
            self.p,
            self.dims.clone(),
            |u, v| Ok(self.t_edges[&(u, v)].transpose()),
            |u, v| Ok(self.i_edges[&(u, v)].transpose()),
            |s, u| {
                let g = grp.generators()[s];
                Ok(self.c(grp.inv(g), sys.conj(g, u)).transpose())
            },
        )
        .expect("transposed data has matching shapes")
    }

    /// Componentwise direct sum.
    pub fn direct_sum(&self, other: &Cmf) -> Result<Self> {
        if !Arc::ptr_eq(&self.system, &other.system) {
            return Err(MackeyError::Shape("functors over different systems".into()));
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_fn(
            self.system.clone(),
            self.p,
            dims,
            |u, v| Ok(self.i_edges[&(u, v)].direct_sum(&other.i_edges[&(u, v)])),
            |u, v| Ok(self.t_edges[&(u, v)].direct_sum(&other.t_edges[&(u, v)])),
            |s, u| Ok(self.c_gens[s][u].direct_sum(&other.c_gens[s][u])),
        )
    }

    /// Serializable snapshot of the stored data.
    pub fn to_data(&self) -> CmfData {
        let mat = |m: &FpMatrix| m.to_rows();
        CmfData {
            p: self.p.get(),
            members: self
                .system
                .members()
                .iter()
                .map(|u| u.elements().to_vec())
                .collect(),
            dims: self.dims.clone(),
            i_edges: self
                .i_edges
                .iter()
                .map(|(&(upper, lower), m)| EdgeData {
                    upper,
                    lower,
                    matrix: mat(m),
                })
                .collect(),
            t_edges: self
                .t_edges
                .iter()
                .map(|(&(upper, lower), m)| EdgeData {
                    upper,
                    lower,
                    matrix: mat(m),
                })
                .collect(),
            c_generators: self
                .c_gens
                .iter()
                .map(|row| row.iter().map(mat).collect())
                .collect(),
        }
    }

    /// Rebuilds a functor from a snapshot over the given system.
    pub fn from_data(system: Arc<MackeySystem>, data: &CmfData) -> Result<Self> {
        let p = system.group().prime();
        if data.p != p.get() {
            return Err(MackeyError::ModulusMismatch(data.p, p.get()));
        }
        if data.members.len() != system.len() {
            return Err(MackeyError::Shape(
                "member list does not match the system".into(),
            ));
        }
        for (u, elems) in data.members.iter().enumerate() {
            if system.member(u).elements() != elems.as_slice() {
                return Err(MackeyError::Shape(format!(
                    "member {u} does not match the system"
                )));
            }
        }
        let edges = |list: &[EdgeData],
                     which: &str,
                     upper_dim: bool|
         -> Result<HashMap<(usize, usize), FpMatrix>> {
            let mut out = HashMap::new();
            for e in list {
                if e.upper >= data.dims.len() || e.lower >= data.dims.len() {
                    return Err(MackeyError::Shape(format!(
                        "{which} edge index out of range"
                    )));
                }
                let cols = if upper_dim {
                    data.dims[e.upper]
                } else {
                    data.dims[e.lower]
                };
                out.insert((e.upper, e.lower), matrix_from(p, cols, &e.matrix)?);
            }
            Ok(out)
        };
        let mut i_map = edges(&data.i_edges, "i", true)?;
        let mut t_map = edges(&data.t_edges, "t", false)?;
        let missing = |what: &str, u: usize, v: usize| {
            MackeyError::Shape(format!("missing {what} edge ({u}, {v})"))
        };
        let grp = system.group().clone();
        let c_data = &data.c_generators;
        if c_data.len() != grp.generators().len()
            || c_data.iter().any(|row| row.len() != system.len())
        {
            return Err(MackeyError::Shape(
                "conjugation data does not match generators and members".into(),
            ));
        }
        Self::from_fn(
            system,
            p,
            data.dims.clone(),
            |u, v| i_map.remove(&(u, v)).ok_or_else(|| missing("i", u, v)),
            |u, v| t_map.remove(&(u, v)).ok_or_else(|| missing("t", u, v)),
            |s, u| matrix_from(p, data.dims[u], &c_data[s][u]),
        )
    }
}

fn matrix_from(p: Prime, cols: usize, rows: &[Vec<u32>]) -> Result<FpMatrix> {
    if rows.iter().any(|r| r.iter().any(|&x| x >= p.get())) {
        return Err(MackeyError::Shape(
            "matrix entries must lie in [0, p)".into(),
        ));
    }
    FpMatrix::from_rows(p, cols, rows)
}

/// A stored covering-edge matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeData {
    pub upper: usize,
    pub lower: usize,
    pub matrix: Vec<Vec<u32>>,
}

/// The stored data of a functor, in system member order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmfData {
    pub p: u32,
    pub members: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    pub i_edges: Vec<EdgeData>,
    pub t_edges: Vec<EdgeData>,
    pub c_generators: Vec<Vec<Vec<Vec<u32>>>>,
}
