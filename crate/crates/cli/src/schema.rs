//! Parsing of the `mackey-lab/1` JSON inputs into validated core objects.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use mackey_core::group::{
    cyclic, dihedral, direct_product, elementary_abelian, quaternion, PGroup, Subgroup,
};
use mackey_core::mackey::{
    constant, h0_lower, h0_upper, h_lower, induced, Cmf, CmfData, ConstantKind, MackeySystem,
    SystemKind,
};
use mackey_core::module::FpGModule;
use mackey_core::tower::{DirectionWitness, Tower};
use mackey_core::{FpMatrix, Prime};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "mackey-lab/1";

/// Every file read while loading, with its SHA-256.
#[derive(Default)]
pub struct Loader {
    pub inputs: Vec<(String, String)>,
    pub order_cap: usize,
}

fn location(loc: &str, msg: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("{loc}: {msg}")
}

fn obj<'a>(v: &'a Value, loc: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| location(loc, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, loc: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| location(loc, format!("missing field `{key}`")))
}

fn uint(v: &Value, loc: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| location(loc, "expected a non-negative integer"))
}

fn uint_field(m: &Map<String, Value>, key: &str, loc: &str) -> Result<u64> {
    uint(field(m, key, loc)?, &format!("{loc}.{key}"))
}

fn check_schema(m: &Map<String, Value>, loc: &str) -> Result<()> {
    match m.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(location(
            loc,
            format!("unsupported schema {other}, expected \"{SCHEMA}\""),
        )),
    }
}

fn prime(v: u64, loc: &str) -> Result<Prime> {
    u32::try_from(v)
        .ok()
        .and_then(|p| Prime::new(p).ok())
        .ok_or_else(|| location(loc, format!("{v} is not a supported prime")))
}

impl Loader {
    pub fn new(order_cap: usize) -> Self {
        Loader {
            inputs: Vec::new(),
            order_cap,
        }
    }

    /// Reads a file (or stdin for `-`), records its hash and parses it.
    pub fn read_json(&mut self, path: &Path) -> Result<Value> {
        let bytes = if path == Path::new("-") {
            let mut buf = Vec::new();
            std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf).context("reading stdin")?;
            buf
        } else {
            std::fs::read(path).with_context(|| format!("reading {}", path.display()))?
        };
        self.inputs.push((
            path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        ));
        serde_json::from_slice(&bytes).with_context(|| format!("{}: invalid JSON", path.display()))
    }

    /// Follows a path reference relative to `base`, or returns the inline value.
    fn resolve(&mut self, v: &Value, base: &Path) -> Result<(Value, PathBuf)> {
        match v {
            Value::String(rel) => {
                let path = base.join(rel);
                let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
                Ok((self.read_json(&path)?, dir))
            }
            other => Ok((other.clone(), base.to_path_buf())),
        }
    }

    pub fn group(&mut self, v: &Value, base: &Path, loc: &str) -> Result<Arc<PGroup>> {
        let (v, base) = self.resolve(v, base)?;
        let g = self.group_inline(&v, &base, loc)?;
        if g.order() > self.order_cap {
            bail!(
                "{loc}: group order {} exceeds --order-cap {}",
                g.order(),
                self.order_cap
            );
        }
        Ok(Arc::new(g))
    }

    fn group_inline(&mut self, v: &Value, base: &Path, loc: &str) -> Result<PGroup> {
        let m = obj(v, loc)?;
        check_schema(m, loc)?;
        let kind = field(m, "kind", loc)?.as_str().unwrap_or("");
        match kind {
            "perm" => {
                let p = prime(uint_field(m, "p", loc)?, &format!("{loc}.p"))?;
                let degree = uint_field(m, "degree", loc)? as usize;
                let gens = field(m, "generators", loc)?
                    .as_array()
                    .ok_or_else(|| location(&format!("{loc}.generators"), "expected an array"))?;
                let perms = gens
                    .iter()
                    .enumerate()
                    .map(|(k, g)| {
                        let l = format!("{loc}.generators[{k}]");
                        g.as_array()
                            .ok_or_else(|| location(&l, "expected an array"))?
                            .iter()
                            .map(|x| uint(x, &l).map(|x| x as usize))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                PGroup::from_permutations(p, degree, &perms, self.order_cap)
                    .map_err(|e| location(loc, e))
            }
            "family" => {
                let family = field(m, "family", loc)?.as_str().unwrap_or("");
                let empty = Map::new();
                let params = match m.get("params") {
                    Some(v) => obj(v, &format!("{loc}.params"))?,
                    None => &empty,
                };
                let ploc = format!("{loc}.params");
                let p = || -> Result<Prime> {
                    match params.get("p") {
                        Some(v) => prime(uint(v, &format!("{ploc}.p"))?, &format!("{ploc}.p")),
                        None => prime(uint_field(m, "p", loc)?, &format!("{loc}.p")),
                    }
                };
                let k = |key: &str| -> Result<u32> { Ok(uint_field(params, key, &ploc)? as u32) };
                let built = |r: mackey_core::Result<PGroup>| r.map_err(|e| location(loc, e));
                match family {
                    "cyclic" => built(cyclic(p()?, k("k")?)),
                    "elem-abelian" => built(elementary_abelian(p()?, k("rank")? as usize)),
                    "dihedral" => built(dihedral(k("k")?)),
                    "quaternion" => built(quaternion(k("k")?)),
                    "product" => {
                        let factors = field(params, "factors", &ploc)?
                            .as_array()
                            .ok_or_else(|| {
                                location(&format!("{ploc}.factors"), "expected an array")
                            })?
                            .clone();
                        let mut acc: Option<PGroup> = None;
                        for (i, f) in factors.iter().enumerate() {
                            let g = self.group(f, base, &format!("{ploc}.factors[{i}]"))?;
                            acc = Some(match acc {
                                None => (*g).clone(),
                                Some(a) => {
                                    direct_product(&a, &g).map_err(|e| location(&ploc, e))?
                                }
                            });
                        }
                        acc.ok_or_else(|| location(&ploc, "a product needs at least one factor"))
                    }
                    other => bail!("{loc}.family: unknown family \"{other}\""),
                }
            }
            other => bail!("{loc}.kind: expected \"perm\" or \"family\", found \"{other}\""),
        }
    }

    pub fn module(&mut self, v: &Value, base: &Path, loc: &str) -> Result<FpGModule> {
        let (v, base) = self.resolve(v, base)?;
        let m = obj(&v, loc)?;
        check_schema(m, loc)?;
        let g = self.group(field(m, "group", loc)?, &base, &format!("{loc}.group"))?;
        match m.get("kind").and_then(Value::as_str).unwrap_or("explicit") {
            "trivial" => {
                let dim = m
                    .get("dim")
                    .map(|d| uint(d, &format!("{loc}.dim")))
                    .transpose()?
                    .unwrap_or(1);
                return Ok(FpGModule::trivial(g, dim as usize));
            }
            "regular" => return Ok(FpGModule::regular(g)),
            "permutation" => {
                let h =
                    self.subgroup(&g, field(m, "subgroup", loc)?, &format!("{loc}.subgroup"))?;
                return Ok(FpGModule::permutation(g, &h));
            }
            "explicit" => {}
            other => bail!("{loc}.kind: unknown module kind \"{other}\""),
        }
        let dim = uint_field(m, "dim", loc)? as usize;
        let action = obj(field(m, "action", loc)?, &format!("{loc}.action"))?;
        let p = g.prime();
        let mut mats = Vec::new();
        for i in 0..g.generators().len() {
            let key = format!("g{i}");
            let l = format!("{loc}.action.{key}");
            let rows = action
                .get(&key)
                .ok_or_else(|| location(&l, "missing action matrix"))?
                .as_array()
                .ok_or_else(|| location(&l, "expected a matrix"))?;
            let rows = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| location(&l, "expected rows of integers"))?
                        .iter()
                        .map(|x| {
                            let x = uint(x, &l)?;
                            if x >= p.get() as u64 {
                                bail!("{l}: entry {x} is not in [0, {p})");
                            }
                            Ok(x as u32)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if rows.len() != dim {
                bail!("{l}: expected {dim} rows, found {}", rows.len());
            }
            let mat = FpMatrix::from_rows(p, dim, &rows).map_err(|e| location(&l, e))?;
            if mat.rank() != dim {
                bail!("{l}: generator g{i} acts by a non-invertible matrix");
            }
            mats.push(mat);
        }
        if let Some(extra) = action.keys().find(|k| {
            k.strip_prefix('g')
                .and_then(|n| n.parse::<usize>().ok())
                .is_none_or(|n| n >= g.generators().len())
        }) {
            bail!("{loc}.action: unexpected key `{extra}`");
        }
        FpGModule::new(g, dim, mats).map_err(|e| location(loc, e))
    }

    /// A subgroup given by a list of words in the group generators.
    pub fn subgroup(&mut self, g: &PGroup, v: &Value, loc: &str) -> Result<Subgroup> {
        let words = v
            .as_array()
            .ok_or_else(|| location(loc, "expected an array of words"))?;
        let elems = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let l = format!("{loc}[{i}]");
                parse_word(
                    g,
                    w.as_str().ok_or_else(|| location(&l, "expected a word"))?,
                    &l,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(g.closure(&elems))
    }

    pub fn system(
        &mut self,
        g: Arc<PGroup>,
        v: Option<&Value>,
        loc: &str,
    ) -> Result<Arc<MackeySystem>> {
        let kind = match v {
            None => SystemKind::All,
            Some(Value::String(s)) if s == "all" => SystemKind::All,
            Some(Value::String(s)) if s == "normal" => SystemKind::Normal,
            Some(Value::Object(m)) => {
                let seeds = field(m, "closure", loc)?
                    .as_array()
                    .ok_or_else(|| location(loc, "`closure` must list subgroups"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| self.subgroup(&g, s, &format!("{loc}.closure[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                SystemKind::Closure(seeds)
            }
            Some(other) => bail!(
                "{loc}: expected \"all\", \"normal\" or {{\"closure\": [...]}}, found {other}"
            ),
        };
        MackeySystem::new(g, kind).map_err(|e| location(loc, e))
    }

    /// A functor description: a constructor applied to a group (and module),
    /// explicit data, or the `functor` field of a `mackey-build` report.
    pub fn functor(&mut self, v: &Value, base: &Path, degree_cap: usize, loc: &str) -> Result<Cmf> {
        let (v, base) = self.resolve(v, base)?;
        let m = obj(&v, loc)?;
        if let Some(f) = m.get("results").and_then(|r| r.get("functor")) {
            return self.functor(f, &base, degree_cap, &format!("{loc}.results.functor"));
        }
        check_schema(m, loc)?;
        let g = self.group(field(m, "group", loc)?, &base, &format!("{loc}.group"))?;
        let sys = self.system(g.clone(), m.get("system"), &format!("{loc}.system"))?;
        let constructor = field(m, "constructor", loc)?
            .as_str()
            .ok_or_else(|| location(&format!("{loc}.constructor"), "expected a string"))?;
        let fiber = m
            .get("fiber")
            .map(|f| uint(f, &format!("{loc}.fiber")))
            .transpose()?
            .unwrap_or(1) as usize;
        let module = |this: &mut Self| -> Result<FpGModule> {
            let q = this.module(field(m, "module", loc)?, &base, &format!("{loc}.module"))?;
            if **q.group() != *g {
                bail!("{loc}.module: module group differs from the functor group");
            }
            Ok(q)
        };
        let x = match constructor {
            "T" => constant(sys, fiber, ConstantKind::T),
            "Upsilon" => constant(sys, fiber, ConstantKind::Upsilon),
            "h0-upper" => h0_upper(&module(self)?, sys)?,
            "h0-lower" => h0_lower(&module(self)?, sys)?,
            "h-lower" => {
                let k = uint_field(m, "degree", loc)? as usize;
                h_lower(&module(self)?, k, sys, degree_cap)?
            }
            "induced-T" | "induced-Upsilon" => {
                let h =
                    self.subgroup(&g, field(m, "subgroup", loc)?, &format!("{loc}.subgroup"))?;
                let kind = if constructor == "induced-T" {
                    ConstantKind::T
                } else {
                    ConstantKind::Upsilon
                };
                induced(&h, kind, sys)?
            }
            "data" => {
                let data: CmfData = serde_json::from_value(field(m, "data", loc)?.clone())
                    .map_err(|e| location(&format!("{loc}.data"), e))?;
                Cmf::from_data(sys, &data).map_err(|e| location(&format!("{loc}.data"), e))?
            }
            other => bail!("{loc}.constructor: unknown constructor \"{other}\""),
        };
        let dual = m.get("dual").and_then(Value::as_bool).unwrap_or(false);
        Ok(if dual { x.dual() } else { x })
    }

    pub fn tower(
        &mut self,
        v: &Value,
        base: &Path,
        loc: &str,
    ) -> Result<(Tower, Option<DirectionWitness>)> {
        let (v, base) = self.resolve(v, base)?;
        let m = obj(&v, loc)?;
        check_schema(m, loc)?;
        if let Some(family) = m.get("family") {
            let t = self.tower_family(m, family, &base, loc)?;
            let identity = family.as_str() == Some("cyclic") && !m.contains_key("tau");
            let w = if identity {
                let tau: Vec<Vec<usize>> =
                    t.stages().iter().map(|g| g.generators().to_vec()).collect();
                let sigma: Vec<usize> = t.stages().iter().map(|g| g.generators()[0]).collect();
                Some(DirectionWitness::new(t.clone(), &tau, &sigma)?)
            } else {
                self.witness(&t, m, loc)?
            };
            return Ok((t, w));
        }
        let stages = field(m, "stages", loc)?
            .as_array()
            .ok_or_else(|| location(&format!("{loc}.stages"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, g)| self.group(g, &base, &format!("{loc}.stages[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let empty = Vec::new();
        let projections = match m.get("projections") {
            Some(v) => v
                .as_array()
                .ok_or_else(|| location(&format!("{loc}.projections"), "expected an array"))?,
            None => &empty,
        };
        if projections.len() + 1 != stages.len() {
            bail!(
                "{loc}.projections: {} stages need {} projections, found {}",
                stages.len(),
                stages.len().saturating_sub(1),
                projections.len()
            );
        }
        let mut images = Vec::new();
        for (k, proj) in projections.iter().enumerate() {
            let l = format!("{loc}.projections[{k}]");
            let pm = obj(proj, &l)?;
            let (src, dst) = (&stages[k + 1], &stages[k]);
            let mut imgs = Vec::new();
            for s in 0..src.generators().len() {
                let key = format!("g{s}");
                let w = field(pm, &key, &l)?
                    .as_str()
                    .ok_or_else(|| location(&format!("{l}.{key}"), "expected a word"))?;
                imgs.push(parse_word(dst, w, &format!("{l}.{key}"))?);
            }
            images.push(imgs);
        }
        let name = m.get("name").and_then(Value::as_str).unwrap_or("tower");
        let t = Tower::new(name, stages, &images).map_err(|e| location(loc, e))?;
        let w = self.witness(&t, m, loc)?;
        Ok((t, w))
    }

    fn tower_family(
        &mut self,
        m: &Map<String, Value>,
        family: &Value,
        base: &Path,
        loc: &str,
    ) -> Result<Tower> {
        let depth = uint_field(m, "depth", loc)? as usize;
        let p = || -> Result<Prime> { prime(uint_field(m, "p", loc)?, &format!("{loc}.p")) };
        let t = match family.as_str().unwrap_or("") {
            "cyclic" => Tower::cyclic(p()?, depth),
            "constant" => {
                let g = self.group(field(m, "group", loc)?, base, &format!("{loc}.group"))?;
                Tower::constant(g, depth)
            }
            "free" => Tower::free(p()?, uint_field(m, "rank", loc)? as usize, depth),
            "product" => {
                let factors = field(m, "factors", loc)?
                    .as_array()
                    .ok_or_else(|| location(&format!("{loc}.factors"), "expected an array"))?
                    .clone();
                let mut acc: Option<Tower> = None;
                for (i, f) in factors.iter().enumerate() {
                    let (t, _) = self.tower(f, base, &format!("{loc}.factors[{i}]"))?;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => Tower::product(&a, &t)?,
                    });
                }
                return acc.ok_or_else(|| location(loc, "a product needs at least one factor"));
            }
            other => bail!("{loc}.family: unknown tower family \"{other}\""),
        };
        t.map_err(|e| location(loc, e))
    }

    fn witness(
        &mut self,
        t: &Tower,
        m: &Map<String, Value>,
        loc: &str,
    ) -> Result<Option<DirectionWitness>> {
        let Some(tau) = m.get("tau") else {
            return Ok(None);
        };
        let tl = format!("{loc}.tau");
        let tau = tau
            .as_array()
            .ok_or_else(|| location(&tl, "expected an array"))?;
        let sigma = field(m, "sigma", loc)?
            .as_array()
            .ok_or_else(|| location(&format!("{loc}.sigma"), "expected an array"))?;
        if tau.len() != t.depth() || sigma.len() != t.depth() {
            bail!("{loc}: tau and sigma need one entry per stage");
        }
        let mut taus = Vec::new();
        let mut sigmas = Vec::new();
        for k in 1..=t.depth() {
            let g = t.stage(k);
            let c = cyclic(t.prime(), k as u32)?;
            let l = format!("{tl}[{}]", k - 1);
            let tm = obj(&tau[k - 1], &l)?;
            let mut imgs = Vec::new();
            for s in 0..g.generators().len() {
                let e = uint_field(tm, &format!("g{s}"), &l)?;
                let gen = c.generators().first().copied().unwrap_or(0);
                imgs.push(c.pow(gen, e));
            }
            taus.push(imgs);
            let sl = format!("{loc}.sigma[{}]", k - 1);
            let w = sigma[k - 1]
                .as_str()
                .ok_or_else(|| location(&sl, "expected a word"))?;
            sigmas.push(parse_word(g, w, &sl)?);
        }
        Ok(Some(
            DirectionWitness::new(t.clone(), &taus, &sigmas).map_err(|e| location(loc, e))?,
        ))
    }
}

/// Parses `g0 g1^-1 g0^3` (also `*`-separated; `1` or `e` is the identity).
pub fn parse_word(g: &PGroup, w: &str, loc: &str) -> Result<usize> {
    let mut acc = 0;
    for tok in w
        .split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
    {
        if tok == "1" || tok == "e" {
            continue;
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (
                b,
                e.parse::<i64>()
                    .map_err(|_| location(loc, format!("bad exponent in `{tok}`")))?,
            ),
            None => (tok, 1),
        };
        let idx: usize = base
            .strip_prefix('g')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| location(loc, format!("bad generator `{base}`")))?;
        let &s = g
            .generators()
            .get(idx)
            .ok_or_else(|| location(loc, format!("generator g{idx} does not exist")))?;
        let x = if exp < 0 { g.inv(s) } else { s };
        acc = g.mul(acc, g.pow(x, exp.unsigned_abs()));
    }
    Ok(acc)
}
