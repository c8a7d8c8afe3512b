mod report;
mod schema;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mackey_core::group::{PGroup, SubgroupKind, DEFAULT_SUBGROUP_CAP};
use mackey_core::homology::{corestriction, homology_dims, tate};
use mackey_core::mackey::{check, Cmf};
use mackey_core::resolution::Resolution;
use mackey_core::seco::{predicates, section_cohomology, six_term_check, terminal_socle_check};
use mackey_core::tower::{d1_report, direction_check, ends_classify, free_test, tower_validate};
use serde_json::{json, Map, Value};

use report::{write_atomic, Report};
use schema::Loader;

#[derive(Parser)]
#[command(
    name = "mackey-lab",
    version,
    about = "Cohomological Mackey functors over finite p-groups"
)]
struct Cli {
    /// Largest group order accepted.
    #[arg(long, global = true, default_value_t = 4096)]
    order_cap: usize,
    /// Largest homological degree computed.
    #[arg(long, global = true, default_value_t = 8)]
    degree_cap: usize,
    /// Axiom instances checked exhaustively before sampling.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    axiom_budget: usize,
    /// Seed for sampled axiom instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Order, generators and Frattini data of a group.
    GroupInfo { group: PathBuf },
    /// All subgroups, or only the normal ones.
    Subgroups {
        group: PathBuf,
        #[arg(long)]
        normal: bool,
    },
    /// Minimal projective resolution of a module.
    Resolve {
        module: PathBuf,
        /// Number of terms (defaults to the degree cap).
        #[arg(long)]
        length: Option<usize>,
    },
    /// dim H_k(G, M) for k = 0..=degree.
    Homology {
        module: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Corestriction H_d(G, M) -> H_d(U, M).
    Cores {
        module: PathBuf,
        /// Generators of U as comma-separated words, e.g. `g0,g1^2`.
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Tate cohomology in degrees -1 and 0.
    Tate { module: PathBuf },
    /// Builds a functor and reports its data.
    MackeyBuild { functor: PathBuf },
    /// Verifies the seven axioms.
    MackeyCheck { functor: PathBuf },
    /// Section cohomology and the six-term sequence on normal sections.
    Seco {
        functor: PathBuf,
        /// A single section `U,V` by member index.
        #[arg(long)]
        section: Option<String>,
    },
    /// Structural predicates of a functor.
    Predicates { functor: PathBuf },
    /// Checks the projections and reports orders and kernels.
    TowerValidate { tower: PathBuf },
    /// Transfer-injectivity test for freeness (last stage by default).
    FreeTest {
        tower: PathBuf,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Chain of transfers into the kernel subgroups.
    D1 {
        tower: PathBuf,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Number of F_p-ends from the finite stages.
    Ends {
        tower: PathBuf,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Checks a direction witness against the tower.
    Direction {
        tower: PathBuf,
        #[arg(long)]
        stage: Option<usize>,
    },
}

fn dir_of(path: &Path) -> PathBuf {
    if path == Path::new("-") {
        return PathBuf::from(".");
    }
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn word(g: &PGroup, x: usize) -> String {
    if x == 0 {
        return "1".into();
    }
    g.word(x)
        .iter()
        .map(|s| format!("g{s}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn rows(m: &mackey_core::FpMatrix) -> Value {
    json!(m.to_rows())
}

fn members_json(x: &Cmf) -> Value {
    let sys = x.system();
    let g = sys.group();
    json!(sys
        .members()
        .iter()
        .enumerate()
        .map(|(u, h)| json!({
            "index": u,
            "order": h.order(),
            "generators": h.gens().iter().map(|&s| word(g, s)).collect::<Vec<_>>(),
            "dim": x.dim(u),
        }))
        .collect::<Vec<_>>())
}

struct Ctx {
    cli_params: Map<String, Value>,
    loader: Loader,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<Value> {
        self.loader.read_json(path)
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let mut params = Map::new();
    params.insert("order_cap".into(), json!(cli.order_cap));
    params.insert("degree_cap".into(), json!(cli.degree_cap));
    params.insert("axiom_budget".into(), json!(cli.axiom_budget));
    params.insert("seed".into(), json!(cli.seed));
    let mut ctx = Ctx {
        cli_params: params,
        loader: Loader::new(cli.order_cap),
    };
    let mut findings = false;
    let (command, results) = match &cli.command {
        Command::GroupInfo { group } => {
            let v = ctx.load(group)?;
            let g = ctx.loader.group(&v, &dir_of(group), "group")?;
            let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
            for x in 0..g.order() {
                *orders.entry(g.element_order(x)).or_default() += 1;
            }
            let orders: Map<String, Value> = orders
                .into_iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            (
                "group-info",
                json!({
                    "name": g.name(),
                    "p": g.p(),
                    "order": g.order(),
                    "generators": g.generators().len(),
                    "abelian": g.is_abelian(),
                    "frattini_rank": g.elab().rank(),
                    "frattini_order": g.frattini().order(),
                    "element_orders": orders,
                }),
            )
        }
        Command::Subgroups { group, normal } => {
            let v = ctx.load(group)?;
            let g = ctx.loader.group(&v, &dir_of(group), "group")?;
            let kind = if *normal {
                SubgroupKind::Normal
            } else {
                SubgroupKind::All
            };
            let subs = g.subgroups(kind, DEFAULT_SUBGROUP_CAP)?;
            ctx.cli_params.insert("normal".into(), json!(normal));
            let list: Vec<Value> = subs
                .iter()
                .map(|h| {
                    json!({
                        "order": h.order(),
                        "generators": h.gens().iter().map(|&s| word(&g, s)).collect::<Vec<_>>(),
                        "normal": g.is_normal(h),
                    })
                })
                .collect();
            ("subgroups", json!({"count": list.len(), "subgroups": list}))
        }
        Command::Resolve { module, length } => {
            let v = ctx.load(module)?;
            let m = ctx.loader.module(&v, &dir_of(module), "module")?;
            let length = length.unwrap_or(cli.degree_cap);
            if length > cli.degree_cap {
                bail!("length {length} exceeds --degree-cap {}", cli.degree_cap);
            }
            ctx.cli_params.insert("length".into(), json!(length));
            let res = Resolution::minimal(&m, length)?;
            let chk = res.verify();
            findings = !chk.all_hold();
            (
                "resolve",
                json!({
                    "ranks": res.ranks(),
                    "length": res.length(),
                    "truncated": res.truncated(),
                    "checks": {
                        "augmentation_surjective": chk.augmentation_surjective,
                        "composites_zero": chk.composites_zero,
                        "exact": chk.exact,
                        "minimal": chk.minimal,
                    },
                }),
            )
        }
        Command::Homology { module, degree } => {
            let v = ctx.load(module)?;
            let m = ctx.loader.module(&v, &dir_of(module), "module")?;
            let k = degree.unwrap_or(cli.degree_cap);
            ctx.cli_params.insert("degree".into(), json!(k));
            let dims = homology_dims(&m, k, cli.degree_cap)?;
            ("homology", json!({"dims": dims}))
        }
        Command::Cores {
            module,
            subgroup,
            degree,
        } => {
            let v = ctx.load(module)?;
            let m = ctx.loader.module(&v, &dir_of(module), "module")?;
            let words = json!(subgroup
                .split(',')
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .collect::<Vec<_>>());
            let u = ctx.loader.subgroup(m.group(), &words, "--subgroup")?;
            ctx.cli_params.insert("subgroup".into(), words);
            ctx.cli_params.insert("degree".into(), json!(degree));
            let c = corestriction(&m, &u, *degree, cli.degree_cap)?;
            (
                "cores",
                json!({
                    "subgroup_order": u.order(),
                    "source_dim": c.source_dim,
                    "target_dim": c.target.dim(),
                    "matrix": rows(&c.matrix),
                    "injective": c.is_injective(),
                }),
            )
        }
        Command::Tate { module } => {
            let v = ctx.load(module)?;
            let m = ctx.loader.module(&v, &dir_of(module), "module")?;
            let t = tate(&m);
            (
                "tate",
                json!({"hm1": t.hm1.dim(), "h0": t.h0.dim(), "projective": m.is_projective()}),
            )
        }
        Command::MackeyBuild { functor } => {
            let v = ctx.load(functor)?;
            let base = dir_of(functor);
            let x = ctx.loader.functor(&v, &base, cli.degree_cap, "functor")?;
            let raw = v.as_object().context("functor: expected an object")?;
            let group = match raw.get("group").context("functor: missing field `group`")? {
                Value::String(rel) => ctx.loader.read_json(&base.join(rel))?,
                other => other.clone(),
            };
            let mut functor_json = json!({
                "schema": schema::SCHEMA,
                "group": group,
                "constructor": "data",
                "data": serde_json::to_value(x.to_data())?,
            });
            if let Some(s) = raw.get("system") {
                functor_json["system"] = s.clone();
            }
            (
                "mackey-build",
                json!({
                    "members": members_json(&x),
                    "flags": serde_json::to_value(x.system().flags())?,
                    "functor": functor_json,
                }),
            )
        }
        Command::MackeyCheck { functor } => {
            let v = ctx.load(functor)?;
            let x = ctx
                .loader
                .functor(&v, &dir_of(functor), cli.degree_cap, "functor")?;
            let r = check(&x, cli.axiom_budget, cli.seed);
            findings = !r.passed();
            (
                "mackey-check",
                json!({
                    "passed": r.passed(),
                    "exhaustive": r.all_exhaustive(),
                    "coverage": serde_json::to_value(&r.coverage)?,
                    "violations": serde_json::to_value(&r.violations)?,
                }),
            )
        }
        Command::Seco { functor, section } => {
            let v = ctx.load(functor)?;
            let x = ctx
                .loader
                .functor(&v, &dir_of(functor), cli.degree_cap, "functor")?;
            let sections = match section {
                Some(s) => {
                    ctx.cli_params.insert("section".into(), json!(s));
                    let (u, v) = s.split_once(',').context("--section expects `U,V`")?;
                    vec![(u.trim().parse()?, v.trim().parse()?)]
                }
                None => x.system().normal_sections(),
            };
            let mut out = Vec::new();
            for (u, v) in sections {
                let sc = section_cohomology(&x, u, v)?;
                let six = six_term_check(&x, u, v)?;
                findings |= !six.exact;
                out.push(json!({
                    "u": u,
                    "v": v,
                    "dims": serde_json::to_value(sc.dims())?,
                    "six_term": serde_json::to_value(&six)?,
                }));
            }
            (
                "seco",
                json!({"members": members_json(&x), "sections": out}),
            )
        }
        Command::Predicates { functor } => {
            let v = ctx.load(functor)?;
            let x = ctx
                .loader
                .functor(&v, &dir_of(functor), cli.degree_cap, "functor")?;
            let p = predicates(&x)?;
            findings = !p.coherent;
            let socle = if p.terminally_type_h0 == Some(true) {
                Some(terminal_socle_check(&x)?)
            } else {
                None
            };
            findings |= socle == Some(false);
            (
                "predicates",
                json!({"predicates": serde_json::to_value(&p)?, "terminal_socle": socle}),
            )
        }
        Command::TowerValidate { tower } => {
            let v = ctx.load(tower)?;
            let (t, _) = ctx.loader.tower(&v, &dir_of(tower), "tower")?;
            ("tower-validate", serde_json::to_value(tower_validate(&t)?)?)
        }
        Command::FreeTest { tower, stage }
        | Command::D1 { tower, stage }
        | Command::Ends { tower, stage }
        | Command::Direction { tower, stage } => {
            let v = ctx.load(tower)?;
            let (t, w) = ctx.loader.tower(&v, &dir_of(tower), "tower")?;
            let m = stage.unwrap_or(t.depth());
            ctx.cli_params.insert("stage".into(), json!(m));
            match &cli.command {
                Command::FreeTest { .. } => ("free-test", serde_json::to_value(free_test(&t, m)?)?),
                Command::D1 { .. } => ("d1", serde_json::to_value(d1_report(&t, m)?)?),
                Command::Ends { .. } => ("ends", serde_json::to_value(ends_classify(&t, m)?)?),
                _ => {
                    let w = w.context("tower: direction needs `tau` and `sigma`")?;
                    ("direction", serde_json::to_value(direction_check(&w, m)?)?)
                }
            }
        }
    };
    let mut inputs = ctx.loader.inputs;
    let mut seen = std::collections::HashSet::new();
    inputs.retain(|x| seen.insert(x.clone()));
    Ok(Report {
        command,
        inputs,
        params: ctx.cli_params,
        results,
        findings,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let text = report.render(cli.format == Format::Text);
    let written = match &cli.out {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if report.findings {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
