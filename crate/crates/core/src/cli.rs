//! The `gsplit` command line: parses an instance file, runs one operation
//! and reports a table, DOT files and a JSON record.
//!
//! Exit status is 0 for a definite result, 2 when the answer is
//! inconclusive at the chosen truncation, and 1 on error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::aisets::{
    self, almost_invariance_sample, coend_witness, corners, is_nontrivial, lattice_intersection_rank, thicken, AISet,
    Finiteness, Workspace, CORNER_NAMES, DEFAULT_WINDOW,
};
use crate::ccomplex::{BuildOptions, CComplex, OracleMode, MAX_DIM_CAP};
use crate::dot;
use crate::error::{Error, Result};
use crate::group::{Group, GroupSpec};
use crate::instance::InstanceSpec;
use crate::record::{Parameters, Record, Status, SCHEMA};
use crate::regnbhd::{
    self, split_pipeline, tree_action, verify_dunwoody, BipartiteTree, DunwoodyTree, FamilyOptions, PipelineOptions,
    Pretree, SplitVerdict, TranslateFamily,
};
use crate::stallings::{fiber_product, Malnormality};
use crate::subgroup::Subgroup;
use crate::verdict::Tri;

#[derive(Parser, Debug)]
#[command(name = "gsplit", version, about = "Splittings of groups from almost invariant sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Radius of the Cayley ball.
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    /// Translates `gX` are taken for `|g|` up to this radius.
    #[arg(long, global = true)]
    pub translate_radius: Option<usize>,
    /// Trailing radii inspected when classifying finiteness profiles.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Intersection oracle: exact or witness (also witness-bounded).
    #[arg(long, global = true)]
    pub mode: Option<OracleMode>,
    /// Largest simplex dimension built in the C-complex.
    #[arg(long, global = true)]
    pub dim_cap: Option<usize>,
    /// Seed for sampled checks; recorded in the output.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for `record.json` and DOT files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON record instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Search radius for edge stabilizer elements
    #[arg(long, global = true)]
    pub stabilizer_radius: Option<usize>,
    /// Radius of the C-complex built by `pipeline split`
    #[arg(long, global = true)]
    pub ccomplex_radius: Option<usize>,
    /// Run the pipeline even when `e(G) ≠ 1`.
    #[arg(long = "override", global = true)]
    pub override_hypotheses: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sphere and ball sizes of the Cayley graph.
    Ball {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
    },
    /// Stallings graphs: membership, intersections, malnormality, height.
    #[command(subcommand)]
    Subgroup(SubgroupCmd),
    /// The complex of cosets with infinite common conjugate intersections.
    #[command(subcommand)]
    Ccomplex(CcomplexCmd),
    /// Almost invariant sets: boundaries, profiles, corners, crossing.
    #[command(subcommand)]
    Aiset(AisetCmd),
    /// Translate families, pretrees and trees.
    #[command(subcommand)]
    Regnbhd(RegnbhdCmd),
    /// End-to-end splitting search.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Subcommand, Debug)]
pub enum SubgroupCmd {
    Fold {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
    },
    Member {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
        word: String,
    },
    Intersect {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
        k: String,
    },
    Malnormal {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
    },
    Height {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
        #[arg(long, default_value_t = 8)]
        max: usize,
    },
    Commensurable {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
        k: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CcomplexCmd {
    Build {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
    },
    Components {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum AisetCmd {
    Boundary {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
    },
    Profile {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
    },
    Nontrivial {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
    },
    Corners {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
        y: String,
    },
    Cross {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
        y: String,
    },
    Leq {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
        y: String,
    },
    /// Hypotheses and conclusion of the no-crossing lemma for a pair.
    Nocross {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        x: String,
        y: String,
        #[arg(long, default_value_t = 1)]
        thickening: usize,
    },
    /// Components of `Ball(R) − A` for `A` the thickened subgroup `H`.
    Coend {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        h: String,
        #[arg(long, default_value_t = 0)]
        width: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum RegnbhdCmd {
    Cccs {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        sets: Vec<String>,
    },
    Pretree {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        sets: Vec<String>,
    },
    Tree {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        sets: Vec<String>,
    },
    Dunwoody {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        sets: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PipelineCmd {
    Split {
        #[arg(value_name = "INSTANCE")]
        spec: PathBuf,
        sets: Vec<String>,
    },
}

impl Command {
    fn spec_path(&self) -> &Path {
        match self {
            Command::Ball { spec } => spec,
            Command::Subgroup(c) => match c {
                SubgroupCmd::Fold { spec, .. }
                | SubgroupCmd::Member { spec, .. }
                | SubgroupCmd::Intersect { spec, .. }
                | SubgroupCmd::Malnormal { spec, .. }
                | SubgroupCmd::Height { spec, .. }
                | SubgroupCmd::Commensurable { spec, .. } => spec,
            },
            Command::Ccomplex(CcomplexCmd::Build { spec, .. } | CcomplexCmd::Components { spec, .. }) => spec,
            Command::Aiset(c) => match c {
                AisetCmd::Boundary { spec, .. }
                | AisetCmd::Profile { spec, .. }
                | AisetCmd::Nontrivial { spec, .. }
                | AisetCmd::Corners { spec, .. }
                | AisetCmd::Cross { spec, .. }
                | AisetCmd::Leq { spec, .. }
                | AisetCmd::Nocross { spec, .. }
                | AisetCmd::Coend { spec, .. } => spec,
            },
            Command::Regnbhd(c) => match c {
                RegnbhdCmd::Cccs { spec, .. }
                | RegnbhdCmd::Pretree { spec, .. }
                | RegnbhdCmd::Tree { spec, .. }
                | RegnbhdCmd::Dunwoody { spec, .. } => spec,
            },
            Command::Pipeline(PipelineCmd::Split { spec, .. }) => spec,
        }
    }
}

/// What a command produced, before it is written out.
pub struct Outcome {
    pub result: Value,
    pub status: Status,
    pub table: String,
    pub dots: Vec<(String, String)>,
}

impl Outcome {
    fn new(result: Value, definite: Tri, table: String) -> Outcome {
        Outcome {
            result,
            status: if definite == Tri::Inconclusive {
                Status::InconclusiveAtTruncation
            } else {
                Status::Definite
            },
            table,
            dots: Vec::new(),
        }
    }
}

fn default_radius(spec: &GroupSpec) -> usize {
    match spec {
        GroupSpec::Free { .. } => 7,
        GroupSpec::FreeAbelian { .. } => 8,
        GroupSpec::Surface { .. } => 4,
    }
}

pub fn parameters(flags: &Flags, inst: &InstanceSpec) -> Result<Parameters> {
    let run = &inst.run;
    let group = Group::new(inst.group);
    let limit = inst.group.radius_limit();
    let radius = flags
        .radius
        .or(run.radius)
        .unwrap_or(default_radius(&inst.group).min(limit));
    let p = Parameters {
        radius,
        translate_radius: flags.translate_radius.or(run.translate_radius).unwrap_or(2),
        window: flags.window.or(run.window).unwrap_or(DEFAULT_WINDOW),
        dim_cap: flags.dim_cap.or(run.dim_cap).unwrap_or(2),
        mode: flags
            .mode
            .or(run.mode)
            .unwrap_or_else(|| OracleMode::default_for(&group)),
        seed: flags.seed.or(run.seed).unwrap_or(0),
        stabilizer_radius: flags.stabilizer_radius.or(run.stabilizer_radius).unwrap_or(3),
        ccomplex_radius: flags.ccomplex_radius.or(run.ccomplex_radius).unwrap_or(2),
        override_hypotheses: flags.override_hypotheses || run.override_hypotheses.unwrap_or(false),
    };
    for (what, r) in [
        ("radius", p.radius),
        ("translate radius", p.translate_radius),
        ("stabilizer radius", p.stabilizer_radius),
        ("C-complex radius", p.ccomplex_radius),
    ] {
        if r > limit {
            return Err(Error::size(format!("{what} {r} for {}", inst.group), limit));
        }
    }
    if p.dim_cap > MAX_DIM_CAP {
        return Err(Error::size("dimension cap", MAX_DIM_CAP));
    }
    Ok(p)
}

/// Runs the command line `args` (including the program name), writing the
/// report to `stdout` and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            let path = cli.command.spec_path().display();
            match &e {
                Error::Spec(errs) => {
                    for l in errs {
                        let _ = writeln!(stderr, "{path}:{}: {}", l.line, l.message);
                    }
                }
                other => {
                    let _ = writeln!(stderr, "error: {other}");
                }
            }
            1
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Status> {
    let path = cli.command.spec_path();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let inst = InstanceSpec::parse(&text)?;
    let params = parameters(&cli.flags, &inst)?;
    let group = inst.group();
    let (words, outcome) = dispatch(&cli.command, &inst, &group, &params)?;

    let mut artifacts = Vec::new();
    if let Some(dir) = &cli.flags.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        for (name, body) in &outcome.dots {
            let file = format!("{name}.dot");
            std::fs::write(dir.join(&file), body).map_err(|e| Error::Io(format!("{file}: {e}")))?;
            artifacts.push(file);
        }
    }
    let record = Record {
        schema: SCHEMA,
        command: words,
        group: inst.group.to_string(),
        parameters: params,
        instance: inst.clone(),
        status: outcome.status,
        result: outcome.result,
        artifacts,
    };
    let json = record.to_json();
    if let Some(dir) = &cli.flags.out {
        std::fs::write(dir.join("record.json"), &json).map_err(|e| Error::Io(format!("record.json: {e}")))?;
    }
    let shown = if cli.flags.json { json } else { outcome.table };
    stdout
        .write_all(shown.as_bytes())
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(outcome.status)
}

fn words(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn dispatch(cmd: &Command, inst: &InstanceSpec, group: &Group, p: &Parameters) -> Result<(Vec<String>, Outcome)> {
    Ok(match cmd {
        Command::Ball { .. } => (words(&["ball"]), ball(group, p)?),
        Command::Subgroup(c) => match c {
            SubgroupCmd::Fold { h, .. } => (words(&["subgroup", "fold", h]), fold(inst, group, h)?),
            SubgroupCmd::Member { h, word, .. } => {
                (words(&["subgroup", "member", h, word]), member(inst, group, h, word)?)
            }
            SubgroupCmd::Intersect { h, k, .. } => {
                (words(&["subgroup", "intersect", h, k]), intersect(inst, group, h, k)?)
            }
            SubgroupCmd::Malnormal { h, .. } => (words(&["subgroup", "malnormal", h]), malnormal(inst, group, h)?),
            SubgroupCmd::Height { h, max, .. } => (
                vec!["subgroup".into(), "height".into(), h.clone(), format!("--max={max}")],
                height(inst, group, h, *max)?,
            ),
            SubgroupCmd::Commensurable { h, k, .. } => (
                words(&["subgroup", "commensurable", h, k]),
                commensurable(inst, group, h, k)?,
            ),
        },
        Command::Ccomplex(c) => match c {
            CcomplexCmd::Build { h, .. } => (words(&["ccomplex", "build", h]), ccomplex(inst, group, h, p, false)?),
            CcomplexCmd::Components { h, .. } => (
                words(&["ccomplex", "components", h]),
                ccomplex(inst, group, h, p, true)?,
            ),
        },
        Command::Aiset(c) => match c {
            AisetCmd::Boundary { x, .. } => (words(&["aiset", "boundary", x]), boundary(inst, group, x, p)?),
            AisetCmd::Profile { x, .. } => (words(&["aiset", "profile", x]), profile(inst, group, x, p)?),
            AisetCmd::Nontrivial { x, .. } => (words(&["aiset", "nontrivial", x]), nontrivial(inst, group, x, p)?),
            AisetCmd::Corners { x, y, .. } => (
                words(&["aiset", "corners", x, y]),
                pair(inst, group, x, y, p, "corners")?,
            ),
            AisetCmd::Cross { x, y, .. } => (words(&["aiset", "cross", x, y]), pair(inst, group, x, y, p, "cross")?),
            AisetCmd::Leq { x, y, .. } => (words(&["aiset", "leq", x, y]), pair(inst, group, x, y, p, "leq")?),
            AisetCmd::Nocross { x, y, thickening, .. } => (
                vec![
                    "aiset".into(),
                    "nocross".into(),
                    x.clone(),
                    y.clone(),
                    format!("--thickening={thickening}"),
                ],
                nocross(inst, group, x, y, *thickening, p)?,
            ),
            AisetCmd::Coend { h, width, .. } => (
                vec!["aiset".into(), "coend".into(), h.clone(), format!("--width={width}")],
                coend(inst, group, h, *width, p)?,
            ),
        },
        Command::Regnbhd(c) => {
            let (name, sets) = match c {
                RegnbhdCmd::Cccs { sets, .. } => ("cccs", sets),
                RegnbhdCmd::Pretree { sets, .. } => ("pretree", sets),
                RegnbhdCmd::Tree { sets, .. } => ("tree", sets),
                RegnbhdCmd::Dunwoody { sets, .. } => ("dunwoody", sets),
            };
            let mut w = words(&["regnbhd", name]);
            w.extend(sets.iter().cloned());
            (w, family_command(inst, group, sets, p, name)?)
        }
        Command::Pipeline(PipelineCmd::Split { sets, .. }) => {
            let mut w = words(&["pipeline", "split"]);
            w.extend(sets.iter().cloned());
            (w, pipeline(inst, group, sets, p)?)
        }
    })
}

fn ball(group: &Group, p: &Parameters) -> Result<Outcome> {
    let b = group.ball(p.radius)?;
    let spheres = b.sphere_sizes();
    let mut table = format!("{:>3}  {:>10}  {:>10}\n", "r", "sphere", "ball");
    let mut total = 0;
    for (r, s) in spheres.iter().enumerate() {
        total += s;
        let _ = writeln!(table, "{r:>3}  {s:>10}  {total:>10}");
    }
    let result = json!({
        "radius": p.radius,
        "sphere_sizes": spheres,
        "ball_size": b.len(),
        "closed_form": group.spec().ball_size(p.radius).map(|n| n.to_string()),
        "ends": group.ends(),
    });
    Ok(Outcome::new(result, Tri::Yes, table))
}

fn free_graph<'a>(h: &'a Subgroup, op: &str) -> Result<&'a crate::stallings::SubgroupGraph> {
    h.stallings()
        .ok_or_else(|| Error::unsupported(op, h.group().spec().family_name()))
}

fn fold(inst: &InstanceSpec, group: &Group, name: &str) -> Result<Outcome> {
    let h = inst.subgroup(group, name)?;
    if let Some(l) = h.lattice() {
        let basis: Vec<String> = l
            .basis()
            .iter()
            .map(|v| group.format_element(&group.from_exponents(v)))
            .collect();
        let table = format!(
            "lattice basis: {}\nrank: {}\nindex: {}\n",
            basis.join(" "),
            l.rank(),
            fmt_opt(l.index())
        );
        let result = json!({ "basis": basis, "rank": l.rank(), "index": l.index().map(|i| i.to_string()) });
        return Ok(Outcome::new(result, Tri::Yes, table));
    }
    let g = free_graph(&h, "subgroup fold")?;
    let basis: Vec<String> = g.basis().iter().map(|w| w.to_string()).collect();
    let table = format!(
        "vertices: {}\nedges: {}\nrank: {}\nindex: {}\nbasis: {}\n",
        g.num_vertices(),
        g.num_edges(),
        g.subgroup_rank(),
        fmt_opt(g.index()),
        basis.join(" ")
    );
    let result = json!({
        "vertices": g.num_vertices(),
        "edges": g.edges().iter().map(|(u, l, v)| json!([u, l.to_char().to_string(), v])).collect::<Vec<_>>(),
        "rank": g.subgroup_rank(),
        "index": g.index(),
        "basis": basis,
    });
    let mut out = Outcome::new(result, Tri::Yes, table);
    out.dots
        .push((format!("stallings_{name}"), dot::subgroup_graph(name, g)));
    Ok(out)
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "infinite".into())
}

fn member(inst: &InstanceSpec, group: &Group, name: &str, word: &str) -> Result<Outcome> {
    let h = inst.subgroup(group, name)?;
    let w = group.parse_word(word)?;
    let v = h.contains(&w)?;
    let table = format!("{} in {}: {v}\n", group.format_element(&w), h.describe());
    Ok(Outcome::new(
        json!({ "word": group.format_element(&w), "member": v, "exact": h.is_exact() }),
        v,
        table,
    ))
}

fn intersect(inst: &InstanceSpec, group: &Group, hn: &str, kn: &str) -> Result<Outcome> {
    let h = inst.subgroup(group, hn)?;
    let k = inst.subgroup(group, kn)?;
    if let (Some(a), Some(b)) = (h.lattice(), k.lattice()) {
        let rank = lattice_intersection_rank(a, b);
        let table = format!("rank of {hn} ∩ {kn}: {rank}\n");
        return Ok(Outcome::new(json!({ "intersection_rank": rank }), Tri::Yes, table));
    }
    let r = fiber_product(
        free_graph(&h, "subgroup intersect")?,
        free_graph(&k, "subgroup intersect")?,
    )?;
    let basis: Vec<String> = r.intersection_basis.iter().map(|w| w.to_string()).collect();
    let mut table = format!(
        "{hn} ∩ {kn} basis: {}\n",
        if basis.is_empty() {
            "(trivial)".into()
        } else {
            basis.join(" ")
        }
    );
    for c in &r.components {
        let _ = writeln!(
            table,
            "component of {} vertices: infinite={} representative={}",
            c.vertices.len(),
            c.infinite,
            c.representative
                .as_ref()
                .map(|w| w.to_string())
                .unwrap_or_else(|| "1".into())
        );
    }
    let mut out = Outcome::new(to_value(&r), Tri::Yes, table);
    out.dots.push((
        format!("intersection_{hn}_{kn}"),
        dot::subgroup_graph("intersection", &r.intersection),
    ));
    Ok(out)
}

fn malnormal(inst: &InstanceSpec, group: &Group, name: &str) -> Result<Outcome> {
    let h = inst.subgroup(group, name)?;
    if let Some(l) = h.lattice() {
        // Conjugation is trivial: H^g ∩ H = H, so only finite or whole H qualify.
        let whole = l.index() == Some(1);
        let verdict = h.is_trivial() || whole;
        let witness = (!verdict).then(|| {
            group
                .alphabet()
                .into_iter()
                .map(crate::group::Word::letter)
                .find(|w| !l.contains(&group.exponent_vector(w)))
                .map(|w| group.format_element(&w))
        });
        let table = format!("{name} almost malnormal: {verdict}\n");
        return Ok(Outcome::new(
            json!({ "almost_malnormal": verdict, "witness": witness.flatten() }),
            Tri::Yes,
            table,
        ));
    }
    let g = free_graph(&h, "subgroup malnormal")?;
    let m = g.malnormality()?;
    let table = match &m {
        Malnormality::Malnormal => format!("{name} is malnormal\n"),
        Malnormality::NotMalnormal { witness } => format!("{name} is not malnormal; witness {witness}\n"),
    };
    let almost = matches!(m, Malnormality::Malnormal);
    Ok(Outcome::new(
        json!({ "almost_malnormal": almost, "malnormality": m }),
        Tri::Yes,
        table,
    ))
}

fn height(inst: &InstanceSpec, group: &Group, name: &str, max: usize) -> Result<Outcome> {
    let h = inst.subgroup(group, name)?;
    let g = free_graph(&h, "subgroup height")?;
    let v = g.height(max)?;
    let (definite, text) = match v {
        crate::stallings::Height::Exact(n) => (Tri::Yes, format!("height of {name}: {n}\n")),
        crate::stallings::Height::ExceededBound(n) => (Tri::Inconclusive, format!("height of {name} exceeds {n}\n")),
    };
    Ok(Outcome::new(json!({ "height": v }), definite, text))
}

fn commensurable(inst: &InstanceSpec, group: &Group, hn: &str, kn: &str) -> Result<Outcome> {
    let h = inst.subgroup(group, hn)?;
    let k = inst.subgroup(group, kn)?;
    let v = if let (Some(a), Some(b)) = (h.lattice(), k.lattice()) {
        let r = lattice_intersection_rank(a, b);
        r == a.rank() && r == b.rank()
    } else {
        free_graph(&h, "subgroup commensurable")?.commensurable(free_graph(&k, "subgroup commensurable")?)?
    };
    Ok(Outcome::new(
        json!({ "commensurable": v }),
        Tri::Yes,
        format!("{hn} and {kn} commensurable: {v}\n"),
    ))
}

fn ccomplex(inst: &InstanceSpec, group: &Group, name: &str, p: &Parameters, components: bool) -> Result<Outcome> {
    let h = inst.subgroup(group, name)?;
    let c = CComplex::build(
        &h,
        &BuildOptions {
            radius: p.ccomplex_radius,
            mode: p.mode,
            dim_cap: p.dim_cap,
            witness_radius: None,
        },
    )?;
    let comps = c.components();
    let definite = if c.undecided_pairs == 0 {
        Tri::Yes
    } else {
        Tri::Inconclusive
    };
    let mut table = format!(
        "C({}, {}) at radius {}: {} vertices, {} edges, {} undecided pairs\n",
        group.spec(),
        name,
        c.radius,
        c.num_vertices(),
        c.edges.len(),
        c.undecided_pairs
    );
    for (d, cells) in c.cells.iter().enumerate().skip(2) {
        let _ = writeln!(table, "{d}-cells: {}", cells.len());
    }
    let _ = writeln!(
        table,
        "components: {} (connected={}, totally_disconnected={})",
        comps.components.len(),
        comps.is_connected,
        comps.is_totally_disconnected
    );
    let result = if components {
        json!({
            "vertices": c.vertices.iter().map(|w| group.format_element(w)).collect::<Vec<_>>(),
            "undecided_pairs": c.undecided_pairs,
            "components": comps,
            "totally_disconnected": comps.is_totally_disconnected,
        })
    } else {
        to_value(&c)
    };
    let mut out = Outcome::new(result, definite, table);
    out.dots
        .push((format!("ccomplex_{name}"), dot::ccomplex(name, &c, group)));
    Ok(out)
}

fn workspace(group: &Group, p: &Parameters) -> Result<Workspace> {
    Workspace::new(group, p.radius, p.window)
}

fn class_name(c: &Finiteness) -> String {
    match c {
        Finiteness::HFinite { count } => format!("H-finite ({count})"),
        Finiteness::HInfiniteAtTruncation => "H-infinite".into(),
        Finiteness::Inconclusive => "inconclusive".into(),
    }
}

fn boundary(inst: &InstanceSpec, group: &Group, name: &str, p: &Parameters) -> Result<Outcome> {
    let x = inst.aiset(group, name)?;
    let ws = workspace(group, p)?;
    let b = x.boundary(&ws.ball)?;
    let h = x.stabilizer_subgroup()?;
    let prof = ws.profile(&b.set, &h)?;
    let table = format!(
        "boundary of {}: {} vertices ({} unknown at the rim); {} counts {:?}\n",
        x.label(),
        b.set.count_ones(..),
        b.rim_unknown.count_ones(..),
        class_name(&prof.class),
        prof.counts
    );
    let result = json!({
        "set": x.label(),
        "boundary_size": b.set.count_ones(..),
        "rim_unknown": b.rim_unknown.count_ones(..),
        "profile": prof,
    });
    Ok(Outcome::new(result, prof.is_finite(), table))
}

fn profile(inst: &InstanceSpec, group: &Group, name: &str, p: &Parameters) -> Result<Outcome> {
    let x = inst.aiset(group, name)?;
    let ws = workspace(group, p)?;
    let h = x.stabilizer_subgroup()?;
    let s = x.evaluate(&ws.ball);
    let mut c = s.clone();
    c.toggle_range(..);
    let px = ws.profile(&s, &h)?;
    let pc = ws.profile(&c, &h)?;
    let table = format!(
        "{}: {} {:?}\n{}: {} {:?}\n",
        x.label(),
        class_name(&px.class),
        px.counts,
        x.complement().label(),
        class_name(&pc.class),
        pc.counts
    );
    let definite = if px.is_finite().is_definite() && pc.is_finite().is_definite() {
        Tri::Yes
    } else {
        Tri::Inconclusive
    };
    Ok(Outcome::new(json!({ "set": px, "complement": pc }), definite, table))
}

fn nontrivial(inst: &InstanceSpec, group: &Group, name: &str, p: &Parameters) -> Result<Outcome> {
    let x = inst.aiset(group, name)?;
    let ws = workspace(group, p)?;
    let r = is_nontrivial(&x, &ws)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let pool = group.ball(2.min(p.radius))?;
    let candidates: Vec<_> = pool.words().iter().skip(1).cloned().collect();
    let samples: Vec<_> = candidates.choose_multiple(&mut rng, 3).cloned().collect();
    let sampled = almost_invariance_sample(&x, &samples, &ws)?;
    let mut table = format!(
        "{} nontrivial: {} (H-invariant on ball: {})\n",
        x.label(),
        r.nontrivial,
        r.invariant
    );
    for (g, pr) in samples.iter().zip(&sampled) {
        let _ = writeln!(table, "  X Δ X·{}: {}", group.format_element(g), class_name(&pr.class));
    }
    let result = json!({
        "report": r,
        "samples": samples.iter().map(|g| group.format_element(g)).collect::<Vec<_>>(),
        "sample_profiles": sampled,
    });
    Ok(Outcome::new(result, r.nontrivial, table))
}

fn pair(inst: &InstanceSpec, group: &Group, xn: &str, yn: &str, p: &Parameters, op: &str) -> Result<Outcome> {
    let x = inst.aiset(group, xn)?;
    let y = inst.aiset(group, yn)?;
    let ws = workspace(group, p)?;
    let q = corners(&x, &y, &ws)?;
    let mut table = String::new();
    for (i, name) in CORNER_NAMES.iter().enumerate() {
        let _ = writeln!(
            table,
            "{name:<8} size {:>6}  over {xn}: {:<14} over {yn}: {}",
            q.sizes[i],
            class_name(&q.profiles_x[i].class),
            class_name(&q.profiles_y[i].class)
        );
    }
    let (result, definite) = match op {
        "corners" => {
            let d = Tri::all(
                q.profiles_x
                    .iter()
                    .chain(&q.profiles_y)
                    .map(|p| Tri::from_bool(p.is_finite().is_definite())),
            );
            (to_value(&q), if d == Tri::Yes { Tri::Yes } else { Tri::Inconclusive })
        }
        "cross" => {
            let v = aisets::cross_verdict(&q);
            let _ = writeln!(
                table,
                "{yn} crosses {xn}: {}\n{xn} crosses {yn}: {}",
                v.crosses, v.crosses_reversed
            );
            let d = if v.crosses.is_definite() && v.crosses_reversed.is_definite() {
                Tri::Yes
            } else {
                Tri::Inconclusive
            };
            (json!({ "corners": q, "verdict": v }), d)
        }
        _ => {
            let (a, b, s) = (q.x_leq_y(), q.y_leq_x(), q.condition_star());
            let _ = writeln!(table, "{xn} <= {yn}: {a}\n{yn} <= {xn}: {b}\ncondition (*): {s}");
            let d = if a.is_definite() && b.is_definite() && s.is_definite() {
                Tri::Yes
            } else {
                Tri::Inconclusive
            };
            (
                json!({ "corners": q, "x_leq_y": a, "y_leq_x": b, "condition_star": s }),
                d,
            )
        }
    };
    Ok(Outcome::new(result, definite, table))
}

fn nocross(
    inst: &InstanceSpec,
    group: &Group,
    xn: &str,
    yn: &str,
    thickening: usize,
    p: &Parameters,
) -> Result<Outcome> {
    let x = inst.aiset(group, xn)?;
    let y = inst.aiset(group, yn)?;
    let ws = workspace(group, p)?;
    let r = aisets::nocross_report(&x, &y, &ws, thickening)?;
    let h = &r.hypotheses;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "hypotheses: e(G)={} e(H)={} e(K)={} H∩K finite: {} -> {}",
        h.ends_g,
        h.ends_h.map_or("?".to_string(), |e| e.to_string()),
        h.ends_k.map_or("?".to_string(), |e| e.to_string()),
        h.intersection_finite,
        h.all_hold
    );
    let _ = writeln!(
        text,
        "N{thickening}(∂{xn}) ∩ N{thickening}(∂{yn}): {} vertices, {}",
        r.boundary_neighbourhood_meet,
        class_name(&r.boundary_neighbourhood_profile.class)
    );
    let _ = writeln!(text, "corner boundary rule: {:?}", r.corner_boundary_rule);
    let _ = writeln!(text, "crosses: {}", r.crossing.crosses);
    let _ = writeln!(text, "finiteness mismatches: {:?}", r.finiteness_mismatches);
    let _ = writeln!(text, "consistent: {}", r.consistent);
    let definite = if r.consistent.is_definite() {
        Tri::Yes
    } else {
        Tri::Inconclusive
    };
    Ok(Outcome::new(to_value(&r), definite, text))
}

fn coend(inst: &InstanceSpec, group: &Group, name: &str, width: usize, p: &Parameters) -> Result<Outcome> {
    let h = inst.subgroup(group, name)?;
    let ws = workspace(group, p)?;
    let mut a = FixedBitSet::with_capacity(ws.ball.len());
    for (i, w) in ws.ball.words().iter().enumerate() {
        if h.contains(w)? == Tri::Yes {
            a.insert(i);
        }
    }
    let a = thicken(&a, &ws.ball, width);
    let r = coend_witness(&a, &h, &ws)?;
    let mut table = format!(
        "Ball({}) − A: {} components, {} H-infinite; witness: {}\n",
        p.radius,
        r.components.len(),
        r.h_infinite_components,
        r.witness
    );
    for c in &r.components {
        let _ = writeln!(table, "  size {:>6}: {}", c.size, class_name(&c.profile.class));
    }
    let definite = Tri::all(
        r.components
            .iter()
            .map(|c| Tri::from_bool(c.profile.is_finite().is_definite())),
    );
    let d = if definite == Tri::Yes {
        Tri::Yes
    } else {
        Tri::Inconclusive
    };
    Ok(Outcome::new(to_value(&r), d, table))
}

fn bases(inst: &InstanceSpec, group: &Group, sets: &[String]) -> Result<Vec<AISet>> {
    let names: Vec<String> = if sets.is_empty() {
        inst.aisets.iter().map(|a| a.name.clone()).collect()
    } else {
        sets.to_vec()
    };
    if names.is_empty() {
        return Err(Error::Precondition("the instance declares no aiset".into()));
    }
    names.iter().map(|n| inst.aiset(group, n)).collect()
}

fn family_options(p: &Parameters) -> FamilyOptions {
    FamilyOptions {
        translate_radius: p.translate_radius,
        radius: p.radius,
        window: p.window,
    }
}

fn family_command(inst: &InstanceSpec, group: &Group, sets: &[String], p: &Parameters, op: &str) -> Result<Outcome> {
    let bases = bases(inst, group, sets)?;
    let fam = TranslateFamily::build(&bases, family_options(p))?;
    let labels: Vec<String> = (0..fam.len()).map(|i| fam.member_label(i)).collect();
    let graph = fam.crossing_graph();
    let mut table = format!(
        "family: {} elements of Ē, {} crossing pairs, {} undecided\n",
        fam.len(),
        graph.edges.len(),
        graph.inconclusive.len()
    );
    let mut result = json!({ "members": labels, "crossing_graph": graph });
    let cccs = match graph.components() {
        Ok(c) => c,
        Err(e @ Error::Inconclusive(_)) => {
            let _ = writeln!(table, "{e}");
            return Ok(Outcome::new(result, Tri::Inconclusive, table));
        }
        Err(e) => return Err(e),
    };
    let _ = writeln!(table, "CCCs: {}", cccs.len());
    result["cccs"] = to_value(&cccs);
    let mut out_dots = Vec::new();
    let mut definite = Tri::Yes;
    if op != "cccs" {
        let pt = match Pretree::from_family(&fam, &cccs) {
            Ok(pt) => pt,
            Err(e @ (Error::Inconclusive(_) | Error::Precondition(_))) => {
                let _ = writeln!(table, "{e}");
                result["error"] = Value::String(e.to_string());
                return Ok(Outcome::new(result, Tri::Inconclusive, table));
            }
            Err(e) => return Err(e),
        };
        let rep = pt.verify();
        let _ = writeln!(
            table,
            "pretree on {} points: axioms {}",
            rep.points,
            if rep.ok { "pass" } else { "fail" }
        );
        result["pretree"] = to_value(&rep);
        if !rep.ok {
            return Ok(Outcome::new(result, Tri::Yes, table));
        }
        if op == "tree" {
            let bt = BipartiteTree::build(&pt)?;
            let act = tree_action(&fam, &cccs, &pt, &bt, p.stabilizer_radius)?;
            let _ = writeln!(
                table,
                "bipartite tree: {} + {} vertices, tree={}, point={}",
                bt.v0,
                bt.stars.len(),
                bt.is_tree(),
                bt.is_point
            );
            out_dots.push(("bipartite_tree".to_string(), dot::bipartite_tree("bipartite_tree", &bt)));
            result["bipartite_tree"] = to_value(&bt);
            result["action"] = to_value(&act);
        }
        if op == "dunwoody" {
            let larger = TranslateFamily::build(
                &bases,
                FamilyOptions {
                    translate_radius: p.translate_radius + 1,
                    radius: p.radius + 1,
                    window: p.window,
                },
            )?;
            let dw = verify_dunwoody(&fam, Some(&larger))?;
            let _ = writeln!(
                table,
                "D1 failures {}, D3 failures {}, D4 failures {}, max interval {}, D2 stable {}: {}",
                dw.d1_failures.len(),
                dw.d3_failures.len(),
                dw.d4_failures.len(),
                dw.d2_max_interval,
                dw.d2_stable,
                dw.passes
            );
            definite = if dw.passes.is_definite() {
                Tri::Yes
            } else {
                Tri::Inconclusive
            };
            if dw.passes == Tri::Yes {
                let tree = DunwoodyTree::build(&fam)?;
                let q = regnbhd::quotient(&fam, &tree, p.stabilizer_radius)?;
                let _ = writeln!(
                    table,
                    "edge tree: {} vertices, {} edges, line={}, path mismatches {}\nquotient: {} vertices, {} edges",
                    tree.vertices,
                    tree.edges.len(),
                    tree.is_line,
                    tree.path_mismatches.len(),
                    q.vertex_orbits,
                    q.edge_orbits
                );
                for s in &q.stabilizers {
                    let _ = writeln!(
                        table,
                        "  edge orbit {} stabilizer generators found: {{{}}}",
                        s.edge_orbit,
                        s.generators.join(", ")
                    );
                }
                out_dots.push((
                    "dunwoody_tree".into(),
                    dot::dunwoody_tree("dunwoody_tree", &tree, &labels),
                ));
                out_dots.push(("quotient".into(), dot::quotient("quotient", &q)));
                result["tree"] = to_value(&tree);
                result["quotient"] = to_value(&q);
            }
            result["dunwoody"] = to_value(&dw);
        }
    }
    let mut out = Outcome::new(result, definite, table);
    out.dots = out_dots;
    Ok(out)
}

fn pipeline(inst: &InstanceSpec, group: &Group, sets: &[String], p: &Parameters) -> Result<Outcome> {
    let bases = bases(inst, group, sets)?;
    let rec = split_pipeline(
        &bases,
        &PipelineOptions {
            family: family_options(p),
            ccomplex_radius: p.ccomplex_radius,
            mode: p.mode,
            stabilizer_radius: p.stabilizer_radius,
            override_hypotheses: p.override_hypotheses,
            frontier_check: true,
        },
    )?;
    let mut table = format!(
        "e(G) = {}{}\nC-complex: {} vertices, {} edges, {} components\nfamily: {} elements, {} crossing pairs, {} CCCs\n",
        rec.audit.ends_g,
        if rec.audit.overridden { " (overridden)" } else { "" },
        rec.ccomplex_vertices,
        rec.ccomplex_edges,
        rec.ccomplex_components,
        rec.family.members.len(),
        rec.family.crossing_edges.len(),
        rec.family.cccs.len()
    );
    for n in &rec.audit.notes {
        let _ = writeln!(table, "note: {n}");
    }
    let _ = writeln!(
        table,
        "cross-check: {} pairs, {} confirmed infinite, {} violations",
        rec.cross_check.pairs_checked,
        rec.cross_check.infinite_confirmed,
        rec.cross_check.violations.len()
    );
    let definite = match &rec.verdict {
        SplitVerdict::SplittingExhibited { edge_stabilizers } => {
            let gens: Vec<String> = edge_stabilizers.iter().map(|g| format!("<{}>", g.join(", "))).collect();
            let _ = writeln!(table, "verdict: splitting exhibited over {}", gens.join(", "));
            Tri::Yes
        }
        SplitVerdict::PointTree => {
            let _ = writeln!(table, "verdict: point tree");
            Tri::Yes
        }
        SplitVerdict::InconclusiveAtTruncation { reason } => {
            let _ = writeln!(table, "verdict: inconclusive at truncation ({reason})");
            Tri::Inconclusive
        }
    };
    let mut dots = Vec::new();
    if let Some(bt) = &rec.bipartite_tree {
        dots.push(("bipartite_tree".to_string(), dot::bipartite_tree("bipartite_tree", bt)));
    }
    if let Some(t) = &rec.dunwoody_tree {
        dots.push((
            "dunwoody_tree".to_string(),
            dot::dunwoody_tree("dunwoody_tree", t, &rec.family.members),
        ));
    }
    if let Some(q) = &rec.quotient {
        dots.push(("quotient".to_string(), dot::quotient("quotient", q)));
    }
    let mut out = Outcome::new(to_value(&rec), definite, table);
    out.dots = dots;
    Ok(out)
}
