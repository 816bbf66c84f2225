//! Command-line front end. Every subcommand runs one library operation and
//! prints its result; JSON unless the payload is a word, a graph or an image.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abelian::{
    abelian_asymptotic_eq, basis_acts_nontrivially, digit_automaton, is_finite_state, render_tile, DigitSystem,
    RationalMatrix, TileImage,
};
use crate::catalog::{self, describe_fact, EntryData};
use crate::contraction::{
    asymptotically_equivalent, contraction_estimate, is_contracting, nucleus, open_set_condition, tile_graph,
    Contracting, DEFAULT_NUCLEUS_CAP,
};
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupDef, Order};
use crate::invsemi::{fibonacci_successor, involution_check, OmegaTransform};
use crate::schreier::{ball_growth, covering_check, generator_set, level_schreier, orbit_ball, LabeledGraph};
use crate::spectra::{eigenvalues_sym, fg_detq_check, fg_spectrum_closed, hecke_matrix, img_phi_recursion_check};
use crate::words::{Alphabet, LeftWord, OmegaWord};

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Automata groups, self-similar actions and their invariants")]
pub struct Cli {
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Bound on searches: nucleus size, element order, automaton states.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Largest tree level any subcommand may expand.
    #[arg(long, global = true, default_value_t = 20)]
    pub max_level: usize,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Csv,
    Pgm,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArg {
    /// `catalog:NAME` or a group file (.ssg).
    #[arg(long)]
    pub group: String,
}

#[derive(Args, Debug, Clone)]
pub struct ElementArg {
    /// Group word, e.g. "ab'a", "(ad)^4", "[a,b]".
    #[arg(long, visible_alias = "word")]
    pub element: String,
}

#[derive(Args, Debug, Clone)]
pub struct GensArg {
    /// Comma-separated generator names (default: all).
    #[arg(long, value_delimiter = ',')]
    pub gens: Option<Vec<String>>,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArg {
    /// `catalog:NAME` or a digit-system file (.ds.json).
    #[arg(long)]
    pub system: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// act: image of a finite or eventually periodic word, (xw)^g = x^g w^{g|_x}.
    Act {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        element: ElementArg,
        /// Word over 0..d-1; `PRE(PERIOD)` for an infinite word.
        #[arg(long)]
        word_input: String,
    },
    /// restriction: the section g|_v of an element at a vertex.
    Restrict {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long)]
        vertex: String,
    },
    /// is_trivial: word problem via the minimized element automaton.
    IsTrivial {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        element: ElementArg,
    },
    /// order: least k <= cap with g^k = 1.
    Order {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        element: ElementArg,
    },
    /// portrait: root permutations of all sections down to a depth.
    Portrait {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long)]
        depth: usize,
    },
    /// level_quotient_order: |G / St_G(n)| by Schreier-Sims on X^n.
    LevelOrder {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        level: usize,
    },
    /// hausdorff_estimate: log_d |G/St_G(n)| / (d^n - 1) / ... as an exact or float value.
    Hausdorff {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        level: usize,
    },
    /// verify_substitution_relators: sigma^i(r) = 1 for all relators r and i <= iterations.
    VerifyRelators {
        #[command(flatten)]
        group: GroupArg,
        /// Relators separated by ';'.
        #[arg(long)]
        relators: String,
        /// Substitution `x=word` rules separated by ';'.
        #[arg(long, default_value = "")]
        subst: String,
        #[arg(long, default_value_t = 0)]
        iterations: usize,
    },
    /// nucleus: least set containing all deep enough sections (json, dot or text DSL).
    Nucleus {
        #[command(flatten)]
        group: GroupArg,
    },
    /// is_contracting, plus contraction_estimate when --depth is given.
    Contracting {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        word_len: usize,
    },
    /// open_set_condition: every nucleus element has a trivial section.
    Osc {
        #[command(flatten)]
        group: GroupArg,
    },
    /// asymptotically_equivalent: glue relation on left-infinite words `(TAIL)SUFFIX`.
    Equiv {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// tile_graph: adjacency of level-n tiles through the nucleus.
    TileGraph {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        level: usize,
    },
    /// level_schreier: Schreier graph on X^n (dot, csv or json).
    Schreier {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        level: usize,
        /// Undirected view without loops and multiple edges.
        #[arg(long)]
        simplicial: bool,
    },
    /// orbit_ball: ball of an orbit Schreier graph around an infinite word.
    OrbitBall {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        basepoint: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        simplicial: bool,
    },
    /// ball_growth: |B(v, r)| for r = 0..radius in the orbit graph of a point.
    Growth {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        basepoint: String,
        #[arg(long)]
        radius: usize,
    },
    /// covering_check: dropping the last letter maps Gamma_{n+1} onto Gamma_n.
    CoverCheck {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        level: usize,
    },
    /// hecke_matrix + eigenvalues_sym: spectrum of the level-n Hecke operator.
    Spectrum {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        gens: GensArg,
        #[arg(long)]
        level: usize,
        /// Sum of the generator matrices instead of their average.
        #[arg(long)]
        unnormalized: bool,
    },
    /// fg_spectrum_closed: Fabrykowski-Gupta level spectrum from the F(θ) recursion.
    FgClosed {
        #[arg(long)]
        level: usize,
    },
    /// fg_detq_check: det Q_n against its recursion at sampled points.
    DetqCheck {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// img_phi_recursion_check: Φ_{k+1} against its recursion at sampled points.
    PhiCheck {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// digit_automaton: automaton of a vector g in a digit system.
    DigitAutomaton {
        #[command(flatten)]
        system: SystemArg,
        /// Comma-separated integer vector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vector: Vec<i64>,
    },
    /// is_finite_state: spectral radius of A below one.
    FiniteState {
        /// `catalog:NAME` or .ds.json file; alternatively use --matrix.
        #[arg(long, conflicts_with = "matrix")]
        system: Option<String>,
        /// Rows separated by ';', entries by ',', e.g. "1/2,-1/2;1/2,1/2".
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// render_tile: fraction set as a PGM raster (2D) or an interval (1D).
    TileRender {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Write the image here instead of standard output.
        #[arg(long)]
        output: Option<String>,
    },
    /// abelian_asymptotic_eq: integrality of the difference of two fraction series.
    AbelianEquiv {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Rule-table transformations of subshifts.
    #[command(subcommand)]
    Semigroup(SemigroupCommand),
    /// Built-in groups, digit systems and rule tables.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand, Debug)]
pub enum SemigroupCommand {
    /// apply_map: image of an eventually periodic word under a named map.
    Apply {
        /// catalog:fibonacci, catalog:penrose or catalog:apollonian.
        #[arg(long)]
        table: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        word: String,
    },
    /// fibonacci_successor: m + 1 through the Fibonacci maps a + b.
    Successor {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 32)]
        length: usize,
    },
    /// involution_check: map applied twice is the identity up to a depth.
    Involution {
        #[arg(long)]
        table: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// lookup over all names.
    List,
    /// lookup: one entry in its DSL / JSON / rule format.
    Show { name: String },
}

/// Runs the command line, writing results to `out` and errors to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(Output::Text(s)) => {
            let _ = writeln!(out, "{s}");
            0
        }
        Ok(Output::Json(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
            0
        }
        Ok(Output::Bytes(b)) => {
            let _ = out.write_all(&b);
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub enum Output {
    Text(String),
    Json(Value),
    Bytes(Vec<u8>),
}

fn load_group(source: &str, cli: &Cli) -> Result<Group> {
    let def = match source.strip_prefix("catalog:") {
        Some(name) => catalog::lookup(name)?.group_def()?.clone(),
        None => GroupDef::parse(&read(source)?)?,
    };
    if cli.cap.is_some_and(|c| c == 0) {
        return Err(Error::InvalidArgument("--cap must be positive".into()));
    }
    Group::new(def)
}

fn load_system(source: &str) -> Result<DigitSystem> {
    match source.strip_prefix("catalog:") {
        Some(name) => Ok(catalog::lookup(name)?.digit_system()?.clone()),
        None => DigitSystem::from_json(&read(source)?),
    }
}

fn load_table(source: &str) -> Result<Box<dyn OmegaTransform>> {
    let name = source
        .strip_prefix("catalog:")
        .ok_or_else(|| Error::InvalidArgument(format!("rule tables come from the catalog, got {source:?}")))?;
    match catalog::lookup(name)?.data {
        EntryData::Rules(t) => Ok(Box::new(t)),
        EntryData::Apollonian(a) => Ok(Box::new(a)),
        _ => Err(Error::InvalidArgument(format!("{name} is not a rule table"))),
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))
}

fn check_level(level: usize, cli: &Cli) -> Result<()> {
    if level > cli.max_level {
        return Err(Error::InvalidArgument(format!("level {level} exceeds --max-level {}", cli.max_level)));
    }
    Ok(())
}

/// Vertex budget implied by `--max-level` for a degree-`d` tree.
fn max_points(group: &Group, cli: &Cli) -> usize {
    (group.degree() as u128).saturating_pow(cli.max_level as u32).min(1 << 24) as usize
}

fn gens_of(group: &Group, arg: &GensArg) -> Result<Vec<(String, Element)>> {
    match &arg.gens {
        None => generator_set(group, None),
        Some(names) => {
            let idx = names
                .iter()
                .map(|n| group.def().generator_index(n).ok_or_else(|| Error::UnknownGenerator(n.clone())))
                .collect::<Result<Vec<_>>>()?;
            generator_set(group, Some(&idx))
        }
    }
}

fn graph_output(g: &LabeledGraph, simplicial: bool, format: Option<Format>) -> Result<Output> {
    Ok(match format.unwrap_or(Format::Dot) {
        Format::Dot => Output::Text(g.to_dot(simplicial).trim_end().to_string()),
        Format::Csv => Output::Text(g.to_csv().trim_end().to_string()),
        Format::Json => {
            let edges: Vec<Value> = if simplicial {
                g.simplicial().edges().into_iter().map(|(u, v)| json!([u, v])).collect()
            } else {
                g.edges().iter().map(|(u, v, l)| json!([u, v, l])).collect()
            };
            Output::Json(json!({ "vertices": g.names(), "edges": edges }))
        }
        f => return Err(Error::InvalidArgument(format!("format {f:?} is not available for graphs"))),
    })
}

fn parse_matrix(text: &str) -> Result<RationalMatrix> {
    let rows: Vec<Vec<String>> =
        text.split(';').map(|r| r.split(',').map(|x| x.trim().to_string()).collect()).collect();
    RationalMatrix::parse(&rows)
}

fn execute(cli: &Cli) -> Result<Output> {
    let cap = cli.cap;
    match &cli.command {
        Command::Act { group, element, word_input } => {
            let g = load_group(&group.group, cli)?;
            let e = g.parse_element(&element.element)?;
            let alphabet = Alphabet::new(g.degree())?;
            if word_input.contains('(') {
                let w = alphabet.parse_omega(word_input)?;
                Ok(Output::Text(alphabet.render_omega(&g.act_omega(&e, &w)?)))
            } else {
                let w = alphabet.parse_word(word_input)?;
                Ok(Output::Text(alphabet.render(&g.act(&e, &w)?)))
            }
        }
        Command::Restrict { group, element, vertex } => {
            let g = load_group(&group.group, cli)?;
            let e = g.parse_element(&element.element)?;
            let v = Alphabet::new(g.degree())?.parse_word(vertex)?;
            Ok(Output::Text(g.render(&g.restriction(&e, &v)?)))
        }
        Command::IsTrivial { group, element } => {
            let g = load_group(&group.group, cli)?;
            Ok(Output::Text(g.is_trivial(&g.parse_element(&element.element)?).to_string()))
        }
        Command::Order { group, element } => {
            let g = load_group(&group.group, cli)?;
            let cap = cap.unwrap_or(1 << 12) as u64;
            Ok(Output::Json(match g.order(&g.parse_element(&element.element)?, cap) {
                Order::Finite(k) => json!({ "element": element.element, "order": k, "cap": cap }),
                Order::Unbounded(c) => json!({ "element": element.element, "order": null, "unbounded_up_to": c }),
            }))
        }
        Command::Portrait { group, element, depth } => {
            check_level(*depth, cli)?;
            let g = load_group(&group.group, cli)?;
            let p = g.portrait(&g.parse_element(&element.element)?, *depth, max_points(&g, cli))?;
            let a = Alphabet::new(g.degree())?;
            let labels: serde_json::Map<String, Value> = p
                .labels()
                .iter()
                .filter(|(_, perm)| !perm.is_identity())
                .map(|(v, perm)| (a.render(v), json!(perm.to_string())))
                .collect();
            Ok(Output::Json(json!({ "element": element.element, "depth": depth, "nontrivial_labels": labels })))
        }
        Command::LevelOrder { group, level } => {
            check_level(*level, cli)?;
            let g = load_group(&group.group, cli)?;
            let order = g.level_quotient_order(*level, max_points(&g, cli))?;
            let log2 = (order.count_ones() == 1).then(|| order.bits() - 1);
            Ok(Output::Json(json!({ "level": level, "order": order.to_string(), "log2": log2 })))
        }
        Command::Hausdorff { group, level } => {
            check_level(*level, cli)?;
            let g = load_group(&group.group, cli)?;
            let h = g.hausdorff_estimate(*level, max_points(&g, cli))?;
            Ok(Output::Json(json!({ "level": level, "value": h.to_string(), "float": h.to_f64() })))
        }
        Command::VerifyRelators { group, relators, subst, iterations } => {
            let g = load_group(&group.group, cli)?;
            let rel = relators
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|r| g.parse_element(r))
                .collect::<Result<Vec<_>>>()?;
            let mut rules = Vec::new();
            for rule in subst.split(';').filter(|s| !s.trim().is_empty()) {
                let (x, w) = rule
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("substitution {rule:?} is not x=word")))?;
                let i = g.def().generator_index(x.trim()).ok_or_else(|| Error::UnknownGenerator(x.trim().into()))?;
                rules.push((i, g.parse_element(w)?));
            }
            let holds = g.verify_substitution_relators(&rel, &rules, *iterations)?;
            Ok(Output::Json(json!({ "relators": rel.len(), "iterations": iterations, "holds": holds })))
        }
        Command::Nucleus { group } => {
            let g = load_group(&group.group, cli)?;
            let n = nucleus(&g, cap.unwrap_or(DEFAULT_NUCLEUS_CAP))?;
            Ok(match cli.format.unwrap_or(Format::Json) {
                Format::Dot => Output::Text(n.to_dot().trim_end().to_string()),
                Format::Text => Output::Text(n.to_dsl(g.def().name()).trim_end().to_string()),
                _ => Output::Json(json!({ "size": n.len(), "elements": n.names() })),
            })
        }
        Command::Contracting { group, depth, samples, word_len } => {
            let g = load_group(&group.group, cli)?;
            let cap = cap.unwrap_or(DEFAULT_NUCLEUS_CAP);
            let mut v = match is_contracting(&g, cap)? {
                Contracting::Yes(n) => json!({ "contracting": "yes", "nucleus_size": n.len(), "cap": cap }),
                Contracting::Inconclusive { cap } => json!({ "contracting": "inconclusive", "cap": cap }),
            };
            if let Some(depth) = depth {
                check_level(*depth, cli)?;
                let rho = contraction_estimate(&g, *samples, *depth, *word_len, cli.seed, max_points(&g, cli))?;
                v["estimate"] = json!({ "value": rho, "depth": depth, "samples": samples, "word_len": word_len, "seed": cli.seed });
            }
            Ok(Output::Json(v))
        }
        Command::Osc { group } => {
            let g = load_group(&group.group, cli)?;
            let n = nucleus(&g, cap.unwrap_or(DEFAULT_NUCLEUS_CAP))?;
            Ok(Output::Text(open_set_condition(&n).to_string()))
        }
        Command::Equiv { group, left, right } => {
            let g = load_group(&group.group, cli)?;
            let n = nucleus(&g, cap.unwrap_or(DEFAULT_NUCLEUS_CAP))?;
            let a = Alphabet::new(g.degree())?;
            let (u, v) = (LeftWord::parse(&a, left)?, LeftWord::parse(&a, right)?);
            Ok(Output::Text(asymptotically_equivalent(&n, &u, &v)?.to_string()))
        }
        Command::TileGraph { group, level } => {
            check_level(*level, cli)?;
            let g = load_group(&group.group, cli)?;
            let n = nucleus(&g, cap.unwrap_or(DEFAULT_NUCLEUS_CAP))?;
            graph_output(&tile_graph(&g, &n, *level, max_points(&g, cli))?, true, cli.format)
        }
        Command::Schreier { group, gens, level, simplicial } => {
            check_level(*level, cli)?;
            let g = load_group(&group.group, cli)?;
            let s = gens_of(&g, gens)?;
            graph_output(&level_schreier(&g, &s, *level, max_points(&g, cli))?, *simplicial, cli.format)
        }
        Command::OrbitBall { group, gens, basepoint, radius, simplicial } => {
            let g = load_group(&group.group, cli)?;
            let s = gens_of(&g, gens)?;
            let p = Alphabet::new(g.degree())?.parse_omega(basepoint)?;
            graph_output(&orbit_ball(&g, &s, &p, *radius)?, *simplicial, cli.format)
        }
        Command::Growth { group, gens, basepoint, radius } => {
            let g = load_group(&group.group, cli)?;
            let s = gens_of(&g, gens)?;
            let a = Alphabet::new(g.degree())?;
            let p = a.parse_omega(basepoint)?;
            let ball = orbit_ball(&g, &s, &p, *radius)?;
            let v = ball.vertex(&a.render_omega(&p)).unwrap_or(0);
            let sizes = ball_growth(&ball, v, *radius)?;
            Ok(Output::Json(json!({ "basepoint": a.render_omega(&p), "radius": radius, "sizes": sizes })))
        }
        Command::CoverCheck { group, gens, level } => {
            check_level(*level + 1, cli)?;
            let g = load_group(&group.group, cli)?;
            let s = gens_of(&g, gens)?;
            let ok = covering_check(&g, &s, *level, max_points(&g, cli))?;
            Ok(Output::Json(json!({ "level": level, "covering": ok })))
        }
        Command::Spectrum { group, gens, level, unnormalized } => {
            check_level(*level, cli)?;
            let g = load_group(&group.group, cli)?;
            let s = gens_of(&g, gens)?;
            let m = hecke_matrix(&g, &s, *level, !unnormalized, max_points(&g, cli))?;
            let spec = eigenvalues_sym(&m, cli.tol)?;
            let mut v = serde_json::to_value(&spec).unwrap();
            v["level"] = json!(level);
            v["normalized"] = json!(!unnormalized);
            v["generators"] = json!(s.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>());
            Ok(Output::Json(v))
        }
        Command::FgClosed { level } => {
            check_level(*level, cli)?;
            Ok(Output::Json(json!({ "level": level, "values": fg_spectrum_closed(*level) })))
        }
        Command::DetqCheck { level, samples } => {
            let c = fg_detq_check(*level, *samples, cli.seed, tol_or(cli, 1e-8))?;
            Ok(Output::Json(serde_json::to_value(&c).unwrap()))
        }
        Command::PhiCheck { k, samples } => {
            let c = img_phi_recursion_check(*k, *samples, cli.seed, tol_or(cli, 1e-8))?;
            Ok(Output::Json(serde_json::to_value(&c).unwrap()))
        }
        Command::DigitAutomaton { system, vector } => {
            let ds = load_system(&system.system)?;
            let da = digit_automaton(&ds, vector, cap.unwrap_or(4096))?;
            let names: Vec<String> = da
                .states
                .iter()
                .map(|s| format!("({})", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let m = da.automaton.automaton();
            Ok(match cli.format.unwrap_or(Format::Json) {
                Format::Dot => Output::Text(m.to_dot(Some(&names), None).trim_end().to_string()),
                _ => {
                    let states: Vec<Value> = (0..m.num_states())
                        .map(|q| json!({ "vector": da.states[q], "output": m.output_row(q), "next": m.next_row(q) }))
                        .collect();
                    Output::Json(json!({
                        "initial": vector,
                        "num_states": m.num_states(),
                        "states": states,
                        "basis_acts_nontrivially_depth_10": basis_acts_nontrivially(&ds, 10, cap.unwrap_or(4096))?,
                    }))
                }
            })
        }
        Command::FiniteState { system, matrix } => {
            let a = match (system, matrix) {
                (Some(s), None) => load_system(s)?.matrix().clone(),
                (None, Some(m)) => parse_matrix(m)?,
                _ => return Err(Error::InvalidArgument("give exactly one of --system and --matrix".into())),
            };
            Ok(Output::Text(is_finite_state(&a)?.to_string()))
        }
        Command::TileRender { system, depth, resolution, output } => {
            let ds = load_system(&system.system)?;
            let image = render_tile(&ds, *depth, *resolution)?;
            let out = match (&image, cli.format) {
                (TileImage::Interval(lo, hi), _) => {
                    Output::Json(json!({ "depth": depth, "min": lo.to_string(), "max": hi.to_string() }))
                }
                (TileImage::Raster(r), Some(Format::Json)) => Output::Json(json!({
                    "depth": depth,
                    "refined_depth": r.refined_depth,
                    "resolution": r.resolution,
                    "radius": r.radius.to_string(),
                    "filled": r.filled(),
                })),
                (TileImage::Raster(r), _) => Output::Bytes(r.to_pgm()),
            };
            match (output, out) {
                (Some(path), Output::Bytes(b)) => {
                    std::fs::write(path, b).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))?;
                    Ok(Output::Json(json!({ "written": path })))
                }
                (_, out) => Ok(out),
            }
        }
        Command::AbelianEquiv { system, left, right } => {
            let ds = load_system(&system.system)?;
            let a = Alphabet::new(ds.degree())?;
            let (u, v) = (LeftWord::parse(&a, left)?, LeftWord::parse(&a, right)?);
            Ok(Output::Text(abelian_asymptotic_eq(&ds, &u, &v)?.to_string()))
        }
        Command::Semigroup(SemigroupCommand::Apply { table, map, word }) => {
            let t = load_table(table)?;
            let w = parse_omega_in(t.alphabet(), word)?;
            Ok(Output::Text(t.alphabet().render_omega(&t.apply(map, &w)?)))
        }
        Command::Semigroup(SemigroupCommand::Successor { m, length }) => {
            Ok(Output::Text(fibonacci_successor(*m, *length)?.to_string()))
        }
        Command::Semigroup(SemigroupCommand::Involution { table, map, depth }) => {
            let t = load_table(table)?;
            Ok(Output::Text(involution_check(t.as_ref(), map, *depth)?.to_string()))
        }
        Command::Catalog(CatalogCommand::List) => {
            let entries: Vec<Value> = catalog::names()
                .into_iter()
                .map(|n| json!({ "name": n, "kind": catalog::lookup(n).map(|e| e.kind()).unwrap_or("?") }))
                .collect();
            Ok(Output::Json(json!(entries)))
        }
        Command::Catalog(CatalogCommand::Show { name }) => {
            let e = catalog::lookup(name)?;
            Ok(match cli.format.unwrap_or(Format::Text) {
                Format::Json => Output::Json(json!({
                    "name": e.name,
                    "kind": e.kind(),
                    "note": e.note,
                    "facts": e.facts.iter().map(describe_fact).collect::<Vec<_>>(),
                    "definition": e.render(),
                })),
                _ => Output::Text(e.render().trim_end().to_string()),
            })
        }
    }
}

fn tol_or(cli: &Cli, default: f64) -> f64 {
    if cli.tol == 1e-10 {
        default
    } else {
        cli.tol
    }
}

fn parse_omega_in(alphabet: &Alphabet, text: &str) -> Result<OmegaWord> {
    if text.contains('(') {
        alphabet.parse_omega(text)
    } else {
        Err(Error::Parse(format!("expected an infinite word PRE(PERIOD), got {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("selfsim").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
    }

    #[test]
    fn documented_invocations() {
        assert_eq!(call(&["is-trivial", "--group", "catalog:grigorchuk", "--word", "adadadad"]), (0, "true\n".into(), String::new()));
        assert_eq!(
            call(&["act", "--group", "catalog:adding_machine", "--word-input", "000", "--element", "a"]),
            (0, "100\n".into(), String::new())
        );
        let (code, out, _) = call(&["spectrum", "--group", "catalog:fabrykowski_gupta", "--level", "2", "--unnormalized"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        let s6 = 6f64.sqrt();
        for want in [1.0, 4.0, 1.0 - s6, 1.0 + s6] {
            assert!(values.iter().any(|x| (x - want).abs() < 1e-9), "{want} in {values:?}");
        }
        assert_eq!(v["tol"].as_f64(), Some(1e-10));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["is-trivial", "--group", "catalog:nope", "--word", "a"]).0, 1);
        assert_eq!(call(&["is-trivial", "--group", "catalog:grigorchuk", "--word", "x"]).0, 1);
        let (code, _, err) = call(&["is-trivial", "--group", "catalog:grigorchuk", "--bogus", "a"]);
        assert_eq!(code, 2);
        assert!(err.contains("--bogus"));
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn deterministic_output() {
        let args = ["contracting", "--group", "catalog:grigorchuk", "--depth", "3", "--samples", "5", "--seed", "7"];
        assert_eq!(call(&args), call(&args));
    }
}
