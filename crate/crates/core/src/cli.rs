//! The `ainfree` command line.  Exit codes: 0 when every check passes, 1 on
//! a verification failure, 2 on bad input (I/O, parse, budget, non-chain maps).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ainfty::{check_an_category, AnCategory, CheckReport};
use crate::error::{Error, Result};
use crate::free::{FreeCategory, FreeMor};
use crate::io::{read_json, to_json, CategoryFile, FunctorFile, QuiverFile, SourceKind, TransformationFile};
use crate::lift::{chain_map_defect, extend_functor, extend_strict, restrict_functor, verify_restriction_equivalence, LiftProblem};
use crate::quiver::{enumerate_words, Category, DGQuiver, FiniteComplex};
use crate::scalars::SparseMatrix;
use crate::tensor::{CocatHom, Coderivation};
use crate::trees::{contractions, enumerate_trees};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ainfree", version, about = "Free A-infinity categories over DG quivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Budget {
    /// Maximal number of leaves of a tree.
    #[arg(long, default_value_t = 4)]
    pub leaves: usize,
    /// Maximal number of arguments of an operation b_k.
    #[arg(long, default_value_t = 4)]
    pub arity: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Free,
    AnCategory,
    Equivalence,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the plane trees with n leaves.
    Trees {
        n: usize,
        /// Also list each tree's one-edge expansions with their sign exponents.
        #[arg(long)]
        contractions: bool,
    },
    /// Check A-infinity identities.
    Verify {
        /// A quiver file (modes free and equivalence) or a category file.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Free)]
        mode: Mode,
        #[command(flatten)]
        budget: Budget,
        /// Largest k in the identity sum over b_j b_l with j + l = k + 1.
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        /// Target category file (equivalence mode).
        #[arg(long)]
        category: Option<PathBuf>,
        /// Functor files for φ and ψ (equivalence mode).
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        psi: Option<PathBuf>,
    },
    /// Extend a chain map (or a functor with higher components) to the free category.
    Extend {
        quiver: PathBuf,
        map: PathBuf,
        #[arg(long)]
        category: PathBuf,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restrict a functor on the free category to the generating quiver.
    Restrict {
        quiver: PathBuf,
        functor: PathBuf,
        #[arg(long)]
        category: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a cycle of the A_1 transformation complex to a natural A-infinity transformation.
    Lift {
        quiver: PathBuf,
        #[arg(long)]
        category: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        transformation: PathBuf,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize the free category at the given budget as JSON.
    Report {
        quiver: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
}

/// Caps the global worker pool at `AINFREE_THREADS` when it is set.
pub fn init_threads() {
    if let Some(n) = std::env::var("AINFREE_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses arguments and runs one command, writing the report to `out` and
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            if code == EXIT_PASS {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, passed)) => {
            let _ = out.write_all(text.as_bytes());
            if passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn load_quiver(path: &Path) -> Result<DGQuiver> {
    read_json::<QuiverFile>(path)?.to_quiver()
}

fn load_category(path: &Path) -> Result<AnCategory> {
    read_json::<CategoryFile>(path)?.to_category()
}

fn free_category(q: DGQuiver, b: &Budget) -> Result<FreeCategory> {
    if b.leaves == 0 || b.arity < 2 {
        return Err(Error::Budget("need at least one leaf and arity at least 2".into()));
    }
    FreeCategory::new(q, b.leaves, b.arity)
}

/// Loads a functor file and extends it to the free category.
fn load_functor(path: &Path, free: &FreeCategory, tgt: &AnCategory) -> Result<CocatHom<FreeMor, usize>> {
    let file: FunctorFile = read_json(path)?;
    match file.source {
        SourceKind::Quiver => extend_strict(free, tgt, &file.to_quiver_map(&free.quiver, tgt)?),
        SourceKind::Free => {
            let f = file.to_free_functor(free, tgt)?;
            let higher = CocatHom { obj_map: f.obj_map.clone(), comps: f.comps.iter().filter(|(w, _)| w.len() >= 2).map(|(w, v)| (w.clone(), v.clone())).collect() };
            extend_functor(free, tgt, &restrict_functor::<AnCategory>(free, &f), &higher)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: String) -> Result<String> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn execute(cmd: &Command) -> Result<(String, bool)> {
    match cmd {
        Command::Trees { n, contractions: with } => {
            if *n == 0 {
                return Err(Error::InvalidTree("a tree has at least one leaf".into()));
            }
            let mut s = String::new();
            for t in enumerate_trees(*n)? {
                let _ = writeln!(s, "{t}");
                if *with {
                    for c in contractions(&t) {
                        let _ = writeln!(s, "  <- {} upper {} beta {}", c.parent, c.upper, c.beta);
                    }
                }
            }
            Ok((s, true))
        }
        Command::Verify { input, mode, budget, max_k, category, phi, psi } => match mode {
            Mode::Free => {
                if *max_k > budget.arity {
                    return Err(Error::Budget(format!("max-k {max_k} exceeds the arity budget {}", budget.arity)));
                }
                let free = free_category(load_quiver(input)?, budget)?;
                let report = check_an_category(&free, *max_k, budget.leaves)?;
                Ok((check_text(&report), report.passed()))
            }
            Mode::AnCategory => {
                let cat = load_category(input)?;
                let k = match cat.level {
                    Some(l) => (*max_k).min(l),
                    None => *max_k,
                };
                let report = check_an_category(&cat, k, k)?;
                Ok((check_text(&report), report.passed()))
            }
            Mode::Equivalence => {
                let need = |p: &Option<PathBuf>, what: &str| p.clone().ok_or_else(|| Error::Parse(format!("equivalence mode needs --{what}")));
                let tgt = load_category(&need(category, "category")?)?;
                let free = free_category(load_quiver(input)?, budget)?;
                let f = load_functor(&need(phi, "phi")?, &free, &tgt)?;
                let g = load_functor(&need(psi, "psi")?, &free, &tgt)?;
                let report = verify_restriction_equivalence(&free, &tgt, &f, &g, budget.leaves, budget.leaves)?;
                Ok((equivalence_text(&report), report.passed()))
            }
        },
        Command::Extend { quiver, map, category, budget, out } => {
            let tgt = load_category(category)?;
            let free = free_category(load_quiver(quiver)?, budget)?;
            let f = load_functor(map, &free, &tgt)?;
            let text = to_json(&FunctorFile::from_free_functor(&free, &tgt, &f))?;
            Ok((write_output(out, text)?, true))
        }
        Command::Restrict { quiver, functor, category, out } => {
            let tgt = load_category(category)?;
            let q = load_quiver(quiver)?;
            let file: FunctorFile = read_json(functor)?;
            let budget = Budget { leaves: file.leaves.unwrap_or(1), arity: file.arity.unwrap_or(2) };
            let free = free_category(q, &budget)?;
            let f = file.to_free_functor(&free, &tgt)?;
            let text = to_json(&FunctorFile::from_quiver_map(&free.quiver, &tgt, &restrict_functor::<AnCategory>(&free, &f)))?;
            Ok((write_output(out, text)?, true))
        }
        Command::Lift { quiver, category, phi, psi, transformation, budget, out } => {
            let tgt = load_category(category)?;
            let free = free_category(load_quiver(quiver)?, budget)?;
            let f = load_functor(phi, &free, &tgt)?;
            let g = load_functor(psi, &free, &tgt)?;
            let file: TransformationFile = read_json(transformation)?;
            let r = file.to_quiver_coder(&free.quiver, &tgt, &f.obj_map, &g.obj_map)?;
            let p = FiniteComplex::new(vec![file.degree], vec!["p".into()], SparseMatrix::zero(tgt.ring.clone(), 1, 1))?;
            let problem = LiftProblem { free: &free, tgt: &tgt, phi: &f, psi: &g, p: &p, restricted: vec![r], higher: vec![Coderivation::zero()] };
            let u = crate::lift::lift_chain_map(&problem)?;
            let words = enumerate_words(&free, None, budget.leaves, budget.leaves);
            let passed = chain_map_defect(&free, &tgt, &f, &g, &p, &u, &words)?.is_none();
            let text = to_json(&TransformationFile::from_free_coder(&free, &tgt, file.degree, &u[0]))?;
            Ok((write_output(out, text)?, passed))
        }
        Command::Report { quiver, budget } => {
            let free = free_category(load_quiver(quiver)?, budget)?;
            Ok((to_json(&summary(&free))?, true))
        }
    }
}

fn check_text(report: &CheckReport) -> String {
    let mut s = format!("{report}");
    if !s.ends_with('\n') {
        s.push('\n');
    }
    let _ = writeln!(s, "{}", if report.passed() { "PASS" } else { "FAIL" });
    s
}

fn equivalence_text(r: &crate::lift::EquivalenceReport) -> String {
    let mark = |b: bool| if b { "ok" } else { "FAILED" };
    let mut s = String::new();
    let _ = writeln!(s, "A_1 transformation complex rank: {}", r.a1_rank);
    let _ = writeln!(s, "truncated A_inf transformation complex rank: {} ({} source words)", r.ainf_rank, r.words);
    let _ = writeln!(s, "u is a chain map: {}", mark(r.u_is_chain_map));
    let _ = writeln!(s, "u followed by restriction is the identity: {}", mark(r.u_restricts_to_identity));
    let _ = writeln!(s, "id - restr u = B1 h + h B1: {}", mark(r.homotopy_holds));
    let _ = writeln!(s, "matrix check V = D H + H D: {}", mark(r.homotopy_matrix_holds));
    let _ = writeln!(s, "h has only its first component: {}", mark(r.homotopy_only_h1));
    let _ = writeln!(s, "homotopy witness terms: {}", r.homotopy_terms);
    for (label, u) in [("unit cycles", &r.unit_cycles), ("perturbed unit cycles", &r.perturbed_unit_cycles)] {
        let _ = writeln!(
            s,
            "{label}: left difference {} terms, witness {}; right difference {} terms, witness {}",
            u.left_difference_terms,
            u.left_witness.as_ref().map_or("none".to_string(), |_| format!("{} terms", u.left_witness_terms)),
            u.right_difference_terms,
            u.right_witness.as_ref().map_or("none".to_string(), |_| format!("{} terms", u.right_witness_terms)),
        );
        for w in u.left_witness.iter().chain(&u.right_witness).flatten() {
            let _ = writeln!(s, "  {w}");
        }
    }
    let _ = writeln!(s, "{}", if r.passed() { "PASS" } else { "FAIL" });
    s
}

#[derive(Serialize)]
struct HomSummary {
    src: String,
    dst: String,
    leaves: usize,
    /// Basis counts by shifted degree.
    degrees: BTreeMap<i64, usize>,
}

#[derive(Serialize)]
struct Summary {
    ring: String,
    objects: Vec<String>,
    generators: usize,
    leaf_budget: usize,
    arity_budget: usize,
    trees: BTreeMap<usize, usize>,
    homs: Vec<HomSummary>,
}

fn summary(free: &FreeCategory) -> Summary {
    let mut trees = BTreeMap::new();
    for t in 0..free.tree_count() {
        *trees.entry(free.leaves(t)).or_insert(0) += 1;
    }
    let k = free.object_count();
    let mut homs = Vec::new();
    for x in 0..k {
        for y in 0..k {
            for n in 1..=free.leaf_budget {
                let mut degrees = BTreeMap::new();
                for m in free.basis_with_leaves(x, y, n) {
                    *degrees.entry(free.degree(&m)).or_insert(0) += 1;
                }
                if !degrees.is_empty() {
                    homs.push(HomSummary { src: free.object_name(x), dst: free.object_name(y), leaves: n, degrees });
                }
            }
        }
    }
    Summary {
        ring: free.ring().to_string(),
        objects: (0..k).map(|x| free.object_name(x)).collect(),
        generators: free.quiver.gens().len(),
        leaf_budget: free.leaf_budget,
        arity_budget: free.arity_budget,
        trees,
        homs,
    }
}
