use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use alterweight::convert::{nivat_decompose, nivat_decompose_wfta, wafa_to_wfta, wfta_hom_to_wafa};
use alterweight::format::{self, Document};
use alterweight::groebner::buchberger;
use alterweight::pa::{Budget, EquivalenceVerdict, PolyAutomaton, ZeronessVerdict};
use alterweight::polynomial::set_degree_cap;
use alterweight::tree::generic_tree;
use alterweight::wafa::words_up_to;
use alterweight::{Element, Error, Semiring, Tree, Wafa};

#[derive(Parser)]
#[command(
    name = "alterweight",
    version,
    about = "Weighted alternating automata toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a wafa/pa on a word, or a wfta/dta on a tree.
    Eval { file: PathBuf, input: String },
    /// Bring a WAFA into normal form (nice when no flag is given).
    Normalize {
        #[arg(long)]
        nice: bool,
        #[arg(long)]
        pure: bool,
        #[arg(long)]
        equalize: bool,
        file: PathBuf,
    },
    /// Translate between WAFA and WFTA.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Nivat decomposition of a WAFA.
    #[command(subcommand)]
    Nivat(NivatCmd),
    /// Polynomial automata over the rationals.
    #[command(subcommand)]
    Pa(PaCmd),
    /// Zeroness and equivalence of WAFA, via polynomial automata.
    #[command(subcommand)]
    Wafa(WafaCmd),
    /// Compare two automata, or one automaton against a construction, on
    /// every word up to a length.
    Oracle {
        file: PathBuf,
        other: Option<PathBuf>,
        /// Construction to check against when no second file is given.
        #[arg(long, value_parser = ["to-wfta", "pa", "nice", "pure", "equalize", "nivat"])]
        against: Option<String>,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Gröbner bases over the rationals.
    #[command(subcommand)]
    Groebner(GroebnerCmd),
    /// Print a WAFA as Graphviz.
    Render {
        #[arg(long, required = true)]
        dot: bool,
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Compile a WAFA into a WFTA read on generic trees.
    ToWfta { file: PathBuf },
    /// Build the WAFA for a WFTA composed with a word homomorphism.
    ToWafa {
        #[arg(long)]
        hom: PathBuf,
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum NivatCmd {
    /// Print the decomposition as a `nivat` document.
    Decompose { file: PathBuf },
    /// Check a WAFA's decomposition on generic trees of all words up to
    /// `--max-len`, and against the compiled WFTA on trees up to `--depth`.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

#[derive(clap::Args)]
struct BudgetArgs {
    /// Generators examined before giving up [default: 10000].
    #[arg(long)]
    max_steps: Option<usize>,
    /// Largest generator degree [default: ALTERWEIGHT_MAX_DEGREE, else 64].
    #[arg(long)]
    max_degree: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(s) = self.max_steps {
            b.max_steps = s;
        }
        if let Some(d) = self.max_degree {
            b.max_degree = d;
        }
        b
    }
}

#[derive(Subcommand)]
enum PaCmd {
    /// Value of the automaton on a word, read left to right.
    Eval { file: PathBuf, word: String },
    Zeroness {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum WafaCmd {
    Zeroness {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum GroebnerCmd {
    /// Reduced Gröbner basis of a `polys` document.
    Basis { file: PathBuf },
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

/// Loading errors exit with 2.
fn input(e: Error) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

/// Errors raised while computing exit with 3, or 4 for exhausted budgets.
fn runtime(e: Error) -> Failure {
    let code = match e {
        Error::ResourceExhausted(_) | Error::DegreeCap { .. } => 4,
        _ => 3,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("ALTERWEIGHT_MAX_DEGREE") {
        match v.trim().parse::<u32>() {
            Ok(d) if d > 0 => set_degree_cap(Some(d)),
            _ => {
                eprintln!("error: ALTERWEIGHT_MAX_DEGREE must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> std::result::Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Document::parse(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn wrong_kind(path: &Path, got: &Document, want: &str) -> Failure {
    Failure {
        code: 2,
        message: format!(
            "{}: expected a {want} document, found {}",
            path.display(),
            got.kind()
        ),
    }
}

fn load_wafa(path: &Path) -> std::result::Result<Wafa, Failure> {
    match load(path)? {
        Document::Wafa(a) => Ok(a),
        other => Err(wrong_kind(path, &other, "wafa")),
    }
}

fn load_pa(path: &Path) -> std::result::Result<PolyAutomaton, Failure> {
    match load(path)? {
        Document::Pa(p) => Ok(p),
        other => Err(wrong_kind(path, &other, "pa")),
    }
}

/// A tree given as an s-expression, or as the path of a tree document.
fn tree_arg(text: &str) -> std::result::Result<Tree, Failure> {
    let path = Path::new(text);
    if path.is_file() {
        return match load(path)? {
            Document::Tree(t) => Ok(t),
            other => Err(wrong_kind(path, &other, "tree")),
        };
    }
    text.parse().map_err(input)
}

fn show_word(w: &[char]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.iter().collect()
    }
}

fn print_doc(d: &Document) -> Outcome {
    print!("{}", d.render().map_err(runtime)?);
    Ok(0)
}

/// ℕ-weighted automata are decided over ℚ.
fn over_rationals(a: Wafa) -> std::result::Result<Wafa, Failure> {
    match a.semiring() {
        Semiring::Nat => a.to_rationals().map_err(runtime),
        _ => Ok(a),
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Eval { file, input: arg } => eval(&file, &arg),
        Command::Normalize {
            nice: _,
            pure,
            equalize,
            file,
        } => {
            let a = load_wafa(&file)?;
            let mut out = if a.is_nice() && (pure || equalize) {
                a
            } else {
                a.make_nice().map_err(runtime)?
            };
            if pure {
                out = out.make_pure().map_err(runtime)?;
            }
            if equalize {
                out = out.equalize().map_err(runtime)?;
            }
            print_doc(&Document::Wafa(out))
        }
        Command::Convert(ConvertCmd::ToWfta { file }) => {
            let a = load_wafa(&file)?;
            let c = wafa_to_wfta(&a).map_err(runtime)?;
            print_doc(&Document::Wfta(c.wfta))
        }
        Command::Convert(ConvertCmd::ToWafa { hom, file }) => {
            let b = match load(&file)? {
                Document::Wfta(b) => b,
                other => return Err(wrong_kind(&file, &other, "wfta")),
            };
            let h = match load(&hom)? {
                Document::Hom(h) => h,
                other => return Err(wrong_kind(&hom, &other, "hom")),
            };
            print_doc(&Document::Wafa(wfta_hom_to_wafa(&b, &h).map_err(runtime)?))
        }
        Command::Nivat(NivatCmd::Decompose { file }) => {
            let d = match load(&file)? {
                Document::Wafa(a) => nivat_decompose(&a),
                Document::Wfta(b) => nivat_decompose_wfta(&b),
                other => return Err(wrong_kind(&file, &other, "wafa or wfta")),
            }
            .map_err(runtime)?;
            print!(
                "{}",
                format::pretty(&format::nivat_to_value(&d).map_err(runtime)?)
            );
            Ok(0)
        }
        Command::Nivat(NivatCmd::Check {
            file,
            max_len,
            depth,
        }) => nivat_check(&file, max_len, depth),
        Command::Pa(PaCmd::Eval { file, word }) => {
            let p = load_pa(&file)?;
            let w = p.parse_word(&word).map_err(input)?;
            println!("{}", p.behavior(&w).map_err(runtime)?);
            Ok(0)
        }
        Command::Pa(PaCmd::Zeroness { file, budget }) => {
            let p = load_pa(&file)?;
            report_zeroness(
                p.zeroness(&budget.budget()).map_err(runtime)?,
                &p.labels().to_vec(),
            )
        }
        Command::Pa(PaCmd::Equiv {
            left,
            right,
            budget,
        }) => {
            let (l, r) = (load_pa(&left)?, load_pa(&right)?);
            let labels = l.difference(&r).map_err(runtime)?.labels().to_vec();
            report_equivalence(
                l.equivalence(&r, &budget.budget()).map_err(runtime)?,
                &labels,
            )
        }
        Command::Wafa(WafaCmd::Zeroness { file, budget }) => {
            let a = over_rationals(load_wafa(&file)?)?;
            report_zeroness(a.zeroness(&budget.budget()).map_err(runtime)?, a.states())
        }
        Command::Wafa(WafaCmd::Equiv {
            left,
            right,
            budget,
        }) => {
            let l = over_rationals(load_wafa(&left)?)?;
            let r = over_rationals(load_wafa(&right)?)?;
            let labels = l
                .to_pa()
                .difference(&r.to_pa())
                .map_err(runtime)?
                .labels()
                .to_vec();
            report_equivalence(
                l.equivalence(&r, &budget.budget()).map_err(runtime)?,
                &labels,
            )
        }
        Command::Oracle {
            file,
            other,
            against,
            max_len,
        } => oracle(&file, other.as_deref(), against.as_deref(), max_len),
        Command::Groebner(GroebnerCmd::Basis { file }) => {
            let set = match load(&file)? {
                Document::Polys(s) => s,
                other => return Err(wrong_kind(&file, &other, "polys")),
            };
            let g = buchberger(&set.polys, set.order).map_err(runtime)?;
            for p in g.generators() {
                println!("{p}");
            }
            println!("audit: {}", if g.audit() { "ok" } else { "FAILED" });
            Ok(0)
        }
        Command::Render { dot: _, file } => {
            print!("{}", load_wafa(&file)?.to_dot());
            Ok(0)
        }
    }
}

fn eval(file: &Path, arg: &str) -> Outcome {
    let value = match load(file)? {
        Document::Wafa(a) => {
            let w = a.parse_word(arg).map_err(input)?;
            a.behavior(&w).map_err(runtime)?.to_string()
        }
        Document::Pa(p) => {
            let w = p.parse_word(arg).map_err(input)?;
            p.behavior(&w).map_err(runtime)?.to_string()
        }
        Document::Wfta(b) => {
            let t = tree_arg(arg)?;
            b.alphabet().check_ground(&t).map_err(input)?;
            b.behavior(&t).map_err(runtime)?.to_string()
        }
        Document::Dta(d) => {
            let t = tree_arg(arg)?;
            d.alphabet().check_ground(&t).map_err(input)?;
            u8::from(d.accepts(&t).map_err(runtime)?).to_string()
        }
        Document::Hom(h) => {
            let t = tree_arg(arg)?;
            h.source().check_ground(&t).map_err(input)?;
            h.apply(&t).map_err(runtime)?.to_string()
        }
        other => return Err(wrong_kind(file, &other, "wafa, pa, wfta, dta or hom")),
    };
    println!("{value}");
    Ok(0)
}

fn print_certificate(basis: &alterweight::groebner::GroebnerBasis, labels: &[String]) {
    println!(
        "certificate ({} generators, variables {}):",
        basis.len(),
        labels.join(", ")
    );
    for g in basis.generators() {
        println!("  {g}");
    }
}

fn report_zeroness(v: ZeronessVerdict, labels: &[String]) -> Outcome {
    match v {
        ZeronessVerdict::Zero { certificate } => {
            println!("ZERO");
            print_certificate(&certificate, labels);
            Ok(0)
        }
        ZeronessVerdict::NonZero { witness, value } => {
            println!("NONZERO, witness: {} (value {value})", show_word(&witness));
            Ok(1)
        }
    }
}

fn report_equivalence(v: EquivalenceVerdict, labels: &[String]) -> Outcome {
    match v {
        EquivalenceVerdict::Equal { certificate } => {
            println!("EQUAL");
            print_certificate(&certificate, labels);
            Ok(0)
        }
        EquivalenceVerdict::NotEqual {
            witness,
            left,
            right,
        } => {
            println!("NOT EQUAL, witness: {}", show_word(&witness));
            println!("left: {left}");
            println!("right: {right}");
            Ok(1)
        }
    }
}

/// Prints the first word (shortest, then in alphabet order) on which the
/// two sides differ.
fn compare_words(
    alphabet: &[char],
    max_len: usize,
    mut left: impl FnMut(&[char]) -> alterweight::Result<Element>,
    mut right: impl FnMut(&[char]) -> alterweight::Result<Element>,
) -> Outcome {
    let words = words_up_to(alphabet, max_len);
    for w in &words {
        let (l, r) = (left(w).map_err(runtime)?, right(w).map_err(runtime)?);
        if l != r {
            println!("FAIL at {}: {l} vs {r}", show_word(w));
            return Ok(1);
        }
    }
    println!("PASS ({} words up to length {max_len})", words.len());
    Ok(0)
}

fn oracle(file: &Path, other: Option<&Path>, against: Option<&str>, max_len: usize) -> Outcome {
    let reversed = |w: &[char]| w.iter().rev().copied().collect::<Vec<_>>();
    if let Some(other) = other {
        if against.is_some() {
            return Err(Failure {
                code: 2,
                message: "give either a second file or --against, not both".into(),
            });
        }
        return match (load(file)?, load(other)?) {
            (Document::Wafa(a), Document::Wafa(b)) => {
                if a.alphabet() != b.alphabet() {
                    return Err(runtime(Error::AlphabetMismatch("oracle operands".into())));
                }
                compare_words(a.alphabet(), max_len, |w| a.behavior(w), |w| b.behavior(w))
            }
            (Document::Pa(a), Document::Pa(b)) => {
                if a.alphabet() != b.alphabet() {
                    return Err(runtime(Error::AlphabetMismatch("oracle operands".into())));
                }
                compare_words(a.alphabet(), max_len, |w| a.behavior(w), |w| b.behavior(w))
            }
            (Document::Wafa(a), Document::Pa(p)) => compare_words(
                a.alphabet(),
                max_len,
                |w| a.behavior(w),
                |w| p.behavior(&reversed(w)),
            ),
            (x, y) => Err(Failure {
                code: 2,
                message: format!("cannot compare {} with {}", x.kind(), y.kind()),
            }),
        };
    }
    let a = load_wafa(file)?;
    let alphabet = a.alphabet().to_vec();
    match against.unwrap_or("to-wfta") {
        "to-wfta" => {
            let c = wafa_to_wfta(&a).map_err(runtime)?;
            compare_words(
                &alphabet,
                max_len,
                |w| a.behavior(w),
                |w| c.wfta.behavior(&generic_tree(w, c.rank)),
            )
        }
        "pa" => {
            let p = a.to_pa();
            compare_words(
                &alphabet,
                max_len,
                |w| a.behavior(w),
                |w| p.behavior(&reversed(w)),
            )
        }
        "nivat" => {
            let d = nivat_decompose(&a).map_err(runtime)?;
            compare_words(
                &alphabet,
                max_len,
                |w| a.behavior(w),
                |w| d.eval(&generic_tree(w, d.rank)),
            )
        }
        stage => {
            let nice = a.make_nice().map_err(runtime)?;
            let b = match stage {
                "nice" => nice,
                "pure" => nice.make_pure().map_err(runtime)?,
                _ => nice.equalize().map_err(runtime)?,
            };
            compare_words(&alphabet, max_len, |w| a.behavior(w), |w| b.behavior(w))
        }
    }
}

fn nivat_check(file: &Path, max_len: usize, depth: usize) -> Outcome {
    let a = load_wafa(file)?;
    let d = nivat_decompose(&a).map_err(runtime)?;
    let structural = [
        (
            "homomorphism is linear and non-deleting",
            d.hom.is_linear() && d.hom.is_non_deleting(),
        ),
        ("weight automaton has one state", d.weights.n() == 1),
        (
            "run language automaton is deterministic",
            d.consistency.audit().is_ok(),
        ),
    ];
    for (what, ok) in structural {
        if !ok {
            println!("FAIL: {what}");
            return Ok(1);
        }
    }
    let words = words_up_to(a.alphabet(), max_len);
    for w in &words {
        let want = a.behavior(w).map_err(runtime)?;
        let got = d.eval(&generic_tree(w, d.rank)).map_err(runtime)?;
        if want != got {
            println!("FAIL at word {}: {want} vs {got}", show_word(w));
            return Ok(1);
        }
    }
    let trees = d.source.alphabet().trees_up_to_height(depth);
    for t in &trees {
        let want = d.source.behavior(t).map_err(runtime)?;
        let got = d.eval(t).map_err(runtime)?;
        if want != got {
            println!("FAIL at tree {t}: {want} vs {got}");
            return Ok(1);
        }
    }
    println!(
        "PASS ({} words up to length {max_len}, {} trees up to depth {depth})",
        words.len(),
        trees.len()
    );
    Ok(0)
}
