use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use godel::calculus::{self, Decision, ProofTree, Theory};
use godel::computability::{self, Program, RunOutcome};
use godel::diagonal::{self, FixpointResult, Identity};
use godel::model::{self, Env, TriBool};
use godel::numbering;
use godel::representation;
use godel::syntax::{Articulate, Category, Formula, Term};
use godel::text::Text;
use godel::Nat;

const GRAMMAR: &str = "\
File formats (s-expressions; `;` starts a comment):
  term     0 | xN | (lit N) | (S t) | (+ t t) | (* t t)
  formula  bot | (= t t) | (=> A B) | (and A B) | (or A B) | (not A)
           | (forall xN A) | (exists xN A) | (Proof t t t) | (Sub t t t) | (Neg t t)
  program  succ | add | mul | chileq | (zero n) | (proj n i)
           | (comp n m h (g1 ... gm)) | (mu n g) | (rec n base step)
  proof    (node A rule-tag (subproof ...))
           tags: ax-eq-refl ax-eq-succ ax-eq-add ax-eq-mul ax-eq-eq ax-lit ax-k ax-s
                 ax-and-i ax-and-l ax-and-r ax-or-l ax-or-r ax-or-e ax-not-i ax-not-e
                 ax-dne ax-inst ax-witness ax-all-dist ax-ex-elim ax-q1 ... ax-q7
                 ax-ind (pa only), mp (major premise A => B first, then A), gen
Exit status: 0 success/true/valid/found, 1 false/unknown/invalid/not found,
2 usage or I/O error.";

/// Codes grow about twofold in length per level of nesting; past this many
/// bits they are not worth materializing.
const ENCODE_BITS_LIMIT: u128 = 1 << 32;

#[derive(Parser)]
#[command(name = "godel", version, about = "Numbering, evaluation, proof checking and fixed points for arithmetic", after_help = GRAMMAR)]
struct Cli {
    /// Axiom set: q (Robinson) or pa (with induction).
    #[arg(long, global = true, default_value = "pa")]
    theory: Theory,
    /// Search bound for unbounded quantifiers during evaluation.
    #[arg(long, global = true, default_value = "1000")]
    cap: Nat,
    /// Step budget for `run`, code bound for `search`.
    #[arg(long, global = true, default_value = "100000")]
    fuel: Nat,
    /// Print codes in hexadecimal (0x...).
    #[arg(long, global = true)]
    hex: bool,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Kind {
    Term,
    Formula,
    Program,
    Proof,
}

#[derive(Copy, Clone, ValueEnum)]
enum FixKind {
    Godel,
    Henkin,
    Loeb,
    Rosser,
    Custom,
}

#[derive(Subcommand)]
enum Command {
    /// Print the code of a term, formula, program or proof.
    Encode {
        file: PathBuf,
        #[arg(long = "as", value_enum, default_value = "formula")]
        kind: Kind,
    },
    /// Print the object a code stands for.
    Decode {
        /// Decimal, or hexadecimal with a 0x prefix; `-` reads it from stdin.
        code: String,
        #[arg(long = "as", value_enum, default_value = "formula")]
        kind: Kind,
    },
    /// Run a program on decimal arguments.
    Run { file: PathBuf, args: Vec<Nat> },
    /// Print the formula representing a Rec-free program.
    Compile { file: PathBuf },
    /// Evaluate a formula in the standard model: true, false or unknown.
    Eval {
        file: PathBuf,
        /// Assignments such as x0=5.
        #[arg(long = "set", value_parser = parse_assignment)]
        set: Vec<(u64, Nat)>,
    },
    /// Check a proof.
    Check { file: PathBuf },
    /// Look for a proof or refutation with code at most --fuel.
    Search { file: PathBuf },
    /// Whether a proof of the formula has code at most N.
    BoundedProvable {
        file: PathBuf,
        #[arg(long)]
        bound: Nat,
    },
    /// Print the sentence `exists y A[args, y]` for a Rec-free program.
    HaltingFormula { file: PathBuf, args: Vec<Nat> },
    /// Build a fixed point and check the diagonal identity.
    Fixpoint {
        #[arg(long, value_enum)]
        kind: FixKind,
        /// Condition with one free variable (for --kind custom).
        #[arg(long)]
        c: Option<PathBuf>,
        /// Closed sentence P (for --kind loeb; default bot).
        #[arg(long)]
        p: Option<PathBuf>,
    },
}

fn parse_assignment(s: &str) -> Result<(u64, Nat), String> {
    let (v, n) = s.split_once('=').ok_or("expected xN=VALUE")?;
    let v = v.trim().strip_prefix('x').ok_or("variables are written xN")?;
    Ok((
        v.parse().map_err(|_| format!("bad variable {v:?}"))?,
        n.trim().parse().map_err(|_| format!("bad value {n:?}"))?,
    ))
}

/// A failed invocation: message and exit status.
struct Failure(String, u8);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(msg.into(), 2)
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| usage(format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn load<T: Text>(path: &Path) -> Result<T, Failure> {
    let src = read(path)?;
    T::parse_text(&src).map_err(|e| usage(format!("{}: {e}", path.display())))
}

struct Out {
    text: String,
    hex: bool,
}

impl Out {
    fn line(&mut self, s: impl std::fmt::Display) {
        writeln!(self.text, "{s}").unwrap();
    }

    fn code(&self, n: &Nat) -> String {
        if self.hex {
            format!("0x{n:x}")
        } else {
            n.to_string()
        }
    }
}

fn parse_code(s: &str) -> Result<Nat, Failure> {
    let parsed = match s.strip_prefix("0x") {
        Some(h) => Nat::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| usage(format!("not a natural number: {s:?}")))
}

fn fuel_u64(fuel: &Nat) -> Result<u64, Failure> {
    fuel.to_u64().ok_or_else(|| usage("--fuel is too large for run"))
}

fn print_fixpoint(out: &mut Out, r: &FixpointResult) -> bool {
    out.line(format!("C: {}", r.c.to_text()));
    out.line(format!("D: {}", r.d.to_text()));
    out.line(format!("E: {}", r.e.to_text()));
    out.line(format!("code(E): {}", out.code(&r.e_code)));
    match (&r.identity, &r.g_code) {
        (Identity::Verified { bits }, Some(g)) => {
            out.line(format!("G: {}", r.g.to_text()));
            out.line(format!("code(G): {}", out.code(g)));
            out.line(format!("code(G) bits: {bits}"));
            out.line("diagonal identity: OK");
            true
        }
        (Identity::Skipped { bound }, _) => {
            out.line("G: E with x1 replaced by (lit code(E))".replace("x1", &format!("x{}", r.w)));
            out.line(format!("diagonal identity: SKIPPED (code(G) would have up to {bound} bits)"));
            false
        }
        _ => unreachable!("verified identities carry the code"),
    }
}

fn dispatch(cli: Cli) -> Result<(String, u8), Failure> {
    let mut out = Out { text: String::new(), hex: cli.hex };
    let theory = cli.theory;
    let ok = match cli.command {
        Command::Encode { file, kind } => {
            let tree = match kind {
                Kind::Term => load::<Term>(&file)?.to_tree(),
                Kind::Formula => load::<Formula>(&file)?.to_tree(),
                Kind::Program => load::<Program>(&file)?.to_tree(),
                Kind::Proof => load::<ProofTree>(&file)?.to_tree(),
            };
            let bound = numbering::code_bits_bound(&tree);
            if bound > ENCODE_BITS_LIMIT {
                return Err(Failure(format!("the code would have up to {bound} bits; refusing to build it"), 1));
            }
            out.line(out.code(&numbering::encode(&tree)));
            true
        }
        Command::Decode { code, kind } => {
            let code = if code == "-" { parse_code(read(Path::new("-"))?.trim())? } else { parse_code(&code)? };
            let cat = match kind {
                Kind::Term => Category::Term,
                Kind::Formula => Category::Formula,
                Kind::Program => Category::Program,
                Kind::Proof => Category::Proof,
            };
            let text = numbering::decode(&code, cat).map_err(|e| e.to_string()).and_then(|tree| {
                match kind {
                    Kind::Term => Term::from_tree(&tree).map(|x| x.to_text()),
                    Kind::Formula => Formula::from_tree(&tree).map(|x| x.to_text()),
                    Kind::Program => Program::from_tree(&tree).map(|x| x.to_text()),
                    Kind::Proof => ProofTree::from_tree(&tree).map(|x| x.to_text()),
                }
                .map_err(|e| e.to_string())
            });
            match text {
                Ok(t) => {
                    out.line(t);
                    true
                }
                Err(e) => {
                    eprintln!("godel: {e}");
                    false
                }
            }
        }
        Command::Run { file, args } => {
            let p: Program = load(&file)?;
            match computability::run(&p, &args, fuel_u64(&cli.fuel)?).map_err(|e| usage(e.to_string()))? {
                RunOutcome::Value(v) => {
                    out.line(v);
                    true
                }
                RunOutcome::FuelExhausted => {
                    out.line("fuel exhausted");
                    false
                }
            }
        }
        Command::Compile { file } => {
            let p: Program = load(&file)?;
            let rep = representation::compile(&p).map_err(|e| usage(e.to_string()))?;
            out.line(rep.formula.to_text());
            true
        }
        Command::Eval { file, set } => {
            let f: Formula = load(&file)?;
            let env: Env = set.into_iter().collect();
            let v = model::eval(&f, &env, &cli.cap, &diagonal::standard_oracles(theory))
                .map_err(|e| usage(e.to_string()))?;
            out.line(v);
            v == TriBool::True
        }
        Command::Check { file } => {
            let pi: ProofTree = load(&file)?;
            let valid = calculus::machine_check(&pi, theory);
            out.line(if valid { "valid" } else { "invalid" });
            valid
        }
        Command::Search { file } => {
            let a: Formula = load(&file)?;
            match calculus::decide_both(&a, &cli.fuel, theory) {
                Decision::Proved(x) => {
                    out.line(format!("proved {}", out.code(&x)));
                    true
                }
                Decision::Refuted(x) => {
                    out.line(format!("refuted {}", out.code(&x)));
                    true
                }
                Decision::NotFound => {
                    out.line("not found");
                    false
                }
            }
        }
        Command::BoundedProvable { file, bound } => {
            let a: Formula = load(&file)?;
            let found = calculus::bounded_provable(&a, &bound, theory);
            out.line(found);
            found
        }
        Command::HaltingFormula { file, args } => {
            let p: Program = load(&file)?;
            out.line(representation::to_halting_formula(&p, &args).map_err(|e| usage(e.to_string()))?.to_text());
            true
        }
        Command::Fixpoint { kind, c, p } => {
            let r = match kind {
                FixKind::Godel => diagonal::godel_sentence(),
                FixKind::Henkin => diagonal::henkin_sentence(),
                FixKind::Rosser => diagonal::rosser_sentence(),
                FixKind::Loeb => {
                    let p = match p {
                        Some(path) => load(&path)?,
                        None => Formula::Bottom,
                    };
                    diagonal::loeb_sentence(&p).map_err(|e| usage(e.to_string()))?
                }
                FixKind::Custom => {
                    let c: Formula = load(&c.ok_or_else(|| usage("--kind custom needs --c FILE"))?)?;
                    diagonal::fixpoint(&c).map_err(|e| usage(e.to_string()))?
                }
            };
            print_fixpoint(&mut out, &r)
        }
    };
    Ok((out.text, if ok { 0 } else { 1 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match dispatch(cli) {
        Ok((text, status)) => {
            let written = match &output {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(status),
                Err(e) => {
                    eprintln!("godel: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(Failure(msg, status)) => {
            eprintln!("godel: {msg}");
            ExitCode::from(status)
        }
    }
}
