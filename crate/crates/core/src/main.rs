use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use deskolem::deskolem::{deskolemize, skolemize_axiom};
use deskolem::document::{self, Document, Item, SourceMap};
use deskolem::instance::{classify, f_terms_of, is_frozen, InstanceClass};
use deskolem::kernel::{check, Sequent};
use deskolem::normalize::normalize;
use deskolem::oracle::{prove, Outcome, SearchBudget};

#[derive(Parser)]
#[command(
    name = "deskolem",
    version,
    about = "Check, normalize and deskolemize natural-deduction proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that PROOF derives SEQUENT.
    Check {
        file: PathBuf,
        proof: String,
        sequent: String,
    },
    /// Normalize a proof. Its context is the sequent of the same name
    /// unless --seq is given.
    Normalize {
        file: PathBuf,
        proof: String,
        #[arg(long)]
        seq: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Remove a Skolem axiom from a proof.
    Deskolemize {
        file: PathBuf,
        /// Proof of the existential form of the axiom.
        #[arg(long)]
        pia: String,
        /// Proof using the Skolem axiom.
        #[arg(long)]
        proof: String,
        /// Skolem signature item.
        #[arg(long)]
        sig: String,
        /// Sequent of --pia, defaults to the sequent with the same name.
        #[arg(long)]
        pia_seq: Option<String>,
        /// Sequent of --proof, defaults to the sequent with the same name.
        #[arg(long)]
        proof_seq: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replace an axiom of the form forall x.. exists y A by its Skolem form.
    SkolemizeAxiom {
        file: PathBuf,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        axiom: String,
        #[arg(long = "fun")]
        symbol: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify a formula against a Skolem signature.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        sig: String,
        #[arg(long)]
        formula: String,
        /// Also run the bounded prover on this sequent.
        #[arg(long)]
        prove: Option<String>,
    },
}

enum Failure {
    /// Exit status 2.
    Usage(String),
    /// Exit status 1.
    Rejected(String),
}

struct Input {
    path: String,
    doc: Document,
    positions: SourceMap,
}

impl Input {
    fn load(path: &PathBuf) -> Result<Input, Failure> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{shown}: {e}")))?;
        let (doc, positions) =
            document::parse_with_positions(&text).map_err(|d| Failure::Usage(d.render(&shown)))?;
        Ok(Input {
            path: shown,
            doc,
            positions,
        })
    }

    /// Diagnostic prefix for the item `kind name`.
    fn at(&self, kind: &str, name: &str) -> String {
        let pos = self
            .doc
            .items
            .iter()
            .zip(&self.positions)
            .find(|(i, _)| item_is(i, kind, name))
            .map(|(_, p)| *p)
            .unwrap_or_default();
        format!("{}:{}", self.path, pos)
    }

    fn missing(&self, kind: &str, name: &str) -> Failure {
        Failure::Usage(format!(
            "{}:1:1: undeclared: no {kind} named `{name}`",
            self.path
        ))
    }

    fn sequent(&self, name: &str) -> Result<&Sequent, Failure> {
        self.doc
            .sequent(name)
            .ok_or_else(|| self.missing("sequent", name))
    }

    fn proof(&self, name: &str) -> Result<&deskolem::Proof, Failure> {
        self.doc
            .proof(name)
            .ok_or_else(|| self.missing("proof", name))
    }
}

fn item_is(i: &Item, kind: &str, name: &str) -> bool {
    match (i, kind) {
        (Item::Proof { name: n, .. }, "proof")
        | (Item::Sequent { name: n, .. }, "sequent")
        | (Item::Skolem { name: n, .. }, "skolem")
        | (Item::Formula { name: n, .. }, "formula") => n == name,
        _ => false,
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check {
            file,
            proof,
            sequent,
        } => {
            let input = Input::load(&file)?;
            let p = input.proof(&proof)?;
            let s = input.sequent(&sequent)?;
            check(p, s).map_err(|e| {
                Failure::Rejected(format!(
                    "{}: kernel: proof {proof}: {e}",
                    input.at("proof", &proof)
                ))
            })
        }
        Command::Normalize {
            file,
            proof,
            seq,
            output,
        } => {
            let input = Input::load(&file)?;
            let seq = seq.unwrap_or_else(|| proof.clone());
            let p = input.proof(&proof)?;
            let s = input.sequent(&seq)?;
            let at = input.at("proof", &proof);
            check(p, s)
                .map_err(|e| Failure::Rejected(format!("{at}: kernel: proof {proof}: {e}")))?;
            let n = normalize(p, &s.context)
                .map_err(|e| Failure::Rejected(format!("{at}: normalize: {e}")))?;
            let mut out = input.doc.declarations();
            out.push(Item::Sequent {
                name: proof.clone(),
                sequent: s.clone(),
            });
            out.push(Item::Proof {
                name: proof,
                proof: n,
            });
            emit(&document::print(&out), &output)
        }
        Command::Deskolemize {
            file,
            pia,
            proof,
            sig,
            pia_seq,
            proof_seq,
            output,
        } => {
            let input = Input::load(&file)?;
            let pi_a = input.proof(&pia)?;
            let pi_a_seq = input.sequent(pia_seq.as_deref().unwrap_or(&pia))?;
            let p = input.proof(&proof)?;
            let s = input.sequent(proof_seq.as_deref().unwrap_or(&proof))?;
            let signature = input
                .doc
                .skolem(&sig)
                .ok_or_else(|| input.missing("skolem", &sig))?;
            let (q, qs) = deskolemize(pi_a, pi_a_seq, p, s, signature).map_err(|e| {
                Failure::Rejected(format!("{}: deskolemize: {e}", input.at("proof", &proof)))
            })?;
            let mut out = input.doc.declarations();
            out.items
                .retain(|i| !matches!(i, Item::Fun { name, .. } if name == signature.symbol()));
            out.push(Item::Sequent {
                name: proof.clone(),
                sequent: qs,
            });
            out.push(Item::Proof {
                name: proof,
                proof: q,
            });
            emit(&document::print(&out), &output)
        }
        Command::SkolemizeAxiom {
            file,
            seq,
            axiom,
            symbol,
            output,
        } => {
            let input = Input::load(&file)?;
            let s = input.sequent(&seq)?;
            if input.doc.items.iter().any(|i| matches!(i, Item::Fun { name, .. } | Item::Pred { name, .. } if *name == symbol)) {
                return Err(Failure::Rejected(format!(
                    "{}: skolemize: symbol `{symbol}` is already declared",
                    input.at("sequent", &seq)
                )));
            }
            let (ctx, signature) = skolemize_axiom(&s.context, &axiom, &symbol).map_err(|e| {
                Failure::Rejected(format!("{}: skolemize: {e}", input.at("sequent", &seq)))
            })?;
            let mut out = input.doc.declarations();
            out.push(Item::Fun {
                name: symbol.clone(),
                arity: signature.arity(),
            });
            out.push(Item::Sequent {
                name: seq,
                sequent: Sequent::new(ctx, s.conclusion.clone()),
            });
            out.push(Item::Skolem {
                name: symbol,
                sig: signature,
            });
            emit(&document::print(&out), &output)
        }
        Command::Analyze {
            file,
            sig,
            formula,
            prove: goal,
        } => {
            let input = Input::load(&file)?;
            let signature = input
                .doc
                .skolem(&sig)
                .ok_or_else(|| input.missing("skolem", &sig))?;
            let c = input
                .doc
                .formula(&formula)
                .ok_or_else(|| input.missing("formula", &formula))?;
            let mut text = String::new();
            let class = match classify(c, signature) {
                InstanceClass::PartialInstance { prefix } => {
                    format!("(class partial ({}))", join(&prefix))
                }
                InstanceClass::TotalInstance { args } => format!("(class total ({}))", join(&args)),
                InstanceClass::AllFrozen => "(class all-frozen)".to_string(),
                InstanceClass::HasUnfrozen => "(class has-unfrozen)".to_string(),
            };
            text.push_str(&class);
            text.push('\n');
            for u in f_terms_of([c], signature.symbol()) {
                let report = is_frozen(&u, c);
                let flags: Vec<&str> = report
                    .occurrences
                    .iter()
                    .map(|b| if *b { "true" } else { "false" })
                    .collect();
                text.push_str(&format!("(f-term {u} (frozen {}))\n", flags.join(" ")));
            }
            if let Some(goal) = goal {
                let s = input.sequent(&goal)?;
                match prove(s, SearchBudget::default()) {
                    Outcome::Provable(p) => text.push_str(&format!("(provable {goal} {p})\n")),
                    Outcome::Unknown => text.push_str(&format!("(unknown {goal})\n")),
                }
            }
            print!("{text}");
            Ok(())
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
