//! The textual proof language: a parenthesized prefix syntax with one
//! declaration or definition per top-level form.
//!
//! ```text
//! (fun c 0)
//! (fun f 1)
//! (pred P 2)
//! (formula goal (exists y (atom P c y)))
//! (sequent main (seq ((h0 (forall x (exists y (atom P x y))))) (exists y (atom P c y))))
//! (proof main (exists-e (forall-e c (hyp h0)) z h (exists-i z (exists y (atom P c y)) (hyp h))))
//! (skolem sk f (x) y (atom P x y))
//! ```
//!
//! A bare identifier in term position is a constant if it was declared
//! with `(fun c 0)` and a variable otherwise. `;` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use crate::instance::SkolemSignature;
use crate::kernel::{Context, Proof, Sequent};
use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    fn new(pos: Pos, code: &'static str, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            pos,
            code,
            message: message.into(),
        }
    }

    /// `path:line:col: code: message`.
    pub fn render(&self, path: &str) -> String {
        format!("{path}:{}: {}: {}", self.pos, self.code, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.code, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Fun { name: String, arity: usize },
    Pred { name: String, arity: usize },
    Formula { name: String, formula: Formula },
    Sequent { name: String, sequent: Sequent },
    Proof { name: String, proof: Proof },
    Skolem { name: String, sig: SkolemSignature },
}

impl Item {
    fn kind(&self) -> &'static str {
        match self {
            Item::Fun { .. } => "fun",
            Item::Pred { .. } => "pred",
            Item::Formula { .. } => "formula",
            Item::Sequent { .. } => "sequent",
            Item::Proof { .. } => "proof",
            Item::Skolem { .. } => "skolem",
        }
    }

    fn name(&self) -> &str {
        match self {
            Item::Fun { name, .. }
            | Item::Pred { name, .. }
            | Item::Formula { name, .. }
            | Item::Sequent { name, .. }
            | Item::Proof { name, .. }
            | Item::Skolem { name, .. } => name,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Fun { name, arity } => write!(f, "(fun {name} {arity})"),
            Item::Pred { name, arity } => write!(f, "(pred {name} {arity})"),
            Item::Formula { name, formula } => write!(f, "(formula {name} {formula})"),
            Item::Sequent { name, sequent } => write!(f, "(sequent {name} {sequent})"),
            Item::Proof { name, proof } => write!(f, "(proof {name} {proof})"),
            Item::Skolem { name, sig } => write!(f, "(skolem {name} {sig})"),
        }
    }
}

/// A parsed file: declarations and named definitions in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    fn find(&self, kind: &str, name: &str) -> Option<&Item> {
        self.items
            .iter()
            .find(|i| i.kind() == kind && i.name() == name)
    }

    pub fn formula(&self, name: &str) -> Option<&Formula> {
        match self.find("formula", name)? {
            Item::Formula { formula, .. } => Some(formula),
            _ => None,
        }
    }

    pub fn sequent(&self, name: &str) -> Option<&Sequent> {
        match self.find("sequent", name)? {
            Item::Sequent { sequent, .. } => Some(sequent),
            _ => None,
        }
    }

    pub fn proof(&self, name: &str) -> Option<&Proof> {
        match self.find("proof", name)? {
            Item::Proof { proof, .. } => Some(proof),
            _ => None,
        }
    }

    pub fn skolem(&self, name: &str) -> Option<&SkolemSignature> {
        match self.find("skolem", name)? {
            Item::Skolem { sig, .. } => Some(sig),
            _ => None,
        }
    }

    /// The symbol declarations only.
    pub fn declarations(&self) -> Document {
        Document {
            items: self
                .items
                .iter()
                .filter(|i| matches!(i, Item::Fun { .. } | Item::Pred { .. }))
                .cloned()
                .collect(),
        }
    }

    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    pub fn functions(&self) -> BTreeMap<&str, usize> {
        self.items
            .iter()
            .filter_map(|i| match i {
                Item::Fun { name, arity } => Some((name.as_str(), *arity)),
                _ => None,
            })
            .collect()
    }
}

/// Canonical form: one item per line, single spaces, trailing newline.
impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.items {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

pub fn print(d: &Document) -> String {
    d.to_string()
}

/// Source positions of the items of a parsed document.
pub type SourceMap = Vec<Pos>;

pub fn parse(text: &str) -> Result<Document, Diagnostic> {
    parse_with_positions(text).map(|(d, _)| d)
}

pub fn parse_with_positions(text: &str) -> Result<(Document, SourceMap), Diagnostic> {
    let forms = read_all(text)?;
    let mut p = Parser {
        funs: BTreeMap::new(),
        preds: BTreeMap::new(),
        doc: Document::default(),
    };
    let mut positions = Vec::new();
    for form in &forms {
        let item = p.item(form)?;
        if p.doc.find(item.kind(), item.name()).is_some() {
            return Err(Diagnostic::new(
                form.pos(),
                "duplicate",
                format!("{} `{}` is already defined", item.kind(), item.name()),
            ));
        }
        p.doc.push(item);
        positions.push(form.pos());
    }
    Ok((p.doc, positions))
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn read_all(text: &str) -> Result<Vec<Sexp>, Diagnostic> {
    let mut r = Reader {
        chars: text.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        r.skip_space();
        if r.peek().is_none() {
            return Ok(out);
        }
        let s = r.read()?;
        if matches!(s, Sexp::Atom(..)) {
            return Err(Diagnostic::new(
                s.pos(),
                "syntax",
                "expected a parenthesized form at top level",
            ));
        }
        out.push(s);
    }
}

struct Reader {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Reader {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_space(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, Diagnostic> {
        self.skip_space();
        let start = self.pos();
        match self.peek() {
            None => Err(Diagnostic::new(start, "syntax", "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_space();
                    match self.peek() {
                        None => {
                            return Err(Diagnostic::new(
                                self.pos(),
                                "syntax",
                                "unexpected end of input, expected `)`",
                            ))
                        }
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(Diagnostic::new(start, "syntax", "unexpected `)`")),
            Some(c) if is_ident_start(c) || c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(c) = self.peek().filter(|c| is_ident_char(*c)) {
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
            Some(c) => Err(Diagnostic::new(
                start,
                "syntax",
                format!("unexpected character `{c}`"),
            )),
        }
    }
}

struct Parser {
    funs: BTreeMap<String, usize>,
    preds: BTreeMap<String, usize>,
    doc: Document,
}

fn syntax(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(pos, "syntax", msg)
}

impl Parser {
    fn ident(&self, s: &Sexp, what: &str) -> Result<String, Diagnostic> {
        match s {
            Sexp::Atom(a, _) if a.starts_with(is_ident_start) => Ok(a.clone()),
            _ => Err(syntax(s.pos(), format!("expected {what}"))),
        }
    }

    /// An identifier used as a variable binder or eigenvariable.
    fn var_name(&self, s: &Sexp) -> Result<String, Diagnostic> {
        let x = self.ident(s, "a variable")?;
        if self.funs.contains_key(&x) {
            return Err(Diagnostic::new(
                s.pos(),
                "syntax",
                format!("`{x}` is a declared function symbol"),
            ));
        }
        Ok(x)
    }

    fn number(&self, s: &Sexp) -> Result<usize, Diagnostic> {
        match s {
            Sexp::Atom(a, _) => a.parse().map_err(|_| syntax(s.pos(), "expected an arity")),
            _ => Err(syntax(s.pos(), "expected an arity")),
        }
    }

    fn list<'a>(&self, s: &'a Sexp, what: &str) -> Result<&'a [Sexp], Diagnostic> {
        match s {
            Sexp::List(items, _) => Ok(items),
            _ => Err(syntax(s.pos(), format!("expected {what}"))),
        }
    }

    fn head<'a>(&self, s: &'a Sexp, what: &str) -> Result<(String, &'a [Sexp]), Diagnostic> {
        let items = self.list(s, what)?;
        match items.split_first() {
            Some((Sexp::Atom(h, _), rest)) => Ok((h.clone(), rest)),
            _ => Err(syntax(s.pos(), format!("expected {what}"))),
        }
    }

    fn arity_check(&self, s: &Sexp, args: &[Sexp], n: usize, form: &str) -> Result<(), Diagnostic> {
        if args.len() == n {
            Ok(())
        } else {
            Err(syntax(
                s.pos(),
                format!("`{form}` takes {n} arguments, found {}", args.len()),
            ))
        }
    }

    fn item(&mut self, s: &Sexp) -> Result<Item, Diagnostic> {
        let (head, args) = self.head(s, "a top-level form")?;
        let item = match head.as_str() {
            "fun" | "pred" => {
                self.arity_check(s, args, 2, &head)?;
                let name = self.ident(&args[0], "a symbol name")?;
                let arity = self.number(&args[1])?;
                if head == "fun" {
                    if self.funs.contains_key(&name) {
                        return Err(Diagnostic::new(
                            s.pos(),
                            "duplicate",
                            format!("function `{name}` is already declared"),
                        ));
                    }
                    self.funs.insert(name.clone(), arity);
                    Item::Fun { name, arity }
                } else {
                    if self.preds.contains_key(&name) {
                        return Err(Diagnostic::new(
                            s.pos(),
                            "duplicate",
                            format!("predicate `{name}` is already declared"),
                        ));
                    }
                    self.preds.insert(name.clone(), arity);
                    Item::Pred { name, arity }
                }
            }
            "formula" => {
                self.arity_check(s, args, 2, &head)?;
                Item::Formula {
                    name: self.ident(&args[0], "a name")?,
                    formula: self.formula(&args[1])?,
                }
            }
            "sequent" => {
                self.arity_check(s, args, 2, &head)?;
                Item::Sequent {
                    name: self.ident(&args[0], "a name")?,
                    sequent: self.sequent(&args[1])?,
                }
            }
            "proof" => {
                self.arity_check(s, args, 2, &head)?;
                Item::Proof {
                    name: self.ident(&args[0], "a name")?,
                    proof: self.proof(&args[1])?,
                }
            }
            "skolem" => {
                self.arity_check(s, args, 5, &head)?;
                let name = self.ident(&args[0], "a name")?;
                let symbol = self.ident(&args[1], "a function symbol")?;
                let params = self
                    .list(&args[2], "a parameter list")?
                    .iter()
                    .map(|x| self.var_name(x))
                    .collect::<Result<Vec<_>, _>>()?;
                let witness = self.var_name(&args[3])?;
                let body = self.formula(&args[4])?;
                match self.funs.get(&symbol) {
                    None => {
                        return Err(Diagnostic::new(
                            args[1].pos(),
                            "undeclared",
                            format!("function `{symbol}` is not declared"),
                        ))
                    }
                    Some(&n) if n != params.len() => {
                        return Err(Diagnostic::new(
                            args[1].pos(),
                            "arity",
                            format!(
                                "`{symbol}` has arity {n} but the signature has {} parameters",
                                params.len()
                            ),
                        ))
                    }
                    _ => {}
                }
                let sig = SkolemSignature::new(symbol, params, witness, body)
                    .map_err(|e| Diagnostic::new(s.pos(), "signature", e.to_string()))?;
                Item::Skolem { name, sig }
            }
            other => return Err(syntax(s.pos(), format!("unknown top-level form `{other}`"))),
        };
        Ok(item)
    }

    fn term(&self, s: &Sexp) -> Result<Term, Diagnostic> {
        match s {
            Sexp::Atom(..) => {
                let x = self.ident(s, "a term")?;
                match self.funs.get(&x) {
                    Some(0) => Ok(Term::constant(x)),
                    Some(n) => Err(Diagnostic::new(
                        s.pos(),
                        "arity",
                        format!("`{x}` expects {n} arguments"),
                    )),
                    None => Ok(Term::var(x)),
                }
            }
            Sexp::List(items, pos) => {
                let Some((f, args)) = items.split_first() else {
                    return Err(syntax(*pos, "empty term"));
                };
                let f = self.ident(f, "a function symbol")?;
                match self.funs.get(&f) {
                    None => Err(Diagnostic::new(
                        *pos,
                        "undeclared",
                        format!("function `{f}` is not declared"),
                    )),
                    Some(&n) if n != args.len() => Err(Diagnostic::new(
                        *pos,
                        "arity",
                        format!("`{f}` expects {n} arguments, found {}", args.len()),
                    )),
                    Some(_) => Ok(Term::app(
                        f,
                        args.iter()
                            .map(|a| self.term(a))
                            .collect::<Result<_, _>>()?,
                    )),
                }
            }
        }
    }

    fn formula(&self, s: &Sexp) -> Result<Formula, Diagnostic> {
        if let Sexp::Atom(a, _) = s {
            return if a == "false" {
                Ok(Formula::Absurd)
            } else {
                Err(syntax(s.pos(), "expected a formula"))
            };
        }
        let (head, args) = self.head(s, "a formula")?;
        match head.as_str() {
            "atom" => {
                let Some((p, ts)) = args.split_first() else {
                    return Err(syntax(s.pos(), "`atom` needs a predicate"));
                };
                let p = self.ident(p, "a predicate")?;
                match self.preds.get(&p) {
                    None => Err(Diagnostic::new(
                        s.pos(),
                        "undeclared",
                        format!("predicate `{p}` is not declared"),
                    )),
                    Some(&n) if n != ts.len() => Err(Diagnostic::new(
                        s.pos(),
                        "arity",
                        format!("`{p}` expects {n} arguments, found {}", ts.len()),
                    )),
                    Some(_) => Ok(Formula::atom(
                        p,
                        ts.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?,
                    )),
                }
            }
            "imp" | "and" | "or" => {
                self.arity_check(s, args, 2, &head)?;
                let a = self.formula(&args[0])?;
                let b = self.formula(&args[1])?;
                Ok(match head.as_str() {
                    "imp" => Formula::implies(a, b),
                    "and" => Formula::and(a, b),
                    _ => Formula::or(a, b),
                })
            }
            "forall" | "exists" => {
                self.arity_check(s, args, 2, &head)?;
                let x = self.var_name(&args[0])?;
                let body = self.formula(&args[1])?;
                Ok(if head == "forall" {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                })
            }
            other => Err(syntax(s.pos(), format!("unknown connective `{other}`"))),
        }
    }

    fn sequent(&self, s: &Sexp) -> Result<Sequent, Diagnostic> {
        let (head, args) = self.head(s, "a sequent")?;
        if head != "seq" {
            return Err(syntax(s.pos(), "expected `(seq (hypotheses…) conclusion)`"));
        }
        self.arity_check(s, args, 2, "seq")?;
        let mut ctx = Context::new();
        for h in self.list(&args[0], "a hypothesis list")? {
            let pair = self.list(h, "a `(label formula)` pair")?;
            if pair.len() != 2 {
                return Err(syntax(h.pos(), "expected a `(label formula)` pair"));
            }
            let l = self.ident(&pair[0], "a label")?;
            let f = self.formula(&pair[1])?;
            if !ctx.push(l.clone(), f) {
                return Err(Diagnostic::new(
                    h.pos(),
                    "duplicate",
                    format!("label `{l}` appears twice"),
                ));
            }
        }
        Ok(Sequent::new(ctx, self.formula(&args[1])?))
    }

    fn proof(&self, s: &Sexp) -> Result<Proof, Diagnostic> {
        let (head, a) = self.head(s, "a proof")?;
        let n = |k: usize| self.arity_check(s, a, k, &head);
        let p = match head.as_str() {
            "hyp" => {
                n(1)?;
                Proof::hyp(self.ident(&a[0], "a label")?)
            }
            "imp-i" => {
                n(3)?;
                Proof::imp_intro(
                    self.ident(&a[0], "a label")?,
                    self.formula(&a[1])?,
                    self.proof(&a[2])?,
                )
            }
            "imp-e" => {
                n(2)?;
                Proof::imp_elim(self.proof(&a[0])?, self.proof(&a[1])?)
            }
            "and-i" => {
                n(2)?;
                Proof::and_intro(self.proof(&a[0])?, self.proof(&a[1])?)
            }
            "and-el" => {
                n(1)?;
                Proof::and_elim_l(self.proof(&a[0])?)
            }
            "and-er" => {
                n(1)?;
                Proof::and_elim_r(self.proof(&a[0])?)
            }
            "or-il" => {
                n(2)?;
                Proof::or_intro_l(self.formula(&a[0])?, self.proof(&a[1])?)
            }
            "or-ir" => {
                n(2)?;
                Proof::or_intro_r(self.formula(&a[0])?, self.proof(&a[1])?)
            }
            "or-e" => {
                n(5)?;
                Proof::or_elim(
                    self.proof(&a[0])?,
                    self.ident(&a[1], "a label")?,
                    self.proof(&a[2])?,
                    self.ident(&a[3], "a label")?,
                    self.proof(&a[4])?,
                )
            }
            "forall-i" => {
                n(2)?;
                Proof::forall_intro(self.var_name(&a[0])?, self.proof(&a[1])?)
            }
            "forall-e" => {
                n(2)?;
                Proof::forall_elim(self.term(&a[0])?, self.proof(&a[1])?)
            }
            "exists-i" => {
                n(3)?;
                Proof::exists_intro(self.term(&a[0])?, self.formula(&a[1])?, self.proof(&a[2])?)
            }
            "exists-e" => {
                n(4)?;
                Proof::exists_elim(
                    self.proof(&a[0])?,
                    self.var_name(&a[1])?,
                    self.ident(&a[2], "a label")?,
                    self.proof(&a[3])?,
                )
            }
            "false-e" => {
                n(2)?;
                Proof::absurd_elim(self.formula(&a[0])?, self.proof(&a[1])?)
            }
            other => return Err(syntax(s.pos(), format!("unknown proof rule `{other}`"))),
        };
        Ok(p)
    }
}
