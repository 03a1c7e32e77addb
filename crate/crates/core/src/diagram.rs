//! Sorted string-diagram terms and their sorting discipline.
//!
//! A [`Term`] is the abstract syntax of a diagram built from generators, the
//! structural constructors (identity, symmetry, copy, delete, merge), and
//! sequential (`;`) and parallel (`*`) composition. Terms are plain ASTs:
//! two terms that differ only by the laws of symmetric monoidal categories
//! are different values here, and are identified downstream.
//!
//! Concrete syntax:
//!
//! ```text
//! term ::= par (";" par)*
//! par  ::= atom ("*" atom)*
//! atom ::= "(" term ")" | keyword ["[" sort ("," sort)* "]"] | generator
//! keyword ::= id | sw | cp | dl | mu | un | empty
//! ```
//!
//! Sort annotations may be omitted when the signature has exactly one sort.

use std::fmt;

use thiserror::Error;

use crate::lex::{tokenize_line, Cursor, ParseError, Pos, Tok, Token};

/// The name of the sort used by single-sorted theories that declare none.
pub const DEFAULT_SORT: &str = "A";

/// A named colour of wire.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn default_sort() -> Self {
        Sort(DEFAULT_SORT.to_string())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A generator of a partial signature: coarity is zero or one sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenSym {
    pub name: String,
    pub arity: Vec<Sort>,
    pub coarity: Option<Sort>,
}

impl GenSym {
    pub fn new(name: impl Into<String>, arity: Vec<Sort>, coarity: Option<Sort>) -> Self {
        Self {
            name: name.into(),
            arity,
            coarity,
        }
    }

    pub fn sort_type(&self) -> SortType {
        SortType {
            ins: self.arity.clone(),
            outs: self.coarity.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{generator}` mentions undeclared sort `{sort}`")]
    UndeclaredSort { generator: String, sort: String },
    #[error("`{0}` is a reserved keyword")]
    Reserved(String),
}

pub(crate) const KEYWORDS: &[&str] = &["id", "sw", "cp", "dl", "mu", "un", "empty"];

/// Sorts and generators available to a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<Sort>,
    gens: Vec<GenSym>,
}

impl Signature {
    pub fn new(sorts: Vec<Sort>, gens: Vec<GenSym>) -> Result<Self, SignatureError> {
        for (i, s) in sorts.iter().enumerate() {
            if sorts[..i].contains(s) {
                return Err(SignatureError::DuplicateSort(s.0.clone()));
            }
        }
        for (i, g) in gens.iter().enumerate() {
            if KEYWORDS.contains(&g.name.as_str()) {
                return Err(SignatureError::Reserved(g.name.clone()));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(SignatureError::DuplicateGenerator(g.name.clone()));
            }
            for s in g.arity.iter().chain(&g.coarity) {
                if !sorts.contains(s) {
                    return Err(SignatureError::UndeclaredSort {
                        generator: g.name.clone(),
                        sort: s.0.clone(),
                    });
                }
            }
        }
        Ok(Self { sorts, gens })
    }

    /// One sort `A` and no generators.
    pub fn structural() -> Self {
        Self {
            sorts: vec![Sort::default_sort()],
            gens: Vec::new(),
        }
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn gens(&self) -> &[GenSym] {
        &self.gens
    }

    pub fn gen(&self, name: &str) -> Option<&GenSym> {
        self.gens.iter().find(|g| g.name == name)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// The sort assumed by unannotated keywords.
    pub fn default_sort(&self) -> Option<&Sort> {
        match self.sorts.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sorts.contains(s)
    }
}

/// A sort `(ins) → (outs)`: the dangling wires on each side of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SortType {
    pub ins: Vec<Sort>,
    pub outs: Vec<Sort>,
}

impl SortType {
    /// Wire counts `(m, n)`.
    pub fn arity(&self) -> (usize, usize) {
        (self.ins.len(), self.outs.len())
    }
}

impl fmt::Display for SortType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Sort]| v.iter().map(|s| s.0.as_str()).collect::<Vec<_>>().join(", ");
        write!(f, "({}) -> ({})", join(&self.ins), join(&self.outs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("sort mismatch: ({}) does not match ({})", join_sorts(.left), join_sorts(.right))]
    SortMismatch { left: Vec<Sort>, right: Vec<Sort> },
}

fn join_sorts(v: &[Sort]) -> String {
    v.iter().map(|s| s.0.as_str()).collect::<Vec<_>>().join(", ")
}

/// A string-diagram term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Gen(String),
    Id(Sort),
    Sym(Sort, Sort),
    Copy(Sort),
    Del(Sort),
    Mul(Sort),
    /// Unit for merge; only meaningful for the full Frobenius target.
    Unit(Sort),
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
    Empty,
}

impl Term {
    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn par(a: Term, b: Term) -> Term {
        Term::Par(Box::new(a), Box::new(b))
    }

    pub fn gen(name: impl Into<String>) -> Term {
        Term::Gen(name.into())
    }

    /// Left-nested tensor of the items; `Empty` when there are none.
    pub fn tensor_all(items: impl IntoIterator<Item = Term>) -> Term {
        items
            .into_iter()
            .reduce(Term::par)
            .unwrap_or(Term::Empty)
    }

    /// Left-nested sequence of the items; `None` when there are none.
    pub fn seq_all(items: impl IntoIterator<Item = Term>) -> Option<Term> {
        items.into_iter().reduce(Term::seq)
    }

    pub fn id_row(sorts: &[Sort]) -> Term {
        Term::tensor_all(sorts.iter().cloned().map(Term::Id))
    }

    pub fn del_row(sorts: &[Sort]) -> Term {
        Term::tensor_all(sorts.iter().cloned().map(Term::Del))
    }

    /// Wire permutation: output `j` carries input wire `perm[j]` (0-based).
    ///
    /// Built from adjacent symmetries; the identity permutation gives an
    /// identity row.
    pub fn permutation(sorts: &[Sort], perm: &[usize]) -> Term {
        assert_eq!(sorts.len(), perm.len());
        let mut rank = vec![0; perm.len()];
        for (j, &w) in perm.iter().enumerate() {
            rank[w] = j;
        }
        let mut cur: Vec<usize> = (0..sorts.len()).collect();
        let mut layers = Vec::new();
        let mut swapped = true;
        while swapped {
            swapped = false;
            for i in 0..cur.len().saturating_sub(1) {
                if rank[cur[i]] > rank[cur[i + 1]] {
                    let row = |ws: &[usize]| ws.iter().map(|&w| sorts[w].clone()).collect::<Vec<_>>();
                    let mut parts = Vec::new();
                    if i > 0 {
                        parts.push(Term::id_row(&row(&cur[..i])));
                    }
                    parts.push(Term::Sym(sorts[cur[i]].clone(), sorts[cur[i + 1]].clone()));
                    if i + 2 < cur.len() {
                        parts.push(Term::id_row(&row(&cur[i + 2..])));
                    }
                    layers.push(Term::tensor_all(parts));
                    cur.swap(i, i + 1);
                    swapped = true;
                }
            }
        }
        Term::seq_all(layers).unwrap_or_else(|| Term::id_row(sorts))
    }

    /// The diagonal `(x₁…x_m) → (x₁…x_m, x₁…x_m)` built from single copies.
    pub fn copy_row(sorts: &[Sort]) -> Term {
        let m = sorts.len();
        if m == 0 {
            return Term::Empty;
        }
        let copies = Term::tensor_all(sorts.iter().cloned().map(Term::Copy));
        if m == 1 {
            return copies;
        }
        // After the copies, wire 2i and 2i+1 both carry input i.
        let doubled: Vec<Sort> = sorts.iter().flat_map(|s| [s.clone(), s.clone()]).collect();
        let perm: Vec<usize> = (0..m).map(|i| 2 * i).chain((0..m).map(|i| 2 * i + 1)).collect();
        Term::seq(copies, Term::permutation(&doubled, &perm))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Seq(a, b) | Term::Par(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    pub fn is_generator_free(&self) -> bool {
        match self {
            Term::Gen(_) => false,
            Term::Seq(a, b) | Term::Par(a, b) => a.is_generator_free() && b.is_generator_free(),
            _ => true,
        }
    }

    pub fn contains_unit(&self) -> bool {
        match self {
            Term::Unit(_) => true,
            Term::Seq(a, b) | Term::Par(a, b) => a.contains_unit() || b.contains_unit(),
            _ => false,
        }
    }

    /// Every sort written in a constructor annotation.
    pub fn annotated_sorts(&self) -> Vec<&Sort> {
        let mut out = Vec::new();
        self.collect_sorts(&mut out);
        out
    }

    fn collect_sorts<'a>(&'a self, out: &mut Vec<&'a Sort>) {
        match self {
            Term::Id(s) | Term::Copy(s) | Term::Del(s) | Term::Mul(s) | Term::Unit(s) => out.push(s),
            Term::Sym(s, t) => {
                out.push(s);
                out.push(t);
            }
            Term::Seq(a, b) | Term::Par(a, b) => {
                a.collect_sorts(out);
                b.collect_sorts(out);
            }
            Term::Gen(_) | Term::Empty => {}
        }
    }

    /// Prints with sort annotations elided wherever they equal `default`.
    pub fn pretty(&self, default: Option<&Sort>) -> String {
        let mut s = String::new();
        write_term(&mut s, self, Ctx::Top, default);
        s
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty(None))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    SeqRight,
    ParLeft,
    ParRight,
}

fn write_term(out: &mut String, t: &Term, ctx: Ctx, default: Option<&Sort>) {
    let ann = |out: &mut String, kw: &str, sorts: &[&Sort]| {
        out.push_str(kw);
        if sorts.iter().any(|s| Some(*s) != default) {
            out.push('[');
            out.push_str(&sorts.iter().map(|s| s.0.as_str()).collect::<Vec<_>>().join(","));
            out.push(']');
        }
    };
    match t {
        Term::Gen(name) => out.push_str(name),
        Term::Id(s) => ann(out, "id", &[s]),
        Term::Sym(s, r) => ann(out, "sw", &[s, r]),
        Term::Copy(s) => ann(out, "cp", &[s]),
        Term::Del(s) => ann(out, "dl", &[s]),
        Term::Mul(s) => ann(out, "mu", &[s]),
        Term::Unit(s) => ann(out, "un", &[s]),
        Term::Empty => out.push_str("empty"),
        Term::Seq(a, b) => {
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            write_term(out, a, Ctx::Top, default);
            out.push_str(" ; ");
            write_term(out, b, Ctx::SeqRight, default);
            if wrap {
                out.push(')');
            }
        }
        Term::Par(a, b) => {
            let wrap = ctx == Ctx::ParRight;
            if wrap {
                out.push('(');
            }
            write_term(out, a, Ctx::ParLeft, default);
            out.push_str(" * ");
            write_term(out, b, Ctx::ParRight, default);
            if wrap {
                out.push(')');
            }
        }
    }
}

/// The unique sort of `t`, if it has one.
pub fn sort_of(t: &Term, sig: &Signature) -> Result<SortType, DiagramError> {
    let one = |s: &Sort| vec![s.clone()];
    Ok(match t {
        Term::Gen(name) => sig
            .gen(name)
            .ok_or_else(|| DiagramError::UnknownGenerator(name.clone()))?
            .sort_type(),
        Term::Id(s) => SortType {
            ins: one(s),
            outs: one(s),
        },
        Term::Sym(s, r) => SortType {
            ins: vec![s.clone(), r.clone()],
            outs: vec![r.clone(), s.clone()],
        },
        Term::Copy(s) => SortType {
            ins: one(s),
            outs: vec![s.clone(), s.clone()],
        },
        Term::Del(s) => SortType {
            ins: one(s),
            outs: Vec::new(),
        },
        Term::Mul(s) => SortType {
            ins: vec![s.clone(), s.clone()],
            outs: one(s),
        },
        Term::Unit(s) => SortType {
            ins: Vec::new(),
            outs: one(s),
        },
        Term::Empty => SortType {
            ins: Vec::new(),
            outs: Vec::new(),
        },
        Term::Seq(a, b) => {
            let sa = sort_of(a, sig)?;
            let sb = sort_of(b, sig)?;
            if sa.outs != sb.ins {
                return Err(DiagramError::SortMismatch {
                    left: sa.outs,
                    right: sb.ins,
                });
            }
            SortType {
                ins: sa.ins,
                outs: sb.outs,
            }
        }
        Term::Par(a, b) => {
            let mut sa = sort_of(a, sig)?;
            let sb = sort_of(b, sig)?;
            sa.ins.extend(sb.ins);
            sa.outs.extend(sb.outs);
            sa
        }
    })
}

/// Parses a term from text, resolving generator names against `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let toks = tokenize_line(text, 1)?;
    parse_term_tokens(&toks, sig)
}

pub(crate) fn parse_term_tokens(toks: &[Token], sig: &Signature) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(toks);
    if cur.at_end() {
        return Err(cur.unexpected("expected a term"));
    }
    let t = TermParser { sig }.seq(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

struct TermParser<'s> {
    sig: &'s Signature,
}

impl TermParser<'_> {
    fn seq(&self, cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let mut t = self.par(cur)?;
        while cur.eat(&Tok::Semi) {
            t = Term::seq(t, self.par(cur)?);
        }
        Ok(t)
    }

    fn par(&self, cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let mut t = self.atom(cur)?;
        while cur.eat(&Tok::Star) {
            t = Term::par(t, self.atom(cur)?);
        }
        Ok(t)
    }

    fn atom(&self, cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
        if cur.eat(&Tok::LParen) {
            let t = self.seq(cur)?;
            cur.expect(&Tok::RParen)?;
            return Ok(t);
        }
        let (name, pos) = cur.ident("a term")?;
        let arity = match name.as_str() {
            "empty" => return Ok(Term::Empty),
            "sw" => 2,
            "id" | "cp" | "dl" | "mu" | "un" => 1,
            _ => {
                if self.sig.gen(&name).is_none() {
                    return Err(ParseError::at(pos, format!("unknown generator `{name}`")));
                }
                return Ok(Term::Gen(name));
            }
        };
        let sorts = self.annotation(cur, &name, pos, arity)?;
        let s = sorts[0].clone();
        Ok(match name.as_str() {
            "id" => Term::Id(s),
            "sw" => Term::Sym(s, sorts[1].clone()),
            "cp" => Term::Copy(s),
            "dl" => Term::Del(s),
            "mu" => Term::Mul(s),
            _ => Term::Unit(s),
        })
    }

    fn annotation(
        &self,
        cur: &mut Cursor<'_>,
        kw: &str,
        pos: Pos,
        arity: usize,
    ) -> Result<Vec<Sort>, ParseError> {
        if !cur.eat(&Tok::LBracket) {
            let default = self.sig.default_sort().ok_or_else(|| {
                ParseError::at(
                    pos,
                    format!("`{kw}` needs a sort annotation in a multi-sorted signature"),
                )
            })?;
            return Ok(vec![default.clone(); arity]);
        }
        let mut sorts = Vec::new();
        loop {
            let (name, spos) = cur.ident("a sort")?;
            let s = Sort(name);
            if !self.sig.has_sort(&s) {
                return Err(ParseError::at(spos, format!("unknown sort `{s}`")));
            }
            sorts.push(s);
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::RBracket)?;
        if sorts.len() != arity {
            return Err(ParseError::at(
                pos,
                format!("`{kw}` takes {arity} sort(s), got {}", sorts.len()),
            ));
        }
        Ok(sorts)
    }
}
