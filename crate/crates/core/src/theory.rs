//! Partial signatures, partial equations and the theory file format.
//!
//! Inequalities `l <= r` are accepted everywhere but stored lowered to the
//! equation `bar(l) ; r = l`, where `bar(l)` is the domain idempotent of `l`
//! built from copies and deletes. The original sides are kept for printing.

use std::fmt;

use thiserror::Error;

use crate::diagram::{parse_term_tokens, sort_of, DiagramError, GenSym, Signature, SignatureError};
use crate::diagram::{Sort, SortType, Term};
use crate::lex::{tokenize_lines, Cursor, ParseError, Pos, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown builtin theory `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("equation `{label}`: {error}")]
    Diagram { label: String, error: DiagramError },
    #[error("equation `{label}`: sides have different sorts, {lhs} vs {rhs}")]
    SortsDiffer {
        label: String,
        lhs: SortType,
        rhs: SortType,
    },
    #[error("equation `{label}`: the unit `un` is not a partial-theory constructor")]
    UnitNotAllowed { label: String },
    #[error("duplicate equation label `{0}`")]
    DuplicateLabel(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A Kleene equation between two diagrams of the same sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialEquation {
    label: String,
    lhs: Term,
    rhs: Term,
    ty: SortType,
    inequality: Option<(Term, Term)>,
}

impl PartialEquation {
    pub fn new(
        label: impl Into<String>,
        lhs: Term,
        rhs: Term,
        sig: &Signature,
    ) -> Result<Self, TheoryError> {
        let label = label.into();
        let ty = check_sides(&label, &lhs, &rhs, sig)?;
        Ok(Self {
            label,
            lhs,
            rhs,
            ty,
            inequality: None,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn sort_type(&self) -> &SortType {
        &self.ty
    }

    /// The sides `(l, r)` of the inequality `l <= r` this equation lowers.
    pub fn inequality(&self) -> Option<(&Term, &Term)> {
        self.inequality.as_ref().map(|(l, r)| (l, r))
    }
}

fn check_sides(label: &str, lhs: &Term, rhs: &Term, sig: &Signature) -> Result<SortType, TheoryError> {
    let diag = |error| TheoryError::Diagram {
        label: label.to_string(),
        error,
    };
    let l = sort_of(lhs, sig).map_err(diag)?;
    let r = sort_of(rhs, sig).map_err(diag)?;
    if l != r {
        return Err(TheoryError::SortsDiffer {
            label: label.to_string(),
            lhs: l,
            rhs: r,
        });
    }
    Ok(l)
}

/// The domain idempotent of a term of sort `ty`:
/// `copy_row(X) ; (t * id_row(X)) ; (del_row(Y) * id_row(X))`.
pub fn restriction_term(t: &Term, ty: &SortType) -> Term {
    if ty.ins.is_empty() {
        return Term::seq(t.clone(), Term::del_row(&ty.outs));
    }
    let keep = Term::id_row(&ty.ins);
    Term::seq(
        Term::seq(Term::copy_row(&ty.ins), Term::par(t.clone(), keep.clone())),
        Term::par(Term::del_row(&ty.outs), keep),
    )
}

/// Lowers `lhs <= rhs` to `bar(lhs) ; rhs = lhs`.
pub fn lower_leq(
    label: impl Into<String>,
    lhs: Term,
    rhs: Term,
    sig: &Signature,
) -> Result<PartialEquation, TheoryError> {
    let label = label.into();
    let ty = check_sides(&label, &lhs, &rhs, sig)?;
    let lowered = Term::seq(restriction_term(&lhs, &ty), rhs.clone());
    Ok(PartialEquation {
        label,
        lhs: lowered,
        rhs: lhs.clone(),
        ty,
        inequality: Some((lhs, rhs)),
    })
}

/// The structural laws of the free discrete cartesian restriction prop on
/// each sort, and copy-naturality of each generator with an output.
pub fn derived_equations(sig: &Signature) -> Vec<PartialEquation> {
    let mut out = Vec::new();
    let mut push = |label: String, lhs: Term, rhs: Term| {
        out.push(PartialEquation::new(label, lhs, rhs, sig).expect("structural laws are well-sorted"));
    };
    for s in sig.sorts() {
        let id = || Term::Id(s.clone());
        let cp = || Term::Copy(s.clone());
        let mu = || Term::Mul(s.clone());
        let dl = || Term::Del(s.clone());
        let sw = || Term::Sym(s.clone(), s.clone());
        let n = s.name();
        push(
            format!("mul_assoc[{n}]"),
            Term::seq(Term::par(mu(), id()), mu()),
            Term::seq(Term::par(id(), mu()), mu()),
        );
        push(format!("mul_comm[{n}]"), Term::seq(sw(), mu()), mu());
        push(
            format!("copy_coassoc[{n}]"),
            Term::seq(cp(), Term::par(cp(), id())),
            Term::seq(cp(), Term::par(id(), cp())),
        );
        push(format!("copy_cocomm[{n}]"), Term::seq(cp(), sw()), cp());
        push(format!("copy_counit[{n}]"), Term::seq(cp(), Term::par(dl(), id())), id());
        push(
            format!("frob_left[{n}]"),
            Term::seq(Term::par(cp(), id()), Term::par(id(), mu())),
            Term::seq(mu(), cp()),
        );
        push(
            format!("frob_right[{n}]"),
            Term::seq(Term::par(id(), cp()), Term::par(mu(), id())),
            Term::seq(mu(), cp()),
        );
        push(format!("special[{n}]"), Term::seq(cp(), mu()), id());
    }
    for g in sig.gens() {
        let Some(co) = &g.coarity else { continue };
        let gen = || Term::gen(g.name.clone());
        push(
            format!("copy_nat[{}]", g.name),
            Term::seq(gen(), Term::Copy(co.clone())),
            Term::seq(Term::copy_row(&g.arity), Term::par(gen(), gen())),
        );
    }
    out
}

/// A partial signature with a list of partial equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    name: String,
    signature: Signature,
    equations: Vec<PartialEquation>,
    derived: Vec<PartialEquation>,
}

impl Theory {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        equations: Vec<PartialEquation>,
    ) -> Result<Self, TheoryError> {
        for (i, e) in equations.iter().enumerate() {
            if equations[..i].iter().any(|d| d.label == e.label) {
                return Err(TheoryError::DuplicateLabel(e.label.clone()));
            }
            check_sides(&e.label, &e.lhs, &e.rhs, &signature)?;
            if e.lhs.contains_unit() || e.rhs.contains_unit() {
                return Err(TheoryError::UnitNotAllowed {
                    label: e.label.clone(),
                });
            }
        }
        let derived = derived_equations(&signature);
        Ok(Self {
            name: name.into(),
            signature,
            equations,
            derived,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn equations(&self) -> &[PartialEquation] {
        &self.equations
    }

    pub fn derived(&self) -> &[PartialEquation] {
        &self.derived
    }

    pub fn equation(&self, label: &str) -> Option<&PartialEquation> {
        self.equations.iter().find(|e| e.label == label)
    }

    /// Parses a term over this theory's signature.
    pub fn parse_term(&self, text: &str) -> Result<Term, ParseError> {
        crate::diagram::parse_term(text, &self.signature)
    }

    pub fn pretty(&self, t: &Term) -> String {
        t.pretty(self.signature.default_sort())
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        writeln!(f, "theory {}", self.name)?;
        if sig.sorts() != [Sort::default_sort()] {
            let names: Vec<&str> = sig.sorts().iter().map(Sort::name).collect();
            writeln!(f, "sort {}", names.join(" "))?;
        }
        for g in sig.gens() {
            let ins: Vec<&str> = g.arity.iter().map(Sort::name).collect();
            let out = g.coarity.as_ref().map(Sort::name).unwrap_or("0");
            if ins.is_empty() {
                writeln!(f, "op {} : -> {out}", g.name)?;
            } else {
                writeln!(f, "op {} : {} -> {out}", g.name, ins.join(" * "))?;
            }
        }
        for e in &self.equations {
            match e.inequality() {
                Some((l, r)) => {
                    writeln!(f, "leq {} : {} <= {}", e.label, self.pretty(l), self.pretty(r))?
                }
                None => writeln!(
                    f,
                    "eq {} : {} = {}",
                    e.label,
                    self.pretty(&e.lhs),
                    self.pretty(&e.rhs)
                )?,
            }
        }
        Ok(())
    }
}

fn strip_semi(line: &[Token]) -> &[Token] {
    match line.split_last() {
        Some((last, rest)) if last.tok == Tok::Semi => rest,
        _ => line,
    }
}

fn keyword(line: &[Token]) -> Option<&str> {
    match line.first().map(|t| &t.tok) {
        Some(Tok::Ident(s)) => Some(s.as_str()),
        _ => None,
    }
}

fn parse_sorts(cur: &mut Cursor<'_>, sorts: &mut Vec<Sort>) -> Result<(), ParseError> {
    loop {
        let (name, pos) = cur.ident("a sort name")?;
        let s = Sort::new(name);
        if sorts.contains(&s) {
            return Err(ParseError::at(pos, format!("duplicate sort `{s}`")));
        }
        sorts.push(s);
        cur.eat(&Tok::Comma);
        if cur.at_end() {
            return Ok(());
        }
    }
}

fn parse_op(cur: &mut Cursor<'_>, sorts: &[Sort]) -> Result<(GenSym, Pos), ParseError> {
    let (name, pos) = cur.ident("an operation name")?;
    cur.expect(&Tok::Colon)?;
    let sort = |cur: &mut Cursor<'_>| -> Result<Sort, ParseError> {
        let (s, spos) = cur.ident("a sort")?;
        let s = Sort::new(s);
        if !sorts.contains(&s) {
            return Err(ParseError::at(spos, format!("unknown sort `{s}`")));
        }
        Ok(s)
    };
    let mut arity = Vec::new();
    if cur.peek_tok() != Some(&Tok::Arrow) {
        arity.push(sort(cur)?);
        while cur.eat(&Tok::Star) {
            arity.push(sort(cur)?);
        }
    }
    cur.expect(&Tok::Arrow)?;
    let coarity = match cur.peek_tok() {
        Some(Tok::Num(0)) => {
            cur.bump();
            None
        }
        Some(Tok::Ident(_)) => Some(sort(cur)?),
        _ => return Err(cur.unexpected("expected a sort or `0`")),
    };
    cur.finish()?;
    Ok((GenSym::new(name, arity, coarity), pos))
}

fn parse_equation(
    cur: &mut Cursor<'_>,
    sig: &Signature,
    leq: bool,
) -> Result<PartialEquation, ParseError> {
    let (label, lpos) = cur.ident("an equation label")?;
    cur.expect(&Tok::Colon)?;
    let sep = if leq { Tok::Leq } else { Tok::Eq };
    let rest = cur.rest();
    let Some(split) = rest.iter().position(|t| t.tok == sep) else {
        let at = match rest.last() {
            Some(t) => Pos {
                line: t.pos.line,
                col: t.pos.col + 1,
            },
            None => cur.pos(),
        };
        return Err(ParseError::at(at, format!("expected {sep}")));
    };
    let (l, r) = (&rest[..split], &rest[split + 1..]);
    if l.is_empty() {
        return Err(ParseError::at(rest[split].pos, "expected a term"));
    }
    if r.is_empty() {
        return Err(ParseError::at(
            Pos {
                line: rest[split].pos.line,
                col: rest[split].pos.col + 1,
            },
            "expected a term",
        ));
    }
    let lhs = parse_term_tokens(l, sig)?;
    let rhs = parse_term_tokens(r, sig)?;
    for (t, toks) in [(&lhs, l), (&rhs, r)] {
        if let Err(e) = sort_of(t, sig) {
            return Err(ParseError::at(toks[0].pos, e.to_string()));
        }
        if t.contains_unit() {
            return Err(ParseError::at(
                toks[0].pos,
                "the unit `un` is not a partial-theory constructor",
            ));
        }
    }
    let made = if leq {
        lower_leq(label, lhs, rhs, sig)
    } else {
        PartialEquation::new(label, lhs, rhs, sig)
    };
    made.map_err(|e| match e {
        TheoryError::SortsDiffer { lhs, rhs, .. } => ParseError::at(
            lpos,
            format!("sides have different sorts, {lhs} vs {rhs}"),
        ),
        other => ParseError::at(lpos, other.to_string()),
    })
}

/// Parses the line-oriented theory format.
///
/// ```text
/// theory setoid
/// op R : A * A -> 0
/// eq sym : sw ; R = R
/// leq trans : (id * cp * id) ; (R * R) <= (id * dl * id) ; R
/// ```
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let lines = tokenize_lines(text)?;
    let lines: Vec<&[Token]> = lines.iter().map(|l| strip_semi(l)).filter(|l| !l.is_empty()).collect();
    let Some(first) = lines.first() else {
        return Err(ParseError::new(1, 1, "expected `theory NAME`"));
    };
    let mut cur = Cursor::new(first);
    if keyword(first) != Some("theory") {
        return Err(cur.unexpected("expected `theory NAME`"));
    }
    cur.bump();
    let (name, _) = cur.ident("a theory name")?;
    cur.finish()?;

    let mut sorts = Vec::new();
    for line in &lines[1..] {
        if keyword(line) == Some("sort") {
            let mut cur = Cursor::new(line);
            cur.bump();
            parse_sorts(&mut cur, &mut sorts)?;
        }
    }
    if sorts.is_empty() {
        sorts.push(Sort::default_sort());
    }

    let mut sig = Signature::new(sorts.clone(), Vec::new()).expect("sorts are distinct");
    for line in &lines[1..] {
        if keyword(line) == Some("op") {
            let mut cur = Cursor::new(line);
            cur.bump();
            let (g, pos) = parse_op(&mut cur, &sorts)?;
            let mut gens = sig.gens().to_vec();
            gens.push(g);
            sig = Signature::new(sorts.clone(), gens).map_err(|e| ParseError::at(pos, e.to_string()))?;
        }
    }

    let mut equations: Vec<PartialEquation> = Vec::new();
    for line in &lines[1..] {
        let mut cur = Cursor::new(line);
        let kw = keyword(line);
        match kw {
            Some("sort") | Some("op") => continue,
            Some("eq") | Some("leq") => {
                cur.bump();
                let lpos = cur.pos();
                let e = parse_equation(&mut cur, &sig, kw == Some("leq"))?;
                if equations.iter().any(|d| d.label == e.label) {
                    return Err(ParseError::at(lpos, format!("duplicate equation label `{}`", e.label)));
                }
                equations.push(e);
            }
            Some("theory") => return Err(ParseError::at(line[0].pos, "only one `theory` line is allowed")),
            _ => return Err(cur.unexpected("expected `sort`, `op`, `eq` or `leq`")),
        }
    }
    Theory::new(name, sig, equations).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

pub const BUILTIN_NAMES: [&str; 11] = [
    "pcm",
    "total_cmon",
    "setoid",
    "pca",
    "pairing",
    "strict_moncat",
    "symm_moncat",
    "cr_cat",
    "dcr_cat",
    "cartesian_cat",
    "ccc",
];

/// Source text of a builtin theory.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "pcm" => include_str!("../theories/pcm.th"),
        "total_cmon" => include_str!("../theories/total_cmon.th"),
        "setoid" => include_str!("../theories/setoid.th"),
        "pca" => include_str!("../theories/pca.th"),
        "pairing" => include_str!("../theories/pairing.th"),
        "strict_moncat" => include_str!("../theories/strict_moncat.th"),
        "symm_moncat" => include_str!("../theories/symm_moncat.th"),
        "cr_cat" => include_str!("../theories/cr_cat.th"),
        "dcr_cat" => include_str!("../theories/dcr_cat.th"),
        "cartesian_cat" => include_str!("../theories/cartesian_cat.th"),
        "ccc" => include_str!("../theories/ccc.th"),
        _ => return None,
    })
}

pub fn builtin(name: &str) -> Result<Theory, TheoryError> {
    let src = builtin_source(name).ok_or_else(|| TheoryError::UnknownBuiltin(name.to_string()))?;
    Ok(parse_theory(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setoid_shape() {
        let t = builtin("setoid").unwrap();
        assert_eq!(t.signature().sorts().len(), 1);
        assert_eq!(t.signature().gens().len(), 1);
        assert_eq!(t.equations().len(), 3);
        let trans = t.equation("trans").unwrap();
        assert!(trans.inequality().is_some());
        assert_eq!(trans.sort_type().arity(), (3, 0));
    }

    #[test]
    fn pca_has_three_generators() {
        let t = builtin("pca").unwrap();
        let names: Vec<&str> = t.signature().gens().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["app", "k", "s"]);
    }

    #[test]
    fn total_cmon_extends_pcm() {
        let pcm = builtin("pcm").unwrap();
        let tc = builtin("total_cmon").unwrap();
        assert_eq!(pcm.signature(), tc.signature());
        assert_eq!(&tc.equations()[..3], pcm.equations());
        let extra: Vec<&str> = tc.equations()[3..].iter().map(|e| e.label()).collect();
        assert_eq!(extra, ["m_total", "e_total"]);
    }

    #[test]
    fn ccc_has_lambda_of_four_arguments() {
        let t = builtin("ccc").unwrap();
        let lam = t.signature().gen("lam").unwrap();
        assert_eq!(lam.arity.len(), 4);
        assert!(t.equation("lam_defined").is_some());
    }

    #[test]
    fn every_builtin_round_trips() {
        for name in BUILTIN_NAMES {
            let t = builtin(name).unwrap();
            assert_eq!(t.name(), name);
            let printed = t.to_string();
            let again = parse_theory(&printed).unwrap();
            assert_eq!(again, t, "{name}");
            assert_eq!(again.to_string(), printed);
        }
        assert!(matches!(builtin("groups"), Err(TheoryError::UnknownBuiltin(_))));
    }

    #[test]
    fn mismatched_sides_are_rejected() {
        let err = parse_theory("theory bad\nop m : A * A -> A\neq oops : m = id").unwrap_err();
        assert_eq!((err.line, err.col), (3, 4));
        assert!(err.message.contains("different sorts"), "{err}");
        let err = parse_theory("theory bad\neq x : cp ; dl = id").unwrap_err();
        assert_eq!((err.line, err.col), (2, 8));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_theory("theory t\nop f : B -> A").unwrap_err();
        assert_eq!((err.line, err.col), (2, 8));
        let err = parse_theory("theory t\nop f : A -> A\nop f : A -> A").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_theory("theory t\nfoo").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        let err = parse_theory("theory t\neq u : un ; dl = empty").unwrap_err();
        assert!(err.message.contains("unit"));
        let err = parse_theory("theory t\neq a : id = id\neq a : id = id").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn trailing_semicolons_and_comments() {
        let t = parse_theory("# c\ntheory t ;\nop m : A * A -> A ;\neq c : sw ; m = m ; # x\n").unwrap();
        assert_eq!(t.equations().len(), 1);
        assert_eq!(t.pretty(t.equations()[0].lhs()), "sw ; m");
    }

    #[test]
    fn lowering_shape() {
        let sig = builtin("pcm").unwrap().signature().clone();
        let a = crate::diagram::parse_term("(e * id) ; m", &sig).unwrap();
        let e = lower_leq("u", a.clone(), Term::Id(Sort::default_sort()), &sig).unwrap();
        assert_eq!(e.rhs(), &a);
        assert_eq!(
            e.lhs().pretty(sig.default_sort()),
            "cp ; (e * id ; m) * id ; dl * id ; id"
        );
        let k = crate::diagram::parse_term("e", &sig).unwrap();
        let e = lower_leq("k", k.clone(), k.clone(), &sig).unwrap();
        assert_eq!(e.lhs().pretty(sig.default_sort()), "e ; dl ; e");
    }

    #[test]
    fn derived_laws_cover_each_sort_and_generator() {
        let t = builtin("strict_moncat").unwrap();
        let labels: Vec<&str> = t.derived().iter().map(|e| e.label()).collect();
        assert!(labels.contains(&"special[O]"));
        assert!(labels.contains(&"frob_left[A]"));
        assert!(labels.contains(&"copy_nat[c]"));
        assert_eq!(labels.len(), 8 * 2 + 7);
        for e in builtin("setoid").unwrap().derived() {
            assert!(!e.label().starts_with("copy_nat"));
        }
    }
}
