//! Finite models in sets and partial functions.
//!
//! A model fixes a finite carrier per sort and a partial function per
//! generator, from the product of its input carriers to its output carrier.
//! Generators of coarity 0 map into the one-point set, so their tables only
//! record a domain. Equations are Kleene equalities, checked tuple by tuple.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::diagram::{sort_of, DiagramError, Signature, Sort, Term};
use crate::finpar::{compose_pfn, product_pfn, FinError, FinFun, FinPfn, TupleSpace};
use crate::lex::{tokenize_lines, Cursor, ParseError, Tok, Token};
use crate::theory::{PartialEquation, Theory};

pub const DEFAULT_SEARCH_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model does not match the signature: {0}")]
    SignatureMismatch(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("the unit `un` has no meaning in a partial model")]
    UnitNotInterpretable,
    #[error("search cap of {cap} nodes exceeded; raise PFT_SEARCH_CAP to search further")]
    CapExceeded { cap: u64 },
    #[error(transparent)]
    Fin(#[from] FinError),
}

/// Carriers and generator tables for one signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    sig: Signature,
    carriers: Vec<usize>,
    tables: Vec<FinPfn>,
}

impl Interpretation {
    /// `carriers` follows the signature's sort order, `tables` its generator
    /// order.
    pub fn new(sig: &Signature, carriers: Vec<usize>, tables: Vec<FinPfn>) -> Result<Self, ModelError> {
        let mismatch = |m: String| Err(ModelError::SignatureMismatch(m));
        if carriers.len() != sig.sorts().len() {
            return mismatch(format!("{} carriers for {} sorts", carriers.len(), sig.sorts().len()));
        }
        if tables.len() != sig.gens().len() {
            return mismatch(format!("{} tables for {} generators", tables.len(), sig.gens().len()));
        }
        let m = Self {
            sig: sig.clone(),
            carriers,
            tables,
        };
        for (i, g) in sig.gens().iter().enumerate() {
            let src = m.tuple_space(&g.arity).size();
            let tgt = m.out_size(g.coarity.as_ref());
            let t = &m.tables[i];
            if t.src() != src || t.tgt() != tgt {
                return mismatch(format!(
                    "table of `{}` is {}⇀{}, expected {src}⇀{tgt}",
                    g.name,
                    t.src(),
                    t.tgt()
                ));
            }
        }
        Ok(m)
    }

    /// Every table nowhere defined.
    pub fn empty(sig: &Signature, carriers: Vec<usize>) -> Result<Self, ModelError> {
        let mut m = Self {
            sig: sig.clone(),
            carriers,
            tables: Vec::new(),
        };
        if m.carriers.len() != sig.sorts().len() {
            return Err(ModelError::SignatureMismatch(format!(
                "{} carriers for {} sorts",
                m.carriers.len(),
                sig.sorts().len()
            )));
        }
        m.tables = sig
            .gens()
            .iter()
            .map(|g| FinPfn::nowhere(m.tuple_space(&g.arity).size(), m.out_size(g.coarity.as_ref())))
            .collect();
        Ok(m)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn carriers(&self) -> &[usize] {
        &self.carriers
    }

    pub fn tables(&self) -> &[FinPfn] {
        &self.tables
    }

    pub fn carrier(&self, s: &Sort) -> usize {
        let i = self.sig.sorts().iter().position(|t| t == s).expect("sort of this signature");
        self.carriers[i]
    }

    pub fn table(&self, gen: &str) -> Option<&FinPfn> {
        self.sig.gen_index(gen).map(|i| &self.tables[i])
    }

    pub fn tuple_space(&self, sorts: &[Sort]) -> TupleSpace {
        TupleSpace::new(sorts.iter().map(|s| self.carrier(s)).collect())
    }

    fn out_size(&self, coarity: Option<&Sort>) -> usize {
        coarity.map(|s| self.carrier(s)).unwrap_or(1)
    }

    /// The value of `gen` at a 0-based input tuple; `Some(0)` for a defined
    /// coarity-0 entry.
    pub fn lookup(&self, gen: &str, args: &[usize]) -> Option<usize> {
        let i = self.sig.gen_index(gen)?;
        let space = self.tuple_space(&self.sig.gens()[i].arity);
        self.tables[i].get(space.encode(args)).map(|v| v - 1)
    }

    /// Sets one entry; `None` makes it undefined.
    pub fn set(&mut self, gen: &str, args: &[usize], value: Option<usize>) {
        let i = self.sig.gen_index(gen).expect("generator of this signature");
        let g = &self.sig.gens()[i];
        let space = self.tuple_space(&g.arity);
        let mut mapping = self.tables[i].mapping().to_vec();
        mapping[space.encode(args) - 1] = value.map(|v| v + 1);
        self.tables[i] = FinPfn::new(self.out_size(g.coarity.as_ref()), mapping).expect("value in range");
    }

    fn check_against(&self, sig: &Signature) -> Result<(), ModelError> {
        if &self.sig != sig {
            return Err(ModelError::SignatureMismatch(
                "model was built for a different signature".into(),
            ));
        }
        Ok(())
    }
}

fn structural_pfn(t: &Term, m: &Interpretation) -> Result<FinPfn, ModelError> {
    let pfn = |tgt: usize, f: &dyn Fn(usize) -> Option<usize>, src: usize| {
        FinPfn::new(tgt, (1..=src).map(f).collect()).expect("structural map in range")
    };
    Ok(match t {
        Term::Id(s) => FinPfn::identity(m.carrier(s)),
        Term::Sym(s, r) => {
            let (a, b) = (m.carrier(s), m.carrier(r));
            pfn(a * b, &|i| Some(((i - 1) % b) * a + (i - 1) / b + 1), a * b)
        }
        Term::Copy(s) => {
            let n = m.carrier(s);
            pfn(n * n, &|i| Some((i - 1) * n + i), n)
        }
        Term::Del(s) => {
            let n = m.carrier(s);
            pfn(1, &|_| Some(1), n)
        }
        Term::Mul(s) => {
            let n = m.carrier(s);
            pfn(n, &|i| ((i - 1) / n == (i - 1) % n).then(|| (i - 1) / n + 1), n * n)
        }
        Term::Empty => FinPfn::identity(1),
        Term::Unit(_) => return Err(ModelError::UnitNotInterpretable),
        _ => unreachable!("leaf constructor"),
    })
}

/// The partial function a term denotes, from the product of its input
/// carriers to the product of its output carriers.
pub fn eval_term(thy: &Theory, m: &Interpretation, t: &Term) -> Result<FinPfn, ModelError> {
    m.check_against(thy.signature())?;
    sort_of(t, thy.signature())?;
    eval_rec(m, t)
}

fn eval_rec(m: &Interpretation, t: &Term) -> Result<FinPfn, ModelError> {
    match t {
        Term::Gen(name) => Ok(m.table(name).expect("generator resolved").clone()),
        Term::Seq(a, b) => Ok(compose_pfn(&eval_rec(m, a)?, &eval_rec(m, b)?)?),
        Term::Par(a, b) => Ok(product_pfn(&eval_rec(m, a)?, &eval_rec(m, b)?)),
        leaf => structural_pfn(leaf, m),
    }
}

/// Outcome of checking one equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqCheck {
    Holds,
    /// The least input tuple (0-based) where the sides differ, with the
    /// values of both sides there.
    Counterexample {
        input: Vec<usize>,
        lhs: Option<Vec<usize>>,
        rhs: Option<Vec<usize>>,
    },
}

impl EqCheck {
    pub fn holds(&self) -> bool {
        matches!(self, EqCheck::Holds)
    }
}

fn show_value(v: &Option<Vec<usize>>) -> String {
    match v {
        None => "undef".into(),
        Some(t) if t.is_empty() => "()".into(),
        Some(t) => format!("({})", join(t)),
    }
}

fn join(t: &[usize]) -> String {
    t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for EqCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqCheck::Holds => f.write_str("ok"),
            EqCheck::Counterexample { input, lhs, rhs } => write!(
                f,
                "counterexample at ({}): lhs = {}, rhs = {}",
                join(input),
                show_value(lhs),
                show_value(rhs)
            ),
        }
    }
}

/// Kleene check of one equation over every input tuple.
pub fn check_equation(thy: &Theory, m: &Interpretation, e: &PartialEquation) -> Result<EqCheck, ModelError> {
    let l = eval_term(thy, m, e.lhs())?;
    let r = eval_term(thy, m, e.rhs())?;
    let ins = m.tuple_space(&e.sort_type().ins);
    let outs = m.tuple_space(&e.sort_type().outs);
    for (i, (a, b)) in l.mapping().iter().zip(r.mapping()).enumerate() {
        if a != b {
            let decode = |v: &Option<usize>| v.map(|v| outs.decode(v));
            return Ok(EqCheck::Counterexample {
                input: ins.decode(i + 1),
                lhs: decode(a),
                rhs: decode(b),
            });
        }
    }
    Ok(EqCheck::Holds)
}

/// Per-equation results of [`check_model`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport {
    pub equations: Vec<(String, EqCheck)>,
    /// Only filled in audit mode.
    pub derived: Vec<(String, EqCheck)>,
}

impl ModelReport {
    pub fn all_hold(&self) -> bool {
        self.equations.iter().chain(&self.derived).all(|(_, c)| c.holds())
    }

    pub fn failures(&self) -> impl Iterator<Item = &(String, EqCheck)> {
        self.equations.iter().chain(&self.derived).filter(|(_, c)| !c.holds())
    }
}

/// Checks every equation of the theory; with `audit`, also the structural
/// laws and copy-naturality, which hold by construction.
pub fn check_model(thy: &Theory, m: &Interpretation, audit: bool) -> Result<ModelReport, ModelError> {
    let run = |eqs: &[PartialEquation]| -> Result<Vec<(String, EqCheck)>, ModelError> {
        eqs.iter()
            .map(|e| Ok((e.label().to_string(), check_equation(thy, m, e)?)))
            .collect()
    };
    Ok(ModelReport {
        equations: run(thy.equations())?,
        derived: if audit { run(thy.derived())? } else { Vec::new() },
    })
}

// ---------------------------------------------------------------------------
// Pointwise evaluation with unknown table entries, used by the search.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Unknown(usize),
    Undef,
    Val(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tri {
    Def,
    Undef,
    Unknown(usize),
}

#[derive(Clone, Debug)]
enum Node {
    Gen { gen: usize, has_out: bool },
    Id,
    Sym,
    Copy,
    Del,
    Mul,
    Empty,
    Seq(Box<Node>, Box<Node>),
    Par(Box<Node>, Box<Node>, usize),
}

fn compile(t: &Term, sig: &Signature) -> Result<(Node, usize), ModelError> {
    Ok(match t {
        Term::Gen(name) => {
            let gen = sig.gen_index(name).ok_or_else(|| DiagramError::UnknownGenerator(name.clone()))?;
            let g = &sig.gens()[gen];
            (
                Node::Gen {
                    gen,
                    has_out: g.coarity.is_some(),
                },
                g.arity.len(),
            )
        }
        Term::Id(_) => (Node::Id, 1),
        Term::Sym(..) => (Node::Sym, 2),
        Term::Copy(_) => (Node::Copy, 1),
        Term::Del(_) => (Node::Del, 1),
        Term::Mul(_) => (Node::Mul, 2),
        Term::Empty => (Node::Empty, 0),
        Term::Unit(_) => return Err(ModelError::UnitNotInterpretable),
        Term::Seq(a, b) => {
            let (a, k) = compile(a, sig)?;
            let (b, _) = compile(b, sig)?;
            (Node::Seq(Box::new(a), Box::new(b)), k)
        }
        Term::Par(a, b) => {
            let (a, k) = compile(a, sig)?;
            let (b, l) = compile(b, sig)?;
            (Node::Par(Box::new(a), Box::new(b), k), k + l)
        }
    })
}

fn eval_point(node: &Node, input: &[usize], out: &mut Vec<usize>, look: &dyn Fn(usize, &[usize]) -> Cell) -> Tri {
    match node {
        Node::Gen { gen, has_out } => match look(*gen, input) {
            Cell::Val(v) => {
                if *has_out {
                    out.push(v);
                }
                Tri::Def
            }
            Cell::Undef => Tri::Undef,
            Cell::Unknown(var) => Tri::Unknown(var),
        },
        Node::Id => {
            out.push(input[0]);
            Tri::Def
        }
        Node::Sym => {
            out.extend([input[1], input[0]]);
            Tri::Def
        }
        Node::Copy => {
            out.extend([input[0], input[0]]);
            Tri::Def
        }
        Node::Del | Node::Empty => Tri::Def,
        Node::Mul => {
            if input[0] == input[1] {
                out.push(input[0]);
                Tri::Def
            } else {
                Tri::Undef
            }
        }
        Node::Seq(a, b) => {
            let mut mid = Vec::new();
            match eval_point(a, input, &mut mid, look) {
                Tri::Def => eval_point(b, &mid, out, look),
                other => other,
            }
        }
        Node::Par(a, b, k) => {
            let ra = eval_point(a, &input[..*k], out, look);
            if ra == Tri::Undef {
                return Tri::Undef;
            }
            match eval_point(b, &input[*k..], out, look) {
                Tri::Undef => Tri::Undef,
                rb if ra == Tri::Def => rb,
                _ => ra,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Model enumeration.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub dedup_up_to_iso: bool,
    /// Maximum number of search nodes.
    pub cap: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            dedup_up_to_iso: false,
            cap: DEFAULT_SEARCH_CAP,
        }
    }
}

/// One table entry to be chosen: generator, encoded tuple, decoded tuple.
struct Var {
    gen: usize,
    args: Vec<usize>,
    values: usize,
}

struct Instance {
    lhs: usize,
    rhs: usize,
    input: Vec<usize>,
}

struct Search<'a> {
    vars: Vec<Var>,
    /// Variable id of entry 0 of each generator's table.
    offsets: Vec<usize>,
    spaces: Vec<TupleSpace>,
    order: Vec<usize>,
    /// `usize::MAX` unassigned, 0 undefined, `v + 1` value `v`.
    assign: Vec<usize>,
    nodes: &'a [Node],
    instances: Vec<Instance>,
    watch: Vec<Vec<usize>>,
    trail: Vec<usize>,
    visited: u64,
    cap: u64,
    found: Vec<Vec<usize>>,
}

const UNASSIGNED: usize = usize::MAX;

impl Search<'_> {
    fn cell(&self, gen: usize, args: &[usize]) -> Cell {
        let var = self.offsets[gen] + self.spaces[gen].encode(args) - 1;
        match self.assign[var] {
            UNASSIGNED => Cell::Unknown(var),
            0 => Cell::Undef,
            v => Cell::Val(v - 1),
        }
    }

    /// `Ok(None)` resolved, `Ok(Some(var))` blocked, `Err(())` violated.
    fn decide(&self, inst: &Instance) -> Result<Option<usize>, ()> {
        let look = |g: usize, a: &[usize]| self.cell(g, a);
        let (mut lo, mut ro) = (Vec::new(), Vec::new());
        let l = eval_point(&self.nodes[inst.lhs], &inst.input, &mut lo, &look);
        if let Tri::Unknown(v) = l {
            return Ok(Some(v));
        }
        let r = eval_point(&self.nodes[inst.rhs], &inst.input, &mut ro, &look);
        match (l, r) {
            (_, Tri::Unknown(v)) => Ok(Some(v)),
            (Tri::Undef, Tri::Undef) => Ok(None),
            (Tri::Def, Tri::Def) if lo == ro => Ok(None),
            _ => Err(()),
        }
    }

    fn propagate(&mut self, var: usize) -> bool {
        let n = self.watch[var].len();
        for k in 0..n {
            let inst = self.watch[var][k];
            match self.decide(&self.instances[inst]) {
                Err(()) => return false,
                Ok(None) => {}
                Ok(Some(u)) => {
                    self.watch[u].push(inst);
                    self.trail.push(u);
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let u = self.trail.pop().expect("trail entry");
            self.watch[u].pop();
        }
    }

    fn run(&mut self, pos: usize) -> Result<(), ModelError> {
        if pos == self.order.len() {
            self.found.push(self.assign.clone());
            return Ok(());
        }
        let var = self.order[pos];
        for value in 0..=self.vars[var].values {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(ModelError::CapExceeded { cap: self.cap });
            }
            self.assign[var] = value;
            let mark = self.trail.len();
            if self.propagate(var) {
                self.run(pos + 1)?;
            }
            self.undo(mark);
        }
        self.assign[var] = UNASSIGNED;
        Ok(())
    }
}

/// All models with the given carrier sizes (in sort order), in
/// lexicographic order of their tables.
///
/// Tables are compared generator by generator, entries in tuple order, with
/// undefined below every value. With `dedup_up_to_iso` only the least model
/// of each isomorphism class is kept.
pub fn enumerate_models(
    thy: &Theory,
    carriers: &[usize],
    opts: EnumOptions,
) -> Result<Vec<Interpretation>, ModelError> {
    let sig = thy.signature();
    let blank = Interpretation::empty(sig, carriers.to_vec())?;
    let mut vars = Vec::new();
    let mut offsets = Vec::new();
    let mut spaces = Vec::new();
    for (gi, g) in sig.gens().iter().enumerate() {
        offsets.push(vars.len());
        let space = blank.tuple_space(&g.arity);
        let values = blank.out_size(g.coarity.as_ref());
        for args in space.tuples() {
            vars.push(Var { gen: gi, args, values });
        }
        spaces.push(space);
    }
    let mut order: Vec<usize> = (0..vars.len()).collect();
    order.sort_by_key(|&v| {
        let var = &vars[v];
        (var.args.iter().copied().max().map_or(0, |m| m + 1), var.gen, v)
    });

    let mut nodes = Vec::new();
    let mut instances = Vec::new();
    for e in thy.equations() {
        let (l, _) = compile(e.lhs(), sig)?;
        let (r, _) = compile(e.rhs(), sig)?;
        nodes.push(l);
        nodes.push(r);
        let (lhs, rhs) = (nodes.len() - 2, nodes.len() - 1);
        for input in blank.tuple_space(&e.sort_type().ins).tuples() {
            instances.push(Instance { lhs, rhs, input });
        }
    }

    let n = vars.len();
    let mut search = Search {
        vars,
        offsets,
        spaces,
        order,
        assign: vec![UNASSIGNED; n],
        nodes: &nodes,
        instances,
        watch: vec![Vec::new(); n],
        trail: Vec::new(),
        visited: 0,
        cap: opts.cap,
        found: Vec::new(),
    };
    for i in 0..search.instances.len() {
        match search.decide(&search.instances[i]) {
            Err(()) => return Ok(Vec::new()),
            Ok(None) => {}
            Ok(Some(u)) => search.watch[u].push(i),
        }
    }
    search.run(0)?;
    let mut found = search.found;
    found.sort();
    if opts.dedup_up_to_iso {
        let mut canon: Vec<Vec<usize>> = found
            .iter()
            .map(|codes| canonical_codes(&blank, &search.vars, &search.offsets, &search.spaces, codes))
            .collect();
        canon.sort();
        canon.dedup();
        found = canon;
    }
    Ok(found
        .into_iter()
        .map(|codes| from_codes(&blank, &search.offsets, &codes))
        .collect())
}

fn from_codes(blank: &Interpretation, offsets: &[usize], codes: &[usize]) -> Interpretation {
    let mut m = blank.clone();
    for (gi, g) in blank.sig.gens().iter().enumerate() {
        let len = m.tables[gi].src();
        let mapping = codes[offsets[gi]..offsets[gi] + len]
            .iter()
            .map(|&c| (c > 0).then_some(c))
            .collect();
        m.tables[gi] = FinPfn::new(blank.out_size(g.coarity.as_ref()), mapping).expect("codes in range");
    }
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            let j = if k % 2 == 0 { i } else { 0 };
            cur.swap(j, k - 1);
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

/// Least relabelling of a model's codes over all per-sort bijections.
fn canonical_codes(
    blank: &Interpretation,
    vars: &[Var],
    offsets: &[usize],
    spaces: &[TupleSpace],
    codes: &[usize],
) -> Vec<usize> {
    let sig = &blank.sig;
    let per_sort: Vec<Vec<Vec<usize>>> = blank.carriers.iter().map(|&n| permutations(n)).collect();
    let sort_index = |s: &Sort| sig.sorts().iter().position(|t| t == s).expect("declared sort");
    let arg_sorts: Vec<Vec<usize>> = sig.gens().iter().map(|g| g.arity.iter().map(sort_index).collect()).collect();
    let out_sort: Vec<Option<usize>> = sig.gens().iter().map(|g| g.coarity.as_ref().map(sort_index)).collect();

    let mut best = codes.to_vec();
    let mut choice = vec![0usize; per_sort.len()];
    let mut relabelled = vec![0usize; codes.len()];
    let mut image = Vec::new();
    loop {
        let perm = |s: usize, x: usize| per_sort[s][choice[s]][x];
        for (v, var) in vars.iter().enumerate() {
            let g = var.gen;
            image.clear();
            image.extend(var.args.iter().zip(&arg_sorts[g]).map(|(&a, &s)| perm(s, a)));
            let target = offsets[g] + spaces[g].encode(&image) - 1;
            relabelled[target] = match (codes[v], out_sort[g]) {
                (0, _) => 0,
                (c, Some(s)) => perm(s, c - 1) + 1,
                (c, None) => c,
            };
        }
        if relabelled.cmp(&best) == Ordering::Less {
            best.clone_from(&relabelled);
        }
        // next combination of per-sort permutations
        let mut i = 0;
        loop {
            if i == choice.len() {
                return best;
            }
            choice[i] += 1;
            if choice[i] < per_sort[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Homomorphisms.

/// A total function per sort, between the carriers of two models.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortedMap {
    maps: Vec<FinFun>,
}

impl SortedMap {
    pub fn new(maps: Vec<FinFun>) -> Self {
        Self { maps }
    }

    /// From 0-based images, one list per sort.
    pub fn from_images(images: &[Vec<usize>], targets: &[usize]) -> Result<Self, FinError> {
        let maps = images
            .iter()
            .zip(targets)
            .map(|(img, &n)| FinFun::new(n, img.iter().map(|x| x + 1).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Self { maps })
    }

    pub fn maps(&self) -> &[FinFun] {
        &self.maps
    }

    /// Applies the map of sort `s` (by index) to a 0-based element.
    pub fn apply(&self, s: usize, x: usize) -> usize {
        self.maps[s].apply(x + 1) - 1
    }

    pub fn then(&self, other: &SortedMap) -> Result<SortedMap, FinError> {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(f, g)| f.then(g))
            .collect::<Result<_, _>>()?;
        Ok(SortedMap { maps })
    }

    pub fn identity(m: &Interpretation) -> SortedMap {
        SortedMap {
            maps: m.carriers.iter().map(|&n| FinFun::identity(n)).collect(),
        }
    }
}

/// Display as `S: [a0 a1 …]` per sort, 0-based.
pub fn show_sorted_map(sig: &Signature, f: &SortedMap) -> String {
    sig.sorts()
        .iter()
        .zip(&f.maps)
        .map(|(s, m)| {
            let img: Vec<String> = m.image().iter().map(|x| (x - 1).to_string()).collect();
            format!("{s}: [{}]", img.join(" "))
        })
        .collect::<Vec<_>>()
        .join("  ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomCheck {
    Ok,
    /// The first generator and 0-based input tuple in its domain where the
    /// lax square fails.
    Violation { generator: String, input: Vec<usize> },
}

impl HomCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, HomCheck::Ok)
    }
}

impl fmt::Display for HomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomCheck::Ok => f.write_str("ok"),
            HomCheck::Violation { generator, input } => {
                write!(f, "violation at `{generator}` on ({})", join(input))
            }
        }
    }
}

/// Checks that `f` is a total lax transformation: wherever a generator is
/// defined in `ma`, it is defined in `mb` at the image and the values agree.
pub fn check_hom(thy: &Theory, ma: &Interpretation, mb: &Interpretation, f: &SortedMap) -> Result<HomCheck, ModelError> {
    let sig = thy.signature();
    ma.check_against(sig)?;
    mb.check_against(sig)?;
    if f.maps.len() != sig.sorts().len()
        || f.maps.iter().zip(ma.carriers.iter().zip(&mb.carriers)).any(|(m, (&a, &b))| m.src() != a || m.tgt() != b)
    {
        return Err(ModelError::SignatureMismatch("map does not match the carriers".into()));
    }
    Ok(hom_violation(sig, ma, mb, f))
}

fn hom_violation(sig: &Signature, ma: &Interpretation, mb: &Interpretation, f: &SortedMap) -> HomCheck {
    let sort_index = |s: &Sort| sig.sorts().iter().position(|t| t == s).expect("declared sort");
    for (gi, g) in sig.gens().iter().enumerate() {
        let sa = ma.tuple_space(&g.arity);
        let sb = mb.tuple_space(&g.arity);
        let idx: Vec<usize> = g.arity.iter().map(sort_index).collect();
        for (i, v) in ma.tables[gi].mapping().iter().enumerate() {
            let Some(v) = v else { continue };
            let x = sa.decode(i + 1);
            let fx: Vec<usize> = x.iter().zip(&idx).map(|(&a, &s)| f.apply(s, a)).collect();
            let expected = g.coarity.as_ref().map_or(1, |s| f.apply(sort_index(s), v - 1) + 1);
            if mb.tables[gi].get(sb.encode(&fx)) != Some(expected) {
                return HomCheck::Violation {
                    generator: g.name.clone(),
                    input: x,
                };
            }
        }
    }
    HomCheck::Ok
}

/// All homomorphisms `ma → mb`, ordered by their images (first sort most
/// significant, each image lexicographically).
pub fn enumerate_homs(
    thy: &Theory,
    ma: &Interpretation,
    mb: &Interpretation,
    cap: u64,
) -> Result<Vec<SortedMap>, ModelError> {
    let sig = thy.signature();
    ma.check_against(sig)?;
    mb.check_against(sig)?;
    let total = ma
        .carriers
        .iter()
        .zip(&mb.carriers)
        .try_fold(1u64, |acc, (&a, &b)| acc.checked_mul((b as u64).checked_pow(a as u32)?));
    match total {
        Some(t) if t <= cap => {}
        _ => return Err(ModelError::CapExceeded { cap }),
    }
    let space = TupleSpace::new(
        ma.carriers
            .iter()
            .zip(&mb.carriers)
            .flat_map(|(&a, &b)| std::iter::repeat(b).take(a))
            .collect(),
    );
    let mut out = Vec::new();
    for digits in space.tuples() {
        let mut rest = digits.as_slice();
        let mut images = Vec::new();
        for &a in &ma.carriers {
            images.push(rest[..a].to_vec());
            rest = &rest[a..];
        }
        let f = SortedMap::from_images(&images, &mb.carriers)?;
        if hom_violation(sig, ma, mb, &f).is_ok() {
            out.push(f);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Model files.

/// A model together with the names from its file header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub theory: String,
    pub model: Interpretation,
}

impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} of {}", self.name, self.theory)?;
        f.write_str(&print_tables(&self.model))
    }
}

/// The carrier and table lines of a model file.
pub fn print_tables(m: &Interpretation) -> String {
    let mut out = String::new();
    for (s, n) in m.sig.sorts().iter().zip(&m.carriers) {
        out.push_str(&format!("carrier {s} = {n}\n"));
    }
    for (g, t) in m.sig.gens().iter().zip(&m.tables) {
        out.push_str(&format!("op {}\n", g.name));
        let space = m.tuple_space(&g.arity);
        for (i, v) in t.mapping().iter().enumerate() {
            let Some(v) = v else { continue };
            let args = space.decode(i + 1);
            let lhs: String = args.iter().map(|a| format!("{a} ")).collect();
            let rhs = if g.coarity.is_some() { (v - 1).to_string() } else { "def".into() };
            out.push_str(&format!("  {lhs}-> {rhs}\n"));
        }
    }
    out
}

/// Reads `model NAME of THEORY` without parsing the rest.
pub fn model_header(text: &str) -> Result<(String, String), ParseError> {
    let lines = tokenize_lines(text)?;
    let Some(first) = lines.first() else {
        return Err(ParseError::new(1, 1, "expected `model NAME of THEORY`"));
    };
    header(first)
}

fn header(line: &[Token]) -> Result<(String, String), ParseError> {
    let mut cur = Cursor::new(line);
    match cur.peek_tok() {
        Some(Tok::Ident(k)) if k == "model" => {
            cur.bump();
        }
        _ => return Err(cur.unexpected("expected `model NAME of THEORY`")),
    }
    let (name, _) = cur.ident("a model name")?;
    match cur.peek_tok() {
        Some(Tok::Ident(k)) if k == "of" => {
            cur.bump();
        }
        _ => return Err(cur.unexpected("expected `of`")),
    }
    let (theory, _) = cur.ident("a theory name")?;
    cur.finish()?;
    Ok((name, theory))
}

/// Parses a model file against a theory's signature.
///
/// ```text
/// model eq3 of setoid
/// carrier A = 3
/// op R
///   0 0 -> def
/// ```
pub fn parse_model(text: &str, thy: &Theory) -> Result<ModelFile, ParseError> {
    let sig = thy.signature();
    let lines = tokenize_lines(text)?;
    let Some(first) = lines.first() else {
        return Err(ParseError::new(1, 1, "expected `model NAME of THEORY`"));
    };
    let (name, theory) = header(first)?;
    let kw = |line: &[Token]| match line.first().map(|t| &t.tok) {
        Some(Tok::Ident(s)) => Some(s.clone()),
        _ => None,
    };

    let mut carriers: Vec<Option<usize>> = vec![None; sig.sorts().len()];
    for line in &lines[1..] {
        if kw(line).as_deref() != Some("carrier") {
            continue;
        }
        let mut cur = Cursor::new(line);
        cur.bump();
        let (s, spos) = cur.ident("a sort")?;
        let Some(i) = sig.sorts().iter().position(|t| t.name() == s) else {
            return Err(ParseError::at(spos, format!("unknown sort `{s}`")));
        };
        cur.expect(&Tok::Eq)?;
        let (n, _) = cur.number("a carrier size")?;
        cur.finish()?;
        if carriers[i].replace(n).is_some() {
            return Err(ParseError::at(spos, format!("carrier of `{s}` given twice")));
        }
    }
    let Some(carriers) = carriers.iter().copied().collect::<Option<Vec<_>>>() else {
        let missing = sig.sorts().iter().zip(&carriers).find(|(_, c)| c.is_none()).expect("one missing").0;
        let end = first.last().map(|t| t.pos).unwrap_or_default();
        return Err(ParseError::new(end.line, 1, format!("missing `carrier {missing} = n`")));
    };
    let mut m = Interpretation::empty(sig, carriers).expect("one carrier per sort");
    let mut seen = vec![false; sig.gens().len()];
    let mut given: Vec<Vec<bool>> = m.tables.iter().map(|t| vec![false; t.src()]).collect();
    let mut current: Option<usize> = None;
    for line in &lines[1..] {
        let mut cur = Cursor::new(line);
        match kw(line).as_deref() {
            Some("carrier") => continue,
            Some("op") => {
                cur.bump();
                let (g, gpos) = cur.ident("an operation name")?;
                cur.finish()?;
                let Some(gi) = sig.gen_index(&g) else {
                    return Err(ParseError::at(gpos, format!("unknown operation `{g}`")));
                };
                if std::mem::replace(&mut seen[gi], true) {
                    return Err(ParseError::at(gpos, format!("operation `{g}` given twice")));
                }
                current = Some(gi);
            }
            Some(other) if other != "undef" && other != "def" => {
                return Err(cur.unexpected("expected `carrier`, `op` or a table line"));
            }
            _ => {
                let Some(gi) = current else {
                    return Err(ParseError::at(line[0].pos, "table line before any `op`"));
                };
                let g = &sig.gens()[gi];
                let start = cur.pos();
                let mut args = Vec::new();
                while let Some(Tok::Num(_)) = cur.peek_tok() {
                    let (a, apos) = cur.number("an element")?;
                    let bound = g.arity.get(args.len()).map(|s| m.carrier(s));
                    match bound {
                        None => return Err(ParseError::at(apos, format!("`{}` takes {} arguments", g.name, g.arity.len()))),
                        Some(b) if a >= b => {
                            return Err(ParseError::at(apos, format!("element {a} is outside a carrier of size {b}")))
                        }
                        _ => {}
                    }
                    args.push(a);
                }
                if args.len() != g.arity.len() {
                    return Err(ParseError::at(start, format!("`{}` takes {} arguments", g.name, g.arity.len())));
                }
                cur.expect(&Tok::Arrow)?;
                let vpos = cur.pos();
                let value = match (cur.bump().map(|t| &t.tok), &g.coarity) {
                    (Some(Tok::Ident(u)), _) if u == "undef" => None,
                    (Some(Tok::Ident(d)), None) if d == "def" => Some(0),
                    (Some(Tok::Num(v)), Some(s)) => {
                        let n = m.carrier(s);
                        if *v >= n {
                            return Err(ParseError::at(vpos, format!("element {v} is outside a carrier of size {n}")));
                        }
                        Some(*v)
                    }
                    (_, Some(_)) => return Err(ParseError::at(vpos, "expected an element or `undef`")),
                    (_, None) => return Err(ParseError::at(vpos, "expected `def` or `undef`")),
                };
                cur.finish()?;
                let idx = m.tuple_space(&g.arity).encode(&args) - 1;
                if std::mem::replace(&mut given[gi][idx], true) {
                    return Err(ParseError::at(start, "entry given twice"));
                }
                let name = g.name.clone();
                m.set(&name, &args, value);
            }
        }
    }
    Ok(ModelFile { name, theory, model: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::builtin;

    fn setoid_model(n: usize, pairs: &[(usize, usize)]) -> (Theory, Interpretation) {
        let thy = builtin("setoid").unwrap();
        let mut m = Interpretation::empty(thy.signature(), vec![n]).unwrap();
        for &(a, b) in pairs {
            m.set("R", &[a, b], Some(0));
        }
        (thy, m)
    }

    fn diagonal(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|a| (a, a)).collect()
    }

    #[test]
    fn relation_lookup() {
        let (thy, m) = setoid_model(3, &diagonal(3));
        let r = eval_term(&thy, &m, &thy.parse_term("R").unwrap()).unwrap();
        assert!(r.is_defined(1));
        assert!(!r.is_defined(2));
        assert_eq!(m.lookup("R", &[0, 0]), Some(0));
        assert_eq!(m.lookup("R", &[0, 1]), None);
    }

    #[test]
    fn forced_structure() {
        let (thy, m) = setoid_model(3, &[]);
        let cp = eval_term(&thy, &m, &thy.parse_term("cp").unwrap()).unwrap();
        assert!(cp.is_total());
        assert_eq!(cp.get(2), Some(5));
        let id = eval_term(&thy, &m, &thy.parse_term("cp ; mu").unwrap()).unwrap();
        assert_eq!(id, FinPfn::identity(3));
        let sw = eval_term(&thy, &m, &thy.parse_term("sw").unwrap()).unwrap();
        // (0,1) ↦ (1,0)
        assert_eq!(sw.get(2), Some(4));
        assert!(matches!(
            eval_term(&thy, &m, &crate::diagram::parse_term("un", thy.signature()).unwrap()),
            Err(ModelError::UnitNotInterpretable)
        ));
    }

    #[test]
    fn reflexivity_counterexample_is_least() {
        let (thy, m) = setoid_model(3, &[(0, 0), (2, 2)]);
        let refl = thy.equation("refl").unwrap();
        assert_eq!(
            check_equation(&thy, &m, refl).unwrap(),
            EqCheck::Counterexample {
                input: vec![1],
                lhs: None,
                rhs: Some(vec![])
            }
        );
    }

    #[test]
    fn non_transitive_relation_fails_only_transitivity() {
        let mut pairs = diagonal(3);
        pairs.extend([(0, 1), (1, 0), (1, 2), (2, 1)]);
        let (thy, m) = setoid_model(3, &pairs);
        let report = check_model(&thy, &m, true).unwrap();
        let failed: Vec<&str> = report.failures().map(|(l, _)| l.as_str()).collect();
        assert_eq!(failed, ["trans"]);
        let (_, c) = &report.equations[2];
        assert_eq!(
            c,
            &EqCheck::Counterexample {
                input: vec![0, 1, 2],
                lhs: None,
                rhs: Some(vec![])
            }
        );
    }

    #[test]
    fn empty_carrier_is_vacuous() {
        let (thy, m) = setoid_model(0, &[]);
        assert!(check_model(&thy, &m, true).unwrap().all_hold());
    }

    #[test]
    fn addition_mod_two_is_a_commutative_monoid() {
        let thy = builtin("total_cmon").unwrap();
        let mut m = Interpretation::empty(thy.signature(), vec![2]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                m.set("m", &[a, b], Some((a + b) % 2));
            }
        }
        m.set("e", &[], Some(0));
        let report = check_model(&thy, &m, true).unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(report.equations.len(), 5);
    }

    fn count(thy: &str, n: usize) -> usize {
        enumerate_models(&builtin(thy).unwrap(), &[n], EnumOptions::default())
            .unwrap()
            .len()
    }

    #[test]
    fn setoid_counts_are_bell_numbers() {
        let got: Vec<usize> = (0..=4).map(|n| count("setoid", n)).collect();
        assert_eq!(got, [1, 1, 2, 5, 15]);
    }

    #[test]
    fn pairing_is_rigid() {
        let got: Vec<usize> = (1..=3).map(|n| count("pairing", n)).collect();
        assert_eq!(got, [1, 0, 0]);
    }

    #[test]
    fn enumeration_is_sorted_and_checked() {
        let thy = builtin("pcm").unwrap();
        let models = enumerate_models(&thy, &[2], EnumOptions::default()).unwrap();
        assert!(!models.is_empty());
        for w in models.windows(2) {
            assert!(w[0].tables() < w[1].tables());
        }
        for m in &models {
            assert!(check_model(&thy, m, true).unwrap().all_hold());
        }
    }

    #[test]
    fn dedup_keeps_one_per_class() {
        let thy = builtin("setoid").unwrap();
        let opts = EnumOptions {
            dedup_up_to_iso: true,
            ..EnumOptions::default()
        };
        // partitions of 4 elements up to relabelling: integer partitions of 4
        assert_eq!(enumerate_models(&thy, &[4], opts).unwrap().len(), 5);
        assert_eq!(enumerate_models(&thy, &[3], opts).unwrap().len(), 3);
    }

    #[test]
    fn cap_is_reported() {
        let thy = builtin("total_cmon").unwrap();
        let opts = EnumOptions {
            cap: 10,
            ..EnumOptions::default()
        };
        assert_eq!(
            enumerate_models(&thy, &[3], opts),
            Err(ModelError::CapExceeded { cap: 10 })
        );
    }

    #[test]
    fn discrete_setoid_homs_are_all_functions() {
        let (thy, a) = setoid_model(2, &diagonal(2));
        let (_, b) = setoid_model(3, &diagonal(3));
        assert_eq!(enumerate_homs(&thy, &a, &b, DEFAULT_SEARCH_CAP).unwrap().len(), 9);
    }

    #[test]
    fn codiscrete_to_discrete_homs_are_constant() {
        let (thy, a) = setoid_model(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let (_, b) = setoid_model(2, &diagonal(2));
        let homs = enumerate_homs(&thy, &a, &b, DEFAULT_SEARCH_CAP).unwrap();
        let images: Vec<&[usize]> = homs.iter().map(|f| f.maps()[0].image()).collect();
        assert_eq!(images, [&[1, 1][..], &[2, 2][..]]);
        let swap = SortedMap::from_images(&[vec![1, 0]], &[2]).unwrap();
        assert_eq!(
            check_hom(&thy, &a, &b, &swap).unwrap(),
            HomCheck::Violation {
                generator: "R".into(),
                input: vec![0, 1]
            }
        );
        assert!(check_hom(&thy, &a, &a, &SortedMap::identity(&a)).unwrap().is_ok());
    }

    #[test]
    fn model_file_round_trip() {
        let thy = builtin("setoid").unwrap();
        let text = "model eq3 of setoid\ncarrier A = 3\nop R\n  0 0 -> def\n  1 1 -> def\n  2 2 -> def\n  0 1 -> undef\n";
        let mf = parse_model(text, &thy).unwrap();
        assert_eq!(mf.name, "eq3");
        assert_eq!(mf.theory, "setoid");
        let printed = mf.to_string();
        assert_eq!(parse_model(&printed, &thy).unwrap(), mf);
        assert!(!printed.contains("undef"));
        assert_eq!(model_header(text).unwrap(), ("eq3".into(), "setoid".into()));
    }

    #[test]
    fn model_file_errors() {
        let thy = builtin("setoid").unwrap();
        let err = |t: &str| parse_model(t, &thy).unwrap_err();
        let e = err("model x of setoid\ncarrier A = 2\nop R\n0 2 -> def\n");
        assert_eq!((e.line, e.col), (4, 3));
        let e = err("model x of setoid\ncarrier A = 2\nop R\n0 -> def\n");
        assert_eq!((e.line, e.col), (4, 1));
        let e = err("model x of setoid\ncarrier A = 2\nop Q\n");
        assert_eq!((e.line, e.col), (3, 4));
        let e = err("model x of setoid\nop R\n");
        assert!(e.message.contains("missing"));
        let e = err("model x of setoid\ncarrier A = 2\nop R\n0 0 -> 1\n");
        assert_eq!((e.line, e.col), (4, 8));
    }
}
