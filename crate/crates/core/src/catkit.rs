//! Finite categories given by composition tables, with brute-force limits.
//!
//! Everything here is exhaustive: limits are found by enumerating cones and
//! checking the universal property against every other cone. Composition is
//! diagrammatic throughout; `compose(f, g)` is "f, then g".

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::finpar::{compose_pfn, domain_idempotent, FinFun, FinPfn};
use crate::lex::{tokenize_lines, Cursor, ParseError, Tok, Token};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("`{0}` is not an identity-shaped arrow")]
    BadIdentity(String),
    #[error("no composite given for `{g} . {f}`")]
    MissingComposite { f: String, g: String },
    #[error("composite `{g} . {f}` = `{h}` has the wrong type")]
    IllTyped { f: String, g: String, h: String },
    #[error("identity law fails at `{0}`")]
    IdentityLaw(String),
    #[error("composition is not associative at `{h} . {g} . {f}`")]
    NotAssociative { f: String, g: String, h: String },
    #[error("{0}")]
    Precondition(String),
    #[error("not closed under {0}")]
    Closure(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ArrowInfo {
    name: String,
    src: usize,
    tgt: usize,
}

/// A finite category with an exhaustively validated composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    arrows: Vec<ArrowInfo>,
    ids: Vec<usize>,
    comp: Vec<usize>,
    homs: Vec<Vec<usize>>,
}

impl FinCat {
    /// Builds and validates a category. `arrows` are `(name, src, tgt)`,
    /// `ids[x]` is the identity of object `x`, and `compose(f, g)` gives the
    /// composite of composable arrows (f first).
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        ids: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, CatError> {
        let no = objects.len();
        let arrows: Vec<ArrowInfo> = arrows
            .into_iter()
            .map(|(name, src, tgt)| ArrowInfo { name, src, tgt })
            .collect();
        let na = arrows.len();
        for (x, &i) in ids.iter().enumerate() {
            if arrows[i].src != x || arrows[i].tgt != x {
                return Err(CatError::BadIdentity(arrows[i].name.clone()));
            }
        }
        let mut homs = vec![Vec::new(); no * no];
        for (i, a) in arrows.iter().enumerate() {
            homs[a.src * no + a.tgt].push(i);
        }
        let mut comp = vec![NONE; na * na];
        for f in 0..na {
            for g in 0..na {
                if arrows[f].tgt != arrows[g].src {
                    continue;
                }
                let name = |i: usize| arrows[i].name.clone();
                let h = compose(f, g).ok_or_else(|| CatError::MissingComposite { f: name(f), g: name(g) })?;
                if arrows[h].src != arrows[f].src || arrows[h].tgt != arrows[g].tgt {
                    return Err(CatError::IllTyped {
                        f: name(f),
                        g: name(g),
                        h: name(h),
                    });
                }
                comp[f * na + g] = h;
            }
        }
        let cat = Self {
            objects,
            arrows,
            ids,
            comp,
            homs,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<(), CatError> {
        let na = self.arrows.len();
        for f in 0..na {
            let a = &self.arrows[f];
            if self.compose(self.ids[a.src], f) != Some(f) || self.compose(f, self.ids[a.tgt]) != Some(f) {
                return Err(CatError::IdentityLaw(a.name.clone()));
            }
        }
        for f in 0..na {
            for &g in self.from(self.arrows[f].tgt) {
                let fg = self.comp[f * na + g];
                for &h in self.from(self.arrows[g].tgt) {
                    if self.comp[fg * na + h] != self.comp[f * na + self.comp[g * na + h]] {
                        return Err(CatError::NotAssociative {
                            f: self.arrows[f].name.clone(),
                            g: self.arrows[g].name.clone(),
                            h: self.arrows[h].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, f: usize) -> &str {
        &self.arrows[f].name
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.arrows[f].tgt
    }

    pub fn id(&self, x: usize) -> usize {
        self.ids[x]
    }

    /// `f` then `g`, when composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        match self.comp[f * self.arrows.len() + g] {
            NONE => None,
            h => Some(h),
        }
    }

    fn comp_unchecked(&self, f: usize, g: usize) -> usize {
        self.comp[f * self.arrows.len() + g]
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.objects.len() + y]
    }

    fn from(&self, x: usize) -> impl Iterator<Item = &usize> {
        let no = self.objects.len();
        (0..no).flat_map(move |y| self.homs[x * no + y].iter())
    }

    pub fn is_iso(&self, f: usize) -> bool {
        let (x, y) = (self.src(f), self.tgt(f));
        self.hom(y, x)
            .iter()
            .any(|&g| self.comp_unchecked(f, g) == self.ids[x] && self.comp_unchecked(g, f) == self.ids[y])
    }

    pub fn is_mono(&self, m: usize) -> bool {
        let x = self.src(m);
        (0..self.objects.len()).all(|w| {
            let hom = self.hom(w, x);
            hom.iter().enumerate().all(|(i, &f)| {
                hom[i + 1..]
                    .iter()
                    .all(|&g| self.comp_unchecked(f, m) != self.comp_unchecked(g, m))
            })
        })
    }
}

/// All monomorphisms, in arrow order.
pub fn find_monos(c: &FinCat) -> Vec<usize> {
    (0..c.arrow_count()).filter(|&m| c.is_mono(m)).collect()
}

// ---------------------------------------------------------------------------
// Limits.

/// A finite diagram: a node per object occurrence and arrow-labelled edges
/// `(from, to, arrow)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize, usize)>,
}

impl Diagram {
    pub fn terminal() -> Self {
        Self {
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn product(x: usize, y: usize) -> Self {
        Self {
            nodes: vec![x, y],
            edges: Vec::new(),
        }
    }

    pub fn equalizer(c: &FinCat, f: usize, g: usize) -> Self {
        Self {
            nodes: vec![c.src(f), c.tgt(f)],
            edges: vec![(0, 1, f), (0, 1, g)],
        }
    }

    /// The cospan `src f → Z ← src g`.
    pub fn pullback(c: &FinCat, f: usize, g: usize) -> Self {
        Self {
            nodes: vec![c.src(f), c.src(g), c.tgt(f)],
            edges: vec![(0, 2, f), (1, 2, g)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: usize,
    pub legs: Vec<usize>,
}

/// All cones over `d` with the given apex, legs in lexicographic order.
pub fn cones(c: &FinCat, d: &Diagram, apex: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut legs = vec![NONE; d.nodes.len()];
    cone_rec(c, d, apex, 0, &mut legs, &mut |l| {
        out.push(l.to_vec());
        true
    });
    out
}

/// Backtracking over legs; `visit` returns false to stop early.
fn cone_rec(
    c: &FinCat,
    d: &Diagram,
    apex: usize,
    i: usize,
    legs: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == d.nodes.len() {
        return visit(legs);
    }
    for &l in c.hom(apex, d.nodes[i]) {
        legs[i] = l;
        let ok = d.edges.iter().all(|&(a, b, e)| {
            if a.max(b) > i {
                return true;
            }
            c.comp_unchecked(legs[a], e) == legs[b]
        });
        if ok && !cone_rec(c, d, apex, i + 1, legs, visit) {
            legs[i] = NONE;
            return false;
        }
    }
    legs[i] = NONE;
    true
}

/// Whether every cone factors through `cone` in exactly one way.
pub fn is_limit(c: &FinCat, d: &Diagram, cone: &Cone) -> bool {
    let mut legs = vec![NONE; d.nodes.len()];
    (0..c.object_count()).all(|m| {
        cone_rec(c, d, m, 0, &mut legs, &mut |other| {
            let mut count = 0;
            for &u in c.hom(m, cone.apex) {
                if cone.legs.iter().zip(other).all(|(&l, &o)| c.comp_unchecked(u, l) == o) {
                    count += 1;
                    if count > 1 {
                        break;
                    }
                }
            }
            count == 1
        })
    })
}

/// The first limiting cone by apex, then legs; `None` if there is no limit.
pub fn limit_search(c: &FinCat, d: &Diagram) -> Option<Cone> {
    for apex in 0..c.object_count() {
        let mut found = None;
        let mut legs = vec![NONE; d.nodes.len()];
        cone_rec(c, d, apex, 0, &mut legs, &mut |l| {
            let cone = Cone { apex, legs: l.to_vec() };
            if is_limit(c, d, &cone) {
                found = Some(cone);
                false
            } else {
                true
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Why a category lacks finite limits, for the first missing one found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitWitness {
    Terminal,
    Product(usize, usize),
    Equalizer(usize, usize),
}

impl LimitWitness {
    pub fn describe(&self, c: &FinCat) -> String {
        match *self {
            LimitWitness::Terminal => "no terminal object".into(),
            LimitWitness::Product(x, y) => {
                format!("no product of {} and {}", c.object_name(x), c.object_name(y))
            }
            LimitWitness::Equalizer(f, g) => {
                format!("no equalizer of {} and {}", c.arrow_name(f), c.arrow_name(g))
            }
        }
    }
}

/// Terminal object, then binary products, then equalizers; stops at the
/// first one missing.
pub fn missing_limit(c: &FinCat) -> Option<LimitWitness> {
    if limit_search(c, &Diagram::terminal()).is_none() {
        return Some(LimitWitness::Terminal);
    }
    let no = c.object_count();
    for x in 0..no {
        for y in x..no {
            if limit_search(c, &Diagram::product(x, y)).is_none() {
                return Some(LimitWitness::Product(x, y));
            }
        }
    }
    for x in 0..no {
        for y in 0..no {
            let hom = c.hom(x, y);
            for (i, &f) in hom.iter().enumerate() {
                for &g in &hom[i + 1..] {
                    if limit_search(c, &Diagram::equalizer(c, f, g)).is_none() {
                        return Some(LimitWitness::Equalizer(f, g));
                    }
                }
            }
        }
    }
    None
}

pub fn has_finite_limits(c: &FinCat) -> bool {
    missing_limit(c).is_none()
}

// ---------------------------------------------------------------------------
// Finite sets.

/// The full subcategory of finite sets on the given sizes.
#[derive(Clone, Debug)]
pub struct FinSetCat {
    pub cat: FinCat,
    pub sizes: Vec<usize>,
    pub funs: Vec<FinFun>,
}

fn show_image(img: &[usize]) -> String {
    img.iter().map(|x| (x - 1).to_string()).collect::<Vec<_>>().join("")
}

/// Objects are named `n0`, `n1`, ... by size; an arrow `m->n` is named by its 0-based
/// image, e.g. `f2_10` for the swap on two elements.
pub fn finset(sizes: &[usize]) -> FinSetCat {
    let objects: Vec<String> = sizes.iter().map(|n| format!("n{n}")).collect();
    let mut arrows = Vec::new();
    let mut funs = Vec::new();
    let mut index = HashMap::new();
    for (x, &m) in sizes.iter().enumerate() {
        for (y, &n) in sizes.iter().enumerate() {
            for f in FinFun::all(m, n) {
                let name = if sizes.iter().filter(|&&s| s == n).count() > 1 {
                    format!("f{x}{y}_{}", show_image(f.image()))
                } else {
                    format!("f{m}{n}_{}", show_image(f.image()))
                };
                index.insert((x, y, f.clone()), arrows.len());
                arrows.push((name, x, y));
                funs.push(f);
            }
        }
    }
    let ids = (0..sizes.len())
        .map(|x| index[&(x, x, FinFun::identity(sizes[x]))])
        .collect();
    let cat = FinCat::new(objects, arrows.clone(), ids, |f, g| {
        let h = funs[f].then(&funs[g]).ok()?;
        index.get(&(arrows[f].1, arrows[g].2, h)).copied()
    })
    .expect("finite sets form a category");
    FinSetCat {
        cat,
        sizes: sizes.to_vec(),
        funs,
    }
}

// ---------------------------------------------------------------------------
// The partial-map category of mono-legged spans.

/// A span `X ←m− A −f→ Y` of `base`, with `m` monic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub apex: usize,
    pub mono: usize,
    pub map: usize,
}

/// `Par(C)`: objects of `C`, arrows iso-classes of mono-legged spans.
#[derive(Clone, Debug)]
pub struct ParCat {
    pub cat: FinCat,
    /// Least representative of each arrow's class.
    pub spans: Vec<Span>,
}

impl ParCat {
    /// The arrow whose class contains `s`.
    pub fn class_of(&self, base: &FinCat, s: Span) -> Option<usize> {
        let key = least_representative(base, s);
        self.spans.iter().position(|&t| t == key)
    }
}

fn least_representative(c: &FinCat, s: Span) -> Span {
    let mut best = s;
    for b in 0..c.object_count() {
        for &phi in c.hom(b, s.apex) {
            if !c.is_iso(phi) {
                continue;
            }
            let t = Span {
                apex: b,
                mono: c.comp_unchecked(phi, s.mono),
                map: c.comp_unchecked(phi, s.map),
            };
            best = best.min(t);
        }
    }
    best
}

/// Builds `Par(C)`. Only pullbacks along monos are needed, so `C` is not
/// required to have all finite limits; a missing pullback is an error.
pub fn par_construction(c: &FinCat) -> Result<ParCat, CatError> {
    let monos = find_monos(c);
    let is_mono: Vec<bool> = (0..c.arrow_count()).map(|f| monos.contains(&f)).collect();
    let no = c.object_count();
    let mut spans = Vec::new();
    let mut arrows = Vec::new();
    for x in 0..no {
        for y in 0..no {
            let mut classes: Vec<Span> = Vec::new();
            for a in 0..no {
                for &m in c.hom(a, x) {
                    if !is_mono[m] {
                        continue;
                    }
                    for &f in c.hom(a, y) {
                        let rep = least_representative(c, Span { apex: a, mono: m, map: f });
                        if !classes.contains(&rep) {
                            classes.push(rep);
                        }
                    }
                }
            }
            classes.sort();
            for s in classes {
                arrows.push((format!("[{},{}]", c.arrow_name(s.mono), c.arrow_name(s.map)), x, y));
                spans.push(s);
            }
        }
    }
    let index: HashMap<Span, usize> = spans.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = spans.len();
    let mut table = vec![NONE; n * n];
    for (i, s) in spans.iter().enumerate() {
        for (j, t) in spans.iter().enumerate() {
            if arrows[i].2 != arrows[j].1 {
                continue;
            }
            let pb = limit_search(c, &Diagram::pullback(c, s.map, t.mono)).ok_or_else(|| {
                CatError::Precondition(format!(
                    "no pullback of {} along {}",
                    c.arrow_name(s.map),
                    c.arrow_name(t.mono)
                ))
            })?;
            let composite = Span {
                apex: pb.apex,
                mono: c.comp_unchecked(pb.legs[0], s.mono),
                map: c.comp_unchecked(pb.legs[1], t.map),
            };
            table[i * n + j] = index[&least_representative(c, composite)];
        }
    }
    let ids = (0..no)
        .map(|x| index[&least_representative(c, Span { apex: x, mono: c.id(x), map: c.id(x) })])
        .collect();
    let cat = FinCat::new(
        (0..no).map(|x| c.object_name(x).to_string()).collect(),
        arrows,
        ids,
        |f, g| Some(table[f * n + g]).filter(|&h| h != NONE),
    )?;
    Ok(ParCat { cat, spans })
}

// ---------------------------------------------------------------------------
// Concrete restriction categories and total maps of split idempotents.

/// Finite sets and a family of partial functions between them, closed under
/// composition, identities and domain idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteRCat {
    names: Vec<String>,
    sizes: Vec<usize>,
    arrows: Vec<(String, usize, usize, FinPfn)>,
    index: HashMap<(usize, usize, FinPfn), usize>,
}

impl ConcreteRCat {
    pub fn new(objects: Vec<(String, usize)>, arrows: Vec<(String, usize, usize, FinPfn)>) -> Result<Self, CatError> {
        let (names, sizes): (Vec<_>, Vec<_>) = objects.into_iter().unzip();
        let mut index = HashMap::new();
        for (i, (name, x, y, f)) in arrows.iter().enumerate() {
            if f.src() != sizes[*x] || f.tgt() != sizes[*y] {
                return Err(CatError::Closure(format!("typing: `{name}` does not fit its objects")));
            }
            if index.insert((*x, *y, f.clone()), i).is_some() {
                return Err(CatError::Closure(format!("`{name}` duplicates another arrow")));
            }
        }
        let x = Self {
            names,
            sizes,
            arrows,
            index,
        };
        x.validate()?;
        Ok(x)
    }

    /// Every partial function between the given sizes.
    pub fn all_partial(sizes: &[usize]) -> Self {
        let objects: Vec<(String, usize)> = sizes.iter().map(|&n| (format!("n{n}"), n)).collect();
        let mut arrows = Vec::new();
        for (x, &m) in sizes.iter().enumerate() {
            for (y, &n) in sizes.iter().enumerate() {
                for f in FinPfn::all(m, n) {
                    let img: String = f
                        .mapping()
                        .iter()
                        .map(|v| v.map_or("x".to_string(), |v| (v - 1).to_string()))
                        .collect();
                    arrows.push((format!("p{x}{y}_{img}"), x, y, f));
                }
            }
        }
        Self::new(objects, arrows).expect("all partial functions are closed")
    }

    fn validate(&self) -> Result<(), CatError> {
        for x in 0..self.sizes.len() {
            if self.find(x, x, &FinPfn::identity(self.sizes[x])).is_none() {
                return Err(CatError::Closure(format!("identities: missing on `{}`", self.names[x])));
            }
        }
        for (name, x, _, f) in &self.arrows {
            if self.find(*x, *x, &domain_idempotent(f)).is_none() {
                return Err(CatError::Closure(format!("restriction: missing for `{name}`")));
            }
        }
        for (fname, x, y, f) in &self.arrows {
            for (gname, y2, z, g) in &self.arrows {
                if y != y2 {
                    continue;
                }
                let h = compose_pfn(f, g).expect("typed");
                if self.find(*x, *z, &h).is_none() {
                    return Err(CatError::Closure(format!("composition: `{fname}` then `{gname}`")));
                }
            }
        }
        Ok(())
    }

    fn find(&self, x: usize, y: usize, f: &FinPfn) -> Option<usize> {
        self.index.get(&(x, y, f.clone())).copied()
    }

    pub fn object_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn size(&self, x: usize) -> usize {
        self.sizes[x]
    }

    /// `(name, src, tgt, partial function)` of arrow `i`.
    pub fn arrow(&self, i: usize) -> (&str, usize, usize, &FinPfn) {
        let (n, x, y, f) = &self.arrows[i];
        (n, *x, *y, f)
    }

    pub fn composite(&self, f: usize, g: usize) -> Option<usize> {
        let (_, x, y, pf) = self.arrow(f);
        let (_, y2, z, pg) = self.arrow(g);
        if y != y2 {
            return None;
        }
        self.find(x, z, &compose_pfn(pf, pg).ok()?)
    }

    pub fn restriction(&self, f: usize) -> usize {
        let (_, x, _, pf) = self.arrow(f);
        self.find(x, x, &domain_idempotent(pf)).expect("closed under restriction")
    }

    pub fn identity(&self, x: usize) -> usize {
        self.find(x, x, &FinPfn::identity(self.sizes[x])).expect("closed under identities")
    }

    /// Builds the underlying category.
    pub fn to_fincat(&self) -> FinCat {
        FinCat::new(
            self.names.clone(),
            self.arrows.iter().map(|(n, x, y, _)| (n.clone(), *x, *y)).collect(),
            (0..self.sizes.len()).map(|x| self.identity(x)).collect(),
            |f, g| self.composite(f, g),
        )
        .expect("partial functions compose associatively")
    }
}

/// `K_t(X)` with the data needed to relate it back to `X`.
#[derive(Clone, Debug)]
pub struct KtCat {
    pub cat: FinCat,
    /// `(A, a)` for each object: an object of `X` and a restriction
    /// idempotent on it.
    pub objects: Vec<(usize, usize)>,
    /// The arrow of `X` underlying each arrow.
    pub arrows: Vec<usize>,
}

impl KtCat {
    pub fn object_of(&self, a: usize, idem: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == (a, idem))
    }

    pub fn arrow_of(&self, src: usize, tgt: usize, f: usize) -> Option<usize> {
        self.cat
            .hom(src, tgt)
            .iter()
            .copied()
            .find(|&i| self.arrows[i] == f)
    }
}

/// Objects `(A, a)` with `a` a restriction idempotent; arrows
/// `f : (A, a) → (B, b)` are arrows `f : A → B` with `f̄ = a` and
/// `f ; b = f`. The identity on `(A, a)` is `a`.
pub fn kt_totals(x: &ConcreteRCat) -> KtCat {
    let mut objects = Vec::new();
    for i in 0..x.arrow_count() {
        let (_, a, b, _) = x.arrow(i);
        if a == b && x.restriction(i) == i {
            objects.push((a, i));
        }
    }
    objects.sort();
    let mut arrows = Vec::new();
    let mut under = Vec::new();
    for (s, &(a, ia)) in objects.iter().enumerate() {
        for (t, &(b, ib)) in objects.iter().enumerate() {
            for f in 0..x.arrow_count() {
                let (name, fa, fb, _) = x.arrow(f);
                if fa == a && fb == b && x.restriction(f) == ia && x.composite(f, ib) == Some(f) {
                    arrows.push((name.to_string(), s, t));
                    under.push(f);
                }
            }
        }
    }
    let names: Vec<String> = objects
        .iter()
        .map(|&(a, i)| format!("({},{})", x.object_name(a), x.arrow(i).0))
        .collect();
    let ids: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(s, &(_, ia))| {
            (0..arrows.len())
                .find(|&k| arrows[k].1 == s && arrows[k].2 == s && under[k] == ia)
                .expect("a restriction idempotent is an arrow of its own object")
        })
        .collect();
    let cat = FinCat::new(names, arrows.clone(), ids, |f, g| {
        let h = x.composite(under[f], under[g])?;
        (0..arrows.len()).find(|&k| arrows[k].1 == arrows[f].1 && arrows[k].2 == arrows[g].2 && under[k] == h)
    })
    .expect("totals of a restriction category form a category");
    KtCat {
        cat,
        objects,
        arrows: under,
    }
}

/// The embedding `X → Par(K_t(X))`, `f ↦ [f̄, f]` over the apex `(A, f̄)`.
#[derive(Clone, Debug)]
pub struct UnitEmbedding {
    pub kt: KtCat,
    pub par: ParCat,
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
    pub functorial: bool,
    pub faithful: bool,
}

pub fn unit_embed(x: &ConcreteRCat) -> Result<UnitEmbedding, CatError> {
    let kt = kt_totals(x);
    let par = par_construction(&kt.cat)?;
    let objects: Vec<usize> = (0..x.object_count())
        .map(|a| kt.object_of(a, x.identity(a)).expect("(A, 1) is an object"))
        .collect();
    let mut arrows = Vec::new();
    for f in 0..x.arrow_count() {
        let (_, a, b, _) = x.arrow(f);
        let bar = x.restriction(f);
        let apex = kt.object_of(a, bar).expect("restriction idempotents give objects");
        let mono = kt.arrow_of(apex, objects[a], bar).expect("f̄ : (A, f̄) → (A, 1)");
        let map = kt.arrow_of(apex, objects[b], f).expect("f : (A, f̄) → (B, 1)");
        let class = par
            .class_of(&kt.cat, Span { apex, mono, map })
            .ok_or_else(|| CatError::Precondition("image span is not mono-legged".into()))?;
        arrows.push(class);
    }
    let pc = &par.cat;
    let mut functorial = (0..x.object_count()).all(|a| arrows[x.identity(a)] == pc.id(objects[a]));
    for f in 0..x.arrow_count() {
        for g in 0..x.arrow_count() {
            if let Some(h) = x.composite(f, g) {
                functorial &= pc.compose(arrows[f], arrows[g]) == Some(arrows[h]);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    let faithful = arrows.iter().all(|a| seen.insert(*a));
    Ok(UnitEmbedding {
        kt,
        par,
        objects,
        arrows,
        functorial,
        faithful,
    })
}

/// The comparison `K_t(Par(C)) → C` for a full subcategory `C` of finite
/// sets, with `Par(C)` realised as all partial functions on the same sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounitReport {
    pub functorial: bool,
    pub essentially_surjective: bool,
    pub full: bool,
    pub faithful: bool,
}

impl CounitReport {
    pub fn is_equivalence(&self) -> bool {
        self.functorial && self.essentially_surjective && self.full && self.faithful
    }
}

/// `(A, e) ↦ dom e`, sending a total map on domains to the function
/// between the domains in increasing order. Fails if some domain size is
/// not an object of `C`.
pub fn counit_finset(sizes: &[usize]) -> Result<CounitReport, CatError> {
    let c = finset(sizes);
    let x = ConcreteRCat::all_partial(sizes);
    let kt = kt_totals(&x);
    let fun_index: HashMap<(usize, usize, FinFun), usize> = (0..c.cat.arrow_count())
        .map(|f| ((c.cat.src(f), c.cat.tgt(f), c.funs[f].clone()), f))
        .collect();
    let domain = |o: usize| -> Vec<usize> {
        let (_, e) = kt.objects[o];
        x.arrow(e).3.domain()
    };
    let obj_map: Vec<usize> = (0..kt.cat.object_count())
        .map(|o| {
            let n = domain(o).len();
            sizes
                .iter()
                .position(|&s| s == n)
                .ok_or_else(|| CatError::Precondition(format!("no object of size {n}")))
        })
        .collect::<Result<_, _>>()?;
    let arrow_map: Vec<usize> = (0..kt.cat.arrow_count())
        .map(|k| {
            let (s, t) = (kt.cat.src(k), kt.cat.tgt(k));
            let (ds, dt) = (domain(s), domain(t));
            let pf = x.arrow(kt.arrows[k]).3;
            let image = ds
                .iter()
                .map(|&i| {
                    let v = pf.get(i).expect("total on the domain");
                    dt.iter().position(|&j| j == v).expect("lands in the target domain") + 1
                })
                .collect();
            let f = FinFun::new(dt.len(), image).expect("in range");
            fun_index[&(obj_map[s], obj_map[t], f)]
        })
        .collect();
    let kc = &kt.cat;
    let mut functorial = (0..kc.object_count()).all(|o| arrow_map[kc.id(o)] == c.cat.id(obj_map[o]));
    for f in 0..kc.arrow_count() {
        for g in 0..kc.arrow_count() {
            if let Some(h) = kc.compose(f, g) {
                functorial &= c.cat.compose(arrow_map[f], arrow_map[g]) == Some(arrow_map[h]);
            }
        }
    }
    let essentially_surjective = (0..sizes.len()).all(|y| obj_map.contains(&y));
    let (mut full, mut faithful) = (true, true);
    for s in 0..kc.object_count() {
        for t in 0..kc.object_count() {
            let mut images: Vec<usize> = kc.hom(s, t).iter().map(|&k| arrow_map[k]).collect();
            let n = images.len();
            images.sort();
            images.dedup();
            faithful &= images.len() == n;
            full &= images.len() == c.cat.hom(obj_map[s], obj_map[t]).len();
        }
    }
    Ok(CounitReport {
        functorial,
        essentially_surjective,
        full,
        faithful,
    })
}

// ---------------------------------------------------------------------------
// File formats.

fn keyword(line: &[Token]) -> Option<&str> {
    match line.first().map(|t| &t.tok) {
        Some(Tok::Ident(s)) => Some(s.as_str()),
        _ => None,
    }
}

/// Parses a category file:
///
/// ```text
/// objects X Y
/// arrow f : X -> Y
/// identity X = idX
/// g . f = h
/// ```
///
/// Identity arrows are declared by their `identity` line; composites with
/// identities need not be listed.
pub fn parse_fincat(text: &str) -> Result<FinCat, CatError> {
    let lines = tokenize_lines(text)?;
    let mut objects: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, usize, usize)> = Vec::new();
    let mut ids: Vec<Option<usize>> = Vec::new();
    let mut comps: HashMap<(usize, usize), usize> = HashMap::new();
    let obj = |objects: &[String], cur: &mut Cursor<'_>| -> Result<usize, ParseError> {
        let (name, pos) = cur.ident("an object")?;
        objects
            .iter()
            .position(|o| *o == name)
            .ok_or_else(|| ParseError::at(pos, format!("unknown object `{name}`")))
    };
    let arrow_named = |arrows: &[(String, usize, usize)], cur: &mut Cursor<'_>| -> Result<(usize, crate::lex::Pos), ParseError> {
        let (name, pos) = cur.ident("an arrow")?;
        let i = arrows
            .iter()
            .position(|a| a.0 == name)
            .ok_or_else(|| ParseError::at(pos, format!("unknown arrow `{name}`")))?;
        Ok((i, pos))
    };
    let fresh = |arrows: &[(String, usize, usize)], name: &str, pos| {
        if arrows.iter().any(|a| a.0 == name) {
            Err(ParseError::at(pos, format!("arrow `{name}` declared twice")))
        } else {
            Ok(())
        }
    };
    for line in &lines {
        let mut cur = Cursor::new(line);
        match keyword(line) {
            Some("objects") => {
                cur.bump();
                while !cur.at_end() {
                    let (name, pos) = cur.ident("an object name")?;
                    if objects.contains(&name) {
                        return Err(ParseError::at(pos, format!("object `{name}` declared twice")).into());
                    }
                    objects.push(name);
                    ids.push(None);
                    cur.eat(&Tok::Comma);
                }
            }
            Some("arrow") => {
                cur.bump();
                let (name, pos) = cur.ident("an arrow name")?;
                fresh(&arrows, &name, pos)?;
                cur.expect(&Tok::Colon)?;
                let x = obj(&objects, &mut cur)?;
                cur.expect(&Tok::Arrow)?;
                let y = obj(&objects, &mut cur)?;
                cur.finish()?;
                arrows.push((name, x, y));
            }
            Some("identity") => {
                cur.bump();
                let opos = cur.pos();
                let x = obj(&objects, &mut cur)?;
                cur.expect(&Tok::Eq)?;
                let (name, pos) = cur.ident("an arrow name")?;
                fresh(&arrows, &name, pos)?;
                cur.finish()?;
                if ids[x].is_some() {
                    return Err(ParseError::at(opos, format!("identity of `{}` declared twice", objects[x])).into());
                }
                ids[x] = Some(arrows.len());
                arrows.push((name, x, x));
            }
            _ => {
                let (g, gpos) = arrow_named(&arrows, &mut cur)?;
                cur.expect(&Tok::Dot)?;
                let (f, _) = arrow_named(&arrows, &mut cur)?;
                cur.expect(&Tok::Eq)?;
                let (h, _) = arrow_named(&arrows, &mut cur)?;
                cur.finish()?;
                if arrows[f].2 != arrows[g].1 {
                    return Err(ParseError::at(gpos, format!("`{}` and `{}` are not composable", arrows[g].0, arrows[f].0)).into());
                }
                if comps.insert((f, g), h).is_some() {
                    return Err(ParseError::at(gpos, "composite given twice").into());
                }
            }
        }
    }
    let ids: Vec<usize> = match ids.iter().enumerate().find(|(_, i)| i.is_none()) {
        Some((x, _)) => {
            return Err(ParseError::new(1, 1, format!("no identity declared for `{}`", objects[x])).into());
        }
        None => ids.into_iter().map(|i| i.expect("checked")).collect(),
    };
    let is_id = |f: usize| ids.contains(&f);
    FinCat::new(objects, arrows, ids.clone(), |f, g| {
        if is_id(f) {
            Some(g)
        } else if is_id(g) {
            Some(f)
        } else {
            comps.get(&(f, g)).copied()
        }
    })
}

impl fmt::Display for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objects {}", self.objects.join(" "))?;
        for (x, &i) in self.ids.iter().enumerate() {
            writeln!(f, "identity {} = {}", self.objects[x], self.arrows[i].name)?;
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if !self.ids.contains(&i) {
                writeln!(f, "arrow {} : {} -> {}", a.name, self.objects[a.src], self.objects[a.tgt])?;
            }
        }
        let na = self.arrows.len();
        for fi in 0..na {
            for gi in 0..na {
                if self.ids.contains(&fi) || self.ids.contains(&gi) {
                    continue;
                }
                if let Some(h) = self.compose(fi, gi) {
                    writeln!(f, "{} . {} = {}", self.arrows[gi].name, self.arrows[fi].name, self.arrows[h].name)?;
                }
            }
        }
        Ok(())
    }
}

/// Parses a concrete restriction category:
///
/// ```text
/// object X = 2
/// arrow f : X -> X
///   0 -> 1
///   1 -> undef
/// arrows all
/// ```
///
/// `arrows all` adds every partial function between the declared objects
/// not already listed.
pub fn parse_rcat(text: &str) -> Result<ConcreteRCat, CatError> {
    let lines = tokenize_lines(text)?;
    let mut objects: Vec<(String, usize)> = Vec::new();
    let mut arrows: Vec<(String, usize, usize, Vec<Option<usize>>)> = Vec::new();
    let mut all = false;
    let obj = |objects: &[(String, usize)], cur: &mut Cursor<'_>| -> Result<usize, ParseError> {
        let (name, pos) = cur.ident("an object")?;
        objects
            .iter()
            .position(|o| o.0 == name)
            .ok_or_else(|| ParseError::at(pos, format!("unknown object `{name}`")))
    };
    for line in &lines {
        let mut cur = Cursor::new(line);
        match keyword(line) {
            Some("object") => {
                cur.bump();
                let (name, pos) = cur.ident("an object name")?;
                if objects.iter().any(|o| o.0 == name) {
                    return Err(ParseError::at(pos, format!("object `{name}` declared twice")).into());
                }
                cur.expect(&Tok::Eq)?;
                let (n, _) = cur.number("a size")?;
                cur.finish()?;
                objects.push((name, n));
            }
            Some("arrows") => {
                cur.bump();
                match cur.ident("`all`")? {
                    (w, _) if w == "all" => all = true,
                    (_, pos) => return Err(ParseError::at(pos, "expected `all`").into()),
                }
                cur.finish()?;
            }
            Some("arrow") => {
                cur.bump();
                let (name, pos) = cur.ident("an arrow name")?;
                if arrows.iter().any(|a| a.0 == name) {
                    return Err(ParseError::at(pos, format!("arrow `{name}` declared twice")).into());
                }
                cur.expect(&Tok::Colon)?;
                let x = obj(&objects, &mut cur)?;
                cur.expect(&Tok::Arrow)?;
                let y = obj(&objects, &mut cur)?;
                cur.finish()?;
                arrows.push((name, x, y, vec![None; objects[x].1]));
            }
            _ => {
                let Some(last) = arrows.last_mut() else {
                    return Err(ParseError::at(line[0].pos, "table line before any `arrow`").into());
                };
                let (m, n) = (objects[last.1].1, objects[last.2].1);
                let (a, apos) = cur.number("an element")?;
                if a >= m {
                    return Err(ParseError::at(apos, format!("element {a} is outside a set of size {m}")).into());
                }
                cur.expect(&Tok::Arrow)?;
                let vpos = cur.pos();
                let v = match cur.bump().map(|t| &t.tok) {
                    Some(Tok::Num(v)) if *v < n => Some(*v + 1),
                    Some(Tok::Num(v)) => {
                        return Err(ParseError::at(vpos, format!("element {v} is outside a set of size {n}")).into())
                    }
                    Some(Tok::Ident(u)) if u == "undef" => None,
                    _ => return Err(ParseError::at(vpos, "expected an element or `undef`").into()),
                };
                cur.finish()?;
                last.3[a] = v;
            }
        }
    }
    let mut out: Vec<(String, usize, usize, FinPfn)> = arrows
        .into_iter()
        .map(|(name, x, y, mapping)| {
            let f = FinPfn::new(objects[y].1, mapping).expect("checked");
            (name, x, y, f)
        })
        .collect();
    if all {
        for x in 0..objects.len() {
            for y in 0..objects.len() {
                for f in FinPfn::all(objects[x].1, objects[y].1) {
                    if out.iter().any(|(_, a, b, g)| (*a, *b) == (x, y) && *g == f) {
                        continue;
                    }
                    let img: String = f
                        .mapping()
                        .iter()
                        .map(|v| v.map_or("x".to_string(), |v| (v - 1).to_string()))
                        .collect();
                    out.push((format!("{}{}_{img}", objects[x].0, objects[y].0), x, y, f));
                }
            }
        }
    }
    ConcreteRCat::new(objects, out)
}

/// Encodes a span of finite-set functions as the partial function it
/// represents: `x ↦ f(m⁻¹(x))`.
pub fn span_as_pfn(m: &FinFun, f: &FinFun) -> FinPfn {
    let mut mapping = vec![None; m.tgt()];
    for (a, &x) in m.image().iter().enumerate() {
        mapping[x - 1] = Some(f.image()[a]);
    }
    FinPfn::new(f.tgt(), mapping).expect("in range")
}
