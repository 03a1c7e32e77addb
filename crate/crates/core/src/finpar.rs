//! Finite ordinals, total and partial functions between them, and cospans of
//! finite functions composed by pushout.
//!
//! Ordinals are 1-based throughout this module: the set `[n]` is
//! `{1, …, n}`, and every `image`/`mapping` entry names an element of the
//! target ordinal. Composition is written in diagrammatic order: `f ⨟ g`
//! applies `f` first.

use std::fmt;

use thiserror::Error;

/// Errors raised by the finite kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinError {
    #[error("entry {value} at position {position} lies outside [1, {bound}]")]
    OutOfRange {
        position: usize,
        value: usize,
        bound: usize,
    },
    #[error("interface mismatch: {left} does not match {right}")]
    InterfaceMismatch { left: usize, right: usize },
    #[error("left leg is not surjective")]
    NotSurjective,
    #[error("cospan is not in canonical form")]
    NotCanonical,
}

fn check_range(values: impl Iterator<Item = usize>, bound: usize) -> Result<(), FinError> {
    for (idx, value) in values.enumerate() {
        if value == 0 || value > bound {
            return Err(FinError::OutOfRange {
                position: idx + 1,
                value,
                bound,
            });
        }
    }
    Ok(())
}

/// A total function `[src] → [tgt]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFun {
    tgt: usize,
    image: Vec<usize>,
}

impl FinFun {
    pub fn new(tgt: usize, image: Vec<usize>) -> Result<Self, FinError> {
        check_range(image.iter().copied(), tgt)?;
        Ok(Self { tgt, image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            tgt: n,
            image: (1..=n).collect(),
        }
    }

    /// The unique map out of `[0]`.
    pub fn initial(tgt: usize) -> Self {
        Self {
            tgt,
            image: Vec::new(),
        }
    }

    pub fn src(&self) -> usize {
        self.image.len()
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Value at the 1-based position `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    /// `self ⨟ g`.
    pub fn then(&self, g: &FinFun) -> Result<FinFun, FinError> {
        if self.tgt != g.src() {
            return Err(FinError::InterfaceMismatch {
                left: self.tgt,
                right: g.src(),
            });
        }
        Ok(FinFun {
            tgt: g.tgt,
            image: self.image.iter().map(|&v| g.apply(v)).collect(),
        })
    }

    /// Disjoint union: positions past `self.src()` follow `g`, offset by
    /// `self.tgt()`.
    pub fn tensor(&self, g: &FinFun) -> FinFun {
        let mut image = self.image.clone();
        image.extend(g.image.iter().map(|&v| v + self.tgt));
        FinFun {
            tgt: self.tgt + g.tgt,
            image,
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.tgt];
        for &v in &self.image {
            hit[v - 1] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.tgt];
        for &v in &self.image {
            if std::mem::replace(&mut hit[v - 1], true) {
                return false;
            }
        }
        true
    }

    /// All functions `[m] → [n]` in lexicographic order of their images.
    pub fn all(m: usize, n: usize) -> impl Iterator<Item = FinFun> {
        Odometer::new(m, n).map(move |digits| FinFun {
            tgt: n,
            image: digits.into_iter().map(|d| d + 1).collect(),
        })
    }
}

impl fmt::Display for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} ", self.src(), self.tgt)?;
        write_list(f, self.image.iter())
    }
}

fn write_list<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    write!(f, "[")?;
    for (i, item) in items.enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, "]")
}

/// Counts through `radix^len` digit vectors, last digit fastest.
pub(crate) struct Odometer {
    digits: Vec<usize>,
    radix: usize,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(len: usize, radix: usize) -> Self {
        Self {
            digits: vec![0; len],
            radix,
            done: radix == 0 && len > 0,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.radix {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Lexicographic numbering of tuples over a product of finite carriers.
///
/// Elements of each carrier are 0-based; tuple ordinals are 1-based, with
/// the last coordinate varying fastest. The empty product has one tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSpace {
    radices: Vec<usize>,
    size: usize,
}

impl TupleSpace {
    pub fn new(radices: Vec<usize>) -> Self {
        let size = radices.iter().product();
        Self { radices, size }
    }

    pub fn uniform(carrier: usize, len: usize) -> Self {
        Self::new(vec![carrier; len])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn encode(&self, elems: &[usize]) -> usize {
        debug_assert_eq!(elems.len(), self.radices.len());
        1 + elems
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&x, &r)| acc * r + x)
    }

    pub fn decode(&self, ordinal: usize) -> Vec<usize> {
        let mut rest = ordinal - 1;
        let mut out = vec![0; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = rest % r;
            rest /= r;
        }
        out
    }

    /// All tuples in ordinal order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (1..=self.size).map(|i| self.decode(i))
    }
}

/// A partial function `[src] ⇀ [tgt]`; `None` marks an undefined position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinPfn {
    tgt: usize,
    mapping: Vec<Option<usize>>,
}

impl FinPfn {
    pub fn new(tgt: usize, mapping: Vec<Option<usize>>) -> Result<Self, FinError> {
        for (idx, value) in mapping.iter().enumerate() {
            if let Some(v) = *value {
                if v == 0 || v > tgt {
                    return Err(FinError::OutOfRange {
                        position: idx + 1,
                        value: v,
                        bound: tgt,
                    });
                }
            }
        }
        Ok(Self { tgt, mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            tgt: n,
            mapping: (1..=n).map(Some).collect(),
        }
    }

    /// The nowhere-defined map `[src] ⇀ [tgt]`.
    pub fn nowhere(src: usize, tgt: usize) -> Self {
        Self {
            tgt,
            mapping: vec![None; src],
        }
    }

    pub fn from_total(f: &FinFun) -> Self {
        Self {
            tgt: f.tgt,
            mapping: f.image.iter().map(|&v| Some(v)).collect(),
        }
    }

    pub fn src(&self) -> usize {
        self.mapping.len()
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn mapping(&self) -> &[Option<usize>] {
        &self.mapping
    }

    /// Value at the 1-based position `i`, if defined.
    pub fn get(&self, i: usize) -> Option<usize> {
        self.mapping[i - 1]
    }

    pub fn is_defined(&self, i: usize) -> bool {
        self.mapping[i - 1].is_some()
    }

    pub fn is_total(&self) -> bool {
        self.mapping.iter().all(Option::is_some)
    }

    /// The domain of definition, as 1-based positions.
    pub fn domain(&self) -> Vec<usize> {
        self.mapping
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|_| i + 1))
            .collect()
    }

    /// `f|_{X'}` for a subset `X'` of the source given as a membership mask.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> FinPfn {
        FinPfn {
            tgt: self.tgt,
            mapping: self
                .mapping
                .iter()
                .enumerate()
                .map(|(i, v)| if keep(i + 1) { *v } else { None })
                .collect(),
        }
    }

    /// The total function underlying a total partial function.
    pub fn to_total(&self) -> Option<FinFun> {
        let image = self.mapping.iter().copied().collect::<Option<Vec<_>>>()?;
        Some(FinFun {
            tgt: self.tgt,
            image,
        })
    }

    /// All partial functions `[m] ⇀ [n]`, undefined ordered before every
    /// value, last position fastest.
    pub fn all(m: usize, n: usize) -> impl Iterator<Item = FinPfn> {
        Odometer::new(m, n + 1).map(move |digits| FinPfn {
            tgt: n,
            mapping: digits
                .into_iter()
                .map(|d| if d == 0 { None } else { Some(d) })
                .collect(),
        })
    }
}

impl fmt::Display for FinPfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} ", self.src(), self.tgt)?;
        write_list(
            f,
            self.mapping.iter().map(|v| match v {
                Some(v) => v.to_string(),
                None => "_".to_string(),
            }),
        )
    }
}

/// `f ⨟ g`: defined at `i` iff `f` is defined at `i` and `g` at `f(i)`.
pub fn compose_pfn(f: &FinPfn, g: &FinPfn) -> Result<FinPfn, FinError> {
    if f.tgt != g.src() {
        return Err(FinError::InterfaceMismatch {
            left: f.tgt,
            right: g.src(),
        });
    }
    Ok(FinPfn {
        tgt: g.tgt,
        mapping: f
            .mapping
            .iter()
            .map(|v| v.and_then(|v| g.mapping[v - 1]))
            .collect(),
    })
}

/// Disjoint-union tensor of partial maps, lifted pointwise from 𝔽.
pub fn tensor_pfn(f: &FinPfn, g: &FinPfn) -> FinPfn {
    let mut mapping = f.mapping.clone();
    mapping.extend(g.mapping.iter().map(|v| v.map(|v| v + f.tgt)));
    FinPfn {
        tgt: f.tgt + g.tgt,
        mapping,
    }
}

/// Cartesian product of partial maps `X × Z ⇀ Y × W`.
///
/// Pairs are encoded lexicographically: `(x, z) ↦ (x − 1)·|Z| + z`. The
/// product is defined at `(x, z)` iff both factors are defined.
pub fn product_pfn(f: &FinPfn, g: &FinPfn) -> FinPfn {
    let (gs, gt) = (g.src(), g.tgt);
    let mut mapping = Vec::with_capacity(f.src() * gs);
    for fx in &f.mapping {
        for gz in &g.mapping {
            mapping.push(match (fx, gz) {
                (Some(a), Some(b)) => Some((a - 1) * gt + b),
                _ => None,
            });
        }
    }
    FinPfn {
        tgt: f.tgt * gt,
        mapping,
    }
}

/// The partial identity on the domain of definition of `f`.
pub fn domain_idempotent(f: &FinPfn) -> FinPfn {
    FinPfn {
        tgt: f.src(),
        mapping: f
            .mapping
            .iter()
            .enumerate()
            .map(|(i, v)| v.map(|_| i + 1))
            .collect(),
    }
}

/// `f ≤ g`: `dom f ⊆ dom g` and `g` agrees with `f` on `dom f`.
pub fn leq_pfn(f: &FinPfn, g: &FinPfn) -> Result<bool, FinError> {
    if f.src() != g.src() {
        return Err(FinError::InterfaceMismatch {
            left: f.src(),
            right: g.src(),
        });
    }
    if f.tgt != g.tgt {
        return Err(FinError::InterfaceMismatch {
            left: f.tgt,
            right: g.tgt,
        });
    }
    Ok(f
        .mapping
        .iter()
        .zip(&g.mapping)
        .all(|(a, b)| a.is_none() || a == b))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A pushout square: `apex` is the quotient of `k1 + k2`, with the two class
/// maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub apex: usize,
    pub inj1: FinFun,
    pub inj2: FinFun,
}

/// Pushout of the span `k1 ←f− z −g→ k2` in 𝔽.
///
/// Classes are numbered by their smallest member in the order `1..=k1`
/// followed by `1..=k2`.
pub fn pushout(f: &FinFun, g: &FinFun) -> Result<Pushout, FinError> {
    if f.src() != g.src() {
        return Err(FinError::InterfaceMismatch {
            left: f.src(),
            right: g.src(),
        });
    }
    let (k1, k2) = (f.tgt, g.tgt);
    let mut uf = UnionFind::new(k1 + k2);
    for (&a, &b) in f.image.iter().zip(&g.image) {
        uf.union(a - 1, k1 + b - 1);
    }
    let mut number = vec![0usize; k1 + k2];
    let mut apex = 0;
    let mut labels = Vec::with_capacity(k1 + k2);
    for x in 0..k1 + k2 {
        let root = uf.find(x);
        if number[root] == 0 {
            apex += 1;
            number[root] = apex;
        }
        labels.push(number[root]);
    }
    let inj2 = labels.split_off(k1);
    Ok(Pushout {
        apex,
        inj1: FinFun {
            tgt: apex,
            image: labels,
        },
        inj2: FinFun {
            tgt: apex,
            image: inj2,
        },
    })
}

/// A cospan `[m] −left→ [k] ←right− [n]` with no constraint on its legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cospan {
    left: FinFun,
    right: FinFun,
}

impl Cospan {
    pub fn new(left: FinFun, right: FinFun) -> Result<Self, FinError> {
        if left.tgt != right.tgt {
            return Err(FinError::InterfaceMismatch {
                left: left.tgt,
                right: right.tgt,
            });
        }
        Ok(Self { left, right })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            left: FinFun::identity(n),
            right: FinFun::identity(n),
        }
    }

    pub fn m(&self) -> usize {
        self.left.src()
    }

    pub fn n(&self) -> usize {
        self.right.src()
    }

    pub fn apex(&self) -> usize {
        self.left.tgt
    }

    pub fn left(&self) -> &FinFun {
        &self.left
    }

    pub fn right(&self) -> &FinFun {
        &self.right
    }

    /// Composition by pushout, followed by canonical relabelling.
    pub fn compose(&self, other: &Cospan) -> Result<Cospan, FinError> {
        if self.n() != other.m() {
            return Err(FinError::InterfaceMismatch {
                left: self.n(),
                right: other.m(),
            });
        }
        let po = pushout(&self.right, &other.left)?;
        let left = self.left.then(&po.inj1)?;
        let right = other.right.then(&po.inj2)?;
        Ok(Cospan { left, right }.canonical())
    }

    pub fn tensor(&self, other: &Cospan) -> Cospan {
        Cospan {
            left: self.left.tensor(&other.left),
            right: self.right.tensor(&other.right),
        }
        .canonical()
    }

    /// Relabels the apex by first occurrence along the left leg, then the
    /// right leg; apex elements hit by neither leg come last.
    ///
    /// Two cospans are isomorphic iff their canonical forms coincide.
    pub fn canonical(&self) -> Cospan {
        self.canonical_with_relabel().0
    }

    /// Canonical form together with the relabelling `old ↦ new` used.
    pub(crate) fn canonical_with_relabel(&self) -> (Cospan, Vec<usize>) {
        let k = self.apex();
        let mut relabel = vec![0usize; k];
        let mut next = 0;
        for &v in self.left.image.iter().chain(&self.right.image) {
            if relabel[v - 1] == 0 {
                next += 1;
                relabel[v - 1] = next;
            }
        }
        for slot in relabel.iter_mut().filter(|s| **s == 0) {
            next += 1;
            *slot = next;
        }
        let map = |f: &FinFun| FinFun {
            tgt: k,
            image: f.image.iter().map(|&v| relabel[v - 1]).collect(),
        };
        (
            Cospan {
                left: map(&self.left),
                right: map(&self.right),
            },
            relabel,
        )
    }
}

impl fmt::Display for Cospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} k={} left=", self.m(), self.n(), self.apex())?;
        write_list(f, self.left.image.iter())?;
        write!(f, " right=")?;
        write_list(f, self.right.image.iter())
    }
}

/// A cospan with surjective left leg, held in canonical form.
///
/// These are exactly the arrows of the free discrete cartesian restriction
/// prop on one object; equality of values is equality of arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurjCospan(Cospan);

impl SurjCospan {
    /// Wraps legs that are already canonical.
    pub fn from_canonical(left: FinFun, right: FinFun) -> Result<Self, FinError> {
        let raw = Cospan::new(left, right)?;
        if !raw.left.is_surjective() {
            return Err(FinError::NotSurjective);
        }
        if raw.canonical() != raw {
            return Err(FinError::NotCanonical);
        }
        Ok(SurjCospan(raw))
    }

    pub fn identity(n: usize) -> Self {
        SurjCospan(Cospan::identity(n))
    }

    pub fn as_cospan(&self) -> &Cospan {
        &self.0
    }

    pub fn into_cospan(self) -> Cospan {
        self.0
    }

    pub fn m(&self) -> usize {
        self.0.m()
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn apex(&self) -> usize {
        self.0.apex()
    }

    pub fn left(&self) -> &FinFun {
        &self.0.left
    }

    pub fn right(&self) -> &FinFun {
        &self.0.right
    }

    /// Every canonical surjective-left cospan `m → n`, ordered by apex size,
    /// then left leg, then right leg.
    pub fn enumerate(m: usize, n: usize) -> Vec<SurjCospan> {
        let mut out = Vec::new();
        for left in restricted_growth(m) {
            let k = left.iter().copied().max().unwrap_or(0);
            for right in FinFun::all(n, k) {
                out.push(SurjCospan(Cospan {
                    left: FinFun {
                        tgt: k,
                        image: left.clone(),
                    },
                    right,
                }));
            }
        }
        out.sort_by_key(|c| c.apex());
        out
    }
}

impl fmt::Display for SurjCospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Sequences `a₁…a_m` with `a₁ = 1` and `aᵢ ≤ 1 + max(a₁…aᵢ₋₁)`.
fn restricted_growth(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=max + 1 {
            prefix.push(v);
            go(prefix, max.max(v), m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m), 0, m, &mut out);
    out
}

/// Puts a cospan with surjective left leg into canonical form.
pub fn cospan_canonicalize(c: &Cospan) -> Result<SurjCospan, FinError> {
    if !c.left.is_surjective() {
        return Err(FinError::NotSurjective);
    }
    Ok(SurjCospan(c.canonical()))
}

/// Sequential composite `c1 ⨟ c2` through the shared interface.
pub fn cospan_compose(c1: &SurjCospan, c2: &SurjCospan) -> Result<SurjCospan, FinError> {
    let raw = c1.0.compose(&c2.0)?;
    debug_assert!(raw.left.is_surjective());
    Ok(SurjCospan(raw))
}

pub fn cospan_tensor(c1: &SurjCospan, c2: &SurjCospan) -> SurjCospan {
    SurjCospan(c1.0.tensor(&c2.0))
}
