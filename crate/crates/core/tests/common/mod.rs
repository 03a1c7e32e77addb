//! Test helpers: seeded random terms and brute-force model oracles that
//! share nothing with the search in `model`.
#![allow(dead_code)]

use pft_core::{check_model, FinPfn, Interpretation, Signature, Sort, Term, Theory, TupleSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn a() -> Sort {
    Sort::default_sort()
}

/// A building block `(term, inputs, outputs)`.
pub type Atom = (Term, usize, usize);

/// The structural atoms; `unit` adds the merge unit.
pub fn structural_atoms(unit: bool) -> Vec<Atom> {
    let mut atoms = vec![
        (Term::Id(a()), 1, 1),
        (Term::Copy(a()), 1, 2),
        (Term::Del(a()), 1, 0),
        (Term::Sym(a(), a()), 2, 2),
        (Term::Mul(a()), 2, 1),
    ];
    if unit {
        atoms.push((Term::Unit(a()), 0, 1));
    }
    atoms
}

/// A single layer covering exactly `m` input wires; nullary atoms may be
/// placed anywhere.
fn layer(rng: &mut impl Rng, m: usize, atoms: &[Atom]) -> (Term, usize) {
    let nullary: Vec<&Atom> = atoms.iter().filter(|x| x.1 == 0).collect();
    let mut parts = Vec::new();
    let mut outs = 0;
    let mut left = m;
    loop {
        if !nullary.is_empty() && rng.gen_bool(0.15) {
            let &(ref t, _, n) = *nullary.choose(rng).unwrap();
            parts.push(t.clone());
            outs += n;
        }
        if left == 0 {
            break;
        }
        let fits: Vec<&Atom> = atoms.iter().filter(|x| x.1 >= 1 && x.1 <= left).collect();
        let &(ref t, k, n) = *fits.choose(rng).unwrap();
        parts.push(t.clone());
        outs += n;
        left -= k;
    }
    (Term::tensor_all(parts), outs)
}

/// A random term with `m` inputs, at most `max_out` outputs and at most
/// `max_size` constructors, made of layers of `atoms`.
pub fn random_term_from(rng: &mut impl Rng, atoms: &[Atom], m: usize, max_out: usize, max_size: usize) -> Term {
    loop {
        let depth = rng.gen_range(1..=4);
        let mut t: Option<Term> = None;
        let mut wires = m;
        for _ in 0..depth {
            let (l, n) = layer(rng, wires, atoms);
            t = Some(match t {
                None => l,
                Some(prev) => Term::seq(prev, l),
            });
            wires = n;
        }
        let t = t.unwrap();
        if wires <= max_out && t.size() <= max_size {
            return t;
        }
    }
}

pub fn random_term(rng: &mut impl Rng, m: usize, max_out: usize, max_size: usize, unit: bool) -> Term {
    random_term_from(rng, &structural_atoms(unit), m, max_out, max_size)
}

/// Theory with no generators, for evaluating structural terms in `Par`.
pub fn structural_theory() -> Theory {
    Theory::new("structural", Signature::structural(), Vec::new()).unwrap()
}

/// All interpretations of a signature on fixed carriers, decoded on demand
/// from an index into the product of all table entries.
pub struct Interpretations {
    sig: Signature,
    carriers: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    space: TupleSpace,
}

impl Interpretations {
    /// `None` when there are more than `budget` interpretations.
    pub fn new(sig: &Signature, carriers: &[usize], budget: u64) -> Option<Self> {
        let blank = Interpretation::empty(sig, carriers.to_vec()).ok()?;
        let mut shapes = Vec::new();
        let mut total: u64 = 1;
        for g in sig.gens() {
            let ins = blank.tuple_space(&g.arity).size();
            let outs = match &g.coarity {
                Some(s) => blank.carrier(s),
                None => 1,
            };
            for _ in 0..ins {
                total = total.checked_mul(outs as u64 + 1)?;
            }
            shapes.push((ins, outs));
        }
        if total > budget {
            return None;
        }
        let radices = shapes
            .iter()
            .flat_map(|&(ins, outs)| std::iter::repeat(outs + 1).take(ins))
            .collect();
        Some(Self {
            sig: sig.clone(),
            carriers: carriers.to_vec(),
            shapes,
            space: TupleSpace::new(radices),
        })
    }

    pub fn len(&self) -> usize {
        self.space.size()
    }

    /// Digit 0 of an entry is undefined, digit `d` is the value `d - 1`.
    pub fn get(&self, index: usize) -> Interpretation {
        let digits = self.space.decode(index + 1);
        let mut rest = digits.as_slice();
        let mut tables = Vec::new();
        for &(ins, outs) in &self.shapes {
            let mapping = rest[..ins].iter().map(|&d| if d == 0 { None } else { Some(d) }).collect();
            tables.push(FinPfn::new(outs, mapping).unwrap());
            rest = &rest[ins..];
        }
        Interpretation::new(&self.sig, self.carriers.clone(), tables).unwrap()
    }
}

/// Generate-and-filter: every interpretation that passes `check_model`.
pub fn models_by_filter(thy: &Theory, carriers: &[usize], budget: u64) -> Option<Vec<Interpretation>> {
    use rayon::prelude::*;
    let all = Interpretations::new(thy.signature(), carriers, budget)?;
    Some(
        (0..all.len())
            .into_par_iter()
            .map(|i| all.get(i))
            .filter(|m| check_model(thy, m, false).unwrap().all_hold())
            .collect(),
    )
}

/// Tables as plain vectors, for order-free comparison of model sets.
pub fn table_key(m: &Interpretation) -> Vec<Vec<Option<usize>>> {
    m.tables().iter().map(|t| t.mapping().to_vec()).collect()
}

pub fn sorted_keys(ms: &[Interpretation]) -> Vec<Vec<Vec<Option<usize>>>> {
    let mut keys: Vec<_> = ms.iter().map(table_key).collect();
    keys.sort();
    keys
}

/// Table keys in the layout of `table_key`: values are 1-based and a
/// relation entry is `Some(1)` when it holds.
pub type Key = Vec<Vec<Option<usize>>>;

fn all_tables(cells: usize, values: usize) -> impl Iterator<Item = Vec<usize>> {
    TupleSpace::uniform(values, cells).tuples().collect::<Vec<_>>().into_iter()
}

/// Equivalence relations on `n` elements, as tables of a relation symbol.
pub fn classical_setoids(n: usize) -> Vec<Key> {
    let mut out = Vec::new();
    for bits in all_tables(n * n, 2) {
        let r = |a: usize, b: usize| bits[a * n + b] == 1;
        let refl = (0..n).all(|a| r(a, a));
        let sym = (0..n).all(|a| (0..n).all(|b| r(a, b) == r(b, a)));
        let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r(a, b) && r(b, c)) || r(a, c))));
        if refl && sym && trans {
            out.push(vec![bits.iter().map(|&x| (x == 1).then_some(1)).collect()]);
        }
    }
    out.sort();
    out
}

/// Commutative monoids on `n` elements: total `m`, then the unit `e`.
pub fn classical_cmons(n: usize) -> Vec<Key> {
    let mut out = Vec::new();
    for m in all_tables(n * n, n) {
        let op = |a: usize, b: usize| m[a * n + b];
        let comm = (0..n).all(|a| (0..n).all(|b| op(a, b) == op(b, a)));
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| op(op(a, b), c) == op(a, op(b, c)))));
        if !(comm && assoc) {
            continue;
        }
        for e in 0..n {
            if (0..n).all(|a| op(e, a) == a) {
                out.push(vec![m.iter().map(|&v| Some(v + 1)).collect(), vec![Some(e + 1)]]);
            }
        }
    }
    out.sort();
    out
}

/// Partial combinatory algebras on `n` elements, checked directly on the
/// application table: `app`, then `k`, then `s`.
pub fn classical_pcas(n: usize) -> Vec<Key> {
    let mut out = Vec::new();
    for table in all_tables(n * n, n + 1) {
        // digit 0 is undefined
        let app = |a: Option<usize>, b: Option<usize>| -> Option<usize> {
            let (a, b) = (a?, b?);
            table[a * n + b].checked_sub(1)
        };
        for k in 0..n {
            for s in 0..n {
                let (k, s) = (Some(k), Some(s));
                let els = || (0..n).map(Some);
                let law_k = els().all(|x| els().all(|y| app(app(k, x), y) == x));
                let law_s = els().all(|x| {
                    els().all(|y| {
                        els().all(|z| app(app(app(s, x), y), z) == app(app(x, z), app(y, z)))
                    })
                });
                let defined = els().all(|x| els().all(|y| app(app(s, x), y).is_some()));
                if law_k && law_s && defined {
                    let map: Vec<Option<usize>> = table.iter().map(|&d| (d > 0).then_some(d)).collect();
                    out.push(vec![map, vec![Some(k.unwrap() + 1)], vec![Some(s.unwrap() + 1)]]);
                }
            }
        }
    }
    out.sort();
    out
}
