//! Fixtures shared by the criterion benches.

use pft_core::{parse_term, FinFun, Signature, Term};

/// A structural term whose canonical cospan has a large apex: `n` copies
/// fanned out and merged back pairwise.
pub fn ladder(n: usize) -> Term {
    let sig = Signature::structural();
    let mut t = String::from("id");
    for _ in 0..n {
        t = format!("({t}) ; cp ; (cp * cp) ; (id * sw * id) ; (mu * mu) ; mu");
    }
    parse_term(&t, &sig).unwrap()
}

/// The pair of functions `k -> n` sending `i` to `i mod n` and to
/// `(i + 1) mod n`, used as pushout legs.
pub fn rotated_legs(k: usize, n: usize) -> (FinFun, FinFun) {
    let f = FinFun::new(n, (0..k).map(|i| i % n + 1).collect()).unwrap();
    let g = FinFun::new(n, (0..k).map(|i| (i + 1) % n + 1).collect()).unwrap();
    (f, g)
}
