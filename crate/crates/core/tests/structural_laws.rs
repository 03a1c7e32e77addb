mod common;

use std::collections::HashMap;

use common::{random_term, rng, structural_theory};
use pft_core::{
    cospan_semantics, eval_structural, eval_term, parse_term, sort_of, structural_eq, FinFun, Interpretation,
    Signature, StructTarget, StructValue, SurjCospan, Term,
};
use proptest::prelude::*;

fn t(s: &str) -> Term {
    parse_term(s, &Signature::structural()).unwrap()
}

fn eq(a: &str, b: &str) -> bool {
    structural_eq(&t(a), &t(b)).unwrap()
}

#[test]
fn frobenius_presentation_laws() {
    let laws = [
        ("(mu * id) ; mu", "(id * mu) ; mu"),
        ("sw ; mu", "mu"),
        ("cp ; (cp * id)", "cp ; (id * cp)"),
        ("cp ; sw", "cp"),
        ("cp ; (dl * id)", "id"),
        ("cp ; (id * dl)", "id"),
        ("(cp * id) ; (id * mu)", "mu ; cp"),
        ("(id * cp) ; (mu * id)", "mu ; cp"),
        ("cp ; mu", "id"),
        // merge is a partial inverse to copy
        ("mu ; cp ; mu", "mu"),
        ("cp ; mu ; cp", "cp"),
        ("sw ; sw", "id * id"),
    ];
    for (l, r) in laws {
        assert!(eq(l, r), "{l} = {r}");
    }
    assert!(!eq("mu ; cp", "id * id"));
}

#[test]
fn merge_is_not_total() {
    // mu ; dl keeps only the agreeing pairs, so it differs from dl * dl
    assert!(!eq("mu ; dl", "dl * dl"));
    assert!(eq("cp ; (dl * dl)", "dl"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cospans_agree_with_kleene_evaluation(seed in any::<u64>(), m in 0usize..=4) {
        let thy = structural_theory();
        let term = random_term(&mut rng(seed), m, 4, 12, false);
        let Ok(StructValue::Surj(c)) = eval_structural(&term, StructTarget::Pf) else {
            panic!("PF evaluation failed on {term}");
        };
        let model = Interpretation::empty(thy.signature(), vec![m + 1]).unwrap();
        let direct = eval_term(&thy, &model, &term).unwrap();
        prop_assert_eq!(cospan_semantics(&c, m + 1), direct, "{}", term);
    }

    #[test]
    fn cm_evaluation_is_compositional(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = [
            (t("id"), 1, 1),
            (t("sw"), 2, 2),
            (t("mu"), 2, 1),
        ];
        let a = common::random_term_from(&mut r, &atoms, 3, 3, 8);
        let n = sort_of(&a, &Signature::structural()).unwrap().outs.len();
        let b = common::random_term_from(&mut r, &atoms, n, 3, 8);
        let fun = |x: &Term| match eval_structural(x, StructTarget::Cm).unwrap() {
            StructValue::Fun(f) => f,
            v => panic!("{v}"),
        };
        let whole = fun(&Term::seq(a.clone(), b.clone()));
        prop_assert_eq!(whole, fun(&a).then(&fun(&b)).unwrap());
    }
}

#[test]
fn canonical_cospans_are_faithful_up_to_four() {
    for m in 0..=4 {
        for n in 0..=4 {
            let mut seen: HashMap<Vec<_>, SurjCospan> = HashMap::new();
            for c in SurjCospan::enumerate(m, n) {
                let fingerprint: Vec<_> = (1..=m + 1).map(|k| cospan_semantics(&c, k)).collect();
                if let Some(prev) = seen.insert(fingerprint, c.clone()) {
                    panic!("{prev} and {c} have the same semantics");
                }
            }
        }
    }
}

#[test]
fn frobenius_with_unit_loses_surjectivity() {
    let v = eval_structural(&t("un ; cp"), StructTarget::Frob).unwrap();
    let StructValue::Cospan(c) = v else { panic!("{v}") };
    assert_eq!((c.m(), c.n(), c.apex()), (0, 2, 1));
    assert!(!c.left().is_surjective());
    assert!(eval_structural(&t("un ; cp"), StructTarget::Pf).is_err());
    // pushout composition joins the unit's point into the copied wire
    let v = eval_structural(&t("(id * un) ; mu"), StructTarget::Frob).unwrap();
    let StructValue::Cospan(c) = v else { panic!("{v}") };
    assert_eq!(c.left(), &FinFun::identity(1));
}
