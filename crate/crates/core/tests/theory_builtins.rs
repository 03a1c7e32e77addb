mod common;

use common::{classical_cmons, classical_pcas, classical_setoids, sorted_keys};
use pft_core::{builtin, enumerate_models, parse_theory, theory::builtin_source, EnumOptions, BUILTIN_NAMES};

#[test]
fn builtins_round_trip() {
    for name in BUILTIN_NAMES {
        let thy = builtin(name).unwrap();
        assert_eq!(thy.name(), name);
        let printed = thy.to_string();
        let again = parse_theory(&printed).unwrap();
        assert_eq!(again.to_string(), printed, "{name}");
        assert_eq!(again.equations(), thy.equations(), "{name}");
        assert_eq!(again.derived(), thy.derived(), "{name}");
        // the shipped source is already in printed form, after its comments
        let source = builtin_source(name).unwrap();
        let body: String = source
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(body, printed, "{name}");
    }
}

#[test]
fn every_generator_gets_copy_naturality() {
    for name in BUILTIN_NAMES {
        let thy = builtin(name).unwrap();
        for g in thy.signature().gens() {
            let label = format!("copy_nat[{}]", g.name);
            let found = thy.derived().iter().any(|e| e.label() == label);
            assert_eq!(found, g.coarity.is_some(), "{name}: {label}");
        }
    }
}

fn count(name: &str, n: usize) -> usize {
    enumerate_models(&builtin(name).unwrap(), &[n], EnumOptions::default())
        .unwrap()
        .len()
}

#[test]
fn setoids_are_equivalence_relations() {
    let thy = builtin("setoid").unwrap();
    for n in 0..=4 {
        let found = enumerate_models(&thy, &[n], EnumOptions::default()).unwrap();
        assert_eq!(sorted_keys(&found), classical_setoids(n), "size {n}");
    }
    assert_eq!((1..=4).map(|n| count("setoid", n)).collect::<Vec<_>>(), [1, 2, 5, 15]);
}

#[test]
fn total_commutative_monoids_are_classical() {
    let thy = builtin("total_cmon").unwrap();
    for n in 0..=3 {
        let found = enumerate_models(&thy, &[n], EnumOptions::default()).unwrap();
        assert_eq!(sorted_keys(&found), classical_cmons(n), "size {n}");
    }
}

#[test]
fn pcas_match_direct_check() {
    let thy = builtin("pca").unwrap();
    for n in 0..=2 {
        let found = enumerate_models(&thy, &[n], EnumOptions::default()).unwrap();
        assert_eq!(sorted_keys(&found), classical_pcas(n), "size {n}");
    }
    assert_eq!(count("pca", 1), 1);
}

#[test]
fn pairing_only_on_a_point() {
    assert_eq!([1, 2, 3].map(|n| count("pairing", n)), [1, 0, 0]);
}

#[test]
fn partial_monoids_extend_total_ones() {
    // every total model is a partial one
    for n in 1..=3 {
        assert!(count("pcm", n) >= count("total_cmon", n));
    }
}

#[test]
fn theory_errors_are_located() {
    let cases = [
        ("theory t\nop m : A * A -> A\neq x : m = id\n", (3, 4)),
        ("theory t\nop m : A * B -> A\n", (2, 12)),
        ("theory t\neq x : un = un\n", (2, 8)),
        ("theory t\nop m : A * A -> A\neq x : m ; ; m = m\n", (3, 12)),
        ("op m : A -> A\n", (1, 1)),
    ];
    for (src, (line, col)) in cases {
        let e = parse_theory(src).unwrap_err();
        assert_eq!((e.line, e.col), (line, col), "{src:?}: {e}");
    }
}
