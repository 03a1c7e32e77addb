//! Generator-free terms evaluated in the combinatorial props of finite
//! functions and cospans.
//!
//! The partial Frobenius fragment (copy, delete, merge, symmetry) is
//! presented by cospans of finite sets with surjective left leg, so a
//! generator-free term is decided by computing its canonical cospan. No
//! rewriting is involved.
//!
//! | target | constructors                  | value                          |
//! |--------|-------------------------------|--------------------------------|
//! | `Cm`   | merge, unit                   | function `[m] → [n]`           |
//! | `Cam`  | merge                         | surjection `[m] → [n]`         |
//! | `Cc`   | copy, delete                  | function `[n] → [m]` (𝔽ᵒᵖ)     |
//! | `Frob` | copy, delete, merge, unit     | cospan, any legs               |
//! | `Pf`   | copy, delete, merge           | cospan with surjective left leg|
//!
//! Identities, symmetries and the empty diagram are admitted everywhere.

use std::fmt;

use thiserror::Error;

use crate::diagram::{sort_of, DiagramError, Signature, Sort, SortType, Term};
use crate::finpar::{
    cospan_tensor, pushout, Cospan, FinError, FinFun, FinPfn, SurjCospan,
    TupleSpace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructTarget {
    /// Commutative monoids, presented by 𝔽.
    Cm,
    /// Commutative comonoids, presented by 𝔽ᵒᵖ.
    Cc,
    /// Commutative semigroups, presented by surjections.
    Cam,
    /// Special Frobenius algebras, presented by all cospans.
    Frob,
    /// Partial Frobenius algebras, presented by surjective-left cospans.
    Pf,
}

impl StructTarget {
    pub fn name(self) -> &'static str {
        match self {
            StructTarget::Cm => "cm",
            StructTarget::Cc => "cc",
            StructTarget::Cam => "cam",
            StructTarget::Frob => "frob",
            StructTarget::Pf => "pf",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "cm" => StructTarget::Cm,
            "cc" => StructTarget::Cc,
            "cam" => StructTarget::Cam,
            "frob" => StructTarget::Frob,
            "pf" => StructTarget::Pf,
            _ => return None,
        })
    }

    fn admits(self, t: &Term) -> bool {
        use StructTarget::*;
        match t {
            Term::Id(_) | Term::Sym(..) | Term::Empty => true,
            Term::Mul(_) => matches!(self, Cm | Cam | Frob | Pf),
            Term::Unit(_) => matches!(self, Cm | Frob),
            Term::Copy(_) | Term::Del(_) => matches!(self, Cc | Frob | Pf),
            Term::Gen(_) | Term::Seq(..) | Term::Par(..) => false,
        }
    }
}

impl fmt::Display for StructTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructError {
    #[error("generator `{0}` is not structural")]
    GeneratorPresent(String),
    #[error("`{constructor}` is not admissible for target {target}")]
    Inadmissible {
        constructor: String,
        target: StructTarget,
    },
    #[error("term mentions several sorts; this target is single-sorted")]
    MultiSorted,
    #[error("terms have different sorts: {0} vs {1}")]
    SortsDiffer(SortType, SortType),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Fin(#[from] FinError),
}

/// The value of a generator-free term in a structural target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructValue {
    Fun(FinFun),
    Cospan(Cospan),
    Surj(SurjCospan),
}

impl fmt::Display for StructValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructValue::Fun(x) => x.fmt(f),
            StructValue::Cospan(x) => x.fmt(f),
            StructValue::Surj(x) => x.fmt(f),
        }
    }
}

fn check_generator_free(t: &Term) -> Result<(), StructError> {
    match t {
        Term::Gen(name) => Err(StructError::GeneratorPresent(name.clone())),
        Term::Seq(a, b) | Term::Par(a, b) => {
            check_generator_free(a)?;
            check_generator_free(b)
        }
        _ => Ok(()),
    }
}

fn check_admissible(t: &Term, target: StructTarget) -> Result<(), StructError> {
    match t {
        Term::Seq(a, b) | Term::Par(a, b) => {
            check_admissible(a, target)?;
            check_admissible(b, target)
        }
        leaf if target.admits(leaf) => Ok(()),
        leaf => Err(StructError::Inadmissible {
            constructor: leaf.pretty(None),
            target,
        }),
    }
}

/// Evaluates a single-sorted generator-free term in `target`.
pub fn eval_structural(t: &Term, target: StructTarget) -> Result<StructValue, StructError> {
    check_generator_free(t)?;
    let sorts = t.annotated_sorts();
    if sorts.windows(2).any(|w| w[0] != w[1]) {
        return Err(StructError::MultiSorted);
    }
    check_admissible(t, target)?;
    sort_of(t, &Signature::structural())?;
    Ok(match target {
        StructTarget::Cm | StructTarget::Cam => StructValue::Fun(eval_fun(t)?),
        StructTarget::Cc => StructValue::Fun(eval_opfun(t)?),
        StructTarget::Frob => StructValue::Cospan(eval_cospan(t)?),
        StructTarget::Pf => StructValue::Surj(eval_sorted(t)?.cospan),
    })
}

fn fun(tgt: usize, image: &[usize]) -> FinFun {
    FinFun::new(tgt, image.to_vec()).expect("structural image in range")
}

// Merge/unit terms `m → n` as functions `[m] → [n]`.
fn eval_fun(t: &Term) -> Result<FinFun, StructError> {
    Ok(match t {
        Term::Id(_) => FinFun::identity(1),
        Term::Sym(..) => fun(2, &[2, 1]),
        Term::Mul(_) => fun(1, &[1, 1]),
        Term::Unit(_) => FinFun::initial(1),
        Term::Empty => FinFun::identity(0),
        Term::Seq(a, b) => eval_fun(a)?.then(&eval_fun(b)?)?,
        Term::Par(a, b) => eval_fun(a)?.tensor(&eval_fun(b)?),
        _ => unreachable!("admissibility checked"),
    })
}

// Copy/delete terms `m → n` as functions `[n] → [m]`.
fn eval_opfun(t: &Term) -> Result<FinFun, StructError> {
    Ok(match t {
        Term::Id(_) => FinFun::identity(1),
        Term::Sym(..) => fun(2, &[2, 1]),
        Term::Copy(_) => fun(1, &[1, 1]),
        Term::Del(_) => FinFun::initial(1),
        Term::Empty => FinFun::identity(0),
        Term::Seq(a, b) => eval_opfun(b)?.then(&eval_opfun(a)?)?,
        Term::Par(a, b) => eval_opfun(a)?.tensor(&eval_opfun(b)?),
        _ => unreachable!("admissibility checked"),
    })
}

fn basic_cospan(t: &Term) -> Cospan {
    let (left, right) = match t {
        Term::Id(_) => (fun(1, &[1]), fun(1, &[1])),
        Term::Sym(..) => (fun(2, &[1, 2]), fun(2, &[2, 1])),
        Term::Copy(_) => (fun(1, &[1]), fun(1, &[1, 1])),
        Term::Del(_) => (fun(1, &[1]), FinFun::initial(1)),
        Term::Mul(_) => (fun(1, &[1, 1]), fun(1, &[1])),
        Term::Unit(_) => (FinFun::initial(1), fun(1, &[1])),
        Term::Empty => (FinFun::identity(0), FinFun::identity(0)),
        _ => unreachable!("leaf constructor"),
    };
    Cospan::new(left, right).expect("legs share the apex")
}

fn eval_cospan(t: &Term) -> Result<Cospan, StructError> {
    Ok(match t {
        Term::Seq(a, b) => eval_cospan(a)?.compose(&eval_cospan(b)?)?,
        Term::Par(a, b) => eval_cospan(a)?.tensor(&eval_cospan(b)?),
        leaf => basic_cospan(leaf).canonical(),
    })
}

/// A surjective-left cospan whose apex elements carry sorts.
///
/// Legs preserve sorts, so pushouts only ever identify apex elements of the
/// same sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SortedCospan {
    pub ins: Vec<Sort>,
    pub outs: Vec<Sort>,
    pub apex_sorts: Vec<Sort>,
    pub cospan: SurjCospan,
}

impl SortedCospan {
    fn leaf(t: &Term) -> SortedCospan {
        let st = sort_of(t, &Signature::structural()).expect("leaves are well-sorted");
        let raw = basic_cospan(t);
        let mut apex_sorts: Vec<Option<Sort>> = vec![None; raw.apex()];
        for (i, &v) in raw.left().image().iter().enumerate() {
            apex_sorts[v - 1] = Some(st.ins[i].clone());
        }
        SortedCospan {
            ins: st.ins,
            outs: st.outs,
            apex_sorts: apex_sorts.into_iter().map(|s| s.expect("surjective")).collect(),
            cospan: SurjCospan::from_canonical(raw.left().clone(), raw.right().clone())
                .expect("basic cospans are canonical"),
        }
    }

    pub fn compose(&self, other: &SortedCospan) -> Result<SortedCospan, StructError> {
        if self.outs != other.ins {
            return Err(DiagramError::SortMismatch {
                left: self.outs.clone(),
                right: other.ins.clone(),
            }
            .into());
        }
        let c1 = self.cospan.as_cospan();
        let c2 = other.cospan.as_cospan();
        let po = pushout(c1.right(), c2.left())?;
        let mut raw_sorts: Vec<Option<Sort>> = vec![None; po.apex];
        for (x, &cls) in po.inj1.image().iter().enumerate() {
            raw_sorts[cls - 1] = Some(self.apex_sorts[x].clone());
        }
        for (x, &cls) in po.inj2.image().iter().enumerate() {
            raw_sorts[cls - 1].get_or_insert_with(|| other.apex_sorts[x].clone());
        }
        let raw = Cospan::new(c1.left().then(&po.inj1)?, c2.right().then(&po.inj2)?)?;
        let (canon, relabel) = raw.canonical_with_relabel();
        let mut apex_sorts = vec![Sort::default_sort(); canon.apex()];
        for (old, s) in raw_sorts.into_iter().enumerate() {
            apex_sorts[relabel[old] - 1] = s.expect("every class has a member");
        }
        Ok(SortedCospan {
            ins: self.ins.clone(),
            outs: other.outs.clone(),
            apex_sorts,
            cospan: wrap_surj(canon)?,
        })
    }

    pub fn tensor(&self, other: &SortedCospan) -> SortedCospan {
        let cat = |a: &[Sort], b: &[Sort]| [a, b].concat();
        SortedCospan {
            ins: cat(&self.ins, &other.ins),
            outs: cat(&self.outs, &other.outs),
            apex_sorts: cat(&self.apex_sorts, &other.apex_sorts),
            cospan: cospan_tensor(&self.cospan, &other.cospan),
        }
    }
}

fn wrap_surj(canon: Cospan) -> Result<SurjCospan, StructError> {
    Ok(SurjCospan::from_canonical(canon.left().clone(), canon.right().clone())?)
}

impl fmt::Display for SortedCospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cospan)?;
        let single = self
            .ins
            .iter()
            .chain(&self.outs)
            .all(|s| s.name() == crate::diagram::DEFAULT_SORT);
        if !single {
            let names: Vec<&str> = self.apex_sorts.iter().map(Sort::name).collect();
            write!(f, " sorts=[{}]", names.join(","))?;
        }
        Ok(())
    }
}

/// Evaluates a generator-free partial Frobenius term of any sorts.
pub fn eval_sorted(t: &Term) -> Result<SortedCospan, StructError> {
    check_generator_free(t)?;
    check_admissible(t, StructTarget::Pf)?;
    sort_of(t, &Signature::structural())?;
    eval_sorted_rec(t)
}

fn eval_sorted_rec(t: &Term) -> Result<SortedCospan, StructError> {
    match t {
        Term::Seq(a, b) => eval_sorted_rec(a)?.compose(&eval_sorted_rec(b)?),
        Term::Par(a, b) => Ok(eval_sorted_rec(a)?.tensor(&eval_sorted_rec(b)?)),
        leaf => Ok(SortedCospan::leaf(leaf)),
    }
}

/// Exact equality in the free structural fragment.
pub fn structural_eq(t1: &Term, t2: &Term) -> Result<bool, StructError> {
    check_generator_free(t1)?;
    check_generator_free(t2)?;
    let s1 = sort_of(t1, &Signature::structural())?;
    let s2 = sort_of(t2, &Signature::structural())?;
    if s1 != s2 {
        return Err(StructError::SortsDiffer(s1, s2));
    }
    Ok(eval_sorted(t1)? == eval_sorted(t2)?)
}

/// The partial function `A^m ⇀ A^n` a cospan denotes in finite sets, for
/// `|A| = carrier`.
///
/// An input tuple is defined iff it is constant on every fibre of the left
/// leg; output `j` is the common value on the block `right(j)`.
pub fn cospan_semantics(c: &SurjCospan, carrier: usize) -> FinPfn {
    let ins = TupleSpace::uniform(carrier, c.m());
    let outs = TupleSpace::uniform(carrier, c.n());
    let left = c.left().image();
    let right = c.right().image();
    let mapping = ins
        .tuples()
        .map(|x| {
            let mut block = vec![None; c.apex()];
            for (i, &b) in left.iter().enumerate() {
                match block[b - 1] {
                    None => block[b - 1] = Some(x[i]),
                    Some(v) if v != x[i] => return None,
                    Some(_) => {}
                }
            }
            let y: Vec<usize> = right
                .iter()
                .map(|&b| block[b - 1].expect("left leg is surjective"))
                .collect();
            Some(outs.encode(&y))
        })
        .collect();
    FinPfn::new(outs.size(), mapping).expect("encoded tuples are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_term;
    use crate::finpar::cospan_canonicalize;

    fn t(src: &str) -> Term {
        parse_term(src, &Signature::structural()).unwrap()
    }

    fn pf(src: &str) -> SurjCospan {
        match eval_structural(&t(src), StructTarget::Pf).unwrap() {
            StructValue::Surj(c) => c,
            other => panic!("unexpected {other:?}"),
        }
    }

    fn surj(left: &[usize], right: &[usize]) -> SurjCospan {
        let k = left.iter().chain(right).copied().max().unwrap_or(0);
        cospan_canonicalize(&Cospan::new(fun(k, left), fun(k, right)).unwrap()).unwrap()
    }

    #[test]
    fn copy_then_merge_is_identity() {
        assert_eq!(pf("cp ; mu"), SurjCospan::identity(1));
    }

    #[test]
    fn frobenius_sides_are_the_spider() {
        let spider = surj(&[1, 1], &[1, 1]);
        assert_eq!(pf("mu ; cp"), spider);
        assert_eq!(pf("(cp * id) ; (id * mu)"), spider);
        assert_eq!(pf("(id * cp) ; (mu * id)"), spider);
    }

    #[test]
    fn copy_in_cc_is_the_codiagonal_function() {
        assert_eq!(
            eval_structural(&t("cp"), StructTarget::Cc).unwrap(),
            StructValue::Fun(fun(1, &[1, 1]))
        );
        // (cp ; (cp * id)) : 1 → 3 is the unique map [3] → [1]
        assert_eq!(
            eval_structural(&t("cp ; (cp * id)"), StructTarget::Cc).unwrap(),
            StructValue::Fun(fun(1, &[1, 1, 1]))
        );
        assert_eq!(
            eval_structural(&t("cp ; (dl * id)"), StructTarget::Cc).unwrap(),
            StructValue::Fun(FinFun::identity(1))
        );
    }

    #[test]
    fn admissibility_is_enforced() {
        assert!(matches!(
            eval_structural(&t("cp"), StructTarget::Cm),
            Err(StructError::Inadmissible { .. })
        ));
        assert!(matches!(
            eval_structural(&t("un"), StructTarget::Pf),
            Err(StructError::Inadmissible { .. })
        ));
        assert!(matches!(
            eval_structural(&t("mu"), StructTarget::Cc),
            Err(StructError::Inadmissible { .. })
        ));
        assert!(matches!(
            eval_structural(&t("cp ; dl"), StructTarget::Pf),
            Err(StructError::Diagram(DiagramError::SortMismatch { .. }))
        ));
    }

    #[test]
    fn cm_evaluates_to_functions_compositionally() {
        let a = t("(mu * id) ; mu");
        let b = t("(id * un) ; sw");
        let StructValue::Fun(fa) = eval_structural(&a, StructTarget::Cm).unwrap() else { panic!() };
        let StructValue::Fun(fb) = eval_structural(&b, StructTarget::Cm).unwrap() else { panic!() };
        assert_eq!(fa, fun(1, &[1, 1, 1]));
        assert_eq!(fb, fun(2, &[2]));
        let StructValue::Fun(fab) =
            eval_structural(&Term::seq(a, b), StructTarget::Cm).unwrap()
        else {
            panic!()
        };
        assert_eq!(fab, fa.then(&fb).unwrap());
        let StructValue::Fun(s) = eval_structural(&t("(mu * mu) ; mu"), StructTarget::Cam).unwrap()
        else {
            panic!()
        };
        assert!(s.is_surjective());
    }

    #[test]
    fn frob_unit_breaks_left_surjectivity() {
        let StructValue::Cospan(c) = eval_structural(&t("un ; dl"), StructTarget::Frob).unwrap()
        else {
            panic!()
        };
        assert_eq!((c.m(), c.n(), c.apex()), (0, 0, 1));
        assert!(!c.left().is_surjective());
        // unit law: (un * id) ; mu = id
        let StructValue::Cospan(c) =
            eval_structural(&t("(un * id) ; mu"), StructTarget::Frob).unwrap()
        else {
            panic!()
        };
        assert_eq!(c, Cospan::identity(1));
    }

    #[test]
    fn structural_equalities() {
        let eq = |a: &str, b: &str| structural_eq(&t(a), &t(b)).unwrap();
        assert!(eq("(mu * id) ; mu", "(id * mu) ; mu"));
        assert!(eq("sw ; mu", "mu"));
        assert!(eq("cp ; sw", "cp"));
        assert!(eq("cp ; (dl * id)", "id"));
        assert!(eq("cp ; (dl * dl)", "dl"));
        assert!(!eq("mu ; dl", "dl * dl"));
        assert!(!eq("mu ; cp", "id * id"));
        assert!(matches!(
            structural_eq(&t("cp"), &t("id")),
            Err(StructError::SortsDiffer(..))
        ));
    }

    #[test]
    fn sorted_cospans_keep_apex_sorts() {
        let sig = Signature::new(vec![Sort::new("O"), Sort::new("A")], vec![]).unwrap();
        let term = parse_term("(cp[O] * id[A]) ; (id[O] * sw[O,A]) ; (id[O] * sw[A,O]) ; (mu[O] * id[A])", &sig).unwrap();
        let c = eval_sorted(&term).unwrap();
        assert_eq!(c.apex_sorts, vec![Sort::new("O"), Sort::new("A")]);
        assert_eq!(c.cospan, SurjCospan::identity(2));
        assert_eq!(
            c.to_string(),
            "m=2 n=2 k=2 left=[1,2] right=[1,2] sorts=[O,A]"
        );
        assert!(matches!(
            eval_structural(&term, StructTarget::Pf),
            Err(StructError::MultiSorted)
        ));
    }

    #[test]
    fn semantics_examples() {
        assert_eq!(cospan_semantics(&SurjCospan::identity(1), 3), FinPfn::identity(3));
        let merge = pf("mu");
        let sem = cospan_semantics(&merge, 2);
        // tuples (0,0),(0,1),(1,0),(1,1)
        assert_eq!(sem.mapping(), &[Some(1), None, None, Some(2)]);
        let copy = cospan_semantics(&pf("cp"), 2);
        assert!(copy.is_total());
        assert_eq!(copy.mapping(), &[Some(1), Some(4)]);
        assert_eq!(cospan_semantics(&SurjCospan::identity(0), 0), FinPfn::identity(1));
    }
}
