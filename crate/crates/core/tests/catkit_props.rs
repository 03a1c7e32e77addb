use pft_core::{
    catkit::span_as_pfn, compose_pfn, finset, has_finite_limits, kt_totals, limit_search, par_construction,
    unit_embed, ConcreteRCat, Diagram, FinCat, FinPfn,
};

/// Rebuilds `c` with one composite replaced, checking acceptance against
/// a direct check of the category axioms.
#[test]
fn corrupted_tables_are_rejected_exactly_when_invalid() {
    let c = finset(&[1, 2]).cat;
    let n = c.arrow_count();
    let arrows: Vec<(String, usize, usize)> =
        (0..n).map(|f| (c.arrow_name(f).to_string(), c.src(f), c.tgt(f))).collect();
    let ids: Vec<usize> = (0..c.object_count()).map(|x| c.id(x)).collect();
    let objects: Vec<String> = (0..c.object_count()).map(|x| c.object_name(x).to_string()).collect();
    let mut rejected = 0;
    for f in 0..n {
        for g in 0..n {
            let Some(h) = c.compose(f, g) else { continue };
            for h2 in c.hom(c.src(h), c.tgt(h)).to_vec() {
                if h2 == h {
                    continue;
                }
                let table = |a: usize, b: usize| {
                    if (a, b) == (f, g) {
                        Some(h2)
                    } else {
                        c.compose(a, b)
                    }
                };
                let mut valid = (0..n).all(|a| table(ids[c.src(a)], a) == Some(a) && table(a, ids[c.tgt(a)]) == Some(a));
                for a in 0..n {
                    for b in 0..n {
                        for d in 0..n {
                            let (Some(ab), Some(bd)) = (table(a, b), table(b, d)) else { continue };
                            valid &= table(ab, d) == table(a, bd);
                        }
                    }
                }
                let built = FinCat::new(objects.clone(), arrows.clone(), ids.clone(), table);
                assert_eq!(built.is_ok(), valid);
                rejected += usize::from(!valid);
            }
        }
    }
    assert!(rejected > 0);
}

/// The universal property checked from scratch, without `is_limit`.
fn universal(c: &FinCat, d: &Diagram, apex: usize, legs: &[usize]) -> bool {
    let cone_ok = |m: usize, ls: &[usize]| {
        ls.iter().zip(&d.nodes).all(|(&l, &x)| c.src(l) == m && c.tgt(l) == x)
            && d.edges.iter().all(|&(a, b, e)| c.compose(ls[a], e) == Some(ls[b]))
    };
    if !cone_ok(apex, legs) {
        return false;
    }
    for m in 0..c.object_count() {
        let choices: Vec<&[usize]> = d.nodes.iter().map(|&x| c.hom(m, x)).collect();
        let mut idx = vec![0; choices.len()];
        if choices.iter().any(|h| h.is_empty()) {
            continue;
        }
        loop {
            let cone: Vec<usize> = idx.iter().zip(&choices).map(|(&i, h)| h[i]).collect();
            if cone_ok(m, &cone) {
                let mediating = c
                    .hom(m, apex)
                    .iter()
                    .filter(|&&u| legs.iter().zip(&cone).all(|(&l, &o)| c.compose(u, l) == Some(o)))
                    .count();
                if mediating != 1 {
                    return false;
                }
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    true
}

#[test]
fn limits_in_finite_sets_are_universal() {
    let fs = finset(&[0, 1, 2, 3, 4]);
    let c = &fs.cat;
    let no = c.object_count();
    for f in 0..c.arrow_count() {
        for g in 0..c.arrow_count() {
            if c.tgt(f) != c.tgt(g) || c.src(f) > 2 || c.src(g) > 2 {
                continue;
            }
            let d = Diagram::pullback(c, f, g);
            let cone = limit_search(c, &d).expect("fibre products of sets of size at most two fit");
            assert!(universal(c, &d, cone.apex, &cone.legs));
            let (ff, gg) = (&fs.funs[f], &fs.funs[g]);
            let size = ff
                .image()
                .iter()
                .map(|&y| gg.image().iter().filter(|&&z| z == y).count())
                .sum::<usize>();
            assert_eq!(fs.sizes[cone.apex], size);
        }
    }
    for x in 0..no {
        for y in 0..no {
            let d = Diagram::product(x, y);
            match limit_search(c, &d) {
                Some(cone) => {
                    assert_eq!(fs.sizes[cone.apex], fs.sizes[x] * fs.sizes[y]);
                    assert!(universal(c, &d, cone.apex, &cone.legs));
                }
                None => assert!(fs.sizes[x] * fs.sizes[y] > 4),
            }
        }
    }
    let t = limit_search(c, &Diagram::terminal()).unwrap();
    assert_eq!(fs.sizes[t.apex], 1);
}

#[test]
fn equalizers_of_small_sets() {
    let fs = finset(&[0, 1, 2, 3]);
    let c = &fs.cat;
    for x in 0..c.object_count() {
        for y in 0..c.object_count() {
            for &f in c.hom(x, y) {
                for &g in c.hom(x, y) {
                    let d = Diagram::equalizer(c, f, g);
                    let cone = limit_search(c, &d).unwrap();
                    assert!(universal(c, &d, cone.apex, &cone.legs));
                    let agree = (1..=fs.sizes[x]).filter(|&i| fs.funs[f].apply(i) == fs.funs[g].apply(i)).count();
                    assert_eq!(fs.sizes[cone.apex], agree);
                }
            }
        }
    }
}

/// Totals of split idempotents of all partial maps on `sizes` are the
/// finite sets up to the largest size, so they have finite limits exactly
/// when products stay inside: largest size at most one.
#[test]
fn kt_totals_of_partial_maps() {
    let subsets: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
    for sizes in subsets {
        let x = ConcreteRCat::all_partial(sizes);
        let kt = kt_totals(&x);
        let top = *sizes.iter().max().unwrap();
        let expected = finset(&(0..=top).collect::<Vec<_>>()).cat;
        assert_eq!(has_finite_limits(&kt.cat), top <= 1, "{sizes:?}");
        assert_eq!(has_finite_limits(&expected), top <= 1);
        let u = unit_embed(&x).unwrap();
        assert!(u.functorial && u.faithful, "{sizes:?}");
    }
}

#[test]
fn par_of_finite_sets_is_partial_maps() {
    let fs = finset(&[0, 1, 2]);
    let p = par_construction(&fs.cat).unwrap();
    let as_pfn = |a: usize| {
        let s = p.spans[a];
        span_as_pfn(&fs.funs[s.mono], &fs.funs[s.map])
    };
    for x in 0..3 {
        for y in 0..3 {
            let hom = p.cat.hom(x, y);
            let mut images: Vec<FinPfn> = hom.iter().map(|&a| as_pfn(a)).collect();
            images.sort_by_key(|f| f.to_string());
            images.dedup();
            assert_eq!(images.len(), hom.len());
            assert_eq!(hom.len(), FinPfn::all(fs.sizes[x], fs.sizes[y]).count());
        }
    }
    for a in 0..p.cat.arrow_count() {
        for b in 0..p.cat.arrow_count() {
            if let Some(ab) = p.cat.compose(a, b) {
                assert_eq!(as_pfn(ab), compose_pfn(&as_pfn(a), &as_pfn(b)).unwrap());
            }
        }
    }
}
