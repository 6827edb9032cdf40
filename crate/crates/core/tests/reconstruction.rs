use tanglegram_core::enumeration::{
    enumerate_caterpillar_tanglegrams, enumerate_tanglegrams, enumerate_trees, tanglegrams_on,
};
use tanglegram_core::reconstruction::{
    core_signature, oracle_matches, oracle_search, reconstruct_cat_cat, reconstruct_cat_type1,
    reconstruct_cat_type2, same_side_signature, verify_multideck_uniqueness, DeckVariant,
};
use tanglegram_core::text::parse_tanglegram;
use tanglegram_core::{
    reconstruct, Error, Method, Tanglegram, TanglegramMultideck, Tree, TreeType,
};

fn cat(n: usize) -> Tree {
    Tree::caterpillar(n).unwrap()
}

fn trees_of_type(n: usize, ty: TreeType) -> Vec<Tree> {
    enumerate_trees(n)
        .unwrap()
        .into_iter()
        .filter(|t| t.classify() == ty)
        .collect()
}

#[test]
fn identity_matching_has_identical_cards() {
    let t = Tanglegram::new(cat(6), cat(6), &[0, 1, 2, 3, 4, 5]).unwrap();
    let d = t.multideck().unwrap();
    assert_eq!(d.entries().len(), 1);
    assert_eq!(d.iter().next().unwrap().1, 6);
    let r = reconstruct(&d).unwrap();
    assert_eq!(r.tanglegram, t);
    assert_eq!(r.method, Method::CatCat);
}

#[test]
fn reversed_prefix_into_the_cherry() {
    let t = Tanglegram::new(cat(6), cat(6), &[5, 4, 3, 0, 1, 2]).unwrap();
    let r = reconstruct_cat_cat(&t.multideck().unwrap()).unwrap();
    assert_eq!(r.tanglegram, t);
    assert!(r.self_check);
}

#[test]
fn every_caterpillar_pair_of_size_six_and_seven() {
    for n in [6, 7] {
        for t in tanglegrams_on(&cat(n), &cat(n)) {
            let r =
                reconstruct_cat_cat(&t.multideck().unwrap()).unwrap_or_else(|e| panic!("{t}: {e}"));
            assert_eq!(r.tanglegram, t);
        }
    }
}

#[test]
fn type1_deepest_pair_counts() {
    for n in [6, 7] {
        for right in trees_of_type(n, TreeType::Type1) {
            let s = right.stripping().count;
            for t in tanglegrams_on(&cat(n), &right) {
                let in_core = [n - 2, n - 1]
                    .iter()
                    .filter(|&&l| t.partner(l) >= s)
                    .count();
                let sig = core_signature(&t.multideck().unwrap(), &right);
                match in_core {
                    2 => assert!(sig.both >= n - 2 && sig.one <= 2, "{t}: {sig:?}"),
                    1 => assert!(
                        sig.one >= n - 2 && sig.both <= 1 && sig.none <= 1,
                        "{t}: {sig:?}"
                    ),
                    _ => assert!(sig.none >= n - 2 && sig.one <= 2, "{t}: {sig:?}"),
                }
                let r = reconstruct_cat_type1(&t.multideck().unwrap()).unwrap();
                assert_eq!(r.tanglegram, t);
            }
        }
    }
}

#[test]
fn type2_same_side_counts() {
    for n in [6, 7] {
        for right in trees_of_type(n, TreeType::Type2) {
            let first = right.children().unwrap().0.size();
            for t in tanglegrams_on(&cat(n), &right) {
                let same = (t.partner(n - 2) < first) == (t.partner(n - 1) < first);
                let count = same_side_signature(&t.multideck().unwrap());
                if same {
                    assert!(count + 2 >= n, "{t}: {count}");
                } else {
                    assert_eq!(count, 1, "{t}");
                }
                let r = reconstruct_cat_type2(&t.multideck().unwrap()).unwrap();
                assert_eq!(r.tanglegram, t);
            }
        }
    }
}

#[test]
fn caterpillar_on_the_right_only() {
    let c3c3 = Tree::compose(&cat(3), &cat(3));
    let mut checked = 0;
    for t in tanglegrams_on(&c3c3, &cat(6)).into_iter().step_by(3) {
        let r = reconstruct(&t.multideck().unwrap()).unwrap();
        assert_eq!(r.tanglegram, t);
        assert!(r.mirrored);
        assert_eq!(r.method, Method::CatType2);
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn mirror_coherence() {
    for n in [5, 6] {
        for t in enumerate_caterpillar_tanglegrams(n).unwrap() {
            let d = t.multideck().unwrap();
            let direct = reconstruct(&d).map(|r| r.tanglegram.mirror());
            let swapped = reconstruct(&d.mirror()).map(|r| r.tanglegram);
            assert_eq!(direct, swapped, "{t}");
        }
    }
}

#[test]
fn tanglegrams_without_a_caterpillar_use_search() {
    let mut searched = 0;
    for t in enumerate_tanglegrams(5).unwrap() {
        if t.has_caterpillar_side() {
            continue;
        }
        let d = t.multideck().unwrap();
        match reconstruct(&d) {
            Ok(r) => {
                assert_eq!(r.method, Method::OracleSearch);
                assert!(r.self_check);
                assert_eq!(r.tanglegram, t);
                searched += 1;
            }
            Err(e) => assert!(matches!(e, Error::Ambiguous { .. }), "{t}: {e}"),
        }
    }
    assert!(searched > 0);
}

#[test]
fn oracle_finds_the_three_card_fixture() {
    let t = parse_tanglegram("((1,(2,3)),(4,5)) | (1,(2,((3,4),5))) | id").unwrap();
    let d = t.multideck().unwrap();
    assert_eq!(oracle_matches(&d, 5).unwrap(), vec![t.clone()]);
    assert_eq!(oracle_search(&d).unwrap(), t);
}

#[test]
fn oracle_contains_every_size_five_tanglegram() {
    for t in enumerate_tanglegrams(5).unwrap() {
        assert!(oracle_matches(&t.multideck().unwrap(), 5)
            .unwrap()
            .contains(&t));
    }
}

#[test]
fn fabricated_multideck_has_no_preimage() {
    let t = Tanglegram::new(cat(6), cat(6), &[2, 4, 0, 1, 3, 5]).unwrap();
    let d = t.multideck().unwrap();
    let mut entries: Vec<(Tanglegram, usize)> = d.iter().map(|(c, m)| (c.clone(), m)).collect();
    assert!(entries.len() >= 2);
    let donor = entries.iter().position(|(_, m)| *m >= 2).unwrap_or(0);
    let taker = if donor == 0 { 1 } else { 0 };
    entries[donor].1 -= 1;
    entries[taker].1 += 1;
    let entries = entries.into_iter().filter(|(_, m)| *m > 0);
    let fake = TanglegramMultideck::new(6, entries).unwrap();
    assert!(oracle_matches(&fake, 6).unwrap().is_empty());
    assert!(matches!(reconstruct(&fake), Err(Error::Inconsistent(_))));
}

#[test]
fn collision_report_is_data_below_five() {
    let r = verify_multideck_uniqueness(4, false, DeckVariant::Multideck).unwrap();
    assert_eq!(r.examined, 13);
    let grouped: usize =
        r.collisions.iter().map(Vec::len).sum::<usize>() + r.classes - r.collisions.len();
    assert_eq!(grouped, 13);
    let decks = verify_multideck_uniqueness(4, false, DeckVariant::Deck).unwrap();
    assert!(decks.classes <= r.classes);
}

#[test]
fn ceiling_applies_to_search() {
    let t = Tanglegram::new(cat(6), cat(6), &[2, 4, 0, 1, 3, 5]).unwrap();
    assert!(matches!(
        oracle_matches(&t.multideck().unwrap(), 5),
        Err(Error::AboveCeiling { .. })
    ));
}
