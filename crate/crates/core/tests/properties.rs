use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;

use setgame::notation::{eval_str, print_game, Printer};
use setgame::universe::{enumerate_tier, rng_from_seed, sample_games, SampleSpec};
use setgame::{GameId, GameStore};

fn spec(max_birthday: u32, max_options_per_side: u32, count: usize, seed: u64) -> SampleSpec {
    SampleSpec {
        max_birthday,
        max_options_per_side,
        count,
        seed,
    }
}

/// Copies `g` into `dst` node by node, visiting the nodes of `g`'s DAG in a
/// shuffled order (a node is only built once its options exist).
fn rebuild_scrambled(src: &GameStore, g: GameId, dst: &mut GameStore, seed: u64) -> GameId {
    let mut nodes = Vec::new();
    let mut seen = HashSet::new();
    let mut todo = vec![g];
    while let Some(x) = todo.pop() {
        if seen.insert(x) {
            nodes.push(x);
            let (l, r) = src.options(x).unwrap();
            todo.extend(l.iter().chain(r));
        }
    }
    let mut rng = rng_from_seed(seed);
    nodes.shuffle(&mut rng);

    let mut copied: HashMap<GameId, GameId> = HashMap::new();
    while copied.len() < nodes.len() {
        for &x in &nodes {
            if copied.contains_key(&x) {
                continue;
            }
            let (l, r) = src.options(x).unwrap();
            if l.iter().chain(r).all(|y| copied.contains_key(y)) {
                // reversed and duplicated on purpose: intern must canonicalize
                let mut left: Vec<GameId> = l.iter().rev().map(|y| copied[y]).collect();
                let right: Vec<GameId> = r.iter().rev().map(|y| copied[y]).collect();
                left.extend(left.clone());
                copied.insert(x, dst.intern(&left, &right).unwrap());
            }
        }
    }
    copied[&g]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interning_is_construction_order_independent(seed in any::<u64>(), shuffle in any::<u64>()) {
        let mut src = GameStore::new();
        let games = sample_games(&mut src, &spec(4, 3, 4, seed)).unwrap();
        let mut dst = GameStore::new();
        // warm the destination with unrelated games so handle values differ
        sample_games(&mut dst, &spec(3, 2, 5, seed ^ 0xdead_beef)).unwrap();
        for &g in &games {
            let a = rebuild_scrambled(&src, g, &mut dst, shuffle);
            let b = rebuild_scrambled(&src, g, &mut dst, shuffle.wrapping_add(1));
            prop_assert_eq!(a, b);
            prop_assert_eq!(print_game(&src, g, false).unwrap(), print_game(&dst, a, false).unwrap());
        }
    }

    #[test]
    fn laws_hold_on_sampled_games(seed in any::<u64>()) {
        let mut s = GameStore::new();
        let gs = sample_games(&mut s, &spec(3, 2, 3, seed)).unwrap();
        let (g, h, k) = (gs[0], gs[1], gs[2]);

        let n = s.negate(g).unwrap();
        prop_assert_eq!(s.negate(n).unwrap(), g);
        prop_assert_eq!(s.birthday(n).unwrap(), s.birthday(g).unwrap());

        prop_assert_eq!(s.sum(GameId::ZERO, g).unwrap(), g);
        prop_assert_eq!(s.sum(g, GameId::ZERO).unwrap(), g);

        let gh = s.sum(g, h).unwrap();
        prop_assert_eq!(gh, s.sum(h, g).unwrap());
        let bsum = s.birthday(g).unwrap() + s.birthday(h).unwrap();
        prop_assert_eq!(s.birthday(gh).unwrap(), bsum);

        let lhs = s.sum(gh, k).unwrap();
        let hk = s.sum(h, k).unwrap();
        prop_assert_eq!(lhs, s.sum(g, hk).unwrap());
    }

    #[test]
    fn sampled_round_trip(seed in any::<u64>()) {
        let mut s = GameStore::new();
        let mut printer = Printer::new();
        for g in sample_games(&mut s, &spec(3, 3, 20, seed)).unwrap() {
            for fold in [true, false] {
                let text = printer.print(&s, g, fold).unwrap();
                prop_assert_eq!(eval_str(&mut s, &text).unwrap(), g, "{}", text);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), b in 0u32..5, k in 0u32..4) {
        let sp = spec(b, k, 10, seed);
        let mut s1 = GameStore::new();
        let mut s2 = GameStore::new();
        let a = sample_games(&mut s1, &sp).unwrap();
        prop_assert_eq!(&a, &sample_games(&mut s2, &sp).unwrap());
        for g in a {
            prop_assert!(s1.birthday(g).unwrap() <= b);
        }
    }
}

#[test]
fn option_birthdays() {
    let mut s = GameStore::new();
    let mut games = enumerate_tier(&mut s, 2).unwrap().members;
    games.extend(sample_games(&mut s, &spec(5, 3, 200, 11)).unwrap());
    for g in games {
        let b = s.birthday(g).unwrap();
        let (l, r) = s.options(g).unwrap();
        let opts: Vec<GameId> = l.iter().chain(r).copied().collect();
        if g == GameId::ZERO {
            assert_eq!(b, 0);
            continue;
        }
        assert!(b > 0);
        let obs: Vec<u32> = opts.iter().map(|&x| s.birthday(x).unwrap()).collect();
        assert!(obs.iter().all(|&x| x < b));
        assert!(obs.contains(&(b - 1)));
    }
}

#[test]
fn negation_involution_and_birthday_on_tier_two() {
    let mut s = GameStore::new();
    let tier = enumerate_tier(&mut s, 2).unwrap();
    let mut images = HashSet::new();
    for &g in &tier.members {
        let n = s.negate(g).unwrap();
        assert_eq!(s.negate(n).unwrap(), g);
        assert_eq!(s.birthday(n).unwrap(), s.birthday(g).unwrap());
        assert!(tier.contains(n));
        images.insert(n);
    }
    // a bijection of the tier onto itself
    assert_eq!(images.len(), 256);
}

#[test]
fn tiers_are_nested() {
    let mut s = GameStore::new();
    let t0 = enumerate_tier(&mut s, 0).unwrap();
    let t1 = enumerate_tier(&mut s, 1).unwrap();
    let t2 = enumerate_tier(&mut s, 2).unwrap();
    assert!(t0.members.iter().all(|&g| t1.contains(g)));
    assert!(t1.members.iter().all(|&g| t2.contains(g)));
    let distinct: HashSet<_> = t2.members.iter().collect();
    assert_eq!(distinct.len(), t2.len());
}

#[test]
fn enumeration_is_deterministic() {
    let mut a = GameStore::new();
    let mut b = GameStore::new();
    assert_eq!(
        enumerate_tier(&mut a, 2).unwrap(),
        enumerate_tier(&mut b, 2).unwrap()
    );
}

#[test]
fn memo_transparency() {
    let mut s = GameStore::new();
    let tier = enumerate_tier(&mut s, 2).unwrap().members;
    let pairs: Vec<(GameId, GameId)> = tier
        .iter()
        .step_by(5)
        .flat_map(|&g| tier.iter().step_by(9).map(move |&h| (g, h)))
        .collect();
    let compute = |s: &mut GameStore| -> Vec<(GameId, GameId, u32)> {
        pairs
            .iter()
            .map(|&(g, h)| {
                let sum = s.sum(g, h).unwrap();
                (sum, s.negate(sum).unwrap(), s.birthday(sum).unwrap())
            })
            .collect()
    };
    let first = compute(&mut s);
    let len = s.len();
    s.clear_memos();
    assert_eq!(compute(&mut s), first);
    assert_eq!(s.len(), len);
}

#[test]
fn printing_is_injective_and_store_independent() {
    let mut a = GameStore::new();
    let tier = enumerate_tier(&mut a, 2).unwrap().members;
    let mut printer = Printer::new();
    let texts: Vec<String> = tier
        .iter()
        .map(|&g| printer.print(&a, g, false).unwrap())
        .collect();
    let folded: Vec<String> = tier
        .iter()
        .map(|&g| printer.print(&a, g, true).unwrap())
        .collect();
    assert_eq!(texts.iter().collect::<HashSet<_>>().len(), 256);
    assert_eq!(folded.iter().collect::<HashSet<_>>().len(), 256);

    // a store populated in a different order assigns different handles
    let mut b = GameStore::new();
    sample_games(&mut b, &spec(2, 4, 300, 5)).unwrap();
    for (&g, text) in tier.iter().zip(&folded) {
        let h = rebuild_scrambled(&a, g, &mut b, 3);
        assert_eq!(&print_game(&b, h, true).unwrap(), text);
    }
}
