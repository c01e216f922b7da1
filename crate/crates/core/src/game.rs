//! Interned short games.
//!
//! A short game is an ordered pair of finite sets of previously built short
//! games. Every game lives in a [`GameStore`] exactly once, so two handles
//! from the same store are equal precisely when the games are equal as sets.
//!
//! Negation, sum and birthday are computed with explicit work stacks rather
//! than native recursion, so arbitrarily deep games do not exhaust the call
//! stack.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Opaque handle to a game interned in a [`GameStore`].
///
/// Only meaningful relative to the store that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GameId(u64);

impl GameId {
    /// The game `0 = (∅, ∅)`, pre-interned in every store.
    pub const ZERO: GameId = GameId(0);

    pub fn index(self) -> u64 {
        self.0
    }

    fn slot(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("unknown game handle {0}")]
    UnknownHandle(GameId),
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;

/// Canonical option sets of a game: both lists strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameData {
    left: Box<[GameId]>,
    right: Box<[GameId]>,
}

impl GameData {
    fn canonical(mut left: Vec<GameId>, mut right: Vec<GameId>) -> Self {
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        GameData {
            left: left.into_boxed_slice(),
            right: right.into_boxed_slice(),
        }
    }

    pub fn left(&self) -> &[GameId] {
        &self.left
    }

    pub fn right(&self) -> &[GameId] {
        &self.right
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }
}

/// Which formula [`GameStore::sum`] applies.
///
/// Everything except [`SumRule::Disjunctive`] is a deliberately wrong
/// transcription, kept so the law checkers can be shown to catch it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumRule {
    /// `G + H = ((G^L + H) ∪ (G + H^L), (G^R + H) ∪ (G + H^R))`.
    #[default]
    Disjunctive,
    /// The disjunctive sum with the `G + H^L` branch left out.
    WithoutSecondLeftMoves,
}

/// Interning table for games plus memo tables for the recursive operations.
///
/// All mutating operations take `&mut self`; the single-writer contract is
/// enforced by the borrow checker.
#[derive(Debug, Clone)]
pub struct GameStore {
    nodes: Vec<GameData>,
    index: HashMap<GameData, GameId>,
    neg_memo: HashMap<GameId, GameId>,
    sum_memo: HashMap<(GameId, GameId), GameId>,
    birthday_memo: HashMap<GameId, u32>,
    sum_rule: SumRule,
}

impl Default for GameStore {
    fn default() -> Self {
        Self::new()
    }
}

impl GameStore {
    pub fn new() -> Self {
        Self::with_sum_rule(SumRule::Disjunctive)
    }

    pub fn with_sum_rule(sum_rule: SumRule) -> Self {
        let mut store = GameStore {
            nodes: Vec::new(),
            index: HashMap::new(),
            neg_memo: HashMap::new(),
            sum_memo: HashMap::new(),
            birthday_memo: HashMap::new(),
            sum_rule,
        };
        let zero = store.insert(GameData::canonical(Vec::new(), Vec::new()));
        debug_assert_eq!(zero, GameId::ZERO);
        store
    }

    pub fn sum_rule(&self) -> SumRule {
        self.sum_rule
    }

    /// Number of distinct games interned so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, g: GameId) -> bool {
        g.slot() < self.nodes.len()
    }

    fn check(&self, g: GameId) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GameError::UnknownHandle(g))
        }
    }

    fn insert(&mut self, data: GameData) -> GameId {
        if let Some(&id) = self.index.get(&data) {
            return id;
        }
        let id = GameId(self.nodes.len() as u64);
        self.nodes.push(data.clone());
        self.index.insert(data, id);
        id
    }

    /// Interns the game with the given option sets. Order and repetition in
    /// the inputs are irrelevant.
    pub fn intern(&mut self, left: &[GameId], right: &[GameId]) -> Result<GameId> {
        for &g in left.iter().chain(right) {
            self.check(g)?;
        }
        Ok(self.insert(GameData::canonical(left.to_vec(), right.to_vec())))
    }

    /// Returns the id of an already interned game without creating it.
    pub fn lookup(&self, left: &[GameId], right: &[GameId]) -> Option<GameId> {
        self.index
            .get(&GameData::canonical(left.to_vec(), right.to_vec()))
            .copied()
    }

    pub fn zero(&self) -> GameId {
        GameId::ZERO
    }

    /// `1 = ({0}, ∅)`
    pub fn one(&mut self) -> GameId {
        self.insert(GameData::canonical(vec![GameId::ZERO], Vec::new()))
    }

    /// `-1 = (∅, {0})`
    pub fn neg_one(&mut self) -> GameId {
        self.insert(GameData::canonical(Vec::new(), vec![GameId::ZERO]))
    }

    /// `* = ({0}, {0})`
    pub fn star(&mut self) -> GameId {
        self.insert(GameData::canonical(vec![GameId::ZERO], vec![GameId::ZERO]))
    }

    pub fn data(&self, g: GameId) -> Result<&GameData> {
        self.nodes.get(g.slot()).ok_or(GameError::UnknownHandle(g))
    }

    /// Canonical (sorted, duplicate-free) left and right options of `g`.
    pub fn options(&self, g: GameId) -> Result<(&[GameId], &[GameId])> {
        let data = self.data(g)?;
        Ok((&data.left, &data.right))
    }

    /// Set equality, which for interned games is handle equality.
    pub fn set_equal(&self, g: GameId, h: GameId) -> Result<bool> {
        self.check(g)?;
        self.check(h)?;
        Ok(g == h)
    }

    /// `-G = (-G^R, -G^L)`, with `-∅ = ∅`.
    pub fn negate(&mut self, g: GameId) -> Result<GameId> {
        self.check(g)?;
        let mut stack = vec![g];
        while let Some(&top) = stack.last() {
            if self.neg_memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let data = &self.nodes[top.slot()];
            let before = stack.len();
            for x in data.left.iter().chain(data.right.iter()) {
                if !self.neg_memo.contains_key(x) {
                    stack.push(*x);
                }
            }
            if stack.len() > before {
                continue;
            }
            let left = data.right.iter().map(|x| self.neg_memo[x]).collect();
            let right = data.left.iter().map(|x| self.neg_memo[x]).collect();
            let id = self.insert(GameData::canonical(left, right));
            self.neg_memo.insert(top, id);
            stack.pop();
        }
        Ok(self.neg_memo[&g])
    }

    /// The sum `G + H` under this store's [`SumRule`]; memoized on the
    /// ordered pair, so `sum(g, h)` and `sum(h, g)` are computed separately.
    pub fn sum(&mut self, g: GameId, h: GameId) -> Result<GameId> {
        self.check(g)?;
        self.check(h)?;
        let keep_second_left = self.sum_rule == SumRule::Disjunctive;
        let mut stack = vec![(g, h)];
        while let Some(&(a, b)) = stack.last() {
            if self.sum_memo.contains_key(&(a, b)) {
                stack.pop();
                continue;
            }
            let ga = &self.nodes[a.slot()];
            let hb = &self.nodes[b.slot()];
            let second_left: &[GameId] = if keep_second_left { &hb.left } else { &[] };

            let before = stack.len();
            let firsts = ga.left.iter().chain(ga.right.iter()).map(|&x| (x, b));
            let seconds = second_left.iter().chain(hb.right.iter()).map(|&y| (a, y));
            for pair in firsts.chain(seconds) {
                if !self.sum_memo.contains_key(&pair) {
                    stack.push(pair);
                }
            }
            if stack.len() > before {
                continue;
            }

            let memo = &self.sum_memo;
            let left = ga
                .left
                .iter()
                .map(|&x| memo[&(x, b)])
                .chain(second_left.iter().map(|&y| memo[&(a, y)]))
                .collect();
            let right = ga
                .right
                .iter()
                .map(|&x| memo[&(x, b)])
                .chain(hb.right.iter().map(|&y| memo[&(a, y)]))
                .collect();
            let id = self.insert(GameData::canonical(left, right));
            self.sum_memo.insert((a, b), id);
            stack.pop();
        }
        Ok(self.sum_memo[&(g, h)])
    }

    /// Formal birthday: 0 for `0`, otherwise one more than the largest
    /// birthday among the options.
    pub fn birthday(&mut self, g: GameId) -> Result<u32> {
        self.check(g)?;
        let mut stack = vec![g];
        while let Some(&top) = stack.last() {
            if self.birthday_memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let data = &self.nodes[top.slot()];
            let before = stack.len();
            for x in data.left.iter().chain(data.right.iter()) {
                if !self.birthday_memo.contains_key(x) {
                    stack.push(*x);
                }
            }
            if stack.len() > before {
                continue;
            }
            let b = data
                .left
                .iter()
                .chain(data.right.iter())
                .map(|x| self.birthday_memo[x] + 1)
                .max()
                .unwrap_or(0);
            self.birthday_memo.insert(top, b);
            stack.pop();
        }
        Ok(self.birthday_memo[&g])
    }

    /// Drops every memoized negation, sum and birthday. Interned games and
    /// their handles are kept.
    pub fn clear_memos(&mut self) {
        self.neg_memo.clear();
        self.sum_memo.clear();
        self.birthday_memo.clear();
    }

    /// All interned games in insertion order.
    pub fn ids(&self) -> impl Iterator<Item = GameId> + '_ {
        (0..self.nodes.len() as u64).map(GameId)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_preinterned() {
        let store = GameStore::new();
        assert_eq!(store.len(), 1);
        assert_eq!(store.options(GameId::ZERO).unwrap(), (&[][..], &[][..]));
        assert_eq!(store.lookup(&[], &[]), Some(GameId::ZERO));
    }

    #[test]
    fn intern_is_idempotent_and_ignores_duplicates() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = s.intern(&[z], &[]).unwrap();
        assert_eq!(one, s.one());
        assert_eq!(s.intern(&[z, z], &[]).unwrap(), one);
        assert_eq!(s.intern(&[], &[]).unwrap(), z);
        let star = s.star();
        let a = s.intern(&[star, one, z], &[one]).unwrap();
        let b = s.intern(&[z, one, star, one], &[one, one]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn named_games() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = s.one();
        let neg_one = s.neg_one();
        let star = s.star();
        assert_eq!(s.options(one).unwrap(), (&[z][..], &[][..]));
        assert_eq!(s.options(neg_one).unwrap(), (&[][..], &[z][..]));
        assert_eq!(s.options(star).unwrap(), (&[z][..], &[z][..]));
        assert_eq!(s.one(), one);
        assert_eq!(s.star(), star);
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn unknown_handles_are_rejected() {
        let mut s = GameStore::new();
        let bogus = GameId(17);
        assert_eq!(
            s.intern(&[bogus], &[]),
            Err(GameError::UnknownHandle(bogus))
        );
        assert!(s.options(bogus).is_err());
        assert!(s.negate(bogus).is_err());
        assert!(s.sum(GameId::ZERO, bogus).is_err());
        assert!(s.birthday(bogus).is_err());
        assert!(s.set_equal(bogus, GameId::ZERO).is_err());
        assert_eq!(
            GameError::UnknownHandle(bogus).to_string(),
            "unknown game handle #17"
        );
        // a failed intern must not leave anything behind
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn negation_examples() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = s.one();
        let neg_one = s.neg_one();
        let star = s.star();
        assert_eq!(s.negate(z).unwrap(), z);
        assert_eq!(s.negate(one).unwrap(), neg_one);
        assert_eq!(s.negate(neg_one).unwrap(), one);
        assert_eq!(s.negate(star).unwrap(), star);
    }

    #[test]
    fn sum_worked_examples() {
        let mut s = GameStore::new();
        let z = s.zero();
        let one = s.one();
        let neg_one = s.neg_one();
        let star = s.star();

        assert_eq!(s.sum(z, z).unwrap(), z);
        assert_eq!(s.sum(one, z).unwrap(), one);

        let two = s.sum(one, one).unwrap();
        assert_eq!(s.options(two).unwrap(), (&[one][..], &[][..]));

        let one_star = s.sum(one, star).unwrap();
        let expect = s.intern(&[one, star], &[one]).unwrap();
        assert_eq!(one_star, expect);
        assert_eq!(s.sum(star, one).unwrap(), one_star);

        let star_neg = s.sum(star, neg_one).unwrap();
        let expect = s.intern(&[neg_one], &[neg_one, star]).unwrap();
        assert_eq!(star_neg, expect);

        let lhs = s.sum(one_star, neg_one).unwrap();
        let rhs = s.sum(one, star_neg).unwrap();
        assert_eq!(lhs, rhs);
        let one_neg = s.sum(one, neg_one).unwrap();
        let expect = s
            .intern(&[one_neg, star_neg], &[one_neg, one_star])
            .unwrap();
        assert_eq!(lhs, expect);
    }

    #[test]
    fn birthday_examples() {
        let mut s = GameStore::new();
        let one = s.one();
        let neg_one = s.neg_one();
        let star = s.star();
        assert_eq!(s.birthday(GameId::ZERO).unwrap(), 0);
        assert_eq!(s.birthday(one).unwrap(), 1);
        assert_eq!(s.birthday(neg_one).unwrap(), 1);
        assert_eq!(s.birthday(star).unwrap(), 1);
        let one_star = s.sum(one, star).unwrap();
        assert_eq!(s.birthday(one_star).unwrap(), 2);
    }

    #[test]
    fn set_equal_examples() {
        let mut s = GameStore::new();
        let one = s.one();
        let neg_one = s.neg_one();
        let star = s.star();
        let a = s.sum(one, star).unwrap();
        let b = s.sum(star, one).unwrap();
        assert!(s.set_equal(a, b).unwrap());
        assert!(!s.set_equal(one, neg_one).unwrap());
        let nn = s.negate(star).unwrap();
        let nn = s.negate(nn).unwrap();
        assert!(s.set_equal(nn, star).unwrap());
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        // n+1 = ({n}, ∅), nested far beyond any comfortable recursion depth
        let mut s = GameStore::new();
        let mut g = GameId::ZERO;
        for _ in 0..200_000 {
            g = s.intern(&[g], &[]).unwrap();
        }
        assert_eq!(s.birthday(g).unwrap(), 200_000);
        let n = s.negate(g).unwrap();
        assert_eq!(s.negate(n).unwrap(), g);
        assert_eq!(s.birthday(n).unwrap(), 200_000);
        assert_eq!(s.sum(g, GameId::ZERO).unwrap(), g);
    }

    #[test]
    fn deep_sums() {
        let mut s = GameStore::new();
        let star = s.star();
        let mut g = GameId::ZERO;
        for _ in 0..40 {
            g = s.sum(g, star).unwrap();
        }
        assert_eq!(s.birthday(g).unwrap(), 40);
        let h = s.sum(g, g).unwrap();
        assert_eq!(s.birthday(h).unwrap(), 80);
    }

    #[test]
    fn mutant_sum_loses_zero_identity() {
        let mut s = GameStore::with_sum_rule(SumRule::WithoutSecondLeftMoves);
        let one = s.one();
        assert_eq!(s.sum(one, GameId::ZERO).unwrap(), one);
        assert_ne!(s.sum(GameId::ZERO, one).unwrap(), one);
    }

    #[test]
    fn clear_memos_keeps_results() {
        let mut s = GameStore::new();
        let one = s.one();
        let star = s.star();
        let a = s.sum(one, star).unwrap();
        let n = s.negate(a).unwrap();
        let b = s.birthday(n).unwrap();
        let len = s.len();
        s.clear_memos();
        assert_eq!(s.sum(one, star).unwrap(), a);
        assert_eq!(s.negate(a).unwrap(), n);
        assert_eq!(s.birthday(n).unwrap(), b);
        assert_eq!(s.len(), len);
    }
}
