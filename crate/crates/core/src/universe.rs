//! The finite tiers `G̃_0 ⊂ G̃_1 ⊂ G̃_2` and seeded random games beyond them.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameId, GameStore};

/// Largest tier that can be listed. `G̃_3` already has `2^512` members.
pub const MAX_TIER: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("tier too large to enumerate: {0} (maximum is {MAX_TIER})")]
    TierTooLarge(usize),
    #[error("sample count must be at least 1")]
    EmptySample,
}

/// All games of formal birthday at most `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tier {
    pub n: usize,
    pub members: Vec<GameId>,
}

impl Tier {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: GameId) -> bool {
        self.members.contains(&g)
    }
}

/// Interns every pair of subsets of the previous tier.
///
/// Member order is deterministic: the pair index counts upward in binary,
/// with the left subset in the low bits, and subset bit `i` selects the
/// `i`-th member of the previous tier. On a fresh store tier 1 is therefore
/// `[0, 1, -1, *]`.
pub fn enumerate_tier(store: &mut GameStore, n: usize) -> Result<Tier, UniverseError> {
    if n > MAX_TIER {
        return Err(UniverseError::TierTooLarge(n));
    }
    let mut members = vec![store.zero()];
    for _ in 0..n {
        let prior = std::mem::take(&mut members);
        let k = prior.len();
        let subset = |mask: usize| -> Vec<GameId> {
            (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| prior[i])
                .collect()
        };
        members = (0..1usize << (2 * k))
            .map(|pair| {
                let left = subset(pair & ((1 << k) - 1));
                let right = subset(pair >> k);
                store
                    .intern(&left, &right)
                    .expect("tier members come from the same store")
            })
            .collect();
    }
    Ok(Tier { n, members })
}

/// Games of birthday exactly `n`, in tier order.
pub fn exact_birthday(store: &mut GameStore, n: usize) -> Result<Vec<GameId>, UniverseError> {
    let tier = enumerate_tier(store, n)?;
    if n == 0 {
        return Ok(tier.members);
    }
    let below: HashSet<GameId> = enumerate_tier(store, n - 1)?.members.into_iter().collect();
    Ok(tier
        .members
        .into_iter()
        .filter(|g| !below.contains(g))
        .collect())
}

/// Parameters for [`sample_games`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub max_birthday: u32,
    pub max_options_per_side: u32,
    pub count: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn validate(&self) -> Result<(), UniverseError> {
        if self.count == 0 {
            return Err(UniverseError::EmptySample);
        }
        Ok(())
    }
}

/// Seeded generator for sampling. ChaCha8 seeded through
/// `SeedableRng::seed_from_u64`; fixed so published seeds stay reproducible.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Frame {
    budget: u32,
    n_left: usize,
    n_total: usize,
    children: Vec<GameId>,
}

/// Generates `spec.count` random games of birthday at most `spec.max_birthday`.
///
/// Each node draws a left count and then a right count uniformly from
/// `0..=max_options_per_side`, and its options are generated depth first,
/// left options before right, with the budget reduced by one. A node with
/// budget 0 is the game 0 and consumes no randomness. Duplicates are allowed.
pub fn sample_games(
    store: &mut GameStore,
    spec: &SampleSpec,
) -> Result<Vec<GameId>, UniverseError> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let max = spec.max_options_per_side;
    let frame = |rng: &mut ChaCha8Rng, budget: u32| {
        let n_left = rng.gen_range(0..=max) as usize;
        let n_right = rng.gen_range(0..=max) as usize;
        Frame {
            budget,
            n_left,
            n_total: n_left + n_right,
            children: Vec::with_capacity(n_left + n_right),
        }
    };

    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        if spec.max_birthday == 0 {
            out.push(store.zero());
            continue;
        }
        let mut stack = vec![frame(&mut rng, spec.max_birthday)];
        let game = loop {
            let top = stack
                .last_mut()
                .expect("stack holds the root until it is done");
            if top.children.len() < top.n_total {
                if top.budget == 1 {
                    top.children.push(store.zero());
                } else {
                    let budget = top.budget - 1;
                    stack.push(frame(&mut rng, budget));
                }
                continue;
            }
            let done = stack.pop().expect("non-empty");
            let (left, right) = done.children.split_at(done.n_left);
            let id = store
                .intern(left, right)
                .expect("children come from the same store");
            match stack.last_mut() {
                Some(parent) => parent.children.push(id),
                None => break id,
            }
        };
        out.push(game);
    }
    Ok(out)
}
