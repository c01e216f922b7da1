//! Executable checks of the set-level laws of negation, sum and birthday.
//!
//! Each suite runs to completion, counting every failure and keeping the
//! first counterexample in printed form.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameError, GameId, GameStore};
use crate::notation::Printer;
use crate::universe::{enumerate_tier, rng_from_seed, Tier, UniverseError, MAX_TIER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    NegInvolution,
    ZeroIdentity,
    Commutativity,
    Associativity,
    BirthdayAdditivity,
    TierMembership,
    All,
}

impl Suite {
    /// Every individual suite, in the order [`run_all`] runs them.
    pub const EACH: [Suite; 6] = [
        Suite::NegInvolution,
        Suite::ZeroIdentity,
        Suite::Commutativity,
        Suite::Associativity,
        Suite::BirthdayAdditivity,
        Suite::TierMembership,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NegInvolution => "neg-involution",
            Suite::ZeroIdentity => "zero-identity",
            Suite::Commutativity => "commutativity",
            Suite::Associativity => "associativity",
            Suite::BirthdayAdditivity => "birthday-additivity",
            Suite::TierMembership => "tier-membership",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = LawsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| LawsError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawsError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("exhaustive tier {0} is above the maximum of {MAX_TIER}")]
    TierTooLarge(usize),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Tier checked exhaustively. Associativity uses at most tier 1 for its
    /// exhaustive part.
    pub exhaustive_tier: usize,
    /// Random tier-2 triples checked by associativity.
    pub sample_triples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            exhaustive_tier: 2,
            sample_triples: 10_000,
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn for_suite(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), LawsError> {
        if self.exhaustive_tier > MAX_TIER {
            return Err(LawsError::TierTooLarge(self.exhaustive_tier));
        }
        Ok(())
    }
}

/// The inputs of a failed check and the two sides that should have agreed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub suite: Suite,
    pub checks_run: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
    pub elapsed: Duration,
    pub config: SuiteConfig,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    suite: &'static str,
    checks_run: u64,
    failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<&'a Counterexample>,
    elapsed_ms: u64,
    config: &'a SuiteConfig,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            suite: self.suite.name(),
            checks_run: self.checks_run,
            failures: self.failures,
            counterexample: self.first_counterexample.as_ref(),
            elapsed_ms: self.elapsed.as_millis() as u64,
            config: &self.config,
        })
        .expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<20} {} checks={} failures={} ({} ms)",
            self.suite.name(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks_run,
            self.failures,
            self.elapsed.as_millis()
        )?;
        if let Some(cx) = &self.first_counterexample {
            write!(
                f,
                "\n  counterexample: [{}]\n    lhs: {}\n    rhs: {}",
                cx.inputs.join(", "),
                cx.lhs,
                cx.rhs
            )?;
        }
        Ok(())
    }
}

struct Tally {
    checks: u64,
    failures: u64,
    first: Option<Counterexample>,
    printer: Printer,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: 0,
            first: None,
            printer: Printer::new(),
        }
    }

    fn games(&mut self, store: &GameStore, ids: &[GameId]) -> Result<Vec<String>, GameError> {
        ids.iter()
            .map(|&g| self.printer.print(store, g, true))
            .collect()
    }

    /// Records one check comparing two games.
    fn same_game(
        &mut self,
        store: &GameStore,
        inputs: &[GameId],
        lhs: GameId,
        rhs: GameId,
    ) -> Result<(), GameError> {
        self.checks += 1;
        if lhs != rhs {
            self.fail_with(|t| {
                let mut sides = t.games(store, &[lhs, rhs])?;
                let rhs = sides.pop().unwrap_or_default();
                let lhs = sides.pop().unwrap_or_default();
                Ok(Counterexample {
                    inputs: t.games(store, inputs)?,
                    lhs,
                    rhs,
                })
            })?;
        }
        Ok(())
    }

    /// Records one check whose sides are described by text.
    fn holds(
        &mut self,
        store: &GameStore,
        inputs: &[GameId],
        ok: bool,
        sides: impl FnOnce() -> (String, String),
    ) -> Result<(), GameError> {
        self.checks += 1;
        if !ok {
            self.fail_with(|t| {
                let (lhs, rhs) = sides();
                Ok(Counterexample {
                    inputs: t.games(store, inputs)?,
                    lhs,
                    rhs,
                })
            })?;
        }
        Ok(())
    }

    fn fail_with(
        &mut self,
        describe: impl FnOnce(&mut Self) -> Result<Counterexample, GameError>,
    ) -> Result<(), GameError> {
        self.failures += 1;
        if self.first.is_none() {
            self.first = Some(describe(self)?);
        }
        Ok(())
    }

    fn finish(self, suite: Suite, config: &SuiteConfig, started: Instant) -> VerificationReport {
        VerificationReport {
            suite,
            checks_run: self.checks,
            failures: self.failures,
            first_counterexample: self.first,
            elapsed: started.elapsed(),
            config: SuiteConfig { suite, ..*config },
        }
    }
}

fn tier(store: &mut GameStore, n: usize) -> Result<Tier, LawsError> {
    Ok(enumerate_tier(store, n)?)
}

/// `-(-G) = G` for every game of the exhaustive tier.
pub fn check_neg_involution(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<VerificationReport, LawsError> {
    config.validate()?;
    let started = Instant::now();
    let mut tally = Tally::new();
    for g in tier(store, config.exhaustive_tier)?.members {
        let n = store.negate(g)?;
        let nn = store.negate(n)?;
        tally.same_game(store, &[g], nn, g)?;
    }
    Ok(tally.finish(Suite::NegInvolution, config, started))
}

/// `0 + G = G = G + 0`; one check per game covering both sides.
pub fn check_zero_identity(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<VerificationReport, LawsError> {
    config.validate()?;
    let started = Instant::now();
    let zero = store.zero();
    let mut tally = Tally::new();
    for g in tier(store, config.exhaustive_tier)?.members {
        let left = store.sum(zero, g)?;
        let right = store.sum(g, zero)?;
        if left != g {
            tally.same_game(store, &[g], left, g)?;
        } else {
            tally.same_game(store, &[g], g, right)?;
        }
    }
    Ok(tally.finish(Suite::ZeroIdentity, config, started))
}

/// `G + H = H + G` over all ordered pairs of the exhaustive tier.
pub fn check_commutativity(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<VerificationReport, LawsError> {
    config.validate()?;
    let started = Instant::now();
    let members = tier(store, config.exhaustive_tier)?.members;
    let mut tally = Tally::new();
    for &g in &members {
        for &h in &members {
            let gh = store.sum(g, h)?;
            let hg = store.sum(h, g)?;
            tally.same_game(store, &[g, h], gh, hg)?;
        }
    }
    Ok(tally.finish(Suite::Commutativity, config, started))
}

/// `(G + H) + K = G + (H + K)`: every triple of tier `min(exhaustive_tier, 1)`
/// followed by `sample_triples` seeded triples from tier 2.
pub fn check_associativity(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<VerificationReport, LawsError> {
    config.validate()?;
    let started = Instant::now();
    let mut tally = Tally::new();

    let check = |store: &mut GameStore, tally: &mut Tally, g, h, k| -> Result<(), GameError> {
        let gh = store.sum(g, h)?;
        let lhs = store.sum(gh, k)?;
        let hk = store.sum(h, k)?;
        let rhs = store.sum(g, hk)?;
        tally.same_game(store, &[g, h, k], lhs, rhs)
    };

    let small = tier(store, config.exhaustive_tier.min(1))?.members;
    for &g in &small {
        for &h in &small {
            for &k in &small {
                check(store, &mut tally, g, h, k)?;
            }
        }
    }

    if config.sample_triples > 0 {
        let pool = tier(store, MAX_TIER)?.members;
        let mut rng = rng_from_seed(config.seed);
        for _ in 0..config.sample_triples {
            let g = pool[rng.gen_range(0..pool.len())];
            let h = pool[rng.gen_range(0..pool.len())];
            let k = pool[rng.gen_range(0..pool.len())];
            check(store, &mut tally, g, h, k)?;
        }
    }
    Ok(tally.finish(Suite::Associativity, config, started))
}

/// `b(G + H) = b(G) + b(H)` over all ordered pairs of the exhaustive tier.
///
/// Whenever `b(G) + b(H)` is itself an enumerated tier, the same check also
/// requires `G + H` to be a member of that tier.
pub fn check_birthday_additivity(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<VerificationReport, LawsError> {
    config.validate()?;
    let started = Instant::now();
    let top = config.exhaustive_tier;
    let tiers: Vec<HashSet<GameId>> = (0..=top)
        .map(|n| tier(store, n).map(|t| t.members.into_iter().collect()))
        .collect::<Result<_, _>>()?;
    let members = tier(store, top)?.members;
    let mut tally = Tally::new();
    for &g in &members {
        for &h in &members {
            let s = store.sum(g, h)?;
            let (bs, bg, bh) = (store.birthday(s)?, store.birthday(g)?, store.birthday(h)?);
            let bound = (bg + bh) as usize;
            let in_tier = tiers.get(bound).is_none_or(|t| t.contains(&s));
            tally.holds(store, &[g, h], bs == bg + bh && in_tier, || {
                (
                    format!(
                        "b(G+H)={bs}{}",
                        if in_tier {
                            ""
                        } else {
                            " (not in tier b(G)+b(H))"
                        }
                    ),
                    format!("b(G)+b(H)={}", bg + bh),
                )
            })?;
        }
    }
    Ok(tally.finish(Suite::BirthdayAdditivity, config, started))
}

/// The recursive birthday equals the least tier that contains the game.
pub fn check_tier_membership(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<VerificationReport, LawsError> {
    config.validate()?;
    let started = Instant::now();
    let top = config.exhaustive_tier;
    let tiers: Vec<HashSet<GameId>> = (0..=top)
        .map(|n| tier(store, n).map(|t| t.members.into_iter().collect()))
        .collect::<Result<_, _>>()?;
    let mut tally = Tally::new();
    for g in tier(store, top)?.members {
        let least = tiers.iter().position(|t| t.contains(&g));
        let b = store.birthday(g)?;
        tally.holds(store, &[g], least == Some(b as usize), || {
            let least = least.map_or("none".to_string(), |n| n.to_string());
            (format!("birthday={b}"), format!("least tier={least}"))
        })?;
    }
    Ok(tally.finish(Suite::TierMembership, config, started))
}

pub fn run_suite(
    store: &mut GameStore,
    suite: Suite,
    config: &SuiteConfig,
) -> Result<Vec<VerificationReport>, LawsError> {
    let report = match suite {
        Suite::NegInvolution => check_neg_involution(store, config)?,
        Suite::ZeroIdentity => check_zero_identity(store, config)?,
        Suite::Commutativity => check_commutativity(store, config)?,
        Suite::Associativity => check_associativity(store, config)?,
        Suite::BirthdayAdditivity => check_birthday_additivity(store, config)?,
        Suite::TierMembership => check_tier_membership(store, config)?,
        Suite::All => return run_all(store, config),
    };
    Ok(vec![report])
}

/// Runs `config.suite`, which may be [`Suite::All`].
pub fn run(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<Vec<VerificationReport>, LawsError> {
    run_suite(store, config.suite, config)
}

/// Runs all six suites with a shared configuration.
pub fn run_all(
    store: &mut GameStore,
    config: &SuiteConfig,
) -> Result<Vec<VerificationReport>, LawsError> {
    config.validate()?;
    Suite::EACH
        .into_iter()
        .map(|suite| Ok(run_suite(store, suite, config)?.remove(0)))
        .collect()
}
