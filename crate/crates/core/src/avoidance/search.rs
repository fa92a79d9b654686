//! Generic search for large sets obeying a hereditary constraint.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpcore::{PrimeField, ResidueSet};

/// Largest modulus accepted by exhaustive search.
pub const EXHAUSTIVE_LIMIT: u64 = 31;
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;
pub const DEFAULT_RESTARTS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Node limit for exhaustive search, restart count for randomized search.
    pub budget: Option<u64>,
    pub seed: u64,
}

impl SearchOptions {
    pub fn exhaustive() -> Self {
        SearchOptions { mode: SearchMode::Exhaustive, budget: None, seed: 0 }
    }

    pub fn greedy(seed: u64) -> Self {
        SearchOptions { mode: SearchMode::Greedy, budget: None, seed }
    }

    pub fn randomized(seed: u64, restarts: u64) -> Self {
        SearchOptions { mode: SearchMode::Randomized, budget: Some(restarts), seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub size: usize,
    pub witness: ResidueSet,
    /// Search nodes (exhaustive) or restarts (randomized) consumed.
    pub nodes: u64,
    /// The size is the true maximum.
    pub exact: bool,
}

/// Symmetries of the solution space that an exhaustive search may quotient out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Symmetry {
    None,
    /// Closed under `x -> s x`, `s != 0`.
    Dilation,
    /// Closed under `x -> s x + u`, `s != 0`.
    Affine,
}

/// A property of subsets of `F_p` that is closed under taking subsets.
pub(crate) trait Constraint {
    fn field(&self) -> PrimeField;
    fn symmetry(&self) -> Symmetry;
    /// Whether `set ∪ {x}` still satisfies the property; `member` is the
    /// indicator of `set`, which already satisfies it, and `x ∉ set`.
    fn admits(&self, member: &[bool], set: &[u64], x: u64) -> bool;
}

struct Workspace<'a, C: Constraint> {
    constraint: &'a C,
    member: Vec<bool>,
    set: Vec<u64>,
}

impl<'a, C: Constraint> Workspace<'a, C> {
    fn new(constraint: &'a C) -> Self {
        Workspace { constraint, member: vec![false; constraint.field().size()], set: Vec::new() }
    }

    fn admits(&self, x: u64) -> bool {
        !self.member[x as usize] && self.constraint.admits(&self.member, &self.set, x)
    }

    fn push(&mut self, x: u64) {
        self.member[x as usize] = true;
        self.set.push(x);
    }

    fn pop(&mut self) {
        let x = self.set.pop().expect("nonempty");
        self.member[x as usize] = false;
    }

    fn filter(&self, cands: &[u64]) -> Vec<u64> {
        cands.iter().copied().filter(|&y| self.admits(y)).collect()
    }
}

/// Residues by descending number of pairwise conflicts, ties broken by a
/// seeded key.
fn conflict_order<C: Constraint>(constraint: &C, seed: u64) -> Vec<u64> {
    let mut ws = Workspace::new(constraint);
    let p = constraint.field().p();
    let viable: Vec<u64> = (0..p).filter(|&x| ws.admits(x)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keyed: Vec<(usize, u64, u64)> = viable
        .iter()
        .map(|&x| {
            ws.push(x);
            let conflicts = viable.iter().filter(|&&y| y != x && !ws.admits(y)).count();
            ws.pop();
            (conflicts, rng.random::<u64>(), x)
        })
        .collect();
    keyed.sort_unstable_by(|l, r| r.0.cmp(&l.0).then(l.1.cmp(&r.1)));
    keyed.into_iter().map(|k| k.2).collect()
}

struct BranchAndBound<'a, C: Constraint> {
    ws: Workspace<'a, C>,
    best: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl<C: Constraint> BranchAndBound<'_, C> {
    fn run(&mut self, cands: &[u64]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(format!("search exceeded {} nodes", self.budget)));
        }
        if self.ws.set.len() > self.best.len() {
            self.best = self.ws.set.clone();
        }
        if self.ws.set.len() + cands.len() <= self.best.len() {
            return Ok(());
        }
        let (&v, rest) = cands.split_first().expect("bound leaves a candidate");
        self.ws.push(v);
        let narrowed = self.ws.filter(rest);
        let included = self.run(&narrowed);
        self.ws.pop();
        included?;
        self.run(rest)
    }
}

fn exhaustive<C: Constraint>(constraint: &C, options: &SearchOptions) -> Result<SearchOutcome> {
    let field = constraint.field();
    if field.p() > EXHAUSTIVE_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive search needs p <= {EXHAUSTIVE_LIMIT}, got {}",
            field.p()
        )));
    }
    let order = conflict_order(constraint, options.seed);
    let mut bnb = BranchAndBound {
        ws: Workspace::new(constraint),
        best: order.first().map(|&x| vec![x]).unwrap_or_default(),
        nodes: 0,
        budget: options.budget.unwrap_or(DEFAULT_NODE_BUDGET),
    };
    // Every set of size >= 2 has an image containing the forced elements.
    let forced: &[u64] = match constraint.symmetry() {
        Symmetry::None => &[],
        Symmetry::Dilation => &[1],
        Symmetry::Affine => &[0, 1],
    };
    let mut feasible = true;
    for &x in forced {
        if bnb.ws.admits(x) {
            bnb.ws.push(x);
        } else {
            feasible = false;
            break;
        }
    }
    if feasible {
        let cands = bnb.ws.filter(&order);
        bnb.run(&cands)?;
    }
    let nodes = bnb.nodes;
    let best = bnb.best;
    Ok(SearchOutcome { size: best.len(), witness: ResidueSet::new(field, best), nodes, exact: true })
}

fn greedy_pass<C: Constraint>(constraint: &C, order: &[u64]) -> Vec<u64> {
    let mut ws = Workspace::new(constraint);
    for &x in order {
        if ws.admits(x) {
            ws.push(x);
        }
    }
    ws.set
}

pub(crate) fn search<C: Constraint>(constraint: &C, options: &SearchOptions) -> Result<SearchOutcome> {
    let field = constraint.field();
    match options.mode {
        SearchMode::Exhaustive => exhaustive(constraint, options),
        SearchMode::Greedy => {
            let mut order = conflict_order(constraint, options.seed);
            order.reverse();
            let best = greedy_pass(constraint, &order);
            Ok(SearchOutcome { size: best.len(), witness: ResidueSet::new(field, best), nodes: 1, exact: false })
        }
        SearchMode::Randomized => {
            let restarts = options.budget.unwrap_or(DEFAULT_RESTARTS).max(1);
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            let mut order: Vec<u64> = (0..field.p()).collect();
            let mut best = Vec::new();
            for _ in 0..restarts {
                order.shuffle(&mut rng);
                let got = greedy_pass(constraint, &order);
                if got.len() > best.len() {
                    best = got;
                }
            }
            Ok(SearchOutcome {
                size: best.len(),
                witness: ResidueSet::new(field, best),
                nodes: restarts,
                exact: false,
            })
        }
    }
}
