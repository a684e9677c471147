use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Group, NormError, NormEval};

/// Limits for a breadth-first word search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordBudget {
    /// Longest word explored.
    pub max_depth: u32,
    /// Most distinct elements stored; exceeding it is an error.
    pub max_states: usize,
}

impl Default for WordBudget {
    fn default() -> Self {
        WordBudget {
            max_depth: 64,
            max_states: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordOutcome {
    Exact(u32),
    /// Not found within `max_depth`; `frontier` elements were still open
    /// (0 means the generated subgroup was exhausted).
    Unreached {
        depth: u32,
        frontier: usize,
    },
}

/// Closes `seeds` under `g -> act(s, g)` for every actor and under inverses.
pub fn conjugation_closure<G: Group>(group: &G, seeds: &[G::Elem], actors: &[G::Actor]) -> Vec<G::Elem> {
    let mut seen: HashMap<G::Elem, ()> = HashMap::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<G::Elem> = VecDeque::new();
    for s in seeds {
        for x in [s.clone(), group.inv(s)] {
            if seen.insert(x.clone(), ()).is_none() {
                queue.push_back(x);
            }
        }
    }
    while let Some(g) = queue.pop_front() {
        for a in actors {
            let h = group.act(a, &g);
            if seen.insert(h.clone(), ()).is_none() {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}

struct Ball<E> {
    dist: HashMap<E, u32>,
    depth: u32,
    frontier: usize,
}

fn explore<G: Group>(
    group: &G,
    gens: &[G::Elem],
    budget: WordBudget,
    stop_at: Option<&G::Elem>,
) -> Result<Ball<G::Elem>, NormError> {
    let mut dist = HashMap::new();
    let id = group.identity();
    dist.insert(id.clone(), 0u32);
    let mut layer = vec![id];
    let mut depth = 0;
    while !layer.is_empty() && depth < budget.max_depth {
        if stop_at.is_some_and(|t| dist.contains_key(t)) {
            break;
        }
        let mut next = Vec::new();
        for g in &layer {
            for s in gens {
                let h = group.mul(g, s);
                if !dist.contains_key(&h) {
                    if dist.len() >= budget.max_states {
                        return Err(NormError::BudgetExceeded {
                            budget: budget.max_states,
                        });
                    }
                    dist.insert(h.clone(), depth + 1);
                    next.push(h);
                }
            }
        }
        layer = next;
        depth += 1;
    }
    Ok(Ball {
        dist,
        depth,
        frontier: layer.len(),
    })
}

/// Minimal length of `g` as a word in `gens` (assumed closed under
/// inverses).
pub fn word_length<G: Group>(
    group: &G,
    gens: &[G::Elem],
    g: &G::Elem,
    budget: WordBudget,
) -> Result<WordOutcome, NormError> {
    let ball = explore(group, gens, budget, Some(g))?;
    Ok(match ball.dist.get(g) {
        Some(&d) => WordOutcome::Exact(d),
        None => WordOutcome::Unreached {
            depth: ball.depth,
            frontier: ball.frontier,
        },
    })
}

/// Word norm for a conjugation-closed generating set. The ball within the
/// budget is computed once; elements outside it evaluate to
/// [`NormError::Unreached`].
pub fn word_norm<G: Group>(group: &G, gens: &[G::Elem], budget: WordBudget) -> Result<NormEval<G::Elem>, NormError>
where
    G::Elem: 'static,
{
    let ball = Arc::new(explore(group, gens, budget, None)?);
    let radius = ball.dist.values().copied().max().unwrap_or(0);
    let b = ball.clone();
    Ok(NormEval::new("word", &group.describe(), move |g| match b.dist.get(g) {
        Some(&d) => Ok(BigRational::from_integer(BigInt::from(d))),
        None => Err(NormError::Unreached {
            depth: b.depth,
            frontier: b.frontier,
        }),
    })
    .with_param("generators", gens.len())
    .with_param("radius", radius))
}
