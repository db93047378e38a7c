use serde::{Deserialize, Serialize};

/// Outcome of a budget-limited exhaustive search.
///
/// `NoneFound` is only returned when the search space was exhausted, so it is
/// an exact negative answer. A spent budget is reported as `BudgetExhausted`
/// and must never be conflated with `NoneFound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchResult<T> {
    Found(T),
    NoneFound,
    BudgetExhausted,
}

impl<T> SearchResult<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchResult::Found(_))
    }

    pub fn is_none_found(&self) -> bool {
        matches!(self, SearchResult::NoneFound)
    }

    pub fn found(self) -> Option<T> {
        match self {
            SearchResult::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchResult<U> {
        match self {
            SearchResult::Found(t) => SearchResult::Found(f(t)),
            SearchResult::NoneFound => SearchResult::NoneFound,
            SearchResult::BudgetExhausted => SearchResult::BudgetExhausted,
        }
    }
}

/// Node budget for backtracking searches. `spend` returns false once the
/// budget is gone; searches then unwind and report `BudgetExhausted`.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    remaining: u64,
    exhausted: bool,
}

impl Budget {
    pub fn new(nodes: u64) -> Self {
        Budget { remaining: nodes, exhausted: false }
    }

    /// Effectively unlimited; used by exhaustive oracles that refuse large
    /// inputs up front instead of budgeting.
    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    #[inline]
    pub fn spend(&mut self, nodes: u64) -> bool {
        if self.remaining >= nodes {
            self.remaining -= nodes;
            true
        } else {
            self.exhausted = true;
            false
        }
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}
