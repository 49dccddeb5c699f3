use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, PlayerId, PlayerTag, MAX_PLAYERS};
use crate::error::{Error, Result};

type ValueFn = dyn Fn(Coalition) -> f64 + Send + Sync;

/// Player roster plus a characteristic function.
///
/// The characteristic function must be pure: the same coalition always maps
/// to the same value, independent of evaluation order or thread.
#[derive(Clone)]
pub struct CoalitionGame {
    label: String,
    tags: Vec<PlayerTag>,
    value: Arc<ValueFn>,
}

impl CoalitionGame {
    pub fn new<F>(label: impl Into<String>, tags: Vec<PlayerTag>, value: F) -> Result<Self>
    where
        F: Fn(Coalition) -> f64 + Send + Sync + 'static,
    {
        if tags.is_empty() {
            return Err(crate::error::invalid("n_players", "a game needs at least one player"));
        }
        if tags.len() > MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                players: tags.len(),
                max: MAX_PLAYERS,
            });
        }
        Ok(CoalitionGame {
            label: label.into(),
            tags,
            value: Arc::new(value),
        })
    }

    /// Game whose players all carry the same tag.
    pub fn uniform<F>(label: impl Into<String>, n_players: usize, tag: PlayerTag, value: F) -> Result<Self>
    where
        F: Fn(Coalition) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, vec![tag; n_players], value)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_players(&self) -> usize {
        self.tags.len()
    }

    pub fn tags(&self) -> &[PlayerTag] {
        &self.tags
    }

    pub fn player(&self, index: usize) -> Option<PlayerId> {
        self.tags.get(index).map(|&tag| PlayerId { index, tag })
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.n_players())
    }

    #[inline]
    pub fn value(&self, s: Coalition) -> f64 {
        (self.value)(s)
    }

    pub fn grand_value(&self) -> f64 {
        self.value(self.grand_coalition())
    }

    /// Pointwise sum `a + b` of two games on the same roster.
    pub fn sum(&self, other: &CoalitionGame) -> Result<CoalitionGame> {
        if self.n_players() != other.n_players() {
            return Err(Error::RosterMismatch {
                left: self.n_players(),
                right: other.n_players(),
            });
        }
        let (a, b) = (Arc::clone(&self.value), Arc::clone(&other.value));
        CoalitionGame::new(
            format!("{} + {}", self.label, other.label),
            self.tags.clone(),
            move |s| a(s) + b(s),
        )
    }
}

impl fmt::Debug for CoalitionGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoalitionGame")
            .field("label", &self.label)
            .field("n_players", &self.n_players())
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Anonymous,
    ClosedForm,
    Sampled,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Anonymous => "anonymous",
            Method::ClosedForm => "closed_form",
            Method::Sampled => "sampled",
        }
    }
}

/// Per-player payoff vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub payoffs: Vec<f64>,
    pub grand_value: f64,
    pub method: Method,
    /// Standard error of each payoff; only set for sampled allocations.
    pub stderr: Option<Vec<f64>>,
}

impl Allocation {
    pub fn new(payoffs: Vec<f64>, grand_value: f64, method: Method) -> Self {
        Allocation {
            payoffs,
            grand_value,
            method,
            stderr: None,
        }
    }

    pub fn n_players(&self) -> usize {
        self.payoffs.len()
    }

    pub fn total(&self) -> f64 {
        self.payoffs.iter().sum()
    }

    /// Tolerance on `|total - grand_value|` implied by the method.
    pub fn efficiency_tolerance(&self) -> f64 {
        let deterministic = 1e-9 * self.grand_value.abs().max(1.0);
        match &self.stderr {
            Some(se) => deterministic.max(3.0 * se.iter().sum::<f64>()),
            None => deterministic,
        }
    }

    pub fn is_efficient(&self) -> bool {
        (self.total() - self.grand_value).abs() <= self.efficiency_tolerance()
    }

    pub fn share(&self, player: usize) -> Option<f64> {
        if self.grand_value == 0.0 {
            None
        } else {
            self.payoffs.get(player).map(|p| p / self.grand_value)
        }
    }

    /// Largest per-player absolute difference against another allocation.
    pub fn max_abs_diff(&self, other: &Allocation) -> f64 {
        self.payoffs
            .iter()
            .zip(&other.payoffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
