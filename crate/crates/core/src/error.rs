use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "roster of {players} players exceeds the {engine} cap of {cap}; \
         use the permutation-sampling estimator (shapley_sample) instead"
    )]
    RosterTooLarge {
        players: usize,
        cap: usize,
        engine: &'static str,
    },

    #[error("games are limited to {max} players by the coalition bit set, got {players}")]
    TooManyPlayers { players: usize, max: usize },

    #[error("player {player} is already a member of the coalition")]
    PlayerInCoalition { player: usize },

    #[error("player {player} is outside the roster of {players} players")]
    UnknownPlayer { player: usize, players: usize },

    #[error("rosters differ: {left} vs {right} players")]
    RosterMismatch { left: usize, right: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate crowd of size 0: founder takes f(0) = {founder_payoff}, crowd payoff undefined")]
    DegenerateCrowd { founder_payoff: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),

    #[error("vertex `{0}` has an empty crowd; the fine-grain closed form needs n_v >= 1")]
    EmptyCrowd(String),

    #[error("disk id {disk} out of range 1..={m}")]
    DiskOutOfRange { disk: usize, m: usize },

    #[error("region {0} listed more than once")]
    DuplicateRegion(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
