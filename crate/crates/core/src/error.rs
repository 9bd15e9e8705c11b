use thiserror::Error;

/// Failures of the counting rule and the routines layered on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("demand alpha must be at least 1, got {0}")]
    NonPositiveDemand(i64),
    #[error("budget beta must be at least 1, got {0}")]
    NonPositiveBudget(i64),
    #[error("rank r must be non-negative, got {0}")]
    NegativeRank(i64),
    #[error("first price m_1 must be at least 1, got {0}")]
    NonPositivePrice(i64),
    #[error("prices must increase strictly: m_{index} = {current} after {previous}")]
    NonIncreasingPrices {
        index: usize,
        previous: i64,
        current: i64,
    },
    #[error("inventory n_{index} is negative ({value})")]
    NegativeInventory { index: usize, value: i64 },
    #[error("shelf list is empty")]
    NoShelves,
    #[error("materialized {cap} shelves without reaching demand {demand} (cumulative inventory {reached})")]
    ShelfCapExceeded {
        cap: usize,
        demand: i64,
        reached: i64,
    },
    #[error("shelf index {index} is out of range")]
    ShelfIndexOutOfRange { index: usize },
    #[error("no integer price strictly between {left} and {right}")]
    NoIntegerPriceInGap { left: i64, right: i64 },
    #[error("operation requires a finite shelf list")]
    NotFinite,
    #[error("{count} shelves exceed the enumeration limit of {limit}")]
    InstanceTooLarge { count: usize, limit: usize },
}

impl BoundError {
    /// Stable identifier used in machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            BoundError::NonPositiveDemand(_) => "NonPositiveDemand",
            BoundError::NonPositiveBudget(_) => "NonPositiveBudget",
            BoundError::NegativeRank(_) => "NegativeRank",
            BoundError::NonPositivePrice(_) => "NonPositivePrice",
            BoundError::NonIncreasingPrices { .. } => "NonIncreasingPrices",
            BoundError::NegativeInventory { .. } => "NegativeInventory",
            BoundError::NoShelves => "NoShelves",
            BoundError::ShelfCapExceeded { .. } => "ShelfCapExceeded",
            BoundError::ShelfIndexOutOfRange { .. } => "ShelfIndexOutOfRange",
            BoundError::NoIntegerPriceInGap { .. } => "NoIntegerPriceInGap",
            BoundError::NotFinite => "NotFinite",
            BoundError::InstanceTooLarge { .. } => "InstanceTooLarge",
        }
    }
}
