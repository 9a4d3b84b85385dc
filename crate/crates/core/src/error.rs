use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("moment of order {order} is undefined: {reason}")]
    MomentUndefined { order: u32, reason: String },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("structure not found: {0}")]
    StructureNotFound(String),

    /// The package does not generate an initial (intrinsic-adjusted) credit.
    #[error(
        "credit rule violated: adjusted cash flow {adjusted_cash_flow:.6}, \
         at least {min_atm_quantity:.6} ATM straddles must be sold"
    )]
    CreditRuleViolation {
        adjusted_cash_flow: f64,
        min_atm_quantity: f64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by the caller's inputs rather than by the numerics.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::MomentUndefined { .. }
                | Error::CreditRuleViolation { .. }
        )
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}
