use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Dilation angle lies outside the admissible interval of the potential family.
    #[error("dilation angle {phi} outside admissible interval ({lo}, {hi})")]
    AngleOutOfStrip { phi: f64, lo: f64, hi: f64 },

    /// A principal-branch power was asked to evaluate on the negative real cut.
    #[error("principal branch cut hit at x = {x} (angle {phi})")]
    BranchCut { phi: f64, x: f64 },

    /// The tail estimate shows the norm integral diverges (or sits on the boundary).
    #[error("integrand not integrable: {reason}")]
    NonIntegrable { reason: String },

    /// Adaptive refinement ran out of budget before reaching the tolerance.
    #[error("tolerance not met: achieved {achieved:.3e}, requested {requested:.3e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },

    /// The decay condition for the dilated Gaussian fails at this angle.
    #[error("decay condition violated: Re(c e^(2i phi)) = {margin:.6e} <= 0")]
    ConditionViolated { margin: f64 },

    /// Parameters are outside the regime where the requested quantity is defined.
    #[error("wrong parameter regime: {0}")]
    WrongRegime(String),

    /// The eigensolver failed to converge.
    #[error("eigensolver did not converge (index {index})")]
    NoConvergence { index: usize },

    /// Classification requires 0 < phi_probe < phi.
    #[error("invalid angle order: phi_probe = {probe}, phi = {phi}")]
    AngleOrder { probe: f64, phi: f64 },

    /// The operation is not defined for this region variant.
    #[error("operation not supported for region variant {0}")]
    UnsupportedVariant(String),

    /// The potential's analyticity half-width is too small for the requested bound.
    #[error("analyticity half-width {alpha} insufficient: need alpha > {required}")]
    InsufficientAlpha { alpha: f64, required: f64 },

    /// Sector aperture parameter must be positive (and finite).
    #[error("kappa = {0} outside (0, inf)")]
    KappaDomain(f64),

    /// A quantity that feeds a bound depends on an ambiguously matched eigenvalue.
    #[error("classification unstable: {0}")]
    ClassificationUnstable(String),

    /// A LAPACK routine reported a nonzero info code.
    #[error("{routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    /// Config or input validation failure; `field` names the offending entry.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
