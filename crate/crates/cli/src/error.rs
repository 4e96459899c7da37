use std::fmt;

use qunip::braid::BraidError;
use qunip::crystal::CrystalError;
use qunip::dualbasis::DualError;
use qunip::minors::MinorError;
use qunip::rootdata::DatumError;
use qunip::wordalg::WordError;

/// Failure categories, one per exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Validation,
    Bound,
    Internal,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Usage => 2,
            Kind::Validation => 3,
            Kind::Bound => 4,
            Kind::Internal => 5,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> CliError {
        CliError { kind, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::new(Kind::Usage, message)
    }

    pub fn validation(message: impl Into<String>) -> CliError {
        CliError::new(Kind::Validation, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn word_kind(e: &WordError) -> Kind {
    match e {
        WordError::HeightBound { .. } => Kind::Bound,
        WordError::NotHomogeneous | WordError::DegreeMismatch(..) | WordError::NotCrystalAligned(_) => Kind::Validation,
        WordError::Singular | WordError::Scalar(_) => Kind::Internal,
    }
}

fn braid_kind(e: &BraidError) -> Kind {
    match e {
        BraidError::Word(w) => word_kind(w),
        BraidError::Position { .. } | BraidError::DatumLength { .. } => Kind::Validation,
        BraidError::Impure(_) => Kind::Internal,
    }
}

fn dual_kind(e: &DualError) -> Kind {
    match e {
        DualError::Braid(b) => braid_kind(b),
        DualError::Word(w) => word_kind(w),
        DualError::DatumLength { .. }
        | DualError::NotInSubalgebra(_)
        | DualError::Positions { .. }
        | DualError::ContextMismatch => Kind::Validation,
        DualError::Triangularity(_) | DualError::NotBarAntisymmetric(_) => Kind::Internal,
    }
}

macro_rules! convert {
    ($t:ty, $f:expr) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                CliError::new($f(&e), e.to_string())
            }
        }
    };
}

convert!(DatumError, |_: &DatumError| Kind::Validation);
convert!(WordError, word_kind);
convert!(BraidError, braid_kind);
convert!(DualError, dual_kind);
convert!(CrystalError, |e: &CrystalError| match e {
    CrystalError::Dual(d) => dual_kind(d),
    CrystalError::Word(w) => word_kind(w),
    CrystalError::Precondition(_) | CrystalError::NegativeExponent(_) => Kind::Validation,
    CrystalError::NotCrystal(_) => Kind::Internal,
});
convert!(MinorError, |e: &MinorError| match e {
    MinorError::Dual(d) => dual_kind(d),
    MinorError::Word(w) => word_kind(w),
    MinorError::WrongSign | MinorError::Position { .. } | MinorError::NotDominant(_) => Kind::Validation,
    MinorError::NotQCommuting { .. } | MinorError::ExponentMismatch { .. } => Kind::Internal,
});
