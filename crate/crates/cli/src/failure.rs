use rescaled_rbf::Error;

pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_ROWS: i32 = 4;

/// A failed command: exit code plus the field or stage to blame.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub field: String,
    pub message: String,
}

impl Failure {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn solver(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_SOLVER,
            field: "solver".to_string(),
            message: message.into(),
        }
    }

    /// Maps a library error, blaming `stage` for input problems.
    pub fn from_core(e: Error, stage: &str) -> Self {
        let message = e.to_string();
        match e {
            Error::Fit { .. } | Error::NotPositiveDefinite { .. } | Error::PatchFit { .. } => {
                Failure::solver(message)
            }
            Error::DenominatorVanished { .. } | Error::AllFlagged => Failure {
                code: EXIT_SOLVER,
                field: "eval".to_string(),
                message,
            },
            Error::InvalidParameter { name, reason } => Failure::config(name, reason),
            Error::Uncovered { .. } => Failure::config("patches", message),
            _ => Failure::config(stage, message),
        }
    }

    /// One machine-parsable line, `error:<field>: <message>`.
    pub fn line(&self) -> String {
        format!("error:{}: {}", self.field, self.message.replace('\n', " "))
    }
}
