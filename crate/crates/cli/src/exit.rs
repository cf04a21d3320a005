use qmg_core::Error;

/// Process exit statuses, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Ok = 0,
    Invariant = 1,
    Args = 2,
    Pole = 3,
    Budget = 4,
}

impl Exit {
    pub fn from_error(err: &Error) -> Self {
        match err {
            Error::Domain(_) => Exit::Args,
            Error::Pole { .. } => Exit::Pole,
            Error::Budget(_) | Error::Range { .. } => Exit::Budget,
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}
