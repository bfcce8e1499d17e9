use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Killed,
    Survived,
    /// The mutant did not compile; it is not a real mutant and is left out of
    /// coverage denominators.
    Invalid,
    /// A phase overran the timeout. Counted as killed in coverage, journaled
    /// separately.
    Timeout,
}

impl Verdict {
    pub fn counts_as_killed(self) -> bool {
        matches!(self, Verdict::Killed | Verdict::Timeout)
    }

    pub fn is_valid(self) -> bool {
        self != Verdict::Invalid
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Killed => "Killed",
            Verdict::Survived => "Survived",
            Verdict::Invalid => "Invalid",
            Verdict::Timeout => "Timeout",
        };
        f.write_str(s)
    }
}

/// Decides a mutant's fate from the exit statuses of its phases.
///
/// `compile_exit` is `None` when there is no compile phase (or it was cut
/// short by the timeout); `test_exit` is `None` when the test phase did not
/// run to completion.
pub fn judge(compile_exit: Option<i32>, test_exit: Option<i32>, timed_out: bool) -> Verdict {
    match (compile_exit, test_exit) {
        (Some(c), _) if c != 0 => Verdict::Invalid,
        _ if timed_out => Verdict::Timeout,
        (_, Some(t)) if t != 0 => Verdict::Killed,
        _ => Verdict::Survived,
    }
}
