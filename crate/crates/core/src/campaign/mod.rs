//! Campaign execution: verdicts come purely from the exit status of the
//! user's compile and test commands.

pub mod journal;
pub mod process;
pub mod runner;
pub mod verdict;

pub use journal::{read_journal, CampaignResult, Journal, JournalError};
pub use runner::{
    copy_workspace, verify_green, Campaign, CampaignConfig, CampaignError, CampaignOutcome,
    CampaignSummary, RunOptions,
};
pub use verdict::{judge, Verdict};
