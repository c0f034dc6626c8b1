use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A known discrepancy with a printed value; does not fail a run.
    Flagged,
    /// Not run because the time budget ran out.
    Skipped,
    /// The check does not apply to this input.
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
            Status::Skipped => "skipped",
            Status::NotApplicable => "n/a",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub id: String,
    pub claim: String,
    pub computed: String,
    pub expected: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LedgerEntry {
    pub fn new(
        id: impl Into<String>,
        claim: impl Into<String>,
        computed: impl ToString,
        expected: impl ToString,
        status: Status,
    ) -> Self {
        LedgerEntry {
            id: id.into(),
            claim: claim.into(),
            computed: computed.to_string(),
            expected: expected.to_string(),
            status,
            note: None,
        }
    }

    pub fn check(
        id: impl Into<String>,
        claim: impl Into<String>,
        computed: impl ToString,
        expected: impl ToString,
        ok: bool,
    ) -> Self {
        LedgerEntry::new(id, claim, computed, expected, Status::from_bool(ok))
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
    pub skipped: usize,
    pub not_applicable: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationLedger {
    pub entries: Vec<LedgerEntry>,
}

impl VerificationLedger {
    pub fn push(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = LedgerEntry>) {
        self.entries.extend(entries);
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for e in &self.entries {
            match e.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Flagged => s.flagged += 1,
                Status::Skipped => s.skipped += 1,
                Status::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }

    /// 0 when nothing failed, 1 on any failure, 3 when entries were skipped.
    pub fn exit_code(&self) -> i32 {
        let s = self.summary();
        if s.fail > 0 {
            1
        } else if s.skipped > 0 {
            3
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut l = VerificationLedger::default();
        assert_eq!(l.exit_code(), 0);
        l.push(LedgerEntry::new("a", "x", 1, 1, Status::Flagged));
        assert_eq!(l.exit_code(), 0);
        l.push(LedgerEntry::new("b", "x", 1, 1, Status::Skipped));
        assert_eq!(l.exit_code(), 3);
        l.push(LedgerEntry::check("c", "x", 1, 2, false));
        assert_eq!(l.exit_code(), 1);
        assert_eq!(l.summary().fail, 1);
    }
}
