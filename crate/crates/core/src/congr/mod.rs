//! Exhaustive exact checks of the congruence, divisibility, integrality and
//! parity claims, one registered case per claim.

mod cases;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::primes_in;

use cases::CASES;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    Congruence,
    Divisibility,
    Integrality,
    Parity,
    Characterization,
}

/// Whether instances are all integers or primes in a range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Integers,
    Primes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = CongrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(CongrError::UnknownProfile(other.to_string())),
        }
    }
}

pub const QUICK_MAX_N: u64 = 40;
pub const QUICK_MAX_P: u64 = 23;

/// Static description of one claim.
#[derive(Debug, Clone, Copy)]
pub struct CaseInfo {
    pub id: &'static str,
    pub kind: ClaimKind,
    pub domain: DomainKind,
    /// Short statement of the claim.
    pub claim: &'static str,
    /// Smallest instance.
    pub lo: u64,
    /// Upper bound under the full profile.
    pub full_max: u64,
    /// Largest upper bound accepted at all.
    pub guard: u64,
    /// Failures are findings about an open conjecture.
    pub conjecture: bool,
    /// Parameter sweep `(b, c)` for the trinomial cases.
    pub sweeps_bc: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongrError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("unknown profile `{0}` (expected quick or full)")]
    UnknownProfile(String),
    #[error("case {id}: upper bound {requested} exceeds the guard {guard}")]
    RangeGuard { id: String, requested: u64, guard: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    ConjectureFail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ConjectureFail => "conjecture-fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked instance; every field is exact decimal text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceRecord {
    pub case: String,
    pub instance: String,
    pub status: Status,
    pub lhs_mod: String,
    pub rhs_mod: String,
    pub modulus: String,
    /// Why an instance failed, when the residues alone do not say.
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub id: String,
    pub records: Vec<InstanceRecord>,
    pub elapsed: Duration,
}

impl CaseReport {
    pub fn instances(&self) -> usize {
        self.records.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.records.iter().filter(|r| r.status != Status::Pass)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Range selection for a run.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub profile: Profile,
    pub max_n: Option<u64>,
    pub max_p: Option<u64>,
}

impl RunOptions {
    pub fn profile(profile: Profile) -> Self {
        Self { profile, max_n: None, max_p: None }
    }
}

/// A single instance: the index (`n` or `p`) and, for sweeping cases,
/// the parameters `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instance {
    pub index: u64,
    pub bc: Option<(i64, i64)>,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)?;
        if let Some((b, c)) = self.bc {
            write!(f, ",b={b},c={c}")?;
        }
        Ok(())
    }
}

/// Every registered case, in registration order.
pub fn cases() -> impl Iterator<Item = &'static CaseInfo> {
    CASES.iter().map(|c| &c.info)
}

pub fn case(id: &str) -> Result<&'static CaseInfo, CongrError> {
    CASES
        .iter()
        .map(|c| &c.info)
        .find(|c| c.id == id)
        .ok_or_else(|| CongrError::UnknownCase(id.to_string()))
}

/// Case ids in report order.
pub fn case_ids() -> Vec<&'static str> {
    let mut ids: Vec<_> = CASES.iter().map(|c| c.info.id).collect();
    ids.sort_unstable();
    ids
}

/// Inclusive upper bound for `info` under `opts`.
pub fn upper_bound(info: &CaseInfo, opts: &RunOptions) -> Result<u64, CongrError> {
    let (explicit, quick) = match info.domain {
        DomainKind::Integers => (opts.max_n, QUICK_MAX_N),
        DomainKind::Primes => (opts.max_p, QUICK_MAX_P),
    };
    let hi = explicit.unwrap_or(match opts.profile {
        Profile::Full => info.full_max,
        Profile::Quick => info.full_max.min(quick),
    });
    if hi > info.guard {
        return Err(CongrError::RangeGuard { id: info.id.to_string(), requested: hi, guard: info.guard });
    }
    Ok(hi)
}

pub const BC_RANGE: std::ops::RangeInclusive<i64> = -4..=4;

pub fn instances(info: &CaseInfo, hi: u64) -> Vec<Instance> {
    let indices: Vec<u64> = match info.domain {
        DomainKind::Integers if hi >= info.lo => (info.lo..=hi).collect(),
        DomainKind::Integers => vec![],
        DomainKind::Primes => primes_in(info.lo, hi),
    };
    if !info.sweeps_bc {
        return indices.into_iter().map(|index| Instance { index, bc: None }).collect();
    }
    let mut out = Vec::new();
    for b in BC_RANGE {
        for c in BC_RANGE {
            for &index in &indices {
                if cases::bc_admissible(info.id, index, b, c) {
                    out.push(Instance { index, bc: Some((b, c)) });
                }
            }
        }
    }
    out
}

/// Runs one case. Instances are evaluated in parallel on the current rayon
/// pool; records come back in instance order.
pub fn run_case(id: &str, opts: &RunOptions) -> Result<CaseReport, CongrError> {
    let entry = CASES
        .iter()
        .find(|c| c.info.id == id)
        .ok_or_else(|| CongrError::UnknownCase(id.to_string()))?;
    let hi = upper_bound(&entry.info, opts)?;
    let insts = instances(&entry.info, hi);
    let start = Instant::now();
    let records = insts
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let outcome = (entry.eval)(inst, i % 10 == 0);
            let status = match (outcome.pass, entry.info.conjecture) {
                (true, _) => Status::Pass,
                (false, true) if outcome.note.is_none() => Status::ConjectureFail,
                (false, _) => Status::Fail,
            };
            InstanceRecord {
                case: entry.info.id.to_string(),
                instance: inst.to_string(),
                status,
                lhs_mod: outcome.lhs_mod,
                rhs_mod: outcome.rhs_mod,
                modulus: outcome.modulus,
                note: outcome.note,
            }
        })
        .collect();
    Ok(CaseReport { id: id.to_string(), records, elapsed: start.elapsed() })
}

/// Every registered case, sorted by id.
pub fn run_all(profile: Profile) -> Vec<CaseReport> {
    run_selected(&case_ids(), &RunOptions::profile(profile)).expect("registered ids within guards")
}

pub fn run_selected(ids: &[&str], opts: &RunOptions) -> Result<Vec<CaseReport>, CongrError> {
    let mut ids: Vec<&str> = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    for id in &ids {
        upper_bound(case(id)?, opts)?;
    }
    ids.iter().map(|id| run_case(id, opts)).collect()
}

#[cfg(test)]
mod tests;
