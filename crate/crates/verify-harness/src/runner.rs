//! Runs the selected checks of one configuration and assembles the report.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::{json, Value};

use crate::config::{ConfigError, RunConfig};
use crate::context::{CheckError, Ctx};
use crate::registry::{CheckEntry, CHECKS};
use crate::report::{CheckRecord, InconclusiveKind, Params, Report, Status};

/// The selected checks in stage order, registry order within a stage.
pub fn selected(config: &RunConfig) -> Result<Vec<&'static CheckEntry>, ConfigError> {
    let positions: BTreeSet<usize> = match config.selection() {
        None => (0..CHECKS.len()).collect(),
        Some(ids) => ids
            .iter()
            .map(|id| CHECKS.iter().position(|c| c.id == id).ok_or_else(|| ConfigError::UnknownCheck(id.clone())))
            .collect::<Result<_, _>>()?,
    };
    let mut entries: Vec<&'static CheckEntry> = positions.into_iter().map(|i| &CHECKS[i]).collect();
    entries.sort_by_key(|entry| entry.stage);
    Ok(entries)
}

fn inconclusive(entry: &CheckEntry, params: Params, kind: InconclusiveKind, reason: String) -> CheckRecord {
    CheckRecord {
        id: entry.id.to_string(),
        params,
        status: Status::Inconclusive,
        inconclusive: Some(kind),
        reason: Some(reason),
        provenance: entry.provenance,
        anchor: entry.anchor.to_string(),
        witness: Value::Null,
        ms: 0,
    }
}

fn run_one(entry: &CheckEntry, ctx: &Ctx, params: Params) -> CheckRecord {
    let start = Instant::now();
    let result = (entry.run)(ctx);
    let ms = start.elapsed().as_millis() as u64;
    let mut record = match result {
        Ok(outcome) => CheckRecord {
            id: entry.id.to_string(),
            params,
            status: if outcome.passed { Status::Pass } else { Status::Fail },
            inconclusive: None,
            reason: outcome.reason,
            provenance: entry.provenance,
            anchor: entry.anchor.to_string(),
            witness: outcome.witness,
            ms,
        },
        Err(CheckError::OutOfDomain(reason)) => inconclusive(entry, params, InconclusiveKind::OutOfDomain, reason),
        Err(e) => inconclusive(entry, params, InconclusiveKind::Error, e.to_string()),
    };
    record.ms = ms;
    record
}

/// Runs every selected check of `config` in stage order. Out-of-domain
/// checks and runs refused by the memory estimate are reported as
/// inconclusive.
pub fn run_checks(config: &RunConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let entries = selected(config)?;
    let params = Params::of(config);
    if entries.is_empty() {
        return Ok(Report::assemble(config.clone(), Vec::new()));
    }
    if config.over_budget() {
        let reason = format!(
            "estimated {} MB exceeds the budget of {} MB",
            config.estimated_bytes() >> 20,
            config.memory_budget_mb
        );
        let records = entries.iter().map(|s| inconclusive(s, params, InconclusiveKind::Budget, reason.clone())).collect();
        return Ok(Report::assemble(config.clone(), records));
    }
    let ctx = match Ctx::new(config) {
        Ok(ctx) => ctx,
        Err(e) => {
            let reason = format!("building the ball tables failed: {e}");
            let records = entries.iter().map(|s| inconclusive(s, params, InconclusiveKind::Error, reason.clone())).collect();
            return Ok(Report::assemble(config.clone(), records));
        }
    };
    let records = entries.iter().map(|entry| run_one(entry, &ctx, params)).collect();
    Ok(Report::assemble(config.clone(), records))
}

/// One JSON object per line, one line per configuration.
pub fn run_grid(configs: &[RunConfig]) -> Result<Vec<Report>, ConfigError> {
    configs.iter().map(run_checks).collect()
}

/// Registry entry as shown by `verify describe`.
pub fn describe(entry: &CheckEntry) -> Value {
    json!({
        "id": entry.id,
        "kind": entry.kind,
        "title": entry.title,
        "anchor": entry.anchor,
        "domain": entry.domain,
        "expected": entry.expected,
        "provenance": entry.provenance,
        "stage": entry.stage,
    })
}
