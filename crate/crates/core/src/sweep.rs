//! Exhaustive classifier-versus-oracle comparison over every isomorphism
//! class of finite abelian groups up to a given order.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::abelian::{groups_up_to, FgAbGroup};
use crate::error::{Error, Result};
use crate::oracle::Caps;
use crate::report::{abelian_descriptor, oracle_checks, OracleCheck, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub max_order: u64,
    /// Lattice-based predicates (strong and complete virtual regularity,
    /// lattice cross-checks) run only up to this order. Virtual and strong
    /// regularity are always checked.
    pub deep_max_order: u64,
    pub caps: Caps,
}

impl SweepOptions {
    pub fn new(max_order: u64) -> Self {
        SweepOptions {
            max_order,
            deep_max_order: max_order,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupResult {
    pub group: String,
    pub order: u64,
    pub checks: BTreeMap<String, OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub max_order: u64,
    pub deep_max_order: u64,
    pub groups_checked: usize,
    pub mismatches: Vec<String>,
    pub skipped: Vec<String>,
    pub results: Vec<GroupResult>,
}

fn check_group(g: &FgAbGroup, opts: &SweepOptions) -> GroupResult {
    let order = g.torsion_order();
    let checks = match oracle_checks(g, opts.caps, order <= opts.deep_max_order) {
        Ok((checks, _)) => checks,
        Err(e @ Error::Capacity { .. }) => BTreeMap::from([(
            "virtually_regular".to_string(),
            OracleCheck::compare(Err(e), None, None),
        )]),
        Err(e) => unreachable!("finite descriptors from enumeration: {e}"),
    };
    GroupResult {
        group: abelian_descriptor(g),
        order,
        checks,
    }
}

/// Groups are evaluated in parallel; the report lists them by order and
/// then by invariant factors regardless of scheduling.
pub fn run_sweep(opts: &SweepOptions) -> Result<SweepReport> {
    if opts.max_order == 0 {
        return Err(Error::domain("max order must be at least 1"));
    }
    let groups = groups_up_to(opts.max_order)?;
    let results: Vec<GroupResult> = groups.par_iter().map(|g| check_group(g, opts)).collect();
    let mut mismatches = Vec::new();
    let mut skipped = Vec::new();
    for r in &results {
        for (name, c) in &r.checks {
            if c.is_mismatch() {
                mismatches.push(format!("{}: {name}", r.group));
            } else if c.is_skipped() {
                skipped.push(format!("{}: {name} ({})", r.group, c.status));
            }
        }
    }
    Ok(SweepReport {
        schema: SCHEMA_VERSION,
        max_order: opts.max_order,
        deep_max_order: opts.deep_max_order,
        groups_checked: results.len(),
        mismatches,
        skipped,
        results,
    })
}

impl SweepReport {
    /// Groups with at least one skipped check.
    pub fn skipped_groups(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.checks.values().any(OracleCheck::is_skipped))
            .count()
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "sweep: orders 1..={} (lattice checks up to {})",
            self.max_order, self.deep_max_order
        )
        .unwrap();
        writeln!(
            out,
            "groups checked: {}, mismatches: {}, skipped groups: {}",
            self.groups_checked,
            self.mismatches.len(),
            self.skipped_groups()
        )
        .unwrap();
        for m in &self.mismatches {
            writeln!(out, "MISMATCH {m}").unwrap();
        }
        for s in &self.skipped {
            writeln!(out, "skipped  {s}").unwrap();
        }
        if verbose {
            for r in &self.results {
                let summary: Vec<String> = r
                    .checks
                    .iter()
                    .map(|(k, c)| format!("{k}={}", c.oracle.map_or("-".into(), |b| b.to_string())))
                    .collect();
                writeln!(out, "  {:<32} {}", r.group, summary.join(" ")).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one() {
        let r = run_sweep(&SweepOptions::new(1)).unwrap();
        assert_eq!(r.groups_checked, 1);
        assert!(r.mismatches.is_empty() && r.skipped.is_empty());
    }

    #[test]
    fn order_eight() {
        let r = run_sweep(&SweepOptions::new(8)).unwrap();
        assert_eq!(r.groups_checked, 11);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert!(r.skipped.is_empty());
        let names: Vec<&str> = r.results.iter().map(|g| g.group.as_str()).collect();
        assert_eq!(names[0], "Z: free=0 torsion=[]");
        assert_eq!(
            &names[8..],
            &["Z: free=0 torsion=[2,2,2]", "Z: free=0 torsion=[2,4]", "Z: free=0 torsion=[8]"]
        );
    }

    #[test]
    fn zero_max_order_is_rejected() {
        assert!(run_sweep(&SweepOptions::new(0)).is_err());
    }

    #[test]
    fn order_cap_marks_groups_skipped() {
        let opts = SweepOptions {
            caps: Caps {
                max_order: 4,
                ..Caps::default()
            },
            ..SweepOptions::new(6)
        };
        let r = run_sweep(&opts).unwrap();
        assert!(r.mismatches.is_empty());
        // Orders 5 and 6.
        assert_eq!(r.skipped_groups(), 2);
    }
}
