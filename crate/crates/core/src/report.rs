//! Report assembly for the command-line front end. Every report has a text
//! rendering and a versioned JSON rendering whose bytes survive a
//! parse/re-render round trip.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::abelian::{classify, FgAbGroup, PREDICATES};
use crate::error::{Error, Result};
use crate::input::ModuleSpec;
use crate::oracle::{Caps, FiniteGroupInstance, Oracle};
use crate::snf::{cokernel_structure, smith_normal_form, IntMatrix};
use crate::valdom::{classify_val, ValModule, ValuationRingProfile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateReport {
    /// `None` when the predicate is not decided for this kind of module.
    pub value: Option<bool>,
    pub certificate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema: u32,
    pub input: String,
    pub module: String,
    pub verdicts: BTreeMap<String, PredicateReport>,
    pub citations: Vec<String>,
}

fn citations_of(verdicts: &BTreeMap<String, PredicateReport>) -> Vec<String> {
    let mut out: Vec<String> = verdicts
        .values()
        .filter_map(|v| v.certificate.strip_prefix("theorem="))
        .map(|c| c.split("; witness=").next().unwrap_or(c).to_string())
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn abelian_descriptor(g: &FgAbGroup) -> String {
    let factors: Vec<String> = g.invariant_factors().iter().map(u64::to_string).collect();
    format!("Z: free={} torsion=[{}]", g.free_rank(), factors.join(","))
}

pub fn valuation_descriptor(m: &ValModule, profile: &ValuationRingProfile) -> String {
    let torsion: Vec<String> = m.torsion().iter().map(ToString::to_string).collect();
    format!("{profile}: free={} torsion=[{}]", m.free_rank(), torsion.join(","))
}

pub fn classify_abelian_report(g: &FgAbGroup) -> ClassifyReport {
    let v = classify(g);
    let verdicts: BTreeMap<String, PredicateReport> = PREDICATES
        .iter()
        .map(|&name| {
            (
                name.to_string(),
                PredicateReport {
                    value: v.value(name),
                    certificate: v.certificates[name].clone(),
                },
            )
        })
        .collect();
    ClassifyReport {
        schema: SCHEMA_VERSION,
        input: abelian_descriptor(g),
        module: g.to_string(),
        citations: citations_of(&verdicts),
        verdicts,
    }
}

const UNDECIDED_VALUATION: &str =
    "indeterminate: not decided from a Warfield descriptor over a valuation domain";

pub fn classify_valuation_report(
    m: &ValModule,
    profile: &ValuationRingProfile,
) -> Result<ClassifyReport> {
    let v = classify_val(m, profile)?;
    let mut verdicts = BTreeMap::new();
    for (name, (value, certificate)) in [
        ("virtually_regular", v.virtually_regular),
        ("strongly_virtually_regular", v.strongly_virtually_regular),
        ("completely_virtually_regular", v.completely_virtually_regular),
    ] {
        verdicts.insert(
            name.to_string(),
            PredicateReport {
                value: Some(value),
                certificate,
            },
        );
    }
    for name in ["virtually_semisimple", "virtually_simple", "strongly_regular"] {
        verdicts.insert(
            name.to_string(),
            PredicateReport {
                value: None,
                certificate: UNDECIDED_VALUATION.to_string(),
            },
        );
    }
    Ok(ClassifyReport {
        schema: SCHEMA_VERSION,
        input: valuation_descriptor(m, profile),
        module: m.to_string(),
        citations: citations_of(&verdicts),
        verdicts,
    })
}

/// Classifies any parsed descriptor; a matrix is classified through its
/// cokernel.
pub fn run_classify(spec: &ModuleSpec) -> Result<ClassifyReport> {
    match spec {
        ModuleSpec::Abelian(g) => Ok(classify_abelian_report(g)),
        ModuleSpec::Valuation(m, p) => classify_valuation_report(m, p),
        ModuleSpec::Matrix(a) => Ok(classify_abelian_report(&cokernel_structure(a)?)),
    }
}

fn value_text(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "n/a",
    }
}

impl ClassifyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "input:  {}", self.input).unwrap();
        writeln!(out, "module: {}", self.module).unwrap();
        for name in PREDICATES {
            if let Some(v) = self.verdicts.get(name) {
                writeln!(out, "  {name:<30} {:<5}  {}", value_text(v.value), v.certificate).unwrap();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub oracle: Option<bool>,
    pub classifier: Option<bool>,
    /// `match`, `mismatch` or `skipped: <reason>`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl OracleCheck {
    pub fn compare(oracle: Result<bool>, classifier: Option<bool>, witness: Option<String>) -> Self {
        match oracle {
            Ok(o) => OracleCheck {
                oracle: Some(o),
                classifier,
                status: match classifier {
                    Some(c) if c != o => "mismatch".to_string(),
                    _ => "match".to_string(),
                },
                witness,
            },
            Err(e) => OracleCheck {
                oracle: None,
                classifier,
                status: format!("skipped: {e}"),
                witness: None,
            },
        }
    }

    pub fn is_mismatch(&self) -> bool {
        self.status == "mismatch"
    }

    pub fn is_skipped(&self) -> bool {
        self.status.starts_with("skipped")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema: u32,
    pub input: String,
    pub order: u64,
    pub subgroup_count: Option<usize>,
    pub checks: BTreeMap<String, OracleCheck>,
}

/// Runs every definition-level predicate on the concrete group and sets it
/// beside the classifier's verdict. Lattice-based checks run only when
/// `with_lattice` is set; if the lattice exceeds the caps they are reported
/// as skipped. Returns the checks and the lattice size, if built.
pub fn oracle_checks(
    g: &FgAbGroup,
    caps: Caps,
    with_lattice: bool,
) -> Result<(BTreeMap<String, OracleCheck>, Option<usize>)> {
    if !g.is_finite() {
        return Err(Error::domain(format!("the oracle needs a finite group, got {g}")));
    }
    let verdict = classify(g);
    let instance = FiniteGroupInstance::from_group(g, caps)?;
    let mut checks = BTreeMap::new();

    let vr = instance.virtually_regular_by_retraction();
    let vr_witness = vr
        .as_ref()
        .ok()
        .and_then(|(_, w)| w.as_ref().map(|w| format!("element {w:?}")));
    checks.insert(
        "virtually_regular".to_string(),
        OracleCheck::compare(vr.map(|(b, _)| b), Some(verdict.virtually_regular), vr_witness),
    );
    checks.insert(
        "strongly_regular".to_string(),
        OracleCheck::compare(
            instance.strongly_regular_by_retraction(),
            Some(verdict.strongly_regular),
            None,
        ),
    );
    if !with_lattice {
        return Ok((checks, None));
    }

    let lattice = Oracle::new(instance, caps);
    let subgroup_count = lattice.as_ref().ok().map(|o| o.subgroups().len());
    let lattice_check = |f: &dyn Fn(&Oracle) -> Result<bool>| match &lattice {
        Ok(o) => f(o),
        Err(e) => Err(e.clone()),
    };
    checks.insert(
        "virtually_regular_lattice".to_string(),
        OracleCheck::compare(
            lattice_check(&|o| o.virtually_regular(&o.whole()).map(|r| r.0)),
            Some(verdict.virtually_regular),
            None,
        ),
    );
    checks.insert(
        "strongly_virtually_regular".to_string(),
        OracleCheck::compare(
            lattice_check(&|o| o.strongly_virtually_regular(&o.whole())),
            Some(verdict.strongly_virtually_regular),
            None,
        ),
    );
    checks.insert(
        "completely_virtually_regular".to_string(),
        OracleCheck::compare(
            lattice_check(&|o| o.completely_virtually_regular(&o.whole())),
            Some(verdict.completely_virtually_regular),
            None,
        ),
    );
    checks.insert(
        "strongly_regular_lattice".to_string(),
        OracleCheck::compare(
            lattice_check(&|o| o.strongly_regular(&o.whole())),
            Some(verdict.strongly_regular),
            None,
        ),
    );
    // Cyclic subgroups all summands ⇔ all subgroups summands; both sides
    // come from the oracle.
    checks.insert(
        "all_subgroups_summands".to_string(),
        OracleCheck::compare(
            lattice_check(&|o| o.every_subgroup_is_summand(&o.whole())),
            lattice_check(&|o| o.strongly_regular(&o.whole())).ok(),
            None,
        ),
    );
    Ok((checks, subgroup_count))
}

pub fn run_oracle(g: &FgAbGroup, caps: Caps) -> Result<OracleReport> {
    let (checks, subgroup_count) = oracle_checks(g, caps, true)?;
    Ok(OracleReport {
        schema: SCHEMA_VERSION,
        input: abelian_descriptor(g),
        order: g.torsion_order(),
        subgroup_count,
        checks,
    })
}

impl OracleReport {
    pub fn has_mismatch(&self) -> bool {
        self.checks.values().any(OracleCheck::is_mismatch)
    }

    pub fn has_skip(&self) -> bool {
        self.checks.values().any(OracleCheck::is_skipped)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "input: {}  (order {})", self.input, self.order).unwrap();
        match self.subgroup_count {
            Some(n) => writeln!(out, "subgroups: {n}").unwrap(),
            None => writeln!(out, "subgroups: not enumerated").unwrap(),
        }
        for (name, c) in &self.checks {
            write!(
                out,
                "  {name:<30} oracle={:<5} classifier={:<5} {}",
                value_text(c.oracle),
                value_text(c.classifier),
                c.status
            )
            .unwrap();
            if let Some(w) = &c.witness {
                write!(out, " ({w})").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn matrix_json(m: &IntMatrix) -> Vec<Vec<Value>> {
    let big = |x: &BigInt| match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    };
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| big(m.get(i, j))).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfReport {
    pub schema: u32,
    pub rows: usize,
    pub cols: usize,
    /// Diagonal of `D` including zeros; entries beyond `i64` are strings.
    pub diagonal: Vec<Value>,
    pub d: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub u: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<Vec<Vec<Value>>>,
    pub cokernel: String,
    pub classification: ClassifyReport,
}

pub fn run_snf(a: &IntMatrix, transforms: bool) -> Result<SnfReport> {
    let snf = smith_normal_form(a);
    let cokernel = cokernel_structure(a)?;
    let d = matrix_json(&snf.d);
    let diagonal = (0..a.rows().min(a.cols())).map(|i| d[i][i].clone()).collect();
    Ok(SnfReport {
        schema: SCHEMA_VERSION,
        rows: a.rows(),
        cols: a.cols(),
        diagonal,
        d,
        u: transforms.then(|| matrix_json(&snf.u)),
        v: transforms.then(|| matrix_json(&snf.v)),
        cokernel: cokernel.to_string(),
        classification: classify_abelian_report(&cokernel),
    })
}

fn matrix_text(out: &mut String, label: &str, m: &[Vec<Value>]) {
    writeln!(out, "{label}:").unwrap();
    for row in m {
        let cells: Vec<String> = row
            .iter()
            .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string))
            .collect();
        writeln!(out, "  {}", cells.join(" ")).unwrap();
    }
}

impl SnfReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        matrix_text(&mut out, "D", &self.d);
        if let Some(u) = &self.u {
            matrix_text(&mut out, "U", u);
        }
        if let Some(v) = &self.v {
            matrix_text(&mut out, "V", v);
        }
        writeln!(out, "cokernel: {}", self.cokernel).unwrap();
        out.push_str(&self.classification.to_text());
        out
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, factors: &[u64]) -> FgAbGroup {
        FgAbGroup::new(free, factors.to_vec()).unwrap()
    }

    #[test]
    fn classify_report_fields() {
        let r = classify_abelian_report(&g(0, &[2, 4]));
        assert_eq!(r.input, "Z: free=0 torsion=[2,4]");
        assert_eq!(r.verdicts["virtually_regular"].value, Some(true));
        assert_eq!(r.verdicts["strongly_virtually_regular"].value, Some(false));
        assert_eq!(r.verdicts.len(), PREDICATES.len());
        assert!(!r.citations.is_empty());
    }

    #[test]
    fn valuation_report_leaves_undecided_predicates_null() {
        let r = classify_valuation_report(&ValModule::new(3, vec![]), &ValuationRingProfile::NON_PRINCIPAL)
            .unwrap();
        assert_eq!(r.verdicts["virtually_regular"].value, Some(true));
        assert_eq!(r.verdicts["virtually_semisimple"].value, None);
        assert_eq!(r.input, "VD(nonprincipal): free=3 torsion=[]");
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let r = classify_abelian_report(&g(1, &[2, 4]));
        let text = to_json(&r);
        let back: ClassifyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(to_json(&back), text);

        let s = run_snf(&IntMatrix::from_i64(2, 2, &[4, 0, 0, 6]).unwrap(), true).unwrap();
        let text = to_json(&s);
        let back: SnfReport = serde_json::from_str(&text).unwrap();
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn snf_report_examples() {
        let r = run_snf(&IntMatrix::identity(2), false).unwrap();
        assert_eq!(r.cokernel, "0");
        assert!(r.u.is_none());
        let r = run_snf(&IntMatrix::from_i64(2, 2, &[4, 0, 0, 6]).unwrap(), false).unwrap();
        assert_eq!(r.diagonal, vec![Value::from(2), Value::from(12)]);
        assert_eq!(r.cokernel, "Z_2 ⊕ Z_12");
        let r = run_snf(&IntMatrix::zeros(1, 2), false).unwrap();
        assert_eq!(r.cokernel, "Z");
    }

    #[test]
    fn oracle_report_agrees_on_small_groups() {
        for factors in [&[][..], &[2], &[4], &[2, 4], &[6], &[2, 2], &[3, 9]] {
            let r = run_oracle(&g(0, factors), Caps::default()).unwrap();
            assert!(!r.has_mismatch(), "{}", r.to_text());
            assert!(!r.has_skip());
        }
        assert!(run_oracle(&g(1, &[]), Caps::default()).is_err());
    }

    #[test]
    fn oracle_report_skips_over_cap() {
        let caps = Caps {
            max_subgroups: 5,
            ..Caps::default()
        };
        let r = run_oracle(&g(0, &[2, 2, 2]), caps).unwrap();
        assert!(r.has_skip());
        assert!(!r.has_mismatch());
        assert_eq!(r.checks["virtually_regular"].oracle, Some(true));
    }
}
