//! Finitely presented modules over a valuation domain `R` with maximal
//! ideal `P`, in Warfield form `R^n ⊕ R/Ra_1 ⊕ ... ⊕ R/Ra_t` with
//! `Ra_1 ⊇ Ra_2 ⊇ ... ⊇ Ra_t`.
//!
//! The ring is never constructed. A [`ValuationRingProfile`] records the two
//! facts the classification depends on (is `P` principal, is `R` a DVR) and
//! each cyclic torsion summand is either `R/Rp^e` or an opaque `R/Ra` known
//! only by its position in the annihilator chain.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{certificate, is_vr_p_group};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuationRingProfile {
    maximal_principal: bool,
    is_dvr: bool,
}

impl ValuationRingProfile {
    pub const NON_PRINCIPAL: Self = ValuationRingProfile {
        maximal_principal: false,
        is_dvr: false,
    };
    pub const PRINCIPAL: Self = ValuationRingProfile {
        maximal_principal: true,
        is_dvr: false,
    };
    pub const DVR: Self = ValuationRingProfile {
        maximal_principal: true,
        is_dvr: true,
    };

    pub fn new(maximal_principal: bool, is_dvr: bool) -> Result<Self> {
        if is_dvr && !maximal_principal {
            return Err(Error::domain("a DVR has a principal maximal ideal"));
        }
        Ok(ValuationRingProfile {
            maximal_principal,
            is_dvr,
        })
    }

    pub fn maximal_principal(&self) -> bool {
        self.maximal_principal
    }

    pub fn is_dvr(&self) -> bool {
        self.is_dvr
    }
}

impl fmt::Display for ValuationRingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.maximal_principal, self.is_dvr) {
            (true, true) => write!(f, "VD(principal,dvr)"),
            (true, false) => write!(f, "VD(principal)"),
            _ => write!(f, "VD(nonprincipal)"),
        }
    }
}

/// Annihilator of one cyclic torsion summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Annihilator {
    /// `R/Rp^e`, only meaningful when `P = Rp`.
    PPower(u32),
    /// `R/Ra` for an unspecified nonzero proper ideal `Ra`. Larger `depth`
    /// means a smaller ideal; equal depths are incomparable-by-data and keep
    /// their input order.
    Opaque { tag: String, depth: u32 },
}

impl fmt::Display for Annihilator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Annihilator::PPower(e) => write!(f, "p^{e}"),
            Annihilator::Opaque { tag, depth: 0 } => write!(f, "{tag}"),
            Annihilator::Opaque { tag, depth } => write!(f, "{tag}:{depth}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValModule {
    free_rank: usize,
    torsion: Vec<Annihilator>,
}

impl ValModule {
    pub fn new(free_rank: usize, torsion: Vec<Annihilator>) -> Self {
        ValModule { free_rank, torsion }
    }

    pub fn zero() -> Self {
        Self::new(0, Vec::new())
    }

    /// `R^free_rank ⊕ ⊕_e R/Rp^e`.
    pub fn p_powers(free_rank: usize, exponents: &[u32]) -> Self {
        Self::new(
            free_rank,
            exponents.iter().map(|&e| Annihilator::PPower(e)).collect(),
        )
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Annihilator] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    fn p_exponents(&self) -> Option<Vec<u32>> {
        self.torsion
            .iter()
            .map(|a| match a {
                Annihilator::PPower(e) => Some(*e),
                Annihilator::Opaque { .. } => None,
            })
            .collect()
    }

    fn first_opaque(&self) -> Option<&Annihilator> {
        self.torsion
            .iter()
            .find(|a| matches!(a, Annihilator::Opaque { .. }))
    }
}

impl fmt::Display for ValModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("R".to_string()),
            n => terms.push(format!("R^{n}")),
        }
        for a in &self.torsion {
            terms.push(match a {
                Annihilator::PPower(1) => "R/Rp".to_string(),
                Annihilator::PPower(e) => format!("R/Rp^{e}"),
                Annihilator::Opaque { tag, .. } => format!("R/R{tag}"),
            });
        }
        write!(f, "{}", terms.join(" ⊕ "))
    }
}

/// Sorts the torsion summands into annihilator-chain order: `R/Rp^e` by
/// ascending `e`, then opaque summands by ascending depth and then tag. Nothing relates
/// an opaque ideal to the powers of `p`, so the two blocks are not
/// interleaved.
pub fn warfield_canonicalize(m: &ValModule, profile: &ValuationRingProfile) -> Result<ValModule> {
    for a in &m.torsion {
        match a {
            Annihilator::PPower(0) => {
                return Err(Error::domain("R/Rp^0 is zero; exponents start at 1"));
            }
            Annihilator::PPower(e) if !profile.maximal_principal => {
                return Err(Error::domain(format!(
                    "R/Rp^{e} needs a principal maximal ideal P = Rp"
                )));
            }
            _ => {}
        }
    }
    let mut torsion = m.torsion.clone();
    torsion.sort_by(|a, b| chain_key(a).cmp(&chain_key(b)));
    Ok(ValModule {
        free_rank: m.free_rank,
        torsion,
    })
}

fn chain_key(a: &Annihilator) -> (u8, u32, &str) {
    match a {
        Annihilator::PPower(e) => (0, *e, ""),
        // Equal depths are tie-broken by tag so the form is input-order free.
        Annihilator::Opaque { tag, depth } => (1, *depth, tag),
    }
}

const FREE_RULE: &str = "P not principal: fp virtually regular modules are free";
const CONTIGUOUS_RULE: &str = "P = Rp: fp virtually regular iff R^n ⊕ (R/Rp)^n_1 ⊕ ... ⊕ (R/Rp^k)^n_k";
const CONTIGUITY_NOTE: &str =
    "every exponent 1..k must occur (nonempty index sets), although the stated form allows n_i = 0";
const SVR_NON_PRINCIPAL: &str = "P not principal: fp strongly virtually regular iff R^n";
const SVR_PRINCIPAL: &str = "P = Rp: fp strongly virtually regular iff R^n ⊕ (R/Rp)^m";
const CVR_NON_PRINCIPAL: &str = "P not principal: the only fp completely virtually regular module is 0";
const CVR_DVR: &str = "R a DVR: fp completely virtually regular iff R^n ⊕ (R/Rp)^m";
const CVR_NON_DVR: &str = "P = Rp, R not a DVR: fp completely virtually regular iff (R/Rp)^m";
const VACUOUS: &str = "zero module, vacuous quantification";

/// Caller must pass a canonical module (see [`warfield_canonicalize`]).
pub fn classify_vr_val(m: &ValModule, profile: &ValuationRingProfile) -> (bool, String) {
    if m.is_zero() {
        return (true, certificate(VACUOUS, None));
    }
    if !profile.maximal_principal {
        let witness = m.torsion.first().map(|a| format!("torsion summand with annihilator {a}"));
        return (witness.is_none(), certificate(FREE_RULE, witness));
    }
    if let Some(a) = m.first_opaque() {
        return (
            false,
            certificate(
                CONTIGUOUS_RULE,
                Some(format!("annihilator {a} is not a power of p")),
            ),
        );
    }
    let exps = m.p_exponents().expect("no opaque summands");
    if exps.is_empty() {
        return (true, certificate(CONTIGUOUS_RULE, Some("free module".to_string())));
    }
    let (ok, missing) = is_vr_p_group(&exps).expect("exponents are positive");
    let witness = match missing {
        Some(e) => format!("missing exponent {e}; note: {CONTIGUITY_NOTE}"),
        None => format!("note: {CONTIGUITY_NOTE}"),
    };
    (ok, certificate(CONTIGUOUS_RULE, Some(witness)))
}

pub fn classify_svr_val(m: &ValModule, profile: &ValuationRingProfile) -> (bool, String) {
    if m.is_zero() {
        return (true, certificate(VACUOUS, None));
    }
    if !profile.maximal_principal {
        let witness = m.torsion.first().map(|a| format!("torsion summand with annihilator {a}"));
        return (witness.is_none(), certificate(SVR_NON_PRINCIPAL, witness));
    }
    let offender = m
        .torsion
        .iter()
        .find(|a| **a != Annihilator::PPower(1))
        .map(|a| format!("summand with annihilator {a} is not R/Rp"));
    (offender.is_none(), certificate(SVR_PRINCIPAL, offender))
}

pub fn classify_cvr_val(m: &ValModule, profile: &ValuationRingProfile) -> (bool, String) {
    if m.is_zero() {
        return (true, certificate(VACUOUS, None));
    }
    if !profile.maximal_principal {
        return (false, certificate(CVR_NON_PRINCIPAL, Some(format!("{m} is nonzero"))));
    }
    let offender = m
        .torsion
        .iter()
        .find(|a| **a != Annihilator::PPower(1))
        .map(|a| format!("summand with annihilator {a} is not R/Rp"));
    if profile.is_dvr {
        return (offender.is_none(), certificate(CVR_DVR, offender));
    }
    let offender = offender.or_else(|| (m.free_rank > 0).then(|| "free summand R".to_string()));
    (offender.is_none(), certificate(CVR_NON_DVR, offender))
}

/// The three decided predicates for a module over a valuation domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValVerdict {
    pub virtually_regular: (bool, String),
    pub strongly_virtually_regular: (bool, String),
    pub completely_virtually_regular: (bool, String),
}

/// Canonicalizes, then runs all three classifiers.
pub fn classify_val(m: &ValModule, profile: &ValuationRingProfile) -> Result<ValVerdict> {
    let m = warfield_canonicalize(m, profile)?;
    Ok(ValVerdict {
        virtually_regular: classify_vr_val(&m, profile),
        strongly_virtually_regular: classify_svr_val(&m, profile),
        completely_virtually_regular: classify_cvr_val(&m, profile),
    })
}

/// An indecomposable (cyclic) module `R/I` over a commutative ring is
/// virtually regular exactly when `I` is prime. The zero ideal of a domain
/// counts as prime.
pub fn indecomposable_vr(is_prime_annihilator: bool) -> bool {
    is_prime_annihilator
}

/// Torsion module over a Dedekind domain, given per maximal ideal as the
/// exponents `e` of its `R/P^e` summands. Completely virtually regular iff
/// semisimple, i.e. every exponent is 1.
pub fn dedekind_torsion_cvr(exponent_data: &BTreeMap<String, Vec<u32>>) -> bool {
    exponent_data.values().flatten().all(|&e| e == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table1Row {
    VirtuallyRegular,
    StronglyVirtuallyRegular,
    CompletelyVirtuallyRegular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table1Column {
    NonPrincipal,
    PrincipalDvr,
    PrincipalNonDvr,
}

/// Structure of the finitely presented modules in one class for one ring
/// shape. Only the completely virtually regular row differs between the
/// DVR and non-DVR principal columns.
pub fn table1_cell(row: Table1Row, column: Table1Column) -> &'static str {
    use Table1Column::*;
    use Table1Row::*;
    match (row, column) {
        (VirtuallyRegular | StronglyVirtuallyRegular, NonPrincipal) => "R^n",
        (VirtuallyRegular, _) => "R^n ⊕ (R/Rp)^n_1 ⊕ ⋯ ⊕ (R/Rp^k)^n_k",
        (StronglyVirtuallyRegular, _) => "R^n ⊕ (R/Rp)^m",
        (CompletelyVirtuallyRegular, NonPrincipal) => "0",
        (CompletelyVirtuallyRegular, PrincipalDvr) => "R^n ⊕ (R/Rp)^m",
        (CompletelyVirtuallyRegular, PrincipalNonDvr) => "(R/Rp)^m",
    }
}

const TABLE1: &str = "\
Finitely presented modules over a valuation domain R with maximal ideal P

                             | P not principal | P = Rp principal
-----------------------------+-----------------+---------------------------------------
Virtually regular            | R^n             | R^n ⊕ (R/Rp)^n_1 ⊕ ⋯ ⊕ (R/Rp^k)^n_k
Strongly virtually regular   | R^n             | R^n ⊕ (R/Rp)^m
Completely virtually regular | 0               | R is a DVR:     R^n ⊕ (R/Rp)^m
                             |                 | R is not a DVR: (R/Rp)^m
";

pub fn render_table1() -> &'static str {
    TABLE1
}
