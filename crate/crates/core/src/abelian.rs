//! Classification of finitely generated abelian groups from their
//! isomorphism-class descriptors.
//!
//! A group is `Z^r ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t}` with `d_1 | ... | d_t`. The
//! regularity predicates all reduce to statements about the per-prime
//! exponent multisets of the torsion part:
//!
//! * virtually regular iff for every prime the distinct exponents are
//!   exactly `1, 2, ..., k`;
//! * strongly virtually regular, completely virtually regular and virtually
//!   semisimple iff the torsion part is semisimple (all exponents 1);
//! * strongly regular (every cyclic subgroup is itself a summand) iff the
//!   group is finite and semisimple.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// `Z^free_rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t}` with `2 <= d_1 | d_2 | ... | d_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<u64>,
}

impl FgAbGroup {
    /// Rejects anything that is not already a divisibility chain of factors
    /// `>= 2`; see [`FgAbGroup::canonicalize`] for the lenient path.
    pub fn new(free_rank: usize, invariant_factors: Vec<u64>) -> Result<Self> {
        let chain_ok = invariant_factors.iter().all(|&d| d >= 2)
            && invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(Error::NonCanonicalChain {
                found: invariant_factors,
            });
        }
        Ok(FgAbGroup {
            free_rank,
            invariant_factors,
        })
    }

    /// Builds the canonical descriptor of `Z^free_rank ⊕ ⊕_i Z_{orders[i]}`
    /// for arbitrary cyclic orders. `0` stands for a copy of `Z`, `1` for the
    /// trivial group.
    pub fn canonicalize(free_rank: usize, orders: &[u64]) -> Result<Self> {
        let mut free_rank = free_rank;
        let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in orders {
            if n == 0 {
                free_rank += 1;
                continue;
            }
            let n = i64::try_from(n).map_err(|_| Error::domain(format!("order {n} is too large")))?;
            for (&p, &e) in factorize(n)?.factors() {
                parts.entry(p).or_default().push(e);
            }
        }
        invariant_factors_from_primary(&PrimaryData::new(parts)?, free_rank)
    }

    pub fn zero() -> Self {
        FgAbGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// `Z_n`; `n = 1` gives the zero group and `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::zero(),
            _ => FgAbGroup {
                free_rank: 0,
                invariant_factors: vec![n],
            },
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn torsion_order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_part(&self) -> FgAbGroup {
        FgAbGroup {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    pub fn free_part(&self) -> FgAbGroup {
        Self::free(self.free_rank)
    }

    /// The `p`-primary component `T_p` as a group descriptor.
    pub fn p_component(&self, p: u64) -> FgAbGroup {
        let exps = primary_decomposition(self)
            .parts
            .remove(&p)
            .unwrap_or_default();
        let factors = exps.iter().map(|&e| p.pow(e)).collect();
        FgAbGroup {
            free_rank: 0,
            invariant_factors: factors,
        }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            r => terms.push(format!("Z^{r}")),
        }
        terms.extend(self.invariant_factors.iter().map(|d| format!("Z_{d}")));
        write!(f, "{}", terms.join(" ⊕ "))
    }
}

/// Elementary divisors: for each prime `p`, the exponents `e` of the cyclic
/// summands `Z_{p^e}`, kept sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimaryData {
    parts: BTreeMap<u64, Vec<u32>>,
}

impl PrimaryData {
    pub fn new(mut parts: BTreeMap<u64, Vec<u32>>) -> Result<Self> {
        for (&p, exps) in parts.iter_mut() {
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            if exps.is_empty() || exps.contains(&0) {
                return Err(Error::domain(format!(
                    "exponents for p={p} must be a non-empty multiset of positive integers"
                )));
            }
            exps.sort_unstable();
        }
        Ok(PrimaryData { parts })
    }

    pub fn parts(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.parts
    }

    pub fn exponents(&self, p: u64) -> &[u32] {
        self.parts.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

pub fn primary_decomposition(g: &FgAbGroup) -> PrimaryData {
    let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &d in &g.invariant_factors {
        let f = factorize(d as i64).expect("invariant factors are >= 2");
        for (&p, &e) in f.factors() {
            parts.entry(p).or_default().push(e);
        }
    }
    for exps in parts.values_mut() {
        exps.sort_unstable();
    }
    PrimaryData { parts }
}

/// Rebuilds the divisibility chain: per prime, the largest exponents go to
/// the last invariant factor, the next largest to the one before, and so on.
pub fn invariant_factors_from_primary(data: &PrimaryData, free_rank: usize) -> Result<FgAbGroup> {
    let len = data.parts.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (&p, exps) in &data.parts {
        for (slot, &e) in factors.iter_mut().rev().zip(exps.iter().rev()) {
            let pe = p
                .checked_pow(e)
                .and_then(|q| slot.checked_mul(q))
                .ok_or_else(|| Error::domain("invariant factor overflows 64 bits"))?;
            *slot = pe;
        }
    }
    FgAbGroup::new(free_rank, factors)
}

/// Whether `a` is isomorphic to a direct summand of `m`. By uniqueness of
/// decomposition into indecomposables this is multiset containment of the
/// cyclic summands (and `rank(a) <= rank(m)`).
pub fn is_summand_iso(a: &FgAbGroup, m: &FgAbGroup) -> bool {
    if a.free_rank > m.free_rank {
        return false;
    }
    let pa = primary_decomposition(a);
    let pm = primary_decomposition(m);
    pa.parts
        .iter()
        .all(|(&p, exps)| is_sub_multiset(exps, pm.exponents(p)))
}

fn is_sub_multiset(small: &[u32], big: &[u32]) -> bool {
    // Both sorted ascending.
    let mut it = big.iter().peekable();
    for x in small {
        loop {
            match it.next() {
                Some(y) if y == x => break,
                Some(y) if y < x => continue,
                _ => return false,
            }
        }
    }
    true
}

/// Virtual regularity of a finite `p`-group with the given exponent
/// multiset: the distinct exponents must be exactly `{1, ..., max}`. On
/// failure the witness is the smallest missing exponent.
pub fn is_vr_p_group(exponents: &[u32]) -> Result<(bool, Option<u32>)> {
    if exponents.is_empty() || exponents.contains(&0) {
        return Err(Error::domain(
            "exponent multiset must be non-empty with positive entries",
        ));
    }
    let max = *exponents.iter().max().expect("non-empty");
    let missing = (1..max).find(|e| !exponents.contains(e));
    Ok((missing.is_none(), missing))
}

/// Names of the predicates carried by [`RegularityVerdict`], in report order.
pub const PREDICATES: [&str; 6] = [
    "virtually_regular",
    "strongly_virtually_regular",
    "completely_virtually_regular",
    "virtually_semisimple",
    "virtually_simple",
    "strongly_regular",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub virtually_regular: bool,
    pub strongly_virtually_regular: bool,
    pub completely_virtually_regular: bool,
    pub virtually_semisimple: bool,
    pub virtually_simple: bool,
    pub strongly_regular: bool,
    /// Predicate name to `theorem=...; witness=...`.
    pub certificates: BTreeMap<String, String>,
}

impl RegularityVerdict {
    pub fn value(&self, predicate: &str) -> Option<bool> {
        Some(match predicate {
            "virtually_regular" => self.virtually_regular,
            "strongly_virtually_regular" => self.strongly_virtually_regular,
            "completely_virtually_regular" => self.completely_virtually_regular,
            "virtually_semisimple" => self.virtually_semisimple,
            "virtually_simple" => self.virtually_simple,
            "strongly_regular" => self.strongly_regular,
            _ => return None,
        })
    }
}

pub(crate) fn certificate(theorem: &str, witness: Option<String>) -> String {
    format!(
        "theorem={theorem}; witness={}",
        witness.as_deref().unwrap_or("none")
    )
}

const VR_RULE: &str = "f.g. abelian group is virtually regular iff each T_p has contiguous exponents 1..k";
const SEMISIMPLE_RULE: &str = "f.g. abelian group is SVR iff CVR iff VSS iff T(M) is semisimple";
const SIMPLE_RULE: &str =
    "Z-module is virtually simple iff isomorphic to Z or Z_p";
const STRONG_RULE: &str = "every cyclic submodule is a summand iff M is semisimple";
const VACUOUS: &str = "zero module, vacuous quantification";

pub fn classify(g: &FgAbGroup) -> RegularityVerdict {
    let mut certificates = BTreeMap::new();
    if g.is_zero() {
        for name in PREDICATES {
            certificates.insert(name.to_string(), certificate(VACUOUS, None));
        }
        return RegularityVerdict {
            virtually_regular: true,
            strongly_virtually_regular: true,
            completely_virtually_regular: true,
            virtually_semisimple: true,
            virtually_simple: true,
            strongly_regular: true,
            certificates,
        };
    }

    let primary = primary_decomposition(g);

    let vr_failure = primary.parts.iter().find_map(|(&p, exps)| {
        let (ok, missing) = is_vr_p_group(exps).expect("primary parts are non-empty");
        (!ok).then(|| format!("p={p} exponents {exps:?} missing {}", missing.unwrap_or(0)))
    });
    let virtually_regular = vr_failure.is_none();
    let vr_witness = vr_failure.or_else(|| {
        (primary.is_empty()).then(|| "torsion-free: Z is a summand of every nonzero free group".to_string())
    });
    certificates.insert(
        "virtually_regular".to_string(),
        certificate(VR_RULE, vr_witness),
    );

    let non_semisimple = primary.parts.iter().find_map(|(&p, exps)| {
        exps.iter()
            .find(|&&e| e > 1)
            .map(|&e| format!("Z_{} ⊆ T_{p}", p.pow(e)))
    });
    let torsion_semisimple = non_semisimple.is_none();
    for name in [
        "strongly_virtually_regular",
        "completely_virtually_regular",
        "virtually_semisimple",
    ] {
        certificates.insert(
            name.to_string(),
            certificate(SEMISIMPLE_RULE, non_semisimple.clone()),
        );
    }

    let virtually_simple = match (g.free_rank, g.invariant_factors.as_slice()) {
        (1, []) => true,
        (0, [d]) => is_prime(*d),
        _ => false,
    };
    certificates.insert(
        "virtually_simple".to_string(),
        certificate(
            SIMPLE_RULE,
            (!virtually_simple).then(|| format!("{g} is neither Z nor Z_p")),
        ),
    );

    let strongly_regular = g.free_rank == 0 && torsion_semisimple;
    let sr_witness = if g.free_rank > 0 {
        Some("2Z ⊆ Z has no complement".to_string())
    } else {
        non_semisimple.map(|w| format!("cyclic p-subgroup of {w} has no complement"))
    };
    certificates.insert(
        "strongly_regular".to_string(),
        certificate(STRONG_RULE, sr_witness),
    );

    RegularityVerdict {
        virtually_regular,
        strongly_virtually_regular: torsion_semisimple,
        completely_virtually_regular: torsion_semisimple,
        virtually_semisimple: torsion_semisimple,
        virtually_simple,
        strongly_regular,
        certificates,
    }
}

/// Splits `G` into its torsion part `T(G)` and the free quotient `G/T(G)`.
pub fn torsion_split_views(g: &FgAbGroup) -> (FgAbGroup, FgAbGroup) {
    (g.torsion_part(), g.free_part())
}

/// Partitions of `n` as non-increasing part lists, in lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in 1..=rest.min(max) {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every isomorphism class of abelian groups of order `n`, sorted by
/// invariant factors.
pub fn groups_of_order(n: u64) -> Result<Vec<FgAbGroup>> {
    let f = factorize(n as i64)?;
    let mut choices: Vec<BTreeMap<u64, Vec<u32>>> = vec![BTreeMap::new()];
    for (&p, &e) in f.factors() {
        let mut next = Vec::new();
        for base in &choices {
            for part in partitions(e) {
                let mut m = base.clone();
                m.insert(p, part);
                next.push(m);
            }
        }
        choices = next;
    }
    let mut groups = choices
        .into_iter()
        .map(|parts| invariant_factors_from_primary(&PrimaryData::new(parts)?, 0))
        .collect::<Result<Vec<_>>>()?;
    groups.sort_by(|a, b| a.invariant_factors.cmp(&b.invariant_factors));
    Ok(groups)
}

/// All finite abelian groups of order `1..=max_order`, ordered by order and
/// then by invariant factors.
pub fn groups_up_to(max_order: u64) -> Result<Vec<FgAbGroup>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.extend(groups_of_order(n)?);
    }
    Ok(out)
}
