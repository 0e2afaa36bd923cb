//! Definition-level brute force on concrete finite abelian groups.
//!
//! Nothing here consults a structure theorem: elements are enumerated, the
//! subgroup lattice is closed under joins starting from the cyclic
//! subgroups, and "is a direct summand" means an explicit complement was
//! found. The classifier in [`crate::abelian`] is checked against this
//! module, never the other way around.
//!
//! Two independent routes decide whether a cyclic subgroup is a summand:
//! a complement search over the lattice ([`Oracle::is_internal_summand`])
//! and an enumeration of all homomorphisms onto it that fix it pointwise
//! ([`Oracle::cyclic_retraction_kernel`]). The second needs no lattice and
//! so still works on groups whose lattice exceeds the subgroup cap.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;

use crate::abelian::{invariant_factors_from_primary, FgAbGroup, PrimaryData};
use crate::arith::{element_order, factorize};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 360;
pub const DEFAULT_MAX_SUBGROUPS: usize = 50_000;

/// Enumeration limits. Exceeding either is a [`Error::Capacity`], never a
/// truncated answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_order: usize,
    pub max_subgroups: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: DEFAULT_MAX_ORDER,
            max_subgroups: DEFAULT_MAX_SUBGROUPS,
        }
    }
}

impl Caps {
    /// Parses overrides such as `order=500,subgroups=200000` on top of the
    /// defaults.
    pub fn parse_overrides(text: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("cap override `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::domain(format!("cap `{key}` needs a positive integer")))?;
            match key.trim() {
                "order" => caps.max_order = value,
                "subgroups" => caps.max_subgroups = value,
                other => return Err(Error::domain(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}

/// Fixed-width bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ElementSet(Vec<u64>);

impl ElementSet {
    fn empty(n: usize) -> Self {
        ElementSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn intersection_len(&self, other: &ElementSet) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// `Z_{moduli[0]} × ... × Z_{moduli[k-1]}` with a precomputed addition table.
/// Elements are indexed in lexicographic order of their coordinates.
struct GroupTable {
    moduli: Vec<u64>,
    order: usize,
    add: Vec<u16>,
    orders: Vec<u64>,
}

impl GroupTable {
    fn coords(&self, mut index: usize) -> Vec<u64> {
        let mut c = vec![0u64; self.moduli.len()];
        for (slot, &m) in c.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % m as usize) as u64;
            index /= m as usize;
        }
        c
    }

    fn index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }
}

/// A concrete finite abelian group `∏ Z_{moduli[i]}`.
#[derive(Clone)]
pub struct FiniteGroupInstance {
    table: Arc<GroupTable>,
}

impl fmt::Debug for FiniteGroupInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupInstance")
            .field("moduli", &self.table.moduli)
            .field("order", &self.table.order)
            .finish()
    }
}

impl FiniteGroupInstance {
    /// Fails with a capacity error when the order exceeds `caps.max_order`.
    pub fn new(moduli: &[u64], caps: Caps) -> Result<Self> {
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::domain(format!("modulus {m} must be >= 2")));
        }
        let mut order = 1usize;
        for &m in moduli {
            order = order
                .checked_mul(m as usize)
                .filter(|&o| o <= caps.max_order)
                .ok_or(Error::Capacity {
                    what: "group order",
                    cap: caps.max_order,
                })?;
        }
        if order > u16::MAX as usize + 1 {
            return Err(Error::Capacity {
                what: "group order",
                cap: u16::MAX as usize + 1,
            });
        }
        let mut table = GroupTable {
            moduli: moduli.to_vec(),
            order,
            add: Vec::new(),
            orders: Vec::new(),
        };
        let coords: Vec<Vec<u64>> = (0..order).map(|i| table.coords(i)).collect();
        let mut add = Vec::with_capacity(order * order);
        for a in &coords {
            for b in &coords {
                let sum: Vec<u64> = a
                    .iter()
                    .zip(b)
                    .zip(moduli)
                    .map(|((&x, &y), &m)| (x + y) % m)
                    .collect();
                add.push(table.index(&sum) as u16);
            }
        }
        table.add = add;
        table.orders = coords
            .iter()
            .map(|c| element_order(c, moduli).expect("coordinates are in range"))
            .collect();
        Ok(FiniteGroupInstance {
            table: Arc::new(table),
        })
    }

    /// The instance `Z_{d_1} × ... × Z_{d_t}` for a finite descriptor.
    pub fn from_group(g: &FgAbGroup, caps: Caps) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::domain(format!("{g} is infinite")));
        }
        Self::new(g.invariant_factors(), caps)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.table.moduli
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    pub fn all_elements(&self) -> Vec<Vec<u64>> {
        (0..self.table.order).map(|i| self.table.coords(i)).collect()
    }

    fn element_index(&self, g: &[u64]) -> Result<usize> {
        if g.len() != self.table.moduli.len() || g.iter().zip(&self.table.moduli).any(|(&c, &m)| c >= m) {
            return Err(Error::domain(format!(
                "{g:?} is not an element of ∏ Z_{:?}",
                self.table.moduli
            )));
        }
        Ok(self.table.index(g))
    }

    fn subgroup(&self, members: ElementSet) -> Subgroup {
        let size = members.0.iter().map(|w| w.count_ones() as usize).sum();
        Subgroup {
            table: Arc::clone(&self.table),
            members,
            size,
        }
    }

    fn cyclic_by_index(&self, g: usize) -> Subgroup {
        let mut members = ElementSet::empty(self.table.order);
        let mut x = 0usize;
        loop {
            members.insert(x);
            x = self.table.add(x, g);
            if x == 0 {
                break;
            }
        }
        self.subgroup(members)
    }

    pub fn cyclic_subgroup(&self, g: &[u64]) -> Result<Subgroup> {
        Ok(self.cyclic_by_index(self.element_index(g)?))
    }

    pub fn whole(&self) -> Subgroup {
        let mut members = ElementSet::empty(self.table.order);
        for i in 0..self.table.order {
            members.insert(i);
        }
        self.subgroup(members)
    }

    pub fn trivial(&self) -> Subgroup {
        let mut members = ElementSet::empty(self.table.order);
        members.insert(0);
        self.subgroup(members)
    }

    /// Distinct cyclic subgroups, each with its least generator, in order of
    /// that generator.
    fn cyclic_subgroups(&self) -> Vec<(usize, Subgroup)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in 0..self.table.order {
            let c = self.cyclic_by_index(g);
            if seen.insert(c.members.clone()) {
                out.push((g, c));
            }
        }
        out
    }

    /// Every subgroup exactly once: start from the cyclic subgroups and join
    /// with cyclic subgroups until no new subgroup appears.
    pub fn all_subgroups(&self, caps: Caps) -> Result<Vec<Subgroup>> {
        let cyclic = self.cyclic_subgroups();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut found: Vec<Subgroup> = Vec::new();
        let cap_error = Error::Capacity {
            what: "subgroup count",
            cap: caps.max_subgroups,
        };
        for (_, c) in &cyclic {
            if seen.insert(c.members.clone()) {
                found.push(c.clone());
            }
        }
        if found.len() > caps.max_subgroups {
            return Err(cap_error);
        }
        let mut cursor = 0;
        while cursor < found.len() {
            let s = found[cursor].clone();
            cursor += 1;
            for (gen, c) in &cyclic {
                if s.members.contains(*gen) {
                    continue;
                }
                let joined = self.join(&s, c);
                if seen.insert(joined.members.clone()) {
                    found.push(joined);
                    if found.len() > caps.max_subgroups {
                        return Err(cap_error);
                    }
                }
            }
        }
        found.sort_by(|a, b| a.size.cmp(&b.size).then_with(|| a.members.cmp(&b.members)));
        Ok(found)
    }

    /// `A + B` for subgroups of this instance.
    fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut members = ElementSet::empty(self.table.order);
        for x in a.members.iter() {
            for y in b.members.iter() {
                members.insert(self.table.add(x, y));
            }
        }
        self.subgroup(members)
    }

    /// Searches every homomorphism `φ: G → <h>` with `φ(h) = h`. Such a `φ`
    /// is a projection onto `<h>`, and its kernel is a complement; conversely
    /// any complement yields one. Returns the kernel of the first hit.
    ///
    /// A homomorphism is fixed by the images `a_i · h` of the coordinate
    /// generators `e_i`, subject to `moduli[i] · a_i ≡ 0 (mod ord h)`.
    pub fn cyclic_retraction_kernel(&self, h: &[u64]) -> Result<Option<Subgroup>> {
        let hi = self.element_index(h)?;
        let m = self.table.orders[hi];
        if m == 1 {
            return Ok(Some(self.whole()));
        }
        let steps: Vec<u64> = self.table.moduli.iter().map(|&n| m / n.gcd(&m)).collect();
        let counts: Vec<u64> = self.table.moduli.iter().map(|&n| n.gcd(&m)).collect();
        let mut choice = vec![0u64; steps.len()];
        loop {
            let images: Vec<u64> = choice.iter().zip(&steps).map(|(&c, &s)| c * s).collect();
            let on_h = h
                .iter()
                .zip(&images)
                .fold(0u64, |acc, (&hc, &a)| (acc + hc % m * a) % m);
            if on_h == 1 % m {
                let mut kernel = ElementSet::empty(self.table.order);
                for x in 0..self.table.order {
                    let value = self
                        .table
                        .coords(x)
                        .iter()
                        .zip(&images)
                        .fold(0u64, |acc, (&xc, &a)| (acc + xc % m * a) % m);
                    if value == 0 {
                        kernel.insert(x);
                    }
                }
                let kernel = self.subgroup(kernel);
                let b = self.cyclic_by_index(hi);
                debug_assert!(self.is_complement(&b, &kernel, &self.whole()));
                return Ok(Some(kernel));
            }
            // Odometer over the admissible image choices.
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Ok(None);
                }
                choice[i] += 1;
                if choice[i] < counts[i] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Virtual regularity of the whole group via [`Self::cyclic_retraction_kernel`]:
    /// every cyclic subgroup order must be realized by a cyclic summand.
    pub fn virtually_regular_by_retraction(&self) -> Result<(bool, Option<Vec<u64>>)> {
        let mut realized: BTreeMap<u64, bool> = BTreeMap::new();
        let cyclic = self.cyclic_subgroups();
        for (g, _) in &cyclic {
            let m = self.table.orders[*g];
            if realized.get(&m) == Some(&true) {
                continue;
            }
            let hit = self.cyclic_retraction_kernel(&self.table.coords(*g))?.is_some();
            realized.insert(m, hit);
        }
        for g in 0..self.table.order {
            if !realized[&self.table.orders[g]] {
                return Ok((false, Some(self.table.coords(g))));
            }
        }
        Ok((true, None))
    }

    /// Every cyclic subgroup is itself a summand, via retractions.
    pub fn strongly_regular_by_retraction(&self) -> Result<bool> {
        for (g, _) in self.cyclic_subgroups() {
            if self.cyclic_retraction_kernel(&self.table.coords(g))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn is_complement(&self, b: &Subgroup, c: &Subgroup, m: &Subgroup) -> bool {
        b.size * c.size == m.size
            && b.members.intersection_len(&c.members) == 1
            && c.members.is_subset(&m.members)
            && self.join(b, c).members == m.members
    }
}

/// A subgroup of a [`FiniteGroupInstance`], identified by its element set.
#[derive(Clone)]
pub struct Subgroup {
    table: Arc<GroupTable>,
    members: ElementSet,
    size: usize,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.table, &other.table) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("moduli", &self.table.moduli)
            .field("elements", &self.elements())
            .finish()
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.size
    }

    /// Elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.members.iter().map(|i| self.table.coords(i)).collect()
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        g.len() == self.table.moduli.len()
            && g.iter().zip(&self.table.moduli).all(|(&c, &m)| c < m)
            && self.members.contains(self.table.index(g))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.table, &other.table) && self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// Closed under addition and contains the identity. Negation follows in a
    /// finite group.
    pub fn is_closed(&self) -> bool {
        self.members.contains(0)
            && self.members.iter().all(|x| {
                self.members
                    .iter()
                    .all(|y| self.members.contains(self.table.add(x, y)))
            })
    }
}

/// Isomorphism type of `N` from element-order counts. For each prime `p` of
/// `|N|`, `log_p |{x ∈ N : p^k x = 0}| = Σ_i min(e_i, k)`, so successive
/// differences count the cyclic `p`-parts of exponent at least `k`.
pub fn subgroup_type(n: &Subgroup) -> FgAbGroup {
    let orders: Vec<u64> = n.members.iter().map(|i| n.table.orders[i]).collect();
    let f = factorize(n.size as i64).expect("subgroup order >= 1");
    let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (&p, &total) in f.factors() {
        let mut prev = 0u32;
        let mut at_least = Vec::new();
        let mut k = 1u32;
        while prev < total {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let log = exact_log(count, p);
            at_least.push(log - prev);
            prev = log;
            k += 1;
        }
        // at_least[k-1] = #parts with exponent >= k.
        let mut exps = Vec::new();
        for (idx, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(idx + 1).copied().unwrap_or(0);
            for _ in 0..cnt - next {
                exps.push(idx as u32 + 1);
            }
        }
        parts.insert(p, exps);
    }
    let data = PrimaryData::new(parts).expect("order-count data is well formed");
    invariant_factors_from_primary(&data, 0).expect("finite type")
}

/// `log_p(n)` for an exact power `n` of `p`.
fn exact_log(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        e += 1;
    }
    e
}

/// A group together with its full subgroup lattice, on which all the
/// quantified definitions are evaluated literally.
pub struct Oracle {
    group: FiniteGroupInstance,
    subgroups: Vec<Subgroup>,
    types: Vec<FgAbGroup>,
    index: HashMap<ElementSet, usize>,
    vr_memo: Vec<OnceLock<bool>>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("group", &self.group)
            .field("subgroups", &self.subgroups.len())
            .finish()
    }
}

impl Oracle {
    pub fn new(group: FiniteGroupInstance, caps: Caps) -> Result<Self> {
        let subgroups = group.all_subgroups(caps)?;
        let types = subgroups.iter().map(subgroup_type).collect();
        let index = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();
        let vr_memo = subgroups.iter().map(|_| OnceLock::new()).collect();
        Ok(Oracle {
            group,
            subgroups,
            types,
            index,
            vr_memo,
        })
    }

    pub fn for_group(g: &FgAbGroup, caps: Caps) -> Result<Self> {
        Self::new(FiniteGroupInstance::from_group(g, caps)?, caps)
    }

    pub fn group(&self) -> &FiniteGroupInstance {
        &self.group
    }

    pub fn whole(&self) -> Subgroup {
        self.group.whole()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    fn index_of(&self, s: &Subgroup) -> Result<usize> {
        if !Arc::ptr_eq(&s.table, &self.group.table) {
            return Err(Error::domain("subgroup belongs to a different group"));
        }
        Ok(self.index[&s.members])
    }

    /// Lattice indices of the subgroups contained in `m`.
    fn below(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        let top = &self.subgroups[m];
        (0..=m).filter(move |&i| self.subgroups[i].members.is_subset(&top.members))
    }

    fn summand_in(&self, b: usize, m: usize) -> bool {
        let (bs, ms) = (&self.subgroups[b], &self.subgroups[m]);
        if ms.size % bs.size != 0 {
            return false;
        }
        let want = ms.size / bs.size;
        self.below(m).any(|c| {
            let cs = &self.subgroups[c];
            cs.size == want && self.group.is_complement(bs, cs, ms)
        })
    }

    /// Whether `b` has a complement inside `m`: some subgroup `C ⊆ m` with
    /// `b ∩ C = 0` and `b + C = m`.
    pub fn is_internal_summand(&self, b: &Subgroup, m: &Subgroup) -> Result<bool> {
        if !b.is_subgroup_of(m) {
            return Err(Error::domain("summand candidate is not contained in the module"));
        }
        Ok(self.summand_in(self.index_of(b)?, self.index_of(m)?))
    }

    /// Some internal summand of `m` has the isomorphism type `ty`.
    fn has_summand_of_type(&self, ty: &FgAbGroup, m: usize) -> bool {
        self.below(m)
            .filter(|&b| &self.types[b] == ty)
            .any(|b| self.summand_in(b, m))
    }

    fn vr_in(&self, m: usize) -> Option<Vec<u64>> {
        let mut decided: HashMap<FgAbGroup, bool> = HashMap::new();
        for g in self.subgroups[m].members.iter() {
            let ty = FgAbGroup::cyclic(self.group.table.orders[g]);
            let ok = *decided
                .entry(ty.clone())
                .or_insert_with(|| self.has_summand_of_type(&ty, m));
            if !ok {
                return Some(self.group.table.coords(g));
            }
        }
        None
    }

    /// Every cyclic subgroup of `m` is isomorphic to an internal summand of
    /// `m`. On failure returns the first offending element.
    pub fn virtually_regular(&self, m: &Subgroup) -> Result<(bool, Option<Vec<u64>>)> {
        let witness = self.vr_in(self.index_of(m)?);
        Ok((witness.is_none(), witness))
    }

    /// Every subgroup of `m` is isomorphic to an internal summand of `m`.
    /// For finite groups this is both strong virtual regularity and virtual
    /// semisimplicity.
    pub fn strongly_virtually_regular(&self, m: &Subgroup) -> Result<bool> {
        let m = self.index_of(m)?;
        let mut decided: HashMap<&FgAbGroup, bool> = HashMap::new();
        for n in self.below(m) {
            let ty = &self.types[n];
            let ok = *decided
                .entry(ty)
                .or_insert_with(|| self.has_summand_of_type(ty, m));
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every subgroup of `m`, viewed as a group in its own right, is
    /// virtually regular.
    pub fn completely_virtually_regular(&self, m: &Subgroup) -> Result<bool> {
        let m = self.index_of(m)?;
        Ok(self
            .below(m)
            .all(|n| *self.vr_memo[n].get_or_init(|| self.vr_in(n).is_none())))
    }

    /// Every cyclic subgroup of `m` is an internal summand of `m`.
    pub fn strongly_regular(&self, m: &Subgroup) -> Result<bool> {
        let m = self.index_of(m)?;
        Ok(self
            .subgroups[m]
            .members
            .iter()
            .all(|g| {
                let c = self.group.cyclic_by_index(g);
                self.summand_in(self.index[&c.members], m)
            }))
    }

    /// Every subgroup of `m` is an internal summand of `m`.
    pub fn every_subgroup_is_summand(&self, m: &Subgroup) -> Result<bool> {
        let m = self.index_of(m)?;
        Ok(self.below(m).all(|n| self.summand_in(n, m)))
    }
}
