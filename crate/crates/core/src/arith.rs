//! Exact integer helpers: extended gcd, trial-division factorization and
//! element orders in products of cyclic groups.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Extended Euclid. Returns `(g, x, y)` with `g = gcd(|a|, |b|) >= 0` and
/// `a*x + b*y = g`. `gcd_ext(0, 0) = (0, 0, 0)`.
pub fn gcd_ext<T>(a: &T, b: &T) -> (T, T, T)
where
    T: Integer + Signed + Clone,
{
    if a.is_zero() && b.is_zero() {
        return (T::zero(), T::zero(), T::zero());
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_x, mut x) = (T::one(), T::zero());
    let (mut old_y, mut y) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, next_r);
        let next_x = old_x - q.clone() * x.clone();
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = old_y - q * y.clone();
        old_y = std::mem::replace(&mut y, next_y);
    }
    if old_r.is_negative() {
        (-old_r, -old_x, -old_y)
    } else {
        (old_r, old_x, old_y)
    }
}

/// `n = ∏ p^e` with every `p` prime and every `e >= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PrimePowerFactorization {
    factors: BTreeMap<u64, u32>,
}

impl PrimePowerFactorization {
    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> u64 {
        self.factors.iter().map(|(&p, &e)| p.pow(e)).product()
    }
}

/// Trial-division factorization. `factorize(1)` is the empty product.
pub fn factorize(n: i64) -> Result<PrimePowerFactorization> {
    if n <= 0 {
        return Err(Error::domain(format!("cannot factorize {n}: need n >= 1")));
    }
    let mut n = n as u64;
    let mut factors = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            *factors.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *factors.entry(n).or_insert(0) += 1;
    }
    Ok(PrimePowerFactorization { factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n as i64).map_or(false, |f| f.factors.get(&n) == Some(&1))
}

/// Order of the element with the given coordinates in `∏ Z_{moduli[i]}`.
pub fn element_order(coords: &[u64], moduli: &[u64]) -> Result<u64> {
    if coords.len() != moduli.len() {
        return Err(Error::domain(format!(
            "element has {} coordinates but the group has {} factors",
            coords.len(),
            moduli.len()
        )));
    }
    let mut order = 1u64;
    for (&c, &m) in coords.iter().zip(moduli) {
        if m == 0 || c >= m {
            return Err(Error::domain(format!("coordinate {c} is not a residue mod {m}")));
        }
        order = order.lcm(&(m / m.gcd(&c)));
    }
    Ok(order)
}
