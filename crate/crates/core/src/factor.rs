use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GroupError, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const RESIDUAL_LIMIT: u64 = 1_000_000_000_000;

/// Prime factorization with machine-word primes and exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factorization(BTreeMap<u64, u64>);

impl Factorization {
    pub fn one() -> Self {
        Factorization(BTreeMap::new())
    }

    pub fn prime_power(p: u64, e: u64) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(p, e);
        }
        Factorization(m)
    }

    pub fn exponents(&self) -> &BTreeMap<u64, u64> {
        &self.0
    }

    pub fn exponent(&self, p: u64) -> u64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn exponent_sum(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prime_power_of(&self, p: u64) -> bool {
        self.0.keys().all(|&q| q == p)
    }

    pub fn value(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, (&p, &e)| {
            acc * BigUint::from(p).pow(e as u32)
        })
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut m = self.0.clone();
        for (&p, &e) in &other.0 {
            *m.entry(p).or_insert(0) += e;
        }
        Factorization(m)
    }

    pub fn pow(&self, k: u64) -> Factorization {
        if k == 0 {
            return Factorization::one();
        }
        Factorization(self.0.iter().map(|(&p, &e)| (p, e * k)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Factorization) -> Option<Factorization> {
        let mut m = self.0.clone();
        for (&p, &e) in &other.0 {
            let have = m.get_mut(&p)?;
            if *have < e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                m.remove(&p);
            }
        }
        Some(Factorization(m))
    }

    /// The `k` with `self == base^k`, if one exists.
    pub fn log_base(&self, base: &Factorization) -> Option<u64> {
        if base.is_one() {
            return None;
        }
        let (&p, &e) = base.0.iter().next()?;
        let own = self.exponent(p);
        if !own.is_multiple_of(e) {
            return None;
        }
        let k = own / e;
        (base.pow(k) == *self).then_some(k)
    }
}

impl fmt::Display for Factorization {
    /// `2^4·3^3`; the empty product prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (&p, &e) in &self.0 {
            if !first {
                f.write_str("·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// Trial division by the primes up to 10^6.
///
/// A leftover cofactor is accepted as prime when it has no factor below its
/// square root or is at most 10^12; anything larger is an error, since its
/// primality cannot be certified.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(GroupError::FactorZero(n.to_string()));
    }
    let mut rest = n.clone();
    let mut out = BTreeMap::new();
    let mut exhausted = true;
    for &p in small_primes() {
        if rest.is_one() {
            exhausted = false;
            break;
        }
        let pp = BigUint::from(p) * BigUint::from(p);
        if pp > rest {
            exhausted = false;
            break;
        }
        let mut e = 0u64;
        loop {
            let (q, r) = (&rest / p, &rest % p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.insert(p as u64, e);
        }
    }
    if !rest.is_one() {
        if exhausted && rest > BigUint::from(RESIDUAL_LIMIT) {
            return Err(GroupError::FactorResidual {
                residual: rest.to_string(),
            });
        }
        let p = rest.to_u64().ok_or_else(|| GroupError::FactorResidual {
            residual: rest.to_string(),
        })?;
        *out.entry(p).or_insert(0) += 1;
    }
    Ok(Factorization(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_432() {
        let f = factorize(&BigUint::from(432u32)).unwrap();
        assert_eq!(
            f,
            Factorization::prime_power(2, 4).mul(&Factorization::prime_power(3, 3))
        );
        assert_eq!(f.exponent_sum(), 7);
        assert_eq!(f.to_string(), "2^4·3^3");
    }

    #[test]
    fn factor_one_and_zero() {
        assert!(factorize(&BigUint::one()).unwrap().is_one());
        assert!(matches!(
            factorize(&BigUint::zero()),
            Err(GroupError::FactorZero(_))
        ));
    }

    #[test]
    fn factor_21_pow_8() {
        let n = BigUint::from(21u32).pow(8);
        let f = factorize(&n).unwrap();
        assert_eq!(f.to_string(), "3^8·7^8");
        assert_eq!(f.exponent_sum(), 16);
        assert_eq!(f.value(), n);
    }

    #[test]
    fn large_prime_cofactor() {
        // 999983 is the largest prime below 10^6; 1000003 is prime.
        let n = BigUint::from(999_983u64 * 1_000_003);
        let f = factorize(&n).unwrap();
        assert_eq!(f.exponent(999_983), 1);
        assert_eq!(f.exponent(1_000_003), 1);
    }

    #[test]
    fn uncertifiable_residual() {
        // Product of two primes just above 10^6: the cofactor exceeds 10^12.
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        assert!(matches!(
            factorize(&n),
            Err(GroupError::FactorResidual { .. })
        ));
    }

    #[test]
    fn huge_smooth_number() {
        let n = BigUint::from(432u32).pow(91);
        let f = factorize(&n).unwrap();
        assert_eq!(f.exponent(2), 4 * 91);
        assert_eq!(f.exponent(3), 3 * 91);
        assert_eq!(
            f.log_base(&factorize(&BigUint::from(432u32)).unwrap()),
            Some(91)
        );
    }

    #[test]
    fn display_omits_unit_exponents() {
        let f = factorize(&BigUint::from(2u32 * 2 * 3 * 7)).unwrap();
        assert_eq!(f.to_string(), "2^2·3·7");
        assert_eq!(Factorization::one().to_string(), "1");
    }
}
