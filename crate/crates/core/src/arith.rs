//! Elementary number theory on machine integers and scalars.

use crate::scalar::Scalar;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| is_prime(n)).collect()
}

/// Distinct prime divisors of `|n|`, ascending.
pub fn prime_divisors<S: Scalar>(n: &S) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    loop {
        let ds = S::of_u64(d);
        if ds.clone() * ds.clone() > n {
            break;
        }
        if n.is_multiple_of(&ds) {
            out.push(d);
            while n.is_multiple_of(&ds) {
                n = n / ds.clone();
            }
        }
        d += 1;
    }
    if n > S::one() {
        out.push(n.to_u64().expect("prime divisor fits u64"));
    }
    out
}

/// Exponent of `p` in `n != 0`, together with the cofactor `n / p^e`.
pub fn split_valuation<S: Scalar>(n: &S, p: u64) -> (u32, S) {
    assert!(!n.is_zero(), "valuation of zero");
    let ps = S::of_u64(p);
    let mut n = n.clone();
    let mut e = 0;
    while n.is_multiple_of(&ps) {
        n = n / ps.clone();
        e += 1;
    }
    (e, n)
}

/// Inverse of `a` modulo `m`, if it exists, in `[0, m)`.
pub fn mod_inverse<S: Scalar>(a: &S, m: &S) -> Option<S> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1) && !is_prime(0) && is_prime(97));
        assert_eq!(prime_divisors(&360i64), vec![2, 3, 5]);
        assert_eq!(prime_divisors(&-49i64), vec![7]);
        assert_eq!(prime_divisors(&1i64), Vec::<u64>::new());
        assert_eq!(prime_divisors(&BigInt::from(2 * 1_000_003i64)), vec![2, 1_000_003]);
    }

    #[test]
    fn valuations_and_inverses() {
        assert_eq!(split_valuation(&24i64, 2), (3, 3));
        assert_eq!(split_valuation(&-27i64, 3), (3, -1));
        assert_eq!(mod_inverse(&3i64, &7), Some(5));
        assert_eq!(mod_inverse(&-1i64, &5), Some(4));
        assert_eq!(mod_inverse(&6i64, &9), None);
    }
}
