//! Small integer helpers shared by the lattice and hypothesis code.

/// Non-negative greatest common divisor; `gcd(0, 0) == 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Trial-division primality test. Inputs here are tiny (multiplicities of
/// divisor classes), so nothing smarter is needed.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// `n = 2p` with `p` prime. Note that 4 = 2 * 2 qualifies.
pub fn is_twice_prime(n: i64) -> bool {
    n % 2 == 0 && is_prime(n / 2)
}

/// Positive divisors of `n > 0` in increasing order.
pub fn divisors(n: i64) -> impl Iterator<Item = i64> {
    (1..=n.max(0)).filter(move |k| n % k == 0)
}

/// Floor-style remainder in `[0, m)` for `m > 0`.
pub fn rem(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(-8, 12), 4);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn primes_and_twice_primes() {
        let primes: alloc::vec::Vec<i64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_twice_prime(4));
        assert!(is_twice_prime(14));
        assert!(!is_twice_prime(12));
        assert!(!is_twice_prime(2));
    }
}
