//! Digit sums and the valuations of `k!` and `binom(1/p, k)`.

use num_rational::Rational64;

/// Sum of the base-`p` digits of `k`.
pub fn digit_sum(p: u64, mut k: u64) -> u64 {
    let mut s = 0;
    while k > 0 {
        s += k % p;
        k /= p;
    }
    s
}

/// `v_p(k)` for `k >= 1`.
pub fn int_valuation(p: u64, mut k: u64) -> u64 {
    assert!(k > 0, "valuation of zero");
    let mut v = 0;
    while k % p == 0 {
        k /= p;
        v += 1;
    }
    v
}

/// `v_p(k!) = (k - S_p(k)) / (p - 1)`.
pub fn factorial_valuation(p: u64, k: u64) -> Rational64 {
    Rational64::new((k - digit_sum(p, k)) as i64, p as i64 - 1)
}

/// `v_p(binom(1/p, k)) = (S_p(k) - k·p) / (p - 1)`.
pub fn binom_inv_p_valuation(p: u64, k: u64) -> Rational64 {
    Rational64::new(digit_sum(p, k) as i64 - (k * p) as i64, p as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(3, 9), 1);
        assert_eq!(digit_sum(2, 7), 3);
        assert_eq!(digit_sum(5, 0), 0);
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(factorial_valuation(3, 9), Rational64::from_integer(4));
        assert_eq!(factorial_valuation(2, 4), Rational64::from_integer(3));
        assert_eq!(factorial_valuation(5, 0), Rational64::from_integer(0));
        // always an integer
        for k in 0..500 {
            assert!(factorial_valuation(7, k).is_integer());
        }
    }

    #[test]
    fn binomial_valuations() {
        assert_eq!(binom_inv_p_valuation(3, 1), Rational64::from_integer(-1));
        assert_eq!(binom_inv_p_valuation(3, 2), Rational64::from_integer(-2));
        for p in [2, 3, 5, 7] {
            assert_eq!(binom_inv_p_valuation(p, 0), Rational64::from_integer(0));
        }
    }

    #[test]
    fn int_valuations() {
        assert_eq!(int_valuation(5, 25), 2);
        assert_eq!(int_valuation(2, 96), 5);
        assert_eq!(int_valuation(3, 7), 0);
    }
}
