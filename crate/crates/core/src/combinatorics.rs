//! Binomial coefficients, combination enumeration and ranking.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` in `u128`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, k)` as a big integer; never overflows.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    (n - k + 1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Lexicographic iterator over the `k`-subsets of `1..=n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: u32,
    cur: Vec<u32>,
    done: bool,
}

impl Combinations {
    pub fn new(n: u32, k: usize) -> Self {
        Combinations {
            n,
            cur: (1..=k as u32).collect(),
            done: k as u64 > n as u64,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        // advance: rightmost position that can still grow
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - (k - 1 - i) as u32 {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            self.done = true;
        }
        Some(out)
    }
}

/// Lexicographic rank of a sorted `k`-subset of `1..=n`.
pub fn rank_lex(n: u32, subset: &[u32]) -> u64 {
    let k = subset.len() as u64;
    let mut rank: u64 = 0;
    let mut prev = 0u32;
    for (i, &x) in subset.iter().enumerate() {
        for skipped in prev + 1..x {
            rank += binomial((n - skipped) as u64, k - i as u64 - 1).unwrap() as u64;
        }
        prev = x;
    }
    rank
}

/// Inverse of [`rank_lex`].
pub fn unrank_lex(n: u32, k: usize, mut rank: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    let mut x = 1u32;
    for i in 0..k {
        loop {
            let c = binomial((n - x) as u64, (k - i - 1) as u64).unwrap() as u64;
            if rank < c {
                break;
            }
            rank -= c;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    out
}

/// Next integer with the same popcount (Gosper's hack); `None` past `limit_bits`.
pub fn next_same_popcount(x: u128, limit_bits: u32) -> Option<u128> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    let next = (((r ^ x) >> 2) / c) | r;
    if limit_bits < 128 && next >> limit_bits != 0 {
        None
    } else {
        Some(next)
    }
}

/// The `rank`-th `k`-subset of `0..n` in colexicographic order, as a bitmask.
///
/// Colex order coincides with increasing integer value of the masks, which
/// is the order [`next_same_popcount`] walks.
pub fn unrank_colex_mask(k: u32, mut rank: u128) -> u128 {
    let mut mask = 0u128;
    for i in (1..=k).rev() {
        // largest c with C(c, i) <= rank
        let mut c = i as u64 - 1;
        while binomial(c + 1, i as u64).unwrap() <= rank {
            c += 1;
        }
        rank -= binomial(c, i as u64).unwrap();
        mask |= 1u128 << c;
    }
    mask
}
