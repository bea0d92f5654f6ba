//! Bounded sweeps behind the "every n" and "no n" statements about particular
//! coefficient pairs.

use num_integer::Integer;

use super::{balancer_of, find_all, first_gap, BalanceSolution, CoeffPair, Variant};
use crate::exactnum::Int;

fn coprime_pairs(max_ab: u64) -> Vec<(u64, u64)> {
    (1..=max_ab)
        .flat_map(|a| (1..=max_ab).map(move |b| (a, b)))
        .filter(|&(a, b)| a.gcd(&b) == 1)
        .collect()
}

fn pair(a: u64, b: u64) -> CoeffPair {
    CoeffPair::from_u64(a, b).expect("positive pair")
}

/// First `n` in `2..=n_max` where `(3,1)` fails to balance with `r = n - 1`.
pub fn three_one_first_failure(n_max: u64) -> Option<u64> {
    let c = pair(3, 1);
    (2..=n_max).find(|&n| balancer_of(&Int::from(n), &c, Variant::Balancing) != Some(Int::from(n - 1)))
}

/// Coprime pairs with `a, b <= max_ab` for which every `n` in `lo..=hi` is a solution.
pub fn pairs_with_every_n(max_ab: u64, v: Variant, lo: u64, hi: u64) -> Vec<(u64, u64)> {
    coprime_pairs(max_ab)
        .into_iter()
        .filter(|&(a, b)| first_gap(&pair(a, b), v, lo, hi).is_none())
        .collect()
}

/// Balancing solutions for `(8,1)` up to `n_max` (none expected).
pub fn eight_one_solutions(n_max: u64) -> Vec<BalanceSolution> {
    find_all(&pair(8, 1), Variant::Balancing, n_max)
}

/// For `a = 16y^2 + 16y + 3`, `b = 1`: the cobalancing `(n, r)` found up to `n_max`,
/// next to the single expected pair `(y, 4y^2 + 3y)`.
pub fn x_two_mod_four_family(y: u64, n_max: u64) -> (Vec<(Int, Int)>, (Int, Int)) {
    let a = 16 * y * y + 16 * y + 3;
    let found = find_all(&pair(a, 1), Variant::Cobalancing, n_max)
        .into_iter()
        .map(|s| (s.n, s.r))
        .collect();
    (found, (Int::from(y), Int::from(4 * y * y + 3 * y)))
}
