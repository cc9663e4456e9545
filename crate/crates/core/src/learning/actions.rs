use std::collections::BTreeSet;

use rand::Rng;

use crate::channel::Allocation;

/// Decode the mixed-radix code of an allocation: the first `num_dl` digits
/// (least significant first) are downlink owners, the rest uplink owners.
fn decode(mut code: u128, num_users: usize, num_dl: usize, num_ul: usize) -> Allocation {
    let base = num_users as u128;
    let mut digits = Vec::with_capacity(num_dl + num_ul);
    for _ in 0..num_dl + num_ul {
        digits.push((code % base) as usize);
        code /= base;
    }
    let uplink = digits.split_off(num_dl);
    Allocation {
        downlink: digits,
        uplink,
        num_users,
    }
}

/// Number of distinct allocations, `U^(S+V)`, or `None` on overflow.
pub fn action_space_size(num_users: usize, num_dl: usize, num_ul: usize) -> Option<u128> {
    (num_users as u128).checked_pow((num_dl + num_ul) as u32)
}

/// Action table of one SBS.
///
/// Every action gives each downlink and uplink block to exactly one of the
/// `num_users` users. The whole space is listed when it has at most `cap`
/// members; otherwise `cap` distinct allocations are sampled uniformly and
/// listed in code order.
pub fn enumerate_actions<R: Rng + ?Sized>(
    num_users: usize,
    num_dl: usize,
    num_ul: usize,
    cap: usize,
    rng: &mut R,
) -> Vec<Allocation> {
    assert!(num_users >= 1, "an SBS without users has no actions");
    assert!(cap >= 1, "action cap must be positive");
    match action_space_size(num_users, num_dl, num_ul) {
        Some(total) if total <= cap as u128 => (0..total)
            .map(|c| decode(c, num_users, num_dl, num_ul))
            .collect(),
        total => {
            let bound = total.unwrap_or(u128::MAX);
            let mut codes = BTreeSet::new();
            while codes.len() < cap {
                codes.insert(rng.random_range(0..bound));
            }
            codes
                .into_iter()
                .map(|c| decode(c, num_users, num_dl, num_ul))
                .collect()
        }
    }
}
