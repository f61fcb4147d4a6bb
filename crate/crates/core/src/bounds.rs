//! Closed-form thresholds in terms of the modulator size `k`.
//!
//! All values saturate at `u64::MAX`, which only happens for `k` far beyond
//! anything the search can handle.

fn pow2(e: u64) -> u128 {
    if e >= 127 {
        u128::MAX
    } else {
        1u128 << e
    }
}

fn clamp(v: u128) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// `2k + 4^k + 1`: the most type-1/type-2 matching edges a reduced solution
/// can have per pair of modulator signatures.
pub fn signature_edge_cap(k: usize) -> u64 {
    let k = k as u64;
    clamp(pow2(2 * k).saturating_add(2 * k as u128 + 1))
}

/// `2k + 4^k + 2`: size at which a matched/nested pair class triggers a
/// deletion.
pub fn pair_class_threshold(k: usize) -> u64 {
    signature_edge_cap(k).saturating_add(1)
}

/// `2(2^k + 4^k)(2k + 4^k + 1) + k + 2^k + 2·4^k`: more true-twin classes than
/// this rules out a solution once the pair rules are exhausted.
pub fn twin_class_bound(k: usize) -> u64 {
    let kk = k as u128;
    let a = pow2(k as u64);
    let b = pow2(2 * k as u64);
    let cap = signature_edge_cap(k) as u128;
    let v = a
        .saturating_add(b)
        .saturating_mul(cap)
        .saturating_mul(2)
        .saturating_add(kk)
        .saturating_add(a)
        .saturating_add(b.saturating_mul(2));
    clamp(v)
}

/// `k + 2^k + 2·4^k + 2·4^k(2k + 4^k + 1)`: vertex bound on any potential
/// solution skeleton.
pub fn skeleton_order_bound(k: usize) -> u64 {
    let kk = k as u128;
    let a = pow2(k as u64);
    let b = pow2(2 * k as u64);
    let cap = signature_edge_cap(k) as u128;
    let v = kk
        .saturating_add(a)
        .saturating_add(b.saturating_mul(2))
        .saturating_add(b.saturating_mul(2).saturating_mul(cap));
    clamp(v)
}

/// `2^k + k`: most true-twin classes a graph with a clique-plus-k root has,
/// and the size every class is shrunk to.
pub fn clique_twin_bound(k: usize) -> u64 {
    clamp(pow2(k as u64).saturating_add(k as u128))
}

/// `(2^k + k)^2`: order bound of the clique-variant kernel.
pub fn clique_kernel_bound(k: usize) -> u64 {
    let t = clique_twin_bound(k) as u128;
    clamp(t.saturating_mul(t))
}
