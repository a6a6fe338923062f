//! Cokernel sizes over `F_2[[π]]/(π^N)` by exhaustive enumeration.
//!
//! An element of `O/π^N` is a bit mask of its first `N` digits, and
//! multiplication by `π` is a left shift. The image of a matrix is the
//! `F_2`-span of the vectors `π^k · column_j`, which is enumerated by a
//! Gray-code walk over all subsets of those generators.

use conductor_core::rings::Series;

pub const MAX_BITS: u32 = 20;

/// The first `n` digits of a series over `F_2` as a bit mask.
pub fn series_bits(x: &Series, n: u32) -> u64 {
    let mut bits = 0u64;
    for (i, d) in x.digits().iter().enumerate().take(n as usize) {
        if !d.is_zero() {
            bits |= 1 << i;
        }
    }
    bits
}

/// `log_2 |coker(M mod π^n)|` for a matrix of bit-masked entries, where
/// `entries[i][j]` is row `i`, column `j`.
pub fn cokernel_log2(entries: &[Vec<u64>], n: u32) -> u32 {
    let rows = entries.len() as u32;
    let cols = entries.first().map_or(0, Vec::len);
    let total = n * rows;
    assert!(total <= MAX_BITS, "module too large to enumerate");
    let mask = (1u64 << n) - 1;
    let pack = |column: usize, shift: u32| -> u64 {
        let mut v = 0u64;
        for (i, row) in entries.iter().enumerate() {
            v |= ((row[column] << shift) & mask) << (i as u32 * n);
        }
        v
    };
    let gens: Vec<u64> = (0..cols)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| pack(j, k))
        .collect();
    assert!(gens.len() <= MAX_BITS as usize, "too many generators to enumerate");
    let mut seen = vec![false; 1usize << total];
    let mut current = 0u64;
    seen[0] = true;
    let mut image = 1u64;
    for step in 1u64..(1u64 << gens.len()) {
        current ^= gens[step.trailing_zeros() as usize];
        if !seen[current as usize] {
            seen[current as usize] = true;
            image += 1;
        }
    }
    assert!(image.is_power_of_two());
    total - image.trailing_zeros()
}
