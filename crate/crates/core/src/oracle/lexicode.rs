//! Greedy lexicographic binary codes.
//!
//! Words are `u32` bit patterns of length `n`, taken in increasing integer
//! order. Binary lexicodes are linear, so the code is the span of a greedy
//! basis: each new basis word is the smallest word at distance at least `d`
//! from the span of the earlier ones.

/// Basis of the length-`n`, distance-`d` lexicode.
pub fn lexicode_basis(n: u32, d: u32) -> Vec<u32> {
    assert!(n <= 26, "lexicode length {n} too large");
    let size = 1usize << n;
    // covered[w]: w is within distance d-1 of the current span
    let mut covered = vec![false; size];
    for w in 0..size {
        if (w as u32).count_ones() < d {
            covered[w] = true;
        }
    }
    let mut basis = Vec::new();
    let mut next = 1usize;
    loop {
        while next < size && covered[next] {
            next += 1;
        }
        if next == size {
            break;
        }
        let g = next;
        basis.push(g as u32);
        for u in 0..size {
            let w = u ^ g;
            if u < w {
                let c = covered[u] || covered[w];
                covered[u] = c;
                covered[w] = c;
            }
        }
    }
    basis
}

/// All codewords spanned by `basis`, sorted.
pub fn span(basis: &[u32]) -> Vec<u32> {
    let mut words = vec![0u32];
    for &g in basis {
        let shifted: Vec<u32> = words.iter().map(|w| w ^ g).collect();
        words.extend(shifted);
    }
    words.sort_unstable();
    words
}

/// The lexicode by the literal definition: scan all words in order and keep
/// each one at distance at least `d` from every word kept so far.
pub fn lexicode_naive(n: u32, d: u32) -> Vec<u32> {
    let mut code: Vec<u32> = Vec::new();
    for w in 0..(1u32 << n) {
        if code.iter().all(|c| (c ^ w).count_ones() >= d) {
            code.push(w);
        }
    }
    code
}

pub fn min_distance(code: &[u32]) -> Option<u32> {
    code.iter()
        .filter(|&&w| w != 0)
        .map(|w| w.count_ones())
        .min()
}
