//! Ratcliff/Obershelp sequence matching.
//!
//! The similarity of two sequences is `2 * M / (len_a + len_b)` where `M`
//! is the total number of elements covered by recursively locating the
//! longest common contiguous block and then matching the unmatched flanks
//! on each side of it.
//!
//! Tie-breaking mirrors the classic formulation: among equally long
//! blocks the one starting earliest in `a` wins, and among those the one
//! starting earliest in `b`.

/// A common contiguous block `a[a_start..a_start+len] == b[b_start..b_start+len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Block {
    pub a_start: usize,
    pub b_start: usize,
    pub len: usize,
}

/// Longest common contiguous block of `a[a_lo..a_hi]` versus `b[b_lo..b_hi]`.
///
/// Runs the textbook suffix-run dynamic program row by row; keeping only
/// strictly longer runs while scanning rows and columns in ascending
/// order yields exactly the earliest-in-`a`, then earliest-in-`b`
/// preference among maximal blocks.
pub(crate) fn longest_block<T: PartialEq>(
    a: &[T],
    b: &[T],
    a_lo: usize,
    a_hi: usize,
    b_lo: usize,
    b_hi: usize,
) -> Block {
    let mut best = Block { a_start: a_lo, b_start: b_lo, len: 0 };
    let width = b_hi.saturating_sub(b_lo);
    if width == 0 || a_hi <= a_lo {
        return best;
    }
    let mut prev = vec![0usize; width + 1];
    let mut cur = vec![0usize; width + 1];
    for i in a_lo..a_hi {
        for j in b_lo..b_hi {
            let col = j - b_lo + 1;
            if a[i] == b[j] {
                let run = prev[col - 1] + 1;
                cur[col] = run;
                if run > best.len {
                    best = Block { a_start: i + 1 - run, b_start: j + 1 - run, len: run };
                }
            } else {
                cur[col] = 0;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
        for v in cur.iter_mut() {
            *v = 0;
        }
    }
    best
}

/// Total number of elements matched by the recursive block decomposition.
pub(crate) fn matched_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    fn go<T: PartialEq>(
        a: &[T],
        b: &[T],
        a_lo: usize,
        a_hi: usize,
        b_lo: usize,
        b_hi: usize,
    ) -> usize {
        let blk = longest_block(a, b, a_lo, a_hi, b_lo, b_hi);
        if blk.len == 0 {
            return 0;
        }
        blk.len
            + go(a, b, a_lo, blk.a_start, b_lo, blk.b_start)
            + go(a, b, blk.a_start + blk.len, a_hi, blk.b_start + blk.len, b_hi)
    }
    go(a, b, 0, a.len(), 0, b.len())
}

/// Similarity ratio `2 * M / (|a| + |b|)`; `1.0` when both sides are empty.
pub(crate) fn ratio<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    2.0 * matched_len(a, b) as f64 / (a.len() + b.len()) as f64
}
