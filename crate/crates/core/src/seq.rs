use crate::error::{Error, Result};

/// Finds indices of a monotone (non-decreasing or non-increasing) subsequence
/// of length at least `r`. The input must have at least `(r-1)^2 + 1`
/// elements, which guarantees such a subsequence exists.
///
/// Both the longest non-decreasing and longest non-increasing subsequences
/// are computed patience-style; whichever reaches `r` is returned, with ties
/// broken toward non-decreasing.
pub fn monotone_subsequence(seq: &[i64], r: usize) -> Result<Vec<usize>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let need = (r - 1) * (r - 1) + 1;
    if seq.len() < need {
        return Err(Error::SequenceTooShort { got: seq.len(), need });
    }
    let inc = longest_non_decreasing(seq);
    if inc.len() >= r {
        return Ok(inc[..r].to_vec());
    }
    let neg: Vec<i64> = seq.iter().map(|&x| -x).collect();
    let dec = longest_non_decreasing(&neg);
    debug_assert!(dec.len() >= r, "guarantee violated for length {} and r {}", seq.len(), r);
    Ok(dec[..r].to_vec())
}

/// Indices of a longest non-decreasing subsequence, O(n log n).
fn longest_non_decreasing(seq: &[i64]) -> Vec<usize> {
    // tails[l] = index of the smallest possible tail of a subsequence of
    // length l+1; parent links recover the subsequence.
    let mut tails: Vec<usize> = Vec::new();
    let mut parent: Vec<Option<usize>> = vec![None; seq.len()];
    for (i, &x) in seq.iter().enumerate() {
        // First tail strictly greater than x (upper bound keeps ties usable).
        let pos = tails.partition_point(|&t| seq[t] <= x);
        if pos > 0 {
            parent[i] = Some(tails[pos - 1]);
        }
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::new();
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(i);
        cur = parent[i];
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_monotone(seq: &[i64], idx: &[usize], r: usize) {
        assert!(idx.len() >= r);
        assert!(idx.windows(2).all(|w| w[0] < w[1]), "indices must increase");
        let vals: Vec<i64> = idx.iter().map(|&i| seq[i]).collect();
        let nondec = vals.windows(2).all(|w| w[0] <= w[1]);
        let noninc = vals.windows(2).all(|w| w[0] >= w[1]);
        assert!(nondec || noninc, "not monotone: {:?}", vals);
    }

    #[test]
    fn hand_example() {
        let seq = [3, 1, 4, 1, 5];
        let idx = monotone_subsequence(&seq, 3).unwrap();
        check_monotone(&seq, &idx, 3);
    }

    #[test]
    fn sorted_sequence_gives_prefix() {
        let seq = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
        let idx = monotone_subsequence(&seq, 4).unwrap();
        check_monotone(&seq, &idx, 4);
    }

    #[test]
    fn constant_sequence() {
        let seq = [7; 17];
        let idx = monotone_subsequence(&seq, 5).unwrap();
        check_monotone(&seq, &idx, 5);
    }

    #[test]
    fn too_short_is_error() {
        let seq = [1, 2, 3];
        assert!(matches!(
            monotone_subsequence(&seq, 3),
            Err(Error::SequenceTooShort { got: 3, need: 5 })
        ));
    }

    #[test]
    fn strictly_decreasing() {
        let seq: Vec<i64> = (0..10).rev().collect();
        let idx = monotone_subsequence(&seq, 4).unwrap();
        check_monotone(&seq, &idx, 4);
        let vals: Vec<i64> = idx.iter().map(|&i| seq[i]).collect();
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }
}
