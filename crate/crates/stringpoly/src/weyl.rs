//! Reduced words of the longest element of the symmetric group.
//!
//! Words are sequences over `1..=n` of length `n(n+1)/2` whose product of
//! simple transpositions is the order-reversing permutation of `[n+1]`.
//! Two words are equivalent when they differ by swaps of adjacent commuting
//! letters (2-moves); the equivalence classes are commutation classes.

use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Default cap on the rank for whole-set enumeration. `|R(7)| = 24698816`
/// is out of desk range; `|R(6)| = 292864` is feasible but slow, so the
/// default stops at 5.
pub const ENUMERATION_RANK_CAP: usize = 5;

/// Length of a reduced word of the longest element for rank `n`.
pub fn longest_length(n: usize) -> usize {
    n * (n + 1) / 2
}

/// A reduced word of the longest element of S_{n+1}.
///
/// Immutable after construction; `letters` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord {
    letters: Vec<usize>,
    rank: usize,
}

impl ReducedWord {
    /// Validate `letters` as a reduced word of the longest element of S_{n+1}.
    pub fn new(letters: Vec<usize>, rank: usize) -> Result<Self> {
        let want = longest_length(rank);
        if letters.len() != want {
            return Err(Error::WrongLength { got: letters.len(), want });
        }
        for &l in &letters {
            if l < 1 || l > rank {
                return Err(Error::LetterOutOfRange(l, rank));
            }
        }
        // Apply transpositions; every letter must increase the inversion
        // count, and the result must be the order-reversing permutation.
        let mut perm: Vec<usize> = (1..=rank + 1).collect();
        for &l in &letters {
            if perm[l - 1] > perm[l] {
                return Err(Error::NotReduced);
            }
            perm.swap(l - 1, l);
        }
        if !perm.iter().rev().copied().eq(1..=rank + 1) {
            return Err(Error::NotReduced);
        }
        Ok(ReducedWord { letters, rank })
    }

    /// Construct without validation. Internal use for moves that preserve
    /// validity by construction.
    pub(crate) fn new_unchecked(letters: Vec<usize>, rank: usize) -> Self {
        debug_assert!(ReducedWord::new(letters.clone(), rank).is_ok());
        ReducedWord { letters, rank }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// All words reachable by one 2-move (swap of adjacent letters that
    /// differ by at least 2).
    pub fn two_move_neighbors(&self) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        for i in 0..self.letters.len().saturating_sub(1) {
            let (a, b) = (self.letters[i], self.letters[i + 1]);
            if a.abs_diff(b) > 1 {
                let mut l = self.letters.clone();
                l.swap(i, i + 1);
                out.push(ReducedWord::new_unchecked(l, self.rank));
            }
        }
        out
    }

    /// All words reachable by one 3-move (braid relation
    /// `(i, i+1, i) <-> (i+1, i, i+1)` at any position).
    pub fn three_move_neighbors(&self) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        for i in 0..self.letters.len().saturating_sub(2) {
            let (a, b, c) = (self.letters[i], self.letters[i + 1], self.letters[i + 2]);
            if a == c && b.abs_diff(a) == 1 {
                let mut l = self.letters.clone();
                l[i] = b;
                l[i + 1] = a;
                l[i + 2] = b;
                out.push(ReducedWord::new_unchecked(l, self.rank));
            }
        }
        out
    }

    /// Letterwise Dynkin involution `i -> n + 1 - i`.
    pub fn involution(&self) -> ReducedWord {
        let l = self.letters.iter().map(|&x| self.rank + 1 - x).collect();
        ReducedWord::new_unchecked(l, self.rank)
    }

    /// Canonical representative of the commutation class: the
    /// lexicographically smallest member, computed as the greedy linear
    /// extension of the word's heap (repeatedly emit the smallest letter
    /// whose earlier occurrences of adjacent or equal value are exhausted).
    pub fn class_canonical(&self) -> ReducedWord {
        let n = self.rank;
        let len = self.letters.len();
        let mut remaining: Vec<Option<usize>> = self.letters.iter().copied().map(Some).collect();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            // A position is available if no earlier unemitted letter blocks
            // it (letters within distance 1 do not commute).
            let mut best: Option<(usize, usize)> = None; // (letter, pos)
            'cand: for (pos, slot) in remaining.iter().enumerate() {
                let Some(l) = *slot else { continue };
                for e in remaining[..pos].iter().flatten() {
                    if e.abs_diff(l) <= 1 {
                        continue 'cand;
                    }
                }
                if best.is_none_or(|(bl, _)| l < bl) {
                    best = Some((l, pos));
                }
            }
            let (l, pos) = best.expect("heap always has an available letter");
            remaining[pos] = None;
            out.push(l);
        }
        ReducedWord::new_unchecked(out, n)
    }

    /// Whether two words differ by a sequence of 2-moves.
    pub fn commutes_with(&self, other: &ReducedWord) -> bool {
        self.rank == other.rank && self.class_canonical() == other.class_canonical()
    }

    /// Parse a comma-separated 1-based word, inferring the rank from the
    /// largest letter.
    pub fn parse(s: &str) -> Result<ReducedWord> {
        let letters: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad letter {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let rank = letters.iter().copied().max().ok_or_else(|| Error::Parse("empty word".into()))?;
        ReducedWord::new(letters, rank)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// Cardinality of R(n+1) by the hook length formula:
/// `binom(n+1, 2)! / (1^n 3^{n-1} 5^{n-2} ... (2n-1)^1)`,
/// the hook length `2j-1` occurring `n+1-j` times in the staircase shape.
pub fn hook_length_count(n: usize) -> u128 {
    let nbar = longest_length(n) as u128;
    let num: u128 = (1..=nbar).product();
    let den: u128 = (1..=n).map(|j| ((2 * j - 1) as u128).pow((n + 1 - j) as u32)).product();
    num / den
}

/// Enumerate all reduced words of the longest element of S_{n+1}.
///
/// Depth-first construction: at each step append any letter whose
/// transposition increases the inversion count. Output is sorted.
pub fn enumerate_reduced_words(n: usize) -> Result<Vec<ReducedWord>> {
    enumerate_reduced_words_capped(n, ENUMERATION_RANK_CAP)
}

/// As [`enumerate_reduced_words`] with an explicit rank cap.
pub fn enumerate_reduced_words_capped(n: usize, cap: usize) -> Result<Vec<ReducedWord>> {
    if n == 0 {
        return Err(Error::Parse("rank must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::RankCapExceeded { got: n, cap });
    }
    let nbar = longest_length(n);
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (1..=n + 1).collect();
    let mut word = Vec::with_capacity(nbar);
    fn rec(n: usize, nbar: usize, perm: &mut Vec<usize>, word: &mut Vec<usize>, out: &mut Vec<ReducedWord>) {
        if word.len() == nbar {
            out.push(ReducedWord::new_unchecked(word.clone(), n));
            return;
        }
        for l in 1..=n {
            if perm[l - 1] < perm[l] {
                perm.swap(l - 1, l);
                word.push(l);
                rec(n, nbar, perm, word, out);
                word.pop();
                perm.swap(l - 1, l);
            }
        }
    }
    rec(n, nbar, &mut perm, &mut word, &mut out);
    out.sort();
    Ok(out)
}

/// A commutation class: all words reachable from each other by 2-moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutationClass {
    pub representative: ReducedWordString,
    pub members: Vec<ReducedWordString>,
}

/// Serialization-friendly word form ("1,3,2,1,3,2").
pub type ReducedWordString = String;

/// Partition R(n+1) into commutation classes, sorted by representative.
pub fn commutation_classes(n: usize) -> Result<Vec<(ReducedWord, Vec<ReducedWord>)>> {
    commutation_classes_capped(n, ENUMERATION_RANK_CAP)
}

pub fn commutation_classes_capped(n: usize, cap: usize) -> Result<Vec<(ReducedWord, Vec<ReducedWord>)>> {
    let words = enumerate_reduced_words_capped(n, cap)?;
    let mut classes: BTreeMap<ReducedWord, Vec<ReducedWord>> = BTreeMap::new();
    for w in words {
        classes.entry(w.class_canonical()).or_default().push(w);
    }
    Ok(classes.into_iter().collect())
}

/// 2-move closure of a single word (breadth-first).
pub fn two_move_class(word: &ReducedWord) -> Vec<ReducedWord> {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![word.clone()];
    seen.insert(word.clone());
    while let Some(w) = stack.pop() {
        for nb in w.two_move_neighbors() {
            if seen.insert(nb.clone()) {
                stack.push(nb);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize], n: usize) -> ReducedWord {
        ReducedWord::new(letters.to_vec(), n).unwrap()
    }

    #[test]
    fn validate_accepts_known_words() {
        assert!(ReducedWord::new(vec![1], 1).is_ok());
        assert!(ReducedWord::new(vec![1, 2, 1, 3, 2, 1], 3).is_ok());
        assert!(ReducedWord::new(vec![1, 3, 2, 1, 3, 2], 3).is_ok());
    }

    #[test]
    fn validate_rejects_non_reduced() {
        assert_eq!(ReducedWord::new(vec![1, 1, 2, 3, 2, 1], 3), Err(Error::NotReduced));
        assert!(matches!(ReducedWord::new(vec![1, 2, 1], 3), Err(Error::WrongLength { .. })));
        assert!(matches!(ReducedWord::new(vec![1, 2, 4, 3, 2, 1], 3), Err(Error::LetterOutOfRange(4, 3))));
    }

    #[test]
    fn enumeration_counts_match_hook_lengths() {
        assert_eq!(hook_length_count(1), 1);
        assert_eq!(hook_length_count(2), 2);
        assert_eq!(hook_length_count(3), 16);
        assert_eq!(hook_length_count(4), 768);
        assert_eq!(hook_length_count(5), 292864);
        for n in 1..=4 {
            assert_eq!(enumerate_reduced_words(n).unwrap().len() as u128, hook_length_count(n));
        }
        assert!(matches!(enumerate_reduced_words(6), Err(Error::RankCapExceeded { .. })));
    }

    #[test]
    fn two_moves() {
        let word = w(&[1, 2, 1, 3, 2, 1], 3);
        let nbs = word.two_move_neighbors();
        assert!(nbs.contains(&w(&[1, 2, 3, 1, 2, 1], 3)));
        assert!(w(&[1, 2, 1], 2).two_move_neighbors().is_empty());
        assert!(w(&[2, 1, 3, 2, 1, 3], 3).commutes_with(&w(&[2, 3, 1, 2, 3, 1], 3)));
    }

    #[test]
    fn three_moves() {
        assert_eq!(w(&[1, 2, 1], 2).three_move_neighbors(), vec![w(&[2, 1, 2], 2)]);
        let nbs = w(&[1, 2, 1, 3, 2, 1], 3).three_move_neighbors();
        assert!(nbs.contains(&w(&[2, 1, 2, 3, 2, 1], 3)));
        // exhaustive scan: every neighbor validates
        for word in enumerate_reduced_words(3).unwrap() {
            for nb in word.three_move_neighbors() {
                assert!(ReducedWord::new(nb.letters().to_vec(), 3).is_ok());
            }
        }
    }

    #[test]
    fn involution_examples() {
        assert_eq!(w(&[1, 2, 1], 2).involution(), w(&[2, 1, 2], 2));
        assert_eq!(w(&[1, 2, 1, 3, 2, 1], 3).involution(), w(&[3, 2, 3, 1, 2, 3], 3));
        for word in enumerate_reduced_words(3).unwrap() {
            assert_eq!(word.involution().involution(), word);
        }
    }

    #[test]
    fn classes_n4() {
        let classes = commutation_classes(4).unwrap();
        assert_eq!(classes.len(), 62);
        for (rep, members) in &classes {
            // representative is the lex-smallest member
            assert_eq!(rep, members.iter().min().unwrap());
            // members are closed and connected under 2-moves
            let closure = two_move_class(rep);
            assert_eq!(&closure, members);
        }
    }

    #[test]
    fn involution_permutes_classes() {
        let classes = commutation_classes(3).unwrap();
        let reps: std::collections::BTreeSet<_> = classes.iter().map(|(r, _)| r.clone()).collect();
        for (rep, _) in &classes {
            assert!(reps.contains(&rep.involution().class_canonical()));
        }
    }

    #[test]
    fn braid_graph_connected_small_ranks() {
        for n in 1..=3 {
            let words = enumerate_reduced_words(n).unwrap();
            let index: BTreeMap<_, _> = words.iter().cloned().zip(0..).collect();
            let mut seen = vec![false; words.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                let word = &words[i];
                for nb in word.two_move_neighbors().into_iter().chain(word.three_move_neighbors()) {
                    let j = index[&nb];
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            assert!(seen.iter().all(|&s| s), "braid graph disconnected at n={n}");
        }
    }

    #[test]
    fn class_members_share_letter_multiset() {
        for (rep, members) in commutation_classes(3).unwrap() {
            let mut base = rep.letters().to_vec();
            base.sort();
            for m in members {
                let mut ls = m.letters().to_vec();
                ls.sort();
                assert_eq!(ls, base);
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        let word = ReducedWord::parse("1,3,2,1,3,2").unwrap();
        assert_eq!(word.to_string(), "1,3,2,1,3,2");
        assert_eq!(word.rank(), 3);
    }
}
