//! Permutations in one-line notation, inversion sets, codes and pattern classes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Largest supported rank. Inversion sets of `S_16` fit a `u128` mask.
pub const MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..{n}: {word:?}")]
    NotAPermutation { n: usize, word: Vec<usize> },
    #[error("permutations of size {0} are not supported (max {MAX_N})")]
    TooLarge(usize),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
    #[error("invalid inversion set: violated at triple ({a},{b},{c})")]
    InvalidInversionSet { a: usize, b: usize, c: usize },
    #[error("pair ({i},{j}) is not in 1 <= i < j <= {n}")]
    BadPair { i: usize, j: usize, n: usize },
}

/// Which inversion set to take: `Inv(w)` (positions) or `Inv⁻¹(w)` (values).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Direct,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

/// A permutation of `{1..n}` stored in one-line notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    word: [u8; MAX_N],
}

impl Permutation {
    pub fn new(word: &[usize]) -> Result<Self, PermError> {
        let n = word.len();
        if n > MAX_N {
            return Err(PermError::TooLarge(n));
        }
        let mut seen = [false; MAX_N + 1];
        let mut out = [0u8; MAX_N];
        for (k, &v) in word.iter().enumerate() {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotAPermutation { n, word: word.to_vec() });
            }
            seen[v] = true;
            out[k] = v as u8;
        }
        Ok(Permutation { n: n as u8, word: out })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_N);
        let mut word = [0u8; MAX_N];
        for (k, slot) in word.iter_mut().enumerate().take(n) {
            *slot = (k + 1) as u8;
        }
        Permutation { n: n as u8, word }
    }

    /// The longest element `w₀ = n…21`.
    pub fn longest(n: usize) -> Self {
        assert!(n <= MAX_N);
        let mut word = [0u8; MAX_N];
        for (k, slot) in word.iter_mut().enumerate().take(n) {
            *slot = (n - k) as u8;
        }
        Permutation { n: n as u8, word }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn word(&self) -> &[u8] {
        &self.word[..self.n as usize]
    }

    /// `w(i)` with 1-based `i`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.word().iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut word = [0u8; MAX_N];
        for (k, &v) in self.word().iter().enumerate() {
            word[v as usize - 1] = (k + 1) as u8;
        }
        Permutation { n: self.n, word }
    }

    /// `w^rc = (n+1−wₙ)…(n+1−w₁)`.
    pub fn reverse_complement(&self) -> Self {
        let n = self.n();
        let mut word = [0u8; MAX_N];
        for k in 0..n {
            word[k] = (n + 1 - self.word[n - 1 - k] as usize) as u8;
        }
        Permutation { n: self.n, word }
    }

    /// Composition `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.n, other.n);
        let mut word = [0u8; MAX_N];
        for k in 0..self.n() {
            word[k] = self.word[other.word[k] as usize - 1];
        }
        Permutation { n: self.n, word }
    }

    /// Right multiplication by `s_k`: swaps positions `k` and `k+1`.
    pub fn swap_positions(&self, k: usize) -> Self {
        let mut out = *self;
        out.word.swap(k - 1, k);
        out
    }

    /// Left multiplication by the transposition `s_(i,j)`: swaps the values `i` and `j`.
    pub fn swap_values(&self, i: usize, j: usize) -> Self {
        let mut out = *self;
        for v in out.word[..self.n()].iter_mut() {
            if *v as usize == i {
                *v = j as u8;
            } else if *v as usize == j {
                *v = i as u8;
            }
        }
        out
    }

    pub fn is_descent(&self, k: usize) -> bool {
        self.word[k - 1] > self.word[k]
    }

    /// Descent positions `k` (1-based) with `w(k) > w(k+1)`.
    pub fn descents(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n()).filter(move |&k| self.is_descent(k))
    }

    pub fn length(&self) -> usize {
        let w = self.word();
        let mut count = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if w[a] > w[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inversion_set(&self, side: Side) -> InversionSet {
        let n = self.n();
        let mut set = InversionSet::empty(n);
        let w = self.word();
        for a in 0..n {
            for b in a + 1..n {
                if w[a] > w[b] {
                    match side {
                        Side::Direct => set.insert(a + 1, b + 1),
                        Side::Inverse => set.insert(w[b] as usize, w[a] as usize),
                    }
                }
            }
        }
        set
    }

    /// Weak-order covers. `Down` gives `ws_k` at descents, `Up` gives `ws_k` at ascents.
    pub fn weak_covers(&self, direction: Direction) -> Vec<Permutation> {
        (1..self.n())
            .filter(|&k| self.is_descent(k) == (direction == Direction::Down))
            .map(|k| self.swap_positions(k))
            .collect()
    }

    /// Removes initial and terminal fixed points. The identity strips to the `n = 1` identity.
    pub fn strip_fixed_points(&self) -> Permutation {
        let n = self.n();
        let w = self.word();
        let mut lo = 0;
        while lo < n && w[lo] as usize == lo + 1 {
            lo += 1;
        }
        if lo == n {
            return Permutation::identity(1);
        }
        let mut hi = n;
        while w[hi - 1] as usize == hi {
            hi -= 1;
        }
        let word: Vec<usize> = w[lo..hi].iter().map(|&v| v as usize - lo).collect();
        Permutation::new(&word).expect("stripping fixed points keeps a permutation")
    }

    /// Lehmer code `cᵢ = #{j > i : w(i) > w(j)}`.
    pub fn code(&self) -> Vec<usize> {
        let w = self.word();
        (0..w.len())
            .map(|a| w[a + 1..].iter().filter(|&&v| v < w[a]).count())
            .collect()
    }

    /// True when some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let k = pattern.n();
        if k == 0 {
            return true;
        }
        if k > self.n() {
            return false;
        }
        let mut chosen = [0u8; MAX_N];
        extend_match(self.word(), pattern.word(), 0, 0, &mut chosen)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains_pattern(pattern)
    }

    pub fn classify(&self) -> Classification {
        let p = |s: &[usize]| Permutation::new(s).unwrap();
        Classification {
            grassmannian: self.descents().count() <= 1,
            inverse_grassmannian: self.inverse().descents().count() <= 1,
            dominant: self.avoids(&p(&[1, 3, 2])),
            vexillary: self.avoids(&p(&[2, 1, 4, 3])),
            fully_commutative: self.avoids(&p(&[3, 2, 1])),
        }
    }

    /// All of `Sₙ` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations { next: Some(Permutation::identity(n)) }
    }

    /// Compact form without separators, only unambiguous for `n ≤ 9`.
    pub fn to_compact_string(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let sep = self.n() > 9;
        for (k, v) in self.word().iter().enumerate() {
            if sep && k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", v);
        }
        s
    }
}

fn extend_match(w: &[u8], pattern: &[u8], start: usize, depth: usize, chosen: &mut [u8; MAX_N]) -> bool {
    if depth == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - depth;
    for pos in start..=w.len() - remaining {
        let v = w[pos];
        let consistent = (0..depth).all(|t| (chosen[t] < v) == (pattern[t] < pattern[depth]));
        if consistent {
            chosen[depth] = v;
            if extend_match(w, pattern, pos + 1, depth + 1, chosen) {
                return true;
            }
        }
    }
    false
}

/// Lexicographic iterator over `Sₙ`.
pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next?;
        let mut succ = current;
        let n = current.n();
        let w = &mut succ.word[..n];
        self.next = if n < 2 {
            None
        } else {
            match (0..n - 1).rev().find(|&a| w[a] < w[a + 1]) {
                None => None,
                Some(a) => {
                    let b = (a + 1..n).rev().find(|&b| w[b] > w[a]).unwrap();
                    w.swap(a, b);
                    w[a + 1..].reverse();
                    Some(succ)
                }
            }
        };
        Some(current)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.word().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_compact_string())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `"3 1 5 4 2"`, `"3,1,5,4,2"` or, for single digits, `"31542"`.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        let bad = || PermError::Parse(String::from(s));
        let tokens: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        let word: Vec<usize> = if tokens.len() == 1 && tokens[0].len() > 1 {
            tokens[0].chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_, _>>()?
        } else {
            tokens.iter().map(|t| t.parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        if word.is_empty() {
            return Err(bad());
        }
        Permutation::new(&word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub grassmannian: bool,
    pub inverse_grassmannian: bool,
    pub dominant: bool,
    pub vexillary: bool,
    pub fully_commutative: bool,
}

/// Index of `(i,j)` in the lexicographic enumeration of `Φ⁺` for rank `n`.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// A subset of `Φ⁺ = {(i,j) : 1 ≤ i < j ≤ n}` as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InversionSet {
    n: u8,
    mask: u128,
}

impl InversionSet {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_N);
        InversionSet { n: n as u8, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        let width = n * n.saturating_sub(1) / 2;
        let mask = if width == 128 { u128::MAX } else { (1u128 << width) - 1 };
        InversionSet { n: n as u8, mask }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self, PermError> {
        let mut set = InversionSet::empty(n);
        for (i, j) in pairs {
            if !(1 <= i && i < j && j <= n) {
                return Err(PermError::BadPair { i, j, n });
            }
            set.insert(i, j);
        }
        Ok(set)
    }

    pub fn from_mask(n: usize, mask: u128) -> Self {
        InversionSet { n: n as u8, mask }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn mask(&self) -> u128 {
        self.mask
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.mask >> pair_index(self.n(), i, j) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) {
        self.mask |= 1u128 << pair_index(self.n(), i, j);
    }

    #[inline]
    pub fn remove(&mut self, i: usize, j: usize) {
        self.mask &= !(1u128 << pair_index(self.n(), i, j));
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_subset(&self, other: &InversionSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Members in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (1..n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j))).filter(move |&(i, j)| self.contains(i, j))
    }

    /// First triple `a < b < c` breaking either closure condition, if any.
    pub fn violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n();
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    let ab = self.contains(a, b);
                    let bc = self.contains(b, c);
                    let ac = self.contains(a, c);
                    if (ac && !ab && !bc) || (ab && bc && !ac) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.violation().is_none()
    }

    /// The unique `w` with `Inv(w) = self`.
    pub fn to_permutation(&self) -> Result<Permutation, PermError> {
        if let Some((a, b, c)) = self.violation() {
            return Err(PermError::InvalidInversionSet { a, b, c });
        }
        let n = self.n();
        // w(i) = 1 + #{j < i : (j,i) ∉ S} + #{j > i : (i,j) ∈ S}
        let word: Vec<usize> = (1..=n)
            .map(|i| {
                let before = (1..i).filter(|&j| !self.contains(j, i)).count();
                let after = (i + 1..=n).filter(|&j| self.contains(i, j)).count();
                1 + before + after
            })
            .collect();
        Permutation::new(&word)
    }
}

impl fmt::Debug for InversionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Checks both conditions on a code: for `i < j`, if `cᵢ > cⱼ` then
/// `#{i<k<j : c_k < cⱼ} ≤ cᵢ − cⱼ`, and if `cᵢ ≤ cⱼ` then `c_k ≥ cᵢ` for `i<k<j`.
/// Returns false for vectors that are not codes at all (`cᵢ > n−i`).
pub fn is_vexillary_code(c: &[usize]) -> bool {
    let n = c.len();
    if c.iter().enumerate().any(|(k, &ck)| ck > n - (k + 1)) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if c[i] > c[j] {
                let below = (i + 1..j).filter(|&k| c[k] < c[j]).count();
                if below > c[i] - c[j] {
                    return false;
                }
            } else if (i + 1..j).any(|k| c[k] < c[i]) {
                return false;
            }
        }
    }
    true
}

/// The permutation with a given code, when `cᵢ ≤ n−i` for all `i`.
pub fn permutation_from_code(c: &[usize]) -> Option<Permutation> {
    let n = c.len();
    let mut remaining: Vec<usize> = (1..=n).collect();
    let mut word = Vec::with_capacity(n);
    for &ck in c {
        if ck >= remaining.len() {
            return None;
        }
        word.push(remaining.remove(ck));
    }
    Permutation::new(&word).ok()
}
