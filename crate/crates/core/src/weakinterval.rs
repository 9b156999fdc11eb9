//! Initial intervals `[e,w]` of the weak order with their explicit γ-labels,
//! aggregated toggleability, the chain involution and reduced-word counts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{build_lattice, CoverGraph, FiniteLattice, GammaLabeling, LatticeError, Statistic};
use crate::perm::{Permutation, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeakError {
    #[error("{lower:?} is not covered by {upper:?}")]
    NotACover { lower: Permutation, upper: Permutation },
    #[error("({i},{j}) is not an inverse inversion of w")]
    PairNotInInverseInversions { i: usize, j: usize },
    #[error("invalid maximal chain: {0}")]
    InvalidChain(&'static str),
    #[error("{0:?} is not in the interval")]
    NotInInterval(Permutation),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The Grassmannian permutation `g((i,j),x)` with unique descent `j i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrassLabel {
    pub i: u8,
    pub j: u8,
    /// bit `v` set for each `v ∈ x`
    pub x: u32,
}

impl GrassLabel {
    pub fn new<I: IntoIterator<Item = usize>>(i: usize, j: usize, x: I) -> Self {
        let mut mask = 0u32;
        for v in x {
            assert!(i < v && v < j, "x must lie strictly between i and j");
            mask |= 1 << v;
        }
        GrassLabel { i: i as u8, j: j as u8, x: mask }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.i as usize, self.j as usize)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.x >> v & 1 == 1
    }

    pub fn x_values(&self) -> Vec<usize> {
        (self.i as usize + 1..self.j as usize).filter(|&v| self.contains(v)).collect()
    }

    /// One-line notation: `1..i−1`, `x`, `j`, `i`, the rest of `(i,j)`, `j+1..n`.
    pub fn to_permutation(&self, n: usize) -> Permutation {
        let (i, j) = self.pair();
        let mut word: Vec<usize> = (1..i).collect();
        word.extend(self.x_values());
        word.push(j);
        word.push(i);
        word.extend((i + 1..j).filter(|&v| !self.contains(v)));
        word.extend(j + 1..=n);
        Permutation::new(&word).expect("Grassmannian permutation")
    }

    /// Reads `g((i,j),x)` off a permutation with exactly one descent.
    pub fn from_grassmannian(g: &Permutation) -> Option<GrassLabel> {
        let mut descents = g.descents();
        let d = descents.next()?;
        if descents.next().is_some() {
            return None;
        }
        let (j, i) = (g.at(d), g.at(d + 1));
        let x = g.word()[..d - 1].iter().map(|&v| v as usize).filter(|&v| i < v && v < j);
        let label = GrassLabel::new(i, j, x);
        (label.to_permutation(g.n()) == *g).then_some(label)
    }
}

impl fmt::Debug for GrassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g(({},{}),{{", self.i, self.j)?;
        for (k, v) in self.x_values().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v)?;
        }
        f.write_str("})")
    }
}

/// `γ(u⋖w)` from one-line notation alone.
pub fn explicit_gamma_label(u: &Permutation, w: &Permutation) -> Result<GrassLabel, WeakError> {
    let not_cover = || WeakError::NotACover { lower: *u, upper: *w };
    if u.n() != w.n() {
        return Err(not_cover());
    }
    let k = w.descents().find(|&k| w.swap_positions(k) == *u).ok_or_else(not_cover)?;
    Ok(label_at_descent(w, k))
}

/// Label of the down-edge of `w` at descent `k`.
fn label_at_descent(w: &Permutation, k: usize) -> GrassLabel {
    let (i, j) = (w.at(k + 1), w.at(k));
    // v with i < v < j appearing left of i in w
    let pos_i = k + 1;
    let x = w.word()[..pos_i - 1].iter().map(|&v| v as usize).filter(|&v| i < v && v < j);
    GrassLabel::new(i, j, x)
}

/// The interval `[e,w]` with elements ordered by length, then one-line notation.
#[derive(Clone, Debug)]
pub struct WeakInterval {
    w: Permutation,
    elements: Vec<Permutation>,
    masks: Vec<u128>,
    index: BTreeMap<u128, usize>,
    gamma: GammaLabeling,
    down_grass: Vec<Vec<GrassLabel>>,
}

pub fn build_interval(w: &Permutation) -> WeakInterval {
    WeakInterval::new(w)
}

impl WeakInterval {
    pub fn new(w: &Permutation) -> Self {
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        let mut stack = alloc::vec![*w];
        seen.insert(*w);
        while let Some(u) = stack.pop() {
            for k in u.descents() {
                let v = u.swap_positions(k);
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        let lengths: BTreeMap<Permutation, usize> = elements.iter().map(|u| (*u, u.length())).collect();
        elements.sort_by(|a, b| lengths[a].cmp(&lengths[b]).then_with(|| a.cmp(b)));
        let masks: Vec<u128> = elements.iter().map(|u| u.inversion_set(Side::Inverse).mask()).collect();
        let index: BTreeMap<u128, usize> = masks.iter().enumerate().map(|(k, &m)| (m, k)).collect();

        let mut covers = Vec::new();
        for (hi, u) in elements.iter().enumerate() {
            for k in u.descents() {
                let lo = index[&u.swap_positions(k).inversion_set(Side::Inverse).mask()];
                covers.push((lo, hi));
            }
        }
        let labels = elements.iter().map(|u| u.to_compact_string()).collect();
        let graph = CoverGraph::new(labels, &covers).expect("weak order intervals are bounded posets");

        let n = w.n();
        let down_grass: Vec<Vec<GrassLabel>> = (0..elements.len())
            .map(|y| graph.down(y).iter().map(|&x| explicit_gamma_label(&elements[x], &elements[y]).unwrap()).collect())
            .collect();
        let gamma = GammaLabeling::from_fn(graph.clone(), |lo, hi| {
            let k = graph.down(hi).binary_search(&lo).unwrap();
            let g = down_grass[hi][k].to_permutation(n);
            index.get(&g.inversion_set(Side::Inverse).mask()).copied().ok_or(LatticeError::NotIrreducible(usize::MAX))
        })
        .expect("explicit labels are irreducible and distinct");
        WeakInterval { w: *w, elements, masks, index, gamma, down_grass }
    }

    pub fn w(&self) -> &Permutation {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &Permutation {
        &self.elements[k]
    }

    pub fn mask(&self, k: usize) -> u128 {
        self.masks[k]
    }

    pub fn index_of(&self, u: &Permutation) -> Option<usize> {
        if u.n() != self.w.n() {
            return None;
        }
        self.index.get(&u.inversion_set(Side::Inverse).mask()).copied()
    }

    pub fn contains(&self, u: &Permutation) -> bool {
        self.index_of(u).is_some()
    }

    pub fn graph(&self) -> &CoverGraph {
        self.gamma.graph()
    }

    /// The explicit γ-labeling, labels given as element indices.
    pub fn gamma(&self) -> &GammaLabeling {
        &self.gamma
    }

    /// The interval as a lattice with join/meet tables.
    pub fn lattice(&self) -> FiniteLattice {
        let g = self.graph();
        let covers: Vec<(usize, usize)> = g.edges().collect();
        build_lattice(g.labels().to_vec(), &covers).expect("weak order intervals are lattices")
    }

    pub fn grass_label(&self, lower: usize, upper: usize) -> Option<GrassLabel> {
        let k = self.graph().down(upper).binary_search(&lower).ok()?;
        Some(self.down_grass[upper][k])
    }

    /// `(lower, upper, label)` for every cover.
    pub fn labeled_edges(&self) -> impl Iterator<Item = (usize, usize, GrassLabel)> + '_ {
        (0..self.len()).flat_map(move |y| {
            self.graph().down(y).iter().zip(&self.down_grass[y]).map(move |(&x, &g)| (x, y, g))
        })
    }

    /// The label an irreducible element stands for.
    pub fn irreducible_label(&self, p: usize) -> Option<GrassLabel> {
        if !self.gamma.is_irreducible(p) {
            return None;
        }
        GrassLabel::from_grassmannian(&self.elements[p])
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<(), WeakError> {
        let n = self.w.n();
        if !(1 <= i && i < j && j <= n) || !self.w.inversion_set(Side::Inverse).contains(i, j) {
            return Err(WeakError::PairNotInInverseInversions { i, j });
        }
        Ok(())
    }

    /// Values of `T_{(i,j)}` on every element: `+1` if `i j` are adjacent,
    /// `−1` if `j i` are adjacent, else 0.
    pub fn pair_toggle_values(&self, i: usize, j: usize) -> Result<Vec<i64>, WeakError> {
        self.check_pair(i, j)?;
        Ok(self.elements.iter().map(|u| adjacent_pair_sign(u, i, j)).collect())
    }

    /// `(T⁺_{(i,j)}, T⁻_{(i,j)}, T_{(i,j)})` summed over all `g((i,j),x)` in `Irr([e,w])`.
    pub fn aggregated_toggleability(&self, i: usize, j: usize) -> Result<(Statistic, Statistic, Statistic), WeakError> {
        let t = self.pair_toggle_values(i, j)?;
        let plus = Statistic::from_integers(t.iter().map(|&v| (v == 1) as i64));
        let minus = Statistic::from_integers(t.iter().map(|&v| (v == -1) as i64));
        Ok((plus, minus, Statistic::from_integers(t)))
    }

    /// Checks that `chain` runs `e ⋖ … ⋖ w` through covers.
    pub fn check_chain(&self, chain: &[Permutation]) -> Result<(), WeakError> {
        if chain.first().is_none_or(|u| !u.is_identity()) {
            return Err(WeakError::InvalidChain("does not start at the identity"));
        }
        if chain.last() != Some(&self.w) {
            return Err(WeakError::InvalidChain("does not end at w"));
        }
        for pair in chain.windows(2) {
            if explicit_gamma_label(&pair[0], &pair[1]).is_err() {
                return Err(WeakError::InvalidChain("consecutive elements are not a cover"));
            }
        }
        Ok(())
    }

    /// Depth-first enumeration of maximal chains as element-index sequences.
    pub fn maximal_chains(&self) -> MaxChains<'_> {
        let top = self.graph().top();
        MaxChains { iv: self, stack: alloc::vec![(top, 0)], path: alloc::vec![top], done: false }
    }

    /// The chain involution `τ_{(i,j)}`.
    pub fn chain_involution(&self, chain: &[Permutation], i: usize, j: usize) -> Result<Vec<Permutation>, WeakError> {
        self.check_pair(i, j)?;
        self.check_chain(chain)?;
        let t: Vec<i64> = chain.iter().map(|u| adjacent_pair_sign(u, i, j)).collect();
        // k⁻ descending, k⁺ ascending
        let minus: Vec<usize> = (0..t.len()).rev().filter(|&k| t[k] == -1).collect();
        let plus: Vec<usize> = (0..t.len()).filter(|&k| t[k] == 1).collect();
        let (a, b) = (minus.len(), plus.len());
        assert!(a >= 1 && b >= 1, "every maximal chain adds and carries (i,j)");
        let s = |u: &Permutation| u.swap_values(i, j);
        let out: Vec<Permutation> = if a > b {
            let (ka, kb) = (minus[a - 1], minus[b - 1]);
            let mut out: Vec<Permutation> = chain[..ka].to_vec();
            out.extend(chain[ka + 1..=kb].iter().map(s));
            out.extend_from_slice(&chain[kb..]);
            out
        } else if a < b {
            let (ka, kb) = (plus[a - 1], plus[b - 1]);
            let mut out: Vec<Permutation> = chain[..=ka].to_vec();
            out.extend(chain[ka..kb].iter().map(s));
            out.extend_from_slice(&chain[kb + 1..]);
            out
        } else {
            chain.to_vec()
        };
        self.check_chain(&out)?;
        Ok(out)
    }
}

/// `+1` if `i` sits immediately left of `j` in `u`, `−1` if `j` sits immediately left of `i`.
pub(crate) fn adjacent_pair_sign(u: &Permutation, i: usize, j: usize) -> i64 {
    let w = u.word();
    for k in 0..w.len() - 1 {
        let (x, y) = (w[k] as usize, w[k + 1] as usize);
        if x == i && y == j {
            return 1;
        }
        if x == j && y == i {
            return -1;
        }
    }
    0
}

/// Lazy depth-first walk over maximal chains, from the top down.
pub struct MaxChains<'a> {
    iv: &'a WeakInterval,
    stack: Vec<(usize, usize)>,
    path: Vec<usize>,
    done: bool,
}

impl Iterator for MaxChains<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let g = self.iv.graph();
        loop {
            let &(node, child) = self.stack.last()?;
            let downs = g.down(node);
            if downs.is_empty() {
                let mut chain = self.path.clone();
                chain.reverse();
                self.backtrack();
                return Some(chain);
            }
            if child < downs.len() {
                self.stack.last_mut().unwrap().1 += 1;
                let next = downs[child];
                self.stack.push((next, 0));
                self.path.push(next);
            } else {
                self.backtrack();
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}

impl MaxChains<'_> {
    fn backtrack(&mut self) {
        self.stack.pop();
        self.path.pop();
    }
}

/// Number of reduced words of `w`, by dynamic programming over `[e,w]`.
pub fn reduced_word_count(w: &Permutation) -> BigUint {
    let mut memo: BTreeMap<Permutation, BigUint> = BTreeMap::new();
    count_words(w, &mut memo)
}

fn count_words(u: &Permutation, memo: &mut BTreeMap<Permutation, BigUint>) -> BigUint {
    if u.is_identity() {
        return BigUint::one();
    }
    if let Some(c) = memo.get(u) {
        return c.clone();
    }
    let mut total = BigUint::zero();
    for k in u.descents() {
        total += count_words(&u.swap_positions(k), memo);
    }
    memo.insert(*u, total.clone());
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::gamma_labeling;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn grass_labels() {
        assert_eq!(GrassLabel::new(1, 3, [2]).to_permutation(3), p("231"));
        assert_eq!(GrassLabel::new(1, 3, []).to_permutation(3), p("312"));
        assert_eq!(GrassLabel::from_grassmannian(&p("231")), Some(GrassLabel::new(1, 3, [2])));
        assert_eq!(GrassLabel::from_grassmannian(&p("321")), None);
        assert_eq!(alloc::format!("{:?}", GrassLabel::new(2, 7, [3, 5])), "g((2,7),{3,5})");
    }

    #[test]
    fn labels_on_s3() {
        let cases = [
            ("123", "213", GrassLabel::new(1, 2, [])),
            ("123", "132", GrassLabel::new(2, 3, [])),
            ("213", "231", GrassLabel::new(1, 3, [2])),
            ("132", "312", GrassLabel::new(1, 3, [])),
            ("231", "321", GrassLabel::new(2, 3, [])),
            ("312", "321", GrassLabel::new(1, 2, [])),
        ];
        for (u, w, g) in cases {
            assert_eq!(explicit_gamma_label(&p(u), &p(w)).unwrap(), g, "{} < {}", u, w);
        }
        assert!(explicit_gamma_label(&p("123"), &p("321")).is_err());
        assert_eq!(explicit_gamma_label(&p("1234"), &p("1324")).unwrap(), GrassLabel::new(2, 3, []));
    }

    #[test]
    fn interval_sizes() {
        assert_eq!(build_interval(&Permutation::identity(3)).len(), 1);
        let iv = build_interval(&p("3142"));
        let names: Vec<_> = iv.elements().iter().map(|u| u.to_compact_string()).collect();
        assert_eq!(names, ["1234", "1324", "1342", "3124", "3142"]);
        assert_eq!(build_interval(&p("32514")).len(), 14);
        assert_eq!(build_interval(&p("31542")).len(), 14);
        assert_eq!(build_interval(&p("314625")).len(), 12);
        assert_eq!(build_interval(&p("53124")).len(), 15);
    }

    #[test]
    fn explicit_matches_generic_on_s3() {
        let iv = build_interval(&Permutation::longest(3));
        let generic = gamma_labeling(&iv.lattice()).unwrap();
        for (x, y, _) in iv.labeled_edges() {
            assert_eq!(generic.label(x, y), iv.gamma().label(x, y));
        }
    }

    #[test]
    fn aggregated_example() {
        let iv = build_interval(&p("53124"));
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &q in iv.gamma().irreducibles() {
            let g = iv.irreducible_label(q).unwrap();
            if g.pair() != (2, 5) {
                continue;
            }
            let t = iv.gamma().t(q).unwrap();
            let support: Vec<_> =
                (0..iv.len()).filter(|&y| !num_traits::Zero::is_zero(t.get(y))).map(|y| iv.element(y).to_compact_string()).collect();
            if g.x == 0 {
                a = support;
            } else {
                assert_eq!(g.x_values(), [3]);
                b = support;
            }
        }
        a.sort();
        b.sort();
        assert_eq!(a, ["12534", "15234"]);
        assert_eq!(b, ["13254", "13524", "31254", "31524"]);
        assert_eq!(iv.pair_toggle_values(1, 4), Err(WeakError::PairNotInInverseInversions { i: 1, j: 4 }));
    }

    #[test]
    fn involution_example() {
        let iv = build_interval(&p("53124"));
        let c: Vec<Permutation> = ["12345", "12354", "13254", "31254", "31524", "35124", "53124"].iter().map(|s| p(s)).collect();
        let expected: Vec<Permutation> =
            ["12345", "12354", "13254", "13524", "15324", "51324", "53124"].iter().map(|s| p(s)).collect();
        let t = |ch: &[Permutation]| ch.iter().map(|u| adjacent_pair_sign(u, 1, 3)).sum::<i64>();
        assert_eq!(t(&c), -2);
        let image = iv.chain_involution(&c, 1, 3).unwrap();
        assert_eq!(image, expected);
        assert_eq!(t(&image), 2);
        assert_eq!(iv.chain_involution(&image, 1, 3).unwrap(), c);
        assert!(iv.chain_involution(&c[1..], 1, 3).is_err());
    }

    #[test]
    fn word_counts() {
        assert_eq!(reduced_word_count(&Permutation::longest(3)), BigUint::from(2u32));
        assert_eq!(reduced_word_count(&p("35142")), BigUint::from(16u32));
        assert_eq!(reduced_word_count(&Permutation::identity(4)), BigUint::one());
        let iv = build_interval(&p("35142"));
        assert_eq!(iv.maximal_chains().count(), 16);
        assert_eq!(build_interval(&Permutation::identity(2)).maximal_chains().count(), 1);
    }
}
