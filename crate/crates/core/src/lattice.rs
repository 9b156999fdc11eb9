//! Finite lattices from cover relations: join/meet tables, the γ-labeling of a
//! semidistributive lattice, toggles, rowmotion, statistics and distributions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::shape::{Cell, Partition, SkewShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("invalid cover ({lower}, {upper})")]
    InvalidCover { lower: usize, upper: usize },
    #[error("cover relation has a cycle")]
    Cyclic,
    #[error("no unique minimum")]
    NoUniqueMinimum,
    #[error("no unique maximum")]
    NoUniqueMaximum,
    #[error("cover ({lower}, {upper}) is implied by a longer path")]
    NotTransitiveReduction { lower: usize, upper: usize },
    #[error("elements {x} and {y} have no {which}")]
    NotALattice { x: usize, y: usize, which: &'static str },
    #[error("cover ({lower}, {upper}) has several minimal joining elements")]
    NotSemidistributive { lower: usize, upper: usize },
    #[error("element {0} is not join-irreducible")]
    NotIrreducible(usize),
    #[error("label {label} appears twice around element {element}")]
    LabelingConflict { element: usize, label: usize },
    #[error("labels below element {0} do not join to it")]
    NotCanonical(usize),
    #[error("no element has down-labels equal to the up-labels of {0}")]
    LabelingMismatch(usize),
    #[error("orbit is empty")]
    EmptyOrbit,
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weights must be nonnegative and sum to 1")]
    BadDistribution,
}

/// A finite bounded poset given by its Hasse diagram.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    labels: Vec<String>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    topo: Vec<usize>,
    upsets: Vec<FixedBitSet>,
    downsets: Vec<FixedBitSet>,
}

impl CoverGraph {
    pub fn new(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(lo, hi) in covers {
            if lo >= n || hi >= n || lo == hi || up[lo].contains(&hi) {
                return Err(LatticeError::InvalidCover { lower: lo, upper: hi });
            }
            up[lo].push(hi);
            down[hi].push(lo);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
        }

        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&x| indeg[x] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = stack.pop() {
            topo.push(x);
            for &y in up[x].iter().rev() {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if topo.len() != n {
            return Err(LatticeError::Cyclic);
        }
        let minima: Vec<usize> = (0..n).filter(|&x| down[x].is_empty()).collect();
        let maxima: Vec<usize> = (0..n).filter(|&x| up[x].is_empty()).collect();
        if minima.len() != 1 {
            return Err(LatticeError::NoUniqueMinimum);
        }
        if maxima.len() != 1 {
            return Err(LatticeError::NoUniqueMaximum);
        }

        let mut upsets = vec![FixedBitSet::with_capacity(n); n];
        for &x in topo.iter().rev() {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &y in &up[x] {
                s.union_with(&upsets[y]);
            }
            upsets[x] = s;
        }
        let mut downsets = vec![FixedBitSet::with_capacity(n); n];
        for &x in &topo {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &y in &down[x] {
                s.union_with(&downsets[y]);
            }
            downsets[x] = s;
        }
        for x in 0..n {
            for &y in &up[x] {
                if up[x].iter().any(|&z| z != y && upsets[z].contains(y)) {
                    return Err(LatticeError::NotTransitiveReduction { lower: x, upper: y });
                }
            }
        }
        Ok(CoverGraph { labels, up, down, bottom: minima[0], top: maxima[0], topo, upsets, downsets })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn up(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    pub fn down(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// A linear extension.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.upsets[x].contains(y)
    }

    pub fn upset(&self, x: usize) -> &FixedBitSet {
        &self.upsets[x]
    }

    pub fn downset(&self, x: usize) -> &FixedBitSet {
        &self.downsets[x]
    }

    /// Cover edges `(lower, upper)` ordered by lower then upper.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |x| self.up[x].iter().map(move |&y| (x, y)))
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Elements covering exactly one element.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.down[x].len() == 1).collect()
    }

    /// Down-degree as a statistic.
    pub fn ddeg(&self) -> Statistic {
        Statistic::from_integers(self.down.iter().map(|d| d.len() as i64))
    }

    /// The dual poset, keeping element indices.
    pub fn dual(&self) -> CoverGraph {
        let covers: Vec<(usize, usize)> = self.edges().map(|(x, y)| (y, x)).collect();
        CoverGraph::new(self.labels.clone(), &covers).expect("dual of a bounded poset")
    }
}

/// A lattice with cached join and meet tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    graph: CoverGraph,
    join: Vec<u32>,
    meet: Vec<u32>,
}

/// Validates covers and builds join/meet tables.
pub fn build_lattice(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<FiniteLattice, LatticeError> {
    FiniteLattice::from_graph(CoverGraph::new(labels, covers)?)
}

impl FiniteLattice {
    pub fn from_graph(graph: CoverGraph) -> Result<Self, LatticeError> {
        let n = graph.len();
        let mut topo_pos = vec![0usize; n];
        for (k, &x) in graph.topo.iter().enumerate() {
            topo_pos[x] = k;
        }
        let table = |sets: &[FixedBitSet], pick_first: bool, which: &'static str| -> Result<Vec<u32>, LatticeError> {
            let mut t = vec![0u32; n * n];
            for x in 0..n {
                for y in x..n {
                    let mut common = sets[x].clone();
                    common.intersect_with(&sets[y]);
                    let best = common.ones().min_by_key(|&z| if pick_first { topo_pos[z] } else { n - topo_pos[z] });
                    let z = match best {
                        Some(z) if common.is_subset(&sets[z]) => z,
                        _ => return Err(LatticeError::NotALattice { x, y, which }),
                    };
                    t[x * n + y] = z as u32;
                    t[y * n + x] = z as u32;
                }
            }
            Ok(t)
        };
        let join = table(&graph.upsets, true, "join")?;
        let meet = table(&graph.downsets, false, "meet")?;
        Ok(FiniteLattice { graph, join, meet })
    }

    pub fn graph(&self) -> &CoverGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y] as usize
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y] as usize
    }
}

/// The γ-labeling: every cover edge carries a join-irreducible.
#[derive(Clone, Debug)]
pub struct GammaLabeling {
    graph: CoverGraph,
    down_labels: Vec<Vec<usize>>,
    up_labels: Vec<Vec<usize>>,
    irreducibles: Vec<usize>,
}

/// `γ(x⋖y) = min{z : x∨z = y}`, i.e. the unique minimal element of `{z ≤ y} ∖ {z ≤ x}`.
pub fn gamma_labeling(l: &FiniteLattice) -> Result<GammaLabeling, LatticeError> {
    let g = &l.graph;
    let gl = GammaLabeling::from_fn(g.clone(), |x, y| {
        let mut s = g.downsets[y].clone();
        s.difference_with(&g.downsets[x]);
        let mut minimal = s.ones().filter(|&z| {
            let mut below = g.downsets[z].clone();
            below.intersect_with(&s);
            below.count_ones(..) == 1
        });
        match (minimal.next(), minimal.next()) {
            (Some(z), None) => Ok(z),
            _ => Err(LatticeError::NotSemidistributive { lower: x, upper: y }),
        }
    })?;
    gl.check_canonical_joins(l)?;
    Ok(gl)
}

impl GammaLabeling {
    /// Labels every edge with `label(lower, upper)` and checks that labels are
    /// irreducible and distinct around each element.
    pub fn from_fn<F>(graph: CoverGraph, mut label: F) -> Result<Self, LatticeError>
    where
        F: FnMut(usize, usize) -> Result<usize, LatticeError>,
    {
        let n = graph.len();
        let mut up_labels: Vec<Vec<usize>> = graph.up.iter().map(|u| Vec::with_capacity(u.len())).collect();
        let mut down_labels: Vec<Vec<usize>> = graph.down.iter().map(|d| vec![usize::MAX; d.len()]).collect();
        for x in 0..n {
            for &y in &graph.up[x] {
                let p = label(x, y)?;
                if p >= n || graph.down[p].len() != 1 {
                    return Err(LatticeError::NotIrreducible(p));
                }
                up_labels[x].push(p);
                let slot = graph.down[y].binary_search(&x).unwrap();
                down_labels[y][slot] = p;
            }
        }
        for y in 0..n {
            let mut seen: Vec<usize> = up_labels[y].iter().chain(&down_labels[y]).copied().collect();
            seen.sort_unstable();
            if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
                return Err(LatticeError::LabelingConflict { element: y, label: w[0] });
            }
        }
        let irreducibles = graph.join_irreducibles();
        Ok(GammaLabeling { graph, down_labels, up_labels, irreducibles })
    }

    /// `y` is the join of the labels on its down-edges, for every `y`.
    pub fn check_canonical_joins(&self, l: &FiniteLattice) -> Result<(), LatticeError> {
        for y in 0..self.graph.len() {
            let j = self.down_labels[y].iter().fold(self.graph.bottom, |acc, &p| l.join(acc, p));
            if j != y {
                return Err(LatticeError::NotCanonical(y));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &CoverGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Join-irreducibles in increasing index order.
    pub fn irreducibles(&self) -> &[usize] {
        &self.irreducibles
    }

    pub fn is_irreducible(&self, p: usize) -> bool {
        self.irreducibles.binary_search(&p).is_ok()
    }

    pub fn label(&self, lower: usize, upper: usize) -> Option<usize> {
        let k = self.graph.up[lower].binary_search(&upper).ok()?;
        Some(self.up_labels[lower][k])
    }

    /// Labels on the down-edges of `y`, aligned with `graph().down(y)`.
    pub fn down_labels(&self, y: usize) -> &[usize] {
        &self.down_labels[y]
    }

    /// Labels on the up-edges of `y`, aligned with `graph().up(y)`.
    pub fn up_labels(&self, y: usize) -> &[usize] {
        &self.up_labels[y]
    }

    /// `D^γ(y)`, sorted.
    pub fn down_set(&self, y: usize) -> Vec<usize> {
        let mut v = self.down_labels[y].clone();
        v.sort_unstable();
        v
    }

    /// `U^γ(y)`, sorted.
    pub fn up_set(&self, y: usize) -> Vec<usize> {
        let mut v = self.up_labels[y].clone();
        v.sort_unstable();
        v
    }

    fn check_irreducible(&self, p: usize) -> Result<(), LatticeError> {
        if self.is_irreducible(p) {
            Ok(())
        } else {
            Err(LatticeError::NotIrreducible(p))
        }
    }

    /// `τ_p(y)`: move along the `p`-labeled edge at `y`, if there is one.
    pub fn toggle(&self, p: usize, y: usize) -> Result<usize, LatticeError> {
        self.check_irreducible(p)?;
        if let Some(k) = self.down_labels[y].iter().position(|&q| q == p) {
            return Ok(self.graph.down[y][k]);
        }
        if let Some(k) = self.up_labels[y].iter().position(|&q| q == p) {
            return Ok(self.graph.up[y][k]);
        }
        Ok(y)
    }

    pub fn t_plus(&self, p: usize) -> Result<Statistic, LatticeError> {
        self.check_irreducible(p)?;
        Ok(Statistic::from_integers(self.up_labels.iter().map(|u| u.contains(&p) as i64)))
    }

    pub fn t_minus(&self, p: usize) -> Result<Statistic, LatticeError> {
        self.check_irreducible(p)?;
        Ok(Statistic::from_integers(self.down_labels.iter().map(|d| d.contains(&p) as i64)))
    }

    /// `T_p = T⁺_p − T⁻_p`.
    pub fn t(&self, p: usize) -> Result<Statistic, LatticeError> {
        self.check_irreducible(p)?;
        Ok(Statistic::from_integers(self.t_values(p)))
    }

    pub(crate) fn t_values(&self, p: usize) -> impl Iterator<Item = i64> + '_ {
        (0..self.len()).map(move |y| self.up_labels[y].contains(&p) as i64 - self.down_labels[y].contains(&p) as i64)
    }

    pub fn ddeg(&self) -> Statistic {
        self.graph.ddeg()
    }

    /// `E(μ; T_p) = 0` for every irreducible `p`.
    pub fn is_toggle_symmetric(&self, mu: &Distribution) -> Result<bool, LatticeError> {
        check_dim(self.len(), mu.len())?;
        for &p in &self.irreducibles {
            let mut e = BigRational::zero();
            for (y, t) in self.t_values(p).enumerate() {
                if t != 0 {
                    e += &mu.weights[y] * BigRational::from_integer(BigInt::from(t));
                }
            }
            if !e.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rowmotion as a map: `row(y)` is the `x` with `D^γ(x) = U^γ(y)`.
    pub fn rowmotion_map(&self) -> Result<Vec<usize>, LatticeError> {
        let by_down: BTreeMap<Vec<usize>, usize> = (0..self.len()).map(|x| (self.down_set(x), x)).collect();
        (0..self.len()).map(|y| by_down.get(&self.up_set(y)).copied().ok_or(LatticeError::LabelingMismatch(y))).collect()
    }

    pub fn rowmotion(&self, y: usize) -> Result<usize, LatticeError> {
        let target = self.up_set(y);
        (0..self.len()).find(|&x| self.down_set(x) == target).ok_or(LatticeError::LabelingMismatch(y))
    }

    /// Rowmotion orbits, each starting at its smallest element and listed in order.
    pub fn rowmotion_orbits(&self) -> Result<Vec<Vec<usize>>, LatticeError> {
        Ok(orbits_of(&self.rowmotion_map()?))
    }
}

/// Cycles of a permutation of `0..n`, each starting at its smallest element.
pub fn orbits_of(map: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; map.len()];
    let mut out = Vec::new();
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut y = start;
        while !seen[y] {
            seen[y] = true;
            orbit.push(y);
            y = map[y];
        }
        assert_eq!(y, start, "map is not a bijection");
        out.push(orbit);
    }
    out
}

/// Least common multiple of the orbit sizes.
pub fn order_of(orbits: &[Vec<usize>]) -> BigUint {
    orbits.iter().fold(BigUint::one(), |acc, o| acc.lcm(&BigUint::from(o.len())))
}

fn check_dim(expected: usize, found: usize) -> Result<(), LatticeError> {
    if expected == found {
        Ok(())
    } else {
        Err(LatticeError::DimensionMismatch { expected, found })
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An exact rational function on lattice elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statistic {
    values: Vec<BigRational>,
}

impl Statistic {
    pub fn new(values: Vec<BigRational>) -> Self {
        Statistic { values }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        Statistic { values: values.into_iter().map(integer).collect() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        Statistic { values: vec![c; n] }
    }

    pub fn zero(n: usize) -> Self {
        Statistic::constant(n, BigRational::zero())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, y: usize) -> &BigRational {
        &self.values[y]
    }

    /// `self + c·other`.
    pub fn add_scaled(&mut self, c: &BigRational, other: &Statistic) {
        assert_eq!(self.len(), other.len());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn plus(&self, other: &Statistic) -> Statistic {
        let mut out = self.clone();
        out.add_scaled(&BigRational::one(), other);
        out
    }

    pub fn minus(&self, other: &Statistic) -> Statistic {
        let mut out = self.clone();
        out.add_scaled(&-BigRational::one(), other);
        out
    }

    pub fn scaled(&self, c: &BigRational) -> Statistic {
        Statistic { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// Exact probability weights on lattice elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<BigRational>,
}

impl Distribution {
    pub fn from_weights(weights: Vec<BigRational>) -> Result<Self, LatticeError> {
        let total: BigRational = weights.iter().sum();
        if weights.iter().any(Signed::is_negative) || !total.is_one() {
            return Err(LatticeError::BadDistribution);
        }
        Ok(Distribution { weights })
    }

    /// Normalizes nonnegative integer counts.
    pub fn from_counts(counts: &[BigUint]) -> Result<Self, LatticeError> {
        let total: BigUint = counts.iter().sum();
        if total.is_zero() {
            return Err(LatticeError::BadDistribution);
        }
        let total = BigInt::from(total);
        Ok(Distribution {
            weights: counts.iter().map(|c| BigRational::new(BigInt::from(c.clone()), total.clone())).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Distribution { weights: vec![rational(1, n as i64); n] }
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut weights = vec![BigRational::zero(); n];
        weights[x] = BigRational::one();
        Distribution { weights }
    }

    /// Uniform on `orbit`.
    pub fn orbit_uniform(n: usize, orbit: &[usize]) -> Result<Self, LatticeError> {
        if orbit.is_empty() {
            return Err(LatticeError::EmptyOrbit);
        }
        let mut weights = vec![BigRational::zero(); n];
        let w = rational(1, orbit.len() as i64);
        for &x in orbit {
            weights[x] = w.clone();
        }
        Ok(Distribution { weights })
    }

    /// Weight of `x` proportional to the number of maximal chains through `x`.
    pub fn maxchain(g: &CoverGraph) -> Self {
        Distribution::from_counts(&chains_through(g)).expect("a bounded poset has a maximal chain")
    }

    /// Weight of `p` proportional to the number of multichains `x₀ ≤ … ≤ x_m` containing `p`.
    pub fn multichain(g: &CoverGraph, m: usize) -> Self {
        Distribution::from_counts(&multichains_containing(g, m)).expect("multichains exist")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn get(&self, x: usize) -> &BigRational {
        &self.weights[x]
    }
}

/// Saturated chains bottom→x times saturated chains x→top.
pub fn chains_through(g: &CoverGraph) -> Vec<BigUint> {
    let n = g.len();
    let mut below = vec![BigUint::zero(); n];
    let mut above = vec![BigUint::zero(); n];
    below[g.bottom] = BigUint::one();
    for &x in &g.topo {
        for &y in &g.down[x] {
            let v = below[y].clone();
            below[x] += v;
        }
    }
    above[g.top] = BigUint::one();
    for &x in g.topo.iter().rev() {
        for &y in &g.up[x] {
            let v = above[y].clone();
            above[x] += v;
        }
    }
    below.into_iter().zip(above).map(|(b, a)| b * a).collect()
}

/// Number of maximal chains.
pub fn maximal_chain_count(g: &CoverGraph) -> BigUint {
    chains_through(g).swap_remove(g.bottom)
}

/// For every `p`, the number of multichains of length `m` containing `p`,
/// split by the first position where `p` occurs.
pub fn multichains_containing(g: &CoverGraph, m: usize) -> Vec<BigUint> {
    let n = g.len();
    // ending[t][x]: multichains x₀ ≤ … ≤ x_t = x; starting[t][x]: x = x₀ ≤ … ≤ x_t
    let mut ending = vec![vec![BigUint::one(); n]];
    let mut starting = vec![vec![BigUint::one(); n]];
    for t in 1..=m {
        let prev_e = &ending[t - 1];
        let prev_s = &starting[t - 1];
        let e: Vec<BigUint> = (0..n).map(|x| g.downsets[x].ones().map(|y| &prev_e[y]).sum()).collect();
        let s: Vec<BigUint> = (0..n).map(|x| g.upsets[x].ones().map(|y| &prev_s[y]).sum()).collect();
        ending.push(e);
        starting.push(s);
    }
    (0..n)
        .map(|p| {
            let mut total = starting[m][p].clone();
            for t in 1..=m {
                let strictly_below: BigUint =
                    g.downsets[p].ones().filter(|&y| y != p).map(|y| &ending[t - 1][y]).sum();
                total += strictly_below * &starting[m - t][p];
            }
            total
        })
        .collect()
}

/// `E(μ; f)`.
pub fn expectation(mu: &Distribution, f: &Statistic) -> Result<BigRational, LatticeError> {
    check_dim(mu.len(), f.len())?;
    let mut e = BigRational::zero();
    for (w, v) in mu.weights.iter().zip(&f.values) {
        if !w.is_zero() && !v.is_zero() {
            e += w * v;
        }
    }
    Ok(e)
}

/// The interval `[ν, λ]` of Young's lattice, i.e. order ideals of the boxes of `λ/ν`.
#[derive(Clone, Debug)]
pub struct YoungInterval {
    shape: SkewShape,
    elements: Vec<Partition>,
    index: BTreeMap<Partition, usize>,
    lattice: FiniteLattice,
}

pub fn young_interval(sigma: &SkewShape) -> YoungInterval {
    let mut elements = Partition::between(sigma.inner(), sigma.outer());
    elements.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    let index: BTreeMap<Partition, usize> = elements.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
    let mut covers = Vec::new();
    for (k, kappa) in elements.iter().enumerate() {
        for i in 1..=sigma.outer().len() {
            if let Some(next) = add_box(kappa, sigma, i) {
                covers.push((k, index[&next]));
            }
        }
    }
    let labels = elements.iter().map(|p| p.to_string()).collect();
    let lattice = build_lattice(labels, &covers).expect("intervals of Young's lattice are lattices");
    YoungInterval { shape: sigma.clone(), elements, index, lattice }
}

fn add_box(kappa: &Partition, sigma: &SkewShape, row: usize) -> Option<Partition> {
    let cur = kappa.part(row);
    if cur >= sigma.outer().part(row) || (row > 1 && kappa.part(row - 1) <= cur) {
        return None;
    }
    let mut parts: Vec<u32> = (1..=sigma.outer().len()).map(|i| kappa.part(i)).collect();
    parts[row - 1] += 1;
    Some(Partition::new(parts).unwrap())
}

fn remove_box(kappa: &Partition, sigma: &SkewShape, row: usize) -> Option<Partition> {
    let cur = kappa.part(row);
    if cur <= sigma.inner().part(row) || kappa.part(row + 1) >= cur {
        return None;
    }
    let mut parts: Vec<u32> = (1..=sigma.outer().len()).map(|i| kappa.part(i)).collect();
    parts[row - 1] -= 1;
    Some(Partition::new(parts).unwrap())
}

impl YoungInterval {
    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn graph(&self) -> &CoverGraph {
        self.lattice.graph()
    }

    /// The box added along the cover `lower ⋖ upper`.
    pub fn added_box(&self, lower: usize, upper: usize) -> Cell {
        let (a, b) = (&self.elements[lower], &self.elements[upper]);
        let row = (1..=self.shape.outer().len()).find(|&i| a.part(i) != b.part(i)).unwrap();
        (row as u32, b.part(row))
    }

    /// Boxes of the shape, in a linear extension of the box poset.
    pub fn boxes(&self) -> Vec<Cell> {
        let mut boxes: Vec<Cell> = self.shape.diagram().boxes().iter().copied().collect();
        boxes.sort_by_key(|&(i, j)| (i + j, i));
        boxes
    }

    fn in_shape(&self, (i, j): Cell) -> bool {
        i >= 1 && j >= 1 && self.shape.inner().part(i as usize) < j && j <= self.shape.outer().part(i as usize)
    }

    /// Rowmotion on order ideals: the ideal generated by the minimal boxes outside `κ`.
    pub fn ideal_rowmotion(&self, idx: usize) -> usize {
        let kappa = &self.elements[idx];
        let outside = |c: Cell| self.in_shape(c) && c.1 > kappa.part(c.0 as usize);
        let minimal: Vec<Cell> = self
            .boxes()
            .into_iter()
            .filter(|&(i, j)| outside((i, j)) && !outside((i - 1, j)) && !outside((i, j.wrapping_sub(1))))
            .collect();
        let parts: Vec<u32> = (1..=self.shape.outer().len() as u32)
            .map(|i| {
                let generated = minimal.iter().filter(|q| q.0 >= i).map(|q| q.1).max().unwrap_or(0);
                let generated = generated.min(self.shape.outer().part(i as usize));
                generated.max(self.shape.inner().part(i as usize))
            })
            .collect();
        self.index[&Partition::new(parts).unwrap()]
    }

    /// Order-ideal toggle at a box.
    pub fn ideal_toggle(&self, cell: Cell, idx: usize) -> usize {
        let kappa = &self.elements[idx];
        let (i, j) = cell;
        let next = if kappa.part(i as usize) + 1 == j {
            add_box(kappa, &self.shape, i as usize)
        } else if kappa.part(i as usize) == j {
            remove_box(kappa, &self.shape, i as usize)
        } else {
            None
        };
        next.map_or(idx, |p| self.index[&p])
    }

    /// `τ_{p₁} ∘ τ_{p₂} ∘ ⋯ ∘ τ_{p_N}` along the linear extension `p₁, …, p_N`.
    pub fn toggle_rowmotion(&self, idx: usize) -> usize {
        self.boxes().into_iter().rev().fold(idx, |y, cell| self.ideal_toggle(cell, y))
    }
}
