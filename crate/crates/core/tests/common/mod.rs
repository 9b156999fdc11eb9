//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use weakcde_core::cde::{tcde_check, TcdeOutcome};
use weakcde_core::lattice::{build_lattice, expectation, CoverGraph, Distribution, FiniteLattice, GammaLabeling};
use weakcde_core::perm::Permutation;
use weakcde_core::shape::Cell;

pub fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The 12-element semidistributive lattice that is tCDE but not CDE.
pub fn twelve_element_lattice() -> FiniteLattice {
    let edges = [
        (1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (4, 7), (4, 8), (5, 8),
        (5, 9), (6, 9), (7, 10), (8, 10), (8, 11), (9, 11), (10, 12), (11, 12),
    ];
    let labels = (1..=12).map(|k| k.to_string()).collect();
    let covers: Vec<_> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    build_lattice(labels, &covers).unwrap()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}

/// Reads rows `1..` of a diagram as `(outer, inner)` if each row is a nonempty
/// interval and both endpoint sequences weakly decrease.
fn as_skew(rows: &[BTreeSet<u32>]) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    for cols in rows {
        let lo = *cols.iter().next()?;
        let hi = *cols.iter().next_back()?;
        if (hi - lo + 1) as usize != cols.len() {
            return None;
        }
        outer.push(hi);
        inner.push(lo - 1);
    }
    let dec = |v: &[u32]| v.windows(2).all(|w| w[0] >= w[1]);
    (dec(&outer) && dec(&inner)).then_some((outer, inner))
}

/// Every skew shape (as `(outer, inner)` with trailing zeros trimmed) reachable
/// from `boxes` by permuting its occupied rows and columns.
pub fn brute_force_skew_shapes(boxes: &BTreeSet<Cell>) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let rows: Vec<u32> = boxes.iter().map(|b| b.0).collect::<BTreeSet<_>>().into_iter().collect();
    let cols: Vec<u32> = boxes.iter().map(|b| b.1).collect::<BTreeSet<_>>().into_iter().collect();
    let mut found = BTreeSet::new();
    let col_perms = permutations(cols.len());
    for rp in permutations(rows.len()) {
        for cp in &col_perms {
            let mut grid: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); rows.len()];
            for &(r, c) in boxes {
                let ri = rows.iter().position(|&x| x == r).unwrap();
                let ci = cols.iter().position(|&x| x == c).unwrap();
                grid[rp[ri]].insert(cp[ci] as u32 + 1);
            }
            if let Some((outer, mut inner)) = as_skew(&grid) {
                while inner.last() == Some(&0) {
                    inner.pop();
                }
                found.insert((outer, inner));
            }
        }
    }
    found
}

/// Whether some row and column permutation turns `boxes` into a skew shape,
/// stopping at the first one found.
pub fn brute_force_is_skew(boxes: &BTreeSet<Cell>) -> bool {
    let rows: Vec<u32> = boxes.iter().map(|b| b.0).collect::<BTreeSet<_>>().into_iter().collect();
    let cols: Vec<u32> = boxes.iter().map(|b| b.1).collect::<BTreeSet<_>>().into_iter().collect();
    let col_perms = permutations(cols.len());
    permutations(rows.len()).iter().any(|rp| {
        col_perms.iter().any(|cp| {
            let mut grid: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); rows.len()];
            for &(r, c) in boxes {
                let ri = rows.binary_search(&r).unwrap();
                let ci = cols.binary_search(&c).unwrap();
                grid[rp[ri]].insert(cp[ci] as u32 + 1);
            }
            as_skew(&grid).is_some()
        })
    })
}

/// Solves `A x = rhs` exactly for the columns in `support`; `None` if those
/// columns are dependent or the system is inconsistent.
fn solve_support(a: &[Vec<BigRational>], rhs: &[BigRational], support: &[usize]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let k = support.len();
    let mut m: Vec<Vec<BigRational>> =
        (0..rows).map(|r| support.iter().map(|&c| a[r][c].clone()).chain([rhs[r].clone()]).collect()).collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let pr = (pivot_row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, pr);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let prow = m[pivot_row].clone();
                for (x, y) in m[r].iter_mut().zip(prow) {
                    *x -= &f * y;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| m[c][k].clone()).collect())
}

fn rank(a: &[Vec<BigRational>]) -> usize {
    let mut m = a.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let prow = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(prow) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Vertices of `{μ ≥ 0 : Σμ = 1, ⟨T_p, μ⟩ = 0 ∀p}`, as basic feasible solutions.
pub fn toggle_symmetric_vertices(gl: &GammaLabeling) -> Vec<Vec<BigRational>> {
    let n = gl.len();
    let mut a = vec![vec![BigRational::one(); n]];
    for &p in gl.irreducibles() {
        a.push(gl.t(p).unwrap().values().to_vec());
    }
    let mut rhs = vec![BigRational::zero(); a.len()];
    rhs[0] = BigRational::one();
    let r = rank(&a);
    let mut vertices: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    let mut support = Vec::new();
    fn rec(
        start: usize,
        max: usize,
        n: usize,
        a: &[Vec<BigRational>],
        rhs: &[BigRational],
        support: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<BigRational>>,
    ) {
        if !support.is_empty() {
            // dependent columns never become independent again
            let cols: Vec<Vec<BigRational>> =
                a.iter().map(|row| support.iter().map(|&c| row[c].clone()).collect()).collect();
            if rank(&cols) < support.len() {
                return;
            }
            if let Some(x) = solve_support(a, rhs, support) {
                if x.iter().all(Signed::is_positive) {
                    let mut mu = vec![BigRational::zero(); n];
                    for (&c, v) in support.iter().zip(x) {
                        mu[c] = v;
                    }
                    out.insert(mu);
                }
            }
        }
        if support.len() == max {
            return;
        }
        for c in start..n {
            support.push(c);
            rec(c + 1, max, n, a, rhs, support, out);
            support.pop();
        }
    }
    rec(0, r, n, &a, &rhs, &mut support, &mut vertices);
    vertices.into_iter().collect()
}

/// Literal count: for each `p`, multichains `x₀ ≤ … ≤ x_m` with some `x_t = p`.
pub fn literal_multichain_counts(g: &CoverGraph, m: usize) -> Vec<BigUint> {
    let n = g.len();
    let mut counts = vec![BigUint::zero(); n];
    let mut chain = Vec::new();
    fn rec(g: &CoverGraph, m: usize, chain: &mut Vec<usize>, counts: &mut [BigUint]) {
        if chain.len() == m + 1 {
            let set: BTreeSet<usize> = chain.iter().copied().collect();
            for p in set {
                counts[p] += 1u32;
            }
            return;
        }
        for x in 0..g.len() {
            if chain.last().is_none_or(|&y| g.leq(y, x)) {
                chain.push(x);
                rec(g, m, chain, counts);
                chain.pop();
            }
        }
    }
    rec(g, m, &mut chain, &mut counts);
    counts
}

/// `M_m(L) − M_m(L ∖ {p})` with `M_m(P)` the number of multichains of length `m` in `P`.
pub fn multichain_difference_counts(g: &CoverGraph, m: usize) -> Vec<BigUint> {
    let n = g.len();
    let total = |skip: Option<usize>| -> BigUint {
        // ways[x] = multichains of current length ending at x
        let allowed = |x: usize| Some(x) != skip;
        let mut ways: Vec<BigUint> = (0..n).map(|x| if allowed(x) { BigUint::one() } else { BigUint::zero() }).collect();
        for _ in 0..m {
            ways = (0..n)
                .map(|x| {
                    if !allowed(x) {
                        return BigUint::zero();
                    }
                    (0..n).filter(|&y| g.leq(y, x)).map(|y| &ways[y]).sum()
                })
                .collect();
        }
        ways.into_iter().sum()
    };
    let all = total(None);
    (0..n).map(|p| &all - total(Some(p))).collect()
}

/// An order-and-cover preserving bijection between two bounded posets, found by
/// backtracking in topological order.
pub fn find_isomorphism(a: &CoverGraph, b: &CoverGraph) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return None;
    }
    let order = a.topo_order().to_vec();
    let sig = |g: &CoverGraph, x: usize| (g.down(x).len(), g.up(x).len());
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    fn rec(
        k: usize,
        order: &[usize],
        a: &CoverGraph,
        b: &CoverGraph,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sig: &dyn Fn(&CoverGraph, usize) -> (usize, usize),
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        let images: BTreeSet<usize> = a.down(x).iter().map(|&y| map[y]).collect();
        let candidates: Vec<usize> = match a.down(x).first() {
            None => vec![b.bottom()],
            Some(&y) => b.up(map[y]).to_vec(),
        };
        for c in candidates {
            if used[c] || sig(b, c) != sig(a, x) {
                continue;
            }
            if b.down(c).iter().copied().collect::<BTreeSet<_>>() != images {
                continue;
            }
            map[x] = c;
            used[c] = true;
            if rec(k + 1, order, a, b, map, used, sig) {
                return true;
            }
            used[c] = false;
            map[x] = usize::MAX;
        }
        false
    }
    rec(0, &order, a, b, &mut map, &mut used, &sig).then_some(map)
}

/// Maximal chains by brute-force enumeration of saturated paths.
pub fn maximal_chains_brute(g: &CoverGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = vec![g.bottom()];
    fn rec(g: &CoverGraph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let x = *path.last().unwrap();
        if x == g.top() {
            out.push(path.clone());
            return;
        }
        for &y in g.up(x) {
            path.push(y);
            rec(g, path, out);
            path.pop();
        }
    }
    rec(g, &mut path, &mut out);
    out
}

/// `min{z : x ∨ z = y}` by scanning all `z`, using only the join table.
pub fn gamma_by_joins(l: &FiniteLattice, x: usize, y: usize) -> Option<usize> {
    let sols: Vec<usize> = (0..l.len()).filter(|&z| l.join(x, z) == y).collect();
    let minimal: Vec<usize> =
        sols.iter().copied().filter(|&z| sols.iter().all(|&t| t == z || !l.graph().leq(t, z))).collect();
    (minimal.len() == 1).then(|| minimal[0])
}

/// Distinct weights per element for a quick equality test.
pub fn weights_map(v: &[BigRational]) -> BTreeMap<usize, BigRational> {
    v.iter().cloned().enumerate().filter(|(_, w)| !w.is_zero()).collect()
}

fn vertex_values(gl: &GammaLabeling) -> BTreeSet<BigRational> {
    let ddeg = gl.ddeg();
    toggle_symmetric_vertices(gl)
        .into_iter()
        .map(|v| expectation(&Distribution::from_weights(v).unwrap(), &ddeg).unwrap())
        .collect()
}

/// tCDE holds exactly when `E(μ; ddeg)` is the same at every vertex of the
/// toggle-symmetric polytope.
pub fn check_against_polytope(gl: &GammaLabeling, name: &str) {
    let values = vertex_values(gl);
    assert!(!values.is_empty(), "{}: uniform-free polytope", name);
    match tcde_check(gl) {
        TcdeOutcome::Certificate(c) => {
            assert!(c.verify(gl), "{}", name);
            assert_eq!(values, BTreeSet::from([c.constant.clone()]), "{}", name);
        }
        TcdeOutcome::Witness(wit) => {
            assert!(values.len() >= 2, "{}: vertices agree on {:?}", name, values);
            assert!(gl.is_toggle_symmetric(&wit.distribution).unwrap());
            assert!(wit.distribution.weights().iter().all(|x| !x.is_negative()));
            assert_eq!(expectation(&wit.distribution, &gl.ddeg()).unwrap(), wit.expectation);
            assert_ne!(wit.expectation, wit.density, "{}", name);
        }
    }
}
