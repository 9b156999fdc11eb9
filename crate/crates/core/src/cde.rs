//! Down-degree expectation checks: CDE, tCDE with certificates or witnesses,
//! multichain scans, homomesy tables, the refined `f_k` statistics and the
//! balanced-shape census.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::lattice::{
    expectation, gamma_labeling, integer, orbits_of, rational, CoverGraph, Distribution, FiniteLattice, GammaLabeling,
    LatticeError, Statistic,
};
use crate::perm::Permutation;
use crate::shape::{is_balanced, skew_vexillary_shape, SkewShape};
use crate::weakinterval::{adjacent_pair_sign, WeakInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdeError {
    #[error("k = {k} out of range for n = {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("the interval is not all of Sₙ")]
    NotFullGroup,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Uniform versus maxchain expectation of the down-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdeReport {
    pub elements: usize,
    pub edges: usize,
    pub uniform_expectation: BigRational,
    pub maxchain_expectation: BigRational,
    pub is_cde: bool,
    pub edge_density: BigRational,
}

pub fn cde_check(g: &CoverGraph) -> CdeReport {
    let ddeg = g.ddeg();
    let uniform_expectation = expectation(&Distribution::uniform(g.len()), &ddeg).unwrap();
    let maxchain_expectation = expectation(&Distribution::maxchain(g), &ddeg).unwrap();
    let edge_density = rational(g.edge_count() as i64, g.len() as i64);
    debug_assert_eq!(edge_density, uniform_expectation);
    CdeReport {
        elements: g.len(),
        edges: g.edge_count(),
        is_cde: uniform_expectation == maxchain_expectation,
        uniform_expectation,
        maxchain_expectation,
        edge_density,
    }
}

/// `Σ a_p·T_p + c·𝟙 = ddeg` pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcdeCertificate {
    /// irreducible element index → `a_p`
    pub coeffs: BTreeMap<usize, BigRational>,
    pub constant: BigRational,
}

impl TcdeCertificate {
    /// The edge density shared by every toggle-symmetric distribution.
    pub fn density(&self) -> &BigRational {
        &self.constant
    }

    pub fn verify(&self, gl: &GammaLabeling) -> bool {
        let mut f = Statistic::constant(gl.len(), self.constant.clone());
        for (&p, a) in &self.coeffs {
            match gl.t(p) {
                Ok(t) => f.add_scaled(a, &t),
                Err(_) => return false,
            }
        }
        f == gl.ddeg()
    }
}

/// A toggle-symmetric distribution whose down-degree expectation differs from
/// the edge density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcdeWitness {
    pub distribution: Distribution,
    pub expectation: BigRational,
    pub density: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TcdeOutcome {
    Certificate(TcdeCertificate),
    Witness(TcdeWitness),
}

impl TcdeOutcome {
    pub fn certificate(&self) -> Option<&TcdeCertificate> {
        match self {
            TcdeOutcome::Certificate(c) => Some(c),
            TcdeOutcome::Witness(_) => None,
        }
    }

    pub fn is_tcde(&self) -> bool {
        matches!(self, TcdeOutcome::Certificate(_))
    }
}

type Sparse = BTreeMap<usize, BigRational>;

fn axpy(acc: &mut Sparse, f: &BigRational, x: &Sparse) {
    for (&k, v) in x {
        let e = acc.entry(k).or_insert_with(BigRational::zero);
        *e -= f * v;
        if e.is_zero() {
            acc.remove(&k);
        }
    }
}

struct Pivot {
    col: usize,
    row: Vec<BigRational>,
    rhs: BigRational,
    /// this row as a combination of element rows
    combo: Sparse,
}

/// Row reduction of the system `c + Σ a_p T_p(y) = ddeg(y)`, one equation per
/// element `y`, unknowns `(c, a_{p₁}, …)` with irreducibles in index order.
/// Dependent element rows give vectors orthogonal to `𝟙` and every `T_p`.
struct Elimination {
    pivots: Vec<Pivot>,
    null: Vec<Sparse>,
    /// first null vector `v` with `⟨ddeg, v⟩ ≠ 0`
    obstruction: Option<Sparse>,
}

impl Elimination {
    fn run(gl: &GammaLabeling, keep_null: bool) -> Self {
        let irr = gl.irreducibles();
        let k = irr.len() + 1;
        let n = gl.len();
        let mut columns: Vec<Vec<i64>> = vec![vec![0; k]; n];
        for y in 0..n {
            columns[y][0] = 1;
        }
        for (c, &p) in irr.iter().enumerate() {
            for (y, t) in gl.t_values(p).enumerate() {
                columns[y][c + 1] = t;
            }
        }
        let g = gl.graph();
        let mut el = Elimination { pivots: Vec::new(), null: Vec::new(), obstruction: None };
        for y in 0..n {
            let mut row: Vec<BigRational> = columns[y].iter().map(|&v| integer(v)).collect();
            let mut rhs = integer(g.down(y).len() as i64);
            let mut combo: Sparse = BTreeMap::new();
            combo.insert(y, BigRational::one());
            for pv in &el.pivots {
                if row[pv.col].is_zero() {
                    continue;
                }
                let f = row[pv.col].clone();
                for (r, q) in row.iter_mut().zip(&pv.row) {
                    if !q.is_zero() {
                        *r -= &f * q;
                    }
                }
                rhs -= &f * &pv.rhs;
                axpy(&mut combo, &f, &pv.combo);
            }
            match row.iter().position(|v| !v.is_zero()) {
                Some(col) => {
                    let inv = row[col].recip();
                    for v in row.iter_mut() {
                        *v *= &inv;
                    }
                    rhs *= &inv;
                    for v in combo.values_mut() {
                        *v *= &inv;
                    }
                    for pv in el.pivots.iter_mut() {
                        if pv.row[col].is_zero() {
                            continue;
                        }
                        let f = pv.row[col].clone();
                        for (r, q) in pv.row.iter_mut().zip(&row) {
                            if !q.is_zero() {
                                *r -= &f * q;
                            }
                        }
                        pv.rhs -= &f * &rhs;
                        axpy(&mut pv.combo, &f, &combo);
                    }
                    el.pivots.push(Pivot { col, row, rhs, combo });
                }
                None => {
                    if !rhs.is_zero() && el.obstruction.is_none() {
                        el.obstruction = Some(combo.clone());
                        if !keep_null {
                            return el;
                        }
                    }
                    if keep_null {
                        el.null.push(combo);
                    }
                }
            }
        }
        el
    }
}

/// Decides whether `ddeg` lies in the span of `𝟙` and the `T_p`, by exact
/// elimination. Returns a certificate, or else a witness distribution.
pub fn tcde_check(gl: &GammaLabeling) -> TcdeOutcome {
    let n = gl.len();
    let el = Elimination::run(gl, false);
    let density = rational(gl.graph().edge_count() as i64, n as i64);
    if let Some(v) = el.obstruction {
        let max = v.values().map(|x| x.abs()).max().unwrap();
        let eps = (integer(2 * n as i64) * max).recip();
        let base = rational(1, n as i64);
        let weights: Vec<BigRational> =
            (0..n).map(|y| v.get(&y).map_or_else(|| base.clone(), |x| &base + &eps * x)).collect();
        let distribution = Distribution::from_weights(weights).expect("positive weights summing to one");
        let e = expectation(&distribution, &gl.ddeg()).unwrap();
        debug_assert!(gl.is_toggle_symmetric(&distribution).unwrap());
        debug_assert_ne!(e, density);
        return TcdeOutcome::Witness(TcdeWitness { distribution, expectation: e, density });
    }
    let mut z = vec![BigRational::zero(); gl.irreducibles().len() + 1];
    for pv in &el.pivots {
        z[pv.col] = pv.rhs.clone();
    }
    let constant = z[0].clone();
    let coeffs = gl.irreducibles().iter().zip(z.into_iter().skip(1)).map(|(&p, a)| (p, a)).collect();
    let cert = TcdeCertificate { coeffs, constant };
    assert!(cert.verify(gl), "certificate must reproduce ddeg");
    assert_eq!(cert.constant, density, "uniform is toggle-symmetric");
    TcdeOutcome::Certificate(cert)
}

/// γ-labels a lattice, then runs [`tcde_check`].
pub fn tcde_check_lattice(l: &FiniteLattice) -> Result<TcdeOutcome, LatticeError> {
    Ok(tcde_check(&gamma_labeling(l)?))
}

/// Random points of the toggle-symmetric polytope around the uniform distribution.
#[derive(Clone, Debug)]
pub struct ToggleSymmetricSampler {
    n: usize,
    basis: Vec<Sparse>,
}

impl ToggleSymmetricSampler {
    pub fn new(gl: &GammaLabeling) -> Self {
        ToggleSymmetricSampler { n: gl.len(), basis: Elimination::run(gl, true).null }
    }

    /// Dimension of the affine space of toggle-symmetric signed measures of mass one.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Basis of the directions orthogonal to `𝟙` and every `T_p`.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.basis
            .iter()
            .map(|v| (0..self.n).map(|y| v.get(&y).cloned().unwrap_or_else(BigRational::zero)).collect())
            .collect()
    }

    /// Uniform plus a random small combination of up to eight basis directions,
    /// scaled to keep every weight positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Distribution {
        let n = self.n;
        if self.basis.is_empty() {
            return Distribution::uniform(n);
        }
        let mut dir: Sparse = BTreeMap::new();
        for _ in 0..rng.random_range(1..=8usize) {
            let v = &self.basis[rng.random_range(0..self.basis.len())];
            let c = rng.random_range(1..=3i64) * if rng.random_bool(0.5) { 1 } else { -1 };
            axpy(&mut dir, &integer(-c), v);
        }
        let base = rational(1, n as i64);
        let Some(max) = dir.values().map(|x| x.abs()).max() else {
            return Distribution::uniform(n);
        };
        let t = rational(rng.random_range(1..=9), 10) / (integer(n as i64) * max);
        let weights = (0..n).map(|y| dir.get(&y).map_or_else(|| base.clone(), |x| &base + &t * x)).collect();
        Distribution::from_weights(weights).expect("positive weights summing to one")
    }
}

/// `E(multichain(m); ddeg)` for `m = 0..=m_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McdeScan {
    pub values: Vec<BigRational>,
    /// first `m` whose value differs from `m = 0`
    pub first_difference: Option<usize>,
}

impl McdeScan {
    pub fn is_constant(&self) -> bool {
        self.first_difference.is_none()
    }
}

pub fn mcde_scan(g: &CoverGraph, m_max: usize) -> McdeScan {
    let ddeg = g.ddeg();
    let values: Vec<BigRational> =
        (0..=m_max).map(|m| expectation(&Distribution::multichain(g, m), &ddeg).unwrap()).collect();
    let first_difference = values.iter().position(|v| *v != values[0]);
    McdeScan { values, first_difference }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitAverage {
    pub representative: usize,
    pub size: usize,
    pub average: BigRational,
}

/// Average of `f` on each orbit.
pub fn orbit_averages(orbits: &[Vec<usize>], f: &Statistic) -> Vec<OrbitAverage> {
    orbits
        .iter()
        .map(|o| {
            let total: BigRational = o.iter().map(|&y| f.get(y)).sum();
            OrbitAverage { representative: o[0], size: o.len(), average: total / integer(o.len() as i64) }
        })
        .collect()
}

/// Per-orbit averages of `f` under rowmotion.
pub fn homomesy_check(gl: &GammaLabeling, f: &Statistic) -> Result<Vec<OrbitAverage>, LatticeError> {
    if f.len() != gl.len() {
        return Err(LatticeError::DimensionMismatch { expected: gl.len(), found: f.len() });
    }
    Ok(orbit_averages(&gl.rowmotion_orbits()?, f))
}

/// The common average, if all orbits share one.
pub fn common_average(averages: &[OrbitAverage]) -> Option<BigRational> {
    let first = averages.first()?;
    averages.iter().all(|o| o.average == first.average).then(|| first.average.clone())
}

fn check_full(full: &WeakInterval) -> Result<usize, CdeError> {
    let n = full.w().n();
    if *full.w() != Permutation::longest(n) {
        return Err(CdeError::NotFullGroup);
    }
    Ok(n)
}

/// `f_k = Σ_{j≤k} T⁻_{(j,k+1)} + Σ_{j>k} T⁻_{(k,j)}` on `Sₙ`.
pub fn refined_statistic(full: &WeakInterval, k: usize) -> Result<Statistic, CdeError> {
    let n = check_full(full)?;
    if !(1 <= k && k < n) {
        return Err(CdeError::KOutOfRange { k, n });
    }
    let pairs: Vec<(usize, usize)> = (1..=k).map(|j| (j, k + 1)).chain((k + 1..=n).map(|j| (k, j))).collect();
    Ok(Statistic::from_integers(
        full.elements().iter().map(|u| pairs.iter().filter(|&&(i, j)| adjacent_pair_sign(u, i, j) == -1).count() as i64),
    ))
}

/// Outcome of the refined-statistic checks on `Sₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedReport {
    pub n: usize,
    /// `E(uniform; f_k)` for `k = 1..n−1`
    pub uniform: Vec<BigRational>,
    pub sum_is_twice_ddeg: bool,
    pub orbits: usize,
    /// `(k, orbit representative)` where an orbit average of `f_k` is not 1
    pub orbit_failures: Vec<(usize, usize)>,
    /// `(k, orbit representative)` where the two counts differ
    pub set_counting_failures: Vec<(usize, usize)>,
}

impl RefinedReport {
    pub fn holds(&self) -> bool {
        self.sum_is_twice_ddeg
            && self.uniform.iter().all(One::is_one)
            && self.orbit_failures.is_empty()
            && self.set_counting_failures.is_empty()
    }
}

/// `w(w⁻¹(k)−1) > k` and `w(w⁻¹(k+1)+1) > k+1`, with `w(0) = 0` and `w(n+1) = n+1`.
pub fn set_counting_sides(u: &Permutation, k: usize) -> (bool, bool) {
    let n = u.n();
    let inv = u.inverse();
    let at = |i: usize| if i == 0 { 0 } else if i == n + 1 { n + 1 } else { u.at(i) };
    (at(inv.at(k) - 1) > k, at(inv.at(k + 1) + 1) > k + 1)
}

pub fn verify_refined(n: usize) -> Result<RefinedReport, CdeError> {
    let full = WeakInterval::new(&Permutation::longest(n));
    let gl = full.gamma();
    let orbits = gl.rowmotion_orbits()?;
    let ddeg = gl.ddeg();
    let mut sum = Statistic::zero(full.len());
    let mut report = RefinedReport {
        n,
        uniform: Vec::new(),
        sum_is_twice_ddeg: false,
        orbits: orbits.len(),
        orbit_failures: Vec::new(),
        set_counting_failures: Vec::new(),
    };
    for k in 1..n {
        let f = refined_statistic(&full, k)?;
        sum = sum.plus(&f);
        report.uniform.push(expectation(&Distribution::uniform(full.len()), &f)?);
        for o in orbit_averages(&orbits, &f) {
            if !o.average.is_one() {
                report.orbit_failures.push((k, o.representative));
            }
        }
        for o in &orbits {
            let (mut left, mut right) = (0, 0);
            for &y in o {
                let (l, r) = set_counting_sides(full.element(y), k);
                left += l as usize;
                right += r as usize;
            }
            if left != right {
                report.set_counting_failures.push((k, o[0]));
            }
        }
    }
    report.sum_is_twice_ddeg = sum == ddeg.scaled(&integer(2));
    Ok(report)
}

/// One skew vexillary `w` of a connected balanced shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremRecord {
    pub w: Permutation,
    pub shape: SkewShape,
    pub a: u32,
    pub b: u32,
    pub elements: usize,
    pub edges: usize,
    pub density: BigRational,
    /// `ab/(a+b)`
    pub expected: BigRational,
    /// certificate constant, if tCDE
    pub tcde: Option<BigRational>,
    pub cde: bool,
}

impl TheoremRecord {
    pub fn holds(&self) -> bool {
        self.cde && self.density == self.expected && self.tcde.as_ref() == Some(&self.expected)
    }
}

/// The shape of `w` when it is skew vexillary of a nonempty connected balanced shape.
pub fn balanced_shape_of(w: &Permutation) -> Option<SkewShape> {
    let shape = skew_vexillary_shape(w)?;
    (shape.size() > 0 && shape.is_connected() && is_balanced(&shape) == Ok(true)).then_some(shape)
}

pub fn theorem_instance(w: &Permutation) -> Option<TheoremRecord> {
    let shape = balanced_shape_of(w)?;
    let (a, b) = shape.dims();
    let iv = WeakInterval::new(w);
    let report = cde_check(iv.graph());
    let tcde = tcde_check(iv.gamma()).certificate().map(|c| c.constant.clone());
    Some(TheoremRecord {
        w: *w,
        a,
        b,
        elements: report.elements,
        edges: report.edges,
        density: report.edge_density,
        expected: BigRational::new(BigInt::from(a * b), BigInt::from(a + b)),
        tcde,
        cde: report.is_cde,
        shape,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub n: usize,
    pub total: usize,
    pub instances: Vec<TheoremRecord>,
}

impl TheoremReport {
    pub fn violations(&self) -> impl Iterator<Item = &TheoremRecord> {
        self.instances.iter().filter(|r| !r.holds())
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Sequential run over all of `Sₙ`.
pub fn verify_main_theorem(n: usize) -> TheoremReport {
    let mut total = 0;
    let mut instances = Vec::new();
    for w in Permutation::all(n) {
        total += 1;
        instances.extend(theorem_instance(&w));
    }
    TheoremReport { n, total, instances }
}

/// Rowmotion orbits as computed from an explicit map, e.g. on order ideals.
pub fn orbits_of_map(map: &[usize]) -> Vec<Vec<usize>> {
    orbits_of(map)
}
